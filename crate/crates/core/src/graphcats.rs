//! Categories of graph operations: hom-set search in `C(P)^op` and `Tw(P)`
//! for graph operads, depth-first normal forms, and seeded random morphisms.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::Rng;

use crate::catconstruct::{
    compose2, compose3, identity2, identity3, source_of2, target_of3, Frame, ThreeLevelTree, TwoLevelTree,
};
use crate::category::{CatError, Category, Truncation};
use crate::halfedge::{GenusGraph, HalfEdge};
use crate::operads::{GraphFamily, GraphOperad, Operad, Perm, PlanarShape};

pub type GraphMorphism = TwoLevelTree<GenusGraph>;

fn edge_key(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

/// Counts of edges between vertices (or blocks) `a ≤ b`.
fn edge_counts(g: &GenusGraph, block: &dyn Fn(usize) -> usize) -> BTreeMap<(usize, usize), usize> {
    let mut out = BTreeMap::new();
    for (h, k) in g.edges() {
        *out.entry(edge_key(block(g.vertex_of(h)), block(g.vertex_of(k)))).or_insert(0) += 1;
    }
    out
}

/// All morphisms `x → y` of `C(P)^op`: ways of writing `y` as `x` with a
/// graph of the family inserted into every vertex.
pub fn cop_homs(op: &GraphOperad, x: &GenusGraph, y: &GenusGraph) -> Vec<GraphMorphism> {
    let nx = x.vertex_count();
    let ny = y.vertex_count();
    if x.leaf_count() != y.leaf_count() || ny < nx || nx == 0 {
        return Vec::new();
    }
    // y vertices carrying leaf k must sit in the block of x's leaf k
    let mut forced = vec![None; ny];
    for k in 0..y.leaf_count() {
        let v = y.vertex_of(y.leaves()[k]);
        let b = x.vertex_of(x.leaves()[k]);
        match forced[v] {
            None => forced[v] = Some(b),
            Some(c) if c != b => return Vec::new(),
            _ => {}
        }
    }
    let x_cross: BTreeMap<(usize, usize), usize> = edge_counts(x, &|v| v)
        .into_iter()
        .filter(|((a, b), _)| a != b)
        .collect();
    let mut neighbors: Vec<Vec<usize>> = vec![Vec::new(); ny];
    for (h, k) in y.edges() {
        let (u, v) = (y.vertex_of(h), y.vertex_of(k));
        if u != v {
            neighbors[u.max(v)].push(u.min(v));
        }
    }
    let mut found = BTreeSet::new();
    let mut assign = vec![0; ny];
    let mut cross: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let ctx = SearchCtx {
        op,
        x,
        y,
        forced: &forced,
        neighbors: &neighbors,
        x_cross: &x_cross,
    };
    ctx.assign_blocks(0, &mut assign, &mut cross, &mut found);
    found.into_iter().collect()
}

struct SearchCtx<'a> {
    op: &'a GraphOperad,
    x: &'a GenusGraph,
    y: &'a GenusGraph,
    forced: &'a [Option<usize>],
    neighbors: &'a [Vec<usize>],
    x_cross: &'a BTreeMap<(usize, usize), usize>,
}

impl SearchCtx<'_> {
    fn assign_blocks(
        &self,
        v: usize,
        assign: &mut Vec<usize>,
        cross: &mut BTreeMap<(usize, usize), usize>,
        found: &mut BTreeSet<GraphMorphism>,
    ) {
        let nx = self.x.vertex_count();
        if v == self.y.vertex_count() {
            let mut seen = vec![false; nx];
            assign.iter().for_each(|&b| seen[b] = true);
            if seen.iter().all(|&s| s) && cross == self.x_cross {
                self.match_half_edges(assign, found);
            }
            return;
        }
        let choices: Vec<usize> = match self.forced[v] {
            Some(b) => vec![b],
            None => (0..nx).collect(),
        };
        for b in choices {
            let mut ok = true;
            let mut added = Vec::new();
            for &u in &self.neighbors[v] {
                let c = assign[u];
                if c != b {
                    let key = edge_key(b, c);
                    let e = cross.entry(key).or_insert(0);
                    *e += 1;
                    added.push(key);
                    if *e > self.x_cross.get(&key).copied().unwrap_or(0) {
                        ok = false;
                    }
                }
            }
            if ok {
                assign[v] = b;
                self.assign_blocks(v + 1, assign, cross, found);
            }
            for key in added {
                let e = cross.get_mut(&key).unwrap();
                *e -= 1;
                if *e == 0 {
                    cross.remove(&key);
                }
            }
        }
    }

    /// Given the blocks, pairs the half-edges of `x` with boundary half-edges
    /// of the blocks in every possible way and keeps the valid results.
    fn match_half_edges(&self, assign: &[usize], found: &mut BTreeSet<GraphMorphism>) {
        let (x, y) = (self.x, self.y);
        // groups of x half-edge lists and y half-edge lists to be matched
        let mut groups: Vec<Vec<Vec<(HalfEdge, HalfEdge)>>> = Vec::new();
        let mut fixed: Vec<(HalfEdge, HalfEdge)> = Vec::new();
        for k in 0..x.leaf_count() {
            fixed.push((x.leaves()[k], y.leaves()[k]));
        }
        let mut x_by_pair: BTreeMap<(usize, usize), Vec<(HalfEdge, HalfEdge)>> = BTreeMap::new();
        for (h, k) in x.edges() {
            let (a, b) = (x.vertex_of(h), x.vertex_of(k));
            let (h, k) = if a <= b { (h, k) } else { (k, h) };
            x_by_pair.entry(edge_key(a, b)).or_default().push((h, k));
        }
        let mut y_by_pair: BTreeMap<(usize, usize), Vec<(HalfEdge, HalfEdge)>> = BTreeMap::new();
        for (h, k) in y.edges() {
            let (a, b) = (assign[y.vertex_of(h)], assign[y.vertex_of(k)]);
            let (h, k) = if a <= b { (h, k) } else { (k, h) };
            y_by_pair.entry(edge_key(a, b)).or_default().push((h, k));
        }
        for (key, xs) in &x_by_pair {
            let ys = y_by_pair.get(key).cloned().unwrap_or_default();
            let options = if key.0 != key.1 {
                pair_bijections(xs, &ys, false)
            } else {
                pair_bijections(xs, &ys, true)
            };
            if options.is_empty() {
                return;
            }
            groups.push(options);
        }
        let mut choice = vec![0; groups.len()];
        loop {
            let mut map: BTreeMap<HalfEdge, HalfEdge> = fixed.iter().copied().collect();
            for (g, &c) in groups.iter().zip(&choice) {
                map.extend(g[c].iter().copied());
            }
            if let Some(m) = self.build(assign, &map) {
                found.insert(m);
            }
            let mut i = 0;
            loop {
                if i == groups.len() {
                    return;
                }
                choice[i] += 1;
                if choice[i] < groups[i].len() {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
        }
    }

    fn build(&self, assign: &[usize], map: &BTreeMap<HalfEdge, HalfEdge>) -> Option<GraphMorphism> {
        let (x, y) = (self.x, self.y);
        let used: BTreeSet<HalfEdge> = map.values().copied().collect();
        let mut uppers = Vec::with_capacity(x.vertex_count());
        let mut labels = Vec::with_capacity(x.vertex_count());
        for l in 0..x.vertex_count() {
            let verts: Vec<usize> = (0..y.vertex_count()).filter(|&v| assign[v] == l).collect();
            let local: BTreeMap<usize, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
            let genus: Vec<u32> = verts.iter().map(|&v| y.genus(v)).collect();
            let degrees: Vec<usize> = verts.iter().map(|&v| y.degree(v)).collect();
            let at = |h: HalfEdge| (local[&y.vertex_of(h)], y.slot_of(h));
            let mut leaves = Vec::with_capacity(x.degree(l));
            for s in 0..x.degree(l) {
                let h = map.get(&x.half_edge(l, s))?;
                if assign[y.vertex_of(*h)] != l {
                    return None;
                }
                leaves.push(at(*h));
            }
            let mut edges = Vec::new();
            for (h, k) in y.edges() {
                if assign[y.vertex_of(h)] == l && assign[y.vertex_of(k)] == l && !used.contains(&h) && !used.contains(&k) {
                    edges.push((at(h), at(k)));
                }
            }
            let part = GenusGraph::from_parts(genus, &degrees, &edges, &leaves).ok()?;
            uppers.push(part);
            labels.push(verts.iter().map(|v| v + 1).collect());
        }
        let f = TwoLevelTree {
            target: x.clone(),
            uppers,
            labels,
        };
        if !f.uppers.iter().all(|q| self.op.contains(q)) {
            return None;
        }
        match source_of2(self.op, &f) {
            Ok(s) if s == *y => Some(f),
            _ => None,
        }
    }
}

/// Bijections from `xs` to `ys` (as oriented pairs); with `flip` each
/// matched pair may also be reversed.
fn pair_bijections(
    xs: &[(HalfEdge, HalfEdge)],
    ys: &[(HalfEdge, HalfEdge)],
    flip: bool,
) -> Vec<Vec<(HalfEdge, HalfEdge)>> {
    let mut out = Vec::new();
    if flip {
        // loops: choose an injective assignment into the inner edges
        let mut used = vec![false; ys.len()];
        let mut cur = Vec::new();
        fn go(
            i: usize,
            xs: &[(HalfEdge, HalfEdge)],
            ys: &[(HalfEdge, HalfEdge)],
            used: &mut Vec<bool>,
            cur: &mut Vec<(HalfEdge, HalfEdge)>,
            out: &mut Vec<Vec<(HalfEdge, HalfEdge)>>,
        ) {
            if i == xs.len() {
                out.push(cur.clone());
                return;
            }
            for j in 0..ys.len() {
                if used[j] {
                    continue;
                }
                used[j] = true;
                for (a, b) in [(ys[j].0, ys[j].1), (ys[j].1, ys[j].0)] {
                    cur.push((xs[i].0, a));
                    cur.push((xs[i].1, b));
                    go(i + 1, xs, ys, used, cur, out);
                    cur.pop();
                    cur.pop();
                }
                used[j] = false;
            }
        }
        go(0, xs, ys, &mut used, &mut cur, &mut out);
        return out;
    }
    if xs.len() != ys.len() {
        return out;
    }
    for p in Perm::all(xs.len()) {
        let mut cur = Vec::with_capacity(2 * xs.len());
        for (i, &(a, b)) in xs.iter().enumerate() {
            let (c, d) = ys[p.apply(i)];
            cur.push((a, c));
            cur.push((b, d));
        }
        out.push(cur);
    }
    out
}

/// `C(P)^op` for a graph operad, truncated by vertex count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GraphCOp {
    pub operad: GraphOperad,
}

impl Category for GraphCOp {
    type Obj = GenusGraph;
    type Mor = GraphMorphism;

    fn source(&self, f: &GraphMorphism) -> GenusGraph {
        f.target.clone()
    }
    fn target(&self, f: &GraphMorphism) -> GenusGraph {
        source_of2(&self.operad, f).expect("valid 2-level tree")
    }
    fn identity(&self, x: &GenusGraph) -> GraphMorphism {
        identity2(&self.operad, x)
    }
    fn compose(&self, g: &GraphMorphism, f: &GraphMorphism) -> Result<GraphMorphism, CatError> {
        compose2(&self.operad, f, g)
    }
    fn hom(&self, a: &GenusGraph, b: &GenusGraph) -> Vec<GraphMorphism> {
        cop_homs(&self.operad, a, b)
    }
}

// ---------------------------------------------------------------------------
// depth-first normal forms

/// Vertices are numbered in depth-first order from leaf 0.
pub fn is_dfs_ordered(x: &GenusGraph) -> bool {
    x.leaf_count() > 0
        && x
            .dfs_order(0)
            .map(|t| t.order.iter().enumerate().all(|(i, &v)| i == v))
            .unwrap_or(false)
}

/// Renumbers vertices in depth-first order and returns the isomorphism
/// (corollas inserted into every vertex) from `x` to the result.
pub fn normalize_dfs(op: &GraphOperad, x: &GenusGraph) -> Result<(GenusGraph, GraphMorphism), CatError> {
    let t = x.dfs_order(0)?;
    let mut pos = vec![0; x.vertex_count()];
    for (i, &v) in t.order.iter().enumerate() {
        pos[v] = i;
    }
    let iso = TwoLevelTree {
        target: x.clone(),
        uppers: (1..=x.vertex_count()).map(|i| op.identity(&op.input_color(x, i))).collect(),
        labels: pos.iter().map(|&p| vec![p + 1]).collect(),
    };
    let y = source_of2(op, &iso)?;
    Ok((y, iso))
}

/// Normal form in the subcategory of planar trees ordered depth-first.
pub fn normalize_d(x: &GenusGraph) -> Result<(GenusGraph, GraphMorphism), CatError> {
    normalize_dfs(&GraphOperad::new(GraphFamily::POp), x)
}

/// Normal form for rooted trees with arbitrary leaf numbering.
pub fn normalize_dprime(x: &GenusGraph) -> Result<(GenusGraph, GraphMorphism), CatError> {
    normalize_dfs(&GraphOperad::new(GraphFamily::SOp), x)
}

/// Leaf 0 is slot 0 of the first vertex, vertices are in depth-first order,
/// and every edge crossed by the traversal joins a 0-th half-edge with a
/// non-0-th one.
pub fn is_z(x: &GenusGraph) -> bool {
    if x.leaf_count() == 0 || x.vertex_count() == 0 {
        return false;
    }
    let h0 = x.leaves()[0];
    if x.vertex_of(h0) != 0 || x.slot_of(h0) != 0 || !is_dfs_ordered(x) {
        return false;
    }
    let t = x.dfs_order(0).expect("connected");
    t.tree_edges
        .iter()
        .all(|&(h, k)| (x.slot_of(h) == 0) != (x.slot_of(k) == 0))
}

/// Rotates every vertex so that the half-edge through which the traversal
/// from leaf `start` enters it becomes slot 0, numbers vertices in traversal
/// order and leaves in the order they are met. The result satisfies
/// [`is_z`] and is isomorphic to `x` by corolla insertions.
pub fn normalize_z(x: &GenusGraph, start: usize) -> Result<GenusGraph, CatError> {
    let t = x.dfs_order(start)?;
    let n = x.vertex_count();
    let mut entry = vec![0; n];
    entry[x.vertex_of(x.leaves()[start])] = x.slot_of(x.leaves()[start]);
    for &(_, k) in &t.tree_edges {
        entry[x.vertex_of(k)] = x.slot_of(k);
    }
    let mut pos = vec![0; n];
    for (i, &v) in t.order.iter().enumerate() {
        pos[v] = i;
    }
    let at = |h: HalfEdge| {
        let v = x.vertex_of(h);
        let d = x.degree(v);
        (pos[v], (x.slot_of(h) + d - entry[v]) % d)
    };
    let mut genus = vec![0; n];
    let mut degrees = vec![0; n];
    for v in 0..n {
        genus[pos[v]] = x.genus(v);
        degrees[pos[v]] = x.degree(v);
    }
    let edges: Vec<_> = x.edges().map(|(h, k)| (at(h), at(k))).collect();
    let leaves: Vec<_> = t.leaf_order.iter().map(|&i| at(x.leaves()[i])).collect();
    Ok(GenusGraph::from_parts(genus, &degrees, &edges, &leaves)?)
}

/// The leaves of each inserted part are numbered in the depth-first order
/// of the part starting from its leaf 0.
pub fn is_z_morphism(f: &GraphMorphism) -> bool {
    f.uppers.iter().all(|q| {
        q.dfs_order(0)
            .map(|t| t.leaf_order.iter().enumerate().all(|(i, &l)| i == l))
            .unwrap_or(false)
    })
}

// ---------------------------------------------------------------------------
// Tw for tree operads

/// Connected vertex subsets of `g`, as sorted lists.
pub fn connected_subsets(g: &GenusGraph) -> Vec<Vec<usize>> {
    let n = g.vertex_count();
    let mut adj = vec![0u64; n];
    for (h, k) in g.edges() {
        let (u, v) = (g.vertex_of(h), g.vertex_of(k));
        adj[u] |= 1 << v;
        adj[v] |= 1 << u;
    }
    let mut out = Vec::new();
    for mask in 1u64..(1 << n) {
        let start = mask.trailing_zeros() as usize;
        let mut seen = 1u64 << start;
        let mut frontier = seen;
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let new = adj[v] & mask & !seen;
            seen |= new;
            frontier |= new;
        }
        if seen == mask {
            out.push((0..n).filter(|&v| mask >> v & 1 == 1).collect());
        }
    }
    out
}

/// All morphisms `p → t` in `Tw(P)` for a tree family.
pub fn tw_graph_homs(op: &GraphOperad, p: &GenusGraph, t: &GenusGraph) -> Vec<ThreeLevelTree<GenusGraph>> {
    let mut out = BTreeSet::new();
    let d = p.leaf_count();
    for s in connected_subsets(t) {
        if s.len() < p.vertex_count() {
            continue;
        }
        let in_s = |v: usize| s.binary_search(&v).is_ok();
        let boundary: Vec<HalfEdge> = s
            .iter()
            .flat_map(|&v| t.half_edges_at(v))
            .filter(|&h| t.partner(h).map_or(true, |k| !in_s(t.vertex_of(k))))
            .collect();
        if boundary.len() != d {
            continue;
        }
        let outside: Vec<usize> = (0..t.vertex_count()).filter(|&v| !in_s(v)).collect();
        for beta in Perm::all(d) {
            let order: Vec<HalfEdge> = (0..d).map(|k| boundary[beta.apply(k)]).collect();
            let Some((w, lower)) = split_region(t, &s, &outside, &order) else {
                continue;
            };
            if !op.contains(&lower) || !op.contains(&w) {
                continue;
            }
            for tree in cop_homs(op, p, &w) {
                let frame = Frame {
                    lower: lower.clone(),
                    uppers: tree.uppers,
                    upper_labels: tree
                        .labels
                        .iter()
                        .map(|b| b.iter().map(|&l| s[l - 1] + 1).collect())
                        .collect(),
                    lower_labels: outside.iter().map(|v| v + 1).collect(),
                };
                let f = ThreeLevelTree {
                    middle: p.clone(),
                    frame,
                };
                if target_of3(op, &f).as_ref() == Ok(t) {
                    out.insert(f);
                }
            }
        }
    }
    out.into_iter().collect()
}

/// Cuts `t` into the region on `s` (leaves ordered by `order`) and the graph
/// with that region contracted to its first vertex.
fn split_region(t: &GenusGraph, s: &[usize], outside: &[usize], order: &[HalfEdge]) -> Option<(GenusGraph, GenusGraph)> {
    let local_s: BTreeMap<usize, usize> = s.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let at_s = |h: HalfEdge| (local_s[&t.vertex_of(h)], t.slot_of(h));
    let mut w_edges = Vec::new();
    for (h, k) in t.edges() {
        if local_s.contains_key(&t.vertex_of(h)) && local_s.contains_key(&t.vertex_of(k)) {
            w_edges.push((at_s(h), at_s(k)));
        }
    }
    let w = GenusGraph::from_parts(
        s.iter().map(|&v| t.genus(v)).collect(),
        &s.iter().map(|&v| t.degree(v)).collect::<Vec<_>>(),
        &w_edges,
        &order.iter().map(|&h| at_s(h)).collect::<Vec<_>>(),
    )
    .ok()?;
    let local_o: BTreeMap<usize, usize> = outside.iter().enumerate().map(|(i, &v)| (v, i + 1)).collect();
    let slot_in_lower = |h: HalfEdge| -> (usize, usize) {
        let v = t.vertex_of(h);
        match local_o.get(&v) {
            Some(&i) => (i, t.slot_of(h)),
            None => (0, order.iter().position(|&x| x == h).expect("boundary half-edge")),
        }
    };
    let mut edges = Vec::new();
    for (h, k) in t.edges() {
        let (a, b) = (t.vertex_of(h), t.vertex_of(k));
        if local_s.contains_key(&a) && local_s.contains_key(&b) {
            continue;
        }
        edges.push((slot_in_lower(h), slot_in_lower(k)));
    }
    let leaves: Vec<(usize, usize)> = t.leaves().iter().map(|&h| slot_in_lower(h)).collect();
    let mut degrees = vec![order.len()];
    degrees.extend(outside.iter().map(|&v| t.degree(v)));
    let mut genus = vec![w.total_genus()];
    genus.extend(outside.iter().map(|&v| t.genus(v)));
    let lower = GenusGraph::from_parts(genus, &degrees, &edges, &leaves).ok()?;
    Some((w, lower))
}

/// `Tw(P)` for a tree family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GraphTw {
    pub operad: GraphOperad,
}

impl Category for GraphTw {
    type Obj = GenusGraph;
    type Mor = ThreeLevelTree<GenusGraph>;

    fn source(&self, f: &Self::Mor) -> GenusGraph {
        f.middle.clone()
    }
    fn target(&self, f: &Self::Mor) -> GenusGraph {
        target_of3(&self.operad, f).expect("valid 3-level tree")
    }
    fn identity(&self, x: &GenusGraph) -> Self::Mor {
        identity3(&self.operad, x)
    }
    fn compose(&self, g: &Self::Mor, f: &Self::Mor) -> Result<Self::Mor, CatError> {
        compose3(&self.operad, g, f)
    }
    fn hom(&self, a: &GenusGraph, b: &GenusGraph) -> Vec<Self::Mor> {
        tw_graph_homs(&self.operad, a, b)
    }
}

/// A fixed finite list of objects of a category.
#[derive(Debug, Clone)]
pub struct Listed<C: Category> {
    pub cat: C,
    pub objects: Vec<C::Obj>,
}

impl<C: Category> Category for Listed<C> {
    type Obj = C::Obj;
    type Mor = C::Mor;
    fn source(&self, f: &C::Mor) -> C::Obj {
        self.cat.source(f)
    }
    fn target(&self, f: &C::Mor) -> C::Obj {
        self.cat.target(f)
    }
    fn identity(&self, x: &C::Obj) -> C::Mor {
        self.cat.identity(x)
    }
    fn compose(&self, g: &C::Mor, f: &C::Mor) -> Result<C::Mor, CatError> {
        self.cat.compose(g, f)
    }
    fn hom(&self, a: &C::Obj, b: &C::Obj) -> Vec<C::Mor> {
        self.cat.hom(a, b)
    }
}

impl<C: Category> Truncation for Listed<C> {
    fn objects(&self) -> Vec<C::Obj> {
        self.objects.clone()
    }
}

/// Planar trees with `vertices` vertices, ordered depth-first, `inputs`
/// input leaves.
pub fn d_objects(inputs: usize, vertices: usize) -> Vec<GenusGraph> {
    PlanarShape::all_with(inputs, vertices)
        .into_iter()
        .map(|s| {
            let id: Vec<usize> = (0..vertices).collect();
            s.to_graph(&id, None)
        })
        .collect()
}

// ---------------------------------------------------------------------------
// random generation

/// A random planar shape: `nodes - 1` random splits of a corolla.
pub fn random_shape<R: Rng>(rng: &mut R, inputs: usize, nodes: usize) -> PlanarShape {
    let mut s = PlanarShape::corolla(inputs);
    for _ in 1..nodes.max(1) {
        let v = rng.gen_range(0..s.node_count());
        let d = s.nodes[v].len();
        let a = rng.gen_range(0..=d);
        let b = rng.gen_range(a..=d);
        s = s.split(v, a, b);
    }
    s
}

fn random_order<R: Rng>(rng: &mut R, n: usize) -> Vec<usize> {
    let mut v: Vec<usize> = (0..n).collect();
    v.shuffle(rng);
    v
}

/// A random tree of the family with `leaves` leaves (root included) and
/// `vertices` vertices; vertex order and (for sOp) leaf numbering random.
pub fn random_tree<R: Rng>(rng: &mut R, family: GraphFamily, leaves: usize, vertices: usize) -> GenusGraph {
    let s = random_shape(rng, leaves - 1, vertices);
    let order = random_order(rng, vertices);
    match family {
        GraphFamily::POp => s.to_graph(&order, None),
        _ => {
            let lp = random_order(rng, leaves - 1);
            s.to_graph(&order, Some(&lp))
        }
    }
}

/// Random labels: a shuffle of blocks with the given sizes.
fn random_shuffle<R: Rng>(rng: &mut R, sizes: &[usize]) -> Vec<Vec<usize>> {
    let mut owners: Vec<usize> = sizes.iter().enumerate().flat_map(|(b, &k)| std::iter::repeat(b).take(k)).collect();
    owners.shuffle(rng);
    let mut blocks = vec![Vec::new(); sizes.len()];
    for (i, &b) in owners.iter().enumerate() {
        blocks[b].push(i + 1);
    }
    blocks
}

/// A random morphism out of `x` in `C(P)^op` for a tree family, adding
/// `extra` vertices in total.
pub fn random_cop_morphism<R: Rng>(rng: &mut R, family: GraphFamily, x: &GenusGraph, extra: usize) -> GraphMorphism {
    let n = x.vertex_count();
    let mut sizes = vec![1; n];
    for _ in 0..extra {
        sizes[rng.gen_range(0..n)] += 1;
    }
    let uppers: Vec<GenusGraph> = (0..n).map(|v| random_tree(rng, family, x.degree(v), sizes[v])).collect();
    TwoLevelTree {
        target: x.clone(),
        uppers,
        labels: random_shuffle(rng, &sizes),
    }
}

/// A random morphism out of `p` in `Tw(sOp)`: random uppers as above and a
/// random lower tree grown around a vertex of the right degree.
pub fn random_tw_morphism<R: Rng>(rng: &mut R, p: &GenusGraph, extra_upper: usize, extra_lower: usize) -> ThreeLevelTree<GenusGraph> {
    let family = GraphFamily::SOp;
    let op = GraphOperad::new(family);
    let f = random_cop_morphism(rng, family, p, extra_upper);
    let (c0, _) = op.output_color(p);
    let lower = random_lower(rng, c0, extra_lower);
    let sizes: Vec<usize> = f.uppers.iter().map(|q| q.vertex_count()).chain([lower.vertex_count() - 1]).collect();
    let mut labels = random_shuffle(rng, &sizes);
    let lower_labels = labels.pop().unwrap();
    ThreeLevelTree {
        middle: p.clone(),
        frame: Frame {
            lower,
            uppers: f.uppers,
            upper_labels: labels,
            lower_labels,
        },
    }
}

/// A rooted tree whose vertex 0 has degree `d`, with `extra` more vertices.
fn random_lower<R: Rng>(rng: &mut R, d: usize, extra: usize) -> GenusGraph {
    use crate::operads::Slot;
    // node 0 is the marked node; `root` tracks the current root
    let mut nodes: Vec<Vec<Slot>> = vec![vec![Slot::Leaf; d - 1]];
    let mut root = 0;
    for _ in 0..extra {
        let w = nodes.len();
        let arity = rng.gen_range(0..=2);
        let open: Vec<(usize, usize)> = nodes
            .iter()
            .enumerate()
            .flat_map(|(v, s)| s.iter().enumerate().filter(|(_, c)| **c == Slot::Leaf).map(move |(k, _)| (v, k)))
            .collect();
        if open.is_empty() || rng.gen_bool(0.3) {
            let mut slots = vec![Slot::Leaf; arity];
            slots.insert(rng.gen_range(0..=arity), Slot::Child(root));
            nodes.push(slots);
            root = w;
        } else {
            let (v, k) = open[rng.gen_range(0..open.len())];
            nodes[v][k] = Slot::Child(w);
            nodes.push(vec![Slot::Leaf; arity]);
        }
    }
    // renumber with the root first
    let n = nodes.len();
    let mut order = vec![root];
    let mut i = 0;
    while i < order.len() {
        for s in &nodes[order[i]] {
            if let Slot::Child(c) = s {
                order.push(*c);
            }
        }
        i += 1;
    }
    let mut id = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        id[v] = i;
    }
    let shape = PlanarShape {
        nodes: order
            .iter()
            .map(|&v| {
                nodes[v]
                    .iter()
                    .map(|s| match s {
                        Slot::Leaf => Slot::Leaf,
                        Slot::Child(c) => Slot::Child(id[*c]),
                    })
                    .collect()
            })
            .collect(),
    };
    let mut rest: Vec<usize> = (0..n).filter(|&x| x != id[0]).collect();
    rest.shuffle(rng);
    let mut pos = vec![0; n];
    for (i, &x) in rest.iter().enumerate() {
        pos[x] = i + 1;
    }
    let lp = random_order(rng, shape.input_count());
    shape.to_graph(&pos, Some(&lp))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::law_violations;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn cop_homs_recover_random_morphisms() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let op = GraphOperad::new(GraphFamily::POp);
        for _ in 0..30 {
            let x = random_tree(&mut rng, GraphFamily::POp, 3, 2);
            let f = random_cop_morphism(&mut rng, GraphFamily::POp, &x, 2);
            let y = source_of2(&op, &f).unwrap();
            let homs = cop_homs(&op, &x, &y);
            assert!(homs.contains(&f), "{f:?}");
        }
    }

    #[test]
    fn theta_homs() {
        let op = GraphOperad::new(GraphFamily::MOp);
        // one vertex with a loop and two leaves
        let x = GenusGraph::from_parts(vec![0], &[4], &[((0, 1), (0, 2))], &[(0, 0), (0, 3)]).unwrap();
        let homs = cop_homs(&op, &x, &x);
        assert!(homs.contains(&identity2(&op, &x)));
        for f in &homs {
            assert_eq!(source_of2(&op, f).unwrap(), x);
        }
    }

    #[test]
    fn normal_forms() {
        let s = PlanarShape::corolla(2).split(0, 0, 1);
        let x = s.to_graph(&[1, 0], None);
        assert!(!is_dfs_ordered(&x));
        let (y, iso) = normalize_d(&x).unwrap();
        assert!(is_dfs_ordered(&y));
        assert_eq!(y, s.to_graph(&[0, 1], None));
        assert_eq!(source_of2(&GraphOperad::new(GraphFamily::POp), &iso).unwrap(), y);
        let (z, _) = normalize_d(&y).unwrap();
        assert_eq!(z, y);
        assert!(is_z(&y));
        // an edge joining two 0-th half-edges
        let bad = GenusGraph::from_parts(vec![0, 0], &[2, 2], &[((0, 1), (1, 0))], &[(0, 0), (1, 1)]).unwrap();
        assert!(is_z(&bad));
        let bad2 = GenusGraph::from_parts(vec![0, 0], &[2, 2], &[((0, 0), (1, 0))], &[(0, 1), (1, 1)]).unwrap();
        assert!(!is_z(&bad2));
        let z = normalize_z(&bad2, 1).unwrap();
        assert!(is_z(&z));
        assert!(crate::halfedge::is_isomorphic(&z.permute_leaves(&[1, 0]), &bad2));
    }

    #[test]
    fn tw_sop_homs_contain_random_morphisms() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let op = GraphOperad::new(GraphFamily::SOp);
        for _ in 0..20 {
            let p = random_tree(&mut rng, GraphFamily::SOp, 3, 1);
            let f = random_tw_morphism(&mut rng, &p, 1, 1);
            let t = target_of3(&op, &f).unwrap();
            assert!(op.contains(&t));
            assert!(tw_graph_homs(&op, &p, &t).contains(&f));
        }
    }

    #[test]
    fn d_is_a_category() {
        let op = GraphOperad::new(GraphFamily::POp);
        let objs: Vec<GenusGraph> = (1..=3).flat_map(|v| d_objects(2, v)).collect();
        let cat = Listed {
            cat: GraphCOp { operad: op },
            objects: objs,
        };
        let morphs = cat.all_morphisms();
        assert!(morphs.len() > cat.objects.len());
        assert_eq!(law_violations(&cat, &morphs), 0);
    }
}
