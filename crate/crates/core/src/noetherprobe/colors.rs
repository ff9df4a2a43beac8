//! Colored graphs over the depth-first normal-form subcategory of
//! `C(mOp_(g,n))^op`, the lift of colorings along its morphisms, and an
//! enumerator for small objects and morphisms of that subcategory.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::catconstruct::{source_of2, TwoLevelTree};
use crate::graphcats::{is_z, is_z_morphism, normalize_z, GraphMorphism};
use crate::halfedge::{GenusGraph, HalfEdge, UnionFind};
use crate::operads::{GraphFamily, GraphOperad, Perm};

pub const DEFAULT_CONSTANT: u32 = 9;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ColorError {
    #[error("invalid coloring: {0}")]
    InvalidColoring(String),
    #[error("no compatible coloring: {0}")]
    NoLift(String),
}

/// A graph with one color per half-edge.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColoredGraph {
    pub graph: GenusGraph,
    pub col: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColorViolation {
    /// The two halves of an edge differ.
    EdgeEnds(HalfEdge, HalfEdge),
    /// A pruned edge has a non-zero color.
    PrunedNonZero(HalfEdge),
    /// A surviving edge has color 0.
    KeptZero(HalfEdge),
    /// Edges along a chain of unary genus-0 vertices differ.
    ChainNotMonochromatic(HalfEdge, HalfEdge),
    /// Two distinct edges or leaves of the contracted graph share a color.
    Clash(HalfEdge, HalfEdge),
    /// A color exceeds the bound.
    AboveBound(HalfEdge, u32),
}

/// `constant · (Σ vertex genera + first Betti number + leaves)`.
pub fn color_bound(g: &GenusGraph, constant: u32) -> u32 {
    constant * (g.vertex_genus_sum() + g.betti() as u32 + g.leaf_count() as u32)
}

/// The pruned edges and the color classes of the contracted graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Skeleton {
    /// Half-edges of edges removed by pruning degree-1 genus-0 vertices.
    pub pruned: Vec<HalfEdge>,
    /// Each class must be monochromatic; distinct classes need distinct
    /// colors. Surviving edges along a chain of degree-2 genus-0 vertices
    /// form one class, every leaf its own class.
    pub classes: Vec<Vec<HalfEdge>>,
}

pub fn skeleton(g: &GenusGraph) -> Skeleton {
    let n = g.vertex_count();
    let mut alive = vec![true; n];
    let mut removed = vec![false; g.half_edge_count()];
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut left = n;
    loop {
        let pick = (0..n).find(|&v| {
            alive[v]
                && left > 1
                && deg[v] == 1
                && g.genus(v) == 0
                && g.half_edges_at(v).any(|h| !removed[h] && g.partner(h).is_some())
        });
        let Some(v) = pick else { break };
        let h = g.half_edges_at(v).find(|&h| !removed[h]).unwrap();
        let k = g.partner(h).unwrap();
        removed[h] = true;
        removed[k] = true;
        deg[g.vertex_of(k)] -= 1;
        alive[v] = false;
        left -= 1;
    }
    let edges: Vec<(HalfEdge, HalfEdge)> = g.edges().filter(|(h, _)| !removed[*h]).collect();
    let edge_of: BTreeMap<HalfEdge, usize> = edges
        .iter()
        .enumerate()
        .flat_map(|(i, &(h, k))| [(h, i), (k, i)])
        .collect();
    let mut uf = UnionFind::new(edges.len());
    for v in (0..n).filter(|&v| alive[v] && deg[v] == 2 && g.genus(v) == 0) {
        let hs: Vec<HalfEdge> = g.half_edges_at(v).filter(|&h| !removed[h]).collect();
        if let (Some(&a), Some(&b)) = (edge_of.get(&hs[0]), edge_of.get(&hs[1])) {
            uf.union(a, b);
        }
    }
    let mut by_root: BTreeMap<usize, Vec<HalfEdge>> = BTreeMap::new();
    for (i, &(h, k)) in edges.iter().enumerate() {
        by_root.entry(uf.find(i)).or_default().extend([h, k]);
    }
    let mut classes: Vec<Vec<HalfEdge>> = g.leaves().iter().map(|&h| vec![h]).collect();
    classes.extend(by_root.into_values());
    Skeleton {
        pruned: (0..g.half_edge_count()).filter(|&h| removed[h]).collect(),
        classes,
    }
}

/// All conditions on a coloring, with the bound `constant · (…)`.
pub fn color_violations(cg: &ColoredGraph, constant: u32) -> Vec<ColorViolation> {
    let g = &cg.graph;
    let col = &cg.col;
    let mut out = Vec::new();
    if col.len() != g.half_edge_count() {
        return vec![ColorViolation::AboveBound(col.len(), 0)];
    }
    for (h, k) in g.edges() {
        if col[h] != col[k] {
            out.push(ColorViolation::EdgeEnds(h, k));
        }
    }
    let sk = skeleton(g);
    for &h in &sk.pruned {
        if col[h] != 0 {
            out.push(ColorViolation::PrunedNonZero(h));
        }
    }
    let mut seen: BTreeMap<u32, HalfEdge> = BTreeMap::new();
    for class in &sk.classes {
        let c = col[class[0]];
        for &h in &class[1..] {
            if col[h] != c {
                out.push(ColorViolation::ChainNotMonochromatic(class[0], h));
            }
        }
        let is_edge = g.partner(class[0]).is_some();
        if is_edge && c == 0 {
            out.push(ColorViolation::KeptZero(class[0]));
        }
        if let Some(&other) = seen.get(&c) {
            out.push(ColorViolation::Clash(other, class[0]));
        } else {
            seen.insert(c, class[0]);
        }
    }
    let bound = color_bound(g, constant);
    for (h, &c) in col.iter().enumerate() {
        if c > bound {
            out.push(ColorViolation::AboveBound(h, c));
        }
    }
    out
}

pub fn color_validate(cg: &ColoredGraph, constant: u32) -> Result<(), ColorError> {
    match color_violations(cg, constant).first() {
        None => Ok(()),
        Some(v) => Err(ColorError::InvalidColoring(format!("{v:?}"))),
    }
}

/// Colors the classes `1, 2, …` in order and pruned edges 0.
pub fn greedy_coloring(g: &GenusGraph) -> Vec<u32> {
    let sk = skeleton(g);
    let mut col = vec![0; g.half_edge_count()];
    for (i, class) in sk.classes.iter().enumerate() {
        for &h in class {
            col[h] = i as u32 + 1;
        }
    }
    col
}

/// For each half-edge of the source of `f`, the half-edge of the target it
/// becomes.
pub fn half_edge_images(f: &GraphMorphism) -> Vec<HalfEdge> {
    let p = &f.target;
    let mut out = vec![0; p.half_edge_count()];
    let target = source_of2(&GraphOperad::new(GraphFamily::MOpGenus), f).expect("valid morphism");
    for l in 0..p.vertex_count() {
        let part = &f.uppers[l];
        for s in 0..p.degree(l) {
            let h = part.leaves()[s];
            let v = f.labels[l][part.vertex_of(h)] - 1;
            out[p.half_edge(l, s)] = target.half_edge(v, part.slot_of(h));
        }
    }
    out
}

/// The coloring of the source of `f` compatible with `target_col`.
pub fn color_lift(f: &GraphMorphism, target_col: &[u32], constant: u32) -> Result<Vec<u32>, ColorError> {
    let col: Vec<u32> = half_edge_images(f).iter().map(|&h| target_col[h]).collect();
    let cg = ColoredGraph {
        graph: f.target.clone(),
        col,
    };
    color_validate(&cg, constant).map_err(|e| ColorError::NoLift(e.to_string()))?;
    Ok(cg.col)
}

/// Number of valid colorings of the source of `f` (colors up to the bound)
/// compatible with `target_col`. Valid colorings are constant on classes,
/// zero on pruned edges and injective on classes, so the search runs over
/// class colorings.
pub fn compatible_colorings(f: &GraphMorphism, target_col: &[u32], constant: u32) -> usize {
    let p = &f.target;
    let img = half_edge_images(f);
    let bound = color_bound(p, constant);
    let sk = skeleton(p);
    if sk.pruned.iter().any(|&h| target_col[img[h]] != 0) {
        return 0;
    }
    let options: Vec<Vec<u32>> = sk
        .classes
        .iter()
        .map(|class| {
            let lo = u32::from(p.partner(class[0]).is_some());
            (lo..=bound)
                .filter(|&c| class.iter().all(|&h| target_col[img[h]] == c))
                .collect()
        })
        .collect();
    fn count(i: usize, options: &[Vec<u32>], used: &mut BTreeSet<u32>) -> usize {
        if i == options.len() {
            return 1;
        }
        let mut total = 0;
        for &c in &options[i] {
            if used.insert(c) {
                total += count(i + 1, options, used);
                used.remove(&c);
            }
        }
        total
    }
    count(0, &options, &mut BTreeSet::new())
}

// ---------------------------------------------------------------------------
// enumeration of small normal-form graphs

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Port {
    Leaf(usize),
    End(usize, usize),
}

/// A graph without slot order: vertex genera, edges, leaf positions.
#[derive(Debug, Clone)]
struct Multigraph {
    genus: Vec<u32>,
    edges: Vec<(usize, usize)>,
    leaf_at: Vec<usize>,
}

impl Multigraph {
    fn ports(&self) -> Vec<Vec<Port>> {
        let mut ports = vec![Vec::new(); self.genus.len()];
        for (i, &v) in self.leaf_at.iter().enumerate() {
            ports[v].push(Port::Leaf(i));
        }
        for (e, &(a, b)) in self.edges.iter().enumerate() {
            ports[a].push(Port::End(e, 0));
            ports[b].push(Port::End(e, 1));
        }
        ports
    }

    fn connected(&self) -> bool {
        let mut uf = UnionFind::new(self.genus.len());
        for &(a, b) in &self.edges {
            uf.union(a, b);
        }
        uf.count() == 1
    }

    /// Every normal form reachable by choosing a cyclic order at each vertex
    /// and a starting leaf.
    fn z_forms(&self, out: &mut BTreeSet<GenusGraph>) {
        let ports = self.ports();
        let n = ports.len();
        let cyclic: Vec<Vec<Vec<Port>>> = ports
            .iter()
            .map(|ps| {
                if ps.is_empty() {
                    return vec![Vec::new()];
                }
                Perm::all(ps.len() - 1)
                    .into_iter()
                    .map(|p| {
                        let mut v = vec![ps[0]];
                        v.extend((0..ps.len() - 1).map(|i| ps[1 + p.apply(i)]));
                        v
                    })
                    .collect()
            })
            .collect();
        let mut choice = vec![0; n];
        loop {
            let mut slot_of: BTreeMap<(usize, usize), (usize, usize)> = BTreeMap::new();
            let mut leaves = vec![(0, 0); self.leaf_at.len()];
            for v in 0..n {
                for (s, port) in cyclic[v][choice[v]].iter().enumerate() {
                    match *port {
                        Port::Leaf(i) => leaves[i] = (v, s),
                        Port::End(e, end) => {
                            slot_of.insert((e, end), (v, s));
                        }
                    }
                }
            }
            let edges: Vec<_> = (0..self.edges.len()).map(|e| (slot_of[&(e, 0)], slot_of[&(e, 1)])).collect();
            let degrees: Vec<usize> = ports.iter().map(Vec::len).collect();
            if let Ok(g) = GenusGraph::from_parts(self.genus.clone(), &degrees, &edges, &leaves) {
                for start in 0..g.leaf_count() {
                    if let Ok(z) = normalize_z(&g, start) {
                        out.insert(z);
                    }
                }
            }
            let mut i = 0;
            loop {
                if i == n {
                    return;
                }
                choice[i] += 1;
                if choice[i] < cyclic[i].len() {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
        }
    }
}

fn multisets(pairs: usize, total: usize) -> Vec<Vec<usize>> {
    if pairs == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in multisets(pairs - 1, total - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn genus_vectors(n: usize, max_total: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for g in 0..=max_total {
        for mut rest in genus_vectors(n - 1, max_total - g) {
            rest.insert(0, g);
            out.push(rest);
        }
    }
    out
}

/// All graphs in normal form with `vertices` vertices, `leaves` leaves and
/// total genus in `genus` (vertex genera plus Betti number).
pub fn z_objects(vertices: usize, leaves: usize, genus: std::ops::RangeInclusive<u32>) -> Vec<GenusGraph> {
    let mut out = BTreeSet::new();
    if vertices == 0 || leaves == 0 {
        return Vec::new();
    }
    let pairs: Vec<(usize, usize)> = (0..vertices).flat_map(|a| (a..vertices).map(move |b| (a, b))).collect();
    let max = *genus.end();
    for e in vertices - 1..=vertices - 1 + max as usize {
        let betti = (e + 1 - vertices) as u32;
        for mult in multisets(pairs.len(), e) {
            let edges: Vec<(usize, usize)> = pairs
                .iter()
                .zip(&mult)
                .flat_map(|(&p, &m)| std::iter::repeat(p).take(m))
                .collect();
            for gv in genus_vectors(vertices, max - betti) {
                let total = betti + gv.iter().sum::<u32>();
                if !genus.contains(&total) {
                    continue;
                }
                let mut leaf_at = vec![0; leaves];
                loop {
                    let m = Multigraph {
                        genus: gv.clone(),
                        edges: edges.clone(),
                        leaf_at: leaf_at.clone(),
                    };
                    if m.connected() {
                        m.z_forms(&mut out);
                    }
                    let mut i = 0;
                    loop {
                        if i == leaves {
                            break;
                        }
                        leaf_at[i] += 1;
                        if leaf_at[i] < vertices {
                            break;
                        }
                        leaf_at[i] = 0;
                        i += 1;
                    }
                    if i == leaves {
                        break;
                    }
                }
            }
        }
    }
    out.into_iter().collect()
}

/// Candidate parts for a vertex of degree `k` and genus `genus`: normal
/// forms with at most `max_vertices` vertices, in every vertex order.
pub fn z_parts(k: usize, genus: u32, max_vertices: usize) -> Vec<GenusGraph> {
    let mut out = BTreeSet::new();
    for v in 1..=max_vertices {
        for z in z_objects(v, k, genus..=genus) {
            for p in Perm::all(v) {
                out.insert(z.reorder_vertices(p.images()));
            }
        }
    }
    out.into_iter().collect()
}

/// Morphisms out of `p` in the normal-form subcategory whose parts have at
/// most `max_part` vertices and whose target has at most `max_target`.
pub fn z_morphisms_from(p: &GenusGraph, max_part: usize, max_target: usize) -> Vec<GraphMorphism> {
    let op = GraphOperad::new(GraphFamily::MOpGenus);
    let n = p.vertex_count();
    if max_target < n {
        return Vec::new();
    }
    // no part can take more than the vertices left over by the others
    let cap = max_part.min(max_target + 1 - n);
    thread_local! {
        static PARTS: std::cell::RefCell<BTreeMap<(usize, u32, usize), Vec<GenusGraph>>> = Default::default();
    }
    let options: Vec<Vec<GenusGraph>> = (0..n)
        .map(|l| {
            let key = (p.degree(l), p.genus(l), cap);
            PARTS.with(|c| {
                c.borrow_mut()
                    .entry(key)
                    .or_insert_with(|| z_parts(key.0, key.1, key.2))
                    .clone()
            })
        })
        .collect();
    if options.iter().any(Vec::is_empty) {
        return Vec::new();
    }
    fn go(
        op: &GraphOperad,
        p: &GenusGraph,
        options: &[Vec<GenusGraph>],
        budget: usize,
        chosen: &mut Vec<GenusGraph>,
        out: &mut BTreeSet<GraphMorphism>,
    ) {
        let i = chosen.len();
        if i == options.len() {
            if let Some(f) = place(op, p, chosen.clone()) {
                out.insert(f);
            }
            return;
        }
        let rest = options.len() - i - 1;
        for q in &options[i] {
            let k = q.vertex_count();
            if k + rest <= budget {
                chosen.push(q.clone());
                go(op, p, options, budget - k, chosen, out);
                chosen.pop();
            }
        }
    }
    let mut out = BTreeSet::new();
    go(&op, p, &options, max_target, &mut Vec::with_capacity(n), &mut out);
    out.into_iter().collect()
}

/// Chooses the labels making the target depth-first ordered, if possible.
fn place(op: &GraphOperad, p: &GenusGraph, uppers: Vec<GenusGraph>) -> Option<GraphMorphism> {
    let mut next = 1;
    let labels: Vec<Vec<usize>> = uppers
        .iter()
        .map(|q| {
            let b: Vec<usize> = (next..next + q.vertex_count()).collect();
            next += q.vertex_count();
            b
        })
        .collect();
    let f = TwoLevelTree {
        target: p.clone(),
        uppers,
        labels,
    };
    let raw = source_of2(op, &f).ok()?;
    let order = raw.dfs_order(0).ok()?.order;
    let mut pos = vec![0; order.len()];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i + 1;
    }
    let labels: Vec<Vec<usize>> = f.labels.iter().map(|b| b.iter().map(|&l| pos[l - 1]).collect()).collect();
    if labels.iter().any(|b| b.windows(2).any(|w| w[0] > w[1])) {
        return None;
    }
    let g = TwoLevelTree { labels, ..f };
    let q = source_of2(op, &g).ok()?;
    (is_z(&q) && is_z_morphism(&g)).then_some(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corolla_colored_distinctly() {
        let g = GenusGraph::corolla(3, 0);
        let cg = ColoredGraph {
            graph: g,
            col: vec![1, 2, 3],
        };
        assert!(color_validate(&cg, DEFAULT_CONSTANT).is_ok());
        let clash = ColoredGraph {
            col: vec![1, 1, 3],
            ..cg
        };
        assert!(color_validate(&clash, DEFAULT_CONSTANT).is_err());
    }

    #[test]
    fn edge_mismatch() {
        let g = GenusGraph::from_parts(vec![0, 0], &[3, 2], &[((0, 2), (1, 0))], &[(0, 0), (0, 1), (1, 1)]).unwrap();
        let mut col = greedy_coloring(&g);
        assert!(color_validate(
            &ColoredGraph {
                graph: g.clone(),
                col: col.clone()
            },
            DEFAULT_CONSTANT
        )
        .is_ok());
        col[g.half_edge(1, 0)] += 7;
        let v = color_violations(&ColoredGraph { graph: g, col }, DEFAULT_CONSTANT);
        assert!(matches!(v[0], ColorViolation::EdgeEnds(..)));
    }

    #[test]
    fn pruning() {
        // a leaf vertex with a dangling arity-0 vertex
        let g = GenusGraph::from_parts(vec![0, 0], &[2, 1], &[((0, 1), (1, 0))], &[(0, 0)]).unwrap();
        let sk = skeleton(&g);
        assert_eq!(sk.pruned.len(), 2);
        assert_eq!(sk.classes.len(), 1);
    }

    #[test]
    fn z_objects_are_normal() {
        let zs = z_objects(2, 1, 0..=1);
        assert!(!zs.is_empty());
        assert!(zs.iter().all(is_z));
    }

    #[test]
    fn lift_along_insertion() {
        let p = GenusGraph::corolla(3, 0);
        let fs = z_morphisms_from(&p, 2, 2);
        assert!(fs.len() > 1);
        for f in &fs {
            let q = source_of2(&GraphOperad::new(GraphFamily::MOpGenus), f).unwrap();
            let col = greedy_coloring(&q);
            let lifted = color_lift(f, &col, DEFAULT_CONSTANT).unwrap();
            assert_eq!(lifted.len(), 3);
            assert_eq!(compatible_colorings(f, &col, DEFAULT_CONSTANT), 1);
            assert_eq!(color_bound(&p, 9), color_bound(&q, 9));
        }
    }
}
