//! Half-edge graphs with leaf, slot and vertex orders, plus genus labels.
//!
//! A [`GenusGraph`] is stored in a normalized form: vertices are numbered in
//! vertex order, and half-edges are numbered vertex by vertex in slot order.
//! Two values compare equal exactly when they are the same labeled operadic
//! graph, so derived `Eq`/`Ord`/`Hash` give structural equality.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Index of a half-edge in a normalized graph.
pub type HalfEdge = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("invalid graph structure: {0}")]
    Invalid(String),
    #[error("vertex {vertex} has degree {expected} but the inserted graph has {found} leaves")]
    ArityMismatch {
        vertex: usize,
        expected: usize,
        found: usize,
    },
    #[error("vertex {vertex} has genus {expected} but the inserted graph has total genus {found}")]
    GenusMismatch {
        vertex: usize,
        expected: u32,
        found: u32,
    },
    #[error("expected {expected} inserted graphs, got {found}")]
    PartCount { expected: usize, found: usize },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("leaf {0} out of range")]
    LeafOutOfRange(usize),
}

/// A bare graph with half-edges: an involution on half-edges and an
/// adjacency map to vertices. Fixed points of `inv` are leaves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HalfEdgeGraph {
    pub vertex_count: usize,
    pub inv: Vec<usize>,
    pub adj: Vec<usize>,
}

impl HalfEdgeGraph {
    pub fn new(vertex_count: usize, inv: Vec<usize>, adj: Vec<usize>) -> Result<Self, GraphError> {
        if inv.len() != adj.len() {
            return Err(GraphError::Invalid("inv and adj lengths differ".into()));
        }
        for (h, &k) in inv.iter().enumerate() {
            if k >= inv.len() || inv[k] != h {
                return Err(GraphError::Invalid(format!("inv is not an involution at {h}")));
            }
        }
        if let Some(&v) = adj.iter().find(|&&v| v >= vertex_count) {
            return Err(GraphError::Invalid(format!("adjacency to missing vertex {v}")));
        }
        Ok(Self {
            vertex_count,
            inv,
            adj,
        })
    }

    pub fn edge_count(&self) -> usize {
        self.inv.iter().enumerate().filter(|&(h, &k)| h < k).count()
    }

    pub fn leaf_count(&self) -> usize {
        self.inv.iter().enumerate().filter(|&(h, &k)| h == k).count()
    }

    pub fn component_count(&self) -> usize {
        let mut uf = UnionFind::new(self.vertex_count);
        for (h, &k) in self.inv.iter().enumerate() {
            if h < k {
                uf.union(self.adj[h], self.adj[k]);
            }
        }
        uf.count()
    }

    /// First Betti number: edges - vertices + components.
    pub fn betti(&self) -> usize {
        self.edge_count() + self.component_count() - self.vertex_count
    }
}

/// An operadic graph with a genus map.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GenusGraph {
    genus: Vec<u32>,
    offsets: Vec<usize>,
    inv: Vec<usize>,
    leaves: Vec<HalfEdge>,
}

/// How [`insert`] treats the genus condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenusRule {
    Check,
    Ignore,
}

/// A vertex-and-slot relabeling produced by [`canonical_form`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relabeling {
    /// `vertex_map[old] = new`.
    pub vertex_map: Vec<usize>,
    /// `half_edge_map[old] = new`.
    pub half_edge_map: Vec<usize>,
}

/// Result of a depth-first traversal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Traversal {
    /// Vertices in order of first visit.
    pub order: Vec<usize>,
    /// Edges used to reach a new vertex, as (leaving, entering) half-edges.
    pub tree_edges: Vec<(HalfEdge, HalfEdge)>,
    /// Leaf indices in the order they are met, starting leaf first.
    pub leaf_order: Vec<usize>,
}

impl GenusGraph {
    /// Builds a graph from per-vertex degrees and genera, a list of edges and
    /// the leaves in leaf order. Half-edges are given as `(vertex, slot)`.
    pub fn from_parts(
        genus: Vec<u32>,
        degrees: &[usize],
        edges: &[((usize, usize), (usize, usize))],
        leaves: &[(usize, usize)],
    ) -> Result<Self, GraphError> {
        if genus.len() != degrees.len() {
            return Err(GraphError::Invalid("genus and degree lists differ in length".into()));
        }
        let mut offsets = Vec::with_capacity(degrees.len() + 1);
        let mut total = 0;
        offsets.push(0);
        for &d in degrees {
            total += d;
            offsets.push(total);
        }
        let id = |(v, s): (usize, usize)| -> Result<usize, GraphError> {
            if v >= degrees.len() || s >= degrees[v] {
                return Err(GraphError::Invalid(format!("no half-edge at vertex {v} slot {s}")));
            }
            Ok(offsets[v] + s)
        };
        let mut inv = vec![usize::MAX; total];
        let mut claim = |h: usize, k: usize| -> Result<(), GraphError> {
            if inv[h] != usize::MAX {
                return Err(GraphError::Invalid(format!("half-edge {h} used twice")));
            }
            inv[h] = k;
            Ok(())
        };
        for &(a, b) in edges {
            let (ha, hb) = (id(a)?, id(b)?);
            if ha == hb {
                return Err(GraphError::Invalid("edge joins a half-edge to itself".into()));
            }
            claim(ha, hb)?;
            claim(hb, ha)?;
        }
        let mut leaf_ids = Vec::with_capacity(leaves.len());
        for &l in leaves {
            let h = id(l)?;
            claim(h, h)?;
            leaf_ids.push(h);
        }
        if let Some(h) = inv.iter().position(|&k| k == usize::MAX) {
            return Err(GraphError::Invalid(format!("half-edge {h} is neither edge nor leaf")));
        }
        Ok(Self {
            genus,
            offsets,
            inv,
            leaves: leaf_ids,
        })
    }

    /// One vertex, `degree` leaves in slot order.
    pub fn corolla(degree: usize, genus: u32) -> Self {
        let leaves: Vec<_> = (0..degree).map(|s| (0, s)).collect();
        Self::from_parts(vec![genus], &[degree], &[], &leaves).expect("corolla is valid")
    }

    /// One vertex whose `i`-th leaf sits at slot `slot_of_leaf[i]`.
    pub fn corolla_with_order(slot_of_leaf: &[usize], genus: u32) -> Result<Self, GraphError> {
        let leaves: Vec<_> = slot_of_leaf.iter().map(|&s| (0, s)).collect();
        Self::from_parts(vec![genus], &[slot_of_leaf.len()], &[], &leaves)
    }

    pub fn vertex_count(&self) -> usize {
        self.genus.len()
    }

    pub fn half_edge_count(&self) -> usize {
        self.inv.len()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.vertex_count()).map(|v| self.degree(v)).collect()
    }

    pub fn genus(&self, v: usize) -> u32 {
        self.genus[v]
    }

    pub fn genera(&self) -> &[u32] {
        &self.genus
    }

    pub fn half_edge(&self, v: usize, slot: usize) -> HalfEdge {
        debug_assert!(slot < self.degree(v));
        self.offsets[v] + slot
    }

    pub fn vertex_of(&self, h: HalfEdge) -> usize {
        // offsets is sorted; find the last offset <= h among non-empty vertices
        match self.offsets.binary_search(&h) {
            Ok(mut i) => {
                while self.offsets[i + 1] == h {
                    i += 1;
                }
                i
            }
            Err(i) => i - 1,
        }
    }

    pub fn slot_of(&self, h: HalfEdge) -> usize {
        h - self.offsets[self.vertex_of(h)]
    }

    pub fn is_leaf(&self, h: HalfEdge) -> bool {
        self.inv[h] == h
    }

    pub fn partner(&self, h: HalfEdge) -> Option<HalfEdge> {
        (self.inv[h] != h).then_some(self.inv[h])
    }

    pub fn leaves(&self) -> &[HalfEdge] {
        &self.leaves
    }

    pub fn leaf_count(&self) -> usize {
        self.leaves.len()
    }

    pub fn leaf_index(&self, h: HalfEdge) -> Option<usize> {
        self.leaves.iter().position(|&l| l == h)
    }

    /// Edges as pairs `(h, inv(h))` with `h < inv(h)`.
    pub fn edges(&self) -> impl Iterator<Item = (HalfEdge, HalfEdge)> + '_ {
        self.inv
            .iter()
            .enumerate()
            .filter(|&(h, &k)| h < k)
            .map(|(h, &k)| (h, k))
    }

    pub fn edge_count(&self) -> usize {
        self.edges().count()
    }

    pub fn half_edges_at(&self, v: usize) -> std::ops::Range<usize> {
        self.offsets[v]..self.offsets[v + 1]
    }

    pub fn underlying(&self) -> HalfEdgeGraph {
        HalfEdgeGraph {
            vertex_count: self.vertex_count(),
            inv: self.inv.clone(),
            adj: (0..self.half_edge_count()).map(|h| self.vertex_of(h)).collect(),
        }
    }

    pub fn betti(&self) -> usize {
        self.underlying().betti()
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_count() > 0 && self.underlying().component_count() == 1
    }

    /// Sum of vertex genera.
    pub fn vertex_genus_sum(&self) -> u32 {
        self.genus.iter().sum()
    }

    /// Sum of vertex genera plus the first Betti number.
    pub fn total_genus(&self) -> u32 {
        self.vertex_genus_sum() + self.betti() as u32
    }

    /// Same graph with every vertex genus replaced.
    pub fn with_genera(&self, genus: Vec<u32>) -> Self {
        assert_eq!(genus.len(), self.vertex_count());
        Self {
            genus,
            ..self.clone()
        }
    }

    /// Moves old vertex `v` to position `new_position[v]`, keeping slot
    /// orders and the leaf order.
    pub fn reorder_vertices(&self, new_position: &[usize]) -> Self {
        let n = self.vertex_count();
        assert_eq!(new_position.len(), n);
        let slot_maps: Vec<Vec<usize>> = (0..n).map(|v| (0..self.degree(v)).collect()).collect();
        self.relabel(new_position, &slot_maps).0
    }

    /// Leaf `i` becomes leaf `new_index[i]`.
    pub fn permute_leaves(&self, new_index: &[usize]) -> Self {
        assert_eq!(new_index.len(), self.leaf_count());
        let mut leaves = vec![0; self.leaf_count()];
        for (i, &h) in self.leaves.iter().enumerate() {
            leaves[new_index[i]] = h;
        }
        Self {
            leaves,
            ..self.clone()
        }
    }

    /// General relabeling: vertex `v` moves to `vertex_map[v]` and its slot
    /// `s` moves to `slot_maps[v][s]`. Returns the graph and the half-edge map.
    pub fn relabel(&self, vertex_map: &[usize], slot_maps: &[Vec<usize>]) -> (Self, Vec<usize>) {
        let n = self.vertex_count();
        let mut old_of_new = vec![0; n];
        for (v, &w) in vertex_map.iter().enumerate() {
            old_of_new[w] = v;
        }
        let mut offsets = vec![0];
        let mut genus = Vec::with_capacity(n);
        for &v in &old_of_new {
            genus.push(self.genus[v]);
            offsets.push(offsets.last().unwrap() + self.degree(v));
        }
        let mut h_map = vec![0; self.half_edge_count()];
        for v in 0..n {
            for s in 0..self.degree(v) {
                h_map[self.half_edge(v, s)] = offsets[vertex_map[v]] + slot_maps[v][s];
            }
        }
        let mut inv = vec![0; self.half_edge_count()];
        for (h, &k) in self.inv.iter().enumerate() {
            inv[h_map[h]] = h_map[k];
        }
        let leaves = self.leaves.iter().map(|&h| h_map[h]).collect();
        (
            Self {
                genus,
                offsets,
                inv,
                leaves,
            },
            h_map,
        )
    }

    /// Depth-first traversal entering at leaf `start_leaf`. At each vertex the
    /// traversal continues through the slots after the entry slot in
    /// increasing cyclic order, descending across edges not yet traversed.
    pub fn dfs_order(&self, start_leaf: usize) -> Result<Traversal, GraphError> {
        let &h0 = self
            .leaves
            .get(start_leaf)
            .ok_or(GraphError::LeafOutOfRange(start_leaf))?;
        self.traverse(self.vertex_of(h0), Some(self.slot_of(h0)))
    }

    /// Traversal from a vertex, scanning slots from 0 when `entry` is `None`.
    pub fn traverse(&self, start: usize, entry: Option<usize>) -> Result<Traversal, GraphError> {
        let n = self.vertex_count();
        let mut visited = vec![false; n];
        let mut used = vec![false; self.half_edge_count()];
        let mut t = Traversal {
            order: Vec::with_capacity(n),
            tree_edges: Vec::new(),
            leaf_order: Vec::new(),
        };
        if let Some(s) = entry {
            let h = self.half_edge(start, s);
            if let Some(i) = self.leaf_index(h) {
                t.leaf_order.push(i);
            }
        }
        self.visit(start, entry, &mut visited, &mut used, &mut t);
        if t.order.len() != n {
            return Err(GraphError::Disconnected);
        }
        Ok(t)
    }

    fn visit(
        &self,
        v: usize,
        entry: Option<usize>,
        visited: &mut [bool],
        used: &mut [bool],
        t: &mut Traversal,
    ) {
        visited[v] = true;
        t.order.push(v);
        let d = self.degree(v);
        let slots: Vec<usize> = match entry {
            Some(e) => (1..d).map(|k| (e + k) % d).collect(),
            None => (0..d).collect(),
        };
        for s in slots {
            let h = self.half_edge(v, s);
            match self.partner(h) {
                None => {
                    if let Some(i) = self.leaf_index(h) {
                        t.leaf_order.push(i);
                    }
                }
                Some(k) => {
                    if used[h] {
                        continue;
                    }
                    used[h] = true;
                    used[k] = true;
                    let w = self.vertex_of(k);
                    if !visited[w] {
                        t.tree_edges.push((h, k));
                        self.visit(w, Some(self.slot_of(k)), visited, used, t);
                    }
                }
            }
        }
    }

    /// Graphviz rendering; leaves are drawn as unfilled point nodes.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph G {\n  node [shape=circle];\n");
        for v in 0..self.vertex_count() {
            let _ = writeln!(out, "  v{v} [label=\"{}:g{}\"];", v + 1, self.genus[v]);
        }
        for (i, &h) in self.leaves.iter().enumerate() {
            let _ = writeln!(out, "  l{i} [shape=point, style=unfilled, xlabel=\"{i}\"];");
            let _ = writeln!(
                out,
                "  v{} -- l{i} [taillabel=\"{}\"];",
                self.vertex_of(h),
                self.slot_of(h)
            );
        }
        for (a, b) in self.edges() {
            let _ = writeln!(
                out,
                "  v{} -- v{} [taillabel=\"{}\", headlabel=\"{}\"];",
                self.vertex_of(a),
                self.vertex_of(b),
                self.slot_of(a),
                self.slot_of(b)
            );
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            vertices: (0..self.vertex_count())
                .map(|v| VertexJson {
                    id: v,
                    genus: self.genus[v],
                })
                .collect(),
            half_edges: (0..self.half_edge_count())
                .map(|h| HalfEdgeJson {
                    id: h,
                    vertex: self.vertex_of(h),
                    slot: self.slot_of(h),
                })
                .collect(),
            edges: self.edges().map(|(a, b)| [a, b]).collect(),
            leaves: self.leaves.clone(),
            vertex_order: (0..self.vertex_count()).collect(),
        }
    }

    pub fn from_json(json: &GraphJson) -> Result<Self, GraphError> {
        let pos: BTreeMap<usize, usize> = json
            .vertex_order
            .iter()
            .enumerate()
            .map(|(i, &id)| (id, i))
            .collect();
        if pos.len() != json.vertices.len() || json.vertex_order.len() != json.vertices.len() {
            return Err(GraphError::Invalid("vertexOrder is not a bijection".into()));
        }
        let mut genus = vec![0; json.vertices.len()];
        for v in &json.vertices {
            let &i = pos
                .get(&v.id)
                .ok_or_else(|| GraphError::Invalid(format!("vertex {} not ordered", v.id)))?;
            genus[i] = v.genus;
        }
        let mut degrees = vec![0; genus.len()];
        let mut loc = BTreeMap::new();
        for he in &json.half_edges {
            let &v = pos
                .get(&he.vertex)
                .ok_or_else(|| GraphError::Invalid(format!("unknown vertex {}", he.vertex)))?;
            degrees[v] += 1;
            if loc.insert(he.id, (v, he.slot)).is_some() {
                return Err(GraphError::Invalid(format!("duplicate half-edge id {}", he.id)));
            }
        }
        let get = |h: &usize| {
            loc.get(h)
                .copied()
                .ok_or_else(|| GraphError::Invalid(format!("unknown half-edge {h}")))
        };
        let edges = json
            .edges
            .iter()
            .map(|[a, b]| Ok((get(a)?, get(b)?)))
            .collect::<Result<Vec<_>, GraphError>>()?;
        let leaves = json.leaves.iter().map(get).collect::<Result<Vec<_>, _>>()?;
        Self::from_parts(genus, &degrees, &edges, &leaves)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexJson {
    pub id: usize,
    pub genus: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HalfEdgeJson {
    pub id: usize,
    pub vertex: usize,
    pub slot: usize,
}

/// Wire format for graphs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GraphJson {
    pub vertices: Vec<VertexJson>,
    pub half_edges: Vec<HalfEdgeJson>,
    pub edges: Vec<[usize; 2]>,
    pub leaves: Vec<usize>,
    pub vertex_order: Vec<usize>,
}

impl Serialize for GenusGraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for GenusGraph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let json = GraphJson::deserialize(d)?;
        GenusGraph::from_json(&json).map_err(serde::de::Error::custom)
    }
}

/// Inserts `parts[l]` into vertex `l` of `p`. The `i`-th leaf of `parts[l]`
/// is glued along slot `i` of vertex `l`; the result's vertex order is the
/// concatenation of the parts' vertex orders.
pub fn insert(p: &GenusGraph, parts: &[GenusGraph], rule: GenusRule) -> Result<GenusGraph, GraphError> {
    let n = p.vertex_count();
    if parts.len() != n {
        return Err(GraphError::PartCount {
            expected: n,
            found: parts.len(),
        });
    }
    for (l, q) in parts.iter().enumerate() {
        if q.leaf_count() != p.degree(l) {
            return Err(GraphError::ArityMismatch {
                vertex: l,
                expected: p.degree(l),
                found: q.leaf_count(),
            });
        }
        if rule == GenusRule::Check && q.total_genus() != p.genus(l) {
            return Err(GraphError::GenusMismatch {
                vertex: l,
                expected: p.genus(l),
                found: q.total_genus(),
            });
        }
    }
    // global half-edge base of each part
    let mut base = Vec::with_capacity(n);
    let mut total = 0;
    for q in parts {
        base.push(total);
        total += q.half_edge_count();
    }
    let mut inv = vec![0; total];
    for (l, q) in parts.iter().enumerate() {
        for (a, b) in q.edges() {
            inv[base[l] + a] = base[l] + b;
            inv[base[l] + b] = base[l] + a;
        }
    }
    let mut leaves = vec![0; p.leaf_count()];
    for (l, q) in parts.iter().enumerate() {
        for (i, &h) in q.leaves.iter().enumerate() {
            let hp = p.half_edge(l, i);
            let here = base[l] + h;
            match p.partner(hp) {
                Some(kp) => {
                    let (j, k) = (p.vertex_of(kp), p.slot_of(kp));
                    inv[here] = base[j] + parts[j].leaves[k];
                }
                None => {
                    inv[here] = here;
                    leaves[p.leaf_index(hp).expect("fixed point is a leaf")] = here;
                }
            }
        }
    }
    let mut genus = Vec::new();
    let mut offsets = vec![0];
    for (l, q) in parts.iter().enumerate() {
        genus.extend_from_slice(&q.genus);
        offsets.extend(q.offsets[1..].iter().map(|o| o + base[l]));
    }
    Ok(GenusGraph {
        genus,
        offsets,
        inv,
        leaves,
    })
}

/// Inserts `q` into vertex `i` (0-based) of `p`, identities elsewhere.
pub fn insert_at(p: &GenusGraph, i: usize, q: &GenusGraph, rule: GenusRule) -> Result<GenusGraph, GraphError> {
    if i >= p.vertex_count() {
        return Err(GraphError::Invalid(format!("no vertex {i}")));
    }
    let parts: Vec<_> = (0..p.vertex_count())
        .map(|l| {
            if l == i {
                q.clone()
            } else {
                GenusGraph::corolla(p.degree(l), p.genus(l))
            }
        })
        .collect();
    insert(p, &parts, rule)
}

/// Per-vertex invariant that any isomorphism must preserve.
fn vertex_key(g: &GenusGraph, v: usize) -> (Vec<usize>, u32, usize, usize) {
    let mut leaves = Vec::new();
    let mut loops = 0;
    for h in g.half_edges_at(v) {
        match g.partner(h) {
            None => leaves.push(g.leaf_index(h).unwrap()),
            Some(k) if g.vertex_of(k) == v => loops += 1,
            Some(_) => {}
        }
    }
    leaves.sort_unstable();
    (leaves, g.genus(v), g.degree(v), loops / 2)
}

type Encoding = (Vec<(Vec<usize>, u32, usize, usize)>, Vec<(usize, usize)>);

fn encode(g: &GenusGraph, keys: &[(Vec<usize>, u32, usize, usize)], new_of_old: &[usize]) -> Encoding {
    let n = g.vertex_count();
    let mut vk = vec![keys[0].clone(); n];
    for v in 0..n {
        vk[new_of_old[v]] = keys[v].clone();
    }
    let mut edges: Vec<(usize, usize)> = g
        .edges()
        .map(|(a, b)| {
            let (x, y) = (new_of_old[g.vertex_of(a)], new_of_old[g.vertex_of(b)]);
            (x.min(y), x.max(y))
        })
        .collect();
    edges.sort_unstable();
    (vk, edges)
}

/// Representative of the isomorphism class of `g` under vertex relabeling and
/// slot permutations, preserving genus and leaf order. Returns the
/// representative and the relabeling taking `g` to it.
pub fn canonical_form(g: &GenusGraph) -> (GenusGraph, Relabeling) {
    let n = g.vertex_count();
    let keys: Vec<_> = (0..n).map(|v| vertex_key(g, v)).collect();
    // refine with the multiset of neighbour keys
    let refined: Vec<_> = (0..n)
        .map(|v| {
            let mut nb: Vec<_> = g
                .half_edges_at(v)
                .filter_map(|h| g.partner(h))
                .map(|k| keys[g.vertex_of(k)].clone())
                .collect();
            nb.sort();
            (keys[v].clone(), nb)
        })
        .collect();
    let mut sorted: Vec<usize> = (0..n).collect();
    sorted.sort_by(|&a, &b| refined[a].cmp(&refined[b]));
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for &v in &sorted {
        match classes.last_mut() {
            Some(c) if refined[c[0]] == refined[v] => c.push(v),
            _ => classes.push(vec![v]),
        }
    }
    let mut best: Option<(Encoding, Vec<usize>)> = None;
    let mut order = Vec::with_capacity(n);
    search_orders(&classes, 0, &mut order, &mut |ord: &[usize]| {
        let mut new_of_old = vec![0; n];
        for (i, &v) in ord.iter().enumerate() {
            new_of_old[v] = i;
        }
        let enc = encode(g, &keys, &new_of_old);
        if best.as_ref().is_none_or(|(b, _)| enc < *b) {
            best = Some((enc, new_of_old));
        }
    });
    let (_, vertex_map) = best.expect("at least one ordering");
    build_canonical(g, vertex_map)
}

fn search_orders(classes: &[Vec<usize>], k: usize, order: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
    if k == classes.len() {
        f(order);
        return;
    }
    let mut perm = classes[k].clone();
    permute_all(&mut perm, 0, &mut |p: &[usize]| {
        let len = order.len();
        order.extend_from_slice(p);
        search_orders(classes, k + 1, order, f);
        order.truncate(len);
    });
}

/// Calls `f` on every permutation of `items` (Heap-style recursion).
pub(crate) fn permute_all(items: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == items.len() {
        f(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute_all(items, k + 1, f);
        items.swap(k, i);
    }
}

fn build_canonical(g: &GenusGraph, vertex_map: Vec<usize>) -> (GenusGraph, Relabeling) {
    let n = g.vertex_count();
    // classify each half-edge: leaves first (by leaf index), then loops,
    // then edges by the new index of the other endpoint
    let class = |h: HalfEdge| -> (u8, usize) {
        let v = g.vertex_of(h);
        match g.partner(h) {
            None => (0, g.leaf_index(h).unwrap()),
            Some(k) if g.vertex_of(k) == v => (1, 0),
            Some(k) => (2, vertex_map[g.vertex_of(k)]),
        }
    };
    let mut slot_maps: Vec<Vec<usize>> = (0..n).map(|v| vec![0; g.degree(v)]).collect();
    // assign slots in a way that pairs parallel edges consistently
    let mut next_slot: Vec<BTreeMap<(u8, usize), Vec<usize>>> = vec![BTreeMap::new(); n];
    for v in 0..n {
        let mut hs: Vec<HalfEdge> = g.half_edges_at(v).collect();
        hs.sort_by_key(|&h| class(h));
        let mut groups: BTreeMap<(u8, usize), Vec<usize>> = BTreeMap::new();
        for (s, &h) in hs.iter().enumerate() {
            groups.entry(class(h)).or_default().push(s);
        }
        next_slot[v] = groups;
    }
    let mut taken: Vec<BTreeMap<(u8, usize), usize>> = vec![BTreeMap::new(); n];
    let mut take = |v: usize, c: (u8, usize)| -> usize {
        let i = taken[v].entry(c).or_insert(0);
        let s = next_slot[v][&c][*i];
        *i += 1;
        s
    };
    // process edges in a canonical order so parallel edges line up
    let mut edge_list: Vec<(HalfEdge, HalfEdge)> = g.edges().collect();
    edge_list.sort_by_key(|&(a, b)| {
        let (x, y) = (vertex_map[g.vertex_of(a)], vertex_map[g.vertex_of(b)]);
        (x.min(y), x.max(y))
    });
    for &(a, b) in &edge_list {
        let (va, vb) = (g.vertex_of(a), g.vertex_of(b));
        let (sa, sb) = if va == vb {
            let s1 = take(va, (1, 0));
            let s2 = take(va, (1, 0));
            (s1, s2)
        } else {
            (take(va, class(a)), take(vb, class(b)))
        };
        slot_maps[va][g.slot_of(a)] = sa;
        slot_maps[vb][g.slot_of(b)] = sb;
    }
    for &h in g.leaves() {
        let v = g.vertex_of(h);
        slot_maps[v][g.slot_of(h)] = take(v, class(h));
    }
    let (canon, half_edge_map) = g.relabel(&vertex_map, &slot_maps);
    (
        canon,
        Relabeling {
            vertex_map,
            half_edge_map,
        },
    )
}

/// Isomorphism under vertex relabeling and slot permutations.
pub fn is_isomorphic(a: &GenusGraph, b: &GenusGraph) -> bool {
    a.vertex_count() == b.vertex_count()
        && a.leaf_count() == b.leaf_count()
        && canonical_form(a).0 == canonical_form(b).0
}

/// Simple union-find over `0..n`.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }

    pub fn count(&mut self) -> usize {
        (0..self.parent.len())
            .map(|x| self.find(x))
            .collect::<BTreeSet<_>>()
            .len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Two vertices joined by three parallel edges, one leaf on vertex 0.
    pub(crate) fn theta() -> GenusGraph {
        GenusGraph::from_parts(
            vec![0, 0],
            &[4, 3],
            &[((0, 1), (1, 0)), ((0, 2), (1, 1)), ((0, 3), (1, 2))],
            &[(0, 0)],
        )
        .unwrap()
    }

    /// Brute-force cycle-space rank: the largest number of edges whose
    /// removal keeps the component count unchanged.
    fn betti_oracle(g: &GenusGraph) -> usize {
        let edges: Vec<_> = g.edges().collect();
        let comps = g.underlying().component_count();
        let mut best = 0;
        for mask in 0u32..(1 << edges.len()) {
            let mut uf = UnionFind::new(g.vertex_count());
            for (i, &(a, b)) in edges.iter().enumerate() {
                if mask & (1 << i) == 0 {
                    uf.union(g.vertex_of(a), g.vertex_of(b));
                }
            }
            if uf.count() == comps {
                best = best.max(mask.count_ones() as usize);
            }
        }
        best
    }

    #[test]
    fn betti_examples() {
        let path = GenusGraph::from_parts(
            vec![0; 4],
            &[2, 2, 2, 2],
            &[((0, 1), (1, 0)), ((1, 1), (2, 0)), ((2, 1), (3, 0))],
            &[(0, 0), (3, 1)],
        )
        .unwrap();
        assert_eq!(path.betti(), 0);
        let looped = GenusGraph::from_parts(vec![0], &[2], &[((0, 0), (0, 1))], &[]).unwrap();
        assert_eq!(looped.betti(), 1);
        assert_eq!(betti_oracle(&looped), 1);
        assert_eq!(theta().betti(), 2);
        assert_eq!(betti_oracle(&theta()), 2);
    }

    #[test]
    fn rejects_bad_structures() {
        assert!(GenusGraph::from_parts(vec![0], &[2], &[], &[(0, 0)]).is_err());
        assert!(GenusGraph::from_parts(vec![0], &[1], &[], &[(0, 0), (0, 0)]).is_err());
        assert!(HalfEdgeGraph::new(1, vec![1, 1], vec![0, 0]).is_err());
    }

    #[test]
    fn vertex_of_handles_isolated_vertices() {
        let g = GenusGraph::from_parts(vec![0, 0, 0], &[1, 0, 1], &[], &[(0, 0), (2, 0)]).unwrap();
        assert_eq!(g.vertex_of(0), 0);
        assert_eq!(g.vertex_of(1), 2);
    }

    #[test]
    fn identity_insertion() {
        let t = theta();
        let parts: Vec<_> = (0..2).map(|v| GenusGraph::corolla(t.degree(v), 0)).collect();
        assert_eq!(insert(&t, &parts, GenusRule::Check).unwrap(), t);
    }

    #[test]
    fn insertion_with_genus() {
        let p = GenusGraph::corolla(1, 2);
        let part = GenusGraph::from_parts(
            vec![1, 0],
            &[3, 2],
            &[((0, 1), (1, 0)), ((0, 2), (1, 1))],
            &[(0, 0)],
        )
        .unwrap();
        assert_eq!(part.total_genus(), 2);
        let got = insert(&p, std::slice::from_ref(&part), GenusRule::Check).unwrap();
        assert_eq!(got, part);

        let p0 = GenusGraph::corolla(1, 0);
        let err = insert(&p0, &[GenusGraph::corolla(1, 1)], GenusRule::Check).unwrap_err();
        assert!(matches!(err, GraphError::GenusMismatch { .. }));
        let err = insert(&p0, &[GenusGraph::corolla(2, 0)], GenusRule::Check).unwrap_err();
        assert!(matches!(err, GraphError::ArityMismatch { .. }));
    }

    #[test]
    fn dfs_examples() {
        let c = GenusGraph::corolla(3, 0);
        assert_eq!(c.dfs_order(0).unwrap().order, vec![0]);
        let chain = GenusGraph::from_parts(
            vec![0; 3],
            &[2, 2, 2],
            &[((2, 1), (1, 0)), ((1, 1), (0, 0))],
            &[(2, 0), (0, 1)],
        )
        .unwrap();
        assert_eq!(chain.dfs_order(0).unwrap().order, vec![2, 1, 0]);
        assert_eq!(chain.dfs_order(1).unwrap().order, vec![0, 1, 2]);
        // theta entered at the leaf on vertex 0: slot 1 leads to vertex 1
        let t = theta().dfs_order(0).unwrap();
        assert_eq!(t.order, vec![0, 1]);
        assert_eq!(t.tree_edges.len(), 1);

        let split = GenusGraph::from_parts(vec![0, 0], &[1, 1], &[], &[(0, 0), (1, 0)]).unwrap();
        assert_eq!(split.dfs_order(0), Err(GraphError::Disconnected));
    }

    #[test]
    fn canonical_forms() {
        let t = theta();
        let (c, rel) = canonical_form(&t);
        assert_eq!(canonical_form(&c).0, c);
        assert_eq!(rel.vertex_map.len(), 2);
        // relabel: swap vertices and scramble slots
        let (u, _) = t.relabel(&[1, 0], &[vec![3, 0, 2, 1], vec![2, 1, 0]]);
        assert_ne!(u, t);
        assert_eq!(canonical_form(&u).0, c);
        // two parallel edges and a loop
        let other = GenusGraph::from_parts(
            vec![0, 0],
            &[3, 4],
            &[((0, 1), (1, 0)), ((0, 2), (1, 1)), ((1, 2), (1, 3))],
            &[(0, 0)],
        )
        .unwrap();
        assert_ne!(canonical_form(&other).0, c);
    }

    #[test]
    fn json_roundtrip() {
        let t = theta();
        let s = serde_json::to_string(&t).unwrap();
        let back: GenusGraph = serde_json::from_str(&s).unwrap();
        assert_eq!(back, t);
        assert!(t.to_dot().contains("style=unfilled"));
    }
}
