//! Concrete set-operads: the table operads of (commutative) monoids and
//! semigroups, graph operads acting by vertex insertion, and a free symmetric
//! operad on named generators.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::hash::Hash;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::halfedge::{insert_at, GenusGraph, GenusRule, GraphError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OperadError {
    #[error("slot {slot} out of range for arity {arity}")]
    SlotOutOfRange { slot: usize, arity: usize },
    #[error("color mismatch: input expects {expected}, operation outputs {found}")]
    ColorMismatch { expected: String, found: String },
    #[error("not a permutation of 1..{0}")]
    BadPermutation(usize),
    #[error("operation is not in the family: {0}")]
    NotInFamily(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A permutation of `{0, .., n-1}` stored by images. Written and read in
/// one-line notation on `{1, .., n}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Perm(Vec<usize>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n).collect())
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self, OperadError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(OperadError::BadPermutation(n));
            }
            seen[i] = true;
        }
        Ok(Perm(images))
    }

    /// `[2, 3, 1]` sends 1 to 2, 2 to 3 and 3 to 1.
    pub fn from_one_line(line: &[usize]) -> Result<Self, OperadError> {
        if line.contains(&0) {
            return Err(OperadError::BadPermutation(line.len()));
        }
        Self::from_images(line.iter().map(|&i| i - 1).collect())
    }

    pub fn one_line(&self) -> Vec<usize> {
        self.0.iter().map(|&i| i + 1).collect()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Perm(inv)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn after(&self, other: &Perm) -> Perm {
        Perm(other.0.iter().map(|&i| self.0[i]).collect())
    }

    /// The permutation sending position `k` to the rank of `values[k]`.
    pub fn ranks(values: &[usize]) -> Perm {
        let mut idx: Vec<usize> = (0..values.len()).collect();
        idx.sort_by_key(|&k| values[k]);
        let mut img = vec![0; values.len()];
        for (r, &k) in idx.iter().enumerate() {
            img[k] = r;
        }
        Perm(img)
    }

    pub fn all(n: usize) -> Vec<Perm> {
        let mut out = Vec::new();
        let mut items: Vec<usize> = (0..n).collect();
        crate::halfedge::permute_all(&mut items, 0, &mut |p: &[usize]| out.push(Perm(p.to_vec())));
        out.sort();
        out
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for i in self.one_line() {
            write!(f, "{i}")?;
        }
        write!(f, ")")
    }
}

/// A (colored) set-operad. Inputs are numbered from 1.
pub trait Operad {
    type Op: Clone + Eq + Ord + Hash + fmt::Debug;
    type Color: Clone + Eq + Ord + Hash + fmt::Debug;

    fn arity(&self, p: &Self::Op) -> usize;
    fn input_color(&self, p: &Self::Op, i: usize) -> Self::Color;
    fn output_color(&self, p: &Self::Op) -> Self::Color;
    fn identity(&self, c: &Self::Color) -> Self::Op;
    fn compose_at(&self, p: &Self::Op, i: usize, q: &Self::Op) -> Result<Self::Op, OperadError>;
    /// Relabels input `i` as input `σ(i)`.
    fn sym_act(&self, p: &Self::Op, sigma: &Perm) -> Result<Self::Op, OperadError>;
    fn contains(&self, p: &Self::Op) -> bool;

    fn is_identity(&self, p: &Self::Op) -> bool {
        self.arity(p) == 1 && *p == self.identity(&self.output_color(p))
    }

    fn input_colors(&self, p: &Self::Op) -> Vec<Self::Color> {
        (1..=self.arity(p)).map(|i| self.input_color(p, i)).collect()
    }
}

/// Operads whose operations with a given output color and arity form a
/// finite, listable set.
pub trait EnumerableOperad: Operad {
    fn operations(&self, output: &Self::Color, arity: usize) -> Vec<Self::Op>;
}

fn check_slot(i: usize, arity: usize) -> Result<(), OperadError> {
    if i == 0 || i > arity {
        Err(OperadError::SlotOutOfRange { slot: i, arity })
    } else {
        Ok(())
    }
}

fn check_perm(sigma: &Perm, n: usize) -> Result<(), OperadError> {
    if sigma.len() != n {
        Err(OperadError::BadPermutation(n))
    } else {
        Ok(())
    }
}

/// `p ∘ (q_1, .., q_n)`, composing from the last input down so indices stay valid.
pub fn compose_full<O: Operad>(op: &O, p: &O::Op, qs: &[O::Op]) -> Result<O::Op, OperadError> {
    if qs.len() != op.arity(p) {
        return Err(OperadError::SlotOutOfRange {
            slot: qs.len(),
            arity: op.arity(p),
        });
    }
    let mut acc = p.clone();
    for (i, q) in qs.iter().enumerate().rev() {
        acc = op.compose_at(&acc, i + 1, q)?;
    }
    Ok(acc)
}

// ---------------------------------------------------------------------------
// table operads

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TableFamily {
    UCom,
    Com,
    UAs,
    As,
}

impl TableFamily {
    pub fn commutative(self) -> bool {
        matches!(self, TableFamily::UCom | TableFamily::Com)
    }

    pub fn unital(self) -> bool {
        matches!(self, TableFamily::UCom | TableFamily::UAs)
    }

    pub fn name(self) -> &'static str {
        match self {
            TableFamily::UCom => "uCom",
            TableFamily::Com => "Com",
            TableFamily::UAs => "uAs",
            TableFamily::As => "As",
        }
    }
}

/// An operation of a table operad: the word `x_{w_1} .. x_{w_n}`. For the
/// commutative families the word is always the identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Word(pub Vec<usize>);

impl Word {
    pub fn identity(n: usize) -> Self {
        Word((1..=n).collect())
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TableOperad {
    pub family: TableFamily,
}

impl TableOperad {
    pub fn new(family: TableFamily) -> Self {
        Self { family }
    }

    pub fn op(&self, word: &[usize]) -> Result<Word, OperadError> {
        let w = Word(word.to_vec());
        if self.contains(&w) {
            Ok(w)
        } else {
            Err(OperadError::NotInFamily(format!("{word:?}")))
        }
    }
}

impl Operad for TableOperad {
    type Op = Word;
    type Color = ();

    fn arity(&self, p: &Word) -> usize {
        p.arity()
    }

    fn input_color(&self, _: &Word, _: usize) {}

    fn output_color(&self, _: &Word) {}

    fn identity(&self, _: &()) -> Word {
        Word::identity(1)
    }

    fn compose_at(&self, p: &Word, i: usize, q: &Word) -> Result<Word, OperadError> {
        check_slot(i, p.arity())?;
        for w in [p, q] {
            if !self.contains(w) {
                return Err(OperadError::NotInFamily(format!("{:?}", w.0)));
            }
        }
        let m = q.arity();
        let mut out = Vec::with_capacity(p.arity() + m - 1);
        for &a in &p.0 {
            match a.cmp(&i) {
                std::cmp::Ordering::Less => out.push(a),
                std::cmp::Ordering::Equal => out.extend(q.0.iter().map(|&b| b + i - 1)),
                std::cmp::Ordering::Greater => out.push(a + m - 1),
            }
        }
        Ok(Word(out))
    }

    fn sym_act(&self, p: &Word, sigma: &Perm) -> Result<Word, OperadError> {
        check_perm(sigma, p.arity())?;
        if self.family.commutative() {
            return Ok(p.clone());
        }
        Ok(Word(p.0.iter().map(|&a| sigma.apply(a - 1) + 1).collect()))
    }

    fn contains(&self, p: &Word) -> bool {
        let n = p.arity();
        if n == 0 && !self.family.unital() {
            return false;
        }
        if self.family.commutative() {
            return *p == Word::identity(n);
        }
        let set: BTreeSet<usize> = p.0.iter().copied().collect();
        set.len() == n && set.iter().all(|&a| (1..=n).contains(&a))
    }
}

impl EnumerableOperad for TableOperad {
    fn operations(&self, _: &(), arity: usize) -> Vec<Word> {
        if arity == 0 && !self.family.unital() {
            return Vec::new();
        }
        if self.family.commutative() {
            return vec![Word::identity(arity)];
        }
        Perm::all(arity).into_iter().map(|s| Word(s.one_line())).collect()
    }
}

// ---------------------------------------------------------------------------
// nu-restriction

/// The suboperad of operations of non-zero arity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NonUnital<O>(pub O);

impl<O: Operad> Operad for NonUnital<O> {
    type Op = O::Op;
    type Color = O::Color;

    fn arity(&self, p: &O::Op) -> usize {
        self.0.arity(p)
    }
    fn input_color(&self, p: &O::Op, i: usize) -> O::Color {
        self.0.input_color(p, i)
    }
    fn output_color(&self, p: &O::Op) -> O::Color {
        self.0.output_color(p)
    }
    fn identity(&self, c: &O::Color) -> O::Op {
        self.0.identity(c)
    }
    fn compose_at(&self, p: &O::Op, i: usize, q: &O::Op) -> Result<O::Op, OperadError> {
        if self.0.arity(q) == 0 {
            return Err(OperadError::NotInFamily("arity 0".into()));
        }
        self.0.compose_at(p, i, q)
    }
    fn sym_act(&self, p: &O::Op, sigma: &Perm) -> Result<O::Op, OperadError> {
        self.0.sym_act(p, sigma)
    }
    fn contains(&self, p: &O::Op) -> bool {
        self.0.arity(p) > 0 && self.0.contains(p)
    }
}

impl<O: EnumerableOperad> EnumerableOperad for NonUnital<O> {
    fn operations(&self, output: &O::Color, arity: usize) -> Vec<O::Op> {
        if arity == 0 {
            Vec::new()
        } else {
            self.0.operations(output, arity)
        }
    }
}

// ---------------------------------------------------------------------------
// graph operads

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GraphFamily {
    /// rooted planar trees
    POp,
    /// rooted trees with any order on input leaves
    SOp,
    /// unrooted trees
    COp,
    /// connected graphs, genus ignored
    MOp,
    /// connected graphs with vertex genus
    MOpGenus,
}

impl GraphFamily {
    pub fn name(self) -> &'static str {
        match self {
            GraphFamily::POp => "pOp",
            GraphFamily::SOp => "sOp",
            GraphFamily::COp => "cOp",
            GraphFamily::MOp => "mOp",
            GraphFamily::MOpGenus => "mOp_(g,n)",
        }
    }

    pub fn rule(self) -> GenusRule {
        if self == GraphFamily::MOp {
            GenusRule::Ignore
        } else {
            GenusRule::Check
        }
    }
}

/// Graph operads: an operation is a graph, its inputs are its vertices and
/// `p ∘_i q` inserts `q` into vertex `i`. The color of an input is the
/// degree (and genus) of the vertex; the output color is the number of
/// leaves (and total genus).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GraphOperad {
    pub family: GraphFamily,
}

impl GraphOperad {
    pub fn new(family: GraphFamily) -> Self {
        Self { family }
    }

    fn tracks_genus(&self) -> bool {
        self.family == GraphFamily::MOpGenus
    }
}

/// Whether `g` is a tree rooted at leaf 0 with every vertex's slot 0 facing
/// the root.
pub fn is_rooted_tree(g: &GenusGraph) -> bool {
    if !g.is_connected() || g.betti() != 0 || g.leaf_count() == 0 {
        return false;
    }
    if g.genera().iter().any(|&x| x != 0) {
        return false;
    }
    let h0 = g.leaves()[0];
    if g.slot_of(h0) != 0 {
        return false;
    }
    match g.dfs_order(0) {
        Ok(t) => t.tree_edges.iter().all(|&(_, k)| g.slot_of(k) == 0),
        Err(_) => false,
    }
}

/// Rooted tree whose input leaves are numbered in planar order.
pub fn is_planar_tree(g: &GenusGraph) -> bool {
    is_rooted_tree(g)
        && g.dfs_order(0)
            .map(|t| t.leaf_order.iter().enumerate().all(|(i, &l)| i == l))
            .unwrap_or(false)
}

impl Operad for GraphOperad {
    type Op = GenusGraph;
    type Color = (usize, u32);

    fn arity(&self, p: &GenusGraph) -> usize {
        p.vertex_count()
    }

    fn input_color(&self, p: &GenusGraph, i: usize) -> (usize, u32) {
        let g = if self.tracks_genus() { p.genus(i - 1) } else { 0 };
        (p.degree(i - 1), g)
    }

    fn output_color(&self, p: &GenusGraph) -> (usize, u32) {
        let g = if self.tracks_genus() { p.total_genus() } else { 0 };
        (p.leaf_count(), g)
    }

    fn identity(&self, c: &(usize, u32)) -> GenusGraph {
        GenusGraph::corolla(c.0, c.1)
    }

    fn compose_at(&self, p: &GenusGraph, i: usize, q: &GenusGraph) -> Result<GenusGraph, OperadError> {
        check_slot(i, p.vertex_count())?;
        let want = self.input_color(p, i);
        let got = self.output_color(q);
        if want != got {
            return Err(OperadError::ColorMismatch {
                expected: format!("{want:?}"),
                found: format!("{got:?}"),
            });
        }
        Ok(insert_at(p, i - 1, q, self.family.rule())?)
    }

    fn sym_act(&self, p: &GenusGraph, sigma: &Perm) -> Result<GenusGraph, OperadError> {
        check_perm(sigma, p.vertex_count())?;
        Ok(p.reorder_vertices(sigma.images()))
    }

    fn contains(&self, p: &GenusGraph) -> bool {
        if p.vertex_count() == 0 || !p.is_connected() {
            return false;
        }
        match self.family {
            GraphFamily::POp => is_planar_tree(p),
            GraphFamily::SOp => is_rooted_tree(p),
            GraphFamily::COp => p.betti() == 0 && p.genera().iter().all(|&g| g == 0),
            GraphFamily::MOp => p.genera().iter().all(|&g| g == 0),
            GraphFamily::MOpGenus => true,
        }
    }
}

impl EnumerableOperad for GraphOperad {
    /// Only the tree families are enumerable; others return an empty list.
    fn operations(&self, output: &(usize, u32), arity: usize) -> Vec<GenusGraph> {
        let inputs = match output.0.checked_sub(1) {
            Some(k) => k,
            None => return Vec::new(),
        };
        match self.family {
            GraphFamily::POp => PlanarShape::all_with(inputs, arity)
                .into_iter()
                .flat_map(|s| {
                    Perm::all(arity)
                        .into_iter()
                        .map(move |v| s.to_graph(v.images(), None))
                })
                .collect(),
            GraphFamily::SOp => PlanarShape::all_with(inputs, arity)
                .into_iter()
                .flat_map(|s| {
                    let perms = Perm::all(arity);
                    Perm::all(inputs).into_iter().flat_map(move |l| {
                        let s = s.clone();
                        perms
                            .clone()
                            .into_iter()
                            .map(move |v| s.to_graph(v.images(), Some(l.images())))
                    })
                })
                .filter(|g| self.contains(g))
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect(),
            _ => Vec::new(),
        }
    }
}

// ---------------------------------------------------------------------------
// planar rooted trees

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Slot {
    Leaf,
    Child(usize),
}

/// A planar rooted tree with input leaves. Node 0 is the root; each node
/// lists its input slots left to right.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PlanarShape {
    pub nodes: Vec<Vec<Slot>>,
}

impl PlanarShape {
    pub fn corolla(inputs: usize) -> Self {
        Self {
            nodes: vec![vec![Slot::Leaf; inputs]],
        }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn input_count(&self) -> usize {
        self.nodes
            .iter()
            .map(|n| n.iter().filter(|s| matches!(s, Slot::Leaf)).count())
            .sum()
    }

    /// Nodes in preorder (root, then subtrees left to right).
    pub fn preorder(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![0];
        while let Some(v) = stack.pop() {
            out.push(v);
            for s in self.nodes[v].iter().rev() {
                if let Slot::Child(c) = s {
                    stack.push(*c);
                }
            }
        }
        out
    }

    /// Input leaves in planar order as `(node, position)`.
    pub fn planar_leaves(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        let mut stack = vec![(0, 0)];
        while let Some((v, k)) = stack.pop() {
            if k == self.nodes[v].len() {
                continue;
            }
            stack.push((v, k + 1));
            match self.nodes[v][k] {
                Slot::Leaf => out.push((v, k)),
                Slot::Child(c) => stack.push((c, 0)),
            }
        }
        out
    }

    /// Renumbers nodes in preorder.
    pub fn normalized(&self) -> Self {
        let order = self.preorder();
        let mut new_id = vec![0; self.nodes.len()];
        for (i, &v) in order.iter().enumerate() {
            new_id[v] = i;
        }
        Self {
            nodes: order
                .iter()
                .map(|&v| {
                    self.nodes[v]
                        .iter()
                        .map(|s| match s {
                            Slot::Leaf => Slot::Leaf,
                            Slot::Child(c) => Slot::Child(new_id[*c]),
                        })
                        .collect()
                })
                .collect(),
        }
    }

    /// All trees obtained by moving a contiguous run of one node's slots
    /// onto a new child placed where the run was.
    pub fn splits(&self) -> Vec<PlanarShape> {
        let mut out = Vec::new();
        for v in 0..self.nodes.len() {
            let d = self.nodes[v].len();
            for a in 0..=d {
                for b in a..=d {
                    out.push(self.split(v, a, b));
                }
            }
        }
        out
    }

    pub fn split(&self, v: usize, a: usize, b: usize) -> PlanarShape {
        let mut nodes = self.nodes.clone();
        let w = nodes.len();
        let run: Vec<Slot> = nodes[v].drain(a..b).collect();
        nodes[v].insert(a, Slot::Child(w));
        nodes.push(run);
        PlanarShape { nodes }.normalized()
    }

    /// All shapes with `inputs` input leaves and exactly `count` nodes.
    pub fn all_with(inputs: usize, count: usize) -> Vec<PlanarShape> {
        if count == 0 {
            return Vec::new();
        }
        let mut layer: BTreeSet<PlanarShape> = BTreeSet::new();
        layer.insert(PlanarShape::corolla(inputs));
        for _ in 1..count {
            layer = layer.iter().flat_map(|s| s.splits()).collect();
        }
        layer.into_iter().collect()
    }

    /// All shapes without input leaves and exactly `count` nodes.
    pub fn all_closed(count: usize) -> Vec<PlanarShape> {
        Self::all_with(0, count)
    }

    /// Graph with slot 0 of each node facing the root, root leaf 0, and
    /// input leaves numbered in planar order (or by `leaf_perm` if given,
    /// planar leaf `k` becoming input `leaf_perm[k] + 1`). Node `v` becomes
    /// vertex `vertex_pos[v]`.
    pub fn to_graph(&self, vertex_pos: &[usize], leaf_perm: Option<&[usize]>) -> GenusGraph {
        let n = self.nodes.len();
        let degrees_by_node: Vec<usize> = self.nodes.iter().map(|s| s.len() + 1).collect();
        let mut degrees = vec![0; n];
        for v in 0..n {
            degrees[vertex_pos[v]] = degrees_by_node[v];
        }
        let mut edges = Vec::new();
        for (v, slots) in self.nodes.iter().enumerate() {
            for (k, s) in slots.iter().enumerate() {
                if let Slot::Child(c) = s {
                    edges.push(((vertex_pos[v], k + 1), (vertex_pos[*c], 0)));
                }
            }
        }
        let planar_leaves: Vec<(usize, usize)> = self
            .planar_leaves()
            .into_iter()
            .map(|(v, k)| (vertex_pos[v], k + 1))
            .collect();
        let mut leaves = vec![(vertex_pos[0], 0)];
        let mut inputs = vec![(0, 0); planar_leaves.len()];
        for (k, &h) in planar_leaves.iter().enumerate() {
            let idx = leaf_perm.map_or(k, |p| p[k]);
            inputs[idx] = h;
        }
        leaves.extend(inputs);
        GenusGraph::from_parts(vec![0; n], &degrees, &edges, &leaves).expect("planar shape is valid")
    }

    /// Recovers the shape of a rooted tree together with the vertex of each
    /// node and the input index of each planar leaf.
    pub fn from_graph(g: &GenusGraph) -> Option<(PlanarShape, Vec<usize>, Vec<usize>)> {
        if !is_rooted_tree(g) {
            return None;
        }
        let root = g.vertex_of(g.leaves()[0]);
        let mut node_of_vertex = vec![usize::MAX; g.vertex_count()];
        let mut vertex_of_node = vec![root];
        node_of_vertex[root] = 0;
        let mut nodes: Vec<Vec<Slot>> = vec![Vec::new()];
        let mut leaf_indices = Vec::new();
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            let mut kids = Vec::new();
            for s in 1..g.degree(v) {
                let h = g.half_edge(v, s);
                match g.partner(h) {
                    None => kids.push(Slot::Leaf),
                    Some(k) => {
                        let w = g.vertex_of(k);
                        node_of_vertex[w] = vertex_of_node.len();
                        vertex_of_node.push(w);
                        nodes.push(Vec::new());
                        kids.push(Slot::Child(node_of_vertex[w]));
                    }
                }
            }
            nodes[node_of_vertex[v]] = kids;
            for s in (1..g.degree(v)).rev() {
                if let Some(k) = g.partner(g.half_edge(v, s)) {
                    stack.push(g.vertex_of(k));
                }
            }
        }
        let raw = PlanarShape { nodes };
        let order = raw.preorder();
        let shape = raw.normalized();
        let vertex_of_node: Vec<usize> = order.iter().map(|&v| vertex_of_node[v]).collect();
        for (v, k) in shape.planar_leaves() {
            let h = g.half_edge(vertex_of_node[v], k + 1);
            leaf_indices.push(g.leaf_index(h).unwrap());
        }
        Some((shape, vertex_of_node, leaf_indices))
    }
}

// ---------------------------------------------------------------------------
// free symmetric operad

/// Element of the free symmetric operad: a tree of generators whose leaves
/// carry the input labels `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FreeTree {
    Leaf(usize),
    Node(String, Vec<FreeTree>),
}

impl FreeTree {
    pub fn node(name: &str, children: Vec<FreeTree>) -> Self {
        FreeTree::Node(name.to_string(), children)
    }

    pub fn leaf_labels(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<usize>) {
        match self {
            FreeTree::Leaf(i) => out.push(*i),
            FreeTree::Node(_, cs) => cs.iter().for_each(|c| c.collect_leaves(out)),
        }
    }

    fn relabel(&self, f: &dyn Fn(usize) -> usize) -> FreeTree {
        match self {
            FreeTree::Leaf(i) => FreeTree::Leaf(f(*i)),
            FreeTree::Node(n, cs) => FreeTree::Node(n.clone(), cs.iter().map(|c| c.relabel(f)).collect()),
        }
    }

    /// Replaces leaf `i` by `q` (already shifted) and shifts the leaves
    /// after `i` by `m - 1`.
    fn substitute(&self, i: usize, m: usize, q: &FreeTree) -> FreeTree {
        match self {
            FreeTree::Leaf(j) if *j == i => q.clone(),
            FreeTree::Leaf(j) if *j > i => FreeTree::Leaf(j + m - 1),
            FreeTree::Leaf(j) => FreeTree::Leaf(*j),
            FreeTree::Node(n, cs) => FreeTree::Node(n.clone(), cs.iter().map(|c| c.substitute(i, m, q)).collect()),
        }
    }
}

impl fmt::Display for FreeTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FreeTree::Leaf(i) => write!(f, "{i}"),
            FreeTree::Node(n, cs) => {
                write!(f, "{n}(")?;
                for (k, c) in cs.iter().enumerate() {
                    if k > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FreeOperad {
    pub generators: BTreeMap<String, usize>,
}

impl FreeOperad {
    pub fn new<'a>(gens: impl IntoIterator<Item = (&'a str, usize)>) -> Self {
        Self {
            generators: gens.into_iter().map(|(n, a)| (n.to_string(), a)).collect(),
        }
    }

    /// The generator as an operation with inputs in order.
    pub fn generator(&self, name: &str) -> Option<FreeTree> {
        let &a = self.generators.get(name)?;
        Some(FreeTree::node(name, (1..=a).map(FreeTree::Leaf).collect()))
    }

    fn well_formed(&self, t: &FreeTree) -> bool {
        match t {
            FreeTree::Leaf(_) => true,
            FreeTree::Node(n, cs) => {
                self.generators.get(n) == Some(&cs.len()) && cs.iter().all(|c| self.well_formed(c))
            }
        }
    }
}

impl Operad for FreeOperad {
    type Op = FreeTree;
    type Color = ();

    fn arity(&self, p: &FreeTree) -> usize {
        p.leaf_labels().len()
    }

    fn input_color(&self, _: &FreeTree, _: usize) {}

    fn output_color(&self, _: &FreeTree) {}

    fn identity(&self, _: &()) -> FreeTree {
        FreeTree::Leaf(1)
    }

    fn compose_at(&self, p: &FreeTree, i: usize, q: &FreeTree) -> Result<FreeTree, OperadError> {
        check_slot(i, self.arity(p))?;
        let m = self.arity(q);
        let shifted_q = q.relabel(&|j| j + i - 1);
        Ok(p.substitute(i, m, &shifted_q))
    }

    fn sym_act(&self, p: &FreeTree, sigma: &Perm) -> Result<FreeTree, OperadError> {
        check_perm(sigma, self.arity(p))?;
        Ok(p.relabel(&|j| sigma.apply(j - 1) + 1))
    }

    fn contains(&self, p: &FreeTree) -> bool {
        let mut labels = p.leaf_labels();
        labels.sort_unstable();
        self.well_formed(p) && labels.iter().enumerate().all(|(k, &l)| l == k + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ucom() -> TableOperad {
        TableOperad::new(TableFamily::UCom)
    }

    fn uas() -> TableOperad {
        TableOperad::new(TableFamily::UAs)
    }

    #[test]
    fn perm_basics() {
        let s = Perm::from_one_line(&[2, 3, 1]).unwrap();
        assert_eq!(s.apply(0), 1);
        assert_eq!(s.inverse().after(&s), Perm::identity(3));
        assert!(Perm::from_one_line(&[1, 1]).is_err());
        assert_eq!(Perm::ranks(&[5, 2, 9]).one_line(), vec![2, 1, 3]);
        assert_eq!(Perm::all(3).len(), 6);
        assert_eq!(s.to_string(), "(231)");
    }

    #[test]
    fn ucom_composition() {
        let e2 = Word::identity(2);
        let e3 = Word::identity(3);
        assert_eq!(ucom().compose_at(&e2, 1, &e3).unwrap(), Word::identity(4));
        let s = Perm::from_one_line(&[1, 3, 2]).unwrap();
        assert_eq!(ucom().sym_act(&e3, &s).unwrap(), e3);
        assert!(matches!(
            ucom().compose_at(&e2, 3, &e3),
            Err(OperadError::SlotOutOfRange { .. })
        ));
    }

    #[test]
    fn uas_words() {
        // x1 x2 ∘_1 x2 x1 = x2 x1 x3
        let p = Word(vec![1, 2]);
        let q = Word(vec![2, 1]);
        assert_eq!(uas().compose_at(&p, 1, &q).unwrap(), Word(vec![2, 1, 3]));
        assert_eq!(uas().compose_at(&p, 2, &Word(vec![])).unwrap(), Word(vec![1]));
        assert_eq!(uas().operations(&(), 3).len(), 6);
        let s = Perm::from_one_line(&[2, 1]).unwrap();
        let t = Perm::from_one_line(&[2, 1]).unwrap();
        let once = uas().sym_act(&p, &s).unwrap();
        assert_eq!(uas().sym_act(&once, &t).unwrap(), uas().sym_act(&p, &t.after(&s)).unwrap());
    }

    #[test]
    fn nu_restriction() {
        let nu = NonUnital(ucom());
        assert!(!nu.contains(&Word::identity(0)));
        assert!(nu.contains(&Word::identity(1)));
        assert!(nu.operations(&(), 0).is_empty());
        let as_op = TableOperad::new(TableFamily::As);
        assert!(!as_op.contains(&Word(vec![])));
        let gn = NonUnital(GraphOperad::new(GraphFamily::MOpGenus));
        assert!(gn.contains(&GenusGraph::corolla(1, 1)));
    }

    #[test]
    fn planar_shapes() {
        // planar trees with n nodes and no inputs: Catalan numbers
        let counts: Vec<usize> = (1..=5).map(|n| PlanarShape::all_closed(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 14]);
        let pop = GraphOperad::new(GraphFamily::POp);
        for s in PlanarShape::all_with(3, 4) {
            let g = s.to_graph(&[0, 1, 2, 3], None);
            assert!(pop.contains(&g), "{s:?}");
            let (back, vs, leaves) = PlanarShape::from_graph(&g).unwrap();
            assert_eq!(back, s);
            assert_eq!(vs, vec![0, 1, 2, 3]);
            assert_eq!(leaves, vec![1, 2, 3]);
        }
    }

    #[test]
    fn graph_insertion_composition() {
        let pop = GraphOperad::new(GraphFamily::POp);
        let t = PlanarShape::corolla(2).split(0, 0, 1).to_graph(&[0, 1], None);
        assert!(pop.contains(&t));
        // inserting a two-vertex tree into the first vertex of t
        let part = PlanarShape::corolla(2).split(0, 1, 2).to_graph(&[0, 1], None);
        let got = pop.compose_at(&t, 1, &part).unwrap();
        assert_eq!(got.vertex_count(), 3);
        assert!(pop.contains(&got));
        let bad = GenusGraph::corolla(4, 0);
        assert!(matches!(pop.compose_at(&t, 1, &bad), Err(OperadError::ColorMismatch { .. })));
        // swapping the vertex order changes the operation
        let s = Perm::from_one_line(&[2, 1]).unwrap();
        assert_ne!(pop.sym_act(&t, &s).unwrap(), t);
    }

    #[test]
    fn free_operad_substitution() {
        let free = FreeOperad::new([("p", 2), ("q", 1)]);
        let p = free.generator("p").unwrap();
        let q = free.generator("q").unwrap();
        let got = free.compose_at(&p, 2, &q).unwrap();
        assert_eq!(got, FreeTree::node("p", vec![FreeTree::Leaf(1), FreeTree::node("q", vec![FreeTree::Leaf(2)])]));
        assert!(free.contains(&got));
        assert_eq!(got.to_string(), "p(1,q(2))");
        let e = FreeOperad::new([("p", 2), ("e", 0)]);
        let pe = e.compose_at(&e.generator("p").unwrap(), 1, &e.generator("e").unwrap()).unwrap();
        assert_eq!(pe.to_string(), "p(e(),1)");
    }
}
