//! Probes of the divisibility preorder on morphisms out of a fixed object:
//! witness search, antichains, comparable pairs in sequences, the planar
//! tree category and colored graphs.

pub mod colors;
pub mod pt;

use std::collections::BTreeMap;

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::catconstruct::{compose2, source_of2, TwoLevelTree};
use crate::category::Category;
use crate::finsetcats::{FinMap, GradedSurjection};
use crate::graphcats::{normalize_d, random_cop_morphism, GraphMorphism};
use crate::halfedge::GenusGraph;
use crate::operads::{GraphFamily, GraphOperad, PlanarShape, Slot};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProbeError {
    #[error("no comparable pair among {pairs} pairs")]
    NotFound { pairs: usize },
}

/// A witness `h` with `h ∘ f = g`, if one exists in the category's hom-set
/// from the target of `f` to the target of `g`.
pub fn leq<C: Category>(cat: &C, f: &C::Mor, g: &C::Mor) -> Option<C::Mor> {
    if cat.source(f) != cat.source(g) {
        return None;
    }
    let (a, b) = (cat.target(f), cat.target(g));
    cat.hom(&a, &b)
        .into_iter()
        .find(|h| cat.compose(h, f).as_ref() == Ok(g))
}

/// Finds `k` pairwise incomparable morphisms among `candidates`, returned as
/// indices.
pub fn antichain_search<C: Category>(cat: &C, candidates: &[C::Mor], k: usize) -> Option<Vec<usize>> {
    let n = candidates.len();
    let mut comparable = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i != j && leq(cat, &candidates[i], &candidates[j]).is_some() {
                comparable[i][j] = true;
                comparable[j][i] = true;
            }
        }
    }
    fn grow(start: usize, chosen: &mut Vec<usize>, k: usize, comparable: &[Vec<bool>]) -> bool {
        if chosen.len() == k {
            return true;
        }
        for c in start..comparable.len() {
            if chosen.iter().all(|&x| !comparable[x][c]) {
                chosen.push(c);
                if grow(c + 1, chosen, k, comparable) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    let mut chosen = Vec::new();
    grow(0, &mut chosen, k, &comparable).then_some(chosen)
}

/// `seq[i] ≤ seq[j]` with `i < j`, certified by `witness`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Comparable<M> {
    pub i: usize,
    pub j: usize,
    pub witness: M,
}

/// Looks for `i < j` with `seq[i] ≤ seq[j]`. Pairs accepted by `hint` are
/// tried first; every pair is eventually tried. The result is certified by
/// [`leq`].
pub fn comparable_pair<C: Category>(
    cat: &C,
    seq: &[C::Mor],
    hint: &dyn Fn(&C::Mor, &C::Mor) -> bool,
) -> Result<Comparable<C::Mor>, ProbeError> {
    let n = seq.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
    let (likely, rest): (Vec<_>, Vec<_>) = pairs.iter().partition(|&&(i, j)| hint(&seq[i], &seq[j]));
    for &(i, j) in likely.iter().chain(&rest) {
        if let Some(witness) = leq(cat, &seq[i], &seq[j]) {
            return Ok(Comparable { i, j, witness });
        }
    }
    Err(ProbeError::NotFound { pairs: pairs.len() })
}

// ---------------------------------------------------------------------------
// bucketing hints

/// A planar tree with chains of unary vertices contracted, in preorder:
/// the shape (arity of each remaining node, `None` for a leaf) and the
/// number of contracted vertices directly below each item.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Homeomorphism {
    pub shape: Vec<Option<usize>>,
    pub chains: Vec<usize>,
}

impl Homeomorphism {
    pub fn of_shape(s: &PlanarShape) -> Self {
        let mut h = Homeomorphism {
            shape: Vec::new(),
            chains: Vec::new(),
        };
        h.walk(s, Slot::Child(0));
        h
    }

    pub fn of_tree(g: &GenusGraph) -> Option<Self> {
        PlanarShape::from_graph(g).map(|(s, _, _)| Self::of_shape(&s))
    }

    fn walk(&mut self, s: &PlanarShape, mut at: Slot) {
        let mut chain = 0;
        while let Slot::Child(v) = at {
            if s.nodes[v].len() != 1 {
                break;
            }
            chain += 1;
            at = s.nodes[v][0];
        }
        self.chains.push(chain);
        match at {
            Slot::Leaf => self.shape.push(None),
            Slot::Child(v) => {
                self.shape.push(Some(s.nodes[v].len()));
                for &c in &s.nodes[v] {
                    self.walk(s, c);
                }
            }
        }
    }

    /// Same shape and no chain shorter than in `self`.
    pub fn below(&self, other: &Self) -> bool {
        self.shape == other.shape && self.chains.iter().zip(&other.chains).all(|(a, b)| a <= b)
    }
}

/// Hint for tree categories: every inserted tree of `f` is homeomorphic to
/// the corresponding one of `g` with no more unary vertices on each chain.
pub fn tree_hint(f: &GraphMorphism, g: &GraphMorphism) -> bool {
    f.uppers.iter().zip(&g.uppers).all(|(a, b)| {
        match (Homeomorphism::of_tree(a), Homeomorphism::of_tree(b)) {
            (Some(x), Some(y)) => x.below(&y),
            _ => false,
        }
    })
}

/// Hint for graded surjections: no fewer elements and no smaller total
/// grading.
pub fn gos_hint(f: &GradedSurjection, g: &GradedSurjection) -> bool {
    f.n() <= g.n() && f.total_grading() <= g.total_grading()
}

// ---------------------------------------------------------------------------
// generators of probe data

/// Random morphism out of `p` in the subcategory of depth-first ordered
/// planar trees, with at most `max_vertices` target vertices.
pub fn random_d_morphism<R: Rng>(rng: &mut R, p: &GenusGraph, max_vertices: usize) -> GraphMorphism {
    let op = GraphOperad::new(GraphFamily::POp);
    let extra = rng.gen_range(0..=max_vertices.saturating_sub(p.vertex_count()));
    let f = random_cop_morphism(rng, GraphFamily::POp, p, extra);
    let y = source_of2(&op, &f).expect("random morphism is valid");
    let (_, iso) = normalize_d(&y).expect("trees are connected");
    compose2(&op, &f, &iso).expect("composable")
}

/// Random morphism out of `n` in `gOS^op`: an ordered surjection from at
/// most `max_size` elements onto `n` with gradings at most `max_grading`.
pub fn random_gos_op<R: Rng>(rng: &mut R, n: usize, max_size: usize, max_grading: u32) -> GradedSurjection {
    let m = rng.gen_range(n..=max_size.max(n));
    let maps = FinMap::ordered_surjections(m, n);
    let map = maps[rng.gen_range(0..maps.len())].clone();
    let grading = (0..n).map(|_| rng.gen_range(0..=max_grading)).collect();
    GradedSurjection::new(map, grading).expect("ordered surjection")
}

/// The graph on two vertices joined by `i + 1` parallel edges, leaf 0 at the
/// first vertex and leaf 1 at the second.
pub fn banana(i: usize) -> GenusGraph {
    let edges: Vec<((usize, usize), (usize, usize))> = (0..=i).map(|k| ((0, k + 1), (1, k + 1))).collect();
    GenusGraph::from_parts(vec![0, 0], &[i + 2, i + 2], &edges, &[(0, 0), (1, 0)]).expect("valid graph")
}

/// Morphisms `id₁ → banana(i)` in `C(mOp)^op`, for `i` in `range`.
pub fn banana_sequence(range: impl IntoIterator<Item = usize>) -> Vec<GraphMorphism> {
    range
        .into_iter()
        .map(|i| TwoLevelTree {
            target: GenusGraph::corolla(2, 0),
            uppers: vec![banana(i)],
            labels: vec![vec![1, 2]],
        })
        .collect()
}

/// Counts pairs by comparability, for reports.
pub fn comparability_table<C: Category>(cat: &C, ms: &[C::Mor]) -> BTreeMap<(usize, usize), bool> {
    let mut out = BTreeMap::new();
    for i in 0..ms.len() {
        for j in 0..ms.len() {
            if i != j {
                out.insert((i, j), leq(cat, &ms[i], &ms[j]).is_some());
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphcats::{d_objects, GraphCOp};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn pop() -> GraphCOp {
        GraphCOp {
            operad: GraphOperad::new(GraphFamily::POp),
        }
    }

    #[test]
    fn leq_finds_composite() {
        let cat = pop();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let p = d_objects(2, 2)[0].clone();
        let f = random_d_morphism(&mut rng, &p, 4);
        let h = random_d_morphism(&mut rng, &cat.target(&f), 6);
        let g = cat.compose(&h, &f).unwrap();
        let w = leq(&cat, &f, &g).unwrap();
        assert_eq!(cat.compose(&w, &f).unwrap(), g);
    }

    #[test]
    fn extra_unary_vertex_is_above() {
        // a corolla and the same corolla with a unary vertex grafted on a leaf
        let cat = pop();
        let p = d_objects(2, 1)[0].clone();
        let f = cat.identity(&p);
        let shape = PlanarShape::corolla(2).split(0, 1, 2);
        let q = shape.to_graph(&[0, 1], None);
        let g = TwoLevelTree {
            target: p,
            uppers: vec![q],
            labels: vec![vec![1, 2]],
        };
        assert!(leq(&cat, &f, &g).is_some());
        assert!(leq(&cat, &g, &f).is_none());
    }

    #[test]
    fn banana_antichain() {
        let cat = GraphCOp {
            operad: GraphOperad::new(GraphFamily::MOp),
        };
        let seq = banana_sequence(1..=4);
        assert_eq!(antichain_search(&cat, &seq, 4), Some(vec![0, 1, 2, 3]));
        assert!(comparable_pair(&cat, &seq, &|_, _| true).is_err());
        assert_eq!(antichain_search(&cat, &seq[..1], 1), Some(vec![0]));
    }

    #[test]
    fn constant_sequence() {
        let cat = pop();
        let p = d_objects(1, 2)[0].clone();
        let f = cat.identity(&p);
        let c = comparable_pair(&cat, &[f.clone(), f.clone()], &tree_hint).unwrap();
        assert_eq!((c.i, c.j), (0, 1));
        assert_eq!(c.witness, cat.identity(&p));
    }

    #[test]
    fn gos_probe_data() {
        use crate::category::Opposite;
        use crate::finsetcats::GosCat;
        let cat = Opposite(GosCat {
            max_size: 5,
            max_grading: 3,
        });
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let seq: Vec<_> = (0..12).map(|_| random_gos_op(&mut rng, 2, 5, 3)).collect();
        assert!(seq.iter().all(|f| f.m() == 2 && f.n() <= 5));
        let c = comparable_pair(&cat, &seq, &gos_hint).unwrap();
        assert_eq!(cat.compose(&c.witness, &seq[c.i]).unwrap(), seq[c.j]);
    }

    #[test]
    fn homeomorphism_types() {
        let a = PlanarShape::corolla(2);
        let b = a.split(0, 0, 1).split(0, 0, 1);
        let (ha, hb) = (Homeomorphism::of_shape(&a), Homeomorphism::of_shape(&b));
        assert_eq!(ha.shape, hb.shape);
        assert!(ha.below(&hb));
        assert!(!hb.below(&ha));
    }
}
