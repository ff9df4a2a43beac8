//! Submodules that need a new generator at infinitely many objects, made
//! finite: the twisted arrow category of planar-free rooted trees, and
//! connected surfaces.

use serde::Serialize;

use super::{min_generators_by_degree, submodule_span, Constant, Field, GrowthReport, Lab, Module, Principal, Subspace, Q};
use crate::category::{Category, Truncation};
use crate::cobordism::{CsCat, Surface};
use crate::graphcats::GraphTw;
use crate::halfedge::GenusGraph;
use crate::operads::{GraphFamily, GraphOperad, PlanarShape, Slot};

/// Vertex count, total genus and number of leaves (root included).
pub fn graph_degree(g: &GenusGraph) -> usize {
    g.vertex_count() + g.total_genus() as usize + g.leaf_count()
}

pub fn surface_degree(s: &Surface) -> usize {
    s.genus as usize + s.boundary
}

/// The corolla with two inputs.
pub fn id2() -> GenusGraph {
    PlanarShape::corolla(2).to_graph(&[0], None)
}

/// A root vertex with `a` inputs, the first of them carrying a vertex with
/// `b` inputs.
pub fn two_vertex_tree(a: usize, b: usize) -> GenusGraph {
    assert!(a >= 1);
    let mut root = vec![Slot::Leaf; a];
    root[0] = Slot::Child(1);
    PlanarShape {
        nodes: vec![root, vec![Slot::Leaf; b]],
    }
    .to_graph(&[0, 1], None)
}

/// The tree `p_i`: root with two inputs, the first carrying an `i`-ary vertex.
pub fn p(i: usize) -> GenusGraph {
    two_vertex_tree(2, i)
}

/// One tree per isomorphism class with at most two vertices and degree at
/// most `max_degree`.
pub fn omega_objects(max_degree: usize) -> Vec<GenusGraph> {
    let mut out = Vec::new();
    for k in 0..max_degree {
        let t = PlanarShape::corolla(k).to_graph(&[0], None);
        if graph_degree(&t) <= max_degree {
            out.push(t);
        }
    }
    for a in 1..max_degree {
        for b in 0..max_degree {
            let t = two_vertex_tree(a, b);
            if graph_degree(&t) <= max_degree {
                out.push(t);
            }
        }
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct OmegaReport {
    pub growth: GrowthReport,
    /// `(i, new generators at p_i)`.
    pub at_p: Vec<(usize, usize)>,
    pub objects: usize,
}

/// `M = ℚ Hom(id₂, −)` over `Tw(sOp)` truncated to trees with at most two
/// vertices up to the degree of `p_{k_max}`, and `N` equal to `M` on trees
/// with at least three inputs and zero elsewhere.
pub fn omega_counterexample(k_max: usize) -> OmegaReport {
    let cat = GraphTw {
        operad: GraphOperad::new(GraphFamily::SOp),
    };
    let objects = omega_objects(graph_degree(&p(k_max)));
    let lab = Lab::new(&cat, objects);
    let m: Principal<GraphTw, Q> = Principal::new(&lab, &id2());
    let n: Vec<Subspace<Q>> = lab
        .objects
        .iter()
        .map(|x| {
            if x.leaf_count() >= 4 {
                Subspace::full(m.dim(x))
            } else {
                Subspace::zero(m.dim(x))
            }
        })
        .collect();
    let growth = min_generators_by_degree(&lab, &m, &n, &graph_degree);
    let at_p = (3..=k_max)
        .map(|i| {
            let k = lab.position(&p(i)).expect("p_i is listed");
            (i, growth.row(k).map_or(0, |r| r.new_generators))
        })
        .collect();
    OmegaReport {
        growth,
        at_p,
        objects: lab.len(),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SurfaceReport {
    pub growth: GrowthReport,
    /// `(genus, new generators at the closed surface)`.
    pub closed: Vec<(u32, usize)>,
    /// Whether the hemisphere alone generates the constant module.
    pub hemisphere_generates: bool,
}

/// The constant module `ℚ` over connected surfaces of genus at most
/// `max_genus` with at most two boundary circles, and the submodule that
/// vanishes on surfaces with boundary.
pub fn surface_counterexample(max_genus: u32) -> SurfaceReport {
    let cat = CsCat {
        nc: false,
        max_boundary: 2,
        max_genus,
    };
    let lab = Lab::of_truncation(&cat);
    let c = Constant::<Q>::default();
    let n: Vec<Subspace<Q>> = lab
        .objects
        .iter()
        .map(|s| if s.boundary == 0 { Subspace::full(1) } else { Subspace::zero(1) })
        .collect();
    let growth = min_generators_by_degree(&lab, &c, &n, &surface_degree);
    let disc = lab.position(&Surface { genus: 0, boundary: 1 }).expect("listed");
    let hemisphere_generates = submodule_span(&lab, &c, &[(disc, vec![Q::from_int(1)])])
        .iter()
        .all(|s| s.dim() == 1);
    let closed = (0..=max_genus)
        .map(|g| {
            let k = lab.position(&Surface { genus: g, boundary: 0 }).expect("listed");
            (g, growth.row(k).map_or(0, |r| r.new_generators))
        })
        .collect();
    debug_assert_eq!(lab.len(), cat.objects().len());
    SurfaceReport {
        growth,
        closed,
        hemisphere_generates,
    }
}

/// Objects `q` with at least three inputs admitting morphisms to both
/// targets.
pub fn common_sources(cat: &GraphTw, objects: &[GenusGraph], a: &GenusGraph, b: &GenusGraph) -> Vec<GenusGraph> {
    objects
        .iter()
        .filter(|q| q.leaf_count() >= 4 && !cat.hom(q, a).is_empty() && !cat.hom(q, b).is_empty())
        .cloned()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p_shapes() {
        let p3 = p(3);
        assert_eq!(p3.vertex_count(), 2);
        assert_eq!(p3.leaf_count(), 5);
        assert_eq!(graph_degree(&p3), 7);
        assert_eq!(id2().leaf_count(), 3);
    }

    #[test]
    fn unique_morphism_up_to_automorphism() {
        let cat = GraphTw {
            operad: GraphOperad::new(GraphFamily::SOp),
        };
        for i in 3..=4 {
            let homs = cat.hom(&id2(), &p(i));
            let auts = cat.hom(&id2(), &id2());
            assert!(!homs.is_empty());
            assert!(homs.len() <= auts.len());
        }
    }

    #[test]
    fn surfaces_small() {
        let rep = surface_counterexample(2);
        assert!(rep.growth.closed);
        assert!(rep.closed.iter().all(|&(_, k)| k == 1));
        assert!(rep.hemisphere_generates);
    }

    #[test]
    fn omega_small() {
        let rep = omega_counterexample(4);
        assert!(rep.growth.closed);
        assert!(rep.at_p.iter().all(|&(_, k)| k >= 1));
    }
}
