//! The category of planar rooted trees (vertices only) and the functors
//! between it and depth-first ordered planar operadic trees.
//!
//! A morphism `T → T′` sends the root to the root and the children of each
//! vertex, left to right, to pairwise incomparable strict descendants of
//! its image, left to right.

use crate::catconstruct::{source_of2, TwoLevelTree};
use crate::category::{CatError, Category, Truncation};
use crate::graphcats::GraphMorphism;
use crate::halfedge::GenusGraph;
use crate::operads::{GraphFamily, GraphOperad, PlanarShape, Slot};

/// Preorder-normalized planar tree without input leaves.
pub type PlanarTree = PlanarShape;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PtMorphism {
    pub source: PlanarTree,
    pub target: PlanarTree,
    pub map: Vec<usize>,
}

fn children(t: &PlanarTree, v: usize) -> Vec<usize> {
    t.nodes[v]
        .iter()
        .filter_map(|s| match s {
            Slot::Child(c) => Some(*c),
            Slot::Leaf => None,
        })
        .collect()
}

/// Subtree sizes; in preorder the subtree of `v` is `v..v + size[v]`.
fn sizes(t: &PlanarTree) -> Vec<usize> {
    let n = t.node_count();
    let mut size = vec![1; n];
    for v in (0..n).rev() {
        for c in children(t, v) {
            size[v] += size[c];
        }
    }
    size
}

fn parents(t: &PlanarTree) -> Vec<Option<usize>> {
    let mut p = vec![None; t.node_count()];
    for v in 0..t.node_count() {
        for c in children(t, v) {
            p[c] = Some(v);
        }
    }
    p
}

pub fn is_pt_morphism(f: &PtMorphism) -> bool {
    let (s, t) = (&f.source, &f.target);
    if f.map.len() != s.node_count() || f.map.first() != Some(&0) {
        return false;
    }
    let size = sizes(t);
    (0..s.node_count()).all(|v| {
        let fv = f.map[v];
        let mut lo = fv + 1;
        children(s, v).into_iter().all(|w| {
            let u = f.map[w];
            let ok = u >= lo && u < fv + size[fv];
            lo = u + size.get(u).copied().unwrap_or(0);
            ok
        })
    })
}

/// All morphisms `s → t`.
pub fn pt_homs(s: &PlanarTree, t: &PlanarTree) -> Vec<PtMorphism> {
    let n = s.node_count();
    let size = sizes(t);
    let parent = parents(s);
    let mut out = Vec::new();
    let mut map = vec![usize::MAX; n];
    // preorder: parents and left siblings are assigned first
    fn go(
        v: usize,
        s: &PlanarTree,
        t: &PlanarTree,
        parent: &[Option<usize>],
        size: &[usize],
        map: &mut Vec<usize>,
        out: &mut Vec<PtMorphism>,
    ) {
        if v == s.node_count() {
            out.push(PtMorphism {
                source: s.clone(),
                target: t.clone(),
                map: map.clone(),
            });
            return;
        }
        let Some(p) = parent[v] else {
            map[v] = 0;
            go(v + 1, s, t, parent, size, map, out);
            return;
        };
        let fp = map[p];
        let sibs = children(s, p);
        let pos = sibs.iter().position(|&c| c == v).unwrap();
        let lo = if pos == 0 {
            fp + 1
        } else {
            let a = map[sibs[pos - 1]];
            a + size[a]
        };
        for u in lo..fp + size[fp] {
            map[v] = u;
            go(v + 1, s, t, parent, size, map, out);
        }
        map[v] = usize::MAX;
    }
    if n > 0 && t.node_count() > 0 {
        go(0, s, t, &parent, &size, &mut map, &mut out);
    }
    out
}

/// Planar trees with at most `max` vertices, truncating the category.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PtCat {
    pub max_vertices: usize,
}

impl Category for PtCat {
    type Obj = PlanarTree;
    type Mor = PtMorphism;

    fn source(&self, f: &PtMorphism) -> PlanarTree {
        f.source.clone()
    }
    fn target(&self, f: &PtMorphism) -> PlanarTree {
        f.target.clone()
    }
    fn identity(&self, x: &PlanarTree) -> PtMorphism {
        PtMorphism {
            source: x.clone(),
            target: x.clone(),
            map: (0..x.node_count()).collect(),
        }
    }
    fn compose(&self, g: &PtMorphism, f: &PtMorphism) -> Result<PtMorphism, CatError> {
        if f.target != g.source {
            return Err(CatError::NotComposable("planar tree maps".into()));
        }
        Ok(PtMorphism {
            source: f.source.clone(),
            target: g.target.clone(),
            map: f.map.iter().map(|&v| g.map[v]).collect(),
        })
    }
    fn hom(&self, a: &PlanarTree, b: &PlanarTree) -> Vec<PtMorphism> {
        pt_homs(a, b)
    }
}

impl Truncation for PtCat {
    fn objects(&self) -> Vec<PlanarTree> {
        (1..=self.max_vertices).flat_map(PlanarShape::all_closed).collect()
    }
}

/// The operadic tree with the same vertices and only the root leaf.
pub fn g_pt(t: &PlanarTree) -> GenusGraph {
    let id: Vec<usize> = (0..t.node_count()).collect();
    t.to_graph(&id, None)
}

/// Inserts into each vertex `v` the part of the target between `f(v)` and
/// the images of the children of `v`.
pub fn g_pt_mor(f: &PtMorphism) -> GraphMorphism {
    let (s, t) = (&f.source, &f.target);
    let size = sizes(t);
    let mut uppers = Vec::with_capacity(s.node_count());
    let mut labels = Vec::with_capacity(s.node_count());
    for v in 0..s.node_count() {
        let fv = f.map[v];
        let cut: Vec<usize> = children(s, v).into_iter().map(|w| f.map[w]).collect();
        let region: Vec<usize> = (fv..fv + size[fv])
            .filter(|&u| !cut.iter().any(|&c| u >= c && u < c + size[c]))
            .collect();
        let local = |u: usize| region.binary_search(&u).unwrap();
        let mut edges = Vec::new();
        let mut leaves = vec![(0, 0)];
        let mut above = vec![(0, 0); cut.len()];
        for &u in &region {
            for (k, c) in children(t, u).into_iter().enumerate() {
                match cut.iter().position(|&x| x == c) {
                    Some(i) => above[i] = (local(u), k + 1),
                    None => edges.push(((local(u), k + 1), (local(c), 0))),
                }
            }
        }
        leaves.extend(above);
        let degrees: Vec<usize> = region.iter().map(|&u| t.nodes[u].len() + 1).collect();
        let part = GenusGraph::from_parts(vec![0; region.len()], &degrees, &edges, &leaves).expect("region is a tree");
        uppers.push(part);
        labels.push(region.iter().map(|u| u + 1).collect());
    }
    TwoLevelTree {
        target: g_pt(s),
        uppers,
        labels,
    }
}

/// `J` on objects: drop the root leaf, put an arity-0 vertex on every input
/// leaf. Also returns the node of each vertex and of each input leaf.
pub fn j_d(x: &GenusGraph) -> Option<(PlanarTree, Vec<usize>, Vec<usize>)> {
    let (shape, vertex_of_node, leaf_indices) = PlanarShape::from_graph(x)?;
    let n = shape.node_count();
    let mut nodes = shape.nodes.clone();
    for (k, (v, pos)) in shape.planar_leaves().into_iter().enumerate() {
        nodes[v][pos] = Slot::Child(n + k);
    }
    nodes.extend(std::iter::repeat_with(Vec::new).take(leaf_indices.len()));
    let raw = PlanarShape { nodes };
    let order = raw.preorder();
    let mut new_id = vec![0; order.len()];
    for (i, &v) in order.iter().enumerate() {
        new_id[v] = i;
    }
    let mut vmap = vec![0; n];
    for (node, &v) in vertex_of_node.iter().enumerate() {
        vmap[v] = new_id[node];
    }
    let mut lmap = vec![0; leaf_indices.len()];
    for (k, &l) in leaf_indices.iter().enumerate() {
        lmap[l - 1] = new_id[n + k];
    }
    Some((raw.normalized(), vmap, lmap))
}

/// `J` on morphisms: each vertex goes to the lowest vertex inserted into
/// it, each added leaf vertex to the matching one.
pub fn j_d_mor(f: &GraphMorphism) -> Option<PtMorphism> {
    let x = &f.target;
    let (sx, vx, lx) = j_d(x)?;
    let y = source_of2(&GraphOperad::new(GraphFamily::POp), f).ok()?;
    let (sy, vy, ly) = j_d(&y)?;
    let mut map = vec![0; sx.node_count()];
    for v in 0..x.vertex_count() {
        let q = &f.uppers[v];
        let k = q.vertex_of(q.leaves()[0]);
        map[vx[v]] = vy[f.labels[v][k] - 1];
    }
    for (i, &node) in lx.iter().enumerate() {
        map[node] = ly[i];
    }
    Some(PtMorphism {
        source: sx,
        target: sy,
        map,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::law_violations;
    use crate::graphcats::cop_homs;

    #[test]
    fn pt_is_a_category() {
        let cat = PtCat { max_vertices: 4 };
        let ms = cat.all_morphisms();
        assert!(ms.iter().all(is_pt_morphism));
        assert_eq!(law_violations(&cat, &ms), 0);
    }

    #[test]
    fn round_trip_small() {
        let op = GraphOperad::new(GraphFamily::POp);
        let cat = PtCat { max_vertices: 4 };
        for t in cat.objects() {
            assert_eq!(j_d(&g_pt(&t)).unwrap().0, t);
        }
        for f in cat.all_morphisms() {
            let g = g_pt_mor(&f);
            assert_eq!(source_of2(&op, &g).unwrap(), g_pt(&f.target));
            assert!(cop_homs(&op, &g.target, &g_pt(&f.target)).contains(&g));
            assert_eq!(j_d_mor(&g).unwrap(), f);
        }
    }

    #[test]
    fn single_vertex() {
        let t = PlanarShape::corolla(0);
        let x = g_pt(&t);
        assert_eq!(x.vertex_count(), 1);
        assert_eq!(j_d(&x).unwrap().0, t);
    }
}
