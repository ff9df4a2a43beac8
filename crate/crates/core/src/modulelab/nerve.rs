//! Categories of sequences over a semigroup, with morphisms substituting
//! each element by a nonempty block whose product is that element.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::catconstruct::compositions;
use crate::category::{CatError, Category, Functor, Truncation};
use crate::finsetcats::{FinKind, FinMap, FinSetCat};

pub trait Semigroup {
    fn mul(&self, a: usize, b: usize) -> usize;
    /// Elements used for objects and random blocks.
    fn elements(&self) -> Vec<usize>;
    /// All ways to write `s` as a product of `k` elements.
    fn decompositions(&self, s: usize, k: usize) -> Vec<Vec<usize>> {
        let els = self.elements();
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(k);
        fn go<S: Semigroup + ?Sized>(sg: &S, els: &[usize], s: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == k {
                if sg.product(cur) == Some(s) {
                    out.push(cur.clone());
                }
                return;
            }
            for &e in els {
                cur.push(e);
                go(sg, els, s, k, cur, out);
                cur.pop();
            }
        }
        if k > 0 {
            go(self, &els, s, k, &mut cur, &mut out);
        }
        out
    }
    /// Longest possible decomposition of `s`, if bounded.
    fn max_parts(&self, _s: usize) -> Option<usize> {
        None
    }
    fn product(&self, xs: &[usize]) -> Option<usize> {
        let (&first, rest) = xs.split_first()?;
        Some(rest.iter().fold(first, |a, &b| self.mul(a, b)))
    }
}

/// A finite semigroup by multiplication table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableSemigroup {
    pub table: Vec<Vec<usize>>,
}

impl TableSemigroup {
    pub fn cyclic(n: usize) -> Self {
        Self {
            table: (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect(),
        }
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    pub fn is_associative(&self) -> bool {
        let n = self.table.len();
        (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c)))))
    }
}

impl Semigroup for TableSemigroup {
    fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }
    fn elements(&self) -> Vec<usize> {
        (0..self.table.len()).collect()
    }
}

/// `(ℕ_{>0}, +)` with elements up to a bound listed for objects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PositiveIntegers {
    pub max_element: usize,
}

impl Semigroup for PositiveIntegers {
    fn mul(&self, a: usize, b: usize) -> usize {
        a + b
    }
    fn elements(&self) -> Vec<usize> {
        (1..=self.max_element).collect()
    }
    fn decompositions(&self, s: usize, k: usize) -> Vec<Vec<usize>> {
        if k == 0 || k > s {
            return Vec::new();
        }
        compositions(s - k, k)
            .into_iter()
            .map(|c| c.into_iter().map(|x| x + 1).collect())
            .collect()
    }
    fn max_parts(&self, s: usize) -> Option<usize> {
        Some(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct NerveMorphism {
    pub source: Vec<usize>,
    pub target: Vec<usize>,
    /// Length of the block replacing each source element.
    pub blocks: Vec<usize>,
}

impl NerveMorphism {
    /// The block of the target replacing source element `i`.
    pub fn block(&self, i: usize) -> &[usize] {
        let start: usize = self.blocks[..i].iter().sum();
        &self.target[start..start + self.blocks[i]]
    }
}

/// Nonempty sequences of length at most `max_len`.
#[derive(Debug, Clone)]
pub struct NerveCat<S> {
    pub semigroup: S,
    pub max_len: usize,
}

impl<S: Semigroup> NerveCat<S> {
    pub fn is_valid(&self, f: &NerveMorphism) -> bool {
        f.blocks.len() == f.source.len()
            && f.blocks.iter().all(|&k| k > 0)
            && f.blocks.iter().sum::<usize>() == f.target.len()
            && (0..f.source.len()).all(|i| self.semigroup.product(f.block(i)) == Some(f.source[i]))
    }

    /// All morphisms out of `x` whose blocks have at most `max_parts`
    /// elements each (or the semigroup's own bound, if smaller).
    pub fn morphisms_from(&self, x: &[usize], max_parts: usize) -> Vec<NerveMorphism> {
        let mut out = vec![NerveMorphism {
            source: x.to_vec(),
            target: Vec::new(),
            blocks: Vec::new(),
        }];
        for &s in x {
            let cap = self.semigroup.max_parts(s).map_or(max_parts, |m| m.min(max_parts));
            let mut next = Vec::new();
            for f in &out {
                for k in 1..=cap {
                    for d in self.semigroup.decompositions(s, k) {
                        let mut g = f.clone();
                        g.target.extend(d);
                        g.blocks.push(k);
                        next.push(g);
                    }
                }
            }
            out = next;
        }
        out
    }

    /// A random morphism out of `x` with blocks of at most `max_parts`
    /// elements.
    pub fn random_from<R: Rng>(&self, rng: &mut R, x: &[usize], max_parts: usize) -> NerveMorphism {
        let mut f = NerveMorphism {
            source: x.to_vec(),
            target: Vec::new(),
            blocks: Vec::new(),
        };
        for &s in x {
            loop {
                let k = rng.gen_range(1..=max_parts);
                if let Some(d) = self.semigroup.decompositions(s, k).choose(rng) {
                    f.target.extend(d);
                    f.blocks.push(k);
                    break;
                }
            }
        }
        f
    }
}

impl<S: Semigroup> Category for NerveCat<S> {
    type Obj = Vec<usize>;
    type Mor = NerveMorphism;

    fn source(&self, f: &NerveMorphism) -> Vec<usize> {
        f.source.clone()
    }
    fn target(&self, f: &NerveMorphism) -> Vec<usize> {
        f.target.clone()
    }
    fn identity(&self, x: &Vec<usize>) -> NerveMorphism {
        NerveMorphism {
            source: x.clone(),
            target: x.clone(),
            blocks: vec![1; x.len()],
        }
    }
    fn compose(&self, g: &NerveMorphism, f: &NerveMorphism) -> Result<NerveMorphism, CatError> {
        if f.target != g.source {
            return Err(CatError::NotComposable("sequences differ".into()));
        }
        let mut blocks = Vec::with_capacity(f.blocks.len());
        let mut at = 0;
        for &k in &f.blocks {
            blocks.push(g.blocks[at..at + k].iter().sum());
            at += k;
        }
        Ok(NerveMorphism {
            source: f.source.clone(),
            target: g.target.clone(),
            blocks,
        })
    }
    fn hom(&self, a: &Vec<usize>, b: &Vec<usize>) -> Vec<NerveMorphism> {
        if a.is_empty() || b.len() < a.len() {
            return Vec::new();
        }
        compositions(b.len() - a.len(), a.len())
            .into_iter()
            .map(|c| NerveMorphism {
                source: a.clone(),
                target: b.clone(),
                blocks: c.into_iter().map(|k| k + 1).collect(),
            })
            .filter(|f| self.is_valid(f))
            .collect()
    }
}

impl<S: Semigroup> Truncation for NerveCat<S> {
    fn objects(&self) -> Vec<Vec<usize>> {
        let els = self.semigroup.elements();
        let mut out = Vec::new();
        let mut layer: Vec<Vec<usize>> = vec![Vec::new()];
        for _ in 0..self.max_len {
            layer = layer
                .iter()
                .flat_map(|s| {
                    els.iter().map(move |&e| {
                        let mut t = s.clone();
                        t.push(e);
                        t
                    })
                })
                .collect();
            out.extend(layer.iter().cloned());
        }
        out
    }
}

/// The faithful projection to endpoint-preserving order-preserving
/// injections: a sequence of length `n` goes to the set of its `n + 1`
/// gaps.
#[derive(Debug, Clone, Copy, Default)]
pub struct Projection;

pub fn project(f: &NerveMorphism) -> FinMap {
    let mut table = vec![1];
    let mut at = 1;
    for &k in &f.blocks {
        at += k;
        table.push(at);
    }
    FinMap {
        n: f.source.len() + 1,
        m: f.target.len() + 1,
        table,
    }
}

impl<S: Semigroup> Functor<NerveCat<S>, FinSetCat> for Projection {
    fn obj(&self, x: &Vec<usize>) -> usize {
        x.len() + 1
    }
    fn mor(&self, f: &NerveMorphism) -> FinMap {
        project(f)
    }
}

impl Projection {
    pub fn base(max_len: usize) -> FinSetCat {
        FinSetCat::new(FinKind::OIPlusPlusEp, max_len + 1)
    }
}

/// Comparability hint for `ℤ/2` (element `1` the generator): every block
/// of `f` has no more ones, and no more elements, than that of `g`.
pub fn z2_hint(f: &NerveMorphism, g: &NerveMorphism) -> bool {
    let ones = |b: &[usize]| b.iter().filter(|&&x| x == 1).count();
    f.source == g.source
        && (0..f.blocks.len()).all(|i| {
            let (a, b) = (f.block(i), g.block(i));
            ones(a) <= ones(b) && a.len() <= b.len()
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::law_violations;
    use crate::grobnerkit::{check_admissible, lift_faithful, OsOpOrder};

    #[test]
    fn trivial_monoid_matches_base() {
        let cat = NerveCat {
            semigroup: TableSemigroup::trivial(),
            max_len: 5,
        };
        let base = Projection::base(5);
        for a in 1..=5 {
            for b in 1..=5 {
                let homs = cat.hom(&vec![0; a], &vec![0; b]);
                let images: Vec<FinMap> = homs.iter().map(project).collect();
                assert_eq!(images.len(), base.hom(&(a + 1), &(b + 1)).len());
                assert!(images.iter().all(|f| base.hom(&(a + 1), &(b + 1)).contains(f)));
            }
        }
    }

    #[test]
    fn z2_laws_and_order() {
        let cat = NerveCat {
            semigroup: TableSemigroup::cyclic(2),
            max_len: 4,
        };
        assert!(cat.semigroup.is_associative());
        let ms = cat.all_morphisms();
        assert!(ms.iter().all(|f| cat.is_valid(f)));
        assert_eq!(law_violations(&cat, &ms), 0);
        let order = lift_faithful(&cat, &ms, OsOpOrder, project).unwrap();
        assert!(check_admissible(&cat, &order, &ms).is_admissible());
    }

    #[test]
    fn positive_integer_slices_are_finite() {
        let cat = NerveCat {
            semigroup: PositiveIntegers { max_element: 4 },
            max_len: 4,
        };
        for x in [vec![1], vec![3], vec![2, 3], vec![4, 1, 2]] {
            let out = cat.morphisms_from(&x, usize::MAX);
            let expected: usize = x.iter().map(|&s| 1 << (s - 1)).product();
            assert_eq!(out.len(), expected);
            assert!(out.iter().all(|f| cat.is_valid(f)));
        }
    }

    #[test]
    fn composite_blocks_multiply_back() {
        use rand::SeedableRng;
        let cat = NerveCat {
            semigroup: TableSemigroup::cyclic(3),
            max_len: 20,
        };
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let f = cat.random_from(&mut rng, &[1, 2, 0], 3);
            let g = cat.random_from(&mut rng, &f.target, 2);
            let gf = cat.compose(&g, &f).unwrap();
            assert!(cat.is_valid(&gf));
            assert_eq!(project(&gf), FinMap::compose(&project(&g), &project(&f)).unwrap());
        }
    }
}
