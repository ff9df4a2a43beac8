//! Modules over truncated categories with exact coefficients: principal
//! and constant modules, submodule closure, generator growth by degree,
//! the two non-finitely-generated examples and semigroup nerves.

pub mod examples;
pub mod linalg;
pub mod nerve;

use std::cell::RefCell;
use std::collections::{BTreeMap, VecDeque};
use std::marker::PhantomData;
use std::rc::Rc;

use serde::Serialize;

use crate::category::{Category, Truncation};
pub use linalg::{Field, Fp, Subspace, F2, F3, Q};

/// A truncation with cached hom-sets, indexed by object position.
pub struct Lab<'a, C: Category> {
    pub cat: &'a C,
    pub objects: Vec<C::Obj>,
    index: BTreeMap<C::Obj, usize>,
    homs: RefCell<BTreeMap<(usize, usize), Rc<Vec<C::Mor>>>>,
}

impl<'a, C: Category> Lab<'a, C> {
    pub fn new(cat: &'a C, objects: Vec<C::Obj>) -> Self {
        let index = objects.iter().enumerate().map(|(i, x)| (x.clone(), i)).collect();
        Self {
            cat,
            objects,
            index,
            homs: RefCell::new(BTreeMap::new()),
        }
    }

    pub fn of_truncation(cat: &'a C) -> Self
    where
        C: Truncation,
    {
        Self::new(cat, cat.objects())
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn position(&self, x: &C::Obj) -> Option<usize> {
        self.index.get(x).copied()
    }

    pub fn hom(&self, i: usize, j: usize) -> Rc<Vec<C::Mor>> {
        if let Some(h) = self.homs.borrow().get(&(i, j)) {
            return h.clone();
        }
        let h = Rc::new(self.cat.hom(&self.objects[i], &self.objects[j]));
        self.homs.borrow_mut().insert((i, j), h.clone());
        h
    }
}

/// A functor from the category to finite-dimensional vector spaces, given
/// by dimensions and the action of morphisms on coordinate vectors.
pub trait Module<C: Category> {
    type F: Field;
    fn dim(&self, x: &C::Obj) -> usize;
    fn act(&self, cat: &C, g: &C::Mor, v: &[Self::F]) -> Vec<Self::F>;
}

/// The free module on `Hom(c, −)` with postcomposition.
pub struct Principal<C: Category, F> {
    pub base: C::Obj,
    pub basis: BTreeMap<C::Obj, Vec<C::Mor>>,
    index: BTreeMap<(C::Obj, C::Mor), usize>,
    _field: PhantomData<F>,
}

impl<C: Category, F: Field> Principal<C, F> {
    pub fn new(lab: &Lab<C>, base: &C::Obj) -> Self {
        let i = lab.position(base).expect("base object in truncation");
        let mut basis = BTreeMap::new();
        let mut index = BTreeMap::new();
        for (j, x) in lab.objects.iter().enumerate() {
            let hs = lab.hom(i, j).as_ref().clone();
            for (k, h) in hs.iter().enumerate() {
                index.insert((x.clone(), h.clone()), k);
            }
            basis.insert(x.clone(), hs);
        }
        Self {
            base: base.clone(),
            basis,
            index,
            _field: PhantomData,
        }
    }

    /// Coordinates of a basis morphism.
    pub fn element(&self, f: &C::Mor, target: &C::Obj) -> Option<Vec<F>> {
        let k = *self.index.get(&(target.clone(), f.clone()))?;
        Some(linalg::unit(self.basis[target].len(), k))
    }
}

impl<C: Category, F: Field> Module<C> for Principal<C, F> {
    type F = F;
    fn dim(&self, x: &C::Obj) -> usize {
        self.basis.get(x).map_or(0, Vec::len)
    }
    fn act(&self, cat: &C, g: &C::Mor, v: &[F]) -> Vec<F> {
        let (s, t) = (cat.source(g), cat.target(g));
        let mut out = vec![F::zero(); self.dim(&t)];
        for (k, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let h = cat.compose(g, &self.basis[&s][k]).expect("composable");
            let idx = self.index.get(&(t.clone(), h)).expect("composite lies in the truncation");
            out[*idx] = out[*idx].add(c);
        }
        out
    }
}

/// The module equal to `F` everywhere with identity maps.
pub struct Constant<F>(PhantomData<F>);

impl<F> Default for Constant<F> {
    fn default() -> Self {
        Self(PhantomData)
    }
}

impl<C: Category, F: Field> Module<C> for Constant<F> {
    type F = F;
    fn dim(&self, _: &C::Obj) -> usize {
        1
    }
    fn act(&self, _: &C, _: &C::Mor, v: &[F]) -> Vec<F> {
        v.to_vec()
    }
}

/// Per-object subspaces closed under the action, grown one generator at a
/// time.
pub struct Closure<F> {
    pub spaces: Vec<Subspace<F>>,
}

impl<F: Field> Closure<F> {
    pub fn zero<C: Category, M: Module<C, F = F>>(lab: &Lab<C>, module: &M) -> Self {
        Self {
            spaces: lab.objects.iter().map(|x| Subspace::zero(module.dim(x))).collect(),
        }
    }

    /// Adds `v` at object `i` and everything it generates. Returns whether
    /// `v` was new.
    pub fn add<C: Category, M: Module<C, F = F>>(&mut self, lab: &Lab<C>, module: &M, i: usize, v: Vec<F>) -> bool {
        if !self.spaces[i].insert(v.clone()) {
            return false;
        }
        let mut queue = VecDeque::from([(i, v)]);
        while let Some((a, v)) = queue.pop_front() {
            for b in 0..lab.len() {
                if self.spaces[b].ambient == 0 {
                    continue;
                }
                for g in lab.hom(a, b).iter() {
                    let w = module.act(lab.cat, g, &v);
                    if self.spaces[b].insert(w.clone()) {
                        queue.push_back((b, w));
                    }
                }
            }
        }
        true
    }
}

/// The smallest submodule containing the generators `(object, vector)`.
pub fn submodule_span<C: Category, M: Module<C>>(lab: &Lab<C>, module: &M, gens: &[(usize, Vec<M::F>)]) -> Vec<Subspace<M::F>> {
    let mut cl = Closure::zero(lab, module);
    for (i, v) in gens {
        cl.add(lab, module, *i, v.clone());
    }
    cl.spaces
}

/// One object's line in a growth report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GrowthRow {
    pub object: usize,
    pub degree: usize,
    pub dim: usize,
    pub new_generators: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GrowthReport {
    pub rows: Vec<GrowthRow>,
    /// Whether the closure of the chosen generators stayed inside `N`.
    pub closed: bool,
}

impl GrowthReport {
    pub fn total(&self) -> usize {
        self.rows.iter().map(|r| r.new_generators).sum()
    }

    /// `(degree, dim, new generators)` summed over objects of each degree.
    pub fn by_degree(&self) -> Vec<(usize, usize, usize)> {
        let mut m: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
        for r in &self.rows {
            let e = m.entry(r.degree).or_default();
            e.0 += r.dim;
            e.1 += r.new_generators;
        }
        m.into_iter().map(|(d, (a, b))| (d, a, b)).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("degree,dim,newGenerators\n");
        for (d, a, b) in self.by_degree() {
            s.push_str(&format!("{d},{a},{b}\n"));
        }
        s
    }

    pub fn row(&self, object: usize) -> Option<&GrowthRow> {
        self.rows.iter().find(|r| r.object == object)
    }
}

/// Processes objects by increasing degree (ties by position) and counts,
/// for each, the basis vectors of `n` not already generated by the earlier
/// choices. The sum over all objects is the size of a generating set of `n`
/// built degree by degree.
pub fn min_generators_by_degree<C: Category, M: Module<C>>(
    lab: &Lab<C>,
    module: &M,
    n: &[Subspace<M::F>],
    degree: &dyn Fn(&C::Obj) -> usize,
) -> GrowthReport {
    let mut order: Vec<usize> = (0..lab.len()).collect();
    order.sort_by_key(|&i| (degree(&lab.objects[i]), i));
    let mut cl = Closure::zero(lab, module);
    let mut rows = Vec::new();
    for i in order {
        let mut new = 0;
        for v in n[i].basis() {
            if !cl.spaces[i].contains(v) {
                cl.add(lab, module, i, v.clone());
                new += 1;
            }
        }
        rows.push(GrowthRow {
            object: i,
            degree: degree(&lab.objects[i]),
            dim: n[i].dim(),
            new_generators: new,
        });
    }
    let closed = cl.spaces.iter().zip(n).all(|(s, t)| s.is_subspace_of(t));
    GrowthReport { rows, closed }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finsetcats::{FinKind, FinSetCat};

    #[test]
    fn principal_dims_and_identity() {
        let cat = FinSetCat::new(FinKind::OI, 3);
        let lab = Lab::of_truncation(&cat);
        let m: Principal<FinSetCat, Q> = Principal::new(&lab, &1);
        for x in 0..=3 {
            assert_eq!(m.dim(&x), cat.hom(&1, &x).len());
        }
        assert!(m.element(&cat.identity(&1), &1).is_some());
        // each basis vector goes to a basis vector
        for g in cat.all_morphisms() {
            for k in 0..m.dim(&g.n) {
                let w = m.act(&cat, &g, &linalg::unit(m.dim(&g.n), k));
                assert_eq!(w.iter().filter(|c| !c.is_zero()).count(), 1);
                assert!(w.iter().all(|c| c.is_zero() || *c == Q::from_int(1)));
            }
        }
    }

    #[test]
    fn principal_has_one_generator() {
        let cat = FinSetCat::new(FinKind::OI, 4);
        let lab = Lab::of_truncation(&cat);
        let m: Principal<FinSetCat, Q> = Principal::new(&lab, &2);
        let full: Vec<_> = lab.objects.iter().map(|x| Subspace::full(m.dim(x))).collect();
        let rep = min_generators_by_degree(&lab, &m, &full, &|x| *x);
        assert!(rep.closed);
        assert_eq!(rep.total(), 1);
        assert_eq!(rep.row(2).unwrap().new_generators, 1);
    }

    #[test]
    fn span_examples() {
        let cat = FinSetCat::new(FinKind::OI, 3);
        let lab = Lab::of_truncation(&cat);
        let c = Constant::<Q>::default();
        assert!(submodule_span(&lab, &c, &[]).iter().all(|s| s.dim() == 0));
        // from 1 everything but 0 is reachable by injections
        let s = submodule_span(&lab, &c, &[(1, vec![Q::from_int(3)])]);
        let dims: Vec<usize> = s.iter().map(Subspace::dim).collect();
        assert_eq!(dims, vec![0, 1, 1, 1]);
        // from 0 everything is reachable: one generator
        let full: Vec<_> = lab.objects.iter().map(|_| Subspace::full(1)).collect();
        assert_eq!(min_generators_by_degree(&lab, &c, &full, &|x| *x).total(), 1);
    }

    #[test]
    fn span_is_idempotent_and_monotone() {
        let cat = FinSetCat::new(FinKind::OS, 3);
        let lab = Lab::of_truncation(&cat);
        let m: Principal<FinSetCat, F3> = Principal::new(&lab, &3);
        let g = vec![(3, linalg::unit(m.dim(&3), 0))];
        let s1 = submodule_span(&lab, &m, &g);
        let mut more = g.clone();
        for (i, s) in s1.iter().enumerate() {
            more.extend(s.basis().map(|v| (i, v.clone())));
        }
        let s2 = submodule_span(&lab, &m, &more);
        assert_eq!(s1.iter().map(Subspace::dim).collect::<Vec<_>>(), s2.iter().map(Subspace::dim).collect::<Vec<_>>());
        let bigger = submodule_span(&lab, &m, &[(3, linalg::unit(m.dim(&3), 0)), (2, linalg::unit(m.dim(&2), 0))]);
        assert!(s1.iter().zip(&bigger).all(|(a, b)| a.is_subspace_of(b)));
    }
}
