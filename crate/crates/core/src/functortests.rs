//! Checks of functor properties on truncations: discrete opfibrations,
//! property (S), search for property (F) covering sets, and pullbacks.

use std::collections::BTreeMap;
use std::marker::PhantomData;

use serde::Serialize;

use crate::catconstruct::{ThreeLevelTree, TwCat};
use crate::category::{CatError, Category, Functor, Truncation};
use crate::operads::EnumerableOperad;

/// The identity functor.
#[derive(Debug, Clone, Copy, Default)]
pub struct Identity;

impl<C: Category> Functor<C, C> for Identity {
    fn obj(&self, x: &C::Obj) -> C::Obj {
        x.clone()
    }
    fn mor(&self, f: &C::Mor) -> C::Mor {
        f.clone()
    }
}

/// A functor given by two closures.
pub struct FnFunctor<FO, FM> {
    pub obj: FO,
    pub mor: FM,
}

impl<C: Category, D: Category, FO, FM> Functor<C, D> for FnFunctor<FO, FM>
where
    FO: Fn(&C::Obj) -> D::Obj,
    FM: Fn(&C::Mor) -> D::Mor,
{
    fn obj(&self, x: &C::Obj) -> D::Obj {
        (self.obj)(x)
    }
    fn mor(&self, f: &C::Mor) -> D::Mor {
        (self.mor)(f)
    }
}

/// The wide subcategory of morphisms satisfying `keep` (which must contain
/// identities and be closed under composition).
pub struct Restricted<C, P> {
    pub cat: C,
    pub keep: P,
}

impl<C: Category, P: Fn(&C::Mor) -> bool> Category for Restricted<C, P> {
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
        self.cat.hom(a, b).into_iter().filter(|f| (self.keep)(f)).collect()
    }
}

impl<C: Truncation, P: Fn(&C::Mor) -> bool> Truncation for Restricted<C, P> {
    fn objects(&self) -> Vec<C::Obj> {
        self.cat.objects()
    }
}

/// A morphism out of an image object with the wrong number of lifts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LiftViolation<O, M> {
    pub object: O,
    pub morphism: M,
    pub lifts: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LiftReport<O, M> {
    pub checked: usize,
    pub violations: Vec<LiftViolation<O, M>>,
}

impl<O, M> LiftReport<O, M> {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// For every object `c` of `c_cat` and every morphism `g` of `d_cat` out of
/// `F(c)`, counts the morphisms `f` out of `c` with `F(f) = g`; candidates
/// for `f` come from `lifts_from(c)`. A discrete opfibration has exactly
/// one lift each time.
pub fn is_discrete_opfibration<C, D, F>(
    c_cat: &C,
    d_cat: &D,
    functor: &F,
    lifts_from: &dyn Fn(&C::Obj) -> Vec<C::Mor>,
) -> LiftReport<C::Obj, D::Mor>
where
    C: Truncation,
    D: Truncation,
    F: Functor<C, D>,
{
    let mut rep = LiftReport {
        checked: 0,
        violations: Vec::new(),
    };
    for c in c_cat.objects() {
        let mut images: BTreeMap<D::Mor, usize> = BTreeMap::new();
        for f in lifts_from(&c) {
            *images.entry(functor.mor(&f)).or_insert(0) += 1;
        }
        for g in d_cat.homs_from(&functor.obj(&c)) {
            rep.checked += 1;
            let lifts = images.get(&g).copied().unwrap_or(0);
            if lifts != 1 {
                rep.violations.push(LiftViolation {
                    object: c.clone(),
                    morphism: g,
                    lifts,
                });
            }
        }
    }
    rep
}

/// `(f, g, h′)` with `F(g) = h′ ∘ F(f)` but no `h` with `g = h ∘ f`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertySViolation<M, N> {
    pub f: M,
    pub g: M,
    pub h_image: N,
}

/// Property (S) on all pairs of morphisms with a common source.
pub fn check_property_s<C, D, F>(c_cat: &C, d_cat: &D, functor: &F) -> (usize, Vec<PropertySViolation<C::Mor, D::Mor>>)
where
    C: Truncation,
    D: Category,
    F: Functor<C, D>,
{
    let mut checked = 0;
    let mut bad = Vec::new();
    for c in c_cat.objects() {
        let out = c_cat.homs_from(&c);
        for f in &out {
            for g in &out {
                let (c1, c2) = (c_cat.target(f), c_cat.target(g));
                let (ff, fg) = (functor.mor(f), functor.mor(g));
                for h2 in d_cat.hom(&functor.obj(&c1), &functor.obj(&c2)) {
                    if d_cat.compose(&h2, &ff).as_ref() != Ok(&fg) {
                        continue;
                    }
                    checked += 1;
                    let lifted = c_cat.hom(&c1, &c2).iter().any(|h| c_cat.compose(h, f).as_ref() == Ok(g));
                    if !lifted {
                        bad.push(PropertySViolation {
                            f: f.clone(),
                            g: g.clone(),
                            h_image: h2,
                        });
                    }
                }
            }
        }
    }
    (checked, bad)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CoverStatus {
    /// Every enumerated morphism factors through the set.
    VerifiedAtBound,
    /// The set grew past the budget.
    Exhausted,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Covering<O, N> {
    pub status: CoverStatus,
    pub members: Vec<(O, N)>,
    /// Morphisms `d → F(c)` examined.
    pub checked: usize,
}

/// Does `phi: d → F(c)` factor as `F(g) ∘ f_i` through a member?
fn covered<A, B, F>(a: &A, b: &B, functor: &F, members: &[(A::Obj, B::Mor)], c: &A::Obj, phi: &B::Mor) -> bool
where
    A: Category,
    B: Category,
    F: Functor<A, B>,
{
    members.iter().any(|(ci, fi)| {
        a.hom(ci, c)
            .iter()
            .any(|g| b.compose(&functor.mor(g), fi).as_ref() == Ok(phi))
    })
}

/// Greedily builds a property (F) covering set for `d`: morphisms
/// `d → F(c)` for `c` among `a_objects` are visited in order and added when
/// not yet covered. Redundant members are then removed and the result is
/// re-verified.
pub fn search_property_f<A, B, F>(
    a: &A,
    b: &B,
    functor: &F,
    a_objects: &[A::Obj],
    d: &B::Obj,
    budget: usize,
) -> Covering<A::Obj, B::Mor>
where
    A: Category,
    B: Category,
    F: Functor<A, B>,
{
    let mut members: Vec<(A::Obj, B::Mor)> = Vec::new();
    let mut checked = 0;
    for c in a_objects {
        for phi in b.hom(d, &functor.obj(c)) {
            checked += 1;
            if !covered(a, b, functor, &members, c, &phi) {
                if members.len() == budget {
                    return Covering {
                        status: CoverStatus::Exhausted,
                        members,
                        checked,
                    };
                }
                members.push((c.clone(), phi));
            }
        }
    }
    // drop members that factor through the others
    let mut i = members.len();
    while i > 0 {
        i -= 1;
        let (c, phi) = members[i].clone();
        let rest: Vec<_> = members.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, m)| m.clone()).collect();
        if covered(a, b, functor, &rest, &c, &phi) {
            members = rest;
        }
    }
    let status = if verify_covering(a, b, functor, a_objects, d, &members).is_empty() {
        CoverStatus::VerifiedAtBound
    } else {
        CoverStatus::Exhausted
    };
    Covering {
        status,
        members,
        checked,
    }
}

/// Morphisms `d → F(c)` that do not factor through any member.
pub fn verify_covering<A, B, F>(
    a: &A,
    b: &B,
    functor: &F,
    a_objects: &[A::Obj],
    d: &B::Obj,
    members: &[(A::Obj, B::Mor)],
) -> Vec<(A::Obj, B::Mor)>
where
    A: Category,
    B: Category,
    F: Functor<A, B>,
{
    let mut out = Vec::new();
    for c in a_objects {
        for phi in b.hom(d, &functor.obj(c)) {
            if !covered(a, b, functor, members, c, &phi) {
                out.push((c.clone(), phi));
            }
        }
    }
    out
}

/// The fibered product of `F: D → B` and `G: A → B` on truncations:
/// matching pairs of objects and of morphisms.
pub struct Pullback<'a, D, A, B, F, G> {
    pub d: &'a D,
    pub a: &'a A,
    pub f: &'a F,
    pub g: &'a G,
    _base: PhantomData<B>,
}

impl<'a, D, A, B, F, G> Pullback<'a, D, A, B, F, G> {
    pub fn new(d: &'a D, a: &'a A, f: &'a F, g: &'a G) -> Self {
        Self {
            d,
            a,
            f,
            g,
            _base: PhantomData,
        }
    }
}

impl<D, A, B, F, G> Category for Pullback<'_, D, A, B, F, G>
where
    D: Category,
    A: Category,
    B: Category,
    F: Functor<D, B>,
    G: Functor<A, B>,
{
    type Obj = (D::Obj, A::Obj);
    type Mor = (D::Mor, A::Mor);

    fn source(&self, m: &Self::Mor) -> Self::Obj {
        (self.d.source(&m.0), self.a.source(&m.1))
    }
    fn target(&self, m: &Self::Mor) -> Self::Obj {
        (self.d.target(&m.0), self.a.target(&m.1))
    }
    fn identity(&self, x: &Self::Obj) -> Self::Mor {
        (self.d.identity(&x.0), self.a.identity(&x.1))
    }
    fn compose(&self, g: &Self::Mor, f: &Self::Mor) -> Result<Self::Mor, CatError> {
        Ok((self.d.compose(&g.0, &f.0)?, self.a.compose(&g.1, &f.1)?))
    }
    fn hom(&self, x: &Self::Obj, y: &Self::Obj) -> Vec<Self::Mor> {
        let right: Vec<A::Mor> = self.a.hom(&x.1, &y.1);
        let mut out = Vec::new();
        for phi in self.d.hom(&x.0, &y.0) {
            let image = self.f.mor(&phi);
            for psi in &right {
                if self.g.mor(psi) == image {
                    out.push((phi.clone(), psi.clone()));
                }
            }
        }
        out
    }
}

impl<D, A, B, F, G> Truncation for Pullback<'_, D, A, B, F, G>
where
    D: Truncation,
    A: Truncation,
    B: Category,
    F: Functor<D, B>,
    G: Functor<A, B>,
{
    fn objects(&self) -> Vec<Self::Obj> {
        let right = self.a.objects();
        let mut out = Vec::new();
        for x in self.d.objects() {
            let image = self.f.obj(&x);
            for y in &right {
                if self.g.obj(y) == image {
                    out.push((x.clone(), y.clone()));
                }
            }
        }
        out
    }
}

/// Projection of a pullback onto its first factor.
#[derive(Debug, Clone, Copy, Default)]
pub struct First;

impl<'a, D, A, B, F, G> Functor<Pullback<'a, D, A, B, F, G>, D> for First
where
    D: Category,
    A: Category,
    B: Category,
    F: Functor<D, B>,
    G: Functor<A, B>,
{
    fn obj(&self, x: &(D::Obj, A::Obj)) -> D::Obj {
        x.0.clone()
    }
    fn mor(&self, m: &(D::Mor, A::Mor)) -> D::Mor {
        m.0.clone()
    }
}

/// Functoriality failures of `functor` on the given morphisms.
pub fn functoriality_violations<C, D, F>(c: &C, d: &D, functor: &F, morphisms: &[C::Mor]) -> usize
where
    C: Category,
    D: Category,
    F: Functor<C, D>,
{
    let mut bad = 0;
    let mut by_source: BTreeMap<C::Obj, Vec<&C::Mor>> = BTreeMap::new();
    for f in morphisms {
        by_source.entry(c.source(f)).or_default().push(f);
        if functor.mor(&c.identity(&c.source(f))) != d.identity(&functor.obj(&c.source(f))) {
            bad += 1;
        }
        if d.source(&functor.mor(f)) != functor.obj(&c.source(f)) || d.target(&functor.mor(f)) != functor.obj(&c.target(f)) {
            bad += 1;
        }
    }
    for f in morphisms {
        for g in by_source.get(&c.target(f)).into_iter().flatten() {
            let lhs = c.compose(g, f).map(|gf| functor.mor(&gf));
            let rhs = d.compose(&functor.mor(g), &functor.mor(f));
            if lhs != rhs {
                bad += 1;
            }
        }
    }
    bad
}

/// The covering set for the inclusion of `R_{>0}` into `Tw(P)` at `p`:
/// morphisms out of `p` whose lower vertex is an identity and whose upper
/// vertices are identities or of arity 0, with leaves in order.
pub fn r_positive_covering<O>(cat: &TwCat<O>, p: &O::Op) -> Vec<ThreeLevelTree<O::Op>>
where
    O: EnumerableOperad<Color = ()> + Clone,
{
    let op = &cat.operad;
    let n = op.arity(p);
    let full = TwCat::new(op.clone(), cat.max_arity);
    full.morphisms_from(p, n)
        .into_iter()
        .filter(|f| {
            let fr = &f.frame;
            let labels: Vec<usize> = fr.upper_labels.iter().flatten().chain(&fr.lower_labels).copied().collect();
            op.is_identity(&fr.lower)
                && fr.uppers.iter().all(|q| op.arity(q) == 0 || op.is_identity(q))
                && labels.iter().copied().eq(1..=labels.len())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catconstruct::{ForgetMiddle, TwView, UCat};
    use crate::finsetcats::{FinKind, FinMap, FinSetCat};
    use crate::operads::{TableFamily, TableOperad};

    fn twu(family: TableFamily, n: usize) -> (TwCat<TableOperad>, UCat<TableOperad>) {
        let op = TableOperad::new(family);
        (TwCat::new(op, n), UCat { operad: op, max_arity: n, prop_only: false })
    }

    #[test]
    fn tw_to_u_is_opfibration() {
        let (tw, u) = twu(TableFamily::UCom, 3);
        let f = ForgetMiddle(TableOperad::new(TableFamily::UCom));
        let rep = is_discrete_opfibration(&tw, &u, &f, &|c| tw.homs_from(c));
        assert!(rep.checked > 0);
        assert!(rep.holds(), "{:?}", rep.violations.first());
    }

    #[test]
    fn identity_is_opfibration_and_has_s() {
        let c = FinSetCat::new(FinKind::OI, 3);
        let rep = is_discrete_opfibration(&c, &c, &Identity, &|x| c.homs_from(x));
        assert!(rep.holds());
        assert!(check_property_s(&c, &c, &Identity).1.is_empty());
    }

    #[test]
    fn endpoint_inclusion_has_s() {
        let small = FinSetCat::new(FinKind::OIPlusEp, 4);
        let big = FinSetCat::new(FinKind::OIPlus, 4);
        let (checked, bad) = check_property_s(&small, &big, &Identity);
        assert!(checked > 0);
        assert!(bad.is_empty());
    }

    #[test]
    fn broken_inclusion_fails_s() {
        let big = FinSetCat::new(FinKind::OI, 4);
        let sub = Restricted {
            cat: big,
            keep: |f: &FinMap| f.n == f.m || f.m >= f.n + 2,
        };
        let incl = FnFunctor {
            obj: |x: &usize| *x,
            mor: |f: &FinMap| f.clone(),
        };
        let (_, bad) = check_property_s(&sub, &big, &incl);
        assert!(!bad.is_empty());
    }

    #[test]
    fn identity_covering() {
        let (tw, u) = twu(TableFamily::UCom, 3);
        let f = ForgetMiddle(TableOperad::new(TableFamily::UCom));
        let objs = tw.objects();
        let d = f.obj(&objs[2]);
        let cover = search_property_f(&tw, &u, &f, &objs, &d, 4);
        assert_eq!(cover.status, CoverStatus::VerifiedAtBound);
        assert_eq!(cover.members.len(), 1);
        let c = objs.iter().find(|c| f.obj(c) == d).unwrap();
        assert!(covered(&tw, &u, &f, &cover.members, c, &u.identity(&d)));
    }

    #[test]
    fn pullback_along_identity() {
        let c = FinSetCat::new(FinKind::OS, 3);
        let pb = Pullback::new(&c, &c, &Identity, &Identity);
        assert_eq!(pb.objects().len(), c.objects().len());
        assert_eq!(pb.all_morphisms().len(), c.all_morphisms().len());
        let rep = is_discrete_opfibration(&pb, &c, &First, &|x| pb.homs_from(x));
        assert!(rep.holds());
    }

    #[test]
    fn r_positive_covering_for_uas() {
        let op = TableOperad::new(TableFamily::UAs);
        let full = TwCat::new(op, 4);
        let sub = TwCat {
            view: TwView::RPositive,
            ..full
        };
        let p = op.op(&[1, 2]).unwrap();
        let members: Vec<_> = r_positive_covering(&full, &p)
            .into_iter()
            .map(|f| (full.target(&f), f))
            .collect();
        assert_eq!(members.len(), 4);
        let objs = sub.objects();
        assert!(verify_covering(&sub, &full, &Identity, &objs, &p, &members).is_empty());
    }
}
