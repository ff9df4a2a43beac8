//! Admissible orders on hom-sets of truncated categories, lifting along
//! faithful functors, and an exhaustive admissibility checker.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::hash::{Hash, Hasher};

use serde::Serialize;
use thiserror::Error;

use crate::category::Category;
use crate::finsetcats::{FinMap, GradedSurjection};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GrobnerError {
    #[error("functor is not faithful: {0}")]
    NotFaithful(String),
}

/// A total order on each hom-set `Hom(c, c′)`. Only morphisms with the same
/// source and target are ever compared.
pub trait AdmissibleOrder<M> {
    fn compare(&self, f: &M, g: &M) -> Ordering;
}

/// Any comparator closure.
pub struct FnOrder<F>(pub F);

impl<M, F: Fn(&M, &M) -> Ordering> AdmissibleOrder<M> for FnOrder<F> {
    fn compare(&self, f: &M, g: &M) -> Ordering {
        (self.0)(f, g)
    }
}

/// Lexicographic order on the tables of ordered surjections, i.e. on the
/// sequence of fibers each element falls into. Morphisms of `OS^op`.
#[derive(Debug, Clone, Copy, Default)]
pub struct OsOpOrder;

impl AdmissibleOrder<FinMap> for OsOpOrder {
    fn compare(&self, f: &FinMap, g: &FinMap) -> Ordering {
        f.table.cmp(&g.table)
    }
}

/// Underlying map first, then gradings left to right.
#[derive(Debug, Clone, Copy, Default)]
pub struct GosOrder;

impl AdmissibleOrder<GradedSurjection> for GosOrder {
    fn compare(&self, f: &GradedSurjection, g: &GradedSurjection) -> Ordering {
        OsOpOrder
            .compare(&f.map, &g.map)
            .then_with(|| f.grading.cmp(&g.grading))
    }
}

/// Order pulled back along a functor `G`: `f ≺′ f′` iff `G(f) ≺ G(f′)`,
/// with an optional tie-break inside the fibers of `G`.
pub struct LiftedOrder<B, G, T> {
    pub base: B,
    pub functor: G,
    pub tiebreak: Option<T>,
}

impl<M, N, B, G, T> AdmissibleOrder<M> for LiftedOrder<B, G, T>
where
    B: AdmissibleOrder<N>,
    G: Fn(&M) -> N,
    T: Fn(&M, &M) -> Ordering,
{
    fn compare(&self, f: &M, g: &M) -> Ordering {
        let o = self.base.compare(&(self.functor)(f), &(self.functor)(g));
        match (o, &self.tiebreak) {
            (Ordering::Equal, Some(t)) => t(f, g),
            _ => o,
        }
    }
}

type NoTiebreak<M> = fn(&M, &M) -> Ordering;

/// Lifts `base` along `functor`, checking faithfulness on the given
/// morphisms: two distinct morphisms with the same source and target must
/// not have the same image.
pub fn lift_faithful<C, N, B, G>(
    cat: &C,
    morphisms: &[C::Mor],
    base: B,
    functor: G,
) -> Result<LiftedOrder<B, G, NoTiebreak<C::Mor>>, GrobnerError>
where
    C: Category,
    N: Ord + std::fmt::Debug,
    G: Fn(&C::Mor) -> N,
{
    let mut seen: BTreeMap<(C::Obj, C::Obj, N), &C::Mor> = BTreeMap::new();
    for f in morphisms {
        let key = (cat.source(f), cat.target(f), functor(f));
        if let Some(g) = seen.get(&key) {
            if *g != f {
                return Err(GrobnerError::NotFaithful(format!("{g:?} and {f:?} have image {:?}", key.2)));
            }
        }
        seen.insert(key, f);
    }
    Ok(LiftedOrder {
        base,
        functor,
        tiebreak: None,
    })
}

/// Result of an admissibility check: number of `(f, f′, g)` triples
/// examined and those that failed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AdmissibilityReport<M> {
    pub checked: usize,
    /// Distinct morphisms the order does not separate.
    pub ties: Vec<(M, M)>,
    /// Triples with `f ≺ f′` but not `g∘f ≺ g∘f′`.
    pub violations: Vec<(M, M, M)>,
}

impl<M> AdmissibilityReport<M> {
    pub fn is_admissible(&self) -> bool {
        self.ties.is_empty() && self.violations.is_empty()
    }
}

/// Checks strict totality on every hom-set and monotonicity under
/// postcomposition, for all triples drawn from `morphisms`.
pub fn check_admissible<C, O>(cat: &C, order: &O, morphisms: &[C::Mor]) -> AdmissibilityReport<C::Mor>
where
    C: Category + Sync,
    C::Mor: Send + Sync,
    C::Obj: Send + Sync,
    O: AdmissibleOrder<C::Mor> + Sync,
{
    let mut homs: BTreeMap<(C::Obj, C::Obj), Vec<&C::Mor>> = BTreeMap::new();
    let mut by_source: BTreeMap<C::Obj, Vec<&C::Mor>> = BTreeMap::new();
    for f in morphisms {
        homs.entry((cat.source(f), cat.target(f))).or_default().push(f);
        by_source.entry(cat.source(f)).or_default().push(f);
    }
    let groups: Vec<(&C::Obj, &Vec<&C::Mor>)> = homs.iter().map(|((_, t), fs)| (t, fs)).collect();
    let threads = crate::threads().min(groups.len().max(1));
    let chunk = groups.len().div_ceil(threads).max(1);
    let empty = Vec::new();
    let parts: Vec<AdmissibilityReport<C::Mor>> = std::thread::scope(|s| {
        let handles: Vec<_> = groups
            .chunks(chunk)
            .map(|chunk| {
                let by_source = &by_source;
                let empty = &empty;
                s.spawn(move || {
                    let mut rep = AdmissibilityReport {
                        checked: 0,
                        ties: Vec::new(),
                        violations: Vec::new(),
                    };
                    for (t, fs) in chunk {
                        let gs = by_source.get(*t).unwrap_or(empty);
                        for (i, f) in fs.iter().enumerate() {
                            for f2 in &fs[i + 1..] {
                                let (lo, hi) = match order.compare(f, f2) {
                                    Ordering::Less => (f, f2),
                                    Ordering::Greater => (f2, f),
                                    Ordering::Equal => {
                                        rep.ties.push(((*f).clone(), (*f2).clone()));
                                        continue;
                                    }
                                };
                                for g in gs {
                                    rep.checked += 1;
                                    let ok = match (cat.compose(g, lo), cat.compose(g, hi)) {
                                        (Ok(a), Ok(b)) => order.compare(&a, &b) == Ordering::Less,
                                        _ => false,
                                    };
                                    if !ok {
                                        rep.violations.push(((*lo).clone(), (*hi).clone(), (*g).clone()));
                                    }
                                }
                            }
                        }
                    }
                    rep
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("checker thread")).collect()
    });
    let mut out = AdmissibilityReport {
        checked: 0,
        ties: Vec::new(),
        violations: Vec::new(),
    };
    for p in parts {
        out.checked += p.checked;
        out.ties.extend(p.ties);
        out.violations.extend(p.violations);
    }
    out
}

/// A comparator that orders morphisms by a hash of their debug form. Used
/// to confirm the checker actually detects violations.
pub fn scrambled<M: std::fmt::Debug>(f: &M, g: &M) -> Ordering {
    let h = |x: &M| {
        let mut s = std::collections::hash_map::DefaultHasher::new();
        format!("{x:?}").hash(&mut s);
        s.finish()
    };
    h(f).cmp(&h(g)).then_with(|| format!("{f:?}").cmp(&format!("{g:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::{Opposite, Truncation};
    use crate::finsetcats::{FinKind, FinSetCat, GosCat};

    #[test]
    fn os_op_order_is_admissible() {
        let cat = Opposite(FinSetCat::new(FinKind::OS, 4));
        let ms = cat.all_morphisms();
        let rep = check_admissible(&cat, &OsOpOrder, &ms);
        assert!(rep.checked > 40);
        assert!(rep.is_admissible(), "{:?}", rep.violations.first());
    }

    #[test]
    fn gos_order_examples() {
        let f = GradedSurjection::new(FinMap::identity(2), vec![0, 1]).unwrap();
        let g = GradedSurjection::new(FinMap::identity(2), vec![1, 0]).unwrap();
        assert_eq!(GosOrder.compare(&f, &g), Ordering::Less);
        assert_eq!(GosOrder.compare(&f, &f), Ordering::Equal);
        let cat = Opposite(GosCat {
            max_size: 3,
            max_grading: 2,
        });
        let ms = cat.all_morphisms();
        assert!(check_admissible(&cat, &GosOrder, &ms).is_admissible());
    }

    #[test]
    fn scrambled_order_is_caught() {
        let cat = Opposite(FinSetCat::new(FinKind::OS, 4));
        let ms = cat.all_morphisms();
        let rep = check_admissible(&cat, &FnOrder(scrambled::<FinMap>), &ms);
        assert!(!rep.violations.is_empty());
    }

    #[test]
    fn lifting() {
        let cat = Opposite(FinSetCat::new(FinKind::OS, 3));
        let ms = cat.all_morphisms();
        let id = lift_faithful(&cat, &ms, OsOpOrder, |f: &FinMap| f.clone()).unwrap();
        for f in &ms {
            for g in &ms {
                if cat.source(f) == cat.source(g) && cat.target(f) == cat.target(g) {
                    assert_eq!(id.compare(f, g), OsOpOrder.compare(f, g));
                }
            }
        }
        // collapsing everything to one value is not faithful
        let err = lift_faithful(&cat, &ms, FnOrder(|_: &usize, _: &usize| Ordering::Equal), |_: &FinMap| 0usize);
        assert!(matches!(err, Err(GrobnerError::NotFaithful(_))));
    }

    #[test]
    fn cardinality_lift_on_d() {
        use crate::catconstruct::cardinality;
        use crate::graphcats::{d_objects, GraphCOp, Listed};
        use crate::operads::{GraphFamily, GraphOperad};
        let cat = Listed {
            cat: GraphCOp {
                operad: GraphOperad::new(GraphFamily::POp),
            },
            objects: (1..=4).flat_map(|v| d_objects(2, v)).collect(),
        };
        let ms = cat.all_morphisms();
        assert!(ms.iter().all(|f| cardinality(f).is_min_fiber_ordered()));
        let order = lift_faithful(&cat, &ms, OsOpOrder, cardinality).unwrap();
        let rep = check_admissible(&cat, &order, &ms);
        assert!(rep.checked > 0);
        assert!(rep.is_admissible());
    }
}
