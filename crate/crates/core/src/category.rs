//! Minimal interface for small categories with finite (or truncated) hom
//! sets, together with functors and opposites.

use std::fmt::Debug;
use std::hash::Hash;

use thiserror::Error;

use crate::halfedge::GraphError;
use crate::operads::OperadError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatError {
    #[error("morphisms are not composable: {0}")]
    NotComposable(String),
    #[error("size mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },
    #[error("invalid morphism: {0}")]
    Invalid(String),
    #[error(transparent)]
    Operad(#[from] OperadError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

pub trait Category {
    type Obj: Clone + Eq + Ord + Hash + Debug;
    type Mor: Clone + Eq + Ord + Hash + Debug;

    fn source(&self, f: &Self::Mor) -> Self::Obj;
    fn target(&self, f: &Self::Mor) -> Self::Obj;
    fn identity(&self, x: &Self::Obj) -> Self::Mor;
    /// `g ∘ f`; `f` is applied first.
    fn compose(&self, g: &Self::Mor, f: &Self::Mor) -> Result<Self::Mor, CatError>;
    /// All morphisms `a → b`, possibly cut off by the category's bounds.
    fn hom(&self, a: &Self::Obj, b: &Self::Obj) -> Vec<Self::Mor>;
}

/// A category with a finite list of objects, typically a bounded
/// truncation of an infinite one.
pub trait Truncation: Category {
    fn objects(&self) -> Vec<Self::Obj>;

    fn homs_from(&self, a: &Self::Obj) -> Vec<Self::Mor> {
        self.objects().iter().flat_map(|b| self.hom(a, b)).collect()
    }

    fn all_morphisms(&self) -> Vec<Self::Mor> {
        self.objects().iter().flat_map(|a| self.homs_from(a)).collect()
    }
}

pub trait Functor<C: Category, D: Category> {
    fn obj(&self, x: &C::Obj) -> D::Obj;
    fn mor(&self, f: &C::Mor) -> D::Mor;
}

/// The opposite category.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Opposite<C>(pub C);

impl<C: Category> Category for Opposite<C> {
    type Obj = C::Obj;
    type Mor = C::Mor;

    fn source(&self, f: &C::Mor) -> C::Obj {
        self.0.target(f)
    }
    fn target(&self, f: &C::Mor) -> C::Obj {
        self.0.source(f)
    }
    fn identity(&self, x: &C::Obj) -> C::Mor {
        self.0.identity(x)
    }
    fn compose(&self, g: &C::Mor, f: &C::Mor) -> Result<C::Mor, CatError> {
        self.0.compose(f, g)
    }
    fn hom(&self, a: &C::Obj, b: &C::Obj) -> Vec<C::Mor> {
        self.0.hom(b, a)
    }
}

impl<C: Truncation> Truncation for Opposite<C> {
    fn objects(&self) -> Vec<C::Obj> {
        self.0.objects()
    }
}

/// Checks the unit and associativity laws on every composable triple drawn
/// from `morphisms`. Returns the number of failures.
pub fn law_violations<C: Category>(cat: &C, morphisms: &[C::Mor]) -> usize {
    use std::collections::BTreeMap;
    let mut bad = 0;
    let mut by_source: BTreeMap<C::Obj, Vec<usize>> = BTreeMap::new();
    let targets: Vec<C::Obj> = morphisms.iter().map(|f| cat.target(f)).collect();
    for (k, f) in morphisms.iter().enumerate() {
        let s = cat.source(f);
        let l = cat.compose(&cat.identity(&targets[k]), f);
        let r = cat.compose(f, &cat.identity(&s));
        if l.as_ref() != Ok(f) || r.as_ref() != Ok(f) {
            bad += 1;
        }
        by_source.entry(s).or_default().push(k);
    }
    let empty = Vec::new();
    for (a, f) in morphisms.iter().enumerate() {
        for &b in by_source.get(&targets[a]).unwrap_or(&empty) {
            let g = &morphisms[b];
            let gf = match cat.compose(g, f) {
                Ok(x) => x,
                Err(_) => {
                    bad += 1;
                    continue;
                }
            };
            for &c in by_source.get(&targets[b]).unwrap_or(&empty) {
                let h = &morphisms[c];
                let left = cat.compose(h, &gf);
                let right = cat.compose(h, g).and_then(|hg| cat.compose(&hg, f));
                if left != right || left.is_err() {
                    bad += 1;
                }
            }
        }
    }
    bad
}
