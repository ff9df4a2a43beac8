//! Categories of finite sets `{1, .., n}`: all maps, surjections, ordered
//! surjections, order-preserving injections with their decorations, and
//! graded ordered surjections.

use serde::{Deserialize, Serialize};

use crate::category::{CatError, Category, Truncation};

/// A map `{1..n} → {1..m}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FinMap {
    pub n: usize,
    pub m: usize,
    pub table: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct Flags {
    pub surjective: bool,
    pub injective: bool,
    pub order_preserving: bool,
    pub min_fiber_ordered: bool,
    pub endpoint_preserving: bool,
    pub basepoint_preserving: bool,
}

impl FinMap {
    pub fn new(m: usize, table: Vec<usize>) -> Result<Self, CatError> {
        if let Some(&bad) = table.iter().find(|&&x| x == 0 || x > m) {
            return Err(CatError::Invalid(format!("value {bad} outside 1..={m}")));
        }
        Ok(Self {
            n: table.len(),
            m,
            table,
        })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            n,
            m: n,
            table: (1..=n).collect(),
        }
    }

    pub fn apply(&self, i: usize) -> usize {
        self.table[i - 1]
    }

    /// `h ∘ f`.
    pub fn compose(h: &FinMap, f: &FinMap) -> Result<FinMap, CatError> {
        if f.m != h.n {
            return Err(CatError::SizeMismatch {
                expected: h.n,
                found: f.m,
            });
        }
        Ok(FinMap {
            n: f.n,
            m: h.m,
            table: f.table.iter().map(|&j| h.apply(j)).collect(),
        })
    }

    /// `f⁻¹(i)` in increasing order.
    pub fn fiber(&self, i: usize) -> Vec<usize> {
        (1..=self.n).filter(|&j| self.apply(j) == i).collect()
    }

    pub fn is_surjective(&self) -> bool {
        (1..=self.m).all(|i| self.table.contains(&i))
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.m + 1];
        self.table.iter().all(|&x| !std::mem::replace(&mut seen[x], true))
    }

    pub fn is_order_preserving(&self) -> bool {
        self.table.windows(2).all(|w| w[0] <= w[1])
    }

    /// Surjective with `min f⁻¹(i) < min f⁻¹(j)` for `i < j`.
    pub fn is_min_fiber_ordered(&self) -> bool {
        let mut next = 1;
        for &x in &self.table {
            if x == next {
                next += 1;
            } else if x > next {
                return false;
            }
        }
        next == self.m + 1
    }

    /// `1 ↦ 1` and `n ↦ m`.
    pub fn is_endpoint_preserving(&self) -> bool {
        self.n > 0 && self.m > 0 && self.apply(1) == 1 && self.apply(self.n) == self.m
    }

    /// The marked element is `1`.
    pub fn is_basepoint_preserving(&self) -> bool {
        self.n > 0 && self.m > 0 && self.apply(1) == 1
    }

    pub fn classify(&self) -> Flags {
        Flags {
            surjective: self.is_surjective(),
            injective: self.is_injective(),
            order_preserving: self.is_order_preserving(),
            min_fiber_ordered: self.is_min_fiber_ordered(),
            endpoint_preserving: self.is_endpoint_preserving(),
            basepoint_preserving: self.is_basepoint_preserving(),
        }
    }

    pub fn all_maps(n: usize, m: usize) -> Vec<FinMap> {
        let mut out = Vec::new();
        let mut table = vec![1; n];
        if n > 0 && m == 0 {
            return out;
        }
        loop {
            out.push(FinMap {
                n,
                m,
                table: table.clone(),
            });
            let mut k = n;
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                if table[k] < m {
                    table[k] += 1;
                    break;
                }
                table[k] = 1;
            }
        }
    }

    pub fn surjections(n: usize, m: usize) -> Vec<FinMap> {
        Self::all_maps(n, m).into_iter().filter(|f| f.is_surjective()).collect()
    }

    /// Ordered surjections, generated directly as restricted growth strings.
    pub fn ordered_surjections(n: usize, m: usize) -> Vec<FinMap> {
        fn go(n: usize, m: usize, table: &mut Vec<usize>, max: usize, out: &mut Vec<FinMap>) {
            let left = n - table.len();
            if left < m - max {
                return;
            }
            if left == 0 {
                out.push(FinMap {
                    n,
                    m,
                    table: table.clone(),
                });
                return;
            }
            for x in 1..=(max + 1).min(m) {
                table.push(x);
                go(n, m, table, max.max(x), out);
                table.pop();
            }
        }
        let mut out = Vec::new();
        if m <= n {
            go(n, m, &mut Vec::new(), 0, &mut out);
        }
        out
    }

    /// Order-preserving injections, i.e. `n`-subsets of `{1..m}`.
    pub fn monotone_injections(n: usize, m: usize) -> Vec<FinMap> {
        fn go(n: usize, m: usize, table: &mut Vec<usize>, out: &mut Vec<FinMap>) {
            if table.len() == n {
                out.push(FinMap {
                    n,
                    m,
                    table: table.clone(),
                });
                return;
            }
            let start = table.last().map_or(1, |&x| x + 1);
            let room = n - table.len();
            for x in start..=m {
                if m - x + 1 < room {
                    break;
                }
                table.push(x);
                go(n, m, table, out);
                table.pop();
            }
        }
        let mut out = Vec::new();
        go(n, m, &mut Vec::new(), &mut out);
        out
    }

    /// Writes a surjection as `σ ∘ o` with `o` ordered and `σ` a bijection.
    pub fn factor_surjection(&self) -> Option<(FinMap, FinMap)> {
        if !self.is_surjective() {
            return None;
        }
        let mut rank = vec![0; self.m + 1];
        let mut sigma = Vec::with_capacity(self.m);
        for &x in &self.table {
            if rank[x] == 0 {
                sigma.push(x);
                rank[x] = sigma.len();
            }
        }
        let o = FinMap {
            n: self.n,
            m: self.m,
            table: self.table.iter().map(|&x| rank[x]).collect(),
        };
        let s = FinMap {
            n: self.m,
            m: self.m,
            table: sigma,
        };
        Some((s, o))
    }
}

/// An ordered surjection together with a grading of its codomain.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GradedSurjection {
    pub map: FinMap,
    pub grading: Vec<u32>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FinMapJson {
    pub n: usize,
    pub m: usize,
    pub table: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grading: Option<Vec<u32>>,
}

impl GradedSurjection {
    pub fn new(map: FinMap, grading: Vec<u32>) -> Result<Self, CatError> {
        if !map.is_min_fiber_ordered() {
            return Err(CatError::Invalid("not an ordered surjection".into()));
        }
        if grading.len() != map.m {
            return Err(CatError::SizeMismatch {
                expected: map.m,
                found: grading.len(),
            });
        }
        Ok(Self { map, grading })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            map: FinMap::identity(n),
            grading: vec![0; n],
        }
    }

    pub fn n(&self) -> usize {
        self.map.n
    }

    pub fn m(&self) -> usize {
        self.map.m
    }

    pub fn total_grading(&self) -> u32 {
        self.grading.iter().sum()
    }

    /// `h ∘ f` with `g(i) = g_h(i) + Σ_{j ∈ h⁻¹(i)} g_f(j)`.
    pub fn compose(h: &GradedSurjection, f: &GradedSurjection) -> Result<Self, CatError> {
        let map = FinMap::compose(&h.map, &f.map)?;
        let mut grading = h.grading.clone();
        for j in 1..=f.m() {
            grading[h.map.apply(j) - 1] += f.grading[j - 1];
        }
        Ok(Self { map, grading })
    }

    /// All graded ordered surjections `n → m` with gradings at most `max`.
    pub fn all(n: usize, m: usize, max: u32) -> Vec<Self> {
        let gradings = all_gradings(m, max);
        FinMap::ordered_surjections(n, m)
            .into_iter()
            .flat_map(|f| {
                gradings.iter().map(move |g| Self {
                    map: f.clone(),
                    grading: g.clone(),
                })
            })
            .collect()
    }

    pub fn to_json(&self) -> FinMapJson {
        FinMapJson {
            n: self.map.n,
            m: self.map.m,
            table: self.map.table.clone(),
            grading: Some(self.grading.clone()),
        }
    }

    pub fn from_json(j: &FinMapJson) -> Result<Self, CatError> {
        let map = FinMap::new(j.m, j.table.clone())?;
        if map.n != j.n {
            return Err(CatError::SizeMismatch {
                expected: j.n,
                found: map.n,
            });
        }
        Self::new(map, j.grading.clone().unwrap_or_else(|| vec![0; j.m]))
    }
}

/// All vectors of length `m` with entries in `0..=max`.
pub fn all_gradings(m: usize, max: u32) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..m {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..=max).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

/// The finite-set categories by decoration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FinKind {
    /// all maps
    FA,
    /// surjections
    FS,
    /// ordered surjections
    OS,
    /// order-preserving injections
    OI,
    /// order-preserving injections between non-empty sets
    OIPlus,
    /// order-preserving injections between sets with at least two elements
    OIPlusPlus,
    /// endpoint-preserving injections between non-empty sets
    OIPlusEp,
    /// endpoint-preserving injections between sets with at least two elements
    OIPlusPlusEp,
}

impl FinKind {
    pub fn min_size(self) -> usize {
        match self {
            FinKind::OIPlus | FinKind::OIPlusEp => 1,
            FinKind::OIPlusPlus | FinKind::OIPlusPlusEp => 2,
            _ => 0,
        }
    }

    pub fn admits(self, f: &FinMap) -> bool {
        if f.n < self.min_size() || f.m < self.min_size() {
            return false;
        }
        let oi = || f.is_injective() && f.is_order_preserving();
        match self {
            FinKind::FA => true,
            FinKind::FS => f.is_surjective(),
            FinKind::OS => f.is_min_fiber_ordered(),
            FinKind::OI | FinKind::OIPlus | FinKind::OIPlusPlus => oi(),
            FinKind::OIPlusEp | FinKind::OIPlusPlusEp => oi() && f.is_endpoint_preserving(),
        }
    }
}

/// A finite-set category truncated to objects of size at most `max_size`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FinSetCat {
    pub kind: FinKind,
    pub max_size: usize,
}

impl FinSetCat {
    pub fn new(kind: FinKind, max_size: usize) -> Self {
        Self { kind, max_size }
    }
}

impl Category for FinSetCat {
    type Obj = usize;
    type Mor = FinMap;

    fn source(&self, f: &FinMap) -> usize {
        f.n
    }
    fn target(&self, f: &FinMap) -> usize {
        f.m
    }
    fn identity(&self, x: &usize) -> FinMap {
        FinMap::identity(*x)
    }
    fn compose(&self, g: &FinMap, f: &FinMap) -> Result<FinMap, CatError> {
        FinMap::compose(g, f)
    }
    fn hom(&self, a: &usize, b: &usize) -> Vec<FinMap> {
        let (a, b) = (*a, *b);
        let raw = match self.kind {
            FinKind::FA => FinMap::all_maps(a, b),
            FinKind::FS => FinMap::surjections(a, b),
            FinKind::OS => FinMap::ordered_surjections(a, b),
            _ => FinMap::monotone_injections(a, b),
        };
        raw.into_iter().filter(|f| self.kind.admits(f)).collect()
    }
}

impl Truncation for FinSetCat {
    fn objects(&self) -> Vec<usize> {
        (self.kind.min_size()..=self.max_size).collect()
    }
}

/// Graded ordered surjections, truncated by size and grading.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GosCat {
    pub max_size: usize,
    pub max_grading: u32,
}

impl Category for GosCat {
    type Obj = usize;
    type Mor = GradedSurjection;

    fn source(&self, f: &GradedSurjection) -> usize {
        f.n()
    }
    fn target(&self, f: &GradedSurjection) -> usize {
        f.m()
    }
    fn identity(&self, x: &usize) -> GradedSurjection {
        GradedSurjection::identity(*x)
    }
    fn compose(&self, g: &GradedSurjection, f: &GradedSurjection) -> Result<GradedSurjection, CatError> {
        GradedSurjection::compose(g, f)
    }
    fn hom(&self, a: &usize, b: &usize) -> Vec<GradedSurjection> {
        GradedSurjection::all(*a, *b, self.max_grading)
    }
}

impl Truncation for GosCat {
    fn objects(&self) -> Vec<usize> {
        (0..=self.max_size).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::law_violations;

    fn binom(n: usize, k: usize) -> usize {
        if k > n {
            return 0;
        }
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    fn stirling2(n: usize, k: usize) -> usize {
        match (n, k) {
            (0, 0) => 1,
            (0, _) | (_, 0) => 0,
            _ => k * stirling2(n - 1, k) + stirling2(n - 1, k - 1),
        }
    }

    #[test]
    fn counts_match_formulas() {
        for n in 0..=4 {
            for m in 0..=4 {
                assert_eq!(FinMap::all_maps(n, m).len(), m.pow(n as u32));
                assert_eq!(FinMap::ordered_surjections(n, m).len(), stirling2(n, m));
                let fact: usize = (1..=m).product();
                assert_eq!(FinMap::surjections(n, m).len(), stirling2(n, m) * fact);
                assert_eq!(FinMap::monotone_injections(n, m).len(), binom(m, n));
            }
        }
    }

    #[test]
    fn classify_examples() {
        let id = FinMap::identity(3).classify();
        assert!(id.order_preserving && id.min_fiber_ordered && id.endpoint_preserving && id.injective);
        let c = FinMap::new(1, vec![1, 1, 1]).unwrap().classify();
        assert!(c.surjective && !c.injective);
        let swap = FinMap::new(2, vec![2, 1]).unwrap().classify();
        assert!(swap.surjective && !swap.min_fiber_ordered);
    }

    #[test]
    fn graded_composition() {
        let f = GradedSurjection::new(FinMap::new(2, vec![1, 2, 2]).unwrap(), vec![1, 0]).unwrap();
        let h = GradedSurjection::new(FinMap::new(1, vec![1, 1]).unwrap(), vec![2]).unwrap();
        let hf = GradedSurjection::compose(&h, &f).unwrap();
        assert_eq!(hf.map.table, vec![1, 1, 1]);
        assert_eq!(hf.grading, vec![3]);
        assert_eq!(GradedSurjection::compose(&hf, &GradedSurjection::identity(3)).unwrap(), hf);
        assert!(GradedSurjection::compose(&f, &h).is_err());
    }

    #[test]
    fn gos_is_a_category() {
        let cat = GosCat {
            max_size: 3,
            max_grading: 1,
        };
        assert_eq!(law_violations(&cat, &cat.all_morphisms()), 0);
    }

    #[test]
    fn surjections_factor_uniquely() {
        for n in 0..=4 {
            for m in 0..=n {
                for f in FinMap::surjections(n, m) {
                    let (s, o) = f.factor_surjection().unwrap();
                    assert_eq!(FinMap::compose(&s, &o).unwrap(), f);
                    assert!(o.is_min_fiber_ordered() && s.is_injective());
                    let others = FinMap::ordered_surjections(n, m)
                        .into_iter()
                        .flat_map(|o2| FinMap::surjections(m, m).into_iter().map(move |s2| (s2, o2.clone())))
                        .filter(|(s2, o2)| FinMap::compose(s2, o2).unwrap() == f)
                        .count();
                    assert_eq!(others, 1);
                }
            }
        }
    }

    #[test]
    fn decorated_homs() {
        let ep = FinSetCat::new(FinKind::OIPlusPlusEp, 5);
        // endpoint-preserving injections 2 → 4 and 3 → 5
        assert_eq!(ep.hom(&2, &4).len(), 1);
        assert_eq!(ep.hom(&3, &5).len(), 3);
        assert!(ep.hom(&1, &3).is_empty());
        assert_eq!(law_violations(&ep, &ep.all_morphisms()), 0);
    }

    #[test]
    fn json_roundtrip() {
        let f = GradedSurjection::new(FinMap::new(2, vec![1, 2, 1]).unwrap(), vec![0, 4]).unwrap();
        let s = serde_json::to_string(&f.to_json()).unwrap();
        let back: FinMapJson = serde_json::from_str(&s).unwrap();
        assert_eq!(GradedSurjection::from_json(&back).unwrap(), f);
    }
}
