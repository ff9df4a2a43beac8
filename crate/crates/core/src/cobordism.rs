//! Orientable 2-cobordisms between sequences of circles, modeled by the
//! partition of boundary circles into components and the genus of each
//! component.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::category::{CatError, Category, Functor, Truncation};
use crate::finsetcats::{FinMap, GradedSurjection};
use crate::halfedge::UnionFind;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CobError {
    #[error("size mismatch: expected {expected} circles, found {found}")]
    SizeMismatch { expected: usize, found: usize },
    #[error("euler characteristic gives no integral genus (chi {chi}, boundary {boundary})")]
    NonIntegerGenus { chi: i64, boundary: usize },
    #[error("some component has empty target boundary")]
    NotNC,
    #[error("the resulting surface is not connected")]
    Disconnects,
    #[error("invalid cobordism: {0}")]
    Invalid(String),
}

impl From<CobError> for CatError {
    fn from(e: CobError) -> Self {
        match e {
            CobError::SizeMismatch { expected, found } => CatError::SizeMismatch { expected, found },
            other => CatError::Invalid(other.to_string()),
        }
    }
}

/// A connected piece: source circles `s`, target circles `t` (both
/// 1-based, sorted) and genus.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Component {
    #[serde(rename = "S")]
    pub s: Vec<usize>,
    #[serde(rename = "T")]
    pub t: Vec<usize>,
    pub g: u32,
}

impl Component {
    pub fn new(mut s: Vec<usize>, mut t: Vec<usize>, g: u32) -> Self {
        s.sort_unstable();
        t.sort_unstable();
        Self { s, t, g }
    }

    pub fn boundary(&self) -> usize {
        self.s.len() + self.t.len()
    }

    pub fn euler(&self) -> i64 {
        2 - 2 * self.g as i64 - self.boundary() as i64
    }
}

/// A cobordism from `n` circles to `m` circles. Components are kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cobordism {
    pub n: usize,
    pub m: usize,
    pub components: Vec<Component>,
}

/// A connected orientable surface with `boundary` indexed circles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Surface {
    pub genus: u32,
    pub boundary: usize,
}

impl Surface {
    pub fn euler(&self) -> i64 {
        2 - 2 * self.genus as i64 - self.boundary as i64
    }

    /// The surface as a cobordism from no circles.
    pub fn as_cobordism(&self) -> Cobordism {
        Cobordism {
            n: 0,
            m: self.boundary,
            components: vec![Component::new(vec![], (1..=self.boundary).collect(), self.genus)],
        }
    }
}

fn genus_from(chi: i64, boundary: usize) -> Result<u32, CobError> {
    let twice = 2 - chi - boundary as i64;
    if twice < 0 || twice % 2 != 0 {
        return Err(CobError::NonIntegerGenus { chi, boundary });
    }
    Ok((twice / 2) as u32)
}

impl Cobordism {
    pub fn new(n: usize, m: usize, components: Vec<Component>) -> Result<Self, CobError> {
        let mut src = vec![0u32; n + 1];
        let mut tgt = vec![0u32; m + 1];
        for c in &components {
            for &i in &c.s {
                if i == 0 || i > n {
                    return Err(CobError::Invalid(format!("source circle {i} out of range")));
                }
                src[i] += 1;
            }
            for &j in &c.t {
                if j == 0 || j > m {
                    return Err(CobError::Invalid(format!("target circle {j} out of range")));
                }
                tgt[j] += 1;
            }
        }
        if src[1..].iter().chain(&tgt[1..]).any(|&k| k != 1) {
            return Err(CobError::Invalid("components do not partition the circles".into()));
        }
        Ok(Self::normalized(n, m, components))
    }

    fn normalized(n: usize, m: usize, components: Vec<Component>) -> Self {
        let mut components: Vec<Component> = components
            .into_iter()
            .map(|c| Component::new(c.s, c.t, c.g))
            .collect();
        components.sort();
        Self { n, m, components }
    }

    /// Cylinders.
    pub fn identity(n: usize) -> Self {
        Self::normalized(n, n, (1..=n).map(|i| Component::new(vec![i], vec![i], 0)).collect())
    }

    pub fn euler(&self) -> i64 {
        self.components.iter().map(Component::euler).sum()
    }

    /// Every component reaches the target.
    pub fn is_nc(&self) -> bool {
        self.components.iter().all(|c| !c.t.is_empty())
    }

    /// Every component reaches the source, so nothing is created from the
    /// empty sequence.
    pub fn is_cob_prime(&self) -> bool {
        self.components.iter().all(|c| !c.s.is_empty())
    }

    /// `h ∘ f`: glue the target of `f` to the source of `h`.
    pub fn compose(h: &Cobordism, f: &Cobordism) -> Result<Cobordism, CobError> {
        if f.m != h.n {
            return Err(CobError::SizeMismatch {
                expected: h.n,
                found: f.m,
            });
        }
        let a = f.components.len();
        let total = a + h.components.len();
        let mut uf = UnionFind::new(total);
        let mut owner_f = vec![0; f.m + 1];
        for (k, c) in f.components.iter().enumerate() {
            for &j in &c.t {
                owner_f[j] = k;
            }
        }
        for (k, c) in h.components.iter().enumerate() {
            for &j in &c.s {
                uf.union(owner_f[j], a + k);
            }
        }
        let mut merged: Vec<Option<(Vec<usize>, Vec<usize>, i64)>> = vec![None; total];
        for k in 0..total {
            let r = uf.find(k);
            let entry = merged[r].get_or_insert_with(|| (Vec::new(), Vec::new(), 0));
            if k < a {
                let c = &f.components[k];
                entry.0.extend(&c.s);
                entry.2 += c.euler();
            } else {
                let c = &h.components[k - a];
                entry.1.extend(&c.t);
                entry.2 += c.euler();
            }
        }
        let mut comps = Vec::new();
        for (s, t, chi) in merged.into_iter().flatten() {
            let g = genus_from(chi, s.len() + t.len())?;
            comps.push(Component::new(s, t, g));
        }
        Ok(Self::normalized(f.n, h.m, comps))
    }

    /// All cobordisms `n → m` with component genus at most `max_genus`.
    pub fn all(n: usize, m: usize, max_genus: u32) -> Vec<Cobordism> {
        let total = n + m;
        let mut out = Vec::new();
        for blocks in set_partitions(total) {
            let k = blocks.iter().copied().max().map_or(0, |x| x + 1);
            for genera in crate::finsetcats::all_gradings(k, max_genus) {
                let comps = (0..k)
                    .map(|b| {
                        let s = (0..n).filter(|&i| blocks[i] == b).map(|i| i + 1).collect();
                        let t = (0..m).filter(|&j| blocks[n + j] == b).map(|j| j + 1).collect();
                        Component::new(s, t, genera[b])
                    })
                    .collect();
                out.push(Self::normalized(n, m, comps));
            }
        }
        out.sort();
        out
    }

    /// The split of the circles into components as a JSON-friendly value.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("cobordism serializes")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self, CobError> {
        let raw: Cobordism = serde_json::from_value(v.clone()).map_err(|e| CobError::Invalid(e.to_string()))?;
        Self::new(raw.n, raw.m, raw.components)
    }
}

/// Set partitions of `{0..n}` as restricted growth strings.
fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn go(n: usize, cur: &mut Vec<usize>, max: usize, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        let top = if cur.is_empty() { 0 } else { max + 1 };
        for b in 0..=top {
            cur.push(b);
            go(n, cur, max.max(b), out);
            cur.pop();
        }
    }
    go(n, &mut cur, 0, &mut out);
    out
}

/// The cobordism attached to a graded ordered surjection `f: n → m`, read
/// backwards: circle `i` of `m` is joined to the circles `f⁻¹(i)` by a
/// surface of genus `g_f(i)`.
pub fn phi(f: &GradedSurjection) -> Cobordism {
    let comps = (1..=f.m())
        .map(|i| Component::new(vec![i], f.map.fiber(i), f.grading[i - 1]))
        .collect();
    Cobordism::normalized(f.m(), f.n(), comps)
}

/// The genus-0 cobordism sending each component of `f` to its own circle,
/// circles ordered by the smallest target circle they feed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub splitter: Cobordism,
    pub graded: GradedSurjection,
}

/// Writes an nc-cobordism as `phi(g) ∘ splitter`.
pub fn factor_via_gos(f: &Cobordism) -> Result<Factorization, CobError> {
    if !f.is_nc() {
        return Err(CobError::NotNC);
    }
    let mut comps: Vec<&Component> = f.components.iter().collect();
    comps.sort_by_key(|c| c.t[0]);
    let k = comps.len();
    let splitter = Cobordism::normalized(
        f.n,
        k,
        comps
            .iter()
            .enumerate()
            .map(|(j, c)| Component::new(c.s.clone(), vec![j + 1], 0))
            .collect(),
    );
    let mut table = vec![0; f.m];
    for (j, c) in comps.iter().enumerate() {
        for &t in &c.t {
            table[t - 1] = j + 1;
        }
    }
    let map = FinMap::new(k, table).map_err(|e| CobError::Invalid(e.to_string()))?;
    let graded = GradedSurjection::new(map, comps.iter().map(|c| c.g).collect())
        .map_err(|e| CobError::Invalid(e.to_string()))?;
    Ok(Factorization { splitter, graded })
}

/// Whether every component of `c` has one target circle and genus 0.
pub fn is_splitter(c: &Cobordism) -> bool {
    c.components.iter().all(|x| x.t.len() == 1 && x.g == 0)
}

/// The surface obtained by gluing `f` onto `x`.
pub fn cs_action(x: &Surface, f: &Cobordism, nc: bool) -> Result<Surface, CobError> {
    if nc && !f.is_nc() {
        return Err(CobError::NotNC);
    }
    let glued = Cobordism::compose(f, &x.as_cobordism())?;
    if glued.components.len() != 1 {
        return Err(CobError::Disconnects);
    }
    let c = &glued.components[0];
    Ok(Surface {
        genus: c.g,
        boundary: c.t.len(),
    })
}

// ---------------------------------------------------------------------------
// categories

/// Cobordisms with every component touching the source (optionally also the
/// target), truncated by number of circles and component genus.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CobCat {
    pub nc: bool,
    pub max_circles: usize,
    pub max_genus: u32,
}

impl CobCat {
    pub fn admits(&self, c: &Cobordism) -> bool {
        c.is_cob_prime() && (!self.nc || c.is_nc())
    }
}

impl Category for CobCat {
    type Obj = usize;
    type Mor = Cobordism;

    fn source(&self, f: &Cobordism) -> usize {
        f.n
    }
    fn target(&self, f: &Cobordism) -> usize {
        f.m
    }
    fn identity(&self, x: &usize) -> Cobordism {
        Cobordism::identity(*x)
    }
    fn compose(&self, g: &Cobordism, f: &Cobordism) -> Result<Cobordism, CatError> {
        Ok(Cobordism::compose(g, f)?)
    }
    fn hom(&self, a: &usize, b: &usize) -> Vec<Cobordism> {
        Cobordism::all(*a, *b, self.max_genus)
            .into_iter()
            .filter(|c| self.admits(c))
            .collect()
    }
}

impl Truncation for CobCat {
    fn objects(&self) -> Vec<usize> {
        (0..=self.max_circles).collect()
    }
}

/// A morphism of connected surfaces: a source surface and the cobordism
/// glued onto its boundary.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CsMorphism {
    pub source: Surface,
    pub cob: Cobordism,
    pub target: Surface,
}

/// Connected surfaces under gluing, truncated by genus and boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CsCat {
    pub nc: bool,
    pub max_boundary: usize,
    pub max_genus: u32,
}

impl CsCat {
    pub fn base(&self) -> CobCat {
        CobCat {
            nc: self.nc,
            max_circles: self.max_boundary,
            max_genus: self.max_genus,
        }
    }

    pub fn act(&self, x: &Surface, f: &Cobordism) -> Result<CsMorphism, CobError> {
        if !self.base().admits(f) {
            return Err(if self.nc && !f.is_nc() { CobError::NotNC } else { CobError::Disconnects });
        }
        let target = cs_action(x, f, self.nc)?;
        Ok(CsMorphism {
            source: *x,
            cob: f.clone(),
            target,
        })
    }
}

impl Category for CsCat {
    type Obj = Surface;
    type Mor = CsMorphism;

    fn source(&self, f: &CsMorphism) -> Surface {
        f.source
    }
    fn target(&self, f: &CsMorphism) -> Surface {
        f.target
    }
    fn identity(&self, x: &Surface) -> CsMorphism {
        CsMorphism {
            source: *x,
            cob: Cobordism::identity(x.boundary),
            target: *x,
        }
    }
    fn compose(&self, g: &CsMorphism, f: &CsMorphism) -> Result<CsMorphism, CatError> {
        if f.target != g.source {
            return Err(CatError::NotComposable(format!("{:?} vs {:?}", f.target, g.source)));
        }
        Ok(CsMorphism {
            source: f.source,
            cob: Cobordism::compose(&g.cob, &f.cob)?,
            target: g.target,
        })
    }
    fn hom(&self, a: &Surface, b: &Surface) -> Vec<CsMorphism> {
        // the glued genus is the genus-0 value plus the component genera, so
        // only distributions of the difference need to be tried
        let mut out = Vec::new();
        for f0 in Cobordism::all(a.boundary, b.boundary, 0) {
            let Ok(m0) = self.act(a, &f0) else { continue };
            if m0.target.genus > b.genus {
                continue;
            }
            let k = f0.components.len();
            for genera in crate::catconstruct::compositions((b.genus - m0.target.genus) as usize, k) {
                let comps = f0
                    .components
                    .iter()
                    .zip(&genera)
                    .map(|(c, &g)| Component::new(c.s.clone(), c.t.clone(), g as u32))
                    .collect();
                let f = Cobordism::normalized(a.boundary, b.boundary, comps);
                if let Ok(m) = self.act(a, &f) {
                    if m.target == *b {
                        out.push(m);
                    }
                }
            }
        }
        out.sort();
        out
    }
}

impl Truncation for CsCat {
    fn objects(&self) -> Vec<Surface> {
        let mut out = Vec::new();
        for genus in 0..=self.max_genus {
            for boundary in 0..=self.max_boundary {
                out.push(Surface { genus, boundary });
            }
        }
        out
    }
}

/// Forgetting the surface: `CS → Cob′`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Boundary;

impl Functor<CsCat, CobCat> for Boundary {
    fn obj(&self, x: &Surface) -> usize {
        x.boundary
    }
    fn mor(&self, f: &CsMorphism) -> Cobordism {
        f.cob.clone()
    }
}

/// `phi` as a functor `gOS^op → ncCob′`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Phi;

impl Functor<crate::category::Opposite<crate::finsetcats::GosCat>, CobCat> for Phi {
    fn obj(&self, x: &usize) -> usize {
        *x
    }
    fn mor(&self, f: &GradedSurjection) -> Cobordism {
        phi(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn comp(s: &[usize], t: &[usize], g: u32) -> Component {
        Component::new(s.to_vec(), t.to_vec(), g)
    }

    #[test]
    fn pants_and_handles() {
        let pants = Cobordism::new(2, 1, vec![comp(&[1, 2], &[1], 0)]).unwrap();
        let handle = Cobordism::new(1, 1, vec![comp(&[1], &[1], 1)]).unwrap();
        assert_eq!(pants.euler(), -1);
        assert_eq!(handle.euler(), -2);
        let got = Cobordism::compose(&handle, &pants).unwrap();
        assert_eq!(got.components, vec![comp(&[1, 2], &[1], 1)]);

        let copants = Cobordism::new(1, 2, vec![comp(&[1], &[1, 2], 0)]).unwrap();
        let torus_tube = Cobordism::compose(&pants, &copants).unwrap();
        assert_eq!(torus_tube.components, vec![comp(&[1], &[1], 1)]);
        let id = Cobordism::identity(3);
        assert_eq!(Cobordism::compose(&id, &id).unwrap(), id);
        assert!(matches!(
            Cobordism::compose(&pants, &pants),
            Err(CobError::SizeMismatch { .. })
        ));
    }

    #[test]
    fn rejects_bad_partitions() {
        assert!(Cobordism::new(2, 1, vec![comp(&[1], &[1], 0)]).is_err());
        assert!(Cobordism::new(1, 1, vec![comp(&[1], &[1], 0), comp(&[1], &[], 0)]).is_err());
    }

    #[test]
    fn phi_examples() {
        assert_eq!(phi(&GradedSurjection::identity(2)), Cobordism::identity(2));
        let f = GradedSurjection::new(FinMap::new(1, vec![1, 1, 1]).unwrap(), vec![2]).unwrap();
        let c = phi(&f);
        assert_eq!((c.n, c.m), (1, 3));
        assert_eq!(c.components, vec![comp(&[1], &[1, 2, 3], 2)]);
    }

    #[test]
    fn counting_cobordisms() {
        // one circle to one circle: either a cylinder, or a cap and a cup
        assert_eq!(Cobordism::all(1, 1, 0).len(), 2);
        assert_eq!(Cobordism::all(1, 1, 1).len(), 2 + 4);
    }

    #[test]
    fn factorization_of_phi_shaped() {
        let f = GradedSurjection::new(FinMap::new(2, vec![1, 2, 1]).unwrap(), vec![1, 0]).unwrap();
        let c = phi(&f);
        let fac = factor_via_gos(&c).unwrap();
        assert_eq!(fac.graded, f);
        assert_eq!(fac.splitter, Cobordism::identity(2));
        let id = factor_via_gos(&Cobordism::identity(3)).unwrap();
        assert_eq!(id.graded, GradedSurjection::identity(3));
        let cap = Cobordism::new(1, 0, vec![comp(&[1], &[], 0)]).unwrap();
        assert_eq!(factor_via_gos(&cap), Err(CobError::NotNC));
    }

    #[test]
    fn surfaces() {
        let disk = Surface { genus: 0, boundary: 1 };
        let f = Cobordism::new(1, 3, vec![comp(&[1], &[1, 2, 3], 1)]).unwrap();
        assert_eq!(cs_action(&disk, &f, true).unwrap(), Surface { genus: 1, boundary: 3 });
        assert_eq!(cs_action(&disk, &Cobordism::identity(1), true).unwrap(), disk);
        let cap = Cobordism::new(1, 0, vec![comp(&[1], &[], 0)]).unwrap();
        assert_eq!(cs_action(&disk, &cap, true), Err(CobError::NotNC));
        assert_eq!(cs_action(&disk, &cap, false).unwrap(), Surface { genus: 0, boundary: 0 });
        let birth = Cobordism::new(1, 2, vec![comp(&[1], &[1], 0), comp(&[], &[2], 0)]).unwrap();
        assert_eq!(cs_action(&disk, &birth, false), Err(CobError::Disconnects));
    }
}
