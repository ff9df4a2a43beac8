//! Categories built from an operad: `C(P)` from 2-level trees, the twisted
//! arrow category `Tw(P)` and the enveloping category `U(P)` from 3-level
//! trees, with the cardinality and fiber functors.

use std::collections::BTreeSet;
use std::fmt::Debug;

use serde::{Deserialize, Serialize};

use crate::category::{CatError, Category, Functor, Truncation};
use crate::finsetcats::FinMap;
use crate::operads::{compose_full, EnumerableOperad, Operad, Perm};

/// A morphism `q → p` of `C(P)`: the target `p` at the root, one upper
/// operation per input of `p`, and the labels of the leaves above each upper
/// vertex (increasing, 1-based).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TwoLevelTree<Op> {
    pub target: Op,
    pub uppers: Vec<Op>,
    pub labels: Vec<Vec<usize>>,
}

/// Permutation sending planar leaf `k` to `label - 1`.
fn label_perm(blocks: &[&[usize]]) -> Result<Perm, CatError> {
    let flat: Vec<usize> = blocks.iter().flat_map(|b| b.iter().copied()).collect();
    if flat.contains(&0) {
        return Err(CatError::Invalid("labels start at 1".into()));
    }
    Perm::from_images(flat.iter().map(|&l| l - 1).collect()).map_err(CatError::from)
}

fn increasing(b: &[usize]) -> bool {
    b.windows(2).all(|w| w[0] < w[1])
}

/// Sorts `labels` and returns the permutation sending position `k` to the
/// rank of `labels[k]`.
fn renormalize(labels: &[usize]) -> (Perm, Vec<usize>) {
    let mut sorted = labels.to_vec();
    sorted.sort_unstable();
    (Perm::ranks(labels), sorted)
}

impl<Op: Clone> TwoLevelTree<Op> {
    pub fn source_arity(&self) -> usize {
        self.labels.iter().map(Vec::len).sum()
    }
}

pub fn validate2<O: Operad>(op: &O, f: &TwoLevelTree<O::Op>) -> Result<(), CatError> {
    if f.uppers.len() != op.arity(&f.target) || f.labels.len() != f.uppers.len() {
        return Err(CatError::Invalid("one upper vertex per input of the target".into()));
    }
    for (i, (q, b)) in f.uppers.iter().zip(&f.labels).enumerate() {
        if b.len() != op.arity(q) || !increasing(b) {
            return Err(CatError::Invalid(format!("labels above upper vertex {}", i + 1)));
        }
        if op.output_color(q) != op.input_color(&f.target, i + 1) {
            return Err(CatError::NotComposable(format!("color at input {}", i + 1)));
        }
    }
    let blocks: Vec<&[usize]> = f.labels.iter().map(Vec::as_slice).collect();
    label_perm(&blocks)?;
    Ok(())
}

/// The operation `q` that the tree maps from.
pub fn source_of2<O: Operad>(op: &O, f: &TwoLevelTree<O::Op>) -> Result<O::Op, CatError> {
    let raw = compose_full(op, &f.target, &f.uppers)?;
    let blocks: Vec<&[usize]> = f.labels.iter().map(Vec::as_slice).collect();
    Ok(op.sym_act(&raw, &label_perm(&blocks)?)?)
}

pub fn identity2<O: Operad>(op: &O, p: &O::Op) -> TwoLevelTree<O::Op> {
    let n = op.arity(p);
    TwoLevelTree {
        target: p.clone(),
        uppers: (1..=n).map(|i| op.identity(&op.input_color(p, i))).collect(),
        labels: (1..=n).map(|i| vec![i]).collect(),
    }
}

/// `f ∘ g` for `g: r → q` and `f: q → p`.
pub fn compose2<O: Operad>(
    op: &O,
    f: &TwoLevelTree<O::Op>,
    g: &TwoLevelTree<O::Op>,
) -> Result<TwoLevelTree<O::Op>, CatError> {
    if source_of2(op, f)? != g.target {
        return Err(CatError::NotComposable("source of the outer tree differs from the inner target".into()));
    }
    let mut uppers = Vec::with_capacity(f.uppers.len());
    let mut labels = Vec::with_capacity(f.uppers.len());
    for (q, block) in f.uppers.iter().zip(&f.labels) {
        let parts: Vec<O::Op> = block.iter().map(|&j| g.uppers[j - 1].clone()).collect();
        let raw = compose_full(op, q, &parts)?;
        let ell: Vec<usize> = block.iter().flat_map(|&j| g.labels[j - 1].iter().copied()).collect();
        let (sigma, sorted) = renormalize(&ell);
        uppers.push(op.sym_act(&raw, &sigma)?);
        labels.push(sorted);
    }
    Ok(TwoLevelTree {
        target: f.target.clone(),
        uppers,
        labels,
    })
}

/// The set map sending each leaf label to the index of the upper vertex
/// below it.
pub fn cardinality<Op: Clone>(f: &TwoLevelTree<Op>) -> FinMap {
    let m = f.source_arity();
    let mut table = vec![0; m];
    for (i, b) in f.labels.iter().enumerate() {
        for &l in b {
            table[l - 1] = i + 1;
        }
    }
    FinMap {
        n: m,
        m: f.uppers.len(),
        table,
    }
}

/// The part of `g` sitting above the `i`-th upper vertex of `f`, with labels
/// shifted order-preservingly.
pub fn fiber<Op: Clone>(f: &TwoLevelTree<Op>, g: &TwoLevelTree<Op>, i: usize) -> Result<TwoLevelTree<Op>, CatError> {
    if i == 0 || i > f.uppers.len() {
        return Err(CatError::Invalid(format!("index {i} out of range")));
    }
    let block = &f.labels[i - 1];
    let mut all: Vec<usize> = block.iter().flat_map(|&j| g.labels[j - 1].iter().copied()).collect();
    all.sort_unstable();
    let shift = |l: usize| all.binary_search(&l).unwrap() + 1;
    Ok(TwoLevelTree {
        target: f.uppers[i - 1].clone(),
        uppers: block.iter().map(|&j| g.uppers[j - 1].clone()).collect(),
        labels: block
            .iter()
            .map(|&j| g.labels[j - 1].iter().map(|&l| shift(l)).collect())
            .collect(),
    })
}

// ---------------------------------------------------------------------------
// enumeration helpers

/// Weak compositions of `total` into `parts` nonnegative parts.
pub fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Splits of `{1..Σsizes}` into increasing blocks of the given sizes.
pub fn shuffles(sizes: &[usize]) -> Vec<Vec<Vec<usize>>> {
    let total: usize = sizes.iter().sum();
    let mut out = Vec::new();
    let mut blocks: Vec<Vec<usize>> = sizes.iter().map(|&s| Vec::with_capacity(s)).collect();
    fn go(next: usize, total: usize, sizes: &[usize], blocks: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if next > total {
            out.push(blocks.clone());
            return;
        }
        for b in 0..sizes.len() {
            if blocks[b].len() < sizes[b] {
                blocks[b].push(next);
                go(next + 1, total, sizes, blocks, out);
                blocks[b].pop();
            }
        }
    }
    go(1, total, sizes, &mut blocks, &mut out);
    out
}

fn cartesian<T: Clone>(lists: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut out = vec![Vec::new()];
    for l in lists {
        out = out
            .into_iter()
            .flat_map(|v| {
                l.iter().map(move |x| {
                    let mut w = v.clone();
                    w.push(x.clone());
                    w
                })
            })
            .collect();
    }
    out
}

/// All 2-level trees over `p` whose source has arity `m`.
pub fn two_level_trees<O: EnumerableOperad>(op: &O, p: &O::Op, m: usize) -> Vec<TwoLevelTree<O::Op>> {
    let n = op.arity(p);
    let colors = op.input_colors(p);
    let mut out = Vec::new();
    for ks in compositions(m, n) {
        let choices: Vec<Vec<O::Op>> = ks.iter().zip(&colors).map(|(&k, c)| op.operations(c, k)).collect();
        if choices.iter().any(Vec::is_empty) {
            continue;
        }
        let shuf = shuffles(&ks);
        for uppers in cartesian(&choices) {
            for labels in &shuf {
                out.push(TwoLevelTree {
                    target: p.clone(),
                    uppers: uppers.clone(),
                    labels: labels.clone(),
                });
            }
        }
    }
    out
}

/// `C(P)` with objects truncated at `max_arity`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CCat<O> {
    pub operad: O,
    pub max_arity: usize,
}

impl<O: EnumerableOperad<Color = ()>> Category for CCat<O> {
    type Obj = O::Op;
    type Mor = TwoLevelTree<O::Op>;

    fn source(&self, f: &Self::Mor) -> O::Op {
        source_of2(&self.operad, f).expect("valid 2-level tree")
    }
    fn target(&self, f: &Self::Mor) -> O::Op {
        f.target.clone()
    }
    fn identity(&self, x: &O::Op) -> Self::Mor {
        identity2(&self.operad, x)
    }
    fn compose(&self, g: &Self::Mor, f: &Self::Mor) -> Result<Self::Mor, CatError> {
        compose2(&self.operad, g, f)
    }
    fn hom(&self, a: &O::Op, b: &O::Op) -> Vec<Self::Mor> {
        two_level_trees(&self.operad, b, self.operad.arity(a))
            .into_iter()
            .filter(|f| source_of2(&self.operad, f).as_ref() == Ok(a))
            .collect()
    }
}

impl<O: EnumerableOperad<Color = ()>> Truncation for CCat<O> {
    fn objects(&self) -> Vec<O::Op> {
        (0..=self.max_arity).flat_map(|n| self.operad.operations(&(), n)).collect()
    }
}

/// The cardinality functor `C(P) → FA`.
#[derive(Debug, Clone, Copy)]
pub struct Cardinality<O>(pub O);

impl<O: EnumerableOperad<Color = ()>> Functor<CCat<O>, crate::finsetcats::FinSetCat> for Cardinality<O> {
    fn obj(&self, x: &O::Op) -> usize {
        self.0.arity(x)
    }
    fn mor(&self, f: &TwoLevelTree<O::Op>) -> FinMap {
        cardinality(f)
    }
}

// ---------------------------------------------------------------------------
// 3-level trees

/// The part of a 3-level tree that does not depend on the middle vertex:
/// the lower operation (input 1 toward the middle vertex), one upper
/// operation per input of the middle vertex, and leaf labels for the upper
/// vertices and for the direct leaves of the lower vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Frame<Op> {
    pub lower: Op,
    pub uppers: Vec<Op>,
    pub upper_labels: Vec<Vec<usize>>,
    pub lower_labels: Vec<usize>,
}

/// A morphism of `Tw(P)` out of `middle`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ThreeLevelTree<Op> {
    pub middle: Op,
    pub frame: Frame<Op>,
}

/// A morphism of `U(P)` out of a color tuple `(c_0; c_1, .., c_n)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct UMorphism<Op, C> {
    pub source: Vec<C>,
    pub frame: Frame<Op>,
}

impl<Op: Clone> Frame<Op> {
    pub fn target_arity(&self) -> usize {
        self.upper_labels.iter().map(Vec::len).sum::<usize>() + self.lower_labels.len()
    }

    fn blocks(&self) -> Vec<&[usize]> {
        self.upper_labels
            .iter()
            .map(Vec::as_slice)
            .chain(std::iter::once(self.lower_labels.as_slice()))
            .collect()
    }
}

pub fn identity_frame<O: Operad>(op: &O, colors: &[O::Color]) -> Frame<O::Op> {
    let n = colors.len() - 1;
    Frame {
        lower: op.identity(&colors[0]),
        uppers: colors[1..].iter().map(|c| op.identity(c)).collect(),
        upper_labels: (1..=n).map(|i| vec![i]).collect(),
        lower_labels: Vec::new(),
    }
}

/// `(c_0; c_1, .., c_n)` for an operation.
pub fn color_tuple<O: Operad>(op: &O, p: &O::Op) -> Vec<O::Color> {
    let mut out = vec![op.output_color(p)];
    out.extend(op.input_colors(p));
    out
}

pub fn validate_frame<O: Operad>(op: &O, colors: &[O::Color], fr: &Frame<O::Op>) -> Result<(), CatError> {
    let n = colors.len() - 1;
    if fr.uppers.len() != n || fr.upper_labels.len() != n {
        return Err(CatError::Invalid("one upper vertex per input of the middle vertex".into()));
    }
    if op.arity(&fr.lower) == 0 || op.input_color(&fr.lower, 1) != colors[0] {
        return Err(CatError::NotComposable("lower vertex does not accept the middle vertex".into()));
    }
    if fr.lower_labels.len() + 1 != op.arity(&fr.lower) || !increasing(&fr.lower_labels) {
        return Err(CatError::Invalid("labels of the lower vertex".into()));
    }
    for (i, (q, b)) in fr.uppers.iter().zip(&fr.upper_labels).enumerate() {
        if op.output_color(q) != colors[i + 1] {
            return Err(CatError::NotComposable(format!("color at input {}", i + 1)));
        }
        if b.len() != op.arity(q) || !increasing(b) {
            return Err(CatError::Invalid(format!("labels above upper vertex {}", i + 1)));
        }
    }
    label_perm(&fr.blocks())?;
    Ok(())
}

/// Colors of the target: the output of the lower vertex, then the leaf
/// colors in label order.
pub fn frame_target_colors<O: Operad>(op: &O, fr: &Frame<O::Op>) -> Vec<O::Color> {
    let m = fr.target_arity();
    let mut leaves: Vec<Option<O::Color>> = vec![None; m];
    for (q, b) in fr.uppers.iter().zip(&fr.upper_labels) {
        for (k, &l) in b.iter().enumerate() {
            leaves[l - 1] = Some(op.input_color(q, k + 1));
        }
    }
    for (k, &l) in fr.lower_labels.iter().enumerate() {
        leaves[l - 1] = Some(op.input_color(&fr.lower, k + 2));
    }
    let mut out = vec![op.output_color(&fr.lower)];
    out.extend(leaves.into_iter().map(|c| c.expect("labels cover the leaves")));
    out
}

/// Evaluates the tree.
pub fn target_of3<O: Operad>(op: &O, f: &ThreeLevelTree<O::Op>) -> Result<O::Op, CatError> {
    let fr = &f.frame;
    let inner = compose_full(op, &f.middle, &fr.uppers)?;
    let raw = op.compose_at(&fr.lower, 1, &inner)?;
    Ok(op.sym_act(&raw, &label_perm(&fr.blocks())?)?)
}

/// Grafts `outer`'s uppers into `inner`'s leaves and `inner`'s lower vertex
/// into the first input of `outer`'s lower vertex, then evaluates.
pub fn compose_frames<O: Operad>(op: &O, outer: &Frame<O::Op>, inner: &Frame<O::Op>) -> Result<Frame<O::Op>, CatError> {
    if inner.target_arity() != outer.uppers.len() {
        return Err(CatError::NotComposable("arity mismatch".into()));
    }
    let mut uppers = Vec::with_capacity(inner.uppers.len());
    let mut upper_labels = Vec::with_capacity(inner.uppers.len());
    for (q, block) in inner.uppers.iter().zip(&inner.upper_labels) {
        let parts: Vec<O::Op> = block.iter().map(|&j| outer.uppers[j - 1].clone()).collect();
        let raw = compose_full(op, q, &parts)?;
        let ell: Vec<usize> = block
            .iter()
            .flat_map(|&j| outer.upper_labels[j - 1].iter().copied())
            .collect();
        let (sigma, sorted) = renormalize(&ell);
        uppers.push(op.sym_act(&raw, &sigma)?);
        upper_labels.push(sorted);
    }
    let mut parts = vec![op.identity(&op.input_color(&inner.lower, 1))];
    parts.extend(inner.lower_labels.iter().map(|&j| outer.uppers[j - 1].clone()));
    let x = compose_full(op, &inner.lower, &parts)?;
    let raw = op.compose_at(&outer.lower, 1, &x)?;
    let ell: Vec<usize> = inner
        .lower_labels
        .iter()
        .flat_map(|&j| outer.upper_labels[j - 1].iter().copied())
        .chain(outer.lower_labels.iter().copied())
        .collect();
    let (rho, sorted) = renormalize(&ell);
    let mut tau = vec![0];
    tau.extend(rho.images().iter().map(|&r| r + 1));
    let lower = op.sym_act(&raw, &Perm::from_images(tau)?)?;
    Ok(Frame {
        lower,
        uppers,
        upper_labels,
        lower_labels: sorted,
    })
}

pub fn identity3<O: Operad>(op: &O, p: &O::Op) -> ThreeLevelTree<O::Op> {
    ThreeLevelTree {
        middle: p.clone(),
        frame: identity_frame(op, &color_tuple(op, p)),
    }
}

/// `outer ∘ inner` in `Tw(P)`.
pub fn compose3<O: Operad>(
    op: &O,
    outer: &ThreeLevelTree<O::Op>,
    inner: &ThreeLevelTree<O::Op>,
) -> Result<ThreeLevelTree<O::Op>, CatError> {
    if target_of3(op, inner)? != outer.middle {
        return Err(CatError::NotComposable("target of the inner tree differs from the outer source".into()));
    }
    Ok(ThreeLevelTree {
        middle: inner.middle.clone(),
        frame: compose_frames(op, &outer.frame, &inner.frame)?,
    })
}

/// Forgets the middle operation, keeping its colors.
pub fn to_u<O: Operad>(op: &O, f: &ThreeLevelTree<O::Op>) -> UMorphism<O::Op, O::Color> {
    UMorphism {
        source: color_tuple(op, &f.middle),
        frame: f.frame.clone(),
    }
}

/// The unique morphism out of `p` over `u`.
pub fn lift_u<O: Operad>(op: &O, p: &O::Op, u: &UMorphism<O::Op, O::Color>) -> Result<ThreeLevelTree<O::Op>, CatError> {
    if color_tuple(op, p) != u.source {
        return Err(CatError::NotComposable("colors of the source differ".into()));
    }
    Ok(ThreeLevelTree {
        middle: p.clone(),
        frame: u.frame.clone(),
    })
}

/// All vertices other than the middle one have non-zero arity.
pub fn is_r_positive<O: Operad>(op: &O, fr: &Frame<O::Op>) -> bool {
    fr.uppers.iter().all(|q| op.arity(q) > 0)
}

/// Morphisms of the opposite of `C(P)` sit in `Tw(P)` as trees with an
/// identity lower vertex.
pub fn is_c_op<O: Operad>(op: &O, fr: &Frame<O::Op>) -> bool {
    op.is_identity(&fr.lower)
}

/// The 3-level tree with identity lower vertex for a 2-level tree `q → p`,
/// read as a morphism `p → q`.
pub fn c_op_to_tw<O: Operad>(op: &O, f: &TwoLevelTree<O::Op>) -> ThreeLevelTree<O::Op> {
    ThreeLevelTree {
        middle: f.target.clone(),
        frame: Frame {
            lower: op.identity(&op.output_color(&f.target)),
            uppers: f.uppers.clone(),
            upper_labels: f.labels.clone(),
            lower_labels: Vec::new(),
        },
    }
}

/// All frames out of the color tuple `colors` with `m` leaves.
pub fn frames<O: EnumerableOperad<Color = ()>>(op: &O, colors: &[()], m: usize) -> Vec<Frame<O::Op>> {
    let n = colors.len() - 1;
    let mut out = Vec::new();
    for a0 in 1..=m + 1 {
        let lowers = op.operations(&(), a0);
        if lowers.is_empty() {
            continue;
        }
        for ks in compositions(m + 1 - a0, n) {
            let choices: Vec<Vec<O::Op>> = ks.iter().map(|&k| op.operations(&(), k)).collect();
            if choices.iter().any(Vec::is_empty) {
                continue;
            }
            let mut sizes = ks.clone();
            sizes.push(a0 - 1);
            let shuf = shuffles(&sizes);
            for lower in &lowers {
                for uppers in cartesian(&choices) {
                    for labels in &shuf {
                        out.push(Frame {
                            lower: lower.clone(),
                            uppers: uppers.clone(),
                            upper_labels: labels[..n].to_vec(),
                            lower_labels: labels[n].clone(),
                        });
                    }
                }
            }
        }
    }
    out
}

/// Which part of `Tw(P)` to keep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum TwView {
    Full,
    /// lower vertex is an identity
    COp,
    /// no arity-0 vertex besides the middle one
    RPositive,
    /// both of the above
    COpRPositive,
}

impl TwView {
    pub fn admits<O: Operad>(self, op: &O, fr: &Frame<O::Op>) -> bool {
        match self {
            TwView::Full => true,
            TwView::COp => is_c_op(op, fr),
            TwView::RPositive => is_r_positive(op, fr),
            TwView::COpRPositive => is_c_op(op, fr) && is_r_positive(op, fr),
        }
    }
}

/// `Tw(P)` (or a wide subcategory of it) with objects truncated by arity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TwCat<O> {
    pub operad: O,
    pub max_arity: usize,
    pub view: TwView,
}

impl<O> TwCat<O> {
    pub fn new(operad: O, max_arity: usize) -> Self {
        Self {
            operad,
            max_arity,
            view: TwView::Full,
        }
    }
}

impl<O: EnumerableOperad<Color = ()>> TwCat<O> {
    /// Every morphism out of `p` whose target has arity at most `bound`.
    pub fn morphisms_from(&self, p: &O::Op, bound: usize) -> Vec<ThreeLevelTree<O::Op>> {
        let colors = color_tuple(&self.operad, p);
        (0..=bound)
            .flat_map(|m| frames(&self.operad, &colors, m))
            .filter(|fr| self.view.admits(&self.operad, fr))
            .map(|frame| ThreeLevelTree {
                middle: p.clone(),
                frame,
            })
            .collect()
    }
}

impl<O: EnumerableOperad<Color = ()>> Category for TwCat<O> {
    type Obj = O::Op;
    type Mor = ThreeLevelTree<O::Op>;

    fn source(&self, f: &Self::Mor) -> O::Op {
        f.middle.clone()
    }
    fn target(&self, f: &Self::Mor) -> O::Op {
        target_of3(&self.operad, f).expect("valid 3-level tree")
    }
    fn identity(&self, x: &O::Op) -> Self::Mor {
        identity3(&self.operad, x)
    }
    fn compose(&self, g: &Self::Mor, f: &Self::Mor) -> Result<Self::Mor, CatError> {
        compose3(&self.operad, g, f)
    }
    fn hom(&self, a: &O::Op, b: &O::Op) -> Vec<Self::Mor> {
        let colors = color_tuple(&self.operad, a);
        frames(&self.operad, &colors, self.operad.arity(b))
            .into_iter()
            .filter(|fr| self.view.admits(&self.operad, fr))
            .map(|frame| ThreeLevelTree {
                middle: a.clone(),
                frame,
            })
            .filter(|f| target_of3(&self.operad, f).as_ref() == Ok(b))
            .collect()
    }
}

impl<O: EnumerableOperad<Color = ()>> Truncation for TwCat<O> {
    fn objects(&self) -> Vec<O::Op> {
        (0..=self.max_arity).flat_map(|n| self.operad.operations(&(), n)).collect()
    }
}

/// `U(P)` for a single-colored operad; objects are arities.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UCat<O> {
    pub operad: O,
    pub max_arity: usize,
    pub prop_only: bool,
}

impl<O: EnumerableOperad<Color = ()>> Category for UCat<O> {
    type Obj = usize;
    type Mor = UMorphism<O::Op, ()>;

    fn source(&self, f: &Self::Mor) -> usize {
        f.source.len() - 1
    }
    fn target(&self, f: &Self::Mor) -> usize {
        f.frame.target_arity()
    }
    fn identity(&self, x: &usize) -> Self::Mor {
        let colors = vec![(); x + 1];
        UMorphism {
            frame: identity_frame(&self.operad, &colors),
            source: colors,
        }
    }
    fn compose(&self, g: &Self::Mor, f: &Self::Mor) -> Result<Self::Mor, CatError> {
        if frame_target_colors(&self.operad, &f.frame) != g.source {
            return Err(CatError::NotComposable("colors".into()));
        }
        Ok(UMorphism {
            source: f.source.clone(),
            frame: compose_frames(&self.operad, &g.frame, &f.frame)?,
        })
    }
    fn hom(&self, a: &usize, b: &usize) -> Vec<Self::Mor> {
        let colors = vec![(); a + 1];
        frames(&self.operad, &colors, *b)
            .into_iter()
            .filter(|fr| !self.prop_only || is_c_op(&self.operad, fr))
            .map(|frame| UMorphism {
                source: colors.clone(),
                frame,
            })
            .collect()
    }
}

impl<O: EnumerableOperad<Color = ()>> Truncation for UCat<O> {
    fn objects(&self) -> Vec<usize> {
        (0..=self.max_arity).collect()
    }
}

/// The projection `Tw(P) → U(P)`.
#[derive(Debug, Clone, Copy)]
pub struct ForgetMiddle<O>(pub O);

impl<O: EnumerableOperad<Color = ()>> Functor<TwCat<O>, UCat<O>> for ForgetMiddle<O> {
    fn obj(&self, x: &O::Op) -> usize {
        self.0.arity(x)
    }
    fn mor(&self, f: &ThreeLevelTree<O::Op>) -> UMorphism<O::Op, ()> {
        to_u(&self.0, f)
    }
}

/// Distinct targets reachable from `p` (structural equality).
pub fn reachable_targets<O: EnumerableOperad<Color = ()>>(cat: &TwCat<O>, p: &O::Op, bound: usize) -> BTreeSet<O::Op> {
    cat.morphisms_from(p, bound)
        .iter()
        .filter_map(|f| target_of3(&cat.operad, f).ok())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::law_violations;
    use crate::operads::{FreeOperad, FreeTree, TableFamily, TableOperad, Word};

    fn leaf(i: usize) -> FreeTree {
        FreeTree::Leaf(i)
    }

    fn sample_operad() -> FreeOperad {
        FreeOperad::new([("p", 2), ("q1", 2), ("q2", 1), ("r1", 2), ("r2", 0), ("r3", 1)])
    }

    fn gen(op: &FreeOperad, name: &str) -> FreeTree {
        op.generator(name).unwrap()
    }

    #[test]
    fn two_level_composition_by_hand() {
        let op = sample_operad();
        let f = TwoLevelTree {
            target: gen(&op, "p"),
            uppers: vec![gen(&op, "q1"), gen(&op, "q2")],
            labels: vec![vec![1, 3], vec![2]],
        };
        validate2(&op, &f).unwrap();
        // p(q1(x1, x3), q2(x2))
        let expected = FreeTree::node(
            "p",
            vec![
                FreeTree::node("q1", vec![leaf(1), leaf(3)]),
                FreeTree::node("q2", vec![leaf(2)]),
            ],
        );
        let q = source_of2(&op, &f).unwrap();
        assert_eq!(q, expected);
        let g = TwoLevelTree {
            target: q.clone(),
            uppers: vec![gen(&op, "r1"), gen(&op, "r2"), gen(&op, "r3")],
            labels: vec![vec![2, 3], vec![], vec![1]],
        };
        let fg = compose2(&op, &f, &g).unwrap();
        assert_eq!(source_of2(&op, &fg).unwrap(), source_of2(&op, &g).unwrap());
        assert_eq!(cardinality(&f).table, vec![1, 2, 1]);
        let composite = FinMap::compose(&cardinality(&f), &cardinality(&g)).unwrap();
        assert_eq!(cardinality(&fg), composite);
        assert_eq!(compose2(&op, &f, &identity2(&op, &q)).unwrap(), f);
        assert_eq!(compose2(&op, &identity2(&op, &f.target), &f).unwrap(), f);
        let fib = fiber(&f, &g, 1).unwrap();
        assert_eq!(fib.target, gen(&op, "q1"));
        assert_eq!(fib.labels, vec![vec![2, 3], vec![1]]);
    }

    #[test]
    fn c_ucom_is_finite_sets() {
        let cat = CCat {
            operad: TableOperad::new(TableFamily::UCom),
            max_arity: 3,
        };
        for n in 0..=3 {
            for m in 0..=3 {
                let homs = cat.hom(&Word::identity(n), &Word::identity(m));
                assert_eq!(homs.len(), m.pow(n as u32));
            }
        }
        assert_eq!(law_violations(&cat, &cat.all_morphisms()), 0);
    }

    #[test]
    fn tw_identity_and_laws() {
        let op = TableOperad::new(TableFamily::UAs);
        let cat = TwCat::new(op, 2);
        let p = Word(vec![2, 1]);
        let id = identity3(&op, &p);
        assert_eq!(target_of3(&op, &id).unwrap(), p);
        let morphs: Vec<_> = cat
            .objects()
            .iter()
            .flat_map(|a| cat.objects().into_iter().flat_map(move |b| cat.hom(a, &b)))
            .collect();
        assert!(!morphs.is_empty());
        assert_eq!(law_violations(&cat, &morphs), 0);
    }

    #[test]
    fn three_level_shape() {
        let op = FreeOperad::new([("q0", 3), ("p", 3), ("q1", 2), ("q2", 0), ("q3", 1)]);
        let f = ThreeLevelTree {
            middle: gen(&op, "p"),
            frame: Frame {
                lower: gen(&op, "q0"),
                uppers: vec![gen(&op, "q1"), gen(&op, "q2"), gen(&op, "q3")],
                upper_labels: vec![vec![3, 5], vec![], vec![1]],
                lower_labels: vec![2, 4],
            },
        };
        validate_frame(&op, &color_tuple(&op, &f.middle), &f.frame).unwrap();
        let t = target_of3(&op, &f).unwrap();
        assert_eq!(op.arity(&t), 5);
        let expected = FreeTree::node(
            "q0",
            vec![
                FreeTree::node(
                    "p",
                    vec![
                        FreeTree::node("q1", vec![leaf(3), leaf(5)]),
                        FreeTree::node("q2", vec![]),
                        FreeTree::node("q3", vec![leaf(1)]),
                    ],
                ),
                leaf(2),
                leaf(4),
            ],
        );
        assert_eq!(t, expected);
        let id = identity3(&op, &t);
        assert_eq!(compose3(&op, &id, &f).unwrap(), f);
        assert_eq!(compose3(&op, &f, &identity3(&op, &f.middle)).unwrap(), f);
    }

    #[test]
    fn helper_counts() {
        assert_eq!(compositions(3, 2).len(), 4);
        assert_eq!(shuffles(&[2, 1]).len(), 3);
        assert_eq!(shuffles(&[]).len(), 1);
    }
}
