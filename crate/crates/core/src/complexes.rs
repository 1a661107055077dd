//! Bounded cochain complexes over a field, chain maps, cohomology and
//! quasi-isomorphisms.
//!
//! Vectors are columns: `d^n` has shape `dim(n+1) x dim(n)`. A complex stores
//! the degrees `lo..=hi`; everything outside is zero. Complexes produced by a
//! truncated construction remember their top degree `N` and only certify
//! cohomology up to `N - 1`.

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::exactlin::{subquotient, Field, Matrix, Subquotient, Subspace};

pub type Degree = i32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(Field, Field),
    #[error("differential in degree {degree} has shape {found:?}, expected {expected:?}")]
    ShapeMismatch { degree: Degree, found: (usize, usize), expected: (usize, usize) },
    #[error("d∘d ≠ 0 in degree {degree}")]
    NotACochainComplex { degree: Degree },
    #[error("map does not commute with the differentials in degree {degree}")]
    NotAChainMap { degree: Degree },
}

#[derive(Clone, Debug)]
pub struct CochainComplex {
    field: Field,
    lo: Degree,
    dims: Vec<usize>,
    diffs: Vec<Matrix>,
    truncated_at: Option<Degree>,
}

impl CochainComplex {
    /// `diffs[k]` is `d^{lo+k}`; there is one fewer differential than degree.
    pub fn new(field: Field, lo: Degree, dims: Vec<usize>, diffs: Vec<Matrix>) -> Result<Self, ComplexError> {
        let c = CochainComplex { field, lo, dims, diffs, truncated_at: None };
        c.validate()?;
        Ok(c)
    }

    pub(crate) fn new_truncated(
        field: Field,
        lo: Degree,
        dims: Vec<usize>,
        diffs: Vec<Matrix>,
        top: Degree,
    ) -> Result<Self, ComplexError> {
        let mut c = CochainComplex::new(field, lo, dims, diffs)?;
        c.truncated_at = Some(top);
        Ok(c)
    }

    fn validate(&self) -> Result<(), ComplexError> {
        if self.diffs.len() != self.dims.len().saturating_sub(1) {
            return Err(ComplexError::ShapeMismatch {
                degree: self.lo,
                found: (self.diffs.len(), 0),
                expected: (self.dims.len().saturating_sub(1), 0),
            });
        }
        for (k, d) in self.diffs.iter().enumerate() {
            if d.field() != self.field {
                return Err(ComplexError::FieldMismatch(self.field, d.field()));
            }
            let expected = (self.dims[k + 1], self.dims[k]);
            if d.shape() != expected {
                return Err(ComplexError::ShapeMismatch { degree: self.lo + k as Degree, found: d.shape(), expected });
            }
        }
        for k in 1..self.diffs.len() {
            if !self.diffs[k].mul(&self.diffs[k - 1]).is_zero() {
                return Err(ComplexError::NotACochainComplex { degree: self.lo + k as Degree - 1 });
            }
        }
        Ok(())
    }

    pub fn zero(field: Field) -> Self {
        CochainComplex { field, lo: 0, dims: Vec::new(), diffs: Vec::new(), truncated_at: None }
    }

    /// `field^dim` placed in a single degree.
    pub fn concentrated(field: Field, degree: Degree, dim: usize) -> Self {
        CochainComplex { field, lo: degree, dims: vec![dim], diffs: Vec::new(), truncated_at: None }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn lo(&self) -> Degree {
        self.lo
    }

    pub fn hi(&self) -> Degree {
        self.lo + self.dims.len() as Degree - 1
    }

    pub fn is_empty_range(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<Degree> {
        self.lo..=self.hi()
    }

    pub fn dim(&self, n: Degree) -> usize {
        if n < self.lo || n > self.hi() {
            0
        } else {
            self.dims[(n - self.lo) as usize]
        }
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// `d^n : C^n -> C^{n+1}` (a zero matrix outside the stored range).
    pub fn diff(&self, n: Degree) -> Matrix {
        if n >= self.lo && n < self.hi() {
            self.diffs[(n - self.lo) as usize].clone()
        } else {
            Matrix::zeros(self.field, self.dim(n + 1), self.dim(n))
        }
    }

    pub(crate) fn diff_ref(&self, n: Degree) -> Option<&Matrix> {
        if n >= self.lo && n < self.hi() {
            Some(&self.diffs[(n - self.lo) as usize])
        } else {
            None
        }
    }

    /// Top degree of a truncated construction, if any.
    pub fn truncated_at(&self) -> Option<Degree> {
        self.truncated_at
    }

    /// Largest degree whose cohomology is complete, `None` meaning all degrees.
    pub fn certified_degree(&self) -> Option<Degree> {
        self.truncated_at.map(|t| t - 1)
    }

    /// Highest degree worth inspecting: the certified degree, or `hi`.
    pub fn top_checked(&self) -> Degree {
        self.certified_degree().unwrap_or(self.hi()).min(self.hi().max(self.lo))
    }

    /// Keep degrees `<= top`, marking the result truncated.
    pub fn truncate(&self, top: Degree) -> CochainComplex {
        let keep = ((top - self.lo + 1).max(0) as usize).min(self.dims.len());
        let dims = self.dims[..keep].to_vec();
        let diffs = self.diffs[..keep.saturating_sub(1)].to_vec();
        let t = self.truncated_at.map_or(top, |old| old.min(top));
        CochainComplex { field: self.field, lo: self.lo, dims, diffs, truncated_at: Some(t) }
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.degrees().map(|n| sign(n) * self.dim(n) as i64).sum()
    }

    pub fn rank_of_diff(&self, n: Degree) -> usize {
        self.diff_ref(n).map_or(0, Matrix::rank)
    }
}

pub(crate) fn sign(n: Degree) -> i64 {
    if n.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Betti numbers over the stored degrees (rank computations only).
pub fn betti(c: &CochainComplex) -> BTreeMap<Degree, usize> {
    let ranks: BTreeMap<Degree, usize> = (c.lo() - 1..=c.hi()).map(|n| (n, c.rank_of_diff(n))).collect();
    c.degrees().map(|n| (n, c.dim(n) - ranks[&n] - ranks[&(n - 1)])).collect()
}

/// Betti numbers restricted to the certified range.
pub fn certified_betti(c: &CochainComplex) -> BTreeMap<Degree, usize> {
    let top = c.top_checked();
    betti(c).into_iter().filter(|(n, _)| *n <= top).collect()
}

#[derive(Clone, Debug)]
pub struct Cohomology {
    pub betti: BTreeMap<Degree, usize>,
    pub cycles: BTreeMap<Degree, Subspace>,
    pub boundaries: BTreeMap<Degree, Subspace>,
    /// Cycle coordinates -> cohomology coordinates, with chosen representatives.
    pub quotient: BTreeMap<Degree, Subquotient>,
}

impl Cohomology {
    pub fn proj(&self, n: Degree) -> &Matrix {
        &self.quotient[&n].projection
    }

    /// Ambient representatives of the cohomology basis in degree `n`.
    pub fn representatives(&self, n: Degree) -> Matrix {
        self.cycles[&n].basis().mul(&self.quotient[&n].section)
    }

    /// Cohomology coordinates of the cycles given as ambient columns.
    pub fn classify(&self, n: Degree, cycles: &Matrix) -> Matrix {
        let coords = self.cycles[&n].coordinates(cycles).expect("classify: not cycles");
        self.proj(n).mul(&coords)
    }
}

pub fn cohomology(c: &CochainComplex) -> Cohomology {
    let f = c.field();
    let mut out = Cohomology {
        betti: BTreeMap::new(),
        cycles: BTreeMap::new(),
        boundaries: BTreeMap::new(),
        quotient: BTreeMap::new(),
    };
    for n in c.degrees() {
        let z = c.diff(n).kernel();
        let b = match c.diff_ref(n - 1) {
            Some(d) => d.image(),
            None => Subspace::zero(f, c.dim(n)),
        };
        let q = subquotient(&z, &b).expect("boundaries are cycles");
        out.betti.insert(n, q.dim);
        out.cycles.insert(n, z);
        out.boundaries.insert(n, b);
        out.quotient.insert(n, q);
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChainMap {
    source: Arc<CochainComplex>,
    target: Arc<CochainComplex>,
    lo: Degree,
    comps: Vec<Matrix>,
}

impl ChainMap {
    /// Components `comps[k]` in degree `lo + k`; missing degrees are zero.
    pub fn new(
        source: Arc<CochainComplex>,
        target: Arc<CochainComplex>,
        lo: Degree,
        comps: Vec<Matrix>,
    ) -> Result<Self, ComplexError> {
        let m = ChainMap::new_unchecked(source, target, lo, comps)?;
        m.check_commutes()?;
        Ok(m)
    }

    /// Shapes are checked, commutation is not.
    pub(crate) fn new_unchecked(
        source: Arc<CochainComplex>,
        target: Arc<CochainComplex>,
        lo: Degree,
        comps: Vec<Matrix>,
    ) -> Result<Self, ComplexError> {
        if source.field() != target.field() {
            return Err(ComplexError::FieldMismatch(source.field(), target.field()));
        }
        for (k, m) in comps.iter().enumerate() {
            let n = lo + k as Degree;
            let expected = (target.dim(n), source.dim(n));
            if m.shape() != expected {
                return Err(ComplexError::ShapeMismatch { degree: n, found: m.shape(), expected });
            }
        }
        Ok(ChainMap { source, target, lo, comps })
    }

    /// Build from a per-degree function over the union of the stored ranges.
    pub fn from_fn(
        source: Arc<CochainComplex>,
        target: Arc<CochainComplex>,
        f: impl Fn(Degree) -> Matrix,
    ) -> Result<Self, ComplexError> {
        let (lo, hi) = union_range(&source, &target);
        let comps = (lo..=hi).map(f).collect();
        ChainMap::new(source, target, lo, comps)
    }

    pub(crate) fn from_fn_unchecked(
        source: Arc<CochainComplex>,
        target: Arc<CochainComplex>,
        f: impl Fn(Degree) -> Matrix,
    ) -> Self {
        let (lo, hi) = union_range(&source, &target);
        let comps = (lo..=hi).map(f).collect();
        ChainMap::new_unchecked(source, target, lo, comps).expect("component shapes")
    }

    pub fn identity(c: Arc<CochainComplex>) -> Self {
        let comps = c.degrees().map(|n| Matrix::identity(c.field(), c.dim(n))).collect();
        ChainMap { source: c.clone(), target: c.clone(), lo: c.lo(), comps }
    }

    pub fn zero(source: Arc<CochainComplex>, target: Arc<CochainComplex>) -> Self {
        ChainMap { source, target, lo: 0, comps: Vec::new() }
    }

    pub fn source(&self) -> &Arc<CochainComplex> {
        &self.source
    }

    pub fn target(&self) -> &Arc<CochainComplex> {
        &self.target
    }

    pub fn field(&self) -> Field {
        self.source.field()
    }

    pub fn component(&self, n: Degree) -> Matrix {
        let k = n - self.lo;
        if k >= 0 && (k as usize) < self.comps.len() {
            self.comps[k as usize].clone()
        } else {
            Matrix::zeros(self.field(), self.target.dim(n), self.source.dim(n))
        }
    }

    /// Degrees where commutation is meaningful: below any truncation top.
    fn commutation_range(&self) -> (Degree, Degree) {
        let (lo, hi) = union_range(&self.source, &self.target);
        let cap = [self.source.truncated_at(), self.target.truncated_at()].into_iter().flatten().min();
        let top = match cap {
            Some(t) => (t - 1).min(hi),
            None => hi,
        };
        (lo - 1, top)
    }

    pub fn check_commutes(&self) -> Result<(), ComplexError> {
        let (lo, top) = self.commutation_range();
        for n in lo..=top {
            let lhs = self.target.diff(n).mul(&self.component(n));
            let rhs = self.component(n + 1).mul(&self.source.diff(n));
            if lhs != rhs {
                return Err(ComplexError::NotAChainMap { degree: n });
            }
        }
        Ok(())
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &ChainMap) -> ChainMap {
        assert!(
            Arc::ptr_eq(first.target(), self.source()) || **first.target() == *self.source,
            "compose: middle complexes differ"
        );
        let (lo, hi) = union_range(&first.source, &self.target);
        let comps = (lo..=hi).map(|n| self.component(n).mul(&first.component(n))).collect();
        ChainMap { source: first.source.clone(), target: self.target.clone(), lo, comps }
    }

    pub fn add(&self, other: &ChainMap) -> ChainMap {
        let (lo, hi) = union_range(&self.source, &self.target);
        let comps = (lo..=hi).map(|n| self.component(n).add(&other.component(n))).collect();
        ChainMap { source: self.source.clone(), target: self.target.clone(), lo, comps }
    }

    /// Same components, reinterpreted between equal complexes.
    pub fn retarget(&self, source: Arc<CochainComplex>, target: Arc<CochainComplex>) -> ChainMap {
        ChainMap::new_unchecked(source, target, self.lo, self.comps.clone()).expect("retarget shapes")
    }

    pub fn is_identity(&self) -> bool {
        let (lo, hi) = union_range(&self.source, &self.target);
        (lo..=hi).all(|n| self.source.dim(n) == self.target.dim(n) && self.component(n).is_identity())
    }

    /// Same components in every degree.
    pub fn same_components(&self, other: &ChainMap) -> bool {
        let (lo, hi) = union_range(&self.source, &self.target);
        let (lo2, hi2) = union_range(&other.source, &other.target);
        (lo.min(lo2)..=hi.max(hi2)).all(|n| self.component(n) == other.component(n))
    }
}

/// Equal dimensions and differentials in every degree, regardless of which
/// zero degrees happen to be stored.
impl PartialEq for CochainComplex {
    fn eq(&self, other: &CochainComplex) -> bool {
        if self.field != other.field || self.truncated_at != other.truncated_at {
            return false;
        }
        let (lo, hi) = union_range(self, other);
        (lo..=hi).all(|n| self.dim(n) == other.dim(n)) && (lo..hi).all(|n| self.diff(n) == other.diff(n))
    }
}

pub(crate) fn union_range(a: &CochainComplex, b: &CochainComplex) -> (Degree, Degree) {
    match (a.is_empty_range(), b.is_empty_range()) {
        (true, true) => (0, -1),
        (true, false) => (b.lo(), b.hi()),
        (false, true) => (a.lo(), a.hi()),
        (false, false) => (a.lo().min(b.lo()), a.hi().max(b.hi())),
    }
}

/// Degrees in which a quasi-isomorphism verdict is meaningful for `f`.
pub fn checked_range(f: &ChainMap) -> (Degree, Degree) {
    let (lo, hi) = union_range(f.source(), f.target());
    let cap = [f.source().certified_degree(), f.target().certified_degree()].into_iter().flatten().min();
    (lo, cap.map_or(hi, |c| c.min(hi)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuisReport {
    pub flag: bool,
    pub per_degree: BTreeMap<Degree, bool>,
}

impl QuisReport {
    pub fn failures(&self) -> Vec<Degree> {
        self.per_degree.iter().filter(|(_, ok)| !**ok).map(|(n, _)| *n).collect()
    }
}

/// `H^n(f)` in the chosen cohomology bases.
pub fn induced_map(f: &ChainMap, hs: &Cohomology, ht: &Cohomology, n: Degree) -> Matrix {
    if hs.betti.get(&n).copied().unwrap_or(0) == 0 || ht.betti.get(&n).copied().unwrap_or(0) == 0 {
        return Matrix::zeros(
            f.field(),
            ht.betti.get(&n).copied().unwrap_or(0),
            hs.betti.get(&n).copied().unwrap_or(0),
        );
    }
    let reps = hs.representatives(n);
    ht.classify(n, &f.component(n).mul(&reps))
}

/// Quasi-isomorphism test through the induced maps on cohomology.
pub fn is_quis_by_induced_maps(f: &ChainMap) -> QuisReport {
    let hs = cohomology(f.source());
    let ht = cohomology(f.target());
    let (lo, top) = checked_range(f);
    let per_degree: BTreeMap<Degree, bool> = (lo..=top)
        .map(|n| {
            let bs = hs.betti.get(&n).copied().unwrap_or(0);
            let bt = ht.betti.get(&n).copied().unwrap_or(0);
            let ok = bs == bt && (bs == 0 || induced_map(f, &hs, &ht, n).is_invertible());
            (n, ok)
        })
        .collect();
    QuisReport { flag: per_degree.values().all(|b| *b), per_degree }
}

/// Mapping cone `A[1] ⊕ B` differential `cone^n -> cone^{n+1}`.
fn cone_diff(f: &ChainMap, n: Degree) -> Matrix {
    let (a, b) = (f.source(), f.target());
    let field = f.field();
    let da = a.diff(n + 1).neg();
    let fa = f.component(n + 1);
    let db = b.diff(n);
    Matrix::from_blocks(
        field,
        &[a.dim(n + 2), b.dim(n + 1)],
        &[a.dim(n + 1), b.dim(n)],
        [(0, 0, &da), (1, 0, &fa), (1, 1, &db)],
    )
}

/// Quasi-isomorphism test by rank computations on the mapping cone.
///
/// With `k_n = dim ker H^n(f)` and `c_n = dim coker H^n(f)`, the long exact
/// sequence gives `dim H^n(cone) = c_n + k_{n+1}` and
/// `c_n - k_n = b_n(B) - b_n(A)`, which determines every `k_n, c_n` from the bottom.
pub fn is_quis(f: &ChainMap) -> QuisReport {
    let (a, b) = (f.source(), f.target());
    let (lo, top) = checked_range(f);
    if top < lo {
        return QuisReport { flag: true, per_degree: BTreeMap::new() };
    }
    let cone_dim = |n: Degree| a.dim(n + 1) + b.dim(n);
    let cone_rank: BTreeMap<Degree, usize> = (lo - 2..top).map(|n| (n, cone_diff(f, n).rank())).collect();
    let cone_betti = |n: Degree| cone_dim(n) - cone_rank[&n] - cone_rank[&(n - 1)];
    let ra: BTreeMap<Degree, usize> = (lo - 1..=top).map(|n| (n, a.rank_of_diff(n))).collect();
    let rb: BTreeMap<Degree, usize> = (lo - 1..=top).map(|n| (n, b.rank_of_diff(n))).collect();
    let ba = |n: Degree| (a.dim(n) - ra[&n] - ra[&(n - 1)]) as i64;
    let bb = |n: Degree| (b.dim(n) - rb[&n] - rb[&(n - 1)]) as i64;

    let mut per_degree = BTreeMap::new();
    let mut k = cone_betti(lo - 1) as i64;
    for n in lo..=top {
        let c = k + bb(n) - ba(n);
        debug_assert!(c >= 0 && k >= 0, "inconsistent cone ranks");
        per_degree.insert(n, k == 0 && c == 0);
        if n < top {
            k = cone_betti(n) as i64 - c;
        }
    }
    QuisReport { flag: per_degree.values().all(|v| *v), per_degree }
}

#[derive(Clone, Debug)]
pub struct Biproduct {
    pub sum: Arc<CochainComplex>,
    pub inclusions: [ChainMap; 2],
    pub projections: [ChainMap; 2],
}

pub fn biproduct(c1: &Arc<CochainComplex>, c2: &Arc<CochainComplex>) -> Result<Biproduct, ComplexError> {
    if c1.field() != c2.field() {
        return Err(ComplexError::FieldMismatch(c1.field(), c2.field()));
    }
    let field = c1.field();
    let (lo, hi) = union_range(c1, c2);
    let dims: Vec<usize> = (lo..=hi).map(|n| c1.dim(n) + c2.dim(n)).collect();
    let diffs: Vec<Matrix> = (lo..hi).map(|n| Matrix::block_diag(field, &[&c1.diff(n), &c2.diff(n)])).collect();
    let mut sum = CochainComplex::new(field, lo, dims, diffs)?;
    sum.truncated_at = [c1.truncated_at(), c2.truncated_at()].into_iter().flatten().min();
    let sum = Arc::new(sum);
    let inc = |which: usize| {
        let src = if which == 0 { c1 } else { c2 };
        ChainMap::from_fn(src.clone(), sum.clone(), |n| {
            let (a, b) = (c1.dim(n), c2.dim(n));
            if which == 0 {
                Matrix::from_entries(field, a + b, a, (0..a).map(|i| (i, i, 1)))
            } else {
                Matrix::from_entries(field, a + b, b, (0..b).map(|i| (a + i, i, 1)))
            }
        })
    };
    let proj = |which: usize| {
        let tgt = if which == 0 { c1 } else { c2 };
        ChainMap::from_fn(sum.clone(), tgt.clone(), |n| {
            let (a, b) = (c1.dim(n), c2.dim(n));
            if which == 0 {
                Matrix::from_entries(field, a, a + b, (0..a).map(|i| (i, i, 1)))
            } else {
                Matrix::from_entries(field, b, a + b, (0..b).map(|i| (i, a + i, 1)))
            }
        })
    };
    Ok(Biproduct { inclusions: [inc(0)?, inc(1)?], projections: [proj(0)?, proj(1)?], sum })
}
