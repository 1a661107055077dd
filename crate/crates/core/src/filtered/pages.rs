use std::collections::BTreeMap;
use std::sync::Arc;

use super::{FilteredComplex, FilteredError, FilteredMap, Weight};
use crate::complexes::{is_quis, ChainMap, CochainComplex, Degree};
use crate::exactlin::{subquotient, Matrix, Subquotient, Subspace};

/// `Z_r^{p, n-p} = F^p A^n ∩ d⁻¹(F^{p+r} A^{n+1})`; `r` may be `-1`.
pub(super) fn z_space(fc: &FilteredComplex, r: Weight, p: Weight, n: Degree) -> Subspace {
    let fp = fc.filt(p, n);
    let target = fc.filt(p + r, n + 1);
    if target.dim() == fc.base().dim(n + 1) {
        return fp;
    }
    fp.intersection(&Subspace::preimage(&fc.base().diff(n), &target))
}

/// `Z_{r-1}^{p+1, q-1} + d Z_{r-1}^{p-r+1, q+r-2}`.
fn b_space(fc: &FilteredComplex, r: Weight, p: Weight, n: Degree) -> Subspace {
    let inner = z_space(fc, r - 1, p + 1, n);
    let from_below = z_space(fc, r - 1, p - r + 1, n - 1).image_under(&fc.base().diff(n - 1));
    inner.sum(&from_below)
}

#[derive(Clone, Debug)]
struct Term {
    z: Subspace,
    sq: Subquotient,
}

impl Term {
    fn reps(&self) -> Matrix {
        self.z.basis().mul(&self.sq.section)
    }

    fn class_of(&self, vectors: &Matrix) -> Matrix {
        let coords = self.z.coordinates(vectors).expect("vectors lie in Z_r");
        self.sq.projection.mul(&coords)
    }
}

/// The page `E_r` with its differential `d_r : E_r^{p,q} -> E_r^{p+r, q-r+1}`.
#[derive(Clone, Debug)]
pub struct SpectralPage {
    pub r: usize,
    /// Keyed by `(p, n)` with `n = p + q`.
    terms: BTreeMap<(Weight, Degree), Term>,
    differentials: BTreeMap<(Weight, Degree), Matrix>,
    certified_degree: Option<Degree>,
    field: crate::exactlin::Field,
}

impl SpectralPage {
    pub fn dim(&self, p: Weight, q: Degree) -> usize {
        self.terms.get(&(p, p + q)).map_or(0, |t| t.sq.dim)
    }

    /// Nonzero terms as `(p, q) -> dim`.
    pub fn terms(&self) -> BTreeMap<(Weight, Degree), usize> {
        self.terms.iter().filter(|(_, t)| t.sq.dim > 0).map(|(&(p, n), t)| ((p, n - p), t.sq.dim)).collect()
    }

    /// `⊕_p E_r^{p, n-p}`.
    pub fn total_dim(&self, n: Degree) -> usize {
        self.terms.iter().filter(|((_, m), _)| *m == n).map(|(_, t)| t.sq.dim).sum()
    }

    /// `d_r` out of `(p, q)`, as a `dim(p+r, q-r+1) x dim(p, q)` matrix.
    pub fn differential(&self, p: Weight, q: Degree) -> Matrix {
        let r = self.r as Weight;
        self.differentials
            .get(&(p, p + q))
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.field, self.dim(p + r, q - r + 1), self.dim(p, q)))
    }

    /// Representatives in `A^{p+q}` of the chosen basis of `E_r^{p,q}`.
    pub fn representatives(&self, p: Weight, q: Degree) -> Matrix {
        match self.terms.get(&(p, p + q)) {
            Some(t) => t.reps(),
            None => Matrix::zeros(self.field, 0, 0),
        }
    }

    /// Classes of vectors of `Z_r^{p,q}` in `E_r^{p,q}`.
    pub fn class_of(&self, p: Weight, q: Degree, vectors: &Matrix) -> Matrix {
        match self.terms.get(&(p, p + q)) {
            Some(t) => t.class_of(vectors),
            None => Matrix::zeros(self.field, 0, vectors.cols()),
        }
    }

    /// Total degrees up to which the page describes the untruncated complex.
    pub fn certified_degree(&self) -> Option<Degree> {
        self.certified_degree
    }

    fn positions(&self) -> impl Iterator<Item = (Weight, Degree)> + '_ {
        self.terms.keys().copied()
    }
}

fn raw_page(fc: &FilteredComplex, r: usize) -> SpectralPage {
    let ri = r as Weight;
    let base = fc.base();
    let mut terms = BTreeMap::new();
    for n in base.degrees() {
        if base.dim(n) == 0 {
            continue;
        }
        for p in fc.k_min()..=fc.k_max() {
            let z = z_space(fc, ri, p, n);
            let b = b_space(fc, ri, p, n);
            let sq = subquotient(&z, &b).expect("B_r ⊆ Z_r");
            terms.insert((p, n), Term { z, sq });
        }
    }
    let mut differentials = BTreeMap::new();
    for (&(p, n), t) in &terms {
        if t.sq.dim == 0 {
            continue;
        }
        let m = match terms.get(&(p + ri, n + 1)) {
            Some(tt) => tt.class_of(&base.diff(n).mul(&t.reps())),
            None => Matrix::zeros(fc.field(), 0, t.sq.dim),
        };
        differentials.insert((p, n), m);
    }
    SpectralPage { r, terms, differentials, certified_degree: base.certified_degree(), field: fc.field() }
}

fn assert_square_zero(page: &SpectralPage) {
    let r = page.r as Weight;
    for (p, n) in page.positions() {
        let q = n - p;
        let first = page.differential(p, q);
        let second = page.differential(p + r, q - r + 1);
        if first.rows() > 0 && second.cols() == first.rows() {
            assert!(second.mul(&first).is_zero(), "d_{r} ∘ d_{r} ≠ 0 at ({p}, {q})");
        }
    }
}

/// `dim E_{r+1} = dim H(E_r, d_r)` at every position.
fn assert_coherent(prev: &SpectralPage, next: &SpectralPage) {
    let r = prev.r as Weight;
    for (p, n) in prev.positions().chain(next.positions()) {
        let q = n - p;
        let out_rank = prev.differential(p, q).rank();
        let in_rank = prev.differential(p - r, q + r - 1).rank();
        let homology = prev.dim(p, q) - out_rank - in_rank;
        assert_eq!(next.dim(p, q), homology, "E_{} is not the homology of E_{} at ({p}, {q})", r + 1, r);
    }
}

/// `E_r(FC)`, checked against the homology of `E_{r-1}`.
pub fn er_page(fc: &FilteredComplex, r: usize) -> SpectralPage {
    let page = raw_page(fc, r);
    assert_square_zero(&page);
    if r > 0 {
        assert_coherent(&raw_page(fc, r - 1), &page);
    }
    page
}

/// `E_0, …, E_{r_max}`, each checked against the homology of the previous one.
pub fn spectral_sequence(fc: &FilteredComplex, r_max: usize) -> Vec<SpectralPage> {
    let pages: Vec<SpectralPage> = (0..=r_max).map(|r| raw_page(fc, r)).collect();
    for p in &pages {
        assert_square_zero(p);
    }
    for w in pages.windows(2) {
        assert_coherent(&w[0], &w[1]);
    }
    pages
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ErQuisReport {
    pub flag: bool,
    /// Positions `(p, q)` of `E_{r+1}` where the induced map is not invertible.
    pub failures: Vec<(Weight, Degree)>,
}

/// `f` is an `E_r`-quasi-isomorphism: `E_{r+1}(f)` is an isomorphism in every
/// certified total degree.
pub fn is_er_quis(f: &FilteredMap, r: usize) -> ErQuisReport {
    let (src, tgt) = (f.source(), f.target());
    let es = er_page(src, r + 1);
    let et = er_page(tgt, r + 1);
    let (sb, tb) = (src.base(), tgt.base());
    let lo = sb.lo().min(tb.lo());
    let hi = sb.hi().max(tb.hi());
    let cap = [sb.certified_degree(), tb.certified_degree()].into_iter().flatten().min();
    let top = cap.map_or(hi, |c| c.min(hi));
    let (kl, kh) = (src.k_min().min(tgt.k_min()), src.k_max().max(tgt.k_max()));
    let mut failures = Vec::new();
    for n in lo..=top {
        let m = f.map().component(n);
        for p in kl..=kh {
            let q = n - p;
            let (ds, dt) = (es.dim(p, q), et.dim(p, q));
            let ok = ds == dt && (ds == 0 || et.class_of(p, q, &m.mul(&es.representatives(p, q))).is_invertible());
            if !ok {
                failures.push((p, q));
            }
        }
    }
    ErQuisReport { flag: failures.is_empty(), failures }
}

struct Graded {
    complex: Arc<CochainComplex>,
    parts: Vec<(Subspace, Subquotient)>,
}

fn graded(fc: &FilteredComplex, p: Weight) -> Graded {
    let base = fc.base();
    let parts: Vec<(Subspace, Subquotient)> = base
        .degrees()
        .map(|n| {
            let (a, b) = (fc.filt(p, n), fc.filt(p + 1, n));
            let sq = subquotient(&a, &b).expect("decreasing filtration");
            (a, sq)
        })
        .collect();
    let lo = base.lo();
    let at = |n: Degree| &parts[(n - lo) as usize];
    let diffs = base
        .degrees()
        .take_while(|&n| n < base.hi())
        .map(|n| {
            let (a, sq) = at(n);
            let (a1, sq1) = at(n + 1);
            let reps = a.basis().mul(&sq.section);
            let image = base.diff(n).mul(&reps);
            sq1.projection.mul(&a1.coordinates(&image).expect("d preserves the filtration"))
        })
        .collect();
    let dims = parts.iter().map(|(_, sq)| sq.dim).collect();
    let complex = match base.truncated_at() {
        Some(t) => CochainComplex::new_truncated(fc.field(), lo, dims, diffs, t),
        None => CochainComplex::new(fc.field(), lo, dims, diffs),
    }
    .expect("graded pieces of a filtered complex are complexes");
    Graded { complex: Arc::new(complex), parts }
}

/// `Gr^p A = F^p A / F^{p+1} A`.
pub fn associated_graded(fc: &FilteredComplex, p: Weight) -> CochainComplex {
    (*graded(fc, p).complex).clone()
}

/// `Gr^p(f)`.
pub fn graded_map(f: &FilteredMap, p: Weight) -> Result<ChainMap, FilteredError> {
    let gs = graded(f.source(), p);
    let gt = graded(f.target(), p);
    let (ls, lt) = (f.source().base().lo(), f.target().base().lo());
    let m = ChainMap::from_fn(gs.complex.clone(), gt.complex.clone(), |n| {
        let ks = n - ls;
        let kt = n - lt;
        let rows = gt.complex.dim(n);
        let cols = gs.complex.dim(n);
        if rows == 0 || cols == 0 || ks < 0 || kt < 0 {
            return Matrix::zeros(f.source().field(), rows, cols);
        }
        let (a, sq) = &gs.parts[ks as usize];
        let (b, sqt) = &gt.parts[kt as usize];
        let image = f.map().component(n).mul(&a.basis().mul(&sq.section));
        sqt.projection.mul(&b.coordinates(&image).expect("f preserves the filtration"))
    })?;
    Ok(m)
}

/// Whether every `Gr^p(f)` is a quasi-isomorphism.
pub fn is_graded_quis(f: &FilteredMap) -> Result<bool, FilteredError> {
    let lo = f.source().k_min().min(f.target().k_min());
    let hi = f.source().k_max().max(f.target().k_max());
    for p in lo..=hi {
        if !is_quis(&graded_map(f, p)?).flag {
            return Ok(false);
        }
    }
    Ok(true)
}
