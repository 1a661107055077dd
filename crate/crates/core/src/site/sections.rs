use std::collections::BTreeMap;
use std::sync::Arc;

use super::{MonotoneMap, OpenSet, Poset, Sheaf, SheafMap, SiteError};
use crate::complexes::{ChainMap, CochainComplex, Degree};
use crate::exactlin::{offsets, Field, Matrix};

/// `Γ(U, F)` as a subcomplex of `⊕_{m ∈ min U} F_m`: a section is determined
/// by its values at the minimal elements, which must agree wherever two of
/// them lie below a common point.
#[derive(Clone, Debug)]
pub struct Sections {
    pub complex: Arc<CochainComplex>,
    open: OpenSet,
    minimal: Vec<usize>,
    /// Embedding of `Γ(U, F)^n` into `⊕_m F_m^n`, indexed from `complex.lo()`.
    basis: BTreeMap<Degree, Matrix>,
    /// `F_x^n`-valued evaluation of the embedded coordinates, per point.
    values: BTreeMap<usize, BTreeMap<Degree, Matrix>>,
}

impl Sections {
    pub fn open(&self) -> &OpenSet {
        &self.open
    }

    pub fn minimal(&self) -> &[usize] {
        &self.minimal
    }

    /// Columns: a basis of `Γ(U, F)^n` inside `⊕_{m ∈ min U} F_m^n`.
    pub fn embedding(&self, n: Degree) -> Matrix {
        self.basis.get(&n).cloned().unwrap_or_else(|| Matrix::zeros(self.complex.field(), 0, 0))
    }

    /// Evaluation `Γ(U, F)^n -> F_x^n` at a point `x ∈ U`.
    pub fn value(&self, x: usize, n: Degree) -> Matrix {
        self.values[&x].get(&n).cloned().unwrap_or_else(|| Matrix::zeros(self.complex.field(), 0, self.complex.dim(n)))
    }

    /// The evaluation chain map `Γ(U, F) -> F_x`.
    pub fn projection(&self, f: &Sheaf, x: usize) -> ChainMap {
        ChainMap::from_fn_unchecked(self.complex.clone(), f.stalk(x).clone(), |n| {
            let v = self.value(x, n);
            if v.shape() == (f.stalk(x).dim(n), self.complex.dim(n)) {
                v
            } else {
                Matrix::zeros(f.field(), f.stalk(x).dim(n), self.complex.dim(n))
            }
        })
    }
}

/// Degree range of the stalks over `U`.
fn range_over(f: &Sheaf, u: &OpenSet) -> (Degree, Degree) {
    let live: Vec<&Arc<CochainComplex>> =
        u.members().iter().map(|&x| f.stalk(x)).filter(|s| !s.is_empty_range()).collect();
    if live.is_empty() {
        return (0, -1);
    }
    (live.iter().map(|s| s.lo()).min().unwrap(), live.iter().map(|s| s.hi()).max().unwrap())
}

fn check_open(f: &Sheaf, u: &OpenSet) -> Result<(), SiteError> {
    OpenSet::new(f.poset(), u.members().iter().copied()).map(|_| ())
}

pub fn sections(f: &Sheaf, u: &OpenSet) -> Result<Sections, SiteError> {
    check_open(f, u)?;
    let p = f.poset();
    let field = f.field();
    let minimal = p.minimal(u.members());
    let (lo, hi) = range_over(f, u);
    // constraints: for each y ∈ U, values pushed from the minimal elements below y agree
    let below: BTreeMap<usize, Vec<usize>> = u
        .members()
        .iter()
        .map(|&y| (y, minimal.iter().enumerate().filter(|(_, &m)| p.leq(m, y)).map(|(k, _)| k).collect()))
        .collect();
    let mut basis = BTreeMap::new();
    let mut values: BTreeMap<usize, BTreeMap<Degree, Matrix>> = u.members().iter().map(|&x| (x, BTreeMap::new())).collect();
    for n in lo..=hi {
        let sizes: Vec<usize> = minimal.iter().map(|&m| f.stalk(m).dim(n)).collect();
        let off = offsets(&sizes);
        let total = off[minimal.len()];
        // push-forward of the minimal coordinates to y through the k-th minimal element
        let push = |y: usize, k: usize| -> Matrix {
            let m = minimal[k];
            let r = f.restriction(m, y).component(n);
            Matrix::from_blocks(field, &[f.stalk(y).dim(n)], &sizes_or_zero(&sizes), [(0, k, &r)])
        };
        let mut rows: Vec<Matrix> = Vec::new();
        for (&y, ks) in &below {
            for w in ks.windows(2) {
                rows.push(push(y, w[0]).sub(&push(y, w[1])));
            }
        }
        let b = if rows.is_empty() {
            Matrix::identity(field, total)
        } else {
            let refs: Vec<&Matrix> = rows.iter().collect();
            Matrix::vstack(field, total, &refs).kernel().basis().clone()
        };
        for (&y, ks) in &below {
            values.get_mut(&y).unwrap().insert(n, push(y, ks[0]).mul(&b));
        }
        basis.insert(n, b);
    }
    let dims: Vec<usize> = (lo..=hi).map(|n| basis[&n].cols()).collect();
    let diffs = (lo..hi)
        .map(|n| {
            let dn: Vec<Matrix> = minimal.iter().map(|&m| f.stalk(m).diff(n)).collect();
            let big = Matrix::block_diag(field, &dn.iter().collect::<Vec<_>>());
            let img = big.mul(&basis[&n]);
            basis[&(n + 1)].solve(&img).expect("sections are a subcomplex")
        })
        .collect();
    let complex = match f.truncated_at() {
        Some(t) => CochainComplex::new_truncated(field, lo, dims, diffs, t)?,
        None => CochainComplex::new(field, lo, dims, diffs)?,
    };
    Ok(Sections { complex: Arc::new(complex), open: u.clone(), minimal, basis, values })
}

fn sizes_or_zero(sizes: &[usize]) -> Vec<usize> {
    if sizes.is_empty() {
        vec![0]
    } else {
        sizes.to_vec()
    }
}

/// Coordinates in `target` of the sections whose values at `target`'s
/// minimal elements are `vals(m)`.
fn coordinates(target: &Sections, field: Field, n: Degree, cols: usize, vals: impl Fn(usize) -> Matrix) -> Matrix {
    let parts: Vec<Matrix> = target.minimal.iter().map(|&m| vals(m)).collect();
    let rows = target.embedding(n).rows();
    let stacked = if parts.is_empty() { Matrix::zeros(field, rows, cols) } else { Matrix::vstack(field, cols, &parts.iter().collect::<Vec<_>>()) };
    target.embedding(n).solve(&stacked).expect("values define a section")
}

/// `Γ(U, f) : Γ(U, F) -> Γ(U, G)`.
pub fn sections_map(f: &SheafMap, sf: &Sections, sg: &Sections) -> ChainMap {
    let field = f.source().field();
    let m = ChainMap::from_fn_unchecked(sf.complex.clone(), sg.complex.clone(), |n| {
        coordinates(sg, field, n, sf.complex.dim(n), |x| f.component(x).component(n).mul(&sf.value(x, n)))
    });
    debug_assert!(m.check_commutes().is_ok());
    m
}

/// Restriction `Γ(U, F) -> Γ(V, F)` for `V ⊆ U`.
pub fn restrict_sections(f: &Sheaf, su: &Sections, sv: &Sections) -> Result<ChainMap, SiteError> {
    if !sv.open.is_subset(&su.open) {
        return Err(SiteError::NotOpen(format!(
            "{} is not contained in {}",
            sv.open.label(f.poset()),
            su.open.label(f.poset())
        )));
    }
    let field = f.field();
    Ok(ChainMap::from_fn_unchecked(su.complex.clone(), sv.complex.clone(), |n| {
        coordinates(sv, field, n, su.complex.dim(n), |x| su.value(x, n))
    }))
}

/// Whether `Γ(U, F)` is the equalizer of `∏ Γ(V_i, F) ⇉ ∏ Γ(V_i ∩ V_j, F)`,
/// checked degree by degree through the induced map into the equalizer.
pub fn check_sheaf_equalizer(f: &Sheaf, u: &OpenSet, cover: &[OpenSet]) -> Result<bool, SiteError> {
    check_open(f, u)?;
    for v in cover {
        check_open(f, v)?;
        if !v.is_subset(u) {
            return Err(SiteError::NotACover(format!("{} ⊄ {}", v.label(f.poset()), u.label(f.poset()))));
        }
    }
    let union = cover.iter().fold(OpenSet::empty(), |acc, v| acc.union(v));
    if union != *u {
        return Err(SiteError::NotACover(format!("union {} ≠ {}", union.label(f.poset()), u.label(f.poset()))));
    }
    let field = f.field();
    let su = sections(f, u)?;
    let parts: Vec<Sections> = cover.iter().map(|v| sections(f, v)).collect::<Result<_, _>>()?;
    let res: Vec<ChainMap> = parts.iter().map(|sv| restrict_sections(f, &su, sv)).collect::<Result<_, _>>()?;
    let mut overlaps = Vec::new();
    for i in 0..cover.len() {
        for j in i + 1..cover.len() {
            let w = sections(f, &cover[i].intersection(&cover[j]))?;
            let ri = restrict_sections(f, &parts[i], &w)?;
            let rj = restrict_sections(f, &parts[j], &w)?;
            overlaps.push((i, j, w, ri, rj));
        }
    }
    let (lo, hi) = range_over(f, u);
    for n in lo..=hi {
        let sizes: Vec<usize> = parts.iter().map(|s| s.complex.dim(n)).collect();
        let total: usize = sizes.iter().sum();
        let sz = sizes_or_zero(&sizes);
        // equalizer: kernel of (ri ∘ pr_i - rj ∘ pr_j) over all pairs
        let rows: Vec<Matrix> = overlaps
            .iter()
            .map(|(i, j, w, ri, rj)| {
                let a = ri.component(n);
                let b = rj.component(n).neg();
                Matrix::from_blocks(field, &[w.complex.dim(n)], &sz, [(0, *i, &a), (0, *j, &b)])
            })
            .collect();
        let eq_dim = if rows.is_empty() {
            total
        } else {
            total - Matrix::vstack(field, total, &rows.iter().collect::<Vec<_>>()).rank()
        };
        let comps: Vec<Matrix> = res.iter().map(|r| r.component(n)).collect();
        let into = if comps.is_empty() {
            Matrix::zeros(field, 0, su.complex.dim(n))
        } else {
            Matrix::vstack(field, su.complex.dim(n), &comps.iter().collect::<Vec<_>>())
        };
        let lands = rows.iter().all(|r| r.mul(&into).is_zero());
        if !lands || into.rank() != su.complex.dim(n) || su.complex.dim(n) != eq_dim {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `f⁎F`: `(f⁎F)_q = Γ(f⁻¹(↑q), F)`, restrictions from the inclusions of preimages.
pub fn direct_image(f: &MonotoneMap, sheaf: &Sheaf) -> Result<Sheaf, SiteError> {
    if **f.source() != **sheaf.poset() {
        return Err(SiteError::NotMonotone("map and sheaf live on different posets".into()));
    }
    let q: &Arc<Poset> = f.target();
    let secs: Vec<Sections> = q.elements().map(|y| sections(sheaf, &f.preimage(&q.up(y)))).collect::<Result<_, _>>()?;
    let stalks: Vec<Arc<CochainComplex>> = secs.iter().map(|s| s.complex.clone()).collect();
    let mut restrictions = BTreeMap::new();
    for a in q.elements() {
        for b in q.elements() {
            if q.lt(a, b) {
                restrictions.insert((a, b), restrict_sections(sheaf, &secs[a], &secs[b])?);
            }
        }
    }
    Sheaf::new(q.clone(), stalks, restrictions)
}

/// `f⁎` on a sheaf map, given the two direct images.
pub fn direct_image_map(f: &MonotoneMap, g: &SheafMap, fa: &Arc<Sheaf>, fb: &Arc<Sheaf>) -> Result<SheafMap, SiteError> {
    let q = f.target();
    let comps = q
        .elements()
        .map(|y| {
            let u = f.preimage(&q.up(y));
            let sa = sections(g.source(), &u)?;
            let sb = sections(g.target(), &u)?;
            Ok(sections_map(g, &sa, &sb).retarget(fa.stalk(y).clone(), fb.stalk(y).clone()))
        })
        .collect::<Result<Vec<_>, SiteError>>()?;
    SheafMap::new(fa.clone(), fb.clone(), comps)
}
