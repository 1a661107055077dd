use std::ops::Range;
use std::sync::Arc;

use super::{CosimplicialComplex, CosimplicialError, CosimplicialMap};
use crate::complexes::{ChainMap, CochainComplex, Degree};
use crate::exactlin::Matrix;

/// Block structure of `s(X)` up to a top degree: in degree `n` the summands
/// `X(p)^{n-p}` for `p = 0, 1, ...` in increasing order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleLayout {
    pub lo: Degree,
    pub top: Degree,
    /// `sizes[n - lo][p] = dim X(p)^{n-p}`.
    sizes: Vec<Vec<usize>>,
}

impl SimpleLayout {
    pub fn sizes(&self, n: Degree) -> &[usize] {
        if n < self.lo || n > self.top {
            &[]
        } else {
            &self.sizes[(n - self.lo) as usize]
        }
    }

    pub fn dim(&self, n: Degree) -> usize {
        self.sizes(n).iter().sum()
    }

    /// Coordinates of the summand `X(p)^{n-p}` inside `s(X)^n`.
    pub fn summand(&self, n: Degree, p: usize) -> Option<Range<usize>> {
        let s = self.sizes(n);
        if p >= s.len() {
            return None;
        }
        let start: usize = s[..p].iter().sum();
        Some(start..start + s[p])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignRule {
    /// `d = d_1 + (-1)^p d_2`.
    Standard,
    /// `d = d_1 + d_2`, a deliberately wrong variant used as a negative control.
    DropVerticalSign,
}

fn levels_needed(x: &CosimplicialComplex, top: Degree) -> Result<(Degree, usize), CosimplicialError> {
    let b = x.lower_bound().unwrap_or(top + 1);
    let needed = (top - b).max(0) as usize;
    if !x.vanishes_above() && x.p_max() < needed {
        return Err(CosimplicialError::InsufficientLevels { degree: top, needed, available: x.p_max() });
    }
    Ok((b, needed.min(x.p_max())))
}

pub fn simple_layout(x: &CosimplicialComplex, top: Degree) -> Result<SimpleLayout, CosimplicialError> {
    let (b, _) = levels_needed(x, top)?;
    let sizes = (b..=top)
        .map(|n| {
            let pmax = ((n - b) as usize).min(x.p_max());
            (0..=pmax).map(|p| x.level(p).dim(n - p as Degree)).collect()
        })
        .collect();
    Ok(SimpleLayout { lo: b, top, sizes })
}

/// The total complex `s(X)^n = ⊕_{p+q=n} X(p)^q` for `n <= top`, truncated at `top`.
pub fn simple(x: &CosimplicialComplex, top: Degree) -> Result<CochainComplex, CosimplicialError> {
    simple_with_signs(x, top, SignRule::Standard)
}

pub fn simple_with_signs(x: &CosimplicialComplex, top: Degree, rule: SignRule) -> Result<CochainComplex, CosimplicialError> {
    let layout = simple_layout(x, top)?;
    let field = x.field();
    let lo = layout.lo;
    if lo > top {
        return Ok(CochainComplex::zero(field).truncate(top));
    }
    let mut diffs = Vec::new();
    for n in lo..top {
        let (cols, rows) = (layout.sizes(n), layout.sizes(n + 1));
        let mut blocks: Vec<(usize, usize, Matrix)> = Vec::new();
        for p in 0..cols.len() {
            let q = n - p as Degree;
            let mut d2 = x.level(p).diff(q);
            if rule == SignRule::Standard && p % 2 == 1 {
                d2 = d2.neg();
            }
            blocks.push((p, p, d2));
            if p + 1 < rows.len() {
                let mut d1 = Matrix::zeros(field, rows[p + 1], cols[p]);
                for i in 0..=p + 1 {
                    let c = x.coface(p + 1, i).component(q);
                    d1 = if i % 2 == 0 { d1.add(&c) } else { d1.sub(&c) };
                }
                blocks.push((p + 1, p, d1));
            }
        }
        diffs.push(Matrix::from_blocks(field, rows, cols, blocks.iter().map(|(i, j, m)| (*i, *j, m))));
    }
    let dims = (lo..=top).map(|n| layout.dim(n)).collect();
    Ok(CochainComplex::new_truncated(field, lo, dims, diffs, top)?)
}

/// `s(f)` between already computed simples of the source and target.
pub fn simple_map_between(
    f: &CosimplicialMap,
    sx: &Arc<CochainComplex>,
    sy: &Arc<CochainComplex>,
    top: Degree,
) -> Result<ChainMap, CosimplicialError> {
    let lx = simple_layout(f.source(), top)?;
    let ly = simple_layout(f.target(), top)?;
    let field = f.source().field();
    let m = ChainMap::from_fn_unchecked(sx.clone(), sy.clone(), |n| {
        let (cols, rows) = (lx.sizes(n), ly.sizes(n));
        let k = cols.len().min(rows.len()).min(f.p_max() + 1);
        let blocks: Vec<Matrix> = (0..k).map(|p| f.level(p).component(n - p as Degree)).collect();
        let padded_rows: Vec<usize> = if rows.is_empty() { vec![0] } else { rows.to_vec() };
        let padded_cols: Vec<usize> = if cols.is_empty() { vec![0] } else { cols.to_vec() };
        Matrix::from_blocks(field, &padded_rows, &padded_cols, blocks.iter().enumerate().map(|(p, m)| (p, p, m)))
    });
    m.check_commutes()?;
    Ok(m)
}

/// `s(f) : s(X) -> s(Y)`, blockwise `f_p`.
pub fn simple_map(f: &CosimplicialMap, top: Degree) -> Result<ChainMap, CosimplicialError> {
    let sx = Arc::new(simple(f.source(), top)?);
    let sy = Arc::new(simple(f.target(), top)?);
    simple_map_between(f, &sx, &sy, top)
}

/// The inclusion `λ_A : A -> s(cA)` onto the level-0 summand.
pub fn lambda(a: &Arc<CochainComplex>, top: Degree) -> Result<ChainMap, CosimplicialError> {
    let b = a.degrees().find(|n| a.dim(*n) > 0).unwrap_or(top);
    let c = CosimplicialComplex::constant(a.clone(), (top - b).max(0) as usize);
    let sc = Arc::new(simple(&c, top)?);
    let field = a.field();
    let m = ChainMap::from_fn_unchecked(a.clone(), sc.clone(), |n| {
        let k = if n > top { 0 } else { a.dim(n) };
        Matrix::from_entries(field, sc.dim(n), a.dim(n), (0..k).map(|i| (i, i, 1)))
    });
    m.check_commutes()?;
    Ok(m)
}
