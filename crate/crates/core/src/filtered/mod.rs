//! Filtered cochain complexes, their spectral sequences, `E_r`-quasi-isomorphisms,
//! the filtered simple functor `(s, δ_r)` and the décalage `Dec`.
//!
//! Filtrations are decreasing flags of subspaces stored degreewise for
//! `k_min ..= k_max` and saturated outside: `F^k = A` for `k <= k_min`,
//! `F^k = 0` for `k > k_max`.

mod axioms;
mod cosimplicial;
mod pages;

#[cfg(test)]
mod tests;

use std::sync::Arc;

use thiserror::Error;

use crate::complexes::{ChainMap, CochainComplex, ComplexError, Degree};
use crate::cosimplicial::CosimplicialError;
use crate::exactlin::{Field, Matrix, Subspace};

pub use axioms::{check_filtered_axioms, FilteredAxiomParams};
pub use cosimplicial::{
    decalage, filtered_simple, filtered_simple_map, random_filtered_complex, FilteredBicosimplicial, FilteredCosimplicial,
};
pub use pages::{
    associated_graded, er_page, graded_map, is_er_quis, is_graded_quis, spectral_sequence, ErQuisReport, SpectralPage,
};

pub type Weight = i32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FilteredError {
    #[error("filtration is not decreasing at k = {k}, degree {degree}")]
    NotDecreasing { k: Weight, degree: Degree },
    #[error("F^{k} is not the whole space in degree {degree}")]
    NotExhaustive { k: Weight, degree: Degree },
    #[error("d does not preserve F^{k} in degree {degree}")]
    NotCompatible { k: Weight, degree: Degree },
    #[error("map does not preserve F^{k} in degree {degree}")]
    NotFiltered { k: Weight, degree: Degree },
    #[error("{0}")]
    Shape(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Cosimplicial(#[from] CosimplicialError),
}

#[derive(Clone, Debug)]
pub struct FilteredComplex {
    base: Arc<CochainComplex>,
    k_min: Weight,
    k_max: Weight,
    /// `flags[n - lo][k - k_min]`.
    flags: Vec<Vec<Subspace>>,
}

impl FilteredComplex {
    /// Builds `F^k A^n = flag(k, n)` for `k_min <= k <= k_max` and checks that
    /// the flag is decreasing, exhaustive at `k_min` and preserved by `d`.
    pub fn new(
        base: Arc<CochainComplex>,
        k_min: Weight,
        k_max: Weight,
        flag: impl Fn(Weight, Degree) -> Subspace,
    ) -> Result<FilteredComplex, FilteredError> {
        let k_max = k_max.max(k_min);
        let flags = base
            .degrees()
            .map(|n| (k_min..=k_max).map(|k| flag(k, n)).collect::<Vec<_>>())
            .collect();
        let fc = FilteredComplex { base, k_min, k_max, flags };
        fc.validate()?;
        Ok(fc)
    }

    /// `F^k` spanned by the standard basis vectors of weight `>= k`.
    pub fn from_weights(
        base: Arc<CochainComplex>,
        weights: impl Fn(Degree) -> Vec<Weight>,
    ) -> Result<FilteredComplex, FilteredError> {
        let field = base.field();
        let mut all = Vec::new();
        for n in base.degrees() {
            let w = weights(n);
            if w.len() != base.dim(n) {
                return Err(FilteredError::Shape(format!(
                    "{} weights for a space of dimension {} in degree {n}",
                    w.len(),
                    base.dim(n)
                )));
            }
            all.push(w);
        }
        let flat = all.iter().flatten();
        let k_min = flat.clone().copied().min().unwrap_or(0);
        let k_max = flat.copied().max().unwrap_or(0);
        let lo = base.lo();
        let dims: Vec<usize> = base.degrees().map(|n| base.dim(n)).collect();
        FilteredComplex::new(base, k_min, k_max, |k, n| {
            let w = &all[(n - lo) as usize];
            let idx: Vec<usize> = (0..w.len()).filter(|&i| w[i] >= k).collect();
            let d = dims[(n - lo) as usize];
            Subspace::span(&Matrix::from_entries(field, d, idx.len(), idx.iter().enumerate().map(|(c, &i)| (i, c, 1))))
        })
    }

    /// The filtration with a single jump: `F^k = A` for `k <= at`, `0` above.
    pub fn trivial(base: Arc<CochainComplex>, at: Weight) -> FilteredComplex {
        let field = base.field();
        let dims: Vec<usize> = base.degrees().map(|n| base.dim(n)).collect();
        let lo = base.lo();
        FilteredComplex::new(base, at, at, |_, n| Subspace::full(field, dims[(n - lo) as usize]))
            .expect("a single jump is a filtration")
    }

    fn validate(&self) -> Result<(), FilteredError> {
        let field = self.field();
        for n in self.base.degrees() {
            for k in self.k_min..=self.k_max {
                let f = self.filt(k, n);
                if f.field() != field || f.ambient_dim() != self.base.dim(n) {
                    return Err(FilteredError::Shape(format!("F^{k} in degree {n} has the wrong ambient space")));
                }
                if !f.contains(&self.filt(k + 1, n)) {
                    return Err(FilteredError::NotDecreasing { k, degree: n });
                }
                let image = f.image_under(&self.base.diff(n));
                if !self.filt(k, n + 1).contains(&image) {
                    return Err(FilteredError::NotCompatible { k, degree: n });
                }
            }
            if self.filt(self.k_min, n).dim() != self.base.dim(n) {
                return Err(FilteredError::NotExhaustive { k: self.k_min, degree: n });
            }
        }
        Ok(())
    }

    pub fn base(&self) -> &Arc<CochainComplex> {
        &self.base
    }

    pub fn field(&self) -> Field {
        self.base.field()
    }

    pub fn k_min(&self) -> Weight {
        self.k_min
    }

    pub fn k_max(&self) -> Weight {
        self.k_max
    }

    /// `k_max - k_min`; pages are constant from `r = width + 1` on.
    pub fn width(&self) -> Weight {
        self.k_max - self.k_min
    }

    /// `F^k A^n`, saturated outside the stored range.
    pub fn filt(&self, k: Weight, n: Degree) -> Subspace {
        let field = self.field();
        let d = self.base.dim(n);
        if d == 0 || k > self.k_max {
            return Subspace::zero(field, d);
        }
        if k < self.k_min {
            return Subspace::full(field, d);
        }
        self.flags[(n - self.base.lo()) as usize][(k - self.k_min) as usize].clone()
    }

    /// Smallest range outside which the filtration is saturated.
    pub fn tight_range(&self) -> (Weight, Weight) {
        let degs: Vec<Degree> = self.base.degrees().filter(|n| self.base.dim(*n) > 0).collect();
        let lo = (self.k_min..=self.k_max)
            .rev()
            .find(|&k| degs.iter().all(|&n| self.filt(k, n).dim() == self.base.dim(n)))
            .unwrap_or(self.k_min);
        let hi = (self.k_min..=self.k_max).find(|&k| degs.iter().all(|&n| self.filt(k + 1, n).is_zero())).unwrap_or(self.k_max);
        (lo, hi.max(lo))
    }

    /// Pairs `(k, n)` where the two filtrations of the same complex differ.
    pub fn mismatches(&self, other: &FilteredComplex, degrees: impl IntoIterator<Item = Degree>) -> Vec<(Weight, Degree)> {
        let lo = self.k_min.min(other.k_min);
        let hi = self.k_max.max(other.k_max) + 1;
        let mut out = Vec::new();
        for n in degrees {
            for k in lo..=hi {
                if !self.filt(k, n).same_as(&other.filt(k, n)) {
                    out.push((k, n));
                }
            }
        }
        out
    }

    /// Same underlying complex and the same subspaces in every degree.
    pub fn same_filtration(&self, other: &FilteredComplex) -> bool {
        *self.base == *other.base && self.mismatches(other, self.base.degrees()).is_empty()
    }

    /// The filtration shifted by `s`: `F'^k = F^{k-s}`.
    pub fn shift(&self, s: Weight) -> FilteredComplex {
        FilteredComplex { base: self.base.clone(), k_min: self.k_min + s, k_max: self.k_max + s, flags: self.flags.clone() }
    }

    /// Direct sum with filtration `F^k A ⊕ F^k B` on the given sum complex,
    /// whose degree `n` is `A^n` followed by `B^n`.
    pub fn direct_sum(
        a: &FilteredComplex,
        b: &FilteredComplex,
        sum: Arc<CochainComplex>,
    ) -> Result<FilteredComplex, FilteredError> {
        let field = a.field();
        FilteredComplex::new(sum, a.k_min.min(b.k_min), a.k_max.max(b.k_max), |k, n| {
            Subspace::direct_sum(field, &[a.filt(k, n), b.filt(k, n)])
        })
    }
}

/// A chain map between filtered complexes with `f(F^k) ⊆ F^k`.
#[derive(Clone, Debug)]
pub struct FilteredMap {
    source: Arc<FilteredComplex>,
    target: Arc<FilteredComplex>,
    map: ChainMap,
}

impl FilteredMap {
    pub fn new(source: Arc<FilteredComplex>, target: Arc<FilteredComplex>, map: ChainMap) -> Result<FilteredMap, FilteredError> {
        if **map.source() != **source.base() || **map.target() != **target.base() {
            return Err(FilteredError::Shape("chain map endpoints differ from the filtered complexes".into()));
        }
        map.check_commutes()?;
        check_preserves(&source, &target, &map)?;
        let map = map.retarget(source.base.clone(), target.base.clone());
        Ok(FilteredMap { source, target, map })
    }

    pub fn identity(fc: Arc<FilteredComplex>) -> FilteredMap {
        let map = ChainMap::identity(fc.base.clone());
        FilteredMap { source: fc.clone(), target: fc, map }
    }

    pub fn source(&self) -> &Arc<FilteredComplex> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FilteredComplex> {
        &self.target
    }

    pub fn map(&self) -> &ChainMap {
        &self.map
    }
}

/// `m(F^k A^n) ⊆ F^k B^n` for every `k` and `n`.
pub(crate) fn check_preserves(source: &FilteredComplex, target: &FilteredComplex, m: &ChainMap) -> Result<(), FilteredError> {
    let lo = source.k_min.min(target.k_min);
    let hi = source.k_max.max(target.k_max);
    for n in source.base.degrees() {
        let c = m.component(n);
        for k in lo..=hi + 1 {
            if !target.filt(k, n).contains(&source.filt(k, n).image_under(&c)) {
                return Err(FilteredError::NotFiltered { k, degree: n });
            }
        }
    }
    Ok(())
}
