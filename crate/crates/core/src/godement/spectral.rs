use std::collections::BTreeMap;
use std::sync::Arc;

use super::hyper::{check_top, derived_sections_by_products, levels_for};
use super::resolution::chain_resolution;
use super::GodementError;
use crate::complexes::{cohomology, induced_map, ChainMap, CochainComplex, Degree};
use crate::filtered::{filtered_simple, spectral_sequence, FilteredComplex, FilteredCosimplicial, FilteredError, SpectralPage};
use crate::site::{OpenSet, Sheaf};

impl From<FilteredError> for GodementError {
    fn from(e: FilteredError) -> Self {
        GodementError::Structure(e.to_string())
    }
}

/// The degree-`q` cohomology sheaf `ℋ^q F`, placed in degree 0.
pub fn cohomology_sheaf(f: &Sheaf, q: Degree) -> Result<Sheaf, GodementError> {
    let field = f.field();
    let poset = f.poset();
    let coh: Vec<_> = poset.elements().map(|x| cohomology(f.stalk(x))).collect();
    let dim = |x: usize| coh[x].betti.get(&q).copied().unwrap_or(0);
    let stalks: Vec<Arc<CochainComplex>> =
        poset.elements().map(|x| Arc::new(CochainComplex::concentrated(field, 0, dim(x)))).collect();
    let mut restrictions = BTreeMap::new();
    for x in poset.elements() {
        for y in poset.elements().filter(|&y| poset.lt(x, y)) {
            let m = induced_map(&f.restriction(x, y), &coh[x], &coh[y], q);
            restrictions.insert((x, y), ChainMap::new(stalks[x].clone(), stalks[y].clone(), 0, vec![m])?);
        }
    }
    Ok(Sheaf::new(poset.clone(), stalks, restrictions)?)
}

/// The first-quadrant spectral sequence of `Γ(U, G•F)` for the column filtration.
#[derive(Clone, Debug)]
pub struct DescentSpectralSequence {
    pub filtered: FilteredComplex,
    /// `E_0, …, E_{r_max}`.
    pub pages: Vec<SpectralPage>,
    pub certified_degree: Degree,
}

impl DescentSpectralSequence {
    /// `E_r^{p,q}` with `p + q` certified.
    pub fn certified_terms(&self, r: usize) -> BTreeMap<(i32, Degree), usize> {
        self.pages[r].terms().into_iter().filter(|((p, q), _)| p + q <= self.certified_degree).collect()
    }
}

/// `Γ(U, G•F)` filtered by columns, `F^k = ⊕_{p ≥ k} Γ(U, G^p F)`, with its pages.
pub fn descent_spectral_sequence(
    f: &Sheaf,
    u: &OpenSet,
    r_max: usize,
    top: Degree,
) -> Result<DescentSpectralSequence, GodementError> {
    check_top(f, top)?;
    let x = Arc::new(chain_resolution(f, u.members(), levels_for(f, top), true).complex);
    let levels = x.levels().iter().map(|l| Arc::new(FilteredComplex::trivial(l.clone(), 0))).collect();
    let columns = FilteredCosimplicial::new(x, levels)?;
    let filtered = filtered_simple(&columns, 1, top)?;
    let pages = spectral_sequence(&filtered, r_max);
    Ok(DescentSpectralSequence { filtered, pages, certified_degree: top - 1 })
}

/// `E_2^{p,q} = H^p(U, ℋ^q F)` computed from the cohomology sheaves, for `p + q <= top - 1`.
pub fn descent_e2_from_cohomology_sheaves(f: &Sheaf, u: &OpenSet, top: Degree) -> Result<BTreeMap<(i32, Degree), usize>, GodementError> {
    let (lo, hi) = f.degree_range();
    let mut out = BTreeMap::new();
    for q in lo..=hi.min(top - 1) {
        let hq = cohomology_sheaf(f, q)?;
        if hq.total_dim() == 0 {
            continue;
        }
        let rg = derived_sections_by_products(&hq, u, top - q)?;
        for (p, b) in rg.betti {
            if b > 0 && p + q <= top - 1 {
                out.insert((p, q), b);
            }
        }
    }
    Ok(out)
}
