use std::sync::Arc;

use rand::Rng as _;

use super::pages::z_space;
use super::{check_preserves, FilteredComplex, FilteredError, FilteredMap, Weight};
use crate::complexes::{CochainComplex, Degree};
use crate::cosimplicial::{
    dold_kan, dold_kan_bi, simple, simple_layout, simple_map_between, surjections, BicosimplicialComplex,
    CosimplicialComplex, CosimplicialMap, IteratedLayout,
};
use crate::exactlin::{Field, Subspace};
use crate::random::{CubeSpec, MultiComplex, Rng};

/// A cosimplicial complex with a filtration on every level preserved by all
/// structure maps.
#[derive(Clone, Debug)]
pub struct FilteredCosimplicial {
    complex: Arc<CosimplicialComplex>,
    levels: Vec<Arc<FilteredComplex>>,
}

impl FilteredCosimplicial {
    pub fn new(complex: Arc<CosimplicialComplex>, levels: Vec<Arc<FilteredComplex>>) -> Result<Self, FilteredError> {
        if levels.len() != complex.p_max() + 1 {
            return Err(FilteredError::Shape(format!("{} filtrations for {} levels", levels.len(), complex.p_max() + 1)));
        }
        for (p, l) in levels.iter().enumerate() {
            if **l.base() != **complex.level(p) {
                return Err(FilteredError::Shape(format!("filtration at level {p} lives on a different complex")));
            }
        }
        for p in 1..=complex.p_max() {
            for i in 0..=p {
                check_preserves(&levels[p - 1], &levels[p], complex.coface(p, i))?;
            }
        }
        for p in 0..complex.p_max() {
            for j in 0..=p {
                check_preserves(&levels[p + 1], &levels[p], complex.codegeneracy(p, j))?;
            }
        }
        Ok(FilteredCosimplicial { complex, levels })
    }

    pub fn constant(fc: Arc<FilteredComplex>, p_max: usize) -> Self {
        let complex = Arc::new(CosimplicialComplex::constant(fc.base().clone(), p_max));
        FilteredCosimplicial { complex, levels: vec![fc; p_max + 1] }
    }

    /// Dold–Kan object of bigraded data `N^{k, q}`, filtered by the weights
    /// of `mc`: `F^w X(p) = ⊕_{σ : [p] ↠ [k]} F^w N^k`.
    pub fn from_dold_kan(
        mc: &MultiComplex,
        k_max: usize,
        q_range: (Degree, Degree),
        p_max: usize,
    ) -> Result<Self, FilteredError> {
        let x = Arc::new(dold_kan(mc, k_max, q_range, p_max)?);
        let (wlo, whi) = mc.weight_range();
        let field = mc.field;
        let levels = (0..=p_max)
            .map(|p| {
                let ks: Vec<i32> = surjections(p, k_max).iter().map(|s| *s.last().unwrap() as i32).collect();
                FilteredComplex::new(x.level(p).clone(), wlo, whi, |w, q| {
                    let parts: Vec<Subspace> = ks.iter().map(|&k| mc.filtration(&[k, q], w)).collect();
                    Subspace::direct_sum(field, &parts)
                })
                .map(Arc::new)
            })
            .collect::<Result<Vec<_>, _>>()?;
        FilteredCosimplicial::new(x, levels)
    }

    pub fn complex(&self) -> &Arc<CosimplicialComplex> {
        &self.complex
    }

    pub fn level(&self, p: usize) -> &Arc<FilteredComplex> {
        &self.levels[p]
    }

    pub fn p_max(&self) -> usize {
        self.complex.p_max()
    }

    /// Applies `g` to every level; the structure maps are checked again.
    pub fn map_levels(&self, g: impl Fn(&FilteredComplex) -> FilteredComplex) -> Result<Self, FilteredError> {
        let levels = self.levels.iter().map(|l| Arc::new(g(l))).collect();
        FilteredCosimplicial::new(self.complex.clone(), levels)
    }

    /// Levelwise product with the sum filtration, and its two projections.
    pub fn product(&self, other: &FilteredCosimplicial) -> Result<(FilteredCosimplicial, [CosimplicialMap; 2]), FilteredError> {
        let (xy, projs) = self.complex.product(&other.complex)?;
        let xy = Arc::new(xy);
        let levels = (0..=xy.p_max())
            .map(|p| FilteredComplex::direct_sum(&self.levels[p], &other.levels[p], xy.level(p).clone()).map(Arc::new))
            .collect::<Result<Vec<_>, _>>()?;
        Ok((FilteredCosimplicial::new(xy, levels)?, projs))
    }
}

/// `(s, δ_r)(X)` truncated at `top`: `δ_r(F)^k s(X)^n = ⊕_{i+j=n} F^{k-ri} X(i)^j`.
pub fn filtered_simple(x: &FilteredCosimplicial, r: usize, top: Degree) -> Result<FilteredComplex, FilteredError> {
    let base = Arc::new(simple(x.complex(), top)?);
    let layout = simple_layout(x.complex(), top)?;
    let field = x.complex().field();
    let used = base.degrees().map(|n| layout.sizes(n).len()).max().unwrap_or(0).max(1);
    let ri = r as Weight;
    let k_min = (0..used).map(|p| x.level(p).k_min()).min().unwrap_or(0);
    let k_max = (0..used).map(|p| x.level(p).k_max() + ri * p as Weight).max().unwrap_or(0);
    FilteredComplex::new(base, k_min, k_max, |k, n| {
        let parts: Vec<Subspace> = (0..layout.sizes(n).len())
            .map(|p| x.level(p).filt(k - ri * p as Weight, n - p as Degree))
            .collect();
        Subspace::direct_sum(field, &parts)
    })
}

/// `s(f)` between filtered simples already computed with the same `top`.
pub fn filtered_simple_map(
    f: &CosimplicialMap,
    source: &Arc<FilteredComplex>,
    target: &Arc<FilteredComplex>,
    top: Degree,
) -> Result<FilteredMap, FilteredError> {
    let m = simple_map_between(f, source.base(), target.base(), top)?;
    FilteredMap::new(source.clone(), target.clone(), m)
}

/// `(Dec F)^k A^n = {a ∈ F^{k+n} A^n : da ∈ F^{k+n+1} A^{n+1}}`.
pub fn decalage(fc: &FilteredComplex) -> FilteredComplex {
    let base = fc.base();
    let (lo, hi) = (base.lo(), base.hi().max(base.lo()));
    FilteredComplex::new(base.clone(), fc.k_min() - hi - 1, fc.k_max() - lo, |k, n| z_space(fc, 1, k + n, n))
        .expect("the décalage of a filtration is a filtration")
}

/// A bicosimplicial complex with filtered levels preserved by both directions.
#[derive(Clone, Debug)]
pub struct FilteredBicosimplicial {
    complex: Arc<BicosimplicialComplex>,
    levels: Vec<Vec<Arc<FilteredComplex>>>,
}

impl FilteredBicosimplicial {
    pub fn new(complex: Arc<BicosimplicialComplex>, levels: Vec<Vec<Arc<FilteredComplex>>>) -> Result<Self, FilteredError> {
        let (pm, qm) = (complex.p_max(), complex.q_max());
        if levels.len() != pm + 1 || levels.iter().any(|row| row.len() != qm + 1) {
            return Err(FilteredError::Shape("filtration grid does not match the levels".into()));
        }
        for p in 0..=pm {
            for q in 0..=qm {
                if **levels[p][q].base() != **complex.level(p, q) {
                    return Err(FilteredError::Shape(format!("filtration at ({p}, {q}) lives on a different complex")));
                }
                if p > 0 {
                    for i in 0..=p {
                        check_preserves(&levels[p - 1][q], &levels[p][q], complex.h_coface(p, q, i))?;
                    }
                }
                if q > 0 {
                    for i in 0..=q {
                        check_preserves(&levels[p][q - 1], &levels[p][q], complex.v_coface(p, q, i))?;
                    }
                }
            }
        }
        Ok(FilteredBicosimplicial { complex, levels })
    }

    /// `Z(p, p') = ⊕_{σ, τ} N^{k(σ), l(τ)}` filtered by the weights of `mc`.
    pub fn from_dold_kan(
        mc: &MultiComplex,
        k_max: usize,
        q_range: (Degree, Degree),
        p_max: usize,
    ) -> Result<Self, FilteredError> {
        let z = Arc::new(dold_kan_bi(mc, k_max, q_range, p_max)?);
        let (wlo, whi) = mc.weight_range();
        let field = mc.field;
        let ks = |p: usize| -> Vec<i32> { surjections(p, k_max).iter().map(|s| *s.last().unwrap() as i32).collect() };
        let levels = (0..=p_max)
            .map(|p| {
                (0..=p_max)
                    .map(|r| {
                        let pairs: Vec<(i32, i32)> = ks(p).into_iter().flat_map(|k| ks(r).into_iter().map(move |l| (k, l))).collect();
                        FilteredComplex::new(z.level(p, r).clone(), wlo, whi, |w, q| {
                            let parts: Vec<Subspace> = pairs.iter().map(|&(k, l)| mc.filtration(&[k, l, q], w)).collect();
                            Subspace::direct_sum(field, &parts)
                        })
                        .map(Arc::new)
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        FilteredBicosimplicial::new(z, levels)
    }

    pub fn complex(&self) -> &Arc<BicosimplicialComplex> {
        &self.complex
    }

    pub fn level(&self, p: usize, q: usize) -> &Arc<FilteredComplex> {
        &self.levels[p][q]
    }

    /// The diagonal `p ↦ Z(p, p)` with its filtrations, on the given diagonal complex.
    pub fn diagonal_on(&self, diag: Arc<CosimplicialComplex>) -> Result<FilteredCosimplicial, FilteredError> {
        let levels = (0..=diag.p_max()).map(|p| self.levels[p][p].clone()).collect();
        FilteredCosimplicial::new(diag, levels)
    }

    /// `ss(Z)` with `F^k` of the summand `Z(i, j)` shifted by `r(i + j)`.
    pub fn iterated_filtered_simple(&self, r: usize, top: Degree) -> Result<FilteredComplex, FilteredError> {
        let base = Arc::new(crate::cosimplicial::iterated_simple(&self.complex, top)?);
        let lay = IteratedLayout::new(&self.complex, top)?;
        let field = self.complex.field();
        let ri = r as Weight;
        let blocks: Vec<(usize, usize)> = base.degrees().flat_map(|t| lay.at(t).iter().map(|b| (b.0, b.1))).collect();
        let k_min = blocks.iter().map(|&(i, j)| self.levels[i][j].k_min()).min().unwrap_or(0);
        let k_max = blocks.iter().map(|&(i, j)| self.levels[i][j].k_max() + ri * (i + j) as Weight).max().unwrap_or(0);
        FilteredComplex::new(base, k_min, k_max, |k, t| {
            let parts: Vec<Subspace> = lay
                .at(t)
                .iter()
                .map(|&(i, j, _)| self.levels[i][j].filt(k - ri * (i + j) as Weight, t - (i + j) as Degree))
                .collect();
            Subspace::direct_sum(field, &parts)
        })
    }
}

/// A random filtered complex in degrees `lo..=hi`: sums of points and
/// edges whose weight never drops along `d`, in a random basis.
pub fn random_filtered_complex(field: Field, lo: Degree, hi: Degree, max_dim: usize, rng: &mut Rng) -> FilteredComplex {
    let cubes = rng.gen_range(0..=((hi - lo + 1) as usize * max_dim).max(1));
    let mc = MultiComplex::random(field, &CubeSpec::new(vec![(lo, hi)], max_dim, cubes), rng);
    filtered_line(&mc, lo, hi)
}

pub(crate) fn filtered_line(mc: &MultiComplex, lo: Degree, hi: Degree) -> FilteredComplex {
    let base = Arc::new(mc.line(0, &[0], lo, hi));
    let (wlo, whi) = mc.weight_range();
    FilteredComplex::new(base, wlo, whi, |w, n| mc.filtration(&[n], w)).expect("cube weights never drop along d")
}

/// `(n + 2)` copies of `F` on each level of the path object.
pub(crate) fn filtered_copies(fc: &FilteredComplex, level: Arc<CochainComplex>, copies: usize) -> Result<FilteredComplex, FilteredError> {
    let field = fc.field();
    FilteredComplex::new(level, fc.k_min(), fc.k_max(), |k, n| Subspace::direct_sum(field, &vec![fc.filt(k, n); copies]))
}
