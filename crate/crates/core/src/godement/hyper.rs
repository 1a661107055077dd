use std::collections::BTreeMap;
use std::sync::Arc;

use super::resolution::{chain_resolution, godement_resolution, Resolution};
use super::GodementError;
use crate::complexes::{betti, ChainMap, CochainComplex, Degree};
use crate::cosimplicial::{lambda, simple, simple_map_between};
use crate::exactlin::Matrix;
use crate::exec::Exec;
use crate::site::{sections, OpenSet, Sheaf, SheafMap};

/// Levels of the resolution needed for `s(G•F)` up to degree `top`, plus one
/// guard level.
pub fn levels_for(f: &Sheaf, top: Degree) -> usize {
    let b = f.lower_bound().unwrap_or(top);
    (top - b + 1).max(0) as usize
}

pub(super) fn check_top(f: &Sheaf, top: Degree) -> Result<(), GodementError> {
    match f.upper_bound() {
        Some(hi) if hi > top => Err(GodementError::InsufficientLevels { top, needed: hi }),
        _ => Ok(()),
    }
}

/// `ℍ_X(F)` truncated at `top`, with `ρ_F : F -> ℍ_X(F)`.
#[derive(Clone, Debug)]
pub struct Hypercohomology {
    pub resolution: Resolution,
    pub h: Arc<Sheaf>,
    pub rho: SheafMap,
    pub top: Degree,
}

impl Hypercohomology {
    pub fn base(&self) -> &Arc<Sheaf> {
        self.resolution.g.base()
    }

    pub fn certified_degree(&self) -> Degree {
        self.top - 1
    }
}

/// `ℍ_X(F)_x = s((G•F)_x)` with the induced restrictions, and
/// `ρ_F = s(η) ∘ λ` stalkwise.
pub fn hypercohomology_sheaf(f: &Arc<Sheaf>, top: Degree, exec: Exec) -> Result<Hypercohomology, GodementError> {
    check_top(f, top)?;
    let resolution = godement_resolution(f, levels_for(f, top));
    let poset = f.poset().clone();
    let g = &resolution.g;
    let stalks: Vec<Arc<CochainComplex>> = exec
        .map_range(poset.len(), |x| simple(g.at(x), top).map(Arc::new))
        .into_iter()
        .collect::<Result<_, _>>()?;
    let pairs: Vec<(usize, usize)> = poset
        .elements()
        .flat_map(|x| poset.elements().map(move |y| (x, y)))
        .filter(|&(x, y)| poset.lt(x, y))
        .collect();
    let restrictions: BTreeMap<(usize, usize), ChainMap> = exec
        .map(pairs, |(x, y)| simple_map_between(&g.restriction(x, y), &stalks[x], &stalks[y], top).map(|m| ((x, y), m)))
        .into_iter()
        .collect::<Result<_, _>>()?;
    let h = Arc::new(Sheaf::from_parts_unchecked(poset.clone(), f.field(), stalks.clone(), restrictions));
    let comps: Vec<ChainMap> = exec
        .map_range(poset.len(), |x| -> Result<ChainMap, GodementError> {
            let c = resolution.coaugmentation_at(x);
            let sc = Arc::new(simple(c.source(), top)?);
            let s_eta = simple_map_between(&c, &sc, &stalks[x], top)?;
            let lam = lambda(f.stalk(x), top)?.retarget(f.stalk(x).clone(), sc);
            Ok(s_eta.compose(&lam))
        })
        .into_iter()
        .collect::<Result<_, _>>()?;
    let rho = SheafMap::new_unchecked(f.clone(), h.clone(), comps)?;
    Ok(Hypercohomology { resolution, h, rho, top })
}

/// `ℍ_X(f) = s(G•(f))` between two hypercohomology sheaves built with the same top.
pub fn hyper_map(f: &SheafMap, hs: &Hypercohomology, ht: &Hypercohomology) -> Result<SheafMap, GodementError> {
    let top = hs.top.min(ht.top);
    let comps = f
        .source()
        .poset()
        .elements()
        .map(|x| {
            let gf = hs.resolution.g.map_at(&ht.resolution.g, f, x);
            simple_map_between(&gf, hs.h.stalk(x), ht.h.stalk(x), top)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SheafMap::new_unchecked(hs.h.clone(), ht.h.clone(), comps)?)
}

/// `Γ(U, ℍ_X K) = s(Γ(U, G•K))` through `Γ(U, TK) = ∏_{y ∈ U} K_y`:
/// the summands of level `p` are the chains `y_0 ≤ … ≤ y_p` with `y_0 ∈ U`.
pub fn hyper_sections(k: &Sheaf, u: &OpenSet, top: Degree) -> Result<CochainComplex, GodementError> {
    let r = chain_resolution(k, u.members(), levels_for(k, top), false);
    Ok(simple(&r.complex, top)?)
}

/// `Γ(U, ρ_K) : Γ(U, K) -> Γ(U, ℍ_X K)` with the target computed by [`hyper_sections`];
/// a section goes to its values `(s_y)_{y ∈ U}` in level 0.
pub fn rho_sections(k: &Sheaf, u: &OpenSet, top: Degree) -> Result<ChainMap, GodementError> {
    let su = sections(k, u)?;
    let target = Arc::new(hyper_sections(k, u, top)?);
    let field = k.field();
    let src = su.complex.clone();
    let m = ChainMap::from_fn_unchecked(src.clone(), target.clone(), |n| {
        let rows = target.dim(n);
        let cols = src.dim(n);
        let values: Vec<Matrix> = u.members().iter().map(|&y| su.value(y, n)).collect();
        let level0: usize = values.iter().map(Matrix::rows).sum();
        if n > top || rows == 0 || cols == 0 {
            return Matrix::zeros(field, rows, cols);
        }
        let parts: Vec<&Matrix> = values.iter().collect();
        let stacked = Matrix::vstack(field, cols, &parts);
        Matrix::from_blocks(field, &[level0, rows - level0], &[cols], [(0, 0, &stacked)])
    });
    m.check_commutes()?;
    Ok(m)
}

/// `ℝΓ(U, F) = Γ(U, ℍ_X F)` with its cohomology.
#[derive(Clone, Debug)]
pub struct DerivedSections {
    pub complex: Arc<CochainComplex>,
    pub betti: BTreeMap<Degree, usize>,
    pub certified_degree: Degree,
}

impl DerivedSections {
    fn from_complex(c: Arc<CochainComplex>, certified: Degree) -> DerivedSections {
        let betti = betti(&c).into_iter().filter(|(n, b)| *n <= certified && *b > 0).collect();
        DerivedSections { complex: c, betti, certified_degree: certified }
    }
}

impl Hypercohomology {
    /// `Γ(U, ℍ_X F)` through the sections of the sheaf `ℍ_X F`.
    pub fn derived_sections(&self, u: &OpenSet) -> Result<DerivedSections, GodementError> {
        let s = sections(&self.h, u)?;
        Ok(DerivedSections::from_complex(s.complex, self.certified_degree()))
    }
}

pub fn derived_sections(f: &Arc<Sheaf>, u: &OpenSet, top: Degree, exec: Exec) -> Result<DerivedSections, GodementError> {
    hypercohomology_sheaf(f, top, exec)?.derived_sections(u)
}

/// `ℝΓ(U, F)` read off the product description of [`hyper_sections`].
pub fn derived_sections_by_products(f: &Sheaf, u: &OpenSet, top: Degree) -> Result<DerivedSections, GodementError> {
    check_top(f, top)?;
    let c = Arc::new(hyper_sections(f, u, top)?);
    Ok(DerivedSections::from_complex(c, top - 1))
}
