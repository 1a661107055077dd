use std::sync::Arc;

use rand::Rng as _;

use super::cosimplicial::{filtered_copies, filtered_line};
use super::{
    filtered_simple, filtered_simple_map, is_er_quis, FilteredBicosimplicial, FilteredComplex, FilteredCosimplicial,
    FilteredError, FilteredMap,
};
use crate::complexes::{biproduct, ChainMap};
use crate::cosimplicial::{aw_map, dold_kan_map, lambda, path_object, Axiom, AxiomParams, DescentReport, TrialOutcome};
use crate::exactlin::Matrix;
use crate::exec::Exec;
use crate::random::{first_summand_projection, seeded, trial_seed, CubeSpec, MultiComplex, Rng};

/// The descent audit for `(FC^{≥b}, E_r)`: quasi-isomorphisms are replaced by
/// `E_r`-quasi-isomorphisms and `s` by `(s, δ_r)`.
#[derive(Clone, Debug)]
pub struct FilteredAxiomParams {
    pub base: AxiomParams,
    pub r: usize,
}

impl Default for FilteredAxiomParams {
    fn default() -> Self {
        let base = AxiomParams { trials: 20, max_level: 2, max_bi_level: 2, max_dim: 2, max_degree: 1, top: 4, ..AxiomParams::default() };
        FilteredAxiomParams { base, r: 1 }
    }
}

fn normalized(params: &AxiomParams, ndirs: usize, rng: &mut Rng, acyclic: bool) -> MultiComplex {
    let lvl = if ndirs == 2 { params.max_level } else { params.max_bi_level } as i32;
    let mut ranges = vec![(0, lvl); ndirs - 1];
    ranges.push((0, params.max_degree));
    let cubes = rng.gen_range(0..=2 * params.max_dim + 2);
    let mut spec = CubeSpec::new(ranges, params.max_dim, cubes);
    if acyclic {
        spec.force_dirs[ndirs - 1] = true;
    }
    MultiComplex::random(params.field, &spec, rng)
}

fn random_filtered(params: &AxiomParams, rng: &mut Rng) -> FilteredComplex {
    let cubes = rng.gen_range(0..=((params.max_degree + 1) as usize * params.max_dim).max(1));
    let mc = MultiComplex::random(params.field, &CubeSpec::new(vec![(0, params.max_degree)], params.max_dim, cubes), rng);
    filtered_line(&mc, 0, params.max_degree)
}

fn dk(params: &AxiomParams, mc: &MultiComplex) -> Result<FilteredCosimplicial, FilteredError> {
    FilteredCosimplicial::from_dold_kan(mc, params.max_level, (0, params.max_degree), params.top.max(0) as usize)
}

fn s1(fp: &FilteredAxiomParams, rng: &mut Rng) -> Result<bool, FilteredError> {
    let (params, r, top) = (&fp.base, fp.r, fp.base.top);
    let x = dk(params, &normalized(params, 2, rng, false))?;
    let y = dk(params, &normalized(params, 2, rng, false))?;
    let (xy, [px, py]) = x.product(&y)?;
    let sxy = Arc::new(filtered_simple(&xy, r, top)?);
    let sx = Arc::new(filtered_simple(&x, r, top)?);
    let sy = Arc::new(filtered_simple(&y, r, top)?);
    let fx = filtered_simple_map(&px, &sxy, &sx, top)?;
    let fy = filtered_simple_map(&py, &sxy, &sy, top)?;
    let bp = biproduct(sx.base(), sy.base())?;
    let sum = Arc::new(FilteredComplex::direct_sum(&sx, &sy, bp.sum.clone())?);
    let field = params.field;
    let both = ChainMap::from_fn(sxy.base().clone(), bp.sum.clone(), |n| {
        Matrix::vstack(field, sxy.base().dim(n), &[&fx.map().component(n), &fy.map().component(n)])
    })?;
    Ok(is_er_quis(&FilteredMap::new(sxy, sum, both)?, r).flag)
}

fn s2(fp: &FilteredAxiomParams, rng: &mut Rng) -> Result<bool, FilteredError> {
    let (params, r, top) = (&fp.base, fp.r, fp.base.top);
    let mc = normalized(params, 3, rng, false);
    let z = FilteredBicosimplicial::from_dold_kan(&mc, params.max_bi_level, (0, params.max_degree), top.max(0) as usize)?;
    let (mu, diag) = aw_map(z.complex(), top)?;
    let ss = Arc::new(z.iterated_filtered_simple(r, top)?);
    let sd = Arc::new(filtered_simple(&z.diagonal_on(diag)?, r, top)?);
    Ok(is_er_quis(&FilteredMap::new(ss, sd, mu)?, r).flag)
}

fn s3(fp: &FilteredAxiomParams, rng: &mut Rng) -> Result<bool, FilteredError> {
    let (r, top) = (fp.r, fp.base.top);
    let a = Arc::new(random_filtered(&fp.base, rng));
    let lam = lambda(a.base(), top)?;
    let b = a.base().degrees().find(|n| a.base().dim(*n) > 0).unwrap_or(top);
    let c = FilteredCosimplicial::constant(a.clone(), (top - b).max(0) as usize);
    let sc = Arc::new(filtered_simple(&c, r, top)?);
    Ok(is_er_quis(&FilteredMap::new(a, sc, lam)?, r).flag)
}

/// A levelwise `E_r`-quasi-isomorphism `X ⊕ C -> X` gives one on `(s, δ_r)`.
fn s4(fp: &FilteredAxiomParams, rng: &mut Rng) -> Result<bool, FilteredError> {
    let (params, r, top) = (&fp.base, fp.r, fp.base.top);
    let n = normalized(params, 2, rng, false);
    let c = normalized(params, 2, rng, true);
    let sum = n.direct_sum(&c);
    let x = dk(params, &sum)?;
    let y = dk(params, &n)?;
    let f = dold_kan_map(x.complex(), y.complex(), &sum, params.max_level, |pos| first_summand_projection(&sum, &n, pos))?;
    f.check_commutes()?;
    let mut levelwise = true;
    for p in 0..=f.p_max() {
        let fm = FilteredMap::new(x.level(p).clone(), y.level(p).clone(), f.level(p).clone())?;
        levelwise &= is_er_quis(&fm, r).flag;
    }
    let sx = Arc::new(filtered_simple(&x, r, top)?);
    let sy = Arc::new(filtered_simple(&y, r, top)?);
    let total = is_er_quis(&filtered_simple_map(&f, &sx, &sy, top)?, r).flag;
    Ok(!levelwise || total)
}

fn s5(fp: &FilteredAxiomParams, rng: &mut Rng) -> Result<bool, FilteredError> {
    let (r, top) = (fp.r, fp.base.top);
    let a = Arc::new(random_filtered(&fp.base, rng));
    let path = path_object(a.base(), top)?;
    let levels = (0..=path.object.p_max())
        .map(|p| filtered_copies(&a, path.object.level(p).clone(), p + 2).map(Arc::new))
        .collect::<Result<Vec<_>, _>>()?;
    let obj = FilteredCosimplicial::new(path.object.clone(), levels)?;
    let cst = FilteredCosimplicial::constant(a.clone(), path.constant.p_max());
    let so = Arc::new(filtered_simple(&obj, r, top)?);
    let sc = Arc::new(filtered_simple(&cst, r, top)?);
    Ok(is_er_quis(&filtered_simple_map(&path.ev0, &so, &sc, top)?, r).flag)
}

type FilteredCheck = fn(&FilteredAxiomParams, &mut Rng) -> Result<bool, FilteredError>;

/// Randomized audit of (S1)–(S5) for filtered complexes and `E_r`-quasi-isomorphisms.
pub fn check_filtered_axioms(seed: u64, params: &FilteredAxiomParams, exec: Exec) -> DescentReport {
    let checks: [(Axiom, FilteredCheck); 5] = [(Axiom::S1, s1), (Axiom::S2, s2), (Axiom::S3, s3), (Axiom::S4, s4), (Axiom::S5, s5)];
    let trials = exec.map_range(params.base.trials, |k| {
        let ts = trial_seed(seed, k as u64);
        let results = checks
            .iter()
            .enumerate()
            .map(|(i, (axiom, check))| {
                let mut rng = seeded(trial_seed(ts, i as u64));
                (*axiom, check(params, &mut rng).map_err(|e| e.to_string()))
            })
            .collect();
        TrialOutcome { seed: ts, results }
    });
    DescentReport { seed, certified_degree: params.base.top - 1, trials }
}
