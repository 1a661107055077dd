use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rand::Rng as _;

use super::{
    aw_map, dold_kan, dold_kan_bi, dold_kan_map, lambda, path_object, simple, simple_map, simple_map_between,
    CosimplicialComplex, CosimplicialError,
};
use crate::complexes::{biproduct, is_quis, ChainMap, CochainComplex, Degree};
use crate::exactlin::{Field, Matrix};
use crate::exec::Exec;
use crate::random::{first_summand_projection, random_complex, seeded, trial_seed, CubeSpec, MultiComplex, Rng};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axiom {
    S1,
    S2,
    S3,
    S4,
    S5,
}

impl Axiom {
    pub const ALL: [Axiom; 5] = [Axiom::S1, Axiom::S2, Axiom::S3, Axiom::S4, Axiom::S5];
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Clone, Debug)]
pub struct AxiomParams {
    pub field: Field,
    pub trials: usize,
    /// Largest normalized cosimplicial level.
    pub max_level: usize,
    /// Largest normalized level in each direction of bicosimplicial inputs.
    pub max_bi_level: usize,
    pub max_dim: usize,
    /// Internal degrees of the generated complexes are `0..=max_degree`.
    pub max_degree: Degree,
    pub top: Degree,
}

impl Default for AxiomParams {
    fn default() -> Self {
        AxiomParams { field: Field::Prime(5), trials: 50, max_level: 3, max_bi_level: 3, max_dim: 3, max_degree: 2, top: 6 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrialOutcome {
    pub seed: u64,
    pub results: BTreeMap<Axiom, Result<bool, String>>,
}

impl TrialOutcome {
    pub fn passed(&self) -> bool {
        self.results.values().all(|r| matches!(r, Ok(true)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DescentReport {
    pub seed: u64,
    pub certified_degree: Degree,
    pub trials: Vec<TrialOutcome>,
}

impl DescentReport {
    pub fn all_pass(&self) -> bool {
        self.trials.iter().all(TrialOutcome::passed)
    }

    pub fn passes(&self, axiom: Axiom) -> usize {
        self.trials.iter().filter(|t| matches!(t.results.get(&axiom), Some(Ok(true)))).count()
    }

    pub fn failures(&self) -> Vec<(u64, Axiom, String)> {
        let mut out = Vec::new();
        for t in &self.trials {
            for (a, r) in &t.results {
                match r {
                    Ok(true) => {}
                    Ok(false) => out.push((t.seed, *a, "not a quasi-isomorphism".to_string())),
                    Err(e) => out.push((t.seed, *a, e.clone())),
                }
            }
        }
        out
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

fn p_levels(params: &AxiomParams) -> usize {
    params.top.max(0) as usize
}

fn s1(params: &AxiomParams, rng: &mut Rng) -> Result<bool, CosimplicialError> {
    let pm = p_levels(params);
    let x = dold_kan(&normalized(params, 2, rng, false), params.max_level, (0, params.max_degree), pm)?;
    let y = dold_kan(&normalized(params, 2, rng, false), params.max_level, (0, params.max_degree), pm)?;
    let (xy, [px, py]) = x.product(&y)?;
    let top = params.top;
    let sxy = Arc::new(simple(&xy, top)?);
    let fx = simple_map_between(&px, &sxy, &Arc::new(simple(px.target(), top)?), top)?;
    let fy = simple_map_between(&py, &sxy, &Arc::new(simple(py.target(), top)?), top)?;
    let bp = biproduct(fx.target(), fy.target())?;
    let field = params.field;
    let both = ChainMap::from_fn(sxy.clone(), bp.sum.clone(), |n| {
        Matrix::vstack(field, sxy.dim(n), &[&fx.component(n), &fy.component(n)])
    })?;
    Ok(is_quis(&both).flag)
}

fn s2(params: &AxiomParams, rng: &mut Rng) -> Result<bool, CosimplicialError> {
    let z = dold_kan_bi(&normalized(params, 3, rng, false), params.max_bi_level, (0, params.max_degree), p_levels(params))?;
    let (mu, _) = aw_map(&z, params.top)?;
    Ok(is_quis(&mu).flag)
}

fn s3(params: &AxiomParams, rng: &mut Rng) -> Result<bool, CosimplicialError> {
    let a = Arc::new(random_complex(params.field, 0, params.max_degree, params.max_dim, rng));
    Ok(is_quis(&lambda(&a, params.top)?).flag)
}

/// A levelwise quasi-isomorphism `X ⊕ C -> X` with `C` acyclic in the internal direction.
fn s4(params: &AxiomParams, rng: &mut Rng) -> Result<bool, CosimplicialError> {
    let pm = p_levels(params);
    let n = normalized(params, 2, rng, false);
    let c = normalized(params, 2, rng, true);
    let sum = n.direct_sum(&c);
    let q = (0, params.max_degree);
    let x = Arc::new(dold_kan(&sum, params.max_level, q, pm)?);
    let y = Arc::new(dold_kan(&n, params.max_level, q, pm)?);
    let f = dold_kan_map(&x, &y, &sum, params.max_level, |pos| first_summand_projection(&sum, &n, pos))?;
    f.check_commutes()?;
    let levelwise = (0..=pm).all(|p| is_quis(f.level(p)).flag);
    let total = is_quis(&simple_map(&f, params.top)?).flag;
    Ok(!levelwise || total)
}

fn s5(params: &AxiomParams, rng: &mut Rng) -> Result<bool, CosimplicialError> {
    let a = Arc::new(random_complex(params.field, 0, params.max_degree, params.max_dim, rng));
    let path = path_object(&a, params.top)?;
    Ok(is_quis(&simple_map(&path.ev0, params.top)?).flag)
}

type AxiomCheck = fn(&AxiomParams, &mut Rng) -> Result<bool, CosimplicialError>;

/// Randomized audit of (S1)–(S5); trial `k` uses the seed `trial_seed(seed, k)`.
pub fn check_descent_axioms(seed: u64, params: &AxiomParams, exec: Exec) -> DescentReport {
    let checks: [(Axiom, AxiomCheck); 5] = [(Axiom::S1, s1), (Axiom::S2, s2), (Axiom::S3, s3), (Axiom::S4, s4), (Axiom::S5, s5)];
    let trials = exec.map_range(params.trials, |k| {
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
    DescentReport { seed, certified_degree: params.top - 1, trials }
}

/// Cosimplicial complex with all levels zero, for degenerate trials.
pub fn zero_cosimplicial(field: Field, p_max: usize) -> CosimplicialComplex {
    CosimplicialComplex::constant(Arc::new(CochainComplex::zero(field)), p_max)
}
