//! Randomized instances of the main theorem, of the characterization of local
//! equivalences through `T` and `ℍ_X`, of skyscraper acyclicity, and a search
//! for a local equivalence that is not a global one.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng as _;

use super::equivalence::{equivalence_check, stalk_commutation_check, thomason_check_of, EquivalenceKind, EquivalenceReport};
use super::hyper::{hyper_map, hypercohomology_sheaf};
use super::triple::{t_map, t_sheaf};
use super::GodementError;
use crate::complexes::{betti, ChainMap, CochainComplex, Degree};
use crate::exactlin::{Field, Matrix};
use crate::exec::Exec;
use crate::random::{random_complex, random_noncontractible, seeded, trial_seed};
use crate::site::{direct_sum, random_sheaf, sections, skyscraper, up_sets, Poset, Sheaf, SheafBounds, SheafMap};

/// The five sites of the theorem suite.
pub fn suite_posets() -> Vec<(String, Arc<Poset>)> {
    vec![
        ("point".to_string(), Arc::new(Poset::point())),
        ("sierpinski".to_string(), Arc::new(Poset::sierpinski())),
        ("chain3".to_string(), Arc::new(Poset::chain(3))),
        ("pseudocircle".to_string(), Arc::new(Poset::pseudocircle())),
        ("pseudosphere".to_string(), Arc::new(Poset::pseudo_sphere())),
    ]
}

#[derive(Clone, Debug)]
pub struct TheoremParams {
    pub per_poset: usize,
    pub bounds: SheafBounds,
    pub top: Degree,
}

impl Default for TheoremParams {
    fn default() -> Self {
        TheoremParams { per_poset: 20, bounds: SheafBounds::default(), top: 6 }
    }
}

/// Conditions (2) `ρ_F ∈ W`, (3) `θ` is the identity, (4) `ρ_{ℍ_X F} ∈ S`
/// for one random sheaf.
#[derive(Clone, Debug)]
pub struct TheoremInstance {
    pub poset: String,
    pub seed: u64,
    pub rho_local: EquivalenceReport,
    pub theta: EquivalenceReport,
    pub thomason: EquivalenceReport,
    /// Betti numbers of `ℝΓ(X, F)` in certified degrees.
    pub global_betti: BTreeMap<Degree, usize>,
    pub certified_degree: Degree,
}

impl TheoremInstance {
    pub fn holds(&self) -> bool {
        self.rho_local.verdict && self.theta.verdict && self.thomason.verdict
    }
}

pub fn theorem_instance(poset: &str, p: &Arc<Poset>, seed: u64, params: &TheoremParams) -> Result<TheoremInstance, GodementError> {
    let f = Arc::new(random_sheaf(p.clone(), &params.bounds, seed));
    theorem_instance_of(poset, f, seed, params.top)
}

/// The three conditions for a given sheaf.
pub fn theorem_instance_of(poset: &str, f: Arc<Sheaf>, seed: u64, top: Degree) -> Result<TheoremInstance, GodementError> {
    let h = hypercohomology_sheaf(&f, top, Exec::Sequential)?;
    let rho_local = equivalence_check(&h.rho, EquivalenceKind::Local, None, Exec::Sequential)?;
    let theta = stalk_commutation_check(&h)?;
    let thomason = thomason_check_of(&h, Exec::Sequential)?;
    let global = h.derived_sections(&crate::site::OpenSet::whole(f.poset()))?;
    Ok(TheoremInstance {
        poset: poset.to_string(),
        seed,
        rho_local,
        theta,
        thomason,
        global_betti: global.betti,
        certified_degree: h.certified_degree(),
    })
}

/// Every suite poset, `per_poset` sheaves each; instance seeds derive from `seed`.
pub fn theorem_suite(seed: u64, params: &TheoremParams, exec: Exec) -> Result<Vec<TheoremInstance>, GodementError> {
    let jobs: Vec<(String, Arc<Poset>, u64)> = suite_posets()
        .into_iter()
        .enumerate()
        .flat_map(|(k, (name, p))| {
            (0..params.per_poset).map(move |i| (name.clone(), p.clone(), trial_seed(seed, (k * 1000 + i) as u64)))
        })
        .collect();
    exec.map(jobs, |(name, p, s)| theorem_instance(&name, &p, s, params)).into_iter().collect()
}

/// How a random sheaf map was produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MapKind {
    /// `ρ_F : F -> ℍ_X F`.
    Rho,
    /// `F ⊕ E -> F`.
    Projection,
    /// `F -> F ⊕ E`.
    Inclusion,
    /// `c · id_F` with `c ∈ {0, …, 4}`.
    Scalar,
}

/// A contractible complex `D --id--> D` in degrees `lo, lo + 1`.
fn cone_of_identity(field: Field, lo: Degree, dim: usize) -> CochainComplex {
    CochainComplex::new(field, lo, vec![dim, dim], vec![Matrix::identity(field, dim)]).expect("cone of the identity")
}

/// A skyscraper `E = x⁎D` with `D` contractible half of the time and with
/// nonzero cohomology otherwise.
fn random_summand(p: &Arc<Poset>, bounds: &SheafBounds, rng: &mut crate::random::Rng) -> Sheaf {
    let x = rng.gen_range(0..p.len());
    let d = if rng.gen_bool(0.5) {
        let dim = rng.gen_range(1..=bounds.max_dim.max(1));
        cone_of_identity(bounds.field, bounds.lo, dim)
    } else {
        random_noncontractible(bounds.field, bounds.lo, bounds.hi, bounds.max_dim, rng)
    };
    skyscraper(p.clone(), x, Arc::new(d)).expect("element in range")
}

fn block_map(field: Field, s: &Arc<CochainComplex>, t: &Arc<CochainComplex>, f: impl Fn(Degree) -> Matrix) -> ChainMap {
    ChainMap::from_fn(s.clone(), t.clone(), |n| {
        let m = f(n);
        debug_assert_eq!(m.field(), field);
        m
    })
    .expect("block map")
}

/// `(F ⊕ E -> F, F -> F ⊕ E)`.
fn sum_maps(f: &Arc<Sheaf>, e: &Sheaf) -> (SheafMap, SheafMap) {
    let sum = Arc::new(direct_sum(&[(**f).clone(), e.clone()]));
    let field = f.field();
    let p = f.poset();
    let proj = p
        .elements()
        .map(|x| {
            block_map(field, sum.stalk(x), f.stalk(x), |n| {
                let (a, b) = (f.stalk(x).dim(n), e.stalk(x).dim(n));
                Matrix::from_entries(field, a, a + b, (0..a).map(|i| (i, i, 1)))
            })
        })
        .collect();
    let incl = p
        .elements()
        .map(|x| {
            block_map(field, f.stalk(x), sum.stalk(x), |n| {
                let (a, b) = (f.stalk(x).dim(n), e.stalk(x).dim(n));
                Matrix::from_entries(field, a + b, a, (0..a).map(|i| (i, i, 1)))
            })
        })
        .collect();
    (
        SheafMap::new(sum.clone(), f.clone(), proj).expect("projection"),
        SheafMap::new(f.clone(), sum, incl).expect("inclusion"),
    )
}

/// A reproducible random sheaf map of one of the [`MapKind`]s.
pub fn random_sheaf_map(p: &Arc<Poset>, bounds: &SheafBounds, top: Degree, seed: u64) -> Result<(MapKind, SheafMap), GodementError> {
    let mut rng = seeded(seed);
    let f = Arc::new(random_sheaf(p.clone(), bounds, rng.gen::<u64>()));
    let kind = [MapKind::Rho, MapKind::Projection, MapKind::Inclusion, MapKind::Scalar][rng.gen_range(0..4)];
    let map = match kind {
        MapKind::Rho => hypercohomology_sheaf(&f, top, Exec::Sequential)?.rho,
        MapKind::Projection | MapKind::Inclusion => {
            let e = random_summand(p, bounds, &mut rng);
            let (proj, incl) = sum_maps(&f, &e);
            if kind == MapKind::Projection {
                proj
            } else {
                incl
            }
        }
        MapKind::Scalar => {
            let c: i64 = rng.gen_range(0..5);
            let comps = p
                .elements()
                .map(|x| {
                    let s = f.stalk(x);
                    block_map(bounds.field, s, s, |n| Matrix::identity(bounds.field, s.dim(n)).scale(c))
                })
                .collect();
            SheafMap::new(f.clone(), f.clone(), comps)?
        }
    };
    Ok((kind, map))
}

/// `f ∈ W`, `T(f) ∈ S` and `ℍ_X(f) ∈ S` for one map.
#[derive(Clone, Debug)]
pub struct LocalEqInstance {
    pub seed: u64,
    pub poset: String,
    pub kind: MapKind,
    pub local: EquivalenceReport,
    pub t_global: EquivalenceReport,
    pub h_global: EquivalenceReport,
}

impl LocalEqInstance {
    pub fn agree(&self) -> bool {
        self.local.verdict == self.t_global.verdict && self.t_global.verdict == self.h_global.verdict
    }
}

pub fn localeq_instance(poset: &str, p: &Arc<Poset>, bounds: &SheafBounds, top: Degree, seed: u64) -> Result<LocalEqInstance, GodementError> {
    let (kind, f) = random_sheaf_map(p, bounds, top, seed)?;
    let [local, t_global, h_global] = localeq_reports(&f, top)?;
    Ok(LocalEqInstance { seed, poset: poset.to_string(), kind, local, t_global, h_global })
}

/// `[f ∈ W, T(f) ∈ S, ℍ_X(f) ∈ S]`.
pub fn localeq_reports(f: &SheafMap, top: Degree) -> Result<[EquivalenceReport; 3], GodementError> {
    let local = equivalence_check(f, EquivalenceKind::Local, None, Exec::Sequential)?;
    let (ts, tt) = (Arc::new(t_sheaf(f.source())), Arc::new(t_sheaf(f.target())));
    let t_global = equivalence_check(&t_map(f, &ts, &tt), EquivalenceKind::Global, None, Exec::Sequential)?;
    let hs = hypercohomology_sheaf(f.source(), top, Exec::Sequential)?;
    let ht = hypercohomology_sheaf(f.target(), top, Exec::Sequential)?;
    let h_global = equivalence_check(&hyper_map(f, &hs, &ht)?, EquivalenceKind::Global, None, Exec::Sequential)?;
    Ok([local, t_global, h_global])
}

/// `count` random maps spread over the suite posets other than the pseudo-2-sphere.
pub fn localeq_suite(seed: u64, count: usize, top: Degree, exec: Exec) -> Result<Vec<LocalEqInstance>, GodementError> {
    let posets: Vec<(String, Arc<Poset>)> = suite_posets().into_iter().filter(|(n, _)| n != "pseudosphere").collect();
    let jobs: Vec<(String, Arc<Poset>, u64)> = (0..count)
        .map(|i| {
            let (n, p) = &posets[i % posets.len()];
            (n.clone(), p.clone(), trial_seed(seed, i as u64))
        })
        .collect();
    let bounds = SheafBounds::default();
    exec.map(jobs, |(n, p, s)| localeq_instance(&n, &p, &bounds, top, s)).into_iter().collect()
}

/// `ℝΓ(U, x⁎D)` against `betti(D)` for `x ∈ U` and zero otherwise.
#[derive(Clone, Debug)]
pub struct SkyscraperInstance {
    pub poset: String,
    pub point: usize,
    pub open: String,
    pub contains_point: bool,
    pub expected: BTreeMap<Degree, usize>,
    pub found: BTreeMap<Degree, usize>,
}

impl SkyscraperInstance {
    pub fn holds(&self) -> bool {
        self.expected == self.found
    }
}

pub fn skyscraper_suite(seed: u64, bounds: &SheafBounds, top: Degree, exec: Exec) -> Result<Vec<SkyscraperInstance>, GodementError> {
    let jobs: Vec<(String, Arc<Poset>, usize, u64)> = suite_posets()
        .into_iter()
        .enumerate()
        .flat_map(|(k, (n, p))| (0..p.len()).map(move |x| (n.clone(), p.clone(), x, trial_seed(seed, (k * 100 + x) as u64))))
        .collect();
    let per_point = exec.map(jobs, |(n, p, x, s)| -> Result<Vec<SkyscraperInstance>, GodementError> {
        let mut rng = seeded(s);
        let d = Arc::new(random_complex(bounds.field, bounds.lo, bounds.hi, bounds.max_dim, &mut rng));
        let expected_in: BTreeMap<Degree, usize> = betti(&d).into_iter().filter(|(_, b)| *b > 0).collect();
        let f = Arc::new(skyscraper(p.clone(), x, d)?);
        let h = hypercohomology_sheaf(&f, top, Exec::Sequential)?;
        let mut out = Vec::new();
        for u in up_sets(&p)?.into_iter().filter(|u| !u.is_empty()) {
            let found = h.derived_sections(&u)?.betti;
            let contains_point = u.contains(x);
            let expected = if contains_point { expected_in.clone() } else { BTreeMap::new() };
            out.push(SkyscraperInstance { poset: n.clone(), point: x, open: u.label(&p), contains_point, expected, found });
        }
        Ok(out)
    });
    Ok(per_point.into_iter().collect::<Result<Vec<_>, _>>()?.into_iter().flatten().collect())
}

/// A sheaf map that is a local equivalence but not a global one.
#[derive(Clone, Debug)]
pub struct SeparationWitness {
    pub poset: String,
    pub seed: u64,
    pub sheaf: Arc<Sheaf>,
    pub map: SheafMap,
    pub local: EquivalenceReport,
    pub global: EquivalenceReport,
}

/// Search random sheaves on the pseudocircle for `ρ_F ∈ W \ S`.
pub fn find_separation_witness(seed: u64, tries: usize, top: Degree) -> Result<Option<SeparationWitness>, GodementError> {
    let p = Arc::new(Poset::pseudocircle());
    let bounds = SheafBounds::default();
    for i in 0..tries {
        let s = trial_seed(seed, i as u64);
        let f = Arc::new(random_sheaf(p.clone(), &bounds, s));
        let h = hypercohomology_sheaf(&f, top, Exec::Sequential)?;
        let local = equivalence_check(&h.rho, EquivalenceKind::Local, None, Exec::Sequential)?;
        if !local.verdict {
            continue;
        }
        let global = equivalence_check(&h.rho, EquivalenceKind::Global, None, Exec::Sequential)?;
        if !global.verdict {
            return Ok(Some(SeparationWitness { poset: "pseudocircle".into(), seed: s, sheaf: f, map: h.rho, local, global }));
        }
    }
    Ok(None)
}

/// `Γ(U, F)` cohomology for every nonempty open, used to describe witnesses.
pub fn section_betti(f: &Sheaf) -> Result<Vec<(String, BTreeMap<Degree, usize>)>, GodementError> {
    let p = f.poset();
    let mut out = Vec::new();
    for u in up_sets(p)?.into_iter().filter(|u| !u.is_empty()) {
        let s = sections(f, &u)?;
        out.push((u.label(p), betti(&s.complex).into_iter().filter(|(_, b)| *b > 0).collect()));
    }
    Ok(out)
}
