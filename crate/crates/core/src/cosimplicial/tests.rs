use std::sync::Arc;

use super::bicosimplicial::{aw_map_signed, iterated_summand};
use super::*;
use crate::complexes::{betti, certified_betti, is_quis, ChainMap, ComplexError};
use crate::exactlin::{Field, Matrix};
use crate::exec::Exec;
use crate::random::{random_complex, random_noncontractible, seeded, CubeSpec, MultiComplex, Rng};

const Q: Field = Field::Rationals;
const F5: Field = Field::Prime(5);

fn normalized(field: Field, ndirs: usize, k_max: i32, deg: i32, rng: &mut Rng) -> MultiComplex {
    let mut ranges = vec![(0, k_max); ndirs - 1];
    ranges.push((0, deg));
    MultiComplex::random(field, &CubeSpec::new(ranges, 2, 5), rng)
}

fn random_x(field: Field, seed: u64, p_max: usize) -> CosimplicialComplex {
    let mut rng = seeded(seed);
    dold_kan(&normalized(field, 2, 2, 1, &mut rng), 2, (0, 1), p_max).unwrap()
}

fn random_z(field: Field, seed: u64, p_max: usize) -> BicosimplicialComplex {
    let mut rng = seeded(seed);
    dold_kan_bi(&normalized(field, 3, 1, 1, &mut rng), 1, (0, 1), p_max).unwrap()
}

#[test]
fn normalized_data_gives_cosimplicial_objects() {
    for seed in 0..6 {
        random_x(Q, seed, 4).check_identities().unwrap();
        random_z(F5, seed, 3).check().unwrap();
    }
}

#[test]
fn constant_object_recovers_its_cohomology() {
    let mut rng = seeded(3);
    for _ in 0..5 {
        let a = Arc::new(random_noncontractible(Q, -1, 2, 3, &mut rng));
        let l = lambda(&a, 5).unwrap();
        assert!(is_quis(&l).flag);
    }
}

#[test]
fn level_zero_object_is_its_own_simple() {
    let mut rng = seeded(8);
    let a = Arc::new(random_complex(Q, 0, 3, 3, &mut rng));
    let x = CosimplicialComplex::concentrated_in_level_zero(a.clone());
    let s = simple(&x, 3).unwrap();
    for n in 0..=3 {
        assert_eq!(s.dim(n), a.dim(n));
    }
    assert_eq!(certified_betti(&s).get(&1), betti(&a).get(&1));
}

#[test]
fn dropping_the_vertical_sign_breaks_d_squared() {
    let a = Arc::new(CochainComplex::new(Q, 0, vec![1, 1], vec![Matrix::identity(Q, 1)]).unwrap());
    let x = CosimplicialComplex::constant(a, 4);
    assert!(simple_with_signs(&x, 4, SignRule::Standard).is_ok());
    let err = simple_with_signs(&x, 4, SignRule::DropVerticalSign).unwrap_err();
    assert!(matches!(err, CosimplicialError::Complex(ComplexError::NotACochainComplex { .. })));
}

#[test]
fn simple_of_identity_is_identity() {
    let x = Arc::new(random_x(Q, 4, 4));
    let f = CosimplicialMap::identity(x);
    assert!(simple_map(&f, 4).unwrap().is_identity());
}

#[test]
fn too_few_levels_is_reported() {
    let x = random_x(Q, 4, 2);
    assert!(matches!(simple(&x, 5), Err(CosimplicialError::InsufficientLevels { .. })));
}

#[test]
fn alexander_whitney_is_a_quasi_isomorphism() {
    for seed in 0..5 {
        let z = random_z(Q, seed, 4);
        let (mu, _) = aw_map(&z, 4).unwrap();
        assert!(is_quis(&mu).flag, "seed {seed}");
    }
}

#[test]
fn alexander_whitney_needs_the_koszul_sign() {
    let broken = (0..10).filter(|&seed| aw_map_signed(&random_z(Q, seed, 4), 4, false).is_err()).count();
    assert!(broken > 0);
}

#[test]
fn both_iterated_simples_agree_with_the_diagonal() {
    for seed in 0..4 {
        let z = random_z(F5, seed, 4);
        let a = certified_betti(&iterated_simple(&z, 4).unwrap());
        let b = certified_betti(&iterated_simple(&z.transpose(), 4).unwrap());
        let d = certified_betti(&simple(&z.diagonal().unwrap(), 4).unwrap());
        assert_eq!(a, b);
        assert_eq!(a, d);
    }
}

/// `s(X) -> ss(Z)` placing `X(p)` on the summand `(i, j)` given by `slot(p)`.
fn edge_inclusion(x: &CosimplicialComplex, z: &BicosimplicialComplex, top: i32, slot: impl Fn(usize) -> (usize, usize)) -> ChainMap {
    let sx = Arc::new(simple(x, top).unwrap());
    let ss = Arc::new(iterated_simple(z, top).unwrap());
    let lay = simple_layout(x, top).unwrap();
    ChainMap::from_fn(sx.clone(), ss.clone(), |t| {
        let mut entries = Vec::new();
        for p in 0..lay.sizes(t).len() {
            let src = lay.summand(t, p).unwrap();
            let (i, j) = slot(p);
            let dst = iterated_summand(z, top, t, i, j).unwrap().unwrap();
            entries.extend(src.zip(dst).map(|(c, r)| (r, c, 1)));
        }
        Matrix::from_entries(x.field(), ss.dim(t), sx.dim(t), entries)
    })
    .unwrap()
}

#[test]
fn lambda_and_mu_are_compatible() {
    let top = 4;
    for seed in 0..3 {
        let x = random_x(Q, seed, 4);
        // s(λ_X) followed by μ for X × Δ
        let z = BicosimplicialComplex::constant_in_second(&x, 4);
        let (mu, _) = aw_map(&z, top).unwrap();
        assert!(mu.compose(&edge_inclusion(&x, &z, top, |p| (p, 0))).is_identity());
        // λ_{s(X)} followed by μ for Δ × X
        let z = BicosimplicialComplex::constant_in_first(&x, 4);
        let (mu, _) = aw_map(&z, top).unwrap();
        assert!(mu.compose(&edge_inclusion(&x, &z, top, |p| (0, p))).is_identity());
    }
}

#[test]
fn path_object_levels_and_evaluations() {
    let mut rng = seeded(5);
    let a = Arc::new(random_noncontractible(Q, 0, 2, 2, &mut rng));
    let path = path_object(&a, 4).unwrap();
    for n in 0..=path.object.p_max() {
        assert_eq!(path.object.level(n).total_dim(), (n + 2) * a.total_dim());
    }
    path.ev0.check_commutes().unwrap();
    path.ev1.check_commutes().unwrap();
    assert!(is_quis(&simple_map(&path.ev0, 4).unwrap()).flag);
    assert!(is_quis(&simple_map(&path.ev1, 4).unwrap()).flag);
}

fn constant_coaugmentation(a: &Arc<CochainComplex>, x: &CosimplicialComplex) -> Coaugmentation {
    let extra = (0..=x.p_max())
        .map(|p| {
            let below = if p == 0 { a.clone() } else { x.level(p - 1).clone() };
            ChainMap::identity(x.level(p).clone()).retarget(x.level(p).clone(), below)
        })
        .collect();
    Coaugmentation { source: a.clone(), eps: ChainMap::identity(a.clone()).retarget(a.clone(), x.level(0).clone()), extra }
}

#[test]
fn extra_degeneracy_collapses_the_constant_object() {
    let mut rng = seeded(6);
    let a = Arc::new(random_noncontractible(Q, 0, 2, 3, &mut rng));
    let x = Arc::new(CosimplicialComplex::constant(a.clone(), 4));
    let coaug = constant_coaugmentation(&a, &x);
    assert!(collapse_by_extra_degeneracy(&x, &coaug, 4).unwrap().flag);

    let mut bad = coaug.clone();
    bad.extra[2] = ChainMap::zero(x.level(2).clone(), x.level(1).clone());
    assert!(matches!(
        collapse_by_extra_degeneracy(&x, &bad, 4),
        Err(CosimplicialError::NotExtraDegeneracy { .. })
    ));
}

#[test]
fn small_descent_audit_passes() {
    let params = AxiomParams { trials: 3, top: 4, max_level: 2, ..AxiomParams::default() };
    let report = check_descent_axioms(11, &params, Exec::Sequential);
    assert!(report.all_pass(), "{:?}", report.failures());
    assert_eq!(report.certified_degree, 3);
}

#[test]
fn audit_is_independent_of_execution_mode() {
    let params = AxiomParams { trials: 2, top: 3, max_level: 1, ..AxiomParams::default() };
    assert_eq!(check_descent_axioms(2, &params, Exec::Sequential), check_descent_axioms(2, &params, Exec::Parallel));
}

#[test]
fn zero_object_has_zero_simple() {
    let z = zero_cosimplicial(Q, 3);
    assert_eq!(simple(&z, 3).unwrap().total_dim(), 0);
}

#[test]
fn simple_commutes_with_biproducts_exactly() {
    for seed in 0..4 {
        let x = random_x(F5, seed, 4);
        let y = random_x(F5, seed + 100, 4);
        let (xy, [px, py]) = x.product(&y).unwrap();
        let sxy = Arc::new(simple(&xy, 4).unwrap());
        let fx = simple_map_between(&px, &sxy, &Arc::new(simple(px.target(), 4).unwrap()), 4).unwrap();
        let fy = simple_map_between(&py, &sxy, &Arc::new(simple(py.target(), 4).unwrap()), 4).unwrap();
        for n in sxy.degrees() {
            let both = Matrix::vstack(F5, sxy.dim(n), &[&fx.component(n), &fy.component(n)]);
            assert!(both.is_invertible(), "degree {n}");
        }
    }
}

#[test]
fn simple_euler_characteristic_matches_the_grid() {
    let x = random_x(Q, 9, 5);
    let s = simple(&x, 5).unwrap();
    let b = x.lower_bound().unwrap();
    let mut grid = 0i64;
    for p in 0..=x.p_max() {
        for q in x.level(p).degrees() {
            if p as i32 + q <= 5 && q >= b {
                let sign = if (p as i32 + q) % 2 == 0 { 1 } else { -1 };
                grid += sign * x.level(p).dim(q) as i64;
            }
        }
    }
    let total: i64 = s.degrees().map(|n| if n % 2 == 0 { 1 } else { -1 } * s.dim(n) as i64).sum();
    assert_eq!(total, grid);
}

#[test]
fn lambda_is_natural() {
    let mut rng = seeded(12);
    let a = Arc::new(random_complex(Q, 0, 2, 2, &mut rng));
    let c = Arc::new(random_complex(Q, 0, 2, 2, &mut rng));
    let bp = crate::complexes::biproduct(&a, &c).unwrap();
    let p = &bp.projections[0];
    let top = 4;
    let pm = top as usize;
    let sp = simple_map(&CosimplicialMap::constant(p, pm), top).unwrap();
    let la = lambda(&a, top).unwrap().retarget(a.clone(), sp.target().clone());
    let lab = lambda(&bp.sum, top).unwrap().retarget(bp.sum.clone(), sp.source().clone());
    assert!(la.compose(p).same_components(&sp.compose(&lab)));
}

#[test]
fn a_non_quis_level_is_seen_by_the_simple() {
    let mut rng = seeded(13);
    let n = normalized(Q, 2, 2, 1, &mut rng);
    let mut point = CubeSpec::new(vec![(1, 1), (0, 0)], 1, 1);
    point.edge_dirs = vec![false, false];
    let extra = MultiComplex::random(Q, &point, &mut rng);
    let sum = n.direct_sum(&extra);
    let x = Arc::new(dold_kan(&sum, 2, (0, 1), 4).unwrap());
    let y = Arc::new(dold_kan(&n, 2, (0, 1), 4).unwrap());
    let f = dold_kan_map(&x, &y, &sum, 2, |pos| crate::random::first_summand_projection(&sum, &n, pos)).unwrap();
    f.check_commutes().unwrap();
    assert!(is_quis(f.level(0)).flag);
    assert!(!is_quis(f.level(1)).flag);
    let report = is_quis(&simple_map(&f, 4).unwrap());
    assert!(!report.flag);
    assert!(report.failures().contains(&1));
}

#[test]
fn diagonal_swap_preserves_quis() {
    let mut seen = [false; 2];
    for seed in 0..8 {
        let mut rng = seeded(seed);
        let n = normalized(F5, 3, 1, 1, &mut rng);
        let mut spec = CubeSpec::new(vec![(0, 1), (0, 1), (0, 1)], 2, 3);
        if seed % 2 == 0 {
            spec.force_dirs[2] = true;
        }
        let c = MultiComplex::random(F5, &spec, &mut rng);
        let sum = n.direct_sum(&c);
        let x = Arc::new(dold_kan_bi(&sum, 1, (0, 1), 4).unwrap());
        let y = Arc::new(dold_kan_bi(&n, 1, (0, 1), 4).unwrap());
        let f = dold_kan_bi_map(&x, &y, &sum, 1, |pos| crate::random::first_summand_projection(&sum, &n, pos));
        f.check().unwrap();
        let ss = |f: &BicosimplicialMap| {
            let a = Arc::new(iterated_simple(f.source(), 4).unwrap());
            let b = Arc::new(iterated_simple(f.target(), 4).unwrap());
            is_quis(&iterated_simple_map(f, &a, &b, 4).unwrap()).flag
        };
        let (one, other) = (ss(&f), ss(&f.transpose()));
        assert_eq!(one, other, "seed {seed}");
        seen[one as usize] = true;
    }
    assert_eq!(seen, [true, true]);
}
