use std::collections::BTreeMap;
use std::sync::Arc;

use super::cosimplicial::filtered_line;
use super::*;
use crate::complexes::{betti, ChainMap, CochainComplex, Degree};
use crate::cosimplicial::{simple_layout, AxiomParams};
use crate::exactlin::{Field, Matrix, Subspace};
use crate::exec::Exec;
use crate::random::{first_summand_projection, seeded, CubeSpec, MultiComplex};

fn f5() -> Field {
    Field::Prime(5)
}

/// `x -> y` in degrees 0, 1 with the identity differential.
fn edge(field: Field) -> Arc<CochainComplex> {
    Arc::new(CochainComplex::new(field, 0, vec![1, 1], vec![Matrix::identity(field, 1)]).unwrap())
}

fn weighted(c: &Arc<CochainComplex>, w: &[(Degree, Vec<Weight>)]) -> FilteredComplex {
    let table: BTreeMap<Degree, Vec<Weight>> = w.iter().cloned().collect();
    FilteredComplex::from_weights(c.clone(), |n| table.get(&n).cloned().unwrap_or_default()).unwrap()
}

#[test]
fn rejects_broken_filtrations() {
    let f = f5();
    let c = edge(f);
    // d sends weight 1 to weight 0
    let bad = FilteredComplex::from_weights(c.clone(), |n| vec![if n == 0 { 1 } else { 0 }]);
    assert!(matches!(bad, Err(FilteredError::NotCompatible { .. })));
    let raised_target = FilteredComplex::new(c.clone(), 0, 1, |k, n| {
        if k == 1 && n == 1 {
            Subspace::full(f, 1)
        } else if k == 0 {
            Subspace::full(f, c.dim(n))
        } else {
            Subspace::zero(f, c.dim(n))
        }
    });
    assert!(raised_target.is_ok());
    let increasing = FilteredComplex::new(c.clone(), 0, 2, |k, n| {
        if k == 1 {
            Subspace::zero(f, c.dim(n))
        } else {
            Subspace::full(f, c.dim(n))
        }
    });
    assert!(matches!(increasing, Err(FilteredError::NotDecreasing { .. })));
    let short = FilteredComplex::new(c.clone(), 0, 0, |_, n| Subspace::zero(f, c.dim(n)));
    assert!(matches!(short, Err(FilteredError::NotExhaustive { .. })));
}

#[test]
fn trivial_filtration_pages() {
    let f = f5();
    let mut rng = seeded(7);
    for _ in 0..5 {
        let c = Arc::new(crate::random::random_complex(f, 0, 3, 3, &mut rng));
        let fc = FilteredComplex::trivial(c.clone(), 2);
        let e0 = er_page(&fc, 0);
        let e1 = er_page(&fc, 1);
        for n in c.degrees() {
            assert_eq!(e0.dim(2, n - 2), c.dim(n));
            assert_eq!(e0.total_dim(n), c.dim(n));
            assert_eq!(e1.dim(2, n - 2), betti(&c).get(&n).copied().unwrap_or(0));
        }
        assert!(e1.terms().keys().all(|(p, _)| *p == 2));
    }
}

#[test]
fn two_step_contractible_pages_vanish() {
    let f = Field::Rationals;
    let fc = weighted(&edge(f), &[(0, vec![0]), (1, vec![1])]);
    let pages = spectral_sequence(&fc, 3);
    assert_eq!(pages[0].terms(), BTreeMap::from([((0, 0), 1), ((1, 0), 1)]));
    assert_eq!(pages[1].terms(), BTreeMap::from([((0, 0), 1), ((1, 0), 1)]));
    assert!(pages[1].differential(0, 0).is_invertible());
    assert!(pages[2].terms().is_empty());
    assert!(pages[3].terms().is_empty());

    // a random contractible complex with random weights
    let mut rng = seeded(3);
    for _ in 0..5 {
        let mut spec = CubeSpec::new(vec![(0, 3)], 3, 6);
        spec.force_dirs[0] = true;
        let mc = MultiComplex::random(f, &spec, &mut rng);
        let fc = filtered_line(&mc, 0, 3);
        let r = (fc.width() + 1) as usize;
        assert!(er_page(&fc, r).terms().is_empty());
    }
}

#[test]
fn bounded_convergence_to_cohomology() {
    let f = f5();
    let mut rng = seeded(19);
    for _ in 0..10 {
        let fc = random_filtered_complex(f, -1, 3, 3, &mut rng);
        let w = fc.width() as usize;
        let pages = spectral_sequence(&fc, w + 3);
        let b = betti(fc.base());
        for r in w + 1..=w + 3 {
            assert_eq!(pages[r].terms(), pages[w + 1].terms());
        }
        for n in fc.base().degrees() {
            assert_eq!(pages[w + 1].total_dim(n), b.get(&n).copied().unwrap_or(0));
        }
    }
}

#[test]
fn identity_is_er_quis_for_every_r() {
    let mut rng = seeded(5);
    let fc = Arc::new(random_filtered_complex(f5(), 0, 3, 3, &mut rng));
    let id = FilteredMap::identity(fc);
    for r in 0..4 {
        assert!(is_er_quis(&id, r).flag);
    }
}

/// `{c, x -> y}` with `c, x` of weight 0 and `y` of weight 1, projected onto `{c}`.
#[test]
fn weight_shift_is_e1_but_not_e0() {
    let f = Field::Rationals;
    let a = Arc::new(
        CochainComplex::new(f, 0, vec![2, 1], vec![Matrix::from_i64(f, 1, 2, &[0, 1])]).unwrap(),
    );
    let b = Arc::new(CochainComplex::concentrated(f, 0, 1));
    let fa = Arc::new(weighted(&a, &[(0, vec![0, 0]), (1, vec![1])]));
    let fb = Arc::new(weighted(&b, &[(0, vec![0])]));
    let m = ChainMap::new(a.clone(), b.clone(), 0, vec![Matrix::from_i64(f, 1, 2, &[1, 0]), Matrix::zeros(f, 0, 1)]).unwrap();
    let fm = FilteredMap::new(fa, fb, m).unwrap();
    assert!(crate::complexes::is_quis(fm.map()).flag);
    let e0 = is_er_quis(&fm, 0);
    assert!(!e0.flag);
    assert_eq!(e0.failures, vec![(0, 0), (1, 0)]);
    assert!(is_er_quis(&fm, 1).flag);
    assert!(is_er_quis(&fm, 2).flag);
    assert!(!is_graded_quis(&fm).unwrap());
}

#[test]
fn map_lowering_weights_is_rejected() {
    let f = f5();
    let c = Arc::new(CochainComplex::concentrated(f, 0, 1));
    let high = Arc::new(weighted(&c, &[(0, vec![1])]));
    let low = Arc::new(weighted(&c, &[(0, vec![0])]));
    let id = ChainMap::identity(c.clone());
    assert!(matches!(FilteredMap::new(high, low.clone(), id.clone()), Err(FilteredError::NotFiltered { k: 1, degree: 0 })));
    // raising weights is allowed
    let raised = Arc::new(weighted(&c, &[(0, vec![1])]));
    assert!(FilteredMap::new(low, raised, id).is_ok());
}

/// `E_0`-quasi-isomorphisms are the maps with `Gr(f)` a quasi-isomorphism.
#[test]
fn e0_quis_is_graded_quis() {
    let f = f5();
    let mut rng = seeded(23);
    let (mut yes, mut no) = (0, 0);
    for _ in 0..30 {
        let base = MultiComplex::random(f, &CubeSpec::new(vec![(0, 3)], 2, 4), &mut rng);
        let mut spec = CubeSpec::new(vec![(0, 3)], 2, 2);
        spec.force_dirs[0] = true;
        let acyclic = MultiComplex::random(f, &spec, &mut rng);
        let sum = base.direct_sum(&acyclic);
        let (x, y) = (Arc::new(filtered_line(&sum, 0, 3)), Arc::new(filtered_line(&base, 0, 3)));
        let m = ChainMap::from_fn(x.base().clone(), y.base().clone(), |n| first_summand_projection(&sum, &base, &[n])).unwrap();
        let fm = FilteredMap::new(x, y, m).unwrap();
        let graded = is_graded_quis(&fm).unwrap();
        assert_eq!(is_er_quis(&fm, 0).flag, graded);
        if graded {
            yes += 1;
        } else {
            no += 1;
        }
    }
    assert!(yes > 0 && no > 0, "{yes} graded quis, {no} not");
}

#[test]
fn associated_graded_has_expected_dimensions() {
    let f = Field::Rationals;
    let fc = weighted(&edge(f), &[(0, vec![0]), (1, vec![1])]);
    assert_eq!(associated_graded(&fc, 0).dim(0), 1);
    assert_eq!(associated_graded(&fc, 0).dim(1), 0);
    assert_eq!(associated_graded(&fc, 1).dim(1), 1);
}

fn random_dk(seed: u64, field: Field) -> FilteredCosimplicial {
    let mut rng = seeded(seed);
    let mc = MultiComplex::random(field, &CubeSpec::new(vec![(0, 2), (0, 1)], 2, 5), &mut rng);
    FilteredCosimplicial::from_dold_kan(&mc, 2, (0, 1), 4).unwrap()
}

#[test]
fn delta_zero_is_summandwise() {
    let x = random_dk(31, f5());
    let fs = filtered_simple(&x, 0, 4).unwrap();
    let layout = simple_layout(x.complex(), 4).unwrap();
    for n in fs.base().degrees() {
        for k in fs.k_min() - 1..=fs.k_max() + 1 {
            let got = fs.filt(k, n);
            for p in 0..layout.sizes(n).len() {
                let range = layout.summand(n, p).unwrap();
                let inside = x.level(p).filt(k, n - p as Degree);
                let embedded = Matrix::from_blocks(
                    f5(),
                    &[range.start, range.len(), fs.base().dim(n) - range.end],
                    &[inside.dim()],
                    [(1, 0, inside.basis())],
                );
                assert!(got.contains_vectors(&embedded));
            }
            let total: usize = (0..layout.sizes(n).len()).map(|p| x.level(p).filt(k, n - p as Degree).dim()).sum();
            assert_eq!(got.dim(), total);
        }
    }
}

/// For a constant object the weight of `A^j` in column `i` is `w + r i`.
#[test]
fn delta_r_on_constant_object() {
    let f = f5();
    // e0 -> f0, e1 -> f1 with weights e: (0, 1), f: (1, 2)
    let c = Arc::new(CochainComplex::new(f, 0, vec![2, 2], vec![Matrix::identity(f, 2)]).unwrap());
    let w = |j: Degree| if j == 0 { vec![0, 1] } else { vec![1, 2] };
    let fa = Arc::new(FilteredComplex::from_weights(c.clone(), w).unwrap());
    let top = 4;
    let x = FilteredCosimplicial::constant(fa, top as usize);
    for r in 0..3 {
        let fs = filtered_simple(&x, r, top).unwrap();
        let expected = FilteredComplex::from_weights(fs.base().clone(), |n| {
            (0..=n)
                .filter(|i| (0..=1).contains(&(n - i)))
                .flat_map(|i| w(n - i).into_iter().map(move |wt| wt + r as Weight * i))
                .collect()
        })
        .unwrap();
        assert!(expected.same_filtration(&fs), "r = {r}");
    }
}

#[test]
fn filtered_simple_is_d_compatible_on_random_inputs() {
    for seed in 0..6 {
        let x = random_dk(100 + seed, Field::Rationals);
        for r in 0..3 {
            filtered_simple(&x, r, 4).unwrap();
        }
    }
}

#[test]
fn decalage_of_trivial_filtration() {
    let f = f5();
    let mut rng = seeded(8);
    let c = Arc::new(crate::random::random_complex(f, 0, 3, 3, &mut rng));
    let dec = decalage(&FilteredComplex::trivial(c.clone(), 0));
    for n in c.degrees() {
        let cycles = c.diff(n).kernel();
        assert_eq!(dec.filt(-n - 1, n).dim(), c.dim(n));
        assert!(dec.filt(-n, n).same_as(&cycles));
        assert!(dec.filt(-n + 1, n).is_zero());
    }
}

#[test]
fn decalage_of_zero_is_zero() {
    let z = Arc::new(CochainComplex::zero(f5()));
    let dec = decalage(&FilteredComplex::trivial(z.clone(), 0));
    assert_eq!(dec.base().total_dim(), 0);
}

/// `E_r^{p,q}(Dec F) ≅ E_{r+1}^{2p+q, -p}(F)` for `r >= 1`.
#[test]
fn decalage_shifts_pages() {
    let f = f5();
    let mut rng = seeded(77);
    for _ in 0..8 {
        let fc = random_filtered_complex(f, 0, 3, 3, &mut rng);
        let dec = decalage(&fc);
        for r in 1..4usize {
            let ed = er_page(&dec, r);
            let ef = er_page(&fc, r + 1);
            for n in fc.base().degrees() {
                assert_eq!(ed.total_dim(n), ef.total_dim(n), "r = {r}, n = {n}");
                for p in dec.k_min()..=dec.k_max() {
                    let q = n - p;
                    assert_eq!(ed.dim(p, q), ef.dim(2 * p + q, -p), "r = {r}, (p, q) = ({p}, {q})");
                }
            }
        }
    }
}

/// `Dec(s, δ_{r+1}) = (s, δ_r) Dec` as subspaces, below the truncation degree.
#[test]
fn decalage_interchanges_with_delta() {
    for seed in 0..5 {
        let x = random_dk(200 + seed, f5());
        let top = 4;
        let dec_levels = x.map_levels(decalage).unwrap();
        for r in 0..3 {
            let lhs = decalage(&filtered_simple(&x, r + 1, top).unwrap());
            let rhs = filtered_simple(&dec_levels, r, top).unwrap();
            assert_eq!(*lhs.base(), *rhs.base());
            let lo = lhs.base().lo();
            assert!(lhs.mismatches(&rhs, lo..top).is_empty(), "seed {seed}, r = {r}");
        }
    }
}

#[test]
fn filtered_axioms_hold() {
    for r in 0..2 {
        let base = AxiomParams { trials: 4, ..FilteredAxiomParams::default().base };
        let report = check_filtered_axioms(2024 + r as u64, &FilteredAxiomParams { base, r }, Exec::Parallel);
        assert!(report.all_pass(), "r = {r}: {:?}", report.failures());
    }
}

#[test]
fn filtered_axioms_are_deterministic() {
    let params = FilteredAxiomParams { base: AxiomParams { trials: 2, ..FilteredAxiomParams::default().base }, r: 1 };
    assert_eq!(check_filtered_axioms(9, &params, Exec::Sequential), check_filtered_axioms(9, &params, Exec::Parallel));
}

