use std::collections::BTreeMap;
use std::sync::Arc;

use super::*;
use crate::complexes::{betti, is_quis, ChainMap, CochainComplex, Degree};
use crate::exactlin::{Field, Matrix};
use crate::exec::Exec;
use crate::random::{random_complex, seeded};
use crate::site::{
    constant_sheaf, random_sheaf, sections, skyscraper, up_sets, MonotoneMap, OpenSet, Poset, Sheaf, SheafBounds,
    SheafMap, SiteError,
};

const F5: Field = Field::Prime(5);

fn small_posets() -> Vec<Arc<Poset>> {
    vec![
        Arc::new(Poset::point()),
        Arc::new(Poset::sierpinski()),
        Arc::new(Poset::chain(3)),
        Arc::new(Poset::pseudocircle()),
    ]
}

fn all_posets() -> Vec<Arc<Poset>> {
    let mut v = small_posets();
    v.push(Arc::new(Poset::pseudo_sphere()));
    v
}

fn sheaf(p: &Arc<Poset>, seed: u64) -> Arc<Sheaf> {
    Arc::new(random_sheaf(p.clone(), &SheafBounds::default(), seed))
}

fn constant_k(p: &Arc<Poset>) -> Arc<Sheaf> {
    Arc::new(constant_sheaf(p.clone(), Arc::new(CochainComplex::concentrated(F5, 0, 1))))
}

fn nonzero(b: BTreeMap<Degree, usize>) -> BTreeMap<Degree, usize> {
    b.into_iter().filter(|(_, v)| *v > 0).collect()
}

#[test]
fn weak_chains_are_lexicographic_and_complete() {
    let p = Poset::pseudocircle();
    for len in 0..3 {
        let got = weak_chains(&p, &[0, 1, 2, 3], len);
        let mut brute = Vec::new();
        let n = p.len();
        for code in 0..n.pow(len as u32 + 1) {
            let mut c = Vec::new();
            let mut k = code;
            for _ in 0..=len {
                c.push(k % n);
                k /= n;
            }
            c.reverse();
            if c.windows(2).all(|w| p.leq(w[0], w[1])) {
                brute.push(c);
            }
        }
        assert_eq!(got, brute);
    }
}

#[test]
fn triple_on_the_point_is_trivial() {
    let p = Arc::new(Poset::point());
    let f = sheaf(&p, 3);
    let t = godement_t(&f).unwrap();
    assert_eq!(**t.tf.stalk(0), **f.stalk(0));
    assert!(t.eta.component(0).is_identity());
    assert!(t.nu.component(0).is_identity());
    let r = godement_resolution(&f, 3);
    let g = r.g.at(0);
    for q in 0..=3 {
        assert_eq!(**g.level(q), **f.stalk(0));
        for i in 0..=q {
            if q > 0 {
                assert!(g.coface(q, i).is_identity());
            }
            if q < 3 {
                assert!(g.codegeneracy(q, i).is_identity());
            }
        }
    }
}

#[test]
fn triple_on_sierpinski_constant_sheaf() {
    let p = Arc::new(Poset::sierpinski());
    let f = constant_k(&p);
    let t = godement_t(&f).unwrap();
    let (c, o) = (p.index("c").unwrap(), p.index("o").unwrap());
    assert_eq!(t.tf.stalk(c).dim(0), 2);
    assert_eq!(t.tf.stalk(o).dim(0), 1);
    assert_eq!(t.eta.component(c).component(0), Matrix::from_i64(F5, 2, 1, &[1, 1]));
    assert_eq!(t.tf.restriction(c, o).component(0), Matrix::from_i64(F5, 1, 2, &[0, 1]));
}

#[test]
fn triple_laws_hold_on_random_sheaves() {
    for p in all_posets() {
        for seed in 0..4 {
            godement_t(&sheaf(&p, seed)).unwrap();
        }
    }
}

#[test]
fn broken_eta_violates_a_triple_law() {
    let p = Arc::new(Poset::sierpinski());
    let f = constant_k(&p);
    let mut t = godement_t(&f).unwrap();
    let comps: Vec<ChainMap> = t.eta.components().iter().map(|m| ChainMap::from_fn(m.source().clone(), m.target().clone(), |n| m.component(n).scale(2)).unwrap()).collect();
    t.eta = SheafMap::new(t.f.clone(), t.tf.clone(), comps).unwrap();
    assert!(matches!(t.check_laws(), Err(GodementError::TripleLaw(_))));
}

#[test]
fn chain_resolution_is_the_iterated_triple() {
    let p_max = 2;
    for p in small_posets() {
        for seed in 0..3 {
            let f = sheaf(&p, seed);
            let lit = iterated_resolution(&f, p_max);
            let r = godement_resolution(&f, p_max);
            for x in p.elements() {
                let g = r.g.at(x);
                assert!(lit.eta.component(x).same_components(&r.eta[x]));
                for q in 0..=p_max {
                    assert_eq!(**lit.powers[q + 1].stalk(x), **g.level(q));
                    if q > 0 {
                        for i in 0..=q {
                            assert!(lit.cofaces[q][i].component(x).same_components(g.coface(q, i)), "d^{i} level {q}");
                        }
                    }
                    if q < p_max {
                        for j in 0..=q {
                            assert!(lit.codegeneracies[q][j].component(x).same_components(g.codegeneracy(q, j)), "s^{j} level {q}");
                        }
                    }
                }
                for y in p.elements().filter(|&y| p.lt(x, y)) {
                    for q in 0..=p_max {
                        let a = lit.powers[q + 1].restriction(x, y);
                        assert!(a.same_components(r.g.restriction(x, y).level(q)));
                    }
                }
            }
        }
    }
}

#[test]
fn level_dimensions_count_weak_chains() {
    let p = Arc::new(Poset::pseudo_sphere());
    let f = sheaf(&p, 11);
    let r = godement_resolution(&f, 3);
    let n = p.len();
    for x in p.elements() {
        for lvl in 0..=3usize {
            for q in 0..=1 {
                let mut expected = 0;
                for code in 0..n.pow(lvl as u32 + 1) {
                    let mut c = vec![x];
                    let mut k = code;
                    for _ in 0..=lvl {
                        c.push(k % n);
                        k /= n;
                    }
                    if c.windows(2).all(|w| p.leq(w[0], w[1])) {
                        expected += f.stalk(*c.last().unwrap()).dim(q);
                    }
                }
                assert_eq!(r.g.at(x).level(lvl).dim(q), expected);
            }
        }
    }
}

#[test]
fn resolutions_satisfy_the_cosimplicial_identities() {
    for p in all_posets() {
        for seed in 0..2 {
            let r = godement_resolution(&sheaf(&p, seed), 3);
            r.check().unwrap();
            for lvl in 0..3 {
                let l = r.g.level(lvl);
                Sheaf::new(l.poset().clone(), l.stalks().to_vec(), l.restrictions().clone()).unwrap();
            }
            SheafMap::new(r.g.base().clone(), Arc::new(r.g.level(0)), r.eta.clone()).unwrap();
        }
    }
}

#[test]
fn extra_degeneracy_at_every_point_of_the_pseudocircle() {
    let p = Arc::new(Poset::pseudocircle());
    for seed in 0..4 {
        let f = sheaf(&p, seed);
        let top = 4;
        let r = godement_resolution(&f, levels_for(&f, top));
        for x in p.elements() {
            let rep = r.certify_extra_degeneracy(x, top).unwrap();
            assert!(rep.flag, "seed {seed} point {x}");
        }
    }
}

#[test]
fn corrupted_extra_degeneracy_is_rejected() {
    let p = Arc::new(Poset::sierpinski());
    let f = constant_k(&p);
    let r = godement_resolution(&f, 3);
    let c = p.index("c").unwrap();
    let mut coaug = r.extra_degeneracy(c);
    let m = &coaug.extra[1];
    coaug.extra[1] = ChainMap::from_fn(m.source().clone(), m.target().clone(), |n| m.component(n).scale(2)).unwrap();
    assert!(crate::cosimplicial::collapse_by_extra_degeneracy(r.g.at(c), &coaug, 3).is_err());
}

#[test]
fn hypercohomology_on_the_point() {
    let p = Arc::new(Poset::point());
    for seed in 0..4 {
        let f = sheaf(&p, seed);
        let h = hypercohomology_sheaf(&f, 4, Exec::Sequential).unwrap();
        assert!(is_quis(h.rho.component(0)).flag);
        let d = h.derived_sections(&OpenSet::whole(&p)).unwrap();
        assert_eq!(d.betti, nonzero(betti(f.stalk(0))));
        assert_eq!(d.certified_degree, 3);
    }
}

#[test]
fn hypercohomology_sheaf_is_a_sheaf_and_rho_a_sheaf_map() {
    for p in all_posets() {
        let f = sheaf(&p, 5);
        let h = hypercohomology_sheaf(&f, 4, Exec::Sequential).unwrap();
        let hs = Sheaf::new(p.clone(), h.h.stalks().to_vec(), h.h.restrictions().clone()).unwrap();
        SheafMap::new(f.clone(), Arc::new(hs), h.rho.components().to_vec()).unwrap();
        assert_eq!(h.h.certified_degree(), Some(3));
    }
}

#[test]
fn truncation_below_the_coefficients_is_rejected() {
    let p = Arc::new(Poset::sierpinski());
    let f = Arc::new(constant_sheaf(p, Arc::new(CochainComplex::concentrated(F5, 2, 1))));
    let err = hypercohomology_sheaf(&f, 1, Exec::Sequential).unwrap_err();
    assert_eq!(err, GodementError::InsufficientLevels { top: 1, needed: 2 });
}

#[test]
fn skyscrapers_are_acyclic() {
    let mut rng = seeded(21);
    for p in small_posets() {
        for x in p.elements() {
            let d = Arc::new(random_complex(F5, 0, 1, 2, &mut rng));
            let f = Arc::new(skyscraper(p.clone(), x, d.clone()).unwrap());
            let h = hypercohomology_sheaf(&f, 4, Exec::Sequential).unwrap();
            for u in up_sets(&p).unwrap() {
                let got = h.derived_sections(&u).unwrap().betti;
                let want = if u.contains(x) { nonzero(betti(&d)) } else { BTreeMap::new() };
                assert_eq!(got, want, "point {x} open {}", u.label(&p));
            }
        }
    }
}

#[test]
fn constant_coefficients_on_spheres() {
    let cases: [(Poset, &[(Degree, usize)]); 4] = [
        (Poset::pseudocircle(), &[(0, 1), (1, 1)]),
        (Poset::pseudo_sphere(), &[(0, 1), (2, 1)]),
        (Poset::sierpinski(), &[(0, 1)]),
        (Poset::antichain(3), &[(0, 3)]),
    ];
    for (p, want) in cases {
        let p = Arc::new(p);
        let want: BTreeMap<Degree, usize> = want.iter().copied().collect();
        let f = constant_k(&p);
        assert_eq!(derived_sections(&f, &OpenSet::whole(&p), 4, Exec::Sequential).unwrap().betti, want);
        assert_eq!(derived_sections_by_products(&f, &OpenSet::whole(&p), 4).unwrap().betti, want);
    }
}

#[test]
fn sections_of_the_hypercohomology_sheaf_match_the_product_formula() {
    for p in small_posets() {
        for seed in 0..3 {
            let f = sheaf(&p, seed);
            let h = hypercohomology_sheaf(&f, 4, Exec::Sequential).unwrap();
            for u in up_sets(&p).unwrap() {
                let generic = h.derived_sections(&u).unwrap();
                let product = derived_sections_by_products(&f, &u, 4).unwrap();
                assert_eq!(generic.betti, product.betti);
                for n in 0..=4 {
                    assert_eq!(generic.complex.dim(n), product.complex.dim(n), "degree {n}");
                }
            }
        }
    }
}

#[test]
fn rho_is_a_local_equivalence() {
    for p in all_posets() {
        for seed in 0..4 {
            let f = sheaf(&p, seed);
            let h = hypercohomology_sheaf(&f, 5, Exec::Sequential).unwrap();
            let rep = equivalence_check(&h.rho, EquivalenceKind::Local, None, Exec::Sequential).unwrap();
            assert!(rep.verdict && rep.witnesses.is_empty());
            assert_eq!(rep.certified_degree, Some(4));
        }
    }
}

#[test]
fn identity_is_a_local_and_global_equivalence() {
    for p in small_posets() {
        let f = sheaf(&p, 8);
        let id = SheafMap::identity(f);
        for kind in [EquivalenceKind::Local, EquivalenceKind::Global] {
            let rep = equivalence_check(&id, kind, None, Exec::Sequential).unwrap();
            assert!(rep.verdict);
            assert_eq!(rep.certified_degree, None);
        }
    }
}

#[test]
fn rho_of_the_constant_sheaf_on_the_pseudocircle_separates_w_from_s() {
    let p = Arc::new(Poset::pseudocircle());
    let h = hypercohomology_sheaf(&constant_k(&p), 4, Exec::Sequential).unwrap();
    assert!(equivalence_check(&h.rho, EquivalenceKind::Local, None, Exec::Sequential).unwrap().verdict);
    let g = equivalence_check(&h.rho, EquivalenceKind::Global, None, Exec::Sequential).unwrap();
    assert!(!g.verdict);
    assert_eq!(g.witnesses, vec![Witness { place: OpenSet::whole(&p).label(&p), degree: 1 }]);
}

#[test]
fn separation_witness_is_found_by_search() {
    let w = find_separation_witness(2024, 40, 4).unwrap().expect("a witness among 40 sheaves");
    assert!(w.local.verdict && !w.global.verdict);
}

#[test]
fn global_check_refuses_large_sites_without_opens() {
    let p = Arc::new(Poset::antichain(13));
    let f = constant_k(&p);
    let id = SheafMap::identity(f);
    let err = equivalence_check(&id, EquivalenceKind::Global, None, Exec::Sequential).unwrap_err();
    assert!(matches!(err, GodementError::Site(SiteError::TooLarge { .. })));
    let opens = vec![OpenSet::whole(&p), p.up(0)];
    assert!(equivalence_check(&id, EquivalenceKind::Global, Some(&opens), Exec::Sequential).unwrap().verdict);
}

#[test]
fn thomason_descent_of_the_hypercohomology_sheaf() {
    for p in small_posets() {
        for seed in 0..3 {
            let rep = thomason_check(&sheaf(&p, seed), 6, Exec::Sequential).unwrap();
            assert!(rep.verdict, "{:?}", rep.witnesses);
            assert_eq!(rep.certified_degree, Some(5));
        }
    }
}

#[test]
fn godement_sheaves_satisfy_descent_and_constant_ones_need_not() {
    for p in small_posets() {
        let f = sheaf(&p, 4);
        let tf = t_sheaf(&f);
        assert!(descent_check(&tf, 4, None, Exec::Sequential).unwrap().verdict);
    }
    let p = Arc::new(Poset::pseudocircle());
    let rep = descent_check(&constant_k(&p), 4, None, Exec::Sequential).unwrap();
    assert!(!rep.verdict);
}

#[test]
fn stalks_commute_with_the_simple() {
    for p in all_posets() {
        let h = hypercohomology_sheaf(&sheaf(&p, 9), 4, Exec::Sequential).unwrap();
        let rep = stalk_commutation_check(&h).unwrap();
        assert!(rep.verdict);
    }
}

#[test]
fn rho_is_natural_and_hyper_is_functorial() {
    let p = Arc::new(Poset::pseudocircle());
    for seed in 0..6 {
        let (_, f) = random_sheaf_map(&p, &SheafBounds::default(), 4, seed).unwrap();
        let hs = hypercohomology_sheaf(f.source(), 4, Exec::Sequential).unwrap();
        let ht = hypercohomology_sheaf(f.target(), 4, Exec::Sequential).unwrap();
        let hf = hyper_map(&f, &hs, &ht).unwrap();
        SheafMap::new(hs.h.clone(), ht.h.clone(), hf.components().to_vec()).unwrap();
        assert!(hf.compose(&hs.rho).same_components(&ht.rho.compose(&f)));
        let id = hyper_map(&SheafMap::identity(f.source().clone()), &hs, &hs).unwrap();
        assert!(id.components().iter().all(|c| c.is_identity()));
    }
}

#[test]
fn local_equivalences_are_detected_by_t_and_hyper() {
    let rows = localeq_suite(17, 12, 4, Exec::Sequential).unwrap();
    assert!(rows.iter().all(|r| r.agree()), "{:?}", rows.iter().filter(|r| !r.agree()).map(|r| (r.seed, r.kind, &r.poset, &r.local, &r.t_global, &r.h_global)).collect::<Vec<_>>());
    assert!(rows.iter().any(|r| r.local.verdict) && rows.iter().any(|r| !r.local.verdict));
}

#[test]
fn hyper_is_idempotent_up_to_global_equivalence() {
    for p in [Arc::new(Poset::sierpinski()), Arc::new(Poset::chain(3))] {
        let f = sheaf(&p, 2);
        let h = hypercohomology_sheaf(&f, 4, Exec::Sequential).unwrap();
        let hh = hypercohomology_sheaf(&h.h, 4, Exec::Sequential).unwrap();
        assert!(equivalence_check(&hh.rho, EquivalenceKind::Global, None, Exec::Sequential).unwrap().verdict);
        let h_rho = hyper_map(&h.rho, &h, &hh).unwrap();
        assert!(equivalence_check(&h_rho, EquivalenceKind::Global, None, Exec::Sequential).unwrap().verdict);
    }
}

#[test]
fn derived_direct_images() {
    let p = Arc::new(Poset::pseudocircle());
    let f = sheaf(&p, 13);
    let h = hypercohomology_sheaf(&f, 4, Exec::Sequential).unwrap();
    let id = derived_direct_image(&MonotoneMap::identity(p.clone()), &f, 4, Exec::Sequential).unwrap();
    for x in p.elements() {
        assert_eq!(nonzero(betti(id.stalk(x))), nonzero(betti(h.h.stalk(x))));
    }
    let point = derived_direct_image(&MonotoneMap::collapse(p.clone()), &f, 4, Exec::Sequential).unwrap();
    let global = h.derived_sections(&OpenSet::whole(&p)).unwrap().betti;
    assert_eq!(nonzero(betti(point.stalk(0))).into_iter().filter(|(n, _)| *n <= 3).collect::<BTreeMap<_, _>>(), global);

    // a, b ↦ c and x, y ↦ o
    let s = Arc::new(Poset::sierpinski());
    let (c, o) = (s.index("c").unwrap(), s.index("o").unwrap());
    let values: Vec<usize> = p.elements().map(|z| if ["a", "b"].contains(&p.name(z)) { c } else { o }).collect();
    let m = MonotoneMap::new(p.clone(), s.clone(), values).unwrap();
    let pushed = derived_direct_image(&m, &f, 4, Exec::Sequential).unwrap();
    for v in up_sets(&s).unwrap() {
        let via_image = nonzero(betti(&sections(&pushed, &v).unwrap().complex));
        let via_preimage = h.derived_sections(&m.preimage(&v)).unwrap().betti;
        let cut: BTreeMap<Degree, usize> = via_image.into_iter().filter(|(n, _)| *n <= 3).collect();
        assert_eq!(cut, via_preimage, "open {}", v.label(&s));
    }
}

#[test]
fn sequential_and_parallel_suites_agree() {
    let params = TheoremParams { per_poset: 2, top: 5, ..TheoremParams::default() };
    let a = theorem_suite(5, &params, Exec::Sequential).unwrap();
    let b = theorem_suite(5, &params, Exec::Parallel).unwrap();
    assert_eq!(a.len(), 10);
    for (x, y) in a.iter().zip(&b) {
        assert!(x.holds());
        assert_eq!((x.seed, &x.global_betti, &x.thomason), (y.seed, &y.global_betti, &y.thomason));
    }
}

fn alternating(terms: &BTreeMap<(i32, Degree), usize>) -> i64 {
    terms.iter().map(|((p, q), d)| if (p + q) % 2 == 0 { *d as i64 } else { -(*d as i64) }).sum()
}

#[test]
fn cohomology_sheaf_of_the_constant_sheaf() {
    let p = Arc::new(Poset::pseudocircle());
    let f = constant_k(&p);
    let h0 = cohomology_sheaf(&f, 0).unwrap();
    for x in p.elements() {
        assert_eq!(h0.stalk(x).dim(0), 1);
    }
    assert_eq!(cohomology_sheaf(&f, 1).unwrap().total_dim(), 0);
}

#[test]
fn descent_spectral_sequence_of_the_constant_pseudocircle() {
    let p = Arc::new(Poset::pseudocircle());
    let f = constant_k(&p);
    let ss = descent_spectral_sequence(&f, &OpenSet::whole(&p), 4, 5).unwrap();
    let want: BTreeMap<(i32, Degree), usize> = [((0, 0), 1), ((1, 0), 1)].into_iter().collect();
    assert_eq!(ss.certified_terms(2), want);
    for r in 3..=4 {
        assert_eq!(ss.certified_terms(r), want);
    }
}

#[test]
fn descent_spectral_sequence_of_one_row() {
    let mut rng = seeded(40);
    for p in small_posets() {
        let d = Arc::new(random_complex(F5, 1, 1, 2, &mut rng));
        let f = Arc::new(constant_sheaf(p.clone(), d.clone()));
        for u in up_sets(&p).unwrap() {
            let ss = descent_spectral_sequence(&f, &u, 3, 6).unwrap();
            let e2 = ss.certified_terms(2);
            assert!(e2.keys().all(|&(_, q)| q == 1), "{e2:?}");
            assert_eq!(e2, descent_e2_from_cohomology_sheaves(&f, &u, 6).unwrap());
            assert_eq!(ss.certified_terms(3), e2);
        }
    }
}

#[test]
fn descent_e2_matches_cohomology_sheaves_and_euler_characteristic() {
    for p in all_posets() {
        for seed in 0..3 {
            let f = sheaf(&p, 100 + seed);
            let (_, hi) = f.degree_range();
            let top = hi + 5;
            for u in up_sets(&p).unwrap() {
                let ss = descent_spectral_sequence(&f, &u, 4, top).unwrap();
                let e2 = ss.certified_terms(2);
                assert_eq!(e2, descent_e2_from_cohomology_sheaves(&f, &u, top).unwrap(), "open {}", u.label(&p));
                let rg = derived_sections_by_products(&f, &u, top).unwrap();
                let chi: i64 = rg.betti.iter().map(|(n, b)| if n % 2 == 0 { *b as i64 } else { -(*b as i64) }).sum();
                assert_eq!(alternating(&e2), chi);
                let einf = ss.certified_terms(4);
                for (n, b) in &rg.betti {
                    let total: usize = einf.iter().filter(|((a, q), _)| a + q == *n).map(|(_, d)| *d).sum();
                    assert_eq!(total, *b, "degree {n}");
                }
            }
        }
    }
}
