//! Property tests for the invariants of every module, driven by seeds of the
//! library's reproducible generators.

use std::collections::BTreeMap;
use std::sync::Arc;

use godex::complexes::{betti, biproduct, is_quis, is_quis_by_induced_maps, ChainMap, CochainComplex};
use godex::exactlin::{Field, Matrix, Scalar};
use godex::exec::Exec;
use godex::filtered::{er_page, random_filtered_complex, spectral_sequence};
use godex::godement::{derived_sections, derived_sections_by_products, equivalence_check, hypercohomology_sheaf, thomason_check_of, EquivalenceKind};
use godex::oracle::{holim_replacement_normalized, holim_replacement_on};
use godex::random::{random_complex, random_matrix, seeded};
use godex::site::{random_sheaf, sections, up_sets, Poset, SheafBounds};
use proptest::prelude::*;

const P: u32 = 7;

fn field(rationals: bool) -> Field {
    if rationals {
        Field::Rationals
    } else {
        Field::Prime(P)
    }
}

/// Rank over `F_p` by plain Gaussian elimination on residues.
fn rank_mod_p(m: &Matrix, p: u64) -> usize {
    let mut rows: Vec<Vec<u64>> = m
        .to_rows()
        .into_iter()
        .map(|r| {
            r.into_iter()
                .map(|s| match s {
                    Scalar::Modular(v) => v as u64,
                    Scalar::Rational(_) => unreachable!(),
                })
                .collect()
        })
        .collect();
    let inv = |a: u64| (1..p).find(|b| a * b % p == 1).unwrap();
    let mut rank = 0;
    for col in 0..m.cols() {
        let Some(piv) = (rank..rows.len()).find(|&i| rows[i][col] != 0) else { continue };
        rows.swap(rank, piv);
        let c = inv(rows[rank][col]);
        let pivot: Vec<u64> = rows[rank].iter().map(|v| v * c % p).collect();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && row[col] != 0 {
                let f = row[col];
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x = (*x + p * p - f * y % p) % p;
                }
            }
        }
        rows[rank] = pivot;
        rank += 1;
    }
    rank
}

fn nonzero_betti(c: &CochainComplex) -> BTreeMap<i32, usize> {
    betti(c).into_iter().filter(|(_, b)| *b > 0).collect()
}

fn small_poset(kind: u8, seed: u64) -> Poset {
    match kind % 4 {
        0 => Poset::sierpinski(),
        1 => Poset::chain(3),
        2 => Poset::pseudocircle(),
        _ => Poset::random(4, seed),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rank_nullity_and_residues(seed: u64, rows in 0usize..7, cols in 0usize..7, rationals: bool) {
        let f = field(rationals);
        let m = random_matrix(f, rows, cols, &mut seeded(seed));
        prop_assert_eq!(m.kernel().dim() + m.rank(), cols);
        prop_assert_eq!(m.image().dim(), m.rank());
        if !rationals {
            prop_assert_eq!(m.rank(), rank_mod_p(&m, P as u64));
            let prod = m.mul(&m.transpose());
            for r in prod.to_rows() {
                for s in r {
                    prop_assert!(matches!(s, Scalar::Modular(v) if v < P));
                }
            }
        }
    }

    #[test]
    fn complexes_square_to_zero_and_keep_euler_characteristic(seed: u64, rationals: bool, lo in -2i32..2, len in 0i32..4) {
        let c = random_complex(field(rationals), lo, lo + len, 3, &mut seeded(seed));
        for n in c.degrees() {
            prop_assert!(c.diff(n + 1).mul(&c.diff(n)).is_zero());
        }
        let chi: i64 = betti(&c).iter().map(|(n, b)| if n % 2 == 0 { *b as i64 } else { -(*b as i64) }).sum();
        prop_assert_eq!(chi, c.euler_characteristic());
    }

    /// Quasi-isomorphisms compose, and two out of three determines the third.
    #[test]
    fn quis_is_closed_under_composition_and_two_of_three(seed: u64) {
        let f = Field::Prime(P);
        let mut rng = seeded(seed);
        let a = Arc::new(random_complex(f, 0, 2, 2, &mut rng));
        let e = Arc::new(random_complex(f, 0, 2, 2, &mut rng));
        let b = biproduct(&a, &e).unwrap();
        let c = (seed % (P as u64 - 1)) as i64 + 1;
        let auto = ChainMap::from_fn(a.clone(), a.clone(), |n| Matrix::identity(f, a.dim(n)).scale(c)).unwrap();
        let g = b.projections[0].clone();
        let i = b.inclusions[0].clone();
        let gi = g.compose(&i);
        prop_assert!(is_quis(&gi).flag);
        let e_acyclic = betti(&e).values().all(|v| *v == 0);
        prop_assert_eq!(is_quis(&g).flag, e_acyclic);
        prop_assert_eq!(is_quis(&i).flag, e_acyclic);
        prop_assert_eq!(is_quis(&g).flag, is_quis_by_induced_maps(&g).flag);
        prop_assert!(is_quis(&auto).flag);
        prop_assert_eq!(is_quis(&auto.compose(&g)).flag, is_quis(&g).flag);
    }

    #[test]
    fn sections_over_minimal_opens_are_stalks(seed: u64, kind: u8, rationals: bool) {
        let p = Arc::new(small_poset(kind, seed));
        let bounds = SheafBounds { field: field(rationals), ..SheafBounds::default() };
        let f = random_sheaf(p.clone(), &bounds, seed);
        for x in p.elements() {
            let s = sections(&f, &p.up(x)).unwrap();
            for n in f.stalk(x).degrees() {
                prop_assert_eq!(s.complex.dim(n), f.stalk(x).dim(n));
            }
            prop_assert_eq!(nonzero_betti(&s.complex), nonzero_betti(f.stalk(x)));
        }
    }

    /// `E_{r+1} = H(E_r, d_r)` and `E_∞` adds up to the cohomology of the base.
    #[test]
    fn pages_are_coherent_and_converge(seed: u64, rationals: bool) {
        let fc = random_filtered_complex(field(rationals), 0, 3, 3, &mut seeded(seed));
        let width = (fc.k_max() - fc.k_min()) as usize;
        let pages = spectral_sequence(&fc, width + 2);
        for r in 0..pages.len() - 1 {
            for ((p, q), dim) in pages[r + 1].terms() {
                let out = pages[r].differential(p, q).rank();
                let inc = pages[r].differential(p - r as i32, q + r as i32 - 1).rank();
                prop_assert_eq!(dim + out + inc, pages[r].dim(p, q), "r = {}, ({}, {})", r, p, q);
            }
        }
        let last = pages.last().unwrap();
        prop_assert_eq!(last.terms(), er_page(&fc, width + 3).terms());
        let b = betti(fc.base());
        for n in fc.base().degrees() {
            prop_assert_eq!(last.total_dim(n), b.get(&n).copied().unwrap_or(0));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    /// Godement, the product formula and both cosimplicial replacements agree on every open.
    #[test]
    fn derived_sections_agree_with_oracles(seed: u64, kind: u8) {
        let p = Arc::new(small_poset(kind, seed));
        let f = Arc::new(random_sheaf(p.clone(), &SheafBounds::default(), seed));
        let top = 4;
        let h = hypercohomology_sheaf(&f, top, Exec::Sequential).unwrap();
        for u in up_sets(&p).unwrap().into_iter().filter(|u| !u.is_empty()) {
            let rg = h.derived_sections(&u).unwrap();
            let cert = rg.certified_degree;
            let cut = |c: &CochainComplex| betti(c).into_iter().filter(|(n, b)| *n <= cert && *b > 0).collect::<BTreeMap<_, _>>();
            prop_assert_eq!(&rg.betti, &derived_sections_by_products(&f, &u, top).unwrap().betti);
            prop_assert_eq!(&rg.betti, &cut(&holim_replacement_on(&f, &u, top)));
            prop_assert_eq!(&rg.betti, &cut(&holim_replacement_normalized(&f, &u)));
        }
    }

    /// `ρ_F` is a local equivalence, `ρ_{ℍ_X F}` satisfies descent, and `ℍ_X` does not change `ℝΓ`.
    #[test]
    fn hypercohomology_is_idempotent_up_to_global_equivalence(seed: u64, kind: u8) {
        let p = Arc::new(small_poset(kind, seed));
        let f = Arc::new(random_sheaf(p, &SheafBounds::default(), seed));
        let top = 4;
        let h = hypercohomology_sheaf(&f, top, Exec::Sequential).unwrap();
        prop_assert!(equivalence_check(&h.rho, EquivalenceKind::Local, None, Exec::Sequential).unwrap().verdict);
        prop_assert!(thomason_check_of(&h, Exec::Sequential).unwrap().verdict);
        let whole = godex::site::OpenSet::whole(f.poset());
        prop_assert_eq!(
            derived_sections(&f, &whole, top, Exec::Sequential).unwrap().betti,
            derived_sections(&h.h, &whole, top, Exec::Sequential).unwrap().betti
        );
    }
}
