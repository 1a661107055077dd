use std::collections::BTreeMap;
use std::sync::Arc;

use super::*;
use crate::complexes::{certified_betti, Degree};
use crate::exec::Exec;
use crate::godement::{derived_sections, derived_sections_by_products};
use crate::random::{random_complex, seeded};
use crate::site::{constant_sheaf, random_sheaf, up_sets, SheafBounds};

const F5: Field = Field::Prime(5);

fn posets() -> Vec<Arc<Poset>> {
    vec![
        Arc::new(Poset::point()),
        Arc::new(Poset::sierpinski()),
        Arc::new(Poset::chain(3)),
        Arc::new(Poset::pseudocircle()),
        Arc::new(Poset::pseudo_sphere()),
    ]
}

fn nonzero(b: BTreeMap<Degree, usize>) -> BTreeMap<Degree, usize> {
    b.into_iter().filter(|(_, v)| *v > 0).collect()
}

fn upto(b: BTreeMap<Degree, usize>, top: Degree) -> BTreeMap<Degree, usize> {
    b.into_iter().filter(|(n, v)| *v > 0 && *n <= top).collect()
}

fn unit() -> CochainComplex {
    CochainComplex::concentrated(F5, 0, 1)
}

#[test]
fn chains_are_counted_correctly() {
    let p = Poset::chain(3);
    assert_eq!(chains_of(&p, &[0, 1, 2], 1, true).len(), 3);
    assert_eq!(chains_of(&p, &[0, 1, 2], 2, true), vec![vec![0, 1, 2]]);
    // Weak chains of length p + 1 in a 3-chain: multisets of size p + 1.
    assert_eq!(chains_of(&p, &[0, 1, 2], 1, false).len(), 6);
    assert_eq!(chains_of(&p, &[0, 1, 2], 2, false).len(), 10);
}

#[test]
fn nerve_faces_are_simplices() {
    for p in posets() {
        let nerve = NerveComplex::new(&p, F5);
        for (dim, simplices) in &nerve.simplices {
            for s in simplices {
                assert!(s.windows(2).all(|w| p.lt(w[0], w[1])));
                if *dim == 0 {
                    continue;
                }
                for k in 0..s.len() {
                    let mut face = s.clone();
                    face.remove(k);
                    assert!(nerve.simplices[&(dim - 1)].contains(&face));
                }
            }
        }
        nerve.cochains();
    }
}

#[test]
fn nerve_cohomology_of_the_standard_posets() {
    let cases: [(Poset, &[(Degree, usize)]); 5] = [
        (Poset::point(), &[(0, 1)]),
        (Poset::sierpinski(), &[(0, 1)]),
        (Poset::chain(3), &[(0, 1)]),
        (Poset::pseudocircle(), &[(0, 1), (1, 1)]),
        (Poset::pseudo_sphere(), &[(0, 1), (2, 1)]),
    ];
    for (p, want) in cases {
        let want: BTreeMap<Degree, usize> = want.iter().copied().collect();
        assert_eq!(nonzero(betti(&NerveComplex::new(&p, F5).cochains())), want);
        assert_eq!(constant_cohomology(&p, F5, &unit(), 6), want);
        // Degenerate simplices contribute nothing below the top dimension.
        let weak = NerveComplex::unnormalized(&p, F5, 5).cochains();
        assert_eq!(upto(betti(&weak), 4), want);
    }
}

#[test]
fn pseudocircle_nerve_is_a_square() {
    let nerve = NerveComplex::new(&Poset::pseudocircle(), F5);
    assert_eq!(nerve.count(0), 4);
    assert_eq!(nerve.count(1), 4);
    assert_eq!(nerve.dimension(), 1);
}

#[test]
fn constant_cohomology_with_complex_coefficients() {
    let mut rng = seeded(3);
    for p in posets() {
        for _ in 0..3 {
            let c = random_complex(F5, 0, 2, 2, &mut rng);
            let base = constant_cohomology(&p, F5, &unit(), 8);
            let want: BTreeMap<Degree, usize> = {
                let mut m = BTreeMap::new();
                for (a, x) in &base {
                    for (b, y) in nonzero(betti(&c)) {
                        *m.entry(a + b).or_insert(0) += x * y;
                    }
                }
                m
            };
            assert_eq!(constant_cohomology(&p, F5, &c, 8), want);
        }
    }
}

#[test]
fn replacement_on_the_point_is_the_stalk() {
    let p = Arc::new(Poset::point());
    for seed in 0..4 {
        let f = random_sheaf(p.clone(), &SheafBounds::default(), seed);
        let h = holim_replacement(&f, 5);
        assert_eq!(h.certified_degree(), Some(4));
        assert_eq!(upto(certified_betti(&h), 4), nonzero(betti(f.stalk(0))));
    }
}

#[test]
fn replacement_of_constant_sheaves_matches_the_nerve() {
    let mut rng = seeded(8);
    for p in posets() {
        let c = Arc::new(random_complex(F5, 0, 1, 2, &mut rng));
        for coeff in [Arc::new(unit()), c] {
            let f = constant_sheaf(p.clone(), coeff.clone());
            let want = constant_cohomology(&p, F5, &coeff, 5);
            assert_eq!(nonzero(certified_betti(&holim_replacement(&f, 5))), want);
            assert_eq!(nonzero(betti(&holim_replacement_normalized(&f, &OpenSet::whole(&p)))), want);
        }
    }
}

#[test]
fn sierpinski_constant_is_acyclic() {
    let p = Arc::new(Poset::sierpinski());
    let f = constant_sheaf(p, Arc::new(unit()));
    assert_eq!(nonzero(certified_betti(&holim_replacement(&f, 4))), BTreeMap::from([(0, 1)]));
}

#[test]
fn normalized_and_unnormalized_replacements_agree() {
    for p in posets() {
        for seed in 0..3 {
            let f = random_sheaf(p.clone(), &SheafBounds::default(), 30 + seed);
            for u in up_sets(&p).unwrap() {
                let weak = holim_replacement_on(&f, &u, 5);
                let strict = holim_replacement_normalized(&f, &u);
                assert_eq!(nonzero(certified_betti(&weak)), upto(betti(&strict), 4), "open {}", u.label(&p));
            }
        }
    }
}

#[test]
fn replacement_agrees_with_godement() {
    for p in posets() {
        for seed in 0..4 {
            let f = Arc::new(random_sheaf(p.clone(), &SheafBounds::default(), 50 + seed));
            let whole = OpenSet::whole(&p);
            let godement = derived_sections(&f, &whole, 5, Exec::Sequential).unwrap();
            assert_eq!(nonzero(godement.betti), nonzero(certified_betti(&holim_replacement(&f, 5))));
            for u in up_sets(&p).unwrap() {
                let by_products = derived_sections_by_products(&f, &u, 5).unwrap();
                assert_eq!(nonzero(by_products.betti), nonzero(certified_betti(&holim_replacement_on(&f, &u, 5))));
            }
        }
    }
}

#[test]
fn empty_open_has_no_sections() {
    let p = Arc::new(Poset::sierpinski());
    let f = constant_sheaf(p, Arc::new(unit()));
    assert_eq!(holim_replacement_on(&f, &OpenSet::empty(), 4).total_dim(), 0);
    assert_eq!(holim_replacement_normalized(&f, &OpenSet::empty()).total_dim(), 0);
}
