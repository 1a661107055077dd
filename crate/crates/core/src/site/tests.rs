use std::collections::BTreeMap;
use std::sync::Arc;

use super::*;
use crate::complexes::{ChainMap, CochainComplex};
use crate::exactlin::{Field, Matrix};
use crate::random::{random_complex, seeded};

const F5: Field = Field::Prime(5);

fn sample_posets() -> Vec<Arc<Poset>> {
    [Poset::point(), Poset::sierpinski(), Poset::chain(3), Poset::pseudocircle(), Poset::pseudo_sphere(), Poset::antichain(2)]
        .into_iter()
        .map(Arc::new)
        .collect()
}

fn bounds() -> SheafBounds {
    SheafBounds { field: F5, max_dim: 2, lo: 0, hi: 1, pieces: 5 }
}

#[test]
fn open_counts() {
    assert_eq!(up_sets(&Poset::antichain(2)).unwrap().len(), 4);
    let s = up_sets(&Poset::sierpinski()).unwrap();
    assert_eq!(s.len(), 3);
    assert_eq!(s[1].members(), &[1]);
    assert_eq!(up_sets(&Poset::pseudocircle()).unwrap().len(), 7);
    assert!(matches!(up_sets(&Poset::antichain(13)), Err(SiteError::TooLarge { .. })));
}

#[test]
fn opens_match_a_brute_force_filter() {
    for p in sample_posets() {
        let n = p.len();
        let brute = (0u32..1 << n)
            .filter(|m| (0..n).all(|x| m >> x & 1 == 0 || (0..n).all(|y| !p.leq(x, y) || m >> y & 1 == 1)))
            .count();
        assert_eq!(up_sets(&p).unwrap().len(), brute);
    }
}

#[test]
fn relation_axioms_are_verified() {
    let names = vec!["a".to_string(), "b".to_string()];
    assert!(Poset::new(names.clone(), &[(0, 0), (1, 1), (0, 1), (1, 0)]).is_err());
    assert!(Poset::new(names.clone(), &[(0, 0), (0, 1)]).is_err());
    assert!(Poset::from_covers(names, &[(0, 1), (1, 0)]).is_err());
    let three: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
    assert!(Poset::new(three, &[(0, 0), (1, 1), (2, 2), (0, 1), (1, 2)]).is_err());
}

#[test]
fn non_open_sets_are_rejected() {
    let p = Poset::sierpinski();
    assert!(matches!(OpenSet::new(&p, [0]), Err(SiteError::NotOpen(_))));
}

/// Sections by brute force: kernel of all constraints `r_{x→y} a_x = a_y` over `U`.
fn brute_force_dims(f: &Sheaf, u: &OpenSet) -> Vec<usize> {
    let p = f.poset();
    let (lo, hi) = f.degree_range();
    (lo..=hi)
        .map(|n| {
            let sizes: Vec<usize> = u.members().iter().map(|&x| f.stalk(x).dim(n)).collect();
            let total: usize = sizes.iter().sum();
            let mut rows = Vec::new();
            for (i, &x) in u.members().iter().enumerate() {
                for (j, &y) in u.members().iter().enumerate() {
                    if p.lt(x, y) {
                        let r = f.restriction(x, y).component(n);
                        let id = Matrix::identity(F5, f.stalk(y).dim(n)).neg();
                        let mut sz = sizes.clone();
                        if sz.is_empty() {
                            sz.push(0);
                        }
                        rows.push(Matrix::from_blocks(F5, &[f.stalk(y).dim(n)], &sz, [(0, i, &r), (0, j, &id)]));
                    }
                }
            }
            if rows.is_empty() {
                total
            } else {
                total - Matrix::vstack(F5, total, &rows.iter().collect::<Vec<_>>()).rank()
            }
        })
        .collect()
}

#[test]
fn sections_agree_with_the_full_constraint_system() {
    for (k, p) in sample_posets().into_iter().enumerate() {
        for seed in 0..4 {
            let f = random_sheaf(p.clone(), &bounds(), 100 * k as u64 + seed);
            let (lo, hi) = f.degree_range();
            for u in up_sets(&p).unwrap() {
                let s = sections(&f, &u).unwrap();
                let dims: Vec<usize> = (lo..=hi).map(|n| s.complex.dim(n)).collect();
                assert_eq!(dims, brute_force_dims(&f, &u), "{:?} {}", p, u.label(&p));
            }
        }
    }
}

#[test]
fn minimal_open_gives_the_stalk_exactly() {
    let p = Arc::new(Poset::pseudocircle());
    let f = random_sheaf(p.clone(), &bounds(), 7);
    for x in p.elements() {
        let s = sections(&f, &p.up(x)).unwrap();
        assert_eq!(*s.complex, **f.stalk(x));
        assert!(s.projection(&f, x).is_identity());
    }
}

#[test]
fn constant_sheaf_on_connected_opens() {
    let mut rng = seeded(1);
    let c = Arc::new(random_complex(F5, 0, 2, 2, &mut rng));
    let p = Arc::new(Poset::pseudocircle());
    let f = constant_sheaf(p.clone(), c.clone());
    let whole = sections(&f, &OpenSet::whole(&p)).unwrap();
    assert_eq!(*whole.complex, *c);
    // {x, y} is disconnected: two copies
    let xy = OpenSet::new(&p, [2, 3]).unwrap();
    let s = sections(&f, &xy).unwrap();
    assert_eq!(s.complex.total_dim(), 2 * c.total_dim());
    assert_eq!(sections(&f, &OpenSet::empty()).unwrap().complex.total_dim(), 0);
}

#[test]
fn skyscraper_stalks_and_sections() {
    let d = Arc::new(CochainComplex::concentrated(F5, 0, 2));
    let p = Arc::new(Poset::sierpinski());
    let top = skyscraper(p.clone(), 1, d.clone()).unwrap();
    assert_eq!((top.stalk(0).total_dim(), top.stalk(1).total_dim()), (2, 2));
    let bottom = skyscraper(p.clone(), 0, d.clone()).unwrap();
    assert_eq!((bottom.stalk(0).total_dim(), bottom.stalk(1).total_dim()), (2, 0));
    let q = Arc::new(Poset::pseudo_sphere());
    for x in q.elements() {
        let s = skyscraper(q.clone(), x, d.clone()).unwrap();
        for u in up_sets(&q).unwrap() {
            let expected = if u.contains(x) { 2 } else { 0 };
            assert_eq!(sections(&s, &u).unwrap().complex.total_dim(), expected);
        }
    }
    assert!(matches!(skyscraper(p, 5, d), Err(SiteError::UnknownElement(_))));
}

#[test]
fn equalizer_condition_holds_for_every_cover() {
    let p = Arc::new(Poset::pseudocircle());
    let f = random_sheaf(p.clone(), &bounds(), 3);
    let opens = up_sets(&p).unwrap();
    for u in &opens {
        assert!(check_sheaf_equalizer(&f, u, std::slice::from_ref(u)).unwrap());
        let inside: Vec<OpenSet> = opens.iter().filter(|v| v.is_subset(u) && *v != u).cloned().collect();
        let union = inside.iter().fold(OpenSet::empty(), |a, v| a.union(v));
        if union == *u {
            assert!(check_sheaf_equalizer(&f, u, &inside).unwrap(), "{}", u.label(&p));
        }
    }
    let whole = OpenSet::whole(&p);
    let c = constant_sheaf(p.clone(), Arc::new(CochainComplex::concentrated(F5, 0, 1)));
    assert!(check_sheaf_equalizer(&c, &whole, &[p.up(0), p.up(1)]).unwrap());
    assert!(matches!(check_sheaf_equalizer(&c, &whole, &[p.up(0)]), Err(SiteError::NotACover(_))));
}

#[test]
fn broken_functoriality_is_rejected() {
    let p = Arc::new(Poset::chain(3));
    let c = Arc::new(CochainComplex::concentrated(F5, 0, 1));
    let id = ChainMap::identity(c.clone());
    let twice = ChainMap::from_fn(c.clone(), c.clone(), |_| Matrix::identity(F5, 1).scale(2)).unwrap();
    let r: BTreeMap<(usize, usize), ChainMap> = [((0, 1), id.clone()), ((1, 2), id.clone()), ((0, 2), twice)].into();
    assert!(matches!(Sheaf::new(p, vec![c.clone(); 3], r), Err(SiteError::NotASheaf(_))));
}

#[test]
fn random_sheaves_are_reproducible_and_functorial() {
    let p = Arc::new(Poset::pseudo_sphere());
    let a = random_sheaf(p.clone(), &bounds(), 42);
    let b = random_sheaf(p.clone(), &bounds(), 42);
    assert_eq!(a, b);
    let rebuilt = Sheaf::new(p.clone(), a.stalks().to_vec(), a.restrictions().clone()).unwrap();
    assert_eq!(rebuilt, a);
    for x in p.elements() {
        for n in a.stalk(x).degrees() {
            assert!(a.stalk(x).dim(n) <= 2);
        }
    }
}

#[test]
fn covers_determine_the_sheaf() {
    let p = Arc::new(Poset::pseudo_sphere());
    let f = random_sheaf(p.clone(), &bounds(), 5);
    let covers: BTreeMap<(usize, usize), ChainMap> = p.covers().into_iter().map(|(x, y)| ((x, y), f.restriction(x, y))).collect();
    assert_eq!(Sheaf::from_covers(p, f.stalks().to_vec(), covers).unwrap(), f);
}

/// `F -> x⁎F_x`, with component `r_{y→x}` at every `y ≤ x`.
fn unit_at(f: &Arc<Sheaf>, x: usize) -> SheafMap {
    let sky = Arc::new(skyscraper(f.poset().clone(), x, f.stalk(x).clone()).unwrap());
    let comps = f
        .poset()
        .elements()
        .map(|y| if f.poset().leq(y, x) { f.restriction(y, x) } else { ChainMap::zero(f.stalk(y).clone(), sky.stalk(y).clone()) })
        .collect();
    SheafMap::new(f.clone(), sky, comps).unwrap()
}

#[test]
fn skyscraper_unit_is_a_sheaf_map() {
    let p = Arc::new(Poset::pseudocircle());
    let f = Arc::new(random_sheaf(p.clone(), &bounds(), 9));
    for x in p.elements() {
        assert!(unit_at(&f, x).component(x).is_identity());
    }
}

#[test]
fn sections_are_functorial() {
    let p = Arc::new(Poset::pseudocircle());
    let f = Arc::new(random_sheaf(p.clone(), &bounds(), 11));
    let x = 2;
    let eta = unit_at(&f, x);
    let sky = eta.target().clone();
    let back = unit_at(&sky, x);
    let both = back.compose(&eta);
    for u in up_sets(&p).unwrap() {
        let (a, b, c) = (sections(&f, &u).unwrap(), sections(&sky, &u).unwrap(), sections(back.target(), &u).unwrap());
        let lhs = sections_map(&both, &a, &c);
        let rhs = sections_map(&back, &b, &c).compose(&sections_map(&eta, &a, &b));
        assert!(lhs.same_components(&rhs));
        assert!(sections_map(&SheafMap::identity(f.clone()), &a, &a).is_identity());
    }
}

#[test]
fn direct_images_along_identity_and_collapse() {
    let p = Arc::new(Poset::pseudocircle());
    let f = random_sheaf(p.clone(), &bounds(), 4);
    let id = direct_image(&MonotoneMap::identity(p.clone()), &f).unwrap();
    for x in p.elements() {
        assert_eq!(*id.stalk(x), *f.stalk(x));
    }
    let pt = direct_image(&MonotoneMap::collapse(p.clone()), &f).unwrap();
    assert_eq!(**pt.stalk(0), *sections(&f, &OpenSet::whole(&p)).unwrap().complex);
}

#[test]
fn direct_image_along_an_inclusion() {
    // ↑a = {a, x, y} inside the pseudocircle, as the poset a < x, a < y
    let src = Arc::new(Poset::from_covers(vec!["a".into(), "x".into(), "y".into()], &[(0, 1), (0, 2)]).unwrap());
    let q = Arc::new(Poset::pseudocircle());
    let inc = MonotoneMap::new(src.clone(), q.clone(), vec![0, 2, 3]).unwrap();
    let f = random_sheaf(src.clone(), &bounds(), 6);
    let g = direct_image(&inc, &f).unwrap();
    for y in q.elements() {
        let pre = inc.preimage(&q.up(y));
        assert_eq!(g.stalk(y).total_dim(), brute_force_dims(&f, &pre).iter().sum::<usize>());
    }
    assert!(MonotoneMap::new(q.clone(), src, vec![1, 0, 0, 0]).is_err());
}

#[test]
fn random_posets_are_reproducible_orders() {
    for seed in 0..20 {
        let p = Poset::random(5, seed);
        assert_eq!(p, Poset::random(5, seed));
        assert_eq!(p.names()[4], "x4");
        for x in p.elements() {
            assert!(p.leq(x, x));
            for y in p.elements() {
                if p.lt(x, y) {
                    assert!(x < y && !p.leq(y, x));
                }
                for z in p.elements() {
                    if p.leq(x, y) && p.leq(y, z) {
                        assert!(p.leq(x, z));
                    }
                }
            }
        }
    }
    let shapes: std::collections::BTreeSet<usize> = (0..20).map(|s| Poset::random(5, s).covers().len()).collect();
    assert!(shapes.len() > 1);
}
