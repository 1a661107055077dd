use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng as _;

use super::{Poset, SiteError};
use crate::complexes::{ChainMap, CochainComplex, Degree};
use crate::exactlin::{Field, Matrix};
use crate::random::{random_complex, random_invertible, seeded};

/// A sheaf on the Alexandrov site of `poset`: a stalk `F_x` per element and
/// restrictions `r_{x→y} : F_x -> F_y` for `x ≤ y`.
#[derive(Clone, Debug)]
pub struct Sheaf {
    poset: Arc<Poset>,
    field: Field,
    stalks: Vec<Arc<CochainComplex>>,
    /// `x < y` only; `r_{x→x}` is the identity.
    restrictions: BTreeMap<(usize, usize), ChainMap>,
}

impl Sheaf {
    /// Restrictions are given for every pair `x < y`; functoriality is verified.
    pub fn new(
        poset: Arc<Poset>,
        stalks: Vec<Arc<CochainComplex>>,
        restrictions: BTreeMap<(usize, usize), ChainMap>,
    ) -> Result<Sheaf, SiteError> {
        let f = Sheaf::new_unchecked(poset, stalks, restrictions)?;
        f.check_functorial()?;
        Ok(f)
    }

    /// Restrictions given on covering pairs only and composed along chains.
    pub fn from_covers(
        poset: Arc<Poset>,
        stalks: Vec<Arc<CochainComplex>>,
        covers: BTreeMap<(usize, usize), ChainMap>,
    ) -> Result<Sheaf, SiteError> {
        let mut all: BTreeMap<(usize, usize), ChainMap> = BTreeMap::new();
        for &(x, y) in &poset.covers() {
            let m = covers
                .get(&(x, y))
                .ok_or_else(|| SiteError::NotASheaf(format!("no restriction for {} < {}", poset.name(x), poset.name(y))))?;
            all.insert((x, y), m.clone());
        }
        if let Some(&(x, y)) = covers.keys().find(|k| !all.contains_key(k)) {
            return Err(SiteError::NotASheaf(format!("{} < {} is not a covering relation", poset.name(x), poset.name(y))));
        }
        // longer intervals after shorter ones: compose through the first cover above x
        let mut pairs: Vec<(usize, usize)> =
            poset.elements().flat_map(|x| poset.elements().map(move |y| (x, y))).filter(|&(x, y)| poset.lt(x, y)).collect();
        let height = |x: usize, y: usize| poset.elements().filter(|&z| poset.leq(x, z) && poset.leq(z, y)).count();
        pairs.sort_by_key(|&(x, y)| height(x, y));
        for (x, y) in pairs {
            if all.contains_key(&(x, y)) {
                continue;
            }
            let z = poset.elements().find(|&z| all.contains_key(&(x, z)) && poset.covers().contains(&(x, z)) && poset.lt(z, y)).expect("a chain from x to y");
            let m = all[&(z, y)].compose(&all[&(x, z)]);
            all.insert((x, y), m);
        }
        Sheaf::new(poset, stalks, all)
    }

    fn new_unchecked(
        poset: Arc<Poset>,
        stalks: Vec<Arc<CochainComplex>>,
        restrictions: BTreeMap<(usize, usize), ChainMap>,
    ) -> Result<Sheaf, SiteError> {
        if stalks.len() != poset.len() {
            return Err(SiteError::NotASheaf(format!("{} stalks for {} elements", stalks.len(), poset.len())));
        }
        let field = stalks.first().map(|s| s.field()).unwrap_or(Field::Rationals);
        if stalks.iter().any(|s| s.field() != field) {
            return Err(SiteError::NotASheaf("stalks over different fields".into()));
        }
        let mut fixed = BTreeMap::new();
        for x in poset.elements() {
            for y in poset.elements() {
                if !poset.lt(x, y) {
                    continue;
                }
                let m = restrictions.get(&(x, y)).ok_or_else(|| {
                    SiteError::NotASheaf(format!("no restriction for {} < {}", poset.name(x), poset.name(y)))
                })?;
                if **m.source() != *stalks[x] || **m.target() != *stalks[y] {
                    return Err(SiteError::NotASheaf(format!(
                        "restriction {} → {} has the wrong endpoints",
                        poset.name(x),
                        poset.name(y)
                    )));
                }
                m.check_commutes()?;
                fixed.insert((x, y), m.retarget(stalks[x].clone(), stalks[y].clone()));
            }
        }
        if let Some(&(x, y)) = restrictions.keys().find(|&&(x, y)| !poset.lt(x, y)) {
            return Err(SiteError::NotASheaf(format!("restriction given for {} ≮ {}", poset.name(x), poset.name(y))));
        }
        Ok(Sheaf { poset, field, stalks, restrictions: fixed })
    }

    fn check_functorial(&self) -> Result<(), SiteError> {
        let p = &self.poset;
        for x in p.elements() {
            for y in p.elements() {
                for z in p.elements() {
                    if p.lt(x, y) && p.lt(y, z) {
                        let lhs = self.restrictions[&(y, z)].compose(&self.restrictions[&(x, y)]);
                        if !lhs.same_components(&self.restrictions[&(x, z)]) {
                            return Err(SiteError::NotASheaf(format!(
                                "r({}→{}) ∘ r({}→{}) ≠ r({}→{})",
                                p.name(y),
                                p.name(z),
                                p.name(x),
                                p.name(y),
                                p.name(x),
                                p.name(z)
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn poset(&self) -> &Arc<Poset> {
        &self.poset
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn stalk(&self, x: usize) -> &Arc<CochainComplex> {
        &self.stalks[x]
    }

    pub fn stalks(&self) -> &[Arc<CochainComplex>] {
        &self.stalks
    }

    /// `r_{x→y}`; panics unless `x ≤ y`.
    pub fn restriction(&self, x: usize, y: usize) -> ChainMap {
        if x == y {
            return ChainMap::identity(self.stalks[x].clone());
        }
        self.restrictions.get(&(x, y)).cloned().unwrap_or_else(|| panic!("restriction: {x} ≰ {y}"))
    }

    /// Smallest degree with a nonzero stalk entry.
    pub fn lower_bound(&self) -> Option<Degree> {
        self.stalks.iter().filter_map(|s| s.degrees().find(|n| s.dim(*n) > 0)).min()
    }

    pub fn upper_bound(&self) -> Option<Degree> {
        self.stalks.iter().filter_map(|s| s.degrees().rev().find(|n| s.dim(*n) > 0)).max()
    }

    /// Range of degrees stored by some stalk.
    pub fn degree_range(&self) -> (Degree, Degree) {
        let nonempty: Vec<_> = self.stalks.iter().filter(|s| !s.is_empty_range()).collect();
        if nonempty.is_empty() {
            return (0, -1);
        }
        (nonempty.iter().map(|s| s.lo()).min().unwrap(), nonempty.iter().map(|s| s.hi()).max().unwrap())
    }

    /// Top degree of a truncated construction, if any stalk carries one.
    pub fn truncated_at(&self) -> Option<Degree> {
        self.stalks.iter().filter_map(|s| s.truncated_at()).min()
    }

    pub fn certified_degree(&self) -> Option<Degree> {
        self.truncated_at().map(|t| t - 1)
    }

    pub fn total_dim(&self) -> usize {
        self.stalks.iter().map(|s| s.total_dim()).sum()
    }

    /// The same sheaf with every stalk replaced by an equal complex carrying
    /// the given endpoints (used when composing maps built separately).
    pub(crate) fn from_parts_unchecked(
        poset: Arc<Poset>,
        field: Field,
        stalks: Vec<Arc<CochainComplex>>,
        restrictions: BTreeMap<(usize, usize), ChainMap>,
    ) -> Sheaf {
        Sheaf { poset, field, stalks, restrictions }
    }

    pub(crate) fn restrictions(&self) -> &BTreeMap<(usize, usize), ChainMap> {
        &self.restrictions
    }
}

impl PartialEq for Sheaf {
    fn eq(&self, other: &Sheaf) -> bool {
        self.poset == other.poset
            && self.field == other.field
            && self.stalks == other.stalks
            && self.restrictions.iter().all(|(k, m)| other.restrictions.get(k).is_some_and(|n| m.same_components(n)))
    }
}

/// Stalkwise chain maps commuting with the restrictions.
#[derive(Clone, Debug)]
pub struct SheafMap {
    source: Arc<Sheaf>,
    target: Arc<Sheaf>,
    comps: Vec<ChainMap>,
}

impl SheafMap {
    pub fn new(source: Arc<Sheaf>, target: Arc<Sheaf>, comps: Vec<ChainMap>) -> Result<SheafMap, SiteError> {
        let f = SheafMap::new_unchecked(source, target, comps)?;
        f.check()?;
        Ok(f)
    }

    pub(crate) fn new_unchecked(
        source: Arc<Sheaf>,
        target: Arc<Sheaf>,
        comps: Vec<ChainMap>,
    ) -> Result<SheafMap, SiteError> {
        if source.poset != target.poset {
            return Err(SiteError::NotASheaf("sheaf map between different sites".into()));
        }
        if comps.len() != source.poset.len() {
            return Err(SiteError::NotASheaf(format!("{} components for {} elements", comps.len(), source.poset.len())));
        }
        let comps = comps
            .into_iter()
            .enumerate()
            .map(|(x, m)| {
                if **m.source() != *source.stalks[x] || **m.target() != *target.stalks[x] {
                    return Err(SiteError::NotASheaf(format!("component at {} has the wrong endpoints", source.poset.name(x))));
                }
                Ok(m.retarget(source.stalks[x].clone(), target.stalks[x].clone()))
            })
            .collect::<Result<_, _>>()?;
        Ok(SheafMap { source, target, comps })
    }

    fn check(&self) -> Result<(), SiteError> {
        let p = &self.source.poset;
        for x in p.elements() {
            self.comps[x].check_commutes()?;
        }
        for (&(x, y), r) in &self.source.restrictions {
            let lhs = self.target.restrictions[&(x, y)].compose(&self.comps[x]);
            let rhs = self.comps[y].compose(r);
            if !lhs.same_components(&rhs) {
                return Err(SiteError::NotASheafMap(format!("square {} → {} does not commute", p.name(x), p.name(y))));
            }
        }
        Ok(())
    }

    pub fn identity(f: Arc<Sheaf>) -> SheafMap {
        let comps = f.stalks.iter().map(|s| ChainMap::identity(s.clone())).collect();
        SheafMap { source: f.clone(), target: f, comps }
    }

    pub fn source(&self) -> &Arc<Sheaf> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Sheaf> {
        &self.target
    }

    pub fn component(&self, x: usize) -> &ChainMap {
        &self.comps[x]
    }

    pub fn components(&self) -> &[ChainMap] {
        &self.comps
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &SheafMap) -> SheafMap {
        let comps = self.comps.iter().zip(&first.comps).map(|(g, f)| g.compose(f)).collect();
        SheafMap { source: first.source.clone(), target: self.target.clone(), comps }
    }

    pub fn same_components(&self, other: &SheafMap) -> bool {
        self.comps.iter().zip(&other.comps).all(|(a, b)| a.same_components(b))
    }
}

/// `F_x = C` everywhere, identity restrictions.
pub fn constant_sheaf(poset: Arc<Poset>, c: Arc<CochainComplex>) -> Sheaf {
    let stalks = vec![c.clone(); poset.len()];
    let restrictions = pairs(&poset).into_iter().map(|k| (k, ChainMap::identity(c.clone()))).collect();
    Sheaf { field: c.field(), poset, stalks, restrictions }
}

fn pairs(p: &Poset) -> Vec<(usize, usize)> {
    p.elements().flat_map(|x| p.elements().map(move |y| (x, y))).filter(|&(x, y)| p.lt(x, y)).collect()
}

/// `x⁎D`: stalk `D` at every `y ≤ x`, zero elsewhere.
pub fn skyscraper(poset: Arc<Poset>, x: usize, d: Arc<CochainComplex>) -> Result<Sheaf, SiteError> {
    if x >= poset.len() {
        return Err(SiteError::UnknownElement(format!("#{x}")));
    }
    let zero = Arc::new(CochainComplex::zero(d.field()));
    let inside: Vec<bool> = poset.elements().map(|y| poset.leq(y, x)).collect();
    Ok(indicator(poset, &inside, &d, &zero))
}

/// `D` on a convex subset, zero elsewhere, identities inside.
fn indicator(poset: Arc<Poset>, inside: &[bool], d: &Arc<CochainComplex>, zero: &Arc<CochainComplex>) -> Sheaf {
    let stalks: Vec<Arc<CochainComplex>> =
        inside.iter().map(|&b| if b { d.clone() } else { zero.clone() }).collect();
    let restrictions = pairs(&poset)
        .into_iter()
        .map(|(y, z)| {
            let m = if inside[y] && inside[z] {
                ChainMap::identity(d.clone())
            } else {
                ChainMap::zero(stalks[y].clone(), stalks[z].clone())
            };
            ((y, z), m)
        })
        .collect();
    Sheaf { field: d.field(), poset, stalks, restrictions }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SheafBounds {
    pub field: Field,
    /// Largest stalk dimension in any degree.
    pub max_dim: usize,
    pub lo: Degree,
    pub hi: Degree,
    /// Number of interval summands tried.
    pub pieces: usize,
}

impl Default for SheafBounds {
    fn default() -> Self {
        SheafBounds { field: Field::Prime(5), max_dim: 2, lo: 0, hi: 1, pieces: 4 }
    }
}

/// Stalkwise direct sum of sheaves on the same site.
pub fn direct_sum(parts: &[Sheaf]) -> Sheaf {
    let first = &parts[0];
    let poset = first.poset.clone();
    let field = first.field;
    let stalks: Vec<Arc<CochainComplex>> = poset
        .elements()
        .map(|x| Arc::new(block_sum(field, &parts.iter().map(|f| f.stalks[x].as_ref()).collect::<Vec<_>>())))
        .collect();
    let restrictions = pairs(&poset)
        .into_iter()
        .map(|(x, y)| {
            let m = ChainMap::from_fn(stalks[x].clone(), stalks[y].clone(), |n| {
                let comps: Vec<Matrix> = parts.iter().map(|f| f.restrictions[&(x, y)].component(n)).collect();
                Matrix::block_diag(field, &comps.iter().collect::<Vec<_>>())
            })
            .expect("sum of chain maps");
            ((x, y), m)
        })
        .collect();
    Sheaf { poset, field, stalks, restrictions }
}

/// Degreewise direct sum; truncated at the lowest truncation among the parts.
pub(crate) fn block_sum(field: Field, parts: &[&CochainComplex]) -> CochainComplex {
    let nonempty: Vec<&&CochainComplex> = parts.iter().filter(|c| !c.is_empty_range()).collect();
    let trunc = parts.iter().filter_map(|c| c.truncated_at()).min();
    if nonempty.is_empty() {
        let z = CochainComplex::zero(field);
        return trunc.map_or(z.clone(), |t| z.truncate(t));
    }
    let lo = nonempty.iter().map(|c| c.lo()).min().unwrap();
    let hi = nonempty.iter().map(|c| c.hi()).max().unwrap();
    let dims = (lo..=hi).map(|n| parts.iter().map(|c| c.dim(n)).sum()).collect();
    let diffs = (lo..hi)
        .map(|n| {
            let ds: Vec<Matrix> = parts.iter().map(|c| c.diff(n)).collect();
            Matrix::block_diag(field, &ds.iter().collect::<Vec<_>>())
        })
        .collect();
    match trunc {
        Some(top) => CochainComplex::new_truncated(field, lo, dims, diffs, top).expect("sum of complexes"),
        None => CochainComplex::new(field, lo, dims, diffs).expect("sum of complexes"),
    }
}

/// Reproducible random sheaf: a sum of interval sheaves `[x, y]` carrying
/// random complexes, conjugated by a random basis change in every stalk and degree.
pub fn random_sheaf(poset: Arc<Poset>, bounds: &SheafBounds, seed: u64) -> Sheaf {
    let mut rng = seeded(seed);
    let field = bounds.field;
    let zero = Arc::new(CochainComplex::zero(field));
    let n = poset.len();
    let mut dims = vec![vec![0usize; (bounds.hi - bounds.lo + 1) as usize]; n];
    let mut parts = vec![indicator(poset.clone(), &vec![false; n], &zero, &zero)];
    for _ in 0..bounds.pieces {
        let x = rng.gen_range(0..n);
        let above: Vec<usize> = poset.elements().filter(|&y| poset.leq(x, y)).collect();
        let y = above[rng.gen_range(0..above.len())];
        // an interval, or the whole up-set of x
        let inside: Vec<bool> = if rng.gen_bool(0.5) {
            poset.elements().map(|z| poset.leq(x, z) && poset.leq(z, y)).collect()
        } else {
            poset.elements().map(|z| poset.leq(x, z)).collect()
        };
        let c = random_complex(field, bounds.lo, bounds.hi, bounds.max_dim, &mut rng);
        let fits = (0..n).all(|z| {
            !inside[z] || (bounds.lo..=bounds.hi).all(|d| dims[z][(d - bounds.lo) as usize] + c.dim(d) <= bounds.max_dim)
        });
        if !fits || c.total_dim() == 0 {
            continue;
        }
        for z in (0..n).filter(|&z| inside[z]) {
            for d in bounds.lo..=bounds.hi {
                dims[z][(d - bounds.lo) as usize] += c.dim(d);
            }
        }
        parts.push(indicator(poset.clone(), &inside, &Arc::new(c), &zero));
    }
    let sum = direct_sum(&parts);
    conjugate(&sum, &mut rng)
}

/// Replace every stalk by an isomorphic copy through random invertible matrices.
fn conjugate(f: &Sheaf, rng: &mut crate::random::Rng) -> Sheaf {
    let field = f.field;
    let frames: Vec<BTreeMap<Degree, (Matrix, Matrix)>> = f
        .stalks
        .iter()
        .map(|s| {
            s.degrees()
                .map(|n| {
                    let g = random_invertible(field, s.dim(n), rng);
                    let gi = g.inverse().expect("invertible");
                    (n, (g, gi))
                })
                .collect()
        })
        .collect();
    let stalks: Vec<Arc<CochainComplex>> = f
        .stalks
        .iter()
        .zip(&frames)
        .map(|(s, fr)| {
            if s.is_empty_range() {
                return s.clone();
            }
            let dims = s.degrees().map(|n| s.dim(n)).collect();
            let diffs = (s.lo()..s.hi()).map(|n| fr[&(n + 1)].0.mul(&s.diff(n)).mul(&fr[&n].1)).collect();
            Arc::new(CochainComplex::new(field, s.lo(), dims, diffs).expect("conjugate complex"))
        })
        .collect();
    let restrictions = f
        .restrictions
        .iter()
        .map(|(&(x, y), r)| {
            let m = ChainMap::from_fn(stalks[x].clone(), stalks[y].clone(), |n| {
                match (frames[y].get(&n), frames[x].get(&n)) {
                    (Some((g, _)), Some((_, hi))) => g.mul(&r.component(n)).mul(hi),
                    _ => Matrix::zeros(field, stalks[y].dim(n), stalks[x].dim(n)),
                }
            })
            .expect("conjugate restriction");
            ((x, y), m)
        })
        .collect();
    Sheaf { poset: f.poset.clone(), field, stalks, restrictions }
}
