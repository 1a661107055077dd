//! Cosimplicial and bicosimplicial objects in bounded complexes, the simple
//! functor with its structure maps, path objects, extra degeneracies and a
//! randomized audit of the descent axioms.

mod axioms;
mod bicosimplicial;
mod dold_kan;
mod extra;
mod path;
mod simple;

use std::sync::Arc;

use thiserror::Error;

use crate::complexes::{ChainMap, CochainComplex, ComplexError, Degree};
use crate::exactlin::Field;

pub use axioms::{check_descent_axioms, zero_cosimplicial, Axiom, AxiomParams, DescentReport, TrialOutcome};
pub(crate) use bicosimplicial::IteratedLayout;
pub use bicosimplicial::{aw_map, iterated_simple, iterated_simple_map, BicosimplicialComplex, BicosimplicialMap};
pub use dold_kan::{dold_kan, dold_kan_bi, dold_kan_bi_map, dold_kan_map, surjections};
pub use extra::{collapse_by_extra_degeneracy, Coaugmentation};
pub use path::{path_object, PathObject};
pub use simple::{lambda, simple, simple_layout, simple_map, simple_map_between, simple_with_signs, SignRule, SimpleLayout};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CosimplicialError {
    #[error("cosimplicial identity {identity} fails at level {level}")]
    IdentityFails { identity: String, level: usize },
    #[error("total degree {degree} needs cosimplicial levels up to {needed}, only {available} present")]
    InsufficientLevels { degree: Degree, needed: usize, available: usize },
    #[error("not a cosimplicial morphism: {which} at level {level}")]
    NotCosimplicial { which: String, level: usize },
    #[error("not an extra degeneracy: {identity} at level {level}")]
    NotExtraDegeneracy { identity: String, level: i64 },
    #[error("malformed structure maps: {0}")]
    Malformed(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

#[derive(Clone, Debug)]
pub struct CosimplicialComplex {
    field: Field,
    levels: Vec<Arc<CochainComplex>>,
    /// `cofaces[p][i] = d^i : X(p-1) -> X(p)`; `cofaces[0]` is empty.
    cofaces: Vec<Vec<ChainMap>>,
    /// `codegeneracies[p][j] = s^j : X(p+1) -> X(p)`.
    codegeneracies: Vec<Vec<ChainMap>>,
    vanishes_above: bool,
}

fn same(a: &ChainMap, b: &ChainMap) -> bool {
    a.same_components(b)
}

impl CosimplicialComplex {
    pub fn new(
        levels: Vec<Arc<CochainComplex>>,
        cofaces: Vec<Vec<ChainMap>>,
        codegeneracies: Vec<Vec<ChainMap>>,
    ) -> Result<Self, CosimplicialError> {
        let x = CosimplicialComplex::new_unchecked(levels, cofaces, codegeneracies)?;
        x.check_identities()?;
        Ok(x)
    }

    /// Shapes and endpoints are checked; the cosimplicial identities are not.
    pub(crate) fn new_unchecked(
        levels: Vec<Arc<CochainComplex>>,
        mut cofaces: Vec<Vec<ChainMap>>,
        mut codegeneracies: Vec<Vec<ChainMap>>,
    ) -> Result<Self, CosimplicialError> {
        let n = levels.len();
        if n == 0 {
            return Err(CosimplicialError::Malformed("no levels".into()));
        }
        let field = levels[0].field();
        if levels.iter().any(|l| l.field() != field) {
            return Err(CosimplicialError::Malformed("levels over different fields".into()));
        }
        if cofaces.is_empty() {
            cofaces.push(Vec::new());
        }
        if cofaces.len() != n || codegeneracies.len() != n - 1 {
            return Err(CosimplicialError::Malformed(format!(
                "{} levels need {} coface and {} codegeneracy families",
                n,
                n,
                n - 1
            )));
        }
        for p in 1..n {
            if cofaces[p].len() != p + 1 {
                return Err(CosimplicialError::Malformed(format!("level {p} needs {} cofaces", p + 1)));
            }
            for m in cofaces[p].iter_mut() {
                *m = attach(m, &levels[p - 1], &levels[p])?;
            }
        }
        for p in 0..n - 1 {
            if codegeneracies[p].len() != p + 1 {
                return Err(CosimplicialError::Malformed(format!("level {p} needs {} codegeneracies", p + 1)));
            }
            for m in codegeneracies[p].iter_mut() {
                *m = attach(m, &levels[p + 1], &levels[p])?;
            }
        }
        Ok(CosimplicialComplex { field, levels, cofaces, codegeneracies, vanishes_above: false })
    }

    /// All levels equal to `a`, all structure maps identities.
    pub fn constant(a: Arc<CochainComplex>, p_max: usize) -> Self {
        let id = ChainMap::identity(a.clone());
        let levels = vec![a; p_max + 1];
        let cofaces = (0..=p_max).map(|p| if p == 0 { Vec::new() } else { vec![id.clone(); p + 1] }).collect();
        let codegeneracies = (0..p_max).map(|p| vec![id.clone(); p + 1]).collect();
        CosimplicialComplex { field: levels[0].field(), levels, cofaces, codegeneracies, vanishes_above: false }
    }

    /// `a` in level 0 and zero in every higher level (no structure maps).
    pub fn concentrated_in_level_zero(a: Arc<CochainComplex>) -> Self {
        CosimplicialComplex {
            field: a.field(),
            levels: vec![a],
            cofaces: vec![Vec::new()],
            codegeneracies: Vec::new(),
            vanishes_above: true,
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn p_max(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn vanishes_above(&self) -> bool {
        self.vanishes_above
    }

    pub fn level(&self, p: usize) -> &Arc<CochainComplex> {
        &self.levels[p]
    }

    pub fn levels(&self) -> &[Arc<CochainComplex>] {
        &self.levels
    }

    /// `d^i : X(p-1) -> X(p)`.
    pub fn coface(&self, p: usize, i: usize) -> &ChainMap {
        &self.cofaces[p][i]
    }

    /// `s^j : X(p+1) -> X(p)`.
    pub fn codegeneracy(&self, p: usize, j: usize) -> &ChainMap {
        &self.codegeneracies[p][j]
    }

    /// Smallest degree carrying a nonzero space in some level.
    pub fn lower_bound(&self) -> Option<Degree> {
        self.levels.iter().filter_map(|l| l.degrees().find(|n| l.dim(*n) > 0)).min()
    }

    pub fn upper_bound(&self) -> Option<Degree> {
        self.levels.iter().filter_map(|l| l.degrees().rev().find(|n| l.dim(*n) > 0)).max()
    }

    /// Levels `0..=p_max` of this object (structure maps restricted).
    pub fn truncate_levels(&self, p_max: usize) -> CosimplicialComplex {
        let k = p_max.min(self.p_max());
        CosimplicialComplex {
            field: self.field,
            levels: self.levels[..=k].to_vec(),
            cofaces: self.cofaces[..=k].to_vec(),
            codegeneracies: self.codegeneracies[..k].to_vec(),
            vanishes_above: false,
        }
    }

    /// Verify every cosimplicial identity among the stored levels.
    pub fn check_identities(&self) -> Result<(), CosimplicialError> {
        let fail = |identity: String, level: usize| Err(CosimplicialError::IdentityFails { identity, level });
        let pm = self.p_max();
        // d^j d^i = d^i d^{j-1}, i < j, from level p-1 to p+1
        for p in 1..pm {
            for j in 0..=p + 1 {
                for i in 0..j {
                    let lhs = self.coface(p + 1, j).compose(self.coface(p, i));
                    let rhs = self.coface(p + 1, i).compose(self.coface(p, j - 1));
                    if !same(&lhs, &rhs) {
                        return fail(format!("d^{j} d^{i} = d^{i} d^{}", j - 1), p + 1);
                    }
                }
            }
        }
        // s^j s^i = s^i s^{j+1}, i <= j, from level p+2 to p
        for p in 0..pm.saturating_sub(1) {
            for j in 0..=p {
                for i in 0..=j {
                    let lhs = self.codegeneracy(p, j).compose(self.codegeneracy(p + 1, i));
                    let rhs = self.codegeneracy(p, i).compose(self.codegeneracy(p + 1, j + 1));
                    if !same(&lhs, &rhs) {
                        return fail(format!("s^{j} s^{i} = s^{i} s^{}", j + 1), p);
                    }
                }
            }
        }
        // s^j d^i on level p: d^i : X(p) -> X(p+1), s^j : X(p+1) -> X(p)
        for p in 0..pm {
            for j in 0..=p {
                for i in 0..=p + 1 {
                    let lhs = self.codegeneracy(p, j).compose(self.coface(p + 1, i));
                    let (rhs, name) = if i < j {
                        (self.coface(p, i).compose(self.codegeneracy(p - 1, j - 1)), format!("s^{j} d^{i} = d^{i} s^{}", j - 1))
                    } else if i == j || i == j + 1 {
                        (ChainMap::identity(self.levels[p].clone()), format!("s^{j} d^{i} = id"))
                    } else {
                        (self.coface(p, i - 1).compose(self.codegeneracy(p - 1, j)), format!("s^{j} d^{i} = d^{} s^{j}", i - 1))
                    };
                    if !same(&lhs, &rhs) {
                        return fail(name, p);
                    }
                }
            }
        }
        Ok(())
    }

    /// Levelwise biproduct with the same structure maps side by side.
    pub fn product(&self, other: &CosimplicialComplex) -> Result<(CosimplicialComplex, [CosimplicialMap; 2]), CosimplicialError> {
        let pm = self.p_max().min(other.p_max());
        let bps: Vec<_> = (0..=pm)
            .map(|p| crate::complexes::biproduct(&self.levels[p], &other.levels[p]))
            .collect::<Result<_, _>>()?;
        let levels: Vec<Arc<CochainComplex>> = bps.iter().map(|b| b.sum.clone()).collect();
        let pair = |a: &ChainMap, b: &ChainMap, src: &Arc<CochainComplex>, tgt: &Arc<CochainComplex>| {
            ChainMap::from_fn_unchecked(src.clone(), tgt.clone(), |n| {
                crate::exactlin::Matrix::block_diag(self.field, &[&a.component(n), &b.component(n)])
            })
        };
        let cofaces = (0..=pm)
            .map(|p| {
                if p == 0 {
                    Vec::new()
                } else {
                    (0..=p).map(|i| pair(self.coface(p, i), other.coface(p, i), &levels[p - 1], &levels[p])).collect()
                }
            })
            .collect();
        let codegeneracies = (0..pm)
            .map(|p| {
                (0..=p)
                    .map(|j| pair(self.codegeneracy(p, j), other.codegeneracy(p, j), &levels[p + 1], &levels[p]))
                    .collect()
            })
            .collect();
        let prod = Arc::new(CosimplicialComplex::new_unchecked(levels, cofaces, codegeneracies)?);
        let a = Arc::new(self.truncate_levels(pm));
        let b = Arc::new(other.truncate_levels(pm));
        let projs = [
            CosimplicialMap::new(prod.clone(), a, bps.iter().map(|b| b.projections[0].clone()).collect())?,
            CosimplicialMap::new(prod.clone(), b, bps.iter().map(|b| b.projections[1].clone()).collect())?,
        ];
        Ok((Arc::try_unwrap(prod).unwrap_or_else(|a| (*a).clone()), projs))
    }
}

fn attach(m: &ChainMap, src: &Arc<CochainComplex>, tgt: &Arc<CochainComplex>) -> Result<ChainMap, CosimplicialError> {
    let ok = |a: &Arc<CochainComplex>, b: &Arc<CochainComplex>| Arc::ptr_eq(a, b) || **a == **b;
    if !ok(m.source(), src) || !ok(m.target(), tgt) {
        return Err(CosimplicialError::Malformed("structure map endpoints differ from levels".into()));
    }
    Ok(m.retarget(src.clone(), tgt.clone()))
}

/// Levelwise chain maps commuting with every structure map.
#[derive(Clone, Debug)]
pub struct CosimplicialMap {
    source: Arc<CosimplicialComplex>,
    target: Arc<CosimplicialComplex>,
    comps: Vec<ChainMap>,
}

impl CosimplicialMap {
    pub fn new(
        source: Arc<CosimplicialComplex>,
        target: Arc<CosimplicialComplex>,
        comps: Vec<ChainMap>,
    ) -> Result<Self, CosimplicialError> {
        let m = CosimplicialMap::new_unchecked(source, target, comps)?;
        m.check_commutes()?;
        Ok(m)
    }

    pub(crate) fn new_unchecked(
        source: Arc<CosimplicialComplex>,
        target: Arc<CosimplicialComplex>,
        comps: Vec<ChainMap>,
    ) -> Result<Self, CosimplicialError> {
        let pm = source.p_max().min(target.p_max());
        if comps.len() != pm + 1 {
            return Err(CosimplicialError::Malformed(format!("need {} level components", pm + 1)));
        }
        let comps = comps
            .iter()
            .enumerate()
            .map(|(p, c)| attach(c, &source.levels[p], &target.levels[p]))
            .collect::<Result<_, _>>()?;
        Ok(CosimplicialMap { source, target, comps })
    }

    pub fn identity(x: Arc<CosimplicialComplex>) -> Self {
        let comps = x.levels.iter().map(|l| ChainMap::identity(l.clone())).collect();
        CosimplicialMap { source: x.clone(), target: x, comps }
    }

    /// The constant morphism `c(f)` between constant objects.
    pub fn constant(f: &ChainMap, p_max: usize) -> Self {
        let src = Arc::new(CosimplicialComplex::constant(f.source().clone(), p_max));
        let tgt = Arc::new(CosimplicialComplex::constant(f.target().clone(), p_max));
        CosimplicialMap { source: src, target: tgt, comps: vec![f.clone(); p_max + 1] }
    }

    pub fn source(&self) -> &Arc<CosimplicialComplex> {
        &self.source
    }

    pub fn target(&self) -> &Arc<CosimplicialComplex> {
        &self.target
    }

    pub fn level(&self, p: usize) -> &ChainMap {
        &self.comps[p]
    }

    pub fn p_max(&self) -> usize {
        self.comps.len() - 1
    }

    pub fn check_commutes(&self) -> Result<(), CosimplicialError> {
        let (x, y) = (&self.source, &self.target);
        for p in 0..=self.p_max() {
            self.comps[p].check_commutes()?;
            if p >= 1 {
                for i in 0..=p {
                    let lhs = self.comps[p].compose(x.coface(p, i));
                    let rhs = y.coface(p, i).compose(&self.comps[p - 1]);
                    if !same(&lhs, &rhs) {
                        return Err(CosimplicialError::NotCosimplicial { which: format!("d^{i}"), level: p });
                    }
                }
            }
            if p < self.p_max() {
                for j in 0..=p {
                    let lhs = self.comps[p].compose(x.codegeneracy(p, j));
                    let rhs = y.codegeneracy(p, j).compose(&self.comps[p + 1]);
                    if !same(&lhs, &rhs) {
                        return Err(CosimplicialError::NotCosimplicial { which: format!("s^{j}"), level: p });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn compose(&self, first: &CosimplicialMap) -> CosimplicialMap {
        let comps = self.comps.iter().zip(&first.comps).map(|(g, f)| g.compose(f)).collect();
        CosimplicialMap { source: first.source.clone(), target: self.target.clone(), comps }
    }
}

#[cfg(test)]
mod tests;
