use std::collections::BTreeMap;
use std::sync::Arc;

use super::{CosimplicialComplex, CosimplicialError};
use crate::complexes::{ChainMap, CochainComplex, Degree};
use crate::exactlin::{Field, Matrix};

type Grid<T> = Vec<Vec<T>>;

/// `Z(p, q)` with horizontal structure maps changing `p` and vertical ones
/// changing `q`.
#[derive(Clone, Debug)]
pub struct BicosimplicialComplex {
    field: Field,
    levels: Grid<Arc<CochainComplex>>,
    /// `[p][q][i] : Z(p-1, q) -> Z(p, q)`
    h_cofaces: Grid<Vec<ChainMap>>,
    /// `[p][q][j] : Z(p+1, q) -> Z(p, q)`
    h_codegeneracies: Grid<Vec<ChainMap>>,
    /// `[p][q][i] : Z(p, q-1) -> Z(p, q)`
    v_cofaces: Grid<Vec<ChainMap>>,
    /// `[p][q][j] : Z(p, q+1) -> Z(p, q)`
    v_codegeneracies: Grid<Vec<ChainMap>>,
}

impl BicosimplicialComplex {
    pub(crate) fn new_unchecked(
        levels: Grid<Arc<CochainComplex>>,
        h_cofaces: Grid<Vec<ChainMap>>,
        h_codegeneracies: Grid<Vec<ChainMap>>,
        v_cofaces: Grid<Vec<ChainMap>>,
        v_codegeneracies: Grid<Vec<ChainMap>>,
    ) -> Self {
        let field = levels[0][0].field();
        BicosimplicialComplex { field, levels, h_cofaces, h_codegeneracies, v_cofaces, v_codegeneracies }
    }

    /// Checks the identities in each direction and that the two directions commute.
    pub fn new(
        levels: Grid<Arc<CochainComplex>>,
        h_cofaces: Grid<Vec<ChainMap>>,
        h_codegeneracies: Grid<Vec<ChainMap>>,
        v_cofaces: Grid<Vec<ChainMap>>,
        v_codegeneracies: Grid<Vec<ChainMap>>,
    ) -> Result<Self, CosimplicialError> {
        let z = BicosimplicialComplex::new_unchecked(levels, h_cofaces, h_codegeneracies, v_cofaces, v_codegeneracies);
        z.check()?;
        Ok(z)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// `(X × Δ)(n, m) = X(n)`, vertical structure maps identities.
    pub fn constant_in_second(x: &CosimplicialComplex, q_max: usize) -> Self {
        let pm = x.p_max();
        let ids = |p: usize, k: usize| vec![ChainMap::identity(x.level(p).clone()); k];
        let levels = (0..=pm).map(|p| vec![x.level(p).clone(); q_max + 1]).collect();
        let h_cofaces = (0..=pm)
            .map(|p| (0..=q_max).map(|_| if p == 0 { Vec::new() } else { (0..=p).map(|i| x.coface(p, i).clone()).collect() }).collect())
            .collect();
        let h_codeg = (0..pm)
            .map(|p| (0..=q_max).map(|_| (0..=p).map(|j| x.codegeneracy(p, j).clone()).collect()).collect())
            .collect();
        let v_cofaces = (0..=pm).map(|p| (0..=q_max).map(|q| if q == 0 { Vec::new() } else { ids(p, q + 1) }).collect()).collect();
        let v_codeg = (0..=pm).map(|p| (0..q_max).map(|q| ids(p, q + 1)).collect()).collect();
        BicosimplicialComplex::new_unchecked(levels, h_cofaces, h_codeg, v_cofaces, v_codeg)
    }

    /// `(Δ × X)(n, m) = X(m)`.
    pub fn constant_in_first(x: &CosimplicialComplex, p_max: usize) -> Self {
        BicosimplicialComplex::constant_in_second(x, p_max).transpose()
    }

    pub fn p_max(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn q_max(&self) -> usize {
        self.levels[0].len() - 1
    }

    pub fn level(&self, p: usize, q: usize) -> &Arc<CochainComplex> {
        &self.levels[p][q]
    }

    pub fn h_coface(&self, p: usize, q: usize, i: usize) -> &ChainMap {
        &self.h_cofaces[p][q][i]
    }

    pub fn v_coface(&self, p: usize, q: usize, i: usize) -> &ChainMap {
        &self.v_cofaces[p][q][i]
    }

    /// The cosimplicial object `p ↦ Z(p, q)`.
    pub fn row(&self, q: usize) -> Result<CosimplicialComplex, CosimplicialError> {
        let levels = (0..=self.p_max()).map(|p| self.levels[p][q].clone()).collect();
        let cof = (0..=self.p_max()).map(|p| self.h_cofaces[p][q].clone()).collect();
        let codeg = (0..self.p_max()).map(|p| self.h_codegeneracies[p][q].clone()).collect();
        CosimplicialComplex::new_unchecked(levels, cof, codeg)
    }

    /// The cosimplicial object `q ↦ Z(p, q)`.
    pub fn column(&self, p: usize) -> Result<CosimplicialComplex, CosimplicialError> {
        let levels = self.levels[p].clone();
        let cof = self.v_cofaces[p].clone();
        let codeg = self.v_codegeneracies[p][..self.q_max()].to_vec();
        CosimplicialComplex::new_unchecked(levels, cof, codeg)
    }

    pub fn transpose(&self) -> BicosimplicialComplex {
        let tr = |g: &Grid<Vec<ChainMap>>| -> Grid<Vec<ChainMap>> {
            (0..g[0].len()).map(|q| (0..g.len()).map(|p| g[p][q].clone()).collect()).collect()
        };
        let levels = (0..=self.q_max()).map(|q| (0..=self.p_max()).map(|p| self.levels[p][q].clone()).collect()).collect();
        BicosimplicialComplex {
            field: self.field,
            levels,
            h_cofaces: tr(&self.v_cofaces),
            h_codegeneracies: tr(&self.v_codegeneracies),
            v_cofaces: tr(&self.h_cofaces),
            v_codegeneracies: tr(&self.h_codegeneracies),
        }
    }

    /// Horizontal maps as `(label, p_source, p_target, q ↦ map)`, likewise vertical.
    fn h_maps(&self) -> Vec<(String, usize, usize, Vec<&ChainMap>)> {
        let mut out = Vec::new();
        for p in 1..=self.p_max() {
            for i in 0..=p {
                out.push((format!("dh^{i}@{p}"), p - 1, p, (0..=self.q_max()).map(|q| &self.h_cofaces[p][q][i]).collect()));
            }
        }
        for p in 0..self.p_max() {
            for j in 0..=p {
                out.push((
                    format!("sh^{j}@{p}"),
                    p + 1,
                    p,
                    (0..=self.q_max()).map(|q| &self.h_codegeneracies[p][q][j]).collect(),
                ));
            }
        }
        out
    }

    fn v_maps(&self) -> Vec<(String, usize, usize, Vec<&ChainMap>)> {
        let mut out = Vec::new();
        for q in 1..=self.q_max() {
            for i in 0..=q {
                out.push((format!("dv^{i}@{q}"), q - 1, q, (0..=self.p_max()).map(|p| &self.v_cofaces[p][q][i]).collect()));
            }
        }
        for q in 0..self.q_max() {
            for j in 0..=q {
                out.push((
                    format!("sv^{j}@{q}"),
                    q + 1,
                    q,
                    (0..=self.p_max()).map(|p| &self.v_codegeneracies[p][q][j]).collect(),
                ));
            }
        }
        out
    }

    pub fn check(&self) -> Result<(), CosimplicialError> {
        for q in 0..=self.q_max() {
            self.row(q)?.check_identities()?;
        }
        for p in 0..=self.p_max() {
            self.column(p)?.check_identities()?;
        }
        let vs = self.v_maps();
        for (hname, a, b, h) in self.h_maps() {
            for (vname, c, d, v) in &vs {
                // Z(a, c) -> Z(b, d) both ways round
                let lhs = v[b].compose(h[*c]);
                let rhs = h[*d].compose(v[a]);
                if !lhs.same_components(&rhs) {
                    return Err(CosimplicialError::IdentityFails { identity: format!("{hname} ∘ {vname} commute"), level: b });
                }
            }
        }
        Ok(())
    }

    /// The diagonal `p ↦ Z(p, p)` with structure maps `d^i = dh^i dv^i`, `s^j = sh^j sv^j`.
    pub fn diagonal(&self) -> Result<CosimplicialComplex, CosimplicialError> {
        let m = self.p_max().min(self.q_max());
        let levels = (0..=m).map(|p| self.levels[p][p].clone()).collect();
        let cofaces = (0..=m)
            .map(|p| {
                if p == 0 {
                    Vec::new()
                } else {
                    (0..=p).map(|i| self.h_cofaces[p][p][i].compose(&self.v_cofaces[p - 1][p][i])).collect()
                }
            })
            .collect();
        let codegeneracies = (0..m)
            .map(|p| (0..=p).map(|j| self.h_codegeneracies[p][p][j].compose(&self.v_codegeneracies[p + 1][p][j])).collect())
            .collect();
        CosimplicialComplex::new_unchecked(levels, cofaces, codegeneracies)
    }

    fn lower_bound(&self) -> Option<Degree> {
        self.levels.iter().flatten().filter_map(|l| l.degrees().find(|n| l.dim(*n) > 0)).min()
    }
}

/// Levelwise chain maps commuting with all structure maps of both directions.
#[derive(Clone, Debug)]
pub struct BicosimplicialMap {
    source: Arc<BicosimplicialComplex>,
    target: Arc<BicosimplicialComplex>,
    comps: Grid<ChainMap>,
}

impl BicosimplicialMap {
    pub fn new(
        source: Arc<BicosimplicialComplex>,
        target: Arc<BicosimplicialComplex>,
        comps: Grid<ChainMap>,
    ) -> Result<Self, CosimplicialError> {
        let m = BicosimplicialMap::new_unchecked(source, target, comps);
        m.check()?;
        Ok(m)
    }

    pub(crate) fn new_unchecked(
        source: Arc<BicosimplicialComplex>,
        target: Arc<BicosimplicialComplex>,
        comps: Grid<ChainMap>,
    ) -> Self {
        BicosimplicialMap { source, target, comps }
    }

    pub fn source(&self) -> &Arc<BicosimplicialComplex> {
        &self.source
    }

    pub fn target(&self) -> &Arc<BicosimplicialComplex> {
        &self.target
    }

    pub fn level(&self, p: usize, q: usize) -> &ChainMap {
        &self.comps[p][q]
    }

    pub fn transpose(&self) -> BicosimplicialMap {
        let (pm, qm) = (self.comps.len(), self.comps[0].len());
        let comps = (0..qm).map(|q| (0..pm).map(|p| self.comps[p][q].clone()).collect()).collect();
        BicosimplicialMap {
            source: Arc::new(self.source.transpose()),
            target: Arc::new(self.target.transpose()),
            comps,
        }
    }

    pub fn check(&self) -> Result<(), CosimplicialError> {
        let (x, y) = (&self.source, &self.target);
        let f = |p: usize, q: usize| &self.comps[p][q];
        for (name, a, b, hx) in x.h_maps() {
            let hy = y.h_maps().into_iter().find(|m| m.0 == name).expect("same shape").3;
            for q in 0..=x.q_max() {
                if !f(b, q).compose(hx[q]).same_components(&hy[q].compose(f(a, q))) {
                    return Err(CosimplicialError::NotCosimplicial { which: name, level: q });
                }
            }
        }
        for (name, c, d, vx) in x.v_maps() {
            let vy = y.v_maps().into_iter().find(|m| m.0 == name).expect("same shape").3;
            for p in 0..=x.p_max() {
                if !f(p, d).compose(vx[p]).same_components(&vy[p].compose(f(p, c))) {
                    return Err(CosimplicialError::NotCosimplicial { which: name, level: p });
                }
            }
        }
        Ok(())
    }
}

/// Summand order of the iterated simple: outer index `i` (first direction),
/// inner index `j` (second direction), internal degree `t - i - j`.
pub(crate) struct IteratedLayout {
    lo: Degree,
    top: Degree,
    blocks: Vec<Vec<(usize, usize, usize)>>,
}

impl IteratedLayout {
    pub(crate) fn new(z: &BicosimplicialComplex, top: Degree) -> Result<Self, CosimplicialError> {
        let b = z.lower_bound().unwrap_or(top + 1);
        let needed = (top - b).max(0) as usize;
        if z.p_max() < needed || z.q_max() < needed {
            return Err(CosimplicialError::InsufficientLevels {
                degree: top,
                needed,
                available: z.p_max().min(z.q_max()),
            });
        }
        let blocks = (b..=top)
            .map(|t| {
                let room = (t - b) as usize;
                let mut v = Vec::new();
                for i in 0..=room {
                    for j in 0..=room - i {
                        v.push((i, j, z.level(i, j).dim(t - (i + j) as Degree)));
                    }
                }
                v
            })
            .collect();
        Ok(IteratedLayout { lo: b, top, blocks })
    }

    pub(crate) fn at(&self, t: Degree) -> &[(usize, usize, usize)] {
        if t < self.lo || t > self.top {
            &[]
        } else {
            &self.blocks[(t - self.lo) as usize]
        }
    }

    fn sizes(&self, t: Degree) -> Vec<usize> {
        let s: Vec<usize> = self.at(t).iter().map(|b| b.2).collect();
        if s.is_empty() {
            vec![0]
        } else {
            s
        }
    }

    fn index(&self, t: Degree) -> BTreeMap<(usize, usize), usize> {
        self.at(t).iter().enumerate().map(|(k, (i, j, _))| ((*i, *j), k)).collect()
    }
}

fn alternating(maps: impl Iterator<Item = Matrix>, field: Field, rows: usize, cols: usize) -> Matrix {
    maps.enumerate().fold(Matrix::zeros(field, rows, cols), |acc, (k, m)| if k % 2 == 0 { acc.add(&m) } else { acc.sub(&m) })
}

/// `s(i ↦ s(j ↦ Z(i, j)))`: the outer simple runs over the first index.
/// From the summand `(i, j, q)` the differential is
/// `Σ(-1)^a dh^a + (-1)^i Σ(-1)^b dv^b + (-1)^{i+j} d_Z`.
pub fn iterated_simple(z: &BicosimplicialComplex, top: Degree) -> Result<CochainComplex, CosimplicialError> {
    let lay = IteratedLayout::new(z, top)?;
    let field = z.field();
    if lay.lo > top {
        return Ok(CochainComplex::zero(field).truncate(top));
    }
    let mut diffs = Vec::new();
    for t in lay.lo..top {
        let target = lay.index(t + 1);
        let mut blocks: Vec<(usize, usize, Matrix)> = Vec::new();
        for (k, &(i, j, _)) in lay.at(t).iter().enumerate() {
            let q = t - (i + j) as Degree;
            let here = z.level(i, j);
            let mut dint = here.diff(q);
            if (i + j) % 2 == 1 {
                dint = dint.neg();
            }
            blocks.push((target[&(i, j)], k, dint));
            if let Some(&r) = target.get(&(i + 1, j)) {
                let tgt = z.level(i + 1, j);
                let dh = alternating((0..=i + 1).map(|a| z.h_coface(i + 1, j, a).component(q)), field, tgt.dim(q), here.dim(q));
                blocks.push((r, k, dh));
            }
            if let Some(&r) = target.get(&(i, j + 1)) {
                let tgt = z.level(i, j + 1);
                let mut dv = alternating((0..=j + 1).map(|b| z.v_coface(i, j + 1, b).component(q)), field, tgt.dim(q), here.dim(q));
                if i % 2 == 1 {
                    dv = dv.neg();
                }
                blocks.push((r, k, dv));
            }
        }
        diffs.push(Matrix::from_blocks(field, &lay.sizes(t + 1), &lay.sizes(t), blocks.iter().map(|(a, b, m)| (*a, *b, m))));
    }
    let dims = (lay.lo..=top).map(|t| lay.at(t).iter().map(|b| b.2).sum()).collect();
    Ok(CochainComplex::new_truncated(field, lay.lo, dims, diffs, top)?)
}

/// Blockwise `f(i, j)` between iterated simples.
pub fn iterated_simple_map(
    f: &BicosimplicialMap,
    ssx: &Arc<CochainComplex>,
    ssy: &Arc<CochainComplex>,
    top: Degree,
) -> Result<ChainMap, CosimplicialError> {
    let lx = IteratedLayout::new(f.source(), top)?;
    let ly = IteratedLayout::new(f.target(), top)?;
    let field = f.source().field();
    let m = ChainMap::from_fn_unchecked(ssx.clone(), ssy.clone(), |t| {
        let rows = ly.index(t);
        let mut blocks = Vec::new();
        for (k, &(i, j, _)) in lx.at(t).iter().enumerate() {
            if let Some(&r) = rows.get(&(i, j)) {
                blocks.push((r, k, f.level(i, j).component(t - (i + j) as Degree)));
            }
        }
        Matrix::from_blocks(field, &ly.sizes(t), &lx.sizes(t), blocks.iter().map(|(a, b, m)| (*a, *b, m)))
    });
    m.check_commutes()?;
    Ok(m)
}

/// The Alexander–Whitney map `ssZ -> sDZ`: the summand `Z(i, j)^q` goes to
/// `Z(p, p)^q`, `p = i + j`, through `(-1)^{ij} Z(d^0 ⋯ d^0, d^p ⋯ d^{j+1})`.
///
/// The Koszul sign `(-1)^{ij}` is what makes the map commute with the
/// differentials when the outer simple runs over the first index.
pub fn aw_map(
    z: &BicosimplicialComplex,
    top: Degree,
) -> Result<(ChainMap, Arc<CosimplicialComplex>), CosimplicialError> {
    aw_map_signed(z, top, true)
}

pub(crate) fn aw_map_signed(
    z: &BicosimplicialComplex,
    top: Degree,
    koszul: bool,
) -> Result<(ChainMap, Arc<CosimplicialComplex>), CosimplicialError> {
    let lay = IteratedLayout::new(z, top)?;
    let diag = Arc::new(z.diagonal()?);
    let ss = Arc::new(iterated_simple(z, top)?);
    let sd = Arc::new(super::simple(&diag, top)?);
    let dl = super::simple_layout(&diag, top)?;
    let field = z.field();
    let mut paths: BTreeMap<(usize, usize), ChainMap> = BTreeMap::new();
    for t in lay.lo..=top {
        for &(i, j, _) in lay.at(t) {
            paths.entry((i, j)).or_insert_with(|| {
                let p = i + j;
                let mut m = ChainMap::identity(z.level(i, j).clone());
                for a in i + 1..=p {
                    m = z.h_coface(a, j, 0).compose(&m);
                }
                for b in j + 1..=p {
                    m = z.v_coface(p, b, b).compose(&m);
                }
                m
            });
        }
    }
    let mu = ChainMap::from_fn_unchecked(ss.clone(), sd.clone(), |t| {
        let rows: Vec<usize> = if dl.sizes(t).is_empty() { vec![0] } else { dl.sizes(t).to_vec() };
        let mut blocks = Vec::new();
        for (k, &(i, j, _)) in lay.at(t).iter().enumerate() {
            let p = i + j;
            if p < rows.len() && dl.summand(t, p).is_some() {
                let m = paths[&(i, j)].component(t - p as Degree);
                blocks.push((p, k, if koszul && i * j % 2 == 1 { m.neg() } else { m }));
            }
        }
        Matrix::from_blocks(field, &rows, &lay.sizes(t), blocks.iter().map(|(a, b, m)| (*a, *b, m)))
    });
    mu.check_commutes()?;
    Ok((mu, diag))
}

/// Coordinates of the summand `Z(i, j)^{t-i-j}` inside `(ssZ)^t`.
#[cfg(test)]
pub(crate) fn iterated_summand(
    z: &BicosimplicialComplex,
    top: Degree,
    t: Degree,
    i: usize,
    j: usize,
) -> Result<Option<std::ops::Range<usize>>, CosimplicialError> {
    let lay = IteratedLayout::new(z, top)?;
    let mut start = 0;
    for &(a, b, d) in lay.at(t) {
        if (a, b) == (i, j) {
            return Ok(Some(start..start + d));
        }
        start += d;
    }
    Ok(None)
}
