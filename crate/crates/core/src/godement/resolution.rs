use std::collections::HashMap;
use std::sync::Arc;

use super::GodementError;
use crate::complexes::{ChainMap, CochainComplex, Degree, QuisReport};
use crate::cosimplicial::{collapse_by_extra_degeneracy, Coaugmentation, CosimplicialComplex, CosimplicialMap};
use crate::exactlin::{Field, Matrix};
use crate::site::{block_sum, Poset, Sheaf, SheafMap};

/// Weakly increasing chains `y_0 ≤ y_1 ≤ … ≤ y_p` with `y_0 ∈ start`,
/// in lexicographic order of element indices.
pub fn weak_chains(poset: &Poset, start: &[usize], p: usize) -> Vec<Vec<usize>> {
    fn extend(poset: &Poset, cur: &mut Vec<usize>, len: usize, out: &mut Vec<Vec<usize>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        let last = *cur.last().unwrap();
        for z in poset.elements() {
            if poset.leq(last, z) {
                cur.push(z);
                extend(poset, cur, len, out);
                cur.pop();
            }
        }
    }
    let mut start = start.to_vec();
    start.sort_unstable();
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(p + 1);
    for y in start {
        cur.push(y);
        extend(poset, &mut cur, p + 1, &mut out);
        cur.pop();
    }
    out
}

/// The chains of one level together with a lookup table.
#[derive(Clone, Debug)]
pub(crate) struct ChainLevel {
    pub chains: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
}

impl ChainLevel {
    pub fn new(poset: &Poset, start: &[usize], p: usize) -> ChainLevel {
        let chains = weak_chains(poset, start, p);
        let index = chains.iter().enumerate().map(|(k, c)| (c.clone(), k)).collect();
        ChainLevel { chains, index }
    }

    pub fn position(&self, c: &[usize]) -> usize {
        self.index[c]
    }
}

fn last(c: &[usize]) -> usize {
    *c.last().unwrap()
}

/// `⊕_c K_{last(c)}` over the chains of a level.
pub(crate) fn chain_level_complex(k: &Sheaf, level: &ChainLevel) -> CochainComplex {
    let parts: Vec<&CochainComplex> = level.chains.iter().map(|c| k.stalk(last(c)).as_ref()).collect();
    if parts.is_empty() {
        return CochainComplex::zero(k.field());
    }
    block_sum(k.field(), &parts)
}

fn block_sizes(k: &Sheaf, level: &ChainLevel, q: Degree) -> Vec<usize> {
    let s: Vec<usize> = level.chains.iter().map(|c| k.stalk(last(c)).dim(q)).collect();
    if s.is_empty() {
        vec![0]
    } else {
        s
    }
}

/// A matrix between chain-indexed sums, one block per (row chain, column chain) pair.
fn chain_matrix(
    field: Field,
    k: &Sheaf,
    rows: &ChainLevel,
    cols: &ChainLevel,
    q: Degree,
    blocks: impl IntoIterator<Item = (usize, usize, Matrix)>,
) -> Matrix {
    let rs = block_sizes(k, rows, q);
    let cs = block_sizes(k, cols, q);
    let blocks: Vec<(usize, usize, Matrix)> = blocks.into_iter().collect();
    Matrix::from_blocks(field, &rs, &cs, blocks.iter().map(|(i, j, m)| (*i, *j, m)))
}

/// The cosimplicial complex `p ↦ ⊕_{y_0 ∈ S, y_0 ≤ … ≤ y_p} K_{y_p}` for an
/// up-closed start set `S`: `d^i` drops `y_i` (restricting when `i = p`) and
/// `s^j` repeats `y_j`. With `S = ↑x` this is the stalk `(G•K)_x`; with
/// `S = U` it is `Γ(U, G•K)`.
pub(crate) struct ChainResolution {
    pub levels: Vec<ChainLevel>,
    pub complex: CosimplicialComplex,
}

pub(crate) fn chain_resolution(k: &Sheaf, start: &[usize], p_max: usize, with_codegeneracies: bool) -> ChainResolution {
    let poset = k.poset();
    let field = k.field();
    let levels: Vec<ChainLevel> = (0..=p_max).map(|p| ChainLevel::new(poset, start, p)).collect();
    let complexes: Vec<Arc<CochainComplex>> = levels.iter().map(|l| Arc::new(chain_level_complex(k, l))).collect();
    let mut cofaces = vec![Vec::new()];
    for p in 1..=p_max {
        let (src, tgt) = (&levels[p - 1], &levels[p]);
        let maps = (0..=p)
            .map(|i| {
                ChainMap::from_fn_unchecked(complexes[p - 1].clone(), complexes[p].clone(), |q| {
                    let blocks = tgt.chains.iter().enumerate().map(|(t, c)| {
                        let mut face = c.clone();
                        face.remove(i);
                        let s = src.position(&face);
                        let m = if i < p {
                            Matrix::identity(field, k.stalk(last(c)).dim(q))
                        } else {
                            k.restriction(c[p - 1], c[p]).component(q)
                        };
                        (t, s, m)
                    });
                    chain_matrix(field, k, tgt, src, q, blocks)
                })
            })
            .collect();
        cofaces.push(maps);
    }
    let codegeneracies = (0..p_max)
        .map(|p| {
            if !with_codegeneracies {
                return (0..=p).map(|_| ChainMap::zero(complexes[p + 1].clone(), complexes[p].clone())).collect();
            }
            let (src, tgt) = (&levels[p + 1], &levels[p]);
            (0..=p)
                .map(|j| {
                    ChainMap::from_fn_unchecked(complexes[p + 1].clone(), complexes[p].clone(), |q| {
                        let blocks = tgt.chains.iter().enumerate().map(|(t, c)| {
                            let mut deg = c.clone();
                            deg.insert(j, c[j]);
                            (t, src.position(&deg), Matrix::identity(field, k.stalk(last(c)).dim(q)))
                        });
                        chain_matrix(field, k, tgt, src, q, blocks)
                    })
                })
                .collect()
        })
        .collect();
    let complex = CosimplicialComplex::new_unchecked(complexes, cofaces, codegeneracies).expect("chain resolution shapes");
    ChainResolution { levels, complex }
}

/// The Godement resolution `G^p(F) = T^{p+1}(F)`, stored stalkwise:
/// `(G^p F)_x = ⊕_{x ≤ y_0 ≤ … ≤ y_p} F_{y_p}`.
#[derive(Clone, Debug)]
pub struct CosimplicialSheaf {
    base: Arc<Sheaf>,
    p_max: usize,
    stalks: Vec<Arc<CosimplicialComplex>>,
    chains: Vec<Vec<ChainLevel>>,
}

impl CosimplicialSheaf {
    pub fn p_max(&self) -> usize {
        self.p_max
    }

    pub fn poset(&self) -> &Arc<Poset> {
        self.base.poset()
    }

    /// The sheaf being resolved.
    pub fn base(&self) -> &Arc<Sheaf> {
        &self.base
    }

    /// The cosimplicial complex of stalks at `x`.
    pub fn at(&self, x: usize) -> &Arc<CosimplicialComplex> {
        &self.stalks[x]
    }

    /// Chains `x ≤ y_0 ≤ … ≤ y_p` indexing the summands of `(G^p)_x`.
    pub fn chains(&self, x: usize, p: usize) -> &[Vec<usize>] {
        &self.chains[x][p].chains
    }

    /// The restriction `(G•)_x -> (G•)_y` for `x ≤ y`: keep the chains starting above `y`.
    pub fn restriction(&self, x: usize, y: usize) -> CosimplicialMap {
        assert!(self.poset().leq(x, y), "restriction needs x ≤ y");
        let (gx, gy) = (&self.stalks[x], &self.stalks[y]);
        let k = &self.base;
        let comps = (0..=self.p_max)
            .map(|p| {
                let (src, tgt) = (&self.chains[x][p], &self.chains[y][p]);
                ChainMap::from_fn_unchecked(gx.level(p).clone(), gy.level(p).clone(), |q| {
                    let blocks = tgt.chains.iter().enumerate().map(|(t, c)| {
                        (t, src.position(c), Matrix::identity(k.field(), k.stalk(last(c)).dim(q)))
                    });
                    chain_matrix(k.field(), k, tgt, src, q, blocks)
                })
            })
            .collect();
        CosimplicialMap::new_unchecked(gx.clone(), gy.clone(), comps).expect("restriction shapes")
    }

    /// Level `p` as a sheaf.
    pub fn level(&self, p: usize) -> Sheaf {
        let poset = self.poset();
        let stalks: Vec<Arc<CochainComplex>> = self.stalks.iter().map(|g| g.level(p).clone()).collect();
        let restrictions = poset
            .elements()
            .flat_map(|x| poset.elements().map(move |y| (x, y)))
            .filter(|&(x, y)| poset.lt(x, y))
            .map(|(x, y)| ((x, y), self.restriction(x, y).level(p).clone()))
            .collect();
        Sheaf::from_parts_unchecked(poset.clone(), self.base.field(), stalks, restrictions)
    }

    /// The coface `d^i : G^{p-1} -> G^p` as a sheaf map.
    pub fn coface(&self, p: usize, i: usize) -> SheafMap {
        let comps = self.stalks.iter().map(|g| g.coface(p, i).clone()).collect();
        SheafMap::new_unchecked(Arc::new(self.level(p - 1)), Arc::new(self.level(p)), comps).expect("coface endpoints")
    }

    /// The codegeneracy `s^j : G^{p+1} -> G^p` as a sheaf map.
    pub fn codegeneracy(&self, p: usize, j: usize) -> SheafMap {
        let comps = self.stalks.iter().map(|g| g.codegeneracy(p, j).clone()).collect();
        SheafMap::new_unchecked(Arc::new(self.level(p + 1)), Arc::new(self.level(p)), comps)
            .expect("codegeneracy endpoints")
    }

    /// Cosimplicial identities at every stalk, and restrictions commuting with
    /// every structure map.
    pub fn check(&self) -> Result<(), GodementError> {
        for g in &self.stalks {
            g.check_identities()?;
        }
        let poset = self.poset();
        for x in poset.elements() {
            for y in poset.elements() {
                if poset.lt(x, y) {
                    let r = self.restriction(x, y);
                    r.check_commutes()?;
                    for p in 0..self.p_max {
                        for j in 0..=p {
                            let lhs = r.level(p).compose(self.stalks[x].codegeneracy(p, j));
                            let rhs = self.stalks[y].codegeneracy(p, j).compose(r.level(p + 1));
                            if !lhs.same_components(&rhs) {
                                return Err(GodementError::Structure(format!(
                                    "restriction {} → {} does not commute with s^{j} in level {p}",
                                    poset.name(x),
                                    poset.name(y)
                                )));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// `G•(f)` at the stalk `x`: `f_{y_p}` on the summand of every chain.
    pub fn map_at(&self, target: &CosimplicialSheaf, f: &SheafMap, x: usize) -> CosimplicialMap {
        let (gs, gt) = (&self.stalks[x], &target.stalks[x]);
        let field = self.base.field();
        let comps = (0..=self.p_max.min(target.p_max))
            .map(|p| {
                let level = &self.chains[x][p];
                ChainMap::from_fn_unchecked(gs.level(p).clone(), gt.level(p).clone(), |q| {
                    let rs = block_sizes(&target.base, level, q);
                    let cs = block_sizes(&self.base, level, q);
                    let blocks: Vec<Matrix> = level.chains.iter().map(|c| f.component(last(c)).component(q)).collect();
                    Matrix::from_blocks(field, &rs, &cs, blocks.iter().enumerate().map(|(t, m)| (t, t, m)))
                })
            })
            .collect();
        CosimplicialMap::new_unchecked(gs.clone(), gt.clone(), comps).expect("G(f) shapes")
    }
}

/// The canonical (Godement) cosimplicial resolution of `f` up to level `p_max`,
/// with `η_x : F_x -> (G^0 F)_x = ⊕_{y ≥ x} F_y` given by the restrictions.
#[derive(Clone, Debug)]
pub struct Resolution {
    pub g: CosimplicialSheaf,
    pub eta: Vec<ChainMap>,
}

pub fn godement_resolution(f: &Arc<Sheaf>, p_max: usize) -> Resolution {
    let poset = f.poset();
    let field = f.field();
    let mut stalks = Vec::with_capacity(poset.len());
    let mut chains = Vec::with_capacity(poset.len());
    for x in poset.elements() {
        let r = chain_resolution(f, poset.up(x).members(), p_max, true);
        stalks.push(Arc::new(r.complex));
        chains.push(r.levels);
    }
    let eta = poset
        .elements()
        .map(|x| {
            let g0 = stalks[x].level(0).clone();
            let level = &chains[x][0];
            ChainMap::from_fn_unchecked(f.stalk(x).clone(), g0, |q| {
                let rs = block_sizes(f, level, q);
                let blocks: Vec<Matrix> = level.chains.iter().map(|c| f.restriction(x, c[0]).component(q)).collect();
                Matrix::from_blocks(field, &rs, &[f.stalk(x).dim(q)], blocks.iter().enumerate().map(|(t, m)| (t, 0, m)))
            })
        })
        .collect();
    Resolution { g: CosimplicialSheaf { base: f.clone(), p_max, stalks, chains }, eta }
}

impl Resolution {
    /// Structure checks of [`CosimplicialSheaf::check`] plus: every `η_x`
    /// is a chain map, commutes with the restrictions and equalizes `d^0, d^1`.
    pub fn check(&self) -> Result<(), GodementError> {
        self.g.check()?;
        let f = self.g.base();
        let poset = f.poset();
        for x in poset.elements() {
            self.eta[x].check_commutes()?;
            let gx = self.g.at(x);
            if gx.p_max() >= 1 && !gx.coface(1, 0).compose(&self.eta[x]).same_components(&gx.coface(1, 1).compose(&self.eta[x])) {
                return Err(GodementError::Structure(format!("d^0 η ≠ d^1 η at {}", poset.name(x))));
            }
            for y in poset.elements().filter(|&y| poset.lt(x, y)) {
                let lhs = self.g.restriction(x, y).level(0).compose(&self.eta[x]);
                let rhs = self.eta[y].compose(&f.restriction(x, y));
                if !lhs.same_components(&rhs) {
                    return Err(GodementError::Structure(format!(
                        "η does not commute with the restriction {} → {}",
                        poset.name(x),
                        poset.name(y)
                    )));
                }
            }
        }
        Ok(())
    }

    /// `η` as a sheaf map `F -> G^0(F)`.
    pub fn eta_map(&self) -> SheafMap {
        SheafMap::new_unchecked(self.g.base().clone(), Arc::new(self.g.level(0)), self.eta.clone()).expect("η endpoints")
    }

    /// The coaugmentation `c(F_x) -> (G•F)_x`, level `p` being `d^0 ⋯ d^0 η`.
    pub fn coaugmentation_at(&self, x: usize) -> CosimplicialMap {
        let gx = self.g.at(x);
        let mut comps = vec![self.eta[x].clone()];
        for p in 1..=gx.p_max() {
            let next = gx.coface(p, 0).compose(&comps[p - 1]);
            comps.push(next);
        }
        let c = Arc::new(CosimplicialComplex::constant(self.g.base().stalk(x).clone(), gx.p_max()));
        CosimplicialMap::new_unchecked(c, gx.clone(), comps).expect("coaugmentation shapes")
    }

    /// The stalkwise extra codegeneracy `s^{-1}(b)(y_0, …, y_{p-1}) = b(x, y_0, …, y_{p-1})`.
    pub fn extra_degeneracy(&self, x: usize) -> Coaugmentation {
        let f = self.g.base();
        let field = f.field();
        let gx = self.g.at(x);
        let levels = &self.g.chains[x];
        let extra = (0..=gx.p_max())
            .map(|p| {
                let src = &levels[p];
                if p == 0 {
                    let fx = f.stalk(x).clone();
                    return ChainMap::from_fn_unchecked(gx.level(0).clone(), fx.clone(), |q| {
                        let cs = block_sizes(f, src, q);
                        let id = Matrix::identity(field, fx.dim(q));
                        Matrix::from_blocks(field, &[fx.dim(q)], &cs, [(0, src.position(&[x]), &id)])
                    });
                }
                let tgt = &levels[p - 1];
                ChainMap::from_fn_unchecked(gx.level(p).clone(), gx.level(p - 1).clone(), |q| {
                    let blocks = tgt.chains.iter().enumerate().map(|(t, c)| {
                        let mut longer = vec![x];
                        longer.extend_from_slice(c);
                        (t, src.position(&longer), Matrix::identity(field, f.stalk(last(c)).dim(q)))
                    });
                    chain_matrix(field, f, tgt, src, q, blocks)
                })
            })
            .collect();
        Coaugmentation { source: f.stalk(x).clone(), eps: self.eta[x].clone(), extra }
    }

    /// Verify the extra-degeneracy identities at `x` and certify that `s(η)`
    /// is a quasi-isomorphism there.
    pub fn certify_extra_degeneracy(&self, x: usize, top: Degree) -> Result<QuisReport, GodementError> {
        Ok(collapse_by_extra_degeneracy(self.g.at(x), &self.extra_degeneracy(x), top)?)
    }
}
