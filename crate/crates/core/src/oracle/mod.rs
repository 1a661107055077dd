//! Verification routes for `ℝΓ` that share no code with the Godement
//! construction: cosimplicial replacement over chains of the site, and
//! cochains of the order complex for constant coefficients.

use std::collections::{BTreeMap, HashMap};

use crate::complexes::{betti, CochainComplex, Degree};
use crate::exactlin::{Field, Matrix};
use crate::site::{OpenSet, Poset, Sheaf};

#[cfg(test)]
mod tests;

/// Chains `x₀ ≤ … ≤ x_p` (or `<` when `strict`) in `members`, lexicographic.
fn chains_of(poset: &Poset, members: &[usize], p: usize, strict: bool) -> Vec<Vec<usize>> {
    let mut sorted = members.to_vec();
    sorted.sort_unstable();
    let mut out: Vec<Vec<usize>> = sorted.iter().map(|&x| vec![x]).collect();
    for _ in 0..p {
        out = out
            .into_iter()
            .flat_map(|c| {
                let last = *c.last().unwrap();
                sorted
                    .iter()
                    .filter(move |&&y| if strict { poset.lt(last, y) } else { poset.leq(last, y) })
                    .map(move |&y| {
                        let mut next = c.clone();
                        next.push(y);
                        next
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
    }
    out
}

fn sign(k: usize) -> i64 {
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Chains grouped by length, with lookup.
struct ChainTable {
    by_len: Vec<Vec<Vec<usize>>>,
    index: Vec<HashMap<Vec<usize>, usize>>,
}

impl ChainTable {
    fn new(poset: &Poset, members: &[usize], p_max: usize, strict: bool) -> ChainTable {
        let mut by_len = Vec::new();
        for p in 0..=p_max {
            let c = chains_of(poset, members, p, strict);
            if c.is_empty() {
                break;
            }
            by_len.push(c);
        }
        let index = by_len.iter().map(|cs| cs.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect()).collect();
        ChainTable { by_len, index }
    }

    fn p_max(&self) -> Option<usize> {
        self.by_len.len().checked_sub(1)
    }
}

/// Total complex of `C^{p,q} = ∏_σ F_{last σ}^q`, degrees `lo..=top`.
fn replacement_total(f: &Sheaf, table: &ChainTable, lo: Degree, top: Degree) -> CochainComplex {
    let field = f.field();
    // Blocks of total degree n: (p, chain index, size).
    let blocks = |n: Degree| -> Vec<(usize, usize, usize)> {
        let mut v = Vec::new();
        for (p, cs) in table.by_len.iter().enumerate() {
            let q = n - p as Degree;
            for (i, c) in cs.iter().enumerate() {
                v.push((p, i, f.stalk(*c.last().unwrap()).dim(q)));
            }
        }
        v
    };
    let layouts: Vec<Vec<(usize, usize, usize)>> = (lo..=top).map(blocks).collect();
    let dims: Vec<usize> = layouts.iter().map(|l| l.iter().map(|b| b.2).sum()).collect();
    let mut diffs = Vec::new();
    for n in lo..top {
        let src = &layouts[(n - lo) as usize];
        let tgt = &layouts[(n - lo + 1) as usize];
        let src_pos: HashMap<(usize, usize), usize> = src.iter().enumerate().map(|(k, b)| ((b.0, b.1), k)).collect();
        let mut parts: Vec<(usize, usize, Matrix)> = Vec::new();
        for (row, &(p1, j, _)) in tgt.iter().enumerate() {
            let tau = &table.by_len[p1][j];
            let y = *tau.last().unwrap();
            // Internal differential with sign (-1)^p.
            let q1 = n + 1 - p1 as Degree;
            parts.push((row, src_pos[&(p1, j)], f.stalk(y).diff(q1 - 1).scale(sign(p1))));
            if p1 == 0 {
                continue;
            }
            let p = p1 - 1;
            let q = n - p as Degree;
            for k in 0..=p1 {
                let mut face = tau.clone();
                face.remove(k);
                let col = src_pos[&(p, table.index[p][&face])];
                let x = *face.last().unwrap();
                let m = if k == p1 { f.restriction(x, y).component(q) } else { Matrix::identity(field, f.stalk(x).dim(q)) };
                parts.push((row, col, m.scale(sign(k))));
            }
        }
        let rs: Vec<usize> = tgt.iter().map(|b| b.2).collect();
        let cs: Vec<usize> = src.iter().map(|b| b.2).collect();
        diffs.push(Matrix::from_blocks(field, &rs, &cs, parts.iter().map(|(a, b, m)| (*a, *b, m))));
    }
    CochainComplex::new(field, lo, dims, diffs).expect("replacement total complex squares to zero")
}

/// `ℝΓ(U, F)` as the simple of the cosimplicial replacement over weak chains
/// in `U`, truncated at `top`.
pub fn holim_replacement_on(f: &Sheaf, u: &OpenSet, top: Degree) -> CochainComplex {
    let (lo, _) = f.degree_range();
    let lo = lo.min(top);
    let table = ChainTable::new(f.poset(), u.members(), (top - lo).max(0) as usize, false);
    replacement_total(f, &table, lo, top).truncate(top)
}

/// `ℝΓ(X, F)` by cosimplicial replacement, truncated at `top`.
pub fn holim_replacement(f: &Sheaf, top: Degree) -> CochainComplex {
    holim_replacement_on(f, &OpenSet::whole(f.poset()), top)
}

/// The normalized replacement over strict chains; finite, so untruncated.
pub fn holim_replacement_normalized(f: &Sheaf, u: &OpenSet) -> CochainComplex {
    let (lo, hi) = f.degree_range();
    let table = ChainTable::new(f.poset(), u.members(), f.poset().len(), true);
    if u.is_empty() || hi < lo {
        return CochainComplex::zero(f.field());
    }
    let top = hi + table.p_max().unwrap_or(0) as Degree;
    replacement_total(f, &table, lo, top)
}

/// The order complex of a poset with its simplicial cochains.
#[derive(Clone, Debug)]
pub struct NerveComplex {
    field: Field,
    /// `p ↦` chains `x₀ < … < x_p` (weak chains in the unnormalized variant).
    pub simplices: BTreeMap<usize, Vec<Vec<usize>>>,
    /// `δ^p : C^p -> C^{p+1}` as signed incidences `(row, col, ±1)`.
    incidences: Vec<Vec<(usize, usize, i64)>>,
}

impl NerveComplex {
    fn build(poset: &Poset, field: Field, p_max: usize, strict: bool) -> NerveComplex {
        let table = ChainTable::new(poset, &poset.elements().collect::<Vec<_>>(), p_max, strict);
        let mut incidences = Vec::new();
        for p in 0..table.by_len.len().saturating_sub(1) {
            let mut inc = Vec::new();
            for (row, tau) in table.by_len[p + 1].iter().enumerate() {
                for k in 0..=p + 1 {
                    let mut face = tau.clone();
                    face.remove(k);
                    inc.push((row, table.index[p][&face], sign(k)));
                }
            }
            incidences.push(inc);
        }
        let simplices = table.by_len.into_iter().enumerate().collect();
        NerveComplex { field, simplices, incidences }
    }

    /// Strict chains.
    pub fn new(poset: &Poset, field: Field) -> NerveComplex {
        NerveComplex::build(poset, field, poset.len(), true)
    }

    /// Weak chains up to dimension `p_max`.
    pub fn unnormalized(poset: &Poset, field: Field, p_max: usize) -> NerveComplex {
        NerveComplex::build(poset, field, p_max, false)
    }

    pub fn dimension(&self) -> usize {
        self.simplices.len().saturating_sub(1)
    }

    pub fn count(&self, p: usize) -> usize {
        self.simplices.get(&p).map_or(0, Vec::len)
    }

    pub fn coboundary(&self, p: usize) -> Matrix {
        let inc = self.incidences.get(p).cloned().unwrap_or_default();
        Matrix::from_entries(self.field, self.count(p + 1), self.count(p), inc)
    }

    /// Simplicial cochains with coefficients in `k`.
    pub fn cochains(&self) -> CochainComplex {
        let dims = (0..self.simplices.len()).map(|p| self.count(p)).collect();
        let diffs = (0..self.dimension()).map(|p| self.coboundary(p)).collect();
        CochainComplex::new(self.field, 0, dims, diffs).expect("δ∘δ = 0")
    }

    /// Total complex of `C^p(nerve) ⊗ C^q` with `δ ⊗ 1 + (-1)^p 1 ⊗ d`.
    pub fn cochains_with(&self, c: &CochainComplex) -> CochainComplex {
        let field = self.field;
        assert_eq!(c.field(), field, "coefficients over a different field");
        if c.is_empty_range() || self.simplices.is_empty() {
            return CochainComplex::zero(field);
        }
        let (lo, hi) = (c.lo(), c.hi() + self.dimension() as Degree);
        let cols = |n: Degree| -> Vec<(usize, usize)> { (0..self.simplices.len()).map(|p| (p, self.count(p) * c.dim(n - p as Degree))).collect() };
        let dims: Vec<usize> = (lo..=hi).map(|n| cols(n).iter().map(|b| b.1).sum()).collect();
        let diffs = (lo..hi)
            .map(|n| {
                let (src, tgt) = (cols(n), cols(n + 1));
                let mut parts = Vec::new();
                for &(p, _) in &src {
                    let q = n - p as Degree;
                    let d = c.diff(q).scale(sign(p));
                    let copies: Vec<&Matrix> = (0..self.count(p)).map(|_| &d).collect();
                    parts.push((p, p, Matrix::block_diag(field, &copies)));
                    if p < self.dimension() {
                        let m = c.dim(q);
                        let inc = self.incidences[p].iter().flat_map(|&(r, s, e)| (0..m).map(move |t| (r * m + t, s * m + t, e)));
                        parts.push((p + 1, p, Matrix::from_entries(field, self.count(p + 1) * m, self.count(p) * m, inc)));
                    }
                }
                let rs: Vec<usize> = tgt.iter().map(|b| b.1).collect();
                let cs: Vec<usize> = src.iter().map(|b| b.1).collect();
                Matrix::from_blocks(field, &rs, &cs, parts.iter().map(|(a, b, m)| (*a, *b, m)))
            })
            .collect();
        CochainComplex::new(field, lo, dims, diffs).expect("total complex squares to zero")
    }
}

/// Cohomology of the order complex of `P` with coefficients in `C`, degrees `<= top - 1`.
pub fn constant_cohomology(poset: &Poset, field: Field, c: &CochainComplex, top: Degree) -> BTreeMap<Degree, usize> {
    let total = NerveComplex::new(poset, field).cochains_with(c);
    betti(&total).into_iter().filter(|(n, b)| *b > 0 && *n < top).collect()
}
