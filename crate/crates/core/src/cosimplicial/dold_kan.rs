//! Cosimplicial objects from normalized data: `X(p) = ⊕_{σ : [p] ↠ [k]} N^k`.
//!
//! A monotone `θ : [p] -> [m]` acts on the summand of `σ' : [m] ↠ [k']` by
//! factoring `σ'θ = ε η`: the component from the summand `η` is the identity
//! when `ε = id`, the normalized differential `δ : N^{k'-1} -> N^{k'}` when `ε`
//! is the coface `d^0`, and zero otherwise.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::{BicosimplicialComplex, BicosimplicialMap, CosimplicialComplex, CosimplicialError, CosimplicialMap};
use crate::complexes::{ChainMap, CochainComplex, Degree};
use crate::exactlin::{Field, Matrix};
use crate::random::MultiComplex;

/// Monotone surjections `[p] ↠ [k]` for `k <= k_max`, by increasing `k`.
pub fn surjections(p: usize, k_max: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for k in 0..=k_max.min(p) {
        // choose the k positions in 1..=p where the value steps up
        let mut steps: Vec<usize> = (1..=k).collect();
        loop {
            let mut s = Vec::with_capacity(p + 1);
            let mut v = 0;
            for x in 0..=p {
                if steps.contains(&x) {
                    v += 1;
                }
                s.push(v);
            }
            out.push(s);
            // next combination of k elements from 1..=p
            let mut i = k;
            while i > 0 && steps[i - 1] == p - (k - i) {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            steps[i - 1] += 1;
            for t in i..k {
                steps[t] = steps[t - 1] + 1;
            }
        }
    }
    out
}

fn coface_map(p: usize, i: usize) -> Vec<usize> {
    (0..p).map(|x| if x < i { x } else { x + 1 }).collect()
}

fn codegeneracy_map(p: usize, j: usize) -> Vec<usize> {
    (0..p + 2).map(|x| if x <= j { x } else { x - 1 }).collect()
}

/// Entries `(target summand, source summand, uses δ)` of the action of `θ`.
fn terms(theta: &[usize], src: &[Vec<usize>], tgt: &[Vec<usize>]) -> Vec<(usize, usize, bool)> {
    let index: BTreeMap<&Vec<usize>, usize> = src.iter().enumerate().map(|(k, s)| (s, k)).collect();
    let mut out = Vec::new();
    for (t, tau) in tgt.iter().enumerate() {
        let k = *tau.last().unwrap();
        let phi: Vec<usize> = theta.iter().map(|&x| tau[x]).collect();
        let mut image: Vec<usize> = phi.clone();
        image.dedup();
        if image.len() == k + 1 {
            out.push((t, index[&phi], false));
        } else if image.len() == k && image[0] == 1 {
            let eta: Vec<usize> = phi.iter().map(|v| v - 1).collect();
            if let Some(&s) = index.get(&eta) {
                out.push((t, s, true));
            }
        }
    }
    out
}

fn k_of(s: &[usize]) -> i32 {
    *s.last().unwrap() as i32
}

struct Builder<'a> {
    mc: &'a MultiComplex,
    field: Field,
    q_range: (Degree, Degree),
}

impl Builder<'_> {
    /// Complex `⊕_{summands} N^{pos(summand), q}`.
    fn level(&self, pos: &[Vec<i32>]) -> CochainComplex {
        let (lo, hi) = self.q_range;
        let at = |base: &Vec<i32>, q: Degree| {
            let mut v = base.clone();
            v.push(q);
            v
        };
        let dims = (lo..=hi).map(|q| pos.iter().map(|b| self.mc.dim(&at(b, q))).sum()).collect();
        let last = self.mc.ndirs - 1;
        let diffs = (lo..hi)
            .map(|q| {
                let parts: Vec<Matrix> = pos.iter().map(|b| self.mc.map(last, &at(b, q))).collect();
                Matrix::block_diag(self.field, &parts.iter().collect::<Vec<_>>())
            })
            .collect();
        CochainComplex::new(self.field, lo, dims, diffs).expect("normalized data is a complex")
    }

    /// Chain map assembled from `(row summand, col summand, direction or identity)`.
    fn map(
        &self,
        src: &Arc<CochainComplex>,
        tgt: &Arc<CochainComplex>,
        src_pos: &[Vec<i32>],
        tgt_pos: &[Vec<i32>],
        entries: &[(usize, usize, Option<usize>)],
    ) -> ChainMap {
        ChainMap::from_fn_unchecked(src.clone(), tgt.clone(), |q| {
            let at = |b: &Vec<i32>| {
                let mut v = b.clone();
                v.push(q);
                v
            };
            let rows: Vec<usize> = tgt_pos.iter().map(|b| self.mc.dim(&at(b))).collect();
            let cols: Vec<usize> = src_pos.iter().map(|b| self.mc.dim(&at(b))).collect();
            let blocks: Vec<(usize, usize, Matrix)> = entries
                .iter()
                .map(|&(r, c, dir)| {
                    let m = match dir {
                        None => Matrix::identity(self.field, cols[c]),
                        Some(d) => self.mc.map(d, &at(&src_pos[c])),
                    };
                    (r, c, m)
                })
                .collect();
            if rows.is_empty() || cols.is_empty() {
                return Matrix::zeros(self.field, tgt.dim(q), src.dim(q));
            }
            Matrix::from_blocks(self.field, &rows, &cols, blocks.iter().map(|(a, b, m)| (*a, *b, m)))
        })
    }
}

/// Cosimplicial complex from a bigraded `N^{k, q}` (directions: normalized
/// level `k`, internal degree `q`), levels `0..=p_max`.
pub fn dold_kan(
    mc: &MultiComplex,
    k_max: usize,
    q_range: (Degree, Degree),
    p_max: usize,
) -> Result<CosimplicialComplex, CosimplicialError> {
    assert_eq!(mc.ndirs, 2, "dold_kan expects (level, degree) data");
    let b = Builder { mc, field: mc.field, q_range };
    let surj: Vec<Vec<Vec<usize>>> = (0..=p_max).map(|p| surjections(p, k_max)).collect();
    let pos: Vec<Vec<Vec<i32>>> = surj.iter().map(|l| l.iter().map(|s| vec![k_of(s)]).collect()).collect();
    let levels: Vec<Arc<CochainComplex>> = pos.iter().map(|ps| Arc::new(b.level(ps))).collect();
    let entries = |theta: &[usize], src: usize, tgt: usize| -> Vec<(usize, usize, Option<usize>)> {
        terms(theta, &surj[src], &surj[tgt]).into_iter().map(|(t, s, d)| (t, s, d.then_some(0))).collect()
    };
    let cofaces = (0..=p_max)
        .map(|p| {
            if p == 0 {
                return Vec::new();
            }
            (0..=p)
                .map(|i| b.map(&levels[p - 1], &levels[p], &pos[p - 1], &pos[p], &entries(&coface_map(p, i), p - 1, p)))
                .collect()
        })
        .collect();
    let codegeneracies = (0..p_max)
        .map(|p| {
            (0..=p)
                .map(|j| b.map(&levels[p + 1], &levels[p], &pos[p + 1], &pos[p], &entries(&codegeneracy_map(p, j), p + 1, p)))
                .collect()
        })
        .collect();
    CosimplicialComplex::new_unchecked(levels, cofaces, codegeneracies)
}

/// The cosimplicial map induced by a map of normalized data, given by its
/// component at every position.
pub fn dold_kan_map(
    x: &Arc<CosimplicialComplex>,
    y: &Arc<CosimplicialComplex>,
    src: &MultiComplex,
    k_max: usize,
    comp: impl Fn(&[i32]) -> Matrix,
) -> Result<CosimplicialMap, CosimplicialError> {
    let field = src.field;
    let comps = (0..=x.p_max().min(y.p_max()))
        .map(|p| {
            let ks: Vec<i32> = surjections(p, k_max).iter().map(|s| k_of(s)).collect();
            ChainMap::from_fn_unchecked(x.level(p).clone(), y.level(p).clone(), |q| {
                let parts: Vec<Matrix> = ks.iter().map(|k| comp(&[*k, q])).collect();
                if parts.is_empty() {
                    return Matrix::zeros(field, 0, 0);
                }
                Matrix::block_diag(field, &parts.iter().collect::<Vec<_>>())
            })
        })
        .collect();
    CosimplicialMap::new_unchecked(x.clone(), y.clone(), comps)
}

/// Bicosimplicial complex from trigraded `N^{k, l, q}`:
/// `Z(p, p') = ⊕_{σ : [p] ↠ [k], τ : [p'] ↠ [l]} N^{k, l}`, summands ordered by `σ` then `τ`.
pub fn dold_kan_bi(
    mc: &MultiComplex,
    k_max: usize,
    q_range: (Degree, Degree),
    p_max: usize,
) -> Result<BicosimplicialComplex, CosimplicialError> {
    assert_eq!(mc.ndirs, 3, "dold_kan_bi expects (level, level, degree) data");
    let b = Builder { mc, field: mc.field, q_range };
    let surj: Vec<Vec<Vec<usize>>> = (0..=p_max).map(|p| surjections(p, k_max)).collect();
    let pos = |p: usize, r: usize| -> Vec<Vec<i32>> {
        surj[p].iter().flat_map(|s| surj[r].iter().map(move |t| vec![k_of(s), k_of(t)])).collect()
    };
    let all_pos: Vec<Vec<Vec<Vec<i32>>>> = (0..=p_max).map(|p| (0..=p_max).map(|r| pos(p, r)).collect()).collect();
    let levels: Vec<Vec<Arc<CochainComplex>>> =
        all_pos.iter().map(|row| row.iter().map(|ps| Arc::new(b.level(ps))).collect()).collect();
    // horizontal action on σ, repeated for every τ
    let h_entries = |theta: &[usize], ps: usize, pt: usize, r: usize| -> Vec<(usize, usize, Option<usize>)> {
        let w = surj[r].len();
        terms(theta, &surj[ps], &surj[pt])
            .into_iter()
            .flat_map(|(t, s, d)| (0..w).map(move |x| (t * w + x, s * w + x, d.then_some(0))))
            .collect()
    };
    let v_entries = |theta: &[usize], p: usize, rs: usize, rt: usize| -> Vec<(usize, usize, Option<usize>)> {
        let (ws, wt) = (surj[rs].len(), surj[rt].len());
        terms(theta, &surj[rs], &surj[rt])
            .into_iter()
            .flat_map(|(t, s, d)| (0..surj[p].len()).map(move |x| (x * wt + t, x * ws + s, d.then_some(1))))
            .collect()
    };
    let mk = |ps: usize, rs: usize, pt: usize, rt: usize, e: &[(usize, usize, Option<usize>)]| {
        b.map(&levels[ps][rs], &levels[pt][rt], &all_pos[ps][rs], &all_pos[pt][rt], e)
    };
    let n = p_max;
    let h_cofaces = (0..=n)
        .map(|p| {
            (0..=n)
                .map(|r| if p == 0 { Vec::new() } else { (0..=p).map(|i| mk(p - 1, r, p, r, &h_entries(&coface_map(p, i), p - 1, p, r))).collect() })
                .collect()
        })
        .collect();
    let h_codeg = (0..n)
        .map(|p| (0..=n).map(|r| (0..=p).map(|j| mk(p + 1, r, p, r, &h_entries(&codegeneracy_map(p, j), p + 1, p, r))).collect()).collect())
        .collect();
    let v_cofaces = (0..=n)
        .map(|p| {
            (0..=n)
                .map(|r| if r == 0 { Vec::new() } else { (0..=r).map(|i| mk(p, r - 1, p, r, &v_entries(&coface_map(r, i), p, r - 1, r))).collect() })
                .collect()
        })
        .collect();
    let v_codeg = (0..=n)
        .map(|p| (0..n).map(|r| (0..=r).map(|j| mk(p, r + 1, p, r, &v_entries(&codegeneracy_map(r, j), p, r + 1, r))).collect()).collect())
        .collect();
    Ok(BicosimplicialComplex::new_unchecked(levels, h_cofaces, h_codeg, v_cofaces, v_codeg))
}

pub fn dold_kan_bi_map(
    x: &Arc<BicosimplicialComplex>,
    y: &Arc<BicosimplicialComplex>,
    src: &MultiComplex,
    k_max: usize,
    comp: impl Fn(&[i32]) -> Matrix,
) -> BicosimplicialMap {
    let field = src.field;
    let n = x.p_max();
    let comps = (0..=n)
        .map(|p| {
            (0..=n)
                .map(|r| {
                    let ks: Vec<(i32, i32)> = surjections(p, k_max)
                        .iter()
                        .flat_map(|s| surjections(r, k_max).into_iter().map(move |t| (k_of(s), k_of(&t))))
                        .collect();
                    ChainMap::from_fn_unchecked(x.level(p, r).clone(), y.level(p, r).clone(), |q| {
                        let parts: Vec<Matrix> = ks.iter().map(|(k, l)| comp(&[*k, *l, q])).collect();
                        Matrix::block_diag(field, &parts.iter().collect::<Vec<_>>())
                    })
                })
                .collect()
        })
        .collect();
    BicosimplicialMap::new_unchecked(x.clone(), y.clone(), comps)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn surjection_counts_are_binomial() {
        assert_eq!(surjections(3, 3).len(), 8);
        assert_eq!(surjections(4, 2).len(), 1 + 4 + 6);
        assert!(surjections(3, 3).iter().all(|s| s[0] == 0 && s.windows(2).all(|w| w[1] - w[0] <= 1)));
    }
}
