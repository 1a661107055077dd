use std::sync::Arc;

use super::{CosimplicialComplex, CosimplicialError, CosimplicialMap};
use crate::complexes::{ChainMap, CochainComplex, Degree};
use crate::exactlin::Matrix;

/// `A^{Δ[1]}` with its two evaluations onto the constant object `cA`.
#[derive(Clone, Debug)]
pub struct PathObject {
    pub object: Arc<CosimplicialComplex>,
    pub constant: Arc<CosimplicialComplex>,
    /// Evaluation at the vertex hit by `d_0`.
    pub ev0: CosimplicialMap,
    pub ev1: CosimplicialMap,
}

/// `P(n) = ∏_{β : [n] -> [1]} A`, one factor per monotone `β`; the factor is
/// indexed by the number `t` of elements sent to 0, and `P(θ)(a)_β = a_{βθ}`.
pub fn path_object(a: &Arc<CochainComplex>, top: Degree) -> Result<PathObject, CosimplicialError> {
    let field = a.field();
    let b = a.degrees().find(|n| a.dim(*n) > 0).unwrap_or(top);
    let pm = (top - b).max(0) as usize;
    let levels: Vec<Arc<CochainComplex>> = (0..=pm)
        .map(|n| {
            let copies = n + 2;
            let dims = a.degrees().map(|q| a.dim(q) * copies).collect();
            let diffs = a
                .degrees()
                .take_while(|q| *q < a.hi())
                .map(|q| Matrix::block_diag(field, &vec![&a.diff(q); copies]))
                .collect();
            Arc::new(CochainComplex::new(field, a.lo(), dims, diffs).expect("product of complexes"))
        })
        .collect();
    // θ : [src] -> [tgt] as a vector of values
    let induced = |theta: &[usize], src: usize, tgt: usize| -> ChainMap {
        ChainMap::from_fn_unchecked(levels[src].clone(), levels[tgt].clone(), |q| {
            let d = a.dim(q);
            let entries = (0..tgt + 2).flat_map(|t| {
                let tp = theta.iter().filter(|&&x| x < t).count();
                (0..d).map(move |k| (t * d + k, tp * d + k, 1))
            });
            Matrix::from_entries(field, (tgt + 2) * d, (src + 2) * d, entries)
        })
    };
    let cofaces = (0..=pm)
        .map(|p| {
            if p == 0 {
                return Vec::new();
            }
            (0..=p)
                .map(|i| {
                    let theta: Vec<usize> = (0..p).map(|x| if x < i { x } else { x + 1 }).collect();
                    induced(&theta, p - 1, p)
                })
                .collect()
        })
        .collect();
    let codegeneracies = (0..pm)
        .map(|p| {
            (0..=p)
                .map(|j| {
                    let theta: Vec<usize> = (0..p + 2).map(|x| if x <= j { x } else { x - 1 }).collect();
                    induced(&theta, p + 1, p)
                })
                .collect()
        })
        .collect();
    let object = Arc::new(CosimplicialComplex::new(levels, cofaces, codegeneracies)?);
    let constant = Arc::new(CosimplicialComplex::constant(a.clone(), pm));
    let ev = |vertex_one: bool| -> Result<CosimplicialMap, CosimplicialError> {
        let comps = (0..=pm)
            .map(|n| {
                let t = if vertex_one { 0 } else { n + 1 };
                ChainMap::from_fn_unchecked(object.level(n).clone(), a.clone(), |q| {
                    let d = a.dim(q);
                    Matrix::from_entries(field, d, (n + 2) * d, (0..d).map(|k| (k, t * d + k, 1)))
                })
            })
            .collect();
        CosimplicialMap::new(object.clone(), constant.clone(), comps)
    };
    Ok(PathObject { ev0: ev(true)?, ev1: ev(false)?, object, constant })
}
