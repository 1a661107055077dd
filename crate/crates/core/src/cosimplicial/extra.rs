use std::sync::Arc;

use super::{lambda, simple_map, CosimplicialComplex, CosimplicialError, CosimplicialMap};
use crate::complexes::{is_quis, ChainMap, CochainComplex, Degree, QuisReport};

/// A coaugmentation `ε : A -> X(0)` with a candidate extra codegeneracy
/// `extra[p] = s^{-1} : X(p) -> X(p-1)` (`extra[0] : X(0) -> A`).
#[derive(Clone, Debug)]
pub struct Coaugmentation {
    pub source: Arc<CochainComplex>,
    pub eps: ChainMap,
    pub extra: Vec<ChainMap>,
}

fn fail(identity: String, level: i64) -> CosimplicialError {
    CosimplicialError::NotExtraDegeneracy { identity, level }
}

/// Verify the extra-degeneracy identities
/// `s^{-1} d^0 = id`, `s^{-1} d^i = d^{i-1} s^{-1}` (`i >= 1`),
/// `s^{-1} s^j = s^{j-1} s^{-1}` (`j >= 1`), `s^{-1} s^0 = s^{-1} s^{-1}`,
/// where `d^0 : X(-1) = A -> X(0)` is `ε`; then certify that `s(ε)` is a
/// quasi-isomorphism in the certified degrees.
pub fn collapse_by_extra_degeneracy(
    x: &Arc<CosimplicialComplex>,
    coaug: &Coaugmentation,
    top: Degree,
) -> Result<QuisReport, CosimplicialError> {
    let pm = x.p_max();
    let s = &coaug.extra;
    if s.len() != pm + 1 {
        return Err(CosimplicialError::Malformed(format!("need {} extra codegeneracies", pm + 1)));
    }
    let a = &coaug.source;
    let eps = &coaug.eps;
    // coface d^i : X(p-1) -> X(p) with X(-1) = A
    let d = |p: usize, i: usize| -> ChainMap { if p == 0 { eps.clone() } else { x.coface(p, i).clone() } };
    let id_below = |p: usize| if p == 0 { ChainMap::identity(a.clone()) } else { ChainMap::identity(x.level(p - 1).clone()) };

    if pm >= 1 && !x.coface(1, 0).compose(eps).same_components(&x.coface(1, 1).compose(eps)) {
        return Err(fail("d^0 ε = d^1 ε".into(), 0));
    }
    for p in 0..=pm {
        if !s[p].compose(&d(p, 0)).same_components(&id_below(p)) {
            return Err(fail("s^{-1} d^0 = id".into(), p as i64));
        }
        for i in 1..=p {
            let lhs = s[p].compose(&d(p, i));
            let rhs = d(p - 1, i - 1).compose(&s[p - 1]);
            if !lhs.same_components(&rhs) {
                return Err(fail(format!("s^{{-1}} d^{i} = d^{} s^{{-1}}", i - 1), p as i64));
            }
        }
        if p < pm {
            for j in 0..=p {
                let lhs = s[p].compose(x.codegeneracy(p, j));
                let rhs = if j == 0 {
                    s[p].compose(&s[p + 1])
                } else {
                    x.codegeneracy(p - 1, j - 1).compose(&s[p + 1])
                };
                if !lhs.same_components(&rhs) {
                    return Err(fail(format!("s^{{-1}} s^{j}"), p as i64));
                }
            }
        }
    }

    // ε extends to c(A) -> X through the cofaces d^0
    let mut comps = vec![eps.clone()];
    for p in 1..=pm {
        let next = x.coface(p, 0).compose(&comps[p - 1]);
        comps.push(next);
    }
    let ca = Arc::new(CosimplicialComplex::constant(a.clone(), pm));
    let f = CosimplicialMap::new(ca, x.clone(), comps)?;
    let sf = simple_map(&f, top)?;
    let lam = lambda(a, top)?;
    let composite = sf.compose(&lam.retarget(a.clone(), sf.source().clone()));
    Ok(is_quis(&composite))
}
