use std::sync::Arc;

use super::hyper::{hypercohomology_sheaf, rho_sections, Hypercohomology};
use super::GodementError;
use crate::complexes::{is_quis, ChainMap, Degree};
use crate::exec::Exec;
use crate::site::{direct_image, sections, sections_map, up_sets, MonotoneMap, OpenSet, Sheaf, SheafMap};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EquivalenceKind {
    /// Quasi-isomorphism on every stalk (the class W).
    Local,
    /// Quasi-isomorphism on sections over every open (the class S).
    Global,
}

/// A failure: the point or open (by name) and the degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub place: String,
    pub degree: Degree,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub kind: EquivalenceKind,
    pub verdict: bool,
    pub witnesses: Vec<Witness>,
    /// `None` when nothing was truncated.
    pub certified_degree: Option<Degree>,
}

impl EquivalenceReport {
    fn from_witnesses(kind: EquivalenceKind, witnesses: Vec<Witness>, certified_degree: Option<Degree>) -> Self {
        EquivalenceReport { kind, verdict: witnesses.is_empty(), witnesses, certified_degree }
    }
}

fn min_certified(a: Option<Degree>, b: Option<Degree>) -> Option<Degree> {
    [a, b].into_iter().flatten().min()
}

fn witnesses_of(place: String, m: &ChainMap) -> Vec<Witness> {
    is_quis(m).failures().into_iter().map(|degree| Witness { place: place.clone(), degree }).collect()
}

/// The opens to test: the supplied list, or every nonempty open.
fn opens_for(sheaf: &Sheaf, opens: Option<&[OpenSet]>) -> Result<Vec<OpenSet>, GodementError> {
    let all = match opens {
        Some(o) => {
            for u in o {
                OpenSet::new(sheaf.poset(), u.members().iter().copied())?;
            }
            o.to_vec()
        }
        None => up_sets(sheaf.poset())?,
    };
    Ok(all.into_iter().filter(|u| !u.is_empty()).collect())
}

/// Local: `f_x` is a quasi-isomorphism at every point. Global: `Γ(U, f)` is
/// one for every open (all up-sets unless a list is supplied).
pub fn equivalence_check(
    f: &SheafMap,
    kind: EquivalenceKind,
    opens: Option<&[OpenSet]>,
    exec: Exec,
) -> Result<EquivalenceReport, GodementError> {
    let (s, t) = (f.source(), f.target());
    let certified = min_certified(s.certified_degree(), t.certified_degree());
    let poset = s.poset();
    let witnesses: Vec<Witness> = match kind {
        EquivalenceKind::Local => exec
            .map_range(poset.len(), |x| witnesses_of(poset.name(x).to_string(), f.component(x)))
            .into_iter()
            .flatten()
            .collect(),
        EquivalenceKind::Global => {
            let us = opens_for(s, opens)?;
            let per_open = exec.map(us, |u| -> Result<Vec<Witness>, GodementError> {
                let (ss, st) = (sections(s, &u)?, sections(t, &u)?);
                Ok(witnesses_of(u.label(poset), &sections_map(f, &ss, &st)))
            });
            per_open.into_iter().collect::<Result<Vec<_>, _>>()?.into_iter().flatten().collect()
        }
    };
    Ok(EquivalenceReport::from_witnesses(kind, witnesses, certified))
}

/// Thomason descent of `K`: `Γ(U, ρ_K)` is a quasi-isomorphism for every
/// open, with `Γ(U, ℍ_X K)` computed from the product description.
pub fn descent_check(
    k: &Sheaf,
    top: Degree,
    opens: Option<&[OpenSet]>,
    exec: Exec,
) -> Result<EquivalenceReport, GodementError> {
    let us = opens_for(k, opens)?;
    let poset = k.poset();
    let per_open = exec.map(us, |u| -> Result<Vec<Witness>, GodementError> {
        Ok(witnesses_of(u.label(poset), &rho_sections(k, &u, top)?))
    });
    let witnesses = per_open.into_iter().collect::<Result<Vec<_>, _>>()?.into_iter().flatten().collect();
    Ok(EquivalenceReport::from_witnesses(EquivalenceKind::Global, witnesses, min_certified(k.certified_degree(), Some(top - 1))))
}

/// `ρ_{ℍ_X F} : ℍ_X F -> ℍ_X(ℍ_X F)` is a global equivalence: both layers are
/// truncated at `top`.
pub fn thomason_check(f: &Arc<Sheaf>, top: Degree, exec: Exec) -> Result<EquivalenceReport, GodementError> {
    let h = hypercohomology_sheaf(f, top, exec)?;
    thomason_check_of(&h, exec)
}

pub fn thomason_check_of(h: &Hypercohomology, exec: Exec) -> Result<EquivalenceReport, GodementError> {
    descent_check(&h.h, h.top, None, exec)
}

/// On an Alexandrov site the stalk at `x` is evaluation at `↑x` and the simple
/// is computed objectwise, so `θ_x : s(G•F)_x -> s((G•F)_x)` is the identity
/// in every degree. The check rebuilds `s((G•F)_x)` from the stalk of the
/// resolution and compares it with the stalk of `ℍ_X F`.
pub fn stalk_commutation_check(h: &Hypercohomology) -> Result<EquivalenceReport, GodementError> {
    let poset = h.h.poset();
    let mut witnesses = Vec::new();
    for x in poset.elements() {
        let rebuilt = Arc::new(crate::cosimplicial::simple(h.resolution.g.at(x), h.top)?);
        let stalk = h.h.stalk(x);
        let theta = ChainMap::from_fn_unchecked(stalk.clone(), rebuilt.clone(), |n| {
            crate::exactlin::Matrix::identity(stalk.field(), stalk.dim(n))
        });
        for n in stalk.degrees().chain(rebuilt.degrees()) {
            if stalk.dim(n) != rebuilt.dim(n) || !theta.component(n).is_identity() {
                witnesses.push(Witness { place: poset.name(x).to_string(), degree: n });
            }
        }
        if **stalk != *rebuilt || theta.check_commutes().is_err() {
            witnesses.push(Witness { place: poset.name(x).to_string(), degree: h.top });
        }
    }
    witnesses.dedup();
    Ok(EquivalenceReport::from_witnesses(EquivalenceKind::Local, witnesses, Some(h.certified_degree())))
}

/// `ℝf⁎(F) = f⁎ ℍ_X(F)`.
pub fn derived_direct_image(
    f: &MonotoneMap,
    sheaf: &Arc<Sheaf>,
    top: Degree,
    exec: Exec,
) -> Result<Sheaf, GodementError> {
    if f.source() != sheaf.poset() {
        return Err(GodementError::Site(crate::site::SiteError::NotMonotone("map and sheaf live on different sites".into())));
    }
    let h = hypercohomology_sheaf(sheaf, top, exec)?;
    Ok(direct_image(f, &h.h)?)
}
