//! The Godement triple `T = p⁎p*`, the cosimplicial resolution
//! `G^p(F) = T^{p+1}(F)`, the hypercohomology sheaf `ℍ_X(F) = s(G•F)` with
//! `ρ_F : F -> ℍ_X(F)`, local and global equivalences, Thomason descent and
//! the derived functors `ℝΓ`, `ℝf⁎`.
//!
//! On a finite Alexandrov site `(TF)_x = ⊕_{y ≥ x} F_y`, so
//! `(G^p F)_x = ⊕_{x ≤ y_0 ≤ … ≤ y_p} F_{y_p}` and `Γ(U, TK) = ∏_{y ∈ U} K_y`.
//! Products over points are finite biproducts, hence exact, and filtered
//! colimits are attained; nothing further needs checking for them.

mod equivalence;
mod hyper;
mod resolution;
mod spectral;
mod suites;
mod triple;

#[cfg(test)]
mod tests;

use thiserror::Error;

use crate::complexes::{ComplexError, Degree};
use crate::cosimplicial::CosimplicialError;
use crate::site::SiteError;

pub use equivalence::{
    derived_direct_image, descent_check, equivalence_check, stalk_commutation_check, thomason_check, thomason_check_of,
    EquivalenceKind, EquivalenceReport, Witness,
};
pub use hyper::{
    derived_sections, derived_sections_by_products, hyper_map, hyper_sections, hypercohomology_sheaf, levels_for,
    rho_sections, DerivedSections, Hypercohomology,
};
pub use resolution::{godement_resolution, weak_chains, CosimplicialSheaf, Resolution};
pub use spectral::{cohomology_sheaf, descent_e2_from_cohomology_sheaves, descent_spectral_sequence, DescentSpectralSequence};
pub use suites::*;
pub use triple::{eta, godement_t, iterated_resolution, nu, t_map, t_sheaf, GodementTriple, IteratedResolution};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GodementError {
    #[error(transparent)]
    Site(#[from] SiteError),
    #[error(transparent)]
    Cosimplicial(#[from] CosimplicialError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("truncation at degree {top} is below the top degree {needed} of the coefficients")]
    InsufficientLevels { top: Degree, needed: Degree },
    #[error("triple law fails: {0}")]
    TripleLaw(String),
    #[error("{0}")]
    Structure(String),
}
