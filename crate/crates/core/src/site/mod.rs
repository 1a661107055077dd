//! Finite Alexandrov sites and sheaves of complexes on them.
//!
//! Opens are the up-sets of the poset; the minimal open of `x` is
//! `↑x = {y : x ≤ y}`, so restrictions run along `≤` and the stalk at `x` is
//! the value on `↑x`. A sheaf is stored by its stalks; values on other opens
//! are computed as kernels.

mod poset;
mod sections;
mod sheaf;
#[cfg(test)]
mod tests;

use thiserror::Error;

use crate::complexes::ComplexError;

pub use poset::{up_sets, up_sets_with_cap, MonotoneMap, OpenSet, Poset, DEFAULT_OPEN_CAP};
pub use sections::{check_sheaf_equalizer, direct_image, direct_image_map, restrict_sections, sections, sections_map, Sections};
pub(crate) use sheaf::block_sum;
pub use sheaf::{constant_sheaf, direct_sum, random_sheaf, skyscraper, Sheaf, SheafBounds, SheafMap};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SiteError {
    #[error("not a partial order: {0}")]
    NotAPartialOrder(String),
    #[error("unknown element {0}")]
    UnknownElement(String),
    #[error("{size} elements exceed the cap of {cap} for enumerating opens")]
    TooLarge { size: usize, cap: usize },
    #[error("not open: {0}")]
    NotOpen(String),
    #[error("not a cover: {0}")]
    NotACover(String),
    #[error("not monotone: {0}")]
    NotMonotone(String),
    #[error("invalid sheaf: {0}")]
    NotASheaf(String),
    #[error("invalid sheaf map: {0}")]
    NotASheafMap(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}
