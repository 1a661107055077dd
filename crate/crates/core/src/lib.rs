//! Exact computation of Godement resolutions, hypercohomology sheaves and
//! derived functors for sheaves of bounded cochain complexes on finite
//! Alexandrov sites (finite posets whose opens are the up-sets).

pub mod exactlin;
pub mod complexes;
pub mod exec;
pub mod random;
pub mod cosimplicial;
pub mod site;
pub mod godement;
pub mod filtered;
pub mod oracle;
