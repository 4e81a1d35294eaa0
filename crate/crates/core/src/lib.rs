//! Invariants of families of abelian covers of the projective line and
//! their Prym varieties.
//!
//! A family is given by a matrix over `Z/N` (one row per defining equation
//! `w_i^N = prod_j (z - z_j)^{r_ij}`) plus a subgroup `H` of the deck group.
//! From that data the crate computes eigenspace dimensions, genera, the
//! Prym dimension and polarization type, the dimension of the PEL-type
//! subvariety cut out by the group action, and Hasse-Witt matrices in
//! characteristic `p`, and classifies whether the family can give a
//! special subvariety of the moduli space of polarized abelian varieties.

pub mod cli;
pub mod cover_data;
pub mod error;
pub mod hasse_witt;
pub mod hodge;
pub mod report;
pub mod shimura;

pub use cover_data::{CoverMatrix, GroupElement, PrymDatum};
pub use error::{Error, Result};
