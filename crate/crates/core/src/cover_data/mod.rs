//! Combinatorial data of abelian covers of the projective line: the cover
//! matrix, its deck group, subgroups `H`, and bulk enumeration.

mod datum;
mod enumerate;
mod group;
mod matrix;
pub mod smith;

pub use datum::{subgroup_closure, DatumFile, LoadedDatum, PrymDatum};
pub use enumerate::{
    enumerate_data, enumerate_matrices, DatumStream, EnumerationFilters, MatrixIter, SubgroupChoice,
};
pub use group::{DeckGroup, DEFAULT_MAX_GROUP_SIZE};
pub use matrix::{CoverMatrix, GroupElement, ValidationReport, Violation};
