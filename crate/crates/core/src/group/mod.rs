//! Arithmetic, encoding and structural predicates for the two supported
//! families: finite abelian groups and unitriangular groups `H_{q,d}`.

pub mod closure;
pub mod echelon;
mod gens;
mod ops;
mod spec;

pub use gens::{GeneratingSet, Letter};
pub use ops::ElementCode;
pub use spec::{Family, GroupSpec};
