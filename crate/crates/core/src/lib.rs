//! Exact word-metric computations on Cayley graphs of finite nilpotent groups.
//!
//! The crate covers abelian groups `⊕ Z/m_t` and the unitriangular groups
//! `H_{q,d}`. It provides
//!
//! * dense mixed-radix element encoding and the group law ([`group`]),
//! * BFS distance maps and the group / subgroup / quotient diameters along
//!   the lower central series ([`metrics`]),
//! * constructive short-word synthesis through commutator distortion
//!   ([`distortion`]),
//! * congruence lattices, their coset diameters and certified `ℓ¹` covering
//!   radii of the rescaled lattices ([`lattice`]),
//! * the Monte Carlo harness comparing rescaled diameter distributions
//!   ([`harness`]).

pub mod distortion;
pub mod error;
pub mod group;
pub mod harness;
pub mod lattice;
pub mod metrics;

pub use error::{Error, Result};
pub use group::{ElementCode, Family, GeneratingSet, GroupSpec, Letter};
