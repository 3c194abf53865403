//! Congruence lattices attached to generator tuples, their exact coset
//! diameters and certified `ℓ¹` covering radii after rescaling.

mod integer;
mod reduce;
mod torus;

pub use integer::{determinant, IntegerLattice};
pub use reduce::lll;
pub use torus::{
    rescale, sample_haar_proxy, torus_diameter_l1, torus_diameter_l1_with, Enclosure, RescaledLattice,
    DEFAULT_CELL_BUDGET, MAX_TORUS_DIM,
};
