//! Word metrics on `Γ(G, S)`: BFS distance maps, the group, subgroup and
//! quotient diameters along the lower central series, and geodesic words.

mod bfs;
mod diameters;
pub mod dump;
mod layered;

pub use bfs::{bfs_distance_map, bfs_distance_map_with, shortest_word, BfsConfig, Cell, Cells, DistanceMap};
pub use diameters::{
    diameter, quotient_diameter, quotient_diameter_by, subgroup_diameter, subgroup_diameter_by, FiltrationReport,
    LayerDiameters,
};
pub use layered::{fast_diameter, sphere_profile};
