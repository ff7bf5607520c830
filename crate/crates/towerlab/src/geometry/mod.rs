//! Genus and ramification: Riemann-Hurwitz, the triangle-group data of the
//! Shimura towers, ramification orbits of the tower steps and per-level
//! genus sequences.

mod genus;
mod orbit;
mod profile;
pub mod triangle;

pub use genus::{tower_genus_seq, x0_genus, GenusMethod, GenusRow, MAX_GENUS_LEVEL, SURROGATE_CANDIDATES};
pub use orbit::{
    critical_points, ramification_orbit, ramification_orbit_auto, ramify, stabilization, OrbitReport, OrbitStep,
    DEFAULT_SURROGATES, MAX_DEPTH,
};
pub use profile::{rh_from_different, rh_genus, shimura_ram_index, RamificationProfile};
pub use triangle::{TriangleData, TRIANGLE_P2, TRIANGLE_P3};
