//! Dynamical gaskets: circle packings of sphere triangulations, the
//! reflection groups they generate, and the maps conjugate to them on
//! their limit sets.

pub mod affine_model;
pub mod antirational;
pub mod boundary_conjugacy;
pub mod geometry;
pub mod packing;
pub mod poly;
pub mod raster;
pub mod reflection_group;
pub mod schwarz;
pub mod suites;
pub mod triangulation;

pub use geometry::{Complex, Disk, GenCircle, MobiusMap, SpherePoint};
pub use triangulation::Triangulation;
pub use packing::{solve_packing, CirclePacking, Normalization};
