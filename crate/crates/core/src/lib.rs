//! Hyperbolic simplices, their volumes and clearances, and combinatorics of
//! simplicial complexes and their covers.

pub mod error;
pub mod minkowski;
pub mod rng;
pub mod simplex;
pub mod volume;
pub mod constants;
pub mod complex;

pub use error::{ComplexError, GeomError};
pub use minkowski::{
    distance, lift_klein, mink, random_isometry, to_klein, Isometry, MinkowskiVector, PointKind,
    ProjectivePoint,
};
pub use simplex::GeodesicSimplex;
pub use volume::{SamplingPlan, VolumeEstimate, VolumeMethod};
pub use complex::{Chain, CoverSpec, Fixture, LatticeSubgroup, Triangulation};
pub use constants::{Certification, Certified, ConstantsRow};
