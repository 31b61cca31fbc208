//! Complex geodesics and the Kobayashi distance in tube domains
//! `T_Ω = Ω + iℝⁿ` over bounded convex bases, together with the Hilbert metric
//! of the base, exact reference models and Gromov four-point diagnostics.

pub mod base_geometry;
pub mod error;
pub mod geodesic_family;
pub mod geodesic_solver;
pub mod gromov;
pub mod linalg;
pub mod metrics;
pub mod quadrature;
pub mod reference_models;
pub mod tube;

pub use base_geometry::{BaseDomain, DomainKind, PolytopeBase};
pub use error::{Error, Result};
pub use tube::TubePoint;
