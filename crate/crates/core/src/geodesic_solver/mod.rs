//! Two-point problems in `T_Ω`: the geodesic through two interior points, the
//! explicit geodesic joining two boundary points, and checks on the result.

mod solve;
mod trace;
mod verify;

pub use solve::{connect, connect_boundary, connect_with, kobayashi_distance, ConnectOptions};
pub use trace::{radial_real_limit, Anchors, GeodesicTrace, GridValue, SolveMode, SolveStats, TraceRecord, PROFILE_GRID};
pub use verify::{uniqueness_probe, verify_geodesic, UniquenessReport, VerificationReport};
