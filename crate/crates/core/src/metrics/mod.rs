//! Reference distances, the Hilbert metric of the base and Kobayashi bounds.

mod bounds;
mod hilbert;
mod models;

pub use bounds::{
    affine_lower_bound, affine_lower_bound_detailed, chain_upper_bound, lempert_ladder, lempert_upper_bound,
    lempert_upper_bound_with, sphere_directions, AffineBound, LempertBound, LempertOptions,
};
pub(crate) use bounds::check_points;
pub use hilbert::{
    check_hilbert_inequality, check_hilbert_inequality_with, hilbert_distance, hilbert_distance_swapped, HilbertCheckOptions,
    HilbertReport, HilbertRow,
};
pub use models::{
    ball_distance, cayley, half_plane_distance, interval_tube_distance, mobius, model_distance, poincare, strip_distance,
    ModelSpace,
};
