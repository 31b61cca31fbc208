//! Geodesics of tube domains in the `(a, b)` parametrisation: the direction
//! map `F̃(t) = 2 Re(a e^{it}) + b`, boundary data `g = P_Ω(F̃)`, and the
//! Schwarz integral `f` of `g`.

mod evaluator;
mod limits;
mod params;
mod profile;

pub use evaluator::{DiscMap, FnDisc, GeodesicMap, Symmetrized, R_MAX};
pub use limits::{boundary_limits, LimitReport, SingularLimit, RADII};
pub use params::{classify_case, f_tilde, f_tilde_prime, h_poly, singular_points, FCaseLabel, GeodesicParams};
pub use profile::{boundary_profile, BoundaryProfile};

/// `(f(λ) + conj f(λ̄))/2` as a new disc map.
pub fn symmetrize<M: DiscMap>(map: M) -> Symmetrized<M> {
    Symmetrized(map)
}
