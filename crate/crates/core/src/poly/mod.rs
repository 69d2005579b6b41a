//! Monic polynomials, companion matrices, root finding, spectrum distances
//! and condition-number bounds for companion eigenvalues.

mod assignment;
mod companion;
mod condition;
mod eigen;
mod polynomial;
mod roots;
mod spectrum;

pub use assignment::min_cost_assignment;
pub use companion::{companion_matrix, CompanionMatrix};
pub use condition::{
    condition_bounds, condition_bounds_with_tol, condition_numbers, vandermonde, vandermonde_inverse,
    ConditionBounds, TOL_GAP,
};
pub use polynomial::{ar_params_to_char_poly, MonicPolynomial};
pub use roots::{poly_roots, poly_roots_with, RootOptions};
pub use spectrum::{max_matched_movement, optimal_matching, spectrum_distance, Spectrum, TOL_CONJ};
