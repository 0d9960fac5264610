//! Exact sparse polynomial algebra in `z, z̄ ∈ Cⁿ`: Wirtinger derivatives,
//! the tangential fields `L_jk`, `L̄_jk`, the radial operators `R` and `N`,
//! the sublaplacian `□`, harmonic decomposition and monomial moments.
//!
//! Polynomials are generic over a [`Coeff`] field. With [`ExactComplex`]
//! every identity is checked by equality rather than a tolerance.

mod coeff;
mod decompose;
pub mod moments;
mod ops;
mod poly;

pub use coeff::{exact, exact_from_f64, ratio, Coeff, ExactComplex};
pub use decompose::{harmonic_decompose, reconstruct};
pub use moments::{ball_inner_product, ball_moment, sphere_inner_product, sphere_moment, sphere_norm_squared};
pub use ops::{
    apply_box, apply_l, apply_n, apply_r, box_eigenvalue, invariant_laplacian, iterated_tangential_weight, l_family_weights,
    laplacian, sphere_laplacian_eigenvalue,
    tangential_fields, tangential_sum_of_squares, wirtinger, TangentialField,
};
pub use poly::{BigradedPolynomial, MultiIndexPair};
