//! Shared numerical primitives.

mod finite_diff;
mod fourier;
mod gauss;
mod gegenbauer;
mod optimize;
mod quadrature;

pub use finite_diff::second_difference;
pub use fourier::{dft_forward, dft_inverse, Dft, FourierCoefficients};
pub use gauss::{gauss_legendre, legendre_all};
pub use gegenbauer::GegenbauerEval;
pub use optimize::maximize_bracketed;
pub use quadrature::{integrate_adaptive, integrate_adaptive_detailed, QuadratureSpec, Quadrature, Upper};
