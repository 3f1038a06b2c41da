//! Maximal operators of convolution type and their variation.
//!
//! Kernels (elliptic φ_{a,b} on ℝ^d and 𝕋, spherical Poisson and heat),
//! the evolutions u(·, t) = kernel_t * |u₀| on sampled grids, maximal
//! functions u* = sup_t u(·, t), discrete variation functionals, and
//! executable checks of the variation-diminishing inequalities.
//!
//! The numerical core is generic over [`Real`]; the verification layer runs
//! in `f64`.

pub mod error;
pub mod evolution;
pub mod grid;
pub mod kernels;
pub mod maximal;
pub mod numerics;
pub mod scalar;
pub mod variation;
pub mod verify;

pub use error::{Error, Result};
pub use grid::{Domain, GridFunction, TimeGrid};
pub use kernels::{EllipticParams, KernelSpec};
pub use maximal::{maximal_centered, maximal_nontangential, MaximalOptions, MaximalResult};
pub use scalar::Real;

pub type GridFunctionF64 = GridFunction<f64>;
pub type GridFunctionF32 = GridFunction<f32>;
pub type KernelSpecF64 = KernelSpec<f64>;
pub type KernelSpecF32 = KernelSpec<f32>;
pub type TimeGridF64 = TimeGrid<f64>;
pub type TimeGridF32 = TimeGrid<f32>;
