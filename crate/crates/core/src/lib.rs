//! Spectral density of Jacobi operators with paired power-law weights
//! `b_{2k-1} = b_{2k} = k^α`, together with the transfer-matrix and
//! continuum tools used to study its behaviour at `x = 0`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod continuum;
pub mod density;
pub mod mat2;
pub mod ode;
pub mod recurrence;
pub mod scalar;
pub mod transition;
pub mod weights;

pub use mat2::Mat2;
pub use num_complex::Complex;
pub use scalar::Scalar;
pub use weights::WeightSequence;

pub type Weights = WeightSequence<f64>;
pub type Matrix = Mat2<f64>;
pub type Estimate = density::DensityEstimate<f64>;
pub type Policy = density::TruncationPolicy<f64>;
pub type Params = continuum::OscillatoryParams<f64>;
pub type Factorization = asymptotics::ProductFactorization<f64>;
