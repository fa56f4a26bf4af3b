//! Vlasov–Poisson solver in one space and one velocity dimension. Velocity is
//! expanded in asymmetrically weighted Hermite functions with a time-dependent
//! scaling factor `α(t)`; space is discretized by modal discontinuous Galerkin
//! or by a Fourier Galerkin method.

pub mod config;
pub mod dg;
pub mod diagnostics;
pub mod discretization;
pub mod error;
pub mod field;
pub mod fourier;
pub mod hermite;
pub mod poisson;
pub mod quadrature;
pub mod run;
pub mod scenario;
pub mod snapshot;
pub mod timestep;

pub use error::{Error, Result};
pub use field::Field;
