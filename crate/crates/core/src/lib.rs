//! Numerical core for privacy amplification by quantum noise.
//!
//! Density-matrix simulation of depolarizing, amplitude-damping and dephasing
//! channels, hockey-stick divergences, the resulting (ε, δ) accounting, Gaussian
//! noise calibration, expectation-mechanism utility bounds, and a seeded
//! harness that checks the supporting inequalities on random instances.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod accountant;
pub mod calibrate;
pub mod channels;
pub mod divergence;
pub mod encode;
pub mod error;
pub mod linalg;
pub mod mechanism;
pub mod rng;
pub mod state;
pub mod verify;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, RealMatrix, C64};
pub use state::DensityMatrix;
