//! Quadrature solvers for one-dimensional nonlocal reaction-diffusion systems.

pub mod analysis;
pub mod boundary;
pub mod checks;
pub mod config;
pub mod error;
pub mod experiment;
pub mod integrate;
pub mod kernels;
pub mod linalg;
pub mod model;
pub mod quadrature;
pub mod spectral;
pub mod timestepper;

pub use error::{Error, Result};
