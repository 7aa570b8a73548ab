//! Second-order Birkhoff normalization of motion near the triangular points
//! of the photogravitational restricted three-body problem with
//! Poynting–Robertson drag.

pub mod equilibria;
pub mod error;
pub mod model;
pub mod normalform;
pub mod numfmt;
pub mod params;
pub mod poly;
pub mod taylor;
pub mod tcoeffs;
pub mod report;
pub mod dalembert;
pub mod convergence;
pub mod errata;
pub mod sweep;

pub use error::{Error, Result};
pub use params::ModelParams;
