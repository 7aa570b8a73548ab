//! Second-order Birkhoff normalization around a triangular point.

pub mod first_order;
pub mod freq;
pub mod jmatrix;
pub mod rs;
pub mod tables;
pub mod h3;
pub mod second_order;
pub mod pipeline;
