//! Special functions and quadrature used by the noise and transport models.

pub mod bessel;
pub mod quadrature;
