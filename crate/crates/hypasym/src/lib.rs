//! Numerical laboratory for the Gauss hypergeometric function with large
//! parameters: reference evaluation, transformation rules, reduction of
//! large-parameter directions to canonical cases, asymptotic expansions,
//! non-classical Jacobi polynomials and two 3F2 case studies.

pub mod asym;
pub mod dd;
pub mod error;
pub mod f32lab;
pub mod gamma;
pub mod jacobi;
pub mod numfmt;
pub mod quad;
pub mod reducer;
pub mod reference;
pub mod scalar;
pub mod series;
pub mod special;
pub mod transform;

pub use error::{Error, Result};
