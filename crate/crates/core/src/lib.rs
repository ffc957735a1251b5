//! Self-map families on geometric 3-manifolds: degree and Lipschitz
//! measurement, exponent fits, and explicit Legendrian maps.

pub mod analysis;
pub mod contact;
pub mod error;
pub mod exponents;
pub mod geom;
pub mod hopf;
pub mod legendrian;
pub mod plot;
pub mod quadrature;
pub mod report;
pub mod suite;
pub mod zoo;

pub use error::{Error, Result};
