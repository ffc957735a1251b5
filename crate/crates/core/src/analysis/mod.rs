//! Degree and Lipschitz measurement, exponent fits, and the global inequalities.

pub mod bounds;
pub mod degree;
pub mod fit;
pub mod lipschitz;
pub mod sobol;

pub use bounds::{h1_det_check, volume_bound_check};
pub use degree::{
    degree_preimage, degree_quadrature, degree_sandwich, DegreeMethod, DegreeReport, Domain,
    DEGREE_TOL,
};
pub use fit::{fit_exponent, ExponentFit};
pub use lipschitz::{lipschitz_sup, LipMethod, LipOptions, LipschitzReport, SampleDomain};
pub use sobol::Sobol;
