//! Legendrian self-map of the Hopf fibration and the right multiplication example.

pub mod ade;
pub mod atlas;
pub mod degree;
pub mod pipeline;
pub mod poly;
pub mod run;

pub use ade::*;
pub use atlas::*;
pub use degree::*;
pub use pipeline::*;
pub use poly::*;
pub use run::*;
