//! Horizontal lifting, holonomy against enclosed area, and circle-map deviation.

pub mod circle;
pub mod curve;
pub mod lift;

pub use circle::{circle_dev, circle_linearize, CircleMap};
pub use curve::{ParamCurve, PlanarCurve, SphereCurve};
pub use lift::{
    holonomy_area_ratio, hopf_holonomy, hopf_lift, nil_holonomy, nil_lift, HolonomyRatio,
    LiftOptions, TransportResult,
};
