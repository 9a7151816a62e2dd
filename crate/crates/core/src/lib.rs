//! Design library for roller-cam prismatic transmissions.
//!
//! A cam with a linear follower law drives a roller-carrying slider through
//! pure-rolling contact; several such cams phased on one or more shafts turn
//! a constant input rotation into a constant-pitch translation. This crate
//! covers the full design loop for that drive:
//!
//! - [`geometry`]: follower law, cam-profile and pitch-curve synthesis,
//!   extended closure angle, curve sampling;
//! - [`kinematics`]: pressure angle, driving intervals, service factor,
//!   curvature, convexity and undercutting feasibility;
//! - [`loads`]: transmitted force components and roller-pin deflection
//!   (cantilever model), bearing-series pin/roller radius fit;
//! - [`optimizer`]: stiffness objective, design constraints g1..g5,
//!   deterministic constrained minimization and design-table sweeps;
//! - [`mechanism`]: coaxial conjugate pair and non-coaxial triple layouts,
//!   drive schedules, and the combined per-design report.
//!
//! Units are millimetres, newtons, MPa and radians throughout; conversions
//! to degrees, N·m or µm belong at the presentation boundary.

pub mod error;
pub mod geometry;
pub mod kinematics;
pub mod loads;
pub mod mechanism;
pub mod optimizer;

pub use error::Error;
pub use geometry::{CurveKind, DesignParams, ProfileCurve, ProfilePoint};
pub use kinematics::{DrivingInterval, FeasibilityReport, Mechanism};
pub use loads::PinModel;
pub use mechanism::AnalysisReport;
pub use optimizer::{OptimizationResult, SweepRow};

/// Result alias used across the crate.
pub type Result<T> = std::result::Result<T, Error>;
