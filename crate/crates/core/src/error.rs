//! Error type shared by all modules.

use thiserror::Error;

/// Everything that can go wrong while synthesizing or analyzing a design.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A constructor argument violates a type invariant.
    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    /// The offset ratio sits on the singular value 1/(2π) where the profile
    /// coefficients lose meaning (zero denominator in the phase angle).
    #[error(
        "offset ratio eta = {eta} is within the singular band around 1/(2*pi) ~ 0.1591549; \
             the profile coefficients are undefined there"
    )]
    EtaSingular { eta: f64 },

    /// The profile closure equation v_c(psi) = 0 has no root in (-pi, 0),
    /// i.e. the requested geometry cannot close into a cam.
    #[error("cam profile does not close: no root of v_c in (-pi, 0) for these parameters")]
    NoRoot,

    /// Roller radius equals the pitch radius of curvature at this angle.
    #[error("cam curvature singular at psi = {psi} rad: roller radius cancels the pitch radius of curvature")]
    UndercutSingularity { psi: f64 },

    /// The transmitted-force line of action passes through the camshaft axis.
    #[error("force line of action passes through the camshaft axis (delta = 0); horizontal component unbounded")]
    InfiniteForce,

    /// The bearing-series fit gives a non-positive pin radius.
    #[error("roller radius {a4} mm leaves no pin cross-section (bearing fit requires a4 > 5 mm)")]
    DegeneratePin { a4: f64 },

    /// Curvature-extrema analysis requires a convex pitch curve.
    #[error("pitch curve not convex for eta = {eta} (requires eta >= 1/pi)")]
    NotConvex { eta: f64 },

    /// The optimizer found no design point satisfying all constraints.
    #[error("no feasible design: {0}")]
    Infeasible(String),
}
