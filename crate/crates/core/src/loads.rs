//! Transmitted force and roller-pin deflection.
//!
//! The free part of the pin (radius `a5`, length `L`) is modelled as a
//! cantilever loaded at its tip by the contact force `f`, giving
//! `v_L = F L^3 / (3 E I)` with `I = pi a5^4 / 4`. Pure rolling puts the
//! force line through the roller center; with constant motor torque `tau`
//! the component along the follower is constant, `f_y = 2 pi tau / p = F0`,
//! and the transverse component is `f_x = F0 / tan(delta)`. The worst tip
//! deflection over a driving interval lands on its start angle, where the
//! force direction is steepest:
//!
//! ```text
//! v_L_max = beta F0 / a5^4 * sqrt((2 pi eta - 1)^2 + (psi_i - pi)^2) / |psi_i - pi|
//! beta    = 4 L^3 / (3 E pi)
//! ```
//!
//! Pin and roller radii are tied by the catalog fit for the mid-range
//! bearing series, `a4 ~ 1.6 a5 + 5` (mm).

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::geometry::{coefficients, DesignParams};
use crate::kinematics::{driving_interval, Mechanism};
use crate::Result;

/// Young modulus of the default pin steel (MPa).
pub const DEFAULT_YOUNG_MODULUS: f64 = 2.0e5;

/// Default free length of the pin (mm).
pub const DEFAULT_FREE_LENGTH: f64 = 10.0;

/// Slope of the bearing-series fit `a4 = 1.6 a5 + 5`.
const BEARING_FIT_SLOPE: f64 = 1.6;
/// Intercept of the bearing-series fit (mm).
const BEARING_FIT_OFFSET: f64 = 5.0;

/// Pin and load parameters of one roller.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PinModel {
    /// Free length `L` (mm).
    pub length: f64,
    /// Motor torque `tau` (N·mm).
    pub torque: f64,
    /// Young modulus `E` (MPa).
    pub young_modulus: f64,
    /// Pin radius `a5` (mm).
    pub pin_radius: f64,
}

impl PinModel {
    pub fn new(length: f64, torque: f64, young_modulus: f64, pin_radius: f64) -> Result<Self> {
        for (name, v) in [
            ("length L", length),
            ("torque tau", torque),
            ("Young modulus E", young_modulus),
            ("pin radius a5", pin_radius),
        ] {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::InvalidParam(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        Ok(Self {
            length,
            torque,
            young_modulus,
            pin_radius,
        })
    }

    /// Second moment of area of the circular cross section, `pi a5^4 / 4`
    /// (mm^4).
    pub fn second_moment(&self) -> f64 {
        PI * self.pin_radius.powi(4) / 4.0
    }

    /// Stiffness factor `beta = 4 L^3 / (3 E pi)`.
    pub fn beta(&self) -> f64 {
        4.0 * self.length.powi(3) / (3.0 * self.young_modulus * PI)
    }
}

/// Force transmitted at one cam angle, split into components.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ForceState {
    /// Transverse component (N).
    pub f_x: f64,
    /// Component along the follower, equal to `F0` at every angle (N).
    pub f_y: f64,
    /// Magnitude `sqrt(f_x^2 + f_y^2)` (N).
    pub magnitude: f64,
    /// Contact-normal phase angle at this cam angle (rad).
    pub delta: f64,
}

/// Constant follower-direction force `F0 = 2 pi tau / p` (N).
pub fn vertical_force(pin: &PinModel, params: &DesignParams) -> f64 {
    2.0 * PI * pin.torque / params.p()
}

/// Transverse force `f_x = F0 / tan(delta)` (N).
///
/// At `delta = 0` (mid-turn) the force line passes through the camshaft
/// axis and the component is unbounded; that case errors.
pub fn horizontal_force(pin: &PinModel, params: &DesignParams, psi: f64) -> Result<f64> {
    let delta = coefficients(params, psi).delta;
    if delta == 0.0 {
        return Err(Error::InfiniteForce);
    }
    Ok(vertical_force(pin, params) / delta.tan())
}

/// Full force decomposition at one cam angle.
pub fn force_state(pin: &PinModel, params: &DesignParams, psi: f64) -> Result<ForceState> {
    let f_x = horizontal_force(pin, params, psi)?;
    let f_y = vertical_force(pin, params);
    Ok(ForceState {
        f_x,
        f_y,
        magnitude: f_x.hypot(f_y),
        delta: coefficients(params, psi).delta,
    })
}

/// Worst-case pin tip deflection over the driving interval (mm).
///
/// The maximum force magnitude occurs at the interval start `psi_i`; the
/// deflection there is `beta F0 / a5^4 * sqrt(c^2 + t^2) / |t|` with
/// `c = 2 pi eta - 1` and `t = psi_i - pi`.
pub fn max_pin_deflection(
    pin: &PinModel,
    params: &DesignParams,
    mechanism: Mechanism,
) -> Result<f64> {
    let iv = driving_interval(params, mechanism)?;
    let t = iv.psi_start - PI;
    let c = params.offset_term();
    let f0 = vertical_force(pin, params);
    Ok(pin.beta() * f0 / pin.pin_radius.powi(4) * (c * c + t * t).sqrt() / t.abs())
}

/// Pin radius matching a roller radius through the bearing-series fit:
/// `a5 = (a4 - 5) / 1.6` (mm). Rollers at or below 5 mm leave no pin.
pub fn pin_radius_for_roller(a4: f64) -> Result<f64> {
    if a4 <= BEARING_FIT_OFFSET {
        return Err(Error::DegeneratePin { a4 });
    }
    Ok((a4 - BEARING_FIT_OFFSET) / BEARING_FIT_SLOPE)
}

/// Inverse of [`pin_radius_for_roller`]: `a4 = 1.6 a5 + 5` (mm).
pub fn roller_radius_for_pin(a5: f64) -> f64 {
    BEARING_FIT_SLOPE * a5 + BEARING_FIT_OFFSET
}
