//! Constrained design optimization and table sweeps.
//!
//! The stiffness objective is `z = cos^2(delta_i) / alpha5^4`, the squared
//! worst transverse force per unit pin stiffness, with `delta_i` the
//! contact-normal angle at the driving-interval start and `alpha5 = a5/p`
//! tied to `alpha4` through the bearing fit. Minimizing `z` pushes the
//! design toward thick pins; the constraints
//!
//! ```text
//! g1 = 1/pi - eta            <= 0   convex pitch curve
//! g2 = alpha4 - 1/2          <  0   roller spacing
//! g3 = alpha4 - 1/(p k_max)  <  0   no undercutting
//! g4 = alpha4 - eta + b/p    <= 0   shaft clearance
//! g5 = alpha5 - 1/4          <  0   pin spacing
//! ```
//!
//! cap that growth. For fixed `eta` the objective falls as `a4` grows, so
//! the inner problem is solved in closed form (largest admissible `a4`) and
//! a deterministic grid plus golden-section search handles the remaining
//! one-dimensional problem in `eta`.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::geometry::DesignParams;
use crate::kinematics::{
    driving_interval, kappa_p_max, service_factor, Mechanism, DEFAULT_PRESSURE_LIMIT, STRICT_MARGIN,
};
use crate::loads::{max_pin_deflection, pin_radius_for_roller, roller_radius_for_pin, PinModel};
use crate::{kinematics, Result};

/// A constraint value within this band of zero counts as active.
pub const ACTIVITY_TOL: f64 = 1e-6;

/// Labels for the five constraints, indexed as in [`ConstraintStatus::active`].
pub const CONSTRAINT_NAMES: [&str; 5] = ["g1", "g2", "g3", "g4", "g5"];

/// Signed constraint values at a design point; negative is feasible.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstraintStatus {
    /// `1/pi - eta` (convexity gate).
    pub g1: f64,
    /// `alpha4 - 1/2` (roller spacing).
    pub g2: f64,
    /// `alpha4 - 1/(p kappa_p_max)`; `None` when the convexity gate fails
    /// and the curvature bound has no meaning.
    pub g3: Option<f64>,
    /// `alpha4 - eta + b/p` (shaft clearance).
    pub g4: f64,
    /// `alpha5 - 1/4` (pin spacing).
    pub g5: f64,
    /// Activity flags for g1..g5 at [`ACTIVITY_TOL`].
    pub active: [bool; 5],
}

impl ConstraintStatus {
    /// True when every constraint holds with its stated strictness.
    pub fn feasible(&self) -> bool {
        self.g1 <= 0.0
            && self.g2 < 0.0
            && self.g3.is_some_and(|g| g < 0.0)
            && self.g4 <= 0.0
            && self.g5 < 0.0
    }

    /// Names of the active constraints, e.g. `["g4", "g5"]`.
    pub fn active_names(&self) -> Vec<&'static str> {
        CONSTRAINT_NAMES
            .iter()
            .zip(self.active)
            .filter_map(|(name, on)| on.then_some(*name))
            .collect()
    }
}

/// Outcome of [`optimize`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizationResult {
    pub eta: f64,
    /// Roller radius at the optimum (mm).
    pub a4: f64,
    /// Pin radius from the bearing fit (mm).
    pub a5: f64,
    /// Objective value at the optimum.
    pub z: f64,
    pub constraints: ConstraintStatus,
    /// Golden-section iterations spent after grid seeding.
    pub iterations: usize,
}

/// One row of a design-table sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub eta: f64,
    /// Row values, or the error that invalidates this row. Other rows are
    /// unaffected.
    pub data: Result<SweepData>,
}

/// Computed columns of one sweep row. Angles in rad, lengths in mm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepData {
    pub a4: f64,
    pub a5: f64,
    pub z: f64,
    pub v_l_max_mm: f64,
    pub mu_min_abs: f64,
    pub mu_max_abs: f64,
    pub service_factor: f64,
}

/// Stiffness objective `z = cos^2(delta_i) / alpha5^4` for the given
/// arrangement.
///
/// `delta_i` is evaluated at the driving-interval start of the selected
/// mechanism; `alpha5` comes from the roller radius through the bearing
/// fit, so rollers at or below 5 mm error with [`Error::DegeneratePin`].
pub fn objective(params: &DesignParams, mechanism: Mechanism) -> Result<f64> {
    let alpha5 = pin_radius_for_roller(params.a4())? / params.p();
    let iv = driving_interval(params, mechanism)?;
    let t = iv.psi_start - PI;
    let c = params.offset_term();
    let cos2_delta_i = c * c / (c * c + t * t);
    Ok(cos2_delta_i / alpha5.powi(4))
}

/// Evaluate the five constraints at a design point. Reports, never errors.
pub fn constraints(params: &DesignParams) -> ConstraintStatus {
    let p = params.p();
    let eta = params.eta();
    let alpha4 = params.a4() / p;
    let alpha5 = 0.625 * alpha4 - 25.0 / (8.0 * p);
    let g1 = 1.0 / PI - eta;
    let g2 = alpha4 - 0.5;
    let g3 = (eta >= 1.0 / PI).then(|| alpha4 - 1.0 / (p * kappa_p_max(p, eta)));
    let g4 = alpha4 - eta + params.b() / p;
    let g5 = alpha5 - 0.25;
    let active = [
        g1.abs() < ACTIVITY_TOL,
        g2.abs() < ACTIVITY_TOL,
        g3.is_some_and(|g| g.abs() < ACTIVITY_TOL),
        g4.abs() < ACTIVITY_TOL,
        g5.abs() < ACTIVITY_TOL,
    ];
    ConstraintStatus {
        g1,
        g2,
        g3,
        g4,
        g5,
        active,
    }
}

/// Largest roller radius admissible at this `eta` (mm): the shaft-clearance
/// bound taken exactly, the strict bounds backed off by the interior margin.
///
/// Only meaningful for `eta >= 1/pi` (the curvature bound needs a convex
/// pitch curve).
fn a4_star(p: f64, b: f64, eta: f64) -> f64 {
    let cap_spacing = 0.5 * p - STRICT_MARGIN;
    let cap_shaft = eta * p - b;
    let cap_undercut = 1.0 / kappa_p_max(p, eta) - STRICT_MARGIN;
    let cap_pin = roller_radius_for_pin(0.25 * p) - STRICT_MARGIN;
    cap_spacing.min(cap_shaft).min(cap_undercut).min(cap_pin)
}

/// Minimize `z` over `eta` in `eta_bounds` (inclusive) with `a4` at its
/// per-`eta` maximum.
///
/// Deterministic: a 200-point grid seeds a golden-section refinement
/// between the best point's neighbors. Fails with [`Error::Infeasible`]
/// when no `eta` in bounds admits a pin.
pub fn optimize(
    p: f64,
    b: f64,
    eta_bounds: (f64, f64),
    mechanism: Mechanism,
) -> Result<OptimizationResult> {
    let (lo, hi) = eta_bounds;
    if p <= 0.0 || !p.is_finite() || !lo.is_finite() || !hi.is_finite() || lo > hi {
        return Err(Error::InvalidParam(format!(
            "bad optimization inputs: p={p}, eta bounds [{lo}, {hi}]"
        )));
    }
    if lo < 1.0 / PI - 1e-12 {
        return Err(Error::InvalidParam(format!(
            "eta bounds must start at or above 1/pi ~ 0.3183, got {lo}"
        )));
    }

    let eval = |eta: f64| -> Option<(f64, f64)> {
        let a4 = a4_star(p, b, eta);
        if a4 <= 5.0 {
            return None;
        }
        let params = DesignParams::new(p, eta, a4, b).ok()?;
        let z = objective(&params, mechanism).ok()?;
        Some((z, a4))
    };

    const GRID: usize = 200;
    let grid_eta = |i: usize| {
        if hi == lo {
            lo
        } else {
            lo + (hi - lo) * i as f64 / (GRID - 1) as f64
        }
    };
    let mut best: Option<(f64, usize)> = None;
    for i in 0..GRID {
        if let Some((z, _)) = eval(grid_eta(i)) {
            if best.is_none_or(|(zb, _)| z < zb) {
                best = Some((z, i));
            }
        }
    }
    let (_, seed) = best.ok_or_else(|| {
        Error::Infeasible(format!(
            "no eta in [{lo}, {hi}] leaves room for a pin (a4 > 5 mm) with p={p}, b={b}"
        ))
    })?;

    // Golden-section refinement on the bracket around the best grid point.
    let mut a = grid_eta(seed.saturating_sub(1));
    let mut d = grid_eta((seed + 1).min(GRID - 1));
    let z_of = |eta: f64| eval(eta).map_or(f64::INFINITY, |(z, _)| z);
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut iterations = 0;
    let mut x1 = d - INV_PHI * (d - a);
    let mut x2 = a + INV_PHI * (d - a);
    let mut f1 = z_of(x1);
    let mut f2 = z_of(x2);
    while d - a > 1e-9 {
        if f1 < f2 {
            d = x2;
            x2 = x1;
            f2 = f1;
            x1 = d - INV_PHI * (d - a);
            f1 = z_of(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (d - a);
            f2 = z_of(x2);
        }
        iterations += 1;
    }
    let eta_opt = if f1 < f2 { x1 } else { x2 };
    let (eta_opt, _) = [(eta_opt, z_of(eta_opt)), (lo, z_of(lo)), (hi, z_of(hi))]
        .into_iter()
        .filter(|(_, z)| z.is_finite())
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .ok_or_else(|| Error::Infeasible("objective undefined at candidate optimum".into()))?;

    let (z, a4) = eval(eta_opt)
        .ok_or_else(|| Error::Infeasible("objective undefined at candidate optimum".into()))?;
    let params = DesignParams::new(p, eta_opt, a4, b)?;
    Ok(OptimizationResult {
        eta: eta_opt,
        a4,
        a5: pin_radius_for_roller(a4)?,
        z,
        constraints: constraints(&params),
        iterations,
    })
}

/// Evaluate a design table: one row per `eta`, `a4` pinned to the
/// shaft-clearance bound (`a4 = eta p - b`), pin radius from the bearing
/// fit and length/torque/modulus from `pin`.
///
/// Rows are independent and evaluated in parallel; the output order always
/// equals the input order. A row whose design is invalid carries its error
/// and leaves the other rows untouched.
pub fn sweep(p: f64, b: f64, pin: &PinModel, etas: &[f64], mechanism: Mechanism) -> Vec<SweepRow> {
    etas.par_iter()
        .map(|&eta| SweepRow {
            eta,
            data: sweep_row(p, b, pin, eta, mechanism),
        })
        .collect()
}

fn sweep_row(p: f64, b: f64, pin: &PinModel, eta: f64, mechanism: Mechanism) -> Result<SweepData> {
    let a4 = eta * p - b;
    if a4 <= 0.0 {
        return Err(Error::Infeasible(format!(
            "shaft-clearance bound gives a nonpositive roller radius at eta={eta}"
        )));
    }
    let params = DesignParams::new(p, eta, a4, b)?;
    let cs = constraints(&params);
    if cs.g1 > ACTIVITY_TOL {
        return Err(Error::NotConvex { eta });
    }
    for (g, name) in [
        (cs.g2, "roller spacing"),
        (cs.g3.unwrap_or(-1.0), "undercutting"),
        (cs.g5, "pin spacing"),
    ] {
        if g > ACTIVITY_TOL {
            return Err(Error::Infeasible(format!(
                "{name} constraint violated at eta={eta} (a4={a4} mm)"
            )));
        }
    }
    let a5 = pin_radius_for_roller(a4)?;
    let row_pin = PinModel {
        pin_radius: a5,
        ..*pin
    };
    let iv = driving_interval(&params, mechanism)?;
    Ok(SweepData {
        a4,
        a5,
        z: objective(&params, mechanism)?,
        v_l_max_mm: max_pin_deflection(&row_pin, &params, mechanism)?,
        mu_min_abs: kinematics::pressure_angle(&params, iv.psi_end).abs(),
        mu_max_abs: kinematics::pressure_angle(&params, iv.psi_start).abs(),
        service_factor: service_factor(&params, mechanism, DEFAULT_PRESSURE_LIMIT)?,
    })
}
