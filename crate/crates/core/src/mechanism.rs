//! Cam-system assembly: layouts, drive schedules, and the per-design report.
//!
//! Two arrangements are supported. The coaxial pair mounts two conjugate
//! cams on one shaft, phased half a turn apart, driving opposite roller
//! rows. The non-coaxial triple mounts three cams on parallel shafts phased
//! 120 degrees apart, all rollers on one side; the camshaft centers sit at
//! `y = 0, 4p/3, 8p/3` along the follower axis. In either case, wherever
//! two cams could drive, the one with the smaller pressure-angle magnitude
//! wins, which yields the per-cam schedules below.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::geometry::{extended_angle, DesignParams};
use crate::kinematics::{
    self, driving_interval, feasibility, pressure_angle, service_factor, DrivingInterval,
    FeasibilityReport, Mechanism, DEFAULT_PRESSURE_LIMIT,
};
use crate::loads::{max_pin_deflection, PinModel};
use crate::optimizer::objective;
use crate::Result;

/// Cam phasing and shaft placement for one arrangement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Layout {
    pub kind: Mechanism,
    /// Angular phase of each cam's u-axis (rad).
    pub phases: Vec<f64>,
    /// Camshaft center positions along the follower axis (mm).
    pub offsets_y: Vec<f64>,
}

/// One cam's turn at driving the follower; `[psi_start, psi_end)`, the
/// handover angle belonging to the incoming cam.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriveEntry {
    pub cam: usize,
    pub psi_start: f64,
    pub psi_end: f64,
}

/// Per-cam drive intervals partitioning one full turn.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DriveSchedule {
    pub mechanism: Mechanism,
    pub entries: Vec<DriveEntry>,
}

/// Everything the design review of one point needs, for one arrangement.
///
/// Lengths in mm, angles in rad, curvatures in 1/mm; `service_factor` is a
/// fraction of the driving interval. `z` is absent when the roller is too
/// small for a pin; the curvature bounds are absent when the lower offset
/// gate fails and no curvature maximum exists.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub p: f64,
    pub eta: f64,
    pub a4: f64,
    pub b: f64,
    pub mechanism: Mechanism,
    /// Extended (closure) angle, negative (rad).
    pub delta: f64,
    pub interval: DrivingInterval,
    pub schedule: DriveSchedule,
    pub mu_min_abs: f64,
    pub mu_max_abs: f64,
    pub service_factor: f64,
    pub v_l_max_mm: f64,
    pub z: Option<f64>,
    pub kappa_p_max: Option<f64>,
    pub kappa_c_max: Option<f64>,
    pub feasibility: FeasibilityReport,
}

/// Cam phases and shaft offsets for the arrangement.
pub fn layout(params: &DesignParams, kind: Mechanism) -> Layout {
    match kind {
        Mechanism::CoaxialConjugate => Layout {
            kind,
            phases: vec![0.0, PI],
            offsets_y: vec![0.0, 0.0],
        },
        Mechanism::NonCoaxialTriple => {
            let p = params.p();
            Layout {
                kind,
                phases: vec![0.0, 2.0 * PI / 3.0, 4.0 * PI / 3.0],
                offsets_y: vec![0.0, 4.0 * p / 3.0, 8.0 * p / 3.0],
            }
        }
    }
}

/// Assign each cam the shaft-angle span where it transmits best.
///
/// Cam 0 starts where the previous cam's pressure angle overtakes its own;
/// each later cam is the same span translated by one phase step. The spans
/// are contiguous and cover exactly one turn.
pub fn drive_schedule(params: &DesignParams, kind: Mechanism) -> Result<DriveSchedule> {
    let delta = extended_angle(params)?;
    let (cams, step, start0) = match kind {
        Mechanism::CoaxialConjugate => (2, PI, PI - delta),
        Mechanism::NonCoaxialTriple => (3, 2.0 * PI / 3.0, 4.0 * PI / 3.0 - delta),
    };
    let entries = (0..cams)
        .map(|cam| DriveEntry {
            cam,
            psi_start: start0 + step * cam as f64,
            psi_end: start0 + step * (cam + 1) as f64,
        })
        .collect();
    Ok(DriveSchedule {
        mechanism: kind,
        entries,
    })
}

/// Bundle the closure angle, schedule, pressure-angle extremes, service
/// factor, worst pin deflection, objective and feasibility gates for one
/// design point.
///
/// Infeasible points still report (their gates read false); only geometry
/// that cannot close at all errors.
pub fn design_report(
    params: &DesignParams,
    pin: &PinModel,
    kind: Mechanism,
) -> Result<AnalysisReport> {
    let delta = extended_angle(params)?;
    let interval = driving_interval(params, kind)?;
    let schedule = drive_schedule(params, kind)?;
    let eta = params.eta();
    let kappa_p_max = (eta > 1.0 / (2.0 * PI)).then(|| kinematics::kappa_p_max(params.p(), eta));
    let kappa_c_max = kappa_p_max.and_then(|kp| {
        let den = 1.0 - params.a4() * kp;
        (den > 1e-12).then(|| kp / den)
    });
    Ok(AnalysisReport {
        p: params.p(),
        eta,
        a4: params.a4(),
        b: params.b(),
        mechanism: kind,
        delta,
        interval,
        schedule,
        mu_min_abs: pressure_angle(params, interval.psi_end).abs(),
        mu_max_abs: pressure_angle(params, interval.psi_start).abs(),
        service_factor: service_factor(params, kind, DEFAULT_PRESSURE_LIMIT)?,
        v_l_max_mm: max_pin_deflection(pin, params, kind)?,
        z: objective(params, kind).ok(),
        kappa_p_max,
        kappa_c_max,
        feasibility: feasibility(params),
    })
}
