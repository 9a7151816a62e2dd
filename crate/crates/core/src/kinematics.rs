//! Pressure-angle and curvature analysis: the inequality system that gates
//! a design.
//!
//! The pressure angle of the linear-law cam reduces to
//! `mu = arctan((1 - 2 pi eta) / (psi - pi))`, with a vertical asymptote at
//! mid-turn. A cam drives its roller on `[pi, 2 pi - Delta]`, but because a
//! conjugate partner takes over where it transmits better, the interval that
//! matters starts at `pi - Delta` (coaxial pair) or `4 pi/3 - Delta`
//! (non-coaxial triple). `|mu|` decays monotonically over that interval, so
//! its extremes sit at the endpoints.
//!
//! The pitch-curve curvature has the closed form
//!
//! ```text
//! kappa_p = 2 pi / p * [(psi - pi)^2 + 2 (2 pi eta - 1)(pi eta - 1)]
//!           / [(psi - pi)^2 + (2 pi eta - 1)^2]^(3/2)
//! ```
//!
//! nonnegative everywhere iff `eta >= 1/pi` (convex pitch curve). The cam
//! profile inherits convexity as long as the roller radius stays below the
//! minimum pitch radius of curvature, `a4 < 1/kappa_p_max`; otherwise the
//! profile undercuts.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::geometry::{extended_angle, DesignParams};
use crate::Result;

/// Default admissible pressure angle (30 degrees), the usual bound for cams
/// running above 50 rpm.
pub const DEFAULT_PRESSURE_LIMIT: f64 = PI / 6.0;

/// Interior margin used when enforcing strict inequalities on floats.
pub(crate) const STRICT_MARGIN: f64 = 1e-9;

/// How the cams are arranged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mechanism {
    /// Two conjugate cams on a common shaft, phased half a turn apart.
    CoaxialConjugate,
    /// Three cams on parallel shafts, phased 120 degrees apart, rollers on a
    /// single side of the slider.
    NonCoaxialTriple,
}

/// The shaft-angle interval over which one cam effectively drives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DrivingInterval {
    /// Start angle (rad).
    pub psi_start: f64,
    /// End angle (rad).
    pub psi_end: f64,
    pub mechanism: Mechanism,
}

impl DrivingInterval {
    pub fn length(&self) -> f64 {
        self.psi_end - self.psi_start
    }
}

/// Pressure angle `mu` at cam angle `psi` (rad).
///
/// At exactly `psi = pi` the expression has a pole; the limiting value
/// `±pi/2` is returned with the sign of `1 - 2 pi eta`, so diagnostics never
/// panic there.
pub fn pressure_angle(params: &DesignParams, psi: f64) -> f64 {
    let num = 1.0 - 2.0 * PI * params.eta();
    let t = psi - PI;
    if t == 0.0 {
        return num.signum() * FRAC_PI_2;
    }
    (num / t).atan()
}

/// Effective driving interval of one cam for the given arrangement.
pub fn driving_interval(params: &DesignParams, mechanism: Mechanism) -> Result<DrivingInterval> {
    let delta = extended_angle(params)?;
    let psi_start = match mechanism {
        Mechanism::CoaxialConjugate => PI - delta,
        Mechanism::NonCoaxialTriple => 4.0 * PI / 3.0 - delta,
    };
    Ok(DrivingInterval {
        psi_start,
        psi_end: 2.0 * PI - delta,
        mechanism,
    })
}

/// Fraction of the driving interval with `|mu| <= threshold`, in `[0, 1]`.
///
/// Computed in closed form: with `c = |1 - 2 pi eta|`, the bound holds iff
/// `psi - pi >= c / tan(threshold)` on the (post-midturn) driving interval,
/// which is then intersected with it.
pub fn service_factor(params: &DesignParams, mechanism: Mechanism, threshold: f64) -> Result<f64> {
    let iv = driving_interval(params, mechanism)?;
    if threshold <= 0.0 {
        return Ok(0.0);
    }
    if threshold >= FRAC_PI_2 {
        return Ok(1.0);
    }
    let c = (1.0 - 2.0 * PI * params.eta()).abs();
    let w = c / threshold.tan();
    let t_start = iv.psi_start - PI;
    let t_end = iv.psi_end - PI;
    Ok(((t_end - t_start.max(w)) / (t_end - t_start)).clamp(0.0, 1.0))
}

/// Pitch-curve curvature at `psi` (1/mm). Positive means convex.
pub fn pitch_curvature(params: &DesignParams, psi: f64) -> f64 {
    let c = params.offset_term();
    let m = PI * params.eta();
    let t2 = (psi - PI) * (psi - PI);
    2.0 * PI / params.p() * (t2 + 2.0 * c * (m - 1.0)) / (t2 + c * c).powf(1.5)
}

/// Cam-profile curvature `kappa_c = kappa_p / (1 - a4 kappa_p)` (1/mm).
///
/// Errors when the roller radius cancels the pitch radius of curvature,
/// i.e. right on the undercutting singularity.
pub fn cam_curvature(params: &DesignParams, psi: f64) -> Result<f64> {
    let kp = pitch_curvature(params, psi);
    let den = 1.0 - params.a4() * kp;
    if den.abs() < 1e-12 {
        return Err(Error::UndercutSingularity { psi });
    }
    Ok(kp / den)
}

/// Classification of a curvature stationary point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExtremumKind {
    Min,
    Max,
}

/// Which regime the curvature profile is in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CurvatureBranch {
    /// `eta in [1/pi, 2/pi)`: local minimum at mid-turn flanked by two
    /// equal maxima.
    TwoMaxima,
    /// `eta > 2/pi`: single maximum at mid-turn.
    SingleMaximum,
    /// `eta = 2/pi`: the three stationary points merge at mid-turn.
    Boundary,
}

/// One stationary point of `kappa_p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvatureExtremum {
    pub psi: f64,
    pub kind: ExtremumKind,
}

/// Stationary points of the pitch-curve curvature and its global maximum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvatureExtrema {
    pub roots: Vec<CurvatureExtremum>,
    /// Global maximum of `kappa_p` over all `psi` (1/mm).
    pub kappa_p_max: f64,
    pub branch: CurvatureBranch,
}

/// Global maximum of the pitch-curve curvature.
///
/// Valid for any `eta > 1/(2 pi)`: below `2/pi` the maxima sit at
/// `pi ± sqrt(-4 (pi eta)^2 + 10 pi eta - 4)` with value
/// `4 pi / (3 p sqrt(6 pi eta - 3))`; above, the maximum is at mid-turn.
pub(crate) fn kappa_p_max(p: f64, eta: f64) -> f64 {
    let m = PI * eta;
    if eta < 2.0 / PI {
        4.0 * PI / (3.0 * p * (6.0 * m - 3.0).sqrt())
    } else {
        4.0 * PI / p * (2.0 * m * m - 3.0 * m + 1.0) / (4.0 * m * m - 4.0 * m + 1.0).powf(1.5)
    }
}

/// Stationary points and maximum of `kappa_p`, for convex designs.
///
/// Requires `eta >= 1/pi`; concave pitch curves are rejected with
/// [`Error::NotConvex`].
pub fn curvature_extrema(params: &DesignParams) -> Result<CurvatureExtrema> {
    let eta = params.eta();
    if eta < 1.0 / PI {
        return Err(Error::NotConvex { eta });
    }
    let m = PI * eta;
    let two_over_pi = 2.0 / PI;
    let kappa = kappa_p_max(params.p(), eta);
    let (roots, branch) = if eta < two_over_pi {
        // Discriminant of the quadratic factor of kappa_p'.
        let beta = -4.0 * m * m + 10.0 * m - 4.0;
        let r = beta.sqrt();
        (
            vec![
                CurvatureExtremum {
                    psi: PI,
                    kind: ExtremumKind::Min,
                },
                CurvatureExtremum {
                    psi: PI + r,
                    kind: ExtremumKind::Max,
                },
                CurvatureExtremum {
                    psi: PI - r,
                    kind: ExtremumKind::Max,
                },
            ],
            CurvatureBranch::TwoMaxima,
        )
    } else if eta > two_over_pi {
        (
            vec![CurvatureExtremum {
                psi: PI,
                kind: ExtremumKind::Max,
            }],
            CurvatureBranch::SingleMaximum,
        )
    } else {
        (
            vec![CurvatureExtremum {
                psi: PI,
                kind: ExtremumKind::Max,
            }],
            CurvatureBranch::Boundary,
        )
    };
    Ok(CurvatureExtrema {
        roots,
        kappa_p_max: kappa,
        branch,
    })
}

/// Outcome of the five geometric gates on a design point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeasibilityReport {
    /// `eta > 1/(2 pi)`: the initial contact sits below the axis.
    pub eta_ok_lower: bool,
    /// `a4/p < 1/2`: consecutive rollers on one side do not touch.
    pub roller_fits_pitch: bool,
    /// `a4/p <= eta - b/p`: the roller clears the camshaft.
    pub roller_clears_shaft: bool,
    /// `eta >= 1/pi`: pitch curve convex everywhere.
    pub convex_pitch: bool,
    /// `a4 < 1/kappa_p_max`: no undercutting of the profile.
    pub no_undercut: bool,
    /// Conjunction of the five flags.
    pub all_ok: bool,
}

/// Evaluate all feasibility gates. Reports, never errors.
///
/// Strict inequalities are checked with an interior margin of 1e-9;
/// the non-strict shaft clearance is exact.
pub fn feasibility(params: &DesignParams) -> FeasibilityReport {
    let eta = params.eta();
    let alpha4 = params.a4() / params.p();
    let eta_ok_lower = eta > 1.0 / (2.0 * PI);
    let roller_fits_pitch = alpha4 <= 0.5 - STRICT_MARGIN;
    let roller_clears_shaft = alpha4 <= eta - params.b() / params.p();
    let convex_pitch = eta >= 1.0 / PI;
    // The curvature bound needs the maximum formula, defined past the lower
    // eta gate; designs failing that gate are already out.
    let no_undercut =
        eta_ok_lower && params.a4() <= 1.0 / kappa_p_max(params.p(), eta) - STRICT_MARGIN;
    let all_ok =
        eta_ok_lower && roller_fits_pitch && roller_clears_shaft && convex_pitch && no_undercut;
    FeasibilityReport {
        eta_ok_lower,
        roller_fits_pitch,
        roller_clears_shaft,
        convex_pitch,
        no_undercut,
        all_ok,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(p: f64, eta: f64, a4: f64) -> DesignParams {
        DesignParams::new(p, eta, a4, 9.5).unwrap()
    }

    const DEG: f64 = 180.0 / PI;

    #[test]
    fn pressure_angle_direct_values() {
        let d = params(50.0, 0.5, 15.5);
        let expect = ((1.0 - PI) / PI).atan();
        assert!((pressure_angle(&d, 2.0 * PI) - expect).abs() < 1e-15);
        assert!((expect - (-0.5983)).abs() < 1e-4);
        assert!((expect * DEG - (-34.28)).abs() < 0.01);
    }

    #[test]
    fn pressure_angle_pole_at_midturn() {
        let d = params(50.0, 0.5, 15.5);
        assert_eq!(pressure_angle(&d, PI), -FRAC_PI_2);
        // Below the lower eta gate the limit flips sign.
        let low = params(50.0, 0.1, 10.0);
        assert_eq!(pressure_angle(&low, PI), FRAC_PI_2);
        // Approaching the pole the magnitude tends to 90 degrees.
        assert!(pressure_angle(&d, PI + 1e-9).abs() > FRAC_PI_2 - 1e-8);
    }

    #[test]
    fn pressure_angle_is_odd_about_midturn() {
        let d = params(50.0, 0.42, 10.0);
        for t in [0.1, 0.7, 1.9, 3.0] {
            let plus = pressure_angle(&d, PI + t);
            let minus = pressure_angle(&d, PI - t);
            assert!((plus + minus).abs() < 1e-15);
        }
    }

    #[test]
    fn pressure_angle_magnitude_decreases_over_drive() {
        let d = params(50.0, 0.5, 15.5);
        let iv = driving_interval(&d, Mechanism::CoaxialConjugate).unwrap();
        let mut last = f64::INFINITY;
        for i in 0..200 {
            let psi = iv.psi_start + iv.length() * i as f64 / 199.0;
            let m = pressure_angle(&d, psi).abs();
            assert!(m < last);
            last = m;
        }
    }

    #[test]
    fn pressure_angle_extreme_at_interval_end() {
        // Smallest |mu| of the coaxial drive, at psi = 2 pi - Delta.
        let d = params(50.0, 0.5, 15.5);
        let iv = driving_interval(&d, Mechanism::CoaxialConjugate).unwrap();
        let mu_min = pressure_angle(&d, iv.psi_end).abs() * DEG;
        assert!((mu_min - 28.59).abs() < 0.2, "mu_min = {mu_min}");
        let mu_max = pressure_angle(&d, iv.psi_start).abs() * DEG;
        assert!((mu_max - 69.81).abs() < 0.2, "mu_max = {mu_max}");
    }

    #[test]
    fn pressure_angle_extreme_at_lower_eta_bound() {
        let d = params(50.0, 1.0 / PI, 6.41);
        let iv = driving_interval(&d, Mechanism::CoaxialConjugate).unwrap();
        let mu_max = pressure_angle(&d, iv.psi_start).abs() * DEG;
        assert!((mu_max - 42.64).abs() < 0.2, "mu_max = {mu_max}");
    }

    #[test]
    fn driving_intervals_by_mechanism() {
        let d = params(50.0, 0.5, 15.5);
        let delta = extended_angle(&d).unwrap();
        let co = driving_interval(&d, Mechanism::CoaxialConjugate).unwrap();
        assert_eq!(co.psi_start, PI - delta);
        assert_eq!(co.psi_end, 2.0 * PI - delta);
        assert!((co.length() - PI).abs() < 1e-12);
        let nc = driving_interval(&d, Mechanism::NonCoaxialTriple).unwrap();
        assert_eq!(nc.psi_start, 4.0 * PI / 3.0 - delta);
        assert_eq!(nc.psi_end, co.psi_end);
        assert!((nc.length() - 2.0 * PI / 3.0).abs() < 1e-12);
    }

    /// Grid-count oracle for the service factor.
    fn service_grid(d: &DesignParams, mechanism: Mechanism, threshold: f64, n: usize) -> f64 {
        let iv = driving_interval(d, mechanism).unwrap();
        let hits = (0..n)
            .filter(|&i| {
                let psi = iv.psi_start + iv.length() * (i as f64 + 0.5) / n as f64;
                pressure_angle(d, psi).abs() <= threshold
            })
            .count();
        hits as f64 / n as f64
    }

    #[test]
    fn service_factor_reference_designs() {
        let half = params(50.0, 0.5, 15.5);
        let sf =
            service_factor(&half, Mechanism::CoaxialConjugate, DEFAULT_PRESSURE_LIMIT).unwrap();
        assert!((sf * 100.0 - 6.85).abs() < 0.5, "sf = {}", sf * 100.0);

        let nc = params(50.0, 0.35, 8.0);
        let sf = service_factor(&nc, Mechanism::NonCoaxialTriple, DEFAULT_PRESSURE_LIMIT).unwrap();
        assert_eq!(sf, 1.0);

        let top = params(50.0, 0.69, 24.999_999_999);
        let sf = service_factor(&top, Mechanism::CoaxialConjugate, DEFAULT_PRESSURE_LIMIT).unwrap();
        assert_eq!(sf, 0.0);
    }

    #[test]
    fn service_factor_matches_grid_count() {
        for (eta, a4) in [(0.5, 15.5), (0.37, 9.0), (0.4, 10.5)] {
            let d = params(50.0, eta, a4);
            for mech in [Mechanism::CoaxialConjugate, Mechanism::NonCoaxialTriple] {
                let exact = service_factor(&d, mech, DEFAULT_PRESSURE_LIMIT).unwrap();
                let grid = service_grid(&d, mech, DEFAULT_PRESSURE_LIMIT, 100_000);
                assert!(
                    (exact - grid).abs() < 1e-4,
                    "eta={eta} {mech:?}: exact={exact} grid={grid}"
                );
            }
        }
    }

    #[test]
    fn service_factor_nonincreasing_in_eta() {
        let mut last = f64::INFINITY;
        for eta in [0.34, 0.38, 0.42, 0.46, 0.5] {
            let d = params(50.0, eta, 8.0);
            let sf =
                service_factor(&d, Mechanism::CoaxialConjugate, DEFAULT_PRESSURE_LIMIT).unwrap();
            assert!(sf <= last + 1e-12, "eta={eta}");
            last = sf;
        }
    }

    #[test]
    fn pitch_curvature_vanishes_at_convexity_limit() {
        let d = params(50.0, 1.0 / PI, 6.41);
        assert!(pitch_curvature(&d, PI).abs() < 1e-15);
    }

    #[test]
    fn pitch_curvature_at_midturn_reduces() {
        // At psi = pi the general expression collapses to
        // 4 pi / p * (pi eta - 1) / (2 pi eta - 1)^2.
        let d = params(50.0, 0.7, 10.0);
        let m = 0.7 * PI;
        let c = 2.0 * m - 1.0;
        let expect = 4.0 * PI / 50.0 * (m - 1.0) / (c * c);
        let got = pitch_curvature(&d, PI);
        assert!((got - expect).abs() / expect < 1e-12);
        assert!((got - 0.0261).abs() < 1e-4);
    }

    #[test]
    fn pitch_curvature_even_about_midturn() {
        let d = params(50.0, 0.45, 10.0);
        assert!((pitch_curvature(&d, PI + 1.0) - pitch_curvature(&d, PI - 1.0)).abs() < 1e-15);
    }

    #[test]
    fn pitch_curvature_sign_by_eta() {
        // Between the two gates the curve dips concave at mid-turn.
        let concave = params(50.0, 0.2, 10.0);
        assert!(pitch_curvature(&concave, PI) < 0.0);
        // At or past 1/pi it is nonnegative on the whole turn.
        for eta in [1.0 / PI, 0.4, 0.8] {
            let d = params(50.0, eta, 10.0);
            for i in 0..=400 {
                let psi = -1.0 + 8.3 * i as f64 / 400.0;
                assert!(pitch_curvature(&d, psi) >= -1e-15, "eta={eta} psi={psi}");
            }
        }
    }

    #[test]
    fn extrema_two_maxima_branch() {
        let d = params(50.0, 1.0 / PI, 6.41);
        let ex = curvature_extrema(&d).unwrap();
        assert_eq!(ex.branch, CurvatureBranch::TwoMaxima);
        assert_eq!(ex.roots.len(), 3);
        assert_eq!(ex.roots[0].kind, ExtremumKind::Min);
        assert_eq!(ex.roots[0].psi, PI);
        // beta = -4 m^2 + 10 m - 4 with m = pi eta = 1 gives sqrt(2).
        assert!((ex.roots[1].psi - (PI + 2.0f64.sqrt())).abs() < 1e-9);
        let expect = 4.0 * PI / (150.0 * 3.0f64.sqrt());
        assert!((ex.kappa_p_max - expect).abs() / expect < 1e-12);
        assert!((ex.kappa_p_max - 0.04837).abs() < 1e-5);
    }

    #[test]
    fn extrema_single_maximum_branch() {
        let d = params(50.0, 0.7, 10.0);
        let ex = curvature_extrema(&d).unwrap();
        assert_eq!(ex.branch, CurvatureBranch::SingleMaximum);
        assert_eq!(ex.roots.len(), 1);
        assert_eq!(ex.roots[0].kind, ExtremumKind::Max);
        let at_mid = pitch_curvature(&d, PI);
        assert!((ex.kappa_p_max - at_mid).abs() / at_mid < 1e-12);
    }

    #[test]
    fn extrema_branch_continuity_at_boundary() {
        let eta = 2.0 / PI;
        let d = params(50.0, eta, 10.0);
        let ex = curvature_extrema(&d).unwrap();
        assert_eq!(ex.branch, CurvatureBranch::Boundary);
        let m = PI * eta;
        let low = 4.0 * PI / (3.0 * 50.0 * (6.0 * m - 3.0).sqrt());
        let high = 4.0 * PI / 50.0 * (2.0 * m * m - 3.0 * m + 1.0)
            / (4.0 * m * m - 4.0 * m + 1.0).powf(1.5);
        assert!((low - high).abs() / high < 1e-12);
        assert!((ex.kappa_p_max - 4.0 * PI / 450.0).abs() < 1e-12);
    }

    #[test]
    fn extrema_reject_concave() {
        let d = params(50.0, 0.3, 8.0);
        assert_eq!(curvature_extrema(&d), Err(Error::NotConvex { eta: 0.3 }));
    }

    #[test]
    fn extrema_maximum_matches_dense_grid() {
        let d = params(50.0, 0.45, 10.0);
        let ex = curvature_extrema(&d).unwrap();
        let grid_max = (0..200_000)
            .map(|i| pitch_curvature(&d, -1.0 + 8.3 * i as f64 / 199_999.0))
            .fold(f64::MIN, f64::max);
        assert!((ex.kappa_p_max - grid_max).abs() / grid_max < 1e-6);
    }

    #[test]
    fn cam_curvature_composition() {
        let d = params(50.0, 0.7, 9.0);
        let kp = pitch_curvature(&d, PI);
        let kc = cam_curvature(&d, PI).unwrap();
        assert!((kc - kp / (1.0 - 9.0 * kp)).abs() < 1e-15);
        assert!((kc - 0.0341).abs() < 1e-3);
    }

    #[test]
    fn cam_curvature_degenerate_roller() {
        // With a vanishing roller the two curvatures coincide.
        let d = DesignParams::new(50.0, 0.7, 1e-9, 9.5).unwrap();
        let kp = pitch_curvature(&d, 2.0);
        let kc = cam_curvature(&d, 2.0).unwrap();
        assert!((kc - kp).abs() / kp < 1e-9);
    }

    #[test]
    fn cam_curvature_singular_on_undercut_boundary() {
        let eta = 1.0 / PI;
        let ex = curvature_extrema(&params(50.0, eta, 6.41)).unwrap();
        let a4 = 1.0 / ex.kappa_p_max;
        let d = DesignParams::new(50.0, eta, a4, 9.5).unwrap();
        let psi_max = ex.roots[1].psi;
        assert!(matches!(
            cam_curvature(&d, psi_max),
            Err(Error::UndercutSingularity { .. })
        ));
    }

    #[test]
    fn feasibility_examples() {
        let concave = params(50.0, 0.2, 10.0);
        let rep = feasibility(&concave);
        assert!(!rep.convex_pitch);
        assert!(!rep.all_ok);
        assert!(rep.eta_ok_lower);

        let good = params(50.0, 0.7, 10.0);
        let rep = feasibility(&good);
        assert!(rep.all_ok);

        let fat_roller = params(50.0, 0.5, 25.1);
        let rep = feasibility(&fat_roller);
        assert!(!rep.roller_fits_pitch);
        assert!(!rep.all_ok);
    }

    #[test]
    fn feasibility_boundary_convexity() {
        let d = params(50.0, 1.0 / PI, 6.41);
        let rep = feasibility(&d);
        assert!(rep.convex_pitch);
        assert!(rep.all_ok);
    }
}
