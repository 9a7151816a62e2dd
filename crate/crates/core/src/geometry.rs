//! Closed-form synthesis of the cam profile and pitch curve.
//!
//! ## Notation
//!
//! - `p`   = pitch: follower travel per cam turn, also the roller spacing (mm)
//! - `e`   = offset: distance from cam axis to the roller-center line (mm)
//! - `eta` = nondimensional offset ratio `e/p`
//! - `a4`  = roller (bearing outer) radius (mm)
//! - `b`   = camshaft radius (mm)
//! - `psi` = cam rotation angle, the input (rad)
//! - `s`   = follower displacement, the output (mm)
//!
//! The follower law is linear: `s(psi) = p/(2*pi) * psi - p/2`, so one full
//! turn advances the follower by exactly `p` and `s(0) = -p/2`.
//!
//! In the frame attached to the cam, the contact point traces the cam
//! profile
//!
//! ```text
//! u_c =  b2 cos(psi) + (b3 - a4) cos(delta - psi)
//! v_c = -b2 sin(psi) + (b3 - a4) sin(delta - psi)
//! ```
//!
//! with coefficients
//!
//! ```text
//! b2    = p / (2 pi)
//! b3    = p/(2 pi) * sqrt((2 pi eta - 1)^2 + (psi - pi)^2)
//! delta = arctan((psi - pi) / (2 pi eta - 1))
//! ```
//!
//! while the roller center traces the pitch curve, the rotation of `(e, s)`
//! into the cam frame. `eta = 1/(2*pi)` zeroes the `delta` denominator and is
//! rejected at construction.
//!
//! The profile closes at the extended angle `Delta`, the root of
//! `v_c(psi) = 0` nearest zero in `(-pi, 0)`; the full profile spans
//! `Delta <= psi <= 2*pi - Delta` and is symmetric about the u-axis.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::Result;

/// Half-width of the rejection band around the singular offset ratio,
/// expressed on `2*pi*eta - 1`.
const ETA_SINGULAR_BAND: f64 = 1e-6;

/// Absolute tolerance on the extended-angle root (rad).
const ROOT_TOL: f64 = 1e-10;

/// Subdivisions used to bracket the closure root before bisection.
const ROOT_SCAN_STEPS: usize = 4096;

/// Geometric design point of the transmission.
///
/// Construction validates the type invariants only (`p > 0`, `a4 > 0`,
/// `b >= 0`, `eta` off the singular value); whether the point is
/// *mechanically* feasible is a separate question answered by
/// [`crate::kinematics::feasibility`], so that infeasible points can still
/// be probed for diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DesignParams {
    p: f64,
    eta: f64,
    a4: f64,
    b: f64,
}

impl DesignParams {
    pub fn new(p: f64, eta: f64, a4: f64, b: f64) -> Result<Self> {
        if !p.is_finite() || p <= 0.0 {
            return Err(Error::InvalidParam(format!(
                "pitch p must be positive, got {p}"
            )));
        }
        if !a4.is_finite() || a4 <= 0.0 {
            return Err(Error::InvalidParam(format!(
                "roller radius a4 must be positive, got {a4}"
            )));
        }
        if !b.is_finite() || b < 0.0 {
            return Err(Error::InvalidParam(format!(
                "shaft radius b must be nonnegative, got {b}"
            )));
        }
        if !eta.is_finite() {
            return Err(Error::InvalidParam(format!(
                "offset ratio eta must be finite, got {eta}"
            )));
        }
        if (2.0 * PI * eta - 1.0).abs() < ETA_SINGULAR_BAND {
            return Err(Error::EtaSingular { eta });
        }
        Ok(Self { p, eta, a4, b })
    }

    /// Pitch (mm).
    pub fn p(&self) -> f64 {
        self.p
    }

    /// Offset ratio `e/p`.
    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// Roller radius (mm).
    pub fn a4(&self) -> f64 {
        self.a4
    }

    /// Camshaft radius (mm).
    pub fn b(&self) -> f64 {
        self.b
    }

    /// Offset `e = eta * p` (mm).
    pub fn e(&self) -> f64 {
        self.eta * self.p
    }

    /// `2*pi*eta - 1`, the recurring offset term. Nonzero by construction.
    pub(crate) fn offset_term(&self) -> f64 {
        2.0 * PI * self.eta - 1.0
    }
}

/// Profile coefficients at one cam angle.
///
/// `b2` is constant and equals `s'(psi)`; `delta` is the angle of the
/// contact normal used throughout the force analysis. The cam-to-follower
/// frame angle is fixed at `-pi/2` and already folded into these
/// expressions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Coefficients {
    /// `p / (2 pi)` (mm).
    pub b2: f64,
    /// Distance from cam axis to the contact point along the normal (mm).
    pub b3: f64,
    /// Phase angle of the contact normal (rad), in `(-pi/2, pi/2)`.
    pub delta: f64,
}

/// Follower displacement `s(psi) = p/(2 pi) psi - p/2` (mm).
///
/// Its derivative is the constant `p/(2 pi)`; the second derivative is zero.
pub fn displacement(params: &DesignParams, psi: f64) -> f64 {
    params.p / (2.0 * PI) * psi - params.p / 2.0
}

/// Profile coefficients `b2`, `b3`, `delta` at angle `psi`.
///
/// `delta` uses the single-argument arctangent, range `(-pi/2, pi/2)`;
/// the feasible region has `2*pi*eta - 1 > 0`, which keeps this on the
/// intended branch.
pub fn coefficients(params: &DesignParams, psi: f64) -> Coefficients {
    let b2 = params.p / (2.0 * PI);
    let c = params.offset_term();
    let t = psi - PI;
    Coefficients {
        b2,
        b3: b2 * (c * c + t * t).sqrt(),
        delta: (t / c).atan(),
    }
}

/// Cam-profile point `(u_c, v_c)` in the cam frame (mm).
pub fn cam_profile_point(params: &DesignParams, psi: f64) -> (f64, f64) {
    let Coefficients { b2, b3, delta } = coefficients(params, psi);
    let r = b3 - params.a4;
    (
        b2 * psi.cos() + r * (delta - psi).cos(),
        -b2 * psi.sin() + r * (delta - psi).sin(),
    )
}

/// Pitch-curve point `(u_p, v_p)`: the roller center in the cam frame (mm).
///
/// This is the rotation of the fixed-frame point `(e, s(psi))` by `-psi`,
/// so its norm is `sqrt(e^2 + s^2)`.
pub fn pitch_curve_point(params: &DesignParams, psi: f64) -> (f64, f64) {
    let e = params.e();
    let s = displacement(params, psi);
    (
        e * psi.cos() + s * psi.sin(),
        -e * psi.sin() + s * psi.cos(),
    )
}

/// Extended angle `Delta`: the root of `v_c(psi) = 0` nearest zero in
/// `(-pi, 0)`, to absolute tolerance 1e-10 rad. Negative for every feasible
/// design of this family.
///
/// Fails with [`Error::NoRoot`] when `v_c` never changes sign on the
/// bracket, which signals geometrically infeasible parameters.
pub fn extended_angle(params: &DesignParams) -> Result<f64> {
    let v = |psi: f64| cam_profile_point(params, psi).1;
    bracketed_root(&v, -PI + 1e-6, -1e-12)
}

/// Scan `[lo, hi]` from the `hi` end for the first sign change of `f`, then
/// bisect that subinterval down to [`ROOT_TOL`].
fn bracketed_root(f: &dyn Fn(f64) -> f64, lo: f64, hi: f64) -> Result<f64> {
    let step = (hi - lo) / ROOT_SCAN_STEPS as f64;
    let mut right = hi;
    let mut f_right = f(right);
    if f_right == 0.0 {
        return Ok(right);
    }
    for i in 1..=ROOT_SCAN_STEPS {
        let left = hi - step * i as f64;
        let f_left = f(left);
        if f_left == 0.0 {
            return Ok(left);
        }
        if f_left * f_right < 0.0 {
            return Ok(bisect(f, left, right, f_left));
        }
        right = left;
        f_right = f_left;
    }
    Err(Error::NoRoot)
}

fn bisect(f: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64, mut f_lo: f64) -> f64 {
    while hi - lo > ROOT_TOL {
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if f_lo * f_mid < 0.0 {
            hi = mid;
        } else {
            lo = mid;
            f_lo = f_mid;
        }
    }
    0.5 * (lo + hi)
}

/// Which curve a [`ProfileCurve`] holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CurveKind {
    /// Contact-point trajectory; spans `[Delta, 2*pi - Delta]` and closes.
    CamProfile,
    /// Roller-center trajectory; spans one full turn `[0, 2*pi]`.
    PitchCurve,
}

/// One sampled point of a planar curve in the cam frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfilePoint {
    /// Cam angle (rad).
    pub psi: f64,
    /// u coordinate (mm).
    pub u: f64,
    /// v coordinate (mm).
    pub v: f64,
}

/// A sampled planar curve, `psi` strictly increasing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileCurve {
    pub kind: CurveKind,
    pub samples: Vec<ProfilePoint>,
}

/// Sample a curve on a uniform `psi` grid with both endpoints included.
///
/// Requires `n_samples >= 16`. The cam profile needs the extended angle and
/// therefore propagates [`Error::NoRoot`]; the pitch curve always samples.
pub fn sample_profile(
    params: &DesignParams,
    kind: CurveKind,
    n_samples: usize,
) -> Result<ProfileCurve> {
    if n_samples < 16 {
        return Err(Error::InvalidParam(format!(
            "n_samples must be at least 16, got {n_samples}"
        )));
    }
    let (start, end) = match kind {
        CurveKind::CamProfile => {
            let delta = extended_angle(params)?;
            (delta, 2.0 * PI - delta)
        }
        CurveKind::PitchCurve => (0.0, 2.0 * PI),
    };
    let h = (end - start) / (n_samples - 1) as f64;
    let samples = (0..n_samples)
        .map(|i| {
            // Pin the last sample to the exact endpoint.
            let psi = if i == n_samples - 1 {
                end
            } else {
                start + h * i as f64
            };
            let (u, v) = match kind {
                CurveKind::CamProfile => cam_profile_point(params, psi),
                CurveKind::PitchCurve => pitch_curve_point(params, psi),
            };
            ProfilePoint { psi, u, v }
        })
        .collect();
    Ok(ProfileCurve { kind, samples })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(p: f64, eta: f64, a4: f64) -> DesignParams {
        DesignParams::new(p, eta, a4, 9.5).unwrap()
    }

    /// Test-local closure function, written out from the raw profile
    /// equations so the root oracle does not share code with the
    /// implementation under test.
    fn v_c_raw(p: f64, eta: f64, a4: f64, psi: f64) -> f64 {
        let b2 = p / (2.0 * PI);
        let c = 2.0 * PI * eta - 1.0;
        let b3 = b2 * (c * c + (psi - PI) * (psi - PI)).sqrt();
        let delta = ((psi - PI) / c).atan();
        -b2 * psi.sin() + (b3 - a4) * (delta - psi).sin()
    }

    fn bisect_oracle(p: f64, eta: f64, a4: f64) -> f64 {
        let (mut lo, mut hi) = (-PI + 1e-9, -1e-12);
        assert!(v_c_raw(p, eta, a4, lo) * v_c_raw(p, eta, a4, hi) < 0.0);
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if v_c_raw(p, eta, a4, lo) * v_c_raw(p, eta, a4, mid) <= 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn construction_rejects_bad_params() {
        assert!(matches!(
            DesignParams::new(-1.0, 0.5, 10.0, 9.5),
            Err(Error::InvalidParam(_))
        ));
        assert!(matches!(
            DesignParams::new(50.0, 0.5, 0.0, 9.5),
            Err(Error::InvalidParam(_))
        ));
        assert!(matches!(
            DesignParams::new(50.0, 0.5, 10.0, -0.1),
            Err(Error::InvalidParam(_))
        ));
        // The singular offset ratio is rejected, including values that only
        // round to it.
        assert!(matches!(
            DesignParams::new(50.0, 1.0 / (2.0 * PI), 10.0, 9.5),
            Err(Error::EtaSingular { .. })
        ));
        assert!(matches!(
            DesignParams::new(50.0, 0.159155, 10.0, 9.5),
            Err(Error::EtaSingular { .. })
        ));
        assert!(DesignParams::new(50.0, 0.16, 10.0, 9.5).is_ok());
    }

    #[test]
    fn derived_offset_is_eta_times_p() {
        let d = params(50.0, 0.5, 15.5);
        assert_eq!(d.e(), 25.0);
    }

    #[test]
    fn displacement_endpoints() {
        let d = params(50.0, 0.5, 15.5);
        assert_eq!(displacement(&d, 0.0), -25.0);
        assert!(displacement(&d, PI).abs() < 1e-12);
        assert!((displacement(&d, 2.0 * PI) - 25.0).abs() < 1e-12);
    }

    #[test]
    fn displacement_is_linear_with_slope_b2() {
        let d = params(50.0, 0.4, 10.0);
        let b2 = 50.0 / (2.0 * PI);
        for (x, y) in [(0.3, 2.9), (-0.7, 5.1), (1.0, 1.0 + 1e-6)] {
            let lhs = displacement(&d, x) - displacement(&d, y);
            assert!((lhs - b2 * (x - y)).abs() < 1e-9);
        }
        assert!((coefficients(&d, 2.2).b2 - b2).abs() < 1e-15);
    }

    #[test]
    fn coefficients_at_midturn() {
        let d = params(50.0, 0.5, 15.5);
        let co = coefficients(&d, PI);
        assert!((co.b2 - 25.0 / PI).abs() < 1e-12);
        // b3(pi) = b2 * |2*pi*eta - 1| = b2 * (pi - 1) for eta = 0.5
        assert!((co.b3 - (25.0 / PI) * (PI - 1.0)).abs() < 1e-12);
        assert!((co.b3 - 17.042253).abs() < 1e-5);
        assert_eq!(co.delta, 0.0);
    }

    #[test]
    fn delta_vanishes_at_midturn_for_any_eta() {
        for eta in [0.2, 0.4, 0.69, 1.3] {
            let d = params(50.0, eta, 10.0);
            assert_eq!(coefficients(&d, PI).delta, 0.0);
        }
    }

    #[test]
    fn delta_at_full_turn() {
        let d = params(50.0, 0.5, 15.5);
        let expect = (PI / (PI - 1.0)).atan();
        assert!((coefficients(&d, 2.0 * PI).delta - expect).abs() < 1e-12);
        assert!((expect - 0.972).abs() < 1e-3);
    }

    #[test]
    fn cam_point_at_midturn() {
        let d = params(50.0, 0.5, 15.5);
        let (u, v) = cam_profile_point(&d, PI);
        assert!((u - (-9.5)).abs() < 1e-9);
        assert!(v.abs() < 1e-12);
        // Contact point sits one roller radius from the pitch point (-25, 0).
        let (up, vp) = pitch_curve_point(&d, PI);
        assert!((up - (-25.0)).abs() < 1e-9);
        assert!(vp.abs() < 1e-9);
        assert!((((u - up).powi(2) + (v - vp).powi(2)).sqrt() - 15.5).abs() < 1e-9);
    }

    #[test]
    fn pitch_point_at_start() {
        let d = params(50.0, 0.5, 15.5);
        let (u, v) = pitch_curve_point(&d, 0.0);
        assert!((u - 25.0).abs() < 1e-12);
        assert!((v - (-25.0)).abs() < 1e-12);
    }

    #[test]
    fn pitch_point_norm_is_rotation_invariant() {
        let d = params(50.0, 0.5, 15.5);
        for psi in [0.0, 0.8, 2.4, 4.0, 6.1] {
            let (u, v) = pitch_curve_point(&d, psi);
            let s = displacement(&d, psi);
            let expect = (d.e() * d.e() + s * s).sqrt();
            assert!(((u * u + v * v).sqrt() - expect).abs() < 1e-9);
        }
    }

    #[test]
    fn contact_distance_along_the_curve() {
        let d = params(50.0, 0.5, 15.5);
        for psi in [0.25, 1.0, 2.0, PI, 4.5, 6.0] {
            let (uc, vc) = cam_profile_point(&d, psi);
            let (up, vp) = pitch_curve_point(&d, psi);
            let dist = ((uc - up).powi(2) + (vc - vp).powi(2)).sqrt();
            assert!((dist - 15.5).abs() < 1e-9, "psi={psi}: dist={dist}");
        }
    }

    #[test]
    fn extended_angle_matches_bisection_oracle() {
        let d = params(50.0, 0.5, 15.5);
        let delta = extended_angle(&d).unwrap();
        let oracle = bisect_oracle(50.0, 0.5, 15.5);
        assert!(
            (delta - oracle).abs() < 1e-9,
            "delta={delta} oracle={oracle}"
        );
        assert!((delta - (-0.787)).abs() < 1e-3);
        assert!(v_c_raw(50.0, 0.5, 15.5, delta).abs() < 1e-8);
    }

    #[test]
    fn extended_angle_is_negative_across_designs() {
        // (eta, a4) pairs with a4 at the shaft-clearance bound.
        let rows = [
            (0.69, 24.99),
            (0.5, 15.5),
            (0.4, 10.5),
            (0.39, 10.0),
            (0.38, 9.5),
            (0.37, 9.0),
            (0.36, 8.5),
            (0.35, 8.0),
            (0.34, 7.5),
            (0.33, 7.0),
            (1.0 / PI, 6.41),
        ];
        for (eta, a4) in rows {
            let d = params(50.0, eta, a4);
            let delta = extended_angle(&d).unwrap();
            assert!(delta < 0.0, "eta={eta}: delta={delta}");
            assert!(delta > -PI);
            let oracle = bisect_oracle(50.0, eta, a4);
            assert!((delta - oracle).abs() < 1e-9, "eta={eta}");
        }
    }

    #[test]
    fn root_scan_reports_missing_sign_change() {
        assert_eq!(
            bracketed_root(&|_| 1.0, -PI + 1e-6, -1e-12),
            Err(Error::NoRoot)
        );
    }

    #[test]
    fn sample_counts_and_span() {
        let d = params(50.0, 0.5, 15.5);
        let curve = sample_profile(&d, CurveKind::CamProfile, 1024).unwrap();
        assert_eq!(curve.samples.len(), 1024);
        let delta = extended_angle(&d).unwrap();
        assert_eq!(curve.samples[0].psi, delta);
        assert_eq!(curve.samples[1023].psi, 2.0 * PI - delta);
        for w in curve.samples.windows(2) {
            assert!(w[0].psi < w[1].psi);
        }

        let pitch = sample_profile(&d, CurveKind::PitchCurve, 64).unwrap();
        assert_eq!(pitch.samples[0].psi, 0.0);
        assert_eq!(pitch.samples[63].psi, 2.0 * PI);

        assert!(matches!(
            sample_profile(&d, CurveKind::CamProfile, 15),
            Err(Error::InvalidParam(_))
        ));
    }

    #[test]
    fn cam_profile_closes_on_the_u_axis() {
        let d = params(50.0, 0.5, 15.5);
        let curve = sample_profile(&d, CurveKind::CamProfile, 257).unwrap();
        assert!(curve.samples[0].v.abs() < 1e-8);
        assert!(curve.samples[256].v.abs() < 1e-8);
    }

    #[test]
    fn cam_profile_is_symmetric_about_u_axis() {
        let d = params(50.0, 0.37, 9.0);
        let n = 512;
        let curve = sample_profile(&d, CurveKind::CamProfile, n).unwrap();
        // The uniform grid pairs psi_i with 2*pi - psi_i at the mirrored
        // index, where the profile reflects exactly.
        for i in 0..n {
            let a = curve.samples[i];
            let b = curve.samples[n - 1 - i];
            assert!((a.u - b.u).abs() < 1e-6, "i={i}");
            assert!((a.v + b.v).abs() < 1e-6, "i={i}");
        }
    }

    #[test]
    fn sampled_contact_distance_is_roller_radius() {
        let d = params(50.0, 0.37, 9.0);
        let curve = sample_profile(&d, CurveKind::CamProfile, 256).unwrap();
        for pt in &curve.samples {
            let (up, vp) = pitch_curve_point(&d, pt.psi);
            let dist = ((pt.u - up).powi(2) + (pt.v - vp).powi(2)).sqrt();
            assert!((dist - 9.0).abs() < 1e-9);
        }
    }
}
