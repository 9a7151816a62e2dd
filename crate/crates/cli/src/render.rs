//! Writers and readers for the CLI's file formats.
//!
//! - profile CSV: header `psi_rad,u_mm,v_mm`, LF line endings, 9 significant
//!   digits per value, one LF after the last row and nothing else;
//! - sweep CSV: header `eta,a4_mm,a5_mm,z,vLmax_um,mu_min_deg,mu_max_deg,
//!   service_pct,error` with the trailing error column empty on good rows;
//!   full precision by default (shortest round-trip form), table display
//!   precision with [`Rounding::Paper`];
//! - SVG: millimetre user units, one `path` per curve, v negated so +v in
//!   the cam frame points up on screen, 0.2 mm stroke and no other styling.
//!
//! The parse functions invert the writers; re-rendering a parsed
//! full-precision file reproduces it byte for byte.

use std::fmt::Write as _;

use slidecam::geometry::ProfilePoint;
use slidecam::kinematics::Mechanism;
use slidecam::mechanism::{AnalysisReport, DriveSchedule, Layout};
use slidecam::optimizer::{OptimizationResult, SweepRow, CONSTRAINT_NAMES};

pub const PROFILE_HEADER: &str = "psi_rad,u_mm,v_mm";
pub const SWEEP_HEADER: &str = "eta,a4_mm,a5_mm,z,vLmax_um,mu_min_deg,mu_max_deg,service_pct,error";

/// Numeric display mode for sweep tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rounding {
    /// Shortest representation that parses back to the same value.
    Full,
    /// The published tables' column precision.
    Paper,
}

/// CLI spelling of a mechanism kind.
pub fn mechanism_name(m: Mechanism) -> &'static str {
    match m {
        Mechanism::CoaxialConjugate => "coaxial",
        Mechanism::NonCoaxialTriple => "noncoaxial3",
    }
}

/// Format with 9 significant digits in plain decimal notation.
pub fn fmt_sig9(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let decimals = sig9_decimals(x);
    let s = format!("{x:.decimals$}");
    // Rounding at the ninth digit can carry into the next decade
    // (9.999999996 -> "10.00000000"); reformat so parse/render is stable.
    let carried: f64 = s.parse().unwrap();
    let d2 = sig9_decimals(carried);
    if d2 != decimals {
        format!("{x:.d2$}")
    } else {
        s
    }
}

fn sig9_decimals(x: f64) -> usize {
    let exp = x.abs().log10().floor() as i32;
    (8 - exp).max(0) as usize
}

pub fn profile_csv(samples: &[ProfilePoint]) -> String {
    let mut out = String::with_capacity(32 * (samples.len() + 1));
    out.push_str(PROFILE_HEADER);
    out.push('\n');
    for pt in samples {
        let _ = writeln!(
            out,
            "{},{},{}",
            fmt_sig9(pt.psi),
            fmt_sig9(pt.u),
            fmt_sig9(pt.v)
        );
    }
    out
}

pub fn parse_profile_csv(text: &str) -> Result<Vec<ProfilePoint>, String> {
    let mut lines = text.lines();
    match lines.next() {
        Some(PROFILE_HEADER) => {}
        other => return Err(format!("bad profile header: {other:?}")),
    }
    lines
        .enumerate()
        .map(|(i, line)| {
            let mut cells = line.split(',').map(str::trim);
            let mut next = |name: &str| {
                cells
                    .next()
                    .ok_or_else(|| format!("row {}: missing {name}", i + 1))?
                    .parse::<f64>()
                    .map_err(|e| format!("row {}: {name}: {e}", i + 1))
            };
            Ok(ProfilePoint {
                psi: next("psi_rad")?,
                u: next("u_mm")?,
                v: next("v_mm")?,
            })
        })
        .collect()
}

fn fmt_z(z: f64, rounding: Rounding) -> String {
    match rounding {
        Rounding::Full => format!("{z}"),
        Rounding::Paper if z >= 1e6 => format!("{:.2e}", z),
        Rounding::Paper => format!("{z:.0}"),
    }
}

pub fn sweep_csv(rows: &[SweepRow], rounding: Rounding) -> String {
    let mut out = String::new();
    out.push_str(SWEEP_HEADER);
    out.push('\n');
    for row in rows {
        match (&row.data, rounding) {
            (Ok(d), Rounding::Full) => {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},",
                    row.eta,
                    d.a4,
                    d.a5,
                    d.z,
                    d.v_l_max_mm * 1e3,
                    d.mu_min_abs.to_degrees(),
                    d.mu_max_abs.to_degrees(),
                    d.service_factor * 100.0
                );
            }
            (Ok(d), Rounding::Paper) => {
                let _ = writeln!(
                    out,
                    "{},{:.2},{:.2},{},{:.2},{:.2},{:.2},{:.2},",
                    row.eta,
                    d.a4,
                    d.a5,
                    fmt_z(d.z, rounding),
                    d.v_l_max_mm * 1e3,
                    d.mu_min_abs.to_degrees(),
                    d.mu_max_abs.to_degrees(),
                    d.service_factor * 100.0
                );
            }
            (Err(e), _) => {
                let msg = e.to_string();
                let quoted = if msg.contains(',') {
                    format!("\"{msg}\"")
                } else {
                    msg
                };
                let _ = writeln!(out, "{},,,,,,,,{quoted}", row.eta);
            }
        }
    }
    out
}

/// One parsed sweep row: `(eta, columns if present, error text if present)`.
pub type ParsedSweepRow = (f64, Option<[f64; 7]>, Option<String>);

pub fn parse_sweep_csv(text: &str) -> Result<Vec<ParsedSweepRow>, String> {
    let mut lines = text.lines();
    match lines.next() {
        Some(SWEEP_HEADER) => {}
        other => return Err(format!("bad sweep header: {other:?}")),
    }
    lines
        .enumerate()
        .map(|(i, line)| {
            let cells: Vec<&str> = line.splitn(9, ',').collect();
            if cells.len() != 9 {
                return Err(format!(
                    "row {}: expected 9 cells, got {}",
                    i + 1,
                    cells.len()
                ));
            }
            let eta: f64 = cells[0]
                .parse()
                .map_err(|e| format!("row {}: eta: {e}", i + 1))?;
            if cells[1].is_empty() {
                let err = cells[8].trim_matches('"').to_string();
                return Ok((eta, None, Some(err)));
            }
            let mut vals = [0.0; 7];
            for (slot, cell) in vals.iter_mut().zip(&cells[1..8]) {
                *slot = cell.parse().map_err(|e| format!("row {}: {e}", i + 1))?;
            }
            Ok((eta, Some(vals), None))
        })
        .collect()
}

/// Re-render parsed sweep rows in full precision.
pub fn render_parsed_sweep(rows: &[ParsedSweepRow]) -> String {
    let mut out = String::new();
    out.push_str(SWEEP_HEADER);
    out.push('\n');
    for (eta, vals, err) in rows {
        match vals {
            Some(v) => {
                let _ = writeln!(
                    out,
                    "{eta},{},{},{},{},{},{},{},",
                    v[0], v[1], v[2], v[3], v[4], v[5], v[6]
                );
            }
            None => {
                let msg = err.clone().unwrap_or_default();
                let quoted = if msg.contains(',') {
                    format!("\"{msg}\"")
                } else {
                    msg
                };
                let _ = writeln!(out, "{eta},,,,,,,,{quoted}");
            }
        }
    }
    out
}

/// A named curve for SVG export: points plus whether the path closes.
pub struct SvgCurve<'a> {
    pub points: &'a [ProfilePoint],
    pub closed: bool,
}

/// Millimetre-unit SVG with one path per curve. The cam-frame v axis is
/// negated so that +v renders upward.
pub fn svg_document(curves: &[SvgCurve<'_>]) -> String {
    let mut min_x = f64::INFINITY;
    let mut min_y = f64::INFINITY;
    let mut max_x = f64::NEG_INFINITY;
    let mut max_y = f64::NEG_INFINITY;
    for c in curves {
        for pt in c.points {
            min_x = min_x.min(pt.u);
            max_x = max_x.max(pt.u);
            min_y = min_y.min(-pt.v);
            max_y = max_y.max(-pt.v);
        }
    }
    let margin = 2.0;
    let (w, h) = (max_x - min_x + 2.0 * margin, max_y - min_y + 2.0 * margin);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w:.3}mm\" height=\"{h:.3}mm\" \
         viewBox=\"{:.3} {:.3} {w:.3} {h:.3}\">",
        min_x - margin,
        min_y - margin
    );
    for c in curves {
        let mut d = String::new();
        for (i, pt) in c.points.iter().enumerate() {
            let cmd = if i == 0 { 'M' } else { 'L' };
            let _ = write!(d, "{cmd} {:.6} {:.6} ", pt.u, -pt.v);
        }
        if c.closed {
            d.push('Z');
        }
        let _ = writeln!(
            out,
            "  <path d=\"{}\" fill=\"none\" stroke=\"black\" stroke-width=\"0.2\"/>",
            d.trim_end()
        );
    }
    out.push_str("</svg>\n");
    out
}

fn flag(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "FAIL"
    }
}

pub fn analyze_text(rep: &AnalysisReport) -> String {
    let mut o = String::new();
    let _ = writeln!(o, "design point");
    let _ = writeln!(o, "  p           {:.3} mm", rep.p);
    let _ = writeln!(
        o,
        "  eta         {:.6}  (e = {:.3} mm)",
        rep.eta,
        rep.eta * rep.p
    );
    let _ = writeln!(o, "  a4          {:.4} mm", rep.a4);
    let _ = writeln!(o, "  b           {:.3} mm", rep.b);
    let _ = writeln!(o, "  mechanism   {}", mechanism_name(rep.mechanism));
    let _ = writeln!(o, "closure");
    let _ = writeln!(
        o,
        "  Delta       {:.6} rad  ({:.3} deg)",
        rep.delta,
        rep.delta.to_degrees()
    );
    let _ = writeln!(
        o,
        "  drive       psi in [{:.6}, {:.6}] rad",
        rep.interval.psi_start, rep.interval.psi_end
    );
    let _ = writeln!(o, "performance");
    let _ = writeln!(o, "  |mu| min    {:.2} deg", rep.mu_min_abs.to_degrees());
    let _ = writeln!(o, "  |mu| max    {:.2} deg", rep.mu_max_abs.to_degrees());
    let _ = writeln!(o, "  service     {:.2} %", rep.service_factor * 100.0);
    let _ = writeln!(o, "  vL max      {:.2} um", rep.v_l_max_mm * 1e3);
    match rep.z {
        Some(z) => {
            let _ = writeln!(o, "  z           {z:.1}");
        }
        None => {
            let _ = writeln!(o, "  z           n/a (roller too small for a pin)");
        }
    }
    let _ = writeln!(o, "curvature");
    match rep.kappa_p_max {
        Some(k) => {
            let _ = writeln!(o, "  kappa_p max {k:.6} 1/mm");
        }
        None => {
            let _ = writeln!(o, "  kappa_p max n/a");
        }
    }
    match rep.kappa_c_max {
        Some(k) => {
            let _ = writeln!(o, "  kappa_c max {k:.6} 1/mm");
        }
        None => {
            let _ = writeln!(o, "  kappa_c max n/a");
        }
    }
    let f = &rep.feasibility;
    let _ = writeln!(o, "feasibility");
    let _ = writeln!(o, "  offset above lower bound   {}", flag(f.eta_ok_lower));
    let _ = writeln!(
        o,
        "  roller spacing             {}",
        flag(f.roller_fits_pitch)
    );
    let _ = writeln!(
        o,
        "  shaft clearance            {}",
        flag(f.roller_clears_shaft)
    );
    let _ = writeln!(o, "  convex pitch curve         {}", flag(f.convex_pitch));
    let _ = writeln!(o, "  no undercutting            {}", flag(f.no_undercut));
    let _ = writeln!(
        o,
        "  => design {}",
        if f.all_ok { "feasible" } else { "INFEASIBLE" }
    );
    o
}

pub fn optimize_text(res: &OptimizationResult) -> String {
    let mut o = String::new();
    let _ = writeln!(o, "optimum");
    let _ = writeln!(o, "  eta   {:.6}", res.eta);
    let _ = writeln!(o, "  a4    {:.4} mm", res.a4);
    let _ = writeln!(o, "  a5    {:.4} mm", res.a5);
    let _ = writeln!(o, "  z     {:.2}", res.z);
    let _ = writeln!(o, "constraints");
    let gs = [
        Some(res.constraints.g1),
        Some(res.constraints.g2),
        res.constraints.g3,
        Some(res.constraints.g4),
        Some(res.constraints.g5),
    ];
    for ((name, g), active) in CONSTRAINT_NAMES.iter().zip(gs).zip(res.constraints.active) {
        match g {
            Some(g) => {
                let _ = writeln!(
                    o,
                    "  {name}  {g:+.6e}{}",
                    if active { "  active" } else { "" }
                );
            }
            None => {
                let _ = writeln!(o, "  {name}  n/a");
            }
        }
    }
    let _ = writeln!(o, "iterations {}", res.iterations);
    o
}

pub fn layout_text(layout: &Layout, schedule: Option<&DriveSchedule>) -> String {
    let mut o = String::new();
    let _ = writeln!(
        o,
        "mechanism {} ({} cams)",
        mechanism_name(layout.kind),
        layout.phases.len()
    );
    for (i, (phase, y)) in layout.phases.iter().zip(&layout.offsets_y).enumerate() {
        let _ = writeln!(
            o,
            "  cam {}: phase {:.1} deg, shaft y = {:.3} mm",
            i + 1,
            phase.to_degrees(),
            y
        );
    }
    if let Some(s) = schedule {
        let _ = writeln!(o, "drive schedule (shaft angle)");
        for e in &s.entries {
            let _ = writeln!(
                o,
                "  cam {}: [{:.3}, {:.3}) deg",
                e.cam + 1,
                e.psi_start.to_degrees(),
                e.psi_end.to_degrees()
            );
        }
    }
    o
}
