//! The `slidecam` binary: a design tool for roller-cam prismatic
//! transmissions.
//!
//! Verbs: `profile` (curve export), `analyze` (one-design report), `sweep`
//! (design tables), `optimize` (constrained minimum), `layout` (cam phasing
//! and shaft placement). Exit codes: 0 success, 2 invalid input,
//! 3 infeasible design.

use std::f64::consts::PI;
use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use slidecam::geometry::{sample_profile, CurveKind, DesignParams};
use slidecam::kinematics::Mechanism;
use slidecam::loads::{
    pin_radius_for_roller, PinModel, DEFAULT_FREE_LENGTH, DEFAULT_YOUNG_MODULUS,
};
use slidecam::mechanism::{design_report, drive_schedule, layout};
use slidecam::optimizer::{optimize, sweep};
use slidecam_cli::config::FileConfig;
use slidecam_cli::render::{self, Rounding, SvgCurve};

const EXIT_INVALID: u8 = 2;
const EXIT_INFEASIBLE: u8 = 3;

const DEFAULT_PITCH: f64 = 50.0;
const DEFAULT_SHAFT_RADIUS: f64 = 9.5;
const DEFAULT_TORQUE_NM: f64 = 1.2;
const DEFAULT_SAMPLES: usize = 1024;

/// Offset-ratio columns of the published coaxial design table.
const TABLE1_ETAS: [f64; 11] = [
    0.69,
    0.5,
    0.4,
    0.39,
    0.38,
    0.37,
    0.36,
    0.35,
    0.34,
    0.33,
    1.0 / PI,
];

/// Offset-ratio columns of the published non-coaxial design table.
const TABLE2_ETAS: [f64; 10] = [0.5, 0.4, 0.39, 0.38, 0.37, 0.36, 0.35, 0.34, 0.33, 1.0 / PI];

#[derive(Parser)]
#[command(
    name = "slidecam",
    version,
    about = "Roller-cam prismatic transmission design tool"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Export cam-profile or pitch-curve geometry (csv, svg or json)
    Profile(ProfileArgs),
    /// Report closure, pressure angle, service factor, deflection and
    /// feasibility for one design point
    Analyze(CommonArgs),
    /// Evaluate a design table over a list of offset ratios (csv)
    Sweep(SweepArgs),
    /// Minimize the stiffness objective over the offset ratio
    Optimize(OptimizeArgs),
    /// Print cam phasing, shaft placement and the drive schedule
    Layout(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Pitch p (mm)
    #[arg(long)]
    p: Option<f64>,
    /// Offset ratio eta = e/p
    #[arg(long)]
    eta: Option<f64>,
    /// Roller radius a4 (mm)
    #[arg(long)]
    a4: Option<f64>,
    /// Camshaft radius b (mm)
    #[arg(long)]
    b: Option<f64>,
    /// Pin free length L (mm)
    #[arg(long = "L")]
    length: Option<f64>,
    /// Motor torque (N·m)
    #[arg(long)]
    tau: Option<f64>,
    /// Young modulus E (MPa)
    #[arg(long = "E")]
    young_modulus: Option<f64>,
    /// Cam arrangement
    #[arg(long, value_enum)]
    mechanism: Option<MechanismArg>,
    /// Points per exported curve
    #[arg(long)]
    samples: Option<usize>,
    /// Output format (default depends on the verb)
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Output file; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
    /// Flat key=value config file; flags override it
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct ProfileArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Which curve(s) to export
    #[arg(long, value_enum, default_value = "cam")]
    curve: CurveArg,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Comma-separated offset ratios, e.g. --etas 0.5,0.4,0.37
    #[arg(long, value_delimiter = ',')]
    etas: Option<Vec<f64>>,
    /// Published table to reproduce instead of --etas
    #[arg(long, value_enum)]
    preset: Option<PresetArg>,
    /// Numeric display precision
    #[arg(long, value_enum, default_value = "full")]
    round: RoundArg,
}

#[derive(Args)]
struct OptimizeArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Lower bound on eta (default 1/pi)
    #[arg(long = "eta-min")]
    eta_min: Option<f64>,
    /// Upper bound on eta (default 0.9)
    #[arg(long = "eta-max")]
    eta_max: Option<f64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MechanismArg {
    #[value(name = "coaxial")]
    Coaxial,
    #[value(name = "noncoaxial3")]
    Noncoaxial3,
}

impl From<MechanismArg> for Mechanism {
    fn from(m: MechanismArg) -> Self {
        match m {
            MechanismArg::Coaxial => Mechanism::CoaxialConjugate,
            MechanismArg::Noncoaxial3 => Mechanism::NonCoaxialTriple,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Svg,
    Json,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CurveArg {
    Cam,
    Pitch,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RoundArg {
    Full,
    Paper,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PresetArg {
    Table1,
    Table2,
}

struct AppError {
    code: u8,
    msg: String,
}

impl AppError {
    fn invalid(msg: impl Into<String>) -> Self {
        Self {
            code: EXIT_INVALID,
            msg: msg.into(),
        }
    }

    fn infeasible(msg: impl Into<String>) -> Self {
        Self {
            code: EXIT_INFEASIBLE,
            msg: msg.into(),
        }
    }
}

impl From<slidecam::Error> for AppError {
    fn from(e: slidecam::Error) -> Self {
        let code = match e {
            slidecam::Error::InvalidParam(_) | slidecam::Error::EtaSingular { .. } => EXIT_INVALID,
            _ => EXIT_INFEASIBLE,
        };
        Self {
            code,
            msg: e.to_string(),
        }
    }
}

impl From<std::io::Error> for AppError {
    fn from(e: std::io::Error) -> Self {
        Self::invalid(format!("io error: {e}"))
    }
}

/// Inputs after merging flags, config file and defaults. Torque is already
/// converted to N·mm.
struct Resolved {
    p: f64,
    eta: Option<f64>,
    a4: Option<f64>,
    b: f64,
    length: f64,
    torque_nmm: f64,
    young_modulus: f64,
    mechanism: Mechanism,
    /// Whether a flag or config line picked the mechanism (as opposed to
    /// the built-in default).
    mechanism_explicit: bool,
    samples: usize,
    format: Option<FormatArg>,
}

fn parse_mechanism_name(s: &str) -> Result<Mechanism, AppError> {
    match s {
        "coaxial" => Ok(Mechanism::CoaxialConjugate),
        "noncoaxial3" => Ok(Mechanism::NonCoaxialTriple),
        other => Err(AppError::invalid(format!(
            "unknown mechanism `{other}` (expected coaxial or noncoaxial3)"
        ))),
    }
}

fn parse_format_name(s: &str) -> Result<FormatArg, AppError> {
    match s {
        "csv" => Ok(FormatArg::Csv),
        "svg" => Ok(FormatArg::Svg),
        "json" => Ok(FormatArg::Json),
        "text" => Ok(FormatArg::Text),
        other => Err(AppError::invalid(format!("unknown format `{other}`"))),
    }
}

fn resolve(common: &CommonArgs) -> Result<Resolved, AppError> {
    let file = match &common.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| AppError::invalid(format!("cannot read {}: {e}", path.display())))?;
            FileConfig::parse(&text).map_err(AppError::invalid)?
        }
        None => FileConfig::default(),
    };
    let (mechanism, mechanism_explicit) = match (common.mechanism, &file.mechanism) {
        (Some(m), _) => (m.into(), true),
        (None, Some(name)) => (parse_mechanism_name(name)?, true),
        (None, None) => (Mechanism::CoaxialConjugate, false),
    };
    let format = match (common.format, &file.format) {
        (Some(f), _) => Some(f),
        (None, Some(name)) => Some(parse_format_name(name)?),
        (None, None) => None,
    };
    Ok(Resolved {
        p: common.p.or(file.p).unwrap_or(DEFAULT_PITCH),
        eta: common.eta.or(file.eta),
        a4: common.a4.or(file.a4),
        b: common.b.or(file.b).unwrap_or(DEFAULT_SHAFT_RADIUS),
        length: common.length.or(file.l).unwrap_or(DEFAULT_FREE_LENGTH),
        torque_nmm: common.tau.or(file.tau).unwrap_or(DEFAULT_TORQUE_NM) * 1e3,
        young_modulus: common
            .young_modulus
            .or(file.e_modulus)
            .unwrap_or(DEFAULT_YOUNG_MODULUS),
        mechanism,
        mechanism_explicit,
        samples: common.samples.or(file.samples).unwrap_or(DEFAULT_SAMPLES),
        format,
    })
}

impl Resolved {
    fn design_params(&self) -> Result<DesignParams, AppError> {
        let eta = self.eta.ok_or_else(|| AppError::invalid("missing --eta"))?;
        let a4 = self.a4.ok_or_else(|| AppError::invalid("missing --a4"))?;
        Ok(DesignParams::new(self.p, eta, a4, self.b)?)
    }

    /// Pin model with the radius taken from the roller via the bearing fit.
    fn pin_for(&self, a4: f64) -> Result<PinModel, AppError> {
        let a5 = pin_radius_for_roller(a4)?;
        Ok(PinModel::new(
            self.length,
            self.torque_nmm,
            self.young_modulus,
            a5,
        )?)
    }
}

fn write_output(out: &Option<PathBuf>, content: &str) -> Result<(), AppError> {
    match out {
        Some(path) => fs::write(path, content.as_bytes())
            .map_err(|e| AppError::invalid(format!("cannot write {}: {e}", path.display()))),
        None => {
            std::io::stdout().write_all(content.as_bytes())?;
            Ok(())
        }
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<String, AppError> {
    let mut s = serde_json::to_string_pretty(value)
        .map_err(|e| AppError::invalid(format!("serialization failed: {e}")))?;
    s.push('\n');
    Ok(s)
}

fn cmd_profile(args: &ProfileArgs) -> Result<(), AppError> {
    let r = resolve(&args.common)?;
    let params = r.design_params()?;
    let format = r.format.unwrap_or(FormatArg::Csv);
    let content = match format {
        FormatArg::Csv => {
            let kind = match args.curve {
                CurveArg::Cam => CurveKind::CamProfile,
                CurveArg::Pitch => CurveKind::PitchCurve,
                CurveArg::Both => {
                    return Err(AppError::invalid(
                        "csv holds a single curve; use --curve cam or pitch, or svg/json",
                    ))
                }
            };
            render::profile_csv(&sample_profile(&params, kind, r.samples)?.samples)
        }
        FormatArg::Svg => {
            let mut curves = Vec::new();
            if args.curve != CurveArg::Pitch {
                curves.push((
                    sample_profile(&params, CurveKind::CamProfile, r.samples)?,
                    true,
                ));
            }
            if args.curve != CurveArg::Cam {
                curves.push((
                    sample_profile(&params, CurveKind::PitchCurve, r.samples)?,
                    false,
                ));
            }
            let refs: Vec<SvgCurve> = curves
                .iter()
                .map(|(c, closed)| SvgCurve {
                    points: &c.samples,
                    closed: *closed,
                })
                .collect();
            render::svg_document(&refs)
        }
        FormatArg::Json => match args.curve {
            CurveArg::Cam => to_json(&sample_profile(&params, CurveKind::CamProfile, r.samples)?)?,
            CurveArg::Pitch => {
                to_json(&sample_profile(&params, CurveKind::PitchCurve, r.samples)?)?
            }
            CurveArg::Both => to_json(&serde_json::json!({
                "cam": sample_profile(&params, CurveKind::CamProfile, r.samples)?,
                "pitch": sample_profile(&params, CurveKind::PitchCurve, r.samples)?,
            }))?,
        },
        FormatArg::Text => {
            return Err(AppError::invalid(
                "profile has no text format; use csv, svg or json",
            ))
        }
    };
    write_output(&args.common.out, &content)
}

fn cmd_analyze(common: &CommonArgs) -> Result<(), AppError> {
    let r = resolve(common)?;
    let params = r.design_params()?;
    let pin = r.pin_for(params.a4())?;
    let report = design_report(&params, &pin, r.mechanism)?;
    let content = match r.format.unwrap_or(FormatArg::Text) {
        FormatArg::Text => render::analyze_text(&report),
        FormatArg::Json => to_json(&report)?,
        _ => return Err(AppError::invalid("analyze supports text or json")),
    };
    write_output(&common.out, &content)?;
    if !report.feasibility.all_ok {
        return Err(AppError::infeasible(
            "design violates feasibility gates (see report)",
        ));
    }
    Ok(())
}

fn cmd_sweep(args: &SweepArgs) -> Result<(), AppError> {
    let r = resolve(&args.common)?;
    // A preset fixes the eta column and, unless overridden, the table's
    // arrangement.
    let (etas, preset_mechanism): (Vec<f64>, Option<Mechanism>) = match (&args.etas, args.preset) {
        (Some(list), None) => (list.clone(), None),
        (None, Some(PresetArg::Table1)) => {
            (TABLE1_ETAS.to_vec(), Some(Mechanism::CoaxialConjugate))
        }
        (None, Some(PresetArg::Table2)) => {
            (TABLE2_ETAS.to_vec(), Some(Mechanism::NonCoaxialTriple))
        }
        (Some(_), Some(_)) => {
            return Err(AppError::invalid(
                "--etas and --preset are mutually exclusive",
            ))
        }
        (None, None) => return Err(AppError::invalid("provide --etas or --preset")),
    };
    let mechanism = match preset_mechanism {
        Some(m) if !r.mechanism_explicit => m,
        _ => r.mechanism,
    };
    if !matches!(r.format.unwrap_or(FormatArg::Csv), FormatArg::Csv) {
        return Err(AppError::invalid("sweep emits csv"));
    }
    // Template pin; each row replaces the radius through the bearing fit.
    let pin = PinModel::new(r.length, r.torque_nmm, r.young_modulus, 1.0)?;
    let rows = sweep(r.p, r.b, &pin, &etas, mechanism);
    let rounding = match args.round {
        RoundArg::Full => Rounding::Full,
        RoundArg::Paper => Rounding::Paper,
    };
    write_output(&args.common.out, &render::sweep_csv(&rows, rounding))
}

fn cmd_optimize(args: &OptimizeArgs) -> Result<(), AppError> {
    let r = resolve(&args.common)?;
    let bounds = (
        args.eta_min.unwrap_or(1.0 / PI),
        args.eta_max.unwrap_or(0.9),
    );
    let result = optimize(r.p, r.b, bounds, r.mechanism)?;
    let content = match r.format.unwrap_or(FormatArg::Text) {
        FormatArg::Text => render::optimize_text(&result),
        FormatArg::Json => to_json(&result)?,
        _ => return Err(AppError::invalid("optimize supports text or json")),
    };
    write_output(&args.common.out, &content)
}

fn cmd_layout(common: &CommonArgs) -> Result<(), AppError> {
    let r = resolve(common)?;
    // Only the pitch matters for placement; the schedule additionally needs
    // a full design point.
    let (params, schedule) = match (r.eta, r.a4) {
        (Some(eta), Some(a4)) => {
            let params = DesignParams::new(r.p, eta, a4, r.b)?;
            let schedule = drive_schedule(&params, r.mechanism)?;
            (params, Some(schedule))
        }
        _ => (DesignParams::new(r.p, 0.5, r.p / 5.0, r.b)?, None),
    };
    let l = layout(&params, r.mechanism);
    let content = match r.format.unwrap_or(FormatArg::Text) {
        FormatArg::Text => render::layout_text(&l, schedule.as_ref()),
        FormatArg::Json => to_json(&serde_json::json!({
            "layout": l,
            "schedule": schedule,
        }))?,
        _ => return Err(AppError::invalid("layout supports text or json")),
    };
    write_output(&common.out, &content)
}

fn run(cli: Cli) -> Result<(), AppError> {
    match &cli.command {
        Command::Profile(args) => cmd_profile(args),
        Command::Analyze(common) => cmd_analyze(common),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Optimize(args) => cmd_optimize(args),
        Command::Layout(common) => cmd_layout(common),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.msg);
            ExitCode::from(e.code)
        }
    }
}
