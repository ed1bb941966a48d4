//! Command-line configuration and dispatch.

use std::f64::consts::PI;
use std::fs::File;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use zeta4_core::ladder::{
    build_ladder_with, find_almost_parallel_chords, find_unit_slope_chord, measure_log_drift, verify_theorem_with,
    Convention, LadderCurve, LadderOptions,
};
use zeta4_core::quad::{
    cumulative_moments, fit_moment_polynomial, fit_moment_polynomial_degree, integrate_z4_with, laplace_moment_with,
    LaplaceOptions, MomentOptions,
};
use zeta4_core::specfun::{theta, z, Precision};
use zeta4_core::zeros::{
    crossing_point, find_inflection_with, find_zeros_with, rotating_chord_solve, select_gamma_bar,
    verify_corollaries_with, CorollaryOptions, ZeroGeometry, ZeroOptions,
};
use zeta4_core::{validity_length, DEFAULT_EVAL_BUDGET};

use crate::formats::{self, GeometryRecord, Sample};
use crate::report::{write_record, Report};
use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LogConvention {
    AnchorLog,
    LocalLog,
}

impl From<LogConvention> for Convention {
    fn from(c: LogConvention) -> Self {
        match c {
            LogConvention::AnchorLog => Convention::AnchorLog,
            LogConvention::LocalLog => Convention::LocalLog,
        }
    }
}

/// Which window bounds the rotating chord.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RotateMode {
    /// Up to the inflection point between `γ` and the next zero.
    Inflection,
    /// Up to the crossing point with the chord `(γ, γ̄)`.
    Crossing,
}

#[derive(Debug, Clone, Parser, Serialize)]
#[command(name = "zeta4", version, about = "Fourth moment of zeta on the critical line and the geometry of its ladder curve")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,

    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,

    /// Output file; standard output when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Cap on integrand evaluations per operation.
    #[arg(long, env = "ZETA4_EVAL_BUDGET", default_value_t = DEFAULT_EVAL_BUDGET, global = true)]
    pub budget: u64,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum Command {
    /// Riemann–Siegel theta at one height.
    Theta {
        #[arg(long, allow_negative_numbers = true)]
        t: f64,
    },
    /// Z(t) with its error bound.
    Z {
        #[arg(long, allow_negative_numbers = true)]
        t: f64,
        #[arg(long, default_value_t = 4)]
        correction_terms: usize,
        #[arg(long, default_value_t = 1e-8)]
        target_abs_err: f64,
    },
    /// Zeros of Z in [t-lo, t-hi].
    Zeros {
        #[arg(long = "t-lo", allow_negative_numbers = true)]
        t_lo: f64,
        #[arg(long = "t-hi", allow_negative_numbers = true)]
        t_hi: f64,
        #[arg(long, default_value_t = 0.05)]
        step: f64,
    },
    /// Integral of Z⁴ over [T, T+U].
    Moment {
        #[arg(long = "T", allow_negative_numbers = true)]
        #[serde(rename = "T")]
        t: f64,
        #[arg(long = "U", allow_negative_numbers = true)]
        #[serde(rename = "U")]
        u: f64,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, default_value_t = 0.25)]
        panel_scale: f64,
    },
    /// Exponentially damped moment.
    Laplace {
        #[arg(long, allow_negative_numbers = true)]
        delta: f64,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Tail envelope constant; calibrated when omitted.
        #[arg(long)]
        envelope_const: Option<f64>,
    },
    /// Fits the moment polynomial in ln T.
    Fit {
        /// Sample CSV (T,value,err_bound); computed from --T when omitted.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Heights to sample, comma separated.
        #[arg(long = "T", value_delimiter = ',')]
        #[serde(rename = "T")]
        heights: Vec<f64>,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, default_value_t = 0.5)]
        panel_scale: f64,
        /// Also write the computed samples here.
        #[arg(long)]
        samples_out: Option<PathBuf>,
    },
    /// Builds the ladder curve on [T, T+U].
    Ladder {
        #[arg(long = "T", allow_negative_numbers = true)]
        #[serde(rename = "T")]
        t: f64,
        #[arg(long = "U", allow_negative_numbers = true)]
        #[serde(rename = "U")]
        u: f64,
        #[arg(long, default_value_t = 0.01)]
        step: f64,
        #[arg(long, value_enum, default_value_t = LogConvention::AnchorLog)]
        convention: LogConvention,
        #[arg(long, default_value_t = 0.01)]
        eps: f64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Chords of slope close to 1, or the unit-slope chord from --from.
    Chords {
        /// Curve CSV with its JSON sidecar; built from --T/--U when omitted.
        #[arg(long)]
        ladder: Option<PathBuf>,
        #[arg(long = "T", allow_negative_numbers = true)]
        #[serde(rename = "T")]
        t: Option<f64>,
        #[arg(long = "U", allow_negative_numbers = true)]
        #[serde(rename = "U")]
        u: Option<f64>,
        #[arg(long, default_value_t = 0.01)]
        step: f64,
        /// Chord lengths to scan, comma separated.
        #[arg(long = "length", value_delimiter = ',')]
        lengths: Vec<f64>,
        #[arg(long, default_value_t = 0.2)]
        tol: f64,
        #[arg(long)]
        from: Option<f64>,
        /// Chords listed per length in JSON output.
        #[arg(long, default_value_t = 1000)]
        max_chords: usize,
    },
    /// Inflection point between the zero nearest --gamma and the next one.
    Inflect {
        #[arg(long, allow_negative_numbers = true)]
        gamma: f64,
        #[arg(long, default_value_t = 0.001)]
        step: f64,
    },
    /// The paired zero, the crossing point and the unit-slope checks.
    GammaBar {
        #[arg(long, allow_negative_numbers = true)]
        gamma: f64,
        #[arg(long, default_value_t = 0.01)]
        eps: f64,
        #[arg(long, default_value_t = 0.01)]
        step: f64,
        /// Refuse heights where γ + γ^(13/14+2ε) exceeds this.
        #[arg(long, default_value_t = 5e4)]
        max_height: f64,
    },
    /// Chord from γ with a prescribed slope.
    Rotate {
        #[arg(long, allow_negative_numbers = true)]
        gamma: f64,
        #[arg(long = "tan")]
        tan: f64,
        #[arg(long, value_enum, default_value_t = RotateMode::Inflection)]
        mode: RotateMode,
        /// Targets are clamped to [eta, 1 - eta] in crossing mode.
        #[arg(long, default_value_t = 0.05)]
        eta: f64,
        #[arg(long, default_value_t = 0.01)]
        eps: f64,
        #[arg(long, default_value_t = 0.001)]
        step: f64,
        #[arg(long, default_value_t = 5e4)]
        max_height: f64,
    },
    /// Compares a direct integral with the chord slope over [T, T+U].
    Verify {
        #[arg(long = "T", allow_negative_numbers = true)]
        #[serde(rename = "T")]
        t: f64,
        #[arg(long = "U", allow_negative_numbers = true)]
        #[serde(rename = "U")]
        u: f64,
        #[arg(long, default_value_t = 0.01)]
        step: f64,
        #[arg(long, value_enum, default_value_t = LogConvention::AnchorLog)]
        convention: LogConvention,
        #[arg(long, default_value_t = 0.01)]
        eps: f64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Theta { .. } => "theta",
            Command::Z { .. } => "z",
            Command::Zeros { .. } => "zeros",
            Command::Moment { .. } => "moment",
            Command::Laplace { .. } => "laplace",
            Command::Fit { .. } => "fit",
            Command::Ladder { .. } => "ladder",
            Command::Chords { .. } => "chords",
            Command::Inflect { .. } => "inflect",
            Command::GammaBar { .. } => "gamma-bar",
            Command::Rotate { .. } => "rotate",
            Command::Verify { .. } => "verify",
        }
    }
}

fn unit_interval(name: &str, v: f64) -> Result<(), Error> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(Error::Config(format!("{name} must lie in (0, 1), got {v}")))
    }
}

impl RunConfig {
    /// Checks tolerances and interval bounds before any work is done.
    pub fn validate(&self) -> Result<(), Error> {
        if self.budget == 0 {
            return Err(Error::Config("budget must be positive".into()));
        }
        match &self.command {
            Command::Z { target_abs_err, .. } => unit_interval("target-abs-err", *target_abs_err),
            Command::Zeros { t_lo, t_hi, .. } if !(t_hi > t_lo) => {
                Err(Error::Config(format!("t-hi ({t_hi}) must exceed t-lo ({t_lo})")))
            }
            Command::Moment { tol, .. } | Command::Laplace { tol, .. } | Command::Fit { tol, .. } => unit_interval("tol", *tol),
            Command::Ladder { tol, .. } | Command::Verify { tol, .. } => unit_interval("tol", *tol),
            Command::Chords { tol, ladder, t, u, .. } => {
                unit_interval("tol", *tol)?;
                if ladder.is_none() && (t.is_none() || u.is_none()) {
                    return Err(Error::Config("chords needs --ladder or both --T and --U".into()));
                }
                Ok(())
            }
            Command::Rotate { eta, .. } if !(*eta > 0.0 && *eta < 0.5) => {
                Err(Error::Config(format!("eta must lie in (0, 1/2), got {eta}")))
            }
            _ => Ok(()),
        }
    }

    fn moment_options(&self, panel_scale: f64) -> MomentOptions {
        MomentOptions {
            panel_scale,
            budget: self.budget,
            ..MomentOptions::default()
        }
    }

    fn ladder_options(&self, eps: f64, tol: f64) -> LadderOptions {
        LadderOptions {
            moment: self.moment_options(0.25),
            tol,
            eps,
        }
    }
}

/// Output of one command: a JSON record or CSV text.
enum Output {
    Json(Vec<u8>),
    Csv(Vec<u8>),
}

fn json<T: Serialize>(config: &RunConfig, result: T, warnings: Vec<String>) -> Result<Output, Error> {
    let mut report = Report::new(config, result);
    report.warnings = warnings;
    let mut buf = Vec::new();
    write_record(&mut buf, &report)?;
    Ok(Output::Json(buf))
}

fn csv_only(config: &RunConfig) -> Error {
    Error::Config(format!("csv output is not available for `{}`", config.command.name()))
}

/// Runs `config` and returns the bytes it would write.
pub fn execute(config: &RunConfig) -> Result<Vec<u8>, Error> {
    config.validate()?;
    let out = dispatch(config)?;
    Ok(match out {
        Output::Json(b) | Output::Csv(b) => b,
    })
}

/// Runs `config`, writing to `--out` or standard output.
pub fn run(config: &RunConfig) -> Result<(), Error> {
    let bytes = execute(config)?;
    match &config.out {
        Some(path) => {
            // Ladder CSV output goes through `write_ladder` to get a sidecar.
            if !matches!((&config.command, config.format), (Command::Ladder { .. }, Format::Csv)) {
                File::create(path)?.write_all(&bytes)?;
            }
        }
        None => std::io::stdout().lock().write_all(&bytes)?,
    }
    Ok(())
}

#[derive(Serialize)]
struct ZeroList {
    count: usize,
    expected_from_theta: f64,
    zeros: Vec<f64>,
}

#[derive(Serialize)]
struct MomentResult {
    #[serde(flatten)]
    estimate: zeta4_core::MomentEstimate,
    leading_term_ratio: f64,
}

#[derive(Serialize)]
struct LaplaceResult {
    #[serde(flatten)]
    moment: zeta4_core::quad::LaplaceMoment,
    /// Value over `(1/2π²)(1/δ)ln⁴(1/δ)`.
    leading_term_ratio: f64,
}

#[derive(Serialize)]
struct FitResult {
    #[serde(flatten)]
    fit: zeta4_core::MomentFit,
    c0_ratio: f64,
    residual_rms_without_leading_term: f64,
    samples: Vec<SampleReport>,
}

#[derive(Serialize)]
struct SampleReport {
    #[serde(rename = "T")]
    t: f64,
    value: f64,
    err_bound: f64,
    leading_term_ratio: f64,
}

#[derive(Serialize)]
struct LadderSummary {
    t0: f64,
    t1: f64,
    step: f64,
    samples: usize,
    convention: Convention,
    anchor: f64,
    tol_ladder: f64,
    phi_end: f64,
    fundamental_slope: f64,
}

#[derive(Serialize)]
struct ChordScanReport {
    length: f64,
    scanned: usize,
    passing: usize,
    fraction: f64,
    chords: Vec<zeta4_core::Chord>,
}

#[derive(Serialize)]
struct CrossingResult {
    #[serde(flatten)]
    record: GeometryRecord,
    chord_slope: f64,
    chord_slope_bound: f64,
    u_ratio: f64,
}

#[derive(Serialize)]
struct RotateResult {
    gamma: f64,
    target_tan: f64,
    window: f64,
    #[serde(rename = "U")]
    u: f64,
    slope: f64,
    lhs: f64,
    rhs: f64,
    rel_discrepancy: f64,
}

#[derive(Serialize)]
struct DriftResult {
    #[serde(flatten)]
    report: zeta4_core::ladder::TheoremReport,
    drift_bound: f64,
}

fn zero_options(step: f64) -> ZeroOptions {
    ZeroOptions {
        scan_step: step,
        ..ZeroOptions::default()
    }
}

/// The zero closest to `gamma` and its successor.
fn zero_pair_near(gamma: f64) -> Result<(f64, f64), Error> {
    let lo = (gamma - 1.0).max(10.0);
    let mut hi = gamma.max(lo) + 10.0;
    loop {
        let zs = find_zeros_with(lo, hi, &ZeroOptions::default())?;
        let closest = zs
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - gamma).abs().total_cmp(&(b.1 - gamma).abs()));
        if let Some((i, &g)) = closest {
            if let Some(&next) = zs.get(i + 1) {
                return Ok((g, next));
            }
        }
        hi += 10.0;
    }
}

struct CrossingSetup {
    geom: ZeroGeometry,
    curve: LadderCurve,
    warnings: Vec<String>,
}

fn crossing_setup(config: &RunConfig, gamma: f64, eps: f64, step: f64, max_height: f64) -> Result<CrossingSetup, Error> {
    let (g, g_next) = zero_pair_near(gamma)?;
    let reach = g + validity_length(g, eps);
    if reach > max_height {
        return Err(Error::Config(format!(
            "gamma + gamma^(13/14+2eps) = {reach:.1} exceeds the height ceiling {max_height}"
        )));
    }
    let mut margin = 10.0;
    let bar = loop {
        let zs = find_zeros_with((g - 0.5).max(10.0), reach + margin, &ZeroOptions::default())?;
        match select_gamma_bar(g, eps, &zs) {
            Ok(bar) => break bar,
            Err(zeta4_core::Error::Coverage { .. }) => margin *= 2.0,
            Err(e) => return Err(e.into()),
        }
    };
    let mut warnings: Vec<String> = bar.warning.clone().into_iter().collect();
    let opts = config.ladder_options(eps, 1e-10);
    let curve = build_ladder_with(g, bar.gamma_bar - g, step, Convention::AnchorLog, &opts)?;
    warnings.extend(curve.warning.clone());
    let rho_bar = crossing_point(&curve, g, bar.gamma_bar)?;
    let geom = ZeroGeometry {
        gamma_bar: Some(bar.gamma_bar),
        delta_gap: Some(bar.delta_gap),
        rho_bar: Some(rho_bar),
        ..ZeroGeometry::new(g, g_next)?
    };
    Ok(CrossingSetup { geom, curve, warnings })
}

fn corollary_options(config: &RunConfig) -> CorollaryOptions {
    CorollaryOptions {
        moment: config.moment_options(0.25),
        ..CorollaryOptions::default()
    }
}

fn dispatch(config: &RunConfig) -> Result<Output, Error> {
    let csv = config.format == Format::Csv;
    match &config.command {
        Command::Theta { t } => {
            if csv {
                return Err(csv_only(config));
            }
            #[derive(Serialize)]
            struct R {
                t: f64,
                theta: f64,
            }
            json(config, R { t: *t, theta: theta(*t)? }, vec![])
        }
        Command::Z {
            t,
            correction_terms,
            target_abs_err,
        } => {
            if csv {
                return Err(csv_only(config));
            }
            let prec = Precision {
                target_abs_err: *target_abs_err,
                correction_terms: *correction_terms,
                ..Precision::default()
            };
            json(config, z(*t, &prec)?, vec![])
        }
        Command::Zeros { t_lo, t_hi, step } => {
            let zeros = find_zeros_with(*t_lo, *t_hi, &zero_options(*step))?;
            if csv {
                let mut buf = Vec::new();
                formats::write_zeros(&mut buf, &zeros)?;
                return Ok(Output::Csv(buf));
            }
            let expected = (theta(*t_hi)? - theta(*t_lo)?) / PI;
            json(
                config,
                ZeroList {
                    count: zeros.len(),
                    expected_from_theta: expected,
                    zeros,
                },
                vec![],
            )
        }
        Command::Moment { t, u, tol, panel_scale } => {
            if csv {
                return Err(csv_only(config));
            }
            let estimate = integrate_z4_with(*t, *u, *tol, &config.moment_options(*panel_scale))?;
            json(
                config,
                MomentResult {
                    estimate,
                    leading_term_ratio: estimate.leading_term_ratio(),
                },
                vec![],
            )
        }
        Command::Laplace {
            delta,
            tol,
            envelope_const,
        } => {
            if csv {
                return Err(csv_only(config));
            }
            let opts = LaplaceOptions {
                moment: config.moment_options(0.25),
                envelope_const: *envelope_const,
            };
            let moment = laplace_moment_with(*delta, *tol, &opts)?;
            let inv = 1.0 / delta;
            let leading = inv * inv.ln().powi(4) / (2.0 * PI * PI);
            json(
                config,
                LaplaceResult {
                    moment,
                    leading_term_ratio: moment.value / leading,
                },
                vec![],
            )
        }
        Command::Fit {
            input,
            heights,
            tol,
            panel_scale,
            samples_out,
        } => {
            let samples = match input {
                Some(path) => formats::read_samples(File::open(path)?)?,
                None => {
                    let hs: Vec<f64> = if heights.is_empty() {
                        (10..=17).map(|k| 10.0 * 2f64.powi(k)).collect()
                    } else {
                        heights.clone()
                    };
                    cumulative_moments(&hs, *tol, &config.moment_options(*panel_scale))?
                        .into_iter()
                        .map(|(t, m)| Sample {
                            t,
                            value: m.value,
                            err_bound: m.err_bound,
                        })
                        .collect()
                }
            };
            if let Some(path) = samples_out {
                formats::write_samples(File::create(path)?, &samples)?;
            }
            if csv {
                let mut buf = Vec::new();
                formats::write_samples(&mut buf, &samples)?;
                return Ok(Output::Csv(buf));
            }
            let pairs: Vec<(f64, f64)> = samples.iter().map(|s| (s.t, s.value)).collect();
            let fit = fit_moment_polynomial(&pairs)?;
            let reduced = reduced_fit_rms(&pairs)?;
            let c0_ratio = fit.coeffs[0] * 2.0 * PI * PI;
            let report: Vec<SampleReport> = samples
                .iter()
                .map(|s| SampleReport {
                    t: s.t,
                    value: s.value,
                    err_bound: s.err_bound,
                    leading_term_ratio: s.value / (s.t * s.t.ln().powi(4) / (2.0 * PI * PI)),
                })
                .collect();
            json(
                config,
                FitResult {
                    fit,
                    c0_ratio,
                    residual_rms_without_leading_term: reduced,
                    samples: report,
                },
                vec![],
            )
        }
        Command::Ladder {
            t,
            u,
            step,
            convention,
            eps,
            tol,
        } => {
            let curve = build_ladder_with(*t, *u, *step, (*convention).into(), &config.ladder_options(*eps, *tol))?;
            if csv {
                if let Some(path) = &config.out {
                    formats::write_ladder(path, &curve)?;
                }
                let mut buf = Vec::new();
                formats::write_curve_csv(&mut buf, &curve)?;
                return Ok(Output::Csv(buf));
            }
            let summary = LadderSummary {
                t0: curve.t0,
                t1: curve.t1,
                step: curve.step,
                samples: curve.phi.len(),
                convention: curve.convention,
                anchor: curve.anchor,
                tol_ladder: curve.tol,
                phi_end: curve.phi[curve.phi.len() - 1],
                fundamental_slope: curve.fundamental_chord().slope,
            };
            json(config, summary, curve.warning.into_iter().collect())
        }
        Command::Chords {
            ladder,
            t,
            u,
            step,
            lengths,
            tol,
            from,
            max_chords,
        } => {
            let curve = match ladder {
                Some(path) => formats::read_ladder(path)?,
                None => build_ladder_with(
                    t.unwrap_or_default(),
                    u.unwrap_or_default(),
                    *step,
                    Convention::AnchorLog,
                    &config.ladder_options(0.01, 1e-10),
                )?,
            };
            if let Some(n) = from {
                if csv {
                    return Err(csv_only(config));
                }
                return json(config, find_unit_slope_chord(&curve, *n)?, vec![]);
            }
            let lengths = if lengths.is_empty() { vec![curve.t1 - curve.t0] } else { lengths.clone() };
            let scans = find_almost_parallel_chords(&curve, &lengths, *tol)?;
            if csv {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(["length", "n", "m", "slope"])?;
                for s in &scans {
                    for c in &s.chords {
                        w.serialize((s.length, c.n, c.m, c.slope))?;
                    }
                }
                return Ok(Output::Csv(w.into_inner()?));
            }
            let report: Vec<ChordScanReport> = scans
                .into_iter()
                .map(|s| ChordScanReport {
                    length: s.length,
                    scanned: s.scanned,
                    passing: s.chords.len(),
                    fraction: s.fraction,
                    chords: s.chords.into_iter().take(*max_chords).collect(),
                })
                .collect();
            json(config, report, curve.warning.into_iter().collect())
        }
        Command::Inflect { gamma, step } => {
            if csv {
                return Err(csv_only(config));
            }
            let (g, g_next) = zero_pair_near(*gamma)?;
            let curve = build_ladder_with(g, g_next - g, *step, Convention::AnchorLog, &config.ladder_options(0.01, 1e-10))?;
            let geom = find_inflection_with(&ZeroGeometry::new(g, g_next)?, &curve, Precision::default())?;
            let checks = verify_corollaries_with(&geom, &curve, &corollary_options(config))?;
            json(config, GeometryRecord::new(&geom, checks.checks), vec![])
        }
        Command::GammaBar {
            gamma,
            eps,
            step,
            max_height,
        } => {
            if csv {
                return Err(csv_only(config));
            }
            let setup = crossing_setup(config, *gamma, *eps, *step, *max_height)?;
            let checks = verify_corollaries_with(&setup.geom, &setup.curve, &corollary_options(config))?;
            let g = setup.geom.gamma;
            let bar = setup.geom.gamma_bar.unwrap_or(g);
            let result = CrossingResult {
                record: GeometryRecord::new(&setup.geom, checks.checks),
                chord_slope: setup.curve.fundamental_chord().slope,
                chord_slope_bound: 3.0 / g.ln(),
                u_ratio: (bar - g) / validity_length(g, *eps),
            };
            json(config, result, setup.warnings)
        }
        Command::Rotate {
            gamma,
            tan,
            mode,
            eta,
            eps,
            step,
            max_height,
        } => {
            let (g, curve, window, target, warnings) = match mode {
                RotateMode::Inflection => {
                    let (g, g_next) = zero_pair_near(*gamma)?;
                    let curve =
                        build_ladder_with(g, g_next - g, *step, Convention::AnchorLog, &config.ladder_options(*eps, 1e-10))?;
                    let geom = find_inflection_with(&ZeroGeometry::new(g, g_next)?, &curve, Precision::default())?;
                    let rho = geom.rho.unwrap_or(g_next);
                    (g, curve, rho - g, *tan, vec![])
                }
                RotateMode::Crossing => {
                    let setup = crossing_setup(config, *gamma, *eps, *step, *max_height)?;
                    let g = setup.geom.gamma;
                    let window = setup.geom.rho_bar.unwrap_or(g) - g;
                    let target = tan.clamp(*eta, 1.0 - eta);
                    let mut w = setup.warnings;
                    if target != *tan {
                        w.push(format!("target slope {tan} clamped to {target}"));
                    }
                    (g, setup.curve, window, target, w)
                }
            };
            if csv {
                // (U, slope) sweep over the window.
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(["U", "slope"])?;
                let cells = ((window / curve.step).ceil() as usize).max(1);
                for k in 1..=cells {
                    let u = (k as f64 * curve.step).min(window);
                    w.serialize((u, curve.slope(g, g + u)))?;
                }
                return Ok(Output::Csv(w.into_inner()?));
            }
            let u = rotating_chord_solve(&curve, g, target, window)?;
            let lhs = integrate_z4_with(g, u, 1e-10, &config.moment_options(0.25))?.value;
            let slope = curve.slope(g, g + u);
            let rhs = target * u * g.ln().powi(4) / (2.0 * PI * PI);
            let result = RotateResult {
                gamma: g,
                target_tan: target,
                window,
                u,
                slope,
                lhs,
                rhs,
                rel_discrepancy: (lhs - rhs).abs() / rhs,
            };
            json(config, result, warnings)
        }
        Command::Verify {
            t,
            u,
            step,
            convention,
            eps,
            tol,
        } => {
            if csv {
                return Err(csv_only(config));
            }
            let curve = build_ladder_with(*t, *u, *step, (*convention).into(), &config.ladder_options(*eps, *tol))?;
            let warnings: Vec<String> = curve.warning.clone().into_iter().collect();
            let opts = config.moment_options(0.25);
            match convention {
                LogConvention::AnchorLog => json(config, verify_theorem_with(&curve, *t, *t + *u, &opts)?, warnings),
                LogConvention::LocalLog => {
                    let report = measure_log_drift(&curve, *t, *t + *u, &opts)?;
                    let l = t.ln();
                    json(
                        config,
                        DriftResult {
                            report,
                            drift_bound: 2.0 * 4.0 * l.ln() / l,
                        },
                        warnings,
                    )
                }
            }
        }
    }
}

/// Residual RMS of the fit without the `ln⁴T` column.
fn reduced_fit_rms(pairs: &[(f64, f64)]) -> Result<f64, Error> {
    Ok(fit_moment_polynomial_degree(pairs, 3)?.residual_rms)
}
