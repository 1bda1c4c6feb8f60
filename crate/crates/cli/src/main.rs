mod config;

use std::fs;
use std::io::{self, Write};
use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use photon_phase::baselines::compare_with_pegg_barnett;
use photon_phase::phase::{format_sig, round_sig};
use photon_phase::{
    build_named, build_susskind_glogower, eigen_decompose_sg, phase_distribution, phase_state,
    run_checks, CheckId, CheckReport, Error, PhaseGrid, StateSpec, ToleranceProfile,
};
use serde::Serialize;

use config::{Baseline, CommonArgs, Format, Resolved};

#[derive(Debug, Parser)]
#[command(
    name = "photon-phase",
    version,
    about = "Doubled-Fock-space photon phase operator toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the identity check suite and report measured deviations.
    Check(CheckArgs),
    /// Eigenphases of the cyclic shift operator, checked against analytic phase states.
    Spectrum(SpectrumArgs),
    /// Phase probability distribution of a state.
    Phasedist(PhasedistArgs),
    /// Dump the nonzero entries of a named operator.
    Operators(OperatorsArgs),
}

#[derive(Debug, Args)]
struct CheckArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Named tolerance profile: default or loose.
    #[arg(long)]
    tolerance_profile: Option<String>,
    /// Per-check override, e.g. C05=1e-9. Repeatable.
    #[arg(long = "tolerance", value_name = "ID=VALUE", value_parser = config::parse_override)]
    tolerances: Vec<(CheckId, f64)>,
}

#[derive(Debug, Args)]
struct SpectrumArgs {
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Debug, Args)]
struct PhasedistArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// fock:<n>, coherent:<upper|lower>,alpha=<a+bi>, or vacuum:sym.
    #[arg(long, value_name = "SPEC")]
    state: Option<String>,
    /// Grid offset in radians; defaults to the exact eigenphase grid.
    #[arg(long, allow_negative_numbers = true)]
    phi0: Option<f64>,
    /// Report the difference from a single-polarization baseline instead.
    #[arg(long, value_enum)]
    baseline: Option<Baseline>,
}

#[derive(Debug, Args)]
struct OperatorsArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long, value_name = "NAME")]
    operator: Option<String>,
}

#[derive(Debug)]
pub enum Failure {
    Config(String),
    Numerical(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Config(_) => 2,
            Failure::Numerical(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Config(m) | Failure::Numerical(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Eigen(_)
            | Error::NotNormalized { .. }
            | Error::NotHermitian { .. }
            | Error::GridMismatch(_) => Failure::Numerical(e.to_string()),
            _ => Failure::Config(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("photon-phase: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Check(args) => check(args),
        Command::Spectrum(args) => spectrum(args),
        Command::Phasedist(args) => phasedist(args),
        Command::Operators(args) => operators(args),
    }
}

fn check(args: CheckArgs) -> Result<u8, Failure> {
    let file = config::load_file(&args.common, "check")?;
    let cfg = config::resolve(&args.common, &file)?;
    let profile: ToleranceProfile =
        config::tolerance_profile(args.tolerance_profile.as_deref(), &file, &args.tolerances)?;
    let reports = run_checks(&cfg.window, &profile);

    let failed: Vec<&str> = reports
        .iter()
        .filter(|r| !r.passed)
        .map(|r| r.check_id.as_str())
        .collect();
    let rounded: Vec<CheckReport> = reports
        .iter()
        .cloned()
        .map(|mut r| {
            r.max_deviation = round_sig(r.max_deviation);
            r.tolerance = round_sig(r.tolerance);
            r
        })
        .collect();
    let body = match cfg.format {
        Format::Json => json(&rounded)?,
        Format::Csv => {
            let mut w = csv_writer();
            w.write_record([
                "check_id",
                "lo",
                "hi",
                "boundary",
                "wrap_phase",
                "max_deviation",
                "tolerance",
                "passed",
                "applicable",
                "notes",
            ])
            .map_err(csv_failure)?;
            for r in &reports {
                w.write_record([
                    r.check_id.to_string(),
                    r.window.lo().to_string(),
                    r.window.hi().to_string(),
                    r.window.boundary().to_string(),
                    r.window.wrap_phase().to_string(),
                    format_sig(r.max_deviation),
                    format_sig(r.tolerance),
                    r.passed.to_string(),
                    r.applicable.to_string(),
                    r.notes.clone(),
                ])
                .map_err(csv_failure)?;
            }
            finish_csv(w)?
        }
    };
    emit(&cfg, &body)?;
    eprintln!(
        "{} of {} checks passed",
        reports.len() - failed.len(),
        reports.len()
    );
    if failed.is_empty() {
        Ok(0)
    } else {
        eprintln!("failed: {}", failed.join(", "));
        Ok(1)
    }
}

#[derive(Serialize)]
struct SpectrumRow {
    k: usize,
    phase: f64,
    re: f64,
    im: f64,
    unimodularity_deviation: f64,
    overlap: f64,
}

fn spectrum(args: SpectrumArgs) -> Result<u8, Failure> {
    let file = config::load_file(&args.common, "spectrum")?;
    let cfg = config::resolve(&args.common, &file)?;
    let pairs = eigen_decompose_sg(&build_susskind_glogower(&cfg.window))?;
    let rows: Vec<SpectrumRow> = pairs
        .iter()
        .enumerate()
        .map(|(k, p)| {
            let overlap = phase_state(&cfg.window, p.phase)
                .inner(&p.vector)
                .map(|c| c.norm())?;
            Ok(SpectrumRow {
                k,
                phase: round_sig(p.phase),
                re: round_sig(p.eigenvalue.re),
                im: round_sig(p.eigenvalue.im),
                unimodularity_deviation: round_sig((p.eigenvalue.norm() - 1.0).abs()),
                overlap: round_sig(overlap),
            })
        })
        .collect::<Result<_, Error>>()?;
    let body = match cfg.format {
        Format::Json => json(&serde_json::json!({ "window": cfg.window, "eigenpairs": rows }))?,
        Format::Csv => {
            let mut w = csv_writer();
            w.write_record([
                "k",
                "phase",
                "re",
                "im",
                "unimodularity_deviation",
                "overlap",
            ])
            .map_err(csv_failure)?;
            for r in &rows {
                w.write_record([
                    r.k.to_string(),
                    format_sig(r.phase),
                    format_sig(r.re),
                    format_sig(r.im),
                    format_sig(r.unimodularity_deviation),
                    format_sig(r.overlap),
                ])
                .map_err(csv_failure)?;
            }
            finish_csv(w)?
        }
    };
    emit(&cfg, &body)?;
    Ok(0)
}

fn phasedist(args: PhasedistArgs) -> Result<u8, Failure> {
    let file = config::load_file(&args.common, "phasedist")?;
    let cfg = config::resolve(&args.common, &file)?;
    let text = args
        .state
        .or(file.state.clone())
        .ok_or_else(|| Failure::Config("phasedist needs --state".into()))?;
    let spec: StateSpec = config::parse_state(&text)?;
    let phi0 = args.phi0.or(file.phi0);
    if phi0.is_some_and(|p| !p.is_finite()) {
        return Err(Failure::Config("phi0 must be finite".into()));
    }

    let body = match args.baseline.or(file.baseline) {
        Some(Baseline::PeggBarnett) => {
            let mut report = compare_with_pegg_barnett(&cfg.window, &spec, phi0.unwrap_or(0.0))?;
            report.sup_diff = round_sig(report.sup_diff);
            report.l1_diff = round_sig(report.l1_diff);
            match cfg.format {
                Format::Json => json(&report)?,
                Format::Csv => {
                    let mut w = csv_writer();
                    w.write_record(["baseline", "lo", "hi", "sup_diff", "l1_diff", "state_spec"])
                        .map_err(csv_failure)?;
                    w.write_record([
                        report.baseline.clone(),
                        report.window.lo().to_string(),
                        report.window.hi().to_string(),
                        format_sig(report.sup_diff),
                        format_sig(report.l1_diff),
                        report.state_spec.clone(),
                    ])
                    .map_err(csv_failure)?;
                    finish_csv(w)?
                }
            }
        }
        None => {
            let grid = match phi0 {
                Some(p) => PhaseGrid::new(cfg.window, p),
                None => PhaseGrid::eigenphases(&cfg.window),
            };
            let state = spec.build(&cfg.window)?;
            let dist = phase_distribution(&state, &grid)?;
            match cfg.format {
                Format::Json => json(&dist.to_json())?,
                Format::Csv => dist.to_csv(),
            }
        }
    };
    emit(&cfg, &body)?;
    Ok(0)
}

fn operators(args: OperatorsArgs) -> Result<u8, Failure> {
    let file = config::load_file(&args.common, "operators")?;
    let cfg = config::resolve(&args.common, &file)?;
    let name = args
        .operator
        .or(file.operator.clone())
        .ok_or_else(|| Failure::Config("operators needs --operator".into()))?;
    let mut dump = build_named(&name, &cfg.window)?.dump()?;
    for e in &mut dump.entries {
        e.2 = round_sig(e.2);
        e.3 = round_sig(e.3);
    }
    let body = match cfg.format {
        Format::Json => json(&dump)?,
        Format::Csv => {
            let mut w = csv_writer();
            w.write_record(["row", "col", "re", "im"])
                .map_err(csv_failure)?;
            for (r, c, re, im) in &dump.entries {
                w.write_record([
                    r.to_string(),
                    c.to_string(),
                    format_sig(*re),
                    format_sig(*im),
                ])
                .map_err(csv_failure)?;
            }
            finish_csv(w)?
        }
    };
    emit(&cfg, &body)?;
    Ok(0)
}

fn json<T: Serialize>(value: &T) -> Result<String, Failure> {
    let mut s = serde_json::to_string_pretty(value)
        .map_err(|e| Failure::Numerical(format!("cannot encode JSON: {e}")))?;
    s.push('\n');
    Ok(s)
}

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new())
}

fn finish_csv(w: csv::Writer<Vec<u8>>) -> Result<String, Failure> {
    let bytes = w
        .into_inner()
        .map_err(|e| Failure::Numerical(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Failure::Numerical(e.to_string()))
}

fn csv_failure(e: csv::Error) -> Failure {
    Failure::Numerical(format!("cannot encode CSV: {e}"))
}

fn emit(cfg: &Resolved, body: &str) -> Result<(), Failure> {
    match &cfg.out {
        Some(path) => write_file(path, body),
        None => io::stdout()
            .lock()
            .write_all(body.as_bytes())
            .map_err(|e| Failure::Config(format!("cannot write output: {e}"))),
    }
}

fn write_file(path: &Path, body: &str) -> Result<(), Failure> {
    fs::write(path, body)
        .map_err(|e| Failure::Config(format!("cannot write {}: {e}", path.display())))
}
