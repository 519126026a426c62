use clap::{Parser, Subcommand, ValueEnum};
use pendulum_bsh::classical::{action, full_action, period, EnergyRegion};
use pendulum_bsh::holonomy::holonomy_phase;
use pendulum_bsh::minus_one::{odd_reduced_spectrum, reconstruct_odd};
use pendulum_bsh::operators::LadderAlgebra;
use pendulum_bsh::reduction::{
    reconstruct_even, reduced_action, reduced_period, reduced_spectrum, ReducedLevel,
};
use pendulum_bsh::spectrum::{build_spectrum, validate_hbar, QuantumLevel, Spectrum};
use pendulum_bsh::verify::{run_suite, Check, Suite, SuiteConfig, DEFAULT_SEED};
use pendulum_bsh::Error;
use serde::Serialize;
use std::f64::consts::TAU;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_USAGE: u8 = 1;
const EXIT_REJECTED: u8 = 2;
const EXIT_FAILED: u8 = 3;
const SEED_VAR: &str = "PENDULUM_BSH_SEED";
const PLOT_GAP: f64 = 1e-6;

#[derive(Parser)]
#[command(name = "pendulum-bsh", version, about = "Quantized pendulum spectra and property suites")]
struct Cli {
    /// Planck constant ħ.
    #[arg(long, global = true, allow_negative_numbers = true)]
    hbar: Option<f64>,
    /// Largest rotation quantum number kept in the lattice.
    #[arg(long, global = true, default_value_t = 32)]
    m_max: u64,
    /// Integration and root-finding tolerance, in (0, 1e-2).
    #[arg(long, global = true, default_value_t = 1e-10, allow_negative_numbers = true)]
    tol: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Level table with the reduced tables and their parity markers.
    Spectrum {
        /// Include ladder operators as sparse triplets.
        #[arg(long)]
        operators: bool,
    },
    /// Run a property suite.
    Verify {
        #[arg(value_enum)]
        suite: SuiteArg,
    },
    /// Sample a curve on an energy grid that skips the separatrix.
    Plotdata {
        #[arg(value_enum)]
        what: Plot,
        #[arg(long, default_value_t = 0.05, allow_negative_numbers = true)]
        e_min: f64,
        #[arg(long, default_value_t = 6.0, allow_negative_numbers = true)]
        e_max: f64,
        #[arg(long, default_value_t = 200)]
        points: usize,
    },
    /// Reduced spectra and their reconstruction of the full spectrum.
    Reduce,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Classical,
    Holonomy,
    Operators,
    Reduction,
    Minusone,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Classical => Suite::Classical,
            SuiteArg::Holonomy => Suite::Holonomy,
            SuiteArg::Operators => Suite::Operators,
            SuiteArg::Reduction => Suite::Reduction,
            SuiteArg::Minusone => Suite::MinusOne,
            SuiteArg::All => Suite::All,
        }
    }
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
enum Plot {
    ActionCurve,
    PeriodCurve,
    ReducedAction,
    HolonomyScan,
}

#[derive(Serialize)]
struct ConfigRecord {
    command: &'static str,
    hbar: Option<f64>,
    m_max: u64,
    tol: f64,
    format: Format,
    seed: u64,
}

#[derive(Serialize)]
struct LevelRecord {
    n: u64,
    region: &'static str,
    energy: f64,
    action: f64,
    period: f64,
}

#[derive(Serialize)]
struct SpectrumRecord {
    #[serde(rename = "N")]
    top: u64,
    #[serde(rename = "M")]
    first_rotation: u64,
    epsilon: f64,
    levels: Vec<LevelRecord>,
}

#[derive(Serialize)]
struct PartnerRecord {
    n: u64,
    region: &'static str,
}

#[derive(Serialize)]
struct ReducedRecord {
    reduced: bool,
    representation: i8,
    k: u64,
    region: &'static str,
    energy: f64,
    action: f64,
    period: f64,
    partner: Option<PartnerRecord>,
}

#[derive(Serialize)]
struct Triplet(usize, usize, f64, f64);

#[derive(Serialize)]
struct OperatorRecord {
    name: &'static str,
    basis: Vec<String>,
    triplets: Vec<Triplet>,
}

#[derive(Serialize)]
struct PlotRecord {
    what: Plot,
    columns: [&'static str; 2],
    rows: Vec<[f64; 2]>,
}

#[derive(Serialize)]
struct ErrorRecord {
    kind: &'static str,
    message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    rejection: Option<pendulum_bsh::HbarRejection>,
}

#[derive(Serialize)]
struct Report {
    config: ConfigRecord,
    spectrum: Option<SpectrumRecord>,
    reduced: Vec<ReducedRecord>,
    checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    operators: Option<Vec<OperatorRecord>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    plot: Option<PlotRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<ErrorRecord>,
}

struct Failure {
    code: u8,
    error: ErrorRecord,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            error: ErrorRecord { kind: "usage", message: message.into(), rejection: None },
        }
    }

    fn numeric(err: Error) -> Self {
        match err {
            Error::RejectedHbar { ref reason, .. } => Self {
                code: EXIT_REJECTED,
                error: ErrorRecord { kind: "rejected_hbar", message: err.to_string(), rejection: Some(reason.clone()) },
            },
            other => Self {
                code: EXIT_FAILED,
                error: ErrorRecord { kind: "numerical", message: other.to_string(), rejection: None },
            },
        }
    }
}

fn level_action(level: &QuantumLevel) -> Result<f64, Error> {
    match level.region {
        EnergyRegion::StableEquilibrium => Ok(0.0),
        region => action(level.energy, region),
    }
}

/// Period of the level; the equilibrium reports the linearized period 2π.
fn level_period(energy: f64) -> Result<f64, Error> {
    if energy == 0.0 {
        Ok(TAU)
    } else {
        period(energy)
    }
}

fn level_record(level: &QuantumLevel) -> Result<LevelRecord, Error> {
    Ok(LevelRecord {
        n: level.n,
        region: level.region.label(),
        energy: level.energy,
        action: level_action(level)?,
        period: level_period(level.energy)?,
    })
}

fn spectrum_record(spectrum: &Spectrum) -> Result<SpectrumRecord, Error> {
    Ok(SpectrumRecord {
        top: spectrum.top(),
        first_rotation: spectrum.first_rotation(),
        epsilon: spectrum.epsilon_gap(),
        levels: spectrum.levels().iter().map(level_record).collect::<Result<_, _>>()?,
    })
}

fn reduced_records(spectrum: &Spectrum) -> Result<Vec<ReducedRecord>, Error> {
    let hbar = spectrum.hbar();
    let even = reduced_spectrum(hbar, spectrum.m_max())?;
    let odd = odd_reduced_spectrum(hbar, spectrum.m_max())?;
    let even_partners = reconstruct_even(&even, spectrum)?;
    let odd_partners = reconstruct_odd(&odd, spectrum)?;
    let mut out = Vec::new();
    for (levels, partners) in [(&even, &even_partners), (&odd, &odd_partners)] {
        for level in levels.iter() {
            out.push(reduced_record(level, partners)?);
        }
    }
    Ok(out)
}

fn reduced_record(level: &ReducedLevel, partners: &[QuantumLevel]) -> Result<ReducedRecord, Error> {
    let (action, period) = if level.energy == 0.0 {
        (0.0, TAU / 2.0)
    } else {
        (reduced_action(level.energy)?, reduced_period(level.energy)?)
    };
    let partner = partners
        .iter()
        .find(|q| q.energy == level.energy)
        .map(|q| PartnerRecord { n: q.n, region: q.region.label() });
    Ok(ReducedRecord {
        reduced: true,
        representation: level.representation.sign(),
        k: level.k,
        region: level.region.label(),
        energy: level.energy,
        action,
        period,
        partner,
    })
}

fn operator_records(spectrum: &Spectrum) -> Vec<OperatorRecord> {
    let alg = LadderAlgebra::new(spectrum);
    let basis: Vec<String> = alg.lattice.basis().iter().map(|i| i.to_string()).collect();
    [
        ("lower_plus", &alg.lower_plus),
        ("lower_minus", &alg.lower_minus),
        ("raise_plus", &alg.raise_plus),
        ("raise_minus", &alg.raise_minus),
        ("swap", &alg.swap),
    ]
    .into_iter()
    .map(|(name, op)| OperatorRecord {
        name,
        basis: basis.clone(),
        triplets: op.triplets().into_iter().map(|(r, c, v)| Triplet(r, c, v.re, v.im)).collect(),
    })
    .collect()
}

/// Grid of `points` energies on `[e_min, e_max]` with the separatrix gap removed.
fn plot_grid(e_min: f64, e_max: f64, points: usize) -> Vec<f64> {
    if points == 0 || !(e_min >= 0.0) || !(e_max >= e_min) || !e_max.is_finite() {
        return Vec::new();
    }
    let step = if points > 1 { (e_max - e_min) / (points - 1) as f64 } else { 0.0 };
    (0..points)
        .map(|i| e_min + step * i as f64)
        .filter(|e| (e - 2.0).abs() >= PLOT_GAP && *e > 0.0)
        .collect()
}

fn curve_value(what: Plot, e: f64, hbar: Option<f64>) -> Result<f64, Error> {
    match what {
        Plot::ActionCurve => full_action(e),
        Plot::PeriodCurve => period(e),
        Plot::ReducedAction => reduced_action(e),
        Plot::HolonomyScan => {
            let hbar = hbar.ok_or_else(|| Error::InvalidArgument("holonomy_scan needs --hbar".into()))?;
            Ok(holonomy_phase(e, hbar)?.defect())
        }
    }
}

fn seed() -> Result<u64, Failure> {
    match std::env::var(SEED_VAR) {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Failure::usage(format!("{SEED_VAR} must be an unsigned integer, got {s:?}"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn require_hbar(hbar: Option<f64>) -> Result<f64, Failure> {
    match hbar {
        None => Err(Failure::usage("--hbar is required")),
        Some(h) if !(h > 0.0) || !h.is_finite() => Err(Failure::usage(format!("--hbar must be positive, got {h}"))),
        Some(h) => Ok(h),
    }
}

/// Builds the spectrum, reporting collisions as rejections.
fn checked_spectrum(hbar: f64, m_max: u64) -> Result<Spectrum, Failure> {
    validate_hbar(hbar).map_err(|reason| Failure::numeric(Error::RejectedHbar { hbar, reason }))?;
    build_spectrum(hbar, m_max).map_err(Failure::numeric)
}

fn empty_report(config: ConfigRecord) -> Report {
    Report { config, spectrum: None, reduced: Vec::new(), checks: Vec::new(), operators: None, plot: None, error: None }
}

fn run(cli: &Cli, report: &mut Report) -> Result<u8, Failure> {
    if !(cli.tol > 0.0 && cli.tol < 1e-2) {
        return Err(Failure::usage(format!("--tol must lie in (0, 1e-2), got {}", cli.tol)));
    }
    if cli.m_max < 1 {
        return Err(Failure::usage("--m-max must be at least 1"));
    }
    match &cli.command {
        Command::Spectrum { operators } => {
            let spectrum = checked_spectrum(require_hbar(cli.hbar)?, cli.m_max)?;
            report.spectrum = Some(spectrum_record(&spectrum).map_err(Failure::numeric)?);
            report.reduced = reduced_records(&spectrum).map_err(Failure::numeric)?;
            if *operators {
                report.operators = Some(operator_records(&spectrum));
            }
            Ok(0)
        }
        Command::Reduce => {
            let spectrum = checked_spectrum(require_hbar(cli.hbar)?, cli.m_max)?;
            report.reduced = reduced_records(&spectrum).map_err(Failure::numeric)?;
            report.checks = reconstruction_checks(&spectrum, &report.reduced);
            Ok(if report.checks.iter().all(|c| c.pass) { 0 } else { EXIT_FAILED })
        }
        Command::Verify { suite } => {
            let hbar = require_hbar(cli.hbar)?;
            let spectrum = checked_spectrum(hbar, cli.m_max)?;
            report.spectrum = Some(spectrum_record(&spectrum).map_err(Failure::numeric)?);
            let config = SuiteConfig { hbar, m_max: cli.m_max, tol: cli.tol, seed: report.config.seed };
            report.checks = run_suite((*suite).into(), &config).map_err(Failure::numeric)?;
            Ok(if report.checks.iter().all(|c| c.pass) { 0 } else { EXIT_FAILED })
        }
        Command::Plotdata { what, e_min, e_max, points } => {
            if matches!(what, Plot::HolonomyScan) {
                require_hbar(cli.hbar)?;
            } else if let Some(h) = cli.hbar {
                require_hbar(Some(h))?;
            }
            let grid = plot_grid(*e_min, *e_max, *points);
            if grid.is_empty() {
                return Err(Failure::usage("the requested energy grid is empty"));
            }
            let rows = grid
                .into_iter()
                .map(|e| curve_value(*what, e, cli.hbar).map(|v| [e, v]))
                .collect::<Result<_, _>>()
                .map_err(Failure::numeric)?;
            let columns = ["e", curve_column(*what)];
            report.plot = Some(PlotRecord { what: *what, columns, rows });
            Ok(0)
        }
    }
}

fn curve_column(what: Plot) -> &'static str {
    match what {
        Plot::ActionCurve => "action",
        Plot::PeriodCurve => "period",
        Plot::ReducedAction => "reduced_action",
        Plot::HolonomyScan => "phase_defect",
    }
}

/// Every reduced level must land on an unreduced level of equal energy.
fn reconstruction_checks(spectrum: &Spectrum, reduced: &[ReducedRecord]) -> Vec<Check> {
    let orphans = reduced
        .iter()
        .filter(|r| r.partner.is_none() && r.k <= spectrum.m_max() && !r.region.starts_with("rotation"))
        .count() as f64;
    let covered = spectrum
        .oscillation()
        .filter(|q| !reduced.iter().any(|r| r.partner.as_ref().is_some_and(|p| p.n == q.n && !p.region.starts_with("rotation"))))
        .count() as f64;
    vec![
        Check::new("reduce.oscillation_levels_without_partner", orphans, 0.0),
        Check::new("reduce.unreduced_levels_not_recovered", covered, 0.0),
    ]
}

fn command_name(command: &Command) -> &'static str {
    match command {
        Command::Spectrum { .. } => "spectrum",
        Command::Verify { .. } => "verify",
        Command::Plotdata { .. } => "plotdata",
        Command::Reduce => "reduce",
    }
}

fn csv_number(x: f64) -> String {
    if x.is_finite() {
        format!("{x:e}")
    } else {
        x.to_string()
    }
}

fn render_csv(report: &Report) -> String {
    let mut out = String::new();
    if let Some(s) = &report.spectrum {
        out.push_str("n,region,energy,action,period\n");
        for l in &s.levels {
            let _ = writeln!(out, "{},{},{},{},{}", l.n, l.region, csv_number(l.energy), csv_number(l.action), csv_number(l.period));
        }
    }
    if !report.reduced.is_empty() {
        if !out.is_empty() {
            out.push('\n');
        }
        out.push_str("k,representation,region,energy,action,period,partner_n\n");
        for r in &report.reduced {
            let partner = r.partner.as_ref().map(|p| p.n.to_string()).unwrap_or_default();
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                r.k,
                r.representation,
                r.region,
                csv_number(r.energy),
                csv_number(r.action),
                csv_number(r.period),
                partner
            );
        }
    }
    if !report.checks.is_empty() {
        if !out.is_empty() {
            out.push('\n');
        }
        out.push_str("name,residual,tolerance,pass\n");
        for c in &report.checks {
            let _ = writeln!(out, "{},{},{},{}", c.name, csv_number(c.residual), csv_number(c.tolerance), c.pass);
        }
    }
    if let Some(p) = &report.plot {
        let _ = writeln!(out, "{},{}", p.columns[0], p.columns[1]);
        for [e, v] in &p.rows {
            let _ = writeln!(out, "{},{}", csv_number(*e), csv_number(*v));
        }
    }
    if let Some(e) = &report.error {
        if !out.is_empty() {
            out.push('\n');
        }
        out.push_str("error_kind,message\n");
        let _ = writeln!(out, "{},\"{}\"", e.kind, e.message.replace('"', "\"\""));
    }
    out
}

fn emit(report: &Report, format: Format, out: Option<&PathBuf>) -> std::io::Result<()> {
    let text = match format {
        Format::Json => serde_json::to_string_pretty(report).map_err(std::io::Error::other)? + "\n",
        Format::Csv => render_csv(report),
    };
    match out {
        Some(path) => std::fs::write(path, text),
        None => {
            use std::io::Write;
            std::io::stdout().lock().write_all(text.as_bytes())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return ExitCode::from(if err.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    let seed = match seed() {
        Ok(s) => s,
        Err(f) => {
            eprintln!("error: {}", f.error.message);
            return ExitCode::from(f.code);
        }
    };
    let config = ConfigRecord {
        command: command_name(&cli.command),
        hbar: cli.hbar,
        m_max: cli.m_max,
        tol: cli.tol,
        format: cli.format,
        seed,
    };
    let mut report = empty_report(config);
    let code = match run(&cli, &mut report) {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("error: {}", failure.error.message);
            if failure.code == EXIT_USAGE {
                return ExitCode::from(EXIT_USAGE);
            }
            report.error = Some(failure.error);
            failure.code
        }
    };
    if let Err(err) = emit(&report, cli.format, cli.out.as_ref()) {
        eprintln!("error: cannot write report: {err}");
        return ExitCode::from(EXIT_USAGE);
    }
    ExitCode::from(code)
}
