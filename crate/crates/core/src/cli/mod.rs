//! `qmod` command-line front end.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 validation failure, 3 convergence
//! failure. `QMOD_THREADS` caps the worker count.

pub mod config;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::error::Error;
use crate::figures::Figure;
use crate::output::{Format, Table};
use crate::report;
use crate::scan::{self, Observable, STANDARD_PHASES};

pub use config::{Model, RunConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_CONVERGENCE: i32 = 3;

pub const THREADS_ENV: &str = "QMOD_THREADS";

#[derive(Debug, Parser)]
#[command(name = "qmod", version, about = "Decay of a two-level emitter with a modulated transition frequency")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Time trace of gamma, Omega, Gamma and <S_z>.
    Simulate(SimulateArgs),
    /// Observable at a fixed time against the modulation depth chi.
    Sweep(SweepArgs),
    /// Regenerate the dataset of one figure.
    Figure(FigureArgs),
    /// Gamma(t_max) and its change across a list of truncations.
    Converge(ConvergeArgs),
}

#[derive(Debug, Args)]
struct ModelArgs {
    /// key=value file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Print the merged configuration and exit.
    #[arg(long)]
    dump_config: bool,
    #[arg(long)]
    model: Option<Model>,
    #[arg(long, allow_negative_numbers = true)]
    g: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    kappa: Option<f64>,
    #[arg(long = "delta-c", allow_negative_numbers = true)]
    delta_c: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    omega: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    chi: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    phi: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    rho: Option<f64>,
    #[arg(long = "omega0-over-omega", allow_negative_numbers = true)]
    omega0_over_omega: Option<f64>,
    #[arg(long = "gamma-fs", allow_negative_numbers = true)]
    gamma_fs: Option<f64>,
    #[arg(long)]
    n0: Option<usize>,
    #[arg(long)]
    m0: Option<usize>,
    /// Set chi' = 0 exactly.
    #[arg(long)]
    drop_four_photon: bool,
    #[arg(long = "t-max", allow_negative_numbers = true)]
    t_max: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    dt: Option<f64>,
    /// Fixed truncation; disables the automatic choice.
    #[arg(long)]
    nbar: Option<usize>,
    /// Tolerance of the automatic truncation.
    #[arg(long, allow_negative_numbers = true)]
    tol: Option<f64>,
    /// Output file; `-` writes to standard output.
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[arg(long)]
    format: Option<Format>,
}

impl ModelArgs {
    fn flags(&self) -> RunConfig {
        RunConfig {
            model: self.model,
            g: self.g,
            kappa: self.kappa,
            delta_c: self.delta_c,
            omega: self.omega,
            chi: self.chi,
            phi: self.phi,
            rho: self.rho,
            omega0_over_omega: self.omega0_over_omega,
            gamma_fs: self.gamma_fs,
            n0: self.n0,
            m0: self.m0,
            drop_four_photon: self.drop_four_photon.then_some(true),
            t_max: self.t_max,
            dt: self.dt,
            nbar: self.nbar,
            tol: self.tol,
            output: self.output.clone(),
            format: self.format,
        }
    }

    fn resolve(&self) -> Result<RunConfig, Failure> {
        let base = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| {
                    Failure::Io(format!("cannot read config {}: {e}", path.display()))
                })?;
                RunConfig::parse(&text)?
            }
            None => RunConfig::default(),
        };
        Ok(base.merged(self.flags()))
    }
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[command(flatten)]
    model: ModelArgs,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Swept parameter; only `chi` is supported.
    #[arg(long, default_value = "chi")]
    axis: String,
    #[arg(long, allow_negative_numbers = true)]
    from: f64,
    #[arg(long, allow_negative_numbers = true)]
    to: f64,
    /// Number of points, both ends included.
    #[arg(long)]
    steps: usize,
    #[arg(long = "at-time", allow_negative_numbers = true)]
    at_time: f64,
    #[arg(long, default_value = "population")]
    observable: String,
}

#[derive(Debug, Args)]
struct FigureArgs {
    /// fig2, fig2g, fig3, fig4, fig5a or fig5b.
    name: String,
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[arg(long)]
    format: Option<Format>,
}

#[derive(Debug, Args)]
struct ConvergeArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Comma-separated ascending truncations, e.g. 8,16,32,64.
    #[arg(long = "nbar-list", value_delimiter = ',', required = true)]
    nbar_list: Vec<usize>,
}

#[derive(Debug)]
enum Failure {
    Model(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Model(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

impl Failure {
    fn exit_code(&self) -> i32 {
        match self {
            Failure::Model(e) if e.is_convergence() => EXIT_CONVERGENCE,
            Failure::Model(_) => EXIT_VALIDATION,
            Failure::Io(_) => EXIT_IO,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Model(e) => write!(f, "{e}"),
            Failure::Io(msg) => write!(f, "{msg}"),
        }
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_VALIDATION } else { EXIT_OK };
        }
    };

    let pool = match thread_pool() {
        Ok(pool) => pool,
        Err(msg) => {
            eprintln!("error: {msg}");
            return EXIT_VALIDATION;
        }
    };

    match pool.install(|| dispatch(cli.command)) {
        Ok(()) => EXIT_OK,
        Err(failure) => {
            eprintln!("error: {failure}");
            failure.exit_code()
        }
    }
}

fn thread_pool() -> Result<rayon::ThreadPool, String> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(value) = std::env::var(THREADS_ENV) {
        let n: usize = value
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| format!("{THREADS_ENV} must be a positive integer, got `{value}`"))?;
        builder = builder.num_threads(n);
    }
    builder.build().map_err(|e| e.to_string())
}

fn dispatch(command: Command) -> Result<(), Failure> {
    match command {
        Command::Simulate(args) => cmd_simulate(&args.model.resolve()?, args.model.dump_config),
        Command::Sweep(args) => cmd_sweep(&args),
        Command::Figure(args) => cmd_figure(&args),
        Command::Converge(args) => cmd_converge(&args),
    }
}

fn dump(cfg: &RunConfig) -> Result<(), Failure> {
    io::stdout().write_all(cfg.to_text().as_bytes())?;
    Ok(())
}

fn output_target(cfg: &RunConfig, stem: &str) -> (PathBuf, Format) {
    let format = cfg.format.unwrap_or(Format::Csv);
    let path = cfg
        .output
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("{stem}.{}", format.extension())));
    (path, format)
}

fn is_stdout(path: &Path) -> bool {
    path.as_os_str() == "-"
}

fn emit(table: &Table, path: &Path, format: Format) -> Result<(), Failure> {
    if is_stdout(path) {
        let stdout = io::stdout();
        table.write(format, stdout.lock())?;
        return Ok(());
    }
    let file = File::create(path)
        .map_err(|e| Failure::Io(format!("cannot create {}: {e}", path.display())))?;
    let mut out = BufWriter::new(file);
    table.write(format, &mut out)?;
    out.flush()?;
    Ok(())
}

/// Summary lines go to stderr when the data itself occupies stdout.
fn summary(path: &Path, line: &str) {
    if is_stdout(path) {
        eprintln!("{line}");
    } else {
        println!("{line}");
    }
}

fn cmd_simulate(cfg: &RunConfig, dump_only: bool) -> Result<(), Failure> {
    if dump_only {
        return dump(cfg);
    }
    let model = cfg.require_model()?;
    let t_max = cfg.t_max()?;
    let dt = cfg.dt();
    let (path, format) = output_target(cfg, "trace");
    let (table, final_sz, truncation) = match model {
        Model::Cavity => {
            let p = cfg.cavity_params()?;
            let trace = scan::trace_cavity(&p, t_max, dt, cfg.truncation_choice()?)?;
            let note = format!(
                "n_bar={}{}",
                trace.truncation.n_bar,
                if trace.truncation.auto { " (auto)" } else { "" }
            );
            let note = if trace.negative_rate {
                format!("{note} warning=negative_rate")
            } else {
                note
            };
            (report::cavity_trace_table(&p, &trace), trace.final_sz(), note)
        }
        Model::Freespace => {
            let p = cfg.freespace_params()?;
            let trace = scan::trace_freespace(&p, t_max, dt)?;
            let note = format!("n0={} m0={}", p.n0, p.m0);
            (report::freespace_trace_table(&p, &trace), trace.final_sz(), note)
        }
    };
    emit(&table, &path, format)?;
    summary(
        &path,
        &format!(
            "model={} t_max={t_max} final_sz={final_sz:.10} {truncation} output={}",
            model.name(),
            path.display()
        ),
    );
    Ok(())
}

fn cmd_sweep(args: &SweepArgs) -> Result<(), Failure> {
    let cfg = args.model.resolve()?;
    if args.model.dump_config {
        return dump(&cfg);
    }
    if args.axis != "chi" {
        return Err(Error::invalid("axis", format!("unsupported axis `{}`; only `chi`", args.axis)).into());
    }
    if cfg.model.unwrap_or(Model::Cavity) != Model::Cavity {
        return Err(Error::invalid("model", "chi sweeps are defined for the cavity model").into());
    }
    let observable: Observable = args.observable.parse()?;
    // chi is the swept axis, so it is not required from the configuration.
    let base_cfg = RunConfig {
        chi: Some(0.0),
        ..cfg.clone()
    };
    let base = base_cfg.cavity_params()?;
    let chi = scan::linspace(args.from, args.to, args.steps)?;
    let result = scan::sweep_chi(
        &base,
        &chi,
        args.at_time,
        observable,
        &STANDARD_PHASES,
        cfg.truncation_choice()?,
    )?;
    let invalid = result
        .variants
        .iter()
        .map(|v| v.reasons.iter().filter(|r| r.is_some()).count())
        .sum::<usize>();
    let (path, format) = output_target(&cfg, "sweep");
    emit(&report::sweep_table(&result), &path, format)?;
    summary(
        &path,
        &format!(
            "sweep axis=chi points={} observable={} at_time={} invalid_points={invalid} output={}",
            chi.len(),
            observable.name(),
            args.at_time,
            path.display()
        ),
    );
    Ok(())
}

fn cmd_figure(args: &FigureArgs) -> Result<(), Failure> {
    let figure: Figure = args.name.parse()?;
    let cfg = RunConfig {
        output: args.output.clone(),
        format: args.format,
        ..RunConfig::default()
    };
    let (path, format) = output_target(&cfg, figure.name());
    let table = figure.build()?;
    emit(&table, &path, format)?;
    summary(
        &path,
        &format!("figure={} rows={} output={}", figure.name(), table.rows(), path.display()),
    );
    Ok(())
}

fn cmd_converge(args: &ConvergeArgs) -> Result<(), Failure> {
    let cfg = args.model.resolve()?;
    if args.model.dump_config {
        return dump(&cfg);
    }
    if cfg.model.unwrap_or(Model::Cavity) != Model::Cavity {
        return Err(Error::invalid("model", "convergence reports are defined for the cavity model").into());
    }
    let p = cfg.cavity_params()?;
    let t_max = cfg.t_max()?;
    let rows = scan::convergence_report(&p, t_max, &args.nbar_list)?;
    let (path, format) = output_target(&cfg, "convergence");
    emit(&report::convergence_table(&p, t_max, &rows), &path, format)?;
    let last = rows.last().expect("report has at least one row");
    summary(
        &path,
        &format!(
            "rows={} last_n_bar={} last_delta={:e} output={}",
            rows.len(),
            last.n_bar,
            last.max_grid_delta,
            path.display()
        ),
    );
    Ok(())
}
