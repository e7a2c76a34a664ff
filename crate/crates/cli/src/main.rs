mod family;
mod report;

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use weak_discord::{
    Boundary, ChannelBasis, CorrelationReport, CostModel, CostOptions, MeasurementBasis, PostMeasurementRule,
    StateFamily, DEFAULT_STEP, DEFAULT_TOL, DEFAULT_X_MAX,
};

use family::{parse_family, ParseError};
use report::{key_values, select_columns, write_rows, ReportRow, COLUMNS};

const THREADS_VAR: &str = "WEAK_DISCORD_THREADS";

#[derive(Parser)]
#[command(
    name = "weak-discord",
    version,
    about = "Weak-measurement discord and the disturbance/information cost"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct StateArgs {
    /// pure:lambda0=<f> | werner:z=<f> | general:a=<f>,<f>,<f>;b=...;c=...
    #[arg(long)]
    state: String,
    /// Apply the ΔF channel in this basis instead of the J_w optimum.
    #[arg(long, allow_negative_numbers = true)]
    theta: Option<f64>,
    #[arg(long, requires = "theta", allow_negative_numbers = true)]
    phi: Option<f64>,
    /// Use the non-trace-preserving post-measurement expression.
    #[arg(long)]
    literal_postmeasure: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Kv,
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Figure {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
}

#[derive(Subcommand)]
enum Command {
    /// Full report at one strength.
    Compute {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long, allow_negative_numbers = true)]
        x: f64,
        #[arg(long, value_enum, default_value = "kv")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// One row per point of an evenly spaced strength grid.
    Sweep {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long, default_value_t = 0.0)]
        x_min: f64,
        #[arg(long, default_value_t = 6.0)]
        x_max: f64,
        #[arg(long, default_value_t = 241)]
        steps: usize,
        /// Comma-separated subset of the table columns.
        #[arg(long)]
        columns: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Strength minimising the cost on [0, x_max].
    Optimize {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long, default_value_t = DEFAULT_X_MAX)]
        x_max: f64,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long, value_enum, default_value = "kv")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Regenerate the data files behind a figure.
    Figure {
        #[arg(value_enum)]
        name: Figure,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("state spec: {0}")]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Core(#[from] weak_discord::Error),
    #[error("numeric contract violated: {0}")]
    Contract(String),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
}

impl CliError {
    fn exit_code(&self) -> u8 {
        use weak_discord::Error as E;
        match self {
            CliError::Parse(_) | CliError::Usage(_) => 2,
            CliError::Core(E::InvalidArgument(_)) => 2,
            CliError::Core(
                E::ParameterRange { .. }
                | E::UnphysicalState(_)
                | E::NotHermitian { .. }
                | E::NotPsd { .. }
                | E::Trace { .. },
            ) => 3,
            CliError::Core(_) | CliError::Contract(_) => 4,
            CliError::Io { .. } => 1,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn io_error(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.display().to_string(),
        source,
    }
}

fn csv_error(path: &Path) -> impl FnOnce(csv::Error) -> CliError + '_ {
    move |e| CliError::Io {
        path: path.display().to_string(),
        source: e.into(),
    }
}

/// Runs `f` against the file at `path`, or stdout when absent.
fn with_output(path: Option<&Path>, f: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> Result<()> {
    match path {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p).map_err(io_error(p))?);
            f(&mut w).and_then(|_| w.flush()).map_err(io_error(p))
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            f(&mut lock).map_err(io_error(Path::new("<stdout>")))
        }
    }
}

fn model(args: &StateArgs) -> Result<(StateFamily, CostModel)> {
    let family = parse_family(&args.state)?;
    let rho = family.build()?;
    let channel_basis = match args.theta {
        Some(theta) => ChannelBasis::Fixed(MeasurementBasis::new(theta, args.phi.unwrap_or(0.0))),
        None => ChannelBasis::WeakDiscordOptimum,
    };
    let rule = if args.literal_postmeasure {
        PostMeasurementRule::Literal
    } else {
        PostMeasurementRule::TracePreserving
    };
    let options = CostOptions {
        rule,
        channel_basis,
        ..CostOptions::default()
    };
    Ok((family, CostModel::with_options(rho, options)?))
}

fn checked_rows(reports: &[CorrelationReport]) -> Result<Vec<ReportRow>> {
    reports
        .iter()
        .map(|r| {
            let row = ReportRow::from(r);
            if row.is_consistent() {
                Ok(row)
            } else {
                Err(CliError::Contract(format!("row at x = {} fails cost = ΔF + ΔD", r.x)))
            }
        })
        .collect()
}

fn grid(x_min: f64, x_max: f64, steps: usize) -> Result<Vec<f64>> {
    if !(x_min.is_finite() && x_max.is_finite() && x_min >= 0.0 && x_min < x_max) {
        return Err(CliError::Usage(format!(
            "need 0 ≤ x-min < x-max, got [{x_min}, {x_max}]"
        )));
    }
    if steps < 2 {
        return Err(CliError::Usage(format!("need at least 2 steps, got {steps}")));
    }
    let last = (steps - 1) as f64;
    Ok((0..steps).map(|i| x_min + (x_max - x_min) * i as f64 / last).collect())
}

#[derive(Serialize)]
struct Labelled<'a, T> {
    state: String,
    #[serde(flatten)]
    record: &'a T,
}

fn compute(state: &StateArgs, x: f64, format: Format, out: Option<&Path>) -> Result<()> {
    let (family, model) = model(state)?;
    let report = model.report(x)?;
    let rows = checked_rows(std::slice::from_ref(&report))?;
    let labelled = Labelled {
        state: family.to_string(),
        record: &report,
    };
    match format {
        Format::Kv => with_output(out, |w| w.write_all(key_values(&labelled).as_bytes())),
        Format::Json => with_output(out, |w| {
            serde_json::to_writer_pretty(&mut *w, &labelled)?;
            writeln!(w)
        }),
        Format::Csv => write_table(out, &rows, &all_columns()),
    }
}

fn all_columns() -> Vec<usize> {
    (0..COLUMNS.len()).collect()
}

fn write_table(out: Option<&Path>, rows: &[ReportRow], columns: &[usize]) -> Result<()> {
    match out {
        Some(p) => {
            let file = File::create(p).map_err(io_error(p))?;
            write_rows(BufWriter::new(file), rows, columns).map_err(csv_error(p))
        }
        None => write_rows(io::stdout().lock(), rows, columns).map_err(csv_error(Path::new("<stdout>"))),
    }
}

fn sweep_rows(model: &CostModel, xs: &[f64]) -> Result<Vec<ReportRow>> {
    checked_rows(&model.sweep(xs)?)
}

#[derive(Serialize)]
struct OptimumSummary<'a> {
    x_star: f64,
    cost: f64,
    boundary: Option<Boundary>,
    curvature: Option<f64>,
    report: &'a CorrelationReport,
}

#[derive(Serialize)]
struct OptimumHead {
    x_star: f64,
    cost: f64,
    boundary: Option<Boundary>,
    curvature: Option<f64>,
}

fn optimize(state: &StateArgs, x_max: f64, tol: f64, format: Format, out: Option<&Path>) -> Result<()> {
    let (family, model) = model(state)?;
    let opt = model.optimal_strength(x_max, tol)?;
    let rows = checked_rows(std::slice::from_ref(&opt.report))?;
    let summary = OptimumSummary {
        x_star: opt.x_star,
        cost: opt.report.cost,
        boundary: opt.boundary,
        curvature: opt.curvature,
        report: &opt.report,
    };
    match format {
        Format::Kv => with_output(out, |w| {
            let head = Labelled {
                state: family.to_string(),
                record: &OptimumHead {
                    x_star: summary.x_star,
                    cost: summary.cost,
                    boundary: summary.boundary,
                    curvature: summary.curvature,
                },
            };
            w.write_all(key_values(&head).as_bytes())?;
            w.write_all(key_values(&opt.report).as_bytes())
        }),
        Format::Json => with_output(out, |w| {
            let labelled = Labelled {
                state: family.to_string(),
                record: &summary,
            };
            serde_json::to_writer_pretty(&mut *w, &labelled)?;
            writeln!(w)
        }),
        Format::Csv => write_table(out, &rows, &all_columns()),
    }
}

fn figure_sweep(dir: &Path, file: &str, spec: &str) -> Result<PathBuf> {
    let args = StateArgs {
        state: spec.to_string(),
        theta: None,
        phi: None,
        literal_postmeasure: false,
    };
    let (_, model) = model(&args)?;
    let rows = sweep_rows(&model, &grid(0.0, 6.0, 241)?)?;
    let path = dir.join(file);
    write_table(Some(&path), &rows, &all_columns())?;
    Ok(path)
}

fn figure_surface(dir: &Path) -> Result<Vec<PathBuf>> {
    let xs: Vec<f64> = (1..=120).map(|i| 0.05 * i as f64).collect();
    let lambdas: Vec<f64> = (1..=25).map(|i| 0.02 * i as f64).collect();
    let surface = dir.join("fig2_surface.csv");
    let crossings = dir.join("fig2_crossings.csv");
    let mut s = csv::Writer::from_path(&surface).map_err(csv_error(&surface))?;
    let mut c = csv::Writer::from_path(&crossings).map_err(csv_error(&crossings))?;
    s.write_record(["x", "lambda0", "C_prime_masked"])
        .map_err(csv_error(&surface))?;
    c.write_record(["lambda0", "x", "direction"])
        .map_err(csv_error(&crossings))?;
    for &l0 in &lambdas {
        let model = CostModel::new(weak_discord::make_pure_schmidt(l0)?)?;
        let scan = model.derivative_scan(&xs, DEFAULT_STEP)?;
        for (x, m) in scan.x_grid.iter().zip(&scan.c_prime_masked) {
            s.serialize((x, l0, m)).map_err(csv_error(&surface))?;
        }
        for z in &scan.zero_crossings {
            let direction = match z.direction {
                weak_discord::Crossing::Rising => "rising",
                weak_discord::Crossing::Falling => "falling",
            };
            c.serialize((l0, z.x, direction)).map_err(csv_error(&crossings))?;
        }
    }
    s.flush().map_err(io_error(&surface))?;
    c.flush().map_err(io_error(&crossings))?;
    Ok(vec![surface, crossings])
}

fn figure(name: Figure, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(io_error(dir))?;
    let written = match name {
        Figure::Fig1 => ["0.05", "0.1", "0.2", "0.5"]
            .iter()
            .map(|l0| figure_sweep(dir, &format!("fig1_lambda0_{l0}.csv"), &format!("pure:lambda0={l0}")))
            .collect::<Result<Vec<_>>>()?,
        Figure::Fig2 => figure_surface(dir)?,
        Figure::Fig3 => vec![figure_sweep(dir, "fig3_werner_z_0.25.csv", "werner:z=0.25")?],
        Figure::Fig4 => vec![figure_sweep(
            dir,
            "fig4_general.csv",
            "general:a=0.01,0.1,0.22;b=0.1,0.03,0.5;c=0.1,0.02,0.2",
        )?],
    };
    for p in written {
        println!("{}", p.display());
    }
    Ok(())
}

fn configure_threads() -> Result<()> {
    let Ok(value) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = value
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("{THREADS_VAR} must be a positive integer, got `{value}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(e.to_string()))
}

fn run(cli: Cli) -> Result<()> {
    configure_threads()?;
    match cli.command {
        Command::Compute { state, x, format, out } => compute(&state, x, format, out.as_deref()),
        Command::Sweep {
            state,
            x_min,
            x_max,
            steps,
            columns,
            out,
        } => {
            let columns = match columns {
                Some(spec) => select_columns(&spec).map_err(CliError::Usage)?,
                None => all_columns(),
            };
            let xs = grid(x_min, x_max, steps)?;
            let (_, model) = model(&state)?;
            let rows = sweep_rows(&model, &xs)?;
            write_table(out.as_deref(), &rows, &columns)
        }
        Command::Optimize {
            state,
            x_max,
            tol,
            format,
            out,
        } => optimize(&state, x_max, tol, format, out.as_deref()),
        Command::Figure { name, out_dir } => figure(name, &out_dir),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Io { source, .. }) if source.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
