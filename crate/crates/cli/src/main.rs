//! `meanfield`: point queries, grid sweeps and convergence studies for the
//! Curie-Weiss and Sherrington-Kirkpatrick mechanical formulation.
//!
//! Exit codes: 0 on success, 2 on invalid input, 3 when a solver failed to
//! converge (the partial record is still written, with `converged: false`).

mod commands;
mod record;
mod sweep;

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgMatches, Args, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};
use meanfield::Side;

use commands::{ConvergenceModel, Outcome};
use record::{write_records, Format, Record};
use sweep::{Model, Quantity, SweepSpec};

#[derive(Parser)]
#[command(name = "meanfield", version, about = "Mean-field spin models as Hamilton-Jacobi mechanics")]
struct Cli {
    /// Output encoding.
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,

    /// Write output here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Curie-Weiss model.
    #[command(subcommand)]
    Cw(CwCommand),
    /// Sherrington-Kirkpatrick model.
    #[command(subcommand)]
    Sk(SkCommand),
    /// Evaluate one quantity over an (x, t) grid.
    Sweep(SweepArgs),
    /// Finite-size errors against the limit, with a log-log slope.
    Convergence(ConvergenceArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Branch {
    Plus,
    Minus,
}

impl From<Branch> for Side {
    fn from(b: Branch) -> Side {
        match b {
            Branch::Plus => Side::Plus,
            Branch::Minus => Side::Minus,
        }
    }
}

#[derive(Args)]
struct Point {
    #[arg(long)]
    x: f64,
    #[arg(long)]
    t: f64,
}

#[derive(Subcommand)]
enum CwCommand {
    /// Exact finite-N action, velocity, potential and moments.
    Exact {
        #[command(flatten)]
        point: Point,
        #[arg(long)]
        n: usize,
        /// Highest magnetization moment to report.
        #[arg(long, default_value_t = 4)]
        k_max: usize,
    },
    /// Thermodynamic limit from the Lax-Oleinik formula.
    Limit {
        #[command(flatten)]
        point: Point,
        /// One-sided limit used on the shock line x = 0, t > 1.
        #[arg(long, value_enum, default_value = "plus")]
        branch: Branch,
    },
    /// Finite-N action and velocity from the Cole-Hopf integral.
    Viscous {
        #[command(flatten)]
        point: Point,
        #[arg(long)]
        n: usize,
    },
    /// Velocity jump across the shock line at t > 1.
    Shock {
        #[arg(long)]
        t: f64,
    },
    /// Boundary of the two-minimizer region at t > 1.
    CriticalLine {
        #[arg(long)]
        t: f64,
    },
    /// Characteristic crossings on either side of the critical line.
    Crossings {
        #[arg(long)]
        t: f64,
        #[arg(long, default_value_t = 200)]
        n_launch: usize,
    },
    /// Conservation-law residuals r1, r2, r3.
    Identities {
        #[command(flatten)]
        point: Point,
        #[arg(long)]
        n: usize,
    },
    /// Finite-difference residuals of the Hamilton-Jacobi and continuity equations.
    Residuals {
        #[command(flatten)]
        point: Point,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1e-3)]
        step: f64,
    },
}

#[derive(Subcommand)]
enum SkCommand {
    /// Replica-symmetric action and overlap.
    Rs {
        #[command(flatten)]
        point: Point,
        #[arg(long, default_value_t = 0.0)]
        beta_h: f64,
    },
    /// Replica-symmetric pressure at inverse temperature beta and field h.
    Pressure {
        #[arg(long)]
        beta: f64,
        #[arg(long, default_value_t = 0.0)]
        h: f64,
    },
    /// Caustic margin; negative where characteristics cross.
    Caustic {
        #[command(flatten)]
        point: Point,
        #[arg(long, default_value_t = 0.0)]
        beta_h: f64,
    },
    /// Locate the caustic in t at fixed x.
    CausticRoot {
        #[arg(long)]
        x: f64,
        #[arg(long, default_value_t = 0.0)]
        beta_h: f64,
        #[arg(long, default_value_t = 0.5)]
        t_lo: f64,
        #[arg(long, default_value_t = 2.0)]
        t_hi: f64,
    },
    /// Quenched overlap moments by exact enumeration of disorder samples.
    Finite {
        #[command(flatten)]
        point: Point,
        #[arg(long, default_value_t = 0.0)]
        beta_h: f64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        samples: usize,
        #[arg(long)]
        seed: u64,
    },
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, value_enum)]
    model: Model,
    #[arg(long, value_enum)]
    quantity: Quantity,
    #[arg(long, default_value_t = 0.0)]
    x_min: f64,
    #[arg(long, default_value_t = 1.0)]
    x_max: f64,
    #[arg(long, default_value_t = 11)]
    n_x: usize,
    #[arg(long, default_value_t = 0.0)]
    t_min: f64,
    #[arg(long, default_value_t = 2.0)]
    t_max: f64,
    #[arg(long, default_value_t = 11)]
    n_t: usize,
    /// System size for finite-N quantities.
    #[arg(long, default_value_t = 100)]
    n: usize,
    #[arg(long, default_value_t = 0.0)]
    beta_h: f64,
    #[arg(long, value_enum, default_value = "plus")]
    branch: Branch,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConvergenceKind {
    CwAction,
    CwVelocity,
    SkIdentities,
}

#[derive(Args)]
struct ConvergenceArgs {
    #[arg(long, value_enum)]
    model: ConvergenceKind,
    #[command(flatten)]
    point: Point,
    #[arg(long, default_value_t = 0.0)]
    beta_h: f64,
    /// Comma-separated, strictly increasing sizes.
    #[arg(long, value_delimiter = ',')]
    n_list: Option<Vec<usize>>,
    #[arg(long, value_enum, default_value = "plus")]
    branch: Branch,
    #[arg(long, default_value_t = 200)]
    samples: usize,
    #[arg(long)]
    seed: Option<u64>,
}

const CW_SIZES: [usize; 7] = [10, 20, 40, 80, 160, 320, 640];
const SK_SIZES: [usize; 4] = [6, 8, 10, 12];

/// Invalid input; reported on one line with exit code 2.
struct Failure(String);

struct Output {
    records: Vec<Record>,
    as_array: bool,
    unconverged: bool,
}

fn point_output(o: Outcome) -> Result<Output, Failure> {
    match &o.failure {
        Some(e) if !e.is_convergence_failure() => Err(Failure(e.to_string())),
        failure => Ok(Output {
            unconverged: failure.is_some(),
            records: vec![o.record],
            as_array: false,
        }),
    }
}

fn run_cw(cmd: CwCommand) -> Outcome {
    match cmd {
        CwCommand::Exact { point, n, k_max } => commands::cw_exact(point.x, point.t, n, k_max),
        CwCommand::Limit { point, branch } => commands::cw_limit(point.x, point.t, branch.into()),
        CwCommand::Viscous { point, n } => commands::cw_viscous(point.x, point.t, n),
        CwCommand::Shock { t } => commands::cw_shock(t),
        CwCommand::CriticalLine { t } => commands::cw_critical_line(t),
        CwCommand::Crossings { t, n_launch } => commands::cw_crossings(t, n_launch),
        CwCommand::Identities { point, n } => commands::cw_identities(point.x, point.t, n),
        CwCommand::Residuals { point, n, step } => commands::cw_residuals(point.x, point.t, n, step),
    }
}

fn run_sk(cmd: SkCommand) -> Outcome {
    match cmd {
        SkCommand::Rs { point, beta_h } => commands::sk_rs(point.x, point.t, beta_h),
        SkCommand::Pressure { beta, h } => commands::sk_pressure(beta, h),
        SkCommand::Caustic { point, beta_h } => commands::sk_caustic(point.x, point.t, beta_h),
        SkCommand::CausticRoot { x, beta_h, t_lo, t_hi } => commands::sk_caustic_root(x, beta_h, t_lo, t_hi),
        SkCommand::Finite {
            point,
            beta_h,
            n,
            samples,
            seed,
        } => commands::sk_finite(point.x, point.t, beta_h, n, samples, seed),
    }
}

fn run_sweep(a: SweepArgs) -> Result<Output, Failure> {
    let spec = SweepSpec {
        model: a.model,
        quantity: a.quantity,
        x_min: a.x_min,
        x_max: a.x_max,
        n_x: a.n_x,
        t_min: a.t_min,
        t_max: a.t_max,
        n_t: a.n_t,
        n: a.n,
        beta_h: a.beta_h,
        branch: a.branch.into(),
        samples: a.samples,
        seed: a.seed,
    };
    spec.validate().map_err(Failure)?;
    let (records, unconverged) = sweep::run_sweep(&spec);
    Ok(Output {
        records,
        as_array: true,
        unconverged,
    })
}

fn run_convergence(a: ConvergenceArgs) -> Result<Output, Failure> {
    let (model, default_sizes): (ConvergenceModel, &[usize]) = match a.model {
        ConvergenceKind::CwAction => (ConvergenceModel::CwAction, &CW_SIZES),
        ConvergenceKind::CwVelocity => (ConvergenceModel::CwVelocity, &CW_SIZES),
        ConvergenceKind::SkIdentities => {
            let seed = a
                .seed
                .ok_or_else(|| Failure("--seed is required for sk-identities".into()))?;
            let model = ConvergenceModel::SkIdentities {
                beta_h: a.beta_h,
                samples: a.samples,
                seed,
            };
            (model, &SK_SIZES)
        }
    };
    let ns = a.n_list.unwrap_or_else(|| default_sizes.to_vec());
    match commands::convergence(model, a.point.x, a.point.t, &ns, a.branch.into()) {
        Ok(records) => Ok(Output {
            records,
            as_array: true,
            unconverged: false,
        }),
        Err(o) => point_output(o),
    }
}

fn emit(out: Option<&PathBuf>, format: Format, output: Output) -> io::Result<()> {
    let mut buf = Vec::new();
    write_records(&mut buf, output.records, format, output.as_array)?;
    match out {
        Some(path) => File::create(path)?.write_all(&buf),
        None => io::stdout().lock().write_all(&buf),
    }
}

/// Lets `--x -1` parse as a value at every level of the command tree.
fn allow_negative(cmd: clap::Command) -> clap::Command {
    cmd.allow_negative_numbers(true).mut_subcommands(allow_negative)
}

fn parse() -> Result<Cli, clap::Error> {
    let matches: ArgMatches = allow_negative(Cli::command()).try_get_matches()?;
    Cli::from_arg_matches(&matches)
}

fn main() -> ExitCode {
    let cli = match parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.render().to_string();
            eprintln!("{}", text.lines().next().unwrap_or("error: invalid arguments"));
            return ExitCode::from(2);
        }
    };
    let result = match cli.command {
        Command::Cw(cmd) => point_output(run_cw(cmd)),
        Command::Sk(cmd) => point_output(run_sk(cmd)),
        Command::Sweep(a) => run_sweep(a),
        Command::Convergence(a) => run_convergence(a),
    };
    let output = match result {
        Ok(output) => output,
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let unconverged = output.unconverged;
    if let Err(e) = emit(cli.out.as_ref(), cli.format, output) {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(2);
    }
    if unconverged {
        eprintln!("error: a solver did not converge; see the `error` field");
        ExitCode::from(3)
    } else {
        ExitCode::SUCCESS
    }
}
