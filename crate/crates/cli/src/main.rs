use std::path::PathBuf;
use std::process::ExitCode;

use circumfeas::scenario::Generator;
use circumfeas_cli::{cmd_plot, cmd_run, cmd_sweep, CliResult, Method, Outcome, PlotStyle, RunOptions, SweepOptions, EXIT_ERROR};
use clap::{Parser, Subcommand};

/// Circumcentered and sphere-centered reflection methods for two-set
/// convex feasibility.
#[derive(Parser)]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario start and write trace.csv, trace.json and summary.json.
    Run {
        /// Registry name, `<generator>:<seed>`, JSON file path, or a name
        /// looked up in CIRCUMFEAS_SCENARIO_DIR.
        #[arg(long)]
        scenario: String,
        #[arg(long, value_enum, default_value = "crm")]
        method: Method,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Index into the scenario's initial points.
        #[arg(long, default_value_t = 0)]
        start: usize,
        #[arg(long)]
        max_iters: Option<usize>,
        #[arg(long)]
        eps_feas: Option<f64>,
        #[arg(long)]
        eps_degen: Option<f64>,
    },
    /// Run seeded random scenarios and write aggregate.csv and verdict.txt.
    Sweep {
        #[arg(long, value_parser = parse_generator)]
        generator: Generator,
        #[arg(long, default_value_t = 100)]
        count: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Defaults to crm_product for polyhedra and crm otherwise.
        #[arg(long, value_enum)]
        method: Option<Method>,
        #[arg(long, default_value = "sweep")]
        out: PathBuf,
    },
    /// Render a trace.json as an SVG figure.
    Plot {
        #[arg(long)]
        trace: PathBuf,
        #[arg(long, value_enum, default_value = "plane")]
        style: PlotStyle,
        #[arg(long, default_value = "trace.svg")]
        out: PathBuf,
    },
}

fn parse_generator(s: &str) -> Result<Generator, String> {
    Generator::from_name(s).ok_or_else(|| {
        let names: Vec<&str> = Generator::ALL.iter().map(|g| g.name()).collect();
        format!("unknown generator {s:?}; expected one of {}", names.join(", "))
    })
}

fn dispatch(cmd: Command) -> CliResult<Outcome> {
    match cmd {
        Command::Run { scenario, method, out, start, max_iters, eps_feas, eps_degen } => {
            cmd_run(&RunOptions { scenario, method, out, start, max_iters, eps_feas, eps_degen })
        }
        Command::Sweep { generator, count, seed, method, out } => {
            cmd_sweep(&SweepOptions { generator, count, seed, method, out })
        }
        Command::Plot { trace, style, out } => cmd_plot(&trace, style, &out).map(|()| Outcome::Ok),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(outcome) => ExitCode::from(outcome.code() as u8),
        Err(e) => {
            eprintln!("{}", e.record());
            ExitCode::from(EXIT_ERROR as u8)
        }
    }
}
