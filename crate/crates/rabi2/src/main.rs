//! Command-line front end. Every subcommand prints a deterministic artifact
//! (JSON, or CSV for eigenvalue tables) to stdout or `--out`, plus a one-line
//! status on stderr. Exit codes: 0 when the run's claim held, 1 when a run
//! completed but falsified its claim or a computation failed, 2 on usage
//! errors. Set RABI2_LOG=debug for progress logging.

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::{Path, PathBuf};

use rabi2::exact::{parse_gaussian, parse_rational, Energy};
use rabi2::report::{
    parse_cutoffs, parse_grid, run_report, run_spectrum, run_verify_g, run_verify_ode4,
    CommandOutput, ParityChoice, ReportConfig, RunError, SpectrumConfig, VerifyGConfig,
    VerifyOde4Config,
};
use rabi2::selftest;
use rabi2::series::ModelParams;

#[derive(Parser)]
#[command(
    name = "rabi2",
    version,
    about = "Two-photon Rabi model toolkit: exact series verification and truncated-basis spectra",
    arg_required_else_help = true
)]
struct Cli {
    /// Run the full acceptance battery and exit (same as the selftest subcommand).
    #[arg(long)]
    selftest: bool,

    /// Seed for the battery's randomized draws.
    #[arg(long, default_value_t = 42)]
    seed: u64,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Args)]
struct ModelArgs {
    /// Photon-pair coupling, an exact rational like 1/10.
    #[arg(long, default_value = "1/10")]
    g: String,

    /// Field frequency.
    #[arg(long, default_value = "1")]
    omega: String,

    /// Atomic level splitting.
    #[arg(long, default_value = "7/10")]
    omega0: String,

    /// Energy: an exact rational, or "symbolic" to carry E as an indeterminate.
    #[arg(long, default_value = "1/2")]
    energy: String,
}

impl ModelArgs {
    fn to_params(&self) -> Result<ModelParams, RunError> {
        let g = parse_rational(&self.g).map_err(|e| RunError::Usage(format!("--g: {e}")))?;
        let omega =
            parse_rational(&self.omega).map_err(|e| RunError::Usage(format!("--omega: {e}")))?;
        let omega0 =
            parse_rational(&self.omega0).map_err(|e| RunError::Usage(format!("--omega0: {e}")))?;
        let energy: Energy = self
            .energy
            .parse()
            .map_err(|e| RunError::Usage(format!("--energy: {e}")))?;
        Ok(ModelParams::new(g, omega, omega0, energy))
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ParityArg {
    Even,
    Odd,
    Both,
}

impl From<ParityArg> for ParityChoice {
    fn from(p: ParityArg) -> Self {
        match p {
            ParityArg::Even => ParityChoice::Even,
            ParityArg::Odd => ParityChoice::Odd,
            ParityArg::Both => ParityChoice::Both,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Build the eight-member candidate family and check the vanishing claim.
    VerifyG {
        #[command(flatten)]
        model: ModelArgs,
        /// Series order; coefficients are checked through this index.
        #[arg(long, default_value_t = 200)]
        order: usize,
        /// Corrupt one interior coefficient to demonstrate a detectable failure.
        #[arg(long)]
        inject_fault: bool,
        /// Write the JSON artifact here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check that the solution pair and its combinations satisfy the
    /// fourth-order equation.
    VerifyOde4 {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 200)]
        order: usize,
        /// Use the rejected reading of the a1 coefficient; residuals then show
        /// exactly where it breaks.
        #[arg(long)]
        a1_variant: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Diagonalize the truncated operator at two cutoffs and report the
    /// converged spectrum with per-level norm diagnostics.
    Spectrum {
        #[command(flatten)]
        model: ModelArgs,
        /// Coarse and fine photon cutoffs, "A,B" with A < B.
        #[arg(long, default_value = "500,600")]
        cutoffs: String,
        /// Level agreement tolerance between the two cutoffs.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Restrict to one photon-parity block, or use the full operator.
        #[arg(long, value_enum, default_value_t = ParityArg::Both)]
        parity: ParityArg,
        #[arg(long, value_enum, default_value_t = FormatArg::Json)]
        format: FormatArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Scan the candidate determinant over an energy grid next to the
    /// discrete spectrum, in one artifact.
    Report {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 200)]
        order: usize,
        #[arg(long, default_value = "500,600")]
        cutoffs: String,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Evaluation point, a Gaussian rational like 1/3 or 1/2+1/4i.
        #[arg(long, default_value = "1/3")]
        z0: String,
        /// Energy grid "lo:hi:count" with rational bounds.
        #[arg(long, default_value = "0:2:50")]
        grid: String,
        /// Scan with the non-vanishing control conditions instead of the
        /// canonical even ones.
        #[arg(long)]
        control_ics: bool,
        /// Write the JSON artifact here; the human summary always goes to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the full acceptance battery.
    Selftest {
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::new().filter("RABI2_LOG")).init();
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    std::process::exit(code);
}

fn run(cli: Cli) -> Result<i32, RunError> {
    if cli.selftest {
        return Ok(run_selftest(cli.seed));
    }
    let Some(command) = cli.command else {
        return Err(RunError::Usage(
            "a subcommand or --selftest is required; see --help".into(),
        ));
    };
    match command {
        Command::Selftest { seed } => Ok(run_selftest(seed)),
        Command::VerifyG {
            model,
            order,
            inject_fault,
            out,
        } => {
            let output = run_verify_g(&VerifyGConfig {
                params: model.to_params()?,
                order,
                inject_fault,
            })?;
            emit(&output, FormatArg::Json, out.as_deref())?;
            Ok(exit_for(&output))
        }
        Command::VerifyOde4 {
            model,
            order,
            a1_variant,
            out,
        } => {
            let output = run_verify_ode4(&VerifyOde4Config {
                params: model.to_params()?,
                order,
                a1_variant,
            })?;
            emit(&output, FormatArg::Json, out.as_deref())?;
            Ok(exit_for(&output))
        }
        Command::Spectrum {
            model,
            cutoffs,
            tol,
            parity,
            format,
            out,
        } => {
            let output = run_spectrum(&SpectrumConfig {
                params: model.to_params()?,
                cutoffs: parse_cutoffs(&cutoffs)?,
                tol,
                parity: parity.into(),
            })?;
            emit(&output, format, out.as_deref())?;
            Ok(exit_for(&output))
        }
        Command::Report {
            model,
            order,
            cutoffs,
            tol,
            z0,
            grid,
            control_ics,
            out,
        } => {
            let output = run_report(&ReportConfig {
                params: model.to_params()?,
                order,
                cutoffs: parse_cutoffs(&cutoffs)?,
                tol,
                z0: parse_gaussian(&z0).map_err(|e| RunError::Usage(format!("--z0: {e}")))?,
                grid: parse_grid(&grid)?,
                control_ics,
            })?;
            print!("{}", output.human);
            match out.as_deref() {
                Some(path) => {
                    write_file(path, &render_json(&output)?)?;
                    eprintln!("json artifact written to {}", path.display());
                }
                None => eprintln!("pass --out PATH to save the json artifact"),
            }
            Ok(exit_for(&output))
        }
    }
}

fn exit_for(output: &CommandOutput) -> i32 {
    if output.ok {
        0
    } else {
        1
    }
}

fn render_json(output: &CommandOutput) -> Result<String, RunError> {
    serde_json::to_string_pretty(&output.json)
        .map(|s| s + "\n")
        .map_err(|e| RunError::Computation(format!("serializing report: {e}")))
}

fn write_file(path: &Path, payload: &str) -> Result<(), RunError> {
    std::fs::write(path, payload)
        .map_err(|e| RunError::Computation(format!("writing {}: {e}", path.display())))
}

/// Print the payload to stdout or `--out`, and a one-line status to stderr.
fn emit(output: &CommandOutput, format: FormatArg, out: Option<&Path>) -> Result<(), RunError> {
    let payload = match format {
        FormatArg::Json => render_json(output)?,
        FormatArg::Csv => output
            .csv
            .clone()
            .ok_or_else(|| RunError::Usage("this command has no CSV form".into()))?,
    };
    match out {
        Some(path) => {
            write_file(path, &payload)?;
            eprintln!("artifact written to {}", path.display());
        }
        None => print!("{payload}"),
    }
    let status = if output.ok { "ok" } else { "FALSIFIED" };
    match output.human.lines().next() {
        Some(first) => eprintln!("{status}: {first}"),
        None => eprintln!("{status}"),
    }
    Ok(())
}

fn run_selftest(seed: u64) -> i32 {
    println!("acceptance battery (seed {seed})");
    let outcomes = selftest::run_all(seed);
    for o in &outcomes {
        println!(
            "criterion {:>2} ({}): {} [{:.1} s] {}",
            o.index,
            o.name,
            if o.passed { "PASS" } else { "FAIL" },
            o.seconds,
            o.detail
        );
    }
    if selftest::all_passed(&outcomes) {
        println!("all {} criteria passed", outcomes.len());
        0
    } else {
        println!("{} criteria FAILED", outcomes.iter().filter(|o| !o.passed).count());
        1
    }
}
