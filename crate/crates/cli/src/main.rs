mod commands;
mod error;
mod scenario;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fockfield::algebra::Convention;
use fockfield::field::EvalPath;
use fockfield::transition::{FloorOrdering, RampKind};

use error::CliError;
use scenario::{CommandKind, ComplexPair, Emit, Format, Observable, Scenario, StateKind};

#[derive(Parser, Debug)]
#[command(name = "fockfield", version, about = "Single-mode cavity field: algebra, oracle checks and simulations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the verification battery and write the report.
    Verify(Overrides),
    /// Sample a field expectation over time.
    Series(Overrides),
    /// Decompose a closed-form field expectation into phase-lattice modes.
    Modes(Overrides),
    /// Switch the displacement off along a ramp and report fidelities.
    Transition(Overrides),
    /// Two-slit screen intensity and fringe visibility.
    DoubleSlit(Overrides),
}

/// Every flag overrides the matching key of `--scenario`.
#[derive(Args, Debug, Default)]
struct Overrides {
    /// Scenario JSON; an earlier output file works too.
    #[arg(long)]
    scenario: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Displacement as "re,im".
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<ComplexPair>,
    /// |α| for mode decomposition; combined with --theta.
    #[arg(long)]
    alpha_mag: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<f64>,
    /// Use arg α as θ.
    #[arg(long)]
    theta_from_alpha: bool,
    #[arg(long, value_enum)]
    state: Option<StateKind>,
    #[arg(long)]
    n: Option<u32>,
    /// Highest excitation the verification battery covers.
    #[arg(long)]
    nmax: Option<u32>,
    /// Fock dimension; sized from α and n when absent.
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long, value_parser = by_name::<Convention>)]
    convention: Option<Convention>,
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    normalize: Option<bool>,
    #[arg(long, value_enum)]
    observable: Option<Observable>,
    #[arg(long, value_parser = by_name::<EvalPath>)]
    path: Option<EvalPath>,
    #[arg(long)]
    omega: Option<f64>,
    #[arg(long)]
    c: Option<f64>,
    #[arg(long)]
    eps_tilde: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    z: Option<f64>,
    #[arg(long)]
    periods: Option<usize>,
    #[arg(long)]
    samples_per_period: Option<usize>,
    /// Write the symbolic operator or expectation instead of numbers.
    #[arg(long, value_enum)]
    emit: Option<Emit>,
    #[arg(long, value_parser = by_name::<RampKind>)]
    ramp: Option<RampKind>,
    /// Ramp duration in units of 1/ω.
    #[arg(long)]
    duration: Option<f64>,
    #[arg(long)]
    steps_per_period: Option<usize>,
    #[arg(long)]
    slit_separation: Option<f64>,
    #[arg(long)]
    screen_distance: Option<f64>,
    #[arg(long)]
    screen_half_width: Option<f64>,
    #[arg(long)]
    screen_points: Option<usize>,
    #[arg(long, value_parser = by_name::<FloorOrdering>)]
    floor: Option<FloorOrdering>,
}

/// Parses a value by its serialized name; `-` and `_` are interchangeable.
fn by_name<T: serde::de::DeserializeOwned>(s: &str) -> Result<T, String> {
    serde_json::from_value(serde_json::Value::String(s.replace('-', "_"))).map_err(|e| e.to_string())
}

impl Overrides {
    fn apply(self, command: CommandKind) -> Result<Scenario, CliError> {
        let mut s = match &self.scenario {
            Some(p) => Scenario::from_json(&std::fs::read_to_string(p).map_err(|e| {
                CliError::Invalid(format!("cannot read scenario {}: {e}", p.display()))
            })?)?,
            None => Scenario::default(),
        };
        s.command = command;
        macro_rules! set {
            ($($field:ident),+) => { $(if let Some(v) = self.$field { s.$field = v; })+ };
        }
        macro_rules! set_some {
            ($($field:ident),+) => { $(if self.$field.is_some() { s.$field = self.$field; })+ };
        }
        set!(alpha, n, nmax, normalize, observable, omega, c, eps_tilde, periods, samples_per_period, duration);
        set!(steps_per_period, slit_separation, screen_distance, screen_half_width, screen_points);
        set!(convention, path, ramp, floor);
        set_some!(out, format, state, dim, z, emit, theta);
        if self.alpha.is_some() {
            s.alpha_mag = None;
        }
        set_some!(alpha_mag);
        if self.theta_from_alpha {
            s.theta_from_alpha = true;
            s.theta = None;
        }
        Ok(s)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, overrides) = match cli.command {
        Command::Verify(o) => (CommandKind::Verify, o),
        Command::Series(o) => (CommandKind::Series, o),
        Command::Modes(o) => (CommandKind::Modes, o),
        Command::Transition(o) => (CommandKind::Transition, o),
        Command::DoubleSlit(o) => (CommandKind::DoubleSlit, o),
    };
    let result = overrides.apply(kind).and_then(Scenario::resolve).and_then(|s| {
        eprintln!("{}", serde_json::to_string(&s.echo()).expect("scenario is plain data"));
        commands::run(&s)
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
