mod commands;
mod output;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use polyvar::geometry::Caps;
use polyvar::Error;

use crate::output::Format;

#[derive(Debug, Parser)]
#[command(name = "polyvar", version, about = "Second-order analysis of polyhedral functions in exact arithmetic")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    #[command(flatten)]
    pub caps: CapArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct CapArgs {
    /// Largest ambient dimension for polyhedral conversions.
    #[arg(long, global = true)]
    pub max_dim: Option<usize>,
    /// Largest number of constraints or generators per conversion.
    #[arg(long, global = true)]
    pub max_constraints: Option<usize>,
    /// Largest number of facets for face enumeration.
    #[arg(long, global = true)]
    pub max_face_halfspaces: Option<usize>,
    /// Largest number of pieces plus constraints for the prox QP.
    #[arg(long, global = true)]
    pub max_qp_terms: Option<usize>,
}

impl CapArgs {
    fn install(&self) {
        let mut caps = Caps::current();
        if let Some(v) = self.max_dim {
            caps.max_dim = v;
        }
        if let Some(v) = self.max_constraints {
            caps.max_constraints = v;
        }
        if let Some(v) = self.max_face_halfspaces {
            caps.max_face_halfspaces = v;
        }
        if let Some(v) = self.max_qp_terms {
            caps.max_qp_terms = v;
        }
        caps.install();
    }
}

/// A polyhedral function file and a base pair.
#[derive(Debug, Args)]
pub struct PairArgs {
    /// Function file: {"m": .., "pieces": [..], "constraints": [..]}.
    pub function: String,
    /// Point z, comma separated rationals such as "0,1/2".
    #[arg(long, allow_hyphen_values = true)]
    pub z: String,
    /// Subgradient lambda.
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: String,
}

#[derive(Debug, Args)]
pub struct ProxArgs {
    pub function: String,
    /// Point x.
    #[arg(long, allow_hyphen_values = true)]
    pub x: String,
    /// Prox parameter r > 0.
    #[arg(long, default_value = "1")]
    pub r: String,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Value g(z).
    Eval {
        function: String,
        #[arg(long, allow_hyphen_values = true)]
        z: String,
    },
    /// Subdifferential at z with the active index sets.
    Subdiff {
        function: String,
        #[arg(long, allow_hyphen_values = true)]
        z: String,
    },
    /// Critical cone K_g(z, lambda).
    Critcone(PairArgs),
    /// Regularity flags at (z, lambda) and the certified reduction radius.
    Classify {
        #[command(flatten)]
        pair: PairArgs,
        #[command(flatten)]
        sampling: SampleArgs,
    },
    /// Proximal point, smoothness class and Jacobian when smooth.
    Prox(ProxArgs),
    /// Moreau envelope value, gradient and Hessian when smooth.
    Envelope(ProxArgs),
    /// Nondegeneracy and metric regularity of a generalized equation at x.
    GeneqAnalyze {
        /// Problem file: {"g": {..}, "psi": [expr, ..]}.
        problem: String,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[command(flatten)]
        sampling: SampleArgs,
        /// Radius of the metric regularity probe.
        #[arg(long, default_value = "1/8")]
        radius: String,
    },
    /// Solution of y ∈ psi(x) + ∂g(x) near a known solution x0 for y = 0.
    GeneqSolve {
        problem: String,
        #[arg(long, allow_hyphen_values = true)]
        x0: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
        #[command(flatten)]
        sampling: SampleArgs,
        #[arg(long, default_value = "1/8")]
        radius: String,
    },
    /// Regularity of the KKT system of min phi(x) + g(Phi(x)) at (x, lambda).
    KktAnalyze {
        /// Problem file: {"n": .., "phi": expr, "Phi": [expr, ..], "g": {..}}.
        problem: String,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Checks of the theory on one pair.
    Verify {
        #[arg(value_enum)]
        check: VerifyCheck,
        #[command(flatten)]
        pair: PairArgs,
        #[command(flatten)]
        sampling: SampleArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VerifyCheck {
    /// Reduction to the normal-cone graph of the critical cone.
    Reduction,
    /// Critical cone of g against the polar critical cone of the conjugate.
    Polarity,
    /// Realization of every face pair of the critical cone by a nearby pair.
    FacePairs,
    /// Agreement of the five regularity flags.
    Flags,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::CapExceeded { .. } => 3,
        Error::Verification(_) | Error::CertificationFailed(_) => 4,
        _ => 2,
    }
}

/// A closed pipe on stdout is not an error of the analysis.
fn emit(text: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    cli.caps.install();
    match commands::run(&cli.command) {
        Ok(report) => {
            emit(&output::render(&report, cli.format));
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            let name = format!("{e:?}");
            let kind = name.split([' ', '(', '{']).next().unwrap_or("Error");
            let report = serde_json::json!({"error": kind, "message": e.to_string()});
            emit(&output::render(&report, cli.format));
            ExitCode::from(exit_code(&e))
        }
    }
}
