use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

/// Growth invariants of compact quantum groups from fusion-ring data.
#[derive(Parser, Debug, Clone, Serialize, Deserialize, PartialEq)]
#[command(name = "qgrowth", version)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,

    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Numerical tolerance; each command has its own default.
    #[arg(long, global = true)]
    pub tol: Option<f64>,

    /// Directory for cached growth tables.
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,

    /// Seed for randomized suites.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Largest number of irreducibles held at once: ball enumeration
    /// (default 10⁷) or the support of an exponential (default 2·10⁴).
    #[arg(long, global = true)]
    pub cap: Option<usize>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    /// CSV for tables, `key=value` lines for reports.
    Text,
    Json,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DimFn {
    Vector,
    Quantum,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RingArgs {
    /// Ring spec, e.g. `su2`, `torus:d=2`, `product:su2+torus:d=1`, or a file.
    #[arg(long)]
    pub ring: String,

    /// Generator as `id:mult` pairs, e.g. `u1:1` or `a:1,b:1,A:1,B:1`.
    #[arg(long = "gen")]
    pub generator: String,
}

#[derive(Subcommand, Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Table of b(u, n) for n = 0..=N.
    Growth {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = DimFn::Vector)]
        dimfn: DimFn,
    },
    /// Fitted growth exponent of b(u, n).
    Dim {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long, default_value_t = 200)]
        n: usize,
        #[arg(long, value_enum, default_value_t = DimFn::Vector)]
        dimfn: DimFn,
        /// Fraction of indices at the tail used for the fit.
        #[arg(long, default_value_t = 0.5)]
        window: f64,
        /// Also require c ≤ b(u,n)/n^γ ≤ D over the tail for this γ.
        #[arg(long)]
        strict: Option<f64>,
    },
    /// Compares quantum and vector dimensions on a ball.
    Kac {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long, default_value_t = 8)]
        n: usize,
    },
    /// Checks the fusion-ring axioms on a sample of irreducibles.
    Validate {
        #[arg(long)]
        ring: String,
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
    /// Fourier-algebra identities on a finite model.
    FourierVerify {
        /// Model file, or a builtin: `s3`, `z<n>`, `s3-dual`, `z<n>-dual`.
        #[arg(long)]
        group: String,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Exponentials, functional calculus and norm domination.
    Dixmier {
        #[command(subcommand)]
        experiment: Dixmier,
    },
}

#[derive(Subcommand, Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "kebab-case")]
pub enum Dixmier {
    /// Fitted exponent of λ ↦ ‖e^{iλf}‖₁.
    GrowthExponent {
        /// A group-dual ring (torus, free, heisenberg, group-dual:…).
        #[arg(long, conflicts_with = "group", required_unless_present = "group")]
        ring: Option<String>,
        /// A finite model (file or builtin).
        #[arg(long)]
        group: Option<String>,
        /// Element file with a `blocks` map.
        #[arg(long)]
        element: PathBuf,
        #[arg(long, default_value_t = 5.0)]
        lambda_min: f64,
        #[arg(long, default_value_t = 100.0)]
        lambda_max: f64,
        #[arg(long, default_value_t = 16)]
        lambda_steps: usize,
        /// Evenly spaced grid instead of geometric.
        #[arg(long)]
        linear: bool,
    },
    /// Compares π(φ{f}) with φ(π(f)) in the regular representation.
    Calculus {
        #[arg(long, default_value = "s3")]
        group: String,
        /// Element file; random self-adjoint elements are drawn when absent.
        #[arg(long)]
        element: Option<PathBuf>,
        #[arg(long, default_value_t = 10)]
        samples: usize,
        /// Support of the bump as `a,b`.
        #[arg(long, default_value = "-3,3.5", allow_hyphen_values = true)]
        bump: String,
    },
    /// Checks ‖ρ(f)‖ ≤ ‖π(f)‖ with π the regular representation.
    Domination {
        #[arg(long, default_value = "s3")]
        group: String,
        #[arg(long, default_value_t = 10)]
        samples: usize,
        /// Group elements to evaluate at (commutative models only);
        /// cocommutative models use the trivial representation.
        #[arg(long)]
        points: Option<String>,
    },
}
