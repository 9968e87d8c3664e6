//! Command-line grammar.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use latspec::{Error, PhysicalParams};

#[derive(Debug, Parser)]
#[command(
    name = "latspec",
    version,
    about = "Discrete spectrum of the 1D lattice Laplacian with a radius-1 perturbation",
    propagate_version = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Region and case label of a parameter set (JSON object).
    Classify(ClassifyArgs),
    /// All eigenvalues outside the band, plus the embedded one (JSON list).
    Solve(SolveArgs),
    /// One eigenvector sampled on the window -N..N (CSV of k, f_k).
    Eigvec(EigvecArgs),
    /// Compare predicted eigenvalues with the truncated-matrix oracle;
    /// exits 1 if any gap exceeds the tolerance.
    Verify(VerifyArgs),
    /// Time evolution of e_site under the truncated operator (CSV of t, site, |f|^2).
    Evolve(EvolveArgs),
    /// Classification raster over the (delta, sigma) plane at fixed alpha (CSV).
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Operator parameters: either physical (`--lambda --lambda1 --mu --mu1`)
/// or normalised (`--alpha --delta --sigma`, optionally with `--lambda`).
#[derive(Debug, Clone, Args)]
pub struct ParamArgs {
    /// Hopping amplitude, > 0.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub lambda: f64,
    /// Change of the two bonds touching site 0.
    #[arg(long, allow_negative_numbers = true, conflicts_with_all = ["alpha", "delta", "sigma"])]
    pub lambda1: Option<f64>,
    /// On-site energy at site 0.
    #[arg(long, allow_negative_numbers = true, conflicts_with_all = ["alpha", "delta", "sigma"])]
    pub mu: Option<f64>,
    /// On-site energy at sites -1 and 1.
    #[arg(long, allow_negative_numbers = true, conflicts_with_all = ["alpha", "delta", "sigma"])]
    pub mu1: Option<f64>,
    /// lambda1 / lambda.
    #[arg(long, allow_negative_numbers = true, requires_all = ["delta", "sigma"])]
    pub alpha: Option<f64>,
    /// mu1 / lambda.
    #[arg(long, allow_negative_numbers = true, requires_all = ["alpha", "sigma"])]
    pub delta: Option<f64>,
    /// (2 lambda1 + mu) / (2 lambda).
    #[arg(long, allow_negative_numbers = true, requires_all = ["alpha", "delta"])]
    pub sigma: Option<f64>,
}

impl ParamArgs {
    pub fn physical(&self) -> Result<PhysicalParams, Error> {
        match (self.alpha, self.delta, self.sigma) {
            (Some(a), Some(d), Some(s)) => {
                let unit = PhysicalParams::from_normalized(a, d, s)?;
                let l = self.lambda;
                PhysicalParams::new(l, unit.lambda1 * l, unit.mu * l, unit.mu1 * l)
            }
            _ => PhysicalParams::new(
                self.lambda,
                self.lambda1.unwrap_or(0.0),
                self.mu.unwrap_or(0.0),
                self.mu1.unwrap_or(0.0),
            ),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Output format; each command has its own default.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write output to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Treat quantities within this distance of a threshold as on it.
    #[arg(long, default_value_t = 0.0)]
    pub tol: f64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct EigvecArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Eigenvalue: a 0-based index into the `solve` list, `kappa`, or `mu`.
    #[arg(long)]
    pub select: String,
    /// Keep only eigenvectors of this parity.
    #[arg(long, value_enum)]
    pub parity: Option<ParityArg>,
    /// Which eigenvector when the eigenvalue has several (0-based, after
    /// the parity filter).
    #[arg(long)]
    pub vector: Option<usize>,
    /// Window half-width N.
    #[arg(long, default_value_t = 200)]
    pub window: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ParityArg {
    Odd,
    Even,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Window half-width N of the truncated matrix.
    #[arg(long, default_value_t = 300)]
    pub window: usize,
    /// Allowed |predicted − oracle|, on top of the truncation allowance
    /// 10·λ·|l(γ)|^(−N).
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct EvolveArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Site carrying the initial state e_site.
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    pub site: i64,
    /// Final time.
    #[arg(long, default_value_t = 10.0)]
    pub t_max: f64,
    /// Number of equally spaced times from 0 to t-max.
    #[arg(long, default_value_t = 11)]
    pub samples: usize,
    /// Window half-width N.
    #[arg(long, default_value_t = 200)]
    pub window: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Fixed alpha = lambda1 / lambda.
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: f64,
    /// dmin:dmax:smin:smax:res
    #[arg(long, allow_hyphen_values = true)]
    pub grid: String,
    #[command(flatten)]
    pub common: Common,
}
