//! `semiriem`: curvature certification, the `su(2,1)` feasibility suite,
//! region scans and geodesic demos from the command line.
//!
//! Exit codes: 0 when every check passes, 2 when a verification fails, 1 on
//! usage, parse or domain errors.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "semiriem", version, about = "Curvature bounds and geodesic completeness checks for semi-Riemannian metrics")]
pub struct Cli {
    /// Worker threads for sampling and scans. Reports do not depend on it.
    #[arg(long, global = true, env = "SEMIRIEM_THREADS", default_value_t = 1)]
    pub workers: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Sample tangent pairs and test g(R(u,v)v,u) >= k (g(u,u)g(v,v) - g(u,v)^2).
    CurvatureCheck(CurvatureArgs),
    /// Exact identities, feasibility and sampled curvature margin of the SU(2,1)/S^1 example.
    Su21(Su21Args),
    /// Feasibility grid over (t, k) as CSV.
    Scan(ScanArgs),
    /// Geodesic and comparison-equation demos.
    #[command(subcommand)]
    Geodesic(GeodesicCommand),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
pub struct Output {
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Args, Debug)]
pub struct CurvatureArgs {
    /// Space spec, e.g. `sphere(2)`, `product:hyperbolic(2)*sphere(2)` or
    /// `warped:hyperbolic(2)*torus(2):alpha=sqrtk*busemann`.
    #[arg(long)]
    pub space: String,
    #[arg(long)]
    pub k: f64,
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Relative tolerance on the margin.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug)]
pub struct Su21Args {
    /// Parsed exactly: decimals and `p/q` fractions.
    #[arg(long, allow_hyphen_values = true)]
    pub t: String,
    #[arg(long, allow_hyphen_values = true)]
    pub k: String,
    /// Random pairs for the sampled curvature margin.
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    /// Random rational pairs for the exact determinant identity.
    #[arg(long, default_value_t = 1000)]
    pub pairs: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug)]
pub struct ScanArgs {
    #[arg(long, default_value = "-0.99", allow_hyphen_values = true)]
    pub t_start: String,
    #[arg(long, default_value = "-0.10", allow_hyphen_values = true)]
    pub t_stop: String,
    #[arg(long, default_value = "0.01")]
    pub t_step: String,
    #[arg(long, default_value = "0.005", allow_hyphen_values = true)]
    pub k_start: String,
    #[arg(long, default_value = "0.5", allow_hyphen_values = true)]
    pub k_stop: String,
    #[arg(long, default_value = "0.005")]
    pub k_step: String,
    /// Sampled pairs per cell for the independent margin column; 0 skips it.
    #[arg(long, default_value_t = 0)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Subcommand, Debug)]
pub enum GeodesicCommand {
    /// Lightlike geodesic of -g_H + e^{2 sqrt(k) H} g_T, integrated towards its breakdown.
    WarpedLightlike(WarpedArgs),
    /// Timelike geodesic of the same metric.
    WarpedTimelike(WarpedArgs),
    /// Euler-Arnold flow on h1 + h2.
    EulerArnold(EulerArgs),
    /// h' = k - h^2 from one or more initial values.
    Riccati(RiccatiArgs),
}

#[derive(Args, Debug)]
pub struct WarpedArgs {
    #[arg(long, default_value_t = 1.0)]
    pub k: f64,
    /// Defaults to 1 (lightlike) or 1/2 (timelike).
    #[arg(long, allow_hyphen_values = true)]
    pub c1: Option<f64>,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub c2: f64,
    /// Base dimension.
    #[arg(long, default_value_t = 2)]
    pub l: usize,
    /// Fiber dimension.
    #[arg(long, default_value_t = 2)]
    pub m: usize,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug)]
pub struct EulerArgs {
    #[arg(long, default_value_t = -0.8, allow_hyphen_values = true)]
    pub t: f64,
    #[arg(long, default_value_t = 100.0)]
    pub u_max: f64,
    /// Coordinates `a1,a2,a3,a4,b1,b2,b3,b4`; only `a2..a4` may be nonzero.
    #[arg(long, default_value = "0,1,0,0,0,0,0,0", allow_hyphen_values = true)]
    pub v1: String,
    /// Coordinates `a1,..,b4`; only `b1..b4` may be nonzero.
    #[arg(long, default_value = "0,0,0,0,1,0,0,0", allow_hyphen_values = true)]
    pub v2: String,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug)]
pub struct RiccatiArgs {
    #[arg(long, default_value_t = 1.0)]
    pub k: f64,
    /// Initial values; repeat the flag for several runs.
    #[arg(long, required = true, allow_hyphen_values = true)]
    pub h0: Vec<f64>,
    #[arg(long, default_value_t = 50.0)]
    pub t_max: f64,
    #[command(flatten)]
    pub output: Output,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(1)
        }
    }
}
