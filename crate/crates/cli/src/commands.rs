//! Command runners. Each returns `Ok(true)` on pass and `Ok(false)` on a
//! verification failure; errors map to exit code 1.

use std::fs;
use std::path::Path;

use serde::Serialize;
use serde_json::json;

use semiriem::chart::{check_r_ge_k, BoxSampler, SamplingConfig};
use semiriem::geodesic::{
    euler_arnold_integrate, riccati_experiment, warped_causal_run, CausalKind, IntegratorConfig, Trajectory,
};
use semiriem::spaces::{build_space, SpaceSpec};
use semiriem::su21::{
    curvature_quartic, eta, exact_suite, feasible, grid_axis, gram_direct, parse_rational, sampled_margin, scan_region,
    AlgebraElement, Exact, ModelParams, SampleConfig,
};

use crate::{Cli, Command, CurvatureArgs, EulerArgs, Format, GeodesicCommand, Output, RiccatiArgs, ScanArgs, Su21Args, WarpedArgs};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Library(#[from] semiriem::error::Error),
    #[error("cannot write {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
}

type Result<T> = std::result::Result<T, CliError>;

pub fn run(cli: &Cli) -> Result<bool> {
    if cli.workers == 0 {
        return Err(CliError::Usage("--workers must be at least 1".into()));
    }
    match &cli.command {
        Command::CurvatureCheck(args) => curvature_check(args, cli.workers),
        Command::Su21(args) => su21(args, cli.workers),
        Command::Scan(args) => scan(args, cli.workers),
        Command::Geodesic(GeodesicCommand::WarpedLightlike(args)) => warped(args, CausalKind::Lightlike),
        Command::Geodesic(GeodesicCommand::WarpedTimelike(args)) => warped(args, CausalKind::Timelike),
        Command::Geodesic(GeodesicCommand::EulerArnold(args)) => euler_arnold(args),
        Command::Geodesic(GeodesicCommand::Riccati(args)) => riccati(args),
    }
}

fn emit(output: &Output, content: &str) -> Result<()> {
    match &output.out {
        Some(path) => write_file(path, content),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn write_file(path: &Path, content: &str) -> Result<()> {
    fs::write(path, content).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn csv_row(fields: &[String]) -> String {
    let mut line = fields.join(",");
    line.push('\n');
    line
}

fn curvature_check(args: &CurvatureArgs, workers: usize) -> Result<bool> {
    let spec: SpaceSpec = args.space.parse()?;
    let chart = build_space(&spec, Some(args.k))?;
    let config = SamplingConfig { n_samples: args.samples, seed: args.seed, tol: args.tol, workers };
    let report = check_r_ge_k(&chart, &BoxSampler, args.k, &config)?;
    let content = match args.output.format.unwrap_or(Format::Json) {
        Format::Json => to_json(&json!({ "space": spec.to_string(), "report": report })),
        Format::Csv => {
            let header = ["space", "k", "seed", "samples", "tolerance", "min_margin", "min_scaled_margin", "passed"];
            let row = [
                format!("\"{spec}\""),
                report.k.to_string(),
                report.seed.to_string(),
                report.samples.to_string(),
                format!("{:e}", report.tolerance),
                format!("{:e}", report.min_margin),
                format!("{:e}", report.min_scaled_margin),
                report.passed.to_string(),
            ];
            csv_row(&header.map(String::from)) + &csv_row(&row)
        }
    };
    emit(&args.output, &content)?;
    Ok(report.passed)
}

fn su21(args: &Su21Args, workers: usize) -> Result<bool> {
    let params = ModelParams::parse(&args.t, &args.k)?;
    let exact = exact_suite(args.pairs, args.seed, params.t(), workers)?;
    let feasibility = feasible(&params);
    let margin = sampled_margin(&params, &SampleConfig { samples: args.samples, seed: args.seed, workers }, args.tol)?;
    // Exact margin on the pair (f1, f2), where only the h1 part of the
    // bracket survives.
    let (f1, f2) = (Exact::f(1), Exact::f(2));
    let quartic = curvature_quartic(&f1, &f2, params.t())?;
    let gram = gram_direct(&f1, &f2, params.t());
    let witness_margin = quartic.clone() - params.k().clone() * gram.clone();
    let passed = exact.passed && feasibility.feasible && margin.passed;
    let report = json!({
        "t": args.t,
        "k": args.k,
        "exact": exact,
        "feasibility": feasibility,
        "eta": eta(params.t_f64())?,
        "lower_k_bound": (1.0 + params.t_f64()) / 8.0,
        "sampled_margin": margin,
        "f1_f2": { "quartic": quartic.to_string(), "gram": gram.to_string(), "margin": witness_margin.to_string() },
        "passed": passed,
    });
    let content = match args.output.format.unwrap_or(Format::Json) {
        Format::Json => to_json(&report),
        Format::Csv => {
            let header = ["t", "k", "exact", "ineq1", "ineq2", "ineq3", "ineq4", "feasible", "min_margin", "passed"];
            let [i1, i2, i3, i4] = feasibility.ineq;
            let row = [
                args.t.clone(),
                args.k.clone(),
                exact.passed.to_string(),
                i1.to_string(),
                i2.to_string(),
                i3.to_string(),
                i4.to_string(),
                feasibility.feasible.to_string(),
                format!("{:e}", margin.min_margin),
                passed.to_string(),
            ];
            csv_row(&header.map(String::from)) + &csv_row(&row)
        }
    };
    emit(&args.output, &content)?;
    Ok(passed)
}

fn scan(args: &ScanArgs, workers: usize) -> Result<bool> {
    let axis = |start: &str, stop: &str, step: &str| -> Result<_> {
        Ok(grid_axis(&parse_rational(start)?, &parse_rational(stop)?, &parse_rational(step)?)?)
    };
    let t_grid = axis(&args.t_start, &args.t_stop, &args.t_step)?;
    let k_grid = axis(&args.k_start, &args.k_stop, &args.k_step)?;
    let grid = scan_region(&t_grid, &k_grid, &SampleConfig { samples: args.samples, seed: args.seed, workers })?;
    let range = grid.feasible_t_range();
    // Feasible cells must sit strictly left of t = -3/5.
    let passed = range.is_none_or(|(_, hi)| hi < -0.6);
    let content = match args.output.format.unwrap_or(Format::Csv) {
        Format::Csv => grid.to_csv(),
        Format::Json => to_json(&grid),
    };
    emit(&args.output, &content)?;
    match range {
        Some((lo, hi)) => eprintln!("feasible t range: [{lo}, {hi}] ({} cells)", grid.cells.iter().filter(|c| c.feasible).count()),
        None => eprintln!("feasible t range: none"),
    }
    Ok(passed)
}

/// Trajectory CSV with the report as its JSON header line, or the report
/// alone.
fn trajectory_output<T: Serialize>(output: &Output, report: &T, traj: &Trajectory) -> Result<()> {
    let header = serde_json::to_value(report).expect("reports serialize");
    let content = match output.format.unwrap_or(Format::Csv) {
        Format::Csv => traj.to_csv(&header),
        Format::Json => to_json(&header),
    };
    emit(output, &content)
}

fn warped(args: &WarpedArgs, kind: CausalKind) -> Result<bool> {
    let c1 = args.c1.unwrap_or(kind.default_c1());
    let cfg = IntegratorConfig::default();
    let run = warped_causal_run(args.l, args.m, args.k, kind, c1, args.c2, &cfg)?;
    let report = json!({ "l": args.l, "m": args.m, "integrator": cfg, "run": run });
    trajectory_output(&args.output, &report, &run.trajectory)?;
    Ok(run.passed)
}

fn parse_element(s: &str) -> Result<AlgebraElement<f64>> {
    let x: Exact = s.parse()?;
    Ok(x.to_f64())
}

fn euler_arnold(args: &EulerArgs) -> Result<bool> {
    let v1 = parse_element(&args.v1)?;
    let v2 = parse_element(&args.v2)?;
    let cfg = IntegratorConfig::default();
    let run = euler_arnold_integrate(&v1, &v2, args.t, args.u_max, &cfg)?;
    let passed = run.status.is_completed() && run.gamma1_drift <= 1e-8 && run.norm_drift <= 1e-6;
    let report = json!({ "integrator": cfg, "run": run, "passed": passed });
    trajectory_output(&args.output, &report, &run.trajectory)?;
    Ok(passed)
}

fn riccati(args: &RiccatiArgs) -> Result<bool> {
    let cfg = IntegratorConfig::default();
    let report = riccati_experiment(args.k, &args.h0, args.t_max, &cfg)?;
    let content = match args.output.format.unwrap_or(Format::Json) {
        Format::Json => to_json(&report),
        Format::Csv => {
            let mut out = csv_row(&["h0", "direction", "status", "sup_abs", "breakdown_estimate", "closed_form_error"].map(String::from));
            for run in &report.runs {
                for (dir, leg) in [("forward", &run.forward), ("backward", &run.backward)] {
                    let status = match leg.status {
                        s if s.is_completed() => "completed",
                        semiriem::geodesic::Status::BlowUp { .. } => "blowup",
                        _ => "step_underflow",
                    };
                    out += &csv_row(&[
                        run.h0.to_string(),
                        dir.to_string(),
                        status.to_string(),
                        format!("{:e}", leg.sup_abs),
                        leg.breakdown_estimate.map(|b| b.to_string()).unwrap_or_default(),
                        format!("{:e}", leg.closed_form_error),
                    ]);
                }
            }
            out
        }
    };
    emit(&args.output, &content)?;
    Ok(report.passed)
}
