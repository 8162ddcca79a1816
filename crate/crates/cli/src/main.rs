//! `lpbm`: stability checks for L_p mixed-volume and Brunn-Minkowski-Firey
//! inequalities, plus the sharpened Jensen inequality they rest on.
//!
//! Exit codes: 0 when every checked margin clears its tolerance, 1 when an
//! inequality check fails beyond tolerance, 2 on input or usage errors.
//! Reports are written atomically; all floats print with 17 significant
//! digits so identical configurations produce byte-identical output.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use lpbm_core::geom::{Body, Polygon};
use lpbm_core::jensen::{psi_grid_min, stability_check, DiscreteDistribution};
use lpbm_core::mixed::{
    check_theorem_1, check_theorem_2, mixed_volume_p, proof_chain, ProofChainReport,
    StabilityReport,
};
use lpbm_core::report::{csv_row, fmt_f64, write_atomic};
use lpbm_core::sample::{instance_rng, instance_seed, random_polygon, DEFAULT_SEED};
use lpbm_core::sharpness::{log_spaced, sharpness_scan};

#[derive(Parser)]
#[command(
    name = "lpbm",
    version,
    about = "Stability margins for L_p mixed-volume, Brunn-Minkowski-Firey, and sharpened Jensen inequalities",
    long_about = "Loads convex bodies and discrete distributions from JSON, evaluates the \
                  stability inequalities of L_p Brunn-Minkowski theory, and emits margin \
                  reports as JSON or CSV.\n\n\
                  Body JSON: {\"type\":\"polygon\",\"vertices\":[[x,y],...]} | \
                  {\"type\":\"ball\",\"center\":[x,y],\"radius\":r} | \
                  {\"type\":\"dilate\",\"lambda\":s,\"body\":{...}} | \
                  {\"type\":\"lp_sum\",\"p\":q,\"left\":{...},\"right\":{...}}\n\
                  Distribution JSON: {\"weights\":[...],\"values\":[...]}\n\n\
                  Randomized suites default to a fixed seed (overridable via --seed or the \
                  LPBM_SEED environment variable), so default runs are reproducible."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Check the sharpened Jensen/Tsallis inequality on one distribution.
    JensenCheck {
        /// Entropy order (any positive real; 1 selects the Shannon case).
        #[arg(long)]
        p: f64,
        /// Distribution JSON file.
        input: PathBuf,
        #[arg(long, default_value_t = 1e-10)]
        tolerance: f64,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },

    /// Brute-force grid minimum of the two-parameter reduction.
    PsiScan {
        /// Exponent (positive, not equal to 1).
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 99)]
        a_steps: usize,
        #[arg(long, default_value_t = 1000)]
        t_steps: usize,
        #[arg(long, default_value_t = 1e-10)]
        tolerance: f64,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },

    /// Print V_p(K, L) for two bodies (17 significant digits).
    MixedVolume {
        #[arg(long)]
        p: f64,
        /// Body JSON for K (snapshotted to a polygon if not already one).
        k: PathBuf,
        /// Body JSON for L.
        l: PathBuf,
        #[arg(long, default_value_t = 4096)]
        n_dirs: usize,
    },

    /// Mixed-volume stability margins on random polygon pairs.
    VerifyTheorem1 {
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        #[arg(long, default_value_t = 100)]
        instances: u64,
        #[arg(long, env = "LPBM_SEED")]
        seed: Option<u64>,
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
        /// Fault-injection knob: scales the bound side before the margin is
        /// taken, so an inflated bound exercises the failure exit path.
        #[arg(long, default_value_t = 1.0)]
        rhs_scale: f64,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },

    /// Brunn-Minkowski-Firey stability margins on random polygon pairs.
    VerifyTheorem2 {
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        #[arg(long, default_value_t = 20)]
        instances: u64,
        #[arg(long, default_value_t = 4096)]
        n_dirs: usize,
        #[arg(long, env = "LPBM_SEED")]
        seed: Option<u64>,
        /// Margins must clear -max(tolerance, 3 x discretization estimate).
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
        #[arg(long, default_value_t = 1.0)]
        rhs_scale: f64,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },

    /// Per-step margins of the stability derivation, on random pairs or on
    /// two explicit bodies.
    ProofChain {
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        /// Body JSON for K (runs the random suite when omitted).
        k: Option<PathBuf>,
        /// Body JSON for L.
        l: Option<PathBuf>,
        #[arg(long, default_value_t = 100)]
        instances: u64,
        #[arg(long, env = "LPBM_SEED")]
        seed: Option<u64>,
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
        #[arg(long, default_value_t = 4096)]
        n_dirs: usize,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },

    /// Translated-ball scan: quadratic scaling of deficit and asymmetry.
    SharpnessScan {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        #[arg(long, default_value_t = 1e-3)]
        eps_min: f64,
        #[arg(long, default_value_t = 1e-1)]
        eps_max: f64,
        #[arg(long, default_value_t = 8)]
        per_decade: usize,
        /// Also evaluate the Firey deficit on the planar engine (n = 2 only).
        #[arg(long)]
        include_beta: bool,
        #[arg(long, default_value_t = 4096)]
        n_dirs: usize,
        /// CSV destination (stdout when omitted).
        #[arg(long)]
        output: Option<PathBuf>,
        /// JSON summary destination (stdout when omitted).
        #[arg(long)]
        summary: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn load_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("failed to parse {}: {e}", path.display()))
}

fn emit(output: &Option<PathBuf>, contents: &str) -> Result<(), String> {
    match output {
        Some(path) => write_atomic(path, contents)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}

fn as_polygon(body: Body, n_dirs: usize) -> Result<Polygon, String> {
    match body {
        Body::Polygon(p) => Ok(p),
        other => other.support_polytope(n_dirs).map_err(|e| e.to_string()),
    }
}

#[derive(Serialize)]
struct SeededReport<T: Serialize> {
    seed: u64,
    #[serde(flatten)]
    report: T,
}

fn stability_csv(rows: &[(u64, StabilityReport)]) -> String {
    let mut out = String::from("seed,p,lhs,rhs,margin,asymmetry,sigma,n_dirs\n");
    for (seed, r) in rows {
        out.push_str(&csv_row(&[
            seed.to_string(),
            fmt_f64(r.p),
            fmt_f64(r.lhs),
            fmt_f64(r.rhs),
            fmt_f64(r.margin),
            fmt_f64(r.asymmetry),
            fmt_f64(r.sigma),
            r.n_dirs.to_string(),
        ]));
        out.push('\n');
    }
    out
}

fn stability_json(rows: Vec<(u64, StabilityReport)>) -> Result<String, String> {
    let seeded: Vec<SeededReport<StabilityReport>> = rows
        .into_iter()
        .map(|(seed, report)| SeededReport { seed, report })
        .collect();
    serde_json::to_string_pretty(&seeded).map_err(|e| e.to_string())
}

fn apply_rhs_scale(mut r: StabilityReport, scale: f64) -> StabilityReport {
    r.rhs *= scale;
    r.margin = r.lhs - r.rhs;
    r
}

const CHAIN_COLUMNS: &str = "seed,p,gamma,gamma_p,delta_p,vol_k1,vol_k2,jensen_step,\
support_gap_step,hull_mixed_step,hull_volume_cap,hull_mixed_capped,hull_union_step,\
set_difference_bound,min_margin";

fn chain_csv(rows: &[(u64, ProofChainReport)]) -> String {
    let mut out = String::from(CHAIN_COLUMNS);
    out.push('\n');
    for (seed, r) in rows {
        let mut fields = vec![
            seed.to_string(),
            fmt_f64(r.p),
            fmt_f64(r.gamma),
            fmt_f64(r.gamma_p),
            fmt_f64(r.delta_p),
            fmt_f64(r.vol_k1),
            fmt_f64(r.vol_k2),
        ];
        fields.extend(r.steps.as_named().iter().map(|&(_, v)| fmt_f64(v)));
        fields.push(fmt_f64(r.min_margin()));
        out.push_str(&csv_row(&fields));
        out.push('\n');
    }
    out
}

fn chain_passes(r: &ProofChainReport, tolerance: f64) -> bool {
    r.min_margin() >= -tolerance
        && r.gamma <= 1.0 + tolerance
        && r.gamma >= r.p / (r.p + r.delta_p) - tolerance
}

fn run(cli: Cli) -> Result<bool, String> {
    match cli.command {
        Command::JensenCheck {
            p,
            input,
            tolerance,
            output,
            format,
        } => {
            let dist: DiscreteDistribution = load_json(&input)?;
            let report = stability_check(&dist, p).map_err(|e| e.to_string())?;
            let text = match format {
                Format::Json => {
                    let mut t = serde_json::to_string_pretty(&report).map_err(|e| e.to_string())?;
                    t.push('\n');
                    t
                }
                Format::Csv => format!(
                    "p,deficit,deviation,c_p,margin\n{}\n",
                    csv_row(&[
                        fmt_f64(report.p),
                        fmt_f64(report.deficit),
                        fmt_f64(report.deviation),
                        fmt_f64(report.c_p),
                        fmt_f64(report.margin),
                    ])
                ),
            };
            emit(&output, &text)?;
            Ok(report.margin >= -tolerance)
        }

        Command::PsiScan {
            p,
            a_steps,
            t_steps,
            tolerance,
            output,
            format,
        } => {
            let scan = psi_grid_min(p, a_steps, t_steps).map_err(|e| e.to_string())?;
            let text = match format {
                Format::Json => {
                    let mut t = serde_json::to_string_pretty(&scan).map_err(|e| e.to_string())?;
                    t.push('\n');
                    t
                }
                Format::Csv => format!(
                    "p,min,argmin_a,argmin_t,t_step\n{}\n",
                    csv_row(&[
                        fmt_f64(scan.p),
                        fmt_f64(scan.min),
                        fmt_f64(scan.argmin_a),
                        fmt_f64(scan.argmin_t),
                        fmt_f64(scan.t_step),
                    ])
                ),
            };
            emit(&output, &text)?;
            Ok(scan.min >= -tolerance)
        }

        Command::MixedVolume { p, k, l, n_dirs } => {
            let k_poly = as_polygon(load_json(&k)?, n_dirs)?;
            let l_body: Body = load_json(&l)?;
            let v = mixed_volume_p(&k_poly, &l_body, p).map_err(|e| e.to_string())?;
            println!("{}", fmt_f64(v));
            Ok(true)
        }

        Command::VerifyTheorem1 {
            p,
            instances,
            seed,
            tolerance,
            rhs_scale,
            output,
            format,
        } => {
            let base = seed.unwrap_or(DEFAULT_SEED);
            let rows: Vec<(u64, StabilityReport)> = (0..instances)
                .into_par_iter()
                .map(|i| {
                    let mut rng = instance_rng(base, i);
                    let k = random_polygon(&mut rng);
                    let l = random_polygon(&mut rng);
                    check_theorem_1(&k, &l, p)
                        .map(|r| (instance_seed(base, i), apply_rhs_scale(r, rhs_scale)))
                })
                .collect::<Result<_, _>>()
                .map_err(|e| e.to_string())?;
            let pass = rows.iter().all(|(_, r)| r.margin >= -tolerance);
            let text = match format {
                Format::Csv => stability_csv(&rows),
                Format::Json => stability_json(rows)?,
            };
            emit(&output, &text)?;
            Ok(pass)
        }

        Command::VerifyTheorem2 {
            p,
            instances,
            n_dirs,
            seed,
            tolerance,
            rhs_scale,
            output,
            format,
        } => {
            let base = seed.unwrap_or(DEFAULT_SEED);
            let rows: Vec<(u64, StabilityReport)> = (0..instances)
                .into_par_iter()
                .map(|i| {
                    let mut rng = instance_rng(base, i);
                    let k = random_polygon(&mut rng);
                    let l = random_polygon(&mut rng);
                    check_theorem_2(&k, &l, p, n_dirs)
                        .map(|r| (instance_seed(base, i), apply_rhs_scale(r, rhs_scale)))
                })
                .collect::<Result<_, _>>()
                .map_err(|e| e.to_string())?;
            let pass = rows
                .iter()
                .all(|(_, r)| r.margin >= -tolerance.max(3.0 * r.est_error));
            let text = match format {
                Format::Csv => stability_csv(&rows),
                Format::Json => stability_json(rows)?,
            };
            emit(&output, &text)?;
            Ok(pass)
        }

        Command::ProofChain {
            p,
            k,
            l,
            instances,
            seed,
            tolerance,
            n_dirs,
            output,
            format,
        } => match (k, l) {
            (Some(k_path), Some(l_path)) => {
                let k_poly = as_polygon(load_json(&k_path)?, n_dirs)?;
                let l_poly = as_polygon(load_json(&l_path)?, n_dirs)?;
                let report = proof_chain(&k_poly, &l_poly, p).map_err(|e| e.to_string())?;
                let pass = chain_passes(&report, tolerance);
                let text = match format {
                    Format::Json => {
                        let mut t =
                            serde_json::to_string_pretty(&report).map_err(|e| e.to_string())?;
                        t.push('\n');
                        t
                    }
                    Format::Csv => chain_csv(&[(0, report)]),
                };
                emit(&output, &text)?;
                Ok(pass)
            }
            (None, None) => {
                let base = seed.unwrap_or(DEFAULT_SEED);
                let rows: Vec<(u64, ProofChainReport)> = (0..instances)
                    .into_par_iter()
                    .map(|i| {
                        let mut rng = instance_rng(base, i);
                        let k = random_polygon(&mut rng);
                        let l = random_polygon(&mut rng);
                        proof_chain(&k, &l, p).map(|r| (instance_seed(base, i), r))
                    })
                    .collect::<Result<_, _>>()
                    .map_err(|e| e.to_string())?;
                let pass = rows.iter().all(|(_, r)| chain_passes(r, tolerance));
                let text = match format {
                    Format::Csv => chain_csv(&rows),
                    Format::Json => {
                        let seeded: Vec<SeededReport<ProofChainReport>> = rows
                            .into_iter()
                            .map(|(seed, report)| SeededReport { seed, report })
                            .collect();
                        let mut t =
                            serde_json::to_string_pretty(&seeded).map_err(|e| e.to_string())?;
                        t.push('\n');
                        t
                    }
                };
                emit(&output, &text)?;
                Ok(pass)
            }
            _ => Err("proof-chain needs either both body files or neither".into()),
        },

        Command::SharpnessScan {
            n,
            p,
            eps_min,
            eps_max,
            per_decade,
            include_beta,
            n_dirs,
            output,
            summary,
        } => {
            if !(eps_min > 0.0 && eps_min < eps_max) {
                return Err(format!(
                    "need 0 < eps_min < eps_max, got {eps_min} and {eps_max}"
                ));
            }
            let grid = log_spaced(eps_min, eps_max, per_decade);
            let scan =
                sharpness_scan(n, p, &grid, include_beta, n_dirs).map_err(|e| e.to_string())?;

            let mut csv = String::from("n,p,epsilon,delta_p,asymmetry,asymmetry_sq,beta_p\n");
            for row in &scan.rows {
                csv.push_str(&csv_row(&[
                    scan.n.to_string(),
                    fmt_f64(scan.p),
                    fmt_f64(row.epsilon),
                    fmt_f64(row.delta_p),
                    fmt_f64(row.asymmetry),
                    fmt_f64(row.asymmetry_sq),
                    row.beta_p.map(fmt_f64).unwrap_or_default(),
                ]));
                csv.push('\n');
            }
            emit(&output, &csv)?;

            #[derive(Serialize)]
            struct Summary<'a> {
                n: usize,
                p: f64,
                fitted_slopes: &'a lpbm_core::sharpness::FittedSlopes,
                ratio_limits: &'a lpbm_core::sharpness::RatioLimits,
            }
            let mut text = serde_json::to_string_pretty(&Summary {
                n: scan.n,
                p: scan.p,
                fitted_slopes: &scan.fitted_slopes,
                ratio_limits: &scan.ratio_limits,
            })
            .map_err(|e| e.to_string())?;
            text.push('\n');
            emit(&summary, &text)?;

            let slopes = &scan.fitted_slopes;
            Ok((slopes.delta_p - 2.0).abs() <= 0.05
                && (slopes.asymmetry_sq - 2.0).abs() <= 0.05
                && slopes.beta_p.is_none_or(|b| (b - 2.0).abs() <= 0.1))
        }
    }
}
