use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use telegame::analysis::{find_threshold, sweep};
use telegame::montecarlo::{
    estimate_fidelities, estimate_fidelities_with_threads, McConfig, DEFAULT_ENSEMBLE_STD,
};
use telegame::{
    build_cm, channel_params, exchange_symmetry_check, f_ab_coop, f_ac_coop, f_noncoop,
    physicality, Error,
};
use telegame_cli::exit;
use telegame_cli::output::{sig12, sweep_csv};
use telegame_cli::verify::{run_all, Hooks};

/// Simulator for the continuous-variable teleportation game with one sender
/// and two receivers.
#[derive(Parser)]
#[command(name = "telegame", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the channel parameters, kappa and validity checks.
    Channel {
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
    },
    /// Tabulate both strategies over a uniform alpha grid as CSV.
    Sweep {
        #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
        alpha_min: f64,
        #[arg(long, default_value_t = 12.0, allow_negative_numbers = true)]
        alpha_max: f64,
        #[arg(long, default_value_t = 200)]
        steps: usize,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Locate the noise level where cooperation starts to pay off.
    Threshold {
        #[arg(long, default_value_t = 1e-9, allow_negative_numbers = true)]
        tol: f64,
        #[arg(long)]
        json: bool,
    },
    /// Estimate all fidelities by sampling protocol trajectories.
    Simulate {
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long, default_value_t = 100_000)]
        shots: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_ENSEMBLE_STD, allow_negative_numbers = true)]
        ensemble_std: f64,
        /// Worker threads; the result does not depend on this.
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Run the full consistency suite and print a pass/fail table.
    Verify,
}

fn invalid(err: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {err}");
    ExitCode::from(exit::INVALID_INPUT as u8)
}

fn code(c: i32) -> ExitCode {
    ExitCode::from(c as u8)
}

fn cmd_channel(alpha: f64) -> ExitCode {
    let params = match channel_params(alpha) {
        Ok(p) => p,
        Err(e) => return invalid(e),
    };
    let state = match build_cm(&params) {
        Ok(s) => s,
        Err(e) => return invalid(e),
    };
    let physical = physicality(state.cov().matrix()).unwrap_or(false);
    let symmetric = exchange_symmetry_check(&state).unwrap_or(false);
    println!(
        "alpha={} beta={} gamma={} delta={} kappa={} physical={physical} exchange_symmetric={symmetric}",
        params.alpha,
        params.beta,
        params.gamma,
        params.delta,
        params.kappa()
    );
    code(exit::OK)
}

fn cmd_sweep(alpha_min: f64, alpha_max: f64, steps: usize, out: Option<PathBuf>) -> ExitCode {
    let rows = match sweep(alpha_min, alpha_max, steps) {
        Ok(r) => r,
        Err(e) => return invalid(e),
    };
    let csv = sweep_csv(&rows);
    match out {
        Some(path) => {
            if let Err(e) = std::fs::write(&path, csv) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return code(exit::IO);
            }
        }
        None => print!("{csv}"),
    }
    code(exit::OK)
}

fn cmd_threshold(tol: f64, as_json: bool) -> ExitCode {
    let t = match find_threshold(tol) {
        Ok(t) => t,
        Err(e @ Error::InvalidInput(_)) => return invalid(e),
        Err(e) => {
            eprintln!("error: {e}");
            return code(exit::SOLVER);
        }
    };
    if as_json {
        println!(
            "{}",
            serde_json::to_string(&t).expect("threshold serializes")
        );
    } else {
        println!(
            "alpha_th={} f_at_threshold={} iterations={} residual={:e}",
            sig12(t.alpha_th),
            sig12(t.f_at_threshold),
            t.iterations,
            t.residual
        );
    }
    code(exit::OK)
}

fn cmd_simulate(config: McConfig, threads: Option<usize>, as_json: bool) -> ExitCode {
    let est = match threads {
        Some(n) => estimate_fidelities_with_threads(&config, n),
        None => estimate_fidelities(&config),
    };
    let est = match est {
        Ok(e) => e,
        Err(e) => return invalid(e),
    };
    let alpha = config.alpha;
    let closed = [
        (
            "f_tr",
            f_noncoop(alpha).expect("validated alpha"),
            est.f_tr_hat,
            est.stderr_tr,
        ),
        (
            "f_ab",
            f_ab_coop(alpha).expect("validated alpha"),
            est.f_ab_hat,
            est.stderr_ab,
        ),
        (
            "f_ac",
            f_ac_coop(alpha).expect("validated alpha"),
            est.f_ac_hat,
            est.stderr_ac,
        ),
    ];
    let z = |exact: f64, hat: f64, se: f64| {
        if se > 0.0 {
            (hat - exact) / se
        } else if hat == exact {
            0.0
        } else {
            f64::INFINITY
        }
    };
    let consistent = closed
        .iter()
        .all(|&(_, exact, hat, se)| z(exact, hat, se).abs() <= 3.0);
    if as_json {
        let v = json!({
            "alpha": alpha,
            "shots": config.shots,
            "seed": config.seed,
            "ensemble_std": config.input_ensemble_std,
            "f_tr": closed[0].1,
            "f_ab": closed[1].1,
            "f_ac": closed[2].1,
            "f_tr_hat": est.f_tr_hat,
            "f_ab_hat": est.f_ab_hat,
            "f_ac_hat": est.f_ac_hat,
            "stderr_tr": est.stderr_tr,
            "stderr_ab": est.stderr_ab,
            "stderr_ac": est.stderr_ac,
            "consistent": consistent,
        });
        println!("{v}");
    } else {
        println!(
            "alpha={alpha} shots={} seed={} ensemble_std={}",
            config.shots, config.seed, config.input_ensemble_std
        );
        println!(
            "{:<6} {:>16} {:>16} {:>12} {:>7}  status",
            "", "closed_form", "estimate", "stderr", "z"
        );
        for &(name, exact, hat, se) in &closed {
            let zz = z(exact, hat, se);
            let status = if zz.abs() <= 3.0 {
                "ok"
            } else {
                "OFF >3 sigma"
            };
            println!(
                "{name:<6} {:>16} {:>16} {:>12.3e} {:>7.2}  {status}",
                sig12(exact),
                sig12(hat),
                se,
                zz
            );
        }
    }
    code(if consistent {
        exit::OK
    } else {
        exit::STATISTICS
    })
}

fn cmd_verify() -> ExitCode {
    let results = run_all(&Hooks::default());
    let width = results.iter().map(|r| r.name.len()).max().unwrap_or(0);
    for r in &results {
        match &r.outcome {
            Ok(detail) => println!("PASS  {:<width$}  {detail}", r.name),
            Err(detail) => println!("FAIL  {:<width$}  {detail}", r.name),
        }
    }
    let failed: Vec<_> = results
        .iter()
        .filter(|r| !r.passed())
        .map(|r| r.name)
        .collect();
    println!("{} checks, {} failed", results.len(), failed.len());
    if failed.is_empty() {
        code(exit::OK)
    } else {
        eprintln!("failed: {}", failed.join(", "));
        code(exit::VERIFY_FAILED)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Channel { alpha } => cmd_channel(alpha),
        Command::Sweep {
            alpha_min,
            alpha_max,
            steps,
            out,
        } => cmd_sweep(alpha_min, alpha_max, steps, out),
        Command::Threshold { tol, json } => cmd_threshold(tol, json),
        Command::Simulate {
            alpha,
            shots,
            seed,
            ensemble_std,
            threads,
            json,
        } => cmd_simulate(
            McConfig {
                shots,
                seed,
                alpha,
                input_ensemble_std: ensemble_std,
            },
            threads,
            json,
        ),
        Command::Verify => cmd_verify(),
    }
}
