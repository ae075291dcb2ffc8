//! Command-line front end: `fim run <config> [overrides]`.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use fim_core::fim::SolveStatus;
use fim_core::harness::{run, ConfigMap, RunConfig};
use fim_core::{Result, SolverError};

#[derive(Parser)]
#[command(name = "fim", about = "Steady-state Boltzmann-BGK moment solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the benchmark described by a config file.
    Run {
        config: PathBuf,
        /// euler, sis, sisgs, fim-1, fim-2, fim-3 or nmg
        #[arg(long)]
        solver: Option<String>,
        #[arg(long)]
        kn: Option<f64>,
        #[arg(long)]
        order: Option<usize>,
        /// `N` or `N1xN2`
        #[arg(long)]
        grid: Option<String>,
        #[arg(long)]
        max_iters: Option<usize>,
        #[arg(long)]
        outdir: Option<PathBuf>,
    },
}

fn apply_overrides(
    map: &mut ConfigMap,
    solver: Option<&str>,
    kn: Option<f64>,
    order: Option<usize>,
    grid: Option<&str>,
    max_iters: Option<usize>,
    outdir: Option<&PathBuf>,
) -> Result<()> {
    if let Some(s) = solver {
        match s {
            "euler" | "sis" | "sisgs" => {
                map.set("solver.kind", "basic")?;
                map.set("solver.smoother", s)?;
            }
            "fim-1" | "fim-2" | "fim-3" => {
                map.set("solver.kind", "fim")?;
                map.set("solver.variant", s)?;
            }
            "nmg" => {
                map.set("solver.kind", "nmg")?;
                if map.get("nmg.smoother").is_none() {
                    map.set("nmg.smoother", "fim-3")?;
                }
            }
            other => return Err(SolverError::Config(format!("unknown solver `{other}`"))),
        }
    }
    if let Some(kn) = kn {
        map.set("problem.kn", kn.to_string())?;
    }
    if let Some(m) = order {
        map.set("problem.order", m.to_string())?;
    }
    if let Some(g) = grid {
        let (n1, n2) = match g.split_once('x') {
            Some((a, b)) => (a, Some(b)),
            None => (g, None),
        };
        map.set("problem.n1", n1.trim())?;
        if let Some(n2) = n2 {
            map.set("problem.n2", n2.trim())?;
        }
    }
    if let Some(k) = max_iters {
        map.set("solver.max_iters", k.to_string())?;
    }
    if let Some(d) = outdir {
        map.set("output.dir", d.display().to_string())?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Command::Run {
        config,
        solver,
        kn,
        order,
        grid,
        max_iters,
        outdir,
    } = cli.command;
    let result = (|| -> Result<RunConfig> {
        let text = std::fs::read_to_string(&config)?;
        let mut map = ConfigMap::parse(&text)?;
        apply_overrides(
            &mut map,
            solver.as_deref(),
            kn,
            order,
            grid.as_deref(),
            max_iters,
            outdir.as_ref(),
        )?;
        RunConfig::from_map(&map)
    })();
    let cfg = match result {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match run(&cfg) {
        Ok(out) => {
            let r = &out.report;
            let last = r.history.last().map(|h| h.residual).unwrap_or(f64::NAN);
            match &r.status {
                SolveStatus::Converged => {
                    println!("converged in {} iterations, residual {last:.3e}", r.iterations);
                    ExitCode::SUCCESS
                }
                SolveStatus::MaxIters => {
                    println!("stopped after {} iterations, residual {last:.3e}", r.iterations);
                    ExitCode::from(1)
                }
                SolveStatus::Diverged(why) => {
                    eprintln!("diverged at iteration {}: {why}", r.iterations);
                    ExitCode::from(3)
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
