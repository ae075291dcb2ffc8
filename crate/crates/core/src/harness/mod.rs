//! Benchmark harness: problem set-ups, run configuration and output files.

mod config;
mod output;
mod problems;

pub use config::{ConfigMap, FimSpec, NmgLevelSpec, NmgSpec, ProblemSpec, RunConfig, SolverSpec};
pub use output::{
    decode_snapshot, encode_snapshot, write_profile, write_snapshot, HistoryWriter, Snapshot,
    SNAPSHOT_MAGIC, SNAPSHOT_MAX_ORDER,
};
pub use problems::{
    build_cavity, build_couette, build_shock, cavity_lid_speed, normalize_shock_profile,
    shock_states, Problem, ProblemKind, ShockProfileRow, ShockStates, COUETTE_WALL_SPEED,
    POWER_LAW_OMEGA, SHOCK_KN, VHS_OMEGA,
};

use crate::error::{Result, SolverError};
use crate::fim::{solve_to_steady, SolveReport};
use crate::spatial::MomentField;

/// Result of [`run`]: the solver report and the final field.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub report: SolveReport,
    pub field: MomentField,
}

/// Solves the configured benchmark and writes `history.csv`, `profile.csv`
/// and `snapshot.bin` into the output directory.
pub fn run(cfg: &RunConfig) -> Result<RunOutcome> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| SolverError::Config(format!("thread pool: {e}")))?;
    pool.install(|| run_inner(cfg))
}

fn run_inner(cfg: &RunConfig) -> Result<RunOutcome> {
    let (problem, solver, opts) = cfg.instantiate()?;
    std::fs::create_dir_all(&cfg.output_dir)?;
    let mut history = HistoryWriter::create(&cfg.output_dir.join("history.csv"))?;
    let mut write_err = None;
    let mut field = problem.initial.clone();
    let report = solve_to_steady(&problem.disc, &mut field, &solver, &opts, &mut |e, _| {
        if let Err(err) = history.push(e) {
            write_err.get_or_insert(err);
        }
    })?;
    if let Some(e) = write_err {
        return Err(e);
    }
    write_profile(
        &cfg.output_dir.join("profile.csv"),
        problem.kind,
        &field,
        problem.shock.as_ref(),
    )?;
    write_snapshot(&cfg.output_dir.join("snapshot.bin"), &field)?;
    Ok(RunOutcome { report, field })
}
