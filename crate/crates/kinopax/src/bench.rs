//! Seeded trial batches, summary statistics and tree-size sweeps.

use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::{mpsc, Arc};
use std::thread;

use kinopax_core::config::{validate_config, CheckedConfig, PlannerConfig};
use kinopax_core::planner::{IterationState, KinoPax};
use kinopax_core::result::{PlanResult, PlanStatus};
use kinopax_core::rrt::rrt_plan;
use kinopax_core::{DynamicsModel, Environment, Model};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::exec::{PoolExecutor, WallClock};
use crate::regions::RegionRow;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PlannerChoice {
    Kinopax,
    Rrt,
}

impl PlannerChoice {
    pub fn as_str(&self) -> &'static str {
        match self {
            PlannerChoice::Kinopax => "kinopax",
            PlannerChoice::Rrt => "rrt",
        }
    }
}

/// Everything a batch needs besides the trial count.
#[derive(Debug, Clone)]
pub struct RunSpec {
    pub config: PlannerConfig,
    pub environment: Environment,
    pub model: Model,
    pub planner: PlannerChoice,
    pub check_resolution: f64,
    /// Baseline batches only: run whole trials concurrently, one RRT
    /// instance each, on `config.threads` workers.
    pub parallel_trials: bool,
    /// Print one diagnostics line per iteration to stderr.
    pub trace: bool,
    /// Keep the final per-region metrics of each kinopax trial.
    pub dump_regions: bool,
}

impl RunSpec {
    pub fn new(config: PlannerConfig, environment: Environment, model: Model, planner: PlannerChoice) -> Self {
        Self {
            config,
            environment,
            model,
            planner,
            check_resolution: kinopax_core::validity::DEFAULT_CHECK_RESOLUTION,
            parallel_trials: false,
            trace: false,
            dump_regions: false,
        }
    }
}

pub fn trace_line(trial: usize, s: &IterationState) -> String {
    format!(
        "trace trial={trial} iter={} lambda={} expand={} unexplored={} open={} tree={} elapsed_s={:.6}",
        s.iteration, s.lambda, s.expand, s.unexplored, s.open, s.tree_size, s.elapsed_s
    )
}

/// Deterministic part of a trial, plus its wall time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub seed: u64,
    pub status: String,
    pub wall_time_ms: f64,
    pub tree_size: usize,
    pub iterations: u64,
    pub solution_duration_s: f64,
}

impl TrialRecord {
    /// The record without its timing, which is the part that must repeat
    /// exactly for a fixed seed.
    pub fn without_timing(&self) -> TrialRecord {
        TrialRecord { wall_time_ms: 0.0, ..self.clone() }
    }
}

#[derive(Debug, Clone)]
pub struct TrialOutcome {
    pub record: TrialRecord,
    pub result: PlanResult,
    pub regions: Option<Vec<RegionRow>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsRow {
    pub planner: String,
    pub model: String,
    pub environment: String,
    pub trials: usize,
    pub solved: usize,
    pub success_pct: f64,
    /// Over solved trials; `None` when nothing was solved.
    pub mean_ms: Option<f64>,
    pub median_ms: Option<f64>,
}

impl StatsRow {
    pub fn from_records(planner: &str, model: &str, environment: &str, records: &[TrialRecord]) -> Self {
        let mut solved_ms: Vec<f64> = records
            .iter()
            .filter(|r| r.status == PlanStatus::Solved.as_str())
            .map(|r| r.wall_time_ms)
            .collect();
        solved_ms.sort_by(f64::total_cmp);
        let solved = solved_ms.len();
        StatsRow {
            planner: planner.into(),
            model: model.into(),
            environment: environment.into(),
            trials: records.len(),
            solved,
            success_pct: if records.is_empty() { 0.0 } else { solved as f64 / records.len() as f64 * 100.0 },
            mean_ms: (solved > 0).then(|| solved_ms.iter().sum::<f64>() / solved as f64),
            median_ms: (solved > 0).then(|| median_sorted(&solved_ms)),
        }
    }
}

pub fn median_sorted(v: &[f64]) -> f64 {
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    median_sorted(&v)
}

/// Summary rows with the mean-time ratio against the kinopax row of the same
/// model and environment.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct StatsTable {
    pub rows: Vec<StatsRow>,
}

impl StatsTable {
    pub fn ratio(&self, row: &StatsRow) -> Option<f64> {
        let base = self.rows.iter().find(|r| {
            r.planner == PlannerChoice::Kinopax.as_str() && r.model == row.model && r.environment == row.environment
        })?;
        Some(row.mean_ms? / base.mean_ms?)
    }

    /// Fixed-width table for the terminal.
    pub fn render(&self) -> String {
        let mut out = format!(
            "{:<10} {:<8} {:<10} {:>6} {:>12} {:>12} {:>8} {:>8}\n",
            "planner", "model", "env", "trials", "mean_ms", "median_ms", "ratio", "succ_%"
        );
        let fmt = |v: Option<f64>, p: usize| v.map_or("-".to_string(), |x| format!("{x:.p$}"));
        for r in &self.rows {
            out.push_str(&format!(
                "{:<10} {:<8} {:<10} {:>6} {:>12} {:>12} {:>8} {:>8.1}\n",
                r.planner,
                r.model,
                r.environment,
                r.trials,
                fmt(r.mean_ms, 1),
                fmt(r.median_ms, 1),
                fmt(self.ratio(r), 2),
                r.success_pct
            ));
        }
        out
    }
}

/// Seed used by trial `index` of a batch.
pub fn trial_seed(base: u64, index: usize) -> u64 {
    base.wrapping_add(index as u64)
}

/// Runs one query. With `dump_regions`, the final per-region metrics of a
/// kinopax run are returned too.
pub fn run_once(
    spec: &RunSpec,
    seed: u64,
    trace: Option<&mut dyn FnMut(&IterationState)>,
    dump_regions: bool,
) -> Result<(PlanResult, Option<Vec<RegionRow>>)> {
    let mut cfg = spec.config.clone();
    cfg.seed = seed;
    let checked = validate_config(&cfg, &spec.model)?;
    match spec.planner {
        PlannerChoice::Kinopax => {
            let exec = PoolExecutor::new(checked.threads);
            let mut planner = KinoPax::new(&checked, &spec.environment, &spec.model, &exec, spec.check_resolution)?;
            let clock = WallClock::start();
            let mut noop = |_: &IterationState| {};
            let result = planner.run(&clock, trace.unwrap_or(&mut noop));
            let regions = dump_regions.then(|| crate::regions::collect(planner.decomposition()));
            Ok((result, regions))
        }
        PlannerChoice::Rrt => Ok((run_rrt(&checked, spec, seed)?, None)),
    }
}

/// One RRT instance per thread; the first solution wins and stops the rest.
fn run_rrt(cfg: &CheckedConfig, spec: &RunSpec, seed: u64) -> Result<PlanResult> {
    let instances = cfg.threads.max(1);
    if instances == 1 {
        let clock = WallClock::start();
        return Ok(rrt_plan(cfg, &spec.environment, &spec.model, &clock, spec.check_resolution, seed)?);
    }
    let stop = Arc::new(AtomicBool::new(false));
    let (tx, rx) = mpsc::channel();
    thread::scope(|s| {
        for k in 0..instances {
            let tx = tx.clone();
            let stop = stop.clone();
            s.spawn(move || {
                let clock = WallClock::with_stop(stop.clone());
                let instance_seed = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(k as u64);
                let r = rrt_plan(cfg, &spec.environment, &spec.model, &clock, spec.check_resolution, instance_seed);
                if matches!(&r, Ok(p) if p.is_solved()) {
                    stop.store(true, Ordering::Relaxed);
                }
                let _ = tx.send(r);
            });
        }
        drop(tx);
        let mut fallback = None;
        for r in rx.iter() {
            let r = r?;
            if r.is_solved() {
                stop.store(true, Ordering::Relaxed);
                return Ok(r);
            }
            fallback.get_or_insert(r);
        }
        fallback.ok_or_else(|| CliError::Usage("no RRT instance reported".into()))
    })
}

pub fn record_for(trial: usize, seed: u64, result: &PlanResult) -> TrialRecord {
    TrialRecord {
        trial,
        seed,
        status: result.status.as_str().into(),
        wall_time_ms: result.stats.wall_time_ms,
        tree_size: result.stats.tree_size,
        iterations: result.stats.iterations,
        solution_duration_s: result.stats.solution_duration_s,
    }
}

/// Runs `n_trials` queries with seeds `seed + 0 .. seed + n_trials - 1`,
/// calling `on_trial` after each one.
pub fn run_trials(
    spec: &RunSpec,
    n_trials: usize,
    mut on_trial: impl FnMut(&TrialOutcome) -> Result<()>,
) -> Result<(StatsRow, Vec<TrialOutcome>)> {
    if n_trials == 0 {
        return Err(CliError::Usage("need at least one trial".into()));
    }
    if spec.parallel_trials && spec.planner != PlannerChoice::Rrt {
        return Err(CliError::Usage("--parallel-trials applies to the rrt planner only".into()));
    }
    let mut outcomes = Vec::with_capacity(n_trials);
    if spec.parallel_trials && spec.config.threads > 1 {
        let mut single = spec.clone();
        single.config.threads = 1;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(spec.config.threads)
            .build()
            .map_err(|e| CliError::Usage(e.to_string()))?;
        let results: Vec<Result<TrialOutcome>> = pool.install(|| {
            (0..n_trials)
                .into_par_iter()
                .map(|i| {
                    let seed = trial_seed(spec.config.seed, i);
                    let (result, regions) = run_once(&single, seed, None, false)?;
                    Ok(TrialOutcome { record: record_for(i, seed, &result), result, regions })
                })
                .collect()
        });
        for r in results {
            let outcome = r?;
            on_trial(&outcome)?;
            outcomes.push(outcome);
        }
    }
    for i in outcomes.len()..n_trials {
        let seed = trial_seed(spec.config.seed, i);
        let mut tracer = |s: &IterationState| eprintln!("{}", trace_line(i, s));
        let trace = spec.trace.then_some(&mut tracer as &mut dyn FnMut(&IterationState));
        let (result, regions) = run_once(spec, seed, trace, spec.dump_regions)?;
        let outcome = TrialOutcome { record: record_for(i, seed, &result), result, regions };
        on_trial(&outcome)?;
        outcomes.push(outcome);
    }
    let records: Vec<TrialRecord> = outcomes.iter().map(|o| o.record.clone()).collect();
    let row = StatsRow::from_records(spec.planner.as_str(), spec.model.name(), &spec.environment.name, &records);
    Ok((row, outcomes))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub t_e: usize,
    pub trials: usize,
    pub failures: usize,
    /// Over all trials, solved or not.
    pub mean_ms: f64,
    pub var_ms: f64,
}

/// Repeats a batch for every expected tree size in `te_values`.
pub fn sweep_te(spec: &RunSpec, te_values: &[usize], n_trials: usize) -> Result<Vec<SweepRow>> {
    if te_values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::Usage("t_e values must be strictly increasing".into()));
    }
    let mut rows = Vec::with_capacity(te_values.len());
    for &t_e in te_values {
        let mut s = spec.clone();
        s.config.t_e = t_e;
        let (_, outcomes) = run_trials(&s, n_trials, |_| Ok(()))?;
        let times: Vec<f64> = outcomes.iter().map(|o| o.record.wall_time_ms).collect();
        let mean = times.iter().sum::<f64>() / times.len() as f64;
        let var = times.iter().map(|t| (t - mean) * (t - mean)).sum::<f64>() / times.len() as f64;
        rows.push(SweepRow {
            t_e,
            trials: n_trials,
            failures: outcomes.iter().filter(|o| !o.result.is_solved()).count(),
            mean_ms: mean,
            var_ms: var,
        });
    }
    Ok(rows)
}

/// Two-column report: failures and runtime per `t_e`.
pub fn render_sweep(rows: &[SweepRow]) -> String {
    let mut out = String::from("t_e,failures,mean_ms,var_ms\n");
    for r in rows {
        out.push_str(&format!("{},{},{:.3},{:.3}\n", r.t_e, r.failures, r.mean_ms, r.var_ms));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(status: PlanStatus, ms: f64) -> TrialRecord {
        TrialRecord {
            trial: 0,
            seed: 0,
            status: status.as_str().into(),
            wall_time_ms: ms,
            tree_size: 1,
            iterations: 1,
            solution_duration_s: 0.0,
        }
    }

    #[test]
    fn success_rate_and_medians_use_solved_trials() {
        let records = [
            rec(PlanStatus::Solved, 10.0),
            rec(PlanStatus::Timeout, 1000.0),
            rec(PlanStatus::Solved, 30.0),
            rec(PlanStatus::Solved, 20.0),
        ];
        let row = StatsRow::from_records("kinopax", "di6", "forest", &records);
        assert_eq!(row.solved, 3);
        assert_eq!(row.success_pct, 75.0);
        assert_eq!(row.mean_ms, Some(20.0));
        assert_eq!(row.median_ms, Some(20.0));
    }

    #[test]
    fn ratio_against_kinopax_row() {
        let k = StatsRow::from_records("kinopax", "di6", "forest", &[rec(PlanStatus::Solved, 10.0)]);
        let r = StatsRow::from_records("rrt", "di6", "forest", &[rec(PlanStatus::Solved, 40.0)]);
        let t = StatsTable { rows: vec![k, r.clone()] };
        assert_eq!(t.ratio(&r), Some(4.0));
        assert!(t.render().lines().count() == 3);
    }

    #[test]
    fn median_even_and_odd() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
    }
}
