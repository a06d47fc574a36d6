use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kinopax_core::validity::DEFAULT_CHECK_RESOLUTION;
use kinopax_core::{DynamicsModel, Model, PlannerConfig};
use kinopax::audit::audit_trajectory;
use kinopax::bench::{render_sweep, run_trials, sweep_te, PlannerChoice, RunSpec, StatsTable, TrialRecord};
use kinopax::envfile::{load_environment, save_environment};
use kinopax::error::{CliError, Result};
use kinopax::export::export_trajectory;
use kinopax::generate::{gen_environment, SceneKind, SceneParams};
use kinopax::regions;
use serde::Serialize;

/// Parallel kinodynamic planner benchmark harness.
#[derive(Debug, Parser)]
#[command(name = "kinopax", version, args_conflicts_with_subcommands = true)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a batch of seeded trials (the default).
    Run(RunArgs),
    /// Repeat a batch for several expected tree sizes.
    Sweep {
        #[command(flatten)]
        run: RunArgs,
        /// Comma-separated, strictly increasing.
        #[arg(long, value_delimiter = ',', required = true)]
        te_list: Vec<usize>,
    },
    /// Write a generated benchmark scene.
    GenEnv(GenEnvArgs),
}

#[derive(Debug, Args)]
struct GenEnvArgs {
    #[arg(long)]
    kind: String,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    pillars: Option<usize>,
    #[arg(long)]
    gap: Option<f64>,
    #[arg(long)]
    thickness: Option<f64>,
    #[arg(long)]
    rooms: Option<usize>,
    #[arg(long)]
    door_width: Option<f64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PlannerArg {
    Kinopax,
    Rrt,
}

#[derive(Debug, Clone, Args)]
struct RunArgs {
    #[arg(long)]
    env: Option<PathBuf>,
    #[arg(long, default_value = "di6", value_parser = ["di6", "dubins6", "quad12"])]
    model: String,
    #[arg(long, value_enum, default_value = "kinopax")]
    planner: PlannerArg,
    #[arg(long)]
    te: Option<usize>,
    #[arg(long)]
    lambda_max: Option<u32>,
    #[arg(long)]
    tprop: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    /// One value for every dimension, or a comma-separated list.
    #[arg(long, value_delimiter = ',')]
    cells: Option<Vec<u32>>,
    #[arg(long)]
    subcells: Option<u32>,
    #[arg(long, default_value_t = 1)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    max_time: Option<f64>,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    #[arg(long, default_value_t = DEFAULT_CHECK_RESOLUTION)]
    check_res: f64,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[arg(long)]
    trace: bool,
    #[arg(long)]
    dump_regions: bool,
    /// Run whole baseline trials concurrently.
    #[arg(long)]
    parallel_trials: bool,
}

impl RunArgs {
    fn spec(&self) -> Result<RunSpec> {
        let env_path = self.env.as_ref().ok_or_else(|| CliError::Usage("--env is required".into()))?;
        let environment = load_environment(env_path)?;
        let model = Model::from_name(&self.model).ok_or_else(|| CliError::Usage(format!("unknown model {}", self.model)))?;
        let mut cfg = PlannerConfig::for_model(&model);
        if let Some(v) = self.te {
            cfg.t_e = v;
        }
        if let Some(v) = self.lambda_max {
            cfg.lambda_max = v;
        }
        if let Some(v) = self.tprop {
            cfg.t_prop = v;
        }
        if let Some(v) = self.epsilon {
            cfg.epsilon = v;
        }
        if let Some(v) = self.delta {
            cfg.delta = v;
        }
        if let Some(v) = &self.cells {
            cfg.cells_per_dim.clone_from(v);
        }
        if let Some(v) = self.subcells {
            cfg.subcells_per_dim = v;
        }
        if let Some(v) = self.max_time {
            cfg.t_max = v;
        }
        cfg.seed = self.seed;
        cfg.threads = self.threads;
        kinopax_core::validate_config(&cfg, &model)?;
        if !(self.check_res > 0.0) {
            return Err(CliError::Usage("--check-res must be positive".into()));
        }
        let planner = match self.planner {
            PlannerArg::Kinopax => PlannerChoice::Kinopax,
            PlannerArg::Rrt => PlannerChoice::Rrt,
        };
        let mut spec = RunSpec::new(cfg, environment, model, planner);
        spec.check_resolution = self.check_res;
        spec.parallel_trials = self.parallel_trials;
        spec.trace = self.trace;
        spec.dump_regions = self.dump_regions;
        Ok(spec)
    }
}

#[derive(Serialize)]
struct Summary<'a> {
    schema_version: u32,
    planner: &'a str,
    model: &'a str,
    environment: &'a str,
    trials: usize,
    solved: usize,
    success_pct: f64,
    audit_violations: usize,
}

#[derive(Serialize)]
struct Timing {
    trial: usize,
    wall_time_ms: f64,
}

fn write(path: &Path, text: impl AsRef<[u8]>) -> Result<()> {
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("plain data serializes")
}

fn run(args: &RunArgs) -> Result<()> {
    let spec = args.spec()?;
    let out = &args.out;
    fs::create_dir_all(out).map_err(|e| CliError::io(out, e))?;
    let (n, m) = (spec.model.state_dim(), spec.model.control_dim());
    let mut violations = 0usize;
    let (row, outcomes) = run_trials(&spec, args.trials, |o| {
        if o.result.is_solved() {
            let v = audit_trajectory(&spec.environment, &spec.model, &o.result.trajectory, spec.check_resolution);
            if !v.is_empty() {
                eprintln!("trial {}: {} audit violations, first {:?}", o.record.trial, v.len(), v[0]);
            }
            violations += v.len();
            export_trajectory(&o.result, n, m, &out.join(format!("trajectory_{}.csv", o.record.trial)))?;
        }
        if let Some(rows) = &o.regions {
            regions::write_csv(rows, &out.join(format!("regions_{}.csv", o.record.trial)))?;
        }
        Ok(())
    })?;

    let mut trials = String::new();
    let mut timings = String::new();
    for o in &outcomes {
        let r: &TrialRecord = &o.record;
        trials.push_str(&to_json(&r.without_timing()));
        trials.push('\n');
        timings.push_str(&to_json(&Timing { trial: r.trial, wall_time_ms: r.wall_time_ms }));
        timings.push('\n');
    }
    write(&out.join("trials.jsonl"), trials)?;
    write(&out.join("timings.jsonl"), timings)?;
    let summary = Summary {
        schema_version: 1,
        planner: &row.planner,
        model: &row.model,
        environment: &row.environment,
        trials: row.trials,
        solved: row.solved,
        success_pct: row.success_pct,
        audit_violations: violations,
    };
    write(&out.join("summary.json"), serde_json::to_string_pretty(&summary).expect("serializes") + "\n")?;
    let table = StatsTable { rows: vec![row] };
    write(&out.join("stats.json"), serde_json::to_string_pretty(&table).expect("serializes") + "\n")?;
    print!("{}", table.render());
    if violations > 0 {
        eprintln!("warning: {violations} audit violations across solved trials");
    }
    Ok(())
}

fn sweep(args: &RunArgs, te_list: &[usize]) -> Result<()> {
    let spec = args.spec()?;
    fs::create_dir_all(&args.out).map_err(|e| CliError::io(&args.out, e))?;
    let rows = sweep_te(&spec, te_list, args.trials)?;
    let report = render_sweep(&rows);
    write(&args.out.join("sweep.csv"), &report)?;
    print!("{report}");
    Ok(())
}

fn gen_env(a: &GenEnvArgs) -> Result<()> {
    let kind: SceneKind = a.kind.parse()?;
    let d = SceneParams::default();
    let params = SceneParams {
        pillars: a.pillars.unwrap_or(d.pillars),
        gap: a.gap.unwrap_or(d.gap),
        thickness: a.thickness.unwrap_or(d.thickness),
        rooms: a.rooms.unwrap_or(d.rooms),
        door_width: a.door_width.unwrap_or(d.door_width),
    };
    let env = gen_environment(kind, &params, a.seed)?;
    save_environment(&env, &a.out)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let res = match &cli.command {
        None => run(&cli.run),
        Some(Command::Run(a)) => run(a),
        Some(Command::Sweep { run, te_list }) => sweep(run, te_list),
        Some(Command::GenEnv(a)) => gen_env(a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
