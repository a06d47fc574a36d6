use kinopax::audit::audit_trajectory;
use kinopax::bench::{run_trials, sweep_te, PlannerChoice, RunSpec, StatsRow};
use kinopax::envfile::parse_environment;
use kinopax_core::dynamics::{DoubleIntegrator6D, Model};
use kinopax_core::PlannerConfig;

const EASY: &str = r#"{
    "name": "easy",
    "workspace": {"lo": [0, 0, 0], "hi": [4, 4, 4]},
    "obstacles": [{"min": [1.8, 0, 0], "max": [2.2, 2.5, 4]}],
    "start": [0.5, 0.5, 2],
    "goal": {"center": [3.5, 0.5, 2], "radius": 0.5}
}"#;

fn spec(planner: PlannerChoice, t_e: usize) -> RunSpec {
    let model = Model::DoubleIntegrator(DoubleIntegrator6D::default());
    let cfg = PlannerConfig { t_e, t_max: 30.0, ..PlannerConfig::for_model(&model) };
    RunSpec::new(cfg, parse_environment(EASY).unwrap(), model, planner)
}

#[test]
fn single_trivial_trial_succeeds() {
    let (row, outcomes) = run_trials(&spec(PlannerChoice::Kinopax, 20_000), 1, |_| Ok(())).unwrap();
    assert_eq!(row.success_pct, 100.0);
    assert_eq!(outcomes[0].record.seed, 0);
}

#[test]
fn repeated_batches_match_and_success_recomputes() {
    let s = spec(PlannerChoice::Kinopax, 20_000);
    let (row_a, a) = run_trials(&s, 4, |_| Ok(())).unwrap();
    let (_, b) = run_trials(&s, 4, |_| Ok(())).unwrap();
    let strip = |v: &[kinopax::bench::TrialOutcome]| v.iter().map(|o| o.record.without_timing()).collect::<Vec<_>>();
    assert_eq!(strip(&a), strip(&b));
    let records: Vec<_> = a.iter().map(|o| o.record.clone()).collect();
    assert_eq!(StatsRow::from_records("kinopax", "di6", "easy", &records), row_a);
    assert_eq!(a.iter().map(|o| o.record.seed).collect::<Vec<_>>(), vec![0, 1, 2, 3]);
}

#[test]
fn solved_trials_pass_the_fine_audit() {
    for planner in [PlannerChoice::Kinopax, PlannerChoice::Rrt] {
        let s = spec(planner, 20_000);
        let (_, outcomes) = run_trials(&s, 3, |_| Ok(())).unwrap();
        for o in outcomes.iter().filter(|o| o.result.is_solved()) {
            let v = audit_trajectory(&s.environment, &s.model, &o.result.trajectory, s.check_resolution);
            assert!(v.is_empty(), "{planner:?} trial {}: {v:?}", o.record.trial);
        }
    }
}

#[test]
fn sweep_fails_below_and_succeeds_above_observed_sizes() {
    let (_, observed) = run_trials(&spec(PlannerChoice::Kinopax, 50_000), 4, |_| Ok(())).unwrap();
    assert!(observed.iter().all(|o| o.result.is_solved()));
    let sizes: Vec<usize> = observed.iter().map(|o| o.record.tree_size).collect();
    let low = (*sizes.iter().min().unwrap() / 4).max(2);
    let high = 2 * *sizes.iter().max().unwrap();
    let rows = sweep_te(&spec(PlannerChoice::Kinopax, 0), &[low, high], 4).unwrap();
    assert_eq!(rows.len(), 2);
    assert!(rows[0].failures > 0, "{rows:?}");
    assert_eq!(rows[1].failures, 0, "{rows:?}");
}

#[test]
fn sweep_rejects_unsorted_values() {
    assert!(sweep_te(&spec(PlannerChoice::Kinopax, 0), &[100, 100], 1).is_err());
}
