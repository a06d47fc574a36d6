use kinopax_core::config::{validate_config, PlannerConfig};
use kinopax_core::dynamics::{DoubleIntegrator6D, Model};
use kinopax_core::env::{Aabb, Environment, GoalBall};
use kinopax_core::exec::{Serial, TickClock};
use kinopax_core::planner::NodeTag;
use kinopax_core::planner::{plan, KinoPax, NodeSetsOutcome};
use kinopax_core::result::PlanStatus;
use kinopax_core::rng::{unit_f64, Phase, RngStream};
use kinopax_core::validity::ValidityChecker;
use proptest::prelude::*;

fn open_env() -> Environment {
    Environment {
        name: "open".into(),
        workspace: Aabb::new([0.0; 3], [10.0; 3]),
        state_bounds: None,
        obstacles: vec![],
        start: vec![2.0, 2.0, 2.0],
        goal: GoalBall { center: [8.0, 8.0, 8.0], radius: 0.5 },
    }
}

fn cfg(t_e: usize, cells: u32, seed: u64) -> PlannerConfig {
    PlannerConfig { t_e, cells_per_dim: vec![cells], seed, t_max: 30.0, ..PlannerConfig::default() }
}

fn di() -> Model {
    Model::DoubleIntegrator(DoubleIntegrator6D::default())
}

#[test]
fn root_with_lambda_four_attempts_four_extensions() {
    let model = di();
    let c = validate_config(&cfg(1000, 4, 3), &model).unwrap();
    let env = open_env();
    let mut k = KinoPax::new(&c, &env, &model, &Serial, 0.05).unwrap();
    let (report, attempts) = k.propagate_pass(4);
    assert_eq!(report.attempted, 4);
    assert_eq!(attempts.len(), 4);
    assert!(attempts.iter().all(|a| a.parent == 0));
    assert_eq!(attempts.iter().map(|a| a.extension).collect::<Vec<_>>(), vec![0, 1, 2, 3]);
}

#[test]
fn blocked_root_stages_nothing_and_counts_every_failure() {
    // Six slabs leave a cavity of half-width 1e-12 around the start.
    let e = 1e-12;
    let s = 5.0;
    let env = Environment {
        obstacles: vec![
            Aabb::new([0.0, 0.0, 0.0], [s - e, 10.0, 10.0]),
            Aabb::new([s + e, 0.0, 0.0], [10.0, 10.0, 10.0]),
            Aabb::new([0.0, 0.0, 0.0], [10.0, s - e, 10.0]),
            Aabb::new([0.0, s + e, 0.0], [10.0, 10.0, 10.0]),
            Aabb::new([0.0, 0.0, 0.0], [10.0, 10.0, s - e]),
            Aabb::new([0.0, 0.0, s + e], [10.0, 10.0, 10.0]),
        ],
        start: vec![s, s, s],
        ..open_env()
    };
    let model = di();
    let c = validate_config(&cfg(1000, 4, 11), &model).unwrap();
    let mut k = KinoPax::new(&c, &env, &model, &Serial, 0.05).unwrap();
    let lambda = 8;
    let (report, _) = k.propagate_pass(lambda);
    assert_eq!(report.staged, 0);
    assert_eq!(report.valid, 0);
    let dec = k.decomposition();
    let invalid: u32 = (0..dec.region_count()).map(|r| dec.snapshot(r as u32).n_invalid).sum();
    let valid: u32 = (0..dec.region_count()).map(|r| dec.snapshot(r as u32).n_valid).sum();
    assert_eq!(invalid, lambda);
    assert_eq!(valid, 0);
}

#[test]
fn certain_acceptance_never_demotes_and_promotes_every_open_node() {
    // A single region always receives the whole score mass, so p_accept = 1.
    let model = di();
    let c = validate_config(&cfg(5000, 1, 5), &model).unwrap();
    let env = open_env();
    let mut k = KinoPax::new(&c, &env, &model, &Serial, 0.05).unwrap();
    for _ in 0..3 {
        let lambda = k.branching_factor();
        k.propagate_pass(lambda);
        k.update_estimates_pass();
        assert_eq!(k.decomposition().p_accept(0), 1.0);
        let outcome = k.update_node_sets_pass();
        assert_ne!(outcome, NodeSetsOutcome::CapacityExhausted);
        assert_eq!(k.arena().count(NodeTag::Open), 0);
        assert_eq!(k.arena().count(NodeTag::Expand), k.arena().len());
        if let NodeSetsOutcome::Goal(_) = outcome {
            break;
        }
    }
}

#[test]
fn demotions_match_replayed_draws() {
    let model = di();
    let c = validate_config(&PlannerConfig { epsilon: 0.01, ..cfg(50_000, 4, 17) }, &model).unwrap();
    let env = open_env();
    let mut k = KinoPax::new(&c, &env, &model, &Serial, 0.05).unwrap();
    for _ in 0..3 {
        let lambda = k.branching_factor();
        k.propagate_pass(lambda);
        k.update_estimates_pass();
        let iteration = k.iteration();
        let before: Vec<NodeTag> = k.arena().tags().to_vec();
        let expected: Vec<bool> = before
            .iter()
            .enumerate()
            .map(|(slot, tag)| {
                if *tag != NodeTag::Expand {
                    return false;
                }
                let p = k.decomposition().p_accept(k.arena().node(slot as u32).region);
                unit_f64(&mut RngStream::keyed(17, iteration, slot as u32, 0, Phase::Demote)) >= p
            })
            .collect();
        // Open nodes, including the ones just demoted, get one promotion draw.
        let promoted: Vec<bool> = (0..before.len())
            .map(|slot| {
                let p = k.decomposition().p_accept(k.arena().node(slot as u32).region);
                unit_f64(&mut RngStream::keyed(17, iteration, slot as u32, 0, Phase::Promote)) < p
            })
            .collect();
        let outcome = k.update_node_sets_pass();
        assert!(matches!(outcome, NodeSetsOutcome::Continue));
        let rescued = before.len() == k.arena().len() && k.arena().count(NodeTag::Expand) == 1;
        for slot in 0..before.len() {
            let after = k.arena().tags()[slot];
            let stays_open = match before[slot] {
                NodeTag::Expand => expected[slot] && !promoted[slot],
                NodeTag::Open => !promoted[slot],
            };
            if !rescued {
                assert_eq!(after == NodeTag::Open, stays_open, "slot {slot}");
            }
        }
    }
}

#[test]
fn start_in_goal_is_solved_without_iterating() {
    let model = di();
    let c = validate_config(&cfg(100, 4, 0), &model).unwrap();
    let env = Environment { goal: GoalBall { center: [2.0, 2.0, 2.3], radius: 0.5 }, ..open_env() };
    let r = plan(&c, &env, &model, &Serial, &TickClock::new(0.0), 0.05, &mut |_| {}).unwrap();
    assert_eq!(r.status, PlanStatus::Solved);
    assert!(r.trajectory.is_empty());
    assert_eq!(r.stats.iterations, 0);
}

#[test]
fn open_double_integrator_solves_and_revalidates() {
    let model = di();
    let c = validate_config(&cfg(20_000, 4, 1), &model).unwrap();
    let env = open_env();
    let r = plan(&c, &env, &model, &Serial, &TickClock::new(0.0), 0.05, &mut |_| {}).unwrap();
    assert_eq!(r.status, PlanStatus::Solved);
    let fine = ValidityChecker::new(&env, &model, 0.005).unwrap();
    for seg in &r.trajectory {
        assert!(fine.segment_valid(seg));
    }
    let last = r.trajectory.last().unwrap().end_state;
    assert!(fine.in_goal(&last, &env.goal));
    assert!(r.stats.tree_size <= 20_000);
}

#[test]
fn enclosed_goal_is_never_solved() {
    let env = Environment {
        obstacles: vec![
            Aabb::new([6.0, 6.0, 6.0], [10.0, 10.0, 7.0]),
            Aabb::new([6.0, 6.0, 9.0], [10.0, 10.0, 10.0]),
            Aabb::new([6.0, 6.0, 7.0], [7.0, 10.0, 9.0]),
            Aabb::new([7.0, 6.0, 7.0], [10.0, 7.0, 9.0]),
            Aabb::new([9.0, 7.0, 7.0], [10.0, 10.0, 9.0]),
            Aabb::new([7.0, 9.0, 7.0], [9.0, 10.0, 9.0]),
        ],
        ..open_env()
    };
    let model = di();
    let c = validate_config(&PlannerConfig { t_max: 0.5, ..cfg(20_000, 4, 2) }, &model).unwrap();
    // Each clock query advances 0.05 s, so the budget runs out after a few
    // iterations regardless of machine speed.
    let r = plan(&c, &env, &model, &Serial, &TickClock::new(0.05), 0.05, &mut |_| {}).unwrap();
    assert!(matches!(r.status, PlanStatus::Timeout | PlanStatus::CapacityExhausted));
    assert!(r.trajectory.is_empty());
}

#[test]
fn solution_is_as_deep_as_the_goal_slot_and_replays_exactly() {
    let model = di();
    let c = validate_config(&cfg(20_000, 4, 9), &model).unwrap();
    let env = open_env();
    let mut k = KinoPax::new(&c, &env, &model, &Serial, 0.05).unwrap();
    let goal = loop {
        let lambda = k.branching_factor();
        k.propagate_pass(lambda);
        k.update_estimates_pass();
        match k.update_node_sets_pass() {
            NodeSetsOutcome::Goal(slot) => break slot,
            NodeSetsOutcome::Continue => {}
            NodeSetsOutcome::CapacityExhausted => panic!("ran out of room"),
        }
    };
    let traj = k.arena().extract_trajectory(&model, goal).unwrap();
    assert_eq!(traj.len(), k.arena().depth(goal).unwrap());
    let stored = k.arena().node(goal).state;
    assert!(traj.last().unwrap().end_state.max_abs_diff(&stored) <= 1e-12);
    assert_eq!(traj[0].start.as_slice(), env.start_state(&model).unwrap().as_slice());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn passes_keep_the_tree_well_formed(seed in 0u64..1_000_000, cells in 1u32..5) {
        let model = di();
        let c = validate_config(&cfg(3000, cells, seed), &model).unwrap();
        let env = open_env();
        let mut k = KinoPax::new(&c, &env, &model, &Serial, 0.05).unwrap();
        let mut prev_len = k.arena().len();
        for _ in 0..6 {
            let lambda = k.branching_factor();
            let expand = k.arena().count(NodeTag::Expand);
            let (report, attempts) = k.propagate_pass(lambda);
            prop_assert_eq!(report.attempted, expand * lambda as usize);
            prop_assert_eq!(attempts.len(), report.attempted);
            prop_assert_eq!(report.staged, k.staged().len());
            k.update_estimates_pass();
            let outcome = k.update_node_sets_pass();
            let a = k.arena();
            prop_assert!(a.check_structure().is_ok());
            prop_assert_eq!(a.count(NodeTag::Expand) + a.count(NodeTag::Open), a.len());
            prop_assert!(a.len() >= prev_len && a.len() <= 3000);
            prop_assert!(k.staged().is_empty());
            prev_len = a.len();
            if outcome != NodeSetsOutcome::Continue {
                break;
            }
            prop_assert!(a.count(NodeTag::Expand) >= 1);
        }
    }
}
