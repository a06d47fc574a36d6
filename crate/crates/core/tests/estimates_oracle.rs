use std::collections::{BTreeSet, HashSet};

use kinopax_core::decomposition::Decomposition;
use kinopax_core::env::StateSpace;
use kinopax_core::exec::Serial;
use kinopax_core::StateVec;
use proptest::prelude::*;

#[derive(Debug, Clone)]
enum Event {
    Outcome { region: u32, valid: bool },
    Visit { region: u32, sub: u32 },
    Available { region: u32 },
    Update,
}

const CELLS: u32 = 2;
const REGIONS: u32 = 64;
const SUBS: u32 = 8;

fn decomposition(delta: f64, eps: f64) -> Decomposition {
    let space = StateSpace { lo: StateVec::zeros(6), hi: StateVec::from_slice(&[4.0, 4.0, 2.0, 1.0, 1.0, 1.0]) };
    Decomposition::new(&space, &[CELLS; 6], 2, [0, 1, 2], delta, eps)
}

fn event() -> impl Strategy<Value = Event> {
    prop_oneof![
        6 => (0..REGIONS, any::<bool>()).prop_map(|(region, valid)| Event::Outcome { region, valid }),
        3 => (0..REGIONS, 0..SUBS).prop_map(|(region, sub)| Event::Visit { region, sub }),
        2 => (0..REGIONS).prop_map(|region| Event::Available { region }),
        1 => Just(Event::Update),
    ]
}

/// Straight recomputation of every estimate from the raw log.
fn brute_force(log: &[Event], delta: f64, eps: f64, vol: f64) -> Vec<Option<f64>> {
    let mut nv = vec![0u32; REGIONS as usize];
    let mut ni = vec![0u32; REGIONS as usize];
    let mut visited = HashSet::new();
    let mut avail = BTreeSet::new();
    for e in log {
        match *e {
            Event::Outcome { region, valid } => {
                if valid {
                    nv[region as usize] += 1
                } else {
                    ni[region as usize] += 1
                }
            }
            Event::Visit { region, sub } => {
                visited.insert((region, sub));
            }
            Event::Available { region } => {
                avail.insert(region);
            }
            Event::Update => {}
        }
    }
    let score = |r: u32| {
        let (v, i) = (nv[r as usize] as f64, ni[r as usize] as f64);
        let cov = visited.iter().filter(|(rr, _)| *rr == r).count() as f64;
        let fv = (delta + v) * vol / (delta + v + i);
        fv.powi(4) / ((1.0 + cov) * (1.0 + (v + i) * (v + i)))
    };
    let total: f64 = avail.iter().map(|&r| score(r)).sum();
    (0..REGIONS)
        .map(|r| {
            avail.contains(&r).then(|| if total > 0.0 { (score(r) / total + eps).min(1.0) } else { eps })
        })
        .collect()
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn incremental_estimates_match_recomputation(
        log in proptest::collection::vec(event(), 1..200),
        delta in 0.01f64..5.0,
        eps in 0.0001f64..0.5,
    ) {
        let mut d = decomposition(delta, eps);
        let mut seen = Vec::new();
        let check = |d: &Decomposition, seen: &[Event]| -> Result<(), TestCaseError> {
            d.update_estimates(&Serial);
            let expect = brute_force(seen, delta, eps, d.region_volume());
            for r in 0..REGIONS {
                let got = d.p_accept(r);
                match expect[r as usize] {
                    Some(p) => prop_assert!(rel(got, p) <= 1e-12, "region {} got {} want {}", r, got, p),
                    None => prop_assert_eq!(got, 1.0),
                }
            }
            Ok(())
        };
        for e in &log {
            match *e {
                Event::Outcome { region, valid } => d.record_outcome(region, valid),
                Event::Visit { region, sub } => {
                    d.try_mark_subregion_visited(region, sub);
                }
                Event::Available { region } => {
                    d.mark_available(region);
                }
                Event::Update => check(&d, &seen)?,
            }
            seen.push(e.clone());
        }
        check(&d, &seen)?;
    }

    #[test]
    fn acceptance_is_bounded_below_by_epsilon(
        log in proptest::collection::vec(event(), 1..200),
        eps in 1e-6f64..0.999,
    ) {
        let mut d = decomposition(1.0, eps);
        for e in &log {
            match *e {
                Event::Outcome { region, valid } => d.record_outcome(region, valid),
                Event::Visit { region, sub } => {
                    d.try_mark_subregion_visited(region, sub);
                }
                Event::Available { region } => {
                    d.mark_available(region);
                }
                Event::Update => d.update_estimates(&Serial),
            }
        }
        d.update_estimates(&Serial);
        for r in 0..REGIONS {
            let p = d.p_accept(r);
            if d.snapshot(r).available {
                prop_assert!(p >= eps && p <= 1.0);
            } else {
                prop_assert_eq!(p, 1.0);
            }
        }
    }
}
