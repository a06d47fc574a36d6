//! Procedural stand-ins for the three benchmark scenes.

use std::str::FromStr;

use kinopax_core::env::{Aabb, Environment, GoalBall};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SceneKind {
    Forest,
    Narrow,
    Building,
}

impl FromStr for SceneKind {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "forest" => Ok(SceneKind::Forest),
            "narrow" | "narrow-passage" => Ok(SceneKind::Narrow),
            "building" => Ok(SceneKind::Building),
            other => Err(CliError::Usage(format!("unknown scene kind {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SceneParams {
    /// Forest: number of pillars.
    pub pillars: usize,
    /// Narrow passage: gap between the two walls, meters.
    pub gap: f64,
    /// Narrow passage: wall thickness, which is also the passage length.
    pub thickness: f64,
    /// Building: rooms per side.
    pub rooms: usize,
    /// Building: doorway width, meters.
    pub door_width: f64,
}

impl Default for SceneParams {
    fn default() -> Self {
        Self { pillars: 24, gap: 1.0, thickness: 0.5, rooms: 2, door_width: 1.0 }
    }
}

const SIDE: f64 = 10.0;
const GOAL_RADIUS: f64 = 0.5;
const PILLAR_CLEARANCE: f64 = 1.0;

pub fn gen_environment(kind: SceneKind, params: &SceneParams, seed: u64) -> Result<Environment> {
    let env = match kind {
        SceneKind::Forest => forest(params.pillars, seed),
        SceneKind::Narrow => narrow(params.gap, params.thickness)?,
        SceneKind::Building => building(params.rooms, params.door_width)?,
    };
    env.validate()?;
    Ok(env)
}

/// Full-height square pillars scattered over a 10 m cube, kept clear of the
/// start and goal columns.
fn forest(pillars: usize, seed: u64) -> Environment {
    let start = [1.0, 1.0, 5.0];
    let goal = [9.0, 9.0, 5.0];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut obstacles = Vec::with_capacity(pillars);
    while obstacles.len() < pillars {
        let w: f64 = rng.random_range(0.4..1.0);
        let x: f64 = rng.random_range(0.0..SIDE - w);
        let y: f64 = rng.random_range(0.0..SIDE - w);
        let b = Aabb::new([x, y, 0.0], [x + w, y + w, SIDE]);
        let near = |p: [f64; 3]| {
            p[0] > b.min[0] - PILLAR_CLEARANCE
                && p[0] < b.max[0] + PILLAR_CLEARANCE
                && p[1] > b.min[1] - PILLAR_CLEARANCE
                && p[1] < b.max[1] + PILLAR_CLEARANCE
        };
        if !near(start) && !near(goal) {
            obstacles.push(b);
        }
    }
    Environment {
        name: "forest".into(),
        workspace: Aabb::new([0.0; 3], [SIDE; 3]),
        state_bounds: None,
        obstacles,
        start: start.to_vec(),
        goal: GoalBall { center: goal, radius: GOAL_RADIUS },
    }
}

/// Two walls across the middle of the cube, separated by a full-height
/// passage `gap` wide and `thickness` long.
fn narrow(gap: f64, thickness: f64) -> Result<Environment> {
    if !(gap > 0.0) || gap >= SIDE {
        return Err(CliError::Usage(format!("gap must lie in (0, {SIDE}), got {gap}")));
    }
    if !(thickness > 0.0) || thickness > 4.0 {
        return Err(CliError::Usage(format!("wall thickness must lie in (0, 4], got {thickness}")));
    }
    let (x0, x1) = (5.0 - thickness / 2.0, 5.0 + thickness / 2.0);
    let mid = SIDE / 2.0;
    Ok(Environment {
        name: "narrow".into(),
        workspace: Aabb::new([0.0; 3], [SIDE; 3]),
        state_bounds: None,
        obstacles: vec![
            Aabb::new([x0, 0.0, 0.0], [x1, mid - gap / 2.0, SIDE]),
            Aabb::new([x0, mid + gap / 2.0, 0.0], [x1, SIDE, SIDE]),
        ],
        start: vec![1.5, 2.0, 5.0],
        goal: GoalBall { center: [8.5, 8.0, 5.0], radius: GOAL_RADIUS },
    })
}

/// One storey split into `rooms x rooms` rooms; every interior wall segment
/// has a doorway at floor level.
fn building(rooms: usize, door: f64) -> Result<Environment> {
    const HEIGHT: f64 = 3.0;
    const DOOR_HEIGHT: f64 = 2.0;
    const THICK: f64 = 0.2;
    if rooms == 0 {
        return Err(CliError::Usage("building needs at least one room".into()));
    }
    let span = SIDE / rooms as f64;
    if !(door > 0.0) || door >= span - THICK {
        return Err(CliError::Usage(format!("door width must lie in (0, {})", span - THICK)));
    }
    let mut obstacles = Vec::new();
    for i in 1..rooms {
        let c = i as f64 * span;
        for j in 0..rooms {
            let (s0, s1) = (j as f64 * span, (j + 1) as f64 * span);
            let m = 0.5 * (s0 + s1);
            let (d0, d1) = (m - door / 2.0, m + door / 2.0);
            for (a, b, z0, z1) in [(s0, d0, 0.0, HEIGHT), (d1, s1, 0.0, HEIGHT), (d0, d1, DOOR_HEIGHT, HEIGHT)] {
                // Wall normal to x, then the same wall normal to y.
                obstacles.push(Aabb::new([c - THICK / 2.0, a, z0], [c + THICK / 2.0, b, z1]));
                obstacles.push(Aabb::new([a, c - THICK / 2.0, z0], [b, c + THICK / 2.0, z1]));
            }
        }
    }
    let first = 0.5 * span;
    let last = SIDE - 0.5 * span;
    Ok(Environment {
        name: "building".into(),
        workspace: Aabb::new([0.0; 3], [SIDE, SIDE, HEIGHT]),
        state_bounds: None,
        obstacles,
        start: vec![first - 1.0, first - 1.0, 1.0],
        goal: GoalBall { center: [last + 1.0, last + 1.0, 1.0], radius: GOAL_RADIUS },
    })
}
