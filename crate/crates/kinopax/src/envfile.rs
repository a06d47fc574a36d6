//! JSON environment files.
//!
//! ```json
//! {
//!   "name": "narrow",
//!   "workspace": { "lo": [0, 0, 0], "hi": [10, 10, 10] },
//!   "state_bounds": { "lo": [...], "hi": [...] },
//!   "obstacles": [ { "min": [4.8, 0, 0], "max": [5.2, 4.8, 10] } ],
//!   "start": [1, 5, 5],
//!   "goal": { "center": [9, 5, 5], "radius": 0.5 }
//! }
//! ```
//!
//! `state_bounds` is optional. `start` is either a full state or a position.

use std::fs;
use std::path::Path;

use kinopax_core::env::{Aabb, Environment, GoalBall, StateBounds};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Bounds3 {
    lo: [f64; 3],
    hi: [f64; 3],
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BoundsN {
    lo: Vec<f64>,
    hi: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BoxSpec {
    min: [f64; 3],
    max: [f64; 3],
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GoalSpec {
    center: [f64; 3],
    radius: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EnvFile {
    name: String,
    workspace: Bounds3,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    state_bounds: Option<BoundsN>,
    obstacles: Vec<BoxSpec>,
    start: Vec<f64>,
    goal: GoalSpec,
}

impl From<EnvFile> for Environment {
    fn from(f: EnvFile) -> Self {
        Environment {
            name: f.name,
            workspace: Aabb::new(f.workspace.lo, f.workspace.hi),
            state_bounds: f.state_bounds.map(|b| StateBounds { lo: b.lo, hi: b.hi }),
            obstacles: f.obstacles.into_iter().map(|o| Aabb::new(o.min, o.max)).collect(),
            start: f.start,
            goal: GoalBall { center: f.goal.center, radius: f.goal.radius },
        }
    }
}

impl From<&Environment> for EnvFile {
    fn from(e: &Environment) -> Self {
        EnvFile {
            name: e.name.clone(),
            workspace: Bounds3 { lo: e.workspace.min, hi: e.workspace.max },
            state_bounds: e.state_bounds.as_ref().map(|b| BoundsN { lo: b.lo.clone(), hi: b.hi.clone() }),
            obstacles: e.obstacles.iter().map(|o| BoxSpec { min: o.min, max: o.max }).collect(),
            start: e.start.clone(),
            goal: GoalSpec { center: e.goal.center, radius: e.goal.radius },
        }
    }
}

/// Parses and validates an environment document.
pub fn parse_environment(text: &str) -> Result<Environment> {
    let file: EnvFile = serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
    let env = Environment::from(file);
    env.validate()?;
    Ok(env)
}

pub fn load_environment(path: impl AsRef<Path>) -> Result<Environment> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_environment(&text)
}

pub fn environment_to_json(env: &Environment) -> String {
    serde_json::to_string_pretty(&EnvFile::from(env)).expect("environment serializes")
}

pub fn save_environment(env: &Environment, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut text = environment_to_json(env);
    text.push('\n');
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}
