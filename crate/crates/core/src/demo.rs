//! Built-in three-area example scenario.
//!
//! `revenue_target` and `budget` in this file are illustrative series; every
//! other number is a reference input.

use crate::scenario::{parse_scenario, ScenarioConfig};

pub const DEMO_JSON: &str = include_str!("../data/demo.json");

pub fn demo_scenario() -> ScenarioConfig {
    parse_scenario(DEMO_JSON).expect("bundled demo scenario is valid")
}
