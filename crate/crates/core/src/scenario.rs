//! Problem instance: disease-area parameters, current portfolio, balance
//! constraints, forecasts and solver settings.
//!
//! Scenarios are JSON documents. All currency is in $Bn and all times are in
//! years. Optional fields are filled with defaults at parse time, so a parsed
//! [`ScenarioConfig`] re-serializes to a fully explicit document.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Number of development phases (1, 2, 3 and registration).
pub const PHASES: usize = 4;

/// A development phase.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Phase {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "2")]
    Two,
    #[serde(rename = "3")]
    Three,
    #[serde(rename = "r")]
    Registration,
}

impl Phase {
    pub const ALL: [Phase; PHASES] = [Phase::One, Phase::Two, Phase::Three, Phase::Registration];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(index: usize) -> Option<Phase> {
        Self::ALL.get(index).copied()
    }

    pub fn label(self) -> &'static str {
        match self {
            Phase::One => "1",
            Phase::Two => "2",
            Phase::Three => "3",
            Phase::Registration => "r",
        }
    }

    pub fn from_label(label: &str) -> Option<Phase> {
        Self::ALL.into_iter().find(|p| p.label().eq_ignore_ascii_case(label))
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Template parameters shared by every project in one disease area.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AreaParams {
    pub id: String,
    /// Median phase duration in years, indexed by [`Phase::index`].
    pub median_duration: [f64; PHASES],
    /// Median phase cost in $Bn.
    pub median_cost: [f64; PHASES],
    /// Lognormal scale shared by all duration and cost draws of this area.
    pub sigma: f64,
    /// Probability of moving from each phase to the next (launch for `r`).
    pub transition_prob: [f64; PHASES],
    pub ramp_up_years: f64,
    /// Peak annual revenue of a launched product, $Bn/yr.
    pub peak_year_revenue: f64,
    #[serde(default = "defaults::exclusivity_years")]
    pub exclusivity_years: f64,
    /// Fraction of peak revenue retained after loss of exclusivity.
    pub post_loe_fraction: f64,
}

impl AreaParams {
    /// Probability that a newly started project is eventually launched.
    pub fn overall_success(&self) -> f64 {
        self.transition_prob.iter().product()
    }

    /// Probability that a project reaches `phase` from the start of phase 1.
    pub fn reach_probability(&self, phase: Phase) -> f64 {
        self.transition_prob[..phase.index()].iter().product()
    }

    /// Probability that a project currently in `phase` is eventually launched.
    pub fn launch_probability_from(&self, phase: Phase) -> f64 {
        self.transition_prob[phase.index()..].iter().product()
    }
}

/// Projects in development today, `counts[phase][area]`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CurrentPortfolio {
    pub counts: [Vec<u32>; PHASES],
}

impl CurrentPortfolio {
    pub fn count(&self, phase: Phase, area: usize) -> u32 {
        self.counts[phase.index()].get(area).copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.counts.iter().flatten().all(|&c| c == 0)
    }
}

/// Per-phase values keyed by phase label in the JSON document.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ByPhase<T: Default> {
    #[serde(rename = "1", default)]
    one: T,
    #[serde(rename = "2", default)]
    two: T,
    #[serde(rename = "3", default)]
    three: T,
    #[serde(rename = "r", default)]
    registration: T,
}

impl<T: Default> From<ByPhase<T>> for [T; PHASES] {
    fn from(b: ByPhase<T>) -> Self {
        [b.one, b.two, b.three, b.registration]
    }
}

impl<T: Default> From<[T; PHASES]> for ByPhase<T> {
    fn from([one, two, three, registration]: [T; PHASES]) -> Self {
        ByPhase { one, two, three, registration }
    }
}

impl Serialize for CurrentPortfolio {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ByPhase::from(self.counts.clone()).serialize(s)
    }
}

impl<'de> Deserialize<'de> for CurrentPortfolio {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let by: ByPhase<Vec<u32>> = ByPhase::deserialize(d)?;
        Ok(CurrentPortfolio { counts: by.into() })
    }
}

mod phase_minima {
    use super::{ByPhase, PHASES};
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[f64; PHASES], s: S) -> Result<S::Ok, S::Error> {
        ByPhase::from(*v).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<[f64; PHASES], D::Error> {
        Ok(ByPhase::<f64>::deserialize(d)?.into())
    }
}

/// Minimum-count, launch and ramp constraints.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BalanceConstraints {
    /// Minimum expected projects per phase (all areas), checked in the window.
    #[serde(default, with = "phase_minima")]
    pub min_per_phase: [f64; PHASES],
    /// Minimum expected projects per area (all phases), checked in the window.
    #[serde(default)]
    pub min_per_area: Vec<f64>,
    /// Minimum expected launches per area over the horizon.
    #[serde(default)]
    pub min_launches: Vec<f64>,
    /// Largest allowed year-on-year increase in inflow; `null` disables it.
    #[serde(default = "defaults::max_annual_increase")]
    pub max_annual_increase: Option<u32>,
    /// Inclusive year range `[start, end]` for the per-phase and per-area minima.
    #[serde(default = "defaults::enforce_window")]
    pub enforce_window: [u32; 2],
    /// Inflow in the year before planning starts. When set, the ramp
    /// constraint also applies to year 1.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub previous_inflow: Option<u32>,
    /// Apply the ramp constraint per area instead of on the yearly total.
    #[serde(default)]
    pub ramp_per_area: bool,
}

impl Default for BalanceConstraints {
    fn default() -> Self {
        BalanceConstraints {
            min_per_phase: [0.0; PHASES],
            min_per_area: Vec::new(),
            min_launches: Vec::new(),
            max_annual_increase: defaults::max_annual_increase(),
            enforce_window: defaults::enforce_window(),
            previous_inflow: None,
            ramp_per_area: false,
        }
    }
}

/// Yearly series indexed by year `1..=T` (stored zero-based).
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Forecasts {
    /// Revenue of currently marketed products.
    pub marketed_revenue: Vec<f64>,
    /// Risk-adjusted revenue of the current development portfolio. Computed
    /// from the portfolio when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dev_revenue_override: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub revenue_target: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean_revenue_target: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean_budget: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SaSchedule {
    /// Starting temperature; estimated from the initial design when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_temp: Option<f64>,
    #[serde(default = "defaults::cooling_factor")]
    pub cooling_factor: f64,
    #[serde(default = "defaults::iterations")]
    pub iterations: u64,
    #[serde(default = "defaults::moves_per_temp")]
    pub moves_per_temp: u64,
    /// Attempts to find a feasible neighbor before keeping the current design.
    #[serde(default = "defaults::max_retries")]
    pub max_retries: u32,
}

impl Default for SaSchedule {
    fn default() -> Self {
        SaSchedule {
            initial_temp: None,
            cooling_factor: defaults::cooling_factor(),
            iterations: defaults::iterations(),
            moves_per_temp: defaults::moves_per_temp(),
            max_retries: defaults::max_retries(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSettings {
    #[serde(default = "defaults::horizon_years")]
    pub horizon_years: u32,
    /// Number of decision years; defaults to the horizon.
    #[serde(default)]
    pub inflow_years: Option<u32>,
    /// Monte Carlo time grid resolution in years; `1 / grid_step` must be an integer.
    #[serde(default = "defaults::grid_step")]
    pub grid_step: f64,
    #[serde(default = "defaults::mc_iterations")]
    pub mc_iterations: u32,
    #[serde(default = "defaults::seed")]
    pub seed: u64,
    #[serde(default = "defaults::max_new_per_area_year")]
    pub max_new_per_area_year: u32,
    #[serde(default)]
    pub sa_schedule: SaSchedule,
    #[serde(default = "defaults::restarts")]
    pub restarts: u32,
}

impl Default for SolverSettings {
    fn default() -> Self {
        SolverSettings {
            horizon_years: defaults::horizon_years(),
            inflow_years: None,
            grid_step: defaults::grid_step(),
            mc_iterations: defaults::mc_iterations(),
            seed: defaults::seed(),
            max_new_per_area_year: defaults::max_new_per_area_year(),
            sa_schedule: SaSchedule::default(),
            restarts: defaults::restarts(),
        }
    }
}

impl SolverSettings {
    pub fn inflow_years(&self) -> u32 {
        self.inflow_years.unwrap_or(self.horizon_years)
    }

    /// Grid points per year. Only meaningful for a validated grid step.
    pub fn steps_per_year(&self) -> usize {
        (1.0 / self.grid_step).round().max(1.0) as usize
    }
}

/// A full problem instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub areas: Vec<AreaParams>,
    pub current_portfolio: CurrentPortfolio,
    #[serde(default)]
    pub constraints: BalanceConstraints,
    pub forecasts: Forecasts,
    #[serde(default)]
    pub solver: SolverSettings,
}

impl ScenarioConfig {
    pub fn area_count(&self) -> usize {
        self.areas.len()
    }

    pub fn horizon(&self) -> usize {
        self.solver.horizon_years as usize
    }

    pub fn inflow_years(&self) -> usize {
        self.solver.inflow_years() as usize
    }

    /// Pretty JSON with every default spelled out.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }

    /// Zero-fill per-area vectors that were omitted and resolve defaults that
    /// depend on other fields.
    fn normalize(&mut self) {
        let n = self.areas.len();
        for counts in &mut self.current_portfolio.counts {
            if counts.is_empty() {
                counts.resize(n, 0);
            }
        }
        if self.constraints.min_per_area.is_empty() {
            self.constraints.min_per_area.resize(n, 0.0);
        }
        if self.constraints.min_launches.is_empty() {
            self.constraints.min_launches.resize(n, 0.0);
        }
        if self.solver.inflow_years.is_none() {
            self.solver.inflow_years = Some(self.solver.horizon_years);
        }
        let f = &mut self.forecasts;
        if f.mean_revenue_target.is_none() {
            f.mean_revenue_target = f.revenue_target.as_deref().and_then(mean);
        }
        if f.mean_budget.is_none() {
            f.mean_budget = f.budget.as_deref().and_then(mean);
        }
    }
}

fn mean(xs: &[f64]) -> Option<f64> {
    (!xs.is_empty()).then(|| xs.iter().sum::<f64>() / xs.len() as f64)
}

#[derive(Debug, Error, PartialEq)]
pub enum ScenarioError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("missing required field: {0}")]
    MissingField(String),
    #[error("type mismatch at {path}: {message}")]
    TypeMismatch { path: String, message: String },
    #[error("invalid scenario: {}", .0.join("; "))]
    Invalid(Vec<String>),
}

/// Parse a scenario document, apply defaults and validate it.
pub fn parse_scenario(text: &str) -> Result<ScenarioConfig, ScenarioError> {
    let cfg = parse_unvalidated(text)?;
    let violations = validate(&cfg);
    if violations.is_empty() {
        Ok(cfg)
    } else {
        Err(ScenarioError::Invalid(violations))
    }
}

/// Parse and apply defaults without checking invariants.
pub fn parse_unvalidated(text: &str) -> Result<ScenarioConfig, ScenarioError> {
    let text = if text.trim().is_empty() { "{}" } else { text };
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| ScenarioError::Syntax {
        line: e.line(),
        column: e.column(),
        message: strip_position(&e.to_string()),
    })?;
    let mut cfg: ScenarioConfig = serde_path_to_error::deserialize(value).map_err(|e| {
        let path = e.path().to_string();
        let message = e.inner().to_string();
        match missing_field_name(&message) {
            Some(field) if path == "." => ScenarioError::MissingField(field.to_string()),
            Some(field) => ScenarioError::MissingField(format!("{path}.{field}")),
            None => ScenarioError::TypeMismatch { path, message },
        }
    })?;
    cfg.normalize();
    Ok(cfg)
}

fn missing_field_name(message: &str) -> Option<&str> {
    let rest = message.strip_prefix("missing field `")?;
    rest.split('`').next()
}

fn strip_position(message: &str) -> String {
    match message.rfind(" at line ") {
        Some(idx) => message[..idx].to_string(),
        None => message.to_string(),
    }
}

/// List every violated invariant. Empty means the scenario is usable.
pub fn validate(cfg: &ScenarioConfig) -> Vec<String> {
    let mut out = Vec::new();
    let n_areas = cfg.areas.len();
    let horizon = cfg.solver.horizon_years as usize;

    if cfg.areas.is_empty() {
        out.push("areas: at least one disease area is required".to_string());
    }
    let mut seen = HashSet::new();
    for area in &cfg.areas {
        let who = format!("area {}", area.id);
        if !seen.insert(area.id.as_str()) {
            out.push(format!("{who}: duplicate area id"));
        }
        for phase in Phase::ALL {
            let i = phase.index();
            let d = area.median_duration[i];
            if !(d.is_finite() && d > 0.0) {
                out.push(format!("{who} phase {phase}: duration must be positive"));
            }
            let c = area.median_cost[i];
            if !(c.is_finite() && c >= 0.0) {
                out.push(format!("{who} phase {phase}: cost must be nonnegative"));
            }
            let p = area.transition_prob[i];
            if !(p > 0.0 && p <= 1.0) {
                out.push(format!("{who} phase {phase}: probability out of range"));
            }
        }
        if !(area.sigma.is_finite() && area.sigma >= 0.0) {
            out.push(format!("{who}: sigma must be nonnegative"));
        }
        if !(area.post_loe_fraction >= 0.0 && area.post_loe_fraction <= 1.0) {
            out.push(format!("{who}: post_loe_fraction must lie in [0, 1]"));
        }
        if !(area.ramp_up_years.is_finite() && area.ramp_up_years > 0.0) {
            out.push(format!("{who}: ramp_up_years must be positive"));
        }
        if !(area.exclusivity_years.is_finite() && area.exclusivity_years > area.ramp_up_years) {
            out.push(format!("{who}: exclusivity_years must exceed ramp_up_years"));
        }
        if !(area.peak_year_revenue.is_finite() && area.peak_year_revenue >= 0.0) {
            out.push(format!("{who}: peak_year_revenue must be nonnegative"));
        }
    }

    for phase in Phase::ALL {
        let got = cfg.current_portfolio.counts[phase.index()].len();
        if got != n_areas {
            out.push(format!("current_portfolio phase {phase}: expected {n_areas} entries, got {got}"));
        }
    }

    let c = &cfg.constraints;
    for phase in Phase::ALL {
        let f = c.min_per_phase[phase.index()];
        if !(f.is_finite() && f >= 0.0) {
            out.push(format!("min_per_phase {phase}: must be nonnegative"));
        }
    }
    check_area_minima(&mut out, "min_per_area", &c.min_per_area, n_areas);
    check_area_minima(&mut out, "min_launches", &c.min_launches, n_areas);
    let [start, end] = c.enforce_window;
    if !(1 <= start && start <= end && end as usize <= horizon) {
        out.push(format!("enforce_window: need 1 <= {start} <= {end} <= {horizon}"));
    }

    let f = &cfg.forecasts;
    check_series(&mut out, "marketed_revenue", Some(&f.marketed_revenue), horizon);
    check_series(&mut out, "dev_revenue_override", f.dev_revenue_override.as_deref(), horizon);
    check_series(&mut out, "revenue_target", f.revenue_target.as_deref(), horizon);
    check_series(&mut out, "budget", f.budget.as_deref(), horizon);
    for (name, v) in [("mean_revenue_target", f.mean_revenue_target), ("mean_budget", f.mean_budget)] {
        if let Some(v) = v {
            if !(v.is_finite() && v >= 0.0) {
                out.push(format!("{name}: must be nonnegative"));
            }
        }
    }

    let s = &cfg.solver;
    let inflow = s.inflow_years();
    if !(s.horizon_years >= inflow && inflow >= 1) {
        out.push(format!("solver: need horizon_years ({}) >= inflow_years ({inflow}) >= 1", s.horizon_years));
    }
    let per_year = 1.0 / s.grid_step;
    if !(s.grid_step > 0.0 && s.grid_step <= 1.0 && (per_year - per_year.round()).abs() < 1e-9) {
        out.push(format!("solver.grid_step: {} does not divide one year evenly", s.grid_step));
    }
    if s.mc_iterations < 1 {
        out.push("solver.mc_iterations: must be at least 1".to_string());
    }
    let sa = &s.sa_schedule;
    if !(sa.cooling_factor > 0.0 && sa.cooling_factor <= 1.0) {
        out.push("solver.sa_schedule.cooling_factor: must lie in (0, 1]".to_string());
    }
    if sa.moves_per_temp < 1 {
        out.push("solver.sa_schedule.moves_per_temp: must be at least 1".to_string());
    }
    if let Some(t) = sa.initial_temp {
        if !(t.is_finite() && t >= 0.0) {
            out.push("solver.sa_schedule.initial_temp: must be nonnegative".to_string());
        }
    }
    if s.restarts < 1 {
        out.push("solver.restarts: must be at least 1".to_string());
    }
    out
}

fn check_area_minima(out: &mut Vec<String>, name: &str, values: &[f64], n_areas: usize) {
    if values.len() != n_areas {
        out.push(format!("{name}: expected {n_areas} entries, got {}", values.len()));
    }
    for (j, v) in values.iter().enumerate() {
        if !(v.is_finite() && *v >= 0.0) {
            out.push(format!("{name}[{}]: must be nonnegative", j + 1));
        }
    }
}

fn check_series(out: &mut Vec<String>, name: &str, series: Option<&[f64]>, horizon: usize) {
    let Some(series) = series else { return };
    if series.len() != horizon {
        out.push(format!("{name}: expected {horizon} entries, got {}", series.len()));
    }
    if let Some(t) = series.iter().position(|v| !(v.is_finite() && *v >= 0.0)) {
        out.push(format!("{name}: year {} is negative or not finite", t + 1));
    }
}

mod defaults {
    pub fn exclusivity_years() -> f64 {
        12.0
    }
    pub fn max_annual_increase() -> Option<u32> {
        Some(2)
    }
    pub fn enforce_window() -> [u32; 2] {
        [3, 20]
    }
    pub fn horizon_years() -> u32 {
        30
    }
    pub fn grid_step() -> f64 {
        1.0 / 12.0
    }
    pub fn mc_iterations() -> u32 {
        10_000
    }
    pub fn seed() -> u64 {
        1
    }
    pub fn max_new_per_area_year() -> u32 {
        8
    }
    pub fn cooling_factor() -> f64 {
        0.95
    }
    pub fn iterations() -> u64 {
        100_000
    }
    pub fn moves_per_temp() -> u64 {
        200
    }
    pub fn max_retries() -> u32 {
        50
    }
    pub fn restarts() -> u32 {
        4
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minimal() -> String {
        let revenue = vec![1.0; 30];
        serde_json::json!({
            "areas": [{
                "id": "1",
                "median_duration": [2.0, 2.5, 3.5, 1.0],
                "median_cost": [0.2, 0.3, 0.6, 0.1],
                "sigma": 0.4,
                "transition_prob": [0.6, 0.4, 0.7, 0.95],
                "ramp_up_years": 3.0,
                "peak_year_revenue": 1.5,
                "post_loe_fraction": 0.2
            }],
            "current_portfolio": {"1": [6]},
            "forecasts": {"marketed_revenue": revenue}
        })
        .to_string()
    }

    #[test]
    fn defaults_are_applied() {
        let cfg = parse_scenario(&minimal()).unwrap();
        assert_eq!(cfg.areas[0].exclusivity_years, 12.0);
        assert_eq!(cfg.constraints.max_annual_increase, Some(2));
        assert_eq!(cfg.constraints.enforce_window, [3, 20]);
        assert_eq!(cfg.solver.max_new_per_area_year, 8);
        assert_eq!(cfg.solver.steps_per_year(), 12);
        assert_eq!(cfg.solver.mc_iterations, 10_000);
        assert_eq!(cfg.inflow_years(), 30);
        assert_eq!(cfg.current_portfolio.counts[1], vec![0]);
        assert_eq!(cfg.constraints.min_launches, vec![0.0]);
    }

    #[test]
    fn empty_document_reports_areas() {
        for text in ["", "  \n", "{}"] {
            let err = parse_scenario(text).unwrap_err();
            assert_eq!(err.to_string(), "missing required field: areas");
        }
    }

    #[test]
    fn syntax_error_has_position() {
        let err = parse_scenario("{\n  \"areas\": [,]\n}").unwrap_err();
        match err {
            ScenarioError::Syntax { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn nested_missing_field_and_type_mismatch() {
        let mut v: serde_json::Value = serde_json::from_str(&minimal()).unwrap();
        v["areas"][0].as_object_mut().unwrap().remove("sigma");
        let err = parse_scenario(&v.to_string()).unwrap_err();
        assert_eq!(err, ScenarioError::MissingField("areas[0].sigma".into()));

        let mut v: serde_json::Value = serde_json::from_str(&minimal()).unwrap();
        v["solver"] = serde_json::json!({"seed": "seven"});
        match parse_scenario(&v.to_string()).unwrap_err() {
            ScenarioError::TypeMismatch { path, .. } => assert_eq!(path, "solver.seed"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn negative_sigma_is_rejected() {
        let text = minimal().replace("\"sigma\":0.4", "\"sigma\":-0.1");
        match parse_scenario(&text).unwrap_err() {
            ScenarioError::Invalid(v) => assert_eq!(v, vec!["area 1: sigma must be nonnegative".to_string()]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn probability_and_series_length_messages() {
        let mut cfg = parse_scenario(&minimal()).unwrap();
        cfg.areas[0].transition_prob[1] = 1.2;
        cfg.forecasts.marketed_revenue.pop();
        assert_eq!(
            validate(&cfg),
            vec![
                "area 1 phase 2: probability out of range".to_string(),
                "marketed_revenue: expected 30 entries, got 29".to_string(),
            ]
        );
    }

    #[test]
    fn grid_step_must_divide_a_year() {
        let mut cfg = parse_scenario(&minimal()).unwrap();
        cfg.solver.grid_step = 0.3;
        assert_eq!(validate(&cfg).len(), 1);
        cfg.solver.grid_step = 0.25;
        assert!(validate(&cfg).is_empty());
    }

    #[test]
    fn unlimited_ramp_is_null() {
        let mut v: serde_json::Value = serde_json::from_str(&minimal()).unwrap();
        v["constraints"] = serde_json::json!({"max_annual_increase": null});
        let cfg = parse_scenario(&v.to_string()).unwrap();
        assert_eq!(cfg.constraints.max_annual_increase, None);
        let again = parse_scenario(&cfg.to_json()).unwrap();
        assert_eq!(again.constraints.max_annual_increase, None);
    }

    #[test]
    fn survival_products() {
        let cfg = parse_scenario(&minimal()).unwrap();
        let a = &cfg.areas[0];
        assert_eq!(a.reach_probability(Phase::One), 1.0);
        assert_eq!(a.reach_probability(Phase::Two), 0.6);
        assert_eq!(a.launch_probability_from(Phase::Registration), 0.95);
        assert!((a.launch_probability_from(Phase::Three) - 0.665).abs() < 1e-15);
    }
}
