//! Portfolio projection by superposition of shifted unit curves.
//!
//! Conventions, with calendar years `t = 1..=T`:
//!
//! * projects counted "in year t" are evaluated at the end of year `t`;
//! * cost and revenue "in year t" are the amounts accrued over `(t - 1, t]`;
//! * `N[j][τ]` projects start at the beginning of year `τ`, i.e. at time `τ - 1`;
//! * the current portfolio is observed at time 0;
//! * nothing beyond the horizon is credited.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::riskmodel::{CurveBook, YearlyCurves};
use crate::scenario::{AreaParams, Phase, ScenarioConfig, PHASES};

/// Revenue rate `s` years after launch: linear ramp to peak over `U` years,
/// flat until loss of exclusivity at `Λ`, then a fraction `λ` of peak.
pub fn ramp_revenue(params: &AreaParams, s: f64) -> f64 {
    let peak = params.peak_year_revenue;
    let u = params.ramp_up_years;
    if s <= 0.0 {
        0.0
    } else if s <= u {
        s / u * peak
    } else if s <= params.exclusivity_years {
        peak
    } else {
        params.post_loe_fraction * peak
    }
}

/// `∫_0^s ramp_revenue`.
fn ramp_cumulative(params: &AreaParams, s: f64) -> f64 {
    let peak = params.peak_year_revenue;
    let u = params.ramp_up_years;
    let loe = params.exclusivity_years;
    if s <= 0.0 {
        0.0
    } else if s <= u {
        peak * s * s / (2.0 * u)
    } else if s <= loe {
        peak * (u / 2.0 + (s - u))
    } else {
        peak * (u / 2.0 + (loe - u) + params.post_loe_fraction * (s - loe))
    }
}

/// Revenue earned over `(a, b]` years after launch.
pub fn ramp_revenue_integral(params: &AreaParams, a: f64, b: f64) -> f64 {
    if b <= 0.0 || b <= a {
        return 0.0;
    }
    ramp_cumulative(params, b) - ramp_cumulative(params, a)
}

/// New projects entering phase 1, `n[area][year]`. Year index 0 is year 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DecisionMatrix {
    areas: usize,
    years: usize,
    cells: Vec<u32>,
}

impl DecisionMatrix {
    pub fn zeros(areas: usize, years: usize) -> Self {
        DecisionMatrix { areas, years, cells: vec![0; areas * years] }
    }

    /// Build from per-area rows of equal length.
    pub fn from_rows(rows: &[Vec<u32>]) -> Self {
        let years = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == years), "ragged decision rows");
        DecisionMatrix { areas: rows.len(), years, cells: rows.concat() }
    }

    pub fn areas(&self) -> usize {
        self.areas
    }

    pub fn years(&self) -> usize {
        self.years
    }

    pub fn get(&self, area: usize, year: usize) -> u32 {
        self.cells[area * self.years + year]
    }

    pub fn set(&mut self, area: usize, year: usize, value: u32) {
        self.cells[area * self.years + year] = value;
    }

    pub fn row(&self, area: usize) -> &[u32] {
        &self.cells[area * self.years..(area + 1) * self.years]
    }

    pub fn year_total(&self, year: usize) -> u32 {
        (0..self.areas).map(|a| self.get(a, year)).sum()
    }

    pub fn area_total(&self, area: usize) -> u32 {
        self.row(area).iter().sum()
    }

    pub fn total(&self) -> u32 {
        self.cells.iter().sum()
    }

    pub fn max_entry(&self) -> u32 {
        self.cells.iter().copied().max().unwrap_or(0)
    }

    /// Non-zero cells as `(area, year, count)`.
    pub fn nonzero(&self) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        self.cells.iter().enumerate().filter(|(_, &v)| v > 0).map(|(i, &v)| (i / self.years, i % self.years, v))
    }

    pub fn scaled(&self, factor: u32) -> Self {
        DecisionMatrix { cells: self.cells.iter().map(|v| v * factor).collect(), ..*self }
    }

    pub fn plus(&self, other: &DecisionMatrix) -> Self {
        assert_eq!((self.areas, self.years), (other.areas, other.years));
        DecisionMatrix { cells: self.cells.iter().zip(&other.cells).map(|(a, b)| a + b).collect(), ..*self }
    }

    /// Flat index of a cell, row-major by area.
    pub fn index(&self, area: usize, year: usize) -> usize {
        area * self.years + year
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.cells
    }

    pub(crate) fn from_flat(areas: usize, years: usize, cells: Vec<u32>) -> Self {
        assert_eq!(cells.len(), areas * years);
        DecisionMatrix { areas, years, cells }
    }
}

/// Expected counts and flows contributed by one group of projects.
#[derive(Debug, PartialEq, Serialize, Deserialize)]
pub struct Contribution {
    /// `per_phase[i][t - 1]`.
    pub per_phase: [Vec<f64>; PHASES],
    /// `per_area[j][t - 1]`.
    pub per_area: Vec<Vec<f64>>,
    pub cost: Vec<f64>,
    pub revenue: Vec<f64>,
    /// Expected launches per area within the horizon.
    pub launches: Vec<f64>,
}

impl Clone for Contribution {
    fn clone(&self) -> Self {
        Contribution {
            per_phase: self.per_phase.clone(),
            per_area: self.per_area.clone(),
            cost: self.cost.clone(),
            revenue: self.revenue.clone(),
            launches: self.launches.clone(),
        }
    }

    fn clone_from(&mut self, src: &Self) {
        self.per_phase.clone_from(&src.per_phase);
        self.per_area.clone_from(&src.per_area);
        self.cost.clone_from(&src.cost);
        self.revenue.clone_from(&src.revenue);
        self.launches.clone_from(&src.launches);
    }
}

impl Contribution {
    pub fn zeros(areas: usize, years: usize) -> Self {
        Contribution {
            per_phase: std::array::from_fn(|_| vec![0.0; years]),
            per_area: vec![vec![0.0; years]; areas],
            cost: vec![0.0; years],
            revenue: vec![0.0; years],
            launches: vec![0.0; areas],
        }
    }

    /// Add `scale` projects of `area` whose curve origin is at time `origin`
    /// (whole years). Launches are handled by the caller.
    fn add_shifted(&mut self, curves: &YearlyCurves, area: usize, origin: usize, scale: f64) {
        let horizon = self.cost.len();
        for t in origin.max(1)..=horizon {
            let e = t - origin;
            let mut in_area = 0.0;
            for (i, act) in curves.phase_activity.iter().enumerate() {
                let v = scale * act[e];
                self.per_phase[i][t - 1] += v;
                in_area += v;
            }
            self.per_area[area][t - 1] += in_area;
            if e >= 1 {
                self.cost[t - 1] += scale * curves.cost[e];
                self.revenue[t - 1] += scale * curves.revenue[e];
            }
        }
    }

    /// Add `scale` new projects of `area` starting at the beginning of year
    /// index `year` (0 = year 1).
    pub fn add_new(&mut self, curves: &YearlyCurves, area: usize, year: usize, scale: f64) {
        self.add_shifted(curves, area, year, scale);
        let horizon = self.cost.len();
        self.launches[area] += scale * curves.launch_cdf[horizon - year];
    }
}

/// Risk-adjusted portfolio time series for one decision matrix.
///
/// Totals are always `current + new` (plus marketed revenue), recomputed
/// from the components whenever the new-project part changes.
#[derive(Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjectionResult {
    /// Expected projects per phase, `projects_per_phase[i][t - 1]`.
    pub projects_per_phase: [Vec<f64>; PHASES],
    /// Expected projects per area, `projects_per_area[j][t - 1]`.
    pub projects_per_area: Vec<Vec<f64>>,
    pub cost: Vec<f64>,
    pub revenue: Vec<f64>,
    pub launches: Vec<f64>,
    pub revenue_marketed: Vec<f64>,
    pub current: Contribution,
    pub new: Contribution,
}

// `clone_from` reuses buffers; the annealer clones a projection per candidate.
impl Clone for ProjectionResult {
    fn clone(&self) -> Self {
        ProjectionResult {
            projects_per_phase: self.projects_per_phase.clone(),
            projects_per_area: self.projects_per_area.clone(),
            cost: self.cost.clone(),
            revenue: self.revenue.clone(),
            launches: self.launches.clone(),
            revenue_marketed: self.revenue_marketed.clone(),
            current: self.current.clone(),
            new: self.new.clone(),
        }
    }

    fn clone_from(&mut self, src: &Self) {
        self.projects_per_phase.clone_from(&src.projects_per_phase);
        self.projects_per_area.clone_from(&src.projects_per_area);
        self.cost.clone_from(&src.cost);
        self.revenue.clone_from(&src.revenue);
        self.launches.clone_from(&src.launches);
        self.revenue_marketed.clone_from(&src.revenue_marketed);
        self.current.clone_from(&src.current);
        self.new.clone_from(&src.new);
    }
}

impl ProjectionResult {
    pub fn years(&self) -> usize {
        self.cost.len()
    }

    pub fn areas(&self) -> usize {
        self.launches.len()
    }

    pub(crate) fn from_parts(revenue_marketed: Vec<f64>, current: Contribution, new: Contribution) -> Self {
        let years = revenue_marketed.len();
        let areas = current.launches.len();
        let mut out = ProjectionResult {
            projects_per_phase: std::array::from_fn(|_| vec![0.0; years]),
            projects_per_area: vec![vec![0.0; years]; areas],
            cost: vec![0.0; years],
            revenue: vec![0.0; years],
            launches: vec![0.0; areas],
            revenue_marketed,
            current,
            new,
        };
        out.refresh_totals();
        out
    }

    fn refresh_totals(&mut self) {
        let (c, n) = (&self.current, &self.new);
        for i in 0..PHASES {
            sum_into(&mut self.projects_per_phase[i], &c.per_phase[i], &n.per_phase[i]);
        }
        for j in 0..self.launches.len() {
            sum_into(&mut self.projects_per_area[j], &c.per_area[j], &n.per_area[j]);
        }
        sum_into(&mut self.cost, &c.cost, &n.cost);
        sum_into(&mut self.launches, &c.launches, &n.launches);
        for t in 0..self.revenue.len() {
            self.revenue[t] = self.revenue_marketed[t] + c.revenue[t] + n.revenue[t];
        }
    }

    /// Add `delta` new projects at `(area, year)` by superposing one shifted
    /// unit curve, without re-projecting the rest of the plan.
    pub fn apply_delta(&mut self, book: &CurveBook, area: usize, year: usize, delta: i64) {
        if delta == 0 {
            return;
        }
        self.new.add_new(&book.yearly_new[area], area, year, delta as f64);
        self.refresh_totals();
    }

    /// Number of projects active in any phase at the end of year index `t`.
    pub fn total_projects(&self, t: usize) -> f64 {
        self.projects_per_phase.iter().map(|p| p[t]).sum()
    }
}

fn sum_into(dst: &mut [f64], a: &[f64], b: &[f64]) {
    for ((d, x), y) in dst.iter_mut().zip(a).zip(b) {
        *d = x + y;
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ProjectionError {
    #[error("decision matrix is {got_areas} areas x {got_years} years, scenario expects {areas} x {years}")]
    DimensionMismatch { areas: usize, years: usize, got_areas: usize, got_years: usize },
    #[error("curves cover {curves} years and {curve_areas} areas, scenario has {horizon} years and {areas} areas")]
    CurveMismatch { curves: usize, curve_areas: usize, horizon: usize, areas: usize },
}

fn check_book(cfg: &ScenarioConfig, book: &CurveBook) -> Result<(), ProjectionError> {
    if book.grid.horizon_years != cfg.horizon() || book.area_count() != cfg.area_count() {
        return Err(ProjectionError::CurveMismatch {
            curves: book.grid.horizon_years,
            curve_areas: book.area_count(),
            horizon: cfg.horizon(),
            areas: cfg.area_count(),
        });
    }
    Ok(())
}

/// Risk-adjusted revenue of the current development portfolio, `R^K_t`.
///
/// Returns the scenario's override verbatim when one is supplied.
pub fn internal_dev_revenue(cfg: &ScenarioConfig, book: &CurveBook) -> Vec<f64> {
    if let Some(series) = &cfg.forecasts.dev_revenue_override {
        return series.clone();
    }
    current_contribution(cfg, book).revenue
}

fn current_contribution(cfg: &ScenarioConfig, book: &CurveBook) -> Contribution {
    let mut contrib = Contribution::zeros(cfg.area_count(), cfg.horizon());
    for (j, row) in book.yearly_current.iter().enumerate() {
        for phase in Phase::ALL {
            let k = cfg.current_portfolio.count(phase, j);
            if k == 0 {
                continue;
            }
            contrib.add_shifted(&row[phase.index()], j, 0, k as f64);
            contrib.launches[j] += k as f64 * book.current[j][phase.index()].eventual_launch;
        }
    }
    contrib
}

/// Projection with no new projects: current portfolio plus marketed revenue.
pub fn baseline(cfg: &ScenarioConfig, book: &CurveBook) -> Result<ProjectionResult, ProjectionError> {
    check_book(cfg, book)?;
    let mut current = current_contribution(cfg, book);
    if let Some(series) = &cfg.forecasts.dev_revenue_override {
        current.revenue = series.clone();
    }
    let marketed = cfg.forecasts.marketed_revenue.clone();
    Ok(ProjectionResult::from_parts(marketed, current, Contribution::zeros(cfg.area_count(), cfg.horizon())))
}

/// Full projection of the current portfolio plus the planned inflow `n`.
pub fn project_portfolio(cfg: &ScenarioConfig, book: &CurveBook, n: &DecisionMatrix) -> Result<ProjectionResult, ProjectionError> {
    let base = baseline(cfg, book)?;
    project_from_baseline(&base, book, n, cfg.inflow_years())
}

/// Full projection reusing a precomputed [`baseline`].
pub fn project_from_baseline(
    base: &ProjectionResult,
    book: &CurveBook,
    n: &DecisionMatrix,
    inflow_years: usize,
) -> Result<ProjectionResult, ProjectionError> {
    if n.areas() != base.areas() || n.years() != inflow_years || n.years() > base.years() {
        return Err(ProjectionError::DimensionMismatch {
            areas: base.areas(),
            years: inflow_years,
            got_areas: n.areas(),
            got_years: n.years(),
        });
    }
    let mut new = Contribution::zeros(base.areas(), base.years());
    for (area, year, count) in n.nonzero() {
        new.add_new(&book.yearly_new[area], area, year, count as f64);
    }
    Ok(ProjectionResult::from_parts(base.revenue_marketed.clone(), base.current.clone(), new))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn area(pyr: f64, u: f64, loe_frac: f64) -> AreaParams {
        AreaParams {
            id: "x".into(),
            median_duration: [2.0, 2.5, 3.5, 1.0],
            median_cost: [0.2, 0.3, 0.6, 0.1],
            sigma: 0.0,
            transition_prob: [0.6, 0.4, 0.7, 0.95],
            ramp_up_years: u,
            peak_year_revenue: pyr,
            exclusivity_years: 12.0,
            post_loe_fraction: loe_frac,
        }
    }

    #[test]
    fn ramp_examples() {
        assert_eq!(ramp_revenue(&area(5.0, 5.0, 0.1), 5.0), 5.0);
        assert_eq!(ramp_revenue(&area(1.5, 3.0, 0.2), 1.5), 0.75);
        assert!((ramp_revenue(&area(3.0, 4.0, 0.15), 13.0) - 0.45).abs() < 1e-15);
        assert_eq!(ramp_revenue(&area(3.0, 4.0, 0.15), 0.0), 0.0);
        assert_eq!(ramp_revenue(&area(3.0, 4.0, 0.15), -2.0), 0.0);
    }

    #[test]
    fn ramp_integral_matches_quadrature() {
        let p = area(3.0, 4.0, 0.15);
        for (a, b) in [(-1.0, 0.5), (0.5, 3.7), (3.0, 5.0), (11.2, 14.9), (0.0, 20.0)] {
            let steps = 200_000;
            let h = (b - a) / steps as f64;
            let quad: f64 = (0..steps).map(|k| ramp_revenue(&p, a + (k as f64 + 0.5) * h) * h).sum();
            // midpoint rule is off by up to h * jump across loss of exclusivity
            assert!((ramp_revenue_integral(&p, a, b) - quad).abs() < 3.0 * h, "({a}, {b})");
        }
    }

    #[test]
    fn decision_matrix_accessors() {
        let n = DecisionMatrix::from_rows(&[vec![1, 0, 2], vec![0, 3, 0]]);
        assert_eq!(n.year_total(1), 3);
        assert_eq!(n.area_total(0), 3);
        assert_eq!(n.total(), 6);
        assert_eq!(n.nonzero().collect::<Vec<_>>(), vec![(0, 0, 1), (0, 2, 2), (1, 1, 3)]);
        assert_eq!(n.scaled(2).get(1, 1), 6);
        assert_eq!(n.plus(&n).total(), 12);
    }
}
