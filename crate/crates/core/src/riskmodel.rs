//! Monte Carlo estimation of per-area unit curves.
//!
//! Phase durations and costs are lognormal around their medians; phase
//! success is applied analytically by weighting each phase with the
//! probability of reaching it. Each realization is tabulated on a regular
//! time grid and the curves are averages over realizations:
//!
//! * phase activity at grid points `t_k = k * step` (phase 1 is active on
//!   `[0, D1]`, later phases on `(S_{i-1}, S_i]` with `S_i` the cumulative
//!   duration);
//! * phase cost per grid cell `(t_k, t_{k+1}]`, with each phase's cost spread
//!   uniformly over its interval;
//! * launch probability `Q * Pr(total duration < t)` at grid points;
//! * expected revenue per grid cell, `Q * R(t - total duration)` integrated
//!   over the cell.
//!
//! Curves for projects already in the pipeline use the same realizations
//! shifted so that time zero sits in the middle of the starting phase, with
//! probabilities renormalized to the knowledge that the phase was reached.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::exec::Exec;
use crate::projection::ramp_revenue_integral;
use crate::rng::{self, Domain};
use crate::scenario::{AreaParams, Phase, ScenarioConfig, SolverSettings, PHASES};

/// Realizations per accumulation block. Fixed so that reductions happen in
/// the same order whatever the thread count.
const BLOCK: usize = 256;

/// One Monte Carlo draw of a project's phase durations and costs.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectRealization {
    pub duration: [f64; PHASES],
    pub cost: [f64; PHASES],
}

impl ProjectRealization {
    pub fn total_duration(&self) -> f64 {
        self.duration.iter().sum()
    }
}

/// Draw durations then costs, each `median * exp(sigma * z)`.
///
/// This is `lognormal(ln median, sigma)`; written this way so that
/// `sigma = 0` reproduces the medians exactly.
pub fn sample_realization<R: Rng + ?Sized>(params: &AreaParams, rng: &mut R) -> ProjectRealization {
    let mut draw = |median: f64| {
        let z: f64 = rng.sample(StandardNormal);
        median * (params.sigma * z).exp()
    };
    let duration = params.median_duration.map(&mut draw);
    let cost = params.median_cost.map(&mut draw);
    ProjectRealization { duration, cost }
}

/// Regular time grid covering `[0, horizon]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grid {
    pub steps_per_year: usize,
    pub horizon_years: usize,
}

impl Grid {
    pub fn new(steps_per_year: usize, horizon_years: usize) -> Self {
        assert!(steps_per_year > 0, "grid needs at least one step per year");
        Grid { steps_per_year, horizon_years }
    }

    pub fn from_settings(settings: &SolverSettings) -> Self {
        Grid::new(settings.steps_per_year(), settings.horizon_years as usize)
    }

    pub fn cells(&self) -> usize {
        self.steps_per_year * self.horizon_years
    }

    pub fn points(&self) -> usize {
        self.cells() + 1
    }

    pub fn step(&self) -> f64 {
        1.0 / self.steps_per_year as f64
    }

    /// Time of grid point `k`; exact for whole years.
    pub fn time(&self, k: usize) -> f64 {
        k as f64 / self.steps_per_year as f64
    }

    /// Smallest `k` with `t_k > a`, or `points()` if none.
    fn first_after(&self, a: f64) -> usize {
        if a < 0.0 {
            return 0;
        }
        if a >= self.horizon_years as f64 {
            return self.points();
        }
        let mut k = (a * self.steps_per_year as f64).floor() as usize;
        while k < self.points() && self.time(k) <= a {
            k += 1;
        }
        while k > 0 && self.time(k - 1) > a {
            k -= 1;
        }
        k
    }

    /// Number of grid points with `t_k <= b`.
    fn count_upto(&self, b: f64) -> usize {
        if b < 0.0 {
            return 0;
        }
        self.first_after(b)
    }

    /// Add `rate * |(a, b] ∩ cell|` to every cell.
    fn spread(&self, cells: &mut [f64], a: f64, b: f64, rate: f64) {
        let lo = a.max(0.0);
        let hi = b.min(self.horizon_years as f64);
        if hi <= lo {
            return;
        }
        let spy = self.steps_per_year as f64;
        let first = ((lo * spy).floor() as usize).min(self.cells());
        let last = ((hi * spy).ceil() as usize).min(self.cells());
        for (c, cell) in cells.iter_mut().enumerate().take(last).skip(first) {
            let overlap = b.min(self.time(c + 1)) - a.max(self.time(c));
            if overlap > 0.0 {
                *cell += rate * overlap;
            }
        }
    }
}

/// Risk-adjusted curves for one project template, all on one grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveTable {
    /// Probability of being active in each phase, at grid points.
    pub phase_activity: [Vec<f64>; PHASES],
    /// Probability of being active in any phase, at grid points.
    pub total_activity: Vec<f64>,
    /// Expected cost of each phase incurred in each grid cell ($Bn).
    pub phase_cost: [Vec<f64>; PHASES],
    /// Expected cost incurred in each grid cell, all phases ($Bn).
    pub cost: Vec<f64>,
    /// Probability of having launched by each grid point.
    pub launch_cdf: Vec<f64>,
    /// Expected revenue earned in each grid cell ($Bn).
    pub revenue: Vec<f64>,
}

impl CurveTable {
    /// Cost rate ($Bn/yr) over cell `c`.
    pub fn cost_rate(&self, grid: &Grid, c: usize) -> f64 {
        self.cost[c] * grid.steps_per_year as f64
    }

    /// Revenue rate ($Bn/yr) over cell `c`.
    pub fn revenue_rate(&self, grid: &Grid, c: usize) -> f64 {
        self.revenue[c] * grid.steps_per_year as f64
    }
}

/// Summary of the total development duration over realizations.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DurationStats {
    pub mean: f64,
    pub std_dev: f64,
    pub p05: f64,
    pub median: f64,
    pub p95: f64,
}

impl DurationStats {
    fn from_samples(mut xs: Vec<f64>) -> Self {
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
        xs.sort_by(f64::total_cmp);
        let q = |p: f64| xs[((p * (xs.len() - 1) as f64).round() as usize).min(xs.len() - 1)];
        DurationStats { mean, std_dev: var.sqrt(), p05: q(0.05), median: q(0.5), p95: q(0.95) }
    }
}

/// Unit curves for one newly started project in an area.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnitCurveSet {
    pub area_id: String,
    pub grid: Grid,
    pub curves: CurveTable,
    /// Probability of eventual launch, the product of all transition probabilities.
    pub overall_success: f64,
    pub total_duration: DurationStats,
}

/// Unit curves for one project that is currently mid-way through `starting_phase`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurrentProjectCurves {
    pub area_id: String,
    pub starting_phase: Phase,
    pub grid: Grid,
    pub curves: CurveTable,
    /// Probability of eventual launch from the starting phase.
    pub eventual_launch: f64,
}

impl CurrentProjectCurves {
    pub fn activity(&self) -> &[f64] {
        &self.curves.total_activity
    }
}

/// Block accumulator; sums over realizations before normalization.
struct Accum {
    phase_count: [Vec<u32>; PHASES],
    total_activity: Vec<f64>,
    phase_cost: [Vec<f64>; PHASES],
    launch_hist: Vec<u32>,
    revenue: Vec<f64>,
    durations: Vec<f64>,
}

impl Accum {
    fn new(grid: &Grid) -> Self {
        let (p, c) = (grid.points(), grid.cells());
        Accum {
            phase_count: std::array::from_fn(|_| vec![0; p]),
            total_activity: vec![0.0; p],
            phase_cost: std::array::from_fn(|_| vec![0.0; c]),
            launch_hist: vec![0; p],
            revenue: vec![0.0; c],
            durations: Vec::new(),
        }
    }

    fn merge(&mut self, other: Accum) {
        for i in 0..PHASES {
            add_into(&mut self.phase_count[i], &other.phase_count[i]);
            add_into(&mut self.phase_cost[i], &other.phase_cost[i]);
        }
        add_into(&mut self.total_activity, &other.total_activity);
        add_into(&mut self.launch_hist, &other.launch_hist);
        add_into(&mut self.revenue, &other.revenue);
        self.durations.extend(other.durations);
    }
}

fn add_into<T: Copy + std::ops::AddAssign>(dst: &mut [T], src: &[T]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d += *s;
    }
}

/// Tabulate one realization. New projects start phase 1 at time zero;
/// current projects are shifted so that zero is the middle of their phase.
fn accumulate(acc: &mut Accum, grid: &Grid, params: &AreaParams, real: &ProjectRealization, view: View) {
    let start = view.start();
    let s = start.index();
    let mut cumulative = [0.0; PHASES + 1];
    for i in 0..PHASES {
        cumulative[i + 1] = cumulative[i] + real.duration[i];
    }
    let offset = match view {
        View::New => 0.0,
        View::Current(_) => cumulative[s] + real.duration[s] / 2.0,
    };

    let mut weight = 1.0;
    for i in s..PHASES {
        if i > s {
            weight *= params.transition_prob[i - 1];
        }
        let a = cumulative[i] - offset;
        let b = cumulative[i + 1] - offset;
        // phase 1 of a new project is closed at the origin
        let lo = if view == View::New && i == 0 { 0 } else { grid.first_after(a) };
        let hi = grid.count_upto(b);
        for k in lo..hi {
            acc.phase_count[i][k] += 1;
            acc.total_activity[k] += weight;
        }
        grid.spread(&mut acc.phase_cost[i], a, b, weight * real.cost[i] / real.duration[i]);
    }

    let launch_prob = params.launch_probability_from(start);
    let remaining = cumulative[PHASES] - offset;
    let k = grid.first_after(remaining);
    if k < grid.points() {
        acc.launch_hist[k] += 1;
    }
    add_revenue(&mut acc.revenue, grid, params, remaining, launch_prob);
    acc.durations.push(remaining);
}

fn add_revenue(cells: &mut [f64], grid: &Grid, params: &AreaParams, launch: f64, weight: f64) {
    if weight == 0.0 || launch >= grid.horizon_years as f64 {
        return;
    }
    let first = ((launch.max(0.0) * grid.steps_per_year as f64).floor() as usize).min(grid.cells());
    for (c, cell) in cells.iter_mut().enumerate().skip(first) {
        let a = grid.time(c) - launch;
        let b = grid.time(c + 1) - launch;
        *cell += weight * ramp_revenue_integral(params, a, b);
    }
}

/// Which curve family a run estimates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum View {
    New,
    Current(Phase),
}

impl View {
    fn start(self) -> Phase {
        match self {
            View::New => Phase::One,
            View::Current(p) => p,
        }
    }
}

fn run_view(params: &AreaParams, settings: &SolverSettings, view: View, exec: Exec) -> (Grid, Accum) {
    let grid = Grid::from_settings(settings);
    let n = settings.mc_iterations.max(1) as usize;
    let blocks = n.div_ceil(BLOCK);
    let key = rng::label_hash(&params.id);
    let seed = settings.seed;
    let parts = exec.map_indexed(blocks, |b| {
        let mut acc = Accum::new(&grid);
        for r in b * BLOCK..((b + 1) * BLOCK).min(n) {
            let mut stream = rng::stream(seed, Domain::Curves, key, r as u64);
            let real = sample_realization(params, &mut stream);
            accumulate(&mut acc, &grid, params, &real, view);
        }
        acc
    });
    let mut total = Accum::new(&grid);
    for part in parts {
        total.merge(part);
    }
    (grid, total)
}

fn finalize(params: &AreaParams, start: Phase, grid: &Grid, acc: &Accum, n: usize) -> CurveTable {
    let nf = n as f64;
    let mut weight = 1.0;
    let mut phase_activity: [Vec<f64>; PHASES] = std::array::from_fn(|_| vec![0.0; grid.points()]);
    for i in start.index()..PHASES {
        if i > start.index() {
            weight *= params.transition_prob[i - 1];
        }
        phase_activity[i] = acc.phase_count[i].iter().map(|&c| weight * (c as f64 / nf)).collect();
    }
    let total_activity = acc.total_activity.iter().map(|v| v / nf).collect();
    let phase_cost: [Vec<f64>; PHASES] = std::array::from_fn(|i| acc.phase_cost[i].iter().map(|v| v / nf).collect());
    let cost = (0..grid.cells()).map(|c| phase_cost.iter().map(|p| p[c]).sum()).collect();
    let launch_prob = params.launch_probability_from(start);
    let mut cumulative = 0u64;
    let launch_cdf = acc
        .launch_hist
        .iter()
        .map(|&h| {
            cumulative += h as u64;
            launch_prob * (cumulative as f64 / nf)
        })
        .collect();
    let revenue = acc.revenue.iter().map(|v| v / nf).collect();
    CurveTable { phase_activity, total_activity, phase_cost, cost, launch_cdf, revenue }
}

/// Unit curves for a project entering phase 1 at time zero.
pub fn estimate_unit_curves(params: &AreaParams, settings: &SolverSettings) -> UnitCurveSet {
    estimate_unit_curves_with(params, settings, Exec::default())
}

pub fn estimate_unit_curves_with(params: &AreaParams, settings: &SolverSettings, exec: Exec) -> UnitCurveSet {
    let (grid, mut acc) = run_view(params, settings, View::New, exec);
    let n = settings.mc_iterations.max(1) as usize;
    let curves = finalize(params, Phase::One, &grid, &acc, n);
    UnitCurveSet {
        area_id: params.id.clone(),
        grid,
        curves,
        overall_success: params.overall_success(),
        total_duration: DurationStats::from_samples(std::mem::take(&mut acc.durations)),
    }
}

/// Unit curves for a project that is currently half-way through `starting_phase`.
pub fn estimate_current_curves(params: &AreaParams, starting_phase: Phase, settings: &SolverSettings) -> CurrentProjectCurves {
    estimate_current_curves_with(params, starting_phase, settings, Exec::default())
}

pub fn estimate_current_curves_with(
    params: &AreaParams,
    starting_phase: Phase,
    settings: &SolverSettings,
    exec: Exec,
) -> CurrentProjectCurves {
    let (grid, acc) = run_view(params, settings, View::Current(starting_phase), exec);
    let n = settings.mc_iterations.max(1) as usize;
    CurrentProjectCurves {
        area_id: params.id.clone(),
        starting_phase,
        grid,
        curves: finalize(params, starting_phase, &grid, &acc, n),
        eventual_launch: params.launch_probability_from(starting_phase),
    }
}

/// Curves aggregated to whole years of elapsed time since the curve origin.
///
/// Index `e` of the stock series is the value at the end of elapsed year `e`
/// (index 0 is the origin). Index `e >= 1` of the flow series is the amount
/// accrued over `(e - 1, e]`; index 0 is zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct YearlyCurves {
    pub phase_activity: [Vec<f64>; PHASES],
    pub cost: Vec<f64>,
    pub revenue: Vec<f64>,
    pub launch_cdf: Vec<f64>,
}

impl YearlyCurves {
    pub fn from_table(grid: &Grid, table: &CurveTable) -> Self {
        let spy = grid.steps_per_year;
        let years = grid.horizon_years;
        let stock = |v: &[f64]| (0..=years).map(|e| v[e * spy]).collect::<Vec<_>>();
        let flow = |v: &[f64]| {
            std::iter::once(0.0)
                .chain((1..=years).map(|e| v[(e - 1) * spy..e * spy].iter().sum()))
                .collect::<Vec<_>>()
        };
        YearlyCurves {
            phase_activity: std::array::from_fn(|i| stock(&table.phase_activity[i])),
            cost: flow(&table.cost),
            revenue: flow(&table.revenue),
            launch_cdf: stock(&table.launch_cdf),
        }
    }

    pub fn years(&self) -> usize {
        self.cost.len() - 1
    }
}

/// Every curve a scenario needs, estimated once and shared read-only.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveBook {
    pub grid: Grid,
    pub new: Vec<UnitCurveSet>,
    /// `current[area][phase]`.
    pub current: Vec<Vec<CurrentProjectCurves>>,
    pub yearly_new: Vec<YearlyCurves>,
    pub yearly_current: Vec<Vec<YearlyCurves>>,
}

impl CurveBook {
    pub fn estimate(cfg: &ScenarioConfig) -> Self {
        Self::estimate_with(cfg, Exec::default())
    }

    pub fn estimate_with(cfg: &ScenarioConfig, exec: Exec) -> Self {
        let settings = &cfg.solver;
        let new: Vec<_> = cfg.areas.iter().map(|a| estimate_unit_curves_with(a, settings, exec)).collect();
        let current: Vec<Vec<_>> = cfg
            .areas
            .iter()
            .map(|a| Phase::ALL.iter().map(|&p| estimate_current_curves_with(a, p, settings, exec)).collect())
            .collect();
        Self::from_parts(Grid::from_settings(settings), new, current)
    }

    pub fn from_parts(grid: Grid, new: Vec<UnitCurveSet>, current: Vec<Vec<CurrentProjectCurves>>) -> Self {
        let yearly_new = new.iter().map(|u| YearlyCurves::from_table(&grid, &u.curves)).collect();
        let yearly_current = current
            .iter()
            .map(|row| row.iter().map(|c| YearlyCurves::from_table(&grid, &c.curves)).collect())
            .collect();
        CurveBook { grid, new, current, yearly_new, yearly_current }
    }

    pub fn area_count(&self) -> usize {
        self.new.len()
    }
}
