//! Constraint-respecting simulated annealing over decision matrices.
//!
//! Every design the search holds is feasible. A neighbor adds one project,
//! removes one, or does both in two different cells; infeasible candidates
//! are redrawn a bounded number of times. Candidates are evaluated
//! incrementally by superposing (or removing) one shifted unit curve, and
//! the chain re-projects from scratch at every temperature step so rounding
//! never accumulates.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec::Exec;
use crate::objectives::{check_constraints, objective_value, violation_score, ConstraintReport, ObjectiveSpec, FEASIBILITY_TOL};
use crate::projection::{baseline, project_from_baseline, DecisionMatrix, ProjectionError, ProjectionResult};
use crate::riskmodel::CurveBook;
use crate::rng::{self, Domain};
use crate::scenario::{SaSchedule, ScenarioConfig};

/// Neighbors sampled to estimate the starting temperature.
const TEMPERATURE_PROBES: usize = 100;

#[derive(Debug, Error, PartialEq)]
pub enum AnnealError {
    #[error("no feasible plan found: {0}")]
    Infeasible(String),
    #[error(transparent)]
    Projection(#[from] ProjectionError),
}

/// Shared, read-only evaluation context for one (scenario, curves, framing).
pub struct Evaluator<'a> {
    pub cfg: &'a ScenarioConfig,
    pub book: &'a CurveBook,
    pub spec: &'a ObjectiveSpec,
    base: ProjectionResult,
}

impl<'a> Evaluator<'a> {
    pub fn new(cfg: &'a ScenarioConfig, book: &'a CurveBook, spec: &'a ObjectiveSpec) -> Result<Self, AnnealError> {
        Ok(Evaluator { cfg, book, spec, base: baseline(cfg, book)? })
    }

    pub fn baseline(&self) -> &ProjectionResult {
        &self.base
    }

    pub fn empty_plan(&self) -> DecisionMatrix {
        DecisionMatrix::zeros(self.cfg.area_count(), self.cfg.inflow_years())
    }

    /// Full re-projection of `n`.
    pub fn project(&self, n: &DecisionMatrix) -> ProjectionResult {
        project_from_baseline(&self.base, self.book, n, self.cfg.inflow_years()).expect("plan dimensions match the scenario")
    }

    pub fn report(&self, n: &DecisionMatrix, proj: &ProjectionResult) -> ConstraintReport {
        check_constraints(proj, n, self.cfg, self.spec)
    }

    pub fn value(&self, proj: &ProjectionResult) -> f64 {
        objective_value(proj, self.spec)
    }

    fn cap(&self) -> u32 {
        self.cfg.solver.max_new_per_area_year
    }
}

/// A feasible design with its projection and objective value.
#[derive(Clone, Debug)]
struct State {
    plan: DecisionMatrix,
    proj: ProjectionResult,
    value: f64,
}

/// A single change of one cell by `±1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Step {
    area: usize,
    year: usize,
    delta: i64,
}

fn apply(eval: &Evaluator, plan: &mut DecisionMatrix, proj: &mut ProjectionResult, step: Step) {
    let v = plan.get(step.area, step.year) as i64 + step.delta;
    plan.set(step.area, step.year, v as u32);
    proj.apply_delta(eval.book, step.area, step.year, step.delta);
}

/// Draw one move: add, remove, or add-and-remove in two distinct cells.
fn draw_move(plan: &DecisionMatrix, cap: u32, rng: &mut ChaCha8Rng) -> Option<Vec<Step>> {
    let (areas, years) = (plan.areas(), plan.years());
    let cell = |rng: &mut ChaCha8Rng| (rng.random_range(0..areas), rng.random_range(0..years));
    let kind = rng.random_range(0..3u8);
    let add = |(area, year): (usize, usize)| (plan.get(area, year) < cap).then_some(Step { area, year, delta: 1 });
    let remove = |(area, year): (usize, usize)| (plan.get(area, year) > 0).then_some(Step { area, year, delta: -1 });
    match kind {
        0 => add(cell(rng)).map(|s| vec![s]),
        1 => remove(cell(rng)).map(|s| vec![s]),
        _ => {
            let a = cell(rng);
            let r = cell(rng);
            if a == r {
                return None;
            }
            Some(vec![add(a)?, remove(r)?])
        }
    }
}

/// Up to `retries` draws until a feasible neighbor of `state` turns up.
/// On success the neighbor is left in `out`, whose buffers are reused.
fn propose(eval: &Evaluator, state: &State, retries: u32, rng: &mut ChaCha8Rng, out: &mut State) -> bool {
    if state.plan.areas() == 0 || state.plan.years() == 0 {
        return false;
    }
    for _ in 0..retries.max(1) {
        let Some(steps) = draw_move(&state.plan, eval.cap(), rng) else { continue };
        out.plan.clone_from(&state.plan);
        out.proj.clone_from(&state.proj);
        for &s in &steps {
            apply(eval, &mut out.plan, &mut out.proj, s);
        }
        if eval.report(&out.plan, &out.proj).feasible {
            out.value = eval.value(&out.proj);
            return true;
        }
    }
    false
}

/// A random feasible neighbor of `n`, or `n` itself when none is found
/// within the configured number of retries.
pub fn propose_neighbor(eval: &Evaluator, n: &DecisionMatrix, rng: &mut ChaCha8Rng) -> DecisionMatrix {
    let proj = eval.project(n);
    let value = eval.value(&proj);
    let state = State { plan: n.clone(), proj, value };
    let mut out = state.clone();
    if propose(eval, &state, eval.cfg.solver.sa_schedule.max_retries, rng, &mut out) {
        out.plan
    } else {
        n.clone()
    }
}

/// Greedy descent on the total constraint shortfall, starting from the
/// empty plan. Each step applies the single `±1` change (never breaking the
/// ramp limit or the per-cell cap) that reduces the shortfall most; earlier
/// years win ties. When no single change helps, pairs of changes in two
/// different cells are tried, and after that a seeded annealing run on the
/// shortfall itself before giving up.
pub fn construct_feasible(eval: &Evaluator) -> Result<DecisionMatrix, AnnealError> {
    let cfg = eval.cfg;
    let mut plan = eval.empty_plan();
    let mut proj = eval.project(&plan);
    let cap = eval.cap();
    let try_steps = |plan: &DecisionMatrix, proj: &ProjectionResult, steps: &[Step]| -> Option<f64> {
        let mut p = plan.clone();
        let mut q = proj.clone();
        for &s in steps {
            apply(eval, &mut p, &mut q, s);
        }
        if eval.report(&p, &q).slack_ramp.iter().any(|&s| s < -FEASIBILITY_TOL) {
            return None;
        }
        Some(violation_score(&q, cfg, eval.spec))
    };
    loop {
        let report = eval.report(&plan, &proj);
        if report.feasible {
            return Ok(plan);
        }
        let score = violation_score(&proj, cfg, eval.spec);
        let mut singles = Vec::new();
        for year in 0..plan.years() {
            for area in 0..plan.areas() {
                let here = plan.get(area, year);
                if here < cap {
                    singles.push(Step { area, year, delta: 1 });
                }
                if here > 0 {
                    singles.push(Step { area, year, delta: -1 });
                }
            }
        }
        let mut best: Option<(f64, Vec<Step>)> = None;
        let consider = |best: &mut Option<(f64, Vec<Step>)>, steps: Vec<Step>| {
            if let Some(s) = try_steps(&plan, &proj, &steps) {
                if best.as_ref().is_none_or(|(b, _)| s < b - 1e-12) {
                    *best = Some((s, steps));
                }
            }
        };
        for &step in &singles {
            consider(&mut best, vec![step]);
        }
        if best.as_ref().is_none_or(|(s, _)| *s >= score - 1e-12) {
            for (k, &a) in singles.iter().enumerate() {
                for &b in &singles[k + 1..] {
                    if (a.area, a.year) != (b.area, b.year) {
                        consider(&mut best, vec![a, b]);
                    }
                }
            }
        }
        match best {
            Some((s, steps)) if s < score - 1e-12 => {
                for step in steps {
                    apply(eval, &mut plan, &mut proj, step);
                }
            }
            _ => {
                if let Some(found) = repair(eval, &plan, &proj, score) {
                    return Ok(found);
                }
                let names = report.violations(eval.spec.framing);
                let first = names.into_iter().next().unwrap_or_else(|| "max annual increase".to_string());
                return Err(AnnealError::Infeasible(first));
            }
        }
    }
}

/// Metropolis search on the constraint shortfall, starting from a stalled
/// greedy design. Moves never break the ramp limit or the cell cap; the
/// first fully feasible design is returned.
fn repair(eval: &Evaluator, plan: &DecisionMatrix, proj: &ProjectionResult, score: f64) -> Option<DecisionMatrix> {
    if plan.areas() == 0 || plan.years() == 0 {
        return None;
    }
    let cfg = eval.cfg;
    let schedule = &cfg.solver.sa_schedule;
    let mut rng = rng::stream(cfg.solver.seed, Domain::Construct, 0, 0);
    let step = |plan: &DecisionMatrix, proj: &ProjectionResult, rng: &mut ChaCha8Rng| {
        let steps = draw_move(plan, eval.cap(), rng)?;
        let mut p = plan.clone();
        let mut q = proj.clone();
        for &s in &steps {
            apply(eval, &mut p, &mut q, s);
        }
        let report = eval.report(&p, &q);
        if report.slack_ramp.iter().any(|&s| s < -FEASIBILITY_TOL) {
            return None;
        }
        let s = violation_score(&q, cfg, eval.spec);
        Some((p, q, s, report.feasible))
    };

    let probes: Vec<f64> = (0..TEMPERATURE_PROBES).filter_map(|_| step(plan, proj, &mut rng).map(|c| c.2 - score)).collect();
    let mut temp = probes.iter().map(|d| d.abs()).sum::<f64>() / probes.len().max(1) as f64;
    let (mut plan, mut proj, mut score) = (plan.clone(), proj.clone(), score);
    let moves_per_temp = schedule.moves_per_temp.max(1);
    for iteration in 0..schedule.iterations {
        if let Some((p, q, s, feasible)) = step(&plan, &proj, &mut rng) {
            if feasible {
                return Some(p);
            }
            let u: f64 = rng.random();
            if s <= score || (temp > 0.0 && u < (-(s - score) / temp).exp()) {
                (plan, proj, score) = (p, q, s);
            }
        }
        if (iteration + 1) % moves_per_temp == 0 {
            temp *= schedule.cooling_factor;
            proj = eval.project(&plan);
            score = violation_score(&proj, cfg, eval.spec);
        }
    }
    None
}

/// One proposal of an annealing chain.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub iteration: u64,
    /// Objective of the current design after this proposal.
    pub value: f64,
    pub accepted: bool,
}

/// Settings that produced a result.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SettingsEcho {
    pub seed: u64,
    pub restarts: u32,
    pub schedule: SaSchedule,
    /// Temperature actually used at the start of every chain.
    pub initial_temp: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizationResult {
    pub best: DecisionMatrix,
    pub best_value: f64,
    /// Full projection of `best`.
    pub projection: ProjectionResult,
    pub report: ConstraintReport,
    /// Objective of the constructed starting design.
    pub initial_value: f64,
    /// Trace of the winning chain.
    pub trace: Vec<TraceRecord>,
    /// Best value reached by each restart.
    pub restart_values: Vec<f64>,
    pub winning_restart: usize,
    pub settings_echo: SettingsEcho,
}

struct ChainOutcome {
    best: DecisionMatrix,
    best_value: f64,
    trace: Vec<TraceRecord>,
}

/// Standard deviation of objective values over random feasible neighbors.
fn estimate_temperature(eval: &Evaluator, start: &State, seed: u64) -> f64 {
    let mut rng = rng::stream(seed, Domain::Temperature, 0, 0);
    let retries = eval.cfg.solver.sa_schedule.max_retries;
    let mut out = start.clone();
    let values: Vec<f64> =
        (0..TEMPERATURE_PROBES).filter_map(|_| propose(eval, start, retries, &mut rng, &mut out).then_some(out.value)).collect();
    if values.len() < 2 {
        return 0.0;
    }
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / values.len() as f64;
    var.sqrt()
}

fn run_chain(eval: &Evaluator, start: &State, temp0: f64, seed: u64, restart: usize) -> ChainOutcome {
    let schedule = &eval.cfg.solver.sa_schedule;
    let mut rng = rng::stream(seed, Domain::Anneal, restart as u64, 0);
    let mut current = start.clone();
    let mut cand = start.clone();
    let mut best = (current.plan.clone(), current.value);
    let mut temp = temp0;
    let moves_per_temp = schedule.moves_per_temp.max(1);
    let mut trace = Vec::with_capacity(schedule.iterations as usize);

    for iteration in 0..schedule.iterations {
        let mut accepted = false;
        if propose(eval, &current, schedule.max_retries, &mut rng, &mut cand) {
            let worse_by = cand.value - current.value;
            let u: f64 = rng.random();
            accepted = if temp > 0.0 { worse_by <= 0.0 || u < (-worse_by / temp).exp() } else { worse_by <= 0.0 };
            if accepted {
                std::mem::swap(&mut current, &mut cand);
                if current.value < best.1 {
                    best = (current.plan.clone(), current.value);
                }
            }
        }
        trace.push(TraceRecord { iteration, value: current.value, accepted });

        if (iteration + 1) % moves_per_temp == 0 {
            temp *= schedule.cooling_factor;
            current.proj = eval.project(&current.plan);
            current.value = eval.value(&current.proj);
            debug_assert!(eval.report(&current.plan, &current.proj).feasible, "annealer left the feasible region");
        }
    }
    ChainOutcome { best: best.0, best_value: best.1, trace }
}

/// Anneal from the greedy feasible design, running `restarts` independent
/// chains and keeping the best (lowest restart index on ties).
pub fn anneal(cfg: &ScenarioConfig, book: &CurveBook, spec: &ObjectiveSpec) -> Result<OptimizationResult, AnnealError> {
    anneal_with(cfg, book, spec, Exec::default())
}

pub fn anneal_with(cfg: &ScenarioConfig, book: &CurveBook, spec: &ObjectiveSpec, exec: Exec) -> Result<OptimizationResult, AnnealError> {
    let eval = Evaluator::new(cfg, book, spec)?;
    let plan = construct_feasible(&eval)?;
    let proj = eval.project(&plan);
    let value = eval.value(&proj);
    let start = State { plan, proj, value };

    let seed = cfg.solver.seed;
    let schedule = &cfg.solver.sa_schedule;
    let temp0 = schedule.initial_temp.unwrap_or_else(|| estimate_temperature(&eval, &start, seed));
    let restarts = cfg.solver.restarts.max(1) as usize;
    let chains = exec.map_indexed(restarts, |r| run_chain(&eval, &start, temp0, seed, r));

    let restart_values: Vec<f64> = chains.iter().map(|c| c.best_value).collect();
    let winning_restart = (0..restarts).fold(0, |w, r| if restart_values[r] < restart_values[w] { r } else { w });
    let winner = chains.into_iter().nth(winning_restart).expect("at least one restart");

    let projection = eval.project(&winner.best);
    let report = eval.report(&winner.best, &projection);
    debug_assert!(report.feasible, "best design must be feasible");
    Ok(OptimizationResult {
        best_value: eval.value(&projection),
        best: winner.best,
        projection,
        report,
        initial_value: start.value,
        trace: winner.trace,
        restart_values,
        winning_restart,
        settings_echo: SettingsEcho { seed, restarts: restarts as u32, schedule: schedule.clone(), initial_temp: temp0 },
    })
}
