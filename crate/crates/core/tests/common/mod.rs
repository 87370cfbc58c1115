#![allow(dead_code)]

pub mod analytic;

use rand::Rng;

use inflow_core::demo::demo_scenario;
use inflow_core::rng::{stream, Domain};
use inflow_core::scenario::CurrentPortfolio;
use inflow_core::{project_portfolio, CurveBook, DecisionMatrix, Framing, ScenarioConfig};

/// Demo scenario with a lighter Monte Carlo budget.
pub fn demo_with_mc(mc: u32) -> ScenarioConfig {
    let mut cfg = demo_scenario();
    cfg.solver.mc_iterations = mc;
    cfg
}

pub fn deterministic(mut cfg: ScenarioConfig) -> ScenarioConfig {
    for a in &mut cfg.areas {
        a.sigma = 0.0;
    }
    cfg.solver.mc_iterations = 1;
    cfg
}

/// No balance constraints, no ramp limit, no targets.
pub fn unconstrained(mut cfg: ScenarioConfig) -> ScenarioConfig {
    let n = cfg.area_count();
    let c = &mut cfg.constraints;
    c.min_per_phase = [0.0; 4];
    c.min_per_area = vec![0.0; n];
    c.min_launches = vec![0.0; n];
    c.max_annual_increase = None;
    cfg
}

pub fn empty_portfolio(n: usize) -> CurrentPortfolio {
    CurrentPortfolio { counts: std::array::from_fn(|_| vec![0; n]) }
}

pub fn random_plan(areas: usize, years: usize, cap: u32, seed: u64) -> DecisionMatrix {
    let mut rng = stream(seed, Domain::Instances, 99, 0);
    let mut n = DecisionMatrix::zeros(areas, years);
    for j in 0..areas {
        for y in 0..years {
            n.set(j, y, rng.random_range(0..=cap));
        }
    }
    n
}

pub fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}

/// A 2-area, 3-year, cap-2 instance whose constraints are drawn around a
/// random reference plan, so at least that plan is feasible.
pub fn tiny_instance(seed: u64) -> (ScenarioConfig, CurveBook, Framing, DecisionMatrix) {
    let mut rng = stream(seed, Domain::Instances, 1, 0);
    let demo = demo_scenario();
    let mut cfg = demo.clone();
    let first = rng.random_range(0..3usize);
    let second = (first + 1 + rng.random_range(0..2usize)) % 3;
    cfg.areas = vec![demo.areas[first].clone(), demo.areas[second].clone()];
    cfg.areas[0].id = "a".into();
    cfg.areas[1].id = "b".into();
    cfg.solver.horizon_years = 15;
    cfg.solver.inflow_years = Some(3);
    cfg.solver.max_new_per_area_year = 2;
    cfg.solver.mc_iterations = 400;
    cfg.solver.seed = seed;
    cfg.current_portfolio = empty_portfolio(2);
    for counts in &mut cfg.current_portfolio.counts {
        for c in counts.iter_mut() {
            *c = rng.random_range(0..3);
        }
    }
    let t = 15;
    cfg.forecasts.marketed_revenue = demo.forecasts.marketed_revenue[..t].to_vec();
    cfg.forecasts.dev_revenue_override = None;
    cfg.constraints.enforce_window = [2, 8];
    cfg.constraints.previous_inflow = None;
    cfg.constraints.ramp_per_area = false;

    let book = CurveBook::estimate(&cfg);
    let reference = random_plan(2, 3, 2, seed.wrapping_add(17));
    let proj = project_portfolio(&cfg, &book, &reference).unwrap();

    let mut frac = || rng.random_range(0.5..1.0);
    let c = &mut cfg.constraints;
    for i in 0..4 {
        let m = proj.projects_per_phase[i][1..8].iter().copied().fold(f64::INFINITY, f64::min);
        c.min_per_phase[i] = (m * frac() * 100.0).floor() / 100.0;
    }
    c.min_per_area = (0..2)
        .map(|j| proj.projects_per_area[j][1..8].iter().copied().fold(f64::INFINITY, f64::min) * frac())
        .collect();
    c.min_launches = proj.launches.iter().map(|l| l * frac()).collect();
    let steps: Vec<i64> = (1..3).map(|y| reference.year_total(y) as i64 - reference.year_total(y - 1) as i64).collect();
    let need = steps.iter().copied().max().unwrap_or(0).max(0) as u32;
    c.max_annual_increase = match rng.random_range(0..3) {
        0 => None,
        1 => Some(need),
        _ => Some(need + 1),
    };

    let f = &mut cfg.forecasts;
    let s_t: Vec<f64> = proj.revenue.iter().map(|r| r * rng.random_range(0.9..1.0)).collect();
    let b_t: Vec<f64> = proj.cost.iter().map(|g| g * rng.random_range(1.0..1.2) + 0.01).collect();
    f.mean_revenue_target = Some(s_t.iter().sum::<f64>() / t as f64);
    f.mean_budget = Some(b_t.iter().sum::<f64>() / t as f64);
    f.revenue_target = Some(s_t);
    f.budget = Some(b_t);

    let framing = Framing::ALL[rng.random_range(0..8)];
    (cfg, book, framing, reference)
}
