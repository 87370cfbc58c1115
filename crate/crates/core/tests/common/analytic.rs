//! Closed-form curves of a deterministic (σ = 0) project.

use inflow_core::riskmodel::{CurveTable, Grid};
use inflow_core::scenario::{AreaParams, Phase};

/// Exact product of decimal probabilities via integer arithmetic.
pub fn decimal_product(ps: &[f64]) -> f64 {
    let num: u64 = ps.iter().map(|p| (p * 100.0).round() as u64).product();
    num as f64 / 100f64.powi(ps.len() as i32)
}

fn ramp(p: &AreaParams, s: f64) -> f64 {
    if s <= 0.0 {
        0.0
    } else if s <= p.ramp_up_years {
        p.peak_year_revenue * s / p.ramp_up_years
    } else if s <= p.exclusivity_years {
        p.peak_year_revenue
    } else {
        p.peak_year_revenue * p.post_loe_fraction
    }
}

/// Analytic curves of one deterministic project; `start = None` is a new
/// project, otherwise the clock origin sits mid-way through that phase.
pub struct Analytic {
    bounds: [f64; 5],
    weights: [f64; 4],
    p: AreaParams,
    q: f64,
}

impl Analytic {
    pub fn new(p: &AreaParams, start: Option<Phase>) -> Self {
        let d = p.median_duration;
        let s = start.map_or(0, Phase::index);
        let origin: f64 = start.map_or(0.0, |_| d[..s].iter().sum::<f64>() + d[s] / 2.0);
        let mut bounds = [0.0; 5];
        for i in 0..4 {
            bounds[i + 1] = bounds[i] + d[i];
        }
        let bounds = bounds.map(|b| b - origin);
        let mut weights = [0.0; 4];
        for (i, w) in weights.iter_mut().enumerate() {
            *w = if i < s { 0.0 } else { p.transition_prob[s..i].iter().product() };
        }
        let q = p.transition_prob[s..].iter().product();
        Analytic { bounds, weights, p: p.clone(), q }
    }

    pub fn activity(&self, i: usize, t: f64) -> f64 {
        let (lo, hi) = (self.bounds[i], self.bounds[i + 1]);
        let inside = if i == 0 && lo == 0.0 { t >= lo && t <= hi } else { t > lo && t <= hi };
        if inside {
            self.weights[i]
        } else {
            0.0
        }
    }

    pub fn cost_in(&self, i: usize, a: f64, b: f64) -> f64 {
        let (lo, hi) = (self.bounds[i].max(0.0), self.bounds[i + 1]);
        let overlap = (b.min(hi) - a.max(lo)).max(0.0);
        self.weights[i] * self.p.median_cost[i] / self.p.median_duration[i] * overlap
    }

    pub fn launch_cdf(&self, t: f64) -> f64 {
        if self.bounds[4] < t {
            self.q
        } else {
            0.0
        }
    }

    pub fn revenue_in(&self, a: f64, b: f64) -> f64 {
        let m = 64;
        let h = (b - a) / m as f64;
        (0..m).map(|k| self.q * ramp(&self.p, a + (k as f64 + 0.5) * h - self.bounds[4]) * h).sum()
    }
}

/// First mismatch beyond one grid step in time or 1e-9 in value.
pub fn check_against(table: &CurveTable, grid: &Grid, a: &Analytic, label: &str) -> Result<(), String> {
    let h = grid.step();
    for k in 0..grid.points() {
        let t = grid.time(k);
        for i in 0..4 {
            let got = table.phase_activity[i][k];
            let want = a.activity(i, t);
            let near = |dk: isize| {
                let kk = k as isize + dk;
                kk >= 0 && (a.activity(i, grid.time(kk as usize)) - got).abs() <= 1e-9
            };
            if !((got - want).abs() <= 1e-9 || near(-1) || near(1)) {
                return Err(format!("{label} phase {i} t={t}: {got} vs {want}"));
            }
        }
        let cdf = table.launch_cdf[k];
        let want = a.launch_cdf(t);
        if !((cdf - want).abs() <= 1e-9 || (cdf - a.launch_cdf(t + h)).abs() <= 1e-9 || (cdf - a.launch_cdf(t - h)).abs() <= 1e-9) {
            return Err(format!("{label} launch t={t}: {cdf} vs {want}"));
        }
    }
    for c in 0..grid.cells() {
        let (lo, hi) = (grid.time(c), grid.time(c + 1));
        for i in 0..4 {
            let want = a.cost_in(i, lo, hi);
            if (table.phase_cost[i][c] - want).abs() > 1e-9 {
                return Err(format!("{label} cost phase {i} cell {c}: {} vs {want}", table.phase_cost[i][c]));
            }
        }
        let want = a.revenue_in(lo, hi);
        if (table.revenue[c] - want).abs() > 1e-9 {
            return Err(format!("{label} revenue cell {c}: {} vs {want}", table.revenue[c]));
        }
    }
    Ok(())
}

