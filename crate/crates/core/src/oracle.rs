//! Exhaustive search over tiny instances.
//!
//! The oracle evaluates plans with [`naive_projection`], a direct double sum
//! over the fine-grid unit curves that shares no code with the yearly
//! superposition or the incremental updates used by the annealer.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec::Exec;
use crate::objectives::{check_constraints, objective_value, ObjectiveSpec};
use crate::projection::{Contribution, DecisionMatrix, ProjectionResult};
use crate::riskmodel::{CurveBook, CurveTable, Grid};
use crate::scenario::{Phase, ScenarioConfig, PHASES};

/// Largest instance the oracle will enumerate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TinyInstanceBounds {
    pub max_areas: usize,
    pub max_years: usize,
    pub max_per_cell: u32,
}

impl Default for TinyInstanceBounds {
    fn default() -> Self {
        TinyInstanceBounds { max_areas: 2, max_years: 4, max_per_cell: 2 }
    }
}

const MAX_ENUMERATION: u64 = 10_000_000;

/// Enumeration chunks; fixed so the reduction order is thread-independent.
const CHUNKS: u64 = 64;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("instance too large for exhaustive search: {areas} areas x {years} years, cap {cap} (limits {bounds:?})")]
    TooLarge { areas: usize, years: usize, cap: u32, bounds: TinyInstanceBounds },
    #[error("no feasible plan among {0} enumerated")]
    NoFeasible(u64),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub best: DecisionMatrix,
    pub value: f64,
    pub enumerated: u64,
    pub feasible: u64,
}

/// Sum of `table` flows over calendar year `t` for a curve starting at
/// grid offset `shift`.
fn year_flow(grid: &Grid, cells: &[f64], shift: usize, t: usize) -> f64 {
    let spy = grid.steps_per_year;
    let lo = ((t - 1) * spy).saturating_sub(shift);
    let hi = (t * spy).saturating_sub(shift).min(cells.len());
    if (t * spy) <= shift {
        return 0.0;
    }
    cells[lo..hi].iter().sum()
}

fn add_direct(contrib: &mut Contribution, grid: &Grid, table: &CurveTable, area: usize, origin_years: usize, scale: f64) {
    let spy = grid.steps_per_year;
    let shift = origin_years * spy;
    for t in 1..=contrib.cost.len() {
        if t * spy >= shift {
            let k = t * spy - shift;
            for i in 0..PHASES {
                let v = scale * table.phase_activity[i][k];
                contrib.per_phase[i][t - 1] += v;
                contrib.per_area[area][t - 1] += v;
            }
        }
        contrib.cost[t - 1] += scale * year_flow(grid, &table.cost, shift, t);
        contrib.revenue[t - 1] += scale * year_flow(grid, &table.revenue, shift, t);
    }
}

/// Projection computed directly from the fine-grid curves.
pub fn naive_projection(cfg: &ScenarioConfig, book: &CurveBook, n: &DecisionMatrix) -> ProjectionResult {
    let grid = &book.grid;
    let (areas, years) = (cfg.area_count(), cfg.horizon());
    let mut current = Contribution::zeros(areas, years);
    for j in 0..areas {
        for phase in Phase::ALL {
            let k = cfg.current_portfolio.count(phase, j) as f64;
            if k > 0.0 {
                let curves = &book.current[j][phase.index()];
                add_direct(&mut current, grid, &curves.curves, j, 0, k);
                current.launches[j] += k * curves.eventual_launch;
            }
        }
    }
    if let Some(series) = &cfg.forecasts.dev_revenue_override {
        current.revenue = series.clone();
    }
    let mut new = Contribution::zeros(areas, years);
    for (j, y, count) in n.nonzero() {
        let curves = &book.new[j].curves;
        add_direct(&mut new, grid, curves, j, y, count as f64);
        new.launches[j] += count as f64 * curves.launch_cdf[(years - y) * grid.steps_per_year];
    }
    ProjectionResult::from_parts(cfg.forecasts.marketed_revenue.clone(), current, new)
}

fn decode(index: u64, areas: usize, years: usize, base: u64) -> DecisionMatrix {
    let cells = areas * years;
    let mut out = vec![0u32; cells];
    let mut rest = index;
    for slot in out.iter_mut().rev() {
        *slot = (rest % base) as u32;
        rest /= base;
    }
    DecisionMatrix::from_flat(areas, years, out)
}

/// Enumerate every plan with entries in `0..=cap`, keep the feasible one
/// with the lowest objective (lexicographically first on ties).
pub fn exhaustive_search(cfg: &ScenarioConfig, book: &CurveBook, spec: &ObjectiveSpec) -> Result<OracleResult, OracleError> {
    exhaustive_search_with(cfg, book, spec, TinyInstanceBounds::default(), Exec::default())
}

pub fn exhaustive_search_with(
    cfg: &ScenarioConfig,
    book: &CurveBook,
    spec: &ObjectiveSpec,
    bounds: TinyInstanceBounds,
    exec: Exec,
) -> Result<OracleResult, OracleError> {
    let (areas, years) = (cfg.area_count(), cfg.inflow_years());
    let cap = cfg.solver.max_new_per_area_year;
    let base = cap as u64 + 1;
    let total = base.checked_pow((areas * years) as u32).filter(|&t| t <= MAX_ENUMERATION);
    let too_large = || OracleError::TooLarge { areas, years, cap, bounds };
    if areas > bounds.max_areas || years > bounds.max_years || cap > bounds.max_per_cell {
        return Err(too_large());
    }
    let total = total.ok_or_else(too_large)?;

    let chunk = total.div_ceil(CHUNKS).max(1);
    let parts = exec.map_indexed(total.div_ceil(chunk) as usize, |c| {
        let mut best: Option<(f64, u64)> = None;
        let mut feasible = 0u64;
        for idx in c as u64 * chunk..((c as u64 + 1) * chunk).min(total) {
            let plan = decode(idx, areas, years, base);
            let proj = naive_projection(cfg, book, &plan);
            if !check_constraints(&proj, &plan, cfg, spec).feasible {
                continue;
            }
            feasible += 1;
            let v = objective_value(&proj, spec);
            if best.is_none_or(|(b, _)| v < b) {
                best = Some((v, idx));
            }
        }
        (best, feasible)
    });

    let mut best: Option<(f64, u64)> = None;
    let mut feasible = 0;
    for (part, count) in parts {
        feasible += count;
        if let Some((v, idx)) = part {
            if best.is_none_or(|(b, bi)| v < b || (v == b && idx < bi)) {
                best = Some((v, idx));
            }
        }
    }
    let (value, idx) = best.ok_or(OracleError::NoFeasible(total))?;
    Ok(OracleResult { best: decode(idx, areas, years, base), value, enumerated: total, feasible })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decode_is_lexicographic() {
        assert_eq!(decode(0, 2, 2, 3).as_slice(), &[0, 0, 0, 0]);
        assert_eq!(decode(1, 2, 2, 3).as_slice(), &[0, 0, 0, 1]);
        assert_eq!(decode(3, 2, 2, 3).as_slice(), &[0, 0, 1, 0]);
        assert_eq!(decode(80, 2, 2, 3).as_slice(), &[2, 2, 2, 2]);
    }
}
