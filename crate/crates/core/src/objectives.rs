//! Feasibility and objective value for the eight strategic framings.
//!
//! | framing | objective (minimized)      | framing constraint          |
//! |---------|----------------------------|-----------------------------|
//! | 1A      | `Σ Γ_t`                    | mean revenue `>= S`         |
//! | 1B      | `max_t (Γ_t - B_t)`        | mean revenue `>= S`         |
//! | 2A      | `Σ Γ_t`                    | `R_t >= S_t` every year     |
//! | 2B      | `max_t (Γ_t - B_t)`        | `R_t >= S_t` every year     |
//! | 3A      | `-Σ R_t`                   | mean cost `<= B`            |
//! | 3B      | `-min_t (R_t - S_t)`       | mean cost `<= B`            |
//! | 4A      | `-Σ R_t`                   | `Γ_t <= B_t` every year     |
//! | 4B      | `-min_t (R_t - S_t)`       | `Γ_t <= B_t` every year     |
//!
//! Every framing also carries the balance constraints: per-phase and
//! per-area minima inside the enforcement window, per-area launch minima
//! over the horizon and the ramp limit on yearly inflow.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::projection::{DecisionMatrix, ProjectionResult};
use crate::scenario::{Phase, ScenarioConfig, PHASES};

/// Slack above this (negative) value counts as satisfied; absorbs rounding
/// differences between incremental and full projections.
pub const FEASIBILITY_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Framing {
    #[serde(rename = "1A")]
    OneA,
    #[serde(rename = "1B")]
    OneB,
    #[serde(rename = "2A")]
    TwoA,
    #[serde(rename = "2B")]
    TwoB,
    #[serde(rename = "3A")]
    ThreeA,
    #[serde(rename = "3B")]
    ThreeB,
    #[serde(rename = "4A")]
    FourA,
    #[serde(rename = "4B")]
    FourB,
}

impl Framing {
    pub const ALL: [Framing; 8] = [
        Framing::OneA,
        Framing::OneB,
        Framing::TwoA,
        Framing::TwoB,
        Framing::ThreeA,
        Framing::ThreeB,
        Framing::FourA,
        Framing::FourB,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Framing::OneA => "1A",
            Framing::OneB => "1B",
            Framing::TwoA => "2A",
            Framing::TwoB => "2B",
            Framing::ThreeA => "3A",
            Framing::ThreeB => "3B",
            Framing::FourA => "4A",
            Framing::FourB => "4B",
        }
    }

    /// Strategic goal, 1 to 4.
    pub fn family(self) -> u8 {
        self as u8 / 2 + 1
    }

    pub fn is_b_variant(self) -> bool {
        self as u8 % 2 == 1
    }

    fn needs(self) -> Needs {
        use Framing::*;
        let (mean_s, series_s, mean_b, series_b) = match self {
            OneA => (true, false, false, false),
            OneB => (true, false, false, true),
            TwoA => (false, true, false, false),
            TwoB => (false, true, false, true),
            ThreeA => (false, false, true, false),
            ThreeB => (false, true, true, false),
            FourA => (false, false, false, true),
            FourB => (false, true, false, true),
        };
        Needs { mean_s, series_s, mean_b, series_b }
    }
}

struct Needs {
    mean_s: bool,
    series_s: bool,
    mean_b: bool,
    series_b: bool,
}

impl fmt::Display for Framing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ObjectiveError {
    #[error("unknown framing {0:?}; expected one of 1A, 1B, 2A, 2B, 3A, 3B, 4A, 4B")]
    UnknownFraming(String),
    #[error("framing {framing} requires forecasts.{field}")]
    MissingTarget { framing: Framing, field: &'static str },
}

impl FromStr for Framing {
    type Err = ObjectiveError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Framing::ALL
            .into_iter()
            .find(|f| f.label().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| ObjectiveError::UnknownFraming(s.to_string()))
    }
}

/// A framing together with the targets and budgets it refers to.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveSpec {
    pub framing: Framing,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_revenue_target: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub revenue_target: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_budget: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget: Option<Vec<f64>>,
}

impl ObjectiveSpec {
    /// Pull the targets `framing` needs from the scenario's forecasts.
    pub fn new(framing: Framing, cfg: &ScenarioConfig) -> Result<Self, ObjectiveError> {
        let f = &cfg.forecasts;
        let needs = framing.needs();
        let missing = |field| ObjectiveError::MissingTarget { framing, field };
        if needs.mean_s && f.mean_revenue_target.is_none() {
            return Err(missing("mean_revenue_target"));
        }
        if needs.series_s && f.revenue_target.is_none() {
            return Err(missing("revenue_target"));
        }
        if needs.mean_b && f.mean_budget.is_none() {
            return Err(missing("mean_budget"));
        }
        if needs.series_b && f.budget.is_none() {
            return Err(missing("budget"));
        }
        Ok(ObjectiveSpec {
            framing,
            mean_revenue_target: f.mean_revenue_target,
            revenue_target: f.revenue_target.clone(),
            mean_budget: f.mean_budget,
            budget: f.budget.clone(),
        })
    }

    fn s(&self) -> f64 {
        self.mean_revenue_target.expect("validated in ObjectiveSpec::new")
    }

    fn s_t(&self) -> &[f64] {
        self.revenue_target.as_deref().expect("validated in ObjectiveSpec::new")
    }

    fn b(&self) -> f64 {
        self.mean_budget.expect("validated in ObjectiveSpec::new")
    }

    fn b_t(&self) -> &[f64] {
        self.budget.as_deref().expect("validated in ObjectiveSpec::new")
    }
}

/// Named slacks for every constraint; a constraint holds when its slack is
/// nonnegative (up to [`FEASIBILITY_TOL`]).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstraintReport {
    pub feasible: bool,
    /// `min_t (M_it - F_i)` over the enforcement window.
    pub slack_per_phase: [f64; PHASES],
    /// `min_t (E_jt - G_j)` over the enforcement window.
    pub slack_per_area: Vec<f64>,
    /// `L_j - H_j`.
    pub slack_launches: Vec<f64>,
    /// `(N_{τ-1} + δ) - N_τ` per decision year (index 0 is year 1);
    /// unconstrained years are `+inf` (`null` in JSON).
    #[serde(with = "unbounded")]
    pub slack_ramp: Vec<f64>,
    /// Revenue or budget constraint of the framing.
    pub framing_constraint_slack: f64,
}

impl ConstraintReport {
    /// Slack of the ramp constraint for 1-based `year`.
    pub fn ramp_slack(&self, year: usize) -> f64 {
        self.slack_ramp[year - 1]
    }

    /// Human-readable names of violated constraints, most violated first
    /// within each group.
    pub fn violations(&self, framing: Framing) -> Vec<String> {
        let mut out = Vec::new();
        for phase in Phase::ALL {
            let s = self.slack_per_phase[phase.index()];
            if s < -FEASIBILITY_TOL {
                out.push(format!("min projects in phase {phase} (short by {:.3})", -s));
            }
        }
        for (j, &s) in self.slack_per_area.iter().enumerate() {
            if s < -FEASIBILITY_TOL {
                out.push(format!("min projects in area {} (short by {:.3})", j + 1, -s));
            }
        }
        for (j, &s) in self.slack_launches.iter().enumerate() {
            if s < -FEASIBILITY_TOL {
                out.push(format!("min launches in area {} (short by {:.3})", j + 1, -s));
            }
        }
        for (y, &s) in self.slack_ramp.iter().enumerate() {
            if s < -FEASIBILITY_TOL {
                out.push(format!("max annual increase in year {} (over by {})", y + 1, -s));
            }
        }
        if self.framing_constraint_slack < -FEASIBILITY_TOL {
            out.push(format!("{} (short by {:.3})", framing_constraint_name(framing), -self.framing_constraint_slack));
        }
        out
    }
}

mod unbounded {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[f64], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|x| x.is_finite().then_some(*x)).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<f64>, D::Error> {
        let v: Vec<Option<f64>> = Vec::deserialize(d)?;
        Ok(v.into_iter().map(|x| x.unwrap_or(f64::INFINITY)).collect())
    }
}

pub fn framing_constraint_name(framing: Framing) -> &'static str {
    match framing.family() {
        1 => "mean revenue target",
        2 => "yearly revenue target",
        3 => "mean budget",
        _ => "yearly budget",
    }
}

fn window(cfg: &ScenarioConfig, years: usize) -> std::ops::Range<usize> {
    let [start, end] = cfg.constraints.enforce_window;
    let lo = (start.max(1) as usize - 1).min(years);
    let hi = (end as usize).min(years).max(lo);
    lo..hi
}

fn min_over(series: &[f64], range: std::ops::Range<usize>, floor: f64) -> f64 {
    series[range].iter().map(|v| v - floor).fold(f64::INFINITY, f64::min)
}

/// Ramp slack per decision year.
fn ramp_slacks(cfg: &ScenarioConfig, n: &DecisionMatrix) -> Vec<f64> {
    let c = &cfg.constraints;
    let Some(delta) = c.max_annual_increase else {
        return vec![f64::INFINITY; n.years()];
    };
    let delta = delta as f64;
    let slack_for = |prev: Option<f64>, now: f64| prev.map_or(f64::INFINITY, |p| p + delta - now);
    let prior = c.previous_inflow.map(|p| p as f64);
    (0..n.years())
        .map(|y| {
            if c.ramp_per_area {
                (0..n.areas())
                    .map(|a| {
                        let prev = if y == 0 { prior } else { Some(n.get(a, y - 1) as f64) };
                        slack_for(prev, n.get(a, y) as f64)
                    })
                    .fold(f64::INFINITY, f64::min)
            } else {
                let prev = if y == 0 { prior } else { Some(n.year_total(y - 1) as f64) };
                slack_for(prev, n.year_total(y) as f64)
            }
        })
        .collect()
}

fn framing_slack(proj: &ProjectionResult, spec: &ObjectiveSpec) -> f64 {
    let years = proj.years() as f64;
    match spec.framing.family() {
        1 => proj.revenue.iter().sum::<f64>() / years - spec.s(),
        2 => proj.revenue.iter().zip(spec.s_t()).map(|(r, s)| r - s).fold(f64::INFINITY, f64::min),
        3 => spec.b() - proj.cost.iter().sum::<f64>() / years,
        _ => proj.cost.iter().zip(spec.b_t()).map(|(g, b)| b - g).fold(f64::INFINITY, f64::min),
    }
}

/// Evaluate every constraint of `spec`'s framing for plan `n`.
pub fn check_constraints(proj: &ProjectionResult, n: &DecisionMatrix, cfg: &ScenarioConfig, spec: &ObjectiveSpec) -> ConstraintReport {
    let c = &cfg.constraints;
    let w = window(cfg, proj.years());
    let slack_per_phase = std::array::from_fn(|i| min_over(&proj.projects_per_phase[i], w.clone(), c.min_per_phase[i]));
    let slack_per_area = (0..proj.areas()).map(|j| min_over(&proj.projects_per_area[j], w.clone(), c.min_per_area[j])).collect();
    let slack_launches = proj.launches.iter().zip(&c.min_launches).map(|(l, h)| l - h).collect();
    let slack_ramp = ramp_slacks(cfg, n);
    let framing_constraint_slack = framing_slack(proj, spec);

    let mut report = ConstraintReport {
        feasible: false,
        slack_per_phase,
        slack_per_area,
        slack_launches,
        slack_ramp,
        framing_constraint_slack,
    };
    let all_ok = report
        .slack_per_phase
        .iter()
        .chain(&report.slack_per_area)
        .chain(&report.slack_launches)
        .chain(&report.slack_ramp)
        .chain(std::iter::once(&report.framing_constraint_slack))
        .all(|&s| s >= -FEASIBILITY_TOL);
    report.feasible = all_ok;
    report
}

/// Objective of `spec`'s framing; lower is better for every framing.
pub fn objective_value(proj: &ProjectionResult, spec: &ObjectiveSpec) -> f64 {
    use Framing::*;
    match spec.framing {
        OneA | TwoA => proj.cost.iter().sum(),
        OneB | TwoB => proj.cost.iter().zip(spec.b_t()).map(|(g, b)| g - b).fold(f64::NEG_INFINITY, f64::max),
        ThreeA | FourA => -proj.revenue.iter().sum::<f64>(),
        ThreeB | FourB => -proj.revenue.iter().zip(spec.s_t()).map(|(r, s)| r - s).fold(f64::INFINITY, f64::min),
    }
}

/// Total relative shortfall over all lower-bound constraints plus the
/// framing constraint, summed year by year inside the window. Zero exactly
/// when every constraint except the ramp limit holds. Used to steer the
/// greedy constructor.
pub fn violation_score(proj: &ProjectionResult, cfg: &ScenarioConfig, spec: &ObjectiveSpec) -> f64 {
    let c = &cfg.constraints;
    let w = window(cfg, proj.years());
    let deficit = |value: f64, floor: f64| ((floor - value) / floor.max(1.0)).max(0.0);
    let mut score = 0.0;
    for i in 0..PHASES {
        score += proj.projects_per_phase[i][w.clone()].iter().map(|&m| deficit(m, c.min_per_phase[i])).sum::<f64>();
    }
    for j in 0..proj.areas() {
        score += proj.projects_per_area[j][w.clone()].iter().map(|&e| deficit(e, c.min_per_area[j])).sum::<f64>();
        score += deficit(proj.launches[j], c.min_launches[j]);
    }
    let years = proj.years() as f64;
    score += match spec.framing.family() {
        1 => deficit(proj.revenue.iter().sum::<f64>() / years, spec.s()),
        2 => proj.revenue.iter().zip(spec.s_t()).map(|(&r, &s)| deficit(r, s)).sum(),
        3 => deficit(spec.b(), proj.cost.iter().sum::<f64>() / years),
        _ => proj.cost.iter().zip(spec.b_t()).map(|(&g, &b)| deficit(b, g)).sum(),
    };
    score
}

#[cfg(test)]
mod tests {
    use super::*;

    fn proj_with(cost: Vec<f64>, revenue: Vec<f64>) -> ProjectionResult {
        let years = cost.len();
        let z = crate::projection::Contribution::zeros(1, years);
        ProjectionResult {
            projects_per_phase: std::array::from_fn(|_| vec![0.0; years]),
            projects_per_area: vec![vec![0.0; years]],
            cost,
            revenue,
            launches: vec![0.0],
            revenue_marketed: vec![0.0; years],
            current: z.clone(),
            new: z,
        }
    }

    fn spec(framing: Framing, s_t: Vec<f64>, b_t: Vec<f64>) -> ObjectiveSpec {
        ObjectiveSpec { framing, mean_revenue_target: Some(0.0), revenue_target: Some(s_t), mean_budget: Some(0.0), budget: Some(b_t) }
    }

    #[test]
    fn framing_labels_round_trip() {
        for f in Framing::ALL {
            assert_eq!(f.label().parse::<Framing>().unwrap(), f);
        }
        assert_eq!("3b".parse::<Framing>().unwrap(), Framing::ThreeB);
        assert!("5A".parse::<Framing>().is_err());
        assert_eq!(Framing::TwoB.family(), 2);
        assert!(Framing::TwoB.is_b_variant());
        assert!(!Framing::FourA.is_b_variant());
    }

    #[test]
    fn objective_examples() {
        let p = proj_with(vec![1.0, 2.0, 3.0, 0.0], vec![0.0; 4]);
        assert_eq!(objective_value(&p, &spec(Framing::OneA, vec![0.0; 4], vec![0.0; 4])), 6.0);

        let p = proj_with(vec![0.5, 1.3, 0.9], vec![0.0; 3]);
        let v = objective_value(&p, &spec(Framing::OneB, vec![0.0; 3], vec![1.0; 3]));
        assert!((v - 0.3).abs() < 1e-12);

        let p = proj_with(vec![0.0; 3], vec![2.0, 0.6, 3.0]);
        let v = objective_value(&p, &spec(Framing::ThreeB, vec![1.0; 3], vec![0.0; 3]));
        assert!((v - 0.4).abs() < 1e-12);

        let v = objective_value(&p, &spec(Framing::FourA, vec![1.0; 3], vec![0.0; 3]));
        assert!((v + 5.6).abs() < 1e-12);
    }
}
