//! Risk-adjusted projection and inflow optimization for drug development
//! portfolios.
//!
//! The pipeline is:
//!
//! 1. [`scenario`]: parse and validate a problem instance.
//! 2. [`riskmodel`]: Monte Carlo estimation of per-area unit curves for new
//!    and already-running projects.
//! 3. [`projection`]: superpose shifted unit curves for a decision matrix.
//! 4. [`objectives`]: feasibility and objective value for the eight framings.
//! 5. [`annealer`]: constraint-respecting simulated annealing over decision
//!    matrices, with [`oracle`] as an exhaustive cross-check on tiny instances.
//!
//! Parallel work (Monte Carlo realizations, annealing restarts, oracle
//! enumeration) goes through [`exec::Exec`], which falls back to sequential
//! iteration when the `parallel` feature is disabled. Results never depend on
//! the degree of parallelism.

pub mod annealer;
pub mod demo;
pub mod exec;
pub mod io;
pub mod objectives;
pub mod oracle;
pub mod projection;
pub mod riskmodel;
pub mod rng;
pub mod scenario;

pub use annealer::{anneal, construct_feasible, propose_neighbor, AnnealError, OptimizationResult};
pub use objectives::{check_constraints, objective_value, ConstraintReport, Framing, ObjectiveSpec};
pub use projection::{project_portfolio, DecisionMatrix, ProjectionResult};
pub use riskmodel::{CurveBook, CurrentProjectCurves, UnitCurveSet};
pub use scenario::{parse_scenario, validate, Phase, ScenarioConfig, ScenarioError};
