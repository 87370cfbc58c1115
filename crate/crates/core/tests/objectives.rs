mod common;

use common::{demo_with_mc, random_plan, unconstrained};
use inflow_core::objectives::{ObjectiveError, FEASIBILITY_TOL};
use inflow_core::projection::baseline;
use inflow_core::{check_constraints, objective_value, project_portfolio, CurveBook, DecisionMatrix, Framing, ObjectiveSpec};

fn spec_with(framing: Framing, b_t: Vec<f64>, s_t: Vec<f64>) -> ObjectiveSpec {
    ObjectiveSpec {
        framing,
        mean_revenue_target: Some(0.0),
        revenue_target: Some(s_t),
        mean_budget: Some(0.0),
        budget: Some(b_t),
    }
}

#[test]
fn empty_plan_fails_phase_one_minimum() {
    let cfg = demo_with_mc(1000);
    let book = CurveBook::estimate(&cfg);
    let n = DecisionMatrix::zeros(3, 30);
    let p = project_portfolio(&cfg, &book, &n).unwrap();
    let spec = ObjectiveSpec::new(Framing::OneA, &cfg).unwrap();
    let r = check_constraints(&p, &n, &cfg, &spec);
    assert!(!r.feasible);
    assert!(r.slack_per_phase[0] < 0.0);
    // oracle: direct minimum of M_1t - F_1 over years 3..=20
    let direct = p.projects_per_phase[0][2..20].iter().map(|m| m - 12.0).fold(f64::INFINITY, f64::min);
    assert_eq!(r.slack_per_phase[0], direct);
    assert!(r.violations(Framing::OneA).iter().any(|v| v.contains("phase 1")));
}

#[test]
fn vacuous_constraints_accept_any_plan() {
    let mut cfg = unconstrained(demo_with_mc(300));
    cfg.forecasts.mean_budget = Some(1e9);
    let book = CurveBook::estimate(&cfg);
    let spec = ObjectiveSpec::new(Framing::ThreeA, &cfg).unwrap();
    for seed in 0..5 {
        let n = random_plan(3, 30, 8, seed);
        let p = project_portfolio(&cfg, &book, &n).unwrap();
        assert!(check_constraints(&p, &n, &cfg, &spec).feasible);
    }
}

#[test]
fn ramp_increase_over_limit() {
    let cfg = demo_with_mc(100);
    let book = CurveBook::estimate(&cfg);
    let mut n = DecisionMatrix::zeros(3, 30);
    n.set(0, 0, 4);
    n.set(0, 1, 4);
    n.set(1, 1, 3);
    let p = project_portfolio(&cfg, &book, &n).unwrap();
    let spec = ObjectiveSpec::new(Framing::OneA, &cfg).unwrap();
    let r = check_constraints(&p, &n, &cfg, &spec);
    assert_eq!(r.ramp_slack(2), -1.0);
    assert!(r.ramp_slack(1).is_infinite());
    assert_eq!(r.ramp_slack(3), 9.0);
    assert!(!r.feasible);
    assert!(r.violations(Framing::OneA).iter().any(|v| v.contains("year 2")));
}

#[test]
fn ramp_with_previous_inflow_and_per_area() {
    let mut cfg = demo_with_mc(100);
    let book = CurveBook::estimate(&cfg);
    let mut n = DecisionMatrix::zeros(3, 30);
    n.set(0, 0, 3);
    n.set(1, 0, 3);
    let p = project_portfolio(&cfg, &book, &n).unwrap();
    let spec = ObjectiveSpec::new(Framing::OneA, &cfg).unwrap();
    cfg.constraints.previous_inflow = Some(5);
    assert_eq!(check_constraints(&p, &n, &cfg, &spec).ramp_slack(1), 1.0);
    cfg.constraints.previous_inflow = Some(0);
    cfg.constraints.ramp_per_area = true;
    assert_eq!(check_constraints(&p, &n, &cfg, &spec).ramp_slack(1), -1.0);
    cfg.constraints.max_annual_increase = None;
    assert!(check_constraints(&p, &n, &cfg, &spec).slack_ramp.iter().all(|s| s.is_infinite()));
}

#[test]
fn objective_examples() {
    let cfg = demo_with_mc(100);
    let book = CurveBook::estimate(&cfg);
    let mut p = baseline(&cfg, &book).unwrap();
    p.cost = vec![0.0; 30];
    p.cost[..3].copy_from_slice(&[1.0, 2.0, 3.0]);
    let zeros = vec![0.0; 30];
    assert_eq!(objective_value(&p, &spec_with(Framing::OneA, zeros.clone(), zeros.clone())), 6.0);

    let mut p3 = p.clone();
    p3.cost = vec![0.0; 3];
    let v = objective_value(&p3, &spec_with(Framing::OneB, vec![0.5, -0.3, 0.1], zeros.clone()));
    assert!((v - 0.3).abs() < 1e-15);

    p3.revenue = vec![1.0, -0.4, 2.0];
    let v = objective_value(&p3, &spec_with(Framing::ThreeB, zeros.clone(), vec![0.0; 3]));
    assert!((v - 0.4).abs() < 1e-15);
    let v = objective_value(&p3, &spec_with(Framing::FourA, zeros.clone(), vec![0.0; 3]));
    assert!((v + 2.6).abs() < 1e-15);
}

#[test]
fn adding_projects_never_lowers_cost_objective() {
    let cfg = demo_with_mc(300);
    let book = CurveBook::estimate(&cfg);
    let spec = ObjectiveSpec::new(Framing::OneA, &cfg).unwrap();
    let mut n = random_plan(3, 30, 3, 1);
    let mut last = objective_value(&project_portfolio(&cfg, &book, &n).unwrap(), &spec);
    for k in 0..20 {
        let (j, y) = (k % 3, (k * 7) % 30);
        n.set(j, y, n.get(j, y) + 1);
        let v = objective_value(&project_portfolio(&cfg, &book, &n).unwrap(), &spec);
        assert!(v >= last);
        last = v;
    }
}

#[test]
fn budget_shift_moves_max_excess_by_constant() {
    let cfg = demo_with_mc(300);
    let book = CurveBook::estimate(&cfg);
    let spec = ObjectiveSpec::new(Framing::OneB, &cfg).unwrap();
    let mut shifted = spec.clone();
    shifted.budget = Some(spec.budget.as_ref().unwrap().iter().map(|b| b + 1.25).collect());
    let mut order = Vec::new();
    for seed in 0..6 {
        let p = project_portfolio(&cfg, &book, &random_plan(3, 30, 4, seed)).unwrap();
        let (a, b) = (objective_value(&p, &spec), objective_value(&p, &shifted));
        assert!((a - b - 1.25).abs() < 1e-12);
        order.push((a, b));
    }
    for x in &order {
        for y in &order {
            assert_eq!(x.0 < y.0, x.1 < y.1);
        }
    }
}

#[test]
fn framings_share_balance_constraints() {
    let cfg = demo_with_mc(300);
    let book = CurveBook::estimate(&cfg);
    let n = random_plan(3, 30, 5, 2);
    let p = project_portfolio(&cfg, &book, &n).unwrap();
    for pair in Framing::ALL.chunks(2) {
        let a = check_constraints(&p, &n, &cfg, &ObjectiveSpec::new(pair[0], &cfg).unwrap());
        let b = check_constraints(&p, &n, &cfg, &ObjectiveSpec::new(pair[1], &cfg).unwrap());
        assert_eq!(a, b, "{} vs {}", pair[0], pair[1]);
    }
    let all: Vec<_> =
        Framing::ALL.iter().map(|&f| check_constraints(&p, &n, &cfg, &ObjectiveSpec::new(f, &cfg).unwrap())).collect();
    for r in &all {
        assert_eq!(r.slack_per_phase, all[0].slack_per_phase);
        assert_eq!(r.slack_launches, all[0].slack_launches);
    }
}

#[test]
fn framing_constraint_slacks() {
    let cfg = demo_with_mc(300);
    let book = CurveBook::estimate(&cfg);
    let n = random_plan(3, 30, 2, 8);
    let p = project_portfolio(&cfg, &book, &n).unwrap();
    let f = &cfg.forecasts;
    let slack = |fr| check_constraints(&p, &n, &cfg, &ObjectiveSpec::new(fr, &cfg).unwrap()).framing_constraint_slack;
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    assert!((slack(Framing::OneA) - (mean(&p.revenue) - f.mean_revenue_target.unwrap())).abs() < 1e-12);
    let s_t = f.revenue_target.as_ref().unwrap();
    let yearly = p.revenue.iter().zip(s_t).map(|(r, s)| r - s).fold(f64::INFINITY, f64::min);
    assert!((slack(Framing::TwoA) - yearly).abs() < 1e-12);
    assert!((slack(Framing::ThreeA) - (f.mean_budget.unwrap() - mean(&p.cost))).abs() < 1e-12);
    let b_t = f.budget.as_ref().unwrap();
    let yearly = b_t.iter().zip(&p.cost).map(|(b, g)| b - g).fold(f64::INFINITY, f64::min);
    assert!((slack(Framing::FourB) - yearly).abs() < 1e-12);
}

#[test]
fn report_feasible_iff_all_slacks_nonnegative() {
    let cfg = demo_with_mc(300);
    let book = CurveBook::estimate(&cfg);
    for seed in 0..10 {
        let n = random_plan(3, 30, 6, seed);
        let p = project_portfolio(&cfg, &book, &n).unwrap();
        for f in Framing::ALL {
            let r = check_constraints(&p, &n, &cfg, &ObjectiveSpec::new(f, &cfg).unwrap());
            let ok = r
                .slack_per_phase
                .iter()
                .chain(&r.slack_per_area)
                .chain(&r.slack_launches)
                .chain(&r.slack_ramp)
                .chain([&r.framing_constraint_slack])
                .all(|&s| s >= -FEASIBILITY_TOL);
            assert_eq!(r.feasible, ok);
            assert_eq!(r.violations(f).is_empty(), ok);
        }
    }
}

#[test]
fn missing_target_is_reported() {
    let mut cfg = demo_with_mc(10);
    cfg.forecasts.budget = None;
    cfg.forecasts.mean_budget = None;
    let err = ObjectiveSpec::new(Framing::FourA, &cfg).unwrap_err();
    assert_eq!(err, ObjectiveError::MissingTarget { framing: Framing::FourA, field: "budget" });
    assert!(ObjectiveSpec::new(Framing::TwoA, &cfg).is_ok());
    assert!(matches!("5C".parse::<Framing>(), Err(ObjectiveError::UnknownFraming(_))));
    assert_eq!("4b".parse::<Framing>().unwrap(), Framing::FourB);
}

#[test]
fn report_round_trips_through_json() {
    let cfg = demo_with_mc(100);
    let book = CurveBook::estimate(&cfg);
    let n = random_plan(3, 30, 2, 0);
    let p = project_portfolio(&cfg, &book, &n).unwrap();
    let r = check_constraints(&p, &n, &cfg, &ObjectiveSpec::new(Framing::TwoB, &cfg).unwrap());
    let text = serde_json::to_string(&r).unwrap();
    assert!(text.contains("null"));
    assert_eq!(serde_json::from_str::<inflow_core::ConstraintReport>(&text).unwrap(), r);
}
