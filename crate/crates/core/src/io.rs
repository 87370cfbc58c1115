//! CSV encodings of decision matrices, projections and curve tables.

use std::io::{Read, Write};

use thiserror::Error;

use crate::projection::{DecisionMatrix, ProjectionResult};
use crate::riskmodel::{CurveBook, CurveTable, Grid};
use crate::scenario::{Phase, ScenarioConfig, PHASES};

#[derive(Debug, Error)]
pub enum CsvError {
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("line {line}: {message}")]
    Format { line: u64, message: String },
}

fn format_err(line: u64, message: impl Into<String>) -> CsvError {
    CsvError::Format { line, message: message.into() }
}

fn num(v: f64) -> String {
    format!("{v}")
}

/// `area,year,count`, one row per cell, years 1-based.
pub fn write_decision_csv<W: Write>(out: W, cfg: &ScenarioConfig, n: &DecisionMatrix) -> Result<(), CsvError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["area", "year", "count"])?;
    for (j, area) in cfg.areas.iter().enumerate() {
        for y in 0..n.years() {
            w.write_record([area.id.clone(), (y + 1).to_string(), n.get(j, y).to_string()])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Inverse of [`write_decision_csv`]. Cells that are not listed are zero.
pub fn read_decision_csv<R: Read>(input: R, cfg: &ScenarioConfig) -> Result<DecisionMatrix, CsvError> {
    let mut n = DecisionMatrix::zeros(cfg.area_count(), cfg.inflow_years());
    let mut r = csv::Reader::from_reader(input);
    let headers = r.headers()?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| format_err(1, format!("missing column `{name}`")))
    };
    let (ca, cy, cc) = (col("area")?, col("year")?, col("count")?);
    for rec in r.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line());
        let field = |i: usize| rec.get(i).map(str::trim).unwrap_or("");
        let id = field(ca);
        let j = cfg
            .areas
            .iter()
            .position(|a| a.id == id)
            .ok_or_else(|| format_err(line, format!("unknown area `{id}`")))?;
        let year: usize = field(cy).parse().map_err(|_| format_err(line, format!("bad year `{}`", field(cy))))?;
        if year == 0 || year > n.years() {
            return Err(format_err(line, format!("year {year} outside 1..={}", n.years())));
        }
        let count: u32 = field(cc).parse().map_err(|_| format_err(line, format!("bad count `{}`", field(cc))))?;
        n.set(j, year - 1, count);
    }
    Ok(n)
}

/// One row per year with totals, components, targets and balance counts.
pub fn write_projection_csv<W: Write>(
    out: W,
    cfg: &ScenarioConfig,
    proj: &ProjectionResult,
    n: &DecisionMatrix,
) -> Result<(), CsvError> {
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<String> = [
        "year",
        "revenue",
        "revenue_marketed",
        "revenue_current",
        "revenue_new",
        "cost",
        "cost_current",
        "cost_new",
        "target",
        "budget",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    header.extend(Phase::ALL.iter().map(|p| format!("phase_{}", p.label())));
    header.extend(cfg.areas.iter().map(|a| format!("area_{}", a.id)));
    header.push("inflow".into());
    w.write_record(&header)?;

    let opt = |s: &Option<Vec<f64>>, t: usize| s.as_ref().map_or(String::new(), |v| num(v[t]));
    for t in 0..proj.years() {
        let mut row = vec![
            (t + 1).to_string(),
            num(proj.revenue[t]),
            num(proj.revenue_marketed[t]),
            num(proj.current.revenue[t]),
            num(proj.new.revenue[t]),
            num(proj.cost[t]),
            num(proj.current.cost[t]),
            num(proj.new.cost[t]),
            opt(&cfg.forecasts.revenue_target, t),
            opt(&cfg.forecasts.budget, t),
        ];
        row.extend((0..PHASES).map(|i| num(proj.projects_per_phase[i][t])));
        row.extend(proj.projects_per_area.iter().map(|a| num(a[t])));
        row.push(if t < n.years() { n.year_total(t).to_string() } else { "0".into() });
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

const CURVE_HEADER: [&str; 7] = ["area", "phase", "t", "activity", "cost_rate", "launch_cdf", "unit_revenue"];

/// Rows for grid point `k`; rates are over the cell ending at `t_k`.
fn curve_rows<W: Write>(
    w: &mut csv::Writer<W>,
    prefix: &[&str],
    label: &str,
    grid: &Grid,
    table: &CurveTable,
) -> Result<(), CsvError> {
    let spy = grid.steps_per_year as f64;
    for k in 0..grid.points() {
        let t = num(grid.time(k));
        let cell = |v: &[f64]| if k == 0 { 0.0 } else { v[k - 1] * spy };
        let launch = num(table.launch_cdf[k]);
        let rev = num(cell(&table.revenue));
        for phase in Phase::ALL {
            let i = phase.index();
            let (act, cost) = (num(table.phase_activity[i][k]), num(cell(&table.phase_cost[i])));
            w.write_record(prefix.iter().copied().chain([label, phase.label(), &t, &act, &cost, &launch, &rev]))?;
        }
        let (act, cost) = (num(table.total_activity[k]), num(cell(&table.cost)));
        w.write_record(prefix.iter().copied().chain([label, "all", &t, &act, &cost, &launch, &rev]))?;
    }
    Ok(())
}

/// Unit curves for one new project in each area.
pub fn write_curves_csv<W: Write>(out: W, book: &CurveBook) -> Result<(), CsvError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CURVE_HEADER)?;
    for set in &book.new {
        curve_rows(&mut w, &[], &set.area_id, &book.grid, &set.curves)?;
    }
    w.flush()?;
    Ok(())
}

/// Curves for one current project per area and starting phase, with an
/// extra `start` column.
pub fn write_current_curves_csv<W: Write>(out: W, book: &CurveBook) -> Result<(), CsvError> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["start"];
    header.extend(CURVE_HEADER);
    w.write_record(&header)?;
    for per_area in &book.current {
        for cur in per_area {
            curve_rows(&mut w, &[cur.starting_phase.label()], &cur.area_id, &book.grid, &cur.curves)?;
        }
    }
    w.flush()?;
    Ok(())
}
