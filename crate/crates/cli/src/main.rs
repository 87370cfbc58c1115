//! `planner`: scenario in, curves, projections and optimized inflow plans out.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use inflow_core::annealer::{AnnealError, TraceRecord};
use inflow_core::io::{
    read_decision_csv, write_current_curves_csv, write_curves_csv, write_decision_csv, write_projection_csv,
};
use inflow_core::oracle::{exhaustive_search, OracleError};
use inflow_core::scenario::{parse_unvalidated, ScenarioError};
use inflow_core::{
    anneal, check_constraints, objective_value, project_portfolio, validate, ConstraintReport, CurveBook,
    DecisionMatrix, Framing, ObjectiveSpec, ProjectionResult, ScenarioConfig,
};

const EXIT_VALIDATION: u8 = 1;
const EXIT_INFEASIBLE: u8 = 2;
const EXIT_IO: u8 = 3;
const EXIT_USAGE: u8 = 64;

/// Years shown in the inflow table of the summary.
const SUMMARY_YEARS: usize = 10;

#[derive(Parser)]
#[command(name = "planner", version, about = "Risk-adjusted pipeline projection and inflow optimization")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a scenario file and list every problem found.
    Validate { scenario: PathBuf },
    /// Estimate unit curves and write them as CSV.
    Curves {
        scenario: PathBuf,
        #[command(flatten)]
        settings: Overrides,
        #[command(flatten)]
        out: OutDir,
    },
    /// Project the portfolio for a given decision CSV.
    Project {
        scenario: PathBuf,
        decision: PathBuf,
        /// Also evaluate constraints and objective for this framing.
        #[arg(long)]
        objective: Option<Framing>,
        #[command(flatten)]
        settings: Overrides,
        #[command(flatten)]
        out: OutDir,
    },
    /// Search for the best feasible inflow plan.
    Optimize {
        scenario: PathBuf,
        #[arg(long, default_value = "1A")]
        objective: Framing,
        /// Exhaustive search instead of annealing (tiny scenarios only).
        #[arg(long)]
        oracle: bool,
        #[command(flatten)]
        settings: Overrides,
        #[command(flatten)]
        out: OutDir,
    },
    /// Write summary.md for the outputs of `optimize` or `project`.
    Report {
        /// Directory holding report.json, decision.csv and scenario.json.
        run_dir: PathBuf,
        /// Output file; defaults to `<run_dir>/summary.md`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Clone, Default)]
struct Overrides {
    #[arg(long)]
    seed: Option<u64>,
    /// Annealing proposals per restart.
    #[arg(long)]
    iterations: Option<u64>,
    #[arg(long)]
    restarts: Option<u32>,
    #[arg(long)]
    mc_iterations: Option<u32>,
    /// Monte Carlo grid step in years.
    #[arg(long)]
    grid_step: Option<f64>,
}

#[derive(Args, Clone)]
struct OutDir {
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    /// Where estimated curves are cached; defaults to `<out_dir>/cache`.
    #[arg(long)]
    cache_dir: Option<PathBuf>,
}

impl OutDir {
    fn cache(&self) -> PathBuf {
        self.cache_dir.clone().unwrap_or_else(|| self.out_dir.join("cache"))
    }
}

#[derive(Debug)]
enum Failure {
    Validation(String),
    Infeasible(String),
    Io(String),
    Usage(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Validation(_) => EXIT_VALIDATION,
            Failure::Infeasible(_) => EXIT_INFEASIBLE,
            Failure::Io(_) => EXIT_IO,
            Failure::Usage(_) => EXIT_USAGE,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Validation(m) | Failure::Infeasible(m) | Failure::Io(m) | Failure::Usage(m) => m,
        }
    }
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> Failure {
    Failure::Io(format!("{}: {e}", path.display()))
}

type Outcome<T> = Result<T, Failure>;

#[derive(Serialize)]
struct Manifest {
    tool: &'static str,
    version: &'static str,
    command: &'static str,
    scenario_sha256: String,
    curves_key: String,
    seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    objective: Option<Framing>,
    solver: inflow_core::scenario::SolverSettings,
    curves_from_cache: bool,
    outputs: Vec<String>,
    timing_ms: BTreeMap<&'static str, f64>,
}

struct Timer(BTreeMap<&'static str, f64>);

impl Timer {
    fn stage<T>(&mut self, name: &'static str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        self.0.insert(name, start.elapsed().as_secs_f64() * 1e3);
        out
    }
}

#[derive(Serialize, Deserialize)]
struct YearRow {
    year: usize,
    revenue: f64,
    revenue_target: Option<f64>,
    cost: f64,
    budget: Option<f64>,
    inflow: u32,
}

#[derive(Serialize, Deserialize)]
struct TraceSummary {
    iterations: u64,
    accepted: u64,
    /// Current objective every `stride` proposals of the winning chain.
    stride: u64,
    values: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct SearchSummary {
    method: String,
    initial_value: Option<f64>,
    restart_values: Vec<f64>,
    winning_restart: usize,
    initial_temp: Option<f64>,
    enumerated: Option<u64>,
    feasible_plans: Option<u64>,
    trace: Option<TraceSummary>,
}

#[derive(Serialize, Deserialize)]
struct ReportDoc {
    framing: Option<Framing>,
    objective_value: Option<f64>,
    feasible: Option<bool>,
    violations: Vec<String>,
    areas: Vec<String>,
    launches: Vec<f64>,
    launches_current: Vec<f64>,
    launches_new: Vec<f64>,
    min_launches: Vec<f64>,
    constraints: Option<ConstraintReport>,
    search: Option<SearchSummary>,
    years: Vec<YearRow>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    match configure_threads().and_then(|()| run(cli.command)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn configure_threads() -> Outcome<()> {
    let Ok(raw) = std::env::var("PLANNER_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::Usage(format!("PLANNER_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::Usage(format!("cannot size worker pool: {e}")))
}

fn run(command: Command) -> Outcome<()> {
    match command {
        Command::Validate { scenario } => {
            let (cfg, _) = load_scenario(&scenario, &Overrides::default())?;
            println!("{}: ok ({} areas, {} years)", scenario.display(), cfg.area_count(), cfg.horizon());
            Ok(())
        }
        Command::Curves { scenario, settings, out } => cmd_curves(&scenario, &settings, &out),
        Command::Project { scenario, decision, objective, settings, out } => {
            cmd_project(&scenario, &decision, objective, &settings, &out)
        }
        Command::Optimize { scenario, objective, oracle, settings, out } => {
            cmd_optimize(&scenario, objective, oracle, &settings, &out)
        }
        Command::Report { run_dir, out } => {
            let target = out.unwrap_or_else(|| run_dir.join("summary.md"));
            let text = render_summary(&run_dir)?;
            write_atomic(&target, text.as_bytes())
        }
    }
}

/// Parse, apply command-line overrides, then validate.
fn load_scenario(path: &Path, o: &Overrides) -> Outcome<(ScenarioConfig, String)> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let mut cfg = parse_unvalidated(&text).map_err(|e| scenario_failure(path, e))?;
    let s = &mut cfg.solver;
    if let Some(v) = o.seed {
        s.seed = v;
    }
    if let Some(v) = o.iterations {
        s.sa_schedule.iterations = v;
    }
    if let Some(v) = o.restarts {
        s.restarts = v;
    }
    if let Some(v) = o.mc_iterations {
        s.mc_iterations = v;
    }
    if let Some(v) = o.grid_step {
        s.grid_step = v;
    }
    let problems = validate(&cfg);
    if !problems.is_empty() {
        return Err(scenario_failure(path, ScenarioError::Invalid(problems)));
    }
    let hash = hex::encode(Sha256::digest(cfg.to_json().as_bytes()));
    Ok((cfg, hash))
}

fn scenario_failure(path: &Path, e: ScenarioError) -> Failure {
    match e {
        ScenarioError::Invalid(list) => {
            let mut msg = format!("{}: invalid scenario", path.display());
            for p in list {
                let _ = write!(msg, "\n  - {p}");
            }
            Failure::Validation(msg)
        }
        other => Failure::Validation(format!("{}: {other}", path.display())),
    }
}

/// Cache key: everything the curves depend on.
fn curves_key(cfg: &ScenarioConfig) -> String {
    let s = &cfg.solver;
    let material = serde_json::json!({
        "areas": cfg.areas,
        "horizon_years": s.horizon_years,
        "grid_step": s.grid_step,
        "mc_iterations": s.mc_iterations,
        "seed": s.seed,
    });
    hex::encode(Sha256::digest(material.to_string().as_bytes()))
}

/// Load curves from the cache or estimate and store them.
fn curve_book(cfg: &ScenarioConfig, cache_dir: &Path, key: &str) -> Outcome<(CurveBook, bool)> {
    let path = cache_dir.join(format!("curves-{key}.json"));
    if let Ok(text) = fs::read_to_string(&path) {
        if let Ok(book) = serde_json::from_str::<CurveBook>(&text) {
            return Ok((book, true));
        }
    }
    let book = CurveBook::estimate(cfg);
    let text = serde_json::to_string(&book).map_err(|e| io_err(&path, e))?;
    fs::create_dir_all(cache_dir).map_err(|e| io_err(cache_dir, e))?;
    write_atomic(&path, text.as_bytes())?;
    Ok((book, false))
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Outcome<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    fs::create_dir_all(&dir).map_err(|e| io_err(&dir, e))?;
    let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(|e| io_err(&dir, e))?;
    tmp.write_all(bytes).map_err(|e| io_err(path, e))?;
    tmp.as_file().sync_all().map_err(|e| io_err(path, e))?;
    tmp.persist(path).map_err(|e| io_err(path, e.error))?;
    Ok(())
}

fn csv_bytes(path: &Path, f: impl FnOnce(&mut Vec<u8>) -> Result<(), inflow_core::io::CsvError>) -> Outcome<Vec<u8>> {
    let mut buf = Vec::new();
    f(&mut buf).map_err(|e| io_err(path, e))?;
    Ok(buf)
}

struct Run {
    out: PathBuf,
    timer: Timer,
    outputs: Vec<String>,
}

impl Run {
    fn new(out: &OutDir) -> Self {
        Run { out: out.out_dir.clone(), timer: Timer(BTreeMap::new()), outputs: Vec::new() }
    }

    fn write(&mut self, name: &str, bytes: &[u8]) -> Outcome<()> {
        write_atomic(&self.out.join(name), bytes)?;
        self.outputs.push(name.to_string());
        Ok(())
    }

    fn finish(
        mut self,
        command: &'static str,
        cfg: &ScenarioConfig,
        hash: String,
        key: String,
        objective: Option<Framing>,
        cached: bool,
    ) -> Outcome<()> {
        self.outputs.push("manifest.json".into());
        let manifest = Manifest {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command,
            scenario_sha256: hash,
            curves_key: key,
            seed: cfg.solver.seed,
            objective,
            solver: cfg.solver.clone(),
            curves_from_cache: cached,
            outputs: self.outputs,
            timing_ms: self.timer.0,
        };
        let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
        write_atomic(&self.out.join("manifest.json"), text.as_bytes())
    }
}

fn cmd_curves(scenario: &Path, o: &Overrides, out: &OutDir) -> Outcome<()> {
    let mut run = Run::new(out);
    let (cfg, hash) = run.timer.stage("load", || load_scenario(scenario, o))?;
    let key = curves_key(&cfg);
    let (book, cached) = run.timer.stage("curves", || curve_book(&cfg, &out.cache(), &key))?;
    let path = run.out.join("curves.csv");
    let bytes = csv_bytes(&path, |b| write_curves_csv(b, &book))?;
    run.write("curves.csv", &bytes)?;
    let bytes = csv_bytes(&path, |b| write_current_curves_csv(b, &book))?;
    run.write("current_curves.csv", &bytes)?;
    run.finish("curves", &cfg, hash, key, None, cached)
}

fn cmd_project(scenario: &Path, decision: &Path, objective: Option<Framing>, o: &Overrides, out: &OutDir) -> Outcome<()> {
    let mut run = Run::new(out);
    let (cfg, hash) = run.timer.stage("load", || load_scenario(scenario, o))?;
    let spec = objective.map(|f| ObjectiveSpec::new(f, &cfg)).transpose().map_err(|e| Failure::Validation(e.to_string()))?;
    let file = fs::File::open(decision).map_err(|e| io_err(decision, e))?;
    let n = read_decision_csv(file, &cfg).map_err(|e| Failure::Validation(format!("{}: {e}", decision.display())))?;
    let key = curves_key(&cfg);
    let (book, cached) = run.timer.stage("curves", || curve_book(&cfg, &out.cache(), &key))?;
    let proj = run
        .timer
        .stage("project", || project_portfolio(&cfg, &book, &n))
        .map_err(|e| Failure::Validation(e.to_string()))?;

    let doc = match &spec {
        Some(spec) => {
            let report = check_constraints(&proj, &n, &cfg, spec);
            let value = objective_value(&proj, spec);
            build_report(&cfg, &n, &proj, Some(spec.framing), Some(value), Some(report), None)
        }
        None => build_report(&cfg, &n, &proj, None, None, None, None),
    };
    write_plan_outputs(&mut run, &cfg, &n, &proj, &doc)?;
    run.finish("project", &cfg, hash, key, objective, cached)
}

fn cmd_optimize(scenario: &Path, framing: Framing, oracle: bool, o: &Overrides, out: &OutDir) -> Outcome<()> {
    let mut run = Run::new(out);
    let (cfg, hash) = run.timer.stage("load", || load_scenario(scenario, o))?;
    let spec = ObjectiveSpec::new(framing, &cfg).map_err(|e| Failure::Validation(e.to_string()))?;
    let key = curves_key(&cfg);
    let (book, cached) = run.timer.stage("curves", || curve_book(&cfg, &out.cache(), &key))?;

    let (n, value, search) = if oracle {
        let res = run.timer.stage("oracle", || exhaustive_search(&cfg, &book, &spec)).map_err(|e| match e {
            OracleError::TooLarge { .. } => Failure::Validation(e.to_string()),
            OracleError::NoFeasible(_) => Failure::Infeasible(e.to_string()),
        })?;
        let search = SearchSummary {
            method: "exhaustive".into(),
            initial_value: None,
            restart_values: vec![res.value],
            winning_restart: 0,
            initial_temp: None,
            enumerated: Some(res.enumerated),
            feasible_plans: Some(res.feasible),
            trace: None,
        };
        (res.best, res.value, search)
    } else {
        let res = run.timer.stage("anneal", || anneal(&cfg, &book, &spec)).map_err(|e| match e {
            AnnealError::Infeasible(_) => Failure::Infeasible(e.to_string()),
            AnnealError::Projection(_) => Failure::Validation(e.to_string()),
        })?;
        let search = SearchSummary {
            method: "annealing".into(),
            initial_value: Some(res.initial_value),
            restart_values: res.restart_values.clone(),
            winning_restart: res.winning_restart,
            initial_temp: Some(res.settings_echo.initial_temp),
            enumerated: None,
            feasible_plans: None,
            trace: Some(summarize_trace(&res.trace)),
        };
        (res.best, res.best_value, search)
    };

    let proj = project_portfolio(&cfg, &book, &n).map_err(|e| Failure::Validation(e.to_string()))?;
    let report = check_constraints(&proj, &n, &cfg, &spec);
    let doc = build_report(&cfg, &n, &proj, Some(framing), Some(value), Some(report), Some(search));
    write_plan_outputs(&mut run, &cfg, &n, &proj, &doc)?;
    run.finish("optimize", &cfg, hash, key, Some(framing), cached)
}

fn write_plan_outputs(
    run: &mut Run,
    cfg: &ScenarioConfig,
    n: &DecisionMatrix,
    proj: &ProjectionResult,
    doc: &ReportDoc,
) -> Outcome<()> {
    let path = run.out.join("decision.csv");
    let bytes = csv_bytes(&path, |b| write_decision_csv(b, cfg, n))?;
    run.write("decision.csv", &bytes)?;
    let path = run.out.join("projection.csv");
    let bytes = csv_bytes(&path, |b| write_projection_csv(b, cfg, proj, n))?;
    run.write("projection.csv", &bytes)?;
    run.write("scenario.json", cfg.to_json().as_bytes())?;
    let text = serde_json::to_string_pretty(doc).expect("report serializes");
    run.write("report.json", text.as_bytes())
}

fn summarize_trace(trace: &[TraceRecord]) -> TraceSummary {
    let iterations = trace.len() as u64;
    let stride = (iterations / 100).max(1);
    TraceSummary {
        iterations,
        accepted: trace.iter().filter(|r| r.accepted).count() as u64,
        stride,
        values: trace.iter().step_by(stride as usize).map(|r| r.value).collect(),
    }
}

fn build_report(
    cfg: &ScenarioConfig,
    n: &DecisionMatrix,
    proj: &ProjectionResult,
    framing: Option<Framing>,
    objective_value: Option<f64>,
    constraints: Option<ConstraintReport>,
    search: Option<SearchSummary>,
) -> ReportDoc {
    let f = &cfg.forecasts;
    let years = (0..proj.years())
        .map(|t| YearRow {
            year: t + 1,
            revenue: proj.revenue[t],
            revenue_target: f.revenue_target.as_ref().map(|s| s[t]),
            cost: proj.cost[t],
            budget: f.budget.as_ref().map(|b| b[t]),
            inflow: if t < n.years() { n.year_total(t) } else { 0 },
        })
        .collect();
    ReportDoc {
        framing,
        objective_value,
        feasible: constraints.as_ref().map(|c| c.feasible),
        violations: match (&constraints, framing) {
            (Some(c), Some(fr)) => c.violations(fr),
            _ => Vec::new(),
        },
        areas: cfg.areas.iter().map(|a| a.id.clone()).collect(),
        launches: proj.launches.clone(),
        launches_current: proj.current.launches.clone(),
        launches_new: proj.new.launches.clone(),
        min_launches: cfg.constraints.min_launches.clone(),
        constraints,
        search,
        years,
    }
}

fn read_text(path: &Path) -> Outcome<String> {
    fs::read_to_string(path).map_err(|e| io_err(path, e))
}

fn render_summary(dir: &Path) -> Outcome<String> {
    let report_path = dir.join("report.json");
    let doc: ReportDoc =
        serde_json::from_str(&read_text(&report_path)?).map_err(|e| Failure::Validation(format!("{}: {e}", report_path.display())))?;
    let scenario_path = dir.join("scenario.json");
    let (cfg, _) = load_scenario(&scenario_path, &Overrides::default())?;
    let decision_path = dir.join("decision.csv");
    let n = read_decision_csv(read_text(&decision_path)?.as_bytes(), &cfg)
        .map_err(|e| Failure::Validation(format!("{}: {e}", decision_path.display())))?;

    let mut s = String::new();
    let _ = writeln!(s, "# Inflow plan summary\n");
    match (doc.framing, doc.objective_value) {
        (Some(fr), Some(v)) => {
            let _ = writeln!(s, "Framing {fr}, objective value {v:.4}.");
        }
        _ => {
            let _ = writeln!(s, "Projection of a given plan, no framing evaluated.");
        }
    }
    if let Some(ok) = doc.feasible {
        let _ = writeln!(s, "Feasible: {}.", if ok { "yes" } else { "no" });
    }
    for v in &doc.violations {
        let _ = writeln!(s, "- violated: {v}");
    }

    let _ = writeln!(s, "\n## Expected launches over the horizon\n");
    let _ = writeln!(s, "| Area | Expected launches | Current portfolio | New projects | Minimum | Status |");
    let _ = writeln!(s, "|---|---|---|---|---|---|");
    for (j, id) in doc.areas.iter().enumerate() {
        let (l, h) = (doc.launches[j], doc.min_launches[j]);
        let status = if l + 1e-9 >= h { "ok" } else { "BELOW MINIMUM" };
        let _ = writeln!(
            s,
            "| {id} | {l:.2} | {:.2} | {:.2} | {h:.2} | {status} |",
            doc.launches_current[j], doc.launches_new[j]
        );
    }

    let shown = SUMMARY_YEARS.min(n.years());
    let _ = writeln!(s, "\n## New projects entering phase 1, first {shown} years\n");
    let _ = write!(s, "| Year |");
    for id in &doc.areas {
        let _ = write!(s, " Area {id} |");
    }
    let _ = writeln!(s, " Total |");
    let _ = writeln!(s, "|---|{}---|", "---|".repeat(doc.areas.len()));
    for y in 0..shown {
        let _ = write!(s, "| {} |", y + 1);
        for j in 0..n.areas() {
            let _ = write!(s, " {} |", n.get(j, y));
        }
        let _ = writeln!(s, " {} |", n.year_total(y));
    }

    let below: Vec<usize> =
        doc.years.iter().filter(|r| r.revenue_target.is_some_and(|t| r.revenue + 1e-9 < t)).map(|r| r.year).collect();
    let _ = writeln!(s, "\n## Revenue against target ($Bn)\n");
    let _ = writeln!(s, "| Year | Revenue | Target | Gap | |");
    let _ = writeln!(s, "|---|---|---|---|---|");
    for r in &doc.years {
        let (target, gap, flag) = match r.revenue_target {
            Some(t) => (format!("{t:.2}"), format!("{:+.2}", r.revenue - t), if below.contains(&r.year) { "below target" } else { "" }),
            None => ("-".into(), "-".into(), ""),
        };
        let _ = writeln!(s, "| {} | {:.2} | {target} | {gap} | {flag} |", r.year, r.revenue);
    }
    if doc.years.iter().any(|r| r.revenue_target.is_some()) {
        if below.is_empty() {
            let _ = writeln!(s, "\nRevenue meets the target in every year.");
        } else {
            let list: Vec<String> = below.iter().map(|y| y.to_string()).collect();
            let _ = writeln!(s, "\nRevenue below target in {} years: {}.", below.len(), list.join(", "));
        }
    }

    let over: Vec<usize> = doc.years.iter().filter(|r| r.budget.is_some_and(|b| r.cost > b + 1e-9)).map(|r| r.year).collect();
    let _ = writeln!(s, "\n## Development cost against budget ($Bn)\n");
    let _ = writeln!(s, "| Year | Cost | Budget | Headroom | |");
    let _ = writeln!(s, "|---|---|---|---|---|");
    for r in &doc.years {
        let (budget, room, flag) = match r.budget {
            Some(b) => (format!("{b:.2}"), format!("{:+.2}", b - r.cost), if over.contains(&r.year) { "over budget" } else { "" }),
            None => ("-".into(), "-".into(), ""),
        };
        let _ = writeln!(s, "| {} | {:.2} | {budget} | {room} | {flag} |", r.year, r.cost);
    }
    if !over.is_empty() {
        let list: Vec<String> = over.iter().map(|y| y.to_string()).collect();
        let _ = writeln!(s, "\nCost above budget in {} years: {}.", over.len(), list.join(", "));
    }
    Ok(s)
}
