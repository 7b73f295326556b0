use std::path::Path;

use kbeq::check::{check_coset_constant, check_kac_bernstein, check_kac_bernstein_self, CheckReport};
use kbeq::decompose::{decompose_hermitian, decompose_positive, decompose_self, decompose_vanishing, DecomposeError};
use kbeq::numeric::parse_rational;
use kbeq::oracle::{
    builtin_counterexample, builtin_odd_quadratic, builtin_vanishing, default_suite_groups, enum_restricted_kb_visit,
    enum_sign_solutions, run_cross_check_suite, OracleError, DEFAULT_BUDGET, MAX_MATERIALIZED,
};
use kbeq::{
    synth_table, FuncTable, GroupSpec, HermitianSolutionForm, PositiveSolutionForm, Rational, Window,
};
use serde::Deserialize;
use serde_json::{json, Value as Json};

use crate::{Cli, Command, DemoExample, Pair};

const DEFAULT_RADIUS: u32 = 6;

pub struct Outcome {
    pub report: Json,
    pub summary: String,
    pub code: u8,
}

impl Outcome {
    fn ok(report: Json, summary: impl Into<String>) -> Self {
        Outcome {
            report,
            summary: summary.into(),
            code: 0,
        }
    }

    fn verdict(holds: bool, report: Json, summary: impl Into<String>) -> Self {
        Outcome {
            report,
            summary: summary.into(),
            code: if holds { 0 } else { 1 },
        }
    }

    fn input_error(message: impl Into<String>) -> Self {
        let message = message.into();
        Outcome {
            report: json!({ "error": "input", "message": message }),
            summary: format!("error: {message}"),
            code: 2,
        }
    }
}

/// Input problems, reported with exit status 2.
struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

type Input<T> = Result<T, InputError>;

pub fn run(cli: &Cli) -> Outcome {
    if !(cli.tol.is_finite() && cli.tol >= 0.0) {
        return Outcome::input_error(format!("--tol must be a non-negative number, got {}", cli.tol));
    }
    let result = match &cli.command {
        Command::Check(p) => check(cli, p),
        Command::CheckSelf(s) => check_self(cli, &s.f),
        Command::Decompose(p) => decompose(cli, p, "decompose", |f, g, tol| {
            decompose_positive(f, g, tol).map(|form| json!({ "form": form }))
        }),
        Command::DecomposeHermitian(p) => decompose(cli, p, "decompose-hermitian", |f, g, tol| {
            decompose_hermitian(f, g, tol).map(|form| json!({ "form": form }))
        }),
        Command::DecomposeVanishing(p) => decompose(cli, p, "decompose-vanishing", |f, g, tol| {
            decompose_vanishing(f, g, tol).map(|d| json!({ "decomposition": d }))
        }),
        Command::Synth { form } => synth(cli, form),
        Command::EnumSigns { max_order } => enum_signs(cli, *max_order),
        Command::EnumKb { grid, count_only } => enum_kb(cli, grid, *count_only),
        Command::Demo { example } => demo(cli, *example),
        Command::Suite { trials } => suite(cli, *trials),
    };
    result.unwrap_or_else(|InputError(m)| Outcome::input_error(m))
}

fn parse_group(cli: &Cli) -> Input<Option<GroupSpec>> {
    cli.group
        .as_deref()
        .map(|s| s.parse::<GroupSpec>().map_err(|e| InputError(format!("--group: {e}"))))
        .transpose()
}

fn require_group(cli: &Cli, command: &str) -> Input<GroupSpec> {
    parse_group(cli)?.ok_or_else(|| InputError(format!("{command} requires --group")))
}

fn read_json(path: &Path) -> Input<Json> {
    let text = std::fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

/// Loads a table, checks it against `--group` and restricts it to `--radius`.
fn load_table(cli: &Cli, path: &Path) -> Input<FuncTable> {
    let table = FuncTable::from_json(&read_json(path)?).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    if let Some(group) = parse_group(cli)? {
        if &group != table.group() {
            return Err(InputError(format!(
                "{}: table is on {}, not on --group {group}",
                path.display(),
                table.group()
            )));
        }
    }
    match cli.radius {
        Some(r) if !table.group().is_finite() => {
            let window = Window::standard(table.group().clone(), r)?;
            Ok(table.restrict(&window).map_err(|e| InputError(format!("{}: --radius {r}: {e}", path.display())))?)
        }
        _ => Ok(table),
    }
}

fn load_pair(cli: &Cli, p: &Pair) -> Input<(FuncTable, FuncTable)> {
    Ok((load_table(cli, &p.f)?, load_table(cli, &p.g)?))
}

fn check_summary(what: &str, r: &CheckReport) -> String {
    match &r.witness {
        None => format!("{what}: holds on {} pairs", r.pairs_checked),
        Some(w) => format!(
            "{what}: fails at x = {}{}",
            w.x,
            w.y.as_ref().map(|y| format!(", y = {y}")).unwrap_or_default()
        ),
    }
}

fn check(cli: &Cli, p: &Pair) -> Input<Outcome> {
    let (f, g) = load_pair(cli, p)?;
    let report = check_kac_bernstein(&f, &g, cli.tol)?;
    let summary = check_summary("check", &report);
    Ok(Outcome::verdict(
        report.holds,
        json!({ "command": "check", "group": f.group(), "points": f.window().len(), "report": report }),
        summary,
    ))
}

fn check_self(cli: &Cli, path: &Path) -> Input<Outcome> {
    let f = load_table(cli, path)?;
    let report = check_kac_bernstein_self(&f, cli.tol);
    let summary = check_summary("check-self", &report);
    Ok(Outcome::verdict(
        report.holds,
        json!({ "command": "check-self", "group": f.group(), "points": f.window().len(), "report": report }),
        summary,
    ))
}

fn decompose(
    cli: &Cli,
    p: &Pair,
    command: &str,
    op: impl Fn(&FuncTable, &FuncTable, f64) -> Result<Json, DecomposeError>,
) -> Input<Outcome> {
    let (f, g) = load_pair(cli, p)?;
    Ok(match op(&f, &g, cli.tol) {
        Ok(mut body) => {
            body["command"] = json!(command);
            body["group"] = json!(f.group());
            Outcome::ok(body, format!("{command}: decomposition found and certified"))
        }
        Err(e) => {
            let mut body = e.to_json();
            body["command"] = json!(command);
            Outcome {
                report: body,
                summary: format!("{command}: {e}"),
                code: if e.is_input_error() { 2 } else { 1 },
            }
        }
    })
}

#[derive(Deserialize)]
#[serde(untagged)]
enum FormFile {
    Hermitian(HermitianSolutionForm),
    Positive(PositiveSolutionForm),
}

fn synth(cli: &Cli, path: &Path) -> Input<Outcome> {
    let form: FormFile = serde_json::from_value(read_json(path)?)
        .map_err(|_| InputError(format!("{}: not a positive or Hermitian solution form", path.display())))?;
    let group = match &form {
        FormFile::Hermitian(h) => {
            h.validate()?;
            h.group.clone()
        }
        FormFile::Positive(p) => {
            p.validate()?;
            p.group.clone()
        }
    };
    if let Some(g) = parse_group(cli)? {
        if g != group {
            return Err(InputError(format!("form is on {group}, not on --group {g}")));
        }
    }
    let window = Window::standard(group.clone(), cli.radius.unwrap_or(DEFAULT_RADIUS))?;
    let (f, g) = match &form {
        FormFile::Hermitian(h) => synth_table(h, &window)?,
        FormFile::Positive(p) => synth_table(p, &window)?,
    };
    let summary = format!("synth: {} points on {group}", window.len());
    Ok(Outcome::ok(
        json!({ "command": "synth", "group": group, "f": f.to_json(), "g": g.to_json() }),
        summary,
    ))
}

fn oracle_input(e: OracleError) -> InputError {
    InputError(e.to_string())
}

fn enum_signs(cli: &Cli, max_order: u64) -> Input<Outcome> {
    let group = require_group(cli, "enum-signs")?;
    let census =
        enum_sign_solutions(&group, max_order, cli.budget.unwrap_or(DEFAULT_BUDGET)).map_err(oracle_input)?;
    let mut report = census.to_json();
    report["command"] = json!("enum-signs");
    let summary = format!("enum-signs: {} sign pairs on {group}", census.count());
    Ok(Outcome::ok(report, summary))
}

fn parse_grid(s: &str) -> Input<Vec<Rational>> {
    s.split(',')
        .map(|t| parse_rational(t.trim()).ok_or_else(|| InputError(format!("--grid: invalid rational {t:?}"))))
        .collect()
}

fn enum_kb(cli: &Cli, grid: &str, count_only: bool) -> Input<Outcome> {
    let group = require_group(cli, "enum-kb")?;
    let mut grid = parse_grid(grid)?;
    grid.sort();
    grid.dedup();
    let mut count = 0u64;
    let mut solutions = Vec::new();
    let nodes = enum_restricted_kb_visit(&group, &grid, cli.budget.unwrap_or(DEFAULT_BUDGET), |t, s| {
        count += 1;
        if !count_only && solutions.len() < MAX_MATERIALIZED {
            solutions.push(json!({ "log_f": t, "log_g": s }));
        }
    })
    .map_err(oracle_input)?;
    if !count_only && count > MAX_MATERIALIZED as u64 {
        return Err(InputError(format!(
            "{count} solutions exceed the listing limit of {MAX_MATERIALIZED}; use --count-only"
        )));
    }
    let window = Window::standard(group.clone(), 1)?;
    let mut report = json!({
        "command": "enum-kb",
        "group": group,
        "grid": grid.iter().map(kbeq::numeric::format_rational).collect::<Vec<_>>(),
        "elements": window.points().collect::<Vec<_>>(),
        "count": count,
        "search_nodes": nodes,
    });
    if !count_only {
        report["solutions"] = Json::Array(solutions);
    }
    Ok(Outcome::ok(report, format!("enum-kb: {count} solutions on {group}")))
}

fn demo(cli: &Cli, example: DemoExample) -> Input<Outcome> {
    match example {
        DemoExample::Counterexample => {
            let (f, g) = builtin_counterexample();
            let report = check_kac_bernstein(&f, &g, 0.0)?;
            let mut constancy = serde_json::Map::new();
            for (name, t) in [("f", &f), ("g", &g)] {
                for m in [2, 4] {
                    constancy.insert(format!("{name}_x{m}"), serde_json::to_value(check_coset_constant(t, m, 0.0)?)?);
                }
            }
            let summary = check_summary("demo counterexample", &report);
            Ok(Outcome::verdict(
                report.holds,
                json!({
                    "command": "demo",
                    "example": "counterexample",
                    "description": "Sign solutions on (Z/4)^2 that are constant on cosets of 4X but not on cosets of 2X",
                    "f": f.to_json(),
                    "g": g.to_json(),
                    "report": report,
                    "coset_constancy": constancy,
                }),
                summary,
            ))
        }
        DemoExample::OddQuadratic => {
            let f = builtin_odd_quadratic(cli.radius.unwrap_or(DEFAULT_RADIUS)).map_err(oracle_input)?;
            let report = check_kac_bernstein_self(&f, 0.0);
            let decomposition = match decompose_self(&f, 0.0) {
                Ok(d) => serde_json::to_value(d)?,
                Err(e) => e.to_json(),
            };
            let summary = check_summary("demo odd-quadratic", &report);
            Ok(Outcome::verdict(
                report.holds,
                json!({
                    "command": "demo",
                    "example": "odd-quadratic",
                    "description": "f(m, n) = (-1)^(mn) on Z^2: a self-solution whose sign part is not multiplicative",
                    "report": report,
                    "decomposition": decomposition,
                }),
                summary,
            ))
        }
        DemoExample::Vanishing => {
            let (f, g) = builtin_vanishing();
            let report = check_kac_bernstein(&f, &g, 0.0)?;
            let decomposition = match decompose_vanishing(&f, &g, 0.0) {
                Ok(d) => serde_json::to_value(d)?,
                Err(e) => e.to_json(),
            };
            let summary = check_summary("demo vanishing", &report);
            Ok(Outcome::verdict(
                report.holds,
                json!({
                    "command": "demo",
                    "example": "vanishing",
                    "description": "A character times the indicator of the subgroup <3> on Z/9",
                    "f": f.to_json(),
                    "g": g.to_json(),
                    "report": report,
                    "decomposition": decomposition,
                }),
                summary,
            ))
        }
    }
}

fn suite(cli: &Cli, trials: usize) -> Input<Outcome> {
    let groups = match parse_group(cli)? {
        Some(g) => vec![g],
        None => default_suite_groups(),
    };
    let seed = cli.seed.unwrap_or(0);
    let report = run_cross_check_suite(&groups, trials, seed);
    let summary = match &report.failed_invariant {
        None => format!("suite: {} checks passed", report.checks.len()),
        Some(name) => format!("suite: failed {name}"),
    };
    let mut body = serde_json::to_value(&report)?;
    body["command"] = json!("suite");
    Ok(Outcome::verdict(report.passed, body, summary))
}
