use perpetua::kappa::{self, i_integral, r_integral};
use perpetua::mellin::{i_product, r_product, DEFAULT_TOL};
use perpetua::montecarlo::{estimate_mellin_i, factorization_test, refinement_study, McConfig, PerpetuityEstimate};
use perpetua::special::gamma;
use perpetua::verify::{verify_all, FailureKind, VerifyOptions, DEFAULT_R_GRID};
use perpetua::{catalog as full_catalog, CatalogEntry, Error, Flag, Result};
use serde_json::Value;

use crate::grid::Grid;
use crate::output::{float, object, to_value};

pub enum Status {
    Ok,
    CheckFailed,
    NonConvergence,
}

pub struct Outcome {
    pub rows: Vec<Value>,
    pub status: Status,
}

impl Outcome {
    fn ok(rows: Vec<Value>) -> Result<Outcome> {
        Ok(Outcome { rows, status: Status::Ok })
    }
}

pub struct McFlags {
    pub n: Option<usize>,
    pub dl: Option<f64>,
    pub horizon: Option<f64>,
    pub seed: u64,
}

impl McFlags {
    fn config(&self) -> McConfig {
        let d = McConfig::default();
        McConfig {
            n_samples: self.n.unwrap_or(100_000),
            dl: self.dl.unwrap_or(d.dl),
            horizon: self.horizon,
            seed: self.seed,
        }
    }
}

/// 2 for bad input, 3 for numerical non-convergence, 1 otherwise.
pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) | Error::InvalidParameter(_) | Error::Domain(_) | Error::Shape(_) => 2,
        e if e.is_nonconvergence() => 3,
        _ => 1,
    }
}

fn check_tol(tol: Option<f64>) -> Result<Option<f64>> {
    match tol {
        Some(t) if !(t > 0.0) || !t.is_finite() => Err(Error::InvalidParameter(format!("--tol must be > 0, got {t}"))),
        t => Ok(t),
    }
}

fn matches_filter(e: &CatalogEntry, filter: Option<&str>) -> bool {
    match filter {
        None => true,
        Some("sigma") => e.function().is_in_sigma() == Flag::True,
        Some("complete") => e.function().is_complete_bernstein() == Flag::True,
        Some(text) => e.id().contains(text),
    }
}

fn select(entry: Option<&str>, all: bool, filter: Option<&str>) -> Result<Vec<CatalogEntry>> {
    match (entry, all) {
        (Some(_), true) => Err(Error::InvalidParameter("give an entry id or --all, not both".into())),
        (Some(id), false) => Ok(vec![CatalogEntry::parse(id)?]),
        (None, true) => Ok(full_catalog().into_iter().filter(|e| matches_filter(e, filter)).collect()),
        (None, false) => Err(Error::InvalidParameter("give an entry id or --all".into())),
    }
}

fn flag(f: Flag) -> Value {
    match f {
        Flag::True => Value::Bool(true),
        Flag::False => Value::Bool(false),
        Flag::Unknown => Value::Null,
    }
}

pub fn catalog(filter: Option<&str>) -> Result<Outcome> {
    let rows = full_catalog()
        .iter()
        .filter(|e| matches_filter(e, filter))
        .map(|e| {
            let f = e.function();
            object([
                ("id", Value::String(e.id())),
                ("family", to_value(&e.family())),
                ("phi", Value::String(e.family().description().into())),
                ("complete_bernstein", flag(f.is_complete_bernstein())),
                ("in_sigma", flag(f.is_in_sigma())),
                ("closed_r", Value::Bool(e.closed_r(1.5).is_some())),
                ("closed_i", Value::Bool(e.closed_i(1.5).is_some())),
                ("closed_kappa", Value::Bool(e.kappa_closed_form().is_some())),
                ("law_i", e.law_i().map_or(Value::Null, |l| Value::String(l.label()))),
                ("law_r", e.law_r().map_or(Value::Null, |l| Value::String(l.label()))),
                ("expected", to_value(&e.expected())),
            ])
        })
        .collect();
    Outcome::ok(rows)
}

pub fn mellin(id: &str, grid: Option<&Grid>, tol: Option<f64>) -> Result<Outcome> {
    let entry = CatalogEntry::parse(id)?;
    let tol = check_tol(tol)?.unwrap_or(DEFAULT_TOL);
    let f = entry.function();
    let kappa = kappa::kappa_for(&entry).ok();
    let points = grid.map_or_else(|| DEFAULT_R_GRID.to_vec(), |g| g.0.clone());
    let mut rows = Vec::with_capacity(points.len());
    for r in points {
        let rp = r_product(f, r, tol)?;
        let ip = i_product(f, r, tol)?;
        let ri = kappa.as_ref().and_then(|k| r_integral(f, k, r, tol).ok()).map(|m| m.value);
        let ii = kappa.as_ref().and_then(|k| i_integral(f, k, r, tol).ok()).map(|m| m.value);
        let gap = |a: Option<f64>, b: f64| a.map_or(Value::Null, |a| float((a / b - 1.0).abs()));
        rows.push(object([
            ("entry", Value::String(entry.id())),
            ("r", float(r)),
            ("R_prod", float(rp.value)),
            ("R_int", ri.map_or(Value::Null, float)),
            ("I_prod", float(ip.value)),
            ("I_int", ii.map_or(Value::Null, float)),
            ("gamma_check", float(rp.value * ip.value / gamma(r)?)),
            ("R_route_gap", gap(ri, rp.value)),
            ("I_route_gap", gap(ii, ip.value)),
            ("R_closed", entry.closed_r(r).map_or(Value::Null, float)),
            ("I_closed", entry.closed_i(r).map_or(Value::Null, float)),
            ("R_terms", Value::from(rp.n_terms)),
        ]));
    }
    Outcome::ok(rows)
}

pub fn classify(id: Option<&str>, all: bool, filter: Option<&str>) -> Result<Outcome> {
    let grid = kappa::default_grid();
    let rows = select(id, all, filter)?
        .iter()
        .map(|e| {
            let report = kappa::classify(e, &grid)?;
            let mut v = to_value(&report);
            if let Value::Object(m) = &mut v {
                m.insert("expected".into(), to_value(&e.expected()));
            }
            Ok(v)
        })
        .collect::<Result<Vec<_>>>()?;
    Outcome::ok(rows)
}

fn estimate_row(entry: &CatalogEntry, est: &PerpetuityEstimate) -> Value {
    let reference = entry
        .closed_i(est.r)
        .or_else(|| i_product(entry.function(), est.r, DEFAULT_TOL).ok().map(|m| m.value));
    object([
        ("entry", Value::String(entry.id())),
        ("r_or_n", float(est.r)),
        ("estimate", float(est.mean)),
        ("stderr", float(est.stderr)),
        ("bias_bound", float(est.bias_bound)),
        ("reference", reference.map_or(Value::Null, float)),
        ("N", Value::from(est.n_samples)),
        ("dl", float(est.dl)),
        ("L", float(est.truncation_l)),
        ("seed", Value::from(est.seed)),
    ])
}

pub fn simulate(id: &str, grid: Option<&Grid>, mc: &McFlags, refine: usize, factorization: bool) -> Result<Outcome> {
    let entry = CatalogEntry::parse(id)?;
    let cfg = mc.config();
    if factorization {
        return Outcome::ok(vec![to_value(&factorization_test(&entry, &cfg)?)]);
    }
    let points = grid.map_or_else(|| vec![2.0], |g| g.0.clone());
    let mut rows = Vec::new();
    for r in points {
        if refine > 0 {
            for est in refinement_study(&entry, r, &cfg, refine + 1)? {
                rows.push(estimate_row(&entry, &est));
            }
        } else {
            rows.push(estimate_row(&entry, &estimate_mellin_i(&entry, r, &cfg)?));
        }
    }
    Outcome::ok(rows)
}

pub fn verify(
    id: Option<&str>,
    all: bool,
    filter: Option<&str>,
    grid: Option<&Grid>,
    tol: Option<f64>,
    mc: &McFlags,
) -> Result<Outcome> {
    let entries = select(id, all, filter)?;
    let mut opts = VerifyOptions::default();
    if let Some(g) = grid {
        opts.grid = g.0.clone();
    }
    if let Some(t) = check_tol(tol)? {
        opts.tol = t;
    }
    if mc.n.is_some() {
        opts.monte_carlo = Some(mc.config());
    }
    let lines = verify_all(&entries, &opts);
    let status = if lines.iter().any(|l| matches!(l.failure, Some(FailureKind::Mismatch | FailureKind::Error))) {
        Status::CheckFailed
    } else if lines.iter().any(|l| l.failure == Some(FailureKind::NonConvergence)) {
        Status::NonConvergence
    } else {
        Status::Ok
    };
    Ok(Outcome { rows: lines.iter().map(to_value).collect(), status })
}
