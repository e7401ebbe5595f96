//! The invariant suite: every identity the library can check for a catalog
//! entry, reported as one pass/fail line per check.

use rayon::prelude::*;
use serde::Serialize;

use crate::bernstein::{conjugate, eval_phi_from_levy, Flag};
use crate::catalog::{CatalogEntry, Family};
use crate::conjugacy::{sigma_check, swap_check};
use crate::error::{Error, Result};
use crate::kappa::{self, classify, convolution_residual, ConvolutionEq};
use crate::mellin::{
    check_functional_eqs, check_logconvex, i_product, moments_i, moments_r, r_product, DEFAULT_TOL,
};
use crate::montecarlo::{estimate_mellin_i_many, McConfig, SubordinatorModel};
use crate::special::gamma_pos;

/// Mellin arguments used when no grid is given.
pub const DEFAULT_R_GRID: [f64; 7] = [0.5, 1.0, 1.5, 2.0, 3.0, 4.5, 5.0];
/// Points where closed-form Φ is compared with its Lévy–Khintchine form.
pub const LEVY_CHECK_POINTS: [f64; 6] = [0.1, 0.5, 1.0, 2.0, 5.0, 10.0];
/// Relative tolerance of that comparison.
pub const LEVY_CHECK_TOL: f64 = 1e-5;
/// Relative tolerance of the integer-moment identities.
pub const MOMENT_TOL: f64 = 1e-6;
/// Largest integer moment checked.
pub const MOMENT_MAX_N: u32 = 6;
/// Absolute tolerance of the convolution equations.
pub const CONVOLUTION_TOL: f64 = 1e-3;
/// Points v at which the convolution equations are evaluated.
pub const CONVOLUTION_POINTS: [f64; 4] = [0.25, 0.5, 1.0, 2.0];
/// Relative tolerance of Φ** = Φ.
pub const INVOLUTION_TOL: f64 = 1e-10;
/// Number of standard errors allowed in Monte Carlo moment checks.
pub const MC_SIGMAS: f64 = 3.0;

/// Settings of a verification run.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOptions {
    pub grid: Vec<f64>,
    /// Relative tolerance of the Mellin-transform identities.
    pub tol: f64,
    /// Monte Carlo moment checks are run only when set.
    pub monte_carlo: Option<McConfig>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { grid: DEFAULT_R_GRID.to_vec(), tol: 1e-5, monte_carlo: None }
    }
}

impl VerifyOptions {
    /// Tolerance handed to the product evaluators, well below `tol`.
    fn eval_tol(&self) -> f64 {
        DEFAULT_TOL.min(self.tol * 1e-2)
    }
}

/// Why a check did not pass.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureKind {
    /// The computation succeeded but the identity does not hold.
    Mismatch,
    /// A series, product or quadrature did not converge.
    NonConvergence,
    /// Any other error raised while computing the check.
    Error,
}

/// One line of a verification report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub entry: String,
    pub check: String,
    pub passed: bool,
    /// Worst observed discrepancy, in the units of `threshold`.
    pub metric: f64,
    pub threshold: f64,
    pub failure: Option<FailureKind>,
    pub detail: String,
}

struct Report<'a> {
    entry: &'a CatalogEntry,
    lines: Vec<CheckResult>,
}

impl<'a> Report<'a> {
    fn push(&mut self, check: &str, metric: f64, threshold: f64, detail: String) {
        let passed = metric <= threshold;
        self.lines.push(CheckResult {
            entry: self.entry.id(),
            check: check.to_string(),
            passed,
            metric,
            threshold,
            failure: (!passed).then_some(FailureKind::Mismatch),
            detail,
        });
    }

    fn flag(&mut self, check: &str, ok: bool, detail: String) {
        self.push(check, if ok { 0.0 } else { 1.0 }, 0.0, detail);
    }

    fn error(&mut self, check: &str, err: &Error) {
        let kind = if err.is_nonconvergence() { FailureKind::NonConvergence } else { FailureKind::Error };
        self.lines.push(CheckResult {
            entry: self.entry.id(),
            check: check.to_string(),
            passed: false,
            metric: f64::NAN,
            threshold: f64::NAN,
            failure: Some(kind),
            detail: err.to_string(),
        });
    }

    /// Records the outcome of `body`, which returns (metric, threshold, detail).
    fn run(&mut self, check: &str, body: impl FnOnce() -> Result<(f64, f64, String)>) {
        match body() {
            Ok((m, t, d)) => self.push(check, m, t, d),
            Err(e) => self.error(check, &e),
        }
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a / b - 1.0).abs()
}

/// Worst relative gap over `grid` together with the r where it occurs.
fn worst(grid: &[f64], gap: impl Fn(f64) -> Result<f64> + Sync) -> Result<(f64, String)> {
    let gaps: Vec<f64> = grid.par_iter().map(|&r| gap(r)).collect::<Result<_>>()?;
    let (i, m) = gaps
        .iter()
        .copied()
        .enumerate()
        .fold((0, 0.0), |acc, (i, g)| if g > acc.1 || g.is_nan() { (i, g) } else { acc });
    Ok((m, if grid.is_empty() { String::new() } else { format!("worst at r={}", grid[i]) }))
}

/// Runs every applicable check on `entry`.
pub fn verify_entry(entry: &CatalogEntry, opts: &VerifyOptions) -> Vec<CheckResult> {
    let mut rep = Report { entry, lines: Vec::new() };
    let f = entry.function();
    let grid = &opts.grid;
    let tol = opts.tol;
    let et = opts.eval_tol();

    let shape = f.shape_violations(&kappa::default_grid(), 1e-9);
    rep.push("phi_shape", shape.len() as f64, 0.0, shape.first().cloned().unwrap_or_default());

    if let Some(levy) = f.levy() {
        rep.run("phi_levy_khintchine", || {
            let (m, d) = worst(&LEVY_CHECK_POINTS, |s| Ok(rel(eval_phi_from_levy(levy, s, 1e-10)?, f.value(s))))?;
            Ok((m, LEVY_CHECK_TOL, d.replace("r=", "s=")))
        });
    }

    rep.run("factorization_identity", || {
        let (m, d) = worst(grid, |r| {
            Ok(rel(r_product(f, r, et)?.value * i_product(f, r, et)?.value, gamma_pos(r)))
        })?;
        Ok((m, tol, d))
    });

    rep.run("moments_r", || {
        let ns: Vec<f64> = (1..=MOMENT_MAX_N).map(f64::from).collect();
        let (m, d) = worst(&ns, |n| Ok(rel(r_product(f, n + 1.0, et)?.value, moments_r(f, n as u32)?)))?;
        Ok((m, MOMENT_TOL, d.replace("r=", "n=")))
    });
    rep.run("moments_i", || {
        let ns: Vec<f64> = (1..=MOMENT_MAX_N).map(f64::from).collect();
        let (m, d) = worst(&ns, |n| Ok(rel(i_product(f, n + 1.0, et)?.value, moments_i(f, n as u32)?)))?;
        Ok((m, MOMENT_TOL, d.replace("r=", "n=")))
    });

    rep.run("functional_equations", || {
        let res = check_functional_eqs(f, grid, et)?;
        let m = res.iter().map(|x| x.r_residual.max(x.i_residual)).fold(0.0, f64::max);
        Ok((m, tol, String::new()))
    });

    rep.run("log_convexity", || {
        let rs: Vec<f64> = (0..40).map(|k| 0.25 + 0.25 * k as f64).collect();
        let rv: Vec<(f64, f64)> = rs.par_iter().map(|&r| Ok((r, r_product(f, r, et)?.value))).collect::<Result<_>>()?;
        let iv: Vec<(f64, f64)> = rs.par_iter().map(|&r| Ok((r, i_product(f, r, et)?.value))).collect::<Result<_>>()?;
        let ok = check_logconvex(&rv, 1e-6)? && check_logconvex(&iv, 1e-6)?;
        Ok((if ok { 0.0 } else { 1.0 }, 0.0, "R and I on r = 0.25..10".into()))
    });

    if entry.closed_r(1.5).is_some() {
        rep.run("closed_form_r", || {
            let (m, d) = worst(grid, |r| Ok(rel(r_product(f, r, et)?.value, entry.closed_r(r).unwrap_or(f64::NAN))))?;
            Ok((m, tol, d))
        });
    }
    if entry.closed_i(1.5).is_some() {
        rep.run("closed_form_i", || {
            let (m, d) = worst(grid, |r| Ok(rel(i_product(f, r, et)?.value, entry.closed_i(r).unwrap_or(f64::NAN))))?;
            Ok((m, tol, d))
        });
    }
    for (name, law, is_r) in [("law_r_mellin", entry.law_r(), true), ("law_i_mellin", entry.law_i(), false)] {
        let Some(law) = law else { continue };
        rep.run(name, || {
            let (m, d) = worst(grid, |r| {
                let want = if is_r { r_product(f, r, et)?.value } else { i_product(f, r, et)?.value };
                Ok(rel(law.mellin(r).unwrap_or(f64::NAN), want))
            })?;
            Ok((m, tol, format!("{} {d}", law.label())))
        });
    }

    match kappa::kappa_for(entry) {
        Ok(k) => {
            rep.flag("kappa_laplace", true, String::new());
            rep.run("kappa_route_r", || {
                let (m, d) = worst(grid, |r| Ok(rel(kappa::r_integral(f, &k, r, 1e-10)?.value, r_product(f, r, et)?.value)))?;
                Ok((m, tol, d))
            });
            rep.run("kappa_route_i", || {
                let (m, d) = worst(grid, |r| Ok(rel(kappa::i_integral(f, &k, r, 1e-10)?.value, i_product(f, r, et)?.value)))?;
                Ok((m, tol, d))
            });
        }
        Err(Error::Unsupported(_)) => {}
        Err(e) => rep.error("kappa_laplace", &e),
    }

    match classify(entry, &kappa::default_grid()) {
        Ok(c) => {
            let exp = entry.expected();
            for (name, want, got) in [
                ("classify_i_mid", exp.i_mid, c.i_mid.holds),
                ("classify_log_i_sd", exp.log_i_sd, c.log_i_sd.holds),
                ("classify_log_r_sd", exp.log_r_sd, c.log_r_sd.holds),
            ] {
                if let Some(want) = want {
                    rep.flag(name, want == got, format!("expected {want}, got {got}"));
                }
            }
            rep.flag(
                "urbanik_equivalence",
                c.sm_le_pi.holds == c.i_mid.holds,
                format!("sm_le_pi={} i_mid={}", c.sm_le_pi.holds, c.i_mid.holds),
            );
        }
        Err(Error::Unsupported(_)) => {}
        Err(e) => rep.error("classification", &e),
    }

    let flag = f.is_in_sigma();
    if let Some(rho) = entry.potential() {
        match sigma_check(f, Some(rho)) {
            Ok(v) => rep.flag(
                "sigma_potential",
                Flag::from(v.in_sigma) == flag || flag == Flag::Unknown,
                format!("potential says {}, flag says {flag:?}", v.in_sigma),
            ),
            Err(e) => rep.error("sigma_potential", &e),
        }
    }
    if flag == Flag::True {
        rep.run("swap_check", || {
            let res = swap_check(f, grid, et)?;
            let m = res.iter().map(|x| x.r_conj_vs_i.max(x.i_conj_vs_r)).fold(0.0, f64::max);
            Ok((m, tol, String::new()))
        });
        rep.run("conjugate_involution", || {
            let cc = conjugate(&conjugate(f));
            let (m, d) = worst(&LEVY_CHECK_POINTS, |s| Ok(rel(cc.value(s), f.value(s))))?;
            Ok((m, INVOLUTION_TOL, d.replace("r=", "s=")))
        });
        if let Some(cf) = entry.family().conjugate_family() {
            rep.run("conjugate_family", || {
                let other = CatalogEntry::from_family(cf)?;
                let (m, d) = worst(grid, |r| Ok(rel(r_product(other.function(), r, et)?.value, i_product(f, r, et)?.value)))?;
                Ok((m, tol, format!("{} {d}", cf.id())))
            });
        }
    }

    for eq in [ConvolutionEq::Theta, ConvolutionEq::Eta, ConvolutionEq::Zeta] {
        let name = match eq {
            ConvolutionEq::Theta => "convolution_theta",
            ConvolutionEq::Eta => "convolution_eta",
            ConvolutionEq::Zeta => "convolution_zeta",
        };
        match convolution_residual(entry, eq, &CONVOLUTION_POINTS) {
            Ok(res) => {
                let m = res.iter().map(|x| x.residual).fold(0.0, f64::max);
                rep.push(name, m, CONVOLUTION_TOL, String::new());
            }
            Err(Error::Unsupported(_)) => {}
            Err(e) => rep.error(name, &e),
        }
    }

    if let Some(cfg) = &opts.monte_carlo {
        monte_carlo_checks(&mut rep, cfg);
    }
    rep.lines
}

fn monte_carlo_checks(rep: &mut Report<'_>, cfg: &McConfig) {
    let entry = rep.entry;
    if matches!(SubordinatorModel::for_entry(entry), Err(Error::Unsupported(_))) {
        return;
    }
    let rs = [2.0, 3.0, 4.0];
    let estimates = match estimate_mellin_i_many(entry, &rs, cfg) {
        Ok(e) => e,
        Err(e) => return rep.error("mc_moments_i", &e),
    };
    for (n, est) in (1..=3u32).zip(estimates) {
        rep.run(&format!("mc_moment_i_{n}"), || {
            let want = moments_i(entry.function(), n)?;
            let band = MC_SIGMAS * est.stderr + est.bias_bound;
            Ok(((est.mean - want).abs(), band, format!("mean {} vs {want}", est.mean)))
        });
    }
}

/// Runs [`verify_entry`] on every entry, in parallel, keeping entry order.
pub fn verify_all(entries: &[CatalogEntry], opts: &VerifyOptions) -> Vec<CheckResult> {
    entries.par_iter().flat_map_iter(|e| verify_entry(e, opts)).collect()
}

/// Convenience for callers that only need the catalog family.
pub fn verify_family(family: Family, opts: &VerifyOptions) -> Result<Vec<CheckResult>> {
    Ok(verify_entry(&CatalogEntry::from_family(family)?, opts))
}
