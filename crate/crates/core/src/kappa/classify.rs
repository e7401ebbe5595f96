use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::bernstein::RealFn;
use crate::catalog::CatalogEntry;
use crate::error::{Error, Result};

use super::{kappa_for, urbanik, KappaMeasure};

/// Number of points of the default classification grid.
pub const GRID_POINTS: usize = 200;
/// Tolerance of the grid comparisons.
pub const GRID_TOL: f64 = 1e-9;
const GRID_MIN: f64 = 1e-4;
const GRID_MAX: f64 = 50.0;

/// Geometric grid of [`GRID_POINTS`] points on [1e−4, 50].
pub fn default_grid() -> Vec<f64> {
    let ratio = (GRID_MAX / GRID_MIN).ln() / (GRID_POINTS - 1) as f64;
    (0..GRID_POINTS).map(|i| GRID_MIN * (ratio * i as f64).exp()).collect()
}

/// Verdict of a grid check with the abscissae that violated it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub holds: bool,
    pub witnesses: Vec<f64>,
    pub method: &'static str,
}

impl CheckOutcome {
    fn from_witnesses(witnesses: Vec<f64>) -> Self {
        CheckOutcome { holds: witnesses.is_empty(), witnesses, method: "numeric-grid" }
    }
}

fn atom_witnesses(kappa: &KappaMeasure, grid: &[f64]) -> Vec<f64> {
    let top = grid.iter().copied().fold(1.0, f64::max);
    let mut w: Vec<f64> = kappa.atoms().upto(top).into_iter().map(|(x, _)| x).collect();
    if w.is_empty() && kappa.has_atoms() {
        // atoms exist but none fall inside the grid range
        w.push(f64::INFINITY);
    }
    w
}

/// I is multiplicatively infinitely divisible iff κ(dx) ≤ dx: no atoms and
/// k(x) ≤ 1 + tolerance on the grid.
pub fn mid_check_i(kappa: &KappaMeasure, grid: &[f64]) -> CheckOutcome {
    let mut w = atom_witnesses(kappa, grid);
    if kappa.has_density() {
        w.extend(grid.iter().copied().filter(|&x| kappa.density_at(x) > 1.0 + GRID_TOL));
    }
    CheckOutcome::from_witnesses(w)
}

/// Points where `values` (sampled on `grid`) increase beyond the relative
/// tolerance.
fn increases(grid: &[f64], values: &[f64]) -> Vec<f64> {
    values
        .windows(2)
        .zip(grid.windows(2))
        .filter(|(v, _)| v[1] - v[0] > GRID_TOL * v[0].abs().max(v[1].abs()).max(1e-300))
        .map(|(_, x)| x[1])
        .collect()
}

/// log R is self-decomposable iff ȷ(x) = k(x)/(e^x − 1) is positive and
/// nonincreasing.
pub fn sd_check_log_r(kappa: &KappaMeasure, grid: &[f64]) -> CheckOutcome {
    let mut w = atom_witnesses(kappa, grid);
    if w.is_empty() {
        let j: Vec<f64> = grid.iter().map(|&x| kappa.density_at(x) / x.exp_m1()).collect();
        w.extend(grid.iter().zip(&j).filter(|(_, &v)| !(v > 0.0)).map(|(&x, _)| x));
        w.extend(increases(grid, &j));
    }
    CheckOutcome::from_witnesses(w)
}

/// log I is self-decomposable iff ℓ(x) = (1 − k(x))/(e^x − 1) is
/// nonnegative and nonincreasing.
pub fn sd_check_log_i(kappa: &KappaMeasure, grid: &[f64]) -> CheckOutcome {
    let mut w = atom_witnesses(kappa, grid);
    if w.is_empty() {
        let l: Vec<f64> = grid.iter().map(|&x| kappa.complement_at(x) / x.exp_m1()).collect();
        w.extend(grid.iter().zip(&l).filter(|(_, &v)| v < -GRID_TOL).map(|(&x, _)| x));
        w.extend(increases(grid, &l));
    }
    CheckOutcome::from_witnesses(w)
}

/// A measure on (−∞, 0) given as density and atoms. `positive` is false
/// when some atom masses are negative.
#[derive(Clone)]
pub struct LineMeasure {
    density: Option<RealFn>,
    pub atoms: Vec<(f64, f64)>,
    pub positive: bool,
}

impl fmt::Debug for LineMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LineMeasure")
            .field("density", &self.density.is_some())
            .field("atoms", &self.atoms)
            .field("positive", &self.positive)
            .finish()
    }
}

impl LineMeasure {
    /// Density at y < 0; zero elsewhere.
    pub fn density_at(&self, y: f64) -> f64 {
        match &self.density {
            Some(d) if y < 0.0 => d(y),
            _ => 0.0,
        }
    }
}

/// Atoms of κ further out than this are dropped from the Lévy measure
/// records; their masses are below e^{−50}.
const ATOM_RANGE: f64 = 50.0;

/// Lévy measure of log R: the image under x ↦ −x of κ(dx)/(x(e^x − 1)).
pub fn levy_measure_log_r(kappa: &KappaMeasure) -> LineMeasure {
    let density = kappa.density.as_ref().map(|k| {
        let k = Arc::clone(k);
        Arc::new(move |y: f64| {
            let x = -y;
            k(x) / (x * x.exp_m1())
        }) as RealFn
    });
    let atoms = kappa.atoms().upto(ATOM_RANGE).into_iter().map(|(x, m)| (-x, m / (x * x.exp_m1()))).collect();
    LineMeasure { density, atoms, positive: true }
}

/// Lévy measure of log I: density (1 − k(|y|))/(|y|(e^{|y|} − 1)) on y < 0.
/// Requires κ ≤ dx.
pub fn levy_measure_log_i(kappa: &KappaMeasure) -> Result<LineMeasure> {
    if kappa.has_atoms() {
        return Err(Error::Precondition("κ has atoms, so log I is not infinitely divisible".into()));
    }
    let outcome = mid_check_i(kappa, &default_grid());
    if !outcome.holds {
        return Err(Error::Precondition(format!("k exceeds 1 at x = {:?}", outcome.witnesses)));
    }
    let kappa = kappa.clone();
    let density: RealFn = Arc::new(move |y: f64| {
        let x = -y;
        kappa.complement_at(x) / (x * x.exp_m1())
    });
    Ok(LineMeasure { density: Some(density), atoms: Vec::new(), positive: true })
}

/// Classification of an entry.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassificationReport {
    pub entry: String,
    /// R is always multiplicatively infinitely divisible.
    pub r_mid: bool,
    pub i_mid: CheckOutcome,
    pub log_r_sd: CheckOutcome,
    pub log_i_sd: CheckOutcome,
    /// SM ≤ Π, which must agree with `i_mid`.
    pub sm_le_pi: CheckOutcome,
}

/// Runs every classifier on the validated κ of `entry`.
pub fn classify(entry: &CatalogEntry, grid: &[f64]) -> Result<ClassificationReport> {
    let kappa = kappa_for(entry)?;
    Ok(ClassificationReport {
        entry: entry.id(),
        r_mid: true,
        i_mid: mid_check_i(&kappa, grid),
        log_r_sd: sd_check_log_r(&kappa, grid),
        log_i_sd: sd_check_log_i(&kappa, grid),
        sm_le_pi: urbanik::sm_le_pi(&kappa, grid),
    })
}
