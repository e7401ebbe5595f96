//! The measure κ on (0, ∞) with ∫ e^{−sx} κ(dx) = Φ′(s)/Φ(s), and the
//! integral representations and classifications built on it.

mod classify;
mod convolution;
mod integral;
mod urbanik;

use std::fmt;

use crate::bernstein::{AtomSet, BernsteinFunction, RealFn};
use crate::catalog::CatalogEntry;
use crate::error::{Error, Result};
use crate::quadrature::{self, gauss_kronrod, Tolerance};
use crate::special::{digamma_pos, ln_gamma_pos, EULER_GAMMA};

pub use classify::{
    classify, default_grid, levy_measure_log_i, levy_measure_log_r, mid_check_i, sd_check_log_i, sd_check_log_r,
    CheckOutcome, ClassificationReport, LineMeasure, GRID_POINTS, GRID_TOL,
};
pub use convolution::{convolution_residual, ConvolutionEq, ConvolutionResidual};
pub use integral::{digamma_rep, gamma_integral_rep, i_integral, kernel, r_integral};
pub use urbanik::{pi_density, sm_le_pi, urbanik_s, UrbanikMeasure};

/// Laplace transform points used to validate a candidate κ.
pub const LAPLACE_CHECK_POINTS: [f64; 4] = [0.5, 1.0, 2.0, 5.0];
/// Relative tolerance of that validation.
pub const LAPLACE_CHECK_TOL: f64 = 1e-5;

/// κ(dx) = k(x) dx + atoms.
#[derive(Clone)]
pub struct KappaMeasure {
    density: Option<RealFn>,
    atoms: AtomSet,
    complement: Option<RealFn>,
}

impl fmt::Debug for KappaMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("KappaMeasure")
            .field("density", &self.density.is_some())
            .field("atoms", &self.atoms)
            .finish()
    }
}

impl KappaMeasure {
    pub fn new(density: Option<RealFn>, atoms: AtomSet) -> Self {
        KappaMeasure { density, atoms, complement: None }
    }

    /// Attaches an accurate evaluator of 1 − k(x), used wherever k is
    /// close to one.
    pub fn with_complement(mut self, one_minus_k: RealFn) -> Self {
        self.complement = Some(one_minus_k);
        self
    }

    /// 1 − k(x).
    pub fn complement_at(&self, x: f64) -> f64 {
        match &self.complement {
            Some(c) => c(x),
            None => 1.0 - self.density_at(x),
        }
    }

    /// k(x), zero when the measure is purely atomic.
    pub fn density_at(&self, x: f64) -> f64 {
        self.density.as_ref().map_or(0.0, |k| k(x))
    }

    pub fn has_density(&self) -> bool {
        self.density.is_some()
    }

    pub fn atoms(&self) -> &AtomSet {
        &self.atoms
    }

    pub fn has_atoms(&self) -> bool {
        !self.atoms.is_empty()
    }

    /// ∫ g dκ over (0, ∞).
    pub fn integrate<G: Fn(f64) -> f64>(&self, g: G, tol: Tolerance) -> Result<f64> {
        let mut total = self.atoms.sum(&g);
        if let Some(k) = &self.density {
            total += quadrature::zero_to_infinity(|x| g(x) * k(x), tol)?.value;
        }
        Ok(total)
    }

    /// ∫ e^{−sx} κ(dx).
    pub fn laplace(&self, s: f64) -> Result<f64> {
        if !(s > 0.0) {
            return Err(Error::Domain(format!("Laplace transform of κ needs s > 0, got {s}")));
        }
        self.integrate(|x| (-s * x).exp(), Tolerance::new(1e-13, 1e-11))
    }
}

/// Checks that `kappa` is the κ of `f`: a locally integrable density and
/// a Laplace transform matching Φ′/Φ on [`LAPLACE_CHECK_POINTS`].
pub fn validate_kappa(f: &BernsteinFunction, kappa: &KappaMeasure) -> Result<()> {
    if let Some(k) = &kappa.density {
        let x = 1e-12;
        let v = k(x);
        if !v.is_finite() || v * x > 1e-3 {
            return Err(Error::Validation(format!("κ density is not locally integrable at 0 (k(1e-12) = {v})")));
        }
    }
    for s in LAPLACE_CHECK_POINTS {
        let want = f.log_derivative(s);
        let got = kappa.laplace(s)?;
        if (got - want).abs() > LAPLACE_CHECK_TOL * want.abs() {
            return Err(Error::Validation(format!(
                "∫e^(-sx)κ(dx) = {got} but Φ'/Φ = {want} at s = {s}"
            )));
        }
    }
    Ok(())
}

/// The validated κ of a catalog entry.
pub fn kappa_for(entry: &CatalogEntry) -> Result<KappaMeasure> {
    let kappa = entry
        .kappa_closed_form()
        .ok_or_else(|| Error::Unsupported(format!("no closed-form κ for {}", entry.id())))?;
    validate_kappa(entry.function(), kappa)?;
    Ok(kappa.clone())
}

/// Density of κ for Φ(s) = log(1 + s):
/// k(x) = e^{−x} ∫_0^∞ x^l / Γ(l + 1) dl.
///
/// The inner integrand is unimodal in l with its peak where
/// ψ(l + 1) = log x; it is integrated on either side of the peak out to
/// where it drops below 1e−18 of the peak value.
pub fn gamma_process_kappa_density(x: f64) -> f64 {
    if !(x > 0.0) {
        return 0.0;
    }
    if x > 700.0 {
        return 1.0;
    }
    let lnx = x.ln();
    let g = |l: f64| l * lnx - ln_gamma_pos(l + 1.0) - x;
    let peak = if lnx <= -EULER_GAMMA {
        0.0
    } else {
        let (mut lo, mut hi) = (0.0, x + 1.0);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if digamma_pos(mid + 1.0) < lnx {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    };
    let gmax = g(peak);
    let mut step: f64 = 1.0;
    while g(peak + step) > gmax - 42.0 {
        step *= 2.0;
    }
    let f = |l: f64| (g(l) - gmax).exp();
    let tol = Tolerance::new(0.0, 1e-13);
    let left = gauss_kronrod(f, 0.0, peak, tol).map(|r| r.value).unwrap_or(f64::NAN);
    let right = gauss_kronrod(f, peak, peak + step, tol).map(|r| r.value).unwrap_or(f64::NAN);
    gmax.exp() * (left + right)
}

/// 1 − k(x) for Φ(s) = log(1 + s):
/// e^{−x} ∫_ℝ exp(−x e^u)/(π² + u²) du.
pub fn gamma_process_kappa_complement(x: f64) -> f64 {
    if !(x > 0.0) {
        return 1.0;
    }
    let pi2 = std::f64::consts::PI * std::f64::consts::PI;
    let tol = Tolerance::new(1e-300, 1e-13);
    let neg = quadrature::semi_infinite(|u| (-x * (-u).exp()).exp_m1() / (pi2 + u * u), 0.0, tol)
        .map(|r| r.value)
        .unwrap_or(f64::NAN);
    let pos = quadrature::semi_infinite(|u| (-x * u.exp()).exp() / (pi2 + u * u), 0.0, tol)
        .map(|r| r.value)
        .unwrap_or(f64::NAN);
    (-x).exp() * (0.5 + neg + pos)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::catalog;

    #[test]
    fn every_catalog_kappa_validates() {
        for e in catalog() {
            kappa_for(&e).unwrap_or_else(|err| panic!("{}: {err}", e.id()));
        }
    }

    #[test]
    fn gamma_kappa_and_complement_sum_to_one() {
        for x in [1e-3, 0.1, 0.5, 1.0, 3.0, 10.0, 25.0] {
            let sum = gamma_process_kappa_density(x) + gamma_process_kappa_complement(x);
            assert!((sum - 1.0).abs() < 1e-11, "x={x}: {sum}");
        }
        let far = [30.0, 40.0, 50.0, 200.0].map(gamma_process_kappa_complement);
        assert!(far.windows(2).all(|w| 0.0 < w[1] && w[1] < w[0]), "{far:?}");
        // 1 − k(x) behaves like e^{−x}/log x for large x
        let ratio = far[3] * 200f64.exp() * 200f64.ln();
        assert!((0.5..2.0).contains(&ratio), "{ratio}");
    }

    #[test]
    fn wrong_kappa_is_rejected() {
        let e = CatalogEntry::parse("stable:alpha=0.5").unwrap();
        let wrong = KappaMeasure::new(Some(std::sync::Arc::new(|_| 0.4)), AtomSet::Empty);
        assert!(matches!(validate_kappa(e.function(), &wrong), Err(Error::Validation(_))));
        let singular = KappaMeasure::new(Some(std::sync::Arc::new(|x: f64| 1.0 / x)), AtomSet::Empty);
        assert!(matches!(validate_kappa(e.function(), &singular), Err(Error::Validation(_))));
    }

    #[test]
    fn gamma_kappa_limits() {
        // k(x) ~ 1/log(1/x) at the origin, → 1 at infinity
        let x = 1e-30;
        let k = gamma_process_kappa_density(x);
        assert!((k * -x.ln() - 1.0).abs() < 0.05, "{k}");
        assert!((gamma_process_kappa_density(60.0) - 1.0).abs() < 1e-12);
        let mut prev = 0.0;
        for i in 0..60 {
            let x = 1e-4 * 1.25f64.powi(i);
            let k = gamma_process_kappa_density(x);
            assert!(k >= prev - 1e-13, "not monotone at {x}");
            prev = k;
        }
        assert!(prev <= 1.0 + 1e-12);
    }
}
