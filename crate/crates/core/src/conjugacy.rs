//! Conjugate pairs Φ(s)Φ*(s) = s and the swap of I and R.
//!
//! Φ belongs to the class Σ when its potential measure is
//! ρ(dx) = b δ_0 + h(x) dx with h nonincreasing and h(+∞) = 0. Then
//! Φ*(s) = s/Φ(s) is again Bernstein, and the perpetuity of one is the
//! multiplicative complement of the other.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::bernstein::{conjugate, BernsteinFunction, Flag, RealFn};
use crate::error::{Error, Result};
use crate::mellin::{i_product, r_product};
use crate::quadrature::{self, Tolerance};

/// Potential measure ρ(dx) = b δ_0 + h(x) dx, with ∫ e^{−sx} ρ(dx) = 1/Φ(s).
#[derive(Clone)]
pub struct PotentialDensity {
    b: f64,
    h: RealFn,
}

impl fmt::Debug for PotentialDensity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PotentialDensity").field("b", &self.b).finish_non_exhaustive()
    }
}

impl PotentialDensity {
    pub fn new(b: f64, h: RealFn) -> Result<Self> {
        if !(b >= 0.0) || !b.is_finite() {
            return Err(Error::InvalidParameter(format!("point mass must be ≥ 0, got {b}")));
        }
        Ok(PotentialDensity { b, h })
    }

    pub fn point_mass(&self) -> f64 {
        self.b
    }

    pub fn h(&self, x: f64) -> f64 {
        (self.h)(x)
    }

    /// b + ∫_0^∞ e^{−sx} h(x) dx.
    pub fn laplace(&self, s: f64) -> Result<f64> {
        let tol = Tolerance::new(1e-13, 1e-11);
        Ok(self.b + quadrature::zero_to_infinity(|x| (-s * x).exp() * (self.h)(x), tol)?.value)
    }
}

/// Points where the Laplace transform of ρ is matched against 1/Φ.
pub const POTENTIAL_CHECK_POINTS: [f64; 4] = [0.5, 1.0, 2.0, 5.0];
const POTENTIAL_CHECK_TOL: f64 = 1e-5;

/// Outcome of [`sigma_check`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SigmaVerdict {
    pub in_sigma: bool,
    pub method: &'static str,
    pub detail: String,
}

/// Decides Φ ∈ Σ.
///
/// With a candidate potential density, ρ is first confirmed to be the
/// potential of Φ, then h is tested for monotonicity on the decades
/// 10^{-6}..10^{12} and for decay: either h(50) < 1e−6 h(1), or the last
/// decade still contracts h by at least 0.1%. Without a candidate, the
/// structural flag of Φ decides; `Unknown` is unsupported.
pub fn sigma_check(f: &BernsteinFunction, rho: Option<&PotentialDensity>) -> Result<SigmaVerdict> {
    let Some(rho) = rho else {
        return match f.is_in_sigma() {
            Flag::True => Ok(SigmaVerdict { in_sigma: true, method: "flag", detail: String::new() }),
            Flag::False => Ok(SigmaVerdict { in_sigma: false, method: "flag", detail: String::new() }),
            Flag::Unknown => Err(Error::Unsupported(format!(
                "Σ membership of {} is unknown and no potential density was given",
                f.name()
            ))),
        };
    };
    for s in POTENTIAL_CHECK_POINTS {
        let want = 1.0 / f.value(s);
        let got = rho.laplace(s)?;
        if (got - want).abs() > POTENTIAL_CHECK_TOL * want {
            return Err(Error::Validation(format!(
                "∫e^(-sx)ρ(dx) = {got} but 1/Φ = {want} at s = {s}"
            )));
        }
    }
    let xs: Vec<f64> = (-6..=12).map(|k| 10f64.powi(k)).collect();
    let hs: Vec<f64> = xs.iter().map(|&x| rho.h(x)).collect();
    if let Some(i) = hs.windows(2).position(|w| w[1] > w[0] * (1.0 + 1e-12)) {
        return Ok(SigmaVerdict {
            in_sigma: false,
            method: "potential-density",
            detail: format!("h increases between {} and {}", xs[i], xs[i + 1]),
        });
    }
    let (h1, h50) = (rho.h(1.0), rho.h(50.0));
    let n = hs.len();
    let vanishes = h50 < 1e-6 * h1 || hs[n - 1] == 0.0 || hs[n - 1] < (1.0 - 1e-3) * hs[n - 2];
    Ok(SigmaVerdict {
        in_sigma: vanishes,
        method: "potential-density",
        detail: if vanishes { String::new() } else { format!("h levels off at {}", hs[n - 1]) },
    })
}

/// Φ*(s) = s(b + ∫ e^{−sx} h(x) dx), the conjugate built from a potential
/// density. Fails when h is not integrable near 0.
pub fn conjugate_bernstein_of_h(rho: &PotentialDensity) -> Result<BernsteinFunction> {
    let tol = Tolerance::new(1e-12, 1e-10);
    quadrature::tanh_sinh(|x| rho.h(x), 0.0, 1.0, tol)
        .map_err(|_| Error::Validation("h is not integrable at 0".into()))?;
    let r = rho.clone();
    let phi: RealFn = Arc::new(move |s: f64| s * r.laplace(s).unwrap_or(f64::NAN));
    Ok(BernsteinFunction::new("conj(h)", phi))
}

/// Relative gaps |R_{Φ*}(r)/I_Φ(r) − 1| and |I_{Φ*}(r)/R_Φ(r) − 1|.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SwapResidual {
    pub r: f64,
    pub r_conj_vs_i: f64,
    pub i_conj_vs_r: f64,
}

/// Checks that conjugation swaps the Mellin transforms of I and R.
/// Requires Φ ∈ Σ.
pub fn swap_check(f: &BernsteinFunction, grid: &[f64], tol: f64) -> Result<Vec<SwapResidual>> {
    if f.is_in_sigma() != Flag::True {
        return Err(Error::Precondition(format!("{} is not known to lie in Σ", f.name())));
    }
    let conj = conjugate(f);
    grid.par_iter()
        .map(|&r| {
            let r_conj = r_product(&conj, r, tol)?.value;
            let i_conj = i_product(&conj, r, tol)?.value;
            let i_f = i_product(f, r, tol)?.value;
            let r_f = r_product(f, r, tol)?.value;
            Ok(SwapResidual { r, r_conj_vs_i: (r_conj / i_f - 1.0).abs(), i_conj_vs_r: (i_conj / r_f - 1.0).abs() })
        })
        .collect()
}
