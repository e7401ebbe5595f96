use crate::bernstein::BernsteinFunction;
use crate::error::{Error, Result};
use crate::mellin::{MellinResult, Method};
use crate::quadrature::{self, Tolerance};

use super::KappaMeasure;

const SERIES_CUTOFF: f64 = 1e-3;
const SERIES_TERMS: usize = 6;

/// F_r(x) = (e^{−(r−1)x} − 1 − (r−1)(e^{−x} − 1)) / (x (e^x − 1)).
///
/// Bounded on (0, ∞) with F_r(0+) = (r − 1)(r − 2)/2. Near the origin the
/// quotient is evaluated as a ratio of power series; for large x it is
/// rewritten in decaying exponentials.
pub fn kernel(r: f64, x: f64) -> f64 {
    let t = r - 1.0;
    if x < SERIES_CUTOFF {
        // numerator / x² = Σ a_k x^k, denominator / x² = Σ x^k/(k+1)!
        let mut a = [0.0; SERIES_TERMS];
        let mut d = [0.0; SERIES_TERMS];
        let mut tp = t * t;
        let mut fact = 2.0;
        let mut dfact = 1.0;
        for k in 0..SERIES_TERMS {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            a[k] = sign * (tp - t) / fact;
            d[k] = 1.0 / dfact;
            tp *= t;
            fact *= (k + 3) as f64;
            dfact *= (k + 2) as f64;
        }
        let mut q = [0.0; SERIES_TERMS];
        for k in 0..SERIES_TERMS {
            q[k] = a[k] - (1..=k).map(|j| d[j] * q[k - j]).sum::<f64>();
        }
        return q.iter().rev().fold(0.0, |acc, c| acc * x + c);
    }
    if x <= 30.0 {
        return ((-t * x).exp_m1() - t * (-x).exp_m1()) / (x * x.exp_m1());
    }
    ((-r * x).exp() + (t - 1.0) * (-x).exp() - t * (-2.0 * x).exp()) / (x * -(-x).exp_m1())
}

fn check_r(r: f64) -> Result<()> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::Domain(format!("Mellin argument must be > 0, got {r}")));
    }
    Ok(())
}

fn quad_tol(tol: f64) -> Tolerance {
    Tolerance::new(tol, tol)
}

fn finish(r: f64, log_value: f64, err: f64) -> Result<MellinResult> {
    if log_value > 709.0 {
        return Err(Error::Overflow(log_value));
    }
    Ok(MellinResult { r, value: log_value.exp(), method: Method::Integral, n_terms: 0, err_estimate: err })
}

/// E[R^{r−1}] = Φ(1)^{r−1} exp(∫ F_r dκ).
pub fn r_integral(f: &BernsteinFunction, kappa: &KappaMeasure, r: f64, tol: f64) -> Result<MellinResult> {
    check_r(r)?;
    if r == 1.0 {
        return finish(r, 0.0, 0.0);
    }
    let body = kappa.integrate(|x| kernel(r, x), quad_tol(tol))?;
    finish(r, (r - 1.0) * f.value(1.0).ln() + body, tol)
}

/// E[I^{r−1}] = Φ(1)^{1−r} exp(∫ F_r (dx − κ(dx))).
pub fn i_integral(f: &BernsteinFunction, kappa: &KappaMeasure, r: f64, tol: f64) -> Result<MellinResult> {
    check_r(r)?;
    if r == 1.0 {
        return finish(r, 0.0, 0.0);
    }
    let qt = quad_tol(tol);
    let lebesgue = if kappa.has_density() {
        quadrature::zero_to_infinity(|x| kernel(r, x) * kappa.complement_at(x), qt)?.value
    } else {
        quadrature::zero_to_infinity(|x| kernel(r, x), qt)?.value
    };
    let atoms = kappa.atoms().sum(|x| kernel(r, x));
    finish(r, -(r - 1.0) * f.value(1.0).ln() + lebesgue - atoms, tol)
}

/// Γ(r) = exp(∫_0^∞ F_r(x) dx).
pub fn gamma_integral_rep(r: f64) -> Result<f64> {
    check_r(r)?;
    let v = quadrature::zero_to_infinity(|x| kernel(r, x), Tolerance::new(1e-13, 1e-13))?;
    Ok(v.value.exp())
}

fn digamma_integrand(r: f64, x: f64) -> f64 {
    if x < SERIES_CUTOFF {
        let c0 = r - 1.5;
        let c1 = 5.0 / 12.0 + 0.5 * r - 0.5 * r * r;
        let c2 = -1.0 / 6.0 + r / 12.0 - 0.25 * r * r + r * r * r / 6.0;
        let r2 = r * r;
        let c3 = 1.0 / 24.0 + 1.0 / 720.0 - r2 * r2 / 24.0 + r2 * r / 12.0 - r2 / 24.0;
        return c0 + x * (c1 + x * (c2 + x * c3));
    }
    (-x).exp() / x + (-r * x).exp() / (-x).exp_m1()
}

/// ψ(r) = ∫_0^∞ (e^{−x}/x − e^{−rx}/(1 − e^{−x})) dx.
pub fn digamma_rep(r: f64) -> Result<f64> {
    check_r(r)?;
    let v = quadrature::zero_to_infinity(|x| digamma_integrand(r, x), Tolerance::new(1e-13, 1e-13))?;
    Ok(v.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::{digamma_pos, gamma_pos};

    #[test]
    fn kernel_branches_agree() {
        for r in [0.2, 0.5, 1.7, 3.0, 6.5] {
            let at = SERIES_CUTOFF;
            let below = kernel(r, at * (1.0 - 1e-12));
            let t = r - 1.0;
            let direct = ((-t * at).exp_m1() - t * (-at).exp_m1()) / (at * at.exp_m1());
            assert!((below - direct).abs() < 1e-10 * direct.abs().max(1e-3), "r={r}");
            let x = 30.0f64;
            let mid = ((-t * x).exp_m1() - t * (-x).exp_m1()) / (x * x.exp_m1());
            let far = ((-r * x).exp() + (t - 1.0) * (-x).exp() - t * (-2.0 * x).exp()) / (x * -(-x).exp_m1());
            assert!((mid - far).abs() < 1e-12 * mid.abs(), "r={r}");
            assert!((kernel(r, 0.0) - t * (t - 1.0) / 2.0).abs() < 1e-15);
        }
        assert_eq!(kernel(1.0, 0.3), 0.0);
        assert!(kernel(2.0, 0.3).abs() < 1e-17);
    }

    #[test]
    fn digamma_series_matches_direct_form() {
        for r in [0.3, 1.0, 4.0] {
            let x = SERIES_CUTOFF;
            let direct = (-x).exp() / x + (-r * x).exp() / (-x).exp_m1();
            assert!((digamma_integrand(r, x * (1.0 - 1e-12)) - direct).abs() < 1e-9);
        }
    }

    #[test]
    fn gamma_and_digamma_representations() {
        for r in [0.25, 0.5, 1.0, 2.0, 3.7, 8.0] {
            let g = gamma_pos(r);
            assert!(((gamma_integral_rep(r).unwrap() - g) / g).abs() < 1e-8, "r={r}");
            assert!((digamma_rep(r).unwrap() - digamma_pos(r)).abs() < 1e-8, "r={r}");
        }
        assert!(gamma_integral_rep(0.0).is_err());
    }
}
