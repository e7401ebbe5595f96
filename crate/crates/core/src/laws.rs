//! Explicit laws of I and R for the families where they are known.

use rand::Rng;
use rand_distr::{Beta, Distribution, Exp1, Gamma};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::special::{gamma_pos, ln_gamma_pos};

/// A positive random variable with a closed-form Mellin transform.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum KnownLaw {
    /// Point mass at `value`.
    Constant { value: f64 },
    /// Standard exponential.
    Exponential,
    /// Gamma(shape, 1).
    Gamma { shape: f64 },
    /// Beta(a, b).
    Beta { a: f64, b: f64 },
    /// scale · G^power with G ~ Gamma(shape, 1).
    ScaledGammaPower { scale: f64, shape: f64, power: f64 },
    /// scale · τ^power with τ positive stable, E[e^{−sτ}] = e^{−s^alpha}.
    ScaledStablePower { scale: f64, alpha: f64, power: f64 },
    /// Product of two independent variables.
    Product { left: Box<KnownLaw>, right: Box<KnownLaw> },
}

impl KnownLaw {
    /// E[X^p], or `None` where the moment is infinite.
    pub fn moment(&self, p: f64) -> Option<f64> {
        let m = match self {
            KnownLaw::Constant { value } => value.powf(p),
            KnownLaw::Exponential => return KnownLaw::Gamma { shape: 1.0 }.moment(p),
            KnownLaw::Gamma { shape } => {
                if shape + p <= 0.0 {
                    return None;
                }
                (ln_gamma_pos(shape + p) - ln_gamma_pos(*shape)).exp()
            }
            KnownLaw::Beta { a, b } => {
                if a + p <= 0.0 {
                    return None;
                }
                (ln_gamma_pos(a + p) + ln_gamma_pos(a + b) - ln_gamma_pos(*a) - ln_gamma_pos(a + b + p)).exp()
            }
            KnownLaw::ScaledGammaPower { scale, shape, power } => {
                let q = power * p;
                if shape + q <= 0.0 {
                    return None;
                }
                scale.powf(p) * (ln_gamma_pos(shape + q) - ln_gamma_pos(*shape)).exp()
            }
            KnownLaw::ScaledStablePower { scale, alpha, power } => {
                let q = power * p;
                if q >= *alpha {
                    return None;
                }
                let denom = 1.0 - q;
                if denom <= 0.0 {
                    // Γ(1 − q) has poles; only q < 1 is needed here
                    return None;
                }
                scale.powf(p) * gamma_pos(1.0 - q / alpha) / gamma_pos(denom)
            }
            KnownLaw::Product { left: x, right: y } => x.moment(p)? * y.moment(p)?,
        };
        Some(m)
    }

    /// Mellin transform E[X^{r−1}].
    pub fn mellin(&self, r: f64) -> Option<f64> {
        self.moment(r - 1.0)
    }

    /// Lebesgue density where a closed form exists.
    pub fn density(&self, x: f64) -> Option<f64> {
        if !(x > 0.0) {
            return match self {
                KnownLaw::Constant { .. } | KnownLaw::Product { .. } | KnownLaw::ScaledStablePower { .. } => None,
                _ => Some(0.0),
            };
        }
        match self {
            KnownLaw::Exponential => Some((-x).exp()),
            KnownLaw::Gamma { shape } => Some(gamma_density(*shape, x)),
            KnownLaw::Beta { a, b } => {
                if x >= 1.0 {
                    return Some(0.0);
                }
                let ln_b = ln_gamma_pos(*a) + ln_gamma_pos(*b) - ln_gamma_pos(a + b);
                Some(((a - 1.0) * x.ln() + (b - 1.0) * (-x).ln_1p() - ln_b).exp())
            }
            KnownLaw::ScaledGammaPower { scale, shape, power } => {
                let ln_g = (x / scale).ln() / power;
                let ln_dens = shape * ln_g - ln_g.exp() - ln_gamma_pos(*shape) - (power.abs() * x).ln();
                Some(ln_dens.exp())
            }
            _ => None,
        }
    }

    /// Upper end of the support when it is bounded.
    pub fn support_upper(&self) -> Option<f64> {
        match self {
            KnownLaw::Constant { value } => Some(*value),
            KnownLaw::Beta { .. } => Some(1.0),
            _ => None,
        }
    }

    /// P(X > x) where a closed form exists.
    pub fn survival(&self, x: f64) -> Option<f64> {
        match self {
            KnownLaw::Exponential => Some(if x <= 0.0 { 1.0 } else { (-x).exp() }),
            KnownLaw::Gamma { shape } if *shape == 1.0 => KnownLaw::Exponential.survival(x),
            KnownLaw::Beta { a, b } if *a == 1.0 => Some(if x <= 0.0 {
                1.0
            } else if x >= 1.0 {
                0.0
            } else {
                (b * (-x).ln_1p()).exp()
            }),
            KnownLaw::ScaledGammaPower { scale, shape, power } if *shape == 1.0 && *power > 0.0 => {
                Some(if x <= 0.0 { 1.0 } else { (-(x / scale).powf(1.0 / power)).exp() })
            }
            _ => None,
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            KnownLaw::Constant { value } => *value,
            KnownLaw::Exponential => rng.sample(Exp1),
            KnownLaw::Gamma { shape } => sample_gamma(*shape, rng),
            KnownLaw::Beta { a, b } => Beta::new(*a, *b).expect("validated parameters").sample(rng),
            KnownLaw::ScaledGammaPower { scale, shape, power } => scale * sample_gamma(*shape, rng).powf(*power),
            KnownLaw::ScaledStablePower { scale, alpha, power } => {
                scale * sample_positive_stable(*alpha, rng).powf(*power)
            }
            KnownLaw::Product { left: x, right: y } => x.sample(rng) * y.sample(rng),
        }
    }

    /// Short human-readable description.
    pub fn label(&self) -> String {
        match self {
            KnownLaw::Constant { value } => format!("const({value})"),
            KnownLaw::Exponential => "Exp(1)".into(),
            KnownLaw::Gamma { shape } => format!("Gamma({shape})"),
            KnownLaw::Beta { a, b } => format!("Beta({a},{b})"),
            KnownLaw::ScaledGammaPower { scale, shape, power } => format!("{scale}*Gamma({shape})^{power}"),
            KnownLaw::ScaledStablePower { scale, alpha, power } => format!("{scale}*Stable({alpha})^{power}"),
            KnownLaw::Product { left: x, right: y } => format!("{}*{}", x.label(), y.label()),
        }
    }
}

fn gamma_density(shape: f64, x: f64) -> f64 {
    ((shape - 1.0) * x.ln() - x - ln_gamma_pos(shape)).exp()
}

fn sample_gamma<R: Rng + ?Sized>(shape: f64, rng: &mut R) -> f64 {
    Gamma::new(shape, 1.0).expect("shape > 0").sample(rng)
}

/// Positive α-stable variable with E[e^{−sτ}] = e^{−s^α}, by Kanter's
/// representation τ = (A(U)/E)^{(1−α)/α} with U uniform on (0, π) and E
/// standard exponential.
pub fn sample_positive_stable<R: Rng + ?Sized>(alpha: f64, rng: &mut R) -> f64 {
    debug_assert!(alpha > 0.0 && alpha < 1.0);
    let u = std::f64::consts::PI * (1.0 - rng.random::<f64>());
    let e: f64 = rng.sample(Exp1);
    let ln_tau = (alpha * u).sin().ln() - u.sin().ln() / alpha
        + (1.0 - alpha) / alpha * (((1.0 - alpha) * u).sin().ln() - e.ln());
    ln_tau.exp()
}

/// Checks the parameters of a law for sampling.
pub fn validate(law: &KnownLaw) -> Result<()> {
    let bad = |what: &str| Err(Error::InvalidParameter(format!("{what} in {}", law.label())));
    match law {
        KnownLaw::Constant { value } if !(*value > 0.0) => bad("non-positive constant"),
        KnownLaw::Gamma { shape } if !(*shape > 0.0) => bad("non-positive shape"),
        KnownLaw::Beta { a, b } if !(*a > 0.0 && *b > 0.0) => bad("non-positive beta parameter"),
        KnownLaw::ScaledGammaPower { scale, shape, .. } if !(*scale > 0.0 && *shape > 0.0) => bad("bad gamma power"),
        KnownLaw::ScaledStablePower { alpha, .. } if !(*alpha > 0.0 && *alpha < 1.0) => bad("stable index"),
        KnownLaw::Product { left: x, right: y } => validate(x).and(validate(y)),
        _ => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn sample_mean(law: &KnownLaw, p: f64, n: usize, seed: u64) -> (f64, f64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let xs: Vec<f64> = (0..n).map(|_| law.sample(&mut rng).powf(p)).collect();
        let m = xs.iter().sum::<f64>() / n as f64;
        let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n as f64 - 1.0);
        (m, (v / n as f64).sqrt())
    }

    #[test]
    fn beta_one_c_has_reciprocal_mean() {
        let law = KnownLaw::Beta { a: 1.0, b: 2.0 };
        assert!((law.moment(1.0).unwrap() - 1.0 / 3.0).abs() < 1e-14);
        assert!((law.survival(0.5).unwrap() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn stable_laplace_transform() {
        for alpha in [0.3, 0.5, 0.7] {
            let mut rng = ChaCha8Rng::seed_from_u64(11);
            let n = 100_000;
            let xs: Vec<f64> = (0..n).map(|_| (-sample_positive_stable(alpha, &mut rng)).exp()).collect();
            let m = xs.iter().sum::<f64>() / n as f64;
            let sd = (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / n as f64).sqrt();
            let want = (-1.0f64).exp();
            assert!((m - want).abs() < 4.0 * sd / (n as f64).sqrt(), "alpha={alpha}: {m}");
        }
    }

    #[test]
    fn sampled_moments_match_closed_forms() {
        let laws = [
            KnownLaw::Gamma { shape: 2.5 },
            KnownLaw::ScaledGammaPower { scale: 2.0, shape: 1.0, power: 0.5 },
            KnownLaw::ScaledStablePower { scale: 0.5, alpha: 0.5, power: -0.5 },
            KnownLaw::Product {
                left: Box::new(KnownLaw::Beta { a: 1.0, b: 0.5 }),
                right: Box::new(KnownLaw::ScaledGammaPower { scale: 1.0, shape: 1.0, power: 0.5 }),
            },
        ];
        for law in &laws {
            let (m, se) = sample_mean(law, 1.0, 100_000, 5);
            let want = law.moment(1.0).unwrap();
            assert!((m - want).abs() < 4.0 * se, "{}: {m} vs {want}", law.label());
        }
    }

    #[test]
    fn densities_integrate_to_one() {
        use crate::quadrature::{zero_to_infinity, Tolerance};
        for law in [
            KnownLaw::Gamma { shape: 3.0 },
            KnownLaw::Beta { a: 1.0, b: 2.0 },
            KnownLaw::ScaledGammaPower { scale: 0.5, shape: 2.0, power: 0.5 },
        ] {
            let total = zero_to_infinity(|x| law.density(x).unwrap(), Tolerance::new(1e-12, 1e-12)).unwrap();
            assert!((total.value - 1.0).abs() < 1e-9, "{}", law.label());
        }
    }

    #[test]
    fn infinite_moments_are_none() {
        assert!(KnownLaw::Gamma { shape: 1.0 }.moment(-1.0).is_none());
        assert!(KnownLaw::ScaledStablePower { scale: 1.0, alpha: 0.5, power: 1.0 }.moment(1.0).is_none());
        assert!(validate(&KnownLaw::Beta { a: 0.0, b: 1.0 }).is_err());
    }
}
