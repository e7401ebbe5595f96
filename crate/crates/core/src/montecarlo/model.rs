use std::fmt;
use std::sync::Arc;

use rand::Rng;
use rand_distr::{Distribution, Exp, Exp1, Gamma, Geometric, Poisson};

use crate::bernstein::{LevyTriple, RealFn};
use crate::catalog::{CatalogEntry, Family};
use crate::error::{Error, Result};
use crate::laws::sample_positive_stable;
use crate::quadrature::{self, Tolerance};
use crate::special::gamma_pos;

/// Jump-size law of a compound Poisson part.
#[derive(Clone)]
pub enum JumpLaw {
    /// Exponential with the given rate.
    Exponential { rate: f64 },
    /// n·step with P(n) = ratio^{n−1}(1 − ratio), n ≥ 1.
    Lattice { step: f64, ratio: f64 },
    /// Jumps of a Lévy density conditioned on exceeding `cutoff`, drawn by
    /// inverting the tail λ̄: x = λ̄^{−1}(u λ̄(cutoff)).
    Tail { cutoff: f64, tail_at_cutoff: f64, tail: RealFn, density: RealFn, inverse: Option<RealFn> },
}

impl fmt::Debug for JumpLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            JumpLaw::Exponential { rate } => write!(f, "Exponential {{ rate: {rate} }}"),
            JumpLaw::Lattice { step, ratio } => write!(f, "Lattice {{ step: {step}, ratio: {ratio} }}"),
            JumpLaw::Tail { cutoff, inverse, .. } => {
                write!(f, "Tail {{ cutoff: {cutoff}, closed_inverse: {} }}", inverse.is_some())
            }
        }
    }
}

impl JumpLaw {
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            JumpLaw::Exponential { rate } => Exp::new(*rate).expect("rate > 0").sample(rng),
            JumpLaw::Lattice { step, ratio } => {
                let failures = Geometric::new(1.0 - ratio).expect("ratio < 1").sample(rng);
                step * (failures as f64 + 1.0)
            }
            JumpLaw::Tail { cutoff, tail_at_cutoff, tail, density, inverse } => {
                let u = 1.0 - rng.random::<f64>();
                let target = u * tail_at_cutoff;
                match inverse {
                    Some(inv) => inv(target).max(*cutoff),
                    None => invert_tail(tail, density, target, *cutoff),
                }
            }
        }
    }
}

/// x ≥ lo with tail(x) = target, where tail is decreasing with
/// derivative −density. Newton steps on log tail against log x, kept
/// inside a bracket that falls back to geometric bisection.
fn invert_tail(tail: &RealFn, density: &RealFn, target: f64, lo: f64) -> f64 {
    let ln_target = target.ln();
    let mut a = lo.max(1e-300).ln();
    let mut b = a + std::f64::consts::LN_2;
    while tail(b.exp()) > target {
        a = b;
        b += (b - a).max(std::f64::consts::LN_2) * 2.0;
        if b > 709.0 {
            return a.exp();
        }
    }
    let mut y = 0.5 * (a + b);
    for _ in 0..200 {
        let x = y.exp();
        let t = tail(x);
        if t > target {
            a = y;
        } else {
            b = y;
        }
        let slope = -x * density(x) / t;
        let mut next = y - (t.ln() - ln_target) / slope;
        if !(next > a && next < b) || !next.is_finite() {
            next = 0.5 * (a + b);
        }
        if (next - y).abs() <= 1e-13 * y.abs().max(1.0) || b - a <= 1e-13 * b.abs().max(1.0) {
            return next.exp();
        }
        y = next;
    }
    y.exp()
}

/// A subordinator that can be simulated on a grid.
#[derive(Debug, Clone)]
pub enum SubordinatorModel {
    /// ξ_t = rate · t.
    Drift { rate: f64 },
    /// Drift plus compound Poisson jumps at the given intensity.
    CompoundPoisson { drift: f64, intensity: f64, jumps: JumpLaw },
    /// Standard α-stable, Φ(s) = s^α.
    Stable { alpha: f64 },
    /// Gamma process, Φ(s) = log(1 + s).
    Gamma,
}

/// Default small-jump cutoff for infinite-activity Lévy densities.
pub const DEFAULT_CUTOFF: f64 = 1e-4;

impl SubordinatorModel {
    /// Keeps the jumps larger than `cutoff` and replaces the smaller ones
    /// by their mean, which is added to the drift. Needs a Lévy density
    /// with closed-form tail and no atoms.
    pub fn truncated_levy(triple: &LevyTriple, cutoff: f64, inverse: Option<RealFn>) -> Result<Self> {
        if !(cutoff > 0.0) {
            return Err(Error::InvalidParameter(format!("cutoff must be > 0, got {cutoff}")));
        }
        if !triple.atoms().is_empty() {
            return Err(Error::Unsupported("truncation of Lévy measures with atoms".into()));
        }
        let Some(density) = triple.density() else {
            return Ok(SubordinatorModel::Drift { rate: triple.drift() });
        };
        if !triple.has_closed_tail() {
            return Err(Error::Unsupported("truncated simulation needs a closed-form Lévy tail".into()));
        }
        let small_mean = quadrature::tanh_sinh(|x| x * density(x), 0.0, cutoff, Tolerance::new(1e-15, 1e-12))?.value;
        let tail_at_cutoff = triple.tail_at(cutoff)?;
        let t = triple.clone();
        let tail: RealFn = Arc::new(move |x| t.tail_at(x).unwrap_or(0.0));
        Ok(SubordinatorModel::CompoundPoisson {
            drift: triple.drift() + small_mean,
            intensity: tail_at_cutoff,
            jumps: JumpLaw::Tail { cutoff, tail_at_cutoff, tail, density: Arc::clone(density), inverse },
        })
    }

    /// The simulation model of a catalog entry.
    pub fn for_entry(entry: &CatalogEntry) -> Result<Self> {
        match entry.family() {
            Family::Trivial => Ok(SubordinatorModel::Drift { rate: 1.0 }),
            Family::Stable { alpha } => Ok(SubordinatorModel::Stable { alpha }),
            Family::ExpCompoundPoisson { c } => Ok(SubordinatorModel::CompoundPoisson {
                drift: 0.0,
                intensity: 1.0,
                jumps: JumpLaw::Exponential { rate: c },
            }),
            Family::GeomCompoundPoisson { c, q } => Ok(SubordinatorModel::CompoundPoisson {
                drift: 0.0,
                intensity: 1.0,
                jumps: JumpLaw::Lattice { step: -q.ln(), ratio: c / q },
            }),
            Family::GammaProcess => Ok(SubordinatorModel::Gamma),
            Family::RadialOu { alpha, mu } => {
                let g1a = gamma_pos(1.0 - alpha);
                let inverse: RealFn =
                    Arc::new(move |t: f64| (g1a * t).powf(-1.0 / alpha).ln_1p() / (2.0 * mu));
                let levy = entry.function().levy().expect("radial OU carries its Lévy triple");
                SubordinatorModel::truncated_levy(levy, DEFAULT_CUTOFF, Some(inverse))
            }
            Family::GammaRatio { .. } => {
                let levy = entry.function().levy().expect("example carries its Lévy triple");
                SubordinatorModel::truncated_levy(levy, DEFAULT_CUTOFF, None)
            }
            Family::ShiftedGammaRatio { .. } => {
                Err(Error::Unsupported(format!("{} has no Lévy triple to simulate", entry.id())))
            }
        }
    }

    /// ξ_{dl} for one cell.
    pub fn sample_increment<R: Rng + ?Sized>(&self, dl: f64, rng: &mut R) -> f64 {
        match self {
            SubordinatorModel::Drift { rate } => rate * dl,
            SubordinatorModel::CompoundPoisson { drift, intensity, jumps } => {
                let mean = intensity * dl;
                let n = if mean > 0.0 { Poisson::new(mean).expect("mean > 0").sample(rng) as u64 } else { 0 };
                drift * dl + (0..n).map(|_| jumps.sample(rng)).sum::<f64>()
            }
            SubordinatorModel::Stable { alpha } => dl.powf(1.0 / alpha) * sample_positive_stable(*alpha, rng),
            SubordinatorModel::Gamma => Gamma::new(dl, 1.0).expect("dl > 0").sample(rng),
        }
    }

    /// Left Riemann sum Σ_{i<M} e^{−ξ_{i·dl}} dl with M = round(L/dl).
    ///
    /// Drift and compound Poisson models are simulated jump by jump and
    /// the sum between jumps is a geometric series, which yields the same
    /// value as stepping cell by cell. Summation stops once e^{−ξ}
    /// underflows.
    pub fn sample_perpetuity<R: Rng + ?Sized>(&self, dl: f64, horizon: f64, rng: &mut R) -> f64 {
        let cells = (horizon / dl).round() as u64;
        match self {
            SubordinatorModel::Drift { rate } => dl * geometric_sum(rate * dl, cells),
            SubordinatorModel::CompoundPoisson { drift, intensity, jumps } => {
                let step_decay = drift * dl;
                let mut total = 0.0;
                let mut jumps_sum = 0.0;
                let mut t = 0.0;
                let mut i: u64 = 0;
                while i < cells {
                    let wait: f64 = if *intensity > 0.0 { rng.sample::<f64, _>(Exp1) / intensity } else { f64::INFINITY };
                    t += wait;
                    let next = if t.is_finite() { ((t / dl).ceil() as u64).min(cells) } else { cells };
                    if next > i {
                        let level = jumps_sum + step_decay * i as f64;
                        total += dl * (-level).exp() * geometric_sum(step_decay, next - i);
                        i = next;
                    }
                    if i >= cells {
                        break;
                    }
                    jumps_sum += jumps.sample(rng);
                    if jumps_sum + step_decay * i as f64 > 746.0 {
                        break;
                    }
                }
                total
            }
            SubordinatorModel::Stable { .. } | SubordinatorModel::Gamma => {
                let mut xi = 0.0f64;
                let mut total = 0.0;
                for k in 0..cells {
                    let w = (-xi).exp();
                    // the remaining cells can no longer change the sum
                    if w * (cells - k) as f64 <= 1e-17 * total {
                        break;
                    }
                    total += w;
                    xi += self.sample_increment(dl, rng);
                }
                total * dl
            }
        }
    }
}

/// Σ_{k<n} e^{−a k}.
fn geometric_sum(a: f64, n: u64) -> f64 {
    if a == 0.0 {
        n as f64
    } else {
        (-a * n as f64).exp_m1() / (-a).exp_m1()
    }
}
