//! Bernstein functions Φ(s) = a·s + ∫(1 − e^{−sx}) λ(dx), their Lévy data,
//! conjugates s/Φ(s) and fractional powers Φ^α.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::{self, Tolerance};

/// A shareable real function of one variable.
pub type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Three-valued structural flag. Classification code never treats
/// `Unknown` as either answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Flag {
    True,
    False,
    Unknown,
}

impl Flag {
    pub fn is_true(self) -> bool {
        self == Flag::True
    }
}

impl From<bool> for Flag {
    fn from(b: bool) -> Self {
        if b {
            Flag::True
        } else {
            Flag::False
        }
    }
}

/// Point masses on (0, ∞): either an explicit list or the infinite lattice
/// {n·step : n ≥ 1} with masses given by a function of n.
#[derive(Clone, Default)]
pub enum AtomSet {
    #[default]
    Empty,
    Finite(Vec<(f64, f64)>),
    Lattice { step: f64, mass: Arc<dyn Fn(u64) -> f64 + Send + Sync> },
}

const LATTICE_MAX_TERMS: u64 = 1_000_000;

impl AtomSet {
    pub fn is_empty(&self) -> bool {
        match self {
            AtomSet::Empty => true,
            AtomSet::Finite(v) => v.is_empty(),
            AtomSet::Lattice { .. } => false,
        }
    }

    /// Σ g(x)·m over the atoms. Lattice sums stop once the terms have been
    /// negligible for a run of consecutive atoms past x = 1.
    pub fn sum<G: Fn(f64) -> f64>(&self, g: G) -> f64 {
        match self {
            AtomSet::Empty => 0.0,
            AtomSet::Finite(v) => v.iter().map(|&(x, m)| g(x) * m).sum(),
            AtomSet::Lattice { step, mass } => {
                let mut total = 0.0;
                let mut quiet = 0;
                for n in 1..=LATTICE_MAX_TERMS {
                    let x = n as f64 * step;
                    let term = g(x) * mass(n);
                    total += term;
                    if term.abs() <= 1e-18 * total.abs().max(1e-300) {
                        quiet += 1;
                        if quiet >= 8 && x > 1.0 {
                            break;
                        }
                    } else {
                        quiet = 0;
                    }
                }
                total
            }
        }
    }

    /// Atoms with location ≤ `x_max`, in increasing order for lattices.
    pub fn upto(&self, x_max: f64) -> Vec<(f64, f64)> {
        match self {
            AtomSet::Empty => Vec::new(),
            AtomSet::Finite(v) => v.iter().copied().filter(|&(x, _)| x <= x_max).collect(),
            AtomSet::Lattice { step, mass } => {
                let count = (x_max / step).floor().min(LATTICE_MAX_TERMS as f64) as u64;
                (1..=count).map(|n| (n as f64 * step, mass(n))).collect()
            }
        }
    }

    /// Mass of atoms strictly beyond `x`.
    pub fn mass_beyond(&self, x: f64) -> f64 {
        self.sum(|y| if y > x { 1.0 } else { 0.0 })
    }
}

impl fmt::Debug for AtomSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AtomSet::Empty => write!(f, "Empty"),
            AtomSet::Finite(v) => f.debug_tuple("Finite").field(v).finish(),
            AtomSet::Lattice { step, .. } => write!(f, "Lattice {{ step: {step} }}"),
        }
    }
}

/// Drift, Lévy density and atoms of a subordinator.
#[derive(Clone)]
pub struct LevyTriple {
    drift: f64,
    density: Option<RealFn>,
    tail: Option<RealFn>,
    atoms: AtomSet,
}

impl fmt::Debug for LevyTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LevyTriple")
            .field("drift", &self.drift)
            .field("density", &self.density.is_some())
            .field("tail", &self.tail.is_some())
            .field("atoms", &self.atoms)
            .finish()
    }
}

/// ∫_a^∞ d(x) dx for a > 0, integrated in t = a/x so that power tails
/// become integrable endpoint singularities on (0, 1].
fn density_beyond(d: &RealFn, a: f64, tol: Tolerance) -> Result<f64> {
    let v = quadrature::tanh_sinh(|t| if t > 0.0 { d(a / t) * a / (t * t) } else { 0.0 }, 0.0, 1.0, tol)?;
    Ok(v.value)
}

impl LevyTriple {
    /// Validates drift ≥ 0, positive atom locations and masses, and
    /// ∫(x ∧ 1) λ(dx) < ∞.
    pub fn new(drift: f64, density: Option<RealFn>, atoms: AtomSet) -> Result<Self> {
        if !(drift >= 0.0) || !drift.is_finite() {
            return Err(Error::InvalidParameter(format!("drift must be ≥ 0, got {drift}")));
        }
        if let AtomSet::Finite(v) = &atoms {
            if let Some(&(x, m)) = v.iter().find(|&&(x, m)| !(x > 0.0) || !(m > 0.0)) {
                return Err(Error::InvalidParameter(format!(
                    "atoms need location > 0 and mass > 0, got ({x}, {m})"
                )));
            }
        }
        if let AtomSet::Lattice { step, .. } = &atoms {
            if !(*step > 0.0) {
                return Err(Error::InvalidParameter(format!("lattice step must be > 0, got {step}")));
            }
        }
        let triple = LevyTriple { drift, density, tail: None, atoms };
        let moment = triple.truncated_first_moment()?;
        if !moment.is_finite() {
            return Err(Error::Validation("∫(x ∧ 1) λ(dx) is not finite".into()));
        }
        Ok(triple)
    }

    /// Pure drift a·s.
    pub fn drift_only(drift: f64) -> Result<Self> {
        LevyTriple::new(drift, None, AtomSet::Empty)
    }

    /// Attaches a closed-form tail λ̄(x) = λ((x, ∞)) of the density part.
    pub fn with_tail(mut self, tail: RealFn) -> Self {
        self.tail = Some(tail);
        self
    }

    pub fn drift(&self) -> f64 {
        self.drift
    }

    pub fn density(&self) -> Option<&RealFn> {
        self.density.as_ref()
    }

    pub fn atoms(&self) -> &AtomSet {
        &self.atoms
    }

    pub fn has_closed_tail(&self) -> bool {
        self.tail.is_some()
    }

    /// ∫(x ∧ 1) λ(dx), by quadrature over the density plus the atom sum.
    pub fn truncated_first_moment(&self) -> Result<f64> {
        let atoms = self.atoms.sum(|x| x.min(1.0));
        let dens = match &self.density {
            None => 0.0,
            Some(d) => {
                let tol = Tolerance::new(1e-12, 1e-10);
                let head = quadrature::tanh_sinh(|x| x * d(x), 0.0, 1.0, tol)?.value;
                let tail = match &self.tail {
                    Some(t) => t(1.0),
                    None => density_beyond(d, 1.0, tol)?,
                };
                head + tail
            }
        };
        Ok(atoms + dens)
    }

    /// Tail function λ̄(x) = λ((x, ∞)) including atoms.
    pub fn tail_at(&self, x: f64) -> Result<f64> {
        let atoms = self.atoms.mass_beyond(x);
        let dens = match (&self.tail, &self.density) {
            (Some(t), _) => t(x),
            (None, Some(d)) => {
                let tol = Tolerance::new(1e-13, 1e-10);
                if x < 1.0 {
                    quadrature::tanh_sinh(|y| d(y), x, 1.0, tol)?.value + density_beyond(d, 1.0, tol)?
                } else {
                    density_beyond(d, x, tol)?
                }
            }
            (None, None) => 0.0,
        };
        Ok(atoms + dens)
    }

    /// Density of the size-biased measure λ̂(dx) = x λ(dx), if λ has one.
    pub fn size_biased_density(&self) -> Option<RealFn> {
        self.density.as_ref().map(|d| {
            let d = Arc::clone(d);
            Arc::new(move |x: f64| x * d(x)) as RealFn
        })
    }

    /// Atoms of λ̂: the atoms of λ with mass multiplied by location.
    pub fn size_biased_atoms(&self, x_max: f64) -> Vec<(f64, f64)> {
        self.atoms.upto(x_max).into_iter().map(|(x, m)| (x, x * m)).collect()
    }
}

/// A Bernstein function with closed-form evaluator and optional Lévy data.
#[derive(Clone)]
pub struct BernsteinFunction {
    name: String,
    phi: RealFn,
    phi_prime: Option<RealFn>,
    levy: Option<LevyTriple>,
    complete: Flag,
    sigma: Flag,
    at_zero: f64,
}

impl fmt::Debug for BernsteinFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BernsteinFunction")
            .field("name", &self.name)
            .field("closed_derivative", &self.phi_prime.is_some())
            .field("levy", &self.levy)
            .field("complete", &self.complete)
            .field("sigma", &self.sigma)
            .field("at_zero", &self.at_zero)
            .finish()
    }
}

impl BernsteinFunction {
    pub fn new(name: impl Into<String>, phi: RealFn) -> Self {
        BernsteinFunction {
            name: name.into(),
            phi,
            phi_prime: None,
            levy: None,
            complete: Flag::Unknown,
            sigma: Flag::Unknown,
            at_zero: 0.0,
        }
    }

    pub fn with_derivative(mut self, phi_prime: RealFn) -> Self {
        self.phi_prime = Some(phi_prime);
        self
    }

    pub fn with_levy(mut self, levy: LevyTriple) -> Self {
        self.levy = Some(levy);
        self
    }

    pub fn with_flags(mut self, complete: Flag, sigma: Flag) -> Self {
        self.complete = complete;
        self.sigma = sigma;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn levy(&self) -> Option<&LevyTriple> {
        self.levy.as_ref()
    }

    pub fn is_complete_bernstein(&self) -> Flag {
        self.complete
    }

    pub fn is_in_sigma(&self) -> Flag {
        self.sigma
    }

    pub fn has_closed_derivative(&self) -> bool {
        self.phi_prime.is_some()
    }

    /// Value at s = 0. Zero for a Bernstein function proper; the limit of
    /// s/Φ(s) for conjugates.
    pub fn value_at_zero(&self) -> f64 {
        self.at_zero
    }

    /// Φ(s), checked. Exactly [`Self::value_at_zero`] at s = 0.
    pub fn eval(&self, s: f64) -> Result<f64> {
        if !(s >= 0.0) {
            return Err(Error::Domain(format!("Φ is defined for s ≥ 0, got {s}")));
        }
        Ok(self.value(s))
    }

    /// Unchecked evaluation for s ≥ 0.
    #[inline]
    pub fn value(&self, s: f64) -> f64 {
        if s == 0.0 {
            self.at_zero
        } else {
            (self.phi)(s)
        }
    }

    /// Φ′(s) for s > 0: the closed form when present, else a central
    /// difference with step max(1e−6, 1e−6·s).
    pub fn derivative(&self, s: f64) -> f64 {
        if let Some(d) = &self.phi_prime {
            return d(s);
        }
        let mut h = (1e-6 * s).max(1e-6);
        if h >= s {
            h = 0.5 * s;
        }
        ((self.phi)(s + h) - (self.phi)(s - h)) / (2.0 * h)
    }

    /// Φ′(s)/Φ(s).
    pub fn log_derivative(&self, s: f64) -> f64 {
        self.derivative(s) / self.value(s)
    }

    /// Lists violations of Φ(0) = 0, monotonicity and concavity on `grid`
    /// (sorted ascending), with relative tolerance `tol`.
    pub fn shape_violations(&self, grid: &[f64], tol: f64) -> Vec<String> {
        let mut out = Vec::new();
        if self.at_zero != 0.0 {
            out.push(format!("Φ(0) = {} ≠ 0", self.at_zero));
        }
        let vals: Vec<f64> = grid.iter().map(|&s| self.value(s)).collect();
        for (i, w) in vals.windows(2).enumerate() {
            if w[1] - w[0] < -tol * w[1].abs().max(w[0].abs()) {
                out.push(format!("decreasing between s={} and s={}", grid[i], grid[i + 1]));
            }
        }
        // concavity on a nonuniform grid: slopes must not increase
        for i in 0..vals.len().saturating_sub(2) {
            let s1 = (vals[i + 1] - vals[i]) / (grid[i + 1] - grid[i]);
            let s2 = (vals[i + 2] - vals[i + 1]) / (grid[i + 2] - grid[i + 1]);
            if s2 - s1 > tol * s1.abs().max(s2.abs()).max(1e-300) {
                out.push(format!("convex kink at s={}", grid[i + 1]));
            }
        }
        out
    }
}

/// Φ(s), exactly zero at s = 0.
pub fn eval_phi(f: &BernsteinFunction, s: f64) -> Result<f64> {
    f.eval(s)
}

/// a·s + ∫(1 − e^{−sx}) λ(dx) + Σ atoms, by quadrature.
///
/// The density part is split at x = 1: tanh–sinh on (0, 1] absorbs the
/// integrable singularity of stable-like densities at the origin. On
/// (1, ∞) a closed-form tail is used as λ̄(1) − ∫_1^∞ e^{−sx} λ(dx), which
/// only needs the exponentially decaying part; otherwise the full
/// integrand is integrated over [1, ∞).
pub fn eval_phi_from_levy(triple: &LevyTriple, s: f64, tol: f64) -> Result<f64> {
    if !(s >= 0.0) {
        return Err(Error::Domain(format!("Φ is defined for s ≥ 0, got {s}")));
    }
    if s == 0.0 {
        return Ok(0.0);
    }
    let mut total = triple.drift * s + triple.atoms.sum(|x| -(-s * x).exp_m1());
    if let Some(d) = &triple.density {
        let qt = Tolerance::new(tol, 1e-12);
        let head = quadrature::tanh_sinh(|x| -(-s * x).exp_m1() * d(x), 0.0, 1.0, qt)?;
        let tail = match &triple.tail {
            Some(t) => t(1.0) - quadrature::semi_infinite(|x| (-s * x).exp() * d(x), 1.0, qt)?.value,
            None => quadrature::semi_infinite(|x| -(-s * x).exp_m1() * d(x), 1.0, qt)?.value,
        };
        total += head.value + tail;
    }
    Ok(total)
}

/// The conjugate s ↦ s/Φ(s), with its value at 0 set to the limit
/// 1/Φ′(0+) (zero when Φ′(0+) is infinite).
pub fn conjugate(f: &BernsteinFunction) -> BernsteinFunction {
    let at_zero = conjugate_limit_at_zero(f);
    let phi = Arc::clone(&f.phi);
    let conj_phi: RealFn = Arc::new(move |s: f64| s / phi(s));
    let g = f.clone();
    let conj_prime: RealFn = Arc::new(move |s: f64| {
        let v = g.value(s);
        (v - s * g.derivative(s)) / (v * v)
    });
    BernsteinFunction {
        name: format!("conj({})", f.name),
        phi: conj_phi,
        phi_prime: Some(conj_prime),
        levy: None,
        complete: f.complete,
        sigma: f.sigma,
        at_zero,
    }
}

fn conjugate_limit_at_zero(f: &BernsteinFunction) -> f64 {
    if let Some(d) = &f.phi_prime {
        let d0 = d(0.0);
        if d0.is_infinite() || d0.is_nan() {
            return 0.0;
        }
        if d0 > 0.0 {
            return 1.0 / d0;
        }
    }
    // no usable closed derivative at 0: probe s/Φ(s) on a shrinking ladder
    let probe = |s: f64| s / (f.phi)(s);
    let (a, b) = (probe(1e-10), probe(1e-12));
    if b < 1e-6 || b < 0.5 * a {
        0.0
    } else {
        b
    }
}

/// s ↦ Φ(s)^α for α ∈ (0, 1], again a Bernstein function.
pub fn power_subordinate(f: &BernsteinFunction, alpha: f64) -> Result<BernsteinFunction> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::Domain(format!("power must lie in (0, 1], got {alpha}")));
    }
    if alpha == 1.0 {
        return Ok(f.clone());
    }
    let phi = Arc::clone(&f.phi);
    let g = f.clone();
    let pow_phi: RealFn = Arc::new(move |s: f64| phi(s).powf(alpha));
    let pow_prime: RealFn = Arc::new(move |s: f64| alpha * g.value(s).powf(alpha - 1.0) * g.derivative(s));
    // s^α ∘ Φ is complete whenever Φ is; Σ membership is not inherited
    let complete = if f.complete.is_true() { Flag::True } else { Flag::Unknown };
    Ok(BernsteinFunction {
        name: format!("({})^{}", f.name, alpha),
        phi: pow_phi,
        phi_prime: Some(pow_prime),
        levy: None,
        complete,
        sigma: Flag::Unknown,
        at_zero: f.at_zero.powf(alpha),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::gamma;

    fn identity() -> BernsteinFunction {
        BernsteinFunction::new("identity", Arc::new(|s| s)).with_derivative(Arc::new(|_| 1.0))
    }

    fn power(alpha: f64) -> BernsteinFunction {
        BernsteinFunction::new("power", Arc::new(move |s: f64| s.powf(alpha)))
            .with_derivative(Arc::new(move |s: f64| alpha * s.powf(alpha - 1.0)))
            .with_flags(Flag::True, Flag::True)
    }

    #[test]
    fn eval_domain_and_zero() {
        let f = identity();
        assert_eq!(eval_phi(&f, 3.0).unwrap(), 3.0);
        assert_eq!(eval_phi(&f, 0.0).unwrap(), 0.0);
        assert!(matches!(eval_phi(&f, -1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn levy_pure_drift() {
        let t = LevyTriple::drift_only(1.0).unwrap();
        assert_eq!(eval_phi_from_levy(&t, 5.0, 1e-12).unwrap(), 5.0);
    }

    #[test]
    fn levy_half_stable_density() {
        // λ(dx) = x^{-3/2} / (2Γ(1/2)) dx gives Φ(s) = s^{1/2}
        let c = 0.5 / gamma(0.5).unwrap();
        let dens: RealFn = Arc::new(move |x: f64| c * x.powf(-1.5));
        let t = LevyTriple::new(0.0, Some(Arc::clone(&dens)), AtomSet::Empty).unwrap();
        let v = eval_phi_from_levy(&t, 4.0, 1e-12).unwrap();
        assert!((v - 2.0).abs() < 1e-6, "{v}");
        let gamma_half = gamma(0.5).unwrap();
        let with_tail = t.with_tail(Arc::new(move |x: f64| x.powf(-0.5) / gamma_half));
        let v = eval_phi_from_levy(&with_tail, 4.0, 1e-12).unwrap();
        assert!((v - 2.0).abs() < 1e-9, "{v}");
    }

    #[test]
    fn levy_exponential_density() {
        let t = LevyTriple::new(0.0, Some(Arc::new(|x: f64| (-x).exp())), AtomSet::Empty).unwrap();
        let v = eval_phi_from_levy(&t, 1.0, 1e-12).unwrap();
        assert!((v - 0.5).abs() < 1e-10);
        assert!((t.tail_at(0.0).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn levy_rejects_bad_triples() {
        assert!(LevyTriple::drift_only(-1.0).is_err());
        assert!(LevyTriple::new(0.0, None, AtomSet::Finite(vec![(0.0, 1.0)])).is_err());
        // x^{-2} is not integrable against x ∧ 1 at the origin
        let bad = LevyTriple::new(0.0, Some(Arc::new(|x: f64| x.powi(-2))), AtomSet::Empty);
        assert!(bad.is_err());
    }

    #[test]
    fn atoms_and_size_biased_views() {
        let t = LevyTriple::new(0.0, None, AtomSet::Finite(vec![(1.0, 2.0), (3.0, 0.5)])).unwrap();
        let v = eval_phi_from_levy(&t, 1.0, 1e-12).unwrap();
        let want = 2.0 * (1.0 - (-1.0f64).exp()) + 0.5 * (1.0 - (-3.0f64).exp());
        assert!((v - want).abs() < 1e-15);
        assert_eq!(t.size_biased_atoms(10.0), vec![(1.0, 2.0), (3.0, 1.5)]);
        assert_eq!(t.tail_at(2.0).unwrap(), 0.5);
    }

    #[test]
    fn conjugate_examples() {
        let half = power(0.5);
        let c = conjugate(&half);
        assert_eq!(c.value_at_zero(), 0.0);
        for s in [0.1, 1.0, 7.0] {
            assert!((c.value(s) - s.sqrt()).abs() < 1e-14);
        }
        let id = conjugate(&identity());
        assert_eq!(id.value_at_zero(), 1.0);
        assert_eq!(id.value(2.5), 1.0);

        let cp = BernsteinFunction::new("cp", Arc::new(|s: f64| s / (s + 2.0)))
            .with_derivative(Arc::new(|s: f64| 2.0 / ((s + 2.0) * (s + 2.0))))
            .with_flags(Flag::True, Flag::False);
        let conj = conjugate(&cp);
        assert_eq!(conj.value_at_zero(), 2.0);
        assert!((conj.value(3.0) - 5.0).abs() < 1e-14);
        assert_eq!(conj.is_in_sigma(), Flag::False);
    }

    #[test]
    fn conjugate_without_closed_derivative_probes_limit() {
        let f = BernsteinFunction::new("p", Arc::new(|s: f64| s.powf(0.3)));
        assert_eq!(conjugate(&f).value_at_zero(), 0.0);
        let g = BernsteinFunction::new("cp", Arc::new(|s: f64| s / (s + 2.0)));
        assert!((conjugate(&g).value_at_zero() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn power_subordination() {
        let f = identity();
        let h = power_subordinate(&f, 0.5).unwrap();
        assert!((h.value(9.0) - 3.0).abs() < 1e-14);
        let q = power_subordinate(&power(0.5), 0.5).unwrap();
        assert!((q.value(16.0) - 2.0).abs() < 1e-14);
        assert!(power_subordinate(&f, 0.0).is_err());
        assert!(power_subordinate(&f, 1.5).is_err());
        let same = power_subordinate(&f, 1.0).unwrap();
        assert_eq!(same.value(4.2), 4.2);
    }

    #[test]
    fn finite_difference_fallback() {
        let f = BernsteinFunction::new("log1p", Arc::new(|s: f64| s.ln_1p()));
        for s in [1e-7, 0.5, 3.0, 1e4] {
            let want = 1.0 / (1.0 + s);
            assert!(((f.derivative(s) - want) / want).abs() < 1e-6, "s={s}");
        }
    }

    #[test]
    fn shape_check_flags_convexity() {
        let grid: Vec<f64> = (0..20).map(|i| 0.1 * 1.5f64.powi(i)).collect();
        assert!(power(0.4).shape_violations(&grid, 1e-9).is_empty());
        let convex = BernsteinFunction::new("sq", Arc::new(|s: f64| s * s));
        assert!(!convex.shape_violations(&grid, 1e-9).is_empty());
    }
}
