//! Built-in families of Bernstein functions.
//!
//! Entries are addressed by ids of the form `family` or
//! `family:key=value,key=value`, e.g. `stable:alpha=0.5` or
//! `geomcp:c=0.1,q=0.5`. Each entry bundles the Bernstein function with
//! whatever closed forms are available for it: Mellin transforms of I and
//! R, the measure κ, the potential density and explicit laws.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::bernstein::{AtomSet, BernsteinFunction, Flag, LevyTriple, RealFn};
use crate::conjugacy::PotentialDensity;
use crate::error::{Error, Result};
use crate::kappa::{gamma_process_kappa_complement, gamma_process_kappa_density, KappaMeasure};
use crate::laws::KnownLaw;
use crate::special::{digamma_pos, gamma_pos, ln_gamma_pos, ln_gamma_ratio};

/// Parameterised family of a catalog entry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    Trivial,
    Stable { alpha: f64 },
    ExpCompoundPoisson { c: f64 },
    GeomCompoundPoisson { c: f64, q: f64 },
    GammaProcess,
    GammaRatio { alpha: f64, c: f64 },
    ShiftedGammaRatio { alpha: f64, b: f64, c: f64 },
    RadialOu { alpha: f64, mu: f64 },
}

/// Expected answers of the classification checks, where they are known.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ExpectedClassification {
    pub i_mid: Option<bool>,
    pub log_i_sd: Option<bool>,
    pub log_r_sd: Option<bool>,
}

const SPECIAL_TOL: f64 = 1e-12;

fn is_close(a: f64, b: f64) -> bool {
    (a - b).abs() <= SPECIAL_TOL * b.abs().max(1.0)
}

impl Family {
    /// Parses an entry id.
    pub fn parse(id: &str) -> Result<Family> {
        let id = id.trim();
        let (name, rest) = match id.split_once(':') {
            Some((n, r)) => (n.trim(), Some(r)),
            None => (id, None),
        };
        let mut params = BTreeMap::new();
        if let Some(rest) = rest {
            for kv in rest.split(',').filter(|s| !s.trim().is_empty()) {
                let (k, v) = kv
                    .split_once('=')
                    .ok_or_else(|| Error::Parse(format!("expected key=value, got `{kv}`")))?;
                let v: f64 = v
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("`{v}` is not a number")))?;
                if params.insert(k.trim().to_string(), v).is_some() {
                    return Err(Error::Parse(format!("parameter `{}` given twice", k.trim())));
                }
            }
        }
        let mut take = |key: &str| {
            params
                .remove(key)
                .ok_or_else(|| Error::Parse(format!("`{name}` needs parameter `{key}`")))
        };
        let family = match name.to_ascii_lowercase().as_str() {
            "trivial" => Family::Trivial,
            "stable" => Family::Stable { alpha: take("alpha")? },
            "expcp" => Family::ExpCompoundPoisson { c: take("c")? },
            "geomcp" => Family::GeomCompoundPoisson { c: take("c")?, q: take("q")? },
            "gamma" => Family::GammaProcess,
            "by451" => Family::GammaRatio { alpha: take("alpha")?, c: take("c")? },
            "by452" => Family::ShiftedGammaRatio { alpha: take("alpha")?, b: take("b")?, c: take("c")? },
            "rou" => Family::RadialOu { alpha: take("alpha")?, mu: take("mu")? },
            other => return Err(Error::Parse(format!("unknown family `{other}`"))),
        };
        if let Some(extra) = params.keys().next() {
            return Err(Error::Parse(format!("unexpected parameter `{extra}` for `{name}`")));
        }
        family.validate()?;
        Ok(family)
    }

    /// Canonical id, parseable by [`Family::parse`].
    pub fn id(&self) -> String {
        match *self {
            Family::Trivial => "trivial".into(),
            Family::Stable { alpha } => format!("stable:alpha={alpha}"),
            Family::ExpCompoundPoisson { c } => format!("expcp:c={c}"),
            Family::GeomCompoundPoisson { c, q } => format!("geomcp:c={c},q={q}"),
            Family::GammaProcess => "gamma".into(),
            Family::GammaRatio { alpha, c } => format!("by451:alpha={alpha},c={c}"),
            Family::ShiftedGammaRatio { alpha, b, c } => format!("by452:alpha={alpha},b={b},c={c}"),
            Family::RadialOu { alpha, mu } => format!("rou:alpha={alpha},mu={mu}"),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        let unit = |a: f64| a > 0.0 && a < 1.0;
        match *self {
            Family::Trivial | Family::GammaProcess => Ok(()),
            Family::Stable { alpha } if !unit(alpha) => bad(format!("stable needs 0 < alpha < 1, got {alpha}")),
            Family::ExpCompoundPoisson { c } if !(c > 0.0 && c.is_finite()) => {
                bad(format!("expcp needs c > 0, got {c}"))
            }
            Family::GeomCompoundPoisson { c, q } if !(0.0 <= c && c < q && q < 1.0) => {
                bad(format!("geomcp needs 0 <= c < q < 1, got c={c}, q={q}"))
            }
            Family::GammaRatio { alpha, c } if !(unit(alpha) && c > 1.0) => {
                bad(format!("by451 needs 0 < alpha < 1 and c > 1, got alpha={alpha}, c={c}"))
            }
            Family::ShiftedGammaRatio { alpha, b, c } if !(unit(alpha) && 1.0 < b && b <= c) => {
                bad(format!("by452 needs 0 < alpha < 1 and 1 < b <= c, got alpha={alpha}, b={b}, c={c}"))
            }
            Family::RadialOu { alpha, mu } if !(unit(alpha) && mu > 0.0 && mu.is_finite()) => {
                bad(format!("rou needs 0 < alpha < 1 and mu > 0, got alpha={alpha}, mu={mu}"))
            }
            _ => Ok(()),
        }
    }

    /// Formula for Φ, for listings.
    pub fn description(&self) -> &'static str {
        match self {
            Family::Trivial => "Phi(s) = s",
            Family::Stable { .. } => "Phi(s) = s^alpha",
            Family::ExpCompoundPoisson { .. } => "Phi(s) = s/(s+c)",
            Family::GeomCompoundPoisson { .. } => "Phi(s) = (1-q^s)/(1-c q^(s-1))",
            Family::GammaProcess => "Phi(s) = log(1+s)",
            Family::GammaRatio { .. } => "Phi(s) = alpha s Gamma(alpha(s-1+c))/Gamma(alpha(s+c))",
            Family::ShiftedGammaRatio { .. } => "Phi(s) = s/(b+s-1) Gamma(alpha(s+c))/Gamma(alpha(s-1+c))",
            Family::RadialOu { .. } => "Phi(s) = Gamma(s/(2mu)+alpha)/Gamma(s/(2mu))",
        }
    }

    /// The family of s/Φ(s), when it is again in the catalog.
    pub fn conjugate_family(&self) -> Option<Family> {
        match *self {
            Family::Stable { alpha } => Some(Family::Stable { alpha: 1.0 - alpha }),
            _ => None,
        }
    }

    fn rou_special(alpha: f64, mu: f64) -> (bool, bool) {
        (is_close(2.0 * mu * alpha, 1.0), is_close(2.0 * mu * (1.0 - alpha), 1.0))
    }

    pub fn expected(&self) -> ExpectedClassification {
        let all = ExpectedClassification { i_mid: Some(true), log_i_sd: Some(true), log_r_sd: Some(true) };
        match *self {
            Family::Trivial => ExpectedClassification { i_mid: Some(true), ..Default::default() },
            Family::Stable { .. } | Family::ExpCompoundPoisson { .. } | Family::GammaProcess => all,
            Family::GeomCompoundPoisson { .. } => {
                ExpectedClassification { i_mid: Some(false), log_i_sd: Some(false), log_r_sd: None }
            }
            Family::GammaRatio { .. } => {
                ExpectedClassification { i_mid: Some(true), log_i_sd: Some(true), log_r_sd: None }
            }
            Family::ShiftedGammaRatio { .. } => ExpectedClassification { i_mid: Some(true), ..Default::default() },
            Family::RadialOu { alpha, mu } => {
                let (s1, s2) = Family::rou_special(alpha, mu);
                ExpectedClassification {
                    i_mid: Some(true),
                    log_i_sd: Some(true),
                    log_r_sd: if s1 || s2 { Some(true) } else { None },
                }
            }
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

/// A catalog entry: Bernstein function plus its closed-form companions.
#[derive(Clone)]
pub struct CatalogEntry {
    family: Family,
    function: BernsteinFunction,
    kappa: Option<KappaMeasure>,
    closed_r: Option<RealFn>,
    closed_i: Option<RealFn>,
    law_i: Option<KnownLaw>,
    law_r: Option<KnownLaw>,
    potential: Option<PotentialDensity>,
}

impl fmt::Debug for CatalogEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CatalogEntry")
            .field("id", &self.family.id())
            .field("closed_r", &self.closed_r.is_some())
            .field("closed_i", &self.closed_i.is_some())
            .field("law_i", &self.law_i)
            .field("law_r", &self.law_r)
            .finish()
    }
}

fn rf(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> RealFn {
    Arc::new(f)
}

/// Γ(r)/x, with x the R-transform, as an I-transform.
fn i_from_r(r_fn: RealFn) -> RealFn {
    rf(move |r| gamma_pos(r) / r_fn(r))
}

fn r_from_i(i_fn: RealFn) -> RealFn {
    rf(move |r| gamma_pos(r) / i_fn(r))
}

/// log ∏_{j ≥ 0} (1 − z q^j), stopping once the factors are within 1e−17
/// of one.
fn ln_q_pochhammer(z: f64, q: f64) -> f64 {
    let mut acc = 0.0;
    let mut term = z;
    while term.abs() > 1e-17 {
        acc += (-term).ln_1p();
        term *= q;
    }
    acc
}

impl CatalogEntry {
    pub fn parse(id: &str) -> Result<CatalogEntry> {
        CatalogEntry::from_family(Family::parse(id)?)
    }

    pub fn from_family(family: Family) -> Result<CatalogEntry> {
        family.validate()?;
        let name = family.id();
        let entry = match family {
            Family::Trivial => CatalogEntry {
                family,
                function: BernsteinFunction::new(name, rf(|s| s))
                    .with_derivative(rf(|_| 1.0))
                    .with_levy(LevyTriple::drift_only(1.0)?)
                    .with_flags(Flag::True, Flag::False),
                kappa: Some(KappaMeasure::new(Some(rf(|_| 1.0)), AtomSet::Empty)),
                closed_r: Some(rf(gamma_pos)),
                closed_i: Some(rf(|_| 1.0)),
                law_i: Some(KnownLaw::Constant { value: 1.0 }),
                law_r: Some(KnownLaw::Exponential),
                potential: Some(PotentialDensity::new(0.0, rf(|_| 1.0))?),
            },
            Family::Stable { alpha } => {
                let g1a = gamma_pos(1.0 - alpha);
                let ga = gamma_pos(alpha);
                let levy = LevyTriple::new(
                    0.0,
                    Some(rf(move |x| alpha / g1a * x.powf(-1.0 - alpha))),
                    AtomSet::Empty,
                )?
                .with_tail(rf(move |x| x.powf(-alpha) / g1a));
                CatalogEntry {
                    family,
                    function: BernsteinFunction::new(name, rf(move |s| s.powf(alpha)))
                        .with_derivative(rf(move |s| alpha * s.powf(alpha - 1.0)))
                        .with_levy(levy)
                        .with_flags(Flag::True, Flag::True),
                    kappa: Some(KappaMeasure::new(Some(rf(move |_| alpha)), AtomSet::Empty)),
                    closed_r: Some(rf(move |r| (alpha * ln_gamma_pos(r)).exp())),
                    closed_i: Some(rf(move |r| ((1.0 - alpha) * ln_gamma_pos(r)).exp())),
                    law_i: None,
                    law_r: None,
                    potential: Some(PotentialDensity::new(0.0, rf(move |x| x.powf(alpha - 1.0) / ga))?),
                }
            }
            Family::ExpCompoundPoisson { c } => {
                let levy = LevyTriple::new(0.0, Some(rf(move |x| c * (-c * x).exp())), AtomSet::Empty)?
                    .with_tail(rf(move |x| (-c * x).exp()));
                let lg_c1 = ln_gamma_pos(c + 1.0);
                CatalogEntry {
                    family,
                    function: BernsteinFunction::new(name, rf(move |s| s / (s + c)))
                        .with_derivative(rf(move |s| c / ((s + c) * (s + c))))
                        .with_levy(levy)
                        .with_flags(Flag::True, Flag::False),
                    kappa: Some(KappaMeasure::new(Some(rf(move |x| -(-c * x).exp_m1())), AtomSet::Empty)),
                    closed_r: Some(rf(move |r| (lg_c1 + ln_gamma_pos(r) - ln_gamma_pos(c + r)).exp())),
                    closed_i: Some(rf(move |r| (ln_gamma_pos(c + r) - lg_c1).exp())),
                    law_i: Some(KnownLaw::Gamma { shape: c + 1.0 }),
                    law_r: Some(KnownLaw::Beta { a: 1.0, b: c }),
                    potential: Some(PotentialDensity::new(1.0, rf(move |_| c))?),
                }
            }
            Family::GeomCompoundPoisson { c, q } => {
                let p = c / q;
                let step = -q.ln();
                let levy = LevyTriple::new(
                    0.0,
                    None,
                    AtomSet::Lattice {
                        step,
                        mass: Arc::new(move |n| p.powi(n as i32 - 1) * (1.0 - p)),
                    },
                )?;
                let kappa_atoms = AtomSet::Lattice { step, mass: Arc::new(move |n| step * (1.0 - p.powi(n as i32))) };
                let phi = rf(move |s| {
                    let qs = q.powf(s);
                    -(s * q.ln()).exp_m1() / (1.0 - p * qs)
                });
                let phi_prime = rf(move |s| {
                    let qs = q.powf(s);
                    let d = 1.0 - p * qs;
                    step * qs * (1.0 - p) / (d * d)
                });
                // R(r) = (q;q)(p q^r;q) / ((pq;q)(q^r;q))
                let const_part = ln_q_pochhammer(q, q) - ln_q_pochhammer(p * q, q);
                let closed_r = rf(move |r| {
                    let qr = q.powf(r);
                    (const_part + ln_q_pochhammer(p * qr, q) - ln_q_pochhammer(qr, q)).exp()
                });
                CatalogEntry {
                    family,
                    function: BernsteinFunction::new(name, phi)
                        .with_derivative(phi_prime)
                        .with_levy(levy)
                        .with_flags(Flag::False, Flag::False),
                    kappa: Some(KappaMeasure::new(None, kappa_atoms)),
                    closed_i: Some(i_from_r(Arc::clone(&closed_r))),
                    closed_r: Some(closed_r),
                    law_i: None,
                    law_r: None,
                    potential: None,
                }
            }
            Family::GammaProcess => {
                let levy = LevyTriple::new(0.0, Some(rf(|x| (-x).exp() / x)), AtomSet::Empty)?;
                CatalogEntry {
                    family,
                    function: BernsteinFunction::new(name, rf(|s| s.ln_1p()))
                        .with_derivative(rf(|s| 1.0 / (1.0 + s)))
                        .with_levy(levy)
                        .with_flags(Flag::True, Flag::False),
                    kappa: Some(
                        KappaMeasure::new(Some(rf(gamma_process_kappa_density)), AtomSet::Empty)
                            .with_complement(rf(gamma_process_kappa_complement)),
                    ),
                    closed_r: None,
                    closed_i: None,
                    law_i: None,
                    law_r: None,
                    potential: None,
                }
            }
            Family::GammaRatio { alpha, c } => {
                let ga = gamma_pos(alpha);
                let tail = move |x: f64| {
                    (-(c - 1.0) * x).exp() / (ga * (-(-x / alpha).exp_m1()).powf(1.0 - alpha))
                };
                let density = move |x: f64| {
                    let e = (-x / alpha).exp();
                    let one_minus = -(-x / alpha).exp_m1();
                    tail(x) * ((c - 1.0) + (1.0 - alpha) / alpha * e / one_minus)
                };
                let levy = LevyTriple::new(0.0, Some(rf(density)), AtomSet::Empty)?.with_tail(rf(tail));
                let phi = rf(move |s| alpha * s * (-ln_gamma_ratio(alpha * (s - 1.0 + c), alpha)).exp());
                let d0 = alpha * (-ln_gamma_ratio(alpha * (c - 1.0), alpha)).exp();
                let phi_c = Arc::clone(&phi);
                let phi_prime = rf(move |s| {
                    if s == 0.0 {
                        return d0;
                    }
                    phi_c(s)
                        * (1.0 / s + alpha * digamma_pos(alpha * (s - 1.0 + c)) - alpha * digamma_pos(alpha * (s + c)))
                });
                let kappa = rf(move |x| 1.0 - (-(c - 1.0) * x).exp() * (-x).exp_m1() / (-x / alpha).exp_m1());
                let lg_ac = ln_gamma_pos(alpha * c);
                let closed_i =
                    rf(move |r| ((1.0 - r) * alpha.ln() + ln_gamma_pos(alpha * (r - 1.0 + c)) - lg_ac).exp());
                CatalogEntry {
                    family,
                    function: BernsteinFunction::new(name, phi)
                        .with_derivative(phi_prime)
                        .with_levy(levy)
                        .with_flags(Flag::True, Flag::False),
                    kappa: Some(KappaMeasure::new(Some(kappa), AtomSet::Empty)),
                    closed_r: Some(r_from_i(Arc::clone(&closed_i))),
                    closed_i: Some(closed_i),
                    law_i: Some(KnownLaw::ScaledGammaPower { scale: 1.0 / alpha, shape: alpha * c, power: alpha }),
                    law_r: None,
                    potential: None,
                }
            }
            Family::ShiftedGammaRatio { alpha, b, c } => {
                let phi = rf(move |s| s / (b + s - 1.0) * ln_gamma_ratio(alpha * (s - 1.0 + c), alpha).exp());
                let d0 = ln_gamma_ratio(alpha * (c - 1.0), alpha).exp() / (b - 1.0);
                let phi_c = Arc::clone(&phi);
                let phi_prime = rf(move |s| {
                    if s == 0.0 {
                        return d0;
                    }
                    phi_c(s)
                        * (1.0 / s - 1.0 / (b + s - 1.0) + alpha * digamma_pos(alpha * (s + c))
                            - alpha * digamma_pos(alpha * (s - 1.0 + c)))
                });
                let kappa = rf(move |x| {
                    1.0 - (-(b - 1.0) * x).exp() + (-(c - 1.0) * x).exp() * (-x).exp_m1() / (-x / alpha).exp_m1()
                });
                let lg_ac = ln_gamma_pos(alpha * c);
                let lg_b = ln_gamma_pos(b);
                let closed_i = rf(move |r| {
                    (lg_ac + ln_gamma_pos(r - 1.0 + b) - lg_b - ln_gamma_pos(alpha * (r - 1.0 + c))).exp()
                });
                CatalogEntry {
                    family,
                    function: BernsteinFunction::new(name, phi)
                        .with_derivative(phi_prime)
                        .with_flags(Flag::True, Flag::False),
                    kappa: Some(KappaMeasure::new(Some(kappa), AtomSet::Empty)),
                    closed_r: Some(r_from_i(Arc::clone(&closed_i))),
                    closed_i: Some(closed_i),
                    law_i: None,
                    law_r: Some(KnownLaw::Product {
                        left: Box::new(KnownLaw::Beta { a: 1.0, b: b - 1.0 }),
                        right: Box::new(KnownLaw::ScaledGammaPower { scale: 1.0, shape: alpha * c, power: alpha }),
                    }),
                    potential: None,
                }
            }
            Family::RadialOu { alpha, mu } => {
                let two_mu = 2.0 * mu;
                let g1a = gamma_pos(1.0 - alpha);
                let ga = gamma_pos(alpha);
                let tail = move |x: f64| 1.0 / (g1a * (two_mu * x).exp_m1().powf(alpha));
                let density = move |x: f64| {
                    two_mu * alpha / g1a * (-two_mu * alpha * x).exp() / (-(-two_mu * x).exp_m1()).powf(1.0 + alpha)
                };
                let levy = LevyTriple::new(0.0, Some(rf(density)), AtomSet::Empty)?.with_tail(rf(tail));
                let phi = rf(move |s| ln_gamma_ratio(s / two_mu, alpha).exp());
                let phi_c = Arc::clone(&phi);
                let phi_prime = rf(move |s| {
                    if s == 0.0 {
                        return ga / two_mu;
                    }
                    let x = s / two_mu;
                    phi_c(s) * (digamma_pos(x + alpha) - digamma_pos(x)) / two_mu
                });
                let kappa = rf(move |x| (-two_mu * alpha * x).exp_m1() / (-two_mu * x).exp_m1());
                let potential = PotentialDensity::new(
                    0.0,
                    rf(move |x| two_mu / ga * (-(-two_mu * x).exp_m1()).powf(alpha - 1.0)),
                )?;
                let (s1, s2) = Family::rou_special(alpha, mu);
                let (mut closed_r, mut closed_i, mut law_r, mut law_i) = (None, None, None, None);
                if s2 {
                    let a = 1.0 - alpha;
                    let ci = rf(move |r| ((1.0 - r) * a.ln() + ln_gamma_pos(a * (r - 1.0) + 1.0)).exp());
                    closed_r = Some(r_from_i(Arc::clone(&ci)));
                    closed_i = Some(ci);
                    law_i = Some(KnownLaw::ScaledGammaPower { scale: 1.0 / a, shape: 1.0, power: a });
                    law_r = Some(KnownLaw::ScaledStablePower { scale: a, alpha: a, power: -a });
                }
                if s1 {
                    let lg_a = ln_gamma_pos(alpha);
                    let cr = rf(move |r| (ln_gamma_pos(alpha * r) - lg_a).exp());
                    closed_i = Some(i_from_r(Arc::clone(&cr)));
                    closed_r = Some(cr);
                    law_r = Some(KnownLaw::ScaledGammaPower { scale: 1.0, shape: alpha, power: alpha });
                }
                CatalogEntry {
                    family,
                    function: BernsteinFunction::new(name, phi)
                        .with_derivative(phi_prime)
                        .with_levy(levy)
                        .with_flags(Flag::True, Flag::False),
                    kappa: Some(KappaMeasure::new(Some(kappa), AtomSet::Empty)),
                    closed_r,
                    closed_i,
                    law_i,
                    law_r,
                    potential: Some(potential),
                }
            }
        };
        Ok(entry)
    }

    pub fn id(&self) -> String {
        self.family.id()
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn function(&self) -> &BernsteinFunction {
        &self.function
    }

    /// κ in closed form, unvalidated. See [`crate::kappa::kappa_for`].
    pub fn kappa_closed_form(&self) -> Option<&KappaMeasure> {
        self.kappa.as_ref()
    }

    /// Closed-form E[R^{r−1}].
    pub fn closed_r(&self, r: f64) -> Option<f64> {
        self.closed_r.as_ref().map(|f| f(r))
    }

    /// Closed-form E[I^{r−1}].
    pub fn closed_i(&self, r: f64) -> Option<f64> {
        self.closed_i.as_ref().map(|f| f(r))
    }

    pub fn law_i(&self) -> Option<&KnownLaw> {
        self.law_i.as_ref()
    }

    pub fn law_r(&self) -> Option<&KnownLaw> {
        self.law_r.as_ref()
    }

    pub fn potential(&self) -> Option<&PotentialDensity> {
        self.potential.as_ref()
    }

    pub fn expected(&self) -> ExpectedClassification {
        self.family.expected()
    }
}

/// Default parameterisations shipped with the crate.
pub fn default_families() -> Vec<Family> {
    vec![
        Family::Trivial,
        Family::Stable { alpha: 0.3 },
        Family::Stable { alpha: 0.5 },
        Family::Stable { alpha: 0.7 },
        Family::ExpCompoundPoisson { c: 1.0 },
        Family::ExpCompoundPoisson { c: 2.0 },
        Family::GeomCompoundPoisson { c: 0.0, q: 0.5 },
        Family::GeomCompoundPoisson { c: 0.1, q: 0.5 },
        Family::GammaProcess,
        Family::GammaRatio { alpha: 0.5, c: 2.0 },
        Family::ShiftedGammaRatio { alpha: 0.5, b: 1.5, c: 2.0 },
        Family::RadialOu { alpha: 0.5, mu: 1.0 },
        Family::RadialOu { alpha: 0.25, mu: 2.0 },
        Family::RadialOu { alpha: 0.75, mu: 2.0 },
        Family::RadialOu { alpha: 0.3, mu: 1.0 },
    ]
}

/// All default entries.
pub fn catalog() -> Vec<CatalogEntry> {
    default_families()
        .into_iter()
        .map(|f| CatalogEntry::from_family(f).expect("default parameters are valid"))
        .collect()
}
