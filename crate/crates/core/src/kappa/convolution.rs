//! Multiplicative convolution equations for the laws of I and R, for a
//! subordinator without drift:
//!
//! ```text
//! θ(v)        = ∫_v^∞ θ(y) λ̄(log(y/v)) dy          (density of I)
//! P(R > v)    = ∫_v^∞ y^{−1} λ̄(log(y/v)) ζ(y) dy    (ζ the density of R)
//! ζ(v)        = ∫_v^∞ ζ(y) ρ(log(y/v)) dy           (ρ the potential density)
//! ```
//!
//! The right sides are integrated after the substitution y = v e^x.

use serde::Serialize;

use crate::bernstein::LevyTriple;
use crate::catalog::CatalogEntry;
use crate::error::{Error, Result};
use crate::laws::KnownLaw;
use crate::quadrature::{self, Tolerance};

/// Which of the three equations to test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConvolutionEq {
    Theta,
    Eta,
    Zeta,
}

impl ConvolutionEq {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "theta" => Ok(ConvolutionEq::Theta),
            "eta" => Ok(ConvolutionEq::Eta),
            "zeta" => Ok(ConvolutionEq::Zeta),
            other => Err(Error::Parse(format!("unknown convolution equation `{other}`"))),
        }
    }
}

/// Both sides of an equation at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvolutionResidual {
    pub v: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
}

fn driftless_levy(entry: &CatalogEntry) -> Result<&LevyTriple> {
    let levy = entry
        .function()
        .levy()
        .ok_or_else(|| Error::Unsupported(format!("{} has no Lévy triple", entry.id())))?;
    if levy.drift() != 0.0 {
        return Err(Error::Unsupported(format!("{} has drift {}; the equations need a = 0", entry.id(), levy.drift())));
    }
    Ok(levy)
}

fn law_with_density<'a>(law: Option<&'a KnownLaw>, what: &str, id: &str) -> Result<&'a KnownLaw> {
    let law = law.ok_or_else(|| Error::Unsupported(format!("no known law of {what} for {id}")))?;
    if law.density(1.0).is_none() {
        return Err(Error::Unsupported(format!("the law {} of {what} has no closed density", law.label())));
    }
    Ok(law)
}

/// ∫_0^X kernel(x) · dens(v e^x) · weight(x) dx with X = log(upper/v) when the
/// law has bounded support, else X = ∞.
fn transformed_integral<K, D>(v: f64, upper: Option<f64>, kernel: K, dens: D) -> Result<f64>
where
    K: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let tol = Tolerance::new(1e-12, 1e-10);
    let x_max = f64::MAX.ln() - v.ln() - 1.0;
    let g = |x: f64| {
        if x > x_max {
            return 0.0;
        }
        let k = kernel(x);
        if k == 0.0 {
            return 0.0;
        }
        k * dens(x)
    };
    match upper {
        Some(u) if v >= u => Ok(0.0),
        Some(u) => Ok(quadrature::tanh_sinh(g, 0.0, (u / v).ln(), tol)?.value),
        None => Ok(quadrature::zero_to_infinity(g, tol)?.value),
    }
}

fn tail_fn(levy: &LevyTriple) -> impl Fn(f64) -> f64 + '_ {
    move |x: f64| levy.tail_at(x).unwrap_or(f64::NAN)
}

/// Gap between the two sides of `which` at each grid point.
pub fn convolution_residual(entry: &CatalogEntry, which: ConvolutionEq, grid: &[f64]) -> Result<Vec<ConvolutionResidual>> {
    if let Some(&v) = grid.iter().find(|&&v| !(v > 0.0)) {
        return Err(Error::Domain(format!("convolution equations live on v > 0, got {v}")));
    }
    let id = entry.id();
    let out = match which {
        ConvolutionEq::Theta => {
            let levy = driftless_levy(entry)?;
            let law = law_with_density(entry.law_i(), "I", &id)?;
            let tail = tail_fn(levy);
            grid.iter()
                .map(|&v| {
                    let lhs = law.density(v).unwrap_or(f64::NAN);
                    // dy = v e^x dx
                    let rhs = transformed_integral(v, law.support_upper(), &tail, |x| {
                        let y = v * x.exp();
                        law.density(y).unwrap_or(f64::NAN) * y
                    })?;
                    Ok((v, lhs, rhs))
                })
                .collect::<Result<Vec<_>>>()?
        }
        ConvolutionEq::Eta => {
            let levy = driftless_levy(entry)?;
            let law = law_with_density(entry.law_r(), "R", &id)?;
            let tail = tail_fn(levy);
            let upper = law.support_upper();
            grid.iter()
                .map(|&v| {
                    let lhs = match law.survival(v) {
                        Some(s) => s,
                        None => transformed_integral(v, upper, |_| 1.0, |x| {
                            let y = v * x.exp();
                            law.density(y).unwrap_or(f64::NAN) * y
                        })?,
                    };
                    // dy / y = dx
                    let rhs = transformed_integral(v, upper, &tail, |x| law.density(v * x.exp()).unwrap_or(f64::NAN))?;
                    Ok((v, lhs, rhs))
                })
                .collect::<Result<Vec<_>>>()?
        }
        ConvolutionEq::Zeta => {
            let law = law_with_density(entry.law_r(), "R", &id)?;
            let pot = entry
                .potential()
                .ok_or_else(|| Error::Unsupported(format!("no potential density for {id}")))?;
            if pot.point_mass() != 0.0 {
                return Err(Error::Unsupported(format!("the potential measure of {id} has an atom at 0")));
            }
            grid.iter()
                .map(|&v| {
                    let lhs = law.density(v).unwrap_or(f64::NAN);
                    let rhs = transformed_integral(v, law.support_upper(), |x| pot.h(x), |x| {
                        let y = v * x.exp();
                        law.density(y).unwrap_or(f64::NAN) * y
                    })?;
                    Ok((v, lhs, rhs))
                })
                .collect::<Result<Vec<_>>>()?
        }
    };
    Ok(out
        .into_iter()
        .map(|(v, lhs, rhs)| ConvolutionResidual { v, lhs, rhs, residual: (lhs - rhs).abs() })
        .collect())
}
