//! Gamma-family special functions on the positive half-line.
//!
//! `gamma` and `ln_gamma` use the Lanczos approximation (g = 7, nine
//! coefficients) below 10 and the Stirling series above. `ln_gamma_ratio`
//! evaluates ln Γ(x + a) − ln Γ(x) without forming either logarithm when x
//! is large, which keeps ratios such as Γ(s + α)/Γ(s) accurate for the long
//! limit products in [`crate::mellin`].

use std::f64::consts::PI;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Coefficients B_{2k} / (2k (2k − 1)) of the Stirling series.
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

const STIRLING_MIN: f64 = 10.0;
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

fn lanczos_sum(x: f64) -> f64 {
    // x is the shifted argument (original − 1)
    let mut a = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    a
}

fn stirling_tail(z: f64) -> f64 {
    let z2 = z * z;
    let mut zp = z;
    let mut sum = 0.0;
    for c in STIRLING {
        sum += c / zp;
        zp *= z2;
    }
    sum
}

/// Γ(x) for x > 0. Returns `+inf` past the overflow threshold (x ≳ 171.6).
pub fn gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("gamma requires x > 0, got {x}")));
    }
    Ok(gamma_pos(x))
}

pub(crate) fn gamma_pos(x: f64) -> f64 {
    if x < 0.5 {
        return gamma_pos(x + 1.0) / x;
    }
    if x > 171.7 {
        return f64::INFINITY;
    }
    let xm = x - 1.0;
    let t = xm + LANCZOS_G + 0.5;
    // split the power to avoid intermediate overflow near the top of the range
    let half = t.powf(0.5 * (xm + 0.5));
    (2.0 * PI).sqrt() * half * (half * (-t).exp()) * lanczos_sum(xm)
}

/// ln Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("ln_gamma requires x > 0, got {x}")));
    }
    Ok(ln_gamma_pos(x))
}

pub(crate) fn ln_gamma_pos(x: f64) -> f64 {
    if x >= STIRLING_MIN {
        return (x - 0.5) * x.ln() - x + LN_SQRT_2PI + stirling_tail(x);
    }
    if x < 0.5 {
        return ln_gamma_pos(x + 1.0) - x.ln();
    }
    let xm = x - 1.0;
    let t = xm + LANCZOS_G + 0.5;
    LN_SQRT_2PI + (xm + 0.5) * t.ln() - t + lanczos_sum(xm).ln()
}

/// ln Γ(x + a) − ln Γ(x), accurate for large x where the two logarithms
/// would cancel. Requires x > 0 and x + a > 0.
pub fn ln_gamma_ratio(x: f64, a: f64) -> f64 {
    debug_assert!(x > 0.0 && x + a > 0.0);
    if a == 0.0 {
        return 0.0;
    }
    let mut x = x;
    let mut shift = 0.0;
    // walk both arguments up past the Stirling threshold
    while x.min(x + a) < STIRLING_MIN {
        shift -= (a / x).ln_1p();
        x += 1.0;
    }
    let y = x + a;
    let main = (x - 0.5) * (a / x).ln_1p() + a * y.ln() - a;
    main + (stirling_tail(y) - stirling_tail(x)) + shift
}

/// Digamma ψ(x) = Γ′(x)/Γ(x) for x > 0.
pub fn digamma(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("digamma requires x > 0, got {x}")));
    }
    Ok(digamma_pos(x))
}

pub(crate) fn digamma_pos(x: f64) -> f64 {
    let mut x = x;
    let mut acc = 0.0;
    while x < STIRLING_MIN {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let inv2 = 1.0 / (x * x);
    // B_{2k} / (2k)
    let series = inv2
        * (1.0 / 12.0
            - inv2
                * (1.0 / 120.0
                    - inv2
                        * (1.0 / 252.0
                            - inv2
                                * (1.0 / 240.0
                                    - inv2 * (1.0 / 132.0 - inv2 * (691.0 / 32_760.0 - inv2 / 12.0))))));
    acc + x.ln() - 0.5 / x - series
}

/// ln n! for integer n.
pub fn ln_factorial(n: u64) -> f64 {
    if n < 2 {
        return 0.0;
    }
    if n <= 20 {
        return (2..=n).map(|k| k as f64).product::<f64>().ln();
    }
    ln_gamma_pos(n as f64 + 1.0)
}
