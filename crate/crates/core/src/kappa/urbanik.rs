use std::fmt;
use std::sync::Arc;

use crate::bernstein::RealFn;

use super::classify::CheckOutcome;
use super::KappaMeasure;

/// A measure on (0, ∞) given as density plus finitely many atoms.
#[derive(Clone)]
pub struct UrbanikMeasure {
    density: RealFn,
    pub atoms: Vec<(f64, f64)>,
}

impl fmt::Debug for UrbanikMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("UrbanikMeasure").field("atoms", &self.atoms).finish_non_exhaustive()
    }
}

impl UrbanikMeasure {
    pub fn density_at(&self, x: f64) -> f64 {
        (self.density)(x)
    }
}

fn weight(x: f64) -> f64 {
    -(-x).exp_m1() * (-x).exp() / x
}

/// Density of Π(dx) = e^{−x}(1 − e^{−x})/x dx, the representing measure of
/// the standard gamma law.
pub fn pi_density(x: f64) -> f64 {
    if x > 0.0 {
        weight(x)
    } else {
        0.0
    }
}

/// SM(dx) = (1 − e^{−x}) x^{−1} e^{−x} κ(dx). Atoms beyond x = 50 are
/// dropped.
pub fn urbanik_s(kappa: &KappaMeasure) -> UrbanikMeasure {
    let k = kappa.clone();
    let density: RealFn = Arc::new(move |x: f64| if x > 0.0 { weight(x) * k.density_at(x) } else { 0.0 });
    let atoms = kappa.atoms().upto(50.0).into_iter().map(|(x, m)| (x, weight(x) * m)).collect();
    UrbanikMeasure { density, atoms }
}

/// Whether SM ≤ Π on the grid: no atoms and the SM density below the Π
/// density up to the grid tolerance. Equivalent to
/// [`super::mid_check_i`].
pub fn sm_le_pi(kappa: &KappaMeasure, grid: &[f64]) -> CheckOutcome {
    let sm = urbanik_s(kappa);
    let mut witnesses: Vec<f64> = sm.atoms.iter().map(|&(x, _)| x).collect();
    if witnesses.is_empty() && kappa.has_atoms() {
        witnesses.push(f64::INFINITY);
    }
    witnesses.extend(
        grid.iter()
            .copied()
            .filter(|&x| sm.density_at(x) > pi_density(x) * (1.0 + super::GRID_TOL)),
    );
    CheckOutcome { holds: witnesses.is_empty(), witnesses, method: "numeric-grid" }
}
