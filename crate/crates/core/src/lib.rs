//! Exponential functionals of subordinators.
//!
//! For a subordinator ξ with Laplace exponent Φ, the crate studies the
//! perpetuity I = ∫_0^∞ e^{−ξ_t} dt and its multiplicative complement R,
//! characterised by E[(IR)^s] = Γ(s+1) with I and R independent.
//!
//! * [`bernstein`]: Bernstein functions, Lévy data, conjugates.
//! * [`catalog`]: the built-in families with closed forms and known laws.
//! * [`mellin`]: Mellin transforms of I and R via limit products.
//! * [`kappa`]: the measure κ, integral representations, classification.
//! * [`conjugacy`]: potential densities and the swap I ↔ R.
//! * [`montecarlo`]: simulation of I with explicit bias bounds.
//! * [`verify`]: the invariant suite run by `perpetua verify`.

pub mod bernstein;
pub mod catalog;
pub mod conjugacy;
pub mod error;
pub mod kappa;
pub mod laws;
pub mod mellin;
pub mod montecarlo;
pub mod quadrature;
pub mod special;
pub mod verify;

pub use bernstein::{
    conjugate, eval_phi, eval_phi_from_levy, power_subordinate, AtomSet, BernsteinFunction, Flag, LevyTriple,
    RealFn,
};
pub use catalog::{catalog, CatalogEntry, ExpectedClassification, Family};
pub use error::{Error, Result};
pub use kappa::{kappa_for, KappaMeasure};
pub use laws::KnownLaw;
pub use mellin::{i_product, moments_i, moments_r, r_product, MellinResult, Method};
