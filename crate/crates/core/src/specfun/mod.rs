//! Special functions: exact Bernoulli arithmetic, Hurwitz zeta, Gamma and theta series.

mod bernoulli;
mod gamma;
mod hurwitz;
mod theta;

pub use bernoulli::{bernoulli_number, bernoulli_polynomial, BERNOULLI_CAP};
pub use gamma::gamma_fn;
pub use hurwitz::{
    hurwitz_zeta, hurwitz_zeta_adaptive, hurwitz_zeta_em, hurwitz_zeta_finite_part, riemann_zeta,
    HurwitzEval,
};
pub use theta::{theta3, theta3_t, theta_residue, theta_residue_t};

/// Euler's constant γ.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// First Stieltjes constant, in the convention ζ(1+ε) = 1/ε + γ − γ₁ε + O(ε²).
pub const STIELTJES_GAMMA1: f64 = -0.072_815_845_483_676_72;

pub fn stieltjes_gamma1() -> f64 {
    STIELTJES_GAMMA1
}
