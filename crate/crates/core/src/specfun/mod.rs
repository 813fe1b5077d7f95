//! Special functions used by the spectral-function formula: the gamma
//! function, the Gauss hypergeometric ₂F₁, and the two-variable Appell F₁
//! with an explicit +iε branch-cut prescription, all backed by tanh-sinh
//! (double-exponential) quadrature for the Euler integral representations.

mod appell;
mod gamma;
mod hyp2f1;
mod tanhsinh;

pub use appell::{
    appell_f1, appell_f1_eval, appell_f1_integral, appell_f1_series, AppellEval,
    AppellF1Evaluator, F1Path,
};
pub use gamma::{gamma_fn, ln_gamma};
pub use hyp2f1::hyp2f1;
pub use tanhsinh::integrate_01;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors from the special-function layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecFunError {
    /// Gamma function evaluated at a non-positive integer.
    #[error("gamma function pole at x = {0}")]
    GammaPole(f64),
    /// A lower parameter hit a pole (e.g. c a non-positive integer).
    #[error("parameter pole: {0}")]
    ParameterPole(String),
    /// Parameters outside the validity domain of the chosen representation.
    #[error("invalid parameters: {0}")]
    InvalidParameter(String),
    /// Real argument on the branch cut [1, ∞) where a side must be chosen
    /// explicitly by the caller (the Appell path does this via `epsilon_branch`).
    #[error("argument {0} lies on the branch cut [1, inf); no side prescribed")]
    OnCut(f64),
    /// Power series failed to reach the requested tolerance.
    #[error("series did not converge after {terms} terms (last relative term {last:.3e})")]
    SeriesDiverged { terms: usize, last: f64 },
    /// Quadrature failed to reach the requested tolerance.
    #[error("quadrature did not converge: achieved {achieved:.3e}, required {required:.3e}")]
    QuadDiverged { achieved: f64, required: f64 },
}

/// Tolerances and branch prescription for quadrature-backed evaluations.
///
/// `epsilon_branch` is the +iε offset applied to real arguments that fall on
/// the cut [1, ∞) of the Euler-integral integrand (retarded prescription).
///
/// Accuracy limit: the double-exponential node ladder is truncated by f64
/// underflow at distance ~1e-16 from the endpoints, which resolves endpoint
/// exponents down to roughly 0.03; all exponents reachable from valid
/// Luttinger parameters are far inside that.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    /// Absolute tolerance on the integral value (≥ 1e-14).
    pub abs_tol: f64,
    /// Relative tolerance on the integral value (≥ 1e-14).
    pub rel_tol: f64,
    /// Maximum tanh-sinh refinement levels (node spacing halves per level).
    pub max_levels: u32,
    /// +iε offset for on-cut arguments, in [1e-12, 1e-3].
    pub epsilon_branch: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            rel_tol: 1e-9,
            max_levels: 12,
            epsilon_branch: 1e-8,
        }
    }
}

impl QuadratureSpec {
    /// Checks the field ranges; returns a diagnostic naming the bad field.
    pub fn validate(&self) -> Result<(), SpecFunError> {
        if !(self.abs_tol >= 1e-14) {
            return Err(SpecFunError::InvalidParameter(format!(
                "abs_tol must be >= 1e-14, got {}",
                self.abs_tol
            )));
        }
        if !(self.rel_tol >= 1e-14) {
            return Err(SpecFunError::InvalidParameter(format!(
                "rel_tol must be >= 1e-14, got {}",
                self.rel_tol
            )));
        }
        if self.max_levels == 0 {
            return Err(SpecFunError::InvalidParameter(
                "max_levels must be positive".into(),
            ));
        }
        if !(self.epsilon_branch >= 1e-12 && self.epsilon_branch <= 1e-3) {
            return Err(SpecFunError::InvalidParameter(format!(
                "epsilon_branch must lie in [1e-12, 1e-3], got {}",
                self.epsilon_branch
            )));
        }
        Ok(())
    }
}

/// Heaviside step with the symmetric convention Θ(0) = 1/2.
///
/// The spectral grids are built to avoid exact singular lines, so the
/// midpoint value never dominates a result; it is fixed here so that the
/// phase factor exp[−iπ(s−1)Θ(d)] is well defined everywhere.
pub fn step_theta(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        0.0
    } else {
        0.5
    }
}
