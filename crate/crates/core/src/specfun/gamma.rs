//! Gamma function via a Lanczos approximation with reflection for x < 1/2.

use super::SpecFunError;

/// Lanczos coefficients for g = 7, n = 9 (Godfrey's set); relative error
/// below 1e-13 for positive arguments once combined with the reflection
/// formula. The series is evaluated in fixed order for determinism.
const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

const LN_SQRT_TWO_PI: f64 = 0.918_938_533_204_672_8;

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

/// sin(πx) with argument reduction so accuracy survives large |x|.
fn sin_pi(x: f64) -> f64 {
    // Reduce to y ∈ [0, 2), then fold into an argument in [−1/2, 1/2]
    // where sin(π·) is evaluated directly.
    let y = x.rem_euclid(2.0);
    let m = if y < 0.5 {
        y
    } else if y < 1.5 {
        1.0 - y
    } else {
        y - 2.0
    };
    (std::f64::consts::PI * m).sin()
}

/// ln Γ(x) for x > 0.
///
/// Uses the Lanczos sum directly; callers needing x < 0 go through
/// [`gamma_fn`], which applies the reflection formula.
pub fn ln_gamma(x: f64) -> Result<f64, SpecFunError> {
    if !(x > 0.0) {
        return Err(SpecFunError::InvalidParameter(format!(
            "ln_gamma requires x > 0, got {x}"
        )));
    }
    // Lanczos for Γ(x) = √(2π) (x+g−1/2)^{x−1/2} e^{−(x+g−1/2)} A_g(x).
    let mut ser = LANCZOS_COEF[0];
    for (i, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        ser += c / (x - 1.0 + i as f64);
    }
    let tmp = x + LANCZOS_G - 0.5;
    Ok(LN_SQRT_TWO_PI + (x - 0.5) * tmp.ln() - tmp + ser.ln())
}

/// Euler gamma function for real argument, poles excluded.
///
/// Relative error stays below 1e-12 on [−20, 50] away from the poles at
/// non-positive integers (reflection formula for x < 1/2).
pub fn gamma_fn(x: f64) -> Result<f64, SpecFunError> {
    if !x.is_finite() {
        return Err(SpecFunError::InvalidParameter(format!(
            "gamma of non-finite argument {x}"
        )));
    }
    if is_nonpositive_integer(x) {
        return Err(SpecFunError::GammaPole(x));
    }
    if x >= 0.5 {
        Ok(ln_gamma(x)?.exp())
    } else {
        // Γ(x) Γ(1−x) = π / sin(πx); 1−x > 1/2 here.
        let s = sin_pi(x);
        Ok(std::f64::consts::PI / (s * ln_gamma(1.0 - x)?.exp()))
    }
}
