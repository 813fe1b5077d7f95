//! Gauss hypergeometric ₂F₁ with real parameters and complex argument.

use super::gamma::gamma_fn;
use super::tanhsinh::integrate_01;
use super::{QuadratureSpec, SpecFunError};
use num_complex::Complex64;

const SERIES_RADIUS: f64 = 0.9;
const SERIES_MAX_TERMS: usize = 20_000;

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

/// Gauss series Σ (a)_n (b)_n / ((c)_n n!) xⁿ, valid for |x| < 1.
fn gauss_series(a: f64, b: f64, c: f64, x: Complex64) -> Result<Complex64, SpecFunError> {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut small_streak = 0;
    for n in 0..SERIES_MAX_TERMS {
        let nf = n as f64;
        term *= x * ((a + nf) * (b + nf) / ((c + nf) * (1.0 + nf)));
        sum += term;
        if term.norm() <= f64::EPSILON * sum.norm() {
            small_streak += 1;
            if small_streak >= 2 {
                return Ok(sum);
            }
        } else {
            small_streak = 0;
        }
    }
    Err(SpecFunError::SeriesDiverged {
        terms: SERIES_MAX_TERMS,
        last: term.norm() / sum.norm().max(f64::MIN_POSITIVE),
    })
}

/// Euler-integral evaluation; requires c > b > 0 so the integrand
/// t^{b−1}(1−t)^{c−b−1}(1−xt)^{−a} has integrable endpoint behavior.
fn euler_integral(
    a: f64,
    b: f64,
    c: f64,
    x: Complex64,
    spec: &QuadratureSpec,
) -> Result<Complex64, SpecFunError> {
    let pref = gamma_fn(c)? / (gamma_fn(b)? * gamma_fn(c - b)?);
    // If Re(1/x) falls inside (0,1) the factor (1−xt)^{−a} has a near-zero
    // at an interior t; split there so the feature sits at panel endpoints
    // where the node distribution clusters.
    let t0 = if x.norm_sqr() > 0.0 {
        x.re / x.norm_sqr()
    } else {
        -1.0
    };
    let mut cuts = vec![0.0, 1.0];
    if t0 > 0.0 && t0 < 1.0 {
        cuts.insert(1, t0);
    }
    let mut total = Complex64::new(0.0, 0.0);
    for pair in cuts.windows(2) {
        let (lo, hi) = (pair[0], pair[1]);
        let delta = hi - lo;
        let one_minus_hi = 1.0 - hi;
        let xi_lo = Complex64::new(1.0, 0.0) - x * lo;
        let xi_hi = Complex64::new(1.0, 0.0) - x * hi;
        let (val, _err) = integrate_01(
            |tau, omt| {
                let t = lo + delta * tau;
                let one_minus_t = one_minus_hi + delta * omt;
                // ξ = 1 − x t as an affine blend of the endpoint values:
                // exact identity, stable where ξ → 0.
                let xi = omt * xi_lo + tau * xi_hi;
                let real_part = t.powf(b - 1.0) * one_minus_t.powf(c - b - 1.0);
                real_part * xi.powf(-a)
            },
            spec,
        )?;
        total += delta * val;
    }
    Ok(pref * total)
}

/// Gauss hypergeometric function ₂F₁(a, b; c; x) for real parameters.
///
/// Evaluation path: direct series for |x| < 0.9; the Pfaff transformation
/// (1−x)^{−a} ₂F₁(a, c−b; c; x/(x−1)) when that argument is small; otherwise
/// the Euler integral, which needs c > b > 0 in one of the two symmetric
/// parameter slots. Real x on the cut [1, ∞) is rejected — the caller must
/// choose a side explicitly. Relative error off the cut is ≤ 1e-9.
pub fn hyp2f1(a: f64, b: f64, c: f64, x: Complex64) -> Result<Complex64, SpecFunError> {
    if is_nonpositive_integer(c) {
        return Err(SpecFunError::ParameterPole(format!(
            "2F1 lower parameter c = {c} is a non-positive integer"
        )));
    }
    if !x.re.is_finite() || !x.im.is_finite() {
        return Err(SpecFunError::InvalidParameter(
            "2F1 argument must be finite".into(),
        ));
    }
    if x.im == 0.0 && x.re >= 1.0 {
        return Err(SpecFunError::OnCut(x.re));
    }
    if x.norm() == 0.0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    if x.norm() < SERIES_RADIUS {
        return gauss_series(a, b, c, x);
    }
    let w = x / (x - 1.0);
    if w.norm() < SERIES_RADIUS {
        let pfaff = (Complex64::new(1.0, 0.0) - x).powf(-a);
        return Ok(pfaff * gauss_series(a, c - b, c, w)?);
    }
    let spec = QuadratureSpec::default();
    if b > 0.0 && c > b {
        euler_integral(a, b, c, x, &spec)
    } else if a > 0.0 && c > a {
        // ₂F₁ is symmetric in (a, b); route the integrable slot into b.
        euler_integral(b, a, c, x, &spec)
    } else {
        Err(SpecFunError::InvalidParameter(format!(
            "2F1 Euler path needs c > b > 0 in some order; got a = {a}, b = {b}, c = {c}"
        )))
    }
}
