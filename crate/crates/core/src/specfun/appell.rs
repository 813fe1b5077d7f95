//! Appell hypergeometric function F₁(a; b₁, b₂; c; x, y) for real parameters
//! and complex arguments, with analytic continuation off the bi-disk via the
//! Euler integral and a +iε prescription on the real cut [1, ∞).

use super::gamma::gamma_fn;
use super::tanhsinh::{self, integrate_01};
use super::{QuadratureSpec, SpecFunError};
use num_complex::Complex64;

const SERIES_RADIUS: f64 = 0.9;
/// Hard cap on double-series terms. The nominal budget is 10⁴, but at the
/// 0.9 selection radius ~2·10⁴ terms are needed for full precision near the
/// corner, so the cap is a safety net an order of magnitude above that.
const SERIES_MAX_TERMS: usize = 100_000;
const SERIES_MAX_ROWS: usize = 5_000;

/// Result of an F₁ evaluation with its provenance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AppellEval {
    pub value: Complex64,
    /// +iε offset applied to x because it lay on the real cut [1, ∞).
    pub branch_offset_x: Option<f64>,
    /// +iε offset applied to y because it lay on the real cut [1, ∞).
    pub branch_offset_y: Option<f64>,
    pub path: F1Path,
}

/// Which representation produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum F1Path {
    Series,
    Integral,
}

fn on_cut(z: Complex64) -> bool {
    z.im == 0.0 && z.re >= 1.0
}

/// Double power series Σ (a)_{m+n}(b₁)_m(b₂)_n/((c)_{m+n} m! n!) xᵐ yⁿ,
/// convergent for |x| < 1, |y| < 1; used inside the 0.9 selection radius.
///
/// Exposed so the series and integral paths can be compared directly on
/// their overlap region.
pub fn appell_f1_series(
    a: f64,
    b1: f64,
    b2: f64,
    c: f64,
    x: Complex64,
    y: Complex64,
) -> Result<Complex64, SpecFunError> {
    validate_params(a, c)?;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut row_start = Complex64::new(1.0, 0.0); // T(m, 0)
    let mut terms_used = 0usize;
    let mut quiet_rows = 0u32;
    for m in 0..SERIES_MAX_ROWS {
        let mf = m as f64;
        if m > 0 {
            row_start *= x * ((a + mf - 1.0) * (b1 + mf - 1.0) / ((c + mf - 1.0) * mf));
        }
        let mut term = row_start;
        let mut row_sum = term;
        terms_used += 1;
        let mut quiet_terms = 0u32;
        for n in 1.. {
            let nf = n as f64;
            term *= y * ((a + mf + nf - 1.0) * (b2 + nf - 1.0) / ((c + mf + nf - 1.0) * nf));
            row_sum += term;
            terms_used += 1;
            if terms_used > SERIES_MAX_TERMS {
                return Err(SpecFunError::SeriesDiverged {
                    terms: terms_used,
                    last: term.norm() / sum.norm().max(f64::MIN_POSITIVE),
                });
            }
            if term.norm() <= (sum + row_sum).norm() * f64::EPSILON {
                quiet_terms += 1;
                if quiet_terms >= 2 {
                    break;
                }
            } else {
                quiet_terms = 0;
            }
        }
        sum += row_sum;
        if !sum.is_finite() {
            // Row overflow: |inf| <= inf·ε would satisfy the quiet checks.
            return Err(SpecFunError::SeriesDiverged {
                terms: terms_used,
                last: f64::INFINITY,
            });
        }
        if row_sum.norm() <= sum.norm() * f64::EPSILON {
            quiet_rows += 1;
            if quiet_rows >= 2 {
                return Ok(sum);
            }
        } else {
            quiet_rows = 0;
        }
    }
    Err(SpecFunError::SeriesDiverged {
        terms: terms_used,
        last: row_start.norm() / sum.norm().max(f64::MIN_POSITIVE),
    })
}

fn validate_params(a: f64, c: f64) -> Result<(), SpecFunError> {
    if !(c > a && a > 0.0) {
        return Err(SpecFunError::InvalidParameter(format!(
            "F1 requires c > a > 0 (Euler-integral validity); got a = {a}, c = {c}"
        )));
    }
    Ok(())
}

/// Interior point where Re(1 − z t) changes sign, if it falls inside (0, 1).
///
/// The factor (1 − z t)^{−b} is then nearly singular at that t (exactly
/// singular in the ε → 0 limit for on-cut z); integration panels are split
/// there so the feature sits at panel endpoints.
fn interior_break(z: Complex64) -> Option<f64> {
    let n = z.norm_sqr();
    if n == 0.0 {
        return None;
    }
    let t0 = z.re / n;
    (t0 > 0.0 && t0 < 1.0).then_some(t0)
}

/// Euler-integral evaluation of F₁ for c > a > 0:
/// F₁ = Γ(c)/(Γ(a)Γ(c−a)) ∫₀¹ t^{a−1}(1−t)^{c−a−1}(1−xt)^{−b₁}(1−yt)^{−b₂} dt.
///
/// Arguments on the real cut [1, ∞) must already carry their +iε offset.
/// Exposed so the series and integral paths can be compared directly.
pub fn appell_f1_integral(
    a: f64,
    b1: f64,
    b2: f64,
    c: f64,
    x: Complex64,
    y: Complex64,
    spec: &QuadratureSpec,
) -> Result<Complex64, SpecFunError> {
    validate_params(a, c)?;
    spec.validate()?;
    let pref = gamma_fn(c)? / (gamma_fn(a)? * gamma_fn(c - a)?);

    let mut cuts = vec![0.0, 1.0];
    for z in [x, y] {
        if let Some(t0) = interior_break(z) {
            if cuts.iter().all(|&b| (b - t0).abs() > 1e-13) {
                cuts.push(t0);
            }
        }
    }
    cuts.sort_by(|p, q| p.partial_cmp(q).unwrap());

    let mut total = Complex64::new(0.0, 0.0);
    for pair in cuts.windows(2) {
        let (lo, hi) = (pair[0], pair[1]);
        let delta = hi - lo;
        let one_minus_hi = 1.0 - hi;
        // Panel-local endpoint values of ξ = 1 − z t; per-node ξ is the
        // affine blend omt·ξ(lo) + τ·ξ(hi), an exact identity that stays
        // accurate where ξ → 0 at a panel boundary.
        let xi_x_lo = Complex64::new(1.0, 0.0) - x * lo;
        let xi_x_hi = Complex64::new(1.0, 0.0) - x * hi;
        let xi_y_lo = Complex64::new(1.0, 0.0) - y * lo;
        let xi_y_hi = Complex64::new(1.0, 0.0) - y * hi;
        let (val, _err) = integrate_01(
            |tau, omt| {
                let t = lo + delta * tau;
                let one_minus_t = one_minus_hi + delta * omt;
                let xi_x = omt * xi_x_lo + tau * xi_x_hi;
                let xi_y = omt * xi_y_lo + tau * xi_y_hi;
                let real_part = t.powf(a - 1.0) * one_minus_t.powf(c - a - 1.0);
                real_part * xi_x.powf(-b1) * xi_y.powf(-b2)
            },
            spec,
        )?;
        total += delta * val;
    }
    Ok(pref * total)
}

/// Reusable F₁ evaluator with fixed parameters (a, b₁, b₂, c), fixed first
/// argument x, and varying y.
///
/// When x is real and below the cut, the y-independent part of the Euler
/// integrand (node weight × t^{a−1}(1−t)^{c−a−1}(1−xt)^{−b₁}) is precomputed
/// per quadrature node, which makes sweeping y along a spectral grid cheap.
/// Evaluation is a pure function of (parameters, y); results are identical
/// whatever the call order, so the evaluator can be shared across threads.
pub struct AppellF1Evaluator {
    a: f64,
    b1: f64,
    b2: f64,
    c: f64,
    x: Complex64,
    spec: QuadratureSpec,
    branch_offset_x: Option<f64>,
    prefactor: f64,
    /// Cached per-level base tables; `Some` only for real x < 1.
    base: Option<Vec<BaseLevel>>,
}

struct BaseLevel {
    h: f64,
    nodes: Vec<BaseNode>,
}

struct BaseNode {
    /// Distance of the node from t = 1; 1 − y t is computed as
    /// (1 − y) + y·omt, which is stable at both endpoints.
    omt: f64,
    /// w · t^{a−1} (1−t)^{c−a−1} (1−xt)^{−b₁} at the node.
    base: f64,
}

impl AppellF1Evaluator {
    pub fn new(
        a: f64,
        b1: f64,
        b2: f64,
        c: f64,
        x: Complex64,
        spec: QuadratureSpec,
    ) -> Result<Self, SpecFunError> {
        validate_params(a, c)?;
        spec.validate()?;
        if !x.re.is_finite() || !x.im.is_finite() {
            return Err(SpecFunError::InvalidParameter(
                "F1 argument x must be finite".into(),
            ));
        }
        let (x_eff, branch_offset_x) = if on_cut(x) {
            (
                Complex64::new(x.re, spec.epsilon_branch),
                Some(spec.epsilon_branch),
            )
        } else {
            (x, None)
        };
        let prefactor = gamma_fn(c)? / (gamma_fn(a)? * gamma_fn(c - a)?);
        let base = (x_eff.im == 0.0 && x_eff.re < 1.0).then(|| {
            let deepest = spec.max_levels.min(tanhsinh::MAX_TABLE_LEVEL) as usize;
            tanhsinh::levels()
                .iter()
                .take(deepest + 1)
                .map(|level| {
                    let mut nodes = Vec::with_capacity(2 * level.pairs.len());
                    for p in &level.pairs {
                        nodes.push(base_node(a, b1, c, x_eff.re, p.tau, p.omt, p.w));
                        if !p.center {
                            nodes.push(base_node(a, b1, c, x_eff.re, p.omt, p.tau, p.w));
                        }
                    }
                    BaseLevel { h: level.h, nodes }
                })
                .collect()
        });
        Ok(Self {
            a,
            b1,
            b2,
            c,
            x: x_eff,
            spec,
            branch_offset_x,
            prefactor,
            base,
        })
    }

    /// Evaluates F₁ at the stored x and the given y.
    pub fn eval(&self, y: Complex64) -> Result<AppellEval, SpecFunError> {
        if !y.re.is_finite() || !y.im.is_finite() {
            return Err(SpecFunError::InvalidParameter(
                "F1 argument y must be finite".into(),
            ));
        }
        let (y_eff, branch_offset_y) = if on_cut(y) {
            (
                Complex64::new(y.re, self.spec.epsilon_branch),
                Some(self.spec.epsilon_branch),
            )
        } else {
            (y, None)
        };
        if self.branch_offset_x.is_none()
            && branch_offset_y.is_none()
            && self.x.norm() < SERIES_RADIUS
            && y_eff.norm() < SERIES_RADIUS
        {
            let value = appell_f1_series(self.a, self.b1, self.b2, self.c, self.x, y_eff)?;
            return Ok(AppellEval {
                value,
                branch_offset_x: None,
                branch_offset_y: None,
                path: F1Path::Series,
            });
        }
        let value = if self.base.is_some() && y_eff.im == 0.0 && y_eff.re < 1.0 {
            self.eval_cached_real(y_eff.re)?
        } else {
            appell_f1_integral(self.a, self.b1, self.b2, self.c, self.x, y_eff, &self.spec)?
        };
        Ok(AppellEval {
            value,
            branch_offset_x: self.branch_offset_x,
            branch_offset_y,
            path: F1Path::Integral,
        })
    }

    /// Fast path: x real < 1 (cached base) and y real < 1, so the whole
    /// integrand is real and positive with no interior feature; one real
    /// power per node. Mirrors the refinement/termination logic of
    /// [`integrate_01`] exactly.
    fn eval_cached_real(&self, y: f64) -> Result<Complex64, SpecFunError> {
        let base = self.base.as_ref().expect("cached path requires base table");
        let one_minus_y = 1.0 - y;
        let neg_b2 = -self.b2;
        // Tolerances act on F1 = prefactor × integral; rescale the absolute
        // part so the loop can compare raw integral sums.
        let abs_tol = self.spec.abs_tol / self.prefactor.abs().max(f64::MIN_POSITIVE);
        let rel_tol = self.spec.rel_tol;

        let mut node_sum = 0.0f64;
        let mut prev_s: Option<f64> = None;
        let mut last_diff = f64::INFINITY;
        let mut required = abs_tol;
        for (lev, level) in base.iter().enumerate() {
            let scale = prev_s.map(f64::abs).unwrap_or(0.0);
            let tail_cut = if lev >= 2 {
                1e-2 * abs_tol.max(rel_tol * scale) / level.h
            } else {
                0.0
            };
            let mut below_cut = 0u32;
            for node in &level.nodes {
                let xi = one_minus_y + y * node.omt;
                let term = node.base * xi.powf(neg_b2);
                if !term.is_finite() {
                    return Err(SpecFunError::InvalidParameter(
                        "integrand returned a non-finite value".into(),
                    ));
                }
                node_sum += term;
                if tail_cut > 0.0 {
                    if term.abs() < tail_cut {
                        below_cut += 1;
                        if below_cut >= 3 {
                            break;
                        }
                    } else {
                        below_cut = 0;
                    }
                }
            }
            let s = level.h * node_sum;
            if let Some(p) = prev_s {
                last_diff = (s - p).abs();
                required = abs_tol.max(rel_tol * s.abs());
                if lev >= 2 && last_diff <= required {
                    return Ok(Complex64::new(self.prefactor * s, 0.0));
                }
            }
            prev_s = Some(s);
        }
        Err(SpecFunError::QuadDiverged {
            achieved: last_diff,
            required,
        })
    }
}

fn base_node(a: f64, b1: f64, c: f64, x: f64, t: f64, omt: f64, w: f64) -> BaseNode {
    // 1 − x t = (1 − x) + x·omt: stable for t → 1 (x < 1 keeps it positive).
    let xi_x = (1.0 - x) + x * omt;
    BaseNode {
        omt,
        base: w * t.powf(a - 1.0) * omt.powf(c - a - 1.0) * xi_x.powf(-b1),
    }
}

/// Appell F₁(a; b₁, b₂; c; x, y) with full path/branch metadata.
///
/// Requires c > a > 0. Inside the 0.9 bi-disk the double power series is
/// used; otherwise the tanh-sinh Euler integral. Real arguments on the cut
/// [1, ∞) are shifted to argument + iε (retarded prescription) with the
/// offset reported in the result.
pub fn appell_f1_eval(
    a: f64,
    b1: f64,
    b2: f64,
    c: f64,
    x: Complex64,
    y: Complex64,
    spec: &QuadratureSpec,
) -> Result<AppellEval, SpecFunError> {
    AppellF1Evaluator::new(a, b1, b2, c, x, *spec)?.eval(y)
}

/// Appell F₁(a; b₁, b₂; c; x, y); see [`appell_f1_eval`] for the conventions.
pub fn appell_f1(
    a: f64,
    b1: f64,
    b2: f64,
    c: f64,
    x: Complex64,
    y: Complex64,
    spec: &QuadratureSpec,
) -> Result<Complex64, SpecFunError> {
    appell_f1_eval(a, b1, b2, c, x, y, spec).map(|e| e.value)
}
