//! Shared oracles for the integration tests: implementations that are
//! deliberately independent of the library's algorithms (Stirling instead of
//! Lanczos, Gauss–Legendre panels instead of tanh-sinh) so agreement is
//! evidence, not tautology.
#![allow(dead_code)]

use num_complex::Complex64;

/// ln Γ(x) for x > 0 by the Stirling asymptotic series after shifting the
/// argument above 32. Good to ~1e-14 relative.
pub fn ln_gamma_oracle(x: f64) -> f64 {
    assert!(x > 0.0, "oracle domain is x > 0, got {x}");
    let mut shift = 0.0_f64;
    let mut z = x;
    while z < 32.0 {
        shift += z.ln();
        z += 1.0;
    }
    // Stirling: lnΓ(z) ≈ (z−1/2)ln z − z + ln(2π)/2 + Σ B_{2k}/(2k(2k−1) z^{2k−1})
    let coeffs = [
        1.0 / 12.0,
        -1.0 / 360.0,
        1.0 / 1260.0,
        -1.0 / 1680.0,
        1.0 / 1188.0,
        -691.0 / 360360.0,
        1.0 / 156.0,
        -3617.0 / 122400.0,
    ];
    let inv2 = 1.0 / (z * z);
    let mut series = 0.0;
    let mut power = 1.0 / z;
    for c in coeffs {
        series += c * power;
        power *= inv2;
    }
    (z - 0.5) * z.ln() - z + 0.5 * (2.0 * std::f64::consts::PI).ln() + series - shift
}

pub fn gamma_oracle(x: f64) -> f64 {
    if x > 0.0 {
        ln_gamma_oracle(x).exp()
    } else {
        // Reflection through the oracle's own positive-axis values.
        let s = (std::f64::consts::PI * x).sin();
        std::f64::consts::PI / (s * ln_gamma_oracle(1.0 - x).exp())
    }
}

/// Plain Gauss series for ₂F₁, with the Pfaff map (1−x)^{−a}·₂F₁(a, c−b, c,
/// x/(x−1)) applied first when it shrinks the argument. Panics if neither
/// argument is small enough to sum reliably.
pub fn hyp2f1_oracle(a: f64, b: f64, c: f64, x: Complex64) -> Complex64 {
    let mapped = x / (x - 1.0);
    if x.norm() <= 0.88 {
        hyp2f1_series_raw(a, b, c, x)
    } else if mapped.norm() <= 0.88 {
        (Complex64::new(1.0, 0.0) - x).powf(-a) * hyp2f1_series_raw(a, c - b, c, mapped)
    } else {
        panic!("hyp2f1 oracle: |x| = {} and |x/(x-1)| = {} both too large", x.norm(), mapped.norm());
    }
}

fn hyp2f1_series_raw(a: f64, b: f64, c: f64, x: Complex64) -> Complex64 {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for n in 0..40_000_u64 {
        let nf = n as f64;
        term *= x * ((a + nf) * (b + nf)) / ((c + nf) * (nf + 1.0));
        sum += term;
        if term.norm() <= 1e-17 * sum.norm() {
            return sum;
        }
    }
    panic!("hyp2f1 oracle series failed to converge at x = {x}");
}

/// Gauss–Legendre nodes/weights on [-1, 1] by Newton iteration on the
/// Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// F1 by its Euler integral on graded dyadic panels with 48-point
/// Gauss–Legendre per panel. The endpoint tails below 2^-64 are added in
/// closed form (the integrand is t^{a-1}·(1 + O(t)) there, and O(2^-64) is
/// below double precision). Requires c > a > 0 and both x, y off the cut
/// [1, ∞); accuracy degrades if 1 − z·t comes within ~0.05 of zero on the
/// path, so keep draws away from that.
pub fn f1_gl_oracle(a: f64, b1: f64, b2: f64, c: f64, x: Complex64, y: Complex64) -> Complex64 {
    assert!(c > a && a > 0.0, "oracle needs c > a > 0");
    let (nodes, weights) = gauss_legendre(48);
    let one = Complex64::new(1.0, 0.0);
    let integrand_t = |t: f64| -> Complex64 {
        (one - x * t).powf(-b1) * (one - y * t).powf(-b2)
    };
    let mut total = Complex64::new(0.0, 0.0);
    const K: i32 = 64;
    // Left panels [2^-(k+1), 2^-k] cover [2^-K, 1/2]; integrate t^{a-1}·g(t).
    for k in 1..K {
        let hi = 2.0_f64.powi(-k);
        let lo = hi / 2.0;
        let (half, mid) = (0.5 * (hi - lo), 0.5 * (hi + lo));
        for (&u, &w) in nodes.iter().zip(&weights) {
            let t = mid + half * u;
            total += integrand_t(t) * t.powf(a - 1.0) * (1.0 - t).powf(c - a - 1.0) * (w * half);
        }
    }
    // Right panels in s = 1 − t so the (1−t) factor never cancels.
    for k in 1..K {
        let hi = 2.0_f64.powi(-k);
        let lo = hi / 2.0;
        let (half, mid) = (0.5 * (hi - lo), 0.5 * (hi + lo));
        for (&u, &w) in nodes.iter().zip(&weights) {
            let s = mid + half * u;
            let t = 1.0 - s;
            total += integrand_t(t) * t.powf(a - 1.0) * s.powf(c - a - 1.0) * (w * half);
        }
    }
    // Analytic endpoint stubs: ∫₀^ε t^{a−1} g(t) dt = ε^a/a · g(0)·(1+O(ε)).
    let eps = 2.0_f64.powi(-K);
    total += Complex64::new(eps.powf(a) / a, 0.0); // g(0) = 1
    total += integrand_t(1.0) * (eps.powf(c - a) / (c - a));
    let ln_pref = ln_gamma_oracle(c) - ln_gamma_oracle(a) - ln_gamma_oracle(c - a);
    total * ln_pref.exp()
}

/// Minimum over t ∈ [0, 1] of |1 − z t|: how close the F1 kernel comes to
/// its singularity along the integration path.
pub fn min_kernel_distance(z: Complex64) -> f64 {
    if z.norm_sqr() == 0.0 {
        return 1.0;
    }
    let t_star = z.re / z.norm_sqr();
    let ends = (1.0_f64).min((Complex64::new(1.0, 0.0) - z).norm());
    if (0.0..=1.0).contains(&t_star) {
        ends.min((Complex64::new(1.0, 0.0) - z * t_star).norm())
    } else {
        ends
    }
}
