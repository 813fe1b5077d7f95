//! Density-density spectral function D(ω, q) of the separated two-component
//! Luttinger liquid, (ω, q)-grid evaluation, and spinon/holon peak
//! extraction.
//!
//! Only the 2k_F component of the correlator is computed (the closed form
//! exists only for it); the zero-momentum gradient-term correlator is out of
//! scope. The reported scalar for peak logic is |D|: the overall sign/phase
//! convention of the time-ordered correlator is retained in the complex
//! value, and magnitude preserves peak locations for any fixed convention.

use crate::params::LuttingerParameters;
use crate::specfun::{gamma_fn, step_theta, AppellF1Evaluator, QuadratureSpec, SpecFunError};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

/// Absolute distance from a singular line below which a lattice point is
/// nudged by half a grid step before evaluation.
const SINGULAR_NUDGE_DISTANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectralError {
    #[error("invalid spectrum request: {0}")]
    InvalidRequest(String),
    #[error("point (omega = {omega}, q = {q}) lies exactly on the {line} singular line")]
    SingularLine { omega: f64, q: f64, line: &'static str },
    #[error("peak extraction failed: {0}")]
    Peaks(String),
    #[error("{} of {total} grid points failed; first failures: {failures:?}", failures.len())]
    GridPoints {
        /// (q index, omega index, error) for the first few failing points.
        failures: Vec<(usize, usize, String)>,
        total: usize,
    },
    #[error(transparent)]
    SpecFun(#[from] SpecFunError),
}

/// Inputs for a D(ω, q) evaluation over a rectangular lattice.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectrumRequest {
    pub lutt: LuttingerParameters,
    /// Mean density ρ₀ (1/length, > 0); the prefactor carries ρ₀².
    pub rho0: f64,
    /// Short-distance cutoff α (length, > 0). Peak locations are
    /// α-independent; peak heights are not. Normalized mode: α = ρ₀ = 1.
    pub alpha: f64,
    pub omega_min: f64,
    pub omega_max: f64,
    pub omega_steps: usize,
    pub q_min: f64,
    pub q_max: f64,
    pub q_steps: usize,
    pub quad: QuadratureSpec,
}

impl SpectrumRequest {
    /// Validates ranges, the ω resolution bound Δω ≤ 0.02·u_charge·|q|_max,
    /// and that no sampled q is zero.
    pub fn validate(&self) -> Result<(), SpectralError> {
        let bad = |msg: String| Err(SpectralError::InvalidRequest(msg));
        if !(self.rho0 > 0.0) {
            return bad(format!("rho0 must be positive, got {}", self.rho0));
        }
        if !(self.alpha > 0.0) {
            return bad(format!("alpha must be positive, got {}", self.alpha));
        }
        if self.omega_steps == 0 || self.q_steps == 0 {
            return bad("omega_steps and q_steps must be at least 1".into());
        }
        if !(self.omega_min >= 0.0) {
            return bad(format!("omega_min must be >= 0, got {}", self.omega_min));
        }
        if self.omega_steps >= 2 && !(self.omega_max > self.omega_min) {
            return bad(format!(
                "omega_max must exceed omega_min, got [{}, {}]",
                self.omega_min, self.omega_max
            ));
        }
        if self.q_steps >= 2 && !(self.q_max > self.q_min) {
            return bad(format!(
                "q_max must exceed q_min, got [{}, {}]",
                self.q_min, self.q_max
            ));
        }
        for v in [self.omega_min, self.omega_max, self.q_min, self.q_max] {
            if !v.is_finite() {
                return bad("axis bounds must be finite".into());
            }
        }
        if self.qs().iter().any(|&q| q == 0.0) {
            return bad("q = 0 is excluded (the 2k_F correlator has no q = 0 form)".into());
        }
        let q_abs_max = self.q_min.abs().max(self.q_max.abs());
        let dw = self.omega_step();
        if self.omega_steps >= 2 && dw > 0.02 * self.lutt.u_charge * q_abs_max {
            return bad(format!(
                "omega spacing {dw:.6e} too coarse for peak separation; \
                 need <= 0.02*u_charge*|q|_max = {:.6e}",
                0.02 * self.lutt.u_charge * q_abs_max
            ));
        }
        self.quad.validate()?;
        Ok(())
    }

    /// Grid spacing in ω (0 for a single-sample axis).
    pub fn omega_step(&self) -> f64 {
        if self.omega_steps >= 2 {
            (self.omega_max - self.omega_min) / (self.omega_steps - 1) as f64
        } else {
            0.0
        }
    }

    /// Sampled ω axis. Endpoints are produced exactly (the interior is the
    /// affine blend min·(1−τ) + max·τ), so refining a grid reproduces shared
    /// lattice points bit-identically.
    pub fn omegas(&self) -> Vec<f64> {
        linspace(self.omega_min, self.omega_max, self.omega_steps)
    }

    /// Sampled q axis; same conventions as [`Self::omegas`].
    pub fn qs(&self) -> Vec<f64> {
        linspace(self.q_min, self.q_max, self.q_steps)
    }
}

fn linspace(min: f64, max: f64, steps: usize) -> Vec<f64> {
    if steps == 1 {
        return vec![min];
    }
    (0..steps)
        .map(|i| {
            let tau = i as f64 / (steps - 1) as f64;
            min * (1.0 - tau) + max * tau
        })
        .collect()
}

/// Sampled D(ω, q) with evaluation metadata.
#[derive(Debug, Clone)]
pub struct SpectrumGrid {
    pub omegas: Vec<f64>,
    pub qs: Vec<f64>,
    /// Values in q-major order: `values[iq * omegas.len() + iw]`.
    pub values: Vec<Complex64>,
    /// +iε branch offset used at each point (`None` where both F₁ arguments
    /// were off the cut); same layout as `values`.
    pub branch_offsets: Vec<Option<f64>>,
    pub request: SpectrumRequest,
}

impl SpectrumGrid {
    pub fn value(&self, iq: usize, iw: usize) -> Complex64 {
        self.values[iq * self.omegas.len() + iw]
    }

    /// The ω column at fixed q index.
    pub fn column(&self, iq: usize) -> &[Complex64] {
        let n = self.omegas.len();
        &self.values[iq * n..(iq + 1) * n]
    }
}

/// Two-peak summary of an ω cut at fixed q.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeakSet {
    pub q: f64,
    /// The two peak frequencies, ascending.
    pub peak_omegas: Vec<f64>,
    /// |D| at the peaks, matching `peak_omegas`.
    pub peak_heights: Vec<f64>,
    /// Lower peak interpreted as the spin branch: ω_peak/q.
    pub inferred_u_spin: f64,
    /// Upper peak interpreted as the charge branch: ω_peak/q.
    pub inferred_u_charge: f64,
}

struct FormulaParams {
    a: f64,
    b1: f64,
    b2: f64,
    c: f64,
    x: f64,
    /// ω- and q-independent prefactor −4πρ₀²(α/2)^{K_c+K_s} Γ(1−s)/Γ(s)
    /// u_s^{1−K_c−K_s}.
    front: f64,
    s: f64,
    u_s2: f64,
    u_c2: f64,
}

impl FormulaParams {
    fn new(req: &SpectrumRequest) -> Result<Self, SpectralError> {
        let kc = req.lutt.k_charge;
        let ks = req.lutt.k_spin;
        let us = req.lutt.u_spin;
        let uc = req.lutt.u_charge;
        let s = 0.5 * (kc + ks);
        let front = -4.0
            * std::f64::consts::PI
            * req.rho0
            * req.rho0
            * (0.5 * req.alpha).powf(kc + ks)
            * (gamma_fn(1.0 - s)? / gamma_fn(s)?)
            * us.powf(1.0 - kc - ks);
        Ok(Self {
            a: 0.5 * kc,
            b1: 0.5 * (kc + ks - 1.0),
            b2: 1.0 - s,
            c: s,
            x: 1.0 - uc * uc / (us * us),
            front,
            s,
            u_s2: us * us,
            u_c2: uc * uc,
        })
    }

    fn evaluator(&self, quad: QuadratureSpec) -> Result<AppellF1Evaluator, SpecFunError> {
        AppellF1Evaluator::new(self.a, self.b1, self.b2, self.c, Complex64::new(self.x, 0.0), quad)
    }

    /// D(ω, q) at a point known to be off both singular lines.
    fn eval(
        &self,
        omega: f64,
        q: f64,
        ev: &AppellF1Evaluator,
    ) -> Result<(Complex64, Option<f64>), SpectralError> {
        let d = omega * omega - self.u_s2 * q * q;
        let dc = omega * omega - self.u_c2 * q * q;
        if d == 0.0 {
            return Err(SpectralError::SingularLine { omega, q, line: "spin" });
        }
        if dc == 0.0 {
            return Err(SpectralError::SingularLine { omega, q, line: "charge" });
        }
        let y = 1.0 - dc / d;
        let f1 = ev.eval(Complex64::new(y, 0.0))?;
        let magnitude = self.front * d.abs().powf(self.s - 1.0);
        let phase = Complex64::from_polar(
            1.0,
            -std::f64::consts::PI * (self.s - 1.0) * step_theta(d),
        );
        Ok((magnitude * phase * f1.value, f1.branch_offset_y))
    }
}

/// D(ω, q) at a single point.
///
/// The closed form is
/// −4πρ₀²(α/2)^{K_c+K_s} Γ(1−s)/Γ(s) |ω²−u_s²q²|^{s−1} u_s^{1−K_c−K_s}
/// exp[−iπ(s−1)Θ(ω²−u_s²q²)] F₁(K_c/2; (K_c+K_s−1)/2, 1−s; s; x, y)
/// with s = (K_c+K_s)/2, x = 1−u_c²/u_s², y = 1−(ω²−u_c²q²)/(ω²−u_s²q²);
/// y sweeps the cut [1, ∞) between the two lines, where the +iε prescription
/// of the request's [`QuadratureSpec`] applies. Points exactly on either
/// singular line ω = u_{s,c}·q are an error naming the line.
pub fn density_spectrum_point(
    omega: f64,
    q: f64,
    req: &SpectrumRequest,
) -> Result<Complex64, SpectralError> {
    req.validate()?;
    let p = FormulaParams::new(req)?;
    let ev = p.evaluator(req.quad)?;
    p.eval(omega, q, &ev).map(|(v, _)| v)
}

/// Evaluates D over the request's lattice.
///
/// Lattice points within 1e-9 of a singular line are nudged upward by half a
/// grid step before evaluation (grids stay rectangular for plotting). Each
/// point is a pure function of its coordinates: evaluation order — and the
/// worker count used — cannot change any value.
pub fn density_spectrum_grid(req: &SpectrumRequest) -> Result<SpectrumGrid, SpectralError> {
    req.validate()?;
    let p = FormulaParams::new(req)?;
    let ev = p.evaluator(req.quad)?;
    let omegas = req.omegas();
    let qs = req.qs();
    let nw = omegas.len();
    let half_step = 0.5 * req.omega_step();
    let us = req.lutt.u_spin;
    let uc = req.lutt.u_charge;

    let points: Vec<Result<(Complex64, Option<f64>), SpectralError>> = (0..qs.len() * nw)
        .into_par_iter()
        .map(|idx| {
            let q = qs[idx / nw];
            let mut omega = omegas[idx % nw];
            let near_line = (omega - us * q.abs()).abs() < SINGULAR_NUDGE_DISTANCE
                || (omega - uc * q.abs()).abs() < SINGULAR_NUDGE_DISTANCE;
            if near_line && half_step > 0.0 {
                omega += half_step;
            }
            p.eval(omega, q, &ev)
        })
        .collect();

    let total = points.len();
    let mut values = Vec::with_capacity(total);
    let mut offsets = Vec::with_capacity(total);
    let mut failures = Vec::new();
    for (idx, point) in points.into_iter().enumerate() {
        match point {
            Ok((v, off)) => {
                values.push(v);
                offsets.push(off);
            }
            Err(e) => {
                if failures.len() < 8 {
                    failures.push((idx / nw, idx % nw, e.to_string()));
                }
            }
        }
    }
    if !failures.is_empty() {
        return Err(SpectralError::GridPoints { failures, total });
    }
    Ok(SpectrumGrid {
        omegas,
        qs,
        values,
        branch_offsets: offsets,
        request: *req,
    })
}

/// Finds the two dominant peaks of |D(ω, q)| along ω at the grid column
/// nearest `q`.
///
/// Local maxima closer than 3 grid steps are merged into their tallest
/// member; the two tallest survivors are reported in ascending ω with
/// velocities inferred as ω_peak/q. Requires at least 50 samples on each
/// side of ω = u_charge·q so both branches are bracketed.
pub fn extract_peaks(grid: &SpectrumGrid, q: f64) -> Result<PeakSet, SpectralError> {
    if grid.qs.is_empty() || grid.omegas.len() < 3 {
        return Err(SpectralError::Peaks("grid too small for peak extraction".into()));
    }
    let iq = grid
        .qs
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| {
            ((*a - q).abs()).partial_cmp(&((*b - q).abs())).unwrap()
        })
        .map(|(i, _)| i)
        .unwrap();
    let q_col = grid.qs[iq];
    let line = grid.request.lutt.u_charge * q_col.abs();
    let below = grid.omegas.iter().filter(|&&w| w < line).count();
    let above = grid.omegas.iter().filter(|&&w| w > line).count();
    if below < 50 || above < 50 {
        return Err(SpectralError::Peaks(format!(
            "need at least 50 omega samples on each side of u_charge*q = {line:.6}; \
             have {below} below and {above} above"
        )));
    }

    let magnitudes: Vec<f64> = grid.column(iq).iter().map(|v| v.norm()).collect();
    let mut candidates: Vec<(usize, f64)> = Vec::new();
    for i in 1..magnitudes.len() - 1 {
        if magnitudes[i] > magnitudes[i - 1] && magnitudes[i] > magnitudes[i + 1] {
            candidates.push((i, magnitudes[i]));
        }
    }
    // Merge maxima closer than 3 grid steps, keeping the tallest of each
    // cluster (cusp tips sampled twice at grid resolution count once).
    let mut merged: Vec<(usize, f64)> = Vec::new();
    for (i, h) in candidates {
        match merged.last_mut() {
            Some((last_i, last_h)) if i - *last_i < 3 => {
                if h > *last_h {
                    *last_i = i;
                    *last_h = h;
                }
            }
            _ => merged.push((i, h)),
        }
    }
    if merged.len() < 2 {
        return Err(SpectralError::Peaks(format!(
            "found {} resolved peaks, need 2 (non-separated regime or insufficient resolution)",
            merged.len()
        )));
    }
    merged.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap());
    let mut top: Vec<(usize, f64)> = merged.into_iter().take(2).collect();
    top.sort_by_key(|&(i, _)| i);
    let peak_omegas: Vec<f64> = top.iter().map(|&(i, _)| grid.omegas[i]).collect();
    let peak_heights: Vec<f64> = top.iter().map(|&(_, h)| h).collect();
    Ok(PeakSet {
        q: q_col,
        inferred_u_spin: peak_omegas[0] / q_col,
        inferred_u_charge: peak_omegas[1] / q_col,
        peak_omegas,
        peak_heights,
    })
}

/// Least-squares slope of y against x through the origin.
pub fn fit_through_origin(points: &[(f64, f64)]) -> f64 {
    let num: f64 = points.iter().map(|&(x, y)| x * y).sum();
    let den: f64 = points.iter().map(|&(x, _)| x * x).sum();
    num / den
}

/// Peak velocities fitted over several momenta: extracts the two peaks at
/// each q (using the request's ω axis) and fits ω_peak = u·q through the
/// origin for each branch. Returns (u_spin_fit, u_charge_fit).
pub fn velocities_from_sweep(
    req: &SpectrumRequest,
    q_list: &[f64],
) -> Result<(f64, f64), SpectralError> {
    if q_list.len() < 3 {
        return Err(SpectralError::InvalidRequest(format!(
            "velocity sweep needs at least 3 momenta, got {}",
            q_list.len()
        )));
    }
    let mut spin_pts = Vec::with_capacity(q_list.len());
    let mut charge_pts = Vec::with_capacity(q_list.len());
    for &q in q_list {
        let col_req = SpectrumRequest {
            q_min: q,
            q_max: q,
            q_steps: 1,
            ..*req
        };
        let grid = density_spectrum_grid(&col_req)?;
        let peaks = extract_peaks(&grid, q)?;
        spin_pts.push((q, peaks.peak_omegas[0]));
        charge_pts.push((q, peaks.peak_omegas[1]));
    }
    Ok((fit_through_origin(&spin_pts), fit_through_origin(&charge_pts)))
}
