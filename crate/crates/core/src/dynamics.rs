//! Mean-field simulator for the coupled two-component nonlinear Schrödinger
//! equations
//!
//!   i ∂_t Ψ_s = −(1/2m_s) ∂_z² Ψ_s + (χ_s|Ψ_s|² + κ_s|Ψ_s̄|²) Ψ_s
//!
//! on a periodic box, via second-order Strang splitting with spectral
//! kinetic steps. κ_s is the per-equation cross coupling
//! (`chi_cross_up`/`chi_cross_down`), the coefficient that actually enters
//! each species' equation of motion; the summed `chi_cross` belongs to the
//! Hamiltonian/Luttinger map.
//!
//! The classical-field treatment is quantitatively valid only at weak
//! coupling (γ ≲ 0.1). The strongly interacting regime (γ ~ 20) is *not*
//! faithfully modeled here; it is covered by the Luttinger-liquid spectral
//! formula in [`crate::spectral`].

use crate::params::EffectiveLiebLiniger;
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynamicsError {
    #[error("geometry error: {0}")]
    Geometry(String),
    #[error(
        "stability bound violated: nonlinear phase per step {phase:.3e} exceeds 0.05 \
         (reduce dt or the perturbation amplitude)"
    )]
    Stability { phase: f64 },
    #[error("no front detected: {0}")]
    NoFront(String),
    #[error("invalid evolution setup: {0}")]
    Invalid(String),
}

/// Localized density perturbation added to the uniform background.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Perturbation {
    pub kind: PerturbationKind,
    /// Peak density deviation (same units as the background density).
    pub amplitude: f64,
    /// Gaussian 1/e half-width of the *density* bump.
    pub width: f64,
    /// Bump center in [0, box_length].
    pub center: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PerturbationKind {
    /// No bump: uniform condensate.
    None,
    /// Bump added with the same sign to both species (ρ_spin stays 0).
    Charge,
    /// Bump added to ↑ and subtracted from ↓ (ρ_charge stays flat).
    Spin,
}

/// Two complex polariton fields on a uniform periodic grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldState {
    pub psi_up: Vec<Complex64>,
    pub psi_down: Vec<Complex64>,
    pub grid_points: usize,
    pub box_length: f64,
    pub time: f64,
}

impl FieldState {
    pub fn dz(&self) -> f64 {
        self.box_length / self.grid_points as f64
    }

    /// Grid coordinates z_i = i·L/N, i = 0..N.
    pub fn zs(&self) -> Vec<f64> {
        let dz = self.dz();
        (0..self.grid_points).map(|i| i as f64 * dz).collect()
    }

    /// Per-species norms N_s = Σ|ψ_s|² dz.
    pub fn norms(&self) -> (f64, f64) {
        let dz = self.dz();
        let up: f64 = self.psi_up.iter().map(|p| p.norm_sqr()).sum();
        let down: f64 = self.psi_down.iter().map(|p| p.norm_sqr()).sum();
        (up * dz, down * dz)
    }

    /// Charge and spin densities ρ_↑ ± ρ_↓ at the current time.
    pub fn density_profiles(&self) -> (Vec<f64>, Vec<f64>) {
        self.psi_up
            .iter()
            .zip(&self.psi_down)
            .map(|(u, d)| {
                let (ru, rd) = (u.norm_sqr(), d.norm_sqr());
                (ru + rd, ru - rd)
            })
            .unzip()
    }
}

/// Time-stepping plan: step size, count, effective parameters, and the
/// recording stride for [`evolve`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolutionSpec {
    pub dt: f64,
    pub steps: usize,
    pub eff: EffectiveLiebLiniger,
    pub record_every: usize,
}

impl EvolutionSpec {
    fn validate(&self) -> Result<(), DynamicsError> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(DynamicsError::Invalid(format!(
                "dt must be positive and finite, got {}",
                self.dt
            )));
        }
        if self.steps == 0 {
            return Err(DynamicsError::Invalid("steps must be positive".into()));
        }
        if self.record_every == 0 {
            return Err(DynamicsError::Invalid("record_every must be at least 1".into()));
        }
        if self.eff.mass_up == 0.0 || self.eff.mass_down == 0.0 {
            return Err(DynamicsError::Invalid("effective masses must be nonzero".into()));
        }
        Ok(())
    }
}

/// Charge and spin densities recorded over an evolution.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityTrace {
    pub times: Vec<f64>,
    /// Grid coordinates matching the spatial axis of the density arrays.
    pub zs: Vec<f64>,
    /// rho_charge[frame][z index] ≥ 0.
    pub rho_charge: Vec<Vec<f64>>,
    pub rho_spin: Vec<Vec<f64>>,
}

/// Density trace channel selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Channel {
    Charge,
    Spin,
}

/// Prepares a uniform two-species condensate with an optional Gaussian
/// density bump, ψ_s = √(ρ_{0,s} ± a·exp(−(z−z₀)²/w²)).
///
/// Returns the state plus validity warnings (amplitude beyond 10% of the
/// background leaves the linear-response regime). Backgrounds may be zero
/// (free-packet setups); geometry requires width < box_length/4 so the bump
/// is periodic-smooth, and the bump must not push any density negative.
pub fn init_state(
    rho0_up: f64,
    rho0_down: f64,
    perturbation: &Perturbation,
    grid_points: usize,
    box_length: f64,
) -> Result<(FieldState, Vec<String>), DynamicsError> {
    if grid_points < 2 || !grid_points.is_power_of_two() {
        return Err(DynamicsError::Invalid(format!(
            "grid_points must be a power of two >= 2, got {grid_points}"
        )));
    }
    if !(box_length > 0.0) {
        return Err(DynamicsError::Geometry(format!(
            "box_length must be positive, got {box_length}"
        )));
    }
    if !(rho0_up >= 0.0 && rho0_down >= 0.0) {
        return Err(DynamicsError::Invalid(
            "background densities must be non-negative".into(),
        ));
    }
    let mut warnings = Vec::new();
    let bump: Box<dyn Fn(f64) -> f64> = match perturbation.kind {
        PerturbationKind::None => Box::new(|_| 0.0),
        _ => {
            if !(perturbation.width > 0.0) {
                return Err(DynamicsError::Geometry(format!(
                    "perturbation width must be positive, got {}",
                    perturbation.width
                )));
            }
            if perturbation.width >= box_length / 4.0 {
                return Err(DynamicsError::Geometry(format!(
                    "perturbation width {} too large for box {box_length}; need width < L/4 \
                     so the bump stays periodic-smooth",
                    perturbation.width
                )));
            }
            if !(0.0..=box_length).contains(&perturbation.center) {
                return Err(DynamicsError::Geometry(format!(
                    "perturbation center {} outside the box [0, {box_length}]",
                    perturbation.center
                )));
            }
            if perturbation.amplitude.abs() > 0.1 * rho0_up.min(rho0_down) {
                warnings.push(format!(
                    "perturbation amplitude {} exceeds 10% of the background density; \
                     outside the linear-response regime",
                    perturbation.amplitude
                ));
            }
            let (a, w, z0) = (
                perturbation.amplitude,
                perturbation.width,
                perturbation.center,
            );
            Box::new(move |z: f64| a * (-((z - z0) / w).powi(2)).exp())
        }
    };
    let sign_down = match perturbation.kind {
        PerturbationKind::Spin => -1.0,
        _ => 1.0,
    };
    let dz = box_length / grid_points as f64;
    let mut psi_up = Vec::with_capacity(grid_points);
    let mut psi_down = Vec::with_capacity(grid_points);
    for i in 0..grid_points {
        let z = i as f64 * dz;
        let b = match perturbation.kind {
            PerturbationKind::None => 0.0,
            _ => bump(z),
        };
        let ru = rho0_up + b;
        let rd = rho0_down + sign_down * b;
        if ru < 0.0 || rd < 0.0 {
            return Err(DynamicsError::Geometry(format!(
                "perturbation drives the density negative at z = {z:.3} \
                 (background {rho0_down}, deviation {b:.3e})"
            )));
        }
        psi_up.push(Complex64::new(ru.sqrt(), 0.0));
        psi_down.push(Complex64::new(rd.sqrt(), 0.0));
    }
    Ok((
        FieldState {
            psi_up,
            psi_down,
            grid_points,
            box_length,
            time: 0.0,
        },
        warnings,
    ))
}

/// Reusable split-step integrator holding FFT plans and kinetic phase
/// tables for a fixed (spec, grid) pair. A `Stepper` advances one state
/// strictly serially; independent simulations get independent steppers.
pub struct Stepper {
    fft: Arc<dyn Fft<f64>>,
    ifft: Arc<dyn Fft<f64>>,
    /// exp(−i k² dt/(4 m_s)) / N per mode: half kinetic step with the
    /// inverse-transform normalization folded in.
    half_kin_up: Vec<Complex64>,
    half_kin_down: Vec<Complex64>,
    scratch: Vec<Complex64>,
    chi_up: f64,
    chi_down: f64,
    kappa_up: f64,
    kappa_down: f64,
    dt: f64,
    /// max_s(|χ_s| + |χ_↑↓|), cached for the per-step stability check.
    coupling_scale: f64,
}

impl Stepper {
    pub fn new(
        spec: &EvolutionSpec,
        grid_points: usize,
        box_length: f64,
    ) -> Result<Self, DynamicsError> {
        spec.validate()?;
        if grid_points < 2 || !grid_points.is_power_of_two() {
            return Err(DynamicsError::Invalid(format!(
                "grid_points must be a power of two >= 2, got {grid_points}"
            )));
        }
        let mut planner = FftPlanner::new();
        let fft = planner.plan_fft_forward(grid_points);
        let ifft = planner.plan_fft_inverse(grid_points);
        let scratch =
            vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len().max(ifft.get_inplace_scratch_len())];
        let n = grid_points as f64;
        let table = |mass: f64| -> Vec<Complex64> {
            (0..grid_points)
                .map(|j| {
                    let jj = if j < grid_points / 2 {
                        j as f64
                    } else {
                        j as f64 - n
                    };
                    let k = 2.0 * std::f64::consts::PI * jj / box_length;
                    Complex64::from_polar(1.0 / n, -k * k * spec.dt / (4.0 * mass))
                })
                .collect()
        };
        let eff = &spec.eff;
        let coupling_scale = (eff.chi_up.abs() + eff.chi_cross.abs())
            .max(eff.chi_down.abs() + eff.chi_cross.abs());
        Ok(Self {
            fft,
            ifft,
            half_kin_up: table(eff.mass_up),
            half_kin_down: table(eff.mass_down),
            scratch,
            chi_up: eff.chi_up,
            chi_down: eff.chi_down,
            kappa_up: eff.chi_cross_up,
            kappa_down: eff.chi_cross_down,
            dt: spec.dt,
            coupling_scale,
        })
    }

    fn half_kinetic(&mut self, state: &mut FieldState) {
        for (psi, table) in [
            (&mut state.psi_up, &self.half_kin_up),
            (&mut state.psi_down, &self.half_kin_down),
        ] {
            self.fft.process_with_scratch(psi, &mut self.scratch);
            for (p, k) in psi.iter_mut().zip(table) {
                *p *= k;
            }
            self.ifft.process_with_scratch(psi, &mut self.scratch);
        }
    }

    /// One Strang step: half kinetic, full nonlinear (pointwise exact
    /// phase), half kinetic. Local error O(dt³).
    pub fn step(&mut self, state: &mut FieldState) -> Result<(), DynamicsError> {
        if state.psi_up.len() != self.half_kin_up.len()
            || state.psi_down.len() != self.half_kin_up.len()
        {
            return Err(DynamicsError::Invalid(
                "state grid does not match the stepper's plan".into(),
            ));
        }
        let max_density = state
            .psi_up
            .iter()
            .chain(&state.psi_down)
            .map(|p| p.norm_sqr())
            .fold(0.0, f64::max);
        let phase = self.dt * self.coupling_scale * max_density;
        if phase > 0.05 {
            return Err(DynamicsError::Stability { phase });
        }
        self.half_kinetic(state);
        for i in 0..state.psi_up.len() {
            let ru = state.psi_up[i].norm_sqr();
            let rd = state.psi_down[i].norm_sqr();
            state.psi_up[i] *=
                Complex64::from_polar(1.0, -self.dt * (self.chi_up * ru + self.kappa_up * rd));
            state.psi_down[i] *=
                Complex64::from_polar(1.0, -self.dt * (self.chi_down * rd + self.kappa_down * ru));
        }
        self.half_kinetic(state);
        state.time += self.dt;
        Ok(())
    }
}

/// One Strang split step as a pure function (plans are rebuilt each call;
/// use a [`Stepper`] for long runs).
pub fn step(state: &FieldState, spec: &EvolutionSpec) -> Result<FieldState, DynamicsError> {
    let mut stepper = Stepper::new(spec, state.grid_points, state.box_length)?;
    let mut next = state.clone();
    stepper.step(&mut next)?;
    Ok(next)
}

/// Runs `spec.steps` split steps, recording the charge/spin densities of the
/// initial state and of every `record_every`-th step thereafter.
pub fn evolve(state: &FieldState, spec: &EvolutionSpec) -> Result<DensityTrace, DynamicsError> {
    let mut stepper = Stepper::new(spec, state.grid_points, state.box_length)?;
    let mut current = state.clone();
    let frames = spec.steps / spec.record_every + 1;
    let mut trace = DensityTrace {
        times: Vec::with_capacity(frames),
        zs: current.zs(),
        rho_charge: Vec::with_capacity(frames),
        rho_spin: Vec::with_capacity(frames),
    };
    let record = |s: &FieldState, trace: &mut DensityTrace| {
        let (rc, rs) = s.density_profiles();
        trace.times.push(s.time);
        trace.rho_charge.push(rc);
        trace.rho_spin.push(rs);
    };
    record(&current, &mut trace);
    for n in 1..=spec.steps {
        stepper.step(&mut current)?;
        if n % spec.record_every == 0 {
            record(&current, &mut trace);
        }
    }
    Ok(trace)
}

fn median(values: &[f64]) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    }
}

/// Measures the front speed of a density channel: in each frame after the
/// transient window (first 20% of frames discarded) the front is the
/// rightmost grid point where |δρ| exceeds half the frame's maximum
/// deviation from the background (the spatial median of the first frame);
/// the speed is the least-squares slope of front position against time.
pub fn front_velocity(trace: &DensityTrace, channel: Channel) -> Result<f64, DynamicsError> {
    let frames = match channel {
        Channel::Charge => &trace.rho_charge,
        Channel::Spin => &trace.rho_spin,
    };
    let n = frames.len();
    let start = (0.2 * n as f64).ceil() as usize;
    if n.saturating_sub(start) < 10 {
        return Err(DynamicsError::NoFront(format!(
            "need at least 10 frames after the 20% transient window, have {} of {n}",
            n.saturating_sub(start)
        )));
    }
    let background = median(&frames[0]);
    let mut points = Vec::with_capacity(n - start);
    for (frame, time) in frames.iter().zip(&trace.times).skip(start) {
        let dev: Vec<f64> = frame.iter().map(|r| (r - background).abs()).collect();
        let max = dev.iter().fold(0.0f64, |a, &b| a.max(b));
        if max < 1e-12 {
            return Err(DynamicsError::NoFront(
                "density deviation vanished (perturbation too small or diffused)".into(),
            ));
        }
        let threshold = 0.5 * max;
        let idx = dev
            .iter()
            .rposition(|&d| d >= threshold)
            .expect("max >= threshold guarantees a crossing");
        points.push((*time, trace.zs[idx]));
    }
    let tbar = points.iter().map(|p| p.0).sum::<f64>() / points.len() as f64;
    let xbar = points.iter().map(|p| p.1).sum::<f64>() / points.len() as f64;
    let num: f64 = points.iter().map(|(t, x)| (t - tbar) * (x - xbar)).sum();
    let den: f64 = points.iter().map(|(t, _)| (t - tbar).powi(2)).sum();
    if den == 0.0 {
        return Err(DynamicsError::NoFront("degenerate time axis".into()));
    }
    Ok(num / den)
}

/// Bogoliubov sound speeds c_± = √(ρ₀(χ ± κ)/m) predicted for the charge
/// and spin channels from the same per-equation coefficients the simulator
/// uses. Assumes species-symmetric parameters and reads the up species.
pub fn bogoliubov_speeds(eff: &EffectiveLiebLiniger) -> Result<(f64, f64), DynamicsError> {
    let charge_arg = eff.density_up * (eff.chi_up + eff.chi_cross_up) / eff.mass_up;
    let spin_arg = eff.density_up * (eff.chi_up - eff.chi_cross_up) / eff.mass_up;
    if charge_arg <= 0.0 || spin_arg <= 0.0 {
        return Err(DynamicsError::Invalid(format!(
            "imaginary mode speed: rho0*(chi ± kappa)/m = ({charge_arg:.3e}, {spin_arg:.3e}) \
             must both be positive"
        )));
    }
    Ok((charge_arg.sqrt(), spin_arg.sqrt()))
}

/// Phase advance of the fastest resolved mode per kinetic half-pair,
/// k_max²·dt/(2·min|m_s|). Values approaching π mean the splitting aliases
/// the background against the grid (the run destabilizes even when the
/// nonlinear-phase bound passes); returns a warning above π.
pub fn check_aliasing_phase(
    spec: &EvolutionSpec,
    grid_points: usize,
    box_length: f64,
) -> Option<String> {
    let k_max = std::f64::consts::PI * grid_points as f64 / box_length;
    let m = spec.eff.mass_up.abs().min(spec.eff.mass_down.abs());
    let phase = k_max * k_max * spec.dt / (2.0 * m);
    (phase > std::f64::consts::PI).then(|| {
        format!(
            "kinetic phase per step {phase:.2} rad exceeds pi; the grid will alias \
             (reduce dt or grid resolution)"
        )
    })
}
