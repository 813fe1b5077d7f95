//! Physical-parameter types and the derivation chain from laboratory optics
//! to the effective Lieb-Liniger model and its Luttinger-liquid description,
//! plus the interaction-regime and separation-condition checkers.
//!
//! Units: ħ = 1 throughout; rates in rad/time, densities in 1/length,
//! velocities in length/time for any consistent (length, time) pair.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

/// Default relative tolerance for the separation conditions
/// χ_↑ = χ_↓ and ρ_↑/m_↑ = ρ_↓/m_↓. Parameters are user-specified reals,
/// not measured data, so the tolerance is tight.
pub const DEFAULT_SEPARATION_TOL: f64 = 1e-6;

/// Atom-to-photon density ratio below which adiabatic elimination of the
/// atomic dynamics is rejected outright.
pub const ADIABATIC_MIN_RATIO: f64 = 1e2;
/// Ratio below which a validity warning is attached (the regime of interest
/// sits near 1e4).
pub const ADIABATIC_WARN_RATIO: f64 = 1e4;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamsError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("separation conditions violated: {0}")]
    NotSeparated(String),
    #[error("demixing instability: {0}")]
    Demixing(String),
    #[error("outside the repulsive Luttinger regime: {0}")]
    NonRepulsive(String),
}

/// Laboratory knobs of the two-polarization slow-light setup.
///
/// `optical_depth` and `cooperativity` are carried as metadata for reports
/// only; no formula linking them to `coupling_g`/`atom_density` is applied.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OpticalConfig {
    /// One-photon detunings Δ_↑, Δ_↓ (rad/time, nonzero).
    pub delta_up: f64,
    pub delta_down: f64,
    /// Intra-species two-photon detunings Δ_↑↑, Δ_↓↓ (rad/time, nonzero).
    pub delta_upup: f64,
    pub delta_downdown: f64,
    /// Inter-species detunings Δ_↑↓, Δ_↓↑ (rad/time, nonzero).
    pub delta_updown: f64,
    pub delta_downup: f64,
    /// Control Rabi frequencies Ω_↑, Ω_↓ (rad/time, > 0).
    pub omega_up: f64,
    pub omega_down: f64,
    /// Atom-field coupling g, shared by all transitions (rad/time, > 0).
    pub coupling_g: f64,
    /// Atomic line densities n_z^↑, n_z^↓ (1/length, > 0).
    pub atom_density_up: f64,
    pub atom_density_down: f64,
    /// Photon line densities ρ_{0,↑}, ρ_{0,↓} (1/length, > 0).
    pub photon_density_up: f64,
    pub photon_density_down: f64,
    /// Bare waveguide group velocity ν (length/time, > 0).
    pub waveguide_velocity: f64,
    /// Optical depth (dimensionless metadata, > 0).
    pub optical_depth: f64,
    /// Single-atom cooperativity η (dimensionless metadata, in (0, 1)).
    pub cooperativity: f64,
}

impl OpticalConfig {
    /// Checks all invariants; returns validity warnings on success and a
    /// diagnostic naming the offending field on failure.
    pub fn validate(&self) -> Result<Vec<String>, ParamsError> {
        let named = [
            ("delta_up", self.delta_up),
            ("delta_down", self.delta_down),
            ("delta_upup", self.delta_upup),
            ("delta_downdown", self.delta_downdown),
            ("delta_updown", self.delta_updown),
            ("delta_downup", self.delta_downup),
        ];
        for (name, v) in named {
            if !v.is_finite() || v == 0.0 {
                return Err(ParamsError::InvalidConfig(format!(
                    "{name} must be finite and nonzero, got {v}"
                )));
            }
        }
        let positive = [
            ("omega_up", self.omega_up),
            ("omega_down", self.omega_down),
            ("coupling_g", self.coupling_g),
            ("atom_density_up", self.atom_density_up),
            ("atom_density_down", self.atom_density_down),
            ("photon_density_up", self.photon_density_up),
            ("photon_density_down", self.photon_density_down),
            ("waveguide_velocity", self.waveguide_velocity),
            ("optical_depth", self.optical_depth),
        ];
        for (name, v) in positive {
            if !v.is_finite() || v <= 0.0 {
                return Err(ParamsError::InvalidConfig(format!(
                    "{name} must be finite and strictly positive, got {v}"
                )));
            }
        }
        if !(self.cooperativity > 0.0 && self.cooperativity < 1.0) {
            return Err(ParamsError::InvalidConfig(format!(
                "cooperativity must lie in (0, 1), got {}",
                self.cooperativity
            )));
        }
        let mut warnings = Vec::new();
        for (species, nz, nph) in [
            ("up", self.atom_density_up, self.photon_density_up),
            ("down", self.atom_density_down, self.photon_density_down),
        ] {
            let ratio = nz / nph;
            if ratio < ADIABATIC_MIN_RATIO {
                return Err(ParamsError::InvalidConfig(format!(
                    "atom/photon density ratio for species {species} is {ratio:.3e}; \
                     adiabatic elimination needs at least {ADIABATIC_MIN_RATIO:.0e}"
                )));
            }
            if ratio < ADIABATIC_WARN_RATIO {
                warnings.push(format!(
                    "species {species}: atom/photon density ratio {ratio:.3e} is below \
                     {ADIABATIC_WARN_RATIO:.0e}; adiabatic elimination is marginal"
                ));
            }
        }
        Ok(warnings)
    }
}

/// Effective Lieb-Liniger parameters of the polariton fluid.
///
/// `chi_cross_up`/`chi_cross_down` are the per-equation cross couplings
/// Γ_1D^s ν_s / Δ_{s s̄} that enter each species' equation of motion;
/// `chi_cross` is their sum, which is the coupling entering the
/// Hamiltonian/Luttinger map and the ratio r = χ_↑↓/χ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EffectiveLiebLiniger {
    /// Effective masses m_s (1/(length²·rad/time)); sign opposite to Δ_s.
    pub mass_up: f64,
    pub mass_down: f64,
    /// Intra-species couplings χ_s ((rad/time)·length); sign of Δ_ss.
    pub chi_up: f64,
    pub chi_down: f64,
    /// Per-equation cross couplings Γ_1D^s ν_s / Δ_{s s̄}.
    pub chi_cross_up: f64,
    pub chi_cross_down: f64,
    /// Summed cross coupling χ_↑↓ = Σ_s Γ_1D^s ν_s / Δ_{s s̄}.
    pub chi_cross: f64,
    /// Polariton group velocities ν_s (length/time, > 0).
    pub group_velocity_up: f64,
    pub group_velocity_down: f64,
    /// Waveguide decay rates Γ_1D^s = 4πg²/ν (rad/time, > 0).
    pub gamma_1d_up: f64,
    pub gamma_1d_down: f64,
    /// Fluid densities ρ_{0,s} (copied from the photon densities).
    pub density_up: f64,
    pub density_down: f64,
}

/// Luttinger-liquid parameters of the separated charge/spin sectors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LuttingerParameters {
    /// Dimensionless interaction strengths γ_s = m_s χ_s / ρ_{0,s}.
    pub gamma_up: f64,
    pub gamma_down: f64,
    /// Base sound velocity u = χ/√γ (length/time, > 0).
    pub u: f64,
    /// Base Luttinger parameter K = π/√γ.
    pub k_param: f64,
    /// Sector velocities u√(1 ± r).
    pub u_charge: f64,
    pub u_spin: f64,
    /// Sector Luttinger parameters K/√(1 ± r).
    pub k_charge: f64,
    pub k_spin: f64,
    /// Coupling ratio r = χ_↑↓/χ, in (−1, 1).
    pub ratio_cross: f64,
}

impl LuttingerParameters {
    /// Builds the full parameter set from the four sector values, inverting
    /// the √(1 ± r) relations. The four values must satisfy the algebraic
    /// identity u_charge·K_charge = u_spin·K_spin (relative 1e-9), which is
    /// exact for any set produced by the forward map.
    pub fn from_sector_values(
        u_charge: f64,
        u_spin: f64,
        k_charge: f64,
        k_spin: f64,
    ) -> Result<Self, ParamsError> {
        for (name, v) in [
            ("u_charge", u_charge),
            ("u_spin", u_spin),
            ("k_charge", k_charge),
            ("k_spin", k_spin),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(ParamsError::InvalidConfig(format!(
                    "{name} must be finite and positive, got {v}"
                )));
            }
        }
        let uk_c = u_charge * k_charge;
        let uk_s = u_spin * k_spin;
        if (uk_c - uk_s).abs() > 1e-9 * uk_c.abs().max(uk_s.abs()) {
            return Err(ParamsError::InvalidConfig(format!(
                "sector values violate u_charge*K_charge = u_spin*K_spin: \
                 {uk_c:.12e} vs {uk_s:.12e}"
            )));
        }
        let (r, gamma) = invert_luttinger(k_charge, k_spin)?;
        let k = k_charge * (1.0 + r).sqrt();
        let u = uk_c / k;
        Ok(Self {
            gamma_up: gamma,
            gamma_down: gamma,
            u,
            k_param: k,
            u_charge,
            u_spin,
            k_charge,
            k_spin,
            ratio_cross: r,
        })
    }
}

/// Outcome of a regime check. Each checker fills only the flag it evaluates
/// and leaves the other `None` (a repulsiveness check says nothing about
/// separation and vice versa).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegimeReport {
    /// Sign conditions for effective repulsion; `None` if not evaluated.
    pub repulsive: Option<bool>,
    /// Separation conditions within `tolerance`; `None` if not evaluated.
    pub separated: Option<bool>,
    /// Relative tolerance used for the separation residuals.
    pub tolerance: Option<f64>,
    /// Human-readable diagnostics for every failed clause.
    pub messages: Vec<String>,
    /// Named relative residuals (ordered map so serialized output is stable).
    pub residuals: BTreeMap<String, f64>,
}

/// Derives the effective Lieb-Liniger parameters from the optical knobs:
/// Γ_1D^s = 4πg²/ν, ν_s = νΩ_s²/(πg²n_z^s), m_s = −Γ_1D^s n_z^s/(4Δ_s ν_s),
/// χ_s = Γ_1D^s ν_s/Δ_ss, and cross couplings Γ_1D^s ν_s/Δ_{s s̄}.
pub fn derive_effective(cfg: &OpticalConfig) -> Result<EffectiveLiebLiniger, ParamsError> {
    cfg.validate()?;
    let g2pi = std::f64::consts::PI * cfg.coupling_g * cfg.coupling_g;
    let gamma_1d = 4.0 * g2pi / cfg.waveguide_velocity;

    let nu_up = cfg.waveguide_velocity * cfg.omega_up * cfg.omega_up / (g2pi * cfg.atom_density_up);
    let nu_down =
        cfg.waveguide_velocity * cfg.omega_down * cfg.omega_down / (g2pi * cfg.atom_density_down);

    let mass_up = -gamma_1d * cfg.atom_density_up / (4.0 * cfg.delta_up * nu_up);
    let mass_down = -gamma_1d * cfg.atom_density_down / (4.0 * cfg.delta_down * nu_down);

    let chi_up = gamma_1d * nu_up / cfg.delta_upup;
    let chi_down = gamma_1d * nu_down / cfg.delta_downdown;
    let chi_cross_up = gamma_1d * nu_up / cfg.delta_updown;
    let chi_cross_down = gamma_1d * nu_down / cfg.delta_downup;

    Ok(EffectiveLiebLiniger {
        mass_up,
        mass_down,
        chi_up,
        chi_down,
        chi_cross_up,
        chi_cross_down,
        chi_cross: chi_cross_up + chi_cross_down,
        group_velocity_up: nu_up,
        group_velocity_down: nu_down,
        gamma_1d_up: gamma_1d,
        gamma_1d_down: gamma_1d,
        density_up: cfg.photon_density_up,
        density_down: cfg.photon_density_down,
    })
}

/// Checks the sign conditions for effectively repulsive interactions:
/// Δ_sΔ_ss < 0 for each species, Δ_↑Δ_↓ > 0 and Δ_↑↑Δ_↓↓ > 0.
pub fn check_repulsive(cfg: &OpticalConfig) -> Result<RegimeReport, ParamsError> {
    cfg.validate()?;
    let mut messages = Vec::new();
    if cfg.delta_up * cfg.delta_upup >= 0.0 {
        messages.push(format!(
            "delta_up * delta_upup must be negative, got {:.6e}",
            cfg.delta_up * cfg.delta_upup
        ));
    }
    if cfg.delta_down * cfg.delta_downdown >= 0.0 {
        messages.push(format!(
            "delta_down * delta_downdown must be negative, got {:.6e}",
            cfg.delta_down * cfg.delta_downdown
        ));
    }
    if cfg.delta_up * cfg.delta_down <= 0.0 {
        messages.push(format!(
            "delta_up * delta_down must be positive, got {:.6e}",
            cfg.delta_up * cfg.delta_down
        ));
    }
    if cfg.delta_upup * cfg.delta_downdown <= 0.0 {
        messages.push(format!(
            "delta_upup * delta_downdown must be positive, got {:.6e}",
            cfg.delta_upup * cfg.delta_downdown
        ));
    }
    Ok(RegimeReport {
        repulsive: Some(messages.is_empty()),
        separated: None,
        tolerance: None,
        messages,
        residuals: BTreeMap::new(),
    })
}

/// Evaluates the spin-charge separation conditions χ_↑ = χ_↓ and
/// ρ_↑/m_↑ = ρ_↓/m_↓ as relative residuals against `tol`.
pub fn check_separation(eff: &EffectiveLiebLiniger, tol: f64) -> Result<RegimeReport, ParamsError> {
    if !(tol > 0.0) {
        return Err(ParamsError::InvalidConfig(format!(
            "separation tolerance must be positive, got {tol}"
        )));
    }
    let chi_res = (eff.chi_up - eff.chi_down).abs() / eff.chi_up.abs();
    let ratio_up = eff.density_up / eff.mass_up;
    let ratio_down = eff.density_down / eff.mass_down;
    let mass_res = (ratio_up - ratio_down).abs() * (eff.mass_up / eff.density_up).abs();

    let mut residuals = BTreeMap::new();
    residuals.insert("chi_mismatch".to_string(), chi_res);
    residuals.insert("density_mass_ratio_mismatch".to_string(), mass_res);

    let mut messages = Vec::new();
    if chi_res > tol {
        messages.push(format!(
            "chi_up and chi_down differ by relative {chi_res:.3e} (tolerance {tol:.1e})"
        ));
    }
    if mass_res > tol {
        messages.push(format!(
            "density/mass ratios differ by relative {mass_res:.3e} (tolerance {tol:.1e})"
        ));
    }
    Ok(RegimeReport {
        repulsive: None,
        separated: Some(messages.is_empty()),
        tolerance: Some(tol),
        messages,
        residuals,
    })
}

/// Maps the effective model onto Luttinger-liquid parameters:
/// γ_s = m_sχ_s/ρ_{0,s}, u = χ/√γ, K = π/√γ, and the sector splitting
/// u_{c,s} = u√(1 ± r), K_{c,s} = K/√(1 ± r) with r = χ_↑↓/χ.
///
/// The sector formulas are only defined under the separation conditions, so
/// asymmetry beyond [`DEFAULT_SEPARATION_TOL`] is an error, not an average;
/// χ and γ are then taken from the up species.
pub fn derive_luttinger(eff: &EffectiveLiebLiniger) -> Result<LuttingerParameters, ParamsError> {
    let sep = check_separation(eff, DEFAULT_SEPARATION_TOL)?;
    if sep.separated != Some(true) {
        return Err(ParamsError::NotSeparated(sep.messages.join("; ")));
    }
    let gamma_up = eff.mass_up * eff.chi_up / eff.density_up;
    let gamma_down = eff.mass_down * eff.chi_down / eff.density_down;
    if !(gamma_up > 0.0) {
        return Err(ParamsError::NonRepulsive(format!(
            "gamma = m*chi/rho must be positive, got {gamma_up:.6e}"
        )));
    }
    if !(eff.chi_up > 0.0) {
        return Err(ParamsError::NonRepulsive(format!(
            "chi must be positive for a real sound velocity u = chi/sqrt(gamma), got {:.6e}",
            eff.chi_up
        )));
    }
    let r = eff.chi_cross / eff.chi_up;
    if r.abs() >= 1.0 {
        return Err(ParamsError::Demixing(format!(
            "|chi_cross/chi| = {:.6} >= 1: the spin-sector velocity u*sqrt(1-r) would be \
             zero or imaginary (demixing instability)",
            r.abs()
        )));
    }
    let sqrt_gamma = gamma_up.sqrt();
    let u = eff.chi_up / sqrt_gamma;
    let k = std::f64::consts::PI / sqrt_gamma;
    let sp = (1.0 + r).sqrt();
    let sm = (1.0 - r).sqrt();
    Ok(LuttingerParameters {
        gamma_up,
        gamma_down,
        u,
        k_param: k,
        u_charge: u * sp,
        u_spin: u * sm,
        k_charge: k / sp,
        k_spin: k / sm,
        ratio_cross: r,
    })
}

/// Inverts the sector map: from (K_charge, K_spin) back to (r, γ).
/// K_charge/K_spin = √((1−r)/(1+r)) gives r = (1−ρ²)/(1+ρ²) with
/// ρ = K_charge/K_spin, then γ = (π/K)² with K = K_charge√(1+r).
pub fn invert_luttinger(k_charge: f64, k_spin: f64) -> Result<(f64, f64), ParamsError> {
    if !(k_charge > 0.0 && k_spin > 0.0) {
        return Err(ParamsError::InvalidConfig(format!(
            "sector Luttinger parameters must be positive, got K_charge = {k_charge}, \
             K_spin = {k_spin}"
        )));
    }
    let rho = k_charge / k_spin;
    let r = (1.0 - rho * rho) / (1.0 + rho * rho);
    let k = k_charge * (1.0 + r).sqrt();
    let gamma = (std::f64::consts::PI / k).powi(2);
    Ok((r, gamma))
}

/// Coefficient 2χ_↑↓ρ_0² of the spin-sector cosine term recorded in reports
/// (the term itself is never evolved). Uses the up-species density; the
/// separation conditions make the species densities interchangeable here.
pub fn sine_gordon_coefficient(eff: &EffectiveLiebLiniger) -> f64 {
    2.0 * eff.chi_cross * eff.density_up * eff.density_up
}
