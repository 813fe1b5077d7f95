//! Phase-field (bosonization) utilities: charge/spin sector rotation and
//! density reconstruction from the smooth phases.
//!
//! Fields live on a uniform periodic grid z_i = i·dz. The sector rotation
//! is the isometry x_{c,s} = (x_↑ ± x_↓)/√2 applied to both φ and θ.
//!
//! Density formulas: the harmonic expansion of a single species reads
//!
//!   ρ_s(z) = [ρ_{0,s} + (1/π)∂_zφ_s]·(1 + 2Σ_{m≥1} cos(m(2πρ_{0,s}z + 2φ_s)))
//!
//! and the sector form used by `reconstruct_densities` keeps the m = 0, 1
//! harmonics. The m = 1 interference term follows by matching
//! exp[i·2m(πρ_{0,s}z − φ_s)] + c.c. against cos[2k_F z − √2 φ_charge] with
//! equal backgrounds ρ_{0,↑} = ρ_{0,↓} = ρ₀/2, so k_F = πρ₀/2 and
//! φ_↑ ± φ_↓ = √2·φ_{charge,spin}. The two conventions differ in the sign
//! convention attached to ∂_zφ (single-species +, sector −); each is
//! reproduced exactly as published rather than reconciled.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BosonizeError {
    #[error("field length mismatch: {field} has {got} samples, expected {expected}")]
    LengthMismatch {
        field: &'static str,
        got: usize,
        expected: usize,
    },
    #[error("harmonic cutoff m_max = {0} unsupported here (only 0 and 1)")]
    UnsupportedMMax(usize),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
}

/// Species-basis phase fields (φ_s, θ_s) sampled on z_i = i·dz.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseFields {
    pub phi_up: Vec<f64>,
    pub phi_down: Vec<f64>,
    pub theta_up: Vec<f64>,
    pub theta_down: Vec<f64>,
    pub dz: f64,
}

/// Charge/spin-basis phase fields, x_{c,s} = (x_↑ ± x_↓)/√2.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorFields {
    pub phi_charge: Vec<f64>,
    pub phi_spin: Vec<f64>,
    pub theta_charge: Vec<f64>,
    pub theta_spin: Vec<f64>,
    pub dz: f64,
}

fn check_lengths(
    reference: usize,
    fields: [(&'static str, usize); 3],
) -> Result<(), BosonizeError> {
    for (field, got) in fields {
        if got != reference {
            return Err(BosonizeError::LengthMismatch {
                field,
                got,
                expected: reference,
            });
        }
    }
    Ok(())
}

fn check_dz(dz: f64) -> Result<(), BosonizeError> {
    if !(dz > 0.0) || !dz.is_finite() {
        return Err(BosonizeError::InvalidGrid(format!(
            "dz must be positive and finite, got {dz}"
        )));
    }
    Ok(())
}

const SQRT_HALF: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Rotates species fields into charge/spin sectors, (x_↑ ± x_↓)/√2.
pub fn to_sectors(fields: &PhaseFields) -> Result<SectorFields, BosonizeError> {
    check_dz(fields.dz)?;
    let n = fields.phi_up.len();
    check_lengths(
        n,
        [
            ("phi_down", fields.phi_down.len()),
            ("theta_up", fields.theta_up.len()),
            ("theta_down", fields.theta_down.len()),
        ],
    )?;
    let combine = |a: &[f64], b: &[f64], sign: f64| -> Vec<f64> {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x + sign * y) * SQRT_HALF)
            .collect()
    };
    Ok(SectorFields {
        phi_charge: combine(&fields.phi_up, &fields.phi_down, 1.0),
        phi_spin: combine(&fields.phi_up, &fields.phi_down, -1.0),
        theta_charge: combine(&fields.theta_up, &fields.theta_down, 1.0),
        theta_spin: combine(&fields.theta_up, &fields.theta_down, -1.0),
        dz: fields.dz,
    })
}

/// Inverse sector rotation, x_{↑,↓} = (x_c ± x_s)/√2.
pub fn from_sectors(sectors: &SectorFields) -> Result<PhaseFields, BosonizeError> {
    check_dz(sectors.dz)?;
    let n = sectors.phi_charge.len();
    check_lengths(
        n,
        [
            ("phi_spin", sectors.phi_spin.len()),
            ("theta_charge", sectors.theta_charge.len()),
            ("theta_spin", sectors.theta_spin.len()),
        ],
    )?;
    let combine = |a: &[f64], b: &[f64], sign: f64| -> Vec<f64> {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x + sign * y) * SQRT_HALF)
            .collect()
    };
    Ok(PhaseFields {
        phi_up: combine(&sectors.phi_charge, &sectors.phi_spin, 1.0),
        phi_down: combine(&sectors.phi_charge, &sectors.phi_spin, -1.0),
        theta_up: combine(&sectors.theta_charge, &sectors.theta_spin, 1.0),
        theta_down: combine(&sectors.theta_charge, &sectors.theta_spin, -1.0),
        dz: sectors.dz,
    })
}

/// Centered periodic finite difference, (f[i+1] − f[i−1])/(2 dz).
fn periodic_gradient(f: &[f64], dz: f64) -> Vec<f64> {
    let n = f.len();
    (0..n)
        .map(|i| {
            let next = f[(i + 1) % n];
            let prev = f[(i + n - 1) % n];
            (next - prev) / (2.0 * dz)
        })
        .collect()
}

/// Reconstructs (ρ_charge, ρ_spin) from sector phases up to harmonic
/// `m_max` ∈ {0, 1}:
///
///   ρ_charge = ρ₀ − (√2/π)∂_zφ_c + 2ρ₀ cos(2k_F z − √2 φ_c) cos(√2 φ_s)
///   ρ_spin   =    − (√2/π)∂_zφ_s + 2ρ₀ sin(2k_F z − √2 φ_c) sin(√2 φ_s)
///
/// with k_F = πρ₀/2 and `rho0` the total background density. The m = 1
/// terms are dropped for `m_max = 0`.
pub fn reconstruct_densities(
    sectors: &SectorFields,
    rho0: f64,
    m_max: usize,
) -> Result<(Vec<f64>, Vec<f64>), BosonizeError> {
    if m_max > 1 {
        return Err(BosonizeError::UnsupportedMMax(m_max));
    }
    check_dz(sectors.dz)?;
    let n = sectors.phi_charge.len();
    check_lengths(
        n,
        [
            ("phi_spin", sectors.phi_spin.len()),
            ("theta_charge", sectors.theta_charge.len()),
            ("theta_spin", sectors.theta_spin.len()),
        ],
    )?;
    let sqrt2 = std::f64::consts::SQRT_2;
    let inv_pi = std::f64::consts::FRAC_1_PI;
    let k_fermi = std::f64::consts::PI * rho0 / 2.0;
    let grad_c = periodic_gradient(&sectors.phi_charge, sectors.dz);
    let grad_s = periodic_gradient(&sectors.phi_spin, sectors.dz);
    let mut rho_charge = Vec::with_capacity(n);
    let mut rho_spin = Vec::with_capacity(n);
    for i in 0..n {
        let z = i as f64 * sectors.dz;
        let mut rc = rho0 - sqrt2 * inv_pi * grad_c[i];
        let mut rs = -sqrt2 * inv_pi * grad_s[i];
        if m_max == 1 {
            let arg = 2.0 * k_fermi * z - sqrt2 * sectors.phi_charge[i];
            let spin_arg = sqrt2 * sectors.phi_spin[i];
            rc += 2.0 * rho0 * arg.cos() * spin_arg.cos();
            rs += 2.0 * rho0 * arg.sin() * spin_arg.sin();
        }
        rho_charge.push(rc);
        rho_spin.push(rs);
    }
    Ok((rho_charge, rho_spin))
}

/// Harmonic expansion of one species' density from its φ field,
///
///   ρ_s(z) = [ρ_{0,s} + (1/π)∂_zφ]·(1 + 2Σ_{m=1}^{m_max} cos(m(2πρ_{0,s}z + 2φ)))
///
/// on z_i = i·dz. Any `m_max ≥ 0` is allowed here.
pub fn single_species_density(
    phi: &[f64],
    rho0_s: f64,
    dz: f64,
    m_max: usize,
) -> Result<Vec<f64>, BosonizeError> {
    check_dz(dz)?;
    let grad = periodic_gradient(phi, dz);
    let two_pi_rho = 2.0 * std::f64::consts::PI * rho0_s;
    Ok(phi
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            let z = i as f64 * dz;
            let smooth = rho0_s + grad[i] * std::f64::consts::FRAC_1_PI;
            let mut oscillation = 1.0;
            for m in 1..=m_max {
                oscillation += 2.0 * (m as f64 * (two_pi_rho * z + 2.0 * p)).cos();
            }
            smooth * oscillation
        })
        .collect())
}
