use approx::assert_relative_eq;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sc_sep_core::bosonize::{
    from_sectors, reconstruct_densities, single_species_density, to_sectors, BosonizeError,
    PhaseFields, SectorFields,
};

const N: usize = 256;
const DZ: f64 = 0.25;

/// Smooth periodic field from a few random harmonics.
fn random_field(rng: &mut ChaCha8Rng) -> Vec<f64> {
    let l = N as f64 * DZ;
    let coeffs: Vec<(f64, f64, f64)> = (1..=4)
        .map(|m| {
            (
                m as f64 * 2.0 * std::f64::consts::PI / l,
                rng.gen_range(-1.0..1.0),
                rng.gen_range(0.0..std::f64::consts::TAU),
            )
        })
        .collect();
    (0..N)
        .map(|i| {
            let z = i as f64 * DZ;
            coeffs.iter().map(|(k, a, p)| a * (k * z + p).sin()).sum()
        })
        .collect()
}

fn random_phase_fields(seed: u64) -> PhaseFields {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    PhaseFields {
        phi_up: random_field(&mut rng),
        phi_down: random_field(&mut rng),
        theta_up: random_field(&mut rng),
        theta_down: random_field(&mut rng),
        dz: DZ,
    }
}

fn constant_sectors(phi_charge: f64, phi_spin: f64) -> SectorFields {
    SectorFields {
        phi_charge: vec![phi_charge; N],
        phi_spin: vec![phi_spin; N],
        theta_charge: vec![0.0; N],
        theta_spin: vec![0.0; N],
        dz: DZ,
    }
}

#[test]
fn sector_rotation_round_trips() {
    for seed in 0..20 {
        let fields = random_phase_fields(seed);
        let sectors = to_sectors(&fields).unwrap();
        let back = from_sectors(&sectors).unwrap();
        for (a, b) in [
            (&fields.phi_up, &back.phi_up),
            (&fields.phi_down, &back.phi_down),
            (&fields.theta_up, &back.theta_up),
            (&fields.theta_down, &back.theta_down),
        ] {
            for (x, y) in a.iter().zip(b) {
                assert_relative_eq!(x, y, max_relative = 1e-14, epsilon = 1e-14);
            }
        }
    }
}

#[test]
fn sector_rotation_is_an_isometry() {
    let fields = random_phase_fields(7);
    let sectors = to_sectors(&fields).unwrap();
    let sq = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>();
    assert_relative_eq!(
        sq(&fields.phi_up) + sq(&fields.phi_down),
        sq(&sectors.phi_charge) + sq(&sectors.phi_spin),
        max_relative = 1e-12
    );
    assert_relative_eq!(
        sq(&fields.theta_up) + sq(&fields.theta_down),
        sq(&sectors.theta_charge) + sq(&sectors.theta_spin),
        max_relative = 1e-12
    );
}

#[test]
fn quiet_fields_give_pure_friedel_oscillations() {
    // φ ≡ 0 keeps only the background and the 2k_F interference term.
    let sectors = constant_sectors(0.0, 0.0);
    let rho0 = 0.5;
    let k_f = std::f64::consts::PI * rho0 / 2.0;
    let (rc, rs) = reconstruct_densities(&sectors, rho0, 1).unwrap();
    for (i, (c, s)) in rc.iter().zip(&rs).enumerate() {
        let z = i as f64 * DZ;
        assert_relative_eq!(
            *c,
            rho0 * (1.0 + 2.0 * (2.0 * k_f * z).cos()),
            max_relative = 1e-12,
            epsilon = 1e-12
        );
        assert!(s.abs() < 1e-12);
    }
    // m_max = 0 drops the oscillation entirely.
    let (rc, rs) = reconstruct_densities(&sectors, rho0, 0).unwrap();
    for (c, s) in rc.iter().zip(&rs) {
        assert_relative_eq!(*c, rho0, max_relative = 1e-14);
        assert!(s.abs() < 1e-14);
    }
}

#[test]
fn constant_spin_phase_moves_weight_into_the_spin_channel() {
    // √2·φ_spin = π/2 turns the charge oscillation off (cos → 0) and the
    // spin oscillation fully on (sin → 1).
    let phi_spin = std::f64::consts::PI / (2.0 * std::f64::consts::SQRT_2);
    let sectors = constant_sectors(0.0, phi_spin);
    let rho0 = 0.5;
    let k_f = std::f64::consts::PI * rho0 / 2.0;
    let (rc, rs) = reconstruct_densities(&sectors, rho0, 1).unwrap();
    for (i, (c, s)) in rc.iter().zip(&rs).enumerate() {
        let z = i as f64 * DZ;
        assert_relative_eq!(*c, rho0, max_relative = 1e-10, epsilon = 1e-12);
        assert_relative_eq!(
            *s,
            2.0 * rho0 * (2.0 * k_f * z).sin(),
            max_relative = 1e-10,
            epsilon = 1e-12
        );
    }
}

#[test]
fn linear_charge_phase_shifts_the_smooth_density()
{
    // ∂_zφ_charge = σ adds −√2σ/π to ρ_charge. The periodic centered
    // difference sees the ramp's wrap jump at the two boundary points, so
    // only interior points are checked.
    let sigma = 0.3;
    let mut sectors = constant_sectors(0.0, 0.0);
    sectors.phi_charge = (0..N).map(|i| sigma * i as f64 * DZ).collect();
    let rho0 = 0.5;
    let (rc, _) = reconstruct_densities(&sectors, rho0, 0).unwrap();
    let want = rho0 - std::f64::consts::SQRT_2 * sigma / std::f64::consts::PI;
    for c in &rc[1..N - 1] {
        assert_relative_eq!(*c, want, max_relative = 1e-12);
    }
}

#[test]
fn friedel_oscillation_averages_out() {
    // ρ₀ = 1/2 on this grid gives a 16-sample oscillation period, 16 full
    // periods per box: the mean density must come back to ρ₀.
    let sectors = constant_sectors(0.0, 0.0);
    let (rc, _) = reconstruct_densities(&sectors, 0.5, 1).unwrap();
    let mean = rc.iter().sum::<f64>() / N as f64;
    assert_relative_eq!(mean, 0.5, max_relative = 1e-12);
}

#[test]
fn single_species_harmonics() {
    let rho0 = 0.5;
    // Constant phase, no oscillation requested: flat background.
    let flat = single_species_density(&vec![0.7; N], rho0, DZ, 0).unwrap();
    for v in &flat {
        assert_relative_eq!(*v, rho0, max_relative = 1e-14);
    }
    // Linear phase tilts the smooth part by +σ/π.
    let sigma = 0.3;
    let ramp: Vec<f64> = (0..N).map(|i| sigma * i as f64 * DZ).collect();
    let tilted = single_species_density(&ramp, rho0, DZ, 0).unwrap();
    let want = rho0 + sigma / std::f64::consts::PI;
    for v in &tilted[1..N - 1] {
        assert_relative_eq!(*v, want, max_relative = 1e-12);
    }
    // Zero phase with two harmonics kept.
    let two = single_species_density(&vec![0.0; N], rho0, DZ, 2).unwrap();
    for (i, v) in two.iter().enumerate() {
        let z = i as f64 * DZ;
        let arg = 2.0 * std::f64::consts::PI * rho0 * z;
        let want = rho0 * (1.0 + 2.0 * arg.cos() + 2.0 * (2.0 * arg).cos());
        assert_relative_eq!(*v, want, max_relative = 1e-11, epsilon = 1e-12);
    }
}

#[test]
fn length_mismatches_are_reported_by_field() {
    let mut fields = random_phase_fields(3);
    fields.theta_down.pop();
    match to_sectors(&fields) {
        Err(BosonizeError::LengthMismatch { field, got, expected }) => {
            assert_eq!(field, "theta_down");
            assert_eq!(got, N - 1);
            assert_eq!(expected, N);
        }
        other => panic!("expected LengthMismatch, got {other:?}"),
    }
    let mut sectors = constant_sectors(0.0, 0.0);
    sectors.phi_spin.truncate(10);
    assert!(matches!(
        from_sectors(&sectors),
        Err(BosonizeError::LengthMismatch { .. })
    ));
}

#[test]
fn unsupported_cutoffs_and_grids_are_errors() {
    let sectors = constant_sectors(0.0, 0.0);
    assert!(matches!(
        reconstruct_densities(&sectors, 0.5, 2),
        Err(BosonizeError::UnsupportedMMax(2))
    ));
    let mut bad = constant_sectors(0.0, 0.0);
    bad.dz = 0.0;
    assert!(matches!(
        reconstruct_densities(&bad, 0.5, 1),
        Err(BosonizeError::InvalidGrid(_))
    ));
    assert!(matches!(
        single_species_density(&[0.0; 8], 0.5, -1.0, 0),
        Err(BosonizeError::InvalidGrid(_))
    ));
}
