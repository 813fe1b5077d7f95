//! Subcommand implementations. Each command validates its inputs fully,
//! computes everything, and only then writes output files, so a failed run
//! never leaves partial results behind (the one exception: `params` writes
//! its report before signalling a regime failure, since the report *is*
//! the diagnostic).

use crate::config::{KindSection, RunConfig};
use crate::output::{csv_text, ensure_dir, fmt_f64, trace_csv, write_json};
use crate::CliError;
use sc_sep_core::dynamics::{
    bogoliubov_speeds, check_aliasing_phase, evolve, front_velocity, init_state, Channel,
    EvolutionSpec,
};
use sc_sep_core::params::{
    check_repulsive, check_separation, derive_luttinger, sine_gordon_coefficient,
    EffectiveLiebLiniger, LuttingerParameters, ParamsError, RegimeReport,
    DEFAULT_SEPARATION_TOL,
};
use sc_sep_core::spectral::{
    density_spectrum_grid, extract_peaks, fit_through_origin, PeakSet, SpectrumRequest,
};
use serde::Serialize;
use std::path::Path;

/// Display-only unit labels copied verbatim from `[output]`.
#[derive(Serialize)]
struct UnitLabels {
    length: Option<String>,
    time: Option<String>,
}

fn unit_labels(cfg: &RunConfig) -> Option<UnitLabels> {
    let o = cfg.output.as_ref()?;
    if o.length_unit.is_none() && o.time_unit.is_none() {
        return None;
    }
    Some(UnitLabels {
        length: o.length_unit.clone(),
        time: o.time_unit.clone(),
    })
}

#[derive(Serialize)]
struct ParamsReport {
    effective: EffectiveLiebLiniger,
    luttinger: Option<LuttingerParameters>,
    luttinger_error: Option<String>,
    repulsive_report: RegimeReport,
    separation_report: RegimeReport,
    sine_gordon_coefficient: f64,
    normalized_units: bool,
    units: Option<UnitLabels>,
    warnings: Vec<String>,
}

pub fn run_params(cfg: &RunConfig, out: &Path) -> Result<(), CliError> {
    let warnings = cfg.optical.validate()?;
    let eff = cfg.effective()?;
    let repulsive_report = check_repulsive(&cfg.optical)?;
    let separation_report = check_separation(&eff, DEFAULT_SEPARATION_TOL)?;
    let (luttinger, luttinger_error) = match derive_luttinger(&eff) {
        Ok(l) => (Some(l), None),
        Err(e @ (ParamsError::NotSeparated(_)
        | ParamsError::Demixing(_)
        | ParamsError::NonRepulsive(_))) => (None, Some(e.to_string())),
        Err(e) => return Err(e.into()),
    };
    let report = ParamsReport {
        effective: eff,
        luttinger,
        luttinger_error,
        repulsive_report,
        separation_report,
        sine_gordon_coefficient: sine_gordon_coefficient(&eff),
        normalized_units: cfg.normalized_units(),
        units: unit_labels(cfg),
        warnings,
    };

    ensure_dir(out)?;
    write_json(&out.join("report.json"), &report)?;

    for w in &report.warnings {
        eprintln!("warning: {w}");
    }

    // Regime failures exit 2, but only after the report file is on disk:
    // the numbers are the diagnostic. The message repeats every violated
    // clause (sign rules, separation residuals, demixing).
    let mut failures: Vec<&str> = Vec::new();
    if report.repulsive_report.repulsive == Some(false) {
        failures.extend(report.repulsive_report.messages.iter().map(String::as_str));
    }
    if report.separation_report.separated == Some(false) {
        failures.extend(report.separation_report.messages.iter().map(String::as_str));
    }
    if let Some(e) = &report.luttinger_error {
        if !failures.iter().any(|f| e.contains(f)) {
            failures.push(e);
        }
    }
    if !failures.is_empty() {
        return Err(CliError::Regime(format!(
            "{} (full report in {})",
            failures.join("; "),
            out.join("report.json").display()
        )));
    }

    let l = report.luttinger.expect("regime checks passed");
    println!(
        "u_charge = {}  K_charge = {}",
        fmt_f64(l.u_charge),
        fmt_f64(l.k_charge)
    );
    println!(
        "u_spin   = {}  K_spin   = {}",
        fmt_f64(l.u_spin),
        fmt_f64(l.k_spin)
    );
    println!("report written to {}", out.join("report.json").display());
    Ok(())
}

#[derive(Serialize)]
struct SpectrumMeta {
    request: SpectrumRequest,
    omega_count: usize,
    q_count: usize,
    /// Grid points whose Appell argument fell on the branch cut and was
    /// displaced by +iε.
    on_cut_points: usize,
    normalized_units: bool,
}

pub fn run_spectrum(cfg: &RunConfig, out: &Path) -> Result<(), CliError> {
    let req = cfg.spectrum_request()?;
    let grid = density_spectrum_grid(&req)?;

    let mut rows = Vec::with_capacity(grid.qs.len() * grid.omegas.len());
    for (iq, &q) in grid.qs.iter().enumerate() {
        for (iw, &w) in grid.omegas.iter().enumerate() {
            let d = grid.value(iq, iw);
            rows.push(vec![
                fmt_f64(w),
                fmt_f64(q),
                fmt_f64(d.re),
                fmt_f64(d.im),
                fmt_f64(d.norm()),
            ]);
        }
    }
    let csv = csv_text(&["omega", "q", "re", "im", "abs"], rows.into_iter());
    let meta = SpectrumMeta {
        request: req,
        omega_count: grid.omegas.len(),
        q_count: grid.qs.len(),
        on_cut_points: grid.branch_offsets.iter().filter(|o| o.is_some()).count(),
        normalized_units: cfg.normalized_units(),
    };

    ensure_dir(out)?;
    crate::output::write_text(&out.join("spectrum.csv"), &csv)?;
    write_json(&out.join("spectrum_meta.json"), &meta)?;
    println!(
        "spectrum: {} x {} points written to {}",
        meta.omega_count,
        meta.q_count,
        out.join("spectrum.csv").display()
    );
    Ok(())
}

#[derive(Serialize)]
struct PeaksReport {
    peaks: Vec<PeakSet>,
    /// Through-origin fits ω = u·q, present when at least 3 momenta were
    /// requested.
    u_spin_fit: Option<f64>,
    u_charge_fit: Option<f64>,
}

pub fn run_peaks(cfg: &RunConfig, out: &Path, q_list: &[f64]) -> Result<(), CliError> {
    let req = cfg.spectrum_request()?;
    let qs: Vec<f64> = if q_list.is_empty() {
        // No --q: take the midpoint of the configured momentum range.
        vec![0.5 * (req.q_min + req.q_max)]
    } else {
        q_list.to_vec()
    };
    if qs.iter().any(|q| !q.is_finite() || *q == 0.0) {
        return Err(CliError::Config("--q values must be finite and nonzero".into()));
    }

    let mut peaks = Vec::with_capacity(qs.len());
    for &q in &qs {
        let col_req = SpectrumRequest {
            q_min: q,
            q_max: q,
            q_steps: 1,
            ..req
        };
        col_req
            .validate()
            .map_err(|e| CliError::Config(e.to_string()))?;
        let grid = density_spectrum_grid(&col_req)?;
        peaks.push(extract_peaks(&grid, q)?);
    }
    let (u_spin_fit, u_charge_fit) = if qs.len() >= 3 {
        let spin: Vec<(f64, f64)> = peaks.iter().map(|p| (p.q, p.peak_omegas[0])).collect();
        let charge: Vec<(f64, f64)> = peaks.iter().map(|p| (p.q, p.peak_omegas[1])).collect();
        (
            Some(fit_through_origin(&spin)),
            Some(fit_through_origin(&charge)),
        )
    } else {
        (None, None)
    };
    let report = PeaksReport {
        peaks,
        u_spin_fit,
        u_charge_fit,
    };

    ensure_dir(out)?;
    write_json(&out.join("peaks.json"), &report)?;
    for p in &report.peaks {
        println!(
            "q = {}: spin peak at omega = {}, charge peak at omega = {}",
            fmt_f64(p.q),
            fmt_f64(p.peak_omegas[0]),
            fmt_f64(p.peak_omegas[1])
        );
    }
    if let (Some(us), Some(uc)) = (report.u_spin_fit, report.u_charge_fit) {
        println!("fitted u_spin = {}, u_charge = {}", fmt_f64(us), fmt_f64(uc));
    }
    Ok(())
}

#[derive(Serialize)]
struct EvolveSummary {
    perturbation_kind: &'static str,
    grid_points: usize,
    box_length: f64,
    dt: f64,
    steps: usize,
    frames: usize,
    /// Front speed fitted from the perturbed channel; absent for an
    /// unperturbed run.
    measured_front_velocity: Option<f64>,
    predicted_charge_speed: Option<f64>,
    predicted_spin_speed: Option<f64>,
    prediction_error: Option<String>,
    /// measured / predicted for the perturbed channel.
    velocity_ratio: Option<f64>,
    norm_drift_up: f64,
    norm_drift_down: f64,
    normalized_units: bool,
    units: Option<UnitLabels>,
    warnings: Vec<String>,
}

pub fn run_evolve(cfg: &RunConfig, out: &Path) -> Result<(), CliError> {
    let e = *cfg.evolution_section()?;
    let eff: EffectiveLiebLiniger = cfg.effective()?;
    let perturbation = cfg.perturbation()?;

    let (state, mut warnings) = init_state(
        eff.density_up,
        eff.density_down,
        &perturbation,
        e.grid_points,
        e.box_length,
    )?;
    let spec = EvolutionSpec {
        dt: e.dt,
        steps: e.steps,
        eff,
        record_every: e.record_every,
    };
    if let Some(w) = check_aliasing_phase(&spec, e.grid_points, e.box_length) {
        warnings.push(w);
    }

    let trace = evolve(&state, &spec)?;

    // Per-species norms ∫ρ_s dz recovered from the recorded sector
    // densities: ρ_↑/↓ = (ρ_charge ± ρ_spin)/2.
    let dz = state.dz();
    let species_norms = |frame: usize| -> (f64, f64) {
        let (mut up, mut down) = (0.0, 0.0);
        for (c, s) in trace.rho_charge[frame].iter().zip(&trace.rho_spin[frame]) {
            up += 0.5 * (c + s) * dz;
            down += 0.5 * (c - s) * dz;
        }
        (up, down)
    };
    let last = trace.times.len() - 1;
    let (up0, down0) = species_norms(0);
    let (up1, down1) = species_norms(last);
    let drift = |n0: f64, n1: f64| if n0 > 0.0 { ((n1 - n0) / n0).abs() } else { 0.0 };

    let (predicted_charge_speed, predicted_spin_speed, prediction_error) =
        match bogoliubov_speeds(&eff) {
            Ok((c, s)) => (Some(c), Some(s), None),
            Err(err) => (None, None, Some(err.to_string())),
        };
    let (kind_name, channel, predicted) = match e.perturbation_kind {
        KindSection::Charge => ("charge", Some(Channel::Charge), predicted_charge_speed),
        KindSection::Spin => ("spin", Some(Channel::Spin), predicted_spin_speed),
        KindSection::None => ("none", None, None),
    };
    let measured = match channel {
        Some(ch) => Some(front_velocity(&trace, ch)?),
        None => None,
    };
    let summary = EvolveSummary {
        perturbation_kind: kind_name,
        grid_points: e.grid_points,
        box_length: e.box_length,
        dt: e.dt,
        steps: e.steps,
        frames: trace.times.len(),
        measured_front_velocity: measured,
        predicted_charge_speed,
        predicted_spin_speed,
        prediction_error,
        velocity_ratio: match (measured, predicted) {
            (Some(m), Some(p)) if p != 0.0 => Some(m / p),
            _ => None,
        },
        norm_drift_up: drift(up0, up1),
        norm_drift_down: drift(down0, down1),
        normalized_units: cfg.normalized_units(),
        units: unit_labels(cfg),
        warnings,
    };

    ensure_dir(out)?;
    crate::output::write_text(
        &out.join("trace_charge.csv"),
        &trace_csv(&trace.times, &trace.zs, &trace.rho_charge),
    )?;
    crate::output::write_text(
        &out.join("trace_spin.csv"),
        &trace_csv(&trace.times, &trace.zs, &trace.rho_spin),
    )?;
    write_json(&out.join("summary.json"), &summary)?;

    for w in &summary.warnings {
        eprintln!("warning: {w}");
    }
    println!(
        "evolved {} steps, {} frames written to {}",
        e.steps,
        summary.frames,
        out.display()
    );
    if let (Some(m), Some(p)) = (measured, predicted) {
        println!(
            "front velocity: measured {} vs predicted {}",
            fmt_f64(m),
            fmt_f64(p)
        );
    }
    Ok(())
}
