//! TOML run configuration: deserialization, defaulting, and the mapping
//! onto the library's request types.

use crate::CliError;
use sc_sep_core::dynamics::{Perturbation, PerturbationKind};
use sc_sep_core::params::{
    derive_effective, derive_luttinger, EffectiveLiebLiniger, LuttingerParameters, OpticalConfig,
};
use sc_sep_core::specfun::QuadratureSpec;
use sc_sep_core::spectral::SpectrumRequest;
use serde::Deserialize;
use std::path::Path;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// All physical values are in normalized units unless this is set to
    /// false, in which case `[output]` unit labels document the scales.
    /// The flag is echoed into every report.
    pub normalized_units: Option<bool>,
    pub optical: OpticalConfig,
    pub spectrum: Option<SpectrumSection>,
    pub evolution: Option<EvolutionSection>,
    pub output: Option<OutputSection>,
}

/// Spectral-grid inputs. The four sector values (u_charge, u_spin,
/// k_charge, k_spin) may be given explicitly — all four or none; when
/// absent they are derived from `[optical]`.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumSection {
    pub omega_min: f64,
    pub omega_max: f64,
    pub omega_steps: usize,
    pub q_min: f64,
    pub q_max: f64,
    pub q_steps: usize,
    /// Defaults to the up-species photon density.
    pub rho0: Option<f64>,
    /// Short-distance cutoff; defaults to 1 (normalized units).
    pub alpha: Option<f64>,
    pub u_charge: Option<f64>,
    pub u_spin: Option<f64>,
    pub k_charge: Option<f64>,
    pub k_spin: Option<f64>,
    pub quad: Option<QuadSection>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadSection {
    pub abs_tol: Option<f64>,
    pub rel_tol: Option<f64>,
    pub max_levels: Option<u32>,
    pub epsilon_branch: Option<f64>,
}

impl QuadSection {
    fn to_spec(self) -> QuadratureSpec {
        let d = QuadratureSpec::default();
        QuadratureSpec {
            abs_tol: self.abs_tol.unwrap_or(d.abs_tol),
            rel_tol: self.rel_tol.unwrap_or(d.rel_tol),
            max_levels: self.max_levels.unwrap_or(d.max_levels),
            epsilon_branch: self.epsilon_branch.unwrap_or(d.epsilon_branch),
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum KindSection {
    Charge,
    Spin,
    None,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvolutionSection {
    pub grid_points: usize,
    pub box_length: f64,
    pub dt: f64,
    pub steps: usize,
    pub record_every: usize,
    pub perturbation_kind: KindSection,
    /// Required for charge/spin perturbations; ignored for "none".
    pub amplitude: Option<f64>,
    pub width: Option<f64>,
    pub center: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub directory: Option<String>,
    /// Display-only unit labels copied into reports.
    pub length_unit: Option<String>,
    pub time_unit: Option<String>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::Config(format!("cannot read config {}: {e}", path.display()))
        })?;
        let cfg: RunConfig = toml::from_str(&text)
            .map_err(|e| CliError::Config(format!("invalid config {}: {e}", path.display())))?;
        cfg.optical.validate().map_err(CliError::from)?;
        Ok(cfg)
    }

    pub fn spectrum_section(&self) -> Result<&SpectrumSection, CliError> {
        self.spectrum
            .as_ref()
            .ok_or_else(|| CliError::Config("config has no [spectrum] section".into()))
    }

    pub fn evolution_section(&self) -> Result<&EvolutionSection, CliError> {
        self.evolution
            .as_ref()
            .ok_or_else(|| CliError::Config("config has no [evolution] section".into()))
    }

    /// Sector parameters for the spectral formula: explicit values if the
    /// config gives them, otherwise derived from the optics (which can fail
    /// with a regime error).
    pub fn luttinger(&self) -> Result<LuttingerParameters, CliError> {
        let s = self.spectrum_section()?;
        let explicit = [s.u_charge, s.u_spin, s.k_charge, s.k_spin];
        let given = explicit.iter().filter(|v| v.is_some()).count();
        match given {
            0 => {
                let eff = derive_effective(&self.optical)?;
                Ok(derive_luttinger(&eff)?)
            }
            4 => Ok(LuttingerParameters::from_sector_values(
                s.u_charge.unwrap(),
                s.u_spin.unwrap(),
                s.k_charge.unwrap(),
                s.k_spin.unwrap(),
            )?),
            _ => Err(CliError::Config(
                "u_charge, u_spin, k_charge, k_spin must be given all together or not at all"
                    .into(),
            )),
        }
    }

    pub fn spectrum_request(&self) -> Result<SpectrumRequest, CliError> {
        let s = self.spectrum_section()?;
        let req = SpectrumRequest {
            lutt: self.luttinger()?,
            rho0: s.rho0.unwrap_or(self.optical.photon_density_up),
            alpha: s.alpha.unwrap_or(1.0),
            omega_min: s.omega_min,
            omega_max: s.omega_max,
            omega_steps: s.omega_steps,
            q_min: s.q_min,
            q_max: s.q_max,
            q_steps: s.q_steps,
            quad: s.quad.map(QuadSection::to_spec).unwrap_or_default(),
        };
        req.validate()
            .map_err(|e| CliError::Config(e.to_string()))?;
        Ok(req)
    }

    pub fn effective(&self) -> Result<EffectiveLiebLiniger, CliError> {
        Ok(derive_effective(&self.optical)?)
    }

    pub fn perturbation(&self) -> Result<Perturbation, CliError> {
        let e = self.evolution_section()?;
        let kind = match e.perturbation_kind {
            KindSection::Charge => PerturbationKind::Charge,
            KindSection::Spin => PerturbationKind::Spin,
            KindSection::None => {
                return Ok(Perturbation {
                    kind: PerturbationKind::None,
                    amplitude: 0.0,
                    width: 1.0,
                    center: 0.0,
                })
            }
        };
        let need = |name: &str, v: Option<f64>| {
            v.ok_or_else(|| {
                CliError::Config(format!(
                    "evolution.{name} is required for perturbation_kind != \"none\""
                ))
            })
        };
        Ok(Perturbation {
            kind,
            amplitude: need("amplitude", e.amplitude)?,
            width: need("width", e.width)?,
            center: need("center", e.center)?,
        })
    }

    pub fn normalized_units(&self) -> bool {
        self.normalized_units.unwrap_or(true)
    }

    /// Output directory: the `--out` override, else `[output].directory`,
    /// else `./out`.
    pub fn out_dir(&self, cli_out: Option<&Path>) -> std::path::PathBuf {
        if let Some(p) = cli_out {
            return p.to_path_buf();
        }
        self.output
            .as_ref()
            .and_then(|o| o.directory.as_deref())
            .unwrap_or("out")
            .into()
    }
}
