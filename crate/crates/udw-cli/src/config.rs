//! Layered run configuration: defaults, then the TOML config file, then
//! command-line flags, each overriding the previous.
//!
//! The file mirrors the flag set under `[detector.a]`, `[detector.b]`,
//! `[geometry]`, `[sweep]` and `[quadrature]`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use udw_core::{
    Detector, PairGeometry, QuadratureSpec, QubitState, SpatialProfile, SwitchingFunction,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SwitchingKind {
    Gaussian,
    Delta,
}

/// Everything one detector needs, in units of detector A's Gaussian width.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DetectorConfig {
    pub omega_t: f64,
    pub lambda: f64,
    pub switching: SwitchingKind,
    /// Gaussian switching width (1.0 for detector A by unit choice).
    pub width_t: f64,
    /// Switching center (Gaussian) or instant (Dirac), relative to the
    /// placement center.
    pub center_t: f64,
    /// Dirac switching strength.
    pub eta: f64,
    /// Gaussian-ball profile width; `None` is a pointlike profile.
    pub ball_sigma: Option<f64>,
    /// Initial state magnitudes (normalized) and relative phase of the
    /// excited amplitude in radians.
    pub alpha: f64,
    pub beta: f64,
    pub beta_phase: f64,
}

impl Default for DetectorConfig {
    fn default() -> Self {
        DetectorConfig {
            omega_t: 10.0,
            lambda: 0.01,
            switching: SwitchingKind::Gaussian,
            width_t: 1.0,
            center_t: 0.0,
            eta: 1.0,
            ball_sigma: None,
            alpha: 1.0,
            beta: 0.0,
            beta_phase: 0.0,
        }
    }
}

impl DetectorConfig {
    pub fn build(&self) -> anyhow::Result<Detector> {
        let switching = match self.switching {
            SwitchingKind::Gaussian => SwitchingFunction::gaussian(self.center_t, self.width_t)?,
            SwitchingKind::Delta => SwitchingFunction::dirac(self.center_t, self.eta)?,
        };
        let profile = match self.ball_sigma {
            Some(s) => SpatialProfile::ball(s)?,
            None => SpatialProfile::point(),
        };
        let norm = (self.alpha * self.alpha + self.beta * self.beta).sqrt();
        if norm <= 0.0 || norm.is_nan() {
            anyhow::bail!("detector state amplitudes must not both vanish");
        }
        let state = QubitState::new(
            Complex64::new(self.alpha / norm, 0.0),
            Complex64::from_polar(self.beta / norm, self.beta_phase),
        )?;
        Ok(Detector::new(self.omega_t, self.lambda, switching, profile, state)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GeometryConfig {
    pub l_over_t: f64,
    /// Delay-mode placement; ignored when `theta` is set.
    pub t0_over_t: f64,
    /// Angle-mode placement in radians.
    pub theta: Option<f64>,
}

impl Default for GeometryConfig {
    fn default() -> Self {
        GeometryConfig {
            l_over_t: 10.0,
            t0_over_t: 0.0,
            theta: None,
        }
    }
}

impl GeometryConfig {
    pub fn build(&self) -> anyhow::Result<PairGeometry> {
        Ok(match self.theta {
            Some(theta) => PairGeometry::with_angle(self.l_over_t, theta)?,
            None => PairGeometry::with_delay(self.l_over_t, self.t0_over_t)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    pub window_sigmas: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        let q = QuadratureSpec::default();
        QuadratureConfig {
            abs_tol: q.abs_tol,
            rel_tol: q.rel_tol,
            max_subdivisions: q.max_subdivisions,
            window_sigmas: q.integration_window_sigmas,
        }
    }
}

impl QuadratureConfig {
    pub fn build(&self) -> QuadratureSpec {
        QuadratureSpec {
            abs_tol: self.abs_tol,
            rel_tol: self.rel_tol,
            max_subdivisions: self.max_subdivisions,
            integration_window_sigmas: self.window_sigmas,
        }
    }
}

/// Sweep section of the config file (axis grid and outputs live on the
/// command line or in the plan).
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub axis: Option<String>,
    pub min: Option<f64>,
    pub max: Option<f64>,
    pub steps: Option<usize>,
    pub models: Option<Vec<String>>,
    pub observable: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DetectorPair {
    pub a: DetectorConfig,
    pub b: DetectorConfig,
}

/// Full layered configuration.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub detector: DetectorPair,
    pub geometry: GeometryConfig,
    pub quadrature: QuadratureConfig,
    pub sweep: SweepConfig,
}

impl Config {
    pub fn from_toml(text: &str) -> anyhow::Result<Config> {
        Ok(toml::from_str(text)?)
    }

    pub fn load(path: &std::path::Path) -> anyhow::Result<Config> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| anyhow::anyhow!("cannot read config {}: {e}", path.display()))?;
        Config::from_toml(&text)
    }

    pub fn build(
        &self,
    ) -> anyhow::Result<(Detector, Detector, PairGeometry, QuadratureSpec)> {
        Ok((
            self.detector.a.build()?,
            self.detector.b.build()?,
            self.geometry.build()?,
            self.quadrature.build(),
        ))
    }
}
