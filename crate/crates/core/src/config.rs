//! Run configuration, read from TOML.
//!
//! Every field has a default, so an empty file (or no file) reproduces the
//! standard figure parameters. Unknown keys are rejected to catch typos.

use serde::{Deserialize, Serialize};

use crate::numerics::QuadratureSpec;
use crate::units::{MaterialModel, ModelKind};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MaterialConfig {
    pub kind: ModelKind,
    /// Scattering rate γ/Ω (the reference value when a rate law is set).
    pub gamma: f64,
    /// Exponent n of `γ(T) = γ₀ (T/T₀)ⁿ`; absent means a fixed rate.
    pub rate_exponent: Option<u32>,
    /// T₀ of the rate law, in units of ħΩ/k_B.
    pub t_ref: f64,
}

impl Default for MaterialConfig {
    fn default() -> Self {
        Self {
            kind: ModelKind::Drude,
            gamma: 0.08,
            rate_exponent: None,
            t_ref: 0.01,
        }
    }
}

impl MaterialConfig {
    pub fn model(&self) -> Result<MaterialModel> {
        match (self.kind, self.rate_exponent) {
            (ModelKind::Plasma, _) => Ok(MaterialModel::plasma()),
            (ModelKind::Drude, None) => MaterialModel::drude(self.gamma),
            (ModelKind::Drude, Some(n)) => {
                MaterialModel::perfect_crystal(self.gamma, self.t_ref, n)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_refinements: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        let q = QuadratureSpec::figure();
        Self {
            rel_tol: q.rel_tol,
            abs_tol: q.abs_tol,
            max_refinements: q.max_refinements,
        }
    }
}

impl QuadratureConfig {
    pub fn spec(&self) -> Result<QuadratureSpec> {
        let q = QuadratureSpec {
            rel_tol: self.rel_tol,
            abs_tol: self.abs_tol,
            max_refinements: self.max_refinements,
            ..QuadratureSpec::default()
        };
        q.validate()?;
        Ok(q)
    }
}

/// Fig. 1: T = 0 pressures against L/λ_p.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Fig1Config {
    pub gamma: f64,
    /// Λ/γ.
    pub cutoff_factor: f64,
    /// Range of L/λ_p.
    pub l_min: f64,
    pub l_max: f64,
    pub points: usize,
}

impl Default for Fig1Config {
    fn default() -> Self {
        Self {
            gamma: 0.08,
            cutoff_factor: 5.0,
            l_min: 1e-3,
            l_max: 1e3,
            points: 61,
        }
    }
}

/// Fig. 2: eddy and full TE mode densities against ω/ξ_L.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Fig2Config {
    pub gamma: f64,
    /// L/λ_p.
    pub separation: f64,
    /// Range of ω/ξ_L.
    pub w_min: f64,
    pub w_max: f64,
    pub points: usize,
}

impl Default for Fig2Config {
    fn default() -> Self {
        Self {
            gamma: 1e-3,
            separation: 10.0,
            w_min: 1e-2,
            w_max: 1e3,
            points: 51,
        }
    }
}

/// Fig. 3: entropy against T/ξ_L at a few separations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Fig3Config {
    pub gamma: f64,
    /// Separations L/λ.
    pub separations: Vec<f64>,
    /// Range of T/ξ_L.
    pub t_min: f64,
    pub t_max: f64,
    pub points: usize,
}

impl Default for Fig3Config {
    fn default() -> Self {
        Self {
            gamma: 0.08,
            separations: vec![1.0, 10.0, 100.0],
            t_min: 1e-3,
            t_max: 1e3,
            points: 49,
        }
    }
}

/// Fig. 4: thermal pressures against L/λ at fixed temperatures.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Fig4Config {
    pub gamma: f64,
    /// Temperatures in units of ħΩ/k_B.
    pub temperatures: Vec<f64>,
    /// Range of L/λ.
    pub l_min: f64,
    pub l_max: f64,
    pub points: usize,
}

impl Default for Fig4Config {
    fn default() -> Self {
        Self {
            gamma: 0.08,
            temperatures: vec![0.003, 0.03],
            l_min: 0.1,
            l_max: 100.0,
            points: 31,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub material: MaterialConfig,
    pub quadrature: QuadratureConfig,
    pub fig1: Fig1Config,
    pub fig2: Fig2Config,
    pub fig3: Fig3Config,
    pub fig4: Fig4Config,
}

impl Config {
    pub fn from_toml(text: &str) -> Result<Self> {
        let c: Config = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config always serializes")
    }

    pub fn validate(&self) -> Result<()> {
        self.material.model()?;
        self.quadrature.spec()?;
        let ranges = [
            ("fig1", self.fig1.l_min, self.fig1.l_max, self.fig1.points),
            ("fig2", self.fig2.w_min, self.fig2.w_max, self.fig2.points),
            ("fig3", self.fig3.t_min, self.fig3.t_max, self.fig3.points),
            ("fig4", self.fig4.l_min, self.fig4.l_max, self.fig4.points),
        ];
        for (name, lo, hi, n) in ranges {
            if !(lo > 0.0 && hi > lo && hi.is_finite()) || n < 2 {
                return Err(Error::Config(format!(
                    "{name}: need 0 < min < max and at least 2 points"
                )));
            }
        }
        for g in [
            self.fig1.gamma,
            self.fig2.gamma,
            self.fig3.gamma,
            self.fig4.gamma,
        ] {
            MaterialModel::drude(g)?;
        }
        if !(self.fig1.cutoff_factor >= 1.0) {
            return Err(Error::Config("fig1.cutoff_factor must be >= 1".into()));
        }
        if !(self.fig2.separation > 0.0) {
            return Err(Error::Config("fig2.separation must be positive".into()));
        }
        if self.fig3.separations.is_empty() || self.fig3.separations.iter().any(|&l| !(l > 0.0)) {
            return Err(Error::Config(
                "fig3.separations must be positive and non-empty".into(),
            ));
        }
        if self.fig4.temperatures.is_empty() || self.fig4.temperatures.iter().any(|&t| !(t > 0.0)) {
            return Err(Error::Config(
                "fig4.temperatures must be positive and non-empty".into(),
            ));
        }
        Ok(())
    }
}

/// `n` log-spaced points from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => return Vec::new(),
        1 => return vec![lo],
        _ => {}
    }
    let r = (hi / lo).ln();
    let mut g: Vec<f64> = (0..n)
        .map(|i| lo * (r * i as f64 / (n - 1) as f64).exp())
        .collect();
    g[n - 1] = hi;
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_gives_defaults() {
        assert_eq!(Config::from_toml("").unwrap(), Config::default());
    }

    #[test]
    fn round_trip() {
        let mut c = Config::default();
        c.material.rate_exponent = Some(2);
        c.fig3.separations = vec![2.0];
        assert_eq!(Config::from_toml(&c.to_toml()).unwrap(), c);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Config::from_toml("[material]\ngama = 0.1").is_err());
        assert!(Config::from_toml("[fig1]\nl_min = 5.0\nl_max = 1.0").is_err());
        assert!(Config::from_toml("[material]\ngamma = -1.0").is_err());
        assert!(Config::from_toml("[quadrature]\nrel_tol = 0.5").is_err());
    }

    #[test]
    fn material_models() {
        let c = Config::from_toml("[material]\nkind = \"plasma\"").unwrap();
        assert_eq!(c.material.model().unwrap().kind(), ModelKind::Plasma);
        let c = Config::from_toml("[material]\nrate_exponent = 3").unwrap();
        assert!(c.material.model().unwrap().rate_law().is_some());
    }

    #[test]
    fn grid_endpoints() {
        let g = log_grid(1e-3, 1e3, 7);
        assert_eq!(g.len(), 7);
        assert!((g[3] - 1.0).abs() < 1e-14);
        assert!((g[6] / 1e3 - 1.0).abs() < 1e-14);
    }
}
