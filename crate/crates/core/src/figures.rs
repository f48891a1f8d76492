//! CSV datasets for the four figures and for generic parameter sweeps.
//!
//! Each dataset carries the complete TOML configuration it was built from
//! in `#` comment lines, so [`config_from_csv`] plus the matching builder
//! regenerates it byte for byte. Points whose integrals missed their
//! tolerance keep the best available value and get `converged = 0`.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::str::FromStr;

use rayon::prelude::*;

use crate::config::{log_grid, Config};
use crate::density::{rho_lifshitz_real, rho_real, rho_tilde};
use crate::lifshitz::{self, MirrorKind};
use crate::numerics::special::ZETA3;
use crate::thermo::{self, EnergyAsymptote, Regime};
use crate::units::{diffusion_coefficient, MaterialModel};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureId {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
}

impl FigureId {
    pub fn from_number(n: u32) -> Result<Self> {
        match n {
            1 => Ok(Self::Fig1),
            2 => Ok(Self::Fig2),
            3 => Ok(Self::Fig3),
            4 => Ok(Self::Fig4),
            _ => Err(Error::InvalidParameter(format!(
                "no figure {n}; expected 1-4"
            ))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Fig1 => "fig1",
            Self::Fig2 => "fig2",
            Self::Fig3 => "fig3",
            Self::Fig4 => "fig4",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    /// `None` is written as an empty field (curve not defined there).
    pub values: Vec<Option<f64>>,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigureDataset {
    pub name: String,
    /// Free-form `key = value` lines: normalizations and plot markers.
    pub notes: Vec<String>,
    pub config: Config,
    pub columns: Vec<String>,
    pub rows: Vec<Row>,
}

impl FigureDataset {
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# dataset = {}", self.name);
        for n in &self.notes {
            let _ = writeln!(out, "# {n}");
        }
        out.push_str("# --- config ---\n");
        for line in self.config.to_toml().lines() {
            let _ = writeln!(out, "{}", format!("#| {line}").trim_end());
        }
        out.push_str(&self.columns.join(","));
        out.push_str(",converged\n");
        for row in &self.rows {
            for v in &row.values {
                if let Some(x) = v {
                    let _ = write!(out, "{x:.15e}");
                }
                out.push(',');
            }
            out.push_str(if row.converged { "1\n" } else { "0\n" });
        }
        out
    }

    /// Number of rows flagged as not converged.
    pub fn unconverged(&self) -> usize {
        self.rows.iter().filter(|r| !r.converged).count()
    }
}

/// Recover the configuration embedded in a dataset's header.
pub fn config_from_csv(text: &str) -> Result<Config> {
    let body: Vec<&str> = text
        .lines()
        .filter_map(|l| {
            l.strip_prefix("#| ")
                .or(if l == "#|" { Some("") } else { None })
        })
        .collect();
    if body.is_empty() {
        return Err(Error::Config("no embedded config in dataset header".into()));
    }
    Config::from_toml(&body.join("\n"))
}

/// A value plus its convergence flag; failed quadratures keep their
/// best estimate, anything else becomes a gap.
fn soft(r: Result<f64>) -> (Option<f64>, bool) {
    match r {
        Ok(v) => (Some(v), true),
        Err(Error::Quadrature { value, .. }) if value.is_finite() => (Some(value), false),
        Err(_) => (None, false),
    }
}

fn row(cells: Vec<(Option<f64>, bool)>, leading: &[f64]) -> Row {
    let converged = cells.iter().all(|c| c.1);
    let mut values: Vec<Option<f64>> = leading.iter().map(|&x| Some(x)).collect();
    values.extend(cells.into_iter().map(|c| c.0));
    Row { values, converged }
}

fn scaled(c: (Option<f64>, bool), norm: f64) -> (Option<f64>, bool) {
    (c.0.map(|v| v / norm), c.1)
}

pub fn build(id: FigureId, config: &Config) -> Result<FigureDataset> {
    config.validate()?;
    match id {
        FigureId::Fig1 => fig1(config),
        FigureId::Fig2 => fig2(config),
        FigureId::Fig3 => fig3(config),
        FigureId::Fig4 => fig4(config),
    }
}

/// T = 0 TE pressures over the perfect-reflector value π²/(480 L⁴),
/// against L/λ_p with λ_p = 2πλ.
fn fig1(config: &Config) -> Result<FigureDataset> {
    let c = &config.fig1;
    let q = config.quadrature.spec()?;
    let m = MaterialModel::drude(c.gamma)?;
    let cutoff = c.cutoff_factor * c.gamma;
    let short = EnergyAsymptote::calibrate(Regime::Short, &m, cutoff, &q)?;
    let long = EnergyAsymptote::calibrate(Regime::Long, &m, cutoff, &q)?;
    let mirror = MirrorKind::Drude(m);
    let xs = log_grid(c.l_min, c.l_max, c.points);
    let rows = xs
        .par_iter()
        .map(|&x| {
            let l = 2.0 * PI * x;
            let norm = PI * PI / (480.0 * l.powi(4));
            let eddy = soft(thermo::casimir_pressure_t0(l, &m, cutoff, &q).map(|r| r.value));
            let drude = soft(lifshitz::lifshitz_pressure(0.0, l, &mirror, &q));
            // Asymptotes are drawn where their expansion holds: L < λ and
            // L > c/γ.
            let s = (l < 1.0).then(|| short.pressure(l) / norm);
            let lg = (l > 1.0 / c.gamma).then(|| long.pressure(l) / norm);
            row(
                vec![
                    scaled(eddy, norm),
                    scaled(drude, norm),
                    (s, true),
                    (lg, true),
                ],
                &[x],
            )
        })
        .collect();
    Ok(FigureDataset {
        name: "fig1".into(),
        notes: vec![
            "x = L/lambda_p, lambda_p = 2 pi lambda".into(),
            "pressure = dE/dL (positive attractive), normalized by pi^2/(480 L^4)".into(),
            format!("gamma = {}, Lambda = {}", c.gamma, cutoff),
            format!(
                "asymptote_short = const - a gamma L ln(Lambda/gamma), a = {:.12e}",
                short.amplitude
            ),
            format!(
                "asymptote_long = b sqrt(gamma) L^-3.5 ln(Lambda L), b = {:.12e}",
                long.amplitude
            ),
        ],
        config: config.clone(),
        columns: [
            "L_over_lambda_p",
            "eddy_pressure_norm",
            "drude_TE_pressure_norm",
            "asymptote_short",
            "asymptote_long",
        ]
        .map(String::from)
        .to_vec(),
        rows,
    })
}

/// Eddy and full Drude TE mode densities at L = separation·λ_p, frequency
/// over ξ_L and density over |ρ(0; L)|, i.e. `ξ_L ρ / (α'/L²)`.
fn fig2(config: &Config) -> Result<FigureDataset> {
    let c = &config.fig2;
    let q = config.quadrature.spec()?;
    let m = MaterialModel::drude(c.gamma)?;
    let l = 2.0 * PI * c.separation;
    let xi_l = diffusion_coefficient(&m)? / (l * l);
    let rho0 = rho_real(0.0, l, &m, &q)?;
    let norm = rho0.abs();
    let xs = log_grid(c.w_min, c.w_max, c.points);
    let rows = xs
        .par_iter()
        .map(|&x| {
            let w = x * xi_l;
            let eddy = soft(rho_real(w, l, &m, &q));
            let full = soft(rho_lifshitz_real(w, l, &m, &q));
            row(vec![scaled(eddy, norm), scaled(full, norm)], &[x])
        })
        .collect();
    Ok(FigureDataset {
        name: "fig2".into(),
        notes: vec![
            format!(
                "gamma = {}, L = {} (L/lambda_p = {})",
                c.gamma, l, c.separation
            ),
            format!("xi_L = D/L^2 = {xi_l:.12e}"),
            format!("rho(0; L) = {rho0:.12e}, alpha'/L^2 = xi_L |rho(0; L)|"),
            "x = omega/xi_L, densities normalized by |rho(0; L)|".into(),
        ],
        config: config.clone(),
        columns: ["omega_over_xi_L", "eddy_dos_norm", "drude_TE_dos_norm"]
            .map(String::from)
            .to_vec(),
        rows,
    })
}

/// Entropy over α/L² = ζ(3)/(16πL²) against T/ξ_L, with the low-T line
/// and the high-T plateau -f(L/λ).
fn fig3(config: &Config) -> Result<FigureDataset> {
    let c = &config.fig3;
    let q = config.quadrature.spec()?;
    let m = MaterialModel::drude(c.gamma)?;
    let d = diffusion_coefficient(&m)?;
    let xs = log_grid(c.t_min, c.t_max, c.points);
    let mut notes = vec![
        format!("gamma = {}", c.gamma),
        "x = T/xi_L, xi_L = D/L^2; entropy normalized by zeta(3)/(16 pi L^2)".into(),
        "marker: T/xi_L = 1 (crossover)".into(),
    ];
    let mut rows = Vec::new();
    for &l in &c.separations {
        let norm = ZETA3 / (16.0 * PI * l * l);
        let xi_l = d / (l * l);
        let plateau = thermo::s_infinity(l, &m, &q)? / norm;
        notes.push(format!(
            "L = {l}: xi_L = {xi_l:.12e}, S_inf norm = {plateau:.12e}"
        ));
        let block: Vec<Row> = xs
            .par_iter()
            .map(|&x| {
                let t = x * xi_l;
                let s = soft(thermo::entropy(t, l, &m, &q).map(|r| r.value));
                let low = thermo::entropy_asymptotes(t, l, &m)
                    .ok()
                    .map(|a| a.low_temperature / norm);
                row(
                    vec![scaled(s, norm), (low, true), (Some(plateau), true)],
                    &[l, x],
                )
            })
            .collect();
        rows.extend(block);
    }
    Ok(FigureDataset {
        name: "fig3".into(),
        notes,
        config: config.clone(),
        columns: [
            "L",
            "T_over_xi_L",
            "entropy_norm",
            "low_T_norm",
            "plateau_norm",
        ]
        .map(String::from)
        .to_vec(),
        rows,
    })
}

/// Thermal TE pressures `P(T) - P(0)` over ζ(3)T/(8πL³) for Drude,
/// plasma and eddy currents alone, plus Drude minus eddy.
fn fig4(config: &Config) -> Result<FigureDataset> {
    let c = &config.fig4;
    let q = config.quadrature.spec()?;
    let m = MaterialModel::drude(c.gamma)?;
    let d = diffusion_coefficient(&m)?;
    let drude = MirrorKind::Drude(m);
    let plasma = MirrorKind::Plasma(MaterialModel::plasma());
    let xs = log_grid(c.l_min, c.l_max, c.points);
    let mut notes = vec![
        format!("gamma = {}", c.gamma),
        "thermal pressures P(T) - P(0), P = dF/dL (positive attractive)".into(),
        "normalized by zeta(3) T/(8 pi L^3)".into(),
    ];
    let mut rows = Vec::new();
    for &t in &c.temperatures {
        let marker = (d / t).sqrt();
        notes.push(format!("marker: T = {t}, sqrt(D/T) = {marker:.12e}"));
        let block: Vec<Row> = xs
            .par_iter()
            .map(|&l| {
                let norm = ZETA3 * t / (8.0 * PI * l.powi(3));
                let pd = soft(lifshitz::thermal_pressure(t, l, &drude, &q));
                let pp = soft(lifshitz::thermal_pressure(t, l, &plasma, &q));
                let pe = soft(thermo::thermal_pressure_eddy(t, l, &m, &q));
                let diff = (pd.0.zip(pe.0).map(|(a, b)| a - b), pd.1 && pe.1);
                row(
                    vec![
                        scaled(pd, norm),
                        scaled(pp, norm),
                        scaled(pe, norm),
                        scaled(diff, norm),
                    ],
                    &[t, l, l / marker],
                )
            })
            .collect();
        rows.extend(block);
    }
    Ok(FigureDataset {
        name: "fig4".into(),
        notes,
        config: config.clone(),
        columns: [
            "T",
            "L",
            "L_over_sqrt_D_over_T",
            "drude_TE_norm",
            "plasma_TE_norm",
            "eddy_norm",
            "drude_minus_eddy_norm",
        ]
        .map(String::from)
        .to_vec(),
        rows,
    })
}

/// Quantities available to `sweep`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepQuantity {
    Energy,
    Pressure,
    FreeEnergy,
    ThermalFreeEnergy,
    Entropy,
    ThermalPressure,
    RhoTilde,
    RhoReal,
    RhoFull,
    LifshitzFreeEnergy,
    LifshitzPressure,
}

impl SweepQuantity {
    pub const ALL: [SweepQuantity; 11] = [
        Self::Energy,
        Self::Pressure,
        Self::FreeEnergy,
        Self::ThermalFreeEnergy,
        Self::Entropy,
        Self::ThermalPressure,
        Self::RhoTilde,
        Self::RhoReal,
        Self::RhoFull,
        Self::LifshitzFreeEnergy,
        Self::LifshitzPressure,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Energy => "energy",
            Self::Pressure => "pressure",
            Self::FreeEnergy => "free_energy",
            Self::ThermalFreeEnergy => "thermal_free_energy",
            Self::Entropy => "entropy",
            Self::ThermalPressure => "thermal_pressure",
            Self::RhoTilde => "rho_tilde",
            Self::RhoReal => "rho_real",
            Self::RhoFull => "rho_full",
            Self::LifshitzFreeEnergy => "lifshitz_free_energy",
            Self::LifshitzPressure => "lifshitz_pressure",
        }
    }
}

impl FromStr for SweepQuantity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|q| q.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Self::ALL.iter().map(|q| q.name()).collect();
                Error::InvalidParameter(format!(
                    "unknown quantity '{s}'; expected one of {}",
                    names.join(", ")
                ))
            })
    }
}

/// Sweep variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVar {
    L,
    T,
    Xi,
    Omega,
    Gamma,
}

impl FromStr for SweepVar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "L" | "l" => Ok(Self::L),
            "T" | "t" => Ok(Self::T),
            "xi" => Ok(Self::Xi),
            "omega" | "w" => Ok(Self::Omega),
            "gamma" => Ok(Self::Gamma),
            _ => Err(Error::InvalidParameter(format!(
                "unknown sweep variable '{s}'; expected L, T, xi, omega or gamma"
            ))),
        }
    }
}

impl SweepVar {
    fn name(self) -> &'static str {
        match self {
            Self::L => "L",
            Self::T => "T",
            Self::Xi => "xi",
            Self::Omega => "omega",
            Self::Gamma => "gamma",
        }
    }
}

/// `A:min:max:N`, log-spaced when both ends are positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub var: SweepVar,
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || Error::InvalidParameter(format!("axis '{s}' is not of the form A:min:max:N"));
        if parts.len() != 4 {
            return Err(bad());
        }
        let var = parts[0].parse()?;
        let min: f64 = parts[1].parse().map_err(|_| bad())?;
        let max: f64 = parts[2].parse().map_err(|_| bad())?;
        let points: usize = parts[3].parse().map_err(|_| bad())?;
        if !(min.is_finite() && max.is_finite() && max > min) || points == 0 {
            return Err(bad());
        }
        Ok(Self {
            var,
            min,
            max,
            points,
        })
    }
}

impl Axis {
    pub fn values(&self) -> Vec<f64> {
        if self.min > 0.0 {
            log_grid(self.min, self.max, self.points)
        } else if self.points == 1 {
            vec![self.min]
        } else {
            let step = (self.max - self.min) / (self.points - 1) as f64;
            (0..self.points)
                .map(|i| self.min + step * i as f64)
                .collect()
        }
    }
}

/// Values of the variables held fixed during a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub l: f64,
    pub t: f64,
    pub xi: f64,
    pub omega: f64,
    pub gamma: Option<f64>,
}

impl Default for SweepPoint {
    fn default() -> Self {
        Self {
            l: 10.0,
            t: 1e-3,
            xi: 1e-3,
            omega: 1e-4,
            gamma: None,
        }
    }
}

impl SweepPoint {
    /// Apply a `name=value` override.
    pub fn set(&mut self, assignment: &str) -> Result<()> {
        let (k, v) = assignment.split_once('=').ok_or_else(|| {
            Error::InvalidParameter(format!("'{assignment}' is not of the form name=value"))
        })?;
        let v: f64 = v
            .trim()
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("bad number in '{assignment}'")))?;
        self.assign(k.trim().parse()?, v);
        Ok(())
    }

    fn assign(&mut self, var: SweepVar, v: f64) {
        match var {
            SweepVar::L => self.l = v,
            SweepVar::T => self.t = v,
            SweepVar::Xi => self.xi = v,
            SweepVar::Omega => self.omega = v,
            SweepVar::Gamma => self.gamma = Some(v),
        }
    }
}

fn evaluate(q: SweepQuantity, p: &SweepPoint, config: &Config) -> Result<f64> {
    let spec = config.quadrature.spec()?;
    let base = config.material.model()?;
    let m = match p.gamma {
        Some(g) => base.with_gamma(g)?,
        None => base,
    };
    let cutoff = thermo::default_cutoff(&m.at_temperature(p.t)?);
    match q {
        SweepQuantity::Energy => Ok(thermo::casimir_energy_t0(p.l, &m, cutoff, &spec)?.value),
        SweepQuantity::Pressure => Ok(thermo::casimir_pressure_t0(p.l, &m, cutoff, &spec)?.value),
        SweepQuantity::FreeEnergy => Ok(thermo::free_energy(p.t, p.l, &m, cutoff, &spec)?.value),
        SweepQuantity::ThermalFreeEnergy => thermo::thermal_free_energy(p.t, p.l, &m, &spec),
        SweepQuantity::Entropy => Ok(thermo::entropy(p.t, p.l, &m, &spec)?.value),
        SweepQuantity::ThermalPressure => thermo::thermal_pressure_eddy(p.t, p.l, &m, &spec),
        SweepQuantity::RhoTilde => rho_tilde(p.xi, p.l, &m, &spec),
        SweepQuantity::RhoReal => rho_real(p.omega, p.l, &m, &spec),
        SweepQuantity::RhoFull => rho_lifshitz_real(p.omega, p.l, &m, &spec),
        SweepQuantity::LifshitzFreeEnergy => {
            lifshitz::matsubara_free_energy(p.t, p.l, &MirrorKind::from_model(m), &spec)
        }
        SweepQuantity::LifshitzPressure => {
            lifshitz::lifshitz_pressure(p.t, p.l, &MirrorKind::from_model(m), &spec)
        }
    }
}

/// One quantity over one axis, everything else fixed at `at`.
pub fn sweep(
    quantity: SweepQuantity,
    axis: &Axis,
    at: &SweepPoint,
    config: &Config,
) -> Result<FigureDataset> {
    config.validate()?;
    let xs = axis.values();
    let rows = xs
        .par_iter()
        .map(|&x| {
            let mut p = *at;
            p.assign(axis.var, x);
            row(vec![soft(evaluate(quantity, &p, config))], &[x])
        })
        .collect();
    let fixed = format!(
        "fixed: L = {}, T = {}, xi = {}, omega = {}, gamma = {}",
        at.l,
        at.t,
        at.xi,
        at.omega,
        at.gamma.map_or("config".to_string(), |g| g.to_string())
    );
    Ok(FigureDataset {
        name: format!("sweep {}", quantity.name()),
        notes: vec![
            fixed,
            format!(
                "axis = {}:{}:{}:{}",
                axis.var.name(),
                axis.min,
                axis.max,
                axis.points
            ),
        ],
        config: config.clone(),
        columns: vec![axis.var.name().to_string(), quantity.name().to_string()],
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> Config {
        let mut c = Config::default();
        c.fig3.separations = vec![3.0];
        c.fig3.points = 4;
        c.fig1.points = 3;
        c
    }

    #[test]
    fn parse_axis() {
        let a: Axis = "L:1:100:3".parse().unwrap();
        assert_eq!(a.var, SweepVar::L);
        let v = a.values();
        assert!((v[1] - 10.0).abs() < 1e-12);
        assert!("L:1:100".parse::<Axis>().is_err());
        assert!("Q:1:100:3".parse::<Axis>().is_err());
        assert!("T:2:1:3".parse::<Axis>().is_err());
        let lin: Axis = "omega:0:1:3".parse().unwrap();
        assert_eq!(lin.values(), vec![0.0, 0.5, 1.0]);
    }

    #[test]
    fn unknown_quantity_is_an_error() {
        assert!("pressure".parse::<SweepQuantity>().is_ok());
        let e = "torque".parse::<SweepQuantity>().unwrap_err();
        assert!(e.to_string().contains("unknown quantity"));
    }

    #[test]
    fn header_regenerates_dataset() {
        let d = build(FigureId::Fig3, &small()).unwrap();
        let text = d.to_csv();
        let c = config_from_csv(&text).unwrap();
        assert_eq!(build(FigureId::Fig3, &c).unwrap().to_csv(), text);
    }

    #[test]
    fn fig1_signs() {
        let d = build(FigureId::Fig1, &small()).unwrap();
        assert_eq!(d.unconverged(), 0);
        for r in &d.rows {
            assert!(
                r.values[1].unwrap() < 0.0,
                "eddy pressure must be repulsive"
            );
            assert!(r.values[2].unwrap() > 0.0);
        }
    }

    #[test]
    fn sweep_matches_direct_call() {
        let c = Config::default();
        let axis: Axis = "T:0.001:0.01:2".parse().unwrap();
        let d = sweep(SweepQuantity::Entropy, &axis, &SweepPoint::default(), &c).unwrap();
        let q = c.quadrature.spec().unwrap();
        let m = c.material.model().unwrap();
        let direct = thermo::entropy(0.01, 10.0, &m, &q).unwrap().value;
        assert_eq!(d.rows[1].values[1], Some(direct));
    }

    #[test]
    fn fixed_point_overrides() {
        let mut p = SweepPoint::default();
        p.set("L=2.5").unwrap();
        p.set("gamma = 0.01").unwrap();
        assert_eq!(p.l, 2.5);
        assert_eq!(p.gamma, Some(0.01));
        assert!(p.set("L").is_err());
        assert!(p.set("L=abc").is_err());
    }
}
