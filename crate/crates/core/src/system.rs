//! System configuration and the derived frequency/coupling scales.

use std::f64::consts::PI;

use crate::constants::{C_LIGHT, EPS0, E_CHARGE, HBAR, M_E};
use crate::error::{domain, Error, Result};

/// Unit convention of a configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Units {
    /// Full SI description from geometry and electron count.
    Si,
    /// Dimensionless: ω = 1 and ω_p is given directly as ω_p/ω.
    Ratio { omega_p_over_omega: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SystemConfig {
    pub n_electrons: u64,
    /// In-plane area S (m²).
    pub area: f64,
    /// Mirror separation L_z (m).
    pub mirror_gap: f64,
    /// Cavity mode index n_z.
    pub cavity_index: u32,
    /// Mode frequency ω (rad/s). `None` means cπ·n_z/L_z.
    pub mode_frequency: Option<f64>,
    pub units: Units,
}

impl Default for SystemConfig {
    fn default() -> Self {
        SystemConfig {
            n_electrons: 1_000_000,
            area: 1e-8,
            mirror_gap: 1e-6,
            cavity_index: 1,
            mode_frequency: None,
            units: Units::Si,
        }
    }
}

impl SystemConfig {
    pub fn si(n_electrons: u64, area: f64, mirror_gap: f64) -> Self {
        SystemConfig {
            n_electrons,
            area,
            mirror_gap,
            ..Default::default()
        }
    }

    pub fn ratio(omega_p_over_omega: f64) -> Self {
        SystemConfig {
            units: Units::Ratio { omega_p_over_omega },
            ..Default::default()
        }
    }

    pub fn with_mode_frequency(mut self, omega: f64) -> Self {
        self.mode_frequency = Some(omega);
        self
    }

    pub fn with_cavity_index(mut self, n_z: u32) -> Self {
        self.cavity_index = n_z;
        self
    }

    pub fn is_si(&self) -> bool {
        matches!(self.units, Units::Si)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_electrons == 0 {
            return Err(domain("electron count must be at least 1"));
        }
        if !(self.area > 0.0) || !self.area.is_finite() {
            return Err(domain("area must be positive"));
        }
        if !(self.mirror_gap > 0.0) || !self.mirror_gap.is_finite() {
            return Err(domain("mirror gap must be positive"));
        }
        if self.cavity_index == 0 {
            return Err(domain("cavity index must be a positive integer"));
        }
        if let Some(w) = self.mode_frequency {
            if !(w > 0.0) || !w.is_finite() {
                return Err(domain("mode frequency must be positive"));
            }
        }
        if let Units::Ratio { omega_p_over_omega } = self.units {
            if !(omega_p_over_omega >= 0.0) || !omega_p_over_omega.is_finite() {
                return Err(domain("ω_p/ω must be non-negative"));
            }
        }
        Ok(())
    }

    /// κ_z = π·n_z/L_z (1/m).
    pub fn kappa_z(&self) -> f64 {
        PI * self.cavity_index as f64 / self.mirror_gap
    }

    /// Mode frequency ω; in ratio mode this is 1.
    pub fn omega(&self) -> f64 {
        match self.units {
            Units::Ratio { .. } => 1.0,
            Units::Si => self
                .mode_frequency
                .unwrap_or_else(|| C_LIGHT * self.kappa_z()),
        }
    }

    pub fn n_2d(&self) -> Result<f64> {
        self.require_si("n_2d")?;
        Ok(self.n_electrons as f64 / self.area)
    }

    pub fn volume(&self) -> Result<f64> {
        self.require_si("volume")?;
        Ok(self.area * self.mirror_gap)
    }

    fn require_si(&self, what: &'static str) -> Result<()> {
        match self.units {
            Units::Si => Ok(()),
            Units::Ratio { .. } => Err(Error::UnitMode(what)),
        }
    }

    /// Apply one `key = value` config entry. Returns `Ok(false)` for keys
    /// this type does not own.
    pub fn apply_entry(&mut self, key: &str, value: &str, line: usize) -> Result<bool> {
        let bad = |msg: String| Error::Config { line, msg };
        let num = |v: &str| -> Result<f64> {
            v.parse::<f64>()
                .map_err(|_| bad(format!("`{key}` expects a number, got `{v}`")))
        };
        match key {
            "n_electrons" => {
                let n = num(value)?;
                if n < 1.0 || n.fract() != 0.0 || n > u64::MAX as f64 {
                    return Err(bad(format!(
                        "`n_electrons` must be a positive integer, got `{value}`"
                    )));
                }
                self.n_electrons = n as u64;
            }
            "area" => self.area = num(value)?,
            "mirror_gap" => self.mirror_gap = num(value)?,
            "cavity_index" => {
                self.cavity_index = value.parse().map_err(|_| {
                    bad(format!(
                        "`cavity_index` must be a positive integer, got `{value}`"
                    ))
                })?;
            }
            "mode_frequency" => {
                self.mode_frequency = match value {
                    "auto" => None,
                    v => Some(num(v)?),
                }
            }
            "units" => {
                self.units = match value {
                    "si" | "SI" => Units::Si,
                    "ratio" => Units::Ratio {
                        omega_p_over_omega: match self.units {
                            Units::Ratio { omega_p_over_omega } => omega_p_over_omega,
                            Units::Si => 0.0,
                        },
                    },
                    v => return Err(bad(format!("`units` must be `si` or `ratio`, got `{v}`"))),
                }
            }
            "ratio" => {
                self.units = Units::Ratio {
                    omega_p_over_omega: num(value)?,
                }
            }
            _ => return Ok(false),
        }
        Ok(true)
    }
}

/// ω_p = sqrt(e²·n_2D/(m_e·ε₀·L_z)).
pub fn plasma_frequency_raw(n_2d: f64, mirror_gap: f64) -> f64 {
    (E_CHARGE * E_CHARGE * n_2d / (M_E * EPS0 * mirror_gap)).sqrt()
}

pub fn plasma_frequency(cfg: &SystemConfig) -> Result<f64> {
    cfg.validate()?;
    Ok(plasma_frequency_raw(cfg.n_2d()?, cfg.mirror_gap))
}

/// ω̃ = sqrt(ω² + ω_p²).
pub fn dressed_frequency(omega: f64, omega_p: f64) -> Result<f64> {
    if !(omega >= 0.0) || !(omega_p >= 0.0) {
        return Err(domain(format!(
            "frequencies must be non-negative (ω={omega}, ω_p={omega_p})"
        )));
    }
    Ok(omega.hypot(omega_p))
}

/// γ = ω_p²/(ω² + ω_p²).
pub fn collective_coupling(omega: f64, omega_p: f64) -> Result<f64> {
    if !(omega >= 0.0) || !(omega_p >= 0.0) {
        return Err(domain("frequencies must be non-negative"));
    }
    let wp2 = omega_p * omega_p;
    let denom = omega * omega + wp2;
    if denom == 0.0 {
        return Err(domain("γ undefined for ω = ω_p = 0"));
    }
    Ok(wp2 / denom)
}

/// g = (eħ/m_e)·sqrt(ħ/(2ε₀Vω̃)).
pub fn single_particle_coupling(cfg: &SystemConfig) -> Result<f64> {
    cfg.validate()?;
    let wt = dressed_frequency(cfg.omega(), plasma_frequency(cfg)?)?;
    Ok(single_particle_coupling_raw(cfg.volume()?, wt))
}

fn single_particle_coupling_raw(volume: f64, omega_tilde: f64) -> f64 {
    (E_CHARGE * HBAR / M_E) * (HBAR / (2.0 * EPS0 * volume * omega_tilde)).sqrt()
}

/// k_F = sqrt(2π·n_2D) for a spin-degenerate 2D Fermi disk.
pub fn fermi_wavevector(n_2d: f64) -> Result<f64> {
    if !(n_2d > 0.0) {
        return Err(domain(format!("density must be positive, got {n_2d}")));
    }
    Ok((2.0 * PI * n_2d).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Stable,
    Critical,
    Unstable,
}

impl Phase {
    pub fn label(self) -> &'static str {
        match self {
            Phase::Stable => "stable",
            Phase::Critical => "critical",
            Phase::Unstable => "unstable",
        }
    }
}

pub const PHASE_TOL: f64 = 1e-12;

pub fn classify_phase(gamma: f64, tol: f64) -> Phase {
    if gamma < 1.0 - tol {
        Phase::Stable
    } else if gamma > 1.0 + tol {
        Phase::Unstable
    } else {
        Phase::Critical
    }
}

/// Derived scales of a configuration. In ratio mode frequencies are in
/// units of ω and the dimensionful accessors return `UnitMode` errors.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivedScales {
    si: bool,
    n_electrons: u64,
    omega: f64,
    omega_p: f64,
    omega_tilde: f64,
    gamma: f64,
    g_single: f64,
    n_2d: f64,
    n_e: f64,
    k_fermi: f64,
    volume: f64,
}

impl DerivedScales {
    pub fn new(cfg: &SystemConfig) -> Result<Self> {
        cfg.validate()?;
        let omega = cfg.omega();
        match cfg.units {
            Units::Ratio { omega_p_over_omega } => {
                let omega_tilde = dressed_frequency(omega, omega_p_over_omega)?;
                Ok(DerivedScales {
                    si: false,
                    n_electrons: cfg.n_electrons,
                    omega,
                    omega_p: omega_p_over_omega,
                    omega_tilde,
                    gamma: collective_coupling(omega, omega_p_over_omega)?,
                    g_single: f64::NAN,
                    n_2d: f64::NAN,
                    n_e: f64::NAN,
                    k_fermi: f64::NAN,
                    volume: f64::NAN,
                })
            }
            Units::Si => {
                let n_2d = cfg.n_2d()?;
                let omega_p = plasma_frequency_raw(n_2d, cfg.mirror_gap);
                let omega_tilde = dressed_frequency(omega, omega_p)?;
                let volume = cfg.volume()?;
                Ok(DerivedScales {
                    si: true,
                    n_electrons: cfg.n_electrons,
                    omega,
                    omega_p,
                    omega_tilde,
                    gamma: collective_coupling(omega, omega_p)?,
                    g_single: single_particle_coupling_raw(volume, omega_tilde),
                    n_2d,
                    n_e: n_2d / cfg.mirror_gap,
                    k_fermi: fermi_wavevector(n_2d)?,
                    volume,
                })
            }
        }
    }

    fn si_only(&self, v: f64, what: &'static str) -> Result<f64> {
        if self.si {
            Ok(v)
        } else {
            Err(Error::UnitMode(what))
        }
    }

    pub fn is_si(&self) -> bool {
        self.si
    }
    pub fn n_electrons(&self) -> u64 {
        self.n_electrons
    }
    pub fn omega(&self) -> f64 {
        self.omega
    }
    pub fn omega_p(&self) -> f64 {
        self.omega_p
    }
    pub fn omega_tilde(&self) -> f64 {
        self.omega_tilde
    }
    pub fn gamma(&self) -> f64 {
        self.gamma
    }
    pub fn phase(&self) -> Phase {
        classify_phase(self.gamma, PHASE_TOL)
    }
    pub fn g_single(&self) -> Result<f64> {
        self.si_only(self.g_single, "single-particle coupling")
    }
    pub fn n_2d(&self) -> Result<f64> {
        self.si_only(self.n_2d, "n_2d")
    }
    pub fn n_e(&self) -> Result<f64> {
        self.si_only(self.n_e, "n_e")
    }
    pub fn k_fermi(&self) -> Result<f64> {
        self.si_only(self.k_fermi, "k_fermi")
    }
    pub fn volume(&self) -> Result<f64> {
        self.si_only(self.volume, "volume")
    }

    /// Relative residual of 2m_e·N·g²/(ħ²·ħω̃) = γ.
    pub fn coupling_identity_residual(&self) -> Result<f64> {
        let g = self.g_single()?;
        let lhs =
            2.0 * M_E * self.n_electrons as f64 * g * g / (HBAR * HBAR * HBAR * self.omega_tilde);
        Ok(((lhs - self.gamma) / self.gamma).abs())
    }
}
