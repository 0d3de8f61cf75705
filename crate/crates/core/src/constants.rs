//! Physical constants in SI units (CODATA 2018).
//!
//! `ALPHA_FS` and `BOHR_RADIUS` are derived from the primary constants so the
//! defining identities hold to rounding.

use std::f64::consts::PI;

/// Reduced Planck constant (J·s)
pub const HBAR: f64 = 1.054_571_817e-34;
/// Elementary charge (C)
pub const E_CHARGE: f64 = 1.602_176_634e-19;
/// Electron rest mass (kg)
pub const M_E: f64 = 9.109_383_701_5e-31;
/// Vacuum permittivity (F/m)
pub const EPS0: f64 = 8.854_187_812_8e-12;
/// Speed of light (m/s)
pub const C_LIGHT: f64 = 299_792_458.0;
/// Fine-structure constant
pub const ALPHA_FS: f64 = E_CHARGE * E_CHARGE / (4.0 * PI * HBAR * C_LIGHT * EPS0);
/// Bohr radius (m)
pub const BOHR_RADIUS: f64 = 4.0 * PI * EPS0 * HBAR * HBAR / (M_E * E_CHARGE * E_CHARGE);
/// Rydberg energy e²/(4πε₀·2a₀) (J)
pub const RYDBERG: f64 = E_CHARGE * E_CHARGE / (4.0 * PI * EPS0 * 2.0 * BOHR_RADIUS);

/// Bundle of the constants, handy for echoing into output records.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constants {
    pub hbar: f64,
    pub e_charge: f64,
    pub m_e: f64,
    pub eps0: f64,
    pub c_light: f64,
    pub alpha_fs: f64,
    pub a0: f64,
}

impl Constants {
    pub const SI: Constants = Constants {
        hbar: HBAR,
        e_charge: E_CHARGE,
        m_e: M_E,
        eps0: EPS0,
        c_light: C_LIGHT,
        alpha_fs: ALPHA_FS,
        a0: BOHR_RADIUS,
    };

    /// Relative residuals of the α and a₀ defining identities.
    pub fn identity_residuals(&self) -> (f64, f64) {
        let alpha = self.e_charge.powi(2) / (4.0 * PI * self.hbar * self.c_light * self.eps0);
        let a0 = 4.0 * PI * self.eps0 * self.hbar.powi(2) / (self.m_e * self.e_charge.powi(2));
        (
            ((alpha - self.alpha_fs) / self.alpha_fs).abs(),
            ((a0 - self.a0) / self.a0).abs(),
        )
    }
}

impl Default for Constants {
    fn default() -> Self {
        Self::SI
    }
}
