//! Linear response of the single-mode theory: photon, field, current and
//! mixed sectors, the optical conductivity and the DC/Drude limit.
//!
//! Frequency-domain forms use z = w + iη and the transform ∫₀^∞ e^{izτ}χ(τ)dτ.

use num_complex::Complex64;

use crate::constants::{EPS0, E_CHARGE, M_E};
use crate::error::{domain, Error, Result};
use crate::system::DerivedScales;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResponseKind {
    AA,
    EA,
    JJ,
    JA,
    AJ,
    Sigma,
}

impl ResponseKind {
    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "aa" => ResponseKind::AA,
            "ea" => ResponseKind::EA,
            "jj" => ResponseKind::JJ,
            "ja" => ResponseKind::JA,
            "aj" => ResponseKind::AJ,
            "sigma" => ResponseKind::Sigma,
            _ => return None,
        })
    }
}

/// Real probe frequency with a strictly positive broadening.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BroadenedFrequency {
    pub w: f64,
    pub eta: f64,
}

impl BroadenedFrequency {
    pub fn new(w: f64, eta: f64) -> Result<Self> {
        if !(eta > 0.0) || !eta.is_finite() || !w.is_finite() {
            return Err(domain(format!(
                "broadening must be positive and finite (w={w}, η={eta})"
            )));
        }
        Ok(BroadenedFrequency { w, eta })
    }

    pub fn z(&self) -> Complex64 {
        Complex64::new(self.w, self.eta)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResponseValue {
    pub re: f64,
    pub im: f64,
    pub kind: ResponseKind,
}

impl ResponseValue {
    pub fn complex(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    fn scaled(self, k: f64, kind: ResponseKind) -> Self {
        ResponseValue {
            re: k * self.re,
            im: k * self.im,
            kind,
        }
    }
}

fn check(f: &BroadenedFrequency) -> Result<()> {
    BroadenedFrequency::new(f.w, f.eta).map(|_| ())
}

/// Retarded A-field propagator −Θ(τ)sin(ω̃τ)/(ε₀ω̃V).
pub fn chi_aa_time(tau: f64, omega_tilde: f64, volume: f64) -> f64 {
    if tau < 0.0 {
        0.0
    } else {
        -(omega_tilde * tau).sin() / (EPS0 * omega_tilde * volume)
    }
}

/// −(1/2ε₀ω̃V)·[1/(z+ω̃) − 1/(z−ω̃)], split into real and imaginary parts.
pub fn chi_aa_freq(f: BroadenedFrequency, omega_tilde: f64, volume: f64) -> Result<ResponseValue> {
    check(&f)?;
    let (w, eta, wt) = (f.w, f.eta, omega_tilde);
    let dp = (w + wt).powi(2) + eta * eta;
    let dm = (w - wt).powi(2) + eta * eta;
    let pre = 1.0 / (2.0 * EPS0 * wt * volume);
    Ok(ResponseValue {
        re: pre * ((w - wt) / dm - (w + wt) / dp),
        im: pre * eta * (1.0 / dp - 1.0 / dm),
        kind: ResponseKind::AA,
    })
}

/// Θ(τ)cos(ω̃τ)/(ε₀V).
pub fn chi_ea_time(tau: f64, omega_tilde: f64, volume: f64) -> f64 {
    if tau < 0.0 {
        0.0
    } else {
        (omega_tilde * tau).cos() / (EPS0 * volume)
    }
}

/// (i/2ε₀V)·[1/(z+ω̃) + 1/(z−ω̃)] = iz·χ^A_A(w).
pub fn chi_ea_freq(f: BroadenedFrequency, omega_tilde: f64, volume: f64) -> Result<ResponseValue> {
    check(&f)?;
    let (w, eta, wt) = (f.w, f.eta, omega_tilde);
    let dp = (w + wt).powi(2) + eta * eta;
    let dm = (w - wt).powi(2) + eta * eta;
    let pre = 1.0 / (2.0 * EPS0 * volume);
    Ok(ResponseValue {
        re: pre * eta * (1.0 / dp + 1.0 / dm),
        im: pre * ((w + wt) / dp + (w - wt) / dm),
        kind: ResponseKind::EA,
    })
}

fn si_scales(s: &DerivedScales) -> Result<(f64, f64)> {
    Ok((s.volume()?, s.n_electrons() as f64))
}

/// e²N/m_e, the current carried per unit vector potential.
fn current_weight(n_electrons: f64) -> f64 {
    E_CHARGE * E_CHARGE * n_electrons / M_E
}

/// χ^J_J = (e²N/m_e)²·χ^A_A.
pub fn chi_jj_freq(f: BroadenedFrequency, scales: &DerivedScales) -> Result<ResponseValue> {
    let (v, n) = si_scales(scales)?;
    let aa = chi_aa_freq(f, scales.omega_tilde(), v)?;
    Ok(aa.scaled(current_weight(n).powi(2), ResponseKind::JJ))
}

/// χ^J_A = χ^A_J = −(e²N/m_e)·χ^A_A.
pub fn chi_mixed_freq(
    f: BroadenedFrequency,
    scales: &DerivedScales,
    which: ResponseKind,
) -> Result<ResponseValue> {
    if !matches!(which, ResponseKind::JA | ResponseKind::AJ) {
        return Err(domain("mixed response kind must be JA or AJ"));
    }
    let (v, n) = si_scales(scales)?;
    let aa = chi_aa_freq(f, scales.omega_tilde(), v)?;
    Ok(aa.scaled(-current_weight(n), which))
}

/// Prefactors multiplying χ^A_A in [[JJ, JA], [AJ, AA]].
pub fn response_prefactors(n_electrons: f64) -> [[f64; 2]; 2] {
    let c = current_weight(n_electrons);
    [[c * c, -c], [-c, 1.0]]
}

/// [[χ^J_J, χ^J_A], [χ^A_J, χ^A_A]] at one frequency.
pub fn response_table(
    f: BroadenedFrequency,
    scales: &DerivedScales,
) -> Result<[[Complex64; 2]; 2]> {
    let (v, n) = si_scales(scales)?;
    let aa = chi_aa_freq(f, scales.omega_tilde(), v)?.complex();
    let p = response_prefactors(n);
    Ok([[aa * p[0][0], aa * p[0][1]], [aa * p[1][0], aa * p[1][1]]])
}

/// Absorbed power −w·Im χ^A_A(w)·|J|².
pub fn absorption_rate(w: f64, eta: f64, j_ext: f64, omega_tilde: f64, volume: f64) -> Result<f64> {
    let aa = chi_aa_freq(BroadenedFrequency::new(w, eta)?, omega_tilde, volume)?;
    Ok(-w * aa.im * j_ext * j_ext)
}

/// Optical conductivity from the expanded closed form
/// iε₀ω_p²/z − iε₀ω_p⁴/(2ω̃z)·[1/(z+ω̃) − 1/(z−ω̃)].
pub fn optical_conductivity(
    f: BroadenedFrequency,
    scales: &DerivedScales,
) -> Result<ResponseValue> {
    check(&f)?;
    if !scales.is_si() {
        return Err(Error::UnitMode("optical conductivity"));
    }
    let (w, eta) = (f.w, f.eta);
    let (wp, wt) = (scales.omega_p(), scales.omega_tilde());
    let d0 = w * w + eta * eta;
    let dp = (w + wt).powi(2) + eta * eta;
    let dm = (w - wt).powi(2) + eta * eta;
    let a = EPS0 * wp * wp;
    let b = EPS0 * wp.powi(4) / (2.0 * wt * d0);
    Ok(ResponseValue {
        re: a * eta / d0 - b * eta * ((2.0 * w + wt) / dp - (2.0 * w - wt) / dm),
        im: a * w / d0
            - b * ((w * w - eta * eta + w * wt) / dp - (w * w - eta * eta - w * wt) / dm),
        kind: ResponseKind::Sigma,
    })
}

/// Kubo assembly (i/z)·(e²n_e/m_e + χ^J_J/V), evaluated with complex arithmetic.
pub fn optical_conductivity_kubo(
    f: BroadenedFrequency,
    scales: &DerivedScales,
) -> Result<ResponseValue> {
    let jj = chi_jj_freq(f, scales)?.complex();
    let diamagnetic = E_CHARGE * E_CHARGE * scales.n_e()? / M_E;
    let s = Complex64::i() / f.z() * (diamagnetic + jj / scales.volume()?);
    Ok(ResponseValue {
        re: s.re,
        im: s.im,
        kind: ResponseKind::Sigma,
    })
}

/// Uncoupled DC conductivity σ⁰ = ε₀ω_p²/η.
pub fn sigma0(omega_p: f64, eta: f64) -> Result<f64> {
    if !(eta > 0.0) {
        return Err(domain("σ⁰ needs η > 0"));
    }
    Ok(EPS0 * omega_p * omega_p / eta)
}

fn require_stable(gamma: f64) -> Result<()> {
    if !(gamma >= 0.0) {
        return Err(domain(format!("γ must be non-negative, got {gamma}")));
    }
    if gamma >= 1.0 {
        return Err(Error::Instability(format!(
            "DC conductivity turns negative for γ = {gamma} ≥ 1"
        )));
    }
    Ok(())
}

/// σ_dc = σ⁰(1 − γ).
pub fn dc_conductivity(gamma: f64, sigma0: f64) -> Result<f64> {
    require_stable(gamma)?;
    if !(sigma0 > 0.0) {
        return Err(domain("σ⁰ must be positive"));
    }
    Ok(sigma0 * (1.0 - gamma))
}

/// Drude mass m_e/(1 − γ).
pub fn drude_effective_mass(gamma: f64) -> Result<f64> {
    require_stable(gamma)?;
    Ok(M_E / (1.0 - gamma))
}
