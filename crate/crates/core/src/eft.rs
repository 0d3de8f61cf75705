//! Continuum effective theory: photon modes of all in-plane momenta between
//! the natural lower cutoff ω̃(κ_z) and an upper cutoff Λ = ω̃²(κ_z)·Λ₀.
//!
//! `lambda_freq2` values are squared frequencies (rad²/s²); the 3D
//! single-particle formulas take a momentum cutoff `lambda_mom` (1/m).

use std::f64::consts::PI;

use crate::constants::{ALPHA_FS, C_LIGHT, EPS0, E_CHARGE, HBAR, M_E};
use crate::error::{domain, Error, Result};
use crate::optimize::golden_section;
use crate::quad::{integrate_breaks, Integral, Tolerance};
use crate::response::{ResponseKind, ResponseValue};
use crate::system::{plasma_frequency_raw, SystemConfig};

/// α = e²/(4πc²ε₀m_eL_z), the per-electron coupling per unit log-cutoff.
pub fn alpha_dim(mirror_gap: f64) -> f64 {
    E_CHARGE * E_CHARGE / (4.0 * PI * C_LIGHT * C_LIGHT * EPS0 * M_E * mirror_gap)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EftConfig {
    base: SystemConfig,
    lambda0: f64,
    omega_p: f64,
    kappa_z: f64,
    alpha: f64,
}

impl EftConfig {
    pub fn new(base: SystemConfig, lambda0: f64) -> Result<Self> {
        base.validate()?;
        if !(lambda0 >= 1.0) || !lambda0.is_finite() {
            return Err(domain(format!("Λ₀ must be ≥ 1, got {lambda0}")));
        }
        let n_2d = base.n_2d()?;
        Ok(EftConfig {
            lambda0,
            omega_p: plasma_frequency_raw(n_2d, base.mirror_gap),
            kappa_z: base.kappa_z(),
            alpha: alpha_dim(base.mirror_gap),
            base,
        })
    }

    pub fn with_lambda0(&self, lambda0: f64) -> Result<Self> {
        Self::new(self.base.clone(), lambda0)
    }

    pub fn base(&self) -> &SystemConfig {
        &self.base
    }
    pub fn lambda0(&self) -> f64 {
        self.lambda0
    }
    pub fn kappa_z(&self) -> f64 {
        self.kappa_z
    }
    pub fn alpha_dim(&self) -> f64 {
        self.alpha
    }
    pub fn omega_p(&self) -> f64 {
        self.omega_p
    }
    pub fn n_electrons(&self) -> f64 {
        self.base.n_electrons as f64
    }

    /// ω̃²(κ_z) = c²κ_z² + ω_p².
    pub fn omega_tilde_z_sq(&self) -> f64 {
        (C_LIGHT * self.kappa_z).powi(2) + self.omega_p * self.omega_p
    }

    pub fn omega_tilde_z(&self) -> f64 {
        self.omega_tilde_z_sq().sqrt()
    }

    /// Λ = ω̃²(κ_z)·Λ₀.
    pub fn lambda_freq2(&self) -> f64 {
        self.omega_tilde_z_sq() * self.lambda0
    }

    /// 1 ≤ Λ₀ ≤ exp(1/(Nα)). Outside it values are still computed.
    pub fn in_stability_window(&self) -> bool {
        self.lambda0.ln() * self.n_electrons() * self.alpha <= 1.0
    }
}

/// g(Λ) = N·α·ln Λ₀.
pub fn effective_coupling(cfg: &EftConfig) -> f64 {
    cfg.n_electrons() * cfg.alpha * cfg.lambda0.ln()
}

/// Mode sum behind g(Λ) done numerically: (e²N/(ε₀m_eL_z4π²))·∬ d²κ/(c²κ² + ω̃²(κ_z))
/// over the disk c²κ² + ω̃²(κ_z) ≤ Λ.
pub fn effective_coupling_quadrature(cfg: &EftConfig) -> Integral {
    let wz2 = cfg.omega_tilde_z_sq();
    let kmax = (cfg.lambda_freq2() - wz2).max(0.0).sqrt() / C_LIGHT;
    let pre = E_CHARGE * E_CHARGE * cfg.n_electrons()
        / (EPS0 * M_E * cfg.base.mirror_gap * 4.0 * PI * PI);
    let c2 = C_LIGHT * C_LIGHT;
    let mut r = integrate_breaks(
        |k| 2.0 * PI * k / (c2 * k * k + wz2),
        &[0.0, kmax],
        Tolerance {
            abs: 0.0,
            rel: 1e-13,
            max_intervals: 20_000,
        },
    );
    r.value *= pre;
    r.abs_err *= pre;
    r
}

/// Λ_pole = ω̃²(κ_z)·exp(1/(Nα)), where g(Λ) reaches 1.
pub fn landau_pole(cfg: &EftConfig) -> f64 {
    cfg.omega_tilde_z_sq() * (1.0 / (cfg.n_electrons() * cfg.alpha)).exp()
}

/// Λ₀ at the Landau pole, exp(1/(Nα)).
pub fn landau_pole_lambda0(cfg: &EftConfig) -> f64 {
    (1.0 / (cfg.n_electrons() * cfg.alpha)).exp()
}

/// Electronic part (ħ²/2m_e)[Σk² − g(Λ)|K|²/N] of the effective energy (J).
pub fn effective_electron_energy(kinetic_sum: f64, k_total: [f64; 2], cfg: &EftConfig) -> f64 {
    let k2 = k_total[0] * k_total[0] + k_total[1] * k_total[1];
    HBAR * HBAR / (2.0 * M_E) * (kinetic_sum - effective_coupling(cfg) * k2 / cfg.n_electrons())
}

/// Ground-state energy of the effective theory (J): the electronic part plus
/// the photon zero-point energy S·E_p/S.
pub fn effective_energy(kinetic_sum: f64, k_total: [f64; 2], cfg: &EftConfig) -> f64 {
    effective_electron_energy(kinetic_sum, k_total, cfg)
        + cfg.base.area * casimir_energy_density(cfg)
}

/// Per-electron coupling α·ln Λ₀ and the mass it implies.
pub fn renormalized_mass(cfg: &EftConfig) -> Result<f64> {
    let g1 = cfg.alpha * cfg.lambda0.ln();
    if g1 >= 1.0 {
        return Err(Error::Pole(format!("α·ln Λ₀ = {g1} ≥ 1: mass diverges")));
    }
    Ok(M_E / (1.0 - g1))
}

/// μ = ħ²k_F²/(2m_e(Λ)).
pub fn chemical_potential(k_fermi: f64, cfg: &EftConfig) -> Result<f64> {
    Ok(HBAR * HBAR * k_fermi * k_fermi / (2.0 * renormalized_mass(cfg)?))
}

/// ε_k = μ + ħv_F(k − k_F) near the Fermi surface.
pub fn quasiparticle_energy(k: f64, k_fermi: f64, v_fermi: f64, cfg: &EftConfig) -> Result<f64> {
    Ok(chemical_potential(k_fermi, cfg)? + HBAR * v_fermi * (k - k_fermi))
}

const EXCHANGE_COEFF: f64 = 8.0 * std::f64::consts::SQRT_2 / (3.0 * PI);

/// Per-particle energies of the photon-dressed 2D jellium, in Rydberg.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JelliumResult {
    pub rs: f64,
    pub tau: f64,
    pub eps_x: f64,
    pub rs_min: f64,
}

/// m_e/m_e(Λ).
pub fn mass_ratio(cfg: &EftConfig) -> Result<f64> {
    Ok(M_E / renormalized_mass(cfg)?)
}

pub fn jellium(rs: f64, cfg: &EftConfig) -> Result<JelliumResult> {
    jellium_with_ratio(rs, mass_ratio(cfg)?)
}

/// Kinetic m/(m(Λ)·r_s²), exchange −(8√2/3π)/r_s, and the minimizing
/// r_s = (3π/4√2)·m/m(Λ).
pub fn jellium_with_ratio(rs: f64, mass_ratio: f64) -> Result<JelliumResult> {
    if !(rs > 0.0) {
        return Err(domain("r_s must be positive"));
    }
    if !(mass_ratio > 0.0) {
        return Err(domain("mass ratio must be positive"));
    }
    Ok(JelliumResult {
        rs,
        tau: mass_ratio / (rs * rs),
        eps_x: -EXCHANGE_COEFF / rs,
        rs_min: 2.0 * mass_ratio / EXCHANGE_COEFF,
    })
}

/// Double-double value, enough to resolve a minimizer well below sqrt(ε).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
struct Dd(f64, f64);

impl Dd {
    fn quick(a: f64, b: f64) -> Dd {
        let s = a + b;
        Dd(s, b - (s - a))
    }
    fn sum(a: f64, b: f64) -> Dd {
        let s = a + b;
        let v = s - a;
        Dd(s, (a - (s - v)) + (b - v))
    }
    fn add(self, o: Dd) -> Dd {
        let Dd(s, e) = Dd::sum(self.0, o.0);
        Dd::quick(s, e + self.1 + o.1)
    }
    fn neg(self) -> Dd {
        Dd(-self.0, -self.1)
    }
    fn mul(self, o: Dd) -> Dd {
        let p = self.0 * o.0;
        let e = self.0.mul_add(o.0, -p) + self.0 * o.1 + self.1 * o.0;
        Dd::quick(p, e)
    }
    fn recip(x: f64) -> Dd {
        let q = 1.0 / x;
        let r = (-q).mul_add(x, 1.0);
        Dd::quick(q, r / x)
    }
}

/// Argmin of τ(r_s) + ε_x(r_s) by golden-section search, evaluated in
/// double-double so the search is not limited by rounding of the objective.
pub fn jellium_rs_min_numeric(mass_ratio: f64) -> f64 {
    let energy = |rs: f64| {
        let u = Dd::recip(rs);
        u.mul(u)
            .mul(Dd(mass_ratio, 0.0))
            .add(u.mul(Dd(EXCHANGE_COEFF, 0.0)).neg())
    };
    let hi = 20.0 * mass_ratio.max(1e-6);
    golden_section(energy, 1e-3 * hi, hi, 1e-15)
}

/// Photon zero-point energy per area, ħ(Λ₀^{3/2} − 1)ω̃³(κ_z)/(6πc²).
pub fn casimir_energy_density(cfg: &EftConfig) -> f64 {
    HBAR * (cfg.lambda0.powf(1.5) - 1.0) * cfg.omega_tilde_z().powi(3)
        / (6.0 * PI * C_LIGHT * C_LIGHT)
}

/// Pressure on the mirrors, −∂(E_p/S)/∂L_z at fixed Λ₀, n_2D and n_z,
/// including the L_z dependence of ω_p.
pub fn casimir_pressure(cfg: &EftConfig) -> Result<f64> {
    let lz = cfg.base.mirror_gap;
    let nz = cfg.base.cavity_index as f64;
    let n_2d = cfg.base.n_2d()?;
    let c2 = C_LIGHT * C_LIGHT;
    let drive = 2.0 * PI * PI * c2 * nz * nz / lz.powi(3)
        + E_CHARGE * E_CHARGE * n_2d / (M_E * EPS0 * lz * lz);
    let root = (PI * PI * c2 * nz * nz / (lz * lz)
        + E_CHARGE * E_CHARGE * n_2d / (M_E * EPS0 * lz))
        .sqrt();
    Ok(HBAR * (cfg.lambda0.powf(1.5) - 1.0) / (4.0 * PI * c2) * drive * root)
}

/// g¹ᴰ(Λ) = (ω_p/2ω)·arctan(cΛ/ω_p), with Λ a momentum cutoff.
pub fn coupling_1d(lambda_mom: f64, omega: f64, omega_p: f64) -> Result<f64> {
    if !(omega > 0.0) || !(omega_p > 0.0) || !(lambda_mom >= 0.0) {
        return Err(domain("1D coupling needs ω, ω_p > 0 and Λ ≥ 0"));
    }
    Ok(omega_p / (2.0 * omega) * (C_LIGHT * lambda_mom / omega_p).atan())
}

/// (cω_p²/2ω)·∫₀^Λ dκ/(c²κ² + ω_p²) by quadrature.
pub fn coupling_1d_quadrature(lambda_mom: f64, omega: f64, omega_p: f64) -> Integral {
    let c2 = C_LIGHT * C_LIGHT;
    let wp2 = omega_p * omega_p;
    let pre = C_LIGHT * wp2 / (2.0 * omega);
    let knee = (omega_p / C_LIGHT).min(lambda_mom);
    let mut r = integrate_breaks(
        |k| 1.0 / (c2 * k * k + wp2),
        &[0.0, knee, lambda_mom],
        Tolerance {
            abs: 0.0,
            rel: 1e-14,
            max_intervals: 20_000,
        },
    );
    r.value *= pre;
    r.abs_err *= pre;
    r
}

/// g³ᴰ(Λ) = (4α_fs/3π)·ħΛ/(m_e c) for a single electron in free space.
pub fn coupling_3d(lambda_mom: f64) -> f64 {
    4.0 * ALPHA_FS / (3.0 * PI) * HBAR * lambda_mom / (M_E * C_LIGHT)
}

/// m_e/(1 − g³ᴰ).
pub fn mass_3d(lambda_mom: f64) -> Result<f64> {
    let g = coupling_3d(lambda_mom);
    if g >= 1.0 {
        return Err(Error::Pole(format!("g³ᴰ = {g} ≥ 1")));
    }
    Ok(M_E / (1.0 - g))
}

/// m_e + (4α_fs/3π)·ħΛ/c.
pub fn mass_3d_first_order(lambda_mom: f64) -> f64 {
    M_E + 4.0 * ALPHA_FS / (3.0 * PI) * HBAR * lambda_mom / C_LIGHT
}

/// Momentum cutoff where g³ᴰ = 1 (1/m).
pub fn pole_3d() -> f64 {
    1.0 / (4.0 * ALPHA_FS / (3.0 * PI) * HBAR / (M_E * C_LIGHT))
}

/// The four integrals (A, B, C, D) behind the effective χ^A_A over the cutoff disk, in closed form.
pub fn response_integrals(w: f64, eta: f64, cfg: &EftConfig) -> Result<[f64; 4]> {
    if !(eta > 0.0) {
        return Err(domain("response integrals need η > 0"));
    }
    let c2 = C_LIGHT * C_LIGHT;
    let (lo, hi) = (cfg.omega_tilde_z(), cfg.lambda_freq2().sqrt());
    let a = |s: f64| (2.0 * PI / (c2 * eta)) * ((s - w) / eta).atan();
    let b = |s: f64| {
        (PI / c2) * (2.0 * w / eta * ((s - w) / eta).atan() + ((w - s).powi(2) + eta * eta).ln())
    };
    let c = |s: f64| (2.0 * PI / (c2 * eta)) * ((s + w) / eta).atan();
    let d = |s: f64| {
        (PI / c2) * (((w + s).powi(2) + eta * eta).ln() - 2.0 * w / eta * ((s + w) / eta).atan())
    };
    Ok([a(hi) - a(lo), b(hi) - b(lo), c(hi) - c(lo), d(hi) - d(lo)])
}

/// Polar-coordinate quadrature of the same four integrands.
pub fn response_integrals_quadrature(w: f64, eta: f64, cfg: &EftConfig) -> [Integral; 4] {
    let c2 = C_LIGHT * C_LIGHT;
    let wz2 = cfg.omega_tilde_z_sq();
    let kmax = (cfg.lambda_freq2() - wz2).max(0.0).sqrt() / C_LIGHT;
    let breaks = resonance_breaks(w, eta, wz2, kmax);
    let tol = Tolerance {
        abs: 0.0,
        rel: 1e-13,
        max_intervals: 50_000,
    };
    let wt = |k: f64| (c2 * k * k + wz2).sqrt();
    [
        integrate_breaks(
            |k| 2.0 * PI * k / (wt(k) * ((w - wt(k)).powi(2) + eta * eta)),
            &breaks,
            tol,
        ),
        integrate_breaks(
            |k| 2.0 * PI * k / ((w - wt(k)).powi(2) + eta * eta),
            &breaks,
            tol,
        ),
        integrate_breaks(
            |k| 2.0 * PI * k / (wt(k) * ((w + wt(k)).powi(2) + eta * eta)),
            &breaks,
            tol,
        ),
        integrate_breaks(
            |k| 2.0 * PI * k / ((w + wt(k)).powi(2) + eta * eta),
            &breaks,
            tol,
        ),
    ]
}

/// Break points in κ around the resonance ω̃(κ) = |w| so peaks of width η
/// sit on panel boundaries.
fn resonance_breaks(w: f64, eta: f64, wz2: f64, kmax: f64) -> Vec<f64> {
    let mut b = vec![0.0, kmax];
    let k_of = |s: f64| ((s * s - wz2).max(0.0)).sqrt() / C_LIGHT;
    for s in [
        w.abs() - 10.0 * eta,
        w.abs() - eta,
        w.abs(),
        w.abs() + eta,
        w.abs() + 10.0 * eta,
    ] {
        if s * s > wz2 {
            let k = k_of(s);
            if k < kmax {
                b.push(k);
            }
        }
    }
    b.sort_by(f64::total_cmp);
    b.dedup();
    b
}

/// χ^A_A of the effective theory from the logarithm/arctangent closed forms.
/// η = 0 gives the sharp absorption window; Re then diverges at the edges.
pub fn eft_chi_aa(w: f64, eta: f64, cfg: &EftConfig) -> Result<ResponseValue> {
    if !(eta >= 0.0) {
        return Err(domain("η must be non-negative"));
    }
    let lo = cfg.omega_tilde_z();
    let hi = cfg.lambda_freq2().sqrt();
    let unit = 1.0 / (4.0 * C_LIGHT * C_LIGHT * EPS0 * cfg.base.mirror_gap);
    if eta == 0.0 {
        if [lo, hi].iter().any(|&e| w.abs() == e) {
            return Err(Error::Pole(format!("Re χ diverges at |w| = {}", w.abs())));
        }
        let re = unit / (2.0 * PI)
            * (((w - lo).powi(2) / (w - hi).powi(2)).ln()
                + ((w + lo).powi(2) / (w + hi).powi(2)).ln());
        let im = if w > lo && w < hi {
            -unit
        } else if w < -lo && w > -hi {
            unit
        } else {
            0.0
        };
        return Ok(ResponseValue {
            re,
            im,
            kind: ResponseKind::AA,
        });
    }
    let e2 = eta * eta;
    let re = unit / (2.0 * PI)
        * ((((w - lo).powi(2) + e2) / ((w - hi).powi(2) + e2)).ln()
            + (((w + lo).powi(2) + e2) / ((w + hi).powi(2) + e2)).ln());
    let im = unit / PI
        * (((hi + w) / eta).atan() - ((lo + w) / eta).atan() + ((lo - w) / eta).atan()
            - ((hi - w) / eta).atan());
    Ok(ResponseValue {
        re,
        im,
        kind: ResponseKind::AA,
    })
}

/// Assemble χ^A_A from (A, B, C, D): Re = (wA − B − wC − D)/(8π²ε₀L_z),
/// Im = η(C − A)/(8π²ε₀L_z).
pub fn eft_chi_from_integrals(w: f64, eta: f64, abcd: [f64; 4], mirror_gap: f64) -> (f64, f64) {
    let [a, b, c, d] = abcd;
    let pre = 1.0 / (8.0 * PI * PI * EPS0 * mirror_gap);
    (pre * (w * a - b - w * c - d), pre * eta * (c - a))
}
