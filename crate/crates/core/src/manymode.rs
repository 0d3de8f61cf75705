//! Exact treatment of many photon modes: the mode-mode coupling matrix W
//! from the A² term, its orthogonal diagonalization, normal modes, rotated
//! polarizations and the exact running coupling on a 1D mode ladder.

use rayon::prelude::*;

use crate::constants::{C_LIGHT, HBAR, M_E};
use crate::eft::coupling_1d;
use crate::error::{domain, Error, Result};
use crate::jacobi::{Jacobi, Matrix, SymmetricEigensolver};
use crate::singlemode::kinetic_energy;

pub type Vec3 = [f64; 3];

fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mode {
    pub kappa: Vec3,
    pub omega: f64,
    pub polarization: Vec3,
}

impl Mode {
    /// Mode with ω = c|κ|.
    pub fn new(kappa: Vec3, polarization: Vec3) -> Self {
        Mode {
            kappa,
            omega: C_LIGHT * dot(kappa, kappa).sqrt(),
            polarization,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModeSet {
    modes: Vec<Mode>,
}

impl ModeSet {
    /// Validates unit polarizations and, unless `allow_parallel` is set,
    /// transversality ε·κ = 0.
    pub fn new(modes: Vec<Mode>, allow_parallel: bool) -> Result<Self> {
        if modes.is_empty() {
            return Err(domain("mode set is empty"));
        }
        for (i, m) in modes.iter().enumerate() {
            if !(m.omega > 0.0) {
                return Err(domain(format!("mode {i} has non-positive frequency")));
            }
            if (dot(m.polarization, m.polarization) - 1.0).abs() > 1e-12 {
                return Err(domain(format!("mode {i} polarization is not unit length")));
            }
            let k2 = dot(m.kappa, m.kappa);
            if !allow_parallel && k2 > 0.0 && dot(m.polarization, m.kappa).abs() > 1e-12 * k2.sqrt()
            {
                return Err(domain(format!("mode {i} polarization is not transverse")));
            }
        }
        Ok(ModeSet { modes })
    }

    /// Ladder ω_n = n·ω, n = 1..=m, all polarized along x̂ with κ along ẑ.
    /// Frequencies may be in any unit; κ is nominal.
    pub fn ladder_1d(m: usize, omega_fundamental: f64) -> Result<Self> {
        if m == 0 {
            return Err(domain("mode count must be at least 1"));
        }
        let modes = (1..=m)
            .map(|n| Mode {
                kappa: [0.0, 0.0, n as f64 * omega_fundamental / C_LIGHT],
                omega: n as f64 * omega_fundamental,
                polarization: [1.0, 0.0, 0.0],
            })
            .collect();
        Self::new(modes, false)
    }

    /// The two polarizations x̂, ŷ of one cavity mode.
    pub fn polarization_pair(omega: f64) -> Result<Self> {
        let kappa = [0.0, 0.0, omega / C_LIGHT];
        Self::new(
            vec![
                Mode {
                    kappa,
                    omega,
                    polarization: [1.0, 0.0, 0.0],
                },
                Mode {
                    kappa,
                    omega,
                    polarization: [0.0, 1.0, 0.0],
                },
            ],
            false,
        )
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }
}

/// W_αβ = ω̃_α²δ_αβ + ω_p²(ε_α·ε_β)(1 − δ_αβ).
pub fn build_w(modes: &ModeSet, omega_p: f64) -> Result<Matrix> {
    if !(omega_p >= 0.0) {
        return Err(domain("ω_p must be non-negative"));
    }
    let m = modes.modes();
    let wp2 = omega_p * omega_p;
    Ok(Matrix::from_fn(m.len(), |a, b| {
        if a == b {
            m[a].omega * m[a].omega + wp2
        } else {
            wp2 * dot(m[a].polarization, m[b].polarization)
        }
    }))
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormalModes {
    /// Ω_γ ascending.
    pub omega: Vec<f64>,
    /// U_αγ: bare mode α, normal mode γ.
    pub u: Matrix,
    pub eps_tilde: Vec<Vec3>,
    pub omega_p: f64,
    pub sweeps: usize,
}

/// Orthogonal diagonalization of W; returns (Ω_γ, U) with Ω_γ² the eigenvalues.
pub fn diagonalize_w(w: &Matrix) -> Result<(Vec<f64>, Matrix, usize)> {
    let e = Jacobi::default().solve(w)?;
    let omega = e.values.iter().map(|&l| l.max(0.0).sqrt()).collect();
    Ok((omega, e.vectors, e.sweeps))
}

/// ε̃_γ = Σ_α ε_α U_αγ.
pub fn rotated_polarizations(modes: &ModeSet, u: &Matrix) -> Result<Vec<Vec3>> {
    let m = modes.modes();
    if u.dim() != m.len() {
        return Err(domain(format!(
            "U is {0}×{0} but there are {1} modes",
            u.dim(),
            m.len()
        )));
    }
    Ok((0..m.len())
        .map(|g| {
            let mut e = [0.0; 3];
            for (a, mode) in m.iter().enumerate() {
                let c = u.get(a, g);
                for (ek, pk) in e.iter_mut().zip(mode.polarization) {
                    *ek += pk * c;
                }
            }
            e
        })
        .collect())
}

impl NormalModes {
    pub fn solve(modes: &ModeSet, omega_p: f64) -> Result<Self> {
        let w = build_w(modes, omega_p)?;
        let (omega, u, sweeps) = diagonalize_w(&w)?;
        let eps_tilde = rotated_polarizations(modes, &u)?;
        Ok(NormalModes {
            omega,
            u,
            eps_tilde,
            omega_p,
            sweeps,
        })
    }

    pub fn len(&self) -> usize {
        self.omega.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omega.is_empty()
    }

    fn check_nonzero(&self) -> Result<()> {
        match self.omega.iter().position(|&w| w == 0.0) {
            Some(g) => Err(Error::DegenerateMode(g)),
            None => Ok(()),
        }
    }
}

/// E = (ħ²/2m_e)[Σk² − (ω_p²/N)Σ_γ(ε̃_γ·K)²/Ω_γ²] + Σ_γ ħΩ_γ(n_γ + ½) in SI units.
pub fn manymode_spectrum(
    n_gamma: &[u32],
    k_total: [f64; 2],
    kinetic_sum: f64,
    normal: &NormalModes,
    omega_p: f64,
    n_electrons: u64,
) -> Result<f64> {
    if n_gamma.len() != normal.len() {
        return Err(domain(format!(
            "{} quantum numbers for {} modes",
            n_gamma.len(),
            normal.len()
        )));
    }
    normal.check_nonzero()?;
    let mut photons = 0.0;
    let mut drag = 0.0;
    for (g, &n) in n_gamma.iter().enumerate() {
        let om = normal.omega[g];
        let e = normal.eps_tilde[g];
        let proj = e[0] * k_total[0] + e[1] * k_total[1];
        photons += HBAR * om * (n as f64 + 0.5);
        drag += proj * proj / (om * om);
    }
    let coupled = omega_p * omega_p / n_electrons as f64 * drag * HBAR * HBAR / (2.0 * M_E);
    Ok(photons + kinetic_energy(kinetic_sum) - coupled)
}

/// Ground-state photon number in each bare mode α,
/// Σ_γ U_αγ²(Ω_γ − ω_α)²/(4ω_αΩ_γ).
pub fn ground_photon_occupations(modes: &ModeSet, normal: &NormalModes) -> Result<Vec<f64>> {
    normal.check_nonzero()?;
    let m = modes.modes();
    if normal.len() != m.len() {
        return Err(domain(format!(
            "{} normal modes for {} bare modes",
            normal.len(),
            m.len()
        )));
    }
    let wp2 = normal.omega_p * normal.omega_p;
    Ok(m.iter()
        .enumerate()
        .map(|(a, mode)| {
            let wa = mode.omega;
            (0..normal.len())
                .map(|g| {
                    let om = normal.omega[g];
                    // Ω_γ² − ω_α² as the Rayleigh quotient of W − ω_α², formed without cancellation
                    let shift: f64 = m
                        .iter()
                        .enumerate()
                        .map(|(b, mb)| {
                            normal.u.get(b, g).powi(2) * (mb.omega - wa) * (mb.omega + wa)
                        })
                        .sum::<f64>()
                        + wp2 * dot(normal.eps_tilde[g], normal.eps_tilde[g]);
                    let diff = shift / (om + wa);
                    normal.u.get(a, g).powi(2) * diff * diff / (4.0 * wa * om)
                })
                .sum()
        })
        .collect())
}

/// Σ_γ ω_p²|ε̃_γ|²/Ω_γ² for a mode set.
pub fn exact_coupling(normal: &NormalModes, omega_p: f64) -> Result<f64> {
    normal.check_nonzero()?;
    Ok(normal
        .omega
        .iter()
        .zip(&normal.eps_tilde)
        .map(|(om, e)| omega_p * omega_p * dot(*e, *e) / (om * om))
        .sum())
}

/// Exact coupling on the parallel-polarized ladder ω_n = n·ω, n ≤ M.
pub fn exact_coupling_1d(m: usize, omega_fundamental: f64, omega_p: f64) -> Result<f64> {
    let modes = ModeSet::ladder_1d(m, omega_fundamental)?;
    exact_coupling(&NormalModes::solve(&modes, omega_p)?, omega_p)
}

/// The continuum 1D coupling at the cutoff matching M ladder modes, cΛ = M·ω.
pub fn eft_coupling_1d_for_modes(m: usize, omega_fundamental: f64, omega_p: f64) -> Result<f64> {
    coupling_1d(
        m as f64 * omega_fundamental / C_LIGHT,
        omega_fundamental,
        omega_p,
    )
}

/// 100·|ω̃ − Ω_l|/Ω_l for each ω_p/ω, with Ω_l the lowest normal mode of an
/// M-mode parallel ladder and ω̃ = sqrt(ω² + ω_p²) of its first mode.
pub fn lowest_mode_scan(ratios: &[f64], m: usize) -> Result<Vec<(f64, f64)>> {
    ratios
        .par_iter()
        .map(|&r| {
            let (omega, _, _) = diagonalize_w(&build_w(&ModeSet::ladder_1d(m, 1.0)?, r)?)?;
            let lowest = omega[0];
            let cutoff = 1f64.hypot(r);
            Ok((r, 100.0 * (cutoff - lowest).abs() / lowest))
        })
        .collect()
}

/// (M, g_ex(M)) for each requested mode count at ω_p/ω = `ratio`.
pub fn coupling_run(ratio: f64, mode_counts: &[usize]) -> Result<Vec<(usize, f64)>> {
    mode_counts
        .par_iter()
        .map(|&m| Ok((m, exact_coupling_1d(m, 1.0, ratio)?)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jacobi::{orthogonality_error, reconstruction_error};
    use crate::singlemode::{channel_energy, photon_occupation_per_polarization};
    use proptest::prelude::*;

    #[test]
    fn single_mode_matrix() {
        let modes = ModeSet::ladder_1d(1, 2.0).unwrap();
        let w = build_w(&modes, 1.5).unwrap();
        assert_eq!(w.get(0, 0), 4.0 + 2.25);
        let n = NormalModes::solve(&modes, 1.5).unwrap();
        assert!((n.omega[0] - 2.5).abs() < 1e-15);
        assert_eq!(n.u.get(0, 0), 1.0);
    }

    #[test]
    fn parallel_pair_bright_dark() {
        let (w0, wp) = (1.3, 0.7);
        let k = [0.0, 0.0, w0 / C_LIGHT];
        let e = [1.0, 0.0, 0.0];
        let modes = ModeSet::new(
            vec![
                Mode {
                    kappa: k,
                    omega: w0,
                    polarization: e
                };
                2
            ],
            false,
        )
        .unwrap();
        let w = build_w(&modes, wp).unwrap();
        assert_eq!(w.get(0, 1), wp * wp);
        let n = NormalModes::solve(&modes, wp).unwrap();
        assert!((n.omega[0].powi(2) - w0 * w0).abs() < 1e-14);
        assert!((n.omega[1].powi(2) - (w0 * w0 + 2.0 * wp * wp)).abs() < 1e-14);
        // dark mode carries no polarization, bright mode √2·ε
        assert!(dot(n.eps_tilde[0], n.eps_tilde[0]) < 1e-30);
        assert!((dot(n.eps_tilde[1], n.eps_tilde[1]) - 2.0).abs() < 1e-14);
    }

    #[test]
    fn orthogonal_polarizations_decouple() {
        let modes = ModeSet::polarization_pair(2.0).unwrap();
        let w = build_w(&modes, 3.0).unwrap();
        assert_eq!(w.get(0, 1), 0.0);
        let n = NormalModes::solve(&modes, 3.0).unwrap();
        assert_eq!(n.eps_tilde, vec![[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]);
    }

    #[test]
    fn validation() {
        assert!(ModeSet::new(vec![], false).is_err());
        let bad = Mode {
            kappa: [0.0, 0.0, 1.0],
            omega: 1.0,
            polarization: [0.0, 0.0, 1.0],
        };
        assert!(ModeSet::new(vec![bad], false).is_err());
        assert!(ModeSet::new(vec![bad], true).is_ok());
        let long = Mode {
            polarization: [2.0, 0.0, 0.0],
            ..bad
        };
        assert!(ModeSet::new(vec![long], true).is_err());
        assert!(ModeSet::ladder_1d(0, 1.0).is_err());
        let modes = ModeSet::ladder_1d(3, 1.0).unwrap();
        assert!(rotated_polarizations(&modes, &Matrix::identity(2)).is_err());
    }

    #[test]
    fn identity_rotation_keeps_polarizations() {
        let modes = ModeSet::ladder_1d(4, 1.0).unwrap();
        let eps = rotated_polarizations(&modes, &Matrix::identity(4)).unwrap();
        assert!(eps.iter().all(|e| *e == [1.0, 0.0, 0.0]));
    }

    #[test]
    fn m1_matches_single_mode_channel() {
        let (w0, wp, n_el) = (3.0e14, 2.2e14, 5000u64);
        let modes = ModeSet::ladder_1d(1, w0).unwrap();
        let normal = NormalModes::solve(&modes, wp).unwrap();
        let wt = w0.hypot(wp);
        let gamma = wp * wp / (w0 * w0 + wp * wp);
        let (kx, ksum) = (3e9, 7e19);
        let e = manymode_spectrum(&[2], [kx, 0.0], ksum, &normal, wp, n_el).unwrap();
        let s = channel_energy(2, kx, wt, gamma, n_el as f64) + kinetic_energy(ksum);
        assert!((e / s - 1.0).abs() < 1e-14);
        let occ = ground_photon_occupations(&modes, &normal).unwrap();
        let so = photon_occupation_per_polarization(w0, wp).unwrap();
        assert!((occ[0] / so - 1.0).abs() < 1e-14);
    }

    #[test]
    fn two_mode_spectrum_by_hand() {
        // parallel degenerate pair: only the bright mode Ω_b² = ω² + 2ω_p², ε̃ = √2 x̂, drags K
        let (w0, wp, n_el) = (2.0e14, 1.0e14, 10u64);
        let k = [0.0, 0.0, w0 / C_LIGHT];
        let modes = ModeSet::new(
            vec![
                Mode {
                    kappa: k,
                    omega: w0,
                    polarization: [1.0, 0.0, 0.0]
                };
                2
            ],
            false,
        )
        .unwrap();
        let normal = NormalModes::solve(&modes, wp).unwrap();
        let (kx, ksum) = (1e9, 4e18);
        let ob2 = w0 * w0 + 2.0 * wp * wp;
        let expect = HBAR * (w0 * 1.5 + ob2.sqrt() * 0.5)
            + HBAR * HBAR / (2.0 * M_E) * (ksum - wp * wp / n_el as f64 * 2.0 * kx * kx / ob2);
        let e = manymode_spectrum(&[1, 0], [kx, 0.0], ksum, &normal, wp, n_el).unwrap();
        assert!((e / expect - 1.0).abs() < 1e-13);
        let zero_k = manymode_spectrum(&[0, 0], [0.0, 0.0], 0.0, &normal, wp, n_el).unwrap();
        assert!((zero_k / (0.5 * HBAR * (w0 + ob2.sqrt())) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn spectrum_errors() {
        let normal = NormalModes::solve(&ModeSet::ladder_1d(2, 1.0).unwrap(), 0.5).unwrap();
        assert!(manymode_spectrum(&[0], [0.0; 2], 0.0, &normal, 0.5, 1).is_err());
        let mut zero = normal.clone();
        zero.omega[0] = 0.0;
        assert_eq!(
            manymode_spectrum(&[0, 0], [0.0; 2], 0.0, &zero, 0.5, 1),
            Err(Error::DegenerateMode(0))
        );
    }

    #[test]
    fn exact_coupling_m1_is_gamma() {
        let g = exact_coupling_1d(1, 1.0, 0.8).unwrap();
        assert!((g - 0.64 / 1.64).abs() < 1e-15);
    }

    #[test]
    fn exact_coupling_rank_one_oracle() {
        // W = diag(ω_n²) + ω_p²·11ᵀ ⇒ g = ω_p²s/(1 + ω_p²s), s = Σ 1/ω_n²
        for &(m, r) in &[(7usize, 0.1), (50, 0.5), (120, 1.0)] {
            let s: f64 = (1..=m).map(|n| 1.0 / (n * n) as f64).sum();
            let oracle = r * r * s / (1.0 + r * r * s);
            let g = exact_coupling_1d(m, 1.0, r).unwrap();
            assert!((g / oracle - 1.0).abs() < 1e-10, "{m} {r}: {g} vs {oracle}");
        }
    }

    #[test]
    fn ladder_invariants() {
        let modes = ModeSet::ladder_1d(60, 1.0).unwrap();
        let w = build_w(&modes, 0.9).unwrap();
        let e = Jacobi::default().solve(&w).unwrap();
        assert!(reconstruction_error(&w, &e) < 1e-12);
        assert!(orthogonality_error(&e.vectors) < 1e-12);
        assert!((e.values.iter().sum::<f64>() / w.trace() - 1.0).abs() < 1e-13);
        let n = NormalModes::solve(&modes, 0.9).unwrap();
        let norm: f64 = n.eps_tilde.iter().map(|e| dot(*e, *e)).sum();
        assert!((norm - 60.0).abs() < 1e-10);
    }

    #[test]
    fn scan_zero_ratio_is_zero() {
        let s = lowest_mode_scan(&[0.0], 20).unwrap();
        assert!(s[0].1.abs() < 1e-12);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn polarization_norm_conserved(m in 1usize..12, r in 0.0f64..2.0, seed in any::<u64>()) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let modes: Vec<Mode> = (0..m).map(|_| {
                let th: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
                Mode { kappa: [0.0, 0.0, 1.0], omega: rng.gen_range(0.5..3.0), polarization: [th.cos(), th.sin(), 0.0] }
            }).collect();
            let set = ModeSet::new(modes, false).unwrap();
            let n = NormalModes::solve(&set, r).unwrap();
            let total: f64 = n.eps_tilde.iter().map(|e| dot(*e, *e)).sum();
            prop_assert!((total - m as f64).abs() < 1e-10);
            let w = build_w(&set, r).unwrap();
            let sq: f64 = n.omega.iter().map(|o| o * o).sum();
            prop_assert!((sq / w.trace() - 1.0).abs() < 1e-12);
        }

        #[test]
        fn exact_coupling_monotone(m in 1usize..40, r in 0.05f64..1.5) {
            let a = exact_coupling_1d(m, 1.0, r).unwrap();
            let b = exact_coupling_1d(m + 1, 1.0, r).unwrap();
            prop_assert!(b > a);
            prop_assert!(b < r * std::f64::consts::PI / 2.0);
        }
    }
}
