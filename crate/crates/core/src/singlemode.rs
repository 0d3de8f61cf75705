//! Exact single-mode solution: eigenspectrum, photon occupation, the k-space
//! energy functional and the critical/unstable regimes.

use std::f64::consts::PI;
use std::io::{Read, Write};

use rayon::prelude::*;

use crate::constants::{HBAR, M_E};
use crate::error::{domain, Error, Result};
use crate::system::{classify_phase, dressed_frequency, DerivedScales, Phase, PHASE_TOL};

/// Quantum numbers of an eigenstate in aggregate form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumIndex {
    pub n1: u32,
    pub n2: u32,
    /// Collective momentum K = Σ k_j (1/m).
    pub k_total: [f64; 2],
    /// Σ |k_j|² (1/m²).
    pub kinetic_sum: f64,
}

impl SpectrumIndex {
    pub fn from_momenta(n1: u32, n2: u32, momenta: &[[f64; 2]]) -> Self {
        let mut k_total = [0.0; 2];
        let mut kinetic_sum = 0.0;
        for k in momenta {
            k_total[0] += k[0];
            k_total[1] += k[1];
            kinetic_sum += k[0] * k[0] + k[1] * k[1];
        }
        SpectrumIndex {
            n1,
            n2,
            k_total,
            kinetic_sum,
        }
    }
}

pub fn kinetic_energy(kinetic_sum: f64) -> f64 {
    HBAR * HBAR * kinetic_sum / (2.0 * M_E)
}

/// Energy of one polarization channel: ħω̃(n+½) − (γ/N)(ħ k_∥)²/(2m_e),
/// with k_∥ the projection of K on the polarization.
pub fn channel_energy(
    n: u32,
    k_parallel: f64,
    omega_tilde: f64,
    gamma: f64,
    n_electrons: f64,
) -> f64 {
    HBAR * omega_tilde * (n as f64 + 0.5)
        - (gamma / n_electrons) * (HBAR * k_parallel).powi(2) / (2.0 * M_E)
}

fn spectrum(idx: &SpectrumIndex, omega_tilde: f64, gamma: f64, n_electrons: f64) -> f64 {
    channel_energy(idx.n1, idx.k_total[0], omega_tilde, gamma, n_electrons)
        + channel_energy(idx.n2, idx.k_total[1], omega_tilde, gamma, n_electrons)
        + kinetic_energy(idx.kinetic_sum)
}

/// Eigenenergy (J) with polarizations along x̂ and ŷ.
pub fn eigenenergy(idx: &SpectrumIndex, scales: &DerivedScales) -> Result<f64> {
    if !scales.is_si() {
        return Err(Error::UnitMode("eigenenergy"));
    }
    Ok(spectrum(
        idx,
        scales.omega_tilde(),
        scales.gamma(),
        scales.n_electrons() as f64,
    ))
}

/// γ' = ω_p²/ω², the coupling when the diamagnetic term is dropped.
pub fn no_a2_coupling(omega: f64, omega_p: f64) -> Result<f64> {
    if !(omega > 0.0) {
        return Err(domain("ω must be positive without the A² term"));
    }
    Ok((omega_p / omega).powi(2))
}

/// Spectrum without the A² term: ω̃ → ω and γ → γ'.
pub fn eigenenergy_no_a2(
    idx: &SpectrumIndex,
    omega: f64,
    omega_p: f64,
    n_electrons: u64,
) -> Result<f64> {
    let gp = no_a2_coupling(omega, omega_p)?;
    Ok(spectrum(idx, omega, gp, n_electrons as f64))
}

/// Virtual photons per polarization in the ground state, (ω̃−ω)²/(4ωω̃).
pub fn photon_occupation_per_polarization(omega: f64, omega_p: f64) -> Result<f64> {
    if !(omega > 0.0) {
        return Err(domain("photon occupation diverges at ω = 0"));
    }
    let wt = dressed_frequency(omega, omega_p)?;
    let diff = omega_p * omega_p / (wt + omega);
    Ok(diff * diff / (4.0 * omega * wt))
}

/// Total ground-state photon number over both polarizations, (ω̃−ω)²/(2ωω̃).
pub fn ground_photon_occupation(omega: f64, omega_p: f64) -> Result<f64> {
    Ok(2.0 * photon_occupation_per_polarization(omega, omega_p)?)
}

/// Moments of a k-space occupancy, all with the spin factor included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistributionMoments {
    /// Kinetic moment (1/m⁴).
    pub t_d: f64,
    /// Collective-momentum density (1/m³).
    pub k_d: [f64; 2],
    /// Density (1/m²).
    pub n_2d: f64,
}

impl DistributionMoments {
    /// Moments of a fully occupied disk of radius `k_fermi` centred at `center`.
    pub fn fermi_disk(k_fermi: f64, center: [f64; 2]) -> Self {
        let n_2d = k_fermi * k_fermi / (2.0 * PI);
        let c2 = center[0] * center[0] + center[1] * center[1];
        DistributionMoments {
            t_d: k_fermi.powi(4) / (4.0 * PI) + c2 * n_2d,
            k_d: [center[0] * n_2d, center[1] * n_2d],
            n_2d,
        }
    }
}

/// Uniform rectangular k-space grid of spin-summed occupancies f ∈ [0, 2].
/// Cell (i, j) covers `origin + [i, i+1)·spacing` and is sampled at its centre.
#[derive(Debug, Clone, PartialEq)]
pub struct OccupancyGrid {
    origin: [f64; 2],
    spacing: [f64; 2],
    nx: usize,
    ny: usize,
    /// Row-major in x: index = i·ny + j.
    values: Vec<f64>,
}

impl OccupancyGrid {
    pub fn new(
        origin: [f64; 2],
        spacing: [f64; 2],
        nx: usize,
        ny: usize,
        values: Vec<f64>,
    ) -> Result<Self> {
        if nx == 0 || ny == 0 {
            return Err(domain("occupancy grid is empty"));
        }
        if !(spacing[0] > 0.0 && spacing[1] > 0.0) {
            return Err(domain("grid spacing must be positive"));
        }
        if values.len() != nx * ny {
            return Err(domain(format!(
                "expected {} occupancies, got {}",
                nx * ny,
                values.len()
            )));
        }
        let values = values.into_iter().map(|f| f.clamp(0.0, 2.0)).collect();
        Ok(OccupancyGrid {
            origin,
            spacing,
            nx,
            ny,
            values,
        })
    }

    /// Square grid of `cells` × `cells` over [-half_width, half_width]² with
    /// occupancy `f(kx, ky)` at each centre.
    pub fn from_fn<F: Fn(f64, f64) -> f64>(half_width: f64, cells: usize, f: F) -> Result<Self> {
        let h = 2.0 * half_width / cells as f64;
        let mut values = Vec::with_capacity(cells * cells);
        for i in 0..cells {
            for j in 0..cells {
                let kx = -half_width + (i as f64 + 0.5) * h;
                let ky = -half_width + (j as f64 + 0.5) * h;
                values.push(f(kx, ky));
            }
        }
        Self::new([-half_width; 2], [h; 2], cells, cells, values)
    }

    /// Doubly occupied Fermi disk with each cell weighted by the exact
    /// fraction of its area inside the disk.
    pub fn fermi_disk(
        center: [f64; 2],
        k_fermi: f64,
        half_width: f64,
        cells: usize,
    ) -> Result<Self> {
        if !(k_fermi > 0.0) {
            return Err(domain("disk radius must be positive"));
        }
        let h = 2.0 * half_width / cells as f64;
        let cell_area = h * h;
        Self::from_fn(half_width, cells, |kx, ky| {
            let (x, y) = (kx - center[0], ky - center[1]);
            let r = x.hypot(y);
            if r + h < k_fermi {
                2.0
            } else if r - h > k_fermi {
                0.0
            } else {
                let a = disk_rect_area(k_fermi, x - 0.5 * h, x + 0.5 * h, y - 0.5 * h, y + 0.5 * h);
                2.0 * a / cell_area
            }
        })
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.nx, self.ny)
    }

    pub fn spacing(&self) -> [f64; 2] {
        self.spacing
    }

    pub fn cell_center(&self, i: usize, j: usize) -> [f64; 2] {
        [
            self.origin[0] + (i as f64 + 0.5) * self.spacing[0],
            self.origin[1] + (j as f64 + 0.5) * self.spacing[1],
        ]
    }

    pub fn occupancy(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.ny + j]
    }

    /// Write `kx,ky,f` rows (cell centres).
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let io = |e: csv::Error| domain(format!("csv write failed: {e}"));
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["kx", "ky", "f"]).map_err(io)?;
        for i in 0..self.nx {
            for j in 0..self.ny {
                let [kx, ky] = self.cell_center(i, j);
                w.write_record([
                    kx.to_string(),
                    ky.to_string(),
                    self.occupancy(i, j).to_string(),
                ])
                .map_err(io)?;
            }
        }
        w.flush()
            .map_err(|e| domain(format!("csv write failed: {e}")))?;
        Ok(())
    }

    /// Read `kx,ky,f` rows describing a complete uniform grid.
    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(input);
        let headers = rdr
            .headers()
            .map_err(|e| domain(format!("csv: {e}")))?
            .clone();
        if headers.iter().collect::<Vec<_>>() != ["kx", "ky", "f"] {
            return Err(domain("occupancy csv header must be kx,ky,f"));
        }
        let mut rows = Vec::new();
        for (n, rec) in rdr.records().enumerate() {
            let rec = rec.map_err(|e| domain(format!("csv: {e}")))?;
            let field = |k: usize| -> Result<f64> {
                rec.get(k)
                    .and_then(|s| s.trim().parse().ok())
                    .ok_or_else(|| {
                        domain(format!("csv row {}: bad number in column {}", n + 2, k + 1))
                    })
            };
            rows.push([field(0)?, field(1)?, field(2)?]);
        }
        if rows.is_empty() {
            return Err(domain("occupancy grid is empty"));
        }
        let axis = |c: usize| -> Result<(f64, f64, usize)> {
            let mut v: Vec<f64> = rows.iter().map(|r| r[c]).collect();
            v.sort_by(f64::total_cmp);
            v.dedup();
            if v.len() == 1 {
                return Err(domain("grid needs at least two cells per axis"));
            }
            let h = (v[v.len() - 1] - v[0]) / (v.len() - 1) as f64;
            for w in v.windows(2) {
                if ((w[1] - w[0]) / h - 1.0).abs() > 1e-6 {
                    return Err(domain("grid is not uniform"));
                }
            }
            Ok((v[0] - 0.5 * h, h, v.len()))
        };
        let (ox, hx, nx) = axis(0)?;
        let (oy, hy, ny) = axis(1)?;
        if rows.len() != nx * ny {
            return Err(domain("grid is incomplete"));
        }
        let mut values = vec![f64::NAN; nx * ny];
        for r in &rows {
            let i = ((r[0] - ox) / hx - 0.5).round() as usize;
            let j = ((r[1] - oy) / hy - 0.5).round() as usize;
            values[i * ny + j] = r[2];
        }
        if values.iter().any(|v| v.is_nan()) {
            return Err(domain("grid has duplicate cells"));
        }
        Self::new([ox, oy], [hx, hy], nx, ny, values)
    }
}

/// Antiderivative of sqrt(R² − x²), clamped to [−R, R].
fn chord_prim(x: f64, r: f64) -> f64 {
    let x = x.clamp(-r, r);
    0.5 * (x * (r * r - x * x).max(0.0).sqrt() + r * r * (x / r).asin())
}

/// Area of the centred disk of radius r inside {x0 ≤ X ≤ x1, Y ≤ y}.
fn disk_strip_area(r: f64, x0: f64, x1: f64, y: f64) -> f64 {
    let (x0, x1) = (x0.max(-r), x1.min(r));
    if x1 <= x0 {
        return 0.0;
    }
    let chord = 2.0 * (chord_prim(x1, r) - chord_prim(x0, r));
    if y < 0.0 {
        return chord - disk_strip_area(r, x0, x1, -y);
    }
    // integrand s + min(y, s) with s = sqrt(r² − X²)
    let a = (r * r - y * y).max(0.0).sqrt();
    let mut area = 0.5 * chord;
    let (lo, hi) = (x0.max(-a), x1.min(a));
    if hi > lo {
        area += y * (hi - lo);
    }
    let left_hi = x1.min(-a);
    if left_hi > x0 {
        area += chord_prim(left_hi, r) - chord_prim(x0, r);
    }
    let right_lo = x0.max(a);
    if x1 > right_lo {
        area += chord_prim(x1, r) - chord_prim(right_lo, r);
    }
    area
}

/// Area of disk(radius r, centred at 0) ∩ [x0, x1] × [y0, y1].
pub(crate) fn disk_rect_area(r: f64, x0: f64, x1: f64, y0: f64, y1: f64) -> f64 {
    (disk_strip_area(r, x0, x1, y1) - disk_strip_area(r, x0, x1, y0)).max(0.0)
}

/// Midpoint-rule moments (1/(2π)²)·Σ f·{k², k, 1}·ΔkxΔky.
pub fn distribution_moments(grid: &OccupancyGrid) -> Result<DistributionMoments> {
    if grid.values.is_empty() {
        return Err(domain("occupancy grid is empty"));
    }
    let w = grid.spacing[0] * grid.spacing[1] / (4.0 * PI * PI);
    // per-row partial sums, then reduced in row order for determinism
    let rows: Vec<[f64; 4]> = (0..grid.nx)
        .into_par_iter()
        .map(|i| {
            let mut acc = [0.0; 4];
            for j in 0..grid.ny {
                let f = grid.occupancy(i, j);
                if f == 0.0 {
                    continue;
                }
                let [kx, ky] = grid.cell_center(i, j);
                acc[0] += f * (kx * kx + ky * ky);
                acc[1] += f * kx;
                acc[2] += f * ky;
                acc[3] += f;
            }
            acc
        })
        .collect();
    let mut s = [0.0; 4];
    for r in rows {
        for k in 0..4 {
            s[k] += r[k];
        }
    }
    Ok(DistributionMoments {
        t_d: s[0] * w,
        k_d: [s[1] * w, s[2] * w],
        n_2d: s[3] * w,
    })
}

fn require_density(m: &DistributionMoments) -> Result<()> {
    if !(m.n_2d > 0.0) {
        return Err(domain("distribution has zero density"));
    }
    Ok(())
}

/// ℰ = (ħ²/2m_e)[t_D + 2q·K_D + q²n − (γ/n)Σ_λ(ε_λ·K_D + ε_λ·q n)²] in J/m².
pub fn energy_density(m: &DistributionMoments, q: [f64; 2], gamma: f64) -> Result<f64> {
    require_density(m)?;
    let n = m.n_2d;
    let mut bracket = m.t_d;
    for (k, ql) in m.k_d.iter().zip(q) {
        let shifted = k + ql * n;
        bracket += 2.0 * ql * k + ql * ql * n - gamma / n * shifted * shifted;
    }
    Ok(HBAR * HBAR / (2.0 * M_E) * bracket)
}

/// q₀ = −K_D/n_2D, the γ-independent optimal origin.
pub fn optimal_origin(m: &DistributionMoments) -> Result<[f64; 2]> {
    require_density(m)?;
    Ok([-m.k_d[0] / m.n_2d, -m.k_d[1] / m.n_2d])
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GroundState {
    /// Minimum over origins, attained at `origin`.
    Unique {
        origin: [f64; 2],
        energy_density: f64,
    },
    /// γ = 1: every origin gives the same energy; no canonical state.
    Critical { energy_density: f64 },
    /// γ > 1: energy unbounded below.
    Unstable,
}

/// Minimize the energy functional of a fixed shape over its origin.
pub fn ground_state(m: &DistributionMoments, gamma: f64) -> Result<GroundState> {
    let q0 = optimal_origin(m)?;
    Ok(match classify_phase(gamma, PHASE_TOL) {
        Phase::Stable => GroundState::Unique {
            origin: q0,
            energy_density: energy_density(m, q0, gamma)?,
        },
        Phase::Critical => GroundState::Critical {
            energy_density: energy_density(m, q0, gamma)?,
        },
        Phase::Unstable => GroundState::Unstable,
    })
}

/// Energies ℰ(q_x, 0) along a shift sequence, demonstrating the missing
/// lower bound for γ > 1 (flat at γ = 1).
pub fn instability_witness(gamma: f64, m: &DistributionMoments, qx: &[f64]) -> Result<Vec<f64>> {
    if classify_phase(gamma, PHASE_TOL) == Phase::Stable {
        return Err(Error::Precondition(format!(
            "instability witness needs γ ≥ 1, got {gamma}"
        )));
    }
    if qx.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Precondition(
            "q_x sequence must be strictly increasing".into(),
        ));
    }
    qx.iter()
        .map(|&q| energy_density(m, [q, 0.0], gamma))
        .collect()
}

pub fn strictly_decreasing(xs: &[f64]) -> bool {
    xs.windows(2).all(|w| w[1] < w[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::SystemConfig;
    use proptest::prelude::*;

    fn scales() -> DerivedScales {
        DerivedScales::new(&SystemConfig::si(100, 1e-10, 2e-6)).unwrap()
    }

    #[test]
    fn decoupled_spectrum() {
        let s = scales();
        let ks = [[1e7, 2e6], [-3e6, 4e6], [5e5, -1e7]];
        let idx = SpectrumIndex::from_momenta(2, 1, &ks);
        let e = eigenenergy(&idx, &s).unwrap();
        // independent sum over the coupled pieces
        let kin: f64 = ks
            .iter()
            .map(|k| HBAR * HBAR * (k[0] * k[0] + k[1] * k[1]) / (2.0 * M_E))
            .sum();
        let k2 = idx.k_total[0].powi(2) + idx.k_total[1].powi(2);
        let expect =
            HBAR * s.omega_tilde() * 4.0 + kin - s.gamma() / 100.0 * HBAR * HBAR * k2 / (2.0 * M_E);
        assert!((e / expect - 1.0).abs() < 1e-14);
    }

    #[test]
    fn zero_momentum_spectrum_is_ladder() {
        let s = scales();
        let idx = SpectrumIndex {
            n1: 3,
            n2: 5,
            k_total: [0.0, 0.0],
            kinetic_sum: 2e15,
        };
        let e = eigenenergy(&idx, &s).unwrap();
        let expect = HBAR * s.omega_tilde() * 9.0 + kinetic_energy(2e15);
        assert!((e / expect - 1.0).abs() < 1e-14);
    }

    #[test]
    fn single_electron_mass_suppression() {
        let cfg = SystemConfig::si(1, 1e-12, 1e-6);
        let s = DerivedScales::new(&cfg).unwrap();
        let k = 3e8;
        let idx = SpectrumIndex::from_momenta(0, 0, &[[k, 0.0]]);
        let e = eigenenergy(&idx, &s).unwrap();
        let expect = HBAR * s.omega_tilde() + HBAR * HBAR * k * k / (2.0 * M_E) * (1.0 - s.gamma());
        assert!((e / expect - 1.0).abs() < 1e-13);
    }

    #[test]
    fn no_a2_couplings() {
        assert_eq!(no_a2_coupling(2.0, 2.0).unwrap(), 1.0);
        assert_eq!(no_a2_coupling(1.0, 2.0).unwrap(), 4.0);
        assert!(no_a2_coupling(1.0, 0.5).unwrap() < 1.0);
        assert!(no_a2_coupling(0.0, 1.0).is_err());
    }

    #[test]
    fn occupation_examples() {
        assert_eq!(ground_photon_occupation(1.0, 0.0).unwrap(), 0.0);
        assert!((ground_photon_occupation(1.0, 3f64.sqrt()).unwrap() - 0.25).abs() < 1e-15);
        assert!(ground_photon_occupation(0.0, 1.0).is_err());
    }

    #[test]
    fn occupation_square_root_law() {
        // ω_p ∝ sqrt(n_e); deep in the large-ω_p regime ⟨N⟩ ∝ ω_p/ω ∝ sqrt(n_e)
        let ne = [1e8, 1e9, 1e10, 1e11];
        let pts: Vec<(f64, f64)> = ne
            .iter()
            .map(|&n: &f64| {
                (
                    n.ln(),
                    ground_photon_occupation(1.0, n.sqrt()).unwrap().ln(),
                )
            })
            .collect();
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / 4.0;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / 4.0;
        let slope = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>()
            / pts.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
        assert!((slope - 0.5).abs() < 0.01, "{slope}");
    }

    #[test]
    fn disk_area_pieces() {
        let r = 1.3;
        assert!((disk_rect_area(r, -2.0, 2.0, -2.0, 2.0) - PI * r * r).abs() < 1e-13);
        assert!((disk_rect_area(r, 0.0, 2.0, 0.0, 2.0) - PI * r * r / 4.0).abs() < 1e-13);
        assert!((disk_rect_area(r, -0.1, 0.1, -0.1, 0.1) - 0.04).abs() < 1e-15);
        assert_eq!(disk_rect_area(r, 1.0, 2.0, 1.0, 2.0), 0.0);
        // thin strip through the centre: width·chord
        let w = 1e-6;
        assert!(
            (disk_rect_area(r, -w / 2.0, w / 2.0, -2.0, 2.0) / (2.0 * r * w) - 1.0).abs() < 1e-9
        );
    }

    #[test]
    fn fermi_disk_grid_moments() {
        let kf = 2.0;
        let g = OccupancyGrid::fermi_disk([0.0, 0.0], kf, 2.5, 400).unwrap();
        let m = distribution_moments(&g).unwrap();
        let exact = DistributionMoments::fermi_disk(kf, [0.0, 0.0]);
        assert!((m.n_2d / exact.n_2d - 1.0).abs() < 1e-12);
        assert!(m.k_d[0].abs() < 1e-12 && m.k_d[1].abs() < 1e-12);
        assert!((m.t_d / exact.t_d - 1.0).abs() < 1e-4);
    }

    #[test]
    fn shifted_disk_recentres() {
        let q = [0.4, -0.25];
        let g = OccupancyGrid::fermi_disk(q, 1.0, 1.8, 360).unwrap();
        let m = distribution_moments(&g).unwrap();
        assert!((m.k_d[0] / (q[0] * m.n_2d) - 1.0).abs() < 1e-10);
        let q0 = optimal_origin(&m).unwrap();
        assert!((q0[0] + q[0]).abs() < 1e-10 && (q0[1] + q[1]).abs() < 1e-10);
        let e = DistributionMoments::fermi_disk(1.0, q);
        assert!((m.t_d / e.t_d - 1.0).abs() < 1e-4);
    }

    #[test]
    fn empty_and_zero_grids() {
        assert!(OccupancyGrid::new([0.0; 2], [1.0; 2], 0, 3, vec![]).is_err());
        let g = OccupancyGrid::from_fn(1.0, 8, |_, _| 0.0).unwrap();
        let m = distribution_moments(&g).unwrap();
        assert_eq!((m.t_d, m.k_d, m.n_2d), (0.0, [0.0, 0.0], 0.0));
        assert!(energy_density(&m, [0.0; 2], 0.5).is_err());
    }

    #[test]
    fn occupancies_clamped() {
        let g = OccupancyGrid::new([0.0; 2], [1.0; 2], 1, 2, vec![-1.0, 3.0]).unwrap();
        assert_eq!((g.occupancy(0, 0), g.occupancy(0, 1)), (0.0, 2.0));
    }

    #[test]
    fn csv_round_trip() {
        let g = OccupancyGrid::fermi_disk([0.1, 0.0], 0.7, 1.0, 12).unwrap();
        let mut buf = Vec::new();
        g.write_csv(&mut buf).unwrap();
        assert!(buf.starts_with(b"kx,ky,f\n"));
        let back = OccupancyGrid::read_csv(&buf[..]).unwrap();
        assert_eq!(back.dims(), g.dims());
        for i in 0..12 {
            for j in 0..12 {
                assert_eq!(back.occupancy(i, j), g.occupancy(i, j));
                let (a, b) = (back.cell_center(i, j), g.cell_center(i, j));
                assert!((a[0] - b[0]).abs() < 1e-14 && (a[1] - b[1]).abs() < 1e-14);
            }
        }
        assert!(OccupancyGrid::read_csv(&b"a,b,c\n1,2,3\n"[..]).is_err());
    }

    #[test]
    fn fermi_disk_energy() {
        let kf = 1.7e8;
        let m = DistributionMoments::fermi_disk(kf, [0.0, 0.0]);
        let e = energy_density(&m, [0.0, 0.0], 0.4).unwrap();
        let expect = HBAR * HBAR * kf.powi(4) / (8.0 * PI * M_E);
        assert!((e / expect - 1.0).abs() < 1e-14);
    }

    #[test]
    fn critical_coupling_is_flat() {
        let m = DistributionMoments {
            t_d: 3.0,
            k_d: [0.2, -0.1],
            n_2d: 0.9,
        };
        let a = energy_density(&m, [0.3, 1.7], 1.0).unwrap();
        let b = energy_density(&m, [-4.0, 0.05], 1.0).unwrap();
        assert!((a / b - 1.0).abs() < 1e-10);
        assert!(matches!(
            ground_state(&m, 1.0).unwrap(),
            GroundState::Critical { .. }
        ));
        assert_eq!(ground_state(&m, 1.3).unwrap(), GroundState::Unstable);
        let flat = instability_witness(1.0, &m, &[1.0, 10.0, 100.0]).unwrap();
        assert!((flat[0] / flat[2] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn witness_rules() {
        let m = DistributionMoments::fermi_disk(1.0, [0.0, 0.0]);
        let e = instability_witness(1.5, &m, &[1.0, 10.0, 100.0]).unwrap();
        assert!(strictly_decreasing(&e));
        assert!(matches!(
            instability_witness(0.5, &m, &[1.0, 2.0]),
            Err(Error::Precondition(_))
        ));
        assert!(instability_witness(2.0, &m, &[2.0, 1.0]).is_err());
    }

    proptest! {
        #[test]
        fn origin_is_minimum(t in 1.0f64..5.0, kx in -0.5f64..0.5, ky in -0.5f64..0.5,
                             gamma in 0.0f64..0.99, qx in -3.0f64..3.0, qy in -3.0f64..3.0) {
            let m = DistributionMoments { t_d: t, k_d: [kx, ky], n_2d: 1.0 };
            let q0 = optimal_origin(&m).unwrap();
            let e0 = energy_density(&m, q0, gamma).unwrap();
            prop_assert!(e0 <= energy_density(&m, [qx, qy], gamma).unwrap() * (1.0 + 1e-12));
        }

        #[test]
        fn minimum_is_gamma_free(t in 1.0f64..5.0, kx in -0.5f64..0.5, gamma in 0.0f64..0.999) {
            let m = DistributionMoments { t_d: t, k_d: [kx, 0.3], n_2d: 0.7 };
            let q0 = optimal_origin(&m).unwrap();
            let a = energy_density(&m, q0, 0.0).unwrap();
            let b = energy_density(&m, q0, gamma).unwrap();
            prop_assert!((a / b - 1.0).abs() < 1e-12);
        }

        #[test]
        fn occupation_monotone(w in 0.1f64..10.0, a in 0.0f64..10.0, d in 1e-3f64..1.0) {
            let lo = ground_photon_occupation(w, a).unwrap();
            let hi = ground_photon_occupation(w, a + d).unwrap();
            prop_assert!(lo >= 0.0 && hi > lo);
        }
    }
}
