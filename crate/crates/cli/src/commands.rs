//! The four command families. Each resolves its defaults, echoes the effective
//! settings, and fills an [`OutputRecord`].

use cavity_core::eft::{self, EftConfig};
use cavity_core::manymode::{self, ModeSet, NormalModes};
use cavity_core::response::{self, BroadenedFrequency, ResponseKind};
use cavity_core::system::{classify_phase, DerivedScales, PHASE_TOL};
use cavity_core::Error;

use crate::error::{CliError, Result};
use crate::output::{Cell, OutputRecord, Provenance};
use crate::settings::Settings;
use crate::sweep::SweepSpec;

/// Largest mode count accepted by the many-mode commands.
pub const MAX_MODES: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EftSub {
    Coupling,
    Mass,
    Mu,
    Casimir,
    Jellium,
    Chi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ManySub {
    Diag,
    LowestScan,
    CouplingRun,
}

/// Collects the effective settings of one run for the provenance block.
struct Echo(Vec<(String, String)>);

impl Echo {
    fn new(s: &Settings) -> Self {
        let mut e = Echo(s.system_entries());
        if let Some(g) = s.gamma {
            e.num("gamma", g);
        }
        e
    }

    fn add(&mut self, key: &str, value: impl ToString) {
        self.0.push((key.to_string(), value.to_string()));
    }

    /// Floats in shortest round-trip scientific notation.
    fn num(&mut self, key: &str, value: f64) {
        self.add(key, format!("{value:e}"));
    }

    fn finish(mut self, command: &str, s: &Settings, columns: &[&str]) -> OutputRecord {
        self.add("digits", s.digits);
        OutputRecord::new(command, columns, Provenance::new(command, self.0))
    }
}

fn sweep_or(
    s: &Settings,
    allowed: &[&str],
    default: impl FnOnce() -> Result<SweepSpec>,
) -> Result<SweepSpec> {
    match &s.sweep {
        Some(sw) => {
            sw.expect_var(allowed)?;
            Ok(sw.clone())
        }
        None => default(),
    }
}

fn no_sweep(s: &Settings, command: &str) -> Result<()> {
    match &s.sweep {
        Some(sw) => Err(CliError::config(
            "sweep",
            format!("`{command}` does not take a sweep (got `{}`)", sw.var),
        )),
        None => Ok(()),
    }
}

pub fn phase(s: &Settings) -> Result<OutputRecord> {
    let scales = DerivedScales::new(&s.system)?;
    let mut echo = Echo(s.system_entries());
    let gammas = match (&s.sweep, s.gamma) {
        (Some(_), _) | (None, None) => {
            let sw = sweep_or(s, &["gamma"], || {
                SweepSpec::new("gamma", 0.0, 1.2, 121, false)
            })?;
            echo.add("sweep", &sw);
            sw.values()
        }
        (None, Some(g)) => {
            echo.num("gamma", g);
            vec![g]
        }
    };
    if let Some(g) = gammas.iter().find(|g| !(**g >= 0.0)) {
        return Err(CliError::config(
            "gamma",
            format!("γ must be non-negative, got {g}"),
        ));
    }
    let mut rec = echo.finish("phase", s, &["gamma", "phase"]);
    for g in gammas {
        rec.push(vec![g.into(), classify_phase(g, PHASE_TOL).label().into()]);
    }
    rec.summarize("config_gamma", scales.gamma());
    rec.summarize("config_phase", scales.phase().label());
    Ok(rec)
}

pub fn response(s: &Settings, kind: ResponseKind) -> Result<OutputRecord> {
    let sys = s.resolved_system()?;
    let scales = DerivedScales::new(&sys)?;
    let (wt, vol) = (scales.omega_tilde(), scales.volume()?);
    let eta = s.eta.unwrap_or(0.05 * wt);
    if !(eta > 0.0) {
        return Err(CliError::config(
            "eta",
            format!("response functions need η > 0, got {eta}"),
        ));
    }
    let sw = sweep_or(s, &["w"], || {
        SweepSpec::new("w", -3.0 * wt, 3.0 * wt, 601, false)
    })?;

    let name = format!("response {}", kind_name(kind));
    let mut echo = Echo::new(s);
    echo.num("eta", eta);
    echo.add("sweep", &sw);
    let mut rec = echo.finish(&name, s, &["w", "re", "im"]);
    for w in sw.values() {
        let f = BroadenedFrequency::new(w, eta)?;
        let v = match kind {
            ResponseKind::AA => response::chi_aa_freq(f, wt, vol)?,
            ResponseKind::EA => response::chi_ea_freq(f, wt, vol)?,
            ResponseKind::JJ => response::chi_jj_freq(f, &scales)?,
            ResponseKind::JA | ResponseKind::AJ => response::chi_mixed_freq(f, &scales, kind)?,
            ResponseKind::Sigma => response::optical_conductivity(f, &scales)?,
        };
        rec.push(vec![w.into(), v.re.into(), v.im.into()]);
    }
    rec.summarize("omega_tilde", wt);
    rec.summarize("gamma", scales.gamma());
    if kind == ResponseKind::Sigma {
        let s0 = response::sigma0(scales.omega_p(), eta)?;
        let dc = response::dc_conductivity(scales.gamma(), s0)?;
        let at_zero =
            response::optical_conductivity(BroadenedFrequency::new(0.0, eta)?, &scales)?.re;
        rec.summarize("sigma0", s0);
        rec.summarize("sigma_dc", dc);
        rec.summarize("sigma_dc_over_sigma0", dc / s0);
        rec.summarize("re_sigma_at_w0", at_zero);
        rec.summarize("re_sigma_at_w0_over_sigma0", at_zero / s0);
        rec.summarize(
            "drude_mass_over_me",
            response::drude_effective_mass(scales.gamma())? / cavity_core::constants::M_E,
        );
    }
    Ok(rec)
}

fn kind_name(k: ResponseKind) -> &'static str {
    match k {
        ResponseKind::AA => "aa",
        ResponseKind::EA => "ea",
        ResponseKind::JJ => "jj",
        ResponseKind::JA => "ja",
        ResponseKind::AJ => "aj",
        ResponseKind::Sigma => "sigma",
    }
}

fn eft_name(sub: EftSub) -> &'static str {
    match sub {
        EftSub::Coupling => "coupling",
        EftSub::Mass => "mass",
        EftSub::Mu => "mu",
        EftSub::Casimir => "casimir",
        EftSub::Jellium => "jellium",
        EftSub::Chi => "chi",
    }
}

pub fn eft(s: &Settings, sub: EftSub) -> Result<OutputRecord> {
    let sys = s.resolved_system()?;
    let base_l0 = s.lambda0.unwrap_or(match sub {
        EftSub::Chi => 4.0,
        _ => 1.0,
    });
    let base = EftConfig::new(sys.clone(), base_l0)?;
    let name = format!("eft {}", eft_name(sub));
    let mut echo = Echo::new(s);
    let mass_pole = (1.0 / base.alpha_dim()).exp();

    let lambda_sweep = |default_stop: f64, count: usize| {
        sweep_or(s, &["lambda0"], || {
            SweepSpec::new("lambda0", 1.0, default_stop, count, true)
        })
    };

    let rec = match sub {
        EftSub::Coupling | EftSub::Mass | EftSub::Mu | EftSub::Casimir => {
            let sw = match sub {
                EftSub::Coupling => lambda_sweep(1e10, 41)?,
                EftSub::Casimir => lambda_sweep(1e4, 41)?,
                _ => lambda_sweep(1e80, 81)?,
            };
            echo.add("sweep", &sw);
            let cols: &[&str] = match sub {
                EftSub::Coupling => &["lambda0", "g"],
                EftSub::Mass => &["lambda0", "m_over_me"],
                EftSub::Mu => &["lambda0", "mu"],
                _ => &["lambda0", "energy_density", "pressure"],
            };
            let mut rec = echo.finish(&name, s, cols);
            let kf = DerivedScales::new(&sys)?.k_fermi()?;
            for l0 in sw.values() {
                let c = base.with_lambda0(l0)?;
                let row: Result<Vec<Cell>> = match sub {
                    EftSub::Coupling => Ok(vec![l0.into(), eft::effective_coupling(&c).into()]),
                    EftSub::Mass => eft::renormalized_mass(&c)
                        .map(|m| vec![l0.into(), (m / cavity_core::constants::M_E).into()])
                        .map_err(Into::into),
                    EftSub::Mu => eft::chemical_potential(kf, &c)
                        .map(|mu| vec![l0.into(), mu.into()])
                        .map_err(Into::into),
                    _ => eft::casimir_pressure(&c)
                        .map(|p| vec![l0.into(), eft::casimir_energy_density(&c).into(), p.into()])
                        .map_err(Into::into),
                };
                match row {
                    Ok(r) => rec.push(r),
                    Err(CliError::Core(Error::Pole(msg))) => {
                        rec.notices
                            .push(format!("truncated at lambda0 = {l0:e}: {msg}"));
                        rec.summarize("truncated_at_lambda0", l0);
                        break;
                    }
                    Err(e) => return Err(e),
                }
            }
            match sub {
                EftSub::Coupling => {
                    rec.summarize("alpha_dim", base.alpha_dim());
                    rec.summarize("landau_pole_lambda0", eft::landau_pole_lambda0(&base));
                    rec.summarize("landau_pole", eft::landau_pole(&base));
                }
                EftSub::Mass | EftSub::Mu => {
                    rec.summarize("alpha_dim", base.alpha_dim());
                    rec.summarize("mass_pole_lambda0", mass_pole);
                    if sub == EftSub::Mu {
                        rec.summarize("k_fermi", kf);
                    }
                }
                _ => {}
            }
            rec
        }
        EftSub::Jellium => {
            let sw = sweep_or(s, &["rs"], || SweepSpec::new("rs", 0.25, 5.0, 96, false))?;
            echo.num("lambda0", base_l0);
            echo.add("sweep", &sw);
            let mut rec = echo.finish(&name, s, &["rs", "kinetic_ry", "exchange_ry", "total_ry"]);
            let ratio = eft::mass_ratio(&base)?;
            for rs in sw.values() {
                let j = eft::jellium_with_ratio(rs, ratio)?;
                rec.push(vec![
                    rs.into(),
                    j.tau.into(),
                    j.eps_x.into(),
                    (j.tau + j.eps_x).into(),
                ]);
            }
            rec.summarize("mass_ratio", ratio);
            rec.summarize("rs_min", eft::jellium_with_ratio(1.0, ratio)?.rs_min);
            rec.summarize("rs_min_numeric", eft::jellium_rs_min_numeric(ratio));
            rec
        }
        EftSub::Chi => {
            let eta = s.eta.unwrap_or(0.0);
            if !(eta >= 0.0) {
                return Err(CliError::config(
                    "eta",
                    format!("η must be non-negative, got {eta}"),
                ));
            }
            let lo = base.omega_tilde_z();
            let hi = base.lambda_freq2().sqrt();
            let sw = sweep_or(s, &["w"], || SweepSpec::new("w", 0.0, 1.5 * hi, 300, false))?;
            echo.num("lambda0", base_l0);
            echo.num("eta", eta);
            echo.add("sweep", &sw);
            let mut rec = echo.finish(&name, s, &["w", "re", "im"]);
            for w in sw.values() {
                let v = eft::eft_chi_aa(w, eta, &base)?;
                rec.push(vec![w.into(), v.re.into(), v.im.into()]);
            }
            rec.summarize("window_low", lo);
            rec.summarize("window_high", hi);
            rec.summarize(
                "box_height",
                1.0 / (4.0
                    * cavity_core::constants::C_LIGHT.powi(2)
                    * cavity_core::constants::EPS0
                    * sys.mirror_gap),
            );
            rec
        }
    };
    Ok(rec)
}

fn modes_or(s: &Settings, default: usize) -> Result<usize> {
    let m = s.modes.unwrap_or(default);
    if m > MAX_MODES {
        return Err(CliError::config(
            "modes",
            format!("at most {MAX_MODES} modes are supported, got {m}"),
        ));
    }
    Ok(m)
}

pub fn manymode(s: &Settings, sub: ManySub) -> Result<OutputRecord> {
    let mut echo = Echo::new(s);
    match sub {
        ManySub::Diag => {
            no_sweep(s, "manymode diag")?;
            let scales = DerivedScales::new(&s.resolved_system()?)?;
            let m = modes_or(s, 1)?;
            echo.add("modes", m);
            let mut rec = echo.finish("manymode diag", s, &["index", "omega", "eps_norm"]);
            let set = ModeSet::ladder_1d(m, scales.omega())?;
            let normal = NormalModes::solve(&set, scales.omega_p())?;
            for (g, (om, e)) in normal.omega.iter().zip(&normal.eps_tilde).enumerate() {
                let norm = (e[0] * e[0] + e[1] * e[1] + e[2] * e[2]).sqrt();
                rec.push(vec![g.into(), (*om).into(), norm.into()]);
            }
            rec.summarize("omega_tilde", scales.omega_tilde());
            rec.summarize(
                "exact_coupling",
                manymode::exact_coupling(&normal, scales.omega_p())?,
            );
            rec.summarize("jacobi_sweeps", normal.sweeps);
            Ok(rec)
        }
        ManySub::LowestScan => {
            let m = modes_or(s, 100)?;
            let sw = sweep_or(s, &["ratio"], || {
                SweepSpec::new("ratio", 0.0, 0.9, 19, false)
            })?;
            echo.add("modes", m);
            echo.add("sweep", &sw);
            let mut rec = echo.finish("manymode lowest-scan", s, &["ratio", "rel_diff_percent"]);
            let rows = manymode::lowest_mode_scan(&sw.values(), m)?;
            let worst = rows.iter().map(|r| r.1).fold(0.0, f64::max);
            for (r, d) in rows {
                rec.push(vec![r.into(), d.into()]);
            }
            rec.summarize("max_rel_diff_percent", worst);
            Ok(rec)
        }
        ManySub::CouplingRun => {
            no_sweep(s, "manymode coupling-run")?;
            let scales = DerivedScales::new(&s.resolved_system()?)?;
            let m = modes_or(s, 200)?;
            echo.add("modes", m);
            let ratio = scales.omega_p() / scales.omega();
            let mut rec = echo.finish("manymode coupling-run", s, &["M", "g_ex"]);
            let counts: Vec<usize> = (1..=m).collect();
            for (mm, g) in manymode::coupling_run(ratio, &counts)? {
                rec.push(vec![mm.into(), g.into()]);
            }
            rec.summarize("ratio", ratio);
            Ok(rec)
        }
    }
}
