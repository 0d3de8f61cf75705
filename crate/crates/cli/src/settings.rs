//! Effective run settings: defaults, then a config file, then command-line flags.
//!
//! Config files are `key = value` lines with `#` comments. A JSON document
//! written by this tool is also accepted; its echoed config block is applied.

use std::fs;
use std::path::Path;

use cavity_core::system::{plasma_frequency, SystemConfig, Units};

use crate::error::{CliError, Result};
use crate::sweep::SweepSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub system: SystemConfig,
    pub eta: Option<f64>,
    pub lambda0: Option<f64>,
    pub modes: Option<usize>,
    pub gamma: Option<f64>,
    pub sweep: Option<SweepSpec>,
    pub digits: usize,
    pub format: Format,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            system: SystemConfig::default(),
            eta: None,
            lambda0: None,
            modes: None,
            gamma: None,
            sweep: None,
            digits: 17,
            format: Format::Csv,
        }
    }
}

fn number(origin: &str, key: &str, value: &str) -> Result<f64> {
    value
        .trim()
        .parse::<f64>()
        .map_err(|_| CliError::config(origin, format!("`{key}` expects a number, got `{value}`")))
}

impl Settings {
    /// Apply one entry. `origin` names where it came from for diagnostics.
    pub fn apply(&mut self, key: &str, value: &str, origin: &str, line: usize) -> Result<()> {
        let value = value.trim();
        match key {
            "eta" => self.eta = Some(number(origin, key, value)?),
            "lambda0" => self.lambda0 = Some(number(origin, key, value)?),
            "gamma" => self.gamma = Some(number(origin, key, value)?),
            "modes" => {
                let m = value
                    .parse::<usize>()
                    .ok()
                    .filter(|&m| m >= 1)
                    .ok_or_else(|| {
                        CliError::config(
                            origin,
                            format!("`modes` must be a positive integer, got `{value}`"),
                        )
                    })?;
                self.modes = Some(m);
            }
            "sweep" => self.sweep = Some(SweepSpec::parse(value).map_err(|e| relabel(e, origin))?),
            "digits" => {
                let d = value
                    .parse::<usize>()
                    .ok()
                    .filter(|d| (1..=17).contains(d))
                    .ok_or_else(|| {
                        CliError::config(
                            origin,
                            format!("`digits` must be in 1..=17, got `{value}`"),
                        )
                    })?;
                self.digits = d;
            }
            "format" => {
                self.format = match value {
                    "csv" => Format::Csv,
                    "json" => Format::Json,
                    v => {
                        return Err(CliError::config(
                            origin,
                            format!("`format` must be csv or json, got `{v}`"),
                        ))
                    }
                }
            }
            _ => {
                let owned = self
                    .system
                    .apply_entry(key, value, line)
                    .map_err(|e| match e {
                        cavity_core::Error::Config { msg, .. } => CliError::config(origin, msg),
                        other => CliError::Core(other),
                    })?;
                if !owned {
                    return Err(CliError::config(origin, format!("unknown key `{key}`")));
                }
            }
        }
        Ok(())
    }

    pub fn load_file(&mut self, path: &Path) -> Result<()> {
        let text = fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let name = path.display().to_string();
        if text.trim_start().starts_with('{') {
            self.load_json(&text, &name)
        } else {
            self.load_text(&text, &name)
        }
    }

    pub fn load_text(&mut self, text: &str, name: &str) -> Result<()> {
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let origin = format!("{name}:{line}");
            let (key, value) = content.split_once('=').ok_or_else(|| {
                CliError::config(&origin, format!("expected `key = value`, got `{content}`"))
            })?;
            self.apply(key.trim(), value, &origin, line)?;
        }
        Ok(())
    }

    /// Accepts either a flat object of entries or a previous output document.
    pub fn load_json(&mut self, text: &str, name: &str) -> Result<()> {
        let doc: serde_json::Value = serde_json::from_str(text)
            .map_err(|e| CliError::config(name, format!("invalid JSON: {e}")))?;
        let map = doc
            .pointer("/provenance/config")
            .unwrap_or(&doc)
            .as_object()
            .ok_or_else(|| CliError::config(name, "expected a JSON object of config entries"))?;
        for (key, value) in map {
            let origin = format!("{name}: key `{key}`");
            let v = match value {
                serde_json::Value::String(s) => s.clone(),
                serde_json::Value::Number(n) => n.to_string(),
                other => {
                    return Err(CliError::config(
                        &origin,
                        format!("unsupported value {other}"),
                    ))
                }
            };
            self.apply(key, &v, &origin, 0)?;
        }
        Ok(())
    }

    /// System with a requested γ realised: in SI mode through the mode
    /// frequency ω = ω_p·sqrt((1−γ)/γ), in ratio mode through ω_p/ω = sqrt(γ/(1−γ)).
    pub fn resolved_system(&self) -> Result<SystemConfig> {
        let mut sys = self.system.clone();
        sys.validate()?;
        if let Some(g) = self.gamma {
            if !(0.0..1.0).contains(&g) {
                return Err(CliError::config(
                    "gamma",
                    format!("γ must lie in [0, 1) to fix the mode frequency, got {g}"),
                ));
            }
            match sys.units {
                Units::Ratio { .. } => {
                    sys.units = Units::Ratio {
                        omega_p_over_omega: (g / (1.0 - g)).sqrt(),
                    }
                }
                Units::Si => {
                    if g == 0.0 {
                        return Err(CliError::config(
                            "gamma",
                            "γ = 0 needs ω_p = 0, which SI geometry cannot give",
                        ));
                    }
                    let wp = plasma_frequency(&sys)?;
                    sys.mode_frequency = Some(wp * ((1.0 - g) / g).sqrt());
                }
            }
        }
        Ok(sys)
    }

    /// System entries in a canonical order, as re-ingestible strings.
    pub fn system_entries(&self) -> Vec<(String, String)> {
        let s = &self.system;
        let mut out = vec![
            ("n_electrons".to_string(), s.n_electrons.to_string()),
            ("area".to_string(), format!("{:e}", s.area)),
            ("mirror_gap".to_string(), format!("{:e}", s.mirror_gap)),
            ("cavity_index".to_string(), s.cavity_index.to_string()),
            (
                "mode_frequency".to_string(),
                s.mode_frequency
                    .map_or_else(|| "auto".to_string(), |w| format!("{w:e}")),
            ),
        ];
        match s.units {
            Units::Si => out.push(("units".into(), "si".into())),
            Units::Ratio { omega_p_over_omega } => {
                out.push(("units".into(), "ratio".into()));
                out.push(("ratio".into(), format!("{omega_p_over_omega:e}")));
            }
        }
        out
    }
}

fn relabel(e: CliError, origin: &str) -> CliError {
    match e {
        CliError::Config { msg, .. } => CliError::config(origin, msg),
        other => other,
    }
}
