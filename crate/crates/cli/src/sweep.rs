//! `var=start:stop:count[:log]` sweep specifications.

use std::fmt;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub var: String,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    pub log: bool,
}

impl SweepSpec {
    pub fn new(var: &str, start: f64, stop: f64, count: usize, log: bool) -> Result<Self> {
        let bad = |msg: String| CliError::config("sweep", msg);
        if var.is_empty() {
            return Err(bad("missing sweep variable".into()));
        }
        if !start.is_finite() || !stop.is_finite() {
            return Err(bad(format!(
                "endpoints must be finite, got {start} and {stop}"
            )));
        }
        if count < 2 {
            return Err(bad(format!("count must be at least 2, got {count}")));
        }
        if start == stop {
            return Err(bad(format!("start and stop must differ, both are {start}")));
        }
        if log && !(start > 0.0 && stop > 0.0) {
            return Err(bad("log spacing needs positive endpoints".into()));
        }
        Ok(SweepSpec {
            var: var.to_string(),
            start,
            stop,
            count,
            log,
        })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let bad = |msg: String| CliError::config("sweep", msg);
        let (var, rest) = text
            .split_once('=')
            .ok_or_else(|| bad(format!("expected var=start:stop:count[:log], got `{text}`")))?;
        let parts: Vec<&str> = rest.split(':').collect();
        if !(3..=4).contains(&parts.len()) {
            return Err(bad(format!(
                "expected start:stop:count[:log], got `{rest}`"
            )));
        }
        let num = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| bad(format!("`{s}` is not a number")))
        };
        let count = parts[2].trim().parse::<usize>().map_err(|_| {
            bad(format!(
                "count `{}` is not a non-negative integer",
                parts[2]
            ))
        })?;
        let log = match parts.get(3).map(|s| s.trim()) {
            None | Some("lin") => false,
            Some("log") => true,
            Some(other) => {
                return Err(bad(format!(
                    "spacing must be `log` or `lin`, got `{other}`"
                )))
            }
        };
        SweepSpec::new(var.trim(), num(parts[0])?, num(parts[1])?, count, log)
    }

    /// Grid points with both endpoints reproduced exactly.
    pub fn values(&self) -> Vec<f64> {
        let last = self.count - 1;
        (0..self.count)
            .map(|i| {
                if i == 0 {
                    self.start
                } else if i == last {
                    self.stop
                } else {
                    let t = i as f64 / last as f64;
                    if self.log {
                        (self.start.ln() + (self.stop.ln() - self.start.ln()) * t).exp()
                    } else {
                        self.start + (self.stop - self.start) * t
                    }
                }
            })
            .collect()
    }

    pub fn expect_var(&self, allowed: &[&str]) -> Result<()> {
        if allowed.contains(&self.var.as_str()) {
            Ok(())
        } else {
            Err(CliError::config(
                "sweep",
                format!(
                    "cannot sweep `{}` here; allowed: {}",
                    self.var,
                    allowed.join(", ")
                ),
            ))
        }
    }
}

impl fmt::Display for SweepSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}={:e}:{:e}:{}",
            self.var, self.start, self.stop, self.count
        )?;
        if self.log {
            write!(f, ":log")?;
        }
        Ok(())
    }
}
