use std::fmt;
use std::str::FromStr;

use anyhow::{anyhow, bail, Result};

use crate::config::{key_spec, parse_value, Kind, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    Linear,
    Log,
}

/// `KEY:START:STOP:COUNT:{lin|log}` with endpoints converted to SI.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub key: String,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    pub scale: Scale,
    /// Original text, echoed into manifests.
    pub text: String,
}

impl FromStr for SweepSpec {
    type Err = anyhow::Error;

    fn from_str(text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.split(':').collect();
        let [key, start, stop, count, scale] = parts.as_slice() else {
            bail!("sweep '{text}' must look like KEY:START:STOP:COUNT:lin|log");
        };
        let spec = key_spec(key).ok_or_else(|| anyhow!("sweep over unknown key '{key}'"))?;
        if !spec.kind.is_numeric() {
            bail!("cannot sweep over non-numeric key '{key}'");
        }
        let endpoint = |s: &str| -> Result<f64> {
            match parse_value(spec, s)? {
                Value::Number(v) => Ok(v),
                _ => unreachable!("numeric key parsed to a non-number"),
            }
        };
        let start = endpoint(start)?;
        let stop = endpoint(stop)?;
        let count: usize = count.trim().parse().map_err(|_| anyhow!("sweep count '{count}' is not an integer"))?;
        let scale = match scale.trim() {
            "lin" => Scale::Linear,
            "log" => Scale::Log,
            other => bail!("sweep scale must be 'lin' or 'log', got '{other}'"),
        };
        if count < 2 {
            bail!("sweep needs at least 2 points, got {count}");
        }
        if !(start < stop) {
            bail!("sweep start {start:e} must be below stop {stop:e}");
        }
        if scale == Scale::Log && start <= 0.0 {
            bail!("log sweep needs positive endpoints");
        }
        debug_assert!(matches!(spec.kind, Kind::Quantity(..)));
        Ok(SweepSpec { key: spec.name.to_string(), start, stop, count, scale, text: text.to_string() })
    }
}

impl fmt::Display for SweepSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

impl SweepSpec {
    /// Sample points with both endpoints hit exactly.
    pub fn points(&self) -> Vec<f64> {
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                if i == 0 {
                    return self.start;
                }
                if i == self.count - 1 {
                    return self.stop;
                }
                let f = i as f64 / last;
                match self.scale {
                    Scale::Linear => self.start + f * (self.stop - self.start),
                    Scale::Log => (self.start.ln() + f * (self.stop / self.start).ln()).exp(),
                }
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_sweep_in_microns() {
        let s: SweepSpec = "height:1um:1000um:4:log".parse().unwrap();
        let p = s.points();
        assert_eq!(p.len(), 4);
        assert_eq!(p[0], 1e-6);
        assert_eq!(p[3], 1e-3);
        assert!((p[1] - 1e-5).abs() < 1e-18);
    }

    #[test]
    fn linear_sweep() {
        let s: SweepSpec = "frequency:0:2 Hz:3:lin".parse().unwrap();
        let p = s.points();
        assert_eq!(p[1], 2.0 * std::f64::consts::PI);
    }

    #[test]
    fn invalid_sweeps() {
        for bad in [
            "occupation:0:1:3:lin",
            "nokey:0:1:3:lin",
            "height:1um:1um:3:lin",
            "height:2um:1um:3:lin",
            "height:1um:2um:1:lin",
            "spectrum.separation:-1um:1um:3:log",
            "height:1um:2um:3:cubic",
            "height:1um:2um",
        ] {
            assert!(bad.parse::<SweepSpec>().is_err(), "{bad}");
        }
    }
}
