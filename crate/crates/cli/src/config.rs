//! Flat `key=value` run configuration.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use eberlein_core::{ConvolutionPath, Error, Frequency, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
    Gnuplot,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "gnuplot" | "gp" => Ok(Format::Gnuplot),
            _ => Err(Error::Parse(format!("unknown output format `{s}`"))),
        }
    }
}

impl std::fmt::Display for Format {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
            Format::Gnuplot => "gnuplot",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: String,
    pub mu: String,
    pub nu: Option<String>,
    pub family: String,
    pub n: u64,
    /// Base-2 exponents: scale `k` means `n = 2^k`.
    pub schedule: Vec<u32>,
    pub lag_bound: usize,
    pub frequencies: Vec<Frequency>,
    /// Scan grid: rationals with denominator up to this.
    pub grid_max_den: i64,
    /// Scan grid extras: `k * golden` for `|k|` up to this.
    pub golden_k: i64,
    /// Point masses for `split`; empty means use the lag-average estimates.
    pub masses: Vec<f64>,
    pub translate: i64,
    pub tolerance: f64,
    pub slack: f64,
    pub path: ConvolutionPath,
    pub seed: u64,
    pub out: PathBuf,
    pub formats: Vec<Format>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            command: "verify".into(),
            mu: "dirac".into(),
            nu: None,
            family: "sym".into(),
            n: 1024,
            schedule: vec![10, 13, 16],
            lag_bound: 20,
            frequencies: vec![Frequency::ZERO],
            grid_max_den: 32,
            golden_k: 5,
            masses: Vec::new(),
            translate: 0,
            tolerance: 0.05,
            slack: 1.5,
            path: ConvolutionPath::Auto,
            seed: 0x5eed_2024,
            out: PathBuf::from("out"),
            formats: vec![Format::Csv, Format::Json, Format::Gnuplot],
        }
    }
}

fn join<T: std::fmt::Display>(items: &[T]) -> String {
    items.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn split_list<T: FromStr>(value: &str, key: &str) -> Result<Vec<T>> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse()
                .map_err(|_| Error::Parse(format!("bad entry `{s}` for `{key}`")))
        })
        .collect()
}

fn one<T: FromStr>(value: &str, key: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad value `{value}` for `{key}`")))
}

impl RunConfig {
    pub fn to_kv(&self) -> String {
        let mut s = String::new();
        let mut put = |k: &str, v: String| {
            let _ = writeln!(s, "{k}={v}");
        };
        put("command", self.command.clone());
        put("mu", self.mu.clone());
        put("nu", self.nu.clone().unwrap_or_default());
        put("family", self.family.clone());
        put("n", self.n.to_string());
        put("schedule", join(&self.schedule));
        put("L", self.lag_bound.to_string());
        put("frequencies", join(&self.frequencies));
        put("grid_max_den", self.grid_max_den.to_string());
        put("golden_k", self.golden_k.to_string());
        put("masses", join(&self.masses));
        put("translate", self.translate.to_string());
        put("tolerance", self.tolerance.to_string());
        put("slack", self.slack.to_string());
        put("path", self.path.to_string());
        put("seed", self.seed.to_string());
        put("out", self.out.display().to_string());
        put("formats", join(&self.formats));
        s
    }

    /// Applies one `key=value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let v = value.trim();
        match key.trim() {
            "command" => self.command = v.to_string(),
            "mu" => self.mu = v.to_string(),
            "nu" => self.nu = (!v.is_empty()).then(|| v.to_string()),
            "family" => self.family = v.to_string(),
            "n" => self.n = one(v, key)?,
            "schedule" => self.schedule = split_list(v, key)?,
            "L" | "lag_bound" => self.lag_bound = one(v, key)?,
            "frequencies" => self.frequencies = split_list(v, key)?,
            "grid_max_den" => self.grid_max_den = one(v, key)?,
            "golden_k" => self.golden_k = one(v, key)?,
            "masses" => self.masses = split_list(v, key)?,
            "translate" => self.translate = one(v, key)?,
            "tolerance" => self.tolerance = one(v, key)?,
            "slack" => self.slack = one(v, key)?,
            "path" => self.path = one(v, key)?,
            "seed" => self.seed = one(v, key)?,
            "out" => self.out = PathBuf::from(v),
            "formats" => self.formats = split_list(v, key)?,
            other => return Err(Error::Parse(format!("unknown config key `{other}`"))),
        }
        Ok(())
    }

    /// Overlays a config file onto `self`; `#` starts a comment line.
    pub fn apply_kv(&mut self, text: &str) -> Result<()> {
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("line {}: expected key=value", i + 1)))?;
            self.set(k, v)?;
        }
        Ok(())
    }

    pub fn from_kv(text: &str) -> Result<Self> {
        let mut c = RunConfig::default();
        c.apply_kv(text)?;
        Ok(c)
    }

    pub fn schedule_n(&self) -> Result<Vec<u64>> {
        self.schedule
            .iter()
            .map(|&k| {
                if k >= 40 {
                    Err(Error::InvalidParameter(format!("schedule exponent {k} is too large")))
                } else {
                    Ok(1u64 << k)
                }
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_round_trips() {
        let c = RunConfig::default();
        assert_eq!(RunConfig::from_kv(&c.to_kv()).unwrap(), c);
    }

    #[test]
    fn comments_and_errors() {
        let c = RunConfig::from_kv("# header\nmu=tm_pm\n\nL=5\n").unwrap();
        assert_eq!((c.mu.as_str(), c.lag_bound), ("tm_pm", 5));
        assert!(RunConfig::from_kv("bogus=1").is_err());
        assert!(RunConfig::from_kv("n").is_err());
        assert!(RunConfig::from_kv("n=-3").is_err());
    }
}
