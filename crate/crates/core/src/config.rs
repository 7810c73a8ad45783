//! Line-oriented `key = value` run configuration.
//!
//! Mobility inputs are in SI units (metres, seconds) and are converted to
//! km and hours on load. Blank lines and `#` comments are ignored; unknown
//! keys and repeated keys are errors.

use std::collections::HashSet;
use std::path::Path;

use crate::cost::CostParams;
use crate::error::{Error, Result};
use crate::mobility::MobilityParams;
use crate::optimize::Provider;
use crate::protocol::Strategy;

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub k: f64,
    pub mean_len_m: f64,
    pub e_eta_s: f64,
    pub var_eta_s2: f64,
    pub lambda_per_hr: f64,
    pub u: f64,
    pub v: f64,
    pub m_paging: usize,
    pub r_km: f64,
    pub strategy: Strategy,
    pub duration_hr: f64,
    pub seed: u64,
    pub provider: Provider,
    pub x_km: f64,
    pub n_trials: usize,
    /// Keys that were set explicitly.
    pub explicit: HashSet<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            k: 1.0,
            mean_len_m: 20.0,
            e_eta_s: 8.0,
            var_eta_s2: 1.0,
            lambda_per_hr: 2.0,
            u: 20.0,
            v: 1.0,
            m_paging: 1,
            r_km: 1.0,
            strategy: Strategy::Optimal,
            duration_hr: 2500.0,
            seed: 1,
            provider: Provider::Pde,
            x_km: 0.0,
            n_trials: 10_000,
            explicit: HashSet::new(),
        }
    }
}

pub const KEYS: [&str; 15] = [
    "k",
    "mean_len_m",
    "E_eta_s",
    "Var_eta_s2",
    "lambda_per_hr",
    "U",
    "V",
    "m_paging",
    "R_km",
    "strategy",
    "duration_hr",
    "seed",
    "provider",
    "x_km",
    "n_trials",
];

fn err(line: usize, msg: impl Into<String>) -> Error {
    Error::Config { line, msg: msg.into() }
}

fn num<T: std::str::FromStr>(line: usize, key: &str, v: &str) -> Result<T> {
    v.parse().map_err(|_| err(line, format!("{key}: cannot parse {v:?}")))
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut c = Self::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let (key, val) = body.split_once('=').ok_or_else(|| err(line, format!("expected key = value, got {body:?}")))?;
            let (key, val) = (key.trim(), val.trim());
            if !KEYS.contains(&key) {
                return Err(err(line, format!("unknown key {key:?}")));
            }
            if !c.explicit.insert(key.to_string()) {
                return Err(err(line, format!("key {key:?} given twice")));
            }
            match key {
                "k" => c.k = num(line, key, val)?,
                "mean_len_m" => c.mean_len_m = num(line, key, val)?,
                "E_eta_s" => c.e_eta_s = num(line, key, val)?,
                "Var_eta_s2" => c.var_eta_s2 = num(line, key, val)?,
                "lambda_per_hr" => c.lambda_per_hr = num(line, key, val)?,
                "U" => c.u = num(line, key, val)?,
                "V" => c.v = num(line, key, val)?,
                "m_paging" => c.m_paging = num(line, key, val)?,
                "R_km" => c.r_km = num(line, key, val)?,
                "strategy" => c.strategy = val.parse().map_err(|e: Error| err(line, e.to_string()))?,
                "duration_hr" => c.duration_hr = num(line, key, val)?,
                "seed" => c.seed = num(line, key, val)?,
                "provider" => c.provider = val.parse().map_err(|e: Error| err(line, e.to_string()))?,
                "x_km" => c.x_km = num(line, key, val)?,
                "n_trials" => c.n_trials = num(line, key, val)?,
                _ => unreachable!("key list checked above"),
            }
        }
        // Range checks run through the domain constructors.
        c.mobility().map_err(|e| err(0, e.to_string()))?;
        c.costs().map_err(|e| err(0, e.to_string()))?;
        if !(c.r_km > 0.0) || !(c.duration_hr > 0.0) || c.n_trials == 0 {
            return Err(err(0, "R_km and duration_hr must be positive and n_trials at least 1"));
        }
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| err(0, format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn is_set(&self, key: &str) -> bool {
        self.explicit.contains(key)
    }

    pub fn mobility(&self) -> Result<MobilityParams> {
        MobilityParams::from_si(self.k, self.mean_len_m, self.e_eta_s, self.var_eta_s2)
    }

    pub fn costs(&self) -> Result<CostParams> {
        CostParams::new(self.lambda_per_hr, self.u, self.v, self.m_paging)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_converts() {
        let c = RunConfig::parse("# defaults\nk = 20\nmean_len_m=20\nE_eta_s = 8 # seconds\nstrategy = center\n").unwrap();
        let m = c.mobility().unwrap();
        assert_eq!(c.k, 20.0);
        assert!((m.mean_len - 0.02).abs() < 1e-15);
        assert!((m.mean_time - 8.0 / 3600.0).abs() < 1e-15);
        assert_eq!(c.strategy, Strategy::Center);
        assert!(c.is_set("k") && !c.is_set("U"));
    }

    #[test]
    fn errors_carry_line_numbers() {
        match RunConfig::parse("k = 1\n\nbogus = 3\n") {
            Err(Error::Config { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        match RunConfig::parse("k = one\n") {
            Err(Error::Config { line, .. }) => assert_eq!(line, 1),
            other => panic!("{other:?}"),
        }
        assert!(RunConfig::parse("k = 1\nk = 2\n").is_err());
        assert!(RunConfig::parse("U = -1\n").is_err());
        assert!(RunConfig::parse("provider = fem\n").is_err());
    }
}
