//! Experiment configuration: a flat TOML document, every key optional.
//!
//! ```toml
//! n = 1
//! period = 64.0
//! points = 1048576
//! jmax = 12
//! eps0 = 0.1
//! spacing = 2.0
//! norm_params = [[0, 1, 2], [0, 0.5, 1], [0, 2, 1], [0, inf, 1]]
//! cases = ["plt", "pgt"]
//! j_sweep = [4, 6, 8, 10]
//! out_dir = "out"
//! seed = 20240611
//! random_fields = 20
//! ```
//!
//! `norm_params` holds `(s, p, q)` triples; TOML's `inf` spells `p = ∞`.
//! Unknown keys are rejected by name.

use std::path::{Path, PathBuf};

use crate::counterexample::Case;
use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::lp_family::DEFAULT_EPS0;
use crate::norms::NormParams;

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub n: usize,
    pub period: f64,
    pub points: usize,
    pub jmax: usize,
    pub eps0: f64,
    pub spacing: f64,
    pub norm_params: Vec<[f64; 3]>,
    pub cases: Vec<String>,
    pub j_sweep: Vec<usize>,
    pub out_dir: PathBuf,
    pub seed: u64,
    pub random_fields: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            n: 1,
            period: 64.0,
            points: 1 << 20,
            jmax: 12,
            eps0: DEFAULT_EPS0,
            spacing: 2.0,
            norm_params: vec![
                [0.0, 1.0, 2.0],
                [0.0, 0.5, 1.0],
                [0.0, 2.0, 1.0],
                [0.0, f64::INFINITY, 1.0],
            ],
            cases: vec!["plt".into(), "pgt".into()],
            j_sweep: vec![4, 6, 8, 10],
            out_dir: PathBuf::from("out"),
            seed: 20240611,
            random_fields: 20,
        }
    }
}

fn bad(key: &str, reason: impl Into<String>) -> Error {
    Error::Config {
        key: key.into(),
        reason: reason.into(),
    }
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let table: toml::Table = text
            .parse()
            .map_err(|e: toml::de::Error| bad("<document>", e.message().to_string()))?;
        let mut cfg = Self::default();
        for (key, value) in table {
            let set = match key.as_str() {
                "n" => value.try_into().map(|v| cfg.n = v),
                "period" => value.try_into().map(|v| cfg.period = v),
                "points" => value.try_into().map(|v| cfg.points = v),
                "jmax" => value.try_into().map(|v| cfg.jmax = v),
                "eps0" => value.try_into().map(|v| cfg.eps0 = v),
                "spacing" => value.try_into().map(|v| cfg.spacing = v),
                "norm_params" => value.try_into().map(|v| cfg.norm_params = v),
                "cases" => value.try_into().map(|v| cfg.cases = v),
                "j_sweep" => value.try_into().map(|v| cfg.j_sweep = v),
                "out_dir" => value.try_into().map(|v| cfg.out_dir = v),
                "seed" => value.try_into().map(|v| cfg.seed = v),
                "random_fields" => value.try_into().map(|v| cfg.random_fields = v),
                _ => return Err(bad(&key, "unknown key")),
            };
            set.map_err(|e| bad(&key, e.message().to_string()))?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn grid(&self) -> Result<GridSpec> {
        GridSpec::new(self.n, self.period, self.points)
    }

    /// Norm triples in configuration order.
    pub fn params(&self) -> Vec<NormParams> {
        self.norm_params
            .iter()
            .map(|t| NormParams {
                s: t[0],
                p: t[1],
                q: t[2],
            })
            .collect()
    }

    pub fn case_enabled(&self, case: Case) -> bool {
        self.cases
            .iter()
            .any(|c| c.eq_ignore_ascii_case(case.name()))
    }

    pub fn validate(&self) -> Result<()> {
        self.grid()?;
        if !(self.eps0 > 0.0 && self.eps0 < 0.5) {
            return Err(bad(
                "eps0",
                format!("must lie in (0, 1/2), got {}", self.eps0),
            ));
        }
        if self.jmax < 3 {
            return Err(bad("jmax", "must be at least 3"));
        }
        for t in &self.norm_params {
            NormParams::new(t[0], t[1], t[2]).map_err(|e| bad("norm_params", e.to_string()))?;
        }
        for c in &self.cases {
            if !["plt", "pgt"].contains(&c.to_ascii_lowercase().as_str()) {
                return Err(bad(
                    "cases",
                    format!("unknown case `{c}`, expected plt or pgt"),
                ));
            }
        }
        if self.j_sweep.is_empty() {
            return Err(bad("j_sweep", "must not be empty"));
        }
        if self.j_sweep.windows(2).any(|w| w[0] >= w[1]) {
            return Err(bad("j_sweep", "must be strictly ascending"));
        }
        if self.j_sweep[0] == 0 {
            return Err(bad("j_sweep", "truncation levels start at 1"));
        }
        if self.random_fields == 0 {
            return Err(bad("random_fields", "must be positive"));
        }
        Ok(())
    }
}
