//! Experiment configuration, from CLI flags or a TOML file.

use std::fmt;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use parsubmod::{Execution, SearchMode};
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Problem {
    Revenue,
    Image,
    Movie,
    SyntheticCut,
}

impl Problem {
    pub fn as_str(self) -> &'static str {
        match self {
            Problem::Revenue => "revenue",
            Problem::Image => "image",
            Problem::Movie => "movie",
            Problem::SyntheticCut => "synthetic-cut",
        }
    }
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
#[value(rename_all = "lowercase")]
pub enum Algorithm {
    ParSkp,
    ParSsp,
    Usm,
    Greedy,
    BruteForce,
}

impl Algorithm {
    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::ParSkp => "parskp",
            Algorithm::ParSsp => "parssp",
            Algorithm::Usm => "usm",
            Algorithm::Greedy => "greedy",
            Algorithm::BruteForce => "bruteforce",
        }
    }

    /// Default accuracy when none is configured.
    pub fn default_epsilon(self) -> f64 {
        match self {
            Algorithm::ParSsp => 0.4,
            _ => 0.1,
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which constraint family the sweep parameter controls.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConstraintKind {
    /// Budget sweep; feasibility is `c(S) ≤ B`.
    Knapsack,
    /// Cardinality-cap sweep over the problem's independence system.
    System,
    /// No constraint; only the unconstrained solver accepts this.
    Free,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub problem: Problem,
    pub algorithms: Vec<Algorithm>,
    /// Per-algorithm default when unset.
    pub epsilon: Option<f64>,
    pub alpha: f64,
    /// ParSSP acceptance probability; unset picks the system's default.
    pub p: Option<f64>,
    pub budgets: Vec<f64>,
    pub caps: Vec<usize>,
    pub repeats: usize,
    pub seed: u64,
    pub search: SearchMode,
    /// Directory of instance files. Without it an instance is generated.
    pub data: Option<PathBuf>,
    /// Size of a generated instance.
    pub n: usize,
    /// Products in the revenue system instance.
    pub products: usize,
    /// Per-node, per-category or per-genre cap of the system instances.
    pub q: Option<usize>,
    pub unit_costs: bool,
    /// Record wall-clock time; otherwise `wall_ms` is 0 so output is
    /// reproducible byte for byte.
    pub timing: bool,
    pub execution: Execution,
    pub out: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            problem: Problem::SyntheticCut,
            algorithms: vec![Algorithm::ParSkp],
            epsilon: None,
            alpha: 0.25,
            p: None,
            budgets: Vec::new(),
            caps: Vec::new(),
            repeats: 10,
            seed: 0,
            search: SearchMode::Linear,
            data: None,
            n: 100,
            products: 5,
            q: None,
            unit_costs: false,
            timing: false,
            execution: Execution::Parallel,
            out: None,
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        toml::from_str(&text).map_err(|e| HarnessError::io(path, e))
    }

    pub fn kind(&self) -> ConstraintKind {
        if !self.budgets.is_empty() {
            ConstraintKind::Knapsack
        } else if !self.caps.is_empty() {
            ConstraintKind::System
        } else {
            ConstraintKind::Free
        }
    }

    /// Sweep values as written to the `param` column.
    pub fn sweep(&self) -> Vec<f64> {
        match self.kind() {
            ConstraintKind::Knapsack => self.budgets.clone(),
            ConstraintKind::System => self.caps.iter().map(|&m| m as f64).collect(),
            ConstraintKind::Free => vec![0.0],
        }
    }

    pub fn epsilon_for(&self, algorithm: Algorithm) -> f64 {
        self.epsilon.unwrap_or_else(|| algorithm.default_epsilon())
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(HarnessError::Input(msg));
        if self.algorithms.is_empty() {
            return bad("no algorithm given".into());
        }
        if self.repeats == 0 {
            return bad("repeats must be at least 1".into());
        }
        if self.n == 0 || self.products == 0 {
            return bad("n and products must be positive".into());
        }
        if let Some(e) = self.epsilon {
            if !(e > 0.0 && e < 1.0) {
                return bad(format!("epsilon must be in (0, 1), got {e}"));
            }
        }
        if self.q == Some(0) {
            return bad("q must be positive".into());
        }
        if !self.budgets.is_empty() && !self.caps.is_empty() {
            return bad("give either a budget sweep or a cap sweep, not both".into());
        }
        if !increasing_positive(&self.budgets) {
            return bad("budgets must be positive, finite and strictly increasing".into());
        }
        let caps: Vec<f64> = self.caps.iter().map(|&m| m as f64).collect();
        if !increasing_positive(&caps) {
            return bad("caps must be positive and strictly increasing".into());
        }
        let kind = self.kind();
        for &a in &self.algorithms {
            let ok = match a {
                Algorithm::ParSkp => kind == ConstraintKind::Knapsack,
                Algorithm::ParSsp => kind == ConstraintKind::System,
                Algorithm::Usm => kind == ConstraintKind::Free,
                Algorithm::Greedy | Algorithm::BruteForce => true,
            };
            if !ok {
                let need = match a {
                    Algorithm::ParSkp => "needs --budget",
                    Algorithm::ParSsp => "needs --m",
                    _ => "is unconstrained and takes neither --budget nor --m",
                };
                return bad(format!("algorithm {a} {need}"));
            }
        }
        Ok(())
    }
}

fn increasing_positive(values: &[f64]) -> bool {
    values.iter().all(|v| v.is_finite() && *v > 0.0) && values.windows(2).all(|w| w[0] < w[1])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toml_round_trip() {
        let c = ExperimentConfig {
            problem: Problem::Movie,
            algorithms: vec![Algorithm::ParSsp, Algorithm::Greedy],
            caps: vec![2, 4, 8],
            search: SearchMode::Binary,
            ..Default::default()
        };
        let text = toml::to_string(&c).unwrap();
        assert!(text.contains("problem = \"movie\""));
        assert!(text.contains("\"parssp\""));
        assert_eq!(toml::from_str::<ExperimentConfig>(&text).unwrap(), c);
    }

    #[test]
    fn partial_toml_uses_defaults() {
        let c: ExperimentConfig = toml::from_str("problem = \"synthetic-cut\"\nbudgets = [1.0, 2.0]\n").unwrap();
        assert_eq!(c.repeats, 10);
        assert_eq!(c.kind(), ConstraintKind::Knapsack);
        assert!(c.validate().is_ok());
        assert!(toml::from_str::<ExperimentConfig>("colour = 3").is_err());
    }

    #[test]
    fn validation() {
        let base = ExperimentConfig {
            budgets: vec![1.0, 2.0],
            ..Default::default()
        };
        assert!(base.validate().is_ok());
        let mut c = base.clone();
        c.budgets = vec![2.0, 1.0];
        assert!(c.validate().is_err());
        let mut c = base.clone();
        c.repeats = 0;
        assert!(c.validate().is_err());
        let mut c = base.clone();
        c.algorithms = vec![Algorithm::ParSsp];
        assert!(c.validate().is_err());
        let mut c = base.clone();
        c.caps = vec![3];
        assert!(c.validate().is_err());
        let c = ExperimentConfig {
            algorithms: vec![Algorithm::Usm],
            ..Default::default()
        };
        assert!(c.validate().is_ok());
        assert_eq!(c.sweep(), vec![0.0]);
    }

    #[test]
    fn epsilon_defaults() {
        let c = ExperimentConfig::default();
        assert_eq!(c.epsilon_for(Algorithm::ParSkp), 0.1);
        assert_eq!(c.epsilon_for(Algorithm::ParSsp), 0.4);
    }
}
