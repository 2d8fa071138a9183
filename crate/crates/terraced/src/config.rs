//! Validated analysis configuration shared by the CLI subcommands.

use crate::{Result, TerracedError};

/// Output format for reports that have a tabular form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
}

/// Everything a full analysis run needs, validated on construction.
#[derive(Debug, Clone)]
pub struct AnalysisConfig {
    /// Truncation schedule, strictly increasing.
    pub schedule: Vec<usize>,
    /// Largest dyadic block computed exactly.
    pub k_max: u32,
    /// Schatten exponents, each in `(1, inf)`.
    pub q_list: Vec<f64>,
    /// Threshold grid for cut sequences.
    pub eps_grid: Vec<f64>,
    /// Cut scan cap.
    pub cap: u64,
    pub format: OutputFormat,
    pub out: Option<std::path::PathBuf>,
    pub seed: u64,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            schedule: vec![128, 256, 512, 1024, 2048],
            k_max: 20,
            q_list: vec![1.5, 2.0, 3.0],
            eps_grid: Vec::new(),
            cap: 4096,
            format: OutputFormat::Json,
            out: None,
            seed: 0,
        }
    }
}

impl AnalysisConfig {
    pub fn validate(&self) -> Result<()> {
        if self.schedule.is_empty() {
            return Err(TerracedError::invalid("truncation schedule is empty"));
        }
        if self.schedule[0] == 0 {
            return Err(TerracedError::invalid("truncation sizes start at 1"));
        }
        if self.schedule.windows(2).any(|w| w[0] >= w[1]) {
            return Err(TerracedError::invalid(
                "truncation schedule must be strictly increasing",
            ));
        }
        for &q in &self.q_list {
            if !(q > 1.0 && q.is_finite()) {
                return Err(TerracedError::invalid(format!(
                    "Schatten exponent must lie in (1, inf), got {q}"
                )));
            }
        }
        for &e in &self.eps_grid {
            if !(e > 0.0 && e.is_finite()) {
                return Err(TerracedError::invalid(format!(
                    "threshold must be positive, got {e}"
                )));
            }
        }
        if self.cap < 2 {
            return Err(TerracedError::invalid("cut scan cap must be at least 2"));
        }
        Ok(())
    }
}
