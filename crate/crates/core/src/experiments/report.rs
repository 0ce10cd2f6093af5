//! Ratio reports: the machine-readable outcome of a run. JSON carries the
//! full structure; CSV carries one reported trial per row for plotting.

use serde::Serialize;

use crate::error::Result;

/// Max-ratio growth allowed between consecutive refinement levels.
pub const REFINEMENT_GROWTH_LIMIT: f64 = 1.15;

/// Relative ratio spread allowed across the dilation sweep.
pub const SCALING_SPREAD_LIMIT: f64 = 0.05;

/// One measured trial. `flagged` marks degenerate trials where both sides
/// vanish; those carry no ratio and are excluded from the CSV and from the
/// level maxima.
#[derive(Clone, Debug, Serialize)]
pub struct TrialRow {
    pub seed: u64,
    pub grid_points: usize,
    pub steps: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub flagged: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct LevelSummary {
    pub grid_points: usize,
    pub trials: usize,
    pub flagged: usize,
    pub max_ratio: f64,
}

/// One dilation measurement of the scaling sweep.
#[derive(Clone, Debug, Serialize)]
pub struct ScalingRow {
    pub lambda: u32,
    pub seed: u64,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct RatioReport {
    pub experiment: String,
    pub config_digest: String,
    pub rows: Vec<TrialRow>,
    pub levels: Vec<LevelSummary>,
    pub scaling: Vec<ScalingRow>,
    /// Whether every consecutive level pair respects the growth limit;
    /// absent when fewer than two levels report a ratio.
    pub refinement_stable: Option<bool>,
    /// Worst relative spread across lambdas (scaling sweep only).
    pub scaling_spread: Option<f64>,
    /// Whether the mollifier ratios strictly increase (Riesz demo only).
    pub monotone: Option<bool>,
    pub pass: bool,
}

impl RatioReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// One reported (unflagged) trial per row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("seed,N,M,LHS,RHS,ratio\n");
        for row in self.rows.iter().filter(|r| !r.flagged) {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                row.seed, row.grid_points, row.steps, row.lhs, row.rhs, row.ratio
            ));
        }
        out
    }
}

/// Stability verdict over the per-level maxima: `None` until two levels
/// report ratios, otherwise whether each step stays within the limit.
pub fn refinement_stability(levels: &[LevelSummary]) -> Option<bool> {
    let active: Vec<&LevelSummary> = levels.iter().filter(|l| l.max_ratio > 0.0).collect();
    if active.len() < 2 {
        return None;
    }
    Some(
        active
            .windows(2)
            .all(|w| w[1].max_ratio <= REFINEMENT_GROWTH_LIMIT * w[0].max_ratio),
    )
}
