//! Serializable run summaries.

use leiden_core::{LeidenConfig, PhaseSeconds};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfigEcho {
    pub tolerance: f64,
    pub tolerance_drop: f64,
    pub aggregation_tolerance: f64,
    pub max_iterations: usize,
    pub max_passes: usize,
    pub refine: String,
    pub label: String,
    pub seed: u32,
    pub threads: usize,
}

impl From<&LeidenConfig> for ConfigEcho {
    fn from(c: &LeidenConfig) -> Self {
        Self {
            tolerance: c.tolerance,
            tolerance_drop: c.tolerance_drop,
            aggregation_tolerance: c.aggregation_tolerance,
            max_iterations: c.max_iterations,
            max_passes: c.max_passes,
            refine: c.refine_strategy.to_string(),
            label: c.label_strategy.to_string(),
            seed: c.rng_seed,
            threads: c.threads,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseReport {
    pub local_moving: f64,
    pub refinement: f64,
    pub aggregation: f64,
    pub other: f64,
}

impl From<PhaseSeconds> for PhaseReport {
    fn from(p: PhaseSeconds) -> Self {
        Self {
            local_moving: p.local_moving,
            refinement: p.refinement,
            aggregation: p.aggregation,
            other: p.other,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SizeStats {
    pub min: usize,
    pub max: usize,
    pub mean: f64,
}

impl SizeStats {
    /// Statistics over non-empty communities.
    pub fn of(sizes: &[usize]) -> Self {
        let used: Vec<usize> = sizes.iter().copied().filter(|&s| s > 0).collect();
        if used.is_empty() {
            return Self {
                min: 0,
                max: 0,
                mean: 0.0,
            };
        }
        Self {
            min: *used.iter().min().unwrap(),
            max: *used.iter().max().unwrap(),
            mean: used.iter().sum::<usize>() as f64 / used.len() as f64,
        }
    }
}

/// One `detect` run. `phase_seconds` and `wall_seconds` are means over
/// `repeat` runs; the partition is the last run's.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub graph_name: String,
    pub num_vertices: usize,
    /// Stored arcs, both directions of every edge.
    pub num_edges: usize,
    pub config: ConfigEcho,
    pub repeat: usize,
    pub num_communities: usize,
    pub passes: usize,
    pub iterations: Vec<(usize, usize)>,
    pub phase_seconds: PhaseReport,
    /// `None` for graphs without edges.
    pub modularity: Option<f64>,
    pub community_sizes: SizeStats,
    pub num_disconnected: usize,
    pub disconnected_fraction: f64,
    pub wall_seconds: f64,
    pub edges_per_second: f64,
}

pub fn rate(edges: usize, seconds: f64) -> f64 {
    if seconds > 0.0 {
        edges as f64 / seconds
    } else {
        0.0
    }
}

/// One row of the `bench` table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub threads: usize,
    pub refine: String,
    pub label: String,
    pub repeat: usize,
    pub wall_seconds: f64,
    pub local_moving_seconds: f64,
    pub refinement_seconds: f64,
    pub aggregation_seconds: f64,
    pub other_seconds: f64,
    pub modularity: f64,
    pub num_communities: usize,
    pub num_disconnected: usize,
    pub speedup: f64,
}
