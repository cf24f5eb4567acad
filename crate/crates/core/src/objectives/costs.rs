use crate::error::{Error, Result};
use crate::set::ElementId;

use super::movie::FeatureTable;
use super::revenue::WeightedDigraph;

/// Smallest cost assigned to an element whose raw cost is zero.
pub const COST_FLOOR: f64 = 1e-9;

/// Node costs `c(u) = 1 − exp(−μ·√(Σ_v w(u,v)))`, floored at [`COST_FLOOR`].
///
/// Returns one cost per node; with several products every (node, product)
/// element inherits its node's cost.
pub fn revenue_costs(graph: &WeightedDigraph, mu: f64) -> Result<Vec<f64>> {
    if !(mu.is_finite() && mu > 0.0) {
        return Err(Error::InvalidParameter {
            name: "mu",
            reason: format!("must be positive, got {mu}"),
        });
    }
    Ok((0..graph.node_count())
        .map(|u| (1.0 - (-mu * graph.out_weight(u as ElementId).sqrt()).exp()).max(COST_FLOOR))
        .collect())
}

/// Floors each raw cost at [`COST_FLOOR`] and rescales so the mean is 1.
pub fn normalize_mean_one(raw: &[f64]) -> Result<Vec<f64>> {
    if let Some(x) = raw.iter().find(|x| !x.is_finite() || **x < 0.0) {
        return Err(Error::Input(format!(
            "raw cost {x} is not a finite non-negative number"
        )));
    }
    if raw.is_empty() {
        return Ok(Vec::new());
    }
    let floored: Vec<f64> = raw.iter().map(|&x| x.max(COST_FLOOR)).collect();
    let mean = floored.iter().sum::<f64>() / floored.len() as f64;
    Ok(floored.into_iter().map(|x| x / mean).collect())
}

/// Costs proportional to `10 − rating`, normalized to mean 1.
pub fn movie_costs(table: &FeatureTable) -> Result<Vec<f64>> {
    let raw: Vec<f64> = table.ratings.iter().map(|r| 10.0 - r).collect();
    normalize_mean_one(&raw)
}

/// Costs proportional to the standard deviation of each image's pixel
/// intensities, normalized to mean 1.
pub fn image_costs(pixels: &[Vec<f64>]) -> Result<Vec<f64>> {
    let raw: Vec<f64> = pixels
        .iter()
        .map(|p| {
            if p.is_empty() {
                return 0.0;
            }
            let m = p.iter().sum::<f64>() / p.len() as f64;
            (p.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / p.len() as f64).sqrt()
        })
        .collect();
    normalize_mean_one(&raw)
}
