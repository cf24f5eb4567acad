//! Seeded synthetic instances.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::set::ElementId;

use super::movie::{FeatureTable, FEATURE_DIM};

/// Undirected graph where each pair is an edge with probability `density`,
/// weighted `U(0, 1)`.
pub fn cut_edges<R: Rng + ?Sized>(n: usize, density: f64, rng: &mut R) -> Vec<(ElementId, ElementId, f64)> {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.gen::<f64>() < density {
                edges.push((u as ElementId, v as ElementId, rng.gen::<f64>()));
            }
        }
    }
    edges
}

/// Directed graph where each node gets `out_degree` distinct random targets,
/// weighted `U(0, 1)`.
pub fn digraph_arcs<R: Rng + ?Sized>(n: usize, out_degree: usize, rng: &mut R) -> Vec<(ElementId, ElementId, f64)> {
    let mut arcs = Vec::with_capacity(n * out_degree);
    let mut others: Vec<ElementId> = Vec::with_capacity(n);
    for u in 0..n {
        others.clear();
        others.extend((0..n).filter(|&v| v != u).map(|v| v as ElementId));
        let (picked, _) = others.partial_shuffle(rng, out_degree.min(n.saturating_sub(1)));
        let mut picked = picked.to_vec();
        picked.sort_unstable();
        for v in picked {
            arcs.push((u as ElementId, v, rng.gen::<f64>()));
        }
    }
    arcs
}

/// Movies with clustered feature vectors, uniform ratings in `[0, 10]` and
/// one or two genres out of `genres`.
pub fn feature_table<R: Rng + ?Sized>(n: usize, genres: usize, rng: &mut R) -> FeatureTable {
    let genres = genres.max(1);
    let centers: Vec<Vec<f64>> = (0..genres)
        .map(|_| (0..FEATURE_DIM).map(|_| rng.gen::<f64>()).collect())
        .collect();
    let mut features = Vec::with_capacity(n);
    let mut ratings = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for _ in 0..n {
        let g = rng.gen_range(0..genres);
        let mut tags = vec![g];
        if genres > 1 && rng.gen::<f64>() < 0.3 {
            let h = rng.gen_range(0..genres);
            if h != g {
                tags.push(h);
                tags.sort_unstable();
            }
        }
        features.push(centers[g].iter().map(|c| c + 0.15 * (rng.gen::<f64>() - 0.5)).collect());
        ratings.push((rng.gen::<f64>() * 100.0).round() / 10.0);
        labels.push(tags);
    }
    let names = (0..genres).map(|g| format!("g{g}")).collect();
    FeatureTable {
        features,
        ratings,
        genres: labels,
        genre_names: names,
    }
}

/// Non-negative pixel vectors drawn around `classes` random templates with a
/// per-image contrast factor.
pub fn pixel_vectors<R: Rng + ?Sized>(
    n: usize,
    dim: usize,
    classes: usize,
    rng: &mut R,
) -> (Vec<Vec<f64>>, Vec<usize>) {
    let classes = classes.max(1);
    let templates: Vec<Vec<f64>> = (0..classes)
        .map(|_| (0..dim).map(|_| rng.gen::<f64>()).collect())
        .collect();
    let mut pixels = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for _ in 0..n {
        let c = rng.gen_range(0..classes);
        let contrast = 0.2 + 0.8 * rng.gen::<f64>();
        pixels.push(
            templates[c]
                .iter()
                .map(|t| (0.5 + contrast * (t - 0.5) + 0.1 * (rng.gen::<f64>() - 0.5)).clamp(0.0, 1.0))
                .collect(),
        );
        labels.push(c);
    }
    (pixels, labels)
}

/// `n` costs drawn `U(lo, hi)`.
pub fn uniform_costs<R: Rng + ?Sized>(n: usize, lo: f64, hi: f64, rng: &mut R) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(lo..hi)).collect()
}
