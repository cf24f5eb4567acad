use crate::error::{Error, Result};
use crate::oracle::SetFunction;
use crate::set::{ElementId, ElementSet};

use super::image::SimilarityMatrix;

pub const FEATURE_DIM: usize = 25;

/// Per-movie feature vectors, ratings in `[0, 10]` and genre labels.
#[derive(Clone, Debug, PartialEq)]
pub struct FeatureTable {
    pub features: Vec<Vec<f64>>,
    pub ratings: Vec<f64>,
    /// Indices into `genre_names`.
    pub genres: Vec<Vec<usize>>,
    pub genre_names: Vec<String>,
}

impl FeatureTable {
    pub fn new(
        features: Vec<Vec<f64>>,
        ratings: Vec<f64>,
        genres: Vec<Vec<usize>>,
        genre_names: Vec<String>,
    ) -> Result<Self> {
        let n = features.len();
        if ratings.len() != n || genres.len() != n {
            return Err(Error::Input("feature table columns have different lengths".into()));
        }
        if let Some(i) = features.iter().position(|q| q.len() != FEATURE_DIM) {
            return Err(Error::Input(format!(
                "movie {i} has {} features, expected {FEATURE_DIM}",
                features[i].len()
            )));
        }
        if let Some(i) = ratings.iter().position(|r| !(0.0..=10.0).contains(r)) {
            return Err(Error::Input(format!(
                "movie {i} has rating {} outside [0, 10]",
                ratings[i]
            )));
        }
        if let Some(i) = genres.iter().position(|g| g.iter().any(|&x| x >= genre_names.len())) {
            return Err(Error::Input(format!("movie {i} has an unknown genre")));
        }
        Ok(Self {
            features,
            ratings,
            genres,
            genre_names,
        })
    }

    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }
}

/// `s(u,v) = exp(−λ·‖q_u − q_v‖)`.
pub fn movie_similarity(table: &FeatureTable, lambda: f64) -> Result<SimilarityMatrix> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::InvalidParameter {
            name: "lambda",
            reason: format!("must be positive, got {lambda}"),
        });
    }
    let n = table.len();
    let mut data = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            let dist: f64 = table.features[i]
                .iter()
                .zip(&table.features[j])
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            data[i * n + j] = (-lambda * dist).exp();
        }
    }
    SimilarityMatrix::new(n, data)
}

/// `f(S) = Σ_{u∈S} Σ_{v∈N} s(u,v) − Σ_{u∈S} Σ_{v∈S} s(u,v)`.
///
/// For a symmetric matrix this is the weighted cut between `S` and `N∖S`.
#[derive(Clone, Debug)]
pub struct MovieFunction {
    sim: SimilarityMatrix,
    row_sums: Vec<f64>,
}

impl MovieFunction {
    pub fn new(sim: SimilarityMatrix) -> Result<Self> {
        if !sim.is_symmetric(1e-12) {
            return Err(Error::Input("movie similarity matrix must be symmetric".into()));
        }
        let row_sums = (0..sim.len()).map(|u| sim.row(u).iter().sum()).collect();
        Ok(Self { sim, row_sums })
    }
}

impl SetFunction for MovieFunction {
    fn ground_size(&self) -> usize {
        self.sim.len()
    }

    fn value(&self, set: &ElementSet) -> f64 {
        let members = set.to_vec();
        members
            .iter()
            .map(|&u| {
                let row = self.sim.row(u as usize);
                self.row_sums[u as usize] - members.iter().map(|&v| row[v as usize]).sum::<f64>()
            })
            .sum()
    }

    fn extension_values(&self, base: &ElementSet, candidates: &[ElementId]) -> (f64, Vec<f64>) {
        let b = self.value(base);
        let ext = candidates
            .iter()
            .map(|&x| {
                if base.contains(x) {
                    return b;
                }
                let row = self.sim.row(x as usize);
                let overlap: f64 = base.iter().map(|v| row[v as usize]).sum();
                b + self.row_sums[x as usize] - 2.0 * overlap - row[x as usize]
            })
            .collect();
        (b, ext)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> FeatureTable {
        let features = (0..4)
            .map(|i| (0..FEATURE_DIM).map(|d| ((i * 7 + d) % 5) as f64 * 0.1).collect())
            .collect();
        FeatureTable::new(
            features,
            vec![7.0, 3.5, 10.0, 0.0],
            vec![vec![0], vec![1], vec![0, 2], vec![2]],
            vec!["a".into(), "b".into(), "c".into()],
        )
        .unwrap()
    }

    #[test]
    fn empty_and_full_are_zero() {
        let f = MovieFunction::new(movie_similarity(&table(), 2.0).unwrap()).unwrap();
        assert_eq!(f.value(&ElementSet::empty(4)), 0.0);
        assert!(f.value(&ElementSet::full(4)).abs() < 1e-12);
    }

    #[test]
    fn singleton_is_off_diagonal_row_sum() {
        let sim = movie_similarity(&table(), 2.0).unwrap();
        let f = MovieFunction::new(sim.clone()).unwrap();
        for u in 0..4 {
            let expected: f64 = (0..4).filter(|&v| v != u).map(|v| sim.get(u, v)).sum();
            let got = f.value(&ElementSet::from_ids(4, [u as ElementId]).unwrap());
            assert!((got - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn extension_matches_value() {
        let f = MovieFunction::new(movie_similarity(&table(), 2.0).unwrap()).unwrap();
        for mask in 0..16u64 {
            let base = ElementSet::from_mask(4, mask);
            let (b, ext) = f.extension_values(&base, &[0, 1, 2, 3]);
            assert_eq!(b, f.value(&base));
            for (u, e) in ext.into_iter().enumerate() {
                assert!((e - f.value(&base.with(u as ElementId))).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn table_validation() {
        let mut t = table();
        t.ratings[0] = 11.0;
        assert!(FeatureTable::new(t.features, t.ratings, t.genres, t.genre_names).is_err());
        assert!(movie_similarity(&table(), 0.0).is_err());
    }
}
