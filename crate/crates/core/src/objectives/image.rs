use crate::error::{Error, Result};
use crate::oracle::SetFunction;
use crate::set::{ElementId, ElementSet};

/// Dense `n × n` similarity matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct SimilarityMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SimilarityMatrix {
    pub fn new(n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::Input(format!(
                "similarity matrix needs {} entries, got {}",
                n * n,
                data.len()
            )));
        }
        if let Some(i) = data.iter().position(|x| !x.is_finite()) {
            return Err(Error::Input(format!(
                "similarity entry ({}, {}) is not finite",
                i / n.max(1),
                i % n.max(1)
            )));
        }
        Ok(Self { n, data })
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(Error::Input(format!(
                "similarity row {i} has {} entries, expected {n}",
                r.len()
            )));
        }
        Self::new(n, rows.into_iter().flatten().collect())
    }

    /// Pairwise cosine similarity of feature vectors; zero vectors get
    /// similarity 0 to everything except themselves (1).
    pub fn cosine(vectors: &[Vec<f64>]) -> Result<Self> {
        let n = vectors.len();
        let norms: Vec<f64> = vectors
            .iter()
            .map(|v| v.iter().map(|x| x * x).sum::<f64>().sqrt())
            .collect();
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                data[i * n + j] = if i == j {
                    1.0
                } else if norms[i] == 0.0 || norms[j] == 0.0 {
                    0.0
                } else {
                    let dot: f64 = vectors[i].iter().zip(&vectors[j]).map(|(a, b)| a * b).sum();
                    dot / (norms[i] * norms[j])
                };
            }
        }
        Self::new(n, data)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, u: usize, v: usize) -> f64 {
        self.data[u * self.n + v]
    }

    pub fn row(&self, u: usize) -> &[f64] {
        &self.data[u * self.n..(u + 1) * self.n]
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| (self.get(i, j) - self.get(j, i)).abs() <= tol))
    }
}

/// Coverage minus redundancy:
/// `f(S) = Σ_{u∈N} max_{v∈S} s(u,v) − (1/n)·Σ_{u∈S} Σ_{v∈S} s(u,v)`,
/// with the maximum over an empty set taken as 0.
#[derive(Clone, Debug)]
pub struct ImageFunction {
    sim: SimilarityMatrix,
}

impl ImageFunction {
    /// Requires a symmetric matrix with non-negative entries whose diagonal
    /// dominates each row, which makes `f` non-negative and submodular.
    pub fn new(sim: SimilarityMatrix) -> Result<Self> {
        if !sim.is_symmetric(1e-12) {
            return Err(Error::Input("image similarity matrix must be symmetric".into()));
        }
        for u in 0..sim.n {
            let row = sim.row(u);
            if row.iter().any(|&x| x < 0.0) {
                return Err(Error::Input(format!("similarity row {u} has a negative entry")));
            }
            if row.iter().any(|&x| x > row[u]) {
                return Err(Error::Input(format!(
                    "similarity row {u} has an entry above its diagonal"
                )));
            }
        }
        Ok(Self { sim })
    }

    pub fn similarity(&self) -> &SimilarityMatrix {
        &self.sim
    }

    fn coverage_maxima(&self, set: &ElementSet) -> Vec<f64> {
        let mut best = vec![0.0f64; self.sim.n];
        for v in set {
            // Symmetry lets us scan row v instead of column v.
            for (b, &s) in best.iter_mut().zip(self.sim.row(v as usize)) {
                if s > *b {
                    *b = s;
                }
            }
        }
        best
    }
}

impl SetFunction for ImageFunction {
    fn ground_size(&self) -> usize {
        self.sim.n
    }

    fn value(&self, set: &ElementSet) -> f64 {
        if set.is_empty() {
            return 0.0;
        }
        let coverage: f64 = self.coverage_maxima(set).iter().sum();
        let members = set.to_vec();
        let redundancy: f64 = members
            .iter()
            .map(|&u| {
                members
                    .iter()
                    .map(|&v| self.sim.get(u as usize, v as usize))
                    .sum::<f64>()
            })
            .sum();
        coverage - redundancy / self.sim.n as f64
    }

    fn extension_values(&self, base: &ElementSet, candidates: &[ElementId]) -> (f64, Vec<f64>) {
        let b = self.value(base);
        let best = self.coverage_maxima(base);
        let n = self.sim.n as f64;
        let ext = candidates
            .iter()
            .map(|&x| {
                if base.contains(x) {
                    return b;
                }
                let row = self.sim.row(x as usize);
                let cover: f64 = row.iter().zip(&best).map(|(&s, &m)| (s - m).max(0.0)).sum();
                let overlap: f64 = base.iter().map(|v| row[v as usize]).sum();
                b + cover - (2.0 * overlap + row[x as usize]) / n
            })
            .collect();
        (b, ext)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two() -> ImageFunction {
        ImageFunction::new(SimilarityMatrix::from_rows(vec![vec![1.0, 0.5], vec![0.5, 1.0]]).unwrap()).unwrap()
    }

    #[test]
    fn formula_values() {
        let f = two();
        assert_eq!(f.value(&ElementSet::empty(2)), 0.0);
        assert!((f.value(&ElementSet::from_ids(2, [0]).unwrap()) - 1.0).abs() < 1e-12);
        assert!((f.value(&ElementSet::full(2)) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn extension_matches_value() {
        let vecs = vec![
            vec![1.0, 0.0, 2.0],
            vec![0.5, 0.5, 0.0],
            vec![0.0, 1.0, 1.0],
            vec![3.0, 1.0, 0.2],
        ];
        let f = ImageFunction::new(SimilarityMatrix::cosine(&vecs).unwrap()).unwrap();
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
    fn rejects_asymmetric_or_negative() {
        let asym = SimilarityMatrix::from_rows(vec![vec![1.0, 0.2], vec![0.3, 1.0]]).unwrap();
        assert!(ImageFunction::new(asym).is_err());
        let neg = SimilarityMatrix::from_rows(vec![vec![1.0, -0.2], vec![-0.2, 1.0]]).unwrap();
        assert!(ImageFunction::new(neg).is_err());
        assert!(SimilarityMatrix::from_rows(vec![vec![1.0], vec![1.0, 2.0]]).is_err());
    }
}
