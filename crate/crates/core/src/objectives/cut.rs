use crate::error::{Error, Result};
use crate::oracle::SetFunction;
use crate::set::{ElementId, ElementSet};

/// Weighted cut of an undirected graph: total weight of edges with exactly
/// one endpoint in `S`. Non-negative, submodular, non-monotone.
#[derive(Clone, Debug)]
pub struct CutFunction {
    n: usize,
    edges: Vec<(ElementId, ElementId, f64)>,
    adjacency: Vec<Vec<(ElementId, f64)>>,
}

impl CutFunction {
    /// Self-loops are dropped; they never cross a cut.
    pub fn new(n: usize, edges: &[(ElementId, ElementId, f64)]) -> Result<Self> {
        let mut adjacency = vec![Vec::new(); n];
        let mut kept = Vec::with_capacity(edges.len());
        for &(u, v, w) in edges {
            for id in [u, v] {
                if id as usize >= n {
                    return Err(Error::ElementOutOfRange { id, universe: n });
                }
            }
            if !(w.is_finite() && w >= 0.0) {
                return Err(Error::Input(format!("edge ({u},{v}) has invalid weight {w}")));
            }
            if u == v {
                continue;
            }
            adjacency[u as usize].push((v, w));
            adjacency[v as usize].push((u, w));
            kept.push((u, v, w));
        }
        Ok(Self {
            n,
            edges: kept,
            adjacency,
        })
    }

    pub fn edges(&self) -> &[(ElementId, ElementId, f64)] {
        &self.edges
    }
}

impl SetFunction for CutFunction {
    fn ground_size(&self) -> usize {
        self.n
    }

    fn value(&self, set: &ElementSet) -> f64 {
        self.edges
            .iter()
            .filter(|(u, v, _)| set.contains(*u) != set.contains(*v))
            .map(|(_, _, w)| w)
            .sum()
    }

    fn extension_values(&self, base: &ElementSet, candidates: &[ElementId]) -> (f64, Vec<f64>) {
        let b = self.value(base);
        let ext = candidates
            .iter()
            .map(|&u| {
                if base.contains(u) {
                    return b;
                }
                let delta: f64 = self.adjacency[u as usize]
                    .iter()
                    .map(|&(v, w)| if base.contains(v) { -w } else { w })
                    .sum();
                b + delta
            })
            .collect();
        (b, ext)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: usize, ids: &[ElementId]) -> ElementSet {
        ElementSet::from_ids(n, ids.iter().copied()).unwrap()
    }

    #[test]
    fn triangle_and_path() {
        let tri = CutFunction::new(3, &[(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]).unwrap();
        assert_eq!(tri.value(&s(3, &[])), 0.0);
        assert_eq!(tri.value(&s(3, &[0, 1, 2])), 0.0);
        assert_eq!(tri.value(&s(3, &[0])), 2.0);
        let path = CutFunction::new(3, &[(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        assert_eq!(path.value(&s(3, &[1])), 2.0);
    }

    #[test]
    fn extension_matches_value() {
        let g = CutFunction::new(4, &[(0, 1, 0.5), (1, 2, 2.0), (2, 3, 1.5), (0, 3, 0.25)]).unwrap();
        let base = s(4, &[1, 3]);
        let (b, ext) = g.extension_values(&base, &[0, 2, 1]);
        assert_eq!(b, g.value(&base));
        for (&u, e) in [0, 2, 1].iter().zip(ext) {
            assert!((e - g.value(&base.with(u))).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_edges() {
        assert!(CutFunction::new(2, &[(0, 2, 1.0)]).is_err());
        assert!(CutFunction::new(2, &[(0, 1, -1.0)]).is_err());
    }
}
