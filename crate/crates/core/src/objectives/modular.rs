use crate::error::{invalid, Result};
use crate::oracle::SetFunction;
use crate::set::{ElementId, ElementSet};

/// `f(S) = Σ_{u∈S} w_u` with non-negative weights.
#[derive(Clone, Debug, PartialEq)]
pub struct Modular {
    weights: Vec<f64>,
}

impl Modular {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(invalid("weights", "modular weights must be finite and non-negative"));
        }
        Ok(Self { weights })
    }
}

impl SetFunction for Modular {
    fn ground_size(&self) -> usize {
        self.weights.len()
    }

    fn value(&self, set: &ElementSet) -> f64 {
        set.iter().map(|u| self.weights[u as usize]).sum()
    }

    fn extension_values(&self, base: &ElementSet, candidates: &[ElementId]) -> (f64, Vec<f64>) {
        let b = self.value(base);
        let ext = candidates
            .iter()
            .map(|&u| {
                if base.contains(u) {
                    b
                } else {
                    b + self.weights[u as usize]
                }
            })
            .collect();
        (b, ext)
    }
}
