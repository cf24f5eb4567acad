use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::oracle::SetFunction;
use crate::set::{ElementId, ElementSet};

/// Directed graph with non-negative arc weights `w(u,v)`.
///
/// Parallel arcs are merged by summing weights; self-loops are dropped.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedDigraph {
    n: usize,
    out: Vec<Vec<(ElementId, f64)>>,
}

impl WeightedDigraph {
    pub fn new(n: usize, arcs: &[(ElementId, ElementId, f64)]) -> Result<Self> {
        let mut merged: BTreeMap<(ElementId, ElementId), f64> = BTreeMap::new();
        for &(u, v, w) in arcs {
            for id in [u, v] {
                if id as usize >= n {
                    return Err(Error::ElementOutOfRange { id, universe: n });
                }
            }
            if !(w.is_finite() && w >= 0.0) {
                return Err(Error::Input(format!("arc ({u},{v}) has invalid weight {w}")));
            }
            if u != v {
                *merged.entry((u, v)).or_insert(0.0) += w;
            }
        }
        let mut out = vec![Vec::new(); n];
        for ((u, v), w) in merged {
            out[u as usize].push((v, w));
        }
        Ok(Self { n, out })
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn out_arcs(&self, u: ElementId) -> &[(ElementId, f64)] {
        &self.out[u as usize]
    }

    pub fn out_weight(&self, u: ElementId) -> f64 {
        self.out[u as usize].iter().map(|(_, w)| w).sum()
    }

    pub fn arcs(&self) -> impl Iterator<Item = (ElementId, ElementId, f64)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(u, vs)| vs.iter().map(move |&(v, w)| (u as ElementId, v, w)))
    }
}

/// Total revenue over `t` products. Element `i·n + u` seeds node `u` with
/// product `i`; product `i` earns `Σ_{u∉S_i} √(Σ_{v∈S_i} w(v,u))`.
#[derive(Clone, Debug)]
pub struct RevenueFunction {
    graph: WeightedDigraph,
    products: usize,
}

impl RevenueFunction {
    pub fn new(graph: WeightedDigraph, products: usize) -> Result<Self> {
        if products == 0 {
            return Err(Error::InvalidParameter {
                name: "products",
                reason: "at least one product is required".into(),
            });
        }
        Ok(Self { graph, products })
    }

    pub fn graph(&self) -> &WeightedDigraph {
        &self.graph
    }

    pub fn products(&self) -> usize {
        self.products
    }

    pub fn element(&self, product: usize, node: ElementId) -> ElementId {
        (product * self.graph.n) as ElementId + node
    }

    /// `(product, node)` for an element id.
    pub fn split(&self, e: ElementId) -> (usize, ElementId) {
        let n = self.graph.n;
        ((e as usize) / n, (e as usize % n) as ElementId)
    }

    /// Seed indicator and incoming seed weight per node, for one product.
    fn slice_state(&self, set: &ElementSet, product: usize) -> (Vec<bool>, Vec<f64>) {
        let n = self.graph.n;
        let mut seeded = vec![false; n];
        let mut incoming = vec![0.0; n];
        let lo = (product * n) as ElementId;
        let hi = ((product + 1) * n) as ElementId;
        for e in set.iter().filter(|&e| e >= lo && e < hi) {
            let v = e - lo;
            seeded[v as usize] = true;
            for &(u, w) in self.graph.out_arcs(v) {
                incoming[u as usize] += w;
            }
        }
        (seeded, incoming)
    }
}

impl SetFunction for RevenueFunction {
    fn ground_size(&self) -> usize {
        self.graph.n * self.products
    }

    fn value(&self, set: &ElementSet) -> f64 {
        (0..self.products)
            .map(|i| {
                let (seeded, incoming) = self.slice_state(set, i);
                seeded
                    .iter()
                    .zip(&incoming)
                    .filter(|(s, _)| !**s)
                    .map(|(_, x)| x.sqrt())
                    .sum::<f64>()
            })
            .sum()
    }

    fn extension_values(&self, base: &ElementSet, candidates: &[ElementId]) -> (f64, Vec<f64>) {
        let b = self.value(base);
        let mut states: Vec<Option<(Vec<bool>, Vec<f64>)>> = vec![None; self.products];
        let ext = candidates
            .iter()
            .map(|&e| {
                if base.contains(e) {
                    return b;
                }
                let (product, x) = self.split(e);
                let (seeded, incoming) = states[product].get_or_insert_with(|| self.slice_state(base, product));
                let mut delta = -incoming[x as usize].sqrt();
                for &(u, w) in self.graph.out_arcs(x) {
                    if !seeded[u as usize] {
                        let before = incoming[u as usize];
                        delta += (before + w).sqrt() - before.sqrt();
                    }
                }
                b + delta
            })
            .collect();
        (b, ext)
    }
}
