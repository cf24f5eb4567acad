//! Knapsack-constrained maximization: a geometric grid of thresholds, each
//! probed several times in parallel.

use rand::Rng;

use crate::constraints::{build_knapsack, CostModel};
use crate::error::{invalid, Error, Result};
use crate::executor::{Probe, Tracker};
use crate::oracle::SetFunction;
use crate::par;
use crate::randbatch::{rand_batch, RandBatchParams, SearchMode};
use crate::seed;
use crate::set::{ElementId, ElementSet};
use crate::solution::Solution;
use crate::usm::UsmSolver;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SkpConfig {
    /// Grid scale `α ∈ (0, 1/2)`.
    pub alpha: f64,
    /// Accuracy `ε ∈ (0, 5/6)`.
    pub epsilon: f64,
    pub search: SearchMode,
    pub seed: u64,
}

impl Default for SkpConfig {
    fn default() -> Self {
        Self {
            alpha: 0.25,
            epsilon: 0.1,
            search: SearchMode::Linear,
            seed: 0,
        }
    }
}

impl SkpConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 0.5) {
            return Err(invalid("alpha", format!("must be in (0, 1/2), got {}", self.alpha)));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 5.0 / 6.0) {
            return Err(invalid("epsilon", format!("must be in (0, 5/6), got {}", self.epsilon)));
        }
        Ok(())
    }

    /// Probes per threshold, `⌈log_{1−ε} ε⌉`.
    pub fn repetitions(&self) -> usize {
        ceil_tol(self.epsilon.ln() / (1.0 - self.epsilon).ln()).max(1.0) as usize
    }

    /// Count cap for every inner batch selection, `⌈ε⁻²⌉`.
    pub fn max_count(&self) -> usize {
        ceil_tol(1.0 / (self.epsilon * self.epsilon)).max(1.0) as usize
    }
}

/// `⌈x⌉`, ignoring floating-point noise just above an integer.
fn ceil_tol(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() < 1e-9 {
        r
    } else {
        x.ceil()
    }
}

/// Thresholds `(1−ε)^{−z}`, `z ∈ ℤ`, inside `[ρ_min, ρ_max]`, ascending.
#[derive(Clone, Debug, PartialEq)]
pub struct ThresholdGrid {
    pub rho_min: f64,
    pub rho_max: f64,
    pub values: Vec<f64>,
}

impl ThresholdGrid {
    pub fn new(rho_min: f64, rho_max: f64, epsilon: f64) -> Result<Self> {
        if !(rho_min.is_finite() && rho_min > 0.0 && rho_max.is_finite() && rho_max >= rho_min) {
            return Err(invalid(
                "threshold range",
                format!("need 0 < rho_min <= rho_max, got [{rho_min}, {rho_max}]"),
            ));
        }
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(invalid("epsilon", format!("must be in (0, 1), got {epsilon}")));
        }
        let step = -(1.0 - epsilon).ln();
        let at = |z: i64| (1.0 - epsilon).powi(-(z as i32));
        let mut z = (rho_min.ln() / step).ceil() as i64;
        while at(z - 1) >= rho_min {
            z -= 1;
        }
        while at(z) < rho_min {
            z += 1;
        }
        let mut values = Vec::new();
        while at(z) <= rho_max {
            values.push(at(z));
            z += 1;
        }
        Ok(Self {
            rho_min,
            rho_max,
            values,
        })
    }

    /// The grid for an instance: `ρ_min = α·f(u*)/B`, `ρ_max = n²·ρ_min/ε`.
    pub fn for_instance(config: &SkpConfig, best_singleton: f64, budget: f64, n: usize) -> Result<Self> {
        let rho_min = config.alpha * best_singleton / budget;
        let rho_max = (n * n) as f64 * rho_min / config.epsilon;
        Self::new(rho_min, rho_max, config.epsilon)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// One probe at threshold `rho`: two disjoint batch selections over `n1`,
/// each boosted by its best affordable single element, plus an
/// unconstrained pass over `n2 ∪ A1` when that fits the budget.
#[allow(clippy::too_many_arguments)]
pub fn probe<F, U, R>(
    rho: f64,
    n1: &ElementSet,
    n2: &ElementSet,
    epsilon: f64,
    search: SearchMode,
    f: &F,
    costs: &CostModel,
    usm: &U,
    rng: &mut R,
    tracker: &mut Tracker,
) -> Result<Solution>
where
    F: SetFunction + ?Sized,
    U: UsmSolver,
    R: Rng + ?Sized,
{
    let n = f.ground_size();
    let system = build_knapsack(costs.clone());
    let params = RandBatchParams {
        threshold: rho,
        max_count: ceil_tol(1.0 / (epsilon * epsilon)).max(1.0) as usize,
        acceptance: 1.0,
        epsilon,
        search,
    };
    let a1 = rand_batch(&params, n1, f, costs.costs(), &system, rng, tracker)?.accepted;
    let a2 = rand_batch(&params, &n1.difference(&a1), f, costs.costs(), &system, rng, tracker)?.accepted;

    let augment = |a: &ElementSet| -> Probe {
        let cands: Vec<ElementId> = n1
            .iter()
            .filter(|&u| !a.contains(u) && costs.within_budget(&a.with(u)))
            .collect();
        Probe::new(a.clone(), cands)
    };
    let mut probes = vec![Probe::value_only(ElementSet::empty(n)), augment(&a1), augment(&a2)];
    let joined = n2.union(&a1);
    if costs.within_budget(&joined) {
        probes.push(Probe::value_only(usm.solve(&joined, f, rng, tracker)));
    }
    let out = tracker.submit_probes(f, &probes);

    let mut best = Solution::new(probes[0].base.clone(), out[0].base_value);
    for k in 1..3 {
        let (p, o) = (&probes[k], &out[k]);
        best.keep_best(Solution::new(p.base.clone(), o.base_value));
        if let Some(j) = argmax(&o.extended) {
            best.keep_best(Solution::new(p.base.with(p.candidates[j]), o.extended[j]));
        }
    }
    if let (Some(p), Some(o)) = (probes.get(3), out.get(3)) {
        best.keep_best(Solution::new(p.base.clone(), o.base_value));
    }
    Ok(best)
}

/// Index of the first maximum.
fn argmax(values: &[f64]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, &v) in values.iter().enumerate() {
        if best.is_none_or(|b| v > values[b]) {
            best = Some(i);
        }
    }
    best
}

/// Maximizes `f` subject to `c(S) ≤ B`.
///
/// Randomness comes from `config.seed`; the result is identical in parallel
/// and sequential execution.
pub fn par_skp<F, U>(config: &SkpConfig, f: &F, costs: &CostModel, usm: &U, tracker: &mut Tracker) -> Result<Solution>
where
    F: SetFunction + ?Sized,
    U: UsmSolver,
{
    config.validate()?;
    let n = f.ground_size();
    if costs.len() != n {
        return Err(Error::UniverseMismatch {
            expected: n,
            found: costs.len(),
        });
    }
    costs.check_affordable()?;
    let empty = ElementSet::empty(n);
    if n == 0 {
        let v = tracker.submit_round(f, std::slice::from_ref(&empty))[0];
        return Ok(Solution::new(empty, v));
    }

    let small_cost = config.epsilon * costs.budget() / n as f64;
    let mut n1 = ElementSet::empty(n);
    let mut n2 = ElementSet::empty(n);
    for u in 0..n as ElementId {
        if costs.cost(u) > small_cost {
            n1.insert(u);
        } else {
            n2.insert(u);
        }
    }

    let mut rng = seed::stream(config.seed, &[0]);
    let usm_set = usm.solve(&n2, f, &mut rng, tracker);
    let all: Vec<ElementId> = (0..n as ElementId).collect();
    let first = tracker.submit_probes(f, &[Probe::new(empty.clone(), all), Probe::value_only(usm_set.clone())]);
    let star = argmax(&first[0].extended).expect("non-empty ground set") as ElementId;
    let star_value = first[0].extended[star as usize];

    let mut best = Solution::new(usm_set, first[1].base_value);
    best.keep_best(Solution::new(empty.with(star), star_value));

    if star_value <= 0.0 {
        log::warn!("every singleton has value 0; returning the empty set");
        return Ok(Solution::new(empty, first[0].base_value));
    }

    let grid = ThresholdGrid::for_instance(config, star_value, costs.budget(), n)?;
    let reps = config.repetitions();
    let branches: Vec<(usize, f64)> = grid
        .values
        .iter()
        .flat_map(|&rho| std::iter::repeat_n(rho, reps))
        .enumerate()
        .collect();
    let execution = tracker.execution();
    let results = par::map_owned(execution, branches, |(b, rho)| {
        let mut branch_tracker = Tracker::new(execution);
        let mut rng = seed::stream(config.seed, &[1, b as u64]);
        let out = probe(
            rho,
            &n1,
            &n2,
            config.epsilon,
            config.search,
            f,
            costs,
            usm,
            &mut rng,
            &mut branch_tracker,
        );
        (out, branch_tracker)
    });
    let mut trackers = Vec::with_capacity(results.len());
    let mut candidates = Vec::with_capacity(results.len());
    for (out, t) in results {
        candidates.push(out?);
        trackers.push(t);
    }
    tracker.join_parallel(trackers);
    for c in candidates {
        best.keep_best(c);
    }
    Ok(best)
}
