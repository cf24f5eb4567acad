//! k-system constrained maximization with decreasing thresholds.

use rand::Rng;

use crate::constraints::{Contracted, IndependenceSystem};
use crate::error::{invalid, Error, Result};
use crate::executor::{Probe, Tracker};
use crate::oracle::{SetFunction, Shifted};
use crate::randbatch::{get_seq, rand_batch, RandBatchParams, SearchMode};
use crate::seed;
use crate::set::{ElementId, ElementSet, GroundSet};
use crate::solution::Solution;

/// Acceptance probability: `1/2` for a cardinality constraint, otherwise
/// `1/(1 + √(k+1))`.
pub fn default_p(k: usize, cardinality: bool) -> Result<f64> {
    if k < 1 {
        return Err(invalid("k", "must be at least 1"));
    }
    if cardinality {
        return Ok(0.5);
    }
    Ok(1.0 / (1.0 + ((k + 1) as f64).sqrt()))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SspConfig {
    /// Acceptance probability; `None` picks [`default_p`] for the system.
    pub p: Option<f64>,
    /// Accuracy in `(0, 1)`. The approximation guarantee needs `ε < 0.4`.
    pub epsilon: f64,
    pub search: SearchMode,
    pub seed: u64,
    /// Known maximum feasible cardinality.
    pub r_override: Option<usize>,
}

impl Default for SspConfig {
    fn default() -> Self {
        Self {
            p: None,
            epsilon: 0.3,
            search: SearchMode::Linear,
            seed: 0,
            r_override: None,
        }
    }
}

impl SspConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(invalid("epsilon", format!("must be in (0, 1), got {}", self.epsilon)));
        }
        if self.epsilon >= 0.4 {
            log::warn!(
                "epsilon = {} is outside [0, 0.4), where the approximation bound holds",
                self.epsilon
            );
        }
        if let Some(p) = self.p {
            if !(p > 0.0 && p <= 1.0) {
                return Err(invalid("p", format!("must be in (0, 1], got {p}")));
            }
        }
        if self.r_override == Some(0) {
            return Err(invalid("r_override", "must be at least 1"));
        }
        Ok(())
    }
}

/// Thresholds `ρ_i = ρ_max·(1−ε)^{i−1}` for `i = 1..=ℓ` and the shared
/// count cap `M`.
#[derive(Clone, Debug, PartialEq)]
pub struct ThresholdSchedule {
    pub rho_max: f64,
    pub epsilon: f64,
    /// `ℓ = ⌈log_{1−ε}(ε/r)⌉ + 1`.
    pub len: usize,
    /// `M = ⌈(log_{1−ε}(ε/r) + 2)/ε²⌉`.
    pub max_count: usize,
}

impl ThresholdSchedule {
    pub fn new(rho_max: f64, epsilon: f64, r: usize) -> Result<Self> {
        if !(rho_max.is_finite() && rho_max > 0.0) {
            return Err(invalid("rho_max", format!("must be positive, got {rho_max}")));
        }
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(invalid("epsilon", format!("must be in (0, 1), got {epsilon}")));
        }
        let r = r.max(1) as f64;
        let x = (epsilon / r).ln() / (1.0 - epsilon).ln();
        Ok(Self {
            rho_max,
            epsilon,
            len: ceil_tol(x) as usize + 1,
            max_count: (ceil_tol((x + 2.0) / (epsilon * epsilon)) as usize).max(1),
        })
    }

    /// `ρ_i`, 1-based.
    pub fn threshold(&self, i: usize) -> f64 {
        self.rho_max * (1.0 - self.epsilon).powi(i as i32 - 1)
    }

    pub fn thresholds(&self) -> Vec<f64> {
        (1..=self.len).map(|i| self.threshold(i)).collect()
    }
}

fn ceil_tol(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() < 1e-9 {
        r
    } else {
        x.ceil()
    }
}

/// Upper bound on the size of any feasible set: `r_override`, else the
/// system's own hint, else `k` times the size of one random base.
pub fn effective_r<S, R>(
    system: &S,
    ground: GroundSet,
    rng: &mut R,
    r_override: Option<usize>,
    tracker: &Tracker,
) -> usize
where
    S: IndependenceSystem + ?Sized,
    R: Rng + ?Sized,
{
    if let Some(r) = r_override {
        return r;
    }
    if let Some(r) = system.r_hint() {
        return r.max(1);
    }
    let base = get_seq(&ground.empty(), &ground.full(), system, rng, tracker);
    (system.k().value * base.len()).max(1)
}

/// What one threshold phase did.
#[derive(Clone, Debug, PartialEq)]
pub struct Phase {
    pub threshold: f64,
    /// Candidates offered to this phase.
    pub pool: ElementSet,
    pub accepted: ElementSet,
    pub considered: Vec<ElementId>,
    pub remaining: ElementSet,
}

/// Maximizes `f` over the independent sets of a k-system.
pub fn par_ssp<F, S>(config: &SspConfig, f: &F, system: &S, tracker: &mut Tracker) -> Result<Solution>
where
    F: SetFunction + ?Sized,
    S: IndependenceSystem + ?Sized,
{
    par_ssp_traced(config, f, system, tracker).map(|(s, _)| s)
}

/// [`par_ssp`], also returning every phase in order.
pub fn par_ssp_traced<F, S>(
    config: &SspConfig,
    f: &F,
    system: &S,
    tracker: &mut Tracker,
) -> Result<(Solution, Vec<Phase>)>
where
    F: SetFunction + ?Sized,
    S: IndependenceSystem + ?Sized,
{
    config.validate()?;
    let n = f.ground_size();
    if system.ground_size() != n {
        return Err(Error::UniverseMismatch {
            expected: n,
            found: system.ground_size(),
        });
    }
    let k = system.k();
    if !k.is_bounded() {
        return Err(Error::UnboundedSystem);
    }
    let p = match config.p {
        Some(p) => p,
        None => default_p(k.value, system.is_cardinality())?,
    };
    let empty = ElementSet::empty(n);
    if n == 0 {
        let v = tracker.submit_round(f, std::slice::from_ref(&empty))[0];
        return Ok((Solution::new(empty, v), Vec::new()));
    }

    let all: Vec<ElementId> = (0..n as ElementId).collect();
    let first = &tracker.submit_probes(f, &[Probe::new(empty.clone(), all.clone())])[0];
    let empty_value = first.base_value;
    let mut star: Option<ElementId> = None;
    for &u in &all {
        let v = first.extended[u as usize];
        if star.is_none_or(|s| v > first.extended[s as usize]) && tracker.can_add(system, &empty, u) {
            star = Some(u);
        }
    }
    let star = match star {
        Some(u) if first.extended[u as usize] > 0.0 => u,
        _ => {
            log::warn!("no feasible singleton has positive value; returning the empty set");
            return Ok((Solution::new(empty, empty_value), Vec::new()));
        }
    };
    let star_value = first.extended[star as usize];

    let r = effective_r(
        system,
        GroundSet::new(n),
        &mut seed::stream(config.seed, &[0]),
        config.r_override,
        tracker,
    );
    let schedule = ThresholdSchedule::new(star_value, config.epsilon, r)?;
    let unit = vec![1.0; n];

    let mut solution = ElementSet::empty(n);
    let mut pool = ElementSet::full(n);
    let mut phases = Vec::with_capacity(schedule.len);
    for i in 1..=schedule.len {
        let params = RandBatchParams {
            threshold: schedule.threshold(i),
            max_count: schedule.max_count,
            acceptance: p,
            epsilon: config.epsilon,
            search: config.search,
        };
        let shifted = Shifted::new(f, solution.clone());
        let contracted = Contracted::new(system, solution.clone());
        let mut rng = seed::stream(config.seed, &[1, i as u64]);
        let out = rand_batch(&params, &pool, &shifted, &unit, &contracted, &mut rng, tracker)?;
        let offered = pool.clone();
        solution.union_with(&out.accepted);
        pool.difference_with(&out.considered_set());
        pool.difference_with(&out.remaining);
        phases.push(Phase {
            threshold: params.threshold,
            pool: offered,
            accepted: out.accepted,
            considered: out.considered,
            remaining: out.remaining,
        });
    }

    let value = tracker.submit_round(f, std::slice::from_ref(&solution))[0];
    let mut best = Solution::new(solution, value);
    best.keep_best(Solution::new(empty.with(star), star_value));
    Ok((best, phases))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraints::{
        build_cardinality, build_knapsack, build_label_system, build_partition_matroid, CostModel,
    };
    use crate::objectives::Modular;

    #[test]
    fn default_p_values() {
        assert_eq!(default_p(1, true).unwrap(), 0.5);
        assert!((default_p(3, false).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!((default_p(8, false).unwrap() - 0.25).abs() < 1e-15);
        assert!(default_p(0, false).is_err());
    }

    #[test]
    fn schedule_counts() {
        // log_{0.7}(0.3/4) = ln(0.075)/ln(0.7) = 7.262...
        let s = ThresholdSchedule::new(2.0, 0.3, 4).unwrap();
        assert_eq!(s.len, 9);
        assert_eq!(s.max_count, 103);
        let t = s.thresholds();
        assert_eq!(t[0], 2.0);
        assert!(t.windows(2).all(|w| w[1] < w[0]));
        assert!(t[s.len - 1] <= 0.3 * 2.0 / 4.0);
    }

    #[test]
    fn effective_r_sources() {
        let t = Tracker::sequential();
        let mut rng = seed::stream(0, &[]);
        let card = build_cardinality(6, 3);
        assert_eq!(effective_r(&card, GroundSet::new(6), &mut rng, Some(3), &t), 3);
        let pm = build_partition_matroid(6, &[0, 0, 1, 1, 2, 2], &[2, 1, 1], None).unwrap();
        assert_eq!(effective_r(&pm, GroundSet::new(6), &mut rng, None, &t), 4);
        // Labels carry no hint; bases here have 2 or 3 elements and k = 2.
        let labels = build_label_system(&[vec![0], vec![0], vec![1], vec![1], vec![0, 1]], &[2, 1], 3).unwrap();
        let r = effective_r(&labels, GroundSet::new(5), &mut rng, None, &t);
        assert_eq!(r % 2, 0);
        assert!(r == 4 || r == 6, "r = {r}");
    }

    #[test]
    fn single_element() {
        let f = Modular::new(vec![2.0]).unwrap();
        let mut t = Tracker::sequential();
        let out = par_ssp(&SspConfig::default(), &f, &build_cardinality(1, 1), &mut t).unwrap();
        assert_eq!(out.set.to_vec(), vec![0]);
        assert_eq!(out.value, 2.0);
    }

    #[test]
    fn zero_function() {
        let f = Modular::new(vec![0.0; 3]).unwrap();
        let mut t = Tracker::sequential();
        let out = par_ssp(&SspConfig::default(), &f, &build_cardinality(3, 2), &mut t).unwrap();
        assert_eq!(out.value, 0.0);
    }

    #[test]
    fn knapsack_is_rejected() {
        let f = Modular::new(vec![1.0; 3]).unwrap();
        let sys = build_knapsack(CostModel::unit(3, 2.0).unwrap());
        let mut t = Tracker::sequential();
        assert_eq!(
            par_ssp(&SspConfig::default(), &f, &sys, &mut t),
            Err(Error::UnboundedSystem)
        );
    }

    #[test]
    fn phases_shrink_the_pool_and_stay_feasible() {
        let f = Modular::new(vec![3.0, 2.0, 1.0, 0.5, 0.25, 4.0]).unwrap();
        let sys = build_partition_matroid(6, &[0, 0, 1, 1, 2, 2], &[1, 1, 1], None).unwrap();
        for s in 0..10 {
            let cfg = SspConfig {
                seed: s,
                ..SspConfig::default()
            };
            let mut t = Tracker::sequential();
            let (out, phases) = par_ssp_traced(&cfg, &f, &sys, &mut t).unwrap();
            assert!(sys.is_independent(&out.set));
            let schedule_len = ThresholdSchedule::new(4.0, cfg.epsilon, 3).unwrap().len;
            assert_eq!(phases.len(), schedule_len);
            for w in phases.windows(2) {
                assert!(w[1].threshold < w[0].threshold);
                assert!(w[1].pool.is_subset(&w[0].pool));
            }
            assert!(out.value >= 4.0);
        }
    }
}
