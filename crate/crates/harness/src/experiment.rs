//! Sweep × repeat experiment runner.

use std::time::Instant;

use parsubmod::objectives::BRUTE_FORCE_LIMIT;
use parsubmod::seed::{derive_seed, stream};
use parsubmod::*;

use crate::config::{Algorithm, ConstraintKind, ExperimentConfig, Problem};
use crate::error::{HarnessError, Result};
use crate::greedy::density_greedy;
use crate::instance::Instance;

/// One run of one algorithm at one sweep point.
#[derive(Clone, Debug, PartialEq)]
pub struct ResultRow {
    pub algorithm: Algorithm,
    pub problem: Problem,
    pub n: usize,
    pub param: f64,
    pub seed: u64,
    pub metrics: RunMetrics,
    /// Utility over the best utility at the same sweep point; filled in by
    /// [`normalize`].
    pub normalized: f64,
}

/// The constraint in force at one sweep point.
pub struct Bound {
    pub system: Constraint,
    pub costs: Option<CostModel>,
}

impl Bound {
    pub fn at(instance: &Instance, config: &ExperimentConfig, param: f64) -> Result<Self> {
        let n = instance.n();
        Ok(match config.kind() {
            ConstraintKind::Knapsack => {
                let model = instance.knapsack(param)?;
                Bound {
                    system: build_knapsack(model.clone()),
                    costs: Some(model),
                }
            }
            ConstraintKind::System => Bound {
                system: instance.system(param as usize, config.q)?,
                costs: None,
            },
            ConstraintKind::Free => Bound {
                system: build_unconstrained(n),
                costs: None,
            },
        })
    }

    /// Hard check applied to every returned solution.
    pub fn check<F: SetFunction + ?Sized>(&self, f: &F, s: &Solution, what: &str) -> Result<()> {
        let fail = |msg: String| Err(HarnessError::Assertion(format!("{what}: {msg}")));
        if s.set.universe() != f.ground_size() {
            return fail(format!(
                "set over {} elements, expected {}",
                s.set.universe(),
                f.ground_size()
            ));
        }
        if !self.system.is_independent(&s.set) {
            return fail(format!("infeasible output {:?}", s.set.to_vec()));
        }
        let exact = f.value(&s.set);
        let matches = (s.value - exact).abs() <= 1e-6 * exact.abs().max(1.0);
        if !matches {
            return fail(format!("reported value {} but f(S) = {exact}", s.value));
        }
        Ok(())
    }
}

/// Runs `algorithm` once. The tracker collects its rounds and queries.
pub fn solve(
    algorithm: Algorithm,
    config: &ExperimentConfig,
    instance: &Instance,
    bound: &Bound,
    seed: u64,
    tracker: &mut Tracker,
) -> Result<Solution> {
    let f = &*instance.objective;
    let n = instance.n();
    let epsilon = config.epsilon_for(algorithm);
    let need_costs = || {
        bound
            .costs
            .as_ref()
            .ok_or_else(|| HarnessError::Input(format!("{algorithm} needs a budget")))
    };
    Ok(match algorithm {
        Algorithm::ParSkp => {
            let model = need_costs()?;
            let skp = SkpConfig {
                alpha: config.alpha,
                epsilon,
                search: config.search,
                seed,
            };
            let affordable = model.affordable();
            if affordable.len() == n {
                par_skp(&skp, f, model, &RandomSubset, tracker)?
            } else if affordable.is_empty() {
                let empty = ElementSet::empty(n);
                let v = tracker.evaluate(f, &empty)?;
                Solution::new(empty, v)
            } else {
                let costs: Vec<f64> = affordable.iter().map(|&u| model.cost(u)).collect();
                let local = CostModel::new(costs, model.budget())?;
                let restricted = Restricted::new(f, affordable);
                let s = par_skp(&skp, &restricted, &local, &RandomSubset, tracker)?;
                Solution::new(restricted.lift(&s.set), s.value)
            }
        }
        Algorithm::ParSsp => {
            let ssp = SspConfig {
                p: config.p,
                epsilon,
                search: config.search,
                seed,
                r_override: None,
            };
            par_ssp(&ssp, f, &bound.system, tracker)?
        }
        Algorithm::Usm => {
            let set = RandomSubset.solve(&ElementSet::full(n), f, &mut stream(seed, &[]), tracker);
            let v = tracker.evaluate(f, &set)?;
            Solution::new(set, v)
        }
        Algorithm::Greedy => {
            let unit;
            let costs = match &bound.costs {
                Some(m) => m.costs(),
                None => {
                    unit = vec![1.0; n];
                    &unit
                }
            };
            density_greedy(f, costs, &bound.system, tracker)
        }
        Algorithm::BruteForce => {
            if n > BRUTE_FORCE_LIMIT {
                return Err(HarnessError::Input(format!(
                    "bruteforce handles at most {BRUTE_FORCE_LIMIT} elements, instance has {n}"
                )));
            }
            let (v, set) = brute_force_opt(f, &bound.system, None)?;
            Solution::new(set, v)
        }
    })
}

/// Every sweep point × algorithm × repeat, in that order. Run `r` at sweep
/// point `i` uses seed `derive_seed(seed, [i, r])` whatever the algorithm.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    config.validate()?;
    let instance = Instance::for_config(config)?;
    let mut rows = Vec::new();
    for (i, param) in config.sweep().into_iter().enumerate() {
        let bound = Bound::at(&instance, config, param)?;
        for &algorithm in &config.algorithms {
            let runs: Vec<u64> = (0..config.repeats as u64).collect();
            let results = par::map_owned(config.execution, runs, |r| -> Result<ResultRow> {
                let seed = derive_seed(config.seed, &[i as u64, r]);
                let mut tracker = Tracker::new(config.execution);
                let start = Instant::now();
                let s = solve(algorithm, config, &instance, &bound, seed, &mut tracker)?;
                let wall_ms = if config.timing {
                    start.elapsed().as_millis() as u64
                } else {
                    0
                };
                bound.check(&*instance.objective, &s, &format!("{algorithm} at {param}, run {r}"))?;
                Ok(ResultRow {
                    algorithm,
                    problem: config.problem,
                    n: instance.n(),
                    param,
                    seed,
                    metrics: tracker.metrics(s.value, wall_ms),
                    normalized: f64::NAN,
                })
            });
            for row in results {
                rows.push(row?);
            }
        }
    }
    normalize(&mut rows);
    Ok(rows)
}

/// Divides each utility by the best utility among rows with the same `param`.
/// A point whose best utility is 0 normalizes to 1.
pub fn normalize(rows: &mut [ResultRow]) {
    let mut best: Vec<(f64, f64)> = Vec::new();
    for r in rows.iter() {
        match best.iter_mut().find(|(p, _)| *p == r.param) {
            Some((_, b)) => *b = b.max(r.metrics.utility),
            None => best.push((r.param, r.metrics.utility)),
        }
    }
    for r in rows.iter_mut() {
        let b = best.iter().find(|(p, _)| *p == r.param).unwrap().1;
        r.normalized = if b > 0.0 { r.metrics.utility / b } else { 1.0 };
    }
}
