//! Round-based query execution with adaptivity accounting.
//!
//! Every call to [`Tracker::submit_round`] or [`Tracker::submit_probes`] with a
//! non-empty batch is one adaptive round: its queries may run concurrently and
//! none depends on another's result. Independent algorithm branches get their
//! own forked tracker and are merged back with [`Tracker::join_parallel`],
//! which aligns the branches' rounds so the parent is charged the deepest
//! branch rather than the sum.

use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};

use crate::constraints::IndependenceSystem;
use crate::error::{Error, Result};
use crate::oracle::SetFunction;
use crate::par::{self, Execution};
use crate::set::{ElementId, ElementSet};

/// Candidates per work item when a probe is split across workers.
const CHUNK: usize = 256;

/// One base set plus single-element extensions to evaluate against it.
///
/// Costs `1 + candidates.len()` queries: `f(base)` and `f(base ∪ {u})` for
/// each candidate.
#[derive(Clone, Debug)]
pub struct Probe {
    pub base: ElementSet,
    pub candidates: Vec<ElementId>,
}

impl Probe {
    pub fn new(base: ElementSet, candidates: Vec<ElementId>) -> Self {
        Self { base, candidates }
    }

    pub fn value_only(base: ElementSet) -> Self {
        Self {
            base,
            candidates: Vec::new(),
        }
    }

    fn queries(&self) -> u64 {
        1 + self.candidates.len() as u64
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProbeOutcome {
    pub base_value: f64,
    pub extended: Vec<f64>,
}

impl ProbeOutcome {
    /// Marginal gain of the `j`-th candidate.
    pub fn gain(&self, j: usize) -> f64 {
        self.extended[j] - self.base_value
    }

    pub fn gains(&self) -> impl Iterator<Item = f64> + '_ {
        self.extended.iter().map(move |v| v - self.base_value)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RunMetrics {
    pub utility: f64,
    pub rounds: u64,
    pub queries: u64,
    pub max_queries_per_round: u64,
    pub independence_checks: u64,
    pub wall_ms: u64,
}

#[derive(Debug, Default)]
pub struct Tracker {
    execution: Execution,
    round_queries: Vec<u64>,
    independence_checks: AtomicU64,
}

impl Clone for Tracker {
    fn clone(&self) -> Self {
        Self {
            execution: self.execution,
            round_queries: self.round_queries.clone(),
            independence_checks: AtomicU64::new(self.independence_checks()),
        }
    }
}

impl Tracker {
    pub fn new(execution: Execution) -> Self {
        Self {
            execution,
            round_queries: Vec::new(),
            independence_checks: AtomicU64::new(0),
        }
    }

    pub fn sequential() -> Self {
        Self::new(Execution::Sequential)
    }

    pub fn execution(&self) -> Execution {
        self.execution
    }

    /// Evaluates every set in one round. An empty batch is a no-op.
    pub fn submit_round<F>(&mut self, f: &F, sets: &[ElementSet]) -> Vec<f64>
    where
        F: SetFunction + ?Sized,
    {
        if sets.is_empty() {
            return Vec::new();
        }
        self.round_queries.push(sets.len() as u64);
        par::map(self.execution, sets, |s| f.value(s))
    }

    /// Evaluates a batch of probes in one round. An empty batch is a no-op.
    pub fn submit_probes<F>(&mut self, f: &F, probes: &[Probe]) -> Vec<ProbeOutcome>
    where
        F: SetFunction + ?Sized,
    {
        if probes.is_empty() {
            return Vec::new();
        }
        self.round_queries.push(probes.iter().map(Probe::queries).sum());

        if !self.execution.spreads() {
            return probes
                .iter()
                .map(|p| {
                    let (base_value, extended) = if p.candidates.is_empty() {
                        (f.value(&p.base), Vec::new())
                    } else {
                        f.extension_values(&p.base, &p.candidates)
                    };
                    ProbeOutcome { base_value, extended }
                })
                .collect();
        }

        // Split large probes into chunks so one wide probe still spreads
        // across workers. The base value is taken from the first chunk.
        let mut work: Vec<(usize, usize, usize)> = Vec::new();
        for (i, p) in probes.iter().enumerate() {
            if p.candidates.is_empty() {
                work.push((i, 0, 0));
            } else {
                let mut start = 0;
                while start < p.candidates.len() {
                    let end = (start + CHUNK).min(p.candidates.len());
                    work.push((i, start, end));
                    start = end;
                }
            }
        }
        let parts = par::map(self.execution, &work, |&(i, start, end)| {
            let p = &probes[i];
            if start == end {
                (f.value(&p.base), Vec::new())
            } else {
                f.extension_values(&p.base, &p.candidates[start..end])
            }
        });
        let mut out: Vec<ProbeOutcome> = probes
            .iter()
            .map(|p| ProbeOutcome {
                base_value: f64::NAN,
                extended: Vec::with_capacity(p.candidates.len()),
            })
            .collect();
        for (&(i, start, _), (base_value, extended)) in work.iter().zip(parts) {
            if start == 0 {
                out[i].base_value = base_value;
            }
            out[i].extended.extend(extended);
        }
        out
    }

    /// One query, as its own round. Rejects sets over a different ground set.
    pub fn evaluate<F>(&mut self, f: &F, set: &ElementSet) -> Result<f64>
    where
        F: SetFunction + ?Sized,
    {
        check_universe(f.ground_size(), set)?;
        Ok(self.submit_round(f, std::slice::from_ref(set))[0])
    }

    /// `f(u | S)` in one round of two queries; zero without queries if `u ∈ S`.
    pub fn marginal<F>(&mut self, f: &F, u: ElementId, set: &ElementSet) -> Result<f64>
    where
        F: SetFunction + ?Sized,
    {
        check_universe(f.ground_size(), set)?;
        if u as usize >= set.universe() {
            return Err(Error::ElementOutOfRange {
                id: u,
                universe: set.universe(),
            });
        }
        if set.contains(u) {
            return Ok(0.0);
        }
        let out = self.submit_probes(f, &[Probe::new(set.clone(), vec![u])]);
        Ok(out[0].gain(0))
    }

    /// Independence query; counted separately from value queries and rounds.
    pub fn is_independent<S>(&self, system: &S, set: &ElementSet) -> bool
    where
        S: IndependenceSystem + ?Sized,
    {
        self.independence_checks.fetch_add(1, Ordering::Relaxed);
        system.is_independent(set)
    }

    /// Whether `set ∪ {u}` is independent; one independence check.
    pub fn can_add<S>(&self, system: &S, set: &ElementSet, u: ElementId) -> bool
    where
        S: IndependenceSystem + ?Sized,
    {
        self.independence_checks.fetch_add(1, Ordering::Relaxed);
        system.can_add(set, u)
    }

    /// A fresh tracker for an independent branch, with the same execution mode.
    pub fn fork(&self) -> Tracker {
        Tracker::new(self.execution)
    }

    /// Merges branches that ran side by side: round `i` of every branch is
    /// charged as one combined round.
    pub fn join_parallel<I>(&mut self, branches: I)
    where
        I: IntoIterator<Item = Tracker>,
    {
        let mut merged: Vec<u64> = Vec::new();
        for branch in branches {
            if merged.len() < branch.round_queries.len() {
                merged.resize(branch.round_queries.len(), 0);
            }
            for (slot, q) in merged.iter_mut().zip(&branch.round_queries) {
                *slot += q;
            }
            self.independence_checks
                .fetch_add(branch.independence_checks(), Ordering::Relaxed);
        }
        self.round_queries.extend(merged);
    }

    /// Appends a branch that ran after everything recorded so far.
    pub fn join_sequential(&mut self, other: Tracker) {
        self.independence_checks
            .fetch_add(other.independence_checks(), Ordering::Relaxed);
        self.round_queries.extend(other.round_queries);
    }

    pub fn rounds(&self) -> u64 {
        self.round_queries.len() as u64
    }

    pub fn queries(&self) -> u64 {
        self.round_queries.iter().sum()
    }

    pub fn max_queries_per_round(&self) -> u64 {
        self.round_queries.iter().copied().max().unwrap_or(0)
    }

    pub fn independence_checks(&self) -> u64 {
        self.independence_checks.load(Ordering::Relaxed)
    }

    pub fn round_sizes(&self) -> &[u64] {
        &self.round_queries
    }

    pub fn metrics(&self, utility: f64, wall_ms: u64) -> RunMetrics {
        RunMetrics {
            utility,
            rounds: self.rounds(),
            queries: self.queries(),
            max_queries_per_round: self.max_queries_per_round(),
            independence_checks: self.independence_checks(),
            wall_ms,
        }
    }
}

fn check_universe(expected: usize, set: &ElementSet) -> Result<()> {
    if set.universe() != expected {
        return Err(Error::UniverseMismatch {
            expected,
            found: set.universe(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objectives::{CutFunction, Modular};

    fn singletons(n: usize) -> Vec<ElementSet> {
        (0..n as ElementId)
            .map(|u| ElementSet::from_ids(n, [u]).unwrap())
            .collect()
    }

    #[test]
    fn evaluate_cut_on_single_edge() {
        let f = CutFunction::new(2, &[(0, 1, 1.0)]).unwrap();
        let mut t = Tracker::default();
        assert_eq!(t.evaluate(&f, &ElementSet::empty(2)).unwrap(), 0.0);
        assert_eq!(t.evaluate(&f, &ElementSet::from_ids(2, [0]).unwrap()).unwrap(), 1.0);
        assert_eq!(t.evaluate(&f, &ElementSet::full(2)).unwrap(), 0.0);
        assert_eq!(t.queries(), 3);
        assert!(t.evaluate(&f, &ElementSet::empty(3)).is_err());
    }

    #[test]
    fn round_of_singletons_on_modular() {
        let f = Modular::new(vec![1.0; 3]).unwrap();
        let mut t = Tracker::default();
        assert_eq!(t.submit_round(&f, &singletons(3)), vec![1.0, 1.0, 1.0]);
        assert_eq!(t.rounds(), 1);
    }

    #[test]
    fn empty_batch_is_not_a_round() {
        let f = Modular::new(vec![1.0; 3]).unwrap();
        let mut t = Tracker::default();
        assert!(t.submit_round(&f, &[]).is_empty());
        assert!(t.submit_probes(&f, &[]).is_empty());
        assert_eq!(t.rounds(), 0);
    }

    #[test]
    fn counters_across_sequential_batches() {
        let f = Modular::new(vec![1.0; 5]).unwrap();
        let mut t = Tracker::default();
        t.submit_round(&f, &singletons(5));
        t.submit_round(&f, &singletons(5)[..2]);
        assert_eq!((t.queries(), t.rounds(), t.max_queries_per_round()), (7, 2, 5));
    }

    #[test]
    fn marginal_gains() {
        let cut = CutFunction::new(2, &[(0, 1, 1.0)]).unwrap();
        let mut t = Tracker::default();
        let a = ElementSet::from_ids(2, [0]).unwrap();
        assert_eq!(t.marginal(&cut, 1, &a).unwrap(), -1.0);
        assert_eq!(t.marginal(&cut, 0, &a).unwrap(), 0.0);
        assert_eq!(t.queries(), 2);

        let m = Modular::new(vec![3.0, 0.5]).unwrap();
        assert_eq!(t.marginal(&m, 0, &ElementSet::from_ids(2, [1]).unwrap()).unwrap(), 3.0);
    }

    #[test]
    fn parallel_branches_charge_the_deepest() {
        let f = Modular::new(vec![1.0; 4]).unwrap();
        let mut root = Tracker::default();
        root.submit_round(&f, &singletons(4));
        let mut a = root.fork();
        a.submit_round(&f, &singletons(3));
        a.submit_round(&f, &singletons(1));
        let mut b = root.fork();
        b.submit_round(&f, &singletons(2));
        root.join_parallel([a, b]);
        assert_eq!(root.rounds(), 3);
        assert_eq!(root.queries(), 4 + 3 + 1 + 2);
        assert_eq!(root.round_sizes(), &[4, 5, 1]);
        assert_eq!(root.max_queries_per_round(), 5);
    }

    #[test]
    fn chunked_probes_match_sequential() {
        let n = 700;
        let edges: Vec<(ElementId, ElementId, f64)> = (0..n as ElementId - 1)
            .map(|u| (u, u + 1, 0.5 + (u % 7) as f64))
            .collect();
        let f = CutFunction::new(n, &edges).unwrap();
        let base = ElementSet::from_ids(n, (0..n as ElementId).step_by(3)).unwrap();
        let cands: Vec<ElementId> = (0..n as ElementId).filter(|u| u % 3 != 0).collect();
        let probes = vec![Probe::new(base.clone(), cands), Probe::value_only(base)];
        let mut p = Tracker::new(Execution::Parallel);
        let mut s = Tracker::new(Execution::Sequential);
        assert_eq!(p.submit_probes(&f, &probes), s.submit_probes(&f, &probes));
        assert_eq!(p.queries(), s.queries());
    }
}
