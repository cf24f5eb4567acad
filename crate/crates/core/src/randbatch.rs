//! Adaptive sequencing with random batch selection.
//!
//! [`get_seq`] draws a random maximal feasible sequence without touching the
//! value oracle. [`rand_batch`] repeatedly takes such a sequence over the
//! current valuable elements, cuts it at the first prefix after which either
//! little valuable cost remains or negative gains dominate, and accepts that
//! prefix with probability `p`.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::constraints::IndependenceSystem;
use crate::error::{invalid, Error, Result};
use crate::executor::{Probe, Tracker};
use crate::oracle::SetFunction;
use crate::set::{ElementId, ElementSet};

/// How the cut point of a sequence is located.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMode {
    /// Every prefix in one round.
    #[default]
    Linear,
    /// Bisection over prefixes, `O(log d)` rounds.
    Binary,
}

impl FromStr for SearchMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(SearchMode::Linear),
            "binary" => Ok(SearchMode::Binary),
            other => Err(invalid("search", format!("expected linear or binary, got {other:?}"))),
        }
    }
}

impl fmt::Display for SearchMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SearchMode::Linear => "linear",
            SearchMode::Binary => "binary",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RandBatchParams {
    /// Density threshold `ρ > 0`.
    pub threshold: f64,
    /// Cap `M ≥ 1` on value-bound cuts before returning early.
    pub max_count: usize,
    /// Acceptance probability `p ∈ (0, 1]`.
    pub acceptance: f64,
    /// Accuracy `ε ∈ (0, 1)`.
    pub epsilon: f64,
    pub search: SearchMode,
}

impl RandBatchParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.threshold.is_finite() && self.threshold > 0.0) {
            return Err(invalid(
                "threshold",
                format!("must be positive, got {}", self.threshold),
            ));
        }
        if self.max_count == 0 {
            return Err(invalid("max_count", "must be at least 1"));
        }
        if !(self.acceptance > 0.0 && self.acceptance <= 1.0) {
            return Err(invalid(
                "acceptance",
                format!("must be in (0, 1], got {}", self.acceptance),
            ));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(invalid("epsilon", format!("must be in (0, 1), got {}", self.epsilon)));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RandBatchResult {
    /// `A`, the accepted elements.
    pub accepted: ElementSet,
    /// `U`, every element of every cut prefix in selection order.
    pub considered: Vec<ElementId>,
    /// `L`, valuable elements still unconsidered. Non-empty only when
    /// `count` reached the cap.
    pub remaining: ElementSet,
    pub count: usize,
    pub iterations: usize,
}

impl RandBatchResult {
    fn empty(n: usize) -> Self {
        Self {
            accepted: ElementSet::empty(n),
            considered: Vec::new(),
            remaining: ElementSet::empty(n),
            count: 0,
            iterations: 0,
        }
    }

    pub fn considered_set(&self) -> ElementSet {
        let mut s = ElementSet::empty(self.accepted.universe());
        s.extend(self.considered.iter().copied());
        s
    }
}

/// Random maximal sequence `V` from `pool` such that `base ∪ V` stays
/// independent. Uses no value queries.
pub fn get_seq<S, R>(base: &ElementSet, pool: &ElementSet, system: &S, rng: &mut R, tracker: &Tracker) -> Vec<ElementId>
where
    S: IndependenceSystem + ?Sized,
    R: Rng + ?Sized,
{
    let mut current = base.clone();
    let mut seq = Vec::new();
    let mut remaining: Vec<ElementId> = pool.iter().filter(|&u| !base.contains(u)).collect();
    while !remaining.is_empty() {
        remaining.shuffle(rng);
        let mut taken = 0;
        for &u in &remaining {
            if !tracker.can_add(system, &current, u) {
                break;
            }
            current.insert(u);
            seq.push(u);
            taken += 1;
        }
        // The element that stopped the prefix stays infeasible.
        let skip = (taken + 1).min(remaining.len());
        remaining = remaining[skip..]
            .iter()
            .copied()
            .filter(|&u| tracker.can_add(system, &current, u))
            .collect();
    }
    seq
}

/// Cut point of one sequence.
#[derive(Clone, Debug, PartialEq)]
pub struct TStar {
    /// First prefix after which valuable cost is at most `(1−ε)·c(L)`.
    pub t1: usize,
    /// First prefix after which `ε`·(valuable gain) is covered by the
    /// negative gains.
    pub t2: usize,
    pub tstar: usize,
    /// Valuable elements with respect to `A ∪ V_{t*}`, ascending.
    pub valuable_after: Vec<ElementId>,
    /// `f(A ∪ V_{t*})`, when it was queried.
    pub value_after: Option<f64>,
}

struct PrefixEval {
    plus_cost: f64,
    plus_gain: f64,
    minus_abs: f64,
    plus: Vec<ElementId>,
}

/// Locates `t* = min(t1, t2)` for the sequence `seq` drawn over `valuable`.
///
/// `base_value` is `f(A)` if the caller already knows it. Prefix 0 never
/// satisfies either condition and prefix `d` always satisfies both, so only
/// `1..d` is queried.
#[allow(clippy::too_many_arguments)]
pub fn find_tstar<F, S>(
    base: &ElementSet,
    base_value: Option<f64>,
    valuable: &ElementSet,
    seq: &[ElementId],
    params: &RandBatchParams,
    f: &F,
    costs: &[f64],
    system: &S,
    tracker: &mut Tracker,
) -> TStar
where
    F: SetFunction + ?Sized,
    S: IndependenceSystem + ?Sized,
{
    let d = seq.len();
    if d <= 1 {
        return TStar {
            t1: d,
            t2: d,
            tstar: d,
            valuable_after: Vec::new(),
            value_after: None,
        };
    }
    let n = base.universe();
    let rho = params.threshold;
    let eps = params.epsilon;
    let members: Vec<ElementId> = valuable.iter().collect();
    let cost_l: f64 = members.iter().map(|&u| costs[u as usize]).sum();

    // position[u] = j when u = v_j (1-based), 0 otherwise.
    let mut position = vec![0u32; n];
    for (j, &v) in seq.iter().enumerate() {
        position[v as usize] = j as u32 + 1;
    }
    let prefix_set = |i: usize| -> ElementSet {
        let mut g = base.clone();
        g.extend(seq[..i].iter().copied());
        g
    };

    let mut prefix: Vec<Option<f64>> = vec![None; d + 1];
    prefix[0] = base_value;
    let mut evals: Vec<Option<PrefixEval>> = (0..=d).map(|_| None).collect();

    let mut evaluate = |idx: &[usize], prefix: &mut Vec<Option<f64>>, evals: &mut Vec<Option<PrefixEval>>| {
        let top = idx.iter().copied().max().unwrap_or(0);
        let mut probes = Vec::new();
        let mut full_sets = Vec::new();
        for &i in idx {
            let g = prefix_set(i);
            let cands: Vec<ElementId> = members
                .iter()
                .copied()
                .filter(|&u| position[u as usize] == 0 || position[u as usize] as usize > i)
                .collect();
            probes.push(Probe::new(g.clone(), cands));
            full_sets.push(g);
        }
        let extra: Vec<usize> = (0..=top).filter(|j| prefix[*j].is_none() && !idx.contains(j)).collect();
        for &j in &extra {
            probes.push(Probe::value_only(prefix_set(j)));
        }
        let out = tracker.submit_probes(f, &probes);
        for (k, &i) in idx.iter().enumerate() {
            let o = &out[k];
            prefix[i] = Some(o.base_value);
            let mut e = PrefixEval {
                plus_cost: 0.0,
                plus_gain: 0.0,
                minus_abs: 0.0,
                plus: Vec::new(),
            };
            for (j, &u) in probes[k].candidates.iter().enumerate() {
                let gain = o.gain(j);
                if gain < 0.0 {
                    e.minus_abs -= gain;
                } else if gain / costs[u as usize] >= rho && tracker.can_add(system, &full_sets[k], u) {
                    e.plus_cost += costs[u as usize];
                    e.plus_gain += gain;
                    e.plus.push(u);
                }
            }
            evals[i] = Some(e);
        }
        for (k, &j) in extra.iter().enumerate() {
            prefix[j] = Some(out[idx.len() + k].base_value);
        }
    };

    let cost_ok = |e: &PrefixEval| e.plus_cost <= (1.0 - eps) * cost_l;
    let value_ok = |i: usize, e: &PrefixEval, prefix: &[Option<f64>]| {
        let dropped: f64 = (1..=i)
            .map(|j| {
                let gain = prefix[j].expect("prefix value") - prefix[j - 1].expect("prefix value");
                if gain < 0.0 {
                    -gain
                } else {
                    0.0
                }
            })
            .sum();
        eps * e.plus_gain <= e.minus_abs + dropped
    };

    let (t1, t2) = match params.search {
        SearchMode::Linear => {
            let idx: Vec<usize> = (1..d).collect();
            evaluate(&idx, &mut prefix, &mut evals);
            let t1 = (1..d).find(|&i| cost_ok(evals[i].as_ref().unwrap())).unwrap_or(d);
            let t2 = (1..d)
                .find(|&i| value_ok(i, evals[i].as_ref().unwrap(), &prefix))
                .unwrap_or(d);
            (t1, t2)
        }
        SearchMode::Binary => {
            // Invariant: condition false at lo, true at hi.
            let (mut lo1, mut hi1, mut lo2, mut hi2) = (0usize, d, 0usize, d);
            while hi1 - lo1 > 1 || hi2 - lo2 > 1 {
                let mut mids = Vec::new();
                if hi1 - lo1 > 1 {
                    mids.push((lo1 + hi1) / 2);
                }
                if hi2 - lo2 > 1 && !mids.contains(&((lo2 + hi2) / 2)) {
                    mids.push((lo2 + hi2) / 2);
                }
                let fresh: Vec<usize> = mids.iter().copied().filter(|&i| evals[i].is_none()).collect();
                if !fresh.is_empty() {
                    evaluate(&fresh, &mut prefix, &mut evals);
                }
                if hi1 - lo1 > 1 {
                    let m = (lo1 + hi1) / 2;
                    if cost_ok(evals[m].as_ref().unwrap()) {
                        hi1 = m;
                    } else {
                        lo1 = m;
                    }
                }
                if hi2 - lo2 > 1 {
                    let m = (lo2 + hi2) / 2;
                    if value_ok(m, evals[m].as_ref().unwrap(), &prefix) {
                        hi2 = m;
                    } else {
                        lo2 = m;
                    }
                }
            }
            (hi1, hi2)
        }
    };

    let tstar = t1.min(t2);
    let valuable_after = if tstar == d {
        Vec::new()
    } else {
        evals[tstar].take().expect("cut prefix was evaluated").plus
    };
    TStar {
        t1,
        t2,
        tstar,
        valuable_after,
        value_after: prefix[tstar],
    }
}

/// Random batch selection with threshold `ρ` over `candidates`.
///
/// `costs` holds one positive cost per ground element; pass all ones for
/// unit costs.
pub fn rand_batch<F, S, R>(
    params: &RandBatchParams,
    candidates: &ElementSet,
    f: &F,
    costs: &[f64],
    system: &S,
    rng: &mut R,
    tracker: &mut Tracker,
) -> Result<RandBatchResult>
where
    F: SetFunction + ?Sized,
    S: IndependenceSystem + ?Sized,
    R: Rng + ?Sized,
{
    params.validate()?;
    let n = f.ground_size();
    for found in [candidates.universe(), costs.len(), system.ground_size()] {
        if found != n {
            return Err(Error::UniverseMismatch { expected: n, found });
        }
    }
    let pool = candidates.to_vec();
    if pool.is_empty() {
        return Ok(RandBatchResult::empty(n));
    }

    let mut accepted = ElementSet::empty(n);
    let init = tracker.submit_probes(f, &[Probe::new(accepted.clone(), pool.clone())]);
    let mut value = Some(init[0].base_value);
    let mut valuable = ElementSet::empty(n);
    for (j, &u) in pool.iter().enumerate() {
        if init[0].gain(j) / costs[u as usize] >= params.threshold && tracker.can_add(system, &accepted, u) {
            valuable.insert(u);
        }
    }

    let mut considered = Vec::new();
    let mut count = 0;
    let mut iterations = 0;
    while !valuable.is_empty() && count < params.max_count {
        iterations += 1;
        let seq = get_seq(&accepted, &valuable, system, rng, tracker);
        let cut = find_tstar(&accepted, value, &valuable, &seq, params, f, costs, system, tracker);
        let batch = &seq[..cut.tstar];
        considered.extend_from_slice(batch);
        let take = params.acceptance >= 1.0 || rng.gen::<f64>() < params.acceptance;
        if take {
            accepted.extend(batch.iter().copied());
            value = cut.value_after;
            if cut.t2 < cut.t1 {
                count += 1;
            }
            valuable = ElementSet::from_ids(n, cut.valuable_after)?;
        } else {
            // A is unchanged, so every other valuable element stays valuable.
            for &v in batch {
                valuable.remove(v);
            }
        }
    }

    Ok(RandBatchResult {
        accepted,
        considered,
        remaining: valuable,
        count,
        iterations,
    })
}
