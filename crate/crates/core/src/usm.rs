//! Unconstrained submodular maximization over a subset of the ground set.

use rand::Rng;

use crate::executor::Tracker;
use crate::oracle::SetFunction;
use crate::set::ElementSet;

/// Maximizes `f` over all subsets of a given set, ignoring constraints.
///
/// `solve` returns a subset of `within`; the callers evaluate it together with
/// their other candidates, so solvers that need no queries add no rounds.
pub trait UsmSolver: Send + Sync {
    fn solve<F, R>(&self, within: &ElementSet, f: &F, rng: &mut R, tracker: &mut Tracker) -> ElementSet
    where
        F: SetFunction + ?Sized,
        R: Rng + ?Sized;

    /// Expected approximation ratio `E[f(result)] ≥ OPT / ratio`.
    fn claimed_ratio(&self) -> f64;

    fn claimed_rounds(&self) -> &'static str;
}

/// Keeps each element independently with probability 1/2.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RandomSubset;

impl UsmSolver for RandomSubset {
    fn solve<F, R>(&self, within: &ElementSet, _f: &F, rng: &mut R, _tracker: &mut Tracker) -> ElementSet
    where
        F: SetFunction + ?Sized,
        R: Rng + ?Sized,
    {
        usm_random_subset(within, rng)
    }

    fn claimed_ratio(&self) -> f64 {
        4.0
    }

    fn claimed_rounds(&self) -> &'static str {
        "1 (the caller's evaluation of the sampled set)"
    }
}

/// Uniformly random subset of `within`. Draws one bit per element in
/// ascending id order.
pub fn usm_random_subset<R: Rng + ?Sized>(within: &ElementSet, rng: &mut R) -> ElementSet {
    let mut out = ElementSet::empty(within.universe());
    for u in within {
        if rng.gen::<bool>() {
            out.insert(u);
        }
    }
    out
}
