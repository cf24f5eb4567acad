//! Value oracles.

use std::sync::Arc;

use crate::set::{ElementId, ElementSet};

/// A set function `f: 2^N -> R` over the ground set `0..ground_size()`.
///
/// Implementations must be pure: the same set always yields the same value,
/// bit for bit, regardless of which thread evaluates it. All objectives in this
/// crate are non-negative and submodular.
pub trait SetFunction: Send + Sync {
    fn ground_size(&self) -> usize;

    fn value(&self, set: &ElementSet) -> f64;

    /// Returns `f(base)` and `f(base ∪ {u})` for each candidate.
    ///
    /// Overrides may share per-base work across candidates but must return
    /// exactly `self.value(base)` as the first component, and a value for each
    /// candidate that does not depend on which other candidates are present.
    fn extension_values(&self, base: &ElementSet, candidates: &[ElementId]) -> (f64, Vec<f64>) {
        let base_value = self.value(base);
        let mut scratch = base.clone();
        let extended = candidates
            .iter()
            .map(|&u| {
                if scratch.insert(u) {
                    let v = self.value(&scratch);
                    scratch.remove(u);
                    v
                } else {
                    base_value
                }
            })
            .collect();
        (base_value, extended)
    }
}

impl<F: SetFunction + ?Sized> SetFunction for &F {
    fn ground_size(&self) -> usize {
        (**self).ground_size()
    }
    fn value(&self, set: &ElementSet) -> f64 {
        (**self).value(set)
    }
    fn extension_values(&self, base: &ElementSet, candidates: &[ElementId]) -> (f64, Vec<f64>) {
        (**self).extension_values(base, candidates)
    }
}

impl<F: SetFunction + ?Sized> SetFunction for Box<F> {
    fn ground_size(&self) -> usize {
        (**self).ground_size()
    }
    fn value(&self, set: &ElementSet) -> f64 {
        (**self).value(set)
    }
    fn extension_values(&self, base: &ElementSet, candidates: &[ElementId]) -> (f64, Vec<f64>) {
        (**self).extension_values(base, candidates)
    }
}

impl<F: SetFunction + ?Sized> SetFunction for Arc<F> {
    fn ground_size(&self) -> usize {
        (**self).ground_size()
    }
    fn value(&self, set: &ElementSet) -> f64 {
        (**self).value(set)
    }
    fn extension_values(&self, base: &ElementSet, candidates: &[ElementId]) -> (f64, Vec<f64>) {
        (**self).extension_values(base, candidates)
    }
}

/// `g(Y) = f(T ∪ Y)` for a fixed anchor `T`.
///
/// Non-negativity and submodularity carry over from `f`.
#[derive(Clone, Debug)]
pub struct Shifted<'a, F: ?Sized> {
    inner: &'a F,
    anchor: ElementSet,
}

impl<'a, F: SetFunction + ?Sized> Shifted<'a, F> {
    pub fn new(inner: &'a F, anchor: ElementSet) -> Self {
        debug_assert_eq!(anchor.universe(), inner.ground_size());
        Self { inner, anchor }
    }

    pub fn anchor(&self) -> &ElementSet {
        &self.anchor
    }
}

pub fn shift_oracle<F: SetFunction + ?Sized>(f: &F, anchor: ElementSet) -> Shifted<'_, F> {
    Shifted::new(f, anchor)
}

impl<F: SetFunction + ?Sized> SetFunction for Shifted<'_, F> {
    fn ground_size(&self) -> usize {
        self.inner.ground_size()
    }

    fn value(&self, set: &ElementSet) -> f64 {
        if set.is_empty() {
            return self.inner.value(&self.anchor);
        }
        self.inner.value(&set.union(&self.anchor))
    }

    fn extension_values(&self, base: &ElementSet, candidates: &[ElementId]) -> (f64, Vec<f64>) {
        let joined = base.union(&self.anchor);
        self.inner.extension_values(&joined, candidates)
    }
}

/// `f` seen on the sub-ground-set `ids`: local element `j` is `ids[j]`.
#[derive(Clone, Debug)]
pub struct Restricted<'a, F: ?Sized> {
    inner: &'a F,
    ids: Vec<ElementId>,
}

impl<'a, F: SetFunction + ?Sized> Restricted<'a, F> {
    /// `ids` must be distinct and inside the inner ground set.
    pub fn new(inner: &'a F, ids: Vec<ElementId>) -> Self {
        debug_assert!(ids.iter().all(|&u| (u as usize) < inner.ground_size()));
        Self { inner, ids }
    }

    pub fn ids(&self) -> &[ElementId] {
        &self.ids
    }

    /// Maps a local set to the inner ground set.
    pub fn lift(&self, local: &ElementSet) -> ElementSet {
        let mut s = ElementSet::empty(self.inner.ground_size());
        s.extend(local.iter().map(|j| self.ids[j as usize]));
        s
    }
}

impl<F: SetFunction + ?Sized> SetFunction for Restricted<'_, F> {
    fn ground_size(&self) -> usize {
        self.ids.len()
    }

    fn value(&self, set: &ElementSet) -> f64 {
        self.inner.value(&self.lift(set))
    }

    fn extension_values(&self, base: &ElementSet, candidates: &[ElementId]) -> (f64, Vec<f64>) {
        let mapped: Vec<ElementId> = candidates.iter().map(|&j| self.ids[j as usize]).collect();
        self.inner.extension_values(&self.lift(base), &mapped)
    }
}

/// Marginal gain `f(u | S) = f(S ∪ {u}) − f(S)`, evaluated directly.
pub fn marginal_gain<F: SetFunction + ?Sized>(f: &F, u: ElementId, set: &ElementSet) -> f64 {
    if set.contains(u) {
        return 0.0;
    }
    f.value(&set.with(u)) - f.value(set)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objectives::{CutFunction, Modular};

    fn edge() -> CutFunction {
        CutFunction::new(2, &[(0, 1, 1.0)]).unwrap()
    }

    #[test]
    fn shift_by_empty_set_is_identity() {
        let f = Modular::new(vec![1.0, 2.0, 4.0]).unwrap();
        let g = shift_oracle(&f, ElementSet::empty(3));
        for mask in 0..8 {
            let s = ElementSet::from_mask(3, mask);
            assert_eq!(g.value(&s), f.value(&s));
        }
    }

    #[test]
    fn shifted_cut_values() {
        let f = edge();
        let g = shift_oracle(&f, ElementSet::from_ids(2, [0]).unwrap());
        assert_eq!(g.value(&ElementSet::empty(2)), 1.0);
        assert_eq!(g.value(&ElementSet::from_ids(2, [1]).unwrap()), 0.0);
    }

    #[test]
    fn default_extension_matches_direct_evaluation() {
        struct Plain(CutFunction);
        impl SetFunction for Plain {
            fn ground_size(&self) -> usize {
                self.0.ground_size()
            }
            fn value(&self, set: &ElementSet) -> f64 {
                self.0.value(set)
            }
        }
        let f = Plain(edge());
        let base = ElementSet::from_ids(2, [0]).unwrap();
        let (b, ext) = f.extension_values(&base, &[1, 0]);
        assert_eq!(b, 1.0);
        assert_eq!(ext, vec![0.0, 1.0]);
    }

    #[test]
    fn marginal_of_cut() {
        let f = edge();
        let a = ElementSet::from_ids(2, [0]).unwrap();
        assert_eq!(marginal_gain(&f, 1, &a), -1.0);
        assert_eq!(marginal_gain(&f, 0, &a), 0.0);
    }

    #[test]
    fn restricted_maps_ids() {
        let f = Modular::new(vec![1.0, 2.0, 4.0, 8.0]).unwrap();
        let g = Restricted::new(&f, vec![3, 1]);
        assert_eq!(g.ground_size(), 2);
        assert_eq!(g.value(&ElementSet::from_ids(2, [0]).unwrap()), 8.0);
        let (b, ext) = g.extension_values(&ElementSet::from_ids(2, [1]).unwrap(), &[0]);
        assert_eq!((b, ext), (2.0, vec![10.0]));
        assert_eq!(g.lift(&ElementSet::full(2)).to_vec(), vec![1, 3]);
    }
}
