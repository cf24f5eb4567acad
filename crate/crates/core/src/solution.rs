use crate::set::ElementSet;

/// A returned set together with its objective value.
#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    pub set: ElementSet,
    pub value: f64,
}

impl Solution {
    pub fn new(set: ElementSet, value: f64) -> Self {
        Self { set, value }
    }

    /// Replaces `self` when `other` is strictly better.
    pub(crate) fn keep_best(&mut self, other: Solution) {
        if other.value > self.value {
            *self = other;
        }
    }
}
