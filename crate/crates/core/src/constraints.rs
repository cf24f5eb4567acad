//! Downward-closed independence systems and knapsack cost models.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::set::{ElementId, ElementSet, GroundSet};

/// Largest ground set [`verify_k_parameter`] will enumerate.
pub const VERIFY_K_LIMIT: usize = 12;

/// Per-element positive costs and a positive budget.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CostModel {
    costs: Vec<f64>,
    budget: f64,
}

impl CostModel {
    pub fn new(costs: Vec<f64>, budget: f64) -> Result<Self> {
        if !(budget.is_finite() && budget > 0.0) {
            return Err(invalid("budget", format!("must be positive, got {budget}")));
        }
        if let Some((u, c)) = costs.iter().enumerate().find(|(_, c)| !(c.is_finite() && **c > 0.0)) {
            return Err(invalid("costs", format!("element {u} has non-positive cost {c}")));
        }
        Ok(Self { costs, budget })
    }

    /// Unit cost for every element.
    pub fn unit(n: usize, budget: f64) -> Result<Self> {
        Self::new(vec![1.0; n], budget)
    }

    pub fn len(&self) -> usize {
        self.costs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.costs.is_empty()
    }

    pub fn costs(&self) -> &[f64] {
        &self.costs
    }

    pub fn cost(&self, u: ElementId) -> f64 {
        self.costs[u as usize]
    }

    pub fn budget(&self) -> f64 {
        self.budget
    }

    /// `c(X)`, summed in ascending id order so the result is canonical.
    pub fn cost_of(&self, set: &ElementSet) -> f64 {
        set.iter().map(|u| self.costs[u as usize]).sum()
    }

    pub fn cost_of_ids(&self, ids: &[ElementId]) -> f64 {
        ids.iter().map(|&u| self.costs[u as usize]).sum()
    }

    pub fn within_budget(&self, set: &ElementSet) -> bool {
        self.cost_of(set) <= self.budget
    }

    /// Errors on the first element whose cost exceeds the budget.
    pub fn check_affordable(&self) -> Result<()> {
        match self.costs.iter().enumerate().find(|(_, &c)| c > self.budget) {
            Some((u, &c)) => Err(Error::CostExceedsBudget {
                id: u as ElementId,
                cost: c,
                budget: self.budget,
            }),
            None => Ok(()),
        }
    }

    /// Elements that fit in the budget on their own.
    pub fn affordable(&self) -> Vec<ElementId> {
        (0..self.costs.len() as ElementId)
            .filter(|&u| self.cost(u) <= self.budget)
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KStatus {
    /// A proven k-system bound.
    Exact,
    /// Product of constituent bounds for intersections that are not all
    /// matroids. A valid upper bound is not guaranteed.
    ProductBound,
    /// No bounded k exists in general (knapsack). The declared value is `n`.
    Unbounded,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KParameter {
    pub value: usize,
    pub status: KStatus,
}

impl KParameter {
    pub fn exact(value: usize) -> Self {
        Self {
            value: value.max(1),
            status: KStatus::Exact,
        }
    }

    pub fn is_bounded(&self) -> bool {
        self.status != KStatus::Unbounded
    }
}

/// Feasibility oracle for a downward-closed set family containing `∅`.
pub trait IndependenceSystem: Send + Sync {
    fn ground_size(&self) -> usize;

    fn is_independent(&self, set: &ElementSet) -> bool;

    /// Whether `set ∪ {u}` is independent.
    fn can_add(&self, set: &ElementSet, u: ElementId) -> bool {
        self.is_independent(&set.with(u))
    }

    fn k(&self) -> KParameter;

    /// Known maximum cardinality of a feasible set, if cheaply available.
    fn r_hint(&self) -> Option<usize> {
        None
    }

    /// Whether feasibility is exactly `|X| ≤ m`.
    fn is_cardinality(&self) -> bool {
        false
    }
}

impl<S: IndependenceSystem + ?Sized> IndependenceSystem for &S {
    fn ground_size(&self) -> usize {
        (**self).ground_size()
    }
    fn is_independent(&self, set: &ElementSet) -> bool {
        (**self).is_independent(set)
    }
    fn can_add(&self, set: &ElementSet, u: ElementId) -> bool {
        (**self).can_add(set, u)
    }
    fn k(&self) -> KParameter {
        (**self).k()
    }
    fn r_hint(&self) -> Option<usize> {
        (**self).r_hint()
    }
    fn is_cardinality(&self) -> bool {
        (**self).is_cardinality()
    }
}

/// Every subset is feasible.
#[derive(Clone, Debug, PartialEq)]
pub struct Unconstrained {
    n: usize,
}

impl Unconstrained {
    pub fn new(n: usize) -> Self {
        Self { n }
    }
}

impl IndependenceSystem for Unconstrained {
    fn ground_size(&self) -> usize {
        self.n
    }
    fn is_independent(&self, _: &ElementSet) -> bool {
        true
    }
    fn can_add(&self, _: &ElementSet, _: ElementId) -> bool {
        true
    }
    fn k(&self) -> KParameter {
        KParameter::exact(1)
    }
    fn r_hint(&self) -> Option<usize> {
        Some(self.n)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Knapsack {
    model: CostModel,
}

impl Knapsack {
    pub fn model(&self) -> &CostModel {
        &self.model
    }
}

impl IndependenceSystem for Knapsack {
    fn ground_size(&self) -> usize {
        self.model.len()
    }
    fn is_independent(&self, set: &ElementSet) -> bool {
        self.model.within_budget(set)
    }
    fn k(&self) -> KParameter {
        KParameter {
            value: self.model.len().max(1),
            status: KStatus::Unbounded,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Cardinality {
    n: usize,
    m: usize,
}

impl Cardinality {
    pub fn limit(&self) -> usize {
        self.m
    }
}

impl IndependenceSystem for Cardinality {
    fn ground_size(&self) -> usize {
        self.n
    }
    fn is_independent(&self, set: &ElementSet) -> bool {
        set.len() <= self.m
    }
    fn can_add(&self, set: &ElementSet, u: ElementId) -> bool {
        set.len() + usize::from(!set.contains(u)) <= self.m
    }
    fn k(&self) -> KParameter {
        KParameter::exact(1)
    }
    fn r_hint(&self) -> Option<usize> {
        Some(self.m.min(self.n))
    }
    fn is_cardinality(&self) -> bool {
        true
    }
}

/// Per-group caps plus an optional cap on the total size.
#[derive(Clone, Debug, PartialEq)]
pub struct PartitionMatroid {
    groups: Vec<usize>,
    caps: Vec<usize>,
    total_cap: Option<usize>,
}

impl PartitionMatroid {
    fn counts_fit(&self, set: &ElementSet) -> bool {
        if self.total_cap.is_some_and(|t| set.len() > t) {
            return false;
        }
        let mut counts = vec![0usize; self.caps.len()];
        for u in set {
            let g = self.groups[u as usize];
            counts[g] += 1;
            if counts[g] > self.caps[g] {
                return false;
            }
        }
        true
    }
}

impl IndependenceSystem for PartitionMatroid {
    fn ground_size(&self) -> usize {
        self.groups.len()
    }
    fn is_independent(&self, set: &ElementSet) -> bool {
        self.counts_fit(set)
    }
    fn can_add(&self, set: &ElementSet, u: ElementId) -> bool {
        if set.contains(u) {
            return self.counts_fit(set);
        }
        if self.total_cap.is_some_and(|t| set.len() + 1 > t) {
            return false;
        }
        let g = self.groups[u as usize];
        let in_group = set.iter().filter(|&v| self.groups[v as usize] == g).count();
        in_group < self.caps[g] && self.counts_fit(set)
    }
    fn k(&self) -> KParameter {
        KParameter::exact(1)
    }
    fn r_hint(&self) -> Option<usize> {
        let mut sizes = vec![0usize; self.caps.len()];
        for &g in &self.groups {
            sizes[g] += 1;
        }
        let per_group: usize = sizes.iter().zip(&self.caps).map(|(s, c)| *s.min(c)).sum();
        Some(self.total_cap.map_or(per_group, |t| t.min(per_group)))
    }
}

/// Elements carry one or more labels; each label has a cap, plus a total cap.
#[derive(Clone, Debug, PartialEq)]
pub struct LabelSystem {
    labels: Vec<Vec<usize>>,
    caps: Vec<usize>,
    total_cap: usize,
    distinct: usize,
}

impl IndependenceSystem for LabelSystem {
    fn ground_size(&self) -> usize {
        self.labels.len()
    }
    fn is_independent(&self, set: &ElementSet) -> bool {
        if set.len() > self.total_cap {
            return false;
        }
        let mut counts = vec![0usize; self.caps.len()];
        for u in set {
            for &g in &self.labels[u as usize] {
                counts[g] += 1;
                if counts[g] > self.caps[g] {
                    return false;
                }
            }
        }
        true
    }
    fn k(&self) -> KParameter {
        KParameter::exact(self.distinct)
    }
}

/// Feasible iff feasible in every constituent.
#[derive(Clone, Debug, PartialEq)]
pub struct Intersection {
    parts: Vec<Constraint>,
    k: KParameter,
}

impl Intersection {
    pub fn parts(&self) -> &[Constraint] {
        &self.parts
    }
}

impl IndependenceSystem for Intersection {
    fn ground_size(&self) -> usize {
        self.parts[0].ground_size()
    }
    fn is_independent(&self, set: &ElementSet) -> bool {
        self.parts.iter().all(|p| p.is_independent(set))
    }
    fn can_add(&self, set: &ElementSet, u: ElementId) -> bool {
        self.parts.iter().all(|p| p.can_add(set, u))
    }
    fn k(&self) -> KParameter {
        self.k
    }
    fn r_hint(&self) -> Option<usize> {
        self.parts.iter().filter_map(|p| p.r_hint()).min()
    }
}

/// The concrete systems, dispatched statically.
#[derive(Clone, Debug, PartialEq)]
pub enum Constraint {
    Unconstrained(Unconstrained),
    Knapsack(Knapsack),
    Cardinality(Cardinality),
    Partition(PartitionMatroid),
    Labels(LabelSystem),
    Intersection(Intersection),
}

impl Constraint {
    /// Number of matroids this system is an intersection of, when known.
    fn matroid_count(&self) -> Option<usize> {
        match self {
            Constraint::Unconstrained(_) => Some(0),
            Constraint::Cardinality(_) | Constraint::Partition(_) => Some(1),
            Constraint::Knapsack(_) | Constraint::Labels(_) => None,
            Constraint::Intersection(i) => i.parts.iter().map(Constraint::matroid_count).sum(),
        }
    }

    fn inner(&self) -> &dyn IndependenceSystem {
        match self {
            Constraint::Unconstrained(s) => s,
            Constraint::Knapsack(s) => s,
            Constraint::Cardinality(s) => s,
            Constraint::Partition(s) => s,
            Constraint::Labels(s) => s,
            Constraint::Intersection(s) => s,
        }
    }
}

impl IndependenceSystem for Constraint {
    fn ground_size(&self) -> usize {
        self.inner().ground_size()
    }
    fn is_independent(&self, set: &ElementSet) -> bool {
        self.inner().is_independent(set)
    }
    fn can_add(&self, set: &ElementSet, u: ElementId) -> bool {
        self.inner().can_add(set, u)
    }
    fn k(&self) -> KParameter {
        self.inner().k()
    }
    fn r_hint(&self) -> Option<usize> {
        self.inner().r_hint()
    }
    fn is_cardinality(&self) -> bool {
        self.inner().is_cardinality()
    }
}

/// `X ↦ is_independent(T ∪ X)` for a fixed feasible root `T`.
#[derive(Clone, Debug)]
pub struct Contracted<'a, S: ?Sized> {
    inner: &'a S,
    root: ElementSet,
}

impl<'a, S: IndependenceSystem + ?Sized> Contracted<'a, S> {
    pub fn new(inner: &'a S, root: ElementSet) -> Self {
        Self { inner, root }
    }
}

impl<S: IndependenceSystem + ?Sized> IndependenceSystem for Contracted<'_, S> {
    fn ground_size(&self) -> usize {
        self.inner.ground_size()
    }
    fn is_independent(&self, set: &ElementSet) -> bool {
        self.inner.is_independent(&set.union(&self.root))
    }
    fn can_add(&self, set: &ElementSet, u: ElementId) -> bool {
        self.inner.can_add(&set.union(&self.root), u)
    }
    fn k(&self) -> KParameter {
        self.inner.k()
    }
}

pub fn build_unconstrained(n: usize) -> Constraint {
    Constraint::Unconstrained(Unconstrained::new(n))
}

pub fn build_knapsack(costs: CostModel) -> Constraint {
    Constraint::Knapsack(Knapsack { model: costs })
}

pub fn build_cardinality(n: usize, m: usize) -> Constraint {
    Constraint::Cardinality(Cardinality { n, m })
}

/// `groups[u]` is the group of element `u`; `caps[g]` bounds each group.
pub fn build_partition_matroid(
    n: usize,
    groups: &[usize],
    caps: &[usize],
    total_cap: Option<usize>,
) -> Result<Constraint> {
    if groups.len() != n {
        return Err(Error::Input(format!(
            "partition matroid: {} of {n} elements are labeled",
            groups.len()
        )));
    }
    if let Some((u, g)) = groups.iter().enumerate().find(|(_, &g)| g >= caps.len()) {
        return Err(Error::Input(format!(
            "partition matroid: element {u} is in group {g}, which has no cap"
        )));
    }
    Ok(Constraint::Partition(PartitionMatroid {
        groups: groups.to_vec(),
        caps: caps.to_vec(),
        total_cap,
    }))
}

pub fn build_label_system(labels: &[Vec<usize>], caps: &[usize], total_cap: usize) -> Result<Constraint> {
    let mut seen = vec![false; caps.len()];
    for (u, ls) in labels.iter().enumerate() {
        if ls.is_empty() {
            return Err(Error::Input(format!("label system: element {u} has no label")));
        }
        for &g in ls {
            if g >= caps.len() {
                return Err(Error::Input(format!(
                    "label system: element {u} has label {g}, which has no cap"
                )));
            }
            seen[g] = true;
        }
    }
    let mut labels = labels.to_vec();
    for ls in &mut labels {
        ls.sort_unstable();
        ls.dedup();
    }
    Ok(Constraint::Labels(LabelSystem {
        labels,
        caps: caps.to_vec(),
        total_cap,
        distinct: seen.iter().filter(|&&s| s).count(),
    }))
}

/// Intersection of systems over one ground set.
///
/// When every constituent is a matroid (or an intersection of matroids) the
/// declared k is the number of matroids. Otherwise k is the product of the
/// constituents' k and flagged [`KStatus::ProductBound`]; any unbounded
/// constituent makes the intersection unbounded.
pub fn build_intersection(systems: Vec<Constraint>) -> Result<Constraint> {
    let Some(first) = systems.first() else {
        return Err(Error::Input("intersection of an empty list of systems".into()));
    };
    let n = first.ground_size();
    if let Some(bad) = systems.iter().find(|s| s.ground_size() != n) {
        return Err(Error::UniverseMismatch {
            expected: n,
            found: bad.ground_size(),
        });
    }
    let matroids: Option<usize> = systems.iter().map(Constraint::matroid_count).sum();
    let k = match matroids {
        Some(count) => KParameter::exact(count),
        None if systems.iter().any(|s| !s.k().is_bounded()) => KParameter {
            value: n.max(1),
            status: KStatus::Unbounded,
        },
        None => {
            log::warn!("intersection includes a non-matroid system; declaring the product of k values");
            KParameter {
                value: systems.iter().map(|s| s.k().value).product(),
                status: KStatus::ProductBound,
            }
        }
    };
    Ok(Constraint::Intersection(Intersection { parts: systems, k }))
}

/// Brute-force check that every two bases of every `Y ⊆ N` satisfy
/// `|X1| ≤ k_claim · |X2|`.
pub fn verify_k_parameter<S>(system: &S, ground: GroundSet, k_claim: usize) -> Result<bool>
where
    S: IndependenceSystem + ?Sized,
{
    let n = ground.len();
    if n > VERIFY_K_LIMIT {
        return Err(Error::TooLarge {
            n,
            limit: VERIFY_K_LIMIT,
        });
    }
    if k_claim < 1 {
        return Ok(false);
    }
    let masks = 1usize << n;
    let independent: Vec<bool> = (0..masks)
        .map(|m| system.is_independent(&ElementSet::from_mask(n, m as u64)))
        .collect();

    for y in 0..masks {
        let mut smallest = usize::MAX;
        let mut largest = 0usize;
        // Walk all submasks of y, including 0.
        let mut x = y;
        loop {
            if independent[x] {
                let rest = y & !x;
                let maximal = (0..n)
                    .filter(|i| rest & (1 << i) != 0)
                    .all(|i| !independent[x | (1 << i)]);
                if maximal {
                    let size = x.count_ones() as usize;
                    smallest = smallest.min(size);
                    largest = largest.max(size);
                }
            }
            if x == 0 {
                break;
            }
            x = (x - 1) & y;
        }
        if largest > k_claim * smallest {
            return Ok(false);
        }
    }
    Ok(true)
}
