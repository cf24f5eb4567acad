//! Sequential density-greedy baseline.

use parsubmod::{ElementId, ElementSet, IndependenceSystem, Probe, SetFunction, Solution, Tracker};

/// Repeatedly adds the feasible element of maximum positive marginal density
/// `f(u | G) / c(u)`, then returns the better of the greedy set and the best
/// feasible singleton.
///
/// Each step is one round scanning every feasible candidate; the first scan
/// also yields the singleton values. The loop ends when no candidate is
/// feasible or none has positive gain.
pub fn density_greedy<F, S>(f: &F, costs: &[f64], system: &S, tracker: &mut Tracker) -> Solution
where
    F: SetFunction + ?Sized,
    S: IndependenceSystem + ?Sized,
{
    let n = f.ground_size();
    assert_eq!(costs.len(), n, "one cost per element");
    let mut current = ElementSet::empty(n);
    let mut value = None;
    let mut best_single: Option<Solution> = None;

    loop {
        let candidates: Vec<ElementId> = (0..n as ElementId)
            .filter(|&u| !current.contains(u) && tracker.can_add(system, &current, u))
            .collect();
        if candidates.is_empty() {
            break;
        }
        let out = tracker
            .submit_probes(f, &[Probe::new(current.clone(), candidates.clone())])
            .remove(0);
        let base = out.base_value;
        value.get_or_insert(base);

        if current.is_empty() {
            for (j, &u) in candidates.iter().enumerate() {
                let v = out.extended[j];
                if best_single.as_ref().is_none_or(|b| v > b.value) {
                    best_single = Some(Solution::new(ElementSet::from_ids(n, [u]).unwrap(), v));
                }
            }
        }

        let mut pick: Option<(usize, f64)> = None;
        for (j, &u) in candidates.iter().enumerate() {
            let density = out.gain(j) / costs[u as usize];
            if density > 0.0 && pick.is_none_or(|(_, d)| density > d) {
                pick = Some((j, density));
            }
        }
        let Some((j, _)) = pick else { break };
        current.insert(candidates[j]);
        value = Some(out.extended[j]);
    }

    let greedy = match value {
        Some(v) => Solution::new(current, v),
        // Not even ∅ was extendable, so ∅ is the only feasible set.
        None => Solution::new(ElementSet::empty(n), f.value(&ElementSet::empty(n))),
    };
    match best_single {
        Some(s) if s.value > greedy.value => s,
        _ => greedy,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use parsubmod::{build_cardinality, build_knapsack, build_unconstrained, CostModel, Modular};

    #[test]
    fn modular_under_cardinality() {
        let f = Modular::new(vec![3.0, 2.0, 1.0]).unwrap();
        let mut t = Tracker::sequential();
        let s = density_greedy(&f, &[1.0; 3], &build_cardinality(3, 2), &mut t);
        assert_eq!((s.set.to_vec(), s.value), (vec![0, 1], 5.0));
        // Two picks, then the cap leaves nothing to scan.
        assert_eq!(t.rounds(), 2);
        assert_eq!(t.queries(), 3 + 1 + 2 + 1);
    }

    #[test]
    fn zero_function_returns_empty() {
        let f = Modular::new(vec![0.0; 4]).unwrap();
        let mut t = Tracker::sequential();
        let s = density_greedy(&f, &[1.0; 4], &build_unconstrained(4), &mut t);
        assert!(s.set.is_empty());
        assert_eq!(s.value, 0.0);
        assert_eq!(t.rounds(), 1);
    }

    #[test]
    fn knapsack_skips_unaffordable() {
        let f = Modular::new(vec![10.0, 1.0]).unwrap();
        let system = build_knapsack(CostModel::new(vec![2.0, 1.0], 1.0).unwrap());
        let mut t = Tracker::sequential();
        let s = density_greedy(&f, &[2.0, 1.0], &system, &mut t);
        assert_eq!((s.set.to_vec(), s.value), (vec![1], 1.0));
    }

    #[test]
    fn singleton_can_beat_the_greedy_set() {
        // Density favors the two cheap elements, which together are worth
        // less than the single expensive one.
        let f = Modular::new(vec![1.0, 1.0, 5.0]).unwrap();
        let costs = [0.1, 0.1, 2.0];
        let system = build_knapsack(CostModel::new(costs.to_vec(), 2.0).unwrap());
        let mut t = Tracker::sequential();
        let s = density_greedy(&f, &costs, &system, &mut t);
        assert_eq!((s.set.to_vec(), s.value), (vec![2], 5.0));
    }
}
