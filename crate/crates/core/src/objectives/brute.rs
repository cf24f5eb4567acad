use crate::constraints::{CostModel, IndependenceSystem};
use crate::error::{Error, Result};
use crate::oracle::SetFunction;
use crate::set::ElementSet;

/// Largest ground set [`brute_force_opt`] will enumerate.
pub const BRUTE_FORCE_LIMIT: usize = 20;

/// Exhaustive maximum of `f` over every feasible subset.
///
/// Feasible means independent in `system` and, when `costs` is given, within
/// budget. Ties go to the first subset in bitmask order.
pub fn brute_force_opt<F, S>(f: &F, system: &S, costs: Option<&CostModel>) -> Result<(f64, ElementSet)>
where
    F: SetFunction + ?Sized,
    S: IndependenceSystem + ?Sized,
{
    let n = f.ground_size();
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge {
            n,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    if system.ground_size() != n {
        return Err(Error::UniverseMismatch {
            expected: n,
            found: system.ground_size(),
        });
    }
    let mut best = (f.value(&ElementSet::empty(n)), ElementSet::empty(n));
    for mask in 1..(1u64 << n) {
        let set = ElementSet::from_mask(n, mask);
        if !system.is_independent(&set) || costs.is_some_and(|c| !c.within_budget(&set)) {
            continue;
        }
        let v = f.value(&set);
        if v > best.0 {
            best = (v, set);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraints::build_cardinality;
    use crate::objectives::{CutFunction, Modular};

    #[test]
    fn triangle_with_one_pick() {
        let f = CutFunction::new(3, &[(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]).unwrap();
        let (v, s) = brute_force_opt(&f, &build_cardinality(3, 1), None).unwrap();
        assert_eq!(v, 2.0);
        assert_eq!(s.len(), 1);
    }

    #[test]
    fn modular_pair() {
        let f = Modular::new(vec![3.0, 2.0, 1.0]).unwrap();
        let (v, s) = brute_force_opt(&f, &build_cardinality(3, 2), None).unwrap();
        assert_eq!(v, 5.0);
        assert_eq!(s.to_vec(), vec![0, 1]);
    }

    #[test]
    fn zero_function_gives_empty() {
        let f = Modular::new(vec![0.0; 4]).unwrap();
        let (v, s) = brute_force_opt(&f, &build_cardinality(4, 4), None).unwrap();
        assert_eq!(v, 0.0);
        assert!(s.is_empty());
    }

    #[test]
    fn budget_is_respected() {
        let f = Modular::new(vec![10.0, 1.0]).unwrap();
        let costs = CostModel::new(vec![2.0, 1.0], 1.0).unwrap();
        let (v, s) = brute_force_opt(&f, &build_cardinality(2, 2), Some(&costs)).unwrap();
        assert_eq!(v, 1.0);
        assert_eq!(s.to_vec(), vec![1]);
    }

    #[test]
    fn refuses_large_ground_sets() {
        let f = Modular::new(vec![1.0; 21]).unwrap();
        assert!(brute_force_opt(&f, &build_cardinality(21, 3), None).is_err());
    }
}
