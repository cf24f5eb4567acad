//! Randomized checks of the structural assumptions: submodularity and
//! non-negativity of objectives, downward closure of independence systems.

use rand::Rng;

use crate::constraints::IndependenceSystem;
use crate::oracle::SetFunction;
use crate::set::ElementSet;

/// A set whose elements are kept with a per-set random density, so sizes
/// spread over the whole range.
pub fn random_subset<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ElementSet {
    let q: f64 = rng.gen();
    let mut s = ElementSet::empty(n);
    for u in 0..n {
        if rng.gen::<f64>() < q {
            s.insert(u as u32);
        }
    }
    s
}

#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub x: ElementSet,
    pub y: ElementSet,
    /// How far the inequality is broken.
    pub amount: f64,
}

/// Checks `f(X) + f(Y) ≥ f(X∪Y) + f(X∩Y)` and `f(X) ≥ 0` on `pairs` random
/// pairs, within `tol`. Returns the first violation.
pub fn check_submodular<F, R>(f: &F, pairs: usize, tol: f64, rng: &mut R) -> Result<(), Violation>
where
    F: SetFunction + ?Sized,
    R: Rng + ?Sized,
{
    let n = f.ground_size();
    for _ in 0..pairs {
        let x = random_subset(n, rng);
        let y = random_subset(n, rng);
        let (fx, fy) = (f.value(&x), f.value(&y));
        let (fu, fi) = (f.value(&x.union(&y)), f.value(&x.intersection(&y)));
        let gap = fu + fi - fx - fy;
        let negative = -fx.min(fy).min(fu).min(fi);
        let amount = gap.max(negative);
        if amount > tol {
            return Err(Violation { x, y, amount });
        }
    }
    Ok(())
}

/// Checks that `∅` is independent and that random subsets of random
/// independent sets are independent. Returns the offending pair, `x` being
/// the independent set.
pub fn check_downward_closed<S, R>(system: &S, samples: usize, rng: &mut R) -> Result<(), Violation>
where
    S: IndependenceSystem + ?Sized,
    R: Rng + ?Sized,
{
    let n = system.ground_size();
    let empty = ElementSet::empty(n);
    if !system.is_independent(&empty) {
        return Err(Violation {
            x: empty.clone(),
            y: empty,
            amount: 1.0,
        });
    }
    let mut found = 0;
    let mut attempts = 0;
    while found < samples && attempts < samples * 50 {
        attempts += 1;
        let x = grow_independent(system, rng);
        if !system.is_independent(&x) {
            continue;
        }
        found += 1;
        let mut y = x.clone();
        for u in &x {
            if rng.gen::<bool>() {
                y.remove(u);
            }
        }
        if !system.is_independent(&y) {
            return Err(Violation { x, y, amount: 1.0 });
        }
    }
    Ok(())
}

/// Random independent set built by adding elements in random order while
/// feasible, stopping after a random number of additions.
fn grow_independent<S, R>(system: &S, rng: &mut R) -> ElementSet
where
    S: IndependenceSystem + ?Sized,
    R: Rng + ?Sized,
{
    use rand::seq::SliceRandom;
    let n = system.ground_size();
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.shuffle(rng);
    let stop = rng.gen_range(0..=n);
    let mut x = ElementSet::empty(n);
    for u in order.into_iter().take(stop) {
        if system.can_add(&x, u) {
            x.insert(u);
        }
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraints::build_cardinality;
    use crate::objectives::CutFunction;
    use crate::seed::stream;

    struct Square(usize);

    impl SetFunction for Square {
        fn ground_size(&self) -> usize {
            self.0
        }
        fn value(&self, set: &ElementSet) -> f64 {
            (set.len() * set.len()) as f64
        }
    }

    #[test]
    fn cut_passes() {
        let f = CutFunction::new(4, &[(0, 1, 1.0), (1, 2, 2.0), (2, 3, 0.5), (0, 3, 1.0)]).unwrap();
        assert!(check_submodular(&f, 500, 1e-9, &mut stream(0, &[])).is_ok());
    }

    #[test]
    fn supermodular_function_fails() {
        assert!(check_submodular(&Square(8), 500, 1e-9, &mut stream(0, &[])).is_err());
    }

    #[test]
    fn cardinality_is_downward_closed() {
        assert!(check_downward_closed(&build_cardinality(8, 3), 200, &mut stream(0, &[])).is_ok());
    }

    #[test]
    fn non_closed_family_fails() {
        struct Pairs(usize);
        impl IndependenceSystem for Pairs {
            fn ground_size(&self) -> usize {
                self.0
            }
            fn is_independent(&self, set: &ElementSet) -> bool {
                set.len() != 1 || set.contains(0)
            }
            fn can_add(&self, _: &ElementSet, _: u32) -> bool {
                true
            }
            fn k(&self) -> crate::constraints::KParameter {
                crate::constraints::KParameter::exact(1)
            }
        }
        assert!(check_downward_closed(&Pairs(6), 200, &mut stream(0, &[])).is_err());
    }
}
