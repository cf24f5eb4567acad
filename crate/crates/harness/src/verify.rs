//! Property suites behind the `verify` command.

use parsubmod::objectives::movie_similarity;
use parsubmod::objectives::random::{cut_edges, digraph_arcs, feature_table, pixel_vectors, uniform_costs};
use parsubmod::properties::{check_downward_closed, check_submodular, random_subset};
use parsubmod::seed::stream;
use parsubmod::*;
use rand::Rng;

pub const PAIRS: usize = 1000;
pub const TOLERANCE: f64 = 1e-9;

/// Outcome of one named check.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

fn submodular_check<F: SetFunction + ?Sized>(name: &str, f: &F, seed: u64) -> Check {
    match check_submodular(f, PAIRS, TOLERANCE, &mut stream(seed, &[])) {
        Ok(()) => Check::new(name, true, format!("{PAIRS} pairs on n = {}", f.ground_size())),
        Err(v) => Check::new(
            name,
            false,
            format!(
                "X = {:?}, Y = {:?}, violation {:.3e}",
                v.x.to_vec(),
                v.y.to_vec(),
                v.amount
            ),
        ),
    }
}

/// Submodularity and non-negativity of every objective, including a shifted
/// one, on random instances with `n ≤ 10`.
pub fn objective_suite(seed: u64) -> Vec<Check> {
    let mut rng = stream(seed, &[0]);
    let mut out = Vec::new();
    for trial in 0..3u64 {
        let n = rng.gen_range(4..=10);
        let cut = CutFunction::new(n, &cut_edges(n, 0.5, &mut rng)).unwrap();
        out.push(submodular_check(
            &format!("cut #{trial}"),
            &cut,
            seed ^ (trial << 8 | 1),
        ));

        let arcs = digraph_arcs(n, 3, &mut rng);
        let products = 1 + trial as usize % 2;
        let n_nodes = n / products;
        let arcs: Vec<_> = arcs
            .into_iter()
            .filter(|&(u, v, _)| (u as usize) < n_nodes && (v as usize) < n_nodes)
            .collect();
        let rev = RevenueFunction::new(WeightedDigraph::new(n_nodes, &arcs).unwrap(), products).unwrap();
        out.push(submodular_check(
            &format!("revenue #{trial}"),
            &rev,
            seed ^ (trial << 8 | 2),
        ));

        let (px, _) = pixel_vectors(n, 16, 3, &mut rng);
        let img = ImageFunction::new(SimilarityMatrix::cosine(&px).unwrap()).unwrap();
        out.push(submodular_check(
            &format!("image #{trial}"),
            &img,
            seed ^ (trial << 8 | 3),
        ));

        let table = feature_table(n, 3, &mut rng);
        let movie = MovieFunction::new(movie_similarity(&table, 2.0).unwrap()).unwrap();
        out.push(submodular_check(
            &format!("movie #{trial}"),
            &movie,
            seed ^ (trial << 8 | 4),
        ));

        let anchor = random_subset(n, &mut rng);
        let shifted = shift_oracle(&cut, anchor);
        out.push(submodular_check(
            &format!("shifted cut #{trial}"),
            &shifted,
            seed ^ (trial << 8 | 5),
        ));
    }
    out
}

fn closure_check<S: IndependenceSystem + ?Sized>(name: &str, system: &S, seed: u64) -> Check {
    match check_downward_closed(system, PAIRS, &mut stream(seed, &[])) {
        Ok(()) => Check::new(name, true, format!("{PAIRS} samples")),
        Err(v) => Check::new(
            name,
            false,
            format!("{:?} feasible but its subset {:?} not", v.x.to_vec(), v.y.to_vec()),
        ),
    }
}

/// The independence systems used by the harness on `n = 8`, with labels drawn
/// from `seed`.
pub fn sample_systems(seed: u64) -> Vec<(&'static str, Constraint)> {
    let n = 8;
    let mut rng = stream(seed, &[1]);
    let groups: Vec<usize> = (0..n).map(|_| rng.gen_range(0..3)).collect();
    let other: Vec<usize> = (0..n).map(|_| rng.gen_range(0..2)).collect();
    let labels: Vec<Vec<usize>> = (0..n)
        .map(|_| {
            let a = rng.gen_range(0..3);
            if rng.gen::<bool>() {
                vec![a, (a + 1) % 3]
            } else {
                vec![a]
            }
        })
        .collect();
    let costs = uniform_costs(n, 0.1, 1.0, &mut rng);
    let partition = build_partition_matroid(n, &groups, &[1, 2, 1], Some(3)).unwrap();
    let second = build_partition_matroid(n, &other, &[2, 1], None).unwrap();
    vec![
        ("partition matroid", partition.clone()),
        (
            "two-matroid intersection",
            build_intersection(vec![partition, second]).unwrap(),
        ),
        ("label system", build_label_system(&labels, &[1, 2, 1], 3).unwrap()),
        ("cardinality", build_cardinality(n, 3)),
        ("knapsack", build_knapsack(CostModel::new(costs, 1.5).unwrap())),
    ]
}

pub fn system_suite(seed: u64) -> Vec<Check> {
    let mut out = Vec::new();
    for (i, (name, system)) in sample_systems(seed).into_iter().enumerate() {
        out.push(closure_check(
            &format!("{name} is downward closed"),
            &system,
            seed ^ i as u64,
        ));
        let root = ElementSet::from_ids(system.ground_size(), [0]).unwrap();
        if system.is_independent(&root) {
            let contracted = Contracted::new(&system, root);
            out.push(closure_check(
                &format!("contracted {name} is downward closed"),
                &contracted,
                seed ^ i as u64,
            ));
        }
    }
    out
}

/// Brute-force confirmation of declared k values on `n = 8`.
pub fn k_suite(seed: u64) -> Vec<Check> {
    let expected = [
        ("partition matroid", Some(1)),
        ("two-matroid intersection", Some(2)),
        ("label system", None),
    ];
    let systems = sample_systems(seed);
    expected
        .iter()
        .map(|&(name, want)| {
            let system = &systems.iter().find(|(n, _)| *n == name).unwrap().1;
            let k = system.k();
            let declared_ok = want.is_none_or(|w| k.value == w);
            match verify_k_parameter(system, GroundSet::new(system.ground_size()), k.value) {
                Ok(holds) => Check::new(
                    format!("{name} is a {}-system", k.value),
                    holds && declared_ok,
                    format!("declared k = {}", k.value),
                ),
                Err(e) => Check::new(name, false, e.to_string()),
            }
        })
        .collect()
}

pub fn all_suites(seed: u64) -> Vec<Check> {
    let mut out = objective_suite(seed);
    out.extend(system_suite(seed));
    out.extend(k_suite(seed));
    out
}
