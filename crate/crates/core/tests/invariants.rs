use parsubmod::objectives::movie_similarity;
use parsubmod::objectives::random::{cut_edges, digraph_arcs, feature_table, pixel_vectors, uniform_costs};
use parsubmod::parssp::par_ssp_traced;
use parsubmod::properties::{check_downward_closed, check_submodular};
use parsubmod::seed::stream;
use parsubmod::*;
use proptest::prelude::*;

const TOL: f64 = 1e-9;

fn cut_instance(n: usize, density: f64, seed: u64) -> CutFunction {
    let mut rng = stream(seed, &[0]);
    CutFunction::new(n, &cut_edges(n, density, &mut rng)).unwrap()
}

fn costs(n: usize, seed: u64) -> Vec<f64> {
    uniform_costs(n, 0.1, 1.0, &mut stream(seed, &[1]))
}

fn groups(n: usize, count: usize, seed: u64) -> Vec<usize> {
    use rand::Rng;
    let mut rng = stream(seed, &[2]);
    (0..n).map(|_| rng.gen_range(0..count)).collect()
}

fn considered_set(n: usize, r: &RandBatchResult) -> ElementSet {
    ElementSet::from_ids(n, r.considered.iter().copied()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn objectives_are_submodular_and_non_negative(n in 2usize..12, seed in any::<u64>()) {
        let mut rng = stream(seed, &[3]);
        let cut = cut_instance(n, 0.5, seed);
        prop_assert!(check_submodular(&cut, 40, TOL, &mut rng).is_ok());

        let arcs = digraph_arcs(n, 3.min(n - 1), &mut rng);
        let rev = RevenueFunction::new(WeightedDigraph::new(n, &arcs).unwrap(), 2).unwrap();
        prop_assert!(check_submodular(&rev, 40, TOL, &mut rng).is_ok());

        let (px, _) = pixel_vectors(n, 12, 3, &mut rng);
        let img = ImageFunction::new(SimilarityMatrix::cosine(&px).unwrap()).unwrap();
        prop_assert!(check_submodular(&img, 40, TOL, &mut rng).is_ok());

        let table = feature_table(n, 4, &mut rng);
        let movie = MovieFunction::new(movie_similarity(&table, 1.0).unwrap()).unwrap();
        prop_assert!(check_submodular(&movie, 40, TOL, &mut rng).is_ok());
    }

    #[test]
    fn shifted_objective_is_submodular(n in 2usize..12, seed in any::<u64>(), mask in any::<u64>()) {
        let mut rng = stream(seed, &[4]);
        let cut = cut_instance(n, 0.5, seed);
        let anchor = ElementSet::from_mask(n, mask & ((1u64 << n) - 1));
        let g = shift_oracle(&cut, anchor.clone());
        prop_assert!(check_submodular(&g, 40, TOL, &mut rng).is_ok());
        prop_assert_eq!(g.value(&ElementSet::empty(n)), cut.value(&anchor));
    }

    #[test]
    fn systems_are_downward_closed(n in 1usize..12, seed in any::<u64>()) {
        let mut rng = stream(seed, &[5]);
        let g = groups(n, 3, seed);
        let part = build_partition_matroid(n, &g, &[1, 2, 1], Some(3)).unwrap();
        prop_assert!(check_downward_closed(&part, 60, &mut rng).is_ok());

        let labels: Vec<Vec<usize>> = g.iter().map(|&a| vec![a, (a + 1) % 3]).collect();
        let lab = build_label_system(&labels, &[2, 1, 2], 3).unwrap();
        prop_assert!(check_downward_closed(&lab, 60, &mut rng).is_ok());

        let knap = build_knapsack(CostModel::new(costs(n, seed), 1.0).unwrap());
        prop_assert!(check_downward_closed(&knap, 60, &mut rng).is_ok());

        let both = build_intersection(vec![part, build_cardinality(n, 2)]).unwrap();
        prop_assert!(check_downward_closed(&both, 60, &mut rng).is_ok());
    }

    #[test]
    fn declared_k_holds_on_small_grounds(n in 1usize..=8, seed in any::<u64>()) {
        let part = build_partition_matroid(n, &groups(n, 3, seed), &[1, 2, 1], None).unwrap();
        prop_assert!(verify_k_parameter(&part, GroundSet::new(n), part.k().value).unwrap());

        let other = build_partition_matroid(n, &groups(n, 2, seed ^ 1), &[1, 1], None).unwrap();
        let both = build_intersection(vec![part, other]).unwrap();
        prop_assert_eq!(both.k().value, 2);
        prop_assert!(verify_k_parameter(&both, GroundSet::new(n), 2).unwrap());

        let card = build_cardinality(n, 2);
        prop_assert!(verify_k_parameter(&card, GroundSet::new(n), 1).unwrap());
    }

    #[test]
    fn rand_batch_invariants(
        n in 2usize..14,
        seed in any::<u64>(),
        rho in 0.05f64..3.0,
        max_count in 1usize..4,
        p in prop_oneof![Just(1.0f64), 0.2f64..1.0],
        binary in any::<bool>(),
    ) {
        let f = cut_instance(n, 0.6, seed);
        let c = costs(n, seed);
        let system = build_partition_matroid(n, &groups(n, 3, seed), &[2, 2, 1], None).unwrap();
        let params = RandBatchParams {
            threshold: rho,
            max_count,
            acceptance: p,
            epsilon: 0.2,
            search: if binary { SearchMode::Binary } else { SearchMode::Linear },
        };
        let mut tracker = Tracker::sequential();
        let r = rand_batch(
            &params,
            &ElementSet::full(n),
            &f,
            &c,
            &system,
            &mut stream(seed, &[6]),
            &mut tracker,
        )
        .unwrap();
        let u = considered_set(n, &r);
        prop_assert_eq!(u.len(), r.considered.len());
        prop_assert!(system.is_independent(&r.accepted));
        prop_assert!(r.accepted.is_subset(&u));
        prop_assert!(u.is_disjoint(&r.remaining));
        prop_assert!(r.count <= max_count);
        if !r.remaining.is_empty() {
            prop_assert_eq!(r.count, max_count);
        }
        if p >= 1.0 {
            prop_assert_eq!(&r.accepted, &u);
        }
    }

    #[test]
    fn search_modes_agree(n in 2usize..14, seed in any::<u64>(), rho in 0.05f64..3.0, p in 0.2f64..=1.0) {
        let f = cut_instance(n, 0.6, seed);
        let c = costs(n, seed);
        let system = build_knapsack(CostModel::new(c.clone(), 0.4 * n as f64).unwrap());
        let run = |search| {
            let params = RandBatchParams { threshold: rho, max_count: 3, acceptance: p, epsilon: 0.2, search };
            let mut tracker = Tracker::sequential();
            let r = rand_batch(&params, &ElementSet::full(n), &f, &c, &system, &mut stream(seed, &[7]), &mut tracker)
                .unwrap();
            (r.accepted, r.considered, r.remaining, r.count)
        };
        prop_assert_eq!(run(SearchMode::Linear), run(SearchMode::Binary));
    }

    #[test]
    fn par_skp_output_is_affordable(n in 1usize..10, seed in any::<u64>(), frac in 0.1f64..1.0) {
        let f = cut_instance(n, 0.5, seed);
        let c = costs(n, seed);
        let budget = (frac * c.iter().sum::<f64>()).max(1.0);
        let model = CostModel::new(c.clone(), budget).unwrap();
        let config = SkpConfig { epsilon: 0.5, seed, ..SkpConfig::default() };
        let mut tracker = Tracker::sequential();
        let s = par_skp(&config, &f, &model, &RandomSubset, &mut tracker).unwrap();
        prop_assert!(model.within_budget(&s.set));
        prop_assert!((s.value - f.value(&s.set)).abs() < TOL);
        let best = model
            .affordable()
            .into_iter()
            .map(|u| f.value(&ElementSet::from_ids(n, [u]).unwrap()))
            .fold(0.0, f64::max);
        prop_assert!(s.value >= best - TOL);
    }

    #[test]
    fn par_ssp_output_is_feasible(n in 1usize..12, seed in any::<u64>(), cap in 1usize..4) {
        let f = cut_instance(n, 0.5, seed);
        let system = build_partition_matroid(n, &groups(n, 3, seed), &[cap, 1, cap], None).unwrap();
        let config = SspConfig { epsilon: 0.3, seed, ..SspConfig::default() };
        let mut tracker = Tracker::sequential();
        let (s, phases) = par_ssp_traced(&config, &f, &system, &mut tracker).unwrap();
        prop_assert!(system.is_independent(&s.set));
        prop_assert!((s.value - f.value(&s.set)).abs() < TOL);
        let best = (0..n as u32)
            .map(|u| f.value(&ElementSet::from_ids(n, [u]).unwrap()))
            .fold(0.0, f64::max);
        prop_assert!(s.value >= best - TOL);
        for ph in &phases {
            let u = ElementSet::from_ids(n, ph.considered.iter().copied()).unwrap();
            prop_assert!(ph.accepted.is_subset(&u));
            prop_assert!(u.is_subset(&ph.pool));
            prop_assert!(u.is_disjoint(&ph.remaining));
        }
    }
}

/// Runs `body` with parallel execution spread over four workers.
#[cfg(feature = "parallel")]
fn wide<R: Send>(body: impl FnOnce() -> R + Send) -> R {
    rayon::ThreadPoolBuilder::new()
        .num_threads(4)
        .build()
        .unwrap()
        .install(body)
}

#[cfg(feature = "parallel")]
proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn execution_mode_does_not_change_results(n in 2usize..10, seed in any::<u64>()) {
        let f = cut_instance(n, 0.5, seed);
        let c = costs(n, seed);
        let model = CostModel::new(c.clone(), (0.3 * c.iter().sum::<f64>()).max(1.0)).unwrap();
        let config = SkpConfig { epsilon: 0.5, seed, ..SkpConfig::default() };
        let run = |execution| {
            let mut t = Tracker::new(execution);
            let s = par_skp(&config, &f, &model, &RandomSubset, &mut t).unwrap();
            (s.set, s.value.to_bits(), t.rounds(), t.queries(), t.max_queries_per_round(), t.independence_checks())
        };
        prop_assert_eq!(run(Execution::Sequential), wide(|| run(Execution::Parallel)));

        let system = build_cardinality(n, 3);
        let config = SspConfig { epsilon: 0.3, seed, ..SspConfig::default() };
        let run = |execution| {
            let mut t = Tracker::new(execution);
            let s = par_ssp(&config, &f, &system, &mut t).unwrap();
            (s.set, s.value.to_bits(), t.rounds(), t.queries(), t.independence_checks())
        };
        prop_assert_eq!(run(Execution::Sequential), wide(|| run(Execution::Parallel)));
    }
}

#[cfg(feature = "parallel")]
#[test]
fn wide_probes_match_across_modes() {
    let n = 700;
    let f = cut_instance(n, 0.02, 99);
    let rev = RevenueFunction::new(
        WeightedDigraph::new(n, &digraph_arcs(n, 5, &mut stream(99, &[1]))).unwrap(),
        1,
    )
    .unwrap();
    let probes: Vec<Probe> = (0..6u32)
        .map(|i| {
            let base = ElementSet::from_ids(n, (0..n as u32).filter(|u| u % (i + 2) == 0)).unwrap();
            Probe::new(base, (0..n as u32).rev().collect())
        })
        .chain([Probe::value_only(ElementSet::full(n))])
        .collect();
    let bits = |out: Vec<ProbeOutcome>| -> Vec<Vec<u64>> {
        out.iter()
            .map(|o| {
                std::iter::once(o.base_value)
                    .chain(o.extended.iter().copied())
                    .map(f64::to_bits)
                    .collect()
            })
            .collect()
    };
    let mut seq = Tracker::sequential();
    let mut par = Tracker::new(Execution::Parallel);
    assert_eq!(
        bits(seq.submit_probes(&f, &probes)),
        bits(wide(|| par.submit_probes(&f, &probes)))
    );
    assert_eq!(
        bits(seq.submit_probes(&rev, &probes)),
        bits(wide(|| par.submit_probes(&rev, &probes)))
    );
    assert_eq!(seq.round_sizes(), par.round_sizes());
}
