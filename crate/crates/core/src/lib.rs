//! Low-adaptivity parallel algorithms for maximizing non-negative, possibly
//! non-monotone submodular functions under knapsack, k-system and cardinality
//! constraints.
//!
//! All oracle queries go through a [`Tracker`], which groups them into
//! adaptive rounds and counts queries per round. Independent branches run on
//! the rayon pool when the `parallel` feature is on (the default).
//!
//! ```
//! use parsubmod::{par_skp, CostModel, CutFunction, RandomSubset, SkpConfig, Tracker};
//!
//! let f = CutFunction::new(4, &[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0)]).unwrap();
//! let costs = CostModel::new(vec![1.0, 2.0, 1.0, 2.0], 3.0).unwrap();
//! let mut tracker = Tracker::default();
//! let out = par_skp(&SkpConfig::default(), &f, &costs, &RandomSubset, &mut tracker).unwrap();
//! assert!(costs.within_budget(&out.set));
//! assert!(tracker.rounds() > 0);
//! ```

pub mod constraints;
pub mod error;
pub mod executor;
pub mod objectives;
pub mod oracle;
pub mod par;
pub mod parskp;
pub mod parssp;
pub mod properties;
pub mod randbatch;
pub mod seed;
pub mod set;
mod solution;
pub mod usm;

pub use constraints::{
    build_cardinality, build_intersection, build_knapsack, build_label_system, build_partition_matroid,
    build_unconstrained, verify_k_parameter, Constraint, Contracted, CostModel, IndependenceSystem, KParameter,
    KStatus,
};
pub use error::{Error, Result};
pub use executor::{Probe, ProbeOutcome, RunMetrics, Tracker};
pub use objectives::{
    brute_force_opt, CutFunction, ImageFunction, Modular, MovieFunction, RevenueFunction, SimilarityMatrix,
    WeightedDigraph,
};
pub use oracle::{marginal_gain, shift_oracle, Restricted, SetFunction, Shifted};
pub use par::Execution;
pub use parskp::{par_skp, probe, SkpConfig, ThresholdGrid};
pub use parssp::{default_p, effective_r, par_ssp, SspConfig, ThresholdSchedule};
pub use randbatch::{find_tstar, get_seq, rand_batch, RandBatchParams, RandBatchResult, SearchMode, TStar};
pub use set::{ElementId, ElementSet, GroundSet};
pub use solution::Solution;
pub use usm::{usm_random_subset, RandomSubset, UsmSolver};
