//! Application objectives, cost models, synthetic instances and the
//! exhaustive optimum used as a test oracle.

mod brute;
mod costs;
mod cut;
mod image;
mod modular;
mod movie;
pub mod random;
mod revenue;

pub use brute::{brute_force_opt, BRUTE_FORCE_LIMIT};
pub use costs::{image_costs, movie_costs, normalize_mean_one, revenue_costs, COST_FLOOR};
pub use cut::CutFunction;
pub use image::{ImageFunction, SimilarityMatrix};
pub use modular::Modular;
pub use movie::{movie_similarity, FeatureTable, MovieFunction, FEATURE_DIM};
pub use revenue::{RevenueFunction, WeightedDigraph};
