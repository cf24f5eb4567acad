//! Problem instances: an objective plus the constraint a sweep point selects.

use parsubmod::objectives::{image_costs, movie_costs, movie_similarity, revenue_costs};
use parsubmod::seed::{derive_seed, stream};
use parsubmod::*;

use crate::config::{ConstraintKind, ExperimentConfig, Problem};
use crate::data::{generate, load_dataset, Dataset, DatasetKind};
use crate::error::{HarnessError, Result};

pub const REVENUE_MU: f64 = 0.2;
pub const MOVIE_LAMBDA: f64 = 2.0;
pub const REVENUE_NODE_CAP: usize = 2;
pub const IMAGE_CATEGORY_CAP: usize = 5;

/// Seed path of generated instances, apart from every run stream.
const INSTANCE_STREAM: u64 = u64::MAX;

pub fn dataset_kind(problem: Problem) -> DatasetKind {
    match problem {
        Problem::Revenue => DatasetKind::Revenue,
        Problem::Image => DatasetKind::Image,
        Problem::Movie => DatasetKind::Movie,
        Problem::SyntheticCut => DatasetKind::Cut,
    }
}

/// Extra structure the independence systems are built from.
#[derive(Clone, Debug)]
enum Layout {
    Cut,
    Revenue {
        nodes: usize,
        products: usize,
    },
    Image {
        categories: Option<Vec<usize>>,
    },
    Movie {
        genres: Vec<Vec<usize>>,
        genre_count: usize,
    },
}

pub struct Instance {
    pub problem: Problem,
    pub objective: Box<dyn SetFunction>,
    /// Knapsack costs per element; `None` when the problem has none for this
    /// constraint kind.
    costs: Option<Vec<f64>>,
    layout: Layout,
}

impl Instance {
    /// Loads `config.data` or generates an instance from the master seed.
    pub fn for_config(config: &ExperimentConfig) -> Result<Self> {
        let kind = dataset_kind(config.problem);
        let data = match &config.data {
            Some(dir) => load_dataset(kind, dir)?,
            None => generate(kind, config.n, derive_seed(config.seed, &[INSTANCE_STREAM]))?,
        };
        Self::build(config, config.kind(), data)
    }

    pub fn build(config: &ExperimentConfig, kind: ConstraintKind, data: Dataset) -> Result<Self> {
        let problem = config.problem;
        let mismatch = || HarnessError::Input(format!("dataset does not fit problem {problem}"));
        let (objective, costs, layout): (Box<dyn SetFunction>, Option<Vec<f64>>, Layout) = match problem {
            Problem::SyntheticCut => {
                let Dataset::Graph { graph, costs } = data else {
                    return Err(mismatch());
                };
                let f = CutFunction::new(graph.n, &graph.edges)?;
                let costs = costs.unwrap_or_else(|| {
                    use rand::Rng;
                    let mut rng = stream(config.seed, &[INSTANCE_STREAM, 1]);
                    (0..graph.n).map(|_| rng.gen_range(0.1..1.0)).collect()
                });
                (Box::new(f), Some(costs), Layout::Cut)
            }
            Problem::Revenue => {
                let Dataset::Graph { graph, .. } = data else {
                    return Err(mismatch());
                };
                let g = WeightedDigraph::new(graph.n, &graph.edges)?;
                let products = if kind == ConstraintKind::System {
                    config.products
                } else {
                    1
                };
                let costs = if products == 1 {
                    Some(revenue_costs(&g, REVENUE_MU)?)
                } else {
                    None
                };
                let layout = Layout::Revenue {
                    nodes: graph.n,
                    products,
                };
                (Box::new(RevenueFunction::new(g, products)?), costs, layout)
            }
            Problem::Image => {
                let Dataset::Images {
                    similarity,
                    pixels,
                    labels,
                } = data
                else {
                    return Err(mismatch());
                };
                let costs = pixels.as_deref().map(image_costs).transpose()?;
                (
                    Box::new(ImageFunction::new(similarity)?),
                    costs,
                    Layout::Image { categories: labels },
                )
            }
            Problem::Movie => {
                let Dataset::Movies(table) = data else {
                    return Err(mismatch());
                };
                let costs = movie_costs(&table)?;
                let f = MovieFunction::new(movie_similarity(&table, MOVIE_LAMBDA)?)?;
                let layout = Layout::Movie {
                    genre_count: table.genre_names.len(),
                    genres: table.genres,
                };
                (Box::new(f), Some(costs), layout)
            }
        };
        let n = objective.ground_size();
        let costs = if config.unit_costs { Some(vec![1.0; n]) } else { costs };
        Ok(Self {
            problem,
            objective,
            costs,
            layout,
        })
    }

    pub fn n(&self) -> usize {
        self.objective.ground_size()
    }

    pub fn knapsack(&self, budget: f64) -> Result<CostModel> {
        let costs = self.costs.clone().ok_or_else(|| {
            HarnessError::Input(format!(
                "problem {} has no cost model here; supply {} or use --unit-costs",
                self.problem,
                crate::data::PIXELS_FILE
            ))
        })?;
        Ok(CostModel::new(costs, budget)?)
    }

    /// The problem's independence system with total cap `m`; `q` overrides
    /// the per-node, per-category or per-genre cap.
    pub fn system(&self, m: usize, q: Option<usize>) -> Result<Constraint> {
        let n = self.n();
        Ok(match &self.layout {
            Layout::Cut => build_cardinality(n, m),
            Layout::Revenue { nodes, products } => {
                let q = q.unwrap_or(REVENUE_NODE_CAP);
                let by_node: Vec<usize> = (0..n).map(|e| e % nodes).collect();
                let by_product: Vec<usize> = (0..n).map(|e| e / nodes).collect();
                build_intersection(vec![
                    build_partition_matroid(n, &by_node, &vec![q; *nodes], None)?,
                    build_partition_matroid(n, &by_product, &vec![m; *products], None)?,
                ])?
            }
            Layout::Image { categories } => {
                let categories = categories
                    .as_ref()
                    .ok_or_else(|| HarnessError::Input(format!("image system needs {}", crate::data::LABELS_FILE)))?;
                let count = categories.iter().max().map_or(0, |&c| c + 1);
                let q = q.unwrap_or(IMAGE_CATEGORY_CAP);
                build_partition_matroid(n, categories, &vec![q; count], Some(m))?
            }
            Layout::Movie { genres, genre_count } => {
                let q = q.unwrap_or(m.div_ceil(2));
                build_label_system(genres, &vec![q; *genre_count], m)?
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Algorithm;

    fn config(problem: Problem) -> ExperimentConfig {
        ExperimentConfig {
            problem,
            n: 12,
            products: 3,
            algorithms: vec![Algorithm::Greedy],
            ..Default::default()
        }
    }

    #[test]
    fn revenue_layouts() {
        let c = config(Problem::Revenue);
        let data = generate(DatasetKind::Revenue, 12, 1).unwrap();
        let skp = Instance::build(&c, ConstraintKind::Knapsack, data.clone()).unwrap();
        assert_eq!(skp.n(), 12);
        assert!(skp.knapsack(1.0).is_ok());

        let ssp = Instance::build(&c, ConstraintKind::System, data).unwrap();
        assert_eq!(ssp.n(), 36);
        let sys = ssp.system(2, None).unwrap();
        assert_eq!(sys.k().value, 2);
        // Node 0 in two products is fine, in three is not.
        let two = ElementSet::from_ids(36, [0, 12]).unwrap();
        assert!(sys.is_independent(&two));
        assert!(!sys.is_independent(&two.with(24)));
        // Product 0 takes at most m = 2 nodes.
        assert!(!sys.is_independent(&ElementSet::from_ids(36, [0, 1, 2]).unwrap()));
    }

    #[test]
    fn image_and_movie_systems() {
        let c = config(Problem::Image);
        let img = Instance::build(&c, ConstraintKind::System, generate(DatasetKind::Image, 12, 2).unwrap()).unwrap();
        assert_eq!(img.system(3, Some(1)).unwrap().k().value, 1);
        let costs = img.knapsack(4.0).unwrap();
        assert!((costs.costs().iter().sum::<f64>() - 12.0).abs() < 1e-9);

        let c = config(Problem::Movie);
        let mv = Instance::build(&c, ConstraintKind::System, generate(DatasetKind::Movie, 12, 3).unwrap()).unwrap();
        let sys = mv.system(4, None).unwrap();
        assert!(sys.k().value <= 3);
        assert!(!sys.is_independent(&ElementSet::full(12)));
    }

    #[test]
    fn mismatched_data_is_rejected() {
        let c = config(Problem::Movie);
        let r = Instance::build(&c, ConstraintKind::System, generate(DatasetKind::Cut, 5, 1).unwrap());
        assert!(r.is_err());
    }

    #[test]
    fn unit_costs_override() {
        let mut c = config(Problem::SyntheticCut);
        c.unit_costs = true;
        let inst = Instance::for_config(&c).unwrap();
        assert!(inst.knapsack(3.0).unwrap().costs().iter().all(|&x| x == 1.0));
    }
}
