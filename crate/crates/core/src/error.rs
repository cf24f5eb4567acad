use thiserror::Error;

use crate::set::ElementId;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("element {id} is outside the ground set of size {universe}")]
    ElementOutOfRange { id: ElementId, universe: usize },

    #[error("set over a ground set of size {found} used where size {expected} was expected")]
    UniverseMismatch { expected: usize, found: usize },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("element {id} has cost {cost} exceeding the budget {budget}")]
    CostExceedsBudget { id: ElementId, cost: f64, budget: f64 },

    #[error("independence system has no bounded k parameter")]
    UnboundedSystem,

    #[error("exhaustive enumeration refused: ground set of size {n} exceeds the limit {limit}")]
    TooLarge { n: usize, limit: usize },

    #[error("{0}")]
    Input(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
