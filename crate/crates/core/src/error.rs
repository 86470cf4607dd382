use thiserror::Error;

use crate::oracle::Element;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("element {element} is outside the ground set of size {ground}")]
    UnknownElement { element: Element, ground: usize },

    #[error("objective returned {value} for a query; values must be finite and non-negative")]
    ObjectiveContract { value: f64 },

    #[error("evaluation batch is empty")]
    EmptyBatch,

    #[error("cannot draw subsets of size {block} from {available} elements")]
    InfeasibleSample { available: usize, block: usize },

    #[error("every singleton has value 0; no positive OPT guess exists")]
    DegenerateObjective,

    #[error("enumeration needs {required} evaluations, over the limit of {limit}")]
    InstanceTooLarge { required: u128, limit: u128 },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
