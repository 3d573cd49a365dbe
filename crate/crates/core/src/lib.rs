pub mod cweno;
pub mod error;
pub mod experiments;
pub mod gpc;
pub mod pipeline;
pub mod poly;
pub mod random_space;
pub mod scalar;
pub mod solvers;
pub mod splines;
pub mod statistics;
pub mod surrogate;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub use experiments::{ExperimentConfig, ExperimentId};
pub use random_space::{CollocationSet, RandomVariable, SampleSet};
pub use surrogate::{Surrogate, SurrogateMethod, SurrogateOptions};
