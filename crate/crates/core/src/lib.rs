pub mod combin;
pub mod error;
pub mod estimators;
pub mod events;
pub mod experiment;
pub mod field;
mod index_serde;
pub mod matrix;
pub mod processes;
pub mod random;

pub use error::{Error, Result};
pub use field::{make_field, FieldElem, FieldSpec};
pub use matrix::{MatrixFq, MatrixLiteral};
pub use random::{make_distribution, sample_matrix, uniform_distribution, EntryDistribution, RandomStream};
