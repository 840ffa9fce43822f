//! Multi-indices, sparse pure states, local operators and partial traces.
//!
//! Sites are labelled `0..n` and local basis labels `0..d`. A multi-index is
//! the tuple of labels of one computational basis vector; its lexicographic
//! order coincides with the usual big-endian linear index, so site 0 is the
//! most significant digit.

mod index;
mod marginal;
mod operator;
mod pure;

pub use index::{enumerate_support, MultiIndex, SupportProfile, SystemShape};
pub use marginal::{partial_trace, MarginalMatrix};
pub use operator::{haar_unitary, LocalOperator, OperatorKind};
pub use pure::{apply_collective, apply_local, permute_particles, PureState};
