//! Unitarily invariant ("singlet") states of `n` qudits.
//!
//! The crate builds the subspace of `(C^d)^{⊗n}` that is invariant up to a
//! phase under `U ⊗ … ⊗ U`, checks k-uniformity through reduced density
//! matrices, and certifies, both by an exact counting identity and by direct
//! minimization, that no such state is two-uniform.
//!
//! Modules follow the data flow:
//!
//! - [`states`]: multi-indices, sparse pure states, local operators, marginals.
//! - [`singlet`]: invariant-subspace construction and phase-function checks.
//! - [`uniformity`]: k-uniform / AME predicates and deficit metrics.
//! - [`nogo`]: exact counting identity and the deficit floor.
//! - [`optimize`]: projected-gradient minimization of the pair deficit.
//! - [`io`]: JSON formats shared with the command-line tool.

pub mod error;
pub mod fixtures;
pub mod io;
pub mod nogo;
pub mod optimize;
pub mod perm;
pub mod singlet;
pub mod states;
pub mod uniformity;

pub use error::{Error, Result};
pub use nogo::{certify, counting_sum, verify_certificate_numerically, NoGoCertificate, Verdict};
pub use optimize::{gradient_check, minimize_deficit, OptimizationResult, OptimizeOptions};
pub use perm::Permutation;
pub use singlet::{
    build_singlet_basis, expected_dimension, extract_phase_function, verify_invariance,
    PermutationPhase, PhaseFunctionReport, SingletBasis,
};
pub use states::{
    apply_collective, apply_local, enumerate_support, partial_trace, permute_particles,
    LocalOperator, MarginalMatrix, MultiIndex, OperatorKind, PureState, SupportProfile,
    SystemShape,
};
pub use uniformity::{is_ame, is_k_uniform, pair_deficit, UniformityReport};

pub use num_complex::Complex64 as C64;

/// Default tolerance for every approximate predicate in the crate.
pub const DEFAULT_TOL: f64 = 1e-9;
