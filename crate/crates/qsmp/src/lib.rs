//! Classical public-coin simultaneous message protocols, their quantum
//! fingerprint compilations, and width bounds for referee matrices.
//!
//! In the simultaneous message model, Alice holds `x`, Bob holds `y`, and
//! each sends one message to a referee who must output `f(x, y)`. With a
//! shared public coin the referee's strategy per coin value `l` is a boolean
//! matrix `D_l` indexed by the two messages. This crate simulates that model
//! end to end and the quantum protocols obtained from it:
//!
//! - [`smp`]: protocols as explicit message tables plus referee matrices,
//!   exact acceptance probabilities, validation against a target function.
//! - [`fingerprint`]: compilation of a protocol into fingerprint state
//!   vectors whose inner product recovers the classical acceptance
//!   probability scaled by a known gap divisor.
//! - [`referee`]: a SWAP-test referee simulated at the outcome-distribution
//!   level, with Hoeffding repetition counts and qubit cost accounting.
//! - [`width`]: row-column width machinery for referee matrix families:
//!   decomposition generators, convex-width style certificates, and
//!   trace-norm lower bounds.
//! - [`zoo`]: concrete protocols and matrices (hash-based equality,
//!   inner-product matrices, single-column matrices, random instances).
//! - [`matrix`] / [`svd`]: the dense linear algebra everything rests on.
//!
//! The `qsmp` binary exposes the same machinery as `analyze`, `simulate`,
//! `fact1`, and `replay` subcommands; see [`cli`]. Runnable walkthroughs
//! live in `examples/`.

pub mod cli;
pub mod error;
pub mod fingerprint;
pub mod matrix;
pub mod referee;
pub mod smp;
pub mod svd;
pub mod width;
pub mod zoo;

pub use error::{Error, Result};
pub use fingerprint::{inner_product, FingerprintLayout, StateVector};
pub use matrix::{BooleanMatrix, RealMatrix};
pub use referee::{
    cost_report, decide, simulate_quantum_protocol, swap_accept_prob, FingerprintMode,
    RefereeConfig, SimulationStats,
};
pub use smp::{ClassicalSmp, CorrectnessThresholds, TargetFunction, ValidationReport};
pub use width::{
    balance_decomposition, convw_to_rcw, cyclic_diagonal_decomposition, ip_lower_bound_check,
    rcw_lower_bound, svd_decomposition, trivial_decomposition, validate_convw,
    width_report, ConvwDecomposition, ConvwValidation, ConvwViolation, Decomposition,
    IpLowerBoundReport, WidthReport,
};
pub use zoo::{
    build_equality_protocol, first_column_ones, ip_matrix, ip_signed_matrix, random_protocol,
    EqualityParams,
};
