//! Exact simulation of a projective-measurement scheme that prepares every
//! total angular momentum eigenstate of `N` spin-1/2 emitters, together with
//! the reference coupled basis it is checked against.
//!
//! Amplitudes are exact numbers `sum q_i sqrt(r_i)` ([`radical::RadicalAmplitude`]);
//! no floating point enters any comparison.

pub mod basis;
pub mod cli;
pub mod coupled;
pub mod document;
pub mod error;
pub mod half;
pub mod path;
pub mod projector;
pub mod radical;
pub mod setup;
pub mod state;
pub mod verify;

pub use basis::{magnetization, BasisString, Sign};
pub use coupled::{apply_s2, apply_sz, build_coupled_state, cgc, CgcBranch};
pub use error::{Result, SpinError};
pub use half::HalfInt;
pub use path::{enumerate_paths, validate_path, CouplingPath, Step};
pub use projector::{apply_projection_sequence, permutation_sum_oracle, JointState};
pub use radical::{radical_add, radical_mul, RadicalAmplitude};
pub use setup::{column_sums, compile_setup, AssignmentPolicy, ExplicitLayout, Polarizer, SetupConfig};
pub use state::{inner_product, SparseState};
pub use verify::{
    check_algorithm_recursion, check_assignment_invariance, check_proportionality,
    check_ratio_constraint, check_sum_identities, full_sweep, EquivalenceReport, Suite,
    SweepOptions, SweepSummary,
};
