//! Constructive Schur-Horn toolkit.
//!
//! The crate decides and builds solutions to the inverse problem "find a
//! Hermitian matrix with a given spectrum and a given diagonal", carries the
//! construction over to finite truncations of positive trace-class operators,
//! and models the finite-factor picture (spectral distributions, the
//! majorization order on measures, conditional expectations onto a MASA) in
//! `M_n` with normalized trace and in step functions on `[0, 1]`.
//!
//! Module map:
//!
//! * [`eigenlist`]: decreasing lists, prefix-sum majorization, the reduction
//!   to an equality-majorant.
//! * [`horn`]: T-transform chains, rotation-block unitaries, Horn
//!   construction, Ky Fan sums, spectral alignment of matrices.
//! * [`trace_class`]: truncated trace-class diagonals, contractions,
//!   projections with prescribed diagonal.
//! * [`measure`]: compactly supported measures, tail integrals, the order
//!   `m ⪯ n`, quantile transport to step functions.
//! * [`pinching`]: diagonal conditional expectation and its convexity
//!   inequalities, step-function alignment.
//! * [`cli`]: the `majorant` command-line front end.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod convex;
pub mod eigenlist;
mod error;
pub mod horn;
pub mod json;
pub mod matrix;
pub mod measure;
pub mod pinching;
pub mod random;
pub mod trace_class;

pub use convex::ConvexFn;
pub use eigenlist::{
    check_majorization, hlp_convex_check, normalize_list, reduce_to_equality, EigenList,
    MajorizationMode, MajorizationReport,
};
pub use error::{Error, Result};
pub use horn::{
    apply_t_transform, approx_conjugate, horn_construct, ky_fan_sum, t_transform_chain, TTransform,
};
pub use matrix::{ComplexMatrix, HermitianMatrix};
pub use measure::{
    majorize_measure, quantile_transport, tail_integral, CompactMeasure, MeasureMethod,
    StepFunction, TailMode,
};
pub use pinching::{
    align_step_functions, convex_pinch_check, pinch_diag, positive_part, schur_distribution_check,
};
pub use trace_class::{
    contraction_diagonal, eigenlist_l1_distance, feasible_diagonal, projection_with_diagonal,
    realize_finite_rank,
};
