//! Computations on the copositive cone COP(n) and its dual, the completely
//! positive cone CP(n): minimal zeros of copositive matrices, the graph
//! they induce, extreme/exposed ray certificates, dimensions of the
//! maximal faces of CP(n) cut out by exposed rays, and the circulant and
//! order-raising constructions that realize the known dimension bounds at
//! small orders.
//!
//! The crate is organized bottom-up:
//!
//! * [`tol`] — the tolerance policy every classification runs against;
//! * [`linalg`] — symmetric matrices, svec, SVD-backed rank/kernel;
//! * [`zeros`] — copositivity verdicts and minimal-zero enumeration;
//! * [`graph`] — the minimal-zeros graph, its maximal cliques, and the
//!   derived index sets;
//! * [`face`] — face dimensions and extreme/exposed ray certificates;
//! * [`construct`] — circulant extremal matrices and order-raising lifts;
//! * [`report`] — the end-to-end bound pipelines behind the CLI.
//!
//! All functions are pure: no global state, no interior mutability, no
//! ambient configuration. Determinism is part of the contract — equal
//! inputs produce byte-identical reports.

pub mod error;
pub mod tol;

pub mod linalg;
mod lp;
mod nnls;

pub mod zeros;

pub mod graph;

pub mod face;

pub mod construct;

pub mod report;

pub use error::{Error, Result};
pub use tol::TolerancePolicy;

pub use linalg::{kernel_basis, principal_submatrix, rank_of_family, svec, SymMatrix};
pub use zeros::{
    enumerate_minimal_zeros, is_copositive, quadratic_form, verify_zero, CopositivityVerdict,
    MinimalZeroCatalog, NormalizedZero,
};
pub use graph::{
    build_graph, j_set, m_sets, maximal_cliques, s_of_tau, zero_set_contains, Clique,
    CliqueCover, ZerosGraph,
};
pub use face::{
    certify_exposed, certify_extreme, face_dimension, maximal_face_of, support_criterion,
    ExposednessMethod, FaceDescriptor, RayCertificate,
};
pub use construct::{
    build_circulant, build_lift, build_lift_general, check_lift_hypotheses,
    circulant_minimal_zeros, index_sets, palindromic_u, verify_zeroset_shape, HildebrandParams,
    LiftHypotheses, LiftResult, PalindromicKernelVector, ZerosetShapeReport,
};
pub use report::{bounds_report, BoundsReport};


