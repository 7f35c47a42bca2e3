//! Exact multidimensional q-Hahn and q-Racah polynomials indexed by planar
//! binary trees.
//!
//! All arithmetic is over ℚ. The base `q` is the square of a rational `s`, so
//! half-integer powers of `q` stay exact and every identity can be checked by
//! equality.

pub mod connect;
pub mod error;
pub mod hahn1d;
pub mod lattice;
pub mod linalg;
pub mod multihahn;
pub mod qnum;
pub mod qops;
pub mod report;
pub mod suites;
pub mod trees;

pub use connect::{connection_by_path, connection_oracle, ConnectionMatrix, MoveCoefficientSpec};
pub use error::{QError, Result};
pub use hahn1d::{Hahn1DSpec, Racah1DSpec, RootMode};
pub use lattice::{Composition, GridFunction, ParamSet};
pub use multihahn::{eval_grid, eval_q, norm_q, TreeBasisElement};
pub use qnum::{format_rational, parse_rational, QContext, QValue};
pub use report::{CheckResult, Report, Status};
pub use trees::{find_rl_path, CoefLabeling, MoveRecord, PlanarTree};
