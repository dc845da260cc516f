//! Exact nonexistence certificates for distance-transitive graphs arising
//! from two coset actions of the exceptional group `G2(q)`:
//!
//! * `G2(q)` acting on the cosets of the subfield subgroup `G2(sqrt q)`;
//! * `G2(q)` acting on the cosets of the Ree subgroup `2G2(q)`.
//!
//! The crate transcribes the suborbit length tables of both actions as
//! univariate polynomials, checks them exactly, and replays each elimination
//! argument as a gate that emits numeric witnesses. Everything is computed
//! with arbitrary-precision integers and rationals; nothing is approximated.
//!
//! ```
//! use g2dtg::pipeline::{Case, Pipeline, XFilter};
//!
//! let pipeline = Pipeline::default();
//! let report = pipeline.analyze(Case::Ree, 1..=1, &XFilter::All).unwrap();
//! assert!(report.certificates.iter().all(|c| c.is_no_dtg()));
//! ```

pub mod arith;
pub mod error;
pub mod filters;
pub mod fusion;
pub mod group_data;
pub mod par;
pub mod pipeline;
pub mod report;
pub mod tables;

pub use error::{Error, Result};
