//! Verification toolkit for extensions of Diophantine triples of the shape
//! `{K, A²K+2εA, (A+1)²K+2ε(A+1)}`.
//!
//! The crate is split along the verification pipeline:
//!
//! * [`arith`]: exact integer helpers and certified interval reals.
//! * [`tuple`]: D(n)-tuple algebra, the triple families, and candidate sieves.
//! * [`pell`]: the simultaneous Pell system and its recurrences.
//! * [`bounds`]: explicit bounds from linear forms in logarithms and the
//!   hypergeometric method.
//! * [`reduce`]: Baker–Davenport reduction and per-triple verification.
//! * [`sweep`]: resumable grid sweeps with line-delimited JSON records.

pub mod arith;
pub mod error;

pub use error::{Error, Result};
pub mod tuple;
pub mod pell;
pub mod bounds;
pub mod reduce;
pub mod sweep;
