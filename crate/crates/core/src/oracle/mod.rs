//! Independent verification of the closed forms.
//!
//! [`enumerate`] counts chains and evaluates the Möbius recurrence directly on
//! the materialized order, without touching [`crate::formulas`]. [`verify`]
//! runs both sides against each other and against the matrix algebra.

pub mod enumerate;
pub mod verify;

pub use enumerate::{
    chain_counts_by_length, counts_to, enumerate_chains, moebius_by_recurrence, moebius_row, ChainKind, ChainQuery,
};
pub use verify::{verify_suite, CheckResult, Failure, VerificationReport, VerifyOptions};
