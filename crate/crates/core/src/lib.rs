//! Cobweb posets and their incidence algebra.
//!
//! A cobweb poset is designated by a natural-number sequence `{F_n}`: level
//! `s` holds `F_s` vertices and every vertex lies below every vertex on all
//! higher levels. This crate materializes the finite subposets `P_n`, models
//! their incidence algebra as exact upper-triangular matrices, evaluates the
//! zeta, Möbius and chain-counting functions in closed form, and checks all of
//! it against brute-force enumeration.
//!
//! ```
//! use std::sync::Arc;
//! use cobweb::{formulas, CobwebSequence, FinitePoset, IncidenceFunction, Vertex};
//!
//! let p = Arc::new(FinitePoset::build(CobwebSequence::fibonacci(), 6).unwrap());
//! assert_eq!(p.nu(), 21);
//!
//! let mu = IncidenceFunction::zeta(&p).invert().unwrap();
//! let (x, y) = (Vertex::new(1, 2), Vertex::new(1, 4));
//! let closed = formulas::mu_at(p.sequence(), x, y).unwrap();
//! assert_eq!(mu.get(x, y).unwrap().to_integer(), closed);
//! ```

pub mod error;
pub mod formulas;
pub mod incidence;
pub mod oracle;
pub mod poset;
pub mod sequence;

pub use error::{Error, Result};
pub use formulas::{NamedFunction, VertexFunction};
pub use incidence::{DenseMatrix, IncidenceFunction, Scalar};
pub use oracle::{verify_suite, VerificationReport, VerifyOptions};
pub use poset::{covers, leq, rank, FinitePoset, PosetDump, Vertex};
pub use sequence::{parse_sequence, CobwebSequence, SequenceKind};

/// Materializes `P_n` for `seq`.
pub fn build_subposet(seq: CobwebSequence, n: usize) -> Result<FinitePoset> {
    FinitePoset::build(seq, n)
}
