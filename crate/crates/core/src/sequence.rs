//! Natural-number sequences `{F_n}` that designate cobweb posets.
//!
//! A sequence is written in a small descriptor language:
//!
//! ```text
//! fibonacci | constant:<k >= 1> | naturals | pow2 | list:<n0>,<n1>,...
//! ```
//!
//! Every sequence satisfies `F_n >= 1` for `n >= 1` and `F_0 ∈ {0, 1}`.
//! `F_0 = 0` only flags the Fibonacci-style exception; the poset still
//! materializes a single root at level 0 (see [`CobwebSequence::level_width`]).

use std::fmt;
use std::str::FromStr;
use std::sync::RwLock;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Which sequence a [`CobwebSequence`] evaluates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SequenceKind {
    /// `F_0 = 0, F_1 = F_2 = 1, F_n = F_{n-1} + F_{n-2}`.
    Fibonacci,
    /// `F_0 = 1, F_n = k`.
    Constant(BigUint),
    /// `F_0 = 1, F_n = n`.
    Naturals,
    /// `F_n = 2^n`.
    Pow2,
    /// Explicit finite prefix `F_0, ..., F_{len-1}`.
    List(Vec<BigUint>),
}

/// A validated sequence with a memo table of already evaluated terms.
///
/// The memo table is a pure cache behind a lock, so a sequence can be
/// shared read-only across threads.
#[derive(Debug)]
pub struct CobwebSequence {
    kind: SequenceKind,
    cache: RwLock<Vec<BigUint>>,
}

impl CobwebSequence {
    pub fn new(kind: SequenceKind) -> Result<Self> {
        match &kind {
            SequenceKind::Constant(k) if k.is_zero() => {
                return Err(Error::InadmissibleTerm {
                    index: 1,
                    value: "0".into(),
                    reason: "terms at index >= 1 must be at least 1",
                })
            }
            SequenceKind::List(terms) => validate_terms(terms)?,
            _ => {}
        }
        Ok(Self {
            kind,
            cache: RwLock::new(Vec::new()),
        })
    }

    pub fn fibonacci() -> Self {
        Self::new(SequenceKind::Fibonacci).expect("fibonacci is admissible")
    }

    pub fn naturals() -> Self {
        Self::new(SequenceKind::Naturals).expect("naturals is admissible")
    }

    pub fn pow2() -> Self {
        Self::new(SequenceKind::Pow2).expect("pow2 is admissible")
    }

    pub fn constant(k: u64) -> Result<Self> {
        Self::new(SequenceKind::Constant(BigUint::from(k)))
    }

    pub fn list<I: IntoIterator<Item = u64>>(terms: I) -> Result<Self> {
        Self::new(SequenceKind::List(
            terms.into_iter().map(BigUint::from).collect(),
        ))
    }

    /// The built-in sequences, with `constant` sampled at k = 1 and k = 2.
    pub fn builtins() -> Vec<Self> {
        vec![
            Self::fibonacci(),
            Self::constant(1).expect("admissible"),
            Self::constant(2).expect("admissible"),
            Self::naturals(),
            Self::pow2(),
        ]
    }

    pub fn kind(&self) -> &SequenceKind {
        &self.kind
    }

    /// Largest index the sequence is defined at, `None` when unbounded.
    pub fn last_index(&self) -> Option<usize> {
        match &self.kind {
            SequenceKind::List(terms) => Some(terms.len() - 1),
            _ => None,
        }
    }

    /// Returns `F_n`.
    pub fn eval(&self, n: usize) -> Result<BigUint> {
        if let Some(last) = self.last_index() {
            if n > last {
                return Err(Error::BeyondPrefix {
                    spec: self.to_string(),
                    last,
                    index: n,
                });
            }
        }
        {
            let cache = self.cache.read().unwrap_or_else(|e| e.into_inner());
            if let Some(v) = cache.get(n) {
                return Ok(v.clone());
            }
        }
        let mut cache = self.cache.write().unwrap_or_else(|e| e.into_inner());
        while cache.len() <= n {
            let next = self.term(cache.len(), &cache);
            cache.push(next);
        }
        Ok(cache[n].clone())
    }

    /// Number of vertices on level `s`: `F_s` for `s >= 1`, and always one
    /// root vertex at level 0 whether `F_0` is 0 or 1.
    pub fn level_width(&self, s: usize) -> Result<BigUint> {
        if s == 0 {
            Ok(BigUint::one())
        } else {
            self.eval(s)
        }
    }

    // `prev` holds F_0..F_{i-1}.
    fn term(&self, i: usize, prev: &[BigUint]) -> BigUint {
        match &self.kind {
            SequenceKind::Fibonacci => match i {
                0 => BigUint::zero(),
                1 | 2 => BigUint::one(),
                _ => &prev[i - 1] + &prev[i - 2],
            },
            SequenceKind::Constant(k) => {
                if i == 0 {
                    BigUint::one()
                } else {
                    k.clone()
                }
            }
            SequenceKind::Naturals => {
                if i == 0 {
                    BigUint::one()
                } else {
                    BigUint::from(i)
                }
            }
            SequenceKind::Pow2 => BigUint::one() << i,
            SequenceKind::List(terms) => terms[i].clone(),
        }
    }
}

fn validate_terms(terms: &[BigUint]) -> Result<()> {
    let Some(first) = terms.first() else {
        return Err(Error::MalformedSequence {
            spec: "list:".into(),
            reason: "a list needs at least the term F_0".into(),
        });
    };
    if *first > BigUint::one() {
        return Err(Error::InadmissibleTerm {
            index: 0,
            value: first.to_string(),
            reason: "F_0 must be 0 or 1",
        });
    }
    if let Some((index, value)) = terms.iter().enumerate().skip(1).find(|(_, v)| v.is_zero()) {
        return Err(Error::InadmissibleTerm {
            index,
            value: value.to_string(),
            reason: "terms at index >= 1 must be at least 1",
        });
    }
    Ok(())
}

impl Clone for CobwebSequence {
    fn clone(&self) -> Self {
        let cache = self.cache.read().unwrap_or_else(|e| e.into_inner());
        Self {
            kind: self.kind.clone(),
            cache: RwLock::new(cache.clone()),
        }
    }
}

impl PartialEq for CobwebSequence {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl Eq for CobwebSequence {}

impl fmt::Display for CobwebSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            SequenceKind::Fibonacci => f.write_str("fibonacci"),
            SequenceKind::Constant(k) => write!(f, "constant:{k}"),
            SequenceKind::Naturals => f.write_str("naturals"),
            SequenceKind::Pow2 => f.write_str("pow2"),
            SequenceKind::List(terms) => {
                f.write_str("list:")?;
                for (i, t) in terms.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{t}")?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for CobwebSequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_sequence(s)
    }
}

/// Parses a sequence descriptor and validates the listed terms.
pub fn parse_sequence(spec_text: &str) -> Result<CobwebSequence> {
    let text = spec_text.trim();
    let malformed = |reason: String| Error::MalformedSequence {
        spec: text.to_string(),
        reason,
    };
    let kind = match text.split_once(':') {
        None => match text {
            "fibonacci" => SequenceKind::Fibonacci,
            "naturals" => SequenceKind::Naturals,
            "pow2" => SequenceKind::Pow2,
            "constant" | "list" => return Err(malformed(format!("`{text}` needs `:` and arguments"))),
            other => return Err(malformed(format!("unknown sequence `{other}`"))),
        },
        Some(("constant", arg)) => SequenceKind::Constant(parse_natural(arg).map_err(malformed)?),
        Some(("list", args)) => {
            if args.trim().is_empty() {
                return Err(malformed("empty term list".into()));
            }
            let terms = args
                .split(',')
                .map(parse_natural)
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(malformed)?;
            SequenceKind::List(terms)
        }
        Some((name, _)) => return Err(malformed(format!("`{name}` takes no arguments or is unknown"))),
    };
    CobwebSequence::new(kind)
}

fn parse_natural(s: &str) -> std::result::Result<BigUint, String> {
    let s = s.trim();
    if s.starts_with('-') {
        return Err(format!("negative term `{s}`"));
    }
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!("`{s}` is not a natural number"));
    }
    s.parse::<BigUint>().map_err(|e| format!("`{s}`: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn terms(seq: &CobwebSequence, upto: usize) -> Vec<u64> {
        (0..=upto)
            .map(|n| u64::try_from(seq.eval(n).unwrap()).unwrap())
            .collect()
    }

    #[test]
    fn fibonacci_terms() {
        let seq = parse_sequence("fibonacci").unwrap();
        assert_eq!(terms(&seq, 8), vec![0, 1, 1, 2, 3, 5, 8, 13, 21]);
        assert_eq!(seq.eval(6).unwrap(), BigUint::from(8u32));
    }

    #[test]
    fn constant_and_naturals() {
        assert_eq!(terms(&parse_sequence("constant:1").unwrap(), 4), vec![1; 5]);
        let three = parse_sequence("constant:3").unwrap();
        assert_eq!(three.eval(0).unwrap(), BigUint::one());
        assert_eq!(terms(&three, 3), vec![1, 3, 3, 3]);
        assert_eq!(parse_sequence("naturals").unwrap().eval(5).unwrap(), BigUint::from(5u32));
        assert_eq!(terms(&parse_sequence("pow2").unwrap(), 4), vec![1, 2, 4, 8, 16]);
    }

    #[test]
    fn list_rejects_zero_term() {
        let err = parse_sequence("list:1,4,0,2").unwrap_err();
        assert!(matches!(err, Error::InadmissibleTerm { index: 2, .. }), "{err}");
    }

    #[test]
    fn list_rejects_negative_and_garbage() {
        assert!(matches!(
            parse_sequence("list:1,-3").unwrap_err(),
            Error::MalformedSequence { .. }
        ));
        for bad in ["", "fib", "constant", "constant:", "constant:x", "list:", "list:1,,2", "pow2:3", "naturals:1"] {
            assert!(parse_sequence(bad).is_err(), "{bad:?} should not parse");
        }
        assert!(matches!(
            parse_sequence("constant:0").unwrap_err(),
            Error::InadmissibleTerm { index: 1, .. }
        ));
        assert!(matches!(
            parse_sequence("list:2,1").unwrap_err(),
            Error::InadmissibleTerm { index: 0, .. }
        ));
    }

    #[test]
    fn list_prefix_bound() {
        let seq = parse_sequence("list:1,4,2").unwrap();
        assert_eq!(seq.eval(2).unwrap(), BigUint::from(2u32));
        assert!(matches!(seq.eval(3).unwrap_err(), Error::BeyondPrefix { last: 2, index: 3, .. }));
    }

    #[test]
    fn root_level_is_one_vertex() {
        assert_eq!(CobwebSequence::fibonacci().level_width(0).unwrap(), BigUint::one());
        assert_eq!(CobwebSequence::pow2().level_width(0).unwrap(), BigUint::one());
    }

    #[test]
    fn builtins_are_positive() {
        for seq in CobwebSequence::builtins() {
            for n in 1..=64 {
                assert!(seq.eval(n).unwrap() >= BigUint::one(), "{seq} at {n}");
            }
        }
    }

    #[test]
    fn display_round_trips() {
        for text in ["fibonacci", "constant:7", "naturals", "pow2", "list:0,1,5,2"] {
            assert_eq!(parse_sequence(text).unwrap().to_string(), text);
        }
    }

    #[test]
    fn memo_is_transparent_across_threads() {
        let seq = std::sync::Arc::new(CobwebSequence::fibonacci());
        let handles: Vec<_> = (0..4)
            .map(|t| {
                let seq = seq.clone();
                std::thread::spawn(move || (0..200).rev().step_by(t + 1).map(|n| seq.eval(n).unwrap()).count())
            })
            .collect();
        for h in handles {
            h.join().unwrap();
        }
        let fresh = CobwebSequence::fibonacci();
        for n in 0..200 {
            assert_eq!(seq.eval(n).unwrap(), fresh.eval(n).unwrap());
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn grammatical() -> impl Strategy<Value = String> {
            prop_oneof![
                Just("fibonacci".to_string()),
                Just("naturals".to_string()),
                Just("pow2".to_string()),
                (1u64..1000).prop_map(|k| format!("constant:{k}")),
                (0u64..2, prop::collection::vec(1u64..10_000, 0..12)).prop_map(|(f0, rest)| {
                    let mut s = format!("list:{f0}");
                    for t in rest {
                        s.push_str(&format!(",{t}"));
                    }
                    s
                }),
            ]
        }

        proptest! {
            #[test]
            fn every_grammatical_spec_parses(spec in grammatical()) {
                let seq = parse_sequence(&spec).unwrap();
                prop_assert_eq!(seq.to_string(), spec);
            }

            #[test]
            fn arbitrary_text_never_panics(spec in ".{0,24}") {
                let _ = parse_sequence(&spec);
            }

            #[test]
            fn eval_is_deterministic(n in 0usize..300) {
                let seq = CobwebSequence::fibonacci();
                prop_assert_eq!(seq.eval(n).unwrap(), seq.eval(n).unwrap());
            }
        }
    }
}
