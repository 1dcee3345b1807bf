//! Closed-form evaluators for the named incidence functions of a cobweb poset.
//!
//! Every evaluator works pointwise from vertex coordinates, so it accepts
//! arbitrary levels and never materializes a poset. With `x = (s, t)` and
//! `y = (u, v)`:
//!
//! | function | value |
//! |----------|-------|
//! | `zeta`   | `1` iff `t < v` or `x = y` |
//! | `mu`     | `1` if `x = y`, `-1` if `v = t + 1`, `(-1)^(v-t) * prod_{t<i<v} (F_i - 1)` if `v >= t + 2` |
//! | `card`   | `sum_{t<i<v} F_i + 2` for `x < y` |
//! | `eta^k`  | `e_{k-1}(F_{t+1}, ..., F_{v-1})`, the elementary symmetric polynomial |
//! | `chi^k`  | `F_{t+1} ... F_{v-1}` if `v = t + k` |
//!
//! Pairs with `x` not below `y` evaluate to zero.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::incidence::{IncidenceFunction, Scalar};
use crate::poset::{leq, FinitePoset, Vertex};
use crate::sequence::CobwebSequence;

/// A product of sequence terms over the open level range `(lower, upper)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelProductTerm {
    pub lower: usize,
    pub upper: usize,
    pub value: BigInt,
}

impl LevelProductTerm {
    /// `prod_{i=lower+1}^{upper-1} (F_i - 1)`.
    pub fn reduced(seq: &CobwebSequence, lower: usize, upper: usize) -> Result<Self> {
        let mut value = BigInt::one();
        for i in interior(lower, upper) {
            value *= BigInt::from(seq.eval(i)?) - 1;
        }
        Ok(Self { lower, upper, value })
    }

    /// `F_{lower+1} ... F_{upper-1}`.
    pub fn plain(seq: &CobwebSequence, lower: usize, upper: usize) -> Result<Self> {
        let mut value = BigInt::one();
        for i in interior(lower, upper) {
            value *= BigInt::from(seq.eval(i)?);
        }
        Ok(Self { lower, upper, value })
    }
}

fn interior(lower: usize, upper: usize) -> std::ops::Range<usize> {
    lower + 1..upper.max(lower + 1)
}

fn admissible(seq: &CobwebSequence, x: Vertex, y: Vertex) -> Result<()> {
    x.check_admissible(seq)?;
    y.check_admissible(seq)
}

fn to_natural(v: BigInt) -> BigUint {
    v.to_biguint().expect("count is non-negative")
}

/// `sum_{i=lower+1}^{upper-1} F_i`.
pub fn level_sum(seq: &CobwebSequence, lower: usize, upper: usize) -> Result<BigUint> {
    interior(lower, upper).try_fold(BigUint::zero(), |acc, i| Ok(acc + seq.eval(i)?))
}

pub fn zeta_at(seq: &CobwebSequence, x: Vertex, y: Vertex) -> Result<u8> {
    admissible(seq, x, y)?;
    Ok(u8::from(x == y) + u8::from(x.level < y.level))
}

pub fn eta_at(seq: &CobwebSequence, x: Vertex, y: Vertex) -> Result<u8> {
    admissible(seq, x, y)?;
    Ok(u8::from(x.level < y.level))
}

pub fn chi_at(seq: &CobwebSequence, x: Vertex, y: Vertex) -> Result<u8> {
    admissible(seq, x, y)?;
    Ok(u8::from(y.level == x.level + 1))
}

/// `(2 delta - zeta)(x, y)`.
pub fn chain_kernel_at(seq: &CobwebSequence, x: Vertex, y: Vertex) -> Result<i8> {
    admissible(seq, x, y)?;
    Ok(i8::from(x == y) - i8::from(x.level < y.level))
}

/// `(delta - chi)(x, y)`.
pub fn maximal_chain_kernel_at(seq: &CobwebSequence, x: Vertex, y: Vertex) -> Result<i8> {
    admissible(seq, x, y)?;
    Ok(i8::from(x == y) - i8::from(y.level == x.level + 1))
}

/// Möbius function in closed form.
pub fn mu_at(seq: &CobwebSequence, x: Vertex, y: Vertex) -> Result<BigInt> {
    admissible(seq, x, y)?;
    mu_by_levels(seq, x, y)
}

fn mu_by_levels(seq: &CobwebSequence, x: Vertex, y: Vertex) -> Result<BigInt> {
    let (t, v) = (x.level, y.level);
    if x == y {
        return Ok(BigInt::one());
    }
    if v <= t {
        return Ok(BigInt::zero());
    }
    if v == t + 1 {
        return Ok(-BigInt::one());
    }
    let product = LevelProductTerm::reduced(seq, t, v)?.value;
    Ok(if (v - t) % 2 == 0 { product } else { -product })
}

/// Number of elements of `[x, y]`.
pub fn card_interval(seq: &CobwebSequence, x: Vertex, y: Vertex) -> Result<BigUint> {
    admissible(seq, x, y)?;
    if x == y {
        Ok(BigUint::one())
    } else if x.level < y.level {
        Ok(level_sum(seq, x.level, y.level)? + 2u32)
    } else {
        Ok(BigUint::zero())
    }
}

/// Number of chains `x = z_0 < z_1 < ... < z_k = y`.
///
/// The intermediate vertices occupy `k - 1` distinct levels strictly between
/// `x` and `y`, one vertex each, so the count is the elementary symmetric
/// polynomial `e_{k-1}` of those level widths. It is evaluated by the usual
/// one-level-at-a-time recurrence instead of summing over level tuples.
pub fn eta_pow_at(seq: &CobwebSequence, k: usize, x: Vertex, y: Vertex) -> Result<BigUint> {
    admissible(seq, x, y)?;
    if k == 0 {
        return Ok(BigUint::from(u8::from(x == y)));
    }
    let (t, v) = (x.level, y.level);
    if t >= v || k > v - t {
        return Ok(BigUint::zero());
    }
    let picks = k - 1;
    let mut e = vec![BigUint::zero(); picks + 1];
    e[0] = BigUint::one();
    for (seen, level) in interior(t, v).enumerate() {
        let f = seq.eval(level)?;
        for j in (1..=picks.min(seen + 1)).rev() {
            let add = &e[j - 1] * &f;
            e[j] += add;
        }
    }
    Ok(e.swap_remove(picks))
}

/// Number of maximal (cover-saturated) chains of length `k` from `x` to `y`.
pub fn chi_pow_at(seq: &CobwebSequence, k: usize, x: Vertex, y: Vertex) -> Result<BigUint> {
    admissible(seq, x, y)?;
    if k == 0 {
        return Ok(BigUint::from(u8::from(x == y)));
    }
    if y.level != x.level + k {
        return Ok(BigUint::zero());
    }
    Ok(to_natural(LevelProductTerm::plain(seq, x.level, y.level)?.value))
}

/// All chains from `x` to `y`, i.e. `sum_k eta^k(x, y)`.
pub fn count_all_chains(p: &FinitePoset, x: Vertex, y: Vertex) -> Result<BigUint> {
    p.check_member(x)?;
    p.check_member(y)?;
    if !leq(x, y) {
        return Ok(BigUint::zero());
    }
    (0..=y.level - x.level).try_fold(BigUint::zero(), |acc, k| Ok(acc + eta_pow_at(p.sequence(), k, x, y)?))
}

/// Maximal chains from `x` to `y`; only `chi^(v-t)` contributes.
pub fn count_maximal_chains(p: &FinitePoset, x: Vertex, y: Vertex) -> Result<BigUint> {
    p.check_member(x)?;
    p.check_member(y)?;
    if !leq(x, y) {
        return Ok(BigUint::zero());
    }
    chi_pow_at(p.sequence(), y.level - x.level, x, y)
}

pub type VertexFunction = BTreeMap<Vertex, Scalar>;

/// `g(x) = sum_{y <= x} f(y)`.
pub fn down_sum(p: &FinitePoset, f: &VertexFunction) -> Result<VertexFunction> {
    let mut below = Scalar::zero();
    let mut out = VertexFunction::new();
    for level in 0..=p.depth() {
        let values = p
            .level(level)
            .into_iter()
            .map(|v| f.get(&v).cloned().ok_or(Error::MissingValue(v)).map(|val| (v, val)))
            .collect::<Result<Vec<_>>>()?;
        for (v, val) in &values {
            out.insert(*v, &below + val);
        }
        for (_, val) in values {
            below += val;
        }
    }
    Ok(out)
}

/// Recovers `f` from `g(x) = sum_{y <= x} f(y)` as
/// `f(x) = sum_{y <= x} g(y) mu(y, x)`.
pub fn mobius_inversion(p: &FinitePoset, g: &VertexFunction) -> Result<VertexFunction> {
    let seq = p.sequence();
    for v in p.vertices() {
        if !g.contains_key(&v) {
            return Err(Error::MissingValue(v));
        }
    }
    // mu(y, x) for y strictly below x depends only on the two levels
    let mut level_sums = Vec::with_capacity(p.depth() + 1);
    for level in 0..=p.depth() {
        let total: Scalar = p.level(level).iter().map(|v| g[v].clone()).sum();
        level_sums.push(total);
    }
    let mut f = VertexFunction::new();
    for x in p.vertices() {
        let mut acc = g[&x].clone();
        for (lower, total) in level_sums.iter().enumerate().take(x.level) {
            let mu = mu_by_levels(seq, Vertex::new(1, lower), x)?;
            if !mu.is_zero() {
                acc += total * Scalar::from_integer(mu);
            }
        }
        f.insert(x, acc);
    }
    Ok(f)
}

/// The incidence functions that have both a closed form and a matrix route.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NamedFunction {
    Zeta,
    Mu,
    Eta,
    Chi,
    /// `C = 2 delta - zeta`
    ChainKernel,
    /// `M = delta - chi`
    MaximalChainKernel,
    /// `C^-1`
    AllChains,
    /// `M^-1`
    MaximalChains,
}

impl NamedFunction {
    pub const ALL: [NamedFunction; 8] = [
        Self::Zeta,
        Self::Mu,
        Self::Eta,
        Self::Chi,
        Self::ChainKernel,
        Self::MaximalChainKernel,
        Self::AllChains,
        Self::MaximalChains,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Zeta => "zeta",
            Self::Mu => "mu",
            Self::Eta => "eta",
            Self::Chi => "chi",
            Self::ChainKernel => "C",
            Self::MaximalChainKernel => "M",
            Self::AllChains => "C-inv",
            Self::MaximalChains => "M-inv",
        }
    }

    /// Matrix built from the order relation alone; `mu` and the two chain
    /// counters come from exact triangular inversion.
    pub fn matrix(self, p: &Arc<FinitePoset>) -> Result<IncidenceFunction> {
        Ok(match self {
            Self::Zeta => IncidenceFunction::zeta(p),
            Self::Mu => IncidenceFunction::zeta(p).invert()?,
            Self::Eta => IncidenceFunction::eta(p),
            Self::Chi => IncidenceFunction::chi(p),
            Self::ChainKernel => IncidenceFunction::chain_kernel(p),
            Self::MaximalChainKernel => IncidenceFunction::maximal_chain_kernel(p),
            Self::AllChains => IncidenceFunction::chain_kernel(p).invert()?,
            Self::MaximalChains => IncidenceFunction::maximal_chain_kernel(p).invert()?,
        })
    }

    /// Closed-form value at one pair of a finite poset.
    pub fn closed_form(self, p: &FinitePoset, x: Vertex, y: Vertex) -> Result<BigInt> {
        let seq = p.sequence();
        Ok(match self {
            Self::Zeta => zeta_at(seq, x, y)?.into(),
            Self::Mu => mu_at(seq, x, y)?,
            Self::Eta => eta_at(seq, x, y)?.into(),
            Self::Chi => chi_at(seq, x, y)?.into(),
            Self::ChainKernel => chain_kernel_at(seq, x, y)?.into(),
            Self::MaximalChainKernel => maximal_chain_kernel_at(seq, x, y)?.into(),
            Self::AllChains => count_all_chains(p, x, y)?.into(),
            Self::MaximalChains => count_maximal_chains(p, x, y)?.into(),
        })
    }

    /// Tabulates [`closed_form`](Self::closed_form) over a poset.
    pub fn tabulate(self, p: &Arc<FinitePoset>) -> Result<IncidenceFunction> {
        IncidenceFunction::try_from_fn(p, |x, y| Ok(Scalar::from_integer(self.closed_form(p, x, y)?)))
    }
}

impl fmt::Display for NamedFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NamedFunction {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Self::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| format!("unknown function `{s}`"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::incidence::int;

    fn v(position: usize, level: usize) -> Vertex {
        Vertex::new(position, level)
    }

    fn nat(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn zeta_examples() {
        let fib = CobwebSequence::fibonacci();
        assert_eq!(zeta_at(&fib, v(1, 1), v(2, 3)).unwrap(), 1);
        assert_eq!(zeta_at(&fib, v(2, 3), v(2, 3)).unwrap(), 1);
        assert_eq!(zeta_at(&CobwebSequence::naturals(), v(1, 2), v(2, 2)).unwrap(), 0);
        assert_eq!(zeta_at(&fib, v(1, 3), v(2, 3)).unwrap(), 0);
        assert!(matches!(zeta_at(&fib, v(3, 3), v(1, 4)), Err(Error::InadmissibleVertex(_))));
    }

    #[test]
    fn mu_examples() {
        let fib = CobwebSequence::fibonacci();
        assert_eq!(mu_at(&fib, v(2, 4), v(2, 4)).unwrap(), BigInt::one());
        assert_eq!(mu_at(&fib, v(1, 3), v(3, 4)).unwrap(), BigInt::from(-1));
        // (-1)^2 (F_3 - 1)
        assert_eq!(mu_at(&fib, v(1, 2), v(1, 4)).unwrap(), BigInt::one());
        assert_eq!(mu_at(&fib, v(1, 3), v(2, 3)).unwrap(), BigInt::zero());
        assert_eq!(mu_at(&fib, v(1, 4), v(1, 2)).unwrap(), BigInt::zero());
        // (-1)^4 (F_4 - 1)(F_5 - 1)(F_6 - 1) = 2 * 4 * 7
        assert_eq!(mu_at(&fib, v(1, 3), v(1, 7)).unwrap(), BigInt::from(56));
        // (-1)^3 (F_4 - 1)(F_5 - 1)
        assert_eq!(mu_at(&fib, v(1, 3), v(1, 6)).unwrap(), BigInt::from(-8));
    }

    #[test]
    fn card_examples() {
        let fib = CobwebSequence::fibonacci();
        assert_eq!(card_interval(&fib, v(1, 1), v(1, 4)).unwrap(), nat(5));
        assert_eq!(card_interval(&fib, v(1, 4), v(1, 4)).unwrap(), nat(1));
        assert_eq!(card_interval(&fib, v(1, 4), v(5, 5)).unwrap(), nat(2));
        assert_eq!(card_interval(&fib, v(1, 4), v(2, 4)).unwrap(), nat(0));
    }

    #[test]
    fn eta_chi_examples() {
        let fib = CobwebSequence::fibonacci();
        assert_eq!(eta_at(&fib, v(1, 1), v(1, 2)).unwrap(), 1);
        assert_eq!(eta_at(&fib, v(1, 2), v(1, 2)).unwrap(), 0);
        assert_eq!(eta_at(&fib, v(1, 3), v(2, 3)).unwrap(), 0);
        assert_eq!(chi_at(&fib, v(1, 1), v(1, 2)).unwrap(), 1);
        assert_eq!(chi_at(&fib, v(1, 2), v(1, 2)).unwrap(), 0);
        assert_eq!(chi_at(&fib, v(1, 1), v(1, 3)).unwrap(), 0);
    }

    #[test]
    fn eta_pow_examples() {
        let fib = CobwebSequence::fibonacci();
        assert_eq!(eta_pow_at(&fib, 2, v(1, 1), v(1, 4)).unwrap(), nat(3));
        assert_eq!(eta_pow_at(&fib, 1, v(1, 1), v(1, 4)).unwrap(), nat(1));
        assert_eq!(eta_pow_at(&fib, 4, v(1, 1), v(1, 4)).unwrap(), nat(0));
        assert_eq!(eta_pow_at(&fib, 0, v(1, 1), v(1, 1)).unwrap(), nat(1));
        assert_eq!(eta_pow_at(&fib, 0, v(1, 1), v(1, 4)).unwrap(), nat(0));
        // three steps (1,1) -> (1,4): pick one vertex on level 2 and one on level 3
        assert_eq!(eta_pow_at(&fib, 3, v(1, 1), v(1, 4)).unwrap(), nat(2));
    }

    #[test]
    fn chi_pow_examples() {
        let fib = CobwebSequence::fibonacci();
        assert_eq!(chi_pow_at(&fib, 3, v(1, 1), v(2, 4)).unwrap(), nat(2));
        assert_eq!(chi_pow_at(&fib, 2, v(1, 1), v(1, 3)).unwrap(), nat(1));
        assert_eq!(chi_pow_at(&fib, 2, v(1, 1), v(1, 4)).unwrap(), nat(0));
        assert_eq!(chi_pow_at(&fib, 0, v(1, 1), v(1, 1)).unwrap(), nat(1));
    }

    #[test]
    fn chain_counts() {
        let fib = FinitePoset::build(CobwebSequence::fibonacci(), 4).unwrap();
        assert_eq!(count_all_chains(&fib, Vertex::ROOT, v(1, 2)).unwrap(), nat(2));
        assert_eq!(count_all_chains(&fib, v(2, 3), v(2, 3)).unwrap(), nat(1));
        assert_eq!(count_maximal_chains(&fib, Vertex::ROOT, v(1, 4)).unwrap(), nat(2));
        assert_eq!(count_maximal_chains(&fib, v(1, 4), v(1, 4)).unwrap(), nat(1));
        assert_eq!(count_maximal_chains(&fib, v(1, 3), v(2, 3)).unwrap(), nat(0));
        assert!(count_all_chains(&fib, Vertex::ROOT, v(1, 5)).is_err());

        let chain = FinitePoset::build(CobwebSequence::constant(1).unwrap(), 3).unwrap();
        assert_eq!(count_all_chains(&chain, Vertex::ROOT, v(1, 3)).unwrap(), nat(4));
    }

    #[test]
    fn all_chains_is_product_of_one_plus_widths() {
        // each interior level contributes no vertex or one of its F_i
        let p = FinitePoset::build(CobwebSequence::naturals(), 6).unwrap();
        let expected: u64 = (1..6).map(|i| 1 + i as u64).product();
        assert_eq!(count_all_chains(&p, Vertex::ROOT, v(3, 6)).unwrap(), nat(expected));
    }

    #[test]
    fn fibonacci_level_sum_telescopes() {
        let fib = CobwebSequence::fibonacci();
        for t in 0..=20 {
            for u in t + 1..=20 {
                let lhs = BigInt::from(level_sum(&fib, t, u).unwrap());
                let rhs = BigInt::from(fib.eval(u + 1).unwrap()) - BigInt::from(fib.eval(t + 2).unwrap());
                assert_eq!(lhs, rhs, "t={t} v={u}");
            }
        }
    }

    #[test]
    fn arbitrary_levels_without_a_poset() {
        let pow2 = CobwebSequence::pow2();
        // F_1 ... F_39 = 2^(1+...+39)
        let expected = BigUint::one() << (39 * 40 / 2);
        assert_eq!(chi_pow_at(&pow2, 40, Vertex::ROOT, v(1, 40)).unwrap(), expected);
    }

    #[test]
    fn mobius_inversion_examples() {
        let p = FinitePoset::build(CobwebSequence::fibonacci(), 3).unwrap();
        let ones: VertexFunction = p.vertices().map(|x| (x, int(1))).collect();
        let f = mobius_inversion(&p, &ones).unwrap();
        for (x, val) in &f {
            assert_eq!(*val, int(i64::from(*x == Vertex::ROOT)), "{x}");
        }

        let single = FinitePoset::build(CobwebSequence::fibonacci(), 0).unwrap();
        let g: VertexFunction = [(Vertex::ROOT, int(7))].into();
        assert_eq!(mobius_inversion(&single, &g).unwrap(), g);

        let mut partial = ones.clone();
        partial.remove(&v(2, 3));
        assert_eq!(mobius_inversion(&p, &partial).unwrap_err(), Error::MissingValue(v(2, 3)));
    }

    #[test]
    fn mobius_inversion_round_trip() {
        let p = FinitePoset::build(CobwebSequence::naturals(), 4).unwrap();
        let f: VertexFunction = p
            .vertices()
            .map(|x| (x, int((x.position * 7 + x.level * 3) as i64 % 11 - 5)))
            .collect();
        let g = down_sum(&p, &f).unwrap();
        assert_eq!(mobius_inversion(&p, &g).unwrap(), f);
    }

    #[test]
    fn named_function_names_round_trip() {
        for f in NamedFunction::ALL {
            assert_eq!(f.name().parse::<NamedFunction>().unwrap(), f);
        }
        assert!("zeta2".parse::<NamedFunction>().is_err());
    }
}
