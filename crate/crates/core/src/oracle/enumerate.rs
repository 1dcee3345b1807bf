//! Brute-force counting on the materialized order relation.
//!
//! Nothing here uses a closed form: every count is a dynamic program over the
//! vertex list of a [`FinitePoset`] driven only by [`leq`] and [`covers`].
//! Counting runs against a fixed target `y` and walks the linear extension
//! backwards, so each vertex's count is final before anything below it needs it.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::error::Result;
use crate::poset::{covers, leq, FinitePoset, Vertex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChainKind {
    /// Chains `x = z_0 < ... < z_k = y`.
    ChainsOfLength(usize),
    AllChains,
    /// Saturated chains, each step a cover.
    MaximalChains,
    /// Saturated chains with exactly `k` cover steps.
    MaximalChainsOfLength(usize),
    IntervalSize,
    MoebiusRecurrence,
}

#[derive(Debug, Clone, Copy)]
pub struct ChainQuery<'a> {
    pub poset: &'a FinitePoset,
    pub x: Vertex,
    pub y: Vertex,
    pub kind: ChainKind,
}

/// Answers a single query; see [`counts_to`] for every source at once.
/// Only [`ChainKind::MoebiusRecurrence`] can yield a negative value.
pub fn enumerate_chains(q: &ChainQuery<'_>) -> Result<BigInt> {
    let p = q.poset;
    p.check_member(q.y)?;
    match q.kind {
        ChainKind::MoebiusRecurrence => moebius_by_recurrence(p, q.x, q.y),
        kind => {
            let i = p.index_of(q.x)?;
            Ok(counts_to(p, q.y, kind)?.swap_remove(i).into())
        }
    }
}

/// `out[i]` is the count from the `i`-th vertex to `y`.
///
/// Panics on [`ChainKind::MoebiusRecurrence`], whose values are signed; use
/// [`moebius_row`] for those.
pub fn counts_to(p: &FinitePoset, y: Vertex, kind: ChainKind) -> Result<Vec<BigUint>> {
    let target = p.index_of(y)?;
    let vs: Vec<Vertex> = p.vertices().collect();
    let nu = vs.len();
    let zero = || vec![BigUint::zero(); nu];
    Ok(match kind {
        ChainKind::IntervalSize => vs
            .iter()
            .map(|&x| BigUint::from(vs.iter().filter(|&&z| leq(x, z) && leq(z, y)).count()))
            .collect(),
        ChainKind::AllChains => {
            let mut count = zero();
            count[target] = BigUint::one();
            for i in (0..target).rev() {
                count[i] = strictly_above(&vs, i, target)
                    .fold(BigUint::zero(), |acc, w| acc + &count[w]);
            }
            count
        }
        ChainKind::MaximalChains => {
            let mut count = zero();
            count[target] = BigUint::one();
            for i in (0..target).rev() {
                count[i] = strictly_above(&vs, i, target)
                    .filter(|&w| covers(vs[i], vs[w]))
                    .fold(BigUint::zero(), |acc, w| acc + &count[w]);
            }
            count
        }
        ChainKind::ChainsOfLength(k) => paths_of_length(&vs, target, k, |_, _| true),
        ChainKind::MaximalChainsOfLength(k) => paths_of_length(&vs, target, k, covers),
        ChainKind::MoebiusRecurrence => {
            panic!("Möbius values are signed; use moebius_row")
        }
    })
}

// Indices w with vs[i] < vs[w] <= vs[target].
fn strictly_above(vs: &[Vertex], i: usize, target: usize) -> impl Iterator<Item = usize> + '_ {
    let (x, y) = (vs[i], vs[target]);
    (i + 1..=target).filter(move |&w| leq(x, vs[w]) && leq(vs[w], y))
}

fn paths_of_length<F>(vs: &[Vertex], target: usize, k: usize, step: F) -> Vec<BigUint>
where
    F: Fn(Vertex, Vertex) -> bool,
{
    layers(vs, target, k, step).pop().expect("k + 1 layers")
}

// layers[k][i] = number of k-step chains from i to target
fn layers<F>(vs: &[Vertex], target: usize, k_max: usize, step: F) -> Vec<Vec<BigUint>>
where
    F: Fn(Vertex, Vertex) -> bool,
{
    let nu = vs.len();
    let mut first = vec![BigUint::zero(); nu];
    first[target] = BigUint::one();
    let mut out = vec![first];
    for k in 1..=k_max {
        let prev = &out[k - 1];
        let mut next = vec![BigUint::zero(); nu];
        for (i, slot) in next.iter_mut().enumerate().take(target) {
            *slot = strictly_above(vs, i, target)
                .filter(|&w| step(vs[i], vs[w]))
                .fold(BigUint::zero(), |acc, w| acc + &prev[w]);
        }
        out.push(next);
    }
    out
}

/// `out[k][i]` counts chains with exactly `k` steps from the `i`-th vertex
/// to `y`, for `k = 0..=k_max`. With `saturated`, every step must be a cover.
pub fn chain_counts_by_length(p: &FinitePoset, y: Vertex, k_max: usize, saturated: bool) -> Result<Vec<Vec<BigUint>>> {
    let target = p.index_of(y)?;
    let vs: Vec<Vertex> = p.vertices().collect();
    Ok(if saturated {
        layers(&vs, target, k_max, covers)
    } else {
        layers(&vs, target, k_max, |_, _| true)
    })
}

/// `mu(x, x) = 1`, `mu(x, y) = -sum_{x <= z < y} mu(x, z)`, evaluated over the
/// materialized interval.
pub fn moebius_by_recurrence(p: &FinitePoset, x: Vertex, y: Vertex) -> Result<BigInt> {
    let row = moebius_row(p, x)?;
    Ok(row[p.index_of(y)?].clone())
}

/// `mu(x, z)` for every `z`, indexed along the linear extension.
pub fn moebius_row(p: &FinitePoset, x: Vertex) -> Result<Vec<BigInt>> {
    let start = p.index_of(x)?;
    let vs: Vec<Vertex> = p.vertices().collect();
    let mut mu = vec![BigInt::zero(); vs.len()];
    mu[start] = BigInt::one();
    for j in start + 1..vs.len() {
        let z = vs[j];
        if !leq(x, z) {
            continue;
        }
        let below: BigInt = (start..j)
            .filter(|&w| leq(x, vs[w]) && leq(vs[w], z))
            .map(|w| &mu[w])
            .sum();
        mu[j] = -below;
    }
    Ok(mu)
}
