//! Cross-checks every closed form against the matrix algebra and the
//! brute-force counters, pair by pair.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::enumerate::{chain_counts_by_length, counts_to, moebius_row, ChainKind};
use crate::formulas::{self, NamedFunction};
use crate::incidence::{IncidenceFunction, Scalar};
use crate::poset::{covers, leq, FinitePoset, Vertex};

/// Failures kept per check; the rest are only counted.
const MAX_RECORDED: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyOptions {
    /// Posets with at most this many elements are checked on every pair.
    pub pairs_cap: usize,
    /// Seed for the pair sample used above the cap.
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            pairs_cap: 300,
            seed: 0x00c0_b3eb,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub x: Vertex,
    pub y: Vertex,
    pub expected: String,
    pub got: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub pairs_checked: usize,
    pub failure_count: usize,
    pub failures: Vec<Failure>,
}

impl CheckResult {
    fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            pairs_checked: 0,
            failure_count: 0,
            failures: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }

    fn fail(&mut self, x: Vertex, y: Vertex, expected: String, got: String) {
        self.failure_count += 1;
        if self.failures.len() < MAX_RECORDED {
            self.failures.push(Failure { x, y, expected, got });
        }
    }

    /// All routes must agree with the first one.
    fn agree(&mut self, x: Vertex, y: Vertex, routes: &[(&str, Scalar)]) {
        self.pairs_checked += 1;
        let (ref_name, reference) = &routes[0];
        if let Some((name, value)) = routes[1..].iter().find(|(_, v)| v != reference) {
            self.fail(x, y, format!("{ref_name}={reference}"), format!("{name}={value}"));
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub sequence: String,
    pub depth: usize,
    pub nu: usize,
    pub exhaustive: bool,
    pub checks: Vec<CheckResult>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed())
    }

    /// One `PASS`/`FAIL` line per check.
    pub fn to_pretty(&self) -> String {
        let mut out = format!(
            "verify {} P_{} (nu = {}, {})\n",
            self.sequence,
            self.depth,
            self.nu,
            if self.exhaustive { "all pairs" } else { "sampled pairs" }
        );
        for c in &self.checks {
            let status = if c.passed() { "PASS" } else { "FAIL" };
            out.push_str(&format!("{status} {} ({} pairs)", c.name, c.pairs_checked));
            if let Some(f) = c.failures.first() {
                out.push_str(&format!(
                    " first counterexample x={} y={} expected {} got {}",
                    f.x, f.y, f.expected, f.got
                ));
            }
            out.push('\n');
        }
        out
    }
}

fn nat(v: BigUint) -> Scalar {
    Scalar::from_integer(v.into())
}

fn integer(v: BigInt) -> Scalar {
    Scalar::from_integer(v)
}

fn pairs_for(p: &FinitePoset, opts: &VerifyOptions) -> (bool, Vec<(usize, usize)>) {
    let nu = p.nu();
    if nu <= opts.pairs_cap {
        return (true, (0..nu).flat_map(|i| (0..nu).map(move |j| (i, j))).collect());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let samples = opts.pairs_cap.max(1) * 16;
    let mut pairs: Vec<(usize, usize)> = (0..samples).map(|_| (rng.gen_range(0..nu), rng.gen_range(0..nu))).collect();
    pairs.sort_unstable();
    pairs.dedup();
    (false, pairs)
}

/// Matrices shared by all checks.
struct Tables {
    delta: IncidenceFunction,
    mu_closed: IncidenceFunction,
    zeta_mu: IncidenceFunction,
    mu_zeta: IncidenceFunction,
    zeta_sq: IncidenceFunction,
    eta_powers: Vec<IncidenceFunction>,
    chi_powers: Vec<IncidenceFunction>,
    all_chains_inv: IncidenceFunction,
    all_chains_series: IncidenceFunction,
    maximal_inv: IncidenceFunction,
    maximal_series: IncidenceFunction,
    named: Vec<(NamedFunction, IncidenceFunction)>,
}

impl Tables {
    fn new(p: &Arc<FinitePoset>) -> Self {
        let n = p.depth();
        let delta = IncidenceFunction::delta(p);
        let zeta = IncidenceFunction::zeta(p);
        let eta = IncidenceFunction::eta(p);
        let chi = IncidenceFunction::chi(p);
        let mu_closed = NamedFunction::Mu.tabulate(p).expect("members are admissible");
        let named = NamedFunction::ALL
            .into_iter()
            .map(|f| (f, f.matrix(p).expect("unit diagonals are invertible")))
            .collect();
        Self {
            zeta_mu: zeta.convolve(&mu_closed).expect("same poset"),
            mu_zeta: mu_closed.convolve(&zeta).expect("same poset"),
            zeta_sq: zeta.convolve(&zeta).expect("same poset"),
            eta_powers: eta.powers(n),
            chi_powers: chi.powers(n),
            all_chains_inv: IncidenceFunction::chain_kernel(p).invert().expect("unit diagonal"),
            all_chains_series: eta.geometric_inverse_of_delta_minus().expect("zero diagonal"),
            maximal_inv: IncidenceFunction::maximal_chain_kernel(p).invert().expect("unit diagonal"),
            maximal_series: chi.geometric_inverse_of_delta_minus().expect("zero diagonal"),
            delta,
            mu_closed,
            named,
        }
    }

    fn all(&self) -> Vec<(&'static str, &IncidenceFunction)> {
        let mut out = vec![
            ("zeta*mu", &self.zeta_mu),
            ("mu*zeta", &self.mu_zeta),
            ("zeta^2", &self.zeta_sq),
            ("C^-1", &self.all_chains_inv),
            ("eta-series", &self.all_chains_series),
            ("M^-1", &self.maximal_inv),
            ("chi-series", &self.maximal_series),
            ("mu", &self.mu_closed),
        ];
        out.extend(self.eta_powers.iter().map(|f| ("eta^k", f)));
        out.extend(self.chi_powers.iter().map(|f| ("chi^k", f)));
        out.extend(self.named.iter().map(|(n, f)| (n.name(), f)));
        out
    }
}

/// Oracle tables, computed once per target (counts) or source (Möbius).
struct Oracle<'a> {
    p: &'a FinitePoset,
    by_target: HashMap<usize, TargetCounts>,
    moebius: HashMap<usize, Vec<BigInt>>,
}

struct TargetCounts {
    interval: Vec<BigUint>,
    all: Vec<BigUint>,
    maximal: Vec<BigUint>,
    by_length: Vec<Vec<BigUint>>,
    maximal_by_length: Vec<Vec<BigUint>>,
}

impl<'a> Oracle<'a> {
    fn new(p: &'a FinitePoset) -> Self {
        Self {
            p,
            by_target: HashMap::new(),
            moebius: HashMap::new(),
        }
    }

    fn target(&mut self, j: usize) -> &TargetCounts {
        let p = self.p;
        self.by_target.entry(j).or_insert_with(|| {
            let y = p.vertex_at(j);
            let n = p.depth();
            TargetCounts {
                interval: counts_to(p, y, ChainKind::IntervalSize).expect("member"),
                all: counts_to(p, y, ChainKind::AllChains).expect("member"),
                maximal: counts_to(p, y, ChainKind::MaximalChains).expect("member"),
                by_length: chain_counts_by_length(p, y, n, false).expect("member"),
                maximal_by_length: chain_counts_by_length(p, y, n, true).expect("member"),
            }
        })
    }

    fn moebius(&mut self, i: usize) -> &[BigInt] {
        let p = self.p;
        self.moebius
            .entry(i)
            .or_insert_with(|| moebius_row(p, p.vertex_at(i)).expect("member"))
    }
}

/// Runs every cross-check over the pairs of `p` (all of them when
/// `nu <= opts.pairs_cap`, otherwise a seeded sample). Failures are data.
pub fn verify_suite(p: &Arc<FinitePoset>, opts: &VerifyOptions) -> VerificationReport {
    let seq = p.sequence();
    let n = p.depth();
    let (exhaustive, pairs) = pairs_for(p, opts);
    let tables = Tables::new(p);
    let mut oracle = Oracle::new(p);
    let vertices: Vec<Vertex> = p.vertices().collect();

    let mut order = CheckResult::new("order_axioms");
    let mut inverse_law = CheckResult::new("zeta_mu_convolution");
    let mut mu_recurrence = CheckResult::new("mu_closed_vs_recurrence");
    let mut pointwise: Vec<CheckResult> = NamedFunction::ALL
        .iter()
        .map(|f| CheckResult::new(format!("pointwise_vs_matrix/{f}")))
        .collect();
    let mut interval = CheckResult::new("interval_size");
    let mut eta_pow: Vec<CheckResult> = (0..=n).map(|k| CheckResult::new(format!("eta_pow/k={k}"))).collect();
    let mut chi_pow: Vec<CheckResult> = (0..=n).map(|k| CheckResult::new(format!("chi_pow/k={k}"))).collect();
    let mut all_chains = CheckResult::new("all_chains");
    let mut maximal_chains = CheckResult::new("maximal_chains");
    let mut eta_squared = CheckResult::new("eta_squared_identity");
    let mut support = CheckResult::new("support_closure");
    let all_tables = tables.all();

    for &(i, j) in &pairs {
        let (x, y) = (vertices[i], vertices[j]);

        order.pairs_checked += 1;
        if let Some(broken) = order_violation(p, &vertices, x, y) {
            order.fail(x, y, "order axioms hold".into(), broken);
        }

        inverse_law.agree(
            x,
            y,
            &[
                ("delta", tables.delta.entry(i, j).clone()),
                ("zeta*mu", tables.zeta_mu.entry(i, j).clone()),
                ("mu*zeta", tables.mu_zeta.entry(i, j).clone()),
            ],
        );

        mu_recurrence.agree(
            x,
            y,
            &[
                ("closed", integer(formulas::mu_at(seq, x, y).expect("member"))),
                ("recurrence", integer(oracle.moebius(i)[j].clone())),
            ],
        );

        for (check, (f, matrix)) in pointwise.iter_mut().zip(&tables.named) {
            check.agree(
                x,
                y,
                &[
                    ("closed", integer(f.closed_form(p, x, y).expect("member"))),
                    ("matrix", matrix.entry(i, j).clone()),
                ],
            );
        }

        let card = formulas::card_interval(seq, x, y).expect("member");
        let counts = oracle.target(j);
        interval.agree(
            x,
            y,
            &[
                ("closed", nat(card.clone())),
                ("zeta^2", tables.zeta_sq.entry(i, j).clone()),
                ("enumerated", nat(counts.interval[i].clone())),
                ("materialized", nat(BigUint::from(p.interval(x, y).expect("member").len()))),
            ],
        );

        for k in 0..=n {
            eta_pow[k].agree(
                x,
                y,
                &[
                    ("closed", nat(formulas::eta_pow_at(seq, k, x, y).expect("member"))),
                    ("matrix", tables.eta_powers[k].entry(i, j).clone()),
                    ("enumerated", nat(counts.by_length[k][i].clone())),
                ],
            );
            chi_pow[k].agree(
                x,
                y,
                &[
                    ("closed", nat(formulas::chi_pow_at(seq, k, x, y).expect("member"))),
                    ("matrix", tables.chi_powers[k].entry(i, j).clone()),
                    ("enumerated", nat(counts.maximal_by_length[k][i].clone())),
                ],
            );
        }

        let eta_sum: Scalar = (0..=n).map(|k| tables.eta_powers[k].entry(i, j).clone()).sum();
        all_chains.agree(
            x,
            y,
            &[
                ("closed", nat(formulas::count_all_chains(p, x, y).expect("member"))),
                ("C^-1", tables.all_chains_inv.entry(i, j).clone()),
                ("eta-series", tables.all_chains_series.entry(i, j).clone()),
                ("sum eta^k", eta_sum),
                ("enumerated", nat(counts.all[i].clone())),
            ],
        );
        maximal_chains.agree(
            x,
            y,
            &[
                ("closed", nat(formulas::count_maximal_chains(p, x, y).expect("member"))),
                ("M^-1", tables.maximal_inv.entry(i, j).clone()),
                ("chi-series", tables.maximal_series.entry(i, j).clone()),
                ("enumerated", nat(counts.maximal[i].clone())),
            ],
        );

        let clamped = (BigInt::from(card) - BigInt::from(2)).max(BigInt::zero());
        eta_squared.agree(
            x,
            y,
            &[
                ("card-2", integer(clamped)),
                ("eta^2", nat(formulas::eta_pow_at(seq, 2, x, y).expect("member"))),
            ],
        );

        if !leq(x, y) {
            support.pairs_checked += 1;
            if let Some((name, value)) = all_tables.iter().map(|(n, f)| (n, f.entry(i, j))).find(|(_, v)| !v.is_zero()) {
                support.fail(x, y, "0".into(), format!("{name}={value}"));
            }
        }
    }

    let mut checks = vec![order, inverse_law, mu_recurrence];
    checks.extend(pointwise);
    checks.push(interval);
    checks.extend(eta_pow);
    checks.extend(chi_pow);
    checks.extend([all_chains, maximal_chains, eta_squared, support]);

    VerificationReport {
        sequence: seq.to_string(),
        depth: n,
        nu: p.nu(),
        exhaustive,
        checks,
    }
}

fn order_violation(p: &FinitePoset, vertices: &[Vertex], x: Vertex, y: Vertex) -> Option<String> {
    if !leq(x, x) {
        return Some("reflexivity".into());
    }
    if x != y && leq(x, y) && leq(y, x) {
        return Some("antisymmetry".into());
    }
    if leq(x, y) {
        if p.index_of(x).ok()? > p.index_of(y).ok()? {
            return Some("linear extension".into());
        }
        if let Some(z) = vertices.iter().find(|&&z| leq(y, z) && !leq(x, z)) {
            return Some(format!("transitivity via {z}"));
        }
    }
    let size = p.interval(x, y).ok()?.len();
    if covers(x, y) != (size == 2) {
        return Some(format!("covers vs |[x,y]| = {size}"));
    }
    None
}
