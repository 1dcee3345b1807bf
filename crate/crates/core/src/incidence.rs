//! The incidence algebra `I(P_n)` as upper-triangular matrices.
//!
//! An [`IncidenceFunction`] stores a dense `nu x nu` array of exact rationals
//! indexed along the poset's linear extension. Entry `(i, j)` is zero unless
//! `x_i <= x_j`; every constructor and operation preserves that.

use std::fmt::Write as _;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::poset::{covers, leq, FinitePoset, Vertex};

pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

#[derive(Debug, Clone)]
pub struct IncidenceFunction {
    poset: Arc<FinitePoset>,
    nu: usize,
    entries: Vec<Scalar>,
}

impl PartialEq for IncidenceFunction {
    fn eq(&self, other: &Self) -> bool {
        self.poset.same_as(&other.poset) && self.entries == other.entries
    }
}

impl Eq for IncidenceFunction {}

impl IncidenceFunction {
    /// Tabulates `f` on every comparable pair; incomparable pairs stay zero.
    pub fn from_fn<F>(poset: &Arc<FinitePoset>, mut f: F) -> Self
    where
        F: FnMut(Vertex, Vertex) -> Scalar,
    {
        let nu = poset.nu();
        let mut entries = vec![Scalar::zero(); nu * nu];
        let vertices: Vec<Vertex> = poset.vertices().collect();
        for (i, &x) in vertices.iter().enumerate() {
            for (j, &y) in vertices.iter().enumerate().skip(i) {
                if leq(x, y) {
                    entries[i * nu + j] = f(x, y);
                }
            }
        }
        Self {
            poset: poset.clone(),
            nu,
            entries,
        }
    }

    /// Like [`from_fn`](Self::from_fn) for fallible evaluators.
    pub fn try_from_fn<F>(poset: &Arc<FinitePoset>, mut f: F) -> Result<Self>
    where
        F: FnMut(Vertex, Vertex) -> Result<Scalar>,
    {
        let mut first_err = None;
        let out = Self::from_fn(poset, |x, y| match f(x, y) {
            Ok(v) => v,
            Err(e) => {
                first_err.get_or_insert(e);
                Scalar::zero()
            }
        });
        match first_err {
            Some(e) => Err(e),
            None => Ok(out),
        }
    }

    /// Wraps a dense row-major array, rejecting entries outside the order.
    pub fn from_matrix(poset: &Arc<FinitePoset>, matrix: &DenseMatrix) -> Result<Self> {
        let nu = poset.nu();
        if matrix.nu != nu || matrix.rows.len() != nu || matrix.rows.iter().any(|r| r.len() != nu) {
            return Err(Error::MalformedMatrix(format!(
                "expected {nu}x{nu} for {}, got {} rows",
                poset.label(),
                matrix.rows.len()
            )));
        }
        let mut entries = Vec::with_capacity(nu * nu);
        for (i, row) in matrix.rows.iter().enumerate() {
            let x = poset.vertex_at(i);
            for (j, v) in row.iter().enumerate() {
                if !v.is_zero() && !leq(x, poset.vertex_at(j)) {
                    return Err(Error::SupportViolation { row: i, col: j });
                }
                entries.push(v.clone());
            }
        }
        Ok(Self {
            poset: poset.clone(),
            nu,
            entries,
        })
    }

    pub fn zero(poset: &Arc<FinitePoset>) -> Self {
        Self::from_fn(poset, |_, _| Scalar::zero())
    }

    /// Kronecker delta, the identity of the algebra.
    pub fn delta(poset: &Arc<FinitePoset>) -> Self {
        Self::from_fn(poset, |x, y| indicator(x == y))
    }

    /// Characteristic function of `<=`.
    pub fn zeta(poset: &Arc<FinitePoset>) -> Self {
        Self::from_fn(poset, |_, _| Scalar::one())
    }

    /// `zeta - delta`, the strict order.
    pub fn eta(poset: &Arc<FinitePoset>) -> Self {
        Self::from_fn(poset, |x, y| indicator(x != y))
    }

    /// Cover relation indicator.
    pub fn chi(poset: &Arc<FinitePoset>) -> Self {
        Self::from_fn(poset, |x, y| indicator(covers(x, y)))
    }

    /// `2 delta - zeta`; its inverse counts all chains.
    pub fn chain_kernel(poset: &Arc<FinitePoset>) -> Self {
        Self::from_fn(poset, |x, y| if x == y { int(1) } else { int(-1) })
    }

    /// `delta - chi`; its inverse counts maximal chains.
    pub fn maximal_chain_kernel(poset: &Arc<FinitePoset>) -> Self {
        Self::from_fn(poset, |x, y| {
            if x == y {
                int(1)
            } else if covers(x, y) {
                int(-1)
            } else {
                Scalar::zero()
            }
        })
    }

    pub fn poset(&self) -> &Arc<FinitePoset> {
        &self.poset
    }

    pub fn nu(&self) -> usize {
        self.nu
    }

    pub fn entry(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.nu + j]
    }

    pub fn get(&self, x: Vertex, y: Vertex) -> Result<&Scalar> {
        let i = self.poset.index_of(x)?;
        let j = self.poset.index_of(y)?;
        Ok(self.entry(i, j))
    }

    fn row(&self, i: usize) -> &[Scalar] {
        &self.entries[i * self.nu..(i + 1) * self.nu]
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.poset.same_as(&other.poset) {
            Ok(())
        } else {
            Err(Error::PosetMismatch {
                left: self.poset.label(),
                right: other.poset.label(),
            })
        }
    }

    fn with_entries(&self, entries: Vec<Scalar>) -> Self {
        Self {
            poset: self.poset.clone(),
            nu: self.nu,
            entries,
        }
    }

    pub fn is_integral(&self) -> bool {
        self.entries.iter().all(|v| v.is_integer())
    }

    /// True when every nonzero entry sits on a comparable pair.
    pub fn respects_support(&self) -> bool {
        (0..self.nu).all(|i| {
            let x = self.poset.vertex_at(i);
            (0..self.nu).all(|j| self.entry(i, j).is_zero() || leq(x, self.poset.vertex_at(j)))
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.with_entries(self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect()))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.with_entries(self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect()))
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        self.with_entries(self.entries.iter().map(|a| a * c).collect())
    }

    /// `(f * g)(x, y) = sum over x <= z <= y of f(x, z) g(z, y)`.
    pub fn convolve(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let nu = self.nu;
        // Upper-triangular row accumulation: f(i,k) != 0 forces i <= k and
        // g(k,j) != 0 forces k <= j, so the support is closed automatically.
        if self.is_integral() && other.is_integral() {
            let f: Vec<BigInt> = self.entries.iter().map(|v| v.to_integer()).collect();
            let g: Vec<BigInt> = other.entries.iter().map(|v| v.to_integer()).collect();
            let mut h = vec![BigInt::zero(); nu * nu];
            for i in 0..nu {
                for k in i..nu {
                    let a = &f[i * nu + k];
                    if a.is_zero() {
                        continue;
                    }
                    for j in k..nu {
                        let b = &g[k * nu + j];
                        if !b.is_zero() {
                            h[i * nu + j] += a * b;
                        }
                    }
                }
            }
            return Ok(self.with_entries(h.into_iter().map(Scalar::from_integer).collect()));
        }
        let mut h = vec![Scalar::zero(); nu * nu];
        for i in 0..nu {
            for k in i..nu {
                let a = self.entry(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in k..nu {
                    let b = other.entry(k, j);
                    if !b.is_zero() {
                        h[i * nu + j] += a * b;
                    }
                }
            }
        }
        Ok(self.with_entries(h))
    }

    /// `k`-fold convolution by repeated multiplication; `power(0)` is delta.
    pub fn power(&self, k: usize) -> Self {
        let mut acc = Self::delta(&self.poset);
        for _ in 0..k {
            acc = acc.convolve(self).expect("same poset");
        }
        acc
    }

    /// Every power `f^0 ..= f^k_max`, sharing the work of the iteration.
    pub fn powers(&self, k_max: usize) -> Vec<Self> {
        let mut out = Vec::with_capacity(k_max + 1);
        out.push(Self::delta(&self.poset));
        for k in 1..=k_max {
            let next = out[k - 1].convolve(self).expect("same poset");
            out.push(next);
        }
        out
    }

    /// Power by repeated squaring; same result as [`power`](Self::power).
    pub fn power_by_squaring(&self, mut k: usize) -> Self {
        let mut acc = Self::delta(&self.poset);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.convolve(&base).expect("same poset");
            }
            k >>= 1;
            if k > 0 {
                base = base.convolve(&base).expect("same poset");
            }
        }
        acc
    }

    /// Convolution inverse via the triangular recurrence
    /// `g(x,x) = 1/f(x,x)`, `g(x,y) = -(1/f(x,x)) sum_{x<z<=y} f(x,z) g(z,y)`.
    pub fn invert(&self) -> Result<Self> {
        let nu = self.nu;
        if let Some(i) = (0..nu).find(|&i| self.entry(i, i).is_zero()) {
            return Err(Error::NotInvertible(self.poset.vertex_at(i)));
        }
        let mut g = vec![Scalar::zero(); nu * nu];
        for i in (0..nu).rev() {
            let inv_diag = self.entry(i, i).recip();
            let row = self.row(i);
            for j in i..nu {
                if j == i {
                    g[i * nu + i] = inv_diag.clone();
                    continue;
                }
                let mut acc = Scalar::zero();
                for (z, fz) in row.iter().enumerate().take(j + 1).skip(i + 1) {
                    if fz.is_zero() {
                        continue;
                    }
                    let gz = &g[z * nu + j];
                    if !gz.is_zero() {
                        acc += fz * gz;
                    }
                }
                if !acc.is_zero() {
                    g[i * nu + j] = -(&inv_diag * acc);
                }
            }
        }
        Ok(self.with_entries(g))
    }

    /// `delta / (delta - f) = delta + f + f^2 + ...` for `f` with zero
    /// diagonal. The series stops at `f^depth`, since a chain in `P_n` has
    /// at most `n + 1` elements.
    pub fn geometric_inverse_of_delta_minus(&self) -> Result<Self> {
        if let Some(i) = (0..self.nu).find(|&i| !self.entry(i, i).is_zero()) {
            return Err(Error::NonzeroDiagonal(self.poset.vertex_at(i)));
        }
        let mut term = Self::delta(&self.poset);
        let mut sum = term.clone();
        for _ in 0..self.poset.depth() {
            term = term.convolve(self)?;
            sum = sum.add(&term)?;
        }
        Ok(sum)
    }

    /// Product of the diagonal, which is the determinant of the triangular matrix.
    pub fn determinant(&self) -> Scalar {
        (0..self.nu).map(|i| self.entry(i, i).clone()).product()
    }

    pub fn to_matrix(&self) -> DenseMatrix {
        DenseMatrix {
            nu: self.nu,
            rows: self.entries.chunks(self.nu.max(1)).take(self.nu).map(<[Scalar]>::to_vec).collect(),
        }
    }
}

fn indicator(b: bool) -> Scalar {
    if b {
        Scalar::one()
    } else {
        Scalar::zero()
    }
}

/// Row-major dump of an incidence function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseMatrix {
    pub nu: usize,
    pub rows: Vec<Vec<Scalar>>,
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    nu: usize,
    rows: Vec<Vec<Value>>,
}

impl DenseMatrix {
    /// One row per line, entries as integers or `p/q`.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(ToString::to_string).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let rows = text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(|line| line.split(',').map(parse_scalar).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(rows)
    }

    /// `{ "nu": ν, "rows": [[...], ...] }`; integers that fit in 64 bits are
    /// JSON numbers, everything else a string.
    pub fn to_json(&self) -> Value {
        let rows = self
            .rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|v| match v.is_integer().then(|| v.to_integer().to_i64()).flatten() {
                        Some(n) => Value::from(n),
                        None => Value::from(v.to_string()),
                    })
                    .collect()
            })
            .collect();
        serde_json::to_value(MatrixJson { nu: self.nu, rows }).expect("serializable")
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let parsed: MatrixJson = serde_json::from_value(value.clone())
            .map_err(|e| Error::MalformedMatrix(e.to_string()))?;
        let rows = parsed
            .rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|v| match v {
                        Value::Number(n) => parse_scalar(&n.to_string()),
                        Value::String(s) => parse_scalar(s),
                        other => Err(Error::MalformedMatrix(format!("unexpected entry {other}"))),
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let m = Self::from_rows(rows)?;
        if m.nu != parsed.nu {
            return Err(Error::MalformedMatrix(format!(
                "declared nu = {} but found {} rows",
                parsed.nu, m.nu
            )));
        }
        Ok(m)
    }

    /// Space-separated, right-aligned columns.
    pub fn to_pretty(&self) -> String {
        let cells: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(ToString::to_string).collect())
            .collect();
        let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
        let mut out = String::new();
        for row in &cells {
            for (j, cell) in row.iter().enumerate() {
                if j > 0 {
                    out.push(' ');
                }
                let _ = write!(out, "{cell:>width$}");
            }
            out.push('\n');
        }
        out
    }

    fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let nu = rows.len();
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != nu) {
            return Err(Error::MalformedMatrix(format!(
                "row {i} has {} entries, expected {nu}",
                r.len()
            )));
        }
        Ok(Self { nu, rows })
    }
}

fn parse_scalar(s: &str) -> Result<Scalar> {
    let s = s.trim();
    let parsed = match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad_scalar(s))?;
            let q: BigInt = q.trim().parse().map_err(|_| bad_scalar(s))?;
            if q.is_zero() {
                return Err(bad_scalar(s));
            }
            Scalar::new(p, q)
        }
        None => Scalar::from_integer(s.parse().map_err(|_| bad_scalar(s))?),
    };
    Ok(parsed)
}

fn bad_scalar(s: &str) -> Error {
    Error::MalformedMatrix(format!("`{s}` is not an integer or p/q rational"))
}
