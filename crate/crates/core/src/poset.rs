//! Finite cobweb posets `P_n`.
//!
//! Vertices are written `(position, level)` throughout: level `s` holds the
//! positions `1..=F_s`, with a single root `(1, 0)` at level 0 even when
//! `F_0 = 0`. The order is purely by level: `x <= y` iff `x` sits on a lower
//! level than `y`, or `x == y`. Consecutive levels are joined by a complete
//! bipartite digraph, so the Hasse diagram is a chain of di-bicliques.
//!
//! The Fibonacci case describes level 0 as an "empty root"; this crate still
//! treats it as a real element, which is what makes `P_6` have 21 elements
//! and gives the edge `((1,0), (1,1))`.

use std::fmt;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sequence::CobwebSequence;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Vertex {
    pub position: usize,
    pub level: usize,
}

impl Vertex {
    pub const ROOT: Vertex = Vertex {
        position: 1,
        level: 0,
    };

    pub const fn new(position: usize, level: usize) -> Self {
        Self { position, level }
    }

    /// Checks `1 <= position <= F_level` against `seq` (one root at level 0).
    pub fn check_admissible(&self, seq: &CobwebSequence) -> Result<()> {
        if self.position == 0 {
            return Err(Error::InadmissibleVertex(*self));
        }
        let width = seq.level_width(self.level)?;
        if num_bigint::BigUint::from(self.position) > width {
            return Err(Error::InadmissibleVertex(*self));
        }
        Ok(())
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{},{}>", self.position, self.level)
    }
}

/// `x <= y`: strictly lower level, or the same vertex.
pub fn leq(x: Vertex, y: Vertex) -> bool {
    x.level < y.level || x == y
}

/// `y` covers `x` iff it sits exactly one level higher.
pub fn covers(x: Vertex, y: Vertex) -> bool {
    y.level == x.level + 1
}

pub fn rank(x: Vertex) -> usize {
    x.level
}

/// A materialized `P_n`, vertices indexed along the linear extension
/// (level, then position).
#[derive(Debug, Clone)]
pub struct FinitePoset {
    seq: CobwebSequence,
    depth: usize,
    widths: Vec<usize>,
    // offsets[s] = linear index of (1, s); offsets[depth + 1] = nu
    offsets: Vec<usize>,
}

impl FinitePoset {
    pub fn build(seq: CobwebSequence, depth: usize) -> Result<Self> {
        let mut widths = Vec::with_capacity(depth + 1);
        let mut offsets = Vec::with_capacity(depth + 2);
        let mut total = 0usize;
        for level in 0..=depth {
            let width = seq.level_width(level)?;
            let w = width.to_usize().ok_or_else(|| Error::LevelTooWide {
                level,
                width: width.to_string(),
            })?;
            offsets.push(total);
            total = total.checked_add(w).ok_or_else(|| Error::LevelTooWide {
                level,
                width: width.to_string(),
            })?;
            widths.push(w);
        }
        offsets.push(total);
        Ok(Self {
            seq,
            depth,
            widths,
            offsets,
        })
    }

    pub fn sequence(&self) -> &CobwebSequence {
        &self.seq
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Number of elements, `1 + F_1 + ... + F_n`.
    pub fn nu(&self) -> usize {
        self.offsets[self.depth + 1]
    }

    pub fn width(&self, level: usize) -> usize {
        self.widths.get(level).copied().unwrap_or(0)
    }

    pub fn widths(&self) -> &[usize] {
        &self.widths
    }

    /// Same sequence and depth.
    pub fn same_as(&self, other: &FinitePoset) -> bool {
        std::ptr::eq(self, other) || (self.depth == other.depth && self.seq == other.seq)
    }

    /// Short label such as `fibonacci/P_6`.
    pub fn label(&self) -> String {
        format!("{}/P_{}", self.seq, self.depth)
    }

    pub fn contains(&self, v: Vertex) -> bool {
        v.level <= self.depth && v.position >= 1 && v.position <= self.widths[v.level]
    }

    pub fn check_member(&self, v: Vertex) -> Result<()> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(Error::VertexNotInPoset {
                vertex: v,
                depth: self.depth,
            })
        }
    }

    pub fn index_of(&self, v: Vertex) -> Result<usize> {
        self.check_member(v)?;
        Ok(self.offsets[v.level] + v.position - 1)
    }

    /// Inverse of [`index_of`](Self::index_of). Panics when `index >= nu`.
    pub fn vertex_at(&self, index: usize) -> Vertex {
        assert!(index < self.nu(), "index {index} out of range for nu = {}", self.nu());
        let level = self.offsets.partition_point(|&o| o <= index) - 1;
        Vertex::new(index - self.offsets[level] + 1, level)
    }

    /// Vertices in linear-extension order.
    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.widths
            .iter()
            .enumerate()
            .flat_map(|(level, &w)| (1..=w).map(move |position| Vertex::new(position, level)))
    }

    pub fn level(&self, level: usize) -> Vec<Vertex> {
        (1..=self.width(level)).map(|p| Vertex::new(p, level)).collect()
    }

    pub fn levels(&self) -> Vec<Vec<Vertex>> {
        (0..=self.depth).map(|s| self.level(s)).collect()
    }

    /// Linear index range of a level.
    pub fn level_range(&self, level: usize) -> std::ops::Range<usize> {
        self.offsets[level]..self.offsets[level + 1]
    }

    /// The Hasse digraph: every vertex of level `s` to every vertex of level `s + 1`.
    pub fn hasse_edges(&self) -> Vec<(Vertex, Vertex)> {
        let mut edges = Vec::with_capacity(self.edge_count());
        for s in 0..self.depth {
            for lower in self.level(s) {
                for upper in self.level(s + 1) {
                    edges.push((lower, upper));
                }
            }
        }
        edges
    }

    pub fn edge_count(&self) -> usize {
        self.widths.windows(2).map(|w| w[0] * w[1]).sum()
    }

    /// The segment `[x, y]` in linear-extension order; empty unless `x <= y`.
    pub fn interval(&self, x: Vertex, y: Vertex) -> Result<Vec<Vertex>> {
        self.check_member(x)?;
        self.check_member(y)?;
        if !leq(x, y) {
            return Ok(Vec::new());
        }
        if x == y {
            return Ok(vec![x]);
        }
        let mut out = vec![x];
        for level in x.level + 1..y.level {
            out.extend(self.level(level));
        }
        out.push(y);
        Ok(out)
    }

    pub fn dump(&self) -> PosetDump {
        PosetDump {
            sequence: self.seq.to_string(),
            depth: self.depth,
            nu: self.nu(),
            levels: self.widths.iter().enumerate().map(|(s, &w)| [s, w]).collect(),
            edges: self
                .hasse_edges()
                .into_iter()
                .map(|(a, b)| [[a.position, a.level], [b.position, b.level]])
                .collect(),
        }
    }
}

/// JSON shape of `cobweb build`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetDump {
    pub sequence: String,
    pub depth: usize,
    pub nu: usize,
    /// `[level, vertex count]` per level.
    pub levels: Vec<[usize; 2]>,
    /// `[[j, s], [q, s + 1]]` per Hasse edge.
    pub edges: Vec<[[usize; 2]; 2]>,
}
