//! The flip bit at every tree node is a GF(2)-linear function of the
//! scrambling vector bits: node `(level, prefix)` flips iff the XOR over
//! its ancestors at levels `j <= level` of bit `level - j` of the
//! ancestor symbol's vector is one. This module materializes that linear
//! map as an explicit bit matrix, one row per node, and solves it for
//! target trees.
//!
//! Unknowns are the individual vector bits. Column `t * N + s` holds bit
//! `t` of symbol `s`'s vector (bit 0 is the most significant: the flip a
//! symbol applies at its own node; higher `t` acts `t` levels below).
//! Rows are level-major, prefixes ascending within a level, so row
//! `2^level - 1 + prefix` is node `(level, prefix)`.

use crate::error::{Error, Result};
use crate::grammar::Grammar;
use crate::pgm;
use crate::scramble::ScrambleData;
use crate::tree::ExplicitTree;

/// Largest supported system depth; rows grow as `2^depth - 1`.
pub const MAX_GF2_DEPTH: u32 = 16;

/// The bit matrix mapping vector bits to tree flip bits.
#[derive(Debug, Clone)]
pub struct Gf2System {
    symbols: usize,
    depth: u32,
    rows: Vec<Vec<u64>>,
    labels: Vec<(u32, u64)>,
}

/// Structural statistics of a [`Gf2System`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UtilizationReport {
    pub n_rows: usize,
    pub n_cols: usize,
    pub rank: usize,
    /// Dots per column, column-indexed.
    pub column_dots: Vec<usize>,
    /// Labels of rows with no dots at all (none for well-formed grammars).
    pub zero_rows: Vec<(u32, u64)>,
}

fn first_set(row: &[u64]) -> Option<usize> {
    row.iter()
        .enumerate()
        .find_map(|(w, &word)| (word != 0).then(|| w * 64 + word.trailing_zeros() as usize))
}

enum Insert {
    Added,
    Zeroed { rhs: u32 },
}

/// Online GF(2) elimination; pivot of a row is its lowest set column.
struct Eliminator {
    by_pivot: Vec<Option<usize>>,
    rows: Vec<(usize, Vec<u64>, u32)>,
}

impl Eliminator {
    fn new(cols: usize) -> Self {
        Eliminator {
            by_pivot: vec![None; cols],
            rows: Vec::new(),
        }
    }

    fn insert(&mut self, mut row: Vec<u64>, mut rhs: u32) -> Insert {
        loop {
            let Some(lead) = first_set(&row) else {
                return Insert::Zeroed { rhs };
            };
            match self.by_pivot[lead] {
                Some(i) => {
                    let (_, ref basis, basis_rhs) = self.rows[i];
                    for (a, b) in row.iter_mut().zip(basis) {
                        *a ^= b;
                    }
                    rhs ^= basis_rhs;
                }
                None => {
                    self.by_pivot[lead] = Some(self.rows.len());
                    self.rows.push((lead, row, rhs));
                    return Insert::Added;
                }
            }
        }
    }

    /// Clear every pivot column from every other basis row, leaving each
    /// row with its own pivot plus free columns only.
    fn normalize(&mut self) {
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_unstable_by(|&a, &b| self.rows[b].0.cmp(&self.rows[a].0));
        for &i in &order {
            loop {
                let pivot = self.rows[i].0;
                let mut hit = None;
                'scan: for (w, &word) in self.rows[i].1.iter().enumerate() {
                    let mut bits = word;
                    while bits != 0 {
                        let c = w * 64 + bits.trailing_zeros() as usize;
                        bits &= bits - 1;
                        if c != pivot {
                            if let Some(j) = self.by_pivot[c] {
                                hit = Some(j);
                                break 'scan;
                            }
                        }
                    }
                }
                let Some(j) = hit else { break };
                let other = self.rows[j].1.clone();
                let other_rhs = self.rows[j].2;
                for (a, b) in self.rows[i].1.iter_mut().zip(&other) {
                    *a ^= b;
                }
                self.rows[i].2 ^= other_rhs;
            }
        }
    }
}

impl Gf2System {
    pub fn build(grammar: &Grammar, depth: u32) -> Result<Self> {
        if depth == 0 || depth > MAX_GF2_DEPTH {
            return Err(Error::DepthOutOfRange {
                depth,
                max: MAX_GF2_DEPTH,
            });
        }
        let n = grammar.symbol_count();
        let cols = n * depth as usize;
        let words = (cols + 63) / 64;
        let count = (1usize << depth) - 1;
        let mut rows = Vec::with_capacity(count);
        let mut labels = Vec::with_capacity(count);
        for level in 0..depth {
            for prefix in 0..(1u64 << level) {
                let mut row = vec![0u64; words];
                let mut symbol = grammar.start();
                for j in 0..=level {
                    let col = (level - j) as usize * n + symbol as usize;
                    row[col / 64] |= 1u64 << (col % 64);
                    if j < level {
                        let bit = ((prefix >> (level - 1 - j)) & 1) as u32;
                        symbol = grammar.child(symbol, bit);
                    }
                }
                rows.push(row);
                labels.push((level, prefix));
            }
        }
        Ok(Gf2System {
            symbols: n,
            depth,
            rows,
            labels,
        })
    }

    pub fn symbols(&self) -> usize {
        self.symbols
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.symbols * self.depth as usize
    }

    pub fn labels(&self) -> &[(u32, u64)] {
        &self.labels
    }

    /// Column index of bit `significance` of symbol `symbol`'s vector.
    pub fn column(&self, symbol: u32, significance: u32) -> usize {
        significance as usize * self.symbols + symbol as usize
    }

    pub fn dot(&self, row: usize, col: usize) -> bool {
        self.rows[row][col / 64] >> (col % 64) & 1 == 1
    }

    pub fn rank(&self) -> usize {
        let mut elim = Eliminator::new(self.n_cols());
        for row in &self.rows {
            let _ = elim.insert(row.clone(), 0);
        }
        elim.rows.len()
    }

    /// Label of the first row that is a GF(2) combination of earlier
    /// rows, if any. A grammar with no dependent rows can realize every
    /// tree of this depth.
    pub fn first_dependent_row(&self) -> Option<(u32, u64)> {
        let mut elim = Eliminator::new(self.n_cols());
        for (i, row) in self.rows.iter().enumerate() {
            if let Insert::Zeroed { .. } = elim.insert(row.clone(), 0) {
                return Some(self.labels[i]);
            }
        }
        None
    }

    /// Solve for scrambling data whose expansion is exactly `tree`.
    ///
    /// Fails with the label of the first node whose flip bit contradicts
    /// the flips already forced by earlier nodes. Free vector bits are
    /// set to zero.
    pub fn solve(&self, tree: &ExplicitTree) -> Result<ScrambleData> {
        if tree.depth() != self.depth {
            return Err(Error::Invalid(format!(
                "tree depth {} does not match system depth {}",
                tree.depth(),
                self.depth
            )));
        }
        let mut elim = Eliminator::new(self.n_cols());
        for (i, row) in self.rows.iter().enumerate() {
            let (level, prefix) = self.labels[i];
            let rhs = tree.get(level, prefix) as u32;
            if let Insert::Zeroed { rhs: 1 } = elim.insert(row.clone(), rhs) {
                return Err(Error::Infeasible { level, prefix });
            }
        }
        elim.normalize();
        let mut vectors = vec![0u32; self.symbols];
        for &(pivot, _, rhs) in &elim.rows {
            if rhs == 1 {
                let s = pivot % self.symbols;
                let t = pivot / self.symbols;
                vectors[s] |= 1u32 << (31 - t as u32);
            }
        }
        ScrambleData::new(vectors, self.depth)
    }

    pub fn utilization_report(&self) -> UtilizationReport {
        let cols = self.n_cols();
        let mut column_dots = vec![0usize; cols];
        let mut zero_rows = Vec::new();
        for i in 0..self.rows.len() {
            let mut any = false;
            for c in 0..cols {
                if self.dot(i, c) {
                    column_dots[c] += 1;
                    any = true;
                }
            }
            if !any {
                zero_rows.push(self.labels[i]);
            }
        }
        UtilizationReport {
            n_rows: self.n_rows(),
            n_cols: cols,
            rank: self.rank(),
            column_dots,
            zero_rows,
        }
    }

    /// Render the dot pattern as a PGM image: black dots on white, one
    /// mid-gray separator row between levels.
    pub fn to_pgm(&self) -> Vec<u8> {
        let cols = self.n_cols();
        let height = self.n_rows() + self.depth as usize - 1;
        let mut pixels = Vec::with_capacity(cols * height);
        for (i, _) in self.rows.iter().enumerate() {
            if i > 0 && self.labels[i].1 == 0 {
                pixels.extend(std::iter::repeat(128u8).take(cols));
            }
            for c in 0..cols {
                pixels.push(if self.dot(i, c) { 0 } else { 255 });
            }
        }
        pgm::write_p5(cols, height, &pixels)
    }
}

/// Build the system for `tree.depth()` and solve it in one step.
pub fn solve_for_tree(grammar: &Grammar, tree: &ExplicitTree) -> Result<ScrambleData> {
    Gf2System::build(grammar, tree.depth())?.solve(tree)
}
