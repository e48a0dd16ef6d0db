//! Explicit Owen scrambling trees.
//!
//! A tree of depth `d` stores one flip bit per node of the full binary
//! tree with `d` levels (2^d - 1 bits). Scrambling a d-bit value walks
//! from the root: at level `l` the node selected by the first `l`
//! original input bits supplies the flip for output bit `l`. Node
//! indexing always follows the original, pre-flip bits.
//!
//! This is the brute-force reference the grammar-driven scrambler is
//! checked against, and the target representation for data solving.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Hard cap on explicit tree depth (memory guard: 2^25 bits at 24).
pub const MAX_TREE_DEPTH: u32 = 24;

/// Per-node flip bits of a depth-`d` binary tree, packed per level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExplicitTree {
    depth: u32,
    levels: Vec<Vec<u64>>,
}

impl ExplicitTree {
    /// All-zero tree (identity scrambling).
    pub fn zero(depth: u32) -> Result<Self> {
        if depth > MAX_TREE_DEPTH {
            return Err(Error::DepthOutOfRange {
                depth,
                max: MAX_TREE_DEPTH,
            });
        }
        let levels = (0..depth).map(|l| vec![0u64; words_for_level(l)]).collect();
        Ok(ExplicitTree { depth, levels })
    }

    /// Uniformly random flip bits on every node.
    pub fn random(depth: u32, rng: &mut ChaCha8Rng) -> Result<Self> {
        let mut tree = ExplicitTree::zero(depth)?;
        for (l, level) in tree.levels.iter_mut().enumerate() {
            let nodes = 1u64 << l;
            for (w, word) in level.iter_mut().enumerate() {
                let mut v: u64 = rng.gen();
                // clear bits past the level's node count
                let used = (nodes - (w as u64) * 64).min(64);
                if used < 64 {
                    v &= (1u64 << used) - 1;
                }
                *word = v;
            }
        }
        Ok(tree)
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    /// Flip bit of the node at `level` selected by the original
    /// `level`-bit prefix.
    #[inline]
    pub fn get(&self, level: u32, prefix: u64) -> bool {
        debug_assert!(level < self.depth);
        debug_assert!(prefix < (1u64 << level));
        let w = (prefix / 64) as usize;
        let b = (prefix % 64) as u32;
        (self.levels[level as usize][w] >> b) & 1 == 1
    }

    pub fn set(&mut self, level: u32, prefix: u64, bit: bool) {
        let w = (prefix / 64) as usize;
        let b = (prefix % 64) as u32;
        let word = &mut self.levels[level as usize][w];
        if bit {
            *word |= 1u64 << b;
        } else {
            *word &= !(1u64 << b);
        }
    }

    /// Scramble a `depth`-bit value (most significant bit first).
    pub fn scramble(&self, x: u32) -> u32 {
        let d = self.depth;
        debug_assert!(d == 0 || x < (1u32 << d));
        let mut y = x;
        for level in 0..d {
            // top `level` original bits select the node; 0 at the root
            let prefix = (x >> (d - level)) as u64;
            if self.get(level, prefix) {
                y ^= 1 << (d - 1 - level);
            }
        }
        y
    }

    /// Exact inverse of [`scramble`](Self::scramble): recovers original
    /// bits top-down and indexes nodes by them.
    pub fn unscramble(&self, y: u32) -> u32 {
        let d = self.depth;
        let mut x = 0u32;
        for level in 0..d {
            let prefix = (x >> (d - level)) as u64;
            let flip = self.get(level, prefix) as u32;
            let out_bit = (y >> (d - 1 - level)) & 1;
            x |= (out_bit ^ flip) << (d - 1 - level);
        }
        x
    }

    /// One `0`/`1` string per level, root first, separated by newlines.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for l in 0..self.depth {
            let nodes = 1u64 << l;
            for p in 0..nodes {
                out.push(if self.get(l, p) { '1' } else { '0' });
            }
            out.push('\n');
        }
        out
    }

    /// Parse level strings separated by newlines or commas, e.g.
    /// `1,01,1101,10010010`. Level `l` must hold exactly 2^l bits.
    pub fn parse(text: &str) -> Result<Self> {
        let levels: Vec<&str> = text
            .split(|c| c == ',' || c == '\n')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .collect();
        let depth = levels.len() as u32;
        let mut tree = ExplicitTree::zero(depth)?;
        for (l, level) in levels.iter().enumerate() {
            if level.len() != 1usize << l {
                return Err(Error::Parse {
                    line: l + 1,
                    msg: format!(
                        "level {l} must hold {} bits, found {}",
                        1usize << l,
                        level.len()
                    ),
                });
            }
            for (p, c) in level.chars().enumerate() {
                match c {
                    '0' => {}
                    '1' => tree.set(l as u32, p as u64, true),
                    other => {
                        return Err(Error::Parse {
                            line: l + 1,
                            msg: format!("unexpected character {other:?}"),
                        })
                    }
                }
            }
        }
        Ok(tree)
    }
}

fn words_for_level(level: u32) -> usize {
    (((1u64 << level) + 63) / 64) as usize
}
