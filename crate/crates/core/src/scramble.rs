//! Grammar-driven Owen scrambling with exact inversion.
//!
//! Each grammar symbol carries one scrambling vector of `depth` bits. A
//! node carrying symbol `s` XORs `vector[s]` into the scrambling state of
//! its whole subtree: bit 0 of the vector (the most significant) flips
//! the node's own output bit, bit `j` acts `j` levels further down.
//!
//! Scrambling walks the top `depth` levels keeping a (symbol,
//! accumulator) pair. At each level the current symbol's vector is XORed
//! into the accumulator, whose most significant bit is the flip for the
//! current output bit; the accumulator then shifts left and the original
//! (pre-flip) input bit picks the child symbol. Descending by original
//! bits is what makes the walk invertible: the inverse runs the same walk
//! and recovers each original bit as output bit XOR flip before stepping
//! down. Input bits below `depth` pass through unchanged.

use std::fmt::Write as _;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::grammar::Grammar;
use crate::seed;
use crate::sobol::GeneratorMatrix;
use crate::tree::ExplicitTree;

/// Scrambling vectors for one dimension, one `depth`-bit word per grammar
/// symbol. Words are aligned to the most significant bit of a `u32`; bits
/// past `depth` are zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScrambleData {
    vectors: Vec<u32>,
    depth: u32,
}

/// Mask selecting the top `depth` bits of a word.
#[inline]
fn top_mask(depth: u32) -> u32 {
    if depth == 0 {
        0
    } else {
        !0u32 << (32 - depth)
    }
}

impl ScrambleData {
    pub fn new(vectors: Vec<u32>, depth: u32) -> Result<Self> {
        if depth > 32 {
            return Err(Error::DepthOutOfRange { depth, max: 32 });
        }
        if vectors.is_empty() {
            return Err(Error::Invalid(
                "scrambling data needs at least one vector".into(),
            ));
        }
        let mask = top_mask(depth);
        if let Some(bad) = vectors.iter().position(|&v| v & !mask != 0) {
            return Err(Error::Invalid(format!(
                "vector {bad} has bits set past depth {depth}"
            )));
        }
        Ok(ScrambleData { vectors, depth })
    }

    /// Uniformly random vectors for `symbols` symbols.
    pub fn random(symbols: usize, depth: u32, rng: &mut ChaCha8Rng) -> Result<Self> {
        if depth > 32 {
            return Err(Error::DepthOutOfRange { depth, max: 32 });
        }
        let mask = top_mask(depth);
        let vectors = (0..symbols).map(|_| rng.gen::<u32>() & mask).collect();
        ScrambleData::new(vectors, depth)
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn vectors(&self) -> &[u32] {
        &self.vectors
    }

    pub fn set_vector(&mut self, symbol: usize, vector: u32) {
        debug_assert!(vector & !top_mask(self.depth) == 0);
        self.vectors[symbol] = vector;
    }

    /// Serialize: `n depth` on the first line, then one zero-padded hex
    /// word per symbol, aligned to the most significant bit.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {}", self.vectors.len(), self.depth);
        for &v in &self.vectors {
            let _ = writeln!(out, "{v:08x}");
        }
        out
    }

    /// Parse the `to_text` format. Exact round-trip.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or_else(|| Error::Parse {
            line: 1,
            msg: "empty data table".into(),
        })?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(Error::Parse {
                line: 1,
                msg: "header must be `n depth`".into(),
            });
        }
        let n: usize = fields[0].parse().map_err(|e| Error::Parse {
            line: 1,
            msg: format!("{e}"),
        })?;
        let depth: u32 = fields[1].parse().map_err(|e| Error::Parse {
            line: 1,
            msg: format!("{e}"),
        })?;
        let mut vectors = Vec::with_capacity(n);
        for want in 0..n {
            let (line_no, line) = lines.next().ok_or_else(|| Error::Parse {
                line: want + 2,
                msg: format!("expected {n} data words"),
            })?;
            let word = u32::from_str_radix(line.trim(), 16).map_err(|e| Error::Parse {
                line: line_no + 1,
                msg: format!("{e}"),
            })?;
            vectors.push(word);
        }
        ScrambleData::new(vectors, depth)
    }
}

/// A grammar plus per-dimension scrambling data over `m`-bit coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArtOwenScrambler {
    grammar: Grammar,
    data: Vec<ScrambleData>,
    depth: u32,
    m: u32,
}

impl ArtOwenScrambler {
    pub fn new(grammar: Grammar, data: Vec<ScrambleData>, m: u32) -> Result<Self> {
        if m == 0 || m > 32 {
            return Err(Error::DepthOutOfRange { depth: m, max: 32 });
        }
        if data.is_empty() {
            return Err(Error::Invalid(
                "need data for at least one dimension".into(),
            ));
        }
        let depth = data[0].depth();
        if depth > m {
            return Err(Error::DepthOutOfRange { depth, max: m });
        }
        for (dim, d) in data.iter().enumerate() {
            if d.depth() != depth {
                return Err(Error::Invalid(format!(
                    "dimension {dim} has depth {} but dimension 0 has {depth}",
                    d.depth()
                )));
            }
            if d.vectors().len() != grammar.symbol_count() {
                return Err(Error::Invalid(format!(
                    "dimension {dim} has {} vectors for {} symbols",
                    d.vectors().len(),
                    grammar.symbol_count()
                )));
            }
        }
        Ok(ArtOwenScrambler {
            grammar,
            data,
            depth,
            m,
        })
    }

    /// Fresh random data for `dims` dimensions, derived from one master
    /// seed (per-dimension streams).
    pub fn seeded(
        grammar: Grammar,
        dims: usize,
        depth: u32,
        m: u32,
        master_seed: u64,
    ) -> Result<Self> {
        let symbols = grammar.symbol_count();
        let data = (0..dims)
            .map(|dim| {
                let mut rng = seed::stream_rng(master_seed, &[dim as u64]);
                ScrambleData::random(symbols, depth, &mut rng)
            })
            .collect::<Result<Vec<_>>>()?;
        ArtOwenScrambler::new(grammar, data, m)
    }

    pub fn grammar(&self) -> &Grammar {
        &self.grammar
    }

    pub fn data(&self, dim: usize) -> &ScrambleData {
        &self.data[dim]
    }

    pub fn data_mut(&mut self, dim: usize) -> &mut ScrambleData {
        &mut self.data[dim]
    }

    pub fn dims(&self) -> usize {
        self.data.len()
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Scramble one m-bit coordinate of dimension `dim`.
    #[inline]
    pub fn scramble(&self, x: u32, dim: usize) -> u32 {
        art_scramble(x, &self.grammar, &self.data[dim], self.m)
    }

    /// Exact inverse of [`scramble`](Self::scramble).
    #[inline]
    pub fn unscramble(&self, y: u32, dim: usize) -> u32 {
        art_unscramble(y, &self.grammar, &self.data[dim], self.m)
    }

    /// Scramble every coordinate of a point.
    pub fn scramble_point(&self, point: &crate::sobol::SamplePoint) -> crate::sobol::SamplePoint {
        assert_eq!(point.m, self.m, "bit depth mismatch");
        assert!(
            point.coords.len() <= self.dims(),
            "not enough data dimensions"
        );
        crate::sobol::SamplePoint {
            coords: point
                .coords
                .iter()
                .enumerate()
                .map(|(dim, &c)| self.scramble(c, dim))
                .collect(),
            m: self.m,
        }
    }

    /// Expand dimension `dim` into the explicit flip-bit tree it
    /// generates, down to `depth` levels.
    pub fn expand_to_tree(&self, dim: usize, depth: u32) -> Result<ExplicitTree> {
        expand_to_tree(&self.grammar, &self.data[dim], depth)
    }
}

/// The forward accumulator walk over the top `depth` bits of an m-bit
/// value.
pub fn art_scramble(x: u32, grammar: &Grammar, data: &ScrambleData, m: u32) -> u32 {
    debug_assert!(m >= data.depth() && m <= 32);
    debug_assert!(m == 32 || x < (1u32 << m));
    let vectors = data.vectors();
    let mut symbol = grammar.start();
    let mut acc = 0u32;
    let mut y = x;
    for level in 0..data.depth() {
        acc ^= vectors[symbol as usize];
        let flip = acc >> 31;
        let pos = m - 1 - level;
        y ^= flip << pos;
        acc <<= 1;
        let orig_bit = (x >> pos) & 1;
        symbol = grammar.child(symbol, orig_bit);
    }
    y
}

/// Exact inverse of [`art_scramble`]: the same walk, recovering each
/// original bit as output bit XOR flip before descending by it.
pub fn art_unscramble(y: u32, grammar: &Grammar, data: &ScrambleData, m: u32) -> u32 {
    debug_assert!(m >= data.depth() && m <= 32);
    let vectors = data.vectors();
    let mut symbol = grammar.start();
    let mut acc = 0u32;
    let mut x = y;
    for level in 0..data.depth() {
        acc ^= vectors[symbol as usize];
        let flip = acc >> 31;
        let pos = m - 1 - level;
        x ^= flip << pos;
        acc <<= 1;
        let orig_bit = (x >> pos) & 1;
        symbol = grammar.child(symbol, orig_bit);
    }
    x
}

/// Materialize the flip-bit tree a (grammar, data) pair generates, down
/// to `depth` levels (`depth` at most the data depth).
pub fn expand_to_tree(grammar: &Grammar, data: &ScrambleData, depth: u32) -> Result<ExplicitTree> {
    if depth > data.depth() {
        return Err(Error::DepthOutOfRange {
            depth,
            max: data.depth(),
        });
    }
    let mut tree = ExplicitTree::zero(depth)?;
    if depth == 0 {
        return Ok(tree);
    }
    // depth-first over all nodes, carrying (symbol, accumulator)
    fn walk(
        grammar: &Grammar,
        vectors: &[u32],
        tree: &mut ExplicitTree,
        depth: u32,
        level: u32,
        prefix: u64,
        symbol: u32,
        acc: u32,
    ) {
        let acc = acc ^ vectors[symbol as usize];
        tree.set(level, prefix, acc >> 31 == 1);
        if level + 1 < depth {
            walk(
                grammar,
                vectors,
                tree,
                depth,
                level + 1,
                prefix << 1,
                grammar.child(symbol, 0),
                acc << 1,
            );
            walk(
                grammar,
                vectors,
                tree,
                depth,
                level + 1,
                (prefix << 1) | 1,
                grammar.child(symbol, 1),
                acc << 1,
            );
        }
    }
    walk(
        grammar,
        data.vectors(),
        &mut tree,
        depth,
        0,
        0,
        grammar.start(),
        0,
    );
    Ok(tree)
}

/// Digital shift: XOR a fixed m-bit code into every coordinate.
#[inline]
pub fn xor_scramble(x: u32, code: u32) -> u32 {
    x ^ code
}

/// Hash-based nested uniform scrambling of an m-bit value: reverse bits,
/// apply a carry-propagating hash, reverse back.
pub fn burley_hash_scramble(x: u32, seed: u32, m: u32) -> u32 {
    debug_assert!(m >= 1 && m <= 32);
    let mut v = (x << (32 - m)).reverse_bits();
    v = v.wrapping_add(seed);
    v ^= v.wrapping_mul(0x6c50_b47c);
    v ^= v.wrapping_mul(0xb82f_1e52);
    v ^= v.wrapping_mul(0xc7af_e638);
    v ^= v.wrapping_mul(0x8d22_f6e6);
    v.reverse_bits() >> (32 - m)
}

/// Any of the point-set scramblings used for comparisons.
#[derive(Debug, Clone)]
pub enum Scrambling {
    /// Identity.
    None,
    /// Grammar-driven scrambling.
    Art(ArtOwenScrambler),
    /// Per-dimension digital shift.
    Xor { codes: Vec<u32>, m: u32 },
    /// Per-dimension hash-based nested uniform scrambling.
    Burley { seeds: Vec<u32>, m: u32 },
    /// Explicit random flip-bit trees on the top `tree.depth()` bits.
    Tree { trees: Vec<ExplicitTree>, m: u32 },
}

impl Scrambling {
    /// Apply to one m-bit coordinate.
    pub fn apply(&self, x: u32, dim: usize) -> u32 {
        match self {
            Scrambling::None => x,
            Scrambling::Art(s) => s.scramble(x, dim),
            Scrambling::Xor { codes, .. } => xor_scramble(x, codes[dim]),
            Scrambling::Burley { seeds, m } => burley_hash_scramble(x, seeds[dim], *m),
            Scrambling::Tree { trees, m } => {
                let t = &trees[dim];
                let d = t.depth();
                if d == 0 {
                    return x;
                }
                debug_assert!(d <= *m);
                let low = m - d;
                (t.scramble(x >> low) << low) | (x & ((1u32 << low) - 1))
            }
        }
    }

    /// First `n` standard 2D Sobol points, scrambled.
    pub fn points_2d(&self, n: usize, m: u32) -> Vec<[u32; 2]> {
        crate::sobol::standard_points_2d(n, m)
            .into_iter()
            .map(|[x, y]| [self.apply(x, 0), self.apply(y, 1)])
            .collect()
    }
}

/// Indices among `0..n` whose scrambled 2D point lands in pixel
/// `(px, py)` of the 2^k by 2^k grid, in increasing order.
///
/// The pixel's k-bit coordinate prefixes are unscrambled exactly, then
/// the indices are the solutions of a GF(2) linear system over the index
/// bits, built from the top k rows of the two generator matrices.
pub fn enumerate_pixel_samples(
    scrambler: &ArtOwenScrambler,
    matrices: &[GeneratorMatrix],
    px: u32,
    py: u32,
    k: u32,
    n: u64,
) -> Result<Vec<u64>> {
    let m = scrambler.m();
    if matrices.len() < 2 {
        return Err(Error::Invalid(
            "pixel enumeration needs two dimensions".into(),
        ));
    }
    if scrambler.dims() < 2 {
        return Err(Error::Invalid("scrambler must cover two dimensions".into()));
    }
    if k == 0 || k > m {
        return Err(Error::DepthOutOfRange { depth: k, max: m });
    }
    if matrices[0].m() != m || matrices[1].m() != m {
        return Err(Error::Invalid(
            "matrix and scrambler bit depths differ".into(),
        ));
    }
    if px >= (1u32 << k) || py >= (1u32 << k) {
        return Err(Error::Invalid(format!(
            "pixel ({px}, {py}) outside 2^{k} grid"
        )));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    if n > (1u64 << m) {
        return Err(Error::Invalid(format!("sample count {n} exceeds 2^{m}")));
    }

    // index bits that can vary for indices below n
    let t = (64 - (n - 1).leading_zeros()).max(1) as usize;

    // the k-bit original prefix each coordinate must carry
    let targets = [
        scrambler.unscramble(px << (m - k), 0) >> (m - k),
        scrambler.unscramble(py << (m - k), 1) >> (m - k),
    ];

    // Equations over index bits i_0..i_{t-1}: one per output bit r of each
    // dimension. Coefficient of i_j is bit r of generator column j.
    let mut rows: Vec<(u64, u32)> = Vec::with_capacity(2 * k as usize);
    for (dim, mat) in matrices.iter().take(2).enumerate() {
        for r in 0..k {
            let mut coeffs = 0u64;
            for (j, &col) in mat.columns().iter().take(t).enumerate() {
                if (col >> (m - 1 - r)) & 1 == 1 {
                    coeffs |= 1u64 << j;
                }
            }
            let rhs = (targets[dim] >> (k - 1 - r)) & 1;
            rows.push((coeffs, rhs));
        }
    }

    // online Gaussian elimination by leading index bit
    let mut basis: Vec<Option<(u64, u32)>> = vec![None; t];
    for (mut coeffs, mut rhs) in rows {
        while coeffs != 0 {
            let lead = 63 - coeffs.leading_zeros() as usize;
            match basis[lead] {
                Some((bc, br)) => {
                    coeffs ^= bc;
                    rhs ^= br;
                }
                None => {
                    basis[lead] = Some((coeffs, rhs));
                    coeffs = 0;
                    rhs = 0;
                }
            }
        }
        if rhs == 1 {
            // inconsistent: impossible for sound matrices once every
            // equation can be satisfied, i.e. when t >= 2k
            if t >= 2 * k as usize {
                return Err(Error::DegenerateConstraints);
            }
            return Ok(Vec::new());
        }
    }

    // reduce to RREF, ascending pivots: a row's non-pivot columns are all
    // below its own pivot, and lower rows are already clean, so one XOR
    // per stray pivot column settles it
    for lead in 0..t {
        let Some((mut coeffs, mut rhs)) = basis[lead] else {
            continue;
        };
        loop {
            let mut stray = None;
            let mut rest = coeffs & !(1u64 << lead);
            while rest != 0 {
                let col = rest.trailing_zeros() as usize;
                if basis[col].is_some() {
                    stray = Some(col);
                    break;
                }
                rest &= rest - 1;
            }
            let Some(col) = stray else { break };
            let (bc, br) = basis[col].unwrap();
            coeffs ^= bc;
            rhs ^= br;
        }
        basis[lead] = Some((coeffs, rhs));
    }
    // particular solution: free bits zero, so each pivot equals its rhs
    let mut particular = 0u64;
    // nullspace basis: one vector per free bit, pivot bits from the rows
    // that mention that free column
    let mut null_vectors = Vec::new();
    for (lead, entry) in basis.iter().enumerate() {
        if let Some((_, 1)) = entry {
            particular |= 1u64 << lead;
        }
        if entry.is_none() {
            let mut v = 1u64 << lead;
            for (p, e) in basis.iter().enumerate() {
                if let Some((coeffs, _)) = e {
                    if coeffs >> lead & 1 == 1 {
                        v |= 1u64 << p;
                    }
                }
            }
            null_vectors.push(v);
        }
    }

    let mut out = Vec::new();
    let combos = 1u64 << null_vectors.len();
    for mask in 0..combos {
        let mut idx = particular;
        for (b, &nv) in null_vectors.iter().enumerate() {
            if (mask >> b) & 1 == 1 {
                idx ^= nv;
            }
        }
        if idx < n {
            out.push(idx);
        }
    }
    out.sort_unstable();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::{build_ordered_grammar, build_random_grammar, build_tm_grammar};
    use crate::seed::stream_rng;
    use crate::sobol::{sobol_point, standard_pair};

    fn prefix_xor_msb(v: u32) -> u32 {
        let mut p = v;
        p ^= p >> 1;
        p ^= p >> 2;
        p ^= p >> 4;
        p ^= p >> 8;
        p ^= p >> 16;
        p
    }

    #[test]
    fn data_table_round_trip() {
        let mut rng = stream_rng(2, &[0]);
        for (symbols, depth) in [(1usize, 4u32), (4, 8), (16, 32), (3, 0)] {
            let data = ScrambleData::random(symbols, depth, &mut rng).unwrap();
            let text = data.to_text();
            let back = ScrambleData::from_text(&text).unwrap();
            assert_eq!(data, back);
            assert_eq!(back.to_text(), text);
        }
    }

    #[test]
    fn data_rejects_bits_past_depth() {
        assert!(ScrambleData::new(vec![0x0001_0000], 8).is_err());
        assert!(ScrambleData::new(vec![0xff00_0000], 8).is_ok());
        assert!(ScrambleData::from_text("1 8\n00ff0000\n").is_err());
    }

    #[test]
    fn single_symbol_walk_applies_prefix_xor_of_vector() {
        // With one symbol the accumulator at level l holds the XOR of the
        // vector shifted by 0..l, so the flip sequence is the bitwise
        // prefix-XOR of the vector.
        let g = crate::grammar::Grammar::new(vec![(0, 0)], 0).unwrap();
        let mut rng = stream_rng(3, &[1]);
        for _ in 0..50 {
            let v: u32 = rand::Rng::gen(&mut rng);
            let data = ScrambleData::new(vec![v], 32).unwrap();
            let x: u32 = rand::Rng::gen(&mut rng);
            assert_eq!(
                art_scramble(x, &g, &data, 32),
                xor_scramble(x, prefix_xor_msb(v))
            );
        }
    }

    #[test]
    fn xor_code_realized_by_inverting_prefix_xor() {
        // the vector v with prefix-XOR equal to a wanted code is
        // v = code ^ (code >> 1)
        let g = crate::grammar::Grammar::new(vec![(0, 0)], 0).unwrap();
        let mut rng = stream_rng(4, &[1]);
        for _ in 0..50 {
            let code: u32 = rand::Rng::gen(&mut rng);
            let v = code ^ (code >> 1);
            assert_eq!(prefix_xor_msb(v), code);
            let data = ScrambleData::new(vec![v], 32).unwrap();
            let x: u32 = rand::Rng::gen(&mut rng);
            assert_eq!(art_scramble(x, &g, &data, 32), xor_scramble(x, code));
        }
    }

    #[test]
    fn round_trip_various_configs() {
        let mut rng = stream_rng(5, &[2]);
        let grammars = [
            build_tm_grammar(2).unwrap(),
            build_ordered_grammar(7, &mut rng).unwrap(),
            build_random_grammar(5, &mut rng, false).unwrap(),
        ];
        for g in &grammars {
            for depth in [0u32, 1, 7, 16, 32] {
                let data = ScrambleData::random(g.symbol_count(), depth, &mut rng).unwrap();
                for _ in 0..100 {
                    let x: u32 = rand::Rng::gen(&mut rng);
                    let y = art_scramble(x, g, &data, 32);
                    assert_eq!(art_unscramble(y, g, &data, 32), x);
                }
            }
        }
    }

    #[test]
    fn bits_below_depth_pass_through() {
        let g = build_tm_grammar(2).unwrap();
        let mut rng = stream_rng(6, &[0]);
        let data = ScrambleData::random(4, 8, &mut rng).unwrap();
        for _ in 0..100 {
            let x: u32 = rand::Rng::gen(&mut rng);
            let y = art_scramble(x, &g, &data, 32);
            assert_eq!(y & 0x00ff_ffff, x & 0x00ff_ffff);
        }
    }

    #[test]
    fn first_k_output_bits_depend_only_on_first_k_input_bits() {
        let g = build_tm_grammar(3).unwrap();
        let mut rng = stream_rng(7, &[0]);
        let data = ScrambleData::random(g.symbol_count(), 32, &mut rng).unwrap();
        for _ in 0..200 {
            let x: u32 = rand::Rng::gen(&mut rng);
            for k in [1u32, 4, 9, 17, 31] {
                let noise: u32 = rand::Rng::gen(&mut rng);
                let x2 = (x & top_mask(k)) | (noise & !top_mask(k));
                let y = art_scramble(x, &g, &data, 32);
                let y2 = art_scramble(x2, &g, &data, 32);
                assert_eq!(y & top_mask(k), y2 & top_mask(k), "k = {k}");
            }
        }
    }

    #[test]
    fn walk_matches_explicit_tree_expansion() {
        let mut rng = stream_rng(8, &[3]);
        let grammars = [
            build_tm_grammar(1).unwrap(),
            build_tm_grammar(2).unwrap(),
            build_ordered_grammar(5, &mut rng).unwrap(),
        ];
        for g in &grammars {
            let data = ScrambleData::random(g.symbol_count(), 10, &mut rng).unwrap();
            let tree = expand_to_tree(g, &data, 10).unwrap();
            for _ in 0..300 {
                let x: u32 = rand::Rng::gen(&mut rng);
                let head = x >> 22;
                let want = (tree.scramble(head) << 22) | (x & 0x003f_ffff);
                assert_eq!(art_scramble(x, g, &data, 32), want);
            }
        }
    }

    #[test]
    fn expand_rejects_depth_past_data() {
        let g = build_tm_grammar(1).unwrap();
        let mut rng = stream_rng(9, &[0]);
        let data = ScrambleData::random(2, 6, &mut rng).unwrap();
        assert!(expand_to_tree(&g, &data, 7).is_err());
        assert!(expand_to_tree(&g, &data, 6).is_ok());
    }

    #[test]
    fn scrambler_construction_checks() {
        let g = build_tm_grammar(2).unwrap();
        let mut rng = stream_rng(10, &[0]);
        let ok = ScrambleData::random(4, 8, &mut rng).unwrap();
        let wrong_symbols = ScrambleData::random(3, 8, &mut rng).unwrap();
        let wrong_depth = ScrambleData::random(4, 9, &mut rng).unwrap();
        assert!(ArtOwenScrambler::new(g.clone(), vec![ok.clone(), ok.clone()], 32).is_ok());
        assert!(ArtOwenScrambler::new(g.clone(), vec![ok.clone(), wrong_symbols], 32).is_err());
        assert!(ArtOwenScrambler::new(g.clone(), vec![ok.clone(), wrong_depth], 32).is_err());
        assert!(ArtOwenScrambler::new(g.clone(), vec![ok.clone()], 4).is_err());
        assert!(ArtOwenScrambler::new(g, vec![], 32).is_err());
    }

    #[test]
    fn seeded_scrambler_is_reproducible_and_dims_differ() {
        let g = build_tm_grammar(2).unwrap();
        let a = ArtOwenScrambler::seeded(g.clone(), 2, 16, 32, 77).unwrap();
        let b = ArtOwenScrambler::seeded(g, 2, 16, 32, 77).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.data(0), a.data(1));
    }

    #[test]
    fn burley_scramble_is_a_bijection_and_seed_zero_nontrivial() {
        let mut seen = vec![false; 1 << 16];
        for x in 0..(1u32 << 16) {
            let y = burley_hash_scramble(x, 0xa511_e9b3, 16) as usize;
            assert!(!seen[y]);
            seen[y] = true;
        }
    }

    #[test]
    fn burley_preserves_stratification() {
        // scrambled van der Corput prefixes stay stratified: the first
        // 2^j of 256 scrambled values occupy distinct 2^-j cells
        let mut rng = stream_rng(11, &[4]);
        for _ in 0..20 {
            let seed: u32 = rand::Rng::gen(&mut rng);
            for j in 1..=8u32 {
                let mut seen = vec![false; 1 << j];
                for i in 0..(1u64 << j) {
                    let x = crate::sobol::van_der_corput(i, 32);
                    let y = burley_hash_scramble(x, seed, 32);
                    let cell = (y >> (32 - j)) as usize;
                    assert!(!seen[cell], "seed {seed:#x} j {j}");
                    seen[cell] = true;
                }
            }
        }
    }

    #[test]
    fn identity_enumeration_on_the_two_by_two_grid() {
        let g = build_tm_grammar(1).unwrap();
        let data = ScrambleData::new(vec![0, 0], 8).unwrap();
        let s = ArtOwenScrambler::new(g, vec![data.clone(), data], 32).unwrap();
        let mats = standard_pair(32);
        let expect = [((0u32, 0u32), 0u64), ((1, 1), 1), ((0, 1), 2), ((1, 0), 3)];
        for ((px, py), idx) in expect {
            let got = enumerate_pixel_samples(&s, &mats, px, py, 1, 4).unwrap();
            assert_eq!(got, vec![idx], "pixel ({px}, {py})");
        }
    }

    #[test]
    fn enumeration_partitions_all_indices() {
        let g = build_tm_grammar(2).unwrap();
        let s = ArtOwenScrambler::seeded(g, 2, 16, 32, 123).unwrap();
        let mats = standard_pair(32);
        let k = 3u32;
        let n = 1u64 << 9;
        let mut seen = vec![false; n as usize];
        for px in 0..(1u32 << k) {
            for py in 0..(1u32 << k) {
                let idxs = enumerate_pixel_samples(&s, &mats, px, py, k, n).unwrap();
                assert_eq!(idxs.len(), (n >> (2 * k)) as usize);
                for i in idxs {
                    // the scrambled point really lands in this pixel
                    let p = s.scramble_point(&sobol_point(i, &mats));
                    assert_eq!(p.coords[0] >> (32 - k), px);
                    assert_eq!(p.coords[1] >> (32 - k), py);
                    assert!(!seen[i as usize]);
                    seen[i as usize] = true;
                }
            }
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn enumeration_with_few_samples_leaves_pixels_empty() {
        let g = build_tm_grammar(1).unwrap();
        let s = ArtOwenScrambler::seeded(g, 2, 8, 32, 5).unwrap();
        let mats = standard_pair(32);
        let k = 4u32;
        let n = 16u64; // fewer than 2^(2k) pixels
        let mut total = 0usize;
        for px in 0..16 {
            for py in 0..16 {
                total += enumerate_pixel_samples(&s, &mats, px, py, k, n)
                    .unwrap()
                    .len();
            }
        }
        assert_eq!(total, 16);
    }

    #[test]
    fn scrambling_kinds_apply() {
        let mut rng = stream_rng(12, &[0]);
        let tree = ExplicitTree::random(8, &mut rng).unwrap();
        let s = Scrambling::Tree {
            trees: vec![tree.clone(), tree.clone()],
            m: 32,
        };
        let x = 0xdead_beefu32;
        let want = (tree.scramble(x >> 24) << 24) | (x & 0x00ff_ffff);
        assert_eq!(s.apply(x, 0), want);
        assert_eq!(Scrambling::None.apply(x, 0), x);
        assert_eq!(
            Scrambling::Xor {
                codes: vec![0xff, 0],
                m: 32
            }
            .apply(x, 0),
            x ^ 0xff
        );
    }
}
