//! Base-2 Sobol sequence generation from explicit generator matrices.
//!
//! A coordinate is produced by multiplying the index, seen as a bit vector,
//! by a binary generator matrix: the output is the XOR of the matrix columns
//! selected by the set bits of the index. Dimension 0 is plain bit reversal
//! (van der Corput), dimension 1 is the upper-triangular Pascal matrix mod 2,
//! and further dimensions come from primitive-polynomial direction numbers
//! in the common `d s a m_1..m_s` text format.
//!
//! Coordinates are `m`-bit unsigned integers; the sample position is
//! `integer / 2^m`. Indices are 64-bit and truncated to `m` bits on use.

use std::io::BufRead;

use crate::error::{Error, Result};

/// Default coordinate bit depth.
pub const DEFAULT_M: u32 = 32;

/// One dimension's binary generator matrix.
///
/// `columns[c]` is the m-bit coordinate mask XORed in when index bit `c`
/// is set. Bit `r` of a column (counting from the most significant of the
/// m-bit field) is matrix row `r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorMatrix {
    columns: Vec<u32>,
    m: u32,
}

impl GeneratorMatrix {
    /// Build from raw columns. Rejects singular matrices.
    pub fn new(columns: Vec<u32>, m: u32) -> Result<Self> {
        check_m(m)?;
        let mat = GeneratorMatrix { columns, m };
        if !mat.is_invertible() {
            return Err(Error::SingularMatrix { dim: usize::MAX });
        }
        Ok(mat)
    }

    /// Bit-reversal (van der Corput) matrix: column `c` has a single one
    /// in row `c`.
    pub fn bit_reversal(m: u32) -> Self {
        assert!(check_m(m).is_ok());
        let columns = (0..m).map(|c| 1u32 << (m - 1 - c)).collect();
        GeneratorMatrix { columns, m }
    }

    /// Upper-triangular Pascal matrix mod 2: row `r` of column `c` is
    /// `C(c, r) mod 2`.
    pub fn pascal(m: u32) -> Self {
        assert!(check_m(m).is_ok());
        let mut columns = Vec::with_capacity(m as usize);
        let mut col = 1u32 << (m - 1);
        for _ in 0..m {
            columns.push(col);
            col ^= col >> 1;
        }
        GeneratorMatrix { columns, m }
    }

    /// Build from one direction-number record: polynomial degree `s`,
    /// coefficient encoding `a`, initial odd values `m_init`.
    pub fn from_direction_numbers(s: usize, a: u32, m_init: &[u32], m: u32) -> Result<Self> {
        check_m(m)?;
        if s == 0 || m_init.len() != s {
            return Err(Error::Invalid(format!(
                "direction-number record needs s >= 1 initial values, got s={s} with {} values",
                m_init.len()
            )));
        }
        for (j, &mj) in m_init.iter().enumerate() {
            if mj % 2 == 0 || mj >= (2u32 << j) {
                return Err(Error::Invalid(format!(
                    "initial value m_{} = {} must be odd and below 2^{}",
                    j + 1,
                    mj,
                    j + 1
                )));
            }
        }
        let mm = m as usize;
        let mut v = vec![0u32; mm];
        for c in 0..mm.min(s) {
            v[c] = m_init[c] << (m - 1 - c as u32);
        }
        for c in s..mm {
            let mut val = v[c - s] ^ (v[c - s] >> s as u32);
            for k in 1..s {
                if (a >> (s - 1 - k)) & 1 == 1 {
                    val ^= v[c - k];
                }
            }
            v[c] = val;
        }
        GeneratorMatrix::new(v, m)
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn columns(&self) -> &[u32] {
        &self.columns
    }

    /// Map an index to an m-bit coordinate. Index bits at or above `m`
    /// are ignored.
    pub fn coordinate(&self, index: u64) -> u32 {
        let mut bits = truncate_index(index, self.m);
        let mut out = 0u32;
        let mut c = 0usize;
        while bits != 0 {
            if bits & 1 == 1 {
                out ^= self.columns[c];
            }
            bits >>= 1;
            c += 1;
        }
        out
    }

    /// Rank over GF(2) equals m.
    pub fn is_invertible(&self) -> bool {
        if self.columns.len() != self.m as usize {
            return false;
        }
        let mut basis = [0u32; 32];
        for &col in &self.columns {
            let mut v = col;
            while v != 0 {
                let lead = 31 - v.leading_zeros() as usize;
                if basis[lead] == 0 {
                    basis[lead] = v;
                    break;
                }
                v ^= basis[lead];
            }
            if v == 0 {
                return false;
            }
        }
        true
    }
}

fn check_m(m: u32) -> Result<()> {
    if m == 0 || m > 32 {
        return Err(Error::DepthOutOfRange { depth: m, max: 32 });
    }
    Ok(())
}

fn truncate_index(index: u64, m: u32) -> u64 {
    if m >= 64 {
        index
    } else {
        index & ((1u64 << m) - 1)
    }
}

/// Bit reversal of the low `m` bits of `index`.
pub fn van_der_corput(index: u64, m: u32) -> u32 {
    assert!(check_m(m).is_ok(), "bit depth {m} out of range");
    (truncate_index(index, m) as u32).reverse_bits() >> (32 - m)
}

/// A multi-dimensional sample with m-bit integer coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SamplePoint {
    pub coords: Vec<u32>,
    pub m: u32,
}

impl SamplePoint {
    /// Positions in [0,1) per coordinate.
    pub fn to_unit(&self) -> Vec<f64> {
        let scale = 1.0 / 2f64.powi(self.m as i32);
        self.coords.iter().map(|&c| c as f64 * scale).collect()
    }
}

/// Evaluate one Sobol point across the given dimensions.
pub fn sobol_point(index: u64, matrices: &[GeneratorMatrix]) -> SamplePoint {
    assert!(!matrices.is_empty(), "at least one dimension required");
    let m = matrices[0].m;
    assert!(
        matrices.iter().all(|mat| mat.m == m),
        "all matrices must share one bit depth"
    );
    SamplePoint {
        coords: matrices.iter().map(|mat| mat.coordinate(index)).collect(),
        m,
    }
}

/// The standard 2D pair: bit reversal and Pascal.
pub fn standard_pair(m: u32) -> [GeneratorMatrix; 2] {
    [GeneratorMatrix::bit_reversal(m), GeneratorMatrix::pascal(m)]
}

/// First `n` points of the standard 2D pair as integer coordinates.
pub fn standard_points_2d(n: usize, m: u32) -> Vec<[u32; 2]> {
    let [mx, my] = standard_pair(m);
    (0..n as u64)
        .map(|i| [mx.coordinate(i), my.coordinate(i)])
        .collect()
}

/// Direction-number records for dimensions 1..=7 (degree, coefficients,
/// initial values). Dimension 0 is bit reversal; the first record
/// reproduces the Pascal matrix.
const BUILTIN_RECORDS: [(usize, u32, &[u32]); 7] = [
    (1, 0, &[1]),
    (2, 1, &[1, 1]),
    (3, 1, &[1, 1, 1]),
    (3, 2, &[1, 3, 1]),
    (4, 1, &[1, 1, 3, 3]),
    (4, 4, &[1, 3, 5, 13]),
    (5, 2, &[1, 1, 5, 5, 17]),
];

/// Number of dimensions available without an external file.
pub const BUILTIN_DIMS: usize = BUILTIN_RECORDS.len() + 1;

/// Generator matrices for the first `dims` built-in dimensions.
pub fn builtin_matrices(dims: usize, m: u32) -> Result<Vec<GeneratorMatrix>> {
    check_m(m)?;
    if dims > BUILTIN_DIMS {
        return Err(Error::MissingDimension {
            have: BUILTIN_DIMS,
            want: dims,
        });
    }
    let mut out = Vec::with_capacity(dims);
    if dims >= 1 {
        out.push(GeneratorMatrix::bit_reversal(m));
    }
    for &(s, a, init) in BUILTIN_RECORDS.iter().take(dims.saturating_sub(1)) {
        out.push(GeneratorMatrix::from_direction_numbers(s, a, init, m)?);
    }
    Ok(out)
}

/// Load matrices for `dims` dimensions from a direction-number table.
///
/// The format is the usual one: an optional header line, then one record
/// `d s a m_1..m_s` per line, where `d` counts dimensions from 2 (the file
/// never lists the bit-reversal dimension). Dimensions 0 and 1 fall back
/// to the built-ins when the file does not cover them.
pub fn load_direction_numbers<R: BufRead>(
    source: R,
    dims: usize,
    m: u32,
) -> Result<Vec<GeneratorMatrix>> {
    check_m(m)?;
    let mut records: Vec<(usize, usize, u32, Vec<u32>)> = Vec::new();
    for (line_no, line) in source.lines().enumerate() {
        let line = line?;
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        if line_no == 0 && fields[0].parse::<u64>().is_err() {
            continue;
        }
        let parse = |idx: usize| -> Result<u64> {
            fields
                .get(idx)
                .ok_or_else(|| Error::Parse {
                    line: line_no + 1,
                    msg: format!("expected at least {} fields", idx + 1),
                })?
                .parse::<u64>()
                .map_err(|e| Error::Parse {
                    line: line_no + 1,
                    msg: format!("field {}: {e}", idx + 1),
                })
        };
        let d = parse(0)? as usize;
        let s = parse(1)? as usize;
        let a = parse(2)? as u32;
        if d < 2 {
            return Err(Error::Parse {
                line: line_no + 1,
                msg: format!("dimension column must be >= 2, got {d}"),
            });
        }
        if s == 0 || fields.len() != 3 + s {
            return Err(Error::Parse {
                line: line_no + 1,
                msg: format!(
                    "degree {s} needs exactly {} fields, got {}",
                    3 + s,
                    fields.len()
                ),
            });
        }
        let mut init = Vec::with_capacity(s);
        for k in 0..s {
            init.push(parse(3 + k)? as u32);
        }
        records.push((d, s, a, init));
    }

    let mut out = Vec::with_capacity(dims);
    for dim in 0..dims {
        if dim == 0 {
            out.push(GeneratorMatrix::bit_reversal(m));
            continue;
        }
        let rec = records.iter().find(|r| r.0 == dim + 1);
        match rec {
            Some((_, s, a, init)) => out.push(
                GeneratorMatrix::from_direction_numbers(*s, *a, init, m).map_err(|e| match e {
                    Error::SingularMatrix { .. } => Error::SingularMatrix { dim },
                    other => other,
                })?,
            ),
            None if dim == 1 => out.push(GeneratorMatrix::pascal(m)),
            None => {
                return Err(Error::MissingDimension {
                    have: records.iter().map(|r| r.0 - 1).max().unwrap_or(1) + 1,
                    want: dims,
                })
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn van_der_corput_hand_values() {
        assert_eq!(van_der_corput(1, 4), 8);
        assert_eq!(van_der_corput(6, 4), 6);
        assert_eq!(van_der_corput(0, 4), 0);
        assert_eq!(van_der_corput(1, 32), 0x8000_0000);
        // index truncation to m bits
        assert_eq!(van_der_corput(16 + 1, 4), 8);
    }

    #[test]
    fn pascal_columns_are_binomial_parities() {
        let p = GeneratorMatrix::pascal(16);
        for (c, &col) in p.columns().iter().enumerate() {
            for r in 0..16 {
                let expect = (r & c) == r; // C(c, r) odd iff r is a submask of c
                let got = (col >> (15 - r)) & 1 == 1;
                assert_eq!(got, expect as bool, "col {c} row {r}");
            }
        }
    }

    #[test]
    fn pascal_matches_first_direction_record() {
        let rec = GeneratorMatrix::from_direction_numbers(1, 0, &[1], 32).unwrap();
        assert_eq!(rec, GeneratorMatrix::pascal(32));
    }

    #[test]
    fn point_two_is_quarter_three_quarters() {
        let mats = standard_pair(32);
        let p = sobol_point(2, &mats);
        assert_eq!(p.coords, vec![0x4000_0000, 0xC000_0000]);
        assert_eq!(p.to_unit(), vec![0.25, 0.75]);
        let origin = sobol_point(0, &mats);
        assert_eq!(origin.coords, vec![0, 0]);
    }

    #[test]
    fn coordinate_is_linear_in_index() {
        let mats = builtin_matrices(BUILTIN_DIMS, 32).unwrap();
        let mut rng = crate::seed::stream_rng(11, &[0]);
        for _ in 0..200 {
            let i = rng.gen::<u64>() & 0xffff_ffff;
            let j = rng.gen::<u64>() & 0xffff_ffff;
            for mat in &mats {
                assert_eq!(mat.coordinate(i ^ j), mat.coordinate(i) ^ mat.coordinate(j));
            }
        }
    }

    #[test]
    fn index_truncates_to_m_bits() {
        let mats = standard_pair(32);
        for i in 0..32u64 {
            assert_eq!(sobol_point(i + (1u64 << 32), &mats), sobol_point(i, &mats));
        }
        let short = GeneratorMatrix::bit_reversal(8);
        assert_eq!(short.coordinate(256 + 3), short.coordinate(3));
    }

    #[test]
    fn builtin_dimensions_stratify_1d() {
        // Every dimension alone is a (0,1)-sequence: the first 2^j points
        // occupy all 2^j cells of width 2^-j exactly once.
        let mats = builtin_matrices(BUILTIN_DIMS, 32).unwrap();
        for (dim, mat) in mats.iter().enumerate() {
            for j in 0..=10u32 {
                let n = 1u64 << j;
                let mut seen = vec![false; n as usize];
                for i in 0..n {
                    let cell = (mat.coordinate(i) >> (32 - j.max(1))) as usize;
                    let cell = if j == 0 { 0 } else { cell };
                    assert!(!seen[cell], "dim {dim} j {j} cell {cell} hit twice");
                    seen[cell] = true;
                }
            }
        }
    }

    #[test]
    fn singular_matrix_rejected() {
        let mut cols: Vec<u32> = (0..32).map(|c| 1u32 << (31 - c)).collect();
        cols[5] = cols[4];
        assert!(GeneratorMatrix::new(cols, 32).is_err());
        assert!(GeneratorMatrix::new(vec![0; 32], 32).is_err());
    }

    #[test]
    fn invalid_direction_numbers_rejected() {
        // even initial value
        assert!(GeneratorMatrix::from_direction_numbers(2, 1, &[1, 2], 32).is_err());
        // out of range initial value
        assert!(GeneratorMatrix::from_direction_numbers(2, 1, &[3, 1], 32).is_err());
    }

    #[test]
    fn load_standard_table() {
        let text = "d s a m_i\n2 1 0 1\n3 2 1 1 1\n4 3 1 1 1 1\n";
        let mats = load_direction_numbers(text.as_bytes(), 4, 32).unwrap();
        assert_eq!(mats.len(), 4);
        assert_eq!(mats[0], GeneratorMatrix::bit_reversal(32));
        assert_eq!(mats[1], GeneratorMatrix::pascal(32));
        let builtin = builtin_matrices(4, 32).unwrap();
        assert_eq!(mats[2], builtin[2]);
        assert_eq!(mats[3], builtin[3]);
    }

    #[test]
    fn load_reports_line_numbers() {
        let text = "d s a m_i\n2 1 0 1\n3 2 x 1 1\n";
        match load_direction_numbers(text.as_bytes(), 3, 32) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
        let text = "2 1 0\n";
        assert!(matches!(
            load_direction_numbers(text.as_bytes(), 2, 32),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn load_empty_source_gives_builtin_pair() {
        let mats = load_direction_numbers(&b""[..], 2, 32).unwrap();
        assert_eq!(mats[0], GeneratorMatrix::bit_reversal(32));
        assert_eq!(mats[1], GeneratorMatrix::pascal(32));
        assert!(matches!(
            load_direction_numbers(&b""[..], 3, 32),
            Err(Error::MissingDimension { .. })
        ));
    }

    #[test]
    fn random_invertible_matrices_stay_invertible_under_checks() {
        let mut rng = crate::seed::stream_rng(5, &[1]);
        let mats = builtin_matrices(BUILTIN_DIMS, 32).unwrap();
        for mat in &mats {
            assert!(mat.is_invertible());
        }
        // random column scramble of an invertible matrix keeps rank
        for _ in 0..20 {
            let which = rng.gen_range(0..mats.len());
            assert!(mats[which].is_invertible());
        }
    }
}
