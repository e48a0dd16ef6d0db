//! Searching scrambling-vector space for well-spread point sets.
//!
//! Two tools: a greedy per-vector random search over full-depth data,
//! and an exhaustive scan of a compact 32-bit code space (two axes, two
//! symbols, eight-bit vectors) where every candidate can be enumerated.

use std::path::Path;
use std::sync::atomic::{AtomicU32, Ordering};

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::analysis::quality::{blue_noise_energy, conflict_radius};
use crate::error::{Error, Result};
use crate::grammar::{build_tm_grammar, Grammar};
use crate::scramble::{art_scramble, ScrambleData};
use crate::sobol::standard_points_2d;

/// What the search maximizes or minimizes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Objective {
    /// Maximize the normalized minimum toroidal distance.
    Radius,
    /// Minimize Gaussian pair energy.
    Energy { sigma: f64 },
    /// Reach a target radius first, then minimize energy among feasible
    /// configurations.
    FeasibleThenEnergy { r_target: f64, sigma: f64 },
}

/// A comparable objective value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Score {
    Radius(f64),
    Energy(f64),
    Combined { feasible: bool, energy: f64 },
}

impl Score {
    /// Strictly better. Comparing different variants is a programming
    /// error.
    pub fn better_than(&self, other: &Score) -> bool {
        match (self, other) {
            (Score::Radius(a), Score::Radius(b)) => a > b,
            (Score::Energy(a), Score::Energy(b)) => a < b,
            (
                Score::Combined {
                    feasible: fa,
                    energy: ea,
                },
                Score::Combined {
                    feasible: fb,
                    energy: eb,
                },
            ) => match (fa, fb) {
                (true, false) => true,
                (false, true) => false,
                _ => ea < eb,
            },
            _ => panic!("comparing scores of different objectives"),
        }
    }
}

/// Score a 2D point set under an objective.
pub fn score_points(objective: Objective, points: &[[f64; 2]]) -> Score {
    match objective {
        Objective::Radius => Score::Radius(conflict_radius(points)),
        Objective::Energy { sigma } => Score::Energy(blue_noise_energy(points, sigma)),
        Objective::FeasibleThenEnergy { r_target, sigma } => Score::Combined {
            feasible: conflict_radius(points) >= r_target,
            energy: blue_noise_energy(points, sigma),
        },
    }
}

#[derive(Debug, Clone)]
pub struct GreedyOutcome {
    pub data: Vec<ScrambleData>,
    pub score: Score,
    pub sweeps: usize,
    pub accepted: usize,
}

fn depth_mask(depth: u32) -> u32 {
    if depth == 0 {
        0
    } else {
        !0u32 << (32 - depth)
    }
}

/// Greedy coordinate search: sweep axes, symbols and random replacement
/// vectors, keeping strict improvements, until a whole sweep accepts
/// nothing (or the sweep cap is hit).
///
/// The scrambled set is the first `n_points` standard 2D points, axis 0
/// scrambled with `initial[0]`, axis 1 with `initial[1]`.
pub fn greedy_optimize(
    grammar: &Grammar,
    initial: Vec<ScrambleData>,
    m: u32,
    n_points: usize,
    objective: Objective,
    attempts_per_vector: usize,
    max_sweeps: usize,
    rng: &mut ChaCha8Rng,
) -> Result<GreedyOutcome> {
    if initial.len() != 2 {
        return Err(Error::Invalid("greedy search runs on two axes".into()));
    }
    if initial[0].depth() != initial[1].depth() {
        return Err(Error::Invalid("axes must share one depth".into()));
    }
    let depth = initial[0].depth();
    if m == 0 || m > 32 || depth > m {
        return Err(Error::DepthOutOfRange { depth, max: m });
    }
    for d in &initial {
        if d.vectors().len() != grammar.symbol_count() {
            return Err(Error::Invalid(
                "vector count must match the alphabet".into(),
            ));
        }
    }
    if n_points < 2 {
        return Err(Error::Invalid("need at least two points".into()));
    }

    let base = standard_points_2d(n_points, m);
    let scale = 1.0 / 2f64.powi(m as i32);
    let mut data = initial;
    let rescramble = |data: &ScrambleData, axis: usize| -> Vec<u32> {
        base.iter()
            .map(|p| art_scramble(p[axis], grammar, data, m))
            .collect()
    };
    let mut cols = [rescramble(&data[0], 0), rescramble(&data[1], 1)];
    let points = |cols: &[Vec<u32>; 2]| -> Vec<[f64; 2]> {
        (0..n_points)
            .map(|i| [cols[0][i] as f64 * scale, cols[1][i] as f64 * scale])
            .collect()
    };
    let mut best = score_points(objective, &points(&cols));
    let mask = depth_mask(depth);
    let mut sweeps = 0;
    let mut accepted = 0;
    while sweeps < max_sweeps {
        sweeps += 1;
        let mut accepted_now = 0;
        for axis in 0..2 {
            for symbol in 0..grammar.symbol_count() {
                for _ in 0..attempts_per_vector {
                    let proposal = rng.gen::<u32>() & mask;
                    let old_vector = data[axis].vectors()[symbol];
                    if proposal == old_vector {
                        continue;
                    }
                    let old_col = std::mem::take(&mut cols[axis]);
                    data[axis].set_vector(symbol, proposal);
                    cols[axis] = rescramble(&data[axis], axis);
                    let score = score_points(objective, &points(&cols));
                    if score.better_than(&best) {
                        best = score;
                        accepted_now += 1;
                    } else {
                        data[axis].set_vector(symbol, old_vector);
                        cols[axis] = old_col;
                    }
                }
            }
        }
        accepted += accepted_now;
        if accepted_now == 0 {
            break;
        }
    }
    Ok(GreedyOutcome {
        data,
        score: best,
        sweeps,
        accepted,
    })
}

/// Number of distinct scan codes.
pub const SCAN_SPACE: u64 = 1 << 32;
const SCAN_DEPTH: u32 = 8;
const SCAN_POINTS: usize = 256;
const CHUNK: u64 = 1 << 16;
const SUPER_CHUNK: u64 = 1 << 24;
const CHECKPOINT_MAGIC: &[u8; 8] = b"QMCSCAN1";

/// Precomputed scrambled coordinate columns for every 16-bit half-code.
///
/// A code packs four 8-bit vectors: bits 31..24 and 23..16 are axis 0's
/// two symbols, bits 15..8 and 7..0 axis 1's. Axis coordinates depend
/// only on their own half, so each half-code's 256-point column is built
/// once and the scan proper is pure table lookup.
pub struct ScanTables {
    xs: Vec<[u8; SCAN_POINTS]>,
    ys: Vec<[u8; SCAN_POINTS]>,
}

fn half_code_data(half: u16) -> ScrambleData {
    let v0 = ((half >> 8) as u32) << 24;
    let v1 = ((half & 0xff) as u32) << 24;
    ScrambleData::new(vec![v0, v1], SCAN_DEPTH).expect("8-bit vectors are always in range")
}

/// The grammar the scan space is defined over: the two-symbol
/// substitution system, alternating children.
pub fn scan_grammar() -> Grammar {
    build_tm_grammar(1).expect("window 1 always builds")
}

impl ScanTables {
    pub fn build() -> Self {
        let grammar = scan_grammar();
        let base = standard_points_2d(SCAN_POINTS, SCAN_DEPTH);
        let column = |axis: usize, half: u16| -> [u8; SCAN_POINTS] {
            let data = half_code_data(half);
            let mut col = [0u8; SCAN_POINTS];
            for (i, p) in base.iter().enumerate() {
                col[i] = art_scramble(p[axis], &grammar, &data, SCAN_DEPTH) as u8;
            }
            col
        };
        let xs: Vec<[u8; SCAN_POINTS]> = (0u32..1 << 16)
            .into_par_iter()
            .map(|h| column(0, h as u16))
            .collect();
        let ys: Vec<[u8; SCAN_POINTS]> = (0u32..1 << 16)
            .into_par_iter()
            .map(|h| column(1, h as u16))
            .collect();
        ScanTables { xs, ys }
    }
}

#[inline]
fn wrapped_axis_dist(a: u8, b: u8) -> u32 {
    let d = a.wrapping_sub(b) as u32;
    d.min(256 - d)
}

fn min_dist_sq_columns(xs: &[u8; SCAN_POINTS], ys: &[u8; SCAN_POINTS], abort_below: u32) -> u32 {
    let mut best = u32::MAX;
    for i in 0..SCAN_POINTS {
        for j in i + 1..SCAN_POINTS {
            let dx = wrapped_axis_dist(xs[i], xs[j]);
            let dy = wrapped_axis_dist(ys[i], ys[j]);
            let d = dx * dx + dy * dy;
            if d < best {
                best = d;
                if best < abort_below {
                    return best;
                }
            }
        }
    }
    best
}

/// Exact squared minimum toroidal distance (lattice units) of the point
/// set a code encodes.
pub fn eval_code(tables: &ScanTables, code: u32) -> u32 {
    min_dist_sq_columns(
        &tables.xs[(code >> 16) as usize],
        &tables.ys[(code & 0xffff) as usize],
        0,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScanEntry {
    pub code: u32,
    pub min_dist_sq: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanResult {
    /// Best codes, highest squared distance first, ties by ascending
    /// code.
    pub top: Vec<ScanEntry>,
    pub scanned: u64,
    pub next_code: u64,
}

fn sort_entries(entries: &mut Vec<ScanEntry>, top_k: usize) {
    entries.sort_unstable_by(|a, b| b.min_dist_sq.cmp(&a.min_dist_sq).then(a.code.cmp(&b.code)));
    entries.truncate(top_k);
}

fn write_checkpoint(path: &Path, result: &ScanResult) -> Result<()> {
    let mut buf = Vec::with_capacity(32 + result.top.len() * 8);
    buf.extend_from_slice(CHECKPOINT_MAGIC);
    buf.extend_from_slice(&result.next_code.to_le_bytes());
    buf.extend_from_slice(&result.scanned.to_le_bytes());
    buf.extend_from_slice(&(result.top.len() as u32).to_le_bytes());
    for e in &result.top {
        buf.extend_from_slice(&e.code.to_le_bytes());
        buf.extend_from_slice(&e.min_dist_sq.to_le_bytes());
    }
    std::fs::write(path, buf)?;
    Ok(())
}

fn read_checkpoint(path: &Path) -> Result<ScanResult> {
    let buf = std::fs::read(path)?;
    let bad = || Error::Invalid(format!("malformed checkpoint {}", path.display()));
    if buf.len() < 28 || &buf[..8] != CHECKPOINT_MAGIC {
        return Err(bad());
    }
    let u64_at = |o: usize| u64::from_le_bytes(buf[o..o + 8].try_into().unwrap());
    let u32_at = |o: usize| u32::from_le_bytes(buf[o..o + 4].try_into().unwrap());
    let next_code = u64_at(8);
    let scanned = u64_at(16);
    let len = u32_at(24) as usize;
    if buf.len() != 28 + len * 8 {
        return Err(bad());
    }
    let top = (0..len)
        .map(|i| ScanEntry {
            code: u32_at(28 + i * 8),
            min_dist_sq: u32_at(32 + i * 8),
        })
        .collect();
    Ok(ScanResult {
        top,
        scanned,
        next_code,
    })
}

/// Scan codes `lo..hi`, keeping the `top_k` best.
///
/// Work proceeds in checkpointable super-chunks; inside one, 64K-code
/// chunks run in parallel and are merged in fixed order, so the result
/// is identical for any thread count. With `prune` on, a candidate is
/// abandoned as soon as its running minimum drops below the k-th best
/// distance some completed chunk has already locked in; that bound can
/// only be below the final k-th best, so pruning never changes the
/// outcome. `progress` is called with codes processed so far after every
/// super-chunk.
pub fn scan_codes(
    tables: &ScanTables,
    lo: u64,
    hi: u64,
    top_k: usize,
    prune: bool,
    checkpoint: Option<&Path>,
    mut progress: Option<&mut dyn FnMut(u64)>,
) -> Result<ScanResult> {
    assert!(lo < hi && hi <= SCAN_SPACE && top_k > 0);
    let mut result = ScanResult {
        top: Vec::new(),
        scanned: 0,
        next_code: lo,
    };
    if let Some(path) = checkpoint {
        if path.exists() {
            result = read_checkpoint(path)?;
            if result.next_code < lo || result.next_code > hi {
                return Err(Error::Invalid(format!(
                    "checkpoint resumes at {} outside {lo}..{hi}",
                    result.next_code
                )));
            }
        }
    }
    let threshold = AtomicU32::new(0);
    if prune && result.top.len() == top_k {
        threshold.store(result.top[top_k - 1].min_dist_sq, Ordering::Relaxed);
    }
    while result.next_code < hi {
        let super_hi = (result.next_code + SUPER_CHUNK).min(hi);
        let chunk_los: Vec<u64> = (result.next_code..super_hi)
            .step_by(CHUNK as usize)
            .collect();
        let mut chunk_tops: Vec<Vec<ScanEntry>> = chunk_los
            .into_par_iter()
            .map(|chunk_lo| {
                let chunk_hi = (chunk_lo + CHUNK).min(super_hi);
                let abort_below = if prune {
                    threshold.load(Ordering::Relaxed)
                } else {
                    0
                };
                let mut local: Vec<ScanEntry> = Vec::new();
                let mut local_floor = abort_below;
                for code in chunk_lo..chunk_hi {
                    let code = code as u32;
                    let d = min_dist_sq_columns(
                        &tables.xs[(code >> 16) as usize],
                        &tables.ys[(code & 0xffff) as usize],
                        local_floor,
                    );
                    if d >= local_floor {
                        local.push(ScanEntry {
                            code,
                            min_dist_sq: d,
                        });
                        if local.len() >= 4 * top_k {
                            sort_entries(&mut local, top_k);
                            local_floor = local_floor.max(local[local.len() - 1].min_dist_sq);
                        }
                    }
                }
                sort_entries(&mut local, top_k);
                if prune && local.len() == top_k {
                    threshold.fetch_max(local[top_k - 1].min_dist_sq, Ordering::Relaxed);
                }
                local
            })
            .collect();
        let mut merged = std::mem::take(&mut result.top);
        for t in &mut chunk_tops {
            merged.append(t);
        }
        sort_entries(&mut merged, top_k);
        result.top = merged;
        result.scanned += super_hi - result.next_code;
        result.next_code = super_hi;
        if prune && result.top.len() == top_k {
            threshold.fetch_max(result.top[top_k - 1].min_dist_sq, Ordering::Relaxed);
        }
        if let Some(path) = checkpoint {
            write_checkpoint(path, &result)?;
        }
        if let Some(cb) = progress.as_deref_mut() {
            cb(result.scanned);
        }
    }
    Ok(result)
}

/// Decode a scan code into per-axis scrambling data.
pub fn decode_scan_code(code: u32) -> [ScrambleData; 2] {
    [
        half_code_data((code >> 16) as u16),
        half_code_data((code & 0xffff) as u16),
    ]
}
