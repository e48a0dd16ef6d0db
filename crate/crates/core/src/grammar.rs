//! Binary pair grammars over integer alphabets.
//!
//! A grammar maps each symbol `s` in `0..n` to an ordered pair of symbols
//! `(left, right)`. Walking a scrambling tree, the node carrying `s` hands
//! `left` to its 0-child and `right` to its 1-child. Three constructions
//! are provided: substitution grammars from sliding windows over the
//! Thue-Morse word, breadth-first "ordered" grammars whose top levels are
//! forced, and uniform random grammars with optional structural
//! constraints.

use std::collections::HashMap;
use std::fmt::Write as _;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// A context-free pair grammar: `productions[s] = (left, right)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grammar {
    productions: Vec<(u32, u32)>,
    start: u32,
}

impl Grammar {
    pub fn new(productions: Vec<(u32, u32)>, start: u32) -> Result<Self> {
        let n = productions.len() as u32;
        if n == 0 {
            return Err(Error::Invalid("grammar needs at least one symbol".into()));
        }
        if start >= n {
            return Err(Error::Invalid(format!(
                "start symbol {start} out of range for alphabet of {n}"
            )));
        }
        for (s, &(l, r)) in productions.iter().enumerate() {
            if l >= n || r >= n {
                return Err(Error::Invalid(format!(
                    "production {s} -> ({l}, {r}) leaves the alphabet of {n}"
                )));
            }
        }
        Ok(Grammar { productions, start })
    }

    /// Alphabet size.
    pub fn symbol_count(&self) -> usize {
        self.productions.len()
    }

    pub fn start(&self) -> u32 {
        self.start
    }

    pub fn productions(&self) -> &[(u32, u32)] {
        &self.productions
    }

    /// Child symbol for descending by `bit` from a node carrying `symbol`.
    #[inline]
    pub fn child(&self, symbol: u32, bit: u32) -> u32 {
        let (l, r) = self.productions[symbol as usize];
        if bit == 0 {
            l
        } else {
            r
        }
    }

    /// Serialize: `n start` on the first line, then one `left right` line
    /// per symbol.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {}", self.symbol_count(), self.start);
        for &(l, r) in &self.productions {
            let _ = writeln!(out, "{l} {r}");
        }
        out
    }

    /// Parse the `to_text` format. Exact round-trip.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or_else(|| Error::Parse {
            line: 1,
            msg: "empty grammar file".into(),
        })?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(Error::Parse {
                line: 1,
                msg: "header must be `n start`".into(),
            });
        }
        let parse_u32 = |tok: &str, line: usize| -> Result<u32> {
            tok.parse().map_err(|e| Error::Parse {
                line,
                msg: format!("{e}"),
            })
        };
        let n = parse_u32(fields[0], 1)? as usize;
        let start = parse_u32(fields[1], 1)?;
        let mut productions = Vec::with_capacity(n);
        for want in 0..n {
            let (line_no, line) = lines.next().ok_or_else(|| Error::Parse {
                line: want + 2,
                msg: format!("expected {n} production lines"),
            })?;
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 2 {
                return Err(Error::Parse {
                    line: line_no + 1,
                    msg: "production line must be `left right`".into(),
                });
            }
            productions.push((
                parse_u32(fields[0], line_no + 1)?,
                parse_u32(fields[1], line_no + 1)?,
            ));
        }
        Grammar::new(productions, start)
    }
}

/// Structural findings for a grammar.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GrammarReport {
    /// Symbols whose production is a repeated pair `(a, a)`.
    pub twin_rules: Vec<u32>,
    /// Symbols unreachable from the start symbol.
    pub unreachable: Vec<u32>,
    /// Symbols appearing on no production's right-hand side.
    pub unproduced: Vec<u32>,
    /// Whether the reachable set is a proper subset of the alphabet.
    pub fragmented: bool,
}

impl GrammarReport {
    pub fn is_clean(&self) -> bool {
        self.twin_rules.is_empty()
            && self.unreachable.is_empty()
            && self.unproduced.is_empty()
            && !self.fragmented
    }
}

/// Inspect a grammar for twin rules, unreachable symbols, and symbols
/// never produced.
pub fn validate_grammar(g: &Grammar) -> GrammarReport {
    let n = g.symbol_count();
    let mut twin_rules = Vec::new();
    let mut produced = vec![false; n];
    for (s, &(l, r)) in g.productions().iter().enumerate() {
        if l == r {
            twin_rules.push(s as u32);
        }
        produced[l as usize] = true;
        produced[r as usize] = true;
    }
    let mut reachable = vec![false; n];
    let mut stack = vec![g.start()];
    reachable[g.start() as usize] = true;
    while let Some(s) = stack.pop() {
        let (l, r) = g.productions()[s as usize];
        for c in [l, r] {
            if !reachable[c as usize] {
                reachable[c as usize] = true;
                stack.push(c);
            }
        }
    }
    let unreachable: Vec<u32> = (0..n as u32).filter(|&s| !reachable[s as usize]).collect();
    let unproduced: Vec<u32> = (0..n as u32).filter(|&s| !produced[s as usize]).collect();
    let fragmented = !unreachable.is_empty();
    GrammarReport {
        twin_rules,
        unreachable,
        unproduced,
        fragmented,
    }
}

/// Prefix of the Thue-Morse word: character `i` is the parity of the
/// popcount of `i`.
pub fn thue_morse_word(length: usize) -> Vec<u8> {
    (0..length).map(|i| (i.count_ones() & 1) as u8).collect()
}

/// Apply the substitution 0 -> 01, 1 -> 10 to a word.
fn tm_substitute(word: &[u8]) -> Vec<u8> {
    let mut out = Vec::with_capacity(word.len() * 2);
    for &b in word {
        out.push(b);
        out.push(1 - b);
    }
    out
}

/// Substitution grammar over the distinct length-`window` factors of the
/// Thue-Morse word.
///
/// Symbols are the factors in order of first occurrence; the production of
/// a factor `w` is the pair of windows `[0, window)` and `[1, window + 1)`
/// of its substitution image. The start symbol is the factor at position 0.
pub fn build_tm_grammar(window: usize) -> Result<Grammar> {
    if window == 0 || window > 1 << 12 {
        return Err(Error::Invalid(format!(
            "window length {window} out of supported range"
        )));
    }

    fn collect(
        prefix_len: usize,
        window: usize,
        factors: &mut Vec<Vec<u8>>,
        index: &mut HashMap<Vec<u8>, u32>,
    ) {
        let word = thue_morse_word(prefix_len);
        for start in 0..=word.len() - window {
            let w = &word[start..start + window];
            if !index.contains_key(w) {
                index.insert(w.to_vec(), factors.len() as u32);
                factors.push(w.to_vec());
            }
        }
    }

    // Enumerate factors over a prefix, doubling its length until the
    // factor set stops growing. First-occurrence order is preserved by
    // rescans because a longer prefix revisits positions in the same order.
    let mut prefix_len = (1usize << 12).max(64 * window);
    let mut factors: Vec<Vec<u8>> = Vec::new();
    let mut index: HashMap<Vec<u8>, u32> = HashMap::new();
    collect(prefix_len, window, &mut factors, &mut index);
    loop {
        let before = factors.len();
        prefix_len *= 2;
        collect(prefix_len, window, &mut factors, &mut index);
        if factors.len() == before {
            break;
        }
    }

    let mut productions = Vec::with_capacity(factors.len());
    for w in &factors {
        let image = tm_substitute(w);
        let left = index[&image[0..window]];
        let right = index[&image[1..window + 1]];
        productions.push((left, right));
    }
    let start = index[&thue_morse_word(window)];
    Grammar::new(productions, start)
}

/// Breadth-first "ordered" grammar: children of symbol `k` are `2k + 1`
/// and `2k + 2` while in range; remaining entries are drawn from `rng`
/// avoiding twin rules and, when feasible, leaving no symbol unproduced.
pub fn build_ordered_grammar(n: usize, rng: &mut ChaCha8Rng) -> Result<Grammar> {
    if n == 0 || n > u32::MAX as usize {
        return Err(Error::Invalid(format!("alphabet size {n} out of range")));
    }
    if n == 1 {
        // the only possible production is the twin (0, 0)
        return Grammar::new(vec![(0, 0)], 0);
    }
    let nn = n as u32;
    let draw_avoiding = |rng: &mut ChaCha8Rng, avoid: Option<u32>| -> u32 {
        for _ in 0..10_000 {
            let v = rng.gen_range(0..nn);
            if Some(v) != avoid {
                return v;
            }
        }
        (avoid.unwrap_or(nn - 1) + 1) % nn
    };
    let mut table: Vec<(u32, u32)> = Vec::with_capacity(n);
    for k in 0..n as u64 {
        let forced_l = 2 * k + 1;
        let forced_r = 2 * k + 2;
        let left = if forced_l < nn as u64 {
            forced_l as u32
        } else {
            draw_avoiding(rng, None)
        };
        let right = if forced_r < nn as u64 {
            forced_r as u32
        } else {
            draw_avoiding(rng, Some(left))
        };
        table.push((left, right));
    }
    // Forced slots already produce 1..n-1; if the random fill missed the
    // root symbol, seat it in the last rule, whose slots are always free.
    // Its overwritten value stays produced (or was 0 itself), and its left
    // entry cannot be 0 here, so no twin forms.
    if !table.iter().any(|&(l, r)| l == 0 || r == 0) {
        table[n - 1].1 = 0;
    }
    Grammar::new(table, 0)
}

/// Uniform random grammar with start symbol 0. With `constrained` set,
/// resamples until the report is clean (no twins, nothing unreachable or
/// unproduced) and errors once the attempt budget is spent.
pub fn build_random_grammar(n: usize, rng: &mut ChaCha8Rng, constrained: bool) -> Result<Grammar> {
    if n == 0 || n > u32::MAX as usize {
        return Err(Error::Invalid(format!("alphabet size {n} out of range")));
    }
    let nn = n as u32;
    const ATTEMPTS: usize = 1000;
    for _ in 0..ATTEMPTS {
        let table: Vec<(u32, u32)> = (0..n)
            .map(|_| (rng.gen_range(0..nn), rng.gen_range(0..nn)))
            .collect();
        let g = Grammar::new(table, 0)?;
        if !constrained || validate_grammar(&g).is_clean() {
            return Ok(g);
        }
    }
    Err(Error::ConstraintsUnsatisfied {
        attempts: ATTEMPTS,
        symbols: n,
    })
}
