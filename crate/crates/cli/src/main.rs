//! Command line driver for the point-set library.
//!
//! Every command is deterministic given its flags: the master `--seed`
//! is mixed with fixed labels to derive independent streams for grammar
//! construction, per-dimension scrambling data, and per-realization
//! replicas, so repeated runs produce byte-identical output.

use std::fs;
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::Rng;

use artowen::analysis::converge::{fit_log_slope, mse_curve};
use artowen::analysis::spectrum::{average_periodogram, radial_average};
use artowen::analysis::zoneplate;
use artowen::gf2::Gf2System;
use artowen::grammar::{
    build_ordered_grammar, build_random_grammar, build_tm_grammar, validate_grammar, Grammar,
};
use artowen::optimize::{greedy_optimize, scan_codes, Objective, ScanTables, Score, SCAN_SPACE};
use artowen::scramble::{
    enumerate_pixel_samples, expand_to_tree, ArtOwenScrambler, ScrambleData, Scrambling,
};
use artowen::seed::{derive_seed, stream_rng};
use artowen::sobol::{builtin_matrices, load_direction_numbers, sobol_point, standard_pair};
use artowen::tree::ExplicitTree;

/// Stream labels mixed into the master seed. Keep these stable: outputs
/// are only reproducible across versions if the derivations stay put.
mod labels {
    pub const ART: u64 = 1;
    pub const XOR: u64 = 2;
    pub const BURLEY: u64 = 3;
    pub const TREE: u64 = 4;
    pub const RANDOM_GRAMMAR: u64 = 10;
    pub const ORDERED_GRAMMAR: u64 = 11;
    pub const TREE_TARGET: u64 = 12;
    pub const REALIZATION: u64 = 20;
    pub const UNIFORM: u64 = 30;
    pub const CONVERGE_ART: u64 = 31;
    pub const OPT_INIT: u64 = 40;
    pub const OPT_SEARCH: u64 = 41;
}

#[derive(Parser)]
#[command(
    name = "artowen",
    version,
    about = "grammar-scrambled low-discrepancy point sets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate (optionally scrambled) Sobol points
    Points(PointsArgs),
    /// Build, validate, or solve for grammars
    #[command(subcommand)]
    Grammar(GrammarCmd),
    /// Render or report the GF(2) bit-influence map of a grammar
    Gfmap(GfmapArgs),
    /// Averaged periodogram of scrambled point sets
    Spectrum(SpectrumArgs),
    /// Zone plate test image
    Zoneplate(ZoneplateArgs),
    /// Integration error versus sample count for several samplers
    Converge(ConvergeArgs),
    /// Greedy search over scrambling data tables
    Optimize(OptimizeArgs),
    /// Exhaustive scan of 32-bit scrambling codes
    Scan(ScanArgs),
    /// List the sample indices that land in one pixel
    Enumerate(EnumerateArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GrammarKind {
    Tm,
    Ordered,
    Random,
}

#[derive(Args, Clone)]
struct GrammarOpts {
    /// grammar family
    #[arg(long, value_enum, default_value_t = GrammarKind::Tm)]
    grammar: GrammarKind,
    /// factor length for the tm family
    #[arg(long, default_value_t = 2)]
    window: usize,
    /// alphabet size for the ordered and random families
    #[arg(long, default_value_t = 16)]
    symbols: usize,
    /// reject random grammars until validation is clean
    #[arg(long)]
    strict: bool,
    /// read the grammar from a file instead of building one
    #[arg(long, value_name = "FILE")]
    grammar_file: Option<PathBuf>,
}

impl GrammarOpts {
    fn build(&self, master: u64) -> Result<Grammar> {
        if let Some(path) = &self.grammar_file {
            return read_grammar(path);
        }
        let g = match self.grammar {
            GrammarKind::Tm => build_tm_grammar(self.window)?,
            GrammarKind::Ordered => {
                let mut rng = stream_rng(master, &[labels::ORDERED_GRAMMAR]);
                build_ordered_grammar(self.symbols, &mut rng)?
            }
            GrammarKind::Random => {
                let mut rng = stream_rng(master, &[labels::RANDOM_GRAMMAR]);
                build_random_grammar(self.symbols, &mut rng, self.strict)?
            }
        };
        Ok(g)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ScrambleKind {
    None,
    Art,
    Xor,
    Burley,
    Tree,
}

#[derive(Args, Clone)]
struct ScrambleOpts {
    /// scrambling applied to each coordinate
    #[arg(long, value_enum, default_value_t = ScrambleKind::Art)]
    scramble: ScrambleKind,
    #[command(flatten)]
    grammar: GrammarOpts,
    /// scrambled tree depth in bits
    #[arg(long, default_value_t = 16)]
    depth: u32,
    /// coordinate resolution in bits
    #[arg(long, default_value_t = 32)]
    m: u32,
}

impl ScrambleOpts {
    /// Build the scrambling for `dims` dimensions. The grammar is built
    /// from `grammar_master` and the per-dimension data from `master`,
    /// so replicas can share one grammar.
    fn build_with(&self, dims: usize, grammar_master: u64, master: u64) -> Result<Scrambling> {
        let m = self.m;
        if m == 0 || m > 32 {
            bail!("--m must be between 1 and 32");
        }
        let scr = match self.scramble {
            ScrambleKind::None => Scrambling::None,
            ScrambleKind::Art => {
                let g = self.grammar.build(grammar_master)?;
                Scrambling::Art(ArtOwenScrambler::seeded(
                    g,
                    dims,
                    self.depth,
                    m,
                    derive_seed(master, &[labels::ART]),
                )?)
            }
            ScrambleKind::Xor => {
                let mut rng = stream_rng(master, &[labels::XOR]);
                let mask = if m == 32 { !0u32 } else { (1u32 << m) - 1 };
                let codes = (0..dims).map(|_| rng.gen::<u32>() & mask).collect();
                Scrambling::Xor { codes, m }
            }
            ScrambleKind::Burley => {
                let mut rng = stream_rng(master, &[labels::BURLEY]);
                let seeds = (0..dims).map(|_| rng.gen::<u32>()).collect();
                Scrambling::Burley { seeds, m }
            }
            ScrambleKind::Tree => {
                if self.depth > m {
                    bail!("--depth must not exceed --m");
                }
                let trees = (0..dims)
                    .map(|dim| {
                        let mut rng = stream_rng(master, &[labels::TREE, dim as u64]);
                        ExplicitTree::random(self.depth, &mut rng)
                    })
                    .collect::<artowen::Result<Vec<_>>>()?;
                Scrambling::Tree { trees, m }
            }
        };
        Ok(scr)
    }

    fn build(&self, dims: usize, master: u64) -> Result<Scrambling> {
        self.build_with(dims, master, master)
    }

    fn unit_points_2d(&self, n: usize, master: u64) -> Result<Vec<[f64; 2]>> {
        let scr = self.build(2, master)?;
        Ok(to_unit_2d(&scr.points_2d(n, self.m), self.m))
    }
}

fn to_unit_2d(points: &[[u32; 2]], m: u32) -> Vec<[f64; 2]> {
    let scale = (m as f64).exp2().recip();
    points
        .iter()
        .map(|&[x, y]| [x as f64 * scale, y as f64 * scale])
        .collect()
}

#[derive(Clone, Copy, ValueEnum)]
enum PointFormat {
    Txt,
    Bin,
}

#[derive(Args)]
struct PointsArgs {
    /// number of points
    #[arg(long)]
    n: u64,
    /// number of dimensions
    #[arg(long, default_value_t = 2)]
    dims: usize,
    #[command(flatten)]
    scramble: ScrambleOpts,
    /// master seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// text (one line per point) or little-endian f64 binary
    #[arg(long, value_enum, default_value_t = PointFormat::Txt)]
    format: PointFormat,
    /// direction-number file for dimensions beyond the built-in set
    #[arg(long, value_name = "FILE")]
    direction_numbers: Option<PathBuf>,
    /// output file (stdout if omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum GrammarCmd {
    /// Construct a grammar and print its text form
    Build(GrammarBuildArgs),
    /// Check a grammar file for structural defects
    Validate(GrammarValidateArgs),
    /// Solve for data tables reproducing an explicit flip-bit tree
    Solve(GrammarSolveArgs),
}

#[derive(Args)]
struct GrammarBuildArgs {
    #[command(flatten)]
    opts: GrammarOpts,
    /// master seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// output file (stdout if omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GrammarValidateArgs {
    /// grammar file to inspect
    file: PathBuf,
}

#[derive(Args)]
struct GrammarSolveArgs {
    /// grammar file
    file: PathBuf,
    /// target tree file
    #[arg(long, value_name = "FILE")]
    tree: Option<PathBuf>,
    /// draw a random target tree of this depth instead
    #[arg(long, value_name = "DEPTH")]
    random_tree_depth: Option<u32>,
    /// master seed for the random target
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// output file for the solved data table (stdout if omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GfmapArgs {
    /// grammar file
    file: PathBuf,
    /// tree depth the map covers
    #[arg(long, default_value_t = 8)]
    depth: u32,
    /// print rank and utilization instead of only the image
    #[arg(long)]
    report: bool,
    /// output PGM file (stdout if omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SpectrumFormat {
    Pgm,
    Csv,
}

#[derive(Args)]
struct SpectrumArgs {
    /// points per realization
    #[arg(long, default_value_t = 256)]
    n: usize,
    /// frequency grid resolution (even)
    #[arg(long, default_value_t = 128)]
    res: usize,
    /// number of averaged realizations
    #[arg(long, default_value_t = 100)]
    realizations: usize,
    #[command(flatten)]
    scramble: ScrambleOpts,
    /// master seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// log-scaled PGM of the grid, or CSV of the radial profile
    #[arg(long, value_enum, default_value_t = SpectrumFormat::Pgm)]
    format: SpectrumFormat,
    /// output file (stdout if omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ZoneplateArgs {
    /// image is 2^k by 2^k pixels
    #[arg(long, default_value_t = 7)]
    k: u32,
    /// total sample count (default four per pixel)
    #[arg(long)]
    n: Option<u64>,
    #[command(flatten)]
    scramble: ScrambleOpts,
    /// master seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// reconstruct per pixel through index enumeration (art only)
    #[arg(long)]
    enumerated: bool,
    /// print the ring bias metric against a dense reference
    #[arg(long)]
    metric: bool,
    /// output PGM file (stdout if omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ConvergeArgs {
    /// comma-separated sample counts
    #[arg(long, value_delimiter = ',', default_value = "64,256,1024,4096")]
    sizes: Vec<usize>,
    /// realizations averaged per sample count
    #[arg(long, default_value_t = 32)]
    realizations: u64,
    #[command(flatten)]
    scramble: ScrambleOpts,
    /// master seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// CSV output file for the raw curves
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ObjectiveKind {
    Radius,
    Energy,
    Feasible,
}

#[derive(Args)]
struct OptimizeArgs {
    /// what the sweep maximizes or minimizes
    #[arg(long, value_enum, default_value_t = ObjectiveKind::Radius)]
    objective: ObjectiveKind,
    /// kernel width for the energy objectives
    #[arg(long, default_value_t = 0.5)]
    sigma: f64,
    /// feasibility radius for the feasible objective
    #[arg(long, default_value_t = 0.2)]
    r_target: f64,
    /// points scored per proposal
    #[arg(long, default_value_t = 256)]
    n: usize,
    #[command(flatten)]
    grammar: GrammarOpts,
    /// data table depth
    #[arg(long, default_value_t = 16)]
    depth: u32,
    /// coordinate resolution in bits
    #[arg(long, default_value_t = 32)]
    m: u32,
    /// proposals per vector per sweep
    #[arg(long, default_value_t = 20)]
    attempts: usize,
    /// sweep cap
    #[arg(long, default_value_t = 50)]
    max_sweeps: usize,
    /// master seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// write the two data tables to OUT.d0 and OUT.d1
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ScanArgs {
    /// first code
    #[arg(long, default_value_t = 0)]
    lo: u64,
    /// one past the last code
    #[arg(long, default_value_t = SCAN_SPACE)]
    hi: u64,
    /// how many best codes to keep
    #[arg(long, default_value_t = 1000)]
    top_k: usize,
    /// checkpoint file, resumed if present
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    /// disable early abandon of dominated codes
    #[arg(long)]
    no_prune: bool,
    /// report progress on stderr
    #[arg(long)]
    progress: bool,
    /// output CSV file (stdout if omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EnumerateArgs {
    /// pixel column on the 2^k grid
    #[arg(long)]
    px: u32,
    /// pixel row on the 2^k grid
    #[arg(long)]
    py: u32,
    /// pixel grid is 2^k by 2^k
    #[arg(long)]
    k: u32,
    /// sample indices 0..n are considered
    #[arg(long)]
    n: u64,
    #[command(flatten)]
    grammar: GrammarOpts,
    /// scrambled tree depth in bits
    #[arg(long, default_value_t = 16)]
    depth: u32,
    /// coordinate resolution in bits
    #[arg(long, default_value_t = 32)]
    m: u32,
    /// master seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// output file (stdout if omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() {
    // Die quietly when the reader of a pipe goes away.
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(1);
        }
    }
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Points(a) => run_points(a)?,
        Command::Grammar(GrammarCmd::Build(a)) => run_grammar_build(a)?,
        Command::Grammar(GrammarCmd::Validate(a)) => return run_grammar_validate(a),
        Command::Grammar(GrammarCmd::Solve(a)) => run_grammar_solve(a)?,
        Command::Gfmap(a) => run_gfmap(a)?,
        Command::Spectrum(a) => run_spectrum(a)?,
        Command::Zoneplate(a) => run_zoneplate(a)?,
        Command::Converge(a) => run_converge(a)?,
        Command::Optimize(a) => run_optimize(a)?,
        Command::Scan(a) => run_scan(a)?,
        Command::Enumerate(a) => run_enumerate(a)?,
    }
    Ok(0)
}

fn read_grammar(path: &Path) -> Result<Grammar> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(Grammar::from_text(&text)?)
}

fn write_output(path: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match path {
        Some(p) => fs::write(p, bytes).with_context(|| format!("writing {}", p.display())),
        None => io::stdout().write_all(bytes).context("writing to stdout"),
    }
}

fn run_points(a: PointsArgs) -> Result<()> {
    let m = a.scramble.m;
    let mats = match &a.direction_numbers {
        Some(p) => {
            let file = fs::File::open(p).with_context(|| format!("reading {}", p.display()))?;
            load_direction_numbers(BufReader::new(file), a.dims, m)?
        }
        None => builtin_matrices(a.dims, m)?,
    };
    let scr = a.scramble.build(a.dims, a.seed)?;
    let scale = (m as f64).exp2().recip();
    let mut out = Vec::new();
    for i in 0..a.n {
        let p = sobol_point(i, &mats);
        for (dim, &c) in p.coords.iter().enumerate() {
            let u = scr.apply(c, dim) as f64 * scale;
            match a.format {
                PointFormat::Txt => {
                    if dim > 0 {
                        out.push(b' ');
                    }
                    out.extend_from_slice(format!("{u:.10}").as_bytes());
                }
                PointFormat::Bin => out.extend_from_slice(&u.to_le_bytes()),
            }
        }
        if matches!(a.format, PointFormat::Txt) {
            out.push(b'\n');
        }
    }
    write_output(a.out.as_deref(), &out)
}

fn run_grammar_build(a: GrammarBuildArgs) -> Result<()> {
    let g = a.opts.build(a.seed)?;
    write_output(a.out.as_deref(), g.to_text().as_bytes())
}

fn run_grammar_validate(a: GrammarValidateArgs) -> Result<i32> {
    let g = read_grammar(&a.file)?;
    let report = validate_grammar(&g);
    let list = |v: &[u32]| {
        if v.is_empty() {
            "none".to_string()
        } else {
            v.iter()
                .map(|s| s.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        }
    };
    println!("symbols: {}", g.symbol_count());
    println!("start: {}", g.start());
    println!("twin rules: {}", list(&report.twin_rules));
    println!("unreachable: {}", list(&report.unreachable));
    println!("unproduced: {}", list(&report.unproduced));
    println!(
        "fragmented: {}",
        if report.fragmented { "yes" } else { "no" }
    );
    if report.is_clean() {
        println!("status: clean");
        Ok(0)
    } else {
        println!("status: defective");
        Ok(1)
    }
}

fn run_grammar_solve(a: GrammarSolveArgs) -> Result<()> {
    let g = read_grammar(&a.file)?;
    let tree = match (&a.tree, a.random_tree_depth) {
        (Some(path), None) => {
            let text =
                fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            ExplicitTree::parse(&text)?
        }
        (None, Some(depth)) => {
            let mut rng = stream_rng(a.seed, &[labels::TREE_TARGET]);
            ExplicitTree::random(depth, &mut rng)?
        }
        _ => bail!("give exactly one of --tree and --random-tree-depth"),
    };
    let data = artowen::gf2::solve_for_tree(&g, &tree)?;
    let expanded = expand_to_tree(&g, &data, tree.depth())?;
    if expanded != tree {
        bail!("solved data does not reproduce the target tree");
    }
    eprintln!(
        "solved: {} vectors at depth {} reproduce the target exactly",
        data.vectors().len(),
        tree.depth()
    );
    write_output(a.out.as_deref(), data.to_text().as_bytes())
}

fn run_gfmap(a: GfmapArgs) -> Result<()> {
    let g = read_grammar(&a.file)?;
    let sys = Gf2System::build(&g, a.depth)?;
    if a.report {
        let rep = sys.utilization_report();
        println!("rows: {}", rep.n_rows);
        println!("cols: {}", rep.n_cols);
        println!("rank: {}", rep.rank);
        match sys.first_dependent_row() {
            Some((level, prefix)) => println!("first dependent row: level {level} prefix {prefix}"),
            None => println!("first dependent row: none"),
        }
        if rep.zero_rows.is_empty() {
            println!("zero rows: none");
        } else {
            for (level, prefix) in &rep.zero_rows {
                println!("zero row: level {level} prefix {prefix}");
            }
        }
        for s in 0..sys.symbols() {
            let dots: Vec<String> = (0..sys.depth())
                .map(|t| rep.column_dots[sys.column(s as u32, t)].to_string())
                .collect();
            println!("symbol {s} dots per bit: {}", dots.join(" "));
        }
    }
    write_output(a.out.as_deref(), &sys.to_pgm())
}

fn run_spectrum(a: SpectrumArgs) -> Result<()> {
    if a.res < 2 || a.res % 2 != 0 {
        bail!("--res must be even and at least 2");
    }
    if a.realizations == 0 {
        bail!("--realizations must be positive");
    }
    a.scramble.build(2, a.seed)?;
    let opts = &a.scramble;
    let make = |r: u64| {
        let master = derive_seed(a.seed, &[labels::REALIZATION, r]);
        let scr = opts
            .build_with(2, a.seed, master)
            .expect("configuration validated before the sweep");
        to_unit_2d(&scr.points_2d(a.n, opts.m), opts.m)
    };
    let grid = average_periodogram(a.res, a.realizations, make);
    match a.format {
        SpectrumFormat::Pgm => write_output(a.out.as_deref(), &grid.to_pgm(true)),
        SpectrumFormat::Csv => {
            let profile = radial_average(&grid);
            let mut csv = String::from("radius,mean_power,cells\n");
            for (r, (mean, count)) in profile.mean.iter().zip(&profile.count).enumerate() {
                csv.push_str(&format!("{r},{mean:.12e},{count}\n"));
            }
            write_output(a.out.as_deref(), csv.as_bytes())
        }
    }
}

fn run_zoneplate(a: ZoneplateArgs) -> Result<()> {
    let res = 1usize
        .checked_shl(a.k)
        .filter(|&r| r <= 1 << 12)
        .context("--k must be at most 12")?;
    let n = a.n.unwrap_or(4 * (res as u64) * (res as u64));
    let image = if a.enumerated {
        if a.scramble.scramble != ScrambleKind::Art {
            bail!("--enumerated requires --scramble art");
        }
        let g = a.scramble.grammar.build(a.seed)?;
        let scrambler = ArtOwenScrambler::seeded(
            g,
            2,
            a.scramble.depth,
            a.scramble.m,
            derive_seed(a.seed, &[labels::ART]),
        )?;
        let mats = standard_pair(a.scramble.m);
        zoneplate::render_enumerated(&scrambler, &mats, a.k, n)?
    } else {
        let pts = a.scramble.unit_points_2d(n as usize, a.seed)?;
        zoneplate::render_binned(&pts, res)
    };
    if a.metric {
        let reference = zoneplate::reference_image(res, 8);
        println!(
            "ring metric: {:.6e}",
            zoneplate::ring_metric(&image, &reference, res)
        );
    }
    write_output(a.out.as_deref(), &zoneplate::to_pgm(&image, res))
}

fn run_converge(a: ConvergeArgs) -> Result<()> {
    if a.sizes.iter().any(|&n| n == 0) {
        bail!("sample counts must be positive");
    }
    let opts = &a.scramble;
    let g = opts.grammar.build(a.seed)?;
    let uniform = |n: usize, r: u64| {
        let mut rng = stream_rng(a.seed, &[labels::UNIFORM, n as u64, r]);
        (0..n)
            .map(|_| [rng.gen::<f64>(), rng.gen::<f64>()])
            .collect::<Vec<_>>()
    };
    let plain = |n: usize, _r: u64| to_unit_2d(&Scrambling::None.points_2d(n, opts.m), opts.m);
    let scrambled = |n: usize, r: u64| {
        let master = derive_seed(a.seed, &[labels::CONVERGE_ART, n as u64, r]);
        let scrambler = ArtOwenScrambler::seeded(g.clone(), 2, opts.depth, opts.m, master)
            .expect("configuration validated by the first call");
        let pts: Vec<[u32; 2]> = Scrambling::Art(scrambler).points_2d(n, opts.m);
        to_unit_2d(&pts, opts.m)
    };
    ArtOwenScrambler::seeded(g.clone(), 2, opts.depth, opts.m, 0)?;
    let mut csv = String::from("sampler,n,mse\n");
    let mut report = String::new();
    let curves: [(&str, Vec<(usize, f64)>); 3] = [
        ("uniform", mse_curve(&a.sizes, a.realizations, uniform)),
        ("plain", mse_curve(&a.sizes, a.realizations, plain)),
        ("scrambled", mse_curve(&a.sizes, a.realizations, scrambled)),
    ];
    for (name, curve) in &curves {
        for &(n, mse) in curve {
            csv.push_str(&format!("{name},{n},{mse:.12e}\n"));
        }
        report.push_str(&format!("{name}: slope {:.3}\n", fit_log_slope(curve)));
    }
    print!("{report}");
    match &a.out {
        Some(p) => write_output(Some(p), csv.as_bytes()),
        None => Ok(()),
    }
}

fn run_optimize(a: OptimizeArgs) -> Result<()> {
    let g = a.grammar.build(a.seed)?;
    let initial = (0..2u64)
        .map(|axis| {
            let mut rng = stream_rng(a.seed, &[labels::OPT_INIT, axis]);
            ScrambleData::random(g.symbol_count(), a.depth, &mut rng)
        })
        .collect::<artowen::Result<Vec<_>>>()?;
    let objective = match a.objective {
        ObjectiveKind::Radius => Objective::Radius,
        ObjectiveKind::Energy => Objective::Energy { sigma: a.sigma },
        ObjectiveKind::Feasible => Objective::FeasibleThenEnergy {
            r_target: a.r_target,
            sigma: a.sigma,
        },
    };
    let mut rng = stream_rng(a.seed, &[labels::OPT_SEARCH]);
    let outcome = greedy_optimize(
        &g,
        initial,
        a.m,
        a.n,
        objective,
        a.attempts,
        a.max_sweeps,
        &mut rng,
    )?;
    match outcome.score {
        Score::Radius(r) => println!("score: radius {r:.6}"),
        Score::Energy(e) => println!("score: energy {e:.6}"),
        Score::Combined { feasible, energy } => {
            println!("score: feasible {feasible} energy {energy:.6}")
        }
    }
    println!("sweeps: {}", outcome.sweeps);
    println!("accepted: {}", outcome.accepted);
    if let Some(base) = &a.out {
        for (axis, data) in outcome.data.iter().enumerate() {
            let mut path = base.as_os_str().to_owned();
            path.push(format!(".d{axis}"));
            let path = PathBuf::from(path);
            fs::write(&path, data.to_text())
                .with_context(|| format!("writing {}", path.display()))?;
            println!("wrote {}", path.display());
        }
    }
    Ok(())
}

fn run_scan(a: ScanArgs) -> Result<()> {
    if a.lo >= a.hi || a.hi > SCAN_SPACE {
        bail!("need --lo < --hi <= {SCAN_SPACE}");
    }
    if a.progress {
        eprintln!("building coordinate tables");
    }
    let tables = ScanTables::build();
    let total = a.hi - a.lo;
    let mut report = move |done: u64| {
        eprintln!("scanned {done} of {total} codes");
    };
    let progress: Option<&mut dyn FnMut(u64)> = if a.progress { Some(&mut report) } else { None };
    let result = scan_codes(
        &tables,
        a.lo,
        a.hi,
        a.top_k,
        !a.no_prune,
        a.checkpoint.as_deref(),
        progress,
    )?;
    let mut csv = String::from("code,min_dist_sq\n");
    for e in &result.top {
        csv.push_str(&format!("{:08x},{}\n", e.code, e.min_dist_sq));
    }
    if let Some(best) = result.top.first() {
        eprintln!(
            "best code {:08x} with squared lattice distance {} over {} codes",
            best.code, best.min_dist_sq, result.scanned
        );
    }
    write_output(a.out.as_deref(), csv.as_bytes())
}

fn run_enumerate(a: EnumerateArgs) -> Result<()> {
    let g = a.grammar.build(a.seed)?;
    let scrambler =
        ArtOwenScrambler::seeded(g, 2, a.depth, a.m, derive_seed(a.seed, &[labels::ART]))?;
    let mats = standard_pair(a.m);
    let indices = enumerate_pixel_samples(&scrambler, &mats, a.px, a.py, a.k, a.n)?;
    let mut out = String::new();
    for i in &indices {
        out.push_str(&format!("{i}\n"));
    }
    write_output(a.out.as_deref(), out.as_bytes())
}
