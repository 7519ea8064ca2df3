mod classify;

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use wordtour::bound::held_karp_ascent;
use wordtour::tour::read_word_order;
use wordtour::tsp::{build_candidates, greedy_tour_with, local_search, tour_cost, Budget, DEFAULT_CANDIDATES};
use wordtour::tsplib::export_tsplib;
use wordtour::{load_embeddings, read_tour, write_tour, EmbeddingMatrix};

use crate::classify::ClassifyArgs;

/// Build, certify and evaluate one-dimensional word embeddings.
#[derive(Debug, Parser)]
#[command(name = "wordtour", version)]
struct Cli {
    /// Worker threads for parallel stages; 1 gives the reference sequential path,
    /// 0 lets the runtime decide.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Order a vocabulary along a short tour and write it one word per line.
    Tour(TourArgs),
    /// Report a tour's cost against a one-tree lower bound.
    Bound(BoundArgs),
    /// Print the words around a query word in a tour.
    Neighbors(NeighborsArgs),
    /// Compare orderings by kNN document classification error.
    Classify(ClassifyArgs),
    /// Write the instance as a TSPLIB file with weights floor(1000 * distance).
    Export(ExportArgs),
}

#[derive(Debug, Args)]
pub(crate) struct EmbeddingArgs {
    /// Word vectors, one `word v1 ... vd` line per word.
    #[arg(long)]
    embeddings: PathBuf,

    /// Keep only the first N words of the file.
    #[arg(long, value_name = "N")]
    max_vocab: Option<usize>,
}

impl EmbeddingArgs {
    pub(crate) fn load(&self) -> Result<EmbeddingMatrix> {
        if self.max_vocab == Some(0) {
            bail!("--max-vocab must be positive");
        }
        let emb = load_embeddings(&self.embeddings, self.max_vocab)
            .with_context(|| format!("loading embeddings from {}", self.embeddings.display()))?;
        log::info!("loaded {} words of dimension {}", emb.len(), emb.dim());
        Ok(emb)
    }
}

#[derive(Debug, Args)]
struct TourArgs {
    #[command(flatten)]
    input: EmbeddingArgs,

    /// Nearest neighbors per word considered by the local search.
    #[arg(long = "candidates", value_name = "K", default_value_t = DEFAULT_CANDIDATES as u64,
          value_parser = clap::value_parser!(u64).range(1..))]
    candidates: u64,

    /// Maximum number of improving moves; unlimited when omitted.
    #[arg(long, value_name = "MOVES")]
    budget: Option<u64>,

    /// Word index the nearest-neighbor construction starts from.
    #[arg(long, default_value_t = 0)]
    start: usize,

    /// Tour file to write.
    #[arg(long)]
    output: PathBuf,
}

#[derive(Debug, Args)]
struct BoundArgs {
    #[command(flatten)]
    input: EmbeddingArgs,

    /// Tour file over the same vocabulary.
    #[arg(long)]
    tour: PathBuf,

    /// Subgradient ascent steps.
    #[arg(long, default_value_t = 200)]
    iterations: usize,
}

#[derive(Debug, Args)]
struct NeighborsArgs {
    /// Tour file.
    #[arg(long)]
    tour: PathBuf,

    /// Query word.
    #[arg(long)]
    word: String,

    /// Words shown on each side of the query.
    #[arg(long, default_value_t = 5)]
    radius: usize,
}

#[derive(Debug, Args)]
struct ExportArgs {
    #[command(flatten)]
    input: EmbeddingArgs,

    /// TSPLIB file to write.
    #[arg(long)]
    output: PathBuf,
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Err(err) = run(cli) {
        eprintln!("error: {err:#}");
        std::process::exit(1);
    }
}

fn run(cli: Cli) -> Result<()> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build_global()
        .context("configuring the thread pool")?;
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Tour(args) => cmd_tour(&args, &mut out),
        Command::Bound(args) => cmd_bound(&args, &mut out),
        Command::Neighbors(args) => cmd_neighbors(&args, &mut out),
        Command::Classify(args) => classify::run(&args, &mut out),
        Command::Export(args) => cmd_export(&args, &mut out),
    }
}

fn cmd_tour(args: &TourArgs, out: &mut impl Write) -> Result<()> {
    let clock = Instant::now();
    let emb = args.input.load()?;
    if args.start >= emb.len() {
        bail!(
            "--start {} is not a word index (vocabulary has {} words)",
            args.start,
            emb.len()
        );
    }
    let candidates = build_candidates(&emb, args.candidates as usize);
    let start = greedy_tour_with(&emb, args.start, Some(&candidates));
    let budget = Budget {
        max_moves: args.budget,
        max_time: None,
    };
    let result = local_search(&emb, &start, &candidates, budget);
    write_tour(&result.tour, &emb, &args.output)
        .with_context(|| format!("writing tour to {}", args.output.display()))?;
    if result.exhausted {
        log::warn!(
            "move budget exhausted after {} moves; tour may not be locally optimal",
            result.moves
        );
    }
    writeln!(out, "words: {}", emb.len())?;
    writeln!(out, "dimension: {}", emb.dim())?;
    writeln!(out, "cost: {}", result.cost)?;
    writeln!(out, "moves: {}", result.moves)?;
    writeln!(out, "budget exhausted: {}", result.exhausted)?;
    writeln!(out, "wall time: {:.3} s", clock.elapsed().as_secs_f64())?;
    Ok(())
}

/// Relative excess of a bound over a tour cost attributed to rounding.
const ROUNDING_SLACK: f64 = 1e-12;

fn cmd_bound(args: &BoundArgs, out: &mut impl Write) -> Result<()> {
    let emb = args.input.load()?;
    let tour = read_tour(&args.tour, &emb).with_context(|| format!("reading tour {}", args.tour.display()))?;
    if emb.len() < 3 {
        bail!("a lower bound needs at least 3 words");
    }
    let cost = tour_cost(&emb, &tour);
    let ascent = held_karp_ascent(&emb, args.iterations, cost)?;
    let mut bound = ascent.bound;
    if bound > cost {
        if bound - cost > ROUNDING_SLACK * cost {
            bail!("lower bound {bound} exceeds the tour cost {cost}");
        }
        bound = cost;
    }
    writeln!(out, "tour cost: {cost}")?;
    writeln!(out, "lower bound: {bound}")?;
    writeln!(out, "ratio: {}", cost / bound)?;
    writeln!(out, "iterations: {}", ascent.iterations)?;
    Ok(())
}

fn cmd_neighbors(args: &NeighborsArgs, out: &mut impl Write) -> Result<()> {
    let words = read_word_order(&args.tour).with_context(|| format!("reading tour {}", args.tour.display()))?;
    let at = words
        .iter()
        .position(|w| *w == args.word)
        .with_context(|| format!("unknown word `{}`", args.word))?;
    let segment = segment_around(&words, at, args.radius);
    writeln!(out, "{}", segment.join(" "))?;
    Ok(())
}

/// The `2 * radius + 1` words centered on position `at`, wrapping around the cycle.
fn segment_around(words: &[String], at: usize, radius: usize) -> Vec<&str> {
    let n = words.len() as i64;
    (-(radius as i64)..=radius as i64)
        .map(|off| words[(at as i64 + off).rem_euclid(n) as usize].as_str())
        .collect()
}

fn cmd_export(args: &ExportArgs, out: &mut impl Write) -> Result<()> {
    let emb = args.input.load()?;
    if emb.len() < 3 {
        bail!("TSPLIB export needs at least 3 words, got {}", emb.len());
    }
    export_tsplib(&emb, &args.output).with_context(|| format!("writing {}", args.output.display()))?;
    writeln!(out, "wrote {} nodes to {}", emb.len(), args.output.display())?;
    Ok(())
}
