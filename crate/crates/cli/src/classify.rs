use std::fmt;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use wordtour::baselines::{pca_order, rand_proj_order};
use wordtour::docsim::{
    cross_validate, load_corpus, mean_comparison_nanos, CvConfig, Labels, Smoothing, WordIndex, DEFAULT_FOLDS,
    DEFAULT_KS, DEFAULT_WIDTH,
};
use wordtour::{read_tour, EmbeddingMatrix, Tour};

use crate::EmbeddingArgs;

/// Comparisons timed per method, at least.
const TIMED_COMPARISONS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ordering {
    WordTour,
    RandProj,
    Pca1,
    Pca4,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Bow,
    Blurred(Ordering),
}

const ALL_METHODS: [Method; 5] = [
    Method::Bow,
    Method::Blurred(Ordering::WordTour),
    Method::Blurred(Ordering::RandProj),
    Method::Blurred(Ordering::Pca1),
    Method::Blurred(Ordering::Pca4),
];

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Method::Bow => "bow",
            Method::Blurred(Ordering::WordTour) => "blurred:wordtour",
            Method::Blurred(Ordering::RandProj) => "blurred:randproj",
            Method::Blurred(Ordering::Pca1) => "blurred:pca1",
            Method::Blurred(Ordering::Pca4) => "blurred:pca4",
        };
        f.write_str(s)
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ALL_METHODS.iter().copied().find(|m| m.to_string() == s).ok_or_else(|| {
            let known: Vec<String> = ALL_METHODS.iter().map(Method::to_string).collect();
            format!("unknown method `{s}` (expected one of {})", known.join(", "))
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[command(flatten)]
    input: EmbeddingArgs,

    /// Tour file; required by `blurred:wordtour`.
    #[arg(long)]
    tour: Option<PathBuf>,

    /// Training corpus, one `label<TAB>tokens` line per document.
    #[arg(long)]
    train: PathBuf,

    /// Test corpus in the same format.
    #[arg(long)]
    test: PathBuf,

    /// Methods to evaluate, comma-separated; all five by default.
    #[arg(long, value_delimiter = ',', value_parser = clap::value_parser!(Method))]
    method: Vec<Method>,

    /// Gaussian filter half-width in tour positions.
    #[arg(long = "width", value_name = "W", default_value_t = DEFAULT_WIDTH)]
    width: usize,

    /// Use this single filter variance instead of searching the default grid.
    #[arg(long)]
    variance: Option<f64>,

    /// Seed for the random projection and the cross-validation folds.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,

    /// Write the report here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,

    /// Write per-document predictions as CSV.
    #[arg(long)]
    predictions: Option<PathBuf>,

    /// Skip the timing measurement so the report is reproducible byte for byte.
    #[arg(long)]
    no_timing: bool,
}

struct Row {
    method: Method,
    error: f64,
    nanos: Option<f64>,
    k: usize,
    variance: Option<f64>,
}

pub fn run(args: &ClassifyArgs, out: &mut impl Write) -> Result<()> {
    if let Some(v) = args.variance {
        if !(v > 0.0 && v.is_finite()) {
            bail!("--variance must be positive, got {v}");
        }
    }
    let emb = args.input.load()?;
    let methods = if args.method.is_empty() {
        ALL_METHODS.to_vec()
    } else {
        args.method.clone()
    };

    let words = WordIndex::new(&emb);
    let mut labels = Labels::new();
    let train =
        load_corpus(&args.train, &words, &mut labels).with_context(|| format!("reading {}", args.train.display()))?;
    let test =
        load_corpus(&args.test, &words, &mut labels).with_context(|| format!("reading {}", args.test.display()))?;
    if test.documents.is_empty() {
        bail!("{} has no usable documents", args.test.display());
    }

    let tour = args
        .tour
        .as_ref()
        .map(|path| read_tour(path, &emb).with_context(|| format!("reading tour {}", path.display())))
        .transpose()?;

    let mut rows = Vec::new();
    let mut predictions = Vec::new();
    for &method in &methods {
        let (tour, mut config) = match method {
            // plain BoW ignores the ordering; sharing the tour's positions keeps
            // its distances bit-identical to a zero-width blur over that tour
            Method::Bow => (
                tour.clone().unwrap_or_else(|| Tour::identity(emb.len())),
                CvConfig::plain(args.seed),
            ),
            Method::Blurred(ordering) => (
                order_for(ordering, &emb, tour.as_ref(), args.seed)?,
                CvConfig::blurred(args.width, args.seed),
            ),
        };
        if let (Some(variance), Method::Blurred(_)) = (args.variance, method) {
            config.smoothings = vec![Smoothing::Gaussian {
                width: args.width,
                variance,
            }];
        }
        config.ks = DEFAULT_KS.collect();
        config.folds = DEFAULT_FOLDS;

        let cv =
            cross_validate(&train.documents, &tour, &config).with_context(|| format!("cross-validating {method}"))?;
        let model = &cv.model;
        let predicted = model.predict_all(&test.documents);
        let wrong = predicted
            .iter()
            .zip(&test.documents)
            .filter(|(p, d)| **p != d.label)
            .count();
        let nanos = (!args.no_timing).then(|| {
            let queries: Vec<_> = test.documents.iter().map(|d| model.builder().build(d)).collect();
            mean_comparison_nanos(&queries, model.vectors(), TIMED_COMPARISONS)
        });
        rows.push(Row {
            method,
            error: 100.0 * wrong as f64 / test.documents.len() as f64,
            nanos,
            k: cv.k(),
            variance: cv.variance(),
        });
        predictions.push((method, predicted));
    }

    let dataset = args
        .train
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("corpus")
        .to_owned();
    let report = match args.format {
        Format::Csv => render_csv(&dataset, &rows),
        Format::Table => render_table(&dataset, &rows),
    };
    match &args.output {
        Some(path) => std::fs::write(path, report).with_context(|| format!("writing {}", path.display()))?,
        None => out.write_all(report.as_bytes())?,
    }
    if let Some(path) = &args.predictions {
        let mut csv = String::from("method,document,label,predicted\n");
        for (method, predicted) in &predictions {
            for (doc, p) in test.documents.iter().zip(predicted) {
                csv.push_str(&format!(
                    "{method},{},{},{}\n",
                    doc.id,
                    labels.name(doc.label),
                    labels.name(*p)
                ));
            }
        }
        std::fs::write(path, csv).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn order_for(ordering: Ordering, emb: &EmbeddingMatrix, tour: Option<&Tour>, seed: u64) -> Result<Tour> {
    Ok(match ordering {
        Ordering::WordTour => tour.context("blurred:wordtour needs --tour")?.clone(),
        Ordering::RandProj => rand_proj_order(emb, seed),
        Ordering::Pca1 => pca_order(emb, 1)?,
        Ordering::Pca4 => pca_order(emb, 4)?,
    })
}

fn fmt_opt(x: Option<f64>, precision: usize) -> String {
    x.map_or_else(|| "-".to_owned(), |v| format!("{v:.precision$}"))
}

fn render_csv(dataset: &str, rows: &[Row]) -> String {
    let mut s = String::from("dataset,method,error_pct,ns_per_comparison,k,variance\n");
    for r in rows {
        s.push_str(&format!(
            "{dataset},{},{:.4},{},{},{}\n",
            r.method,
            r.error,
            fmt_opt(r.nanos, 1),
            r.k,
            r.variance.map_or_else(String::new, |v| v.to_string())
        ));
    }
    s
}

fn render_table(dataset: &str, rows: &[Row]) -> String {
    let mut s = format!(
        "{:<18} {:>10} {:>12} {:>4} {:>9}\n",
        "method",
        format!("{dataset} %"),
        "time (ns)",
        "k",
        "variance"
    );
    for r in rows {
        s.push_str(&format!(
            "{:<18} {:>10.1} {:>12} {:>4} {:>9}\n",
            r.method.to_string(),
            r.error,
            fmt_opt(r.nanos, 0),
            r.k,
            r.variance.map_or_else(|| "-".to_owned(), |v| v.to_string())
        ));
    }
    s
}
