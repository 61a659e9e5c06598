use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};

use paradigm_shift::commands::{self, parse_year_pairs, CommandOutput, ConfigLayer, RunConfig};

#[derive(Parser)]
#[command(name = "paradigm-shift", version, about = "Reference stability and title-word analysis of literature exports")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse exports and write the corpus cache.
    Ingest {
        /// Field-tagged citation-index export.
        #[arg(long)]
        index: Option<PathBuf>,
        /// MEDLINE export.
        #[arg(long)]
        medline: Option<PathBuf>,
        #[command(flatten)]
        shared: Shared,
    },
    /// Papers and distinct cited references per year.
    Summary {
        #[command(flatten)]
        shared: Shared,
    },
    /// Reference Stability Index tables and groove report.
    Rsi {
        #[command(flatten)]
        shared: Shared,
    },
    /// Core references, top cited references and top co-cited pairs.
    CoreRefs {
        /// Entries per year in the top-cited and top-co-cited tables.
        #[arg(long, default_value_t = 10)]
        top: usize,
        /// List the core references shared by two years, e.g. 1970:1972.
        #[arg(long)]
        compare: Option<String>,
        #[command(flatten)]
        shared: Shared,
    },
    /// New title words between year pairs.
    Words {
        /// Year pairs, e.g. 1969:1971,1970:1972.
        #[arg(long)]
        pairs: String,
        #[command(flatten)]
        shared: Shared,
    },
    /// New title co-word pairs between year pairs.
    Cowords {
        /// Year pairs, e.g. 1969:1971,1970:1972.
        #[arg(long)]
        pairs: String,
        #[command(flatten)]
        shared: Shared,
    },
    /// Yearly frequency of a word followed by a word stem.
    Phrase {
        #[arg(long)]
        head: String,
        #[arg(long)]
        stem: String,
        #[command(flatten)]
        shared: Shared,
    },
}

#[derive(Args)]
struct Shared {
    /// Optional TOML file with the same settings; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    cache: Option<PathBuf>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Inclusive year range, e.g. 1966:1975.
    #[arg(long)]
    years: Option<String>,
    /// Citation/co-citation threshold pairs, e.g. 15/11,15/8,11/9,10/8.
    #[arg(long)]
    thresholds: Option<String>,
    /// Year gaps for RSI intervals, e.g. 1,2.
    #[arg(long)]
    gaps: Option<String>,
    #[arg(long)]
    min_percent: Option<f64>,
    #[arg(long)]
    min_cosine: Option<f64>,
    /// Stop-word file, one word per line (default: built-in English list).
    #[arg(long)]
    stopwords: Option<PathBuf>,
    /// Worker threads.
    #[arg(long)]
    jobs: Option<usize>,
}

impl Shared {
    fn resolve(self, index: Option<PathBuf>, medline: Option<PathBuf>) -> Result<RunConfig> {
        let file = match &self.config {
            Some(p) => ConfigLayer::from_file(p)?,
            None => ConfigLayer::default(),
        };
        let flags = ConfigLayer {
            index,
            medline,
            stopwords: self.stopwords,
            cache: self.cache,
            out_dir: self.out_dir,
            years: self.years,
            thresholds: self.thresholds,
            gaps: self.gaps,
            min_percent: self.min_percent,
            min_cosine: self.min_cosine,
            jobs: self.jobs,
        };
        RunConfig::resolve(flags.over(file))
    }
}

fn parse_compare(s: &str) -> Result<(i32, i32)> {
    let pairs = parse_year_pairs(s)?;
    match pairs[..] {
        [pair] => Ok(pair),
        _ => anyhow::bail!("--compare takes one year pair, got {s:?}"),
    }
}

fn run(cli: Cli) -> Result<CommandOutput> {
    match cli.command {
        Command::Ingest { index, medline, shared } => commands::cmd_ingest(&shared.resolve(index, medline)?),
        Command::Summary { shared } => commands::cmd_summary(&shared.resolve(None, None)?),
        Command::Rsi { shared } => commands::cmd_rsi(&shared.resolve(None, None)?),
        Command::CoreRefs { top, compare, shared } => {
            let compare = compare.as_deref().map(parse_compare).transpose()?;
            commands::cmd_core_refs(&shared.resolve(None, None)?, top, compare)
        }
        Command::Words { pairs, shared } => commands::cmd_words(&shared.resolve(None, None)?, &parse_year_pairs(&pairs)?),
        Command::Cowords { pairs, shared } => {
            commands::cmd_cowords(&shared.resolve(None, None)?, &parse_year_pairs(&pairs)?)
        }
        Command::Phrase { head, stem, shared } => commands::cmd_phrase(&shared.resolve(None, None)?, &head, &stem),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            for w in &out.warnings {
                eprintln!("warning: {w}");
            }
            for f in &out.files {
                println!("{}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
