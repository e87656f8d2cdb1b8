mod commands;
mod config;
mod error;
mod heatmap;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use sdglens_core::analytics::SimilarityLevel;
use sdglens_core::cooccur::NetworkFormat;
use sdglens_core::Sdg;

use commands::CooccurArgs;
use config::RunConfig;
use error::CliError;

#[derive(Parser, Debug)]
#[command(
    name = "sdglens",
    version,
    about = "Label documents with SDG query systems and compare the systems"
)]
struct Cli {
    /// TOML run config; relative paths inside it resolve against its directory.
    #[arg(short, long, global = true, default_value = "sdglens.toml")]
    config: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Label the corpus and write labels.csv, traces.csv and manifest.json.
    Label {
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Load and check every input without writing anything.
    Validate,
    /// Build a report from a previous label run.
    #[command(subcommand)]
    Report(Report),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Level {
    Topic,
    Paper,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Pajek,
    Vosviewer,
    Both,
}

#[derive(Subcommand, Debug)]
enum Report {
    /// Share of documents labeled per system and per SDG.
    Coverage,
    /// Pairwise cosine similarity between systems, CSV plus SVG heatmap.
    Similarity {
        #[arg(long, value_enum)]
        level: Option<Level>,
        /// Upper end of the heatmap colour scale.
        #[arg(long)]
        clamp: Option<f64>,
    },
    /// Topic diversity per system and SDG.
    Diversity,
    /// Most frequent meso topics per system and SDG.
    Topics {
        #[arg(long)]
        top_k: Option<usize>,
    },
    /// Keyword co-occurrence network for one system and SDG.
    Cooccur {
        #[arg(long)]
        system: String,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=17))]
        sdg: u8,
        #[arg(long)]
        min_weight: Option<u64>,
        /// Keep only documents in this meso topic; repeatable.
        #[arg(long = "topic")]
        topics: Vec<String>,
        #[arg(long, value_enum, default_value = "both")]
        format: Format,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = RunConfig::load(&cli.config)?;
    match cli.command {
        Command::Label { workers } => commands::label(&cfg, workers),
        Command::Validate => commands::validate(&cfg),
        Command::Report(Report::Coverage) => commands::report_coverage(&cfg),
        Command::Report(Report::Similarity { level, clamp }) => {
            let level = level.map(|l| match l {
                Level::Topic => SimilarityLevel::Topic,
                Level::Paper => SimilarityLevel::Paper,
            });
            commands::report_similarity(&cfg, level, clamp)
        }
        Command::Report(Report::Diversity) => commands::report_diversity(&cfg),
        Command::Report(Report::Topics { top_k }) => commands::report_topics(&cfg, top_k),
        Command::Report(Report::Cooccur {
            system,
            sdg,
            min_weight,
            topics,
            format,
        }) => {
            let formats = match format {
                Format::Pajek => vec![NetworkFormat::Pajek],
                Format::Vosviewer => vec![NetworkFormat::VosViewer],
                Format::Both => vec![NetworkFormat::Pajek, NetworkFormat::VosViewer],
            };
            let sdg = Sdg::new(sdg).expect("range checked by clap");
            commands::report_cooccur(
                &cfg,
                CooccurArgs {
                    system,
                    sdg,
                    min_weight,
                    topics,
                    formats,
                },
            )
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
