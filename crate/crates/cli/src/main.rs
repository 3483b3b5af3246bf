// SPDX-License-Identifier: Apache-2.0

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use treebar::ingest::IngestError;
use treebar::pipeline::{analyze_file, InputOptions, ScaleChoice};
use treebar::{Error, ParseOptions, RenderConfig};

/// Core-connectivity trees and treebar maps for undirected graphs.
#[derive(Debug, Parser)]
#[command(name = "treebar", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Graph statistics, degeneracy, non-leaf node count and phase timings.
    Analyze {
        #[command(flatten)]
        input: InputArgs,
        /// Print the report as JSON.
        #[arg(long)]
        json: bool,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// One "vertex<TAB>coreness" line per vertex, using the file's ids.
    Coreness {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Core-connectivity tree as JSON, optionally collapsed to a scale.
    Tree {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        scale: Option<u32>,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Treebar map as SVG. The run report goes to standard error.
    Render {
        #[command(flatten)]
        input: InputArgs,
        /// Explicit coreness scale t.
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..), conflicts_with = "target_bars")]
        scale: Option<u32>,
        /// Pick the smallest scale with at most this many bars.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        target_bars: Option<u64>,
        #[arg(long, short)]
        output: Option<PathBuf>,
        /// Print the run report as JSON.
        #[arg(long)]
        json: bool,
        /// Also write the computed layout as JSON to this file.
        #[arg(long)]
        dump_layout: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct InputArgs {
    /// Edge list: one "u v" pair per line.
    path: PathBuf,
    /// Line prefix marking a comment. Repeatable; replaces the defaults (% and #).
    #[arg(long = "comment-prefix", value_name = "PREFIX")]
    comment_prefixes: Vec<String>,
    /// Reject directed or one-way edge lists instead of symmetrizing them.
    #[arg(long)]
    strict_undirected: bool,
}

impl InputArgs {
    fn options(&self) -> InputOptions {
        let mut parse = ParseOptions::default();
        if !self.comment_prefixes.is_empty() {
            parse.comment_prefixes = self.comment_prefixes.clone();
        }
        InputOptions {
            parse,
            strict_undirected: self.strict_undirected,
            ..InputOptions::default()
        }
    }
}

fn load(input: &InputArgs) -> anyhow::Result<treebar::pipeline::Analysis> {
    analyze_file(&input.path, &input.options()).map_err(|e| match e {
        Error::Ingest(IngestError::Io { .. }) => anyhow::Error::new(e),
        e => anyhow::Error::new(e).context(format!("{}", input.path.display())),
    })
}

fn emit(output: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match output {
        Some(p) => fs::write(p, text).with_context(|| format!("{}", p.display())),
        None => io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .context("standard output"),
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Analyze { input, json, output } => {
            let a = load(&input)?;
            let text = if json {
                a.report.to_json() + "\n"
            } else {
                a.report.to_text()
            };
            emit(output.as_deref(), &text)
        }
        Command::Coreness { input, output } => {
            let a = load(&input)?;
            let mut text = String::new();
            for (u, c) in a.coreness.values().iter().enumerate() {
                text.push_str(&format!("{}\t{c}\n", a.graph.original_id(u as u32)));
            }
            text.push_str(&format!("# degeneracy = {}\n", a.coreness.degeneracy()));
            emit(output.as_deref(), &text)
        }
        Command::Tree { input, scale, output } => {
            let mut a = load(&input)?;
            let tree = match scale {
                Some(t) => a.collapse(ScaleChoice::Fixed(t))?,
                None => a.tree.clone(),
            };
            emit(output.as_deref(), &(tree.to_json_pretty() + "\n"))
        }
        Command::Render {
            input,
            scale,
            target_bars,
            output,
            json,
            dump_layout,
        } => {
            let choice = match (scale, target_bars) {
                (Some(t), _) => ScaleChoice::Fixed(t),
                (None, Some(k)) => ScaleChoice::Target(k as usize),
                (None, None) => ScaleChoice::default(),
            };
            let out = load(&input)?.render(choice, &RenderConfig::default())?;
            emit(output.as_deref(), &out.svg.to_xml())?;
            if let Some(p) = &dump_layout {
                fs::write(p, out.layout.to_json() + "\n").with_context(|| format!("{}", p.display()))?;
            }
            let report = if json {
                out.report.to_json() + "\n"
            } else {
                out.report.to_text()
            };
            eprint!("{report}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            // Usage and I/O problems exit with 2, bad input data with 1.
            let io = e.chain().any(|c| c.is::<io::Error>());
            // Skip causes already spelled out by the message that wraps them.
            let mut msg = String::new();
            for cause in e.chain() {
                let text = cause.to_string();
                if !msg.ends_with(&text) {
                    if !msg.is_empty() {
                        msg.push_str(": ");
                    }
                    msg.push_str(&text);
                }
            }
            eprintln!("treebar: {msg}");
            ExitCode::from(if io { 2 } else { 1 })
        }
    }
}
