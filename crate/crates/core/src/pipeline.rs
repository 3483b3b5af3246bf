// SPDX-License-Identifier: Apache-2.0

//! End-to-end runs with per-phase timings.

use std::path::Path;
use std::time::Instant;

use serde::Serialize;

use crate::coretree::{core_tree, CoreTree};
use crate::ingest::{self, GraphStats, ParseOptions, RawEdgeList, DEFAULT_MMAP_THRESHOLD};
use crate::kcore::{compute_coreness, CorenessLabeling};
use crate::layout::{compute_layout_with, RenderConfig, TreebarLayout};
use crate::render::{emit_svg, SvgDocument};
use crate::scale::{auto_scale, collapse};
use crate::{Error, Graph};

#[derive(Debug, Clone, PartialEq)]
pub struct InputOptions {
    pub parse: ParseOptions,
    /// Reject directed or one-way inputs instead of symmetrizing them.
    pub strict_undirected: bool,
    pub mmap_threshold: u64,
}

impl Default for InputOptions {
    fn default() -> Self {
        InputOptions {
            parse: ParseOptions::default(),
            strict_undirected: false,
            mmap_threshold: DEFAULT_MMAP_THRESHOLD,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScaleChoice {
    Fixed(u32),
    /// Smallest t with at most this many bars.
    Target(usize),
}

impl Default for ScaleChoice {
    fn default() -> Self {
        ScaleChoice::Target(30)
    }
}

/// Seconds spent in each phase. Phases that did not run stay at zero.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct PhaseTimings {
    pub ingest: f64,
    pub coreness: f64,
    pub tree: f64,
    pub collapse: f64,
    pub layout: f64,
    pub render: f64,
}

impl PhaseTimings {
    pub fn sum(&self) -> f64 {
        self.ingest + self.coreness + self.tree + self.collapse + self.layout + self.render
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub stats: GraphStats,
    pub skipped_lines: usize,
    pub degeneracy: u32,
    pub non_leaf_nodes: usize,
    /// Scale used for the collapsed tree; absent when no collapse ran.
    pub chosen_t: Option<u32>,
    pub auto_scaled: bool,
    pub bars: Option<usize>,
    pub timings: PhaseTimings,
    pub total_seconds: f64,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = self.stats.to_table();
        let mut row = |k: &str, v: String| out.push_str(&format!("{k:<12}{v:>14}\n"));
        row("skipped", self.skipped_lines.to_string());
        row("degeneracy", self.degeneracy.to_string());
        row("non_leaf", self.non_leaf_nodes.to_string());
        if let Some(t) = self.chosen_t {
            row("scale", format!("{t}{}", if self.auto_scaled { " (auto)" } else { "" }));
        }
        if let Some(b) = self.bars {
            row("bars", b.to_string());
        }
        let t = &self.timings;
        for (k, v) in [
            ("t_ingest", t.ingest),
            ("t_coreness", t.coreness),
            ("t_tree", t.tree),
            ("t_collapse", t.collapse),
            ("t_layout", t.layout),
            ("t_render", t.render),
            ("t_total", self.total_seconds),
        ] {
            row(k, format!("{v:.6}s"));
        }
        out
    }
}

/// Output of [`analyze_raw`]: the leaf-stripped tree and everything needed
/// to continue to a rendering.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub graph: Graph,
    pub coreness: CorenessLabeling,
    pub tree: CoreTree,
    pub report: RunReport,
    laps: Laps,
}

#[derive(Debug, Clone)]
pub struct Rendering {
    pub collapsed: CoreTree,
    pub layout: TreebarLayout,
    pub svg: SvgDocument,
    pub report: RunReport,
}

/// Back-to-back phase stopwatch: each lap starts where the previous one
/// ended, so the laps add up to the elapsed total.
#[derive(Debug, Clone, Copy)]
struct Laps {
    started: Instant,
    mark: Instant,
}

impl Laps {
    fn start() -> Self {
        let now = Instant::now();
        Laps {
            started: now,
            mark: now,
        }
    }

    fn lap(&mut self) -> f64 {
        let now = Instant::now();
        let d = now - self.mark;
        self.mark = now;
        d.as_secs_f64()
    }

    fn total(&self) -> f64 {
        (self.mark - self.started).as_secs_f64()
    }
}

pub fn read_input(path: &Path, opts: &InputOptions) -> Result<RawEdgeList, Error> {
    let raw = ingest::read_edge_list_file(path, &opts.parse, opts.mmap_threshold)?;
    if opts.strict_undirected {
        ingest::check_undirected(&raw)?;
    }
    Ok(raw)
}

fn analyze_timed(raw: &RawEdgeList, mut laps: Laps) -> Result<Analysis, Error> {
    let graph = ingest::preprocess(raw)?;
    let ingest_s = laps.lap();

    let coreness = compute_coreness(&graph);
    let coreness_s = laps.lap();

    let tree = core_tree(&graph, &coreness, true)?;
    let tree_s = laps.lap();

    let report = RunReport {
        stats: ingest::stats(&graph, raw),
        skipped_lines: raw.skipped_lines,
        degeneracy: coreness.degeneracy(),
        non_leaf_nodes: tree.non_leaf_count(),
        chosen_t: None,
        auto_scaled: false,
        bars: None,
        timings: PhaseTimings {
            ingest: ingest_s,
            coreness: coreness_s,
            tree: tree_s,
            ..PhaseTimings::default()
        },
        total_seconds: laps.total(),
    };
    Ok(Analysis {
        graph,
        coreness,
        tree,
        report,
        laps,
    })
}

/// Preprocessing, coreness and the leaf-stripped core tree for an edge list
/// that is already in memory.
pub fn analyze_raw(raw: &RawEdgeList) -> Result<Analysis, Error> {
    analyze_timed(raw, Laps::start())
}

/// Like [`analyze_raw`], with file reading counted as part of ingest.
pub fn analyze_file(path: &Path, opts: &InputOptions) -> Result<Analysis, Error> {
    let laps = Laps::start();
    let raw = read_input(path, opts)?;
    analyze_timed(&raw, laps)
}

/// Collapses at the chosen scale. Returns the tree, the scale used and
/// whether it was picked automatically.
pub fn collapse_with(tree: &CoreTree, choice: ScaleChoice) -> Result<(CoreTree, u32, bool), Error> {
    match choice {
        ScaleChoice::Fixed(t) => Ok((collapse(tree, t)?, t, false)),
        ScaleChoice::Target(k) => {
            let auto = auto_scale(tree, k)?;
            let t = auto.scale.get();
            Ok((collapse(tree, t)?, t, true))
        }
    }
}

impl Analysis {
    pub fn collapse(&mut self, choice: ScaleChoice) -> Result<CoreTree, Error> {
        let (collapsed, t, auto) = collapse_with(&self.tree, choice)?;
        self.report.timings.collapse = self.laps.lap();
        self.report.chosen_t = Some(t);
        self.report.auto_scaled = auto;
        self.report.bars = Some(collapsed.len());
        self.report.total_seconds = self.laps.total();
        Ok(collapsed)
    }

    pub fn render(mut self, choice: ScaleChoice, cfg: &RenderConfig) -> Result<Rendering, Error> {
        let collapsed = self.collapse(choice)?;

        let layout = compute_layout_with(&collapsed, cfg);
        self.report.timings.layout = self.laps.lap();

        let svg = emit_svg(&layout, cfg)?;
        self.report.timings.render = self.laps.lap();
        self.report.total_seconds = self.laps.total();
        Ok(Rendering {
            collapsed,
            layout,
            svg,
            report: self.report,
        })
    }
}
