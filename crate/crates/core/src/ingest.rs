// SPDX-License-Identifier: Apache-2.0

//! Edge-list parsing and normalization into a simple undirected graph.
//!
//! Input files are line-oriented: each data line starts with two integer
//! vertex ids, any further tokens (weights, timestamps) are ignored. Lines
//! starting with a comment prefix are skipped. Preprocessing drops
//! self-loops, merges both orientations of an edge into one, removes
//! duplicate edges and relabels the surviving vertices densely.

use std::fmt;
use std::fs::File;
use std::io::{self, Read};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Dense vertex id used by every downstream module.
pub type VertexId = u32;

/// Files at least this large are memory-mapped instead of read into a buffer.
pub const DEFAULT_MMAP_THRESHOLD: u64 = 1 << 30;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("line {line}: expected two non-negative integer vertex ids, found {content:?}")]
    Malformed { line: usize, content: String },
    #[error("no edges")]
    NoEdges,
    #[error("empty graph after preprocessing")]
    EmptyGraph,
    #[error("{0} vertices do not fit 32-bit dense ids")]
    TooManyVertices(usize),
    #[error("asymmetric edge list: {0}")]
    Asymmetric(String),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseOptions {
    /// Lines whose first non-blank characters match one of these are skipped.
    pub comment_prefixes: Vec<String>,
    /// Token separator; `None` splits on any ASCII whitespace.
    pub delimiter: Option<u8>,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions {
            comment_prefixes: vec!["%".to_string(), "#".to_string()],
            delimiter: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawEdgeList {
    pub edges: Vec<(u64, u64)>,
    /// Set when a Konect header declares the file asymmetric (directed).
    pub directed: bool,
    pub origin: String,
    /// Comment and blank lines.
    pub skipped_lines: usize,
}

impl RawEdgeList {
    pub fn from_pairs(edges: impl IntoIterator<Item = (u64, u64)>) -> Self {
        RawEdgeList {
            edges: edges.into_iter().collect(),
            directed: false,
            origin: "<memory>".to_string(),
            skipped_lines: 0,
        }
    }
}

fn is_comment(line: &[u8], opts: &ParseOptions) -> bool {
    opts.comment_prefixes
        .iter()
        .any(|p| !p.is_empty() && line.starts_with(p.as_bytes()))
}

fn trim_ascii(mut s: &[u8]) -> &[u8] {
    while let [first, rest @ ..] = s {
        if first.is_ascii_whitespace() {
            s = rest;
        } else {
            break;
        }
    }
    while let [rest @ .., last] = s {
        if last.is_ascii_whitespace() {
            s = rest;
        } else {
            break;
        }
    }
    s
}

fn parse_id(tok: &[u8]) -> Option<u64> {
    std::str::from_utf8(trim_ascii(tok)).ok()?.parse().ok()
}

fn first_two(line: &[u8], delim: Option<u8>) -> (Option<&[u8]>, Option<&[u8]>) {
    match delim {
        None => {
            let mut it = line.split(|b| b.is_ascii_whitespace()).filter(|t| !t.is_empty());
            (it.next(), it.next())
        }
        Some(d) => {
            let mut it = line.split(move |&b| b == d);
            (it.next(), it.next())
        }
    }
}

/// Parses an in-memory edge list.
pub fn parse_bytes(data: &[u8], opts: &ParseOptions, origin: &str) -> Result<RawEdgeList, IngestError> {
    let mut edges = Vec::new();
    let mut skipped = 0usize;
    let mut directed = false;
    let mut seen_data = false;

    for (idx, line) in data.split(|&b| b == b'\n').enumerate() {
        let line = trim_ascii(line);
        if line.is_empty() {
            skipped += 1;
            continue;
        }
        if is_comment(line, opts) {
            // Konect headers look like "% asym unweighted".
            if !seen_data && line.starts_with(b"%") {
                let body = String::from_utf8_lossy(&line[1..]);
                if body.split_whitespace().next() == Some("asym") {
                    directed = true;
                }
            }
            skipped += 1;
            continue;
        }
        seen_data = true;
        let (a, b) = first_two(line, opts.delimiter);
        match (a.and_then(parse_id), b.and_then(parse_id)) {
            (Some(u), Some(v)) => edges.push((u, v)),
            _ => {
                return Err(IngestError::Malformed {
                    line: idx + 1,
                    content: String::from_utf8_lossy(line).into_owned(),
                })
            }
        }
    }
    // A trailing newline yields one empty split that is not a real line.
    if data.ends_with(b"\n") {
        skipped -= 1;
    }
    if edges.is_empty() {
        return Err(IngestError::NoEdges);
    }
    Ok(RawEdgeList {
        edges,
        directed,
        origin: origin.to_string(),
        skipped_lines: skipped,
    })
}

/// Parses an edge list from any byte stream.
pub fn parse_edge_list<R: Read>(mut input: R, opts: &ParseOptions, origin: &str) -> Result<RawEdgeList, IngestError> {
    let mut buf = Vec::new();
    input.read_to_end(&mut buf).map_err(|source| IngestError::Io {
        path: PathBuf::from(origin),
        source,
    })?;
    parse_bytes(&buf, opts, origin)
}

/// Reads and parses an edge-list file, memory-mapping it when its size is at
/// least `mmap_threshold` bytes.
pub fn read_edge_list_file(path: &Path, opts: &ParseOptions, mmap_threshold: u64) -> Result<RawEdgeList, IngestError> {
    let io_err = |source| IngestError::Io {
        path: path.to_path_buf(),
        source,
    };
    let file = File::open(path).map_err(io_err)?;
    let len = file.metadata().map_err(io_err)?.len();
    let origin = path.display().to_string();
    if len >= mmap_threshold && len > 0 {
        // SAFETY: the mapping is read-only and dropped before returning; the
        // input file is not expected to be modified while we parse it.
        let map = unsafe { memmap2::Mmap::map(&file) }.map_err(io_err)?;
        parse_bytes(&map, opts, &origin)
    } else {
        parse_edge_list(file, opts, &origin)
    }
}

/// Rejects inputs that mix edge conventions: either every unordered pair
/// appears in one orientation only, or every pair appears in both.
pub fn check_undirected(raw: &RawEdgeList) -> Result<(), IngestError> {
    if raw.directed {
        return Err(IngestError::Asymmetric(format!(
            "{} declares a directed (asym) graph",
            raw.origin
        )));
    }
    // (min, max, forward?) triples; sorting groups orientations of each pair.
    let mut oriented: Vec<(u64, u64, bool)> = raw
        .edges
        .iter()
        .filter(|(u, v)| u != v)
        .map(|&(u, v)| if u < v { (u, v, true) } else { (v, u, false) })
        .collect();
    oriented.sort_unstable();
    oriented.dedup();

    let mut one_way = None;
    let mut two_way = None;
    let mut i = 0;
    while i < oriented.len() {
        let (u, v, _) = oriented[i];
        let both = i + 1 < oriented.len() && oriented[i + 1].0 == u && oriented[i + 1].1 == v;
        if both {
            two_way.get_or_insert((u, v));
            i += 2;
        } else {
            one_way.get_or_insert((u, v));
            i += 1;
        }
    }
    match (one_way, two_way) {
        (Some((a, b)), Some((c, d))) => Err(IngestError::Asymmetric(format!(
            "edge {a}-{b} is listed in one direction only while {c}-{d} is listed in both"
        ))),
        _ => Ok(()),
    }
}

/// Simple undirected graph in compressed adjacency form.
///
/// Dense ids follow ascending original id, so `original_ids` doubles as the
/// id map and its inverse is a binary search.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<VertexId>,
    original_ids: Vec<u64>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n())
            .field("m", &self.m())
            .finish()
    }
}

impl Graph {
    pub fn n(&self) -> usize {
        self.original_ids.len()
    }

    pub fn m(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn degree(&self, u: VertexId) -> usize {
        let u = u as usize;
        self.offsets[u + 1] - self.offsets[u]
    }

    pub fn neighbors(&self, u: VertexId) -> &[VertexId] {
        let u = u as usize;
        &self.targets[self.offsets[u]..self.offsets[u + 1]]
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        (u as usize) < self.n() && self.neighbors(u).binary_search(&v).is_ok()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n() as VertexId).map(|u| self.degree(u)).max().unwrap_or(0)
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        (0..self.n() as VertexId).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .copied()
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    pub fn original_id(&self, u: VertexId) -> u64 {
        self.original_ids[u as usize]
    }

    pub fn dense_id(&self, original: u64) -> Option<VertexId> {
        self.original_ids.binary_search(&original).ok().map(|i| i as VertexId)
    }

    /// Builds a graph straight from vertex pairs, applying the usual preprocessing.
    pub fn from_edges(pairs: &[(u64, u64)]) -> Result<Graph, IngestError> {
        preprocess(&RawEdgeList::from_pairs(pairs.iter().copied()))
    }

    /// Edge list over dense ids, suitable for feeding back into [`preprocess`].
    pub fn to_raw(&self) -> RawEdgeList {
        RawEdgeList::from_pairs(self.edges().map(|(u, v)| (u as u64, v as u64)))
    }

    /// Writes the graph as a whitespace-separated edge list of original ids.
    pub fn write_edge_list<W: io::Write>(&self, mut w: W) -> io::Result<()> {
        for (u, v) in self.edges() {
            writeln!(w, "{} {}", self.original_id(u), self.original_id(v))?;
        }
        Ok(())
    }
}

/// Normalizes a raw edge list into a simple undirected graph.
pub fn preprocess(raw: &RawEdgeList) -> Result<Graph, IngestError> {
    let mut pairs: Vec<(u64, u64)> = raw
        .edges
        .iter()
        .filter(|(u, v)| u != v)
        .map(|&(u, v)| if u < v { (u, v) } else { (v, u) })
        .collect();
    pairs.sort_unstable();
    pairs.dedup();
    if pairs.is_empty() {
        return Err(IngestError::EmptyGraph);
    }

    let mut ids: Vec<u64> = pairs.iter().flat_map(|&(u, v)| [u, v]).collect();
    ids.sort_unstable();
    ids.dedup();
    if ids.len() > VertexId::MAX as usize {
        return Err(IngestError::TooManyVertices(ids.len()));
    }
    let dense = |x: u64| ids.binary_search(&x).expect("endpoint is in the id set") as VertexId;

    let n = ids.len();
    let mut degree = vec![0usize; n];
    let relabeled: Vec<(VertexId, VertexId)> = pairs
        .iter()
        .map(|&(u, v)| {
            let (a, b) = (dense(u), dense(v));
            degree[a as usize] += 1;
            degree[b as usize] += 1;
            (a, b)
        })
        .collect();
    drop(pairs);

    let mut offsets = Vec::with_capacity(n + 1);
    offsets.push(0);
    let mut acc = 0;
    for d in &degree {
        acc += d;
        offsets.push(acc);
    }
    let mut fill = offsets[..n].to_vec();
    let mut targets = vec![0 as VertexId; acc];
    // Pairs arrive sorted by (min, max), which leaves every adjacency list sorted:
    // smaller neighbors are all emitted before the vertex's own pairs start.
    for (a, b) in relabeled {
        targets[fill[a as usize]] = b;
        fill[a as usize] += 1;
        targets[fill[b as usize]] = a;
        fill[b as usize] += 1;
    }

    Ok(Graph {
        offsets,
        targets,
        original_ids: ids,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphStats {
    pub n: usize,
    pub m_raw: usize,
    pub m_prime: usize,
    pub max_degree: usize,
}

impl GraphStats {
    pub fn to_table(&self) -> String {
        let rows = [
            ("n", self.n),
            ("m_raw", self.m_raw),
            ("m_prime", self.m_prime),
            ("max_degree", self.max_degree),
        ];
        let mut out = String::new();
        for (k, v) in rows {
            out.push_str(&format!("{k:<12}{v:>14}\n"));
        }
        out
    }
}

pub fn stats(g: &Graph, raw: &RawEdgeList) -> GraphStats {
    GraphStats {
        n: g.n(),
        m_raw: raw.edges.len(),
        m_prime: g.m(),
        max_degree: g.max_degree(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Result<RawEdgeList, IngestError> {
        parse_bytes(s.as_bytes(), &ParseOptions::default(), "test")
    }

    #[test]
    fn reads_pairs_in_order() {
        let raw = parse("1 2\n2 3\n").unwrap();
        assert_eq!(raw.edges, vec![(1, 2), (2, 3)]);
        assert_eq!(raw.skipped_lines, 0);
    }

    #[test]
    fn skips_comments_and_keeps_self_loops() {
        let raw = parse("% comment\n5 5\n5 6\n").unwrap();
        assert_eq!(raw.edges, vec![(5, 5), (5, 6)]);
        assert_eq!(raw.skipped_lines, 1);
        let raw = parse("# snap header\n\n1 2 0.5 1234567\n").unwrap();
        assert_eq!(raw.edges, vec![(1, 2)]);
        assert_eq!(raw.skipped_lines, 2);
    }

    #[test]
    fn malformed_line_reports_line_number() {
        match parse("a b\n") {
            Err(IngestError::Malformed { line, .. }) => assert_eq!(line, 1),
            other => panic!("unexpected {other:?}"),
        }
        match parse("1 2\n3\n") {
            Err(IngestError::Malformed { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse("1 -2\n"), Err(IngestError::Malformed { .. })));
    }

    #[test]
    fn empty_input_has_no_edges() {
        assert!(matches!(parse(""), Err(IngestError::NoEdges)));
        assert!(matches!(parse("% only\n"), Err(IngestError::NoEdges)));
    }

    #[test]
    fn custom_delimiter_and_prefix() {
        let opts = ParseOptions {
            comment_prefixes: vec!["//".into()],
            delimiter: Some(b','),
        };
        let raw = parse_bytes(b"// x\n1,2\n3, 4,9\n", &opts, "csv").unwrap();
        assert_eq!(raw.edges, vec![(1, 2), (3, 4)]);
    }

    #[test]
    fn konect_asym_header_marks_directed() {
        assert!(parse("% asym unweighted\n1 2\n").unwrap().directed);
        assert!(!parse("% sym unweighted\n1 2\n").unwrap().directed);
    }

    #[test]
    fn preprocess_dedups_and_drops_loops() {
        let g = Graph::from_edges(&[(1, 2), (2, 1), (3, 3)]).unwrap();
        assert_eq!((g.n(), g.m()), (2, 1));
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1)]);
    }

    #[test]
    fn preprocess_triangle() {
        let g = Graph::from_edges(&[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!((g.n(), g.m()), (3, 3));
        assert_eq!(g.neighbors(0), &[1, 2]);
    }

    #[test]
    fn preprocess_relabels_densely() {
        let g = Graph::from_edges(&[(7, 9)]).unwrap();
        assert_eq!((g.n(), g.m()), (2, 1));
        assert_eq!(g.dense_id(7), Some(0));
        assert_eq!(g.dense_id(9), Some(1));
        assert_eq!(g.dense_id(8), None);
        assert_eq!(g.original_id(1), 9);
    }

    #[test]
    fn only_self_loops_is_empty() {
        assert!(matches!(Graph::from_edges(&[(4, 4)]), Err(IngestError::EmptyGraph)));
    }

    #[test]
    fn stats_columns() {
        let raw = RawEdgeList::from_pairs([(0, 1), (1, 2), (0, 2), (2, 0)]);
        let g = preprocess(&raw).unwrap();
        let s = stats(&g, &raw);
        assert_eq!(
            s,
            GraphStats {
                n: 3,
                m_raw: 4,
                m_prime: 3,
                max_degree: 2
            }
        );
        let star = RawEdgeList::from_pairs((1..=5).map(|i| (0, i)));
        let s = stats(&preprocess(&star).unwrap(), &star);
        assert_eq!(s.max_degree, 5);
        let json = serde_json::to_value(s).unwrap();
        for key in ["n", "m_raw", "m_prime", "max_degree"] {
            assert!(json.get(key).is_some(), "{key}");
        }
        assert!(s.to_table().contains("max_degree"));
    }

    #[test]
    fn undirected_check() {
        assert!(check_undirected(&RawEdgeList::from_pairs([(1, 2), (2, 3)])).is_ok());
        assert!(check_undirected(&RawEdgeList::from_pairs([(1, 2), (2, 1), (3, 2), (2, 3)])).is_ok());
        assert!(matches!(
            check_undirected(&RawEdgeList::from_pairs([(1, 2), (2, 1), (2, 3)])),
            Err(IngestError::Asymmetric(_))
        ));
        let mut raw = RawEdgeList::from_pairs([(1, 2)]);
        raw.directed = true;
        assert!(check_undirected(&raw).is_err());
    }

    #[test]
    fn mmap_and_buffered_reads_agree() {
        let dir = std::env::temp_dir().join(format!("treebar-ingest-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("g.txt");
        std::fs::write(&path, "% sym\n1 2\n2 3\n3 1\n").unwrap();
        let opts = ParseOptions::default();
        let a = read_edge_list_file(&path, &opts, 0).unwrap();
        let b = read_edge_list_file(&path, &opts, u64::MAX).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.edges.len(), 3);
        let missing = read_edge_list_file(&dir.join("nope.txt"), &opts, 0).unwrap_err();
        assert!(missing.to_string().contains("nope.txt"));
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
