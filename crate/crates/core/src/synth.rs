// SPDX-License-Identifier: Apache-2.0

//! Seeded graph and tree generators for tests, benchmarks and demos.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coretree::{CoreTree, ProtoNode};
use crate::ingest::{Graph, IngestError};

fn clique_edges(vertices: &[u64], out: &mut Vec<(u64, u64)>) {
    for (i, &a) in vertices.iter().enumerate() {
        for &b in &vertices[i + 1..] {
            out.push((a, b));
        }
    }
}

/// G(n, p): every pair is an edge independently with probability `p`.
/// Isolated vertices disappear in preprocessing.
pub fn gilbert(n: usize, p: f64, seed: u64) -> Result<Graph, IngestError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n as u64 {
        for v in u + 1..n as u64 {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(&edges)
}

/// `m` uniformly random vertex pairs over `n` ids, before preprocessing.
pub fn random_pairs(n: u64, m: usize, seed: u64) -> Vec<(u64, u64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..m).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect()
}

/// Random graph with a heavy-tailed degree profile: each new vertex links
/// to `links` endpoints of earlier edges (preferential attachment).
pub fn preferential(n: usize, links: usize, seed: u64) -> Result<Graph, IngestError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<(u64, u64)> = Vec::with_capacity(n * links);
    let mut ends: Vec<u64> = vec![0, 1];
    edges.push((0, 1));
    for v in 2..n as u64 {
        for _ in 0..links.min(v as usize) {
            let target = ends[rng.gen_range(0..ends.len())];
            edges.push((v, target));
            ends.push(target);
            ends.push(v);
        }
    }
    Graph::from_edges(&edges)
}

pub fn clique(k: usize) -> Graph {
    let vs: Vec<u64> = (0..k as u64).collect();
    let mut edges = Vec::new();
    clique_edges(&vs, &mut edges);
    Graph::from_edges(&edges).expect("k >= 2")
}

pub fn path(n: usize) -> Graph {
    let edges: Vec<(u64, u64)> = (1..n as u64).map(|i| (i - 1, i)).collect();
    Graph::from_edges(&edges).expect("n >= 2")
}

pub fn star(leaves: usize) -> Graph {
    let edges: Vec<(u64, u64)> = (1..=leaves as u64).map(|i| (0, i)).collect();
    Graph::from_edges(&edges).expect("leaves >= 1")
}

/// Appends an "onion": a clique on `top + 1` fresh vertices followed by one
/// shell vertex per entry of `shells`, each linked to that many earlier onion
/// vertices. Shell values must not exceed `top`.
fn onion(top: u32, shells: &[u32], next_id: &mut u64, rng: &mut ChaCha8Rng, out: &mut Vec<(u64, u64)>) -> Vec<u64> {
    let core: Vec<u64> = (0..=top as u64).map(|i| *next_id + i).collect();
    *next_id += core.len() as u64;
    clique_edges(&core, out);
    let mut members = core;
    for &k in shells {
        let w = *next_id;
        *next_id += 1;
        let picks: Vec<u64> = members.choose_multiple(rng, k as usize).copied().collect();
        for p in picks {
            out.push((w, p));
        }
        members.push(w);
    }
    members
}

/// Several onions of random depth, glued together by single random edges
/// and a few low-degree bridge vertices. Produces branching core trees with
/// nested chains, which is what the oracle comparisons need.
pub fn nested_cores(parts: usize, max_top: u32, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    let mut next_id = 0u64;
    let mut blobs: Vec<Vec<u64>> = Vec::new();
    for _ in 0..parts.max(1) {
        let top = rng.gen_range(1..=max_top.max(1));
        let mut shells: Vec<u32> = (0..rng.gen_range(0..6)).map(|_| rng.gen_range(1..=top)).collect();
        shells.sort_unstable_by(|a, b| b.cmp(a));
        blobs.push(onion(top, &shells, &mut next_id, &mut rng, &mut edges));
    }
    for i in 1..blobs.len() {
        if rng.gen_bool(0.2) {
            continue; // leave this blob as its own component
        }
        let j = rng.gen_range(0..i);
        let a = *blobs[i].choose(&mut rng).unwrap();
        let b = *blobs[j].choose(&mut rng).unwrap();
        if rng.gen_bool(0.5) {
            edges.push((a, b));
        } else {
            let w = next_id;
            next_id += 1;
            edges.push((a, w));
            edges.push((w, b));
        }
    }
    Graph::from_edges(&edges).expect("onions have edges")
}

/// Graph whose core tree is a comb: a spine of nested cores of coreness
/// 1..=levels, where spine level k >= 2 also holds a separate clique of
/// coreness k + 1 hanging off it as a tooth.
pub fn comb_graph(levels: u32) -> Graph {
    comb_graph_with(levels, 1)
}

/// [`comb_graph`] with `teeth` teeth per spine level. The core tree has
/// `levels + (levels - 2) * teeth` nodes.
pub fn comb_graph_with(levels: u32, teeth: usize) -> Graph {
    assert!(levels >= 2 && teeth >= 1);
    let mut edges = Vec::new();
    let mut next_id = 0u64;
    // Spine center: clique of coreness `levels`.
    let center: Vec<u64> = (0..=levels as u64).collect();
    next_id += center.len() as u64;
    clique_edges(&center, &mut edges);
    for k in (1..levels).rev() {
        if k == 1 {
            edges.push((next_id, center[0]));
            next_id += 1;
            continue;
        }
        for _ in 0..teeth {
            // k - 1 spine links plus one tooth link keeps the connector at
            // coreness k.
            let w = next_id;
            next_id += 1;
            for &s in &center[..(k - 1) as usize] {
                edges.push((w, s));
            }
            let tooth: Vec<u64> = (0..k as u64 + 2).map(|i| next_id + i).collect();
            next_id += tooth.len() as u64;
            clique_edges(&tooth, &mut edges);
            edges.push((w, tooth[0]));
        }
    }
    Graph::from_edges(&edges).expect("comb has edges")
}

struct TreeSketch {
    parent: Vec<Option<usize>>,
    span: Vec<u32>,
}

fn materialize(sketch: &TreeSketch, rng: &mut ChaCha8Rng) -> CoreTree {
    let count = sketch.parent.len();
    let mut protos: Vec<ProtoNode> = Vec::with_capacity(count);
    let mut kids = vec![Vec::new(); count];
    for (i, p) in sketch.parent.iter().enumerate() {
        if let Some(p) = p {
            kids[*p].push(i);
        }
    }
    let mut next_vertex = 0u32;
    for (i, children) in kids.into_iter().enumerate() {
        // Parents precede children, so the parent's range is already known.
        let min_c = match sketch.parent[i] {
            Some(p) => protos[p].max_c + 1,
            None => 0,
        };
        let max_c = (min_c + sketch.span[i]).max(1);
        let mut node = ProtoNode::range(min_c, max_c);
        let n_minus = match children.len() {
            0 => 10usize.pow(rng.gen_range(0..4)) * rng.gen_range(1..10),
            1 => rng.gen_range(1..50),
            _ if rng.gen_bool(0.3) => 0,
            _ => rng.gen_range(1..200),
        };
        if n_minus > 0 {
            node.absorb_members(n_minus, Some((max_c, max_c)), next_vertex);
            next_vertex += n_minus as u32;
        }
        node.children = children;
        protos.push(node);
    }
    CoreTree::assemble(protos, 0).expect("generated tree is consistent")
}

/// Random leaf-stripped core tree with `nodes` nodes and coreness spans of
/// 0..=max_span extra units per node.
pub fn random_core_tree(nodes: usize, max_span: u32, seed: u64) -> CoreTree {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nodes = nodes.max(1);
    let mut parent = vec![None];
    for i in 1..nodes {
        // Bias toward recent nodes for deeper trees.
        let lo = i.saturating_sub(1 + rng.gen_range(0..i.min(8)));
        parent.push(Some(rng.gen_range(lo..i)));
    }
    let span = (0..nodes).map(|_| rng.gen_range(0..=max_span)).collect();
    materialize(&TreeSketch { parent, span }, &mut rng)
}

/// Comb-shaped core tree: a spine of `teeth` nodes, each with one childless
/// tooth, ending in a childless spine tip. Node count is `2 * teeth + 1`.
pub fn comb_tree(teeth: usize, max_span: u32, seed: u64) -> CoreTree {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut parent = vec![None];
    let mut spine = 0usize;
    for _ in 0..teeth {
        parent.push(Some(spine));
        let next = parent.len();
        parent.push(Some(spine));
        spine = next;
    }
    let span = (0..parent.len()).map(|_| rng.gen_range(0..=max_span)).collect();
    materialize(&TreeSketch { parent, span }, &mut rng)
}
