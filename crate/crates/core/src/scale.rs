// SPDX-License-Identifier: Apache-2.0

//! Coreness-scale simplification.
//!
//! At scale 1:t the coreness axis is cut into layers of t units
//! (`[0, t-1]`, `[t, 2t-1]`, ...). Every node is conceptually replaced by a
//! chain of unit nodes, each connected piece of a layer is merged into one
//! node, and chains of single-child nodes with no vertices of their own are
//! contracted again. The implementation splits nodes at layer boundaries
//! directly instead of materializing unit chains.

use serde::Serialize;
use thiserror::Error;

use crate::coretree::{CoreTree, NodeId, ProtoNode, TreeError};

#[derive(Debug, Error)]
pub enum ScaleError {
    #[error("coreness scale must be at least 1, got {0}")]
    InvalidScale(u32),
    #[error("target bar count must be at least 1")]
    InvalidTarget,
    #[error("collapse needs a leaf-stripped tree")]
    NotStripped,
    #[error(transparent)]
    Tree(#[from] TreeError),
}

/// Coreness units per contour interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct CorenessScale(u32);

impl CorenessScale {
    pub fn new(t: u32) -> Result<Self, ScaleError> {
        if t == 0 {
            Err(ScaleError::InvalidScale(t))
        } else {
            Ok(CorenessScale(t))
        }
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

/// Layer groups before re-contraction. Group 0 is the root.
fn layer_groups(tree: &CoreTree, t: u32) -> Vec<ProtoNode> {
    let mut groups: Vec<ProtoNode> = Vec::with_capacity(tree.len());
    let mut stack: Vec<(NodeId, Option<usize>)> = vec![(tree.root(), None)];
    while let Some((id, parent_group)) = stack.pop() {
        let node = tree.node(id);
        let (a, b) = (node.min_c, node.max_c);
        let first_layer = a / t;
        let layer_top = |layer: u32| layer.saturating_mul(t).saturating_add(t - 1);

        let mut g = match parent_group {
            // The first unit shares a layer with the parent's last unit.
            Some(pg) if a % t != 0 => pg,
            _ => {
                let id = groups.len();
                groups.push(ProtoNode::range(first_layer * t, first_layer * t));
                if let Some(pg) = parent_group {
                    groups[pg].children.push(id);
                }
                id
            }
        };
        groups[g].max_c = groups[g].max_c.max(b.min(layer_top(first_layer)));
        for layer in first_layer + 1..=b / t {
            let id = groups.len();
            groups.push(ProtoNode::range(layer * t, b.min(layer_top(layer))));
            groups[g].children.push(id);
            g = id;
        }
        // V⁻ sits on the deepest unit of the chain.
        let actual = node.actual_min.zip(node.actual_max);
        groups[g].absorb_members(node.n_minus, actual, node.first_vertex);
        for &c in node.children.iter().rev() {
            stack.push((c, Some(g)));
        }
    }
    groups
}

/// Merges every group that owns no vertices and has exactly one child with
/// that child. Returns the surviving groups renumbered, root first.
fn recontract(groups: Vec<ProtoNode>) -> Vec<ProtoNode> {
    let mut out: Vec<ProtoNode> = Vec::with_capacity(groups.len());
    let mut stack: Vec<(usize, Option<usize>)> = vec![(0, None)];
    while let Some((gid, parent)) = stack.pop() {
        let mut node = groups[gid].clone();
        while node.n_minus == 0 && node.children.len() == 1 {
            let child = &groups[node.children[0]];
            node.max_c = child.max_c;
            node.n_minus = child.n_minus;
            node.actual = child.actual;
            node.first_vertex = node.first_vertex.min(child.first_vertex);
            node.children = child.children.clone();
        }
        let id = out.len();
        let kids = std::mem::take(&mut node.children);
        out.push(node);
        if let Some(p) = parent {
            out[p].children.push(id);
        }
        for &c in kids.iter().rev() {
            stack.push((c, Some(id)));
        }
    }
    out
}

/// Tree at coreness scale 1:t.
pub fn collapse(tree: &CoreTree, t: u32) -> Result<CoreTree, ScaleError> {
    let scale = CorenessScale::new(t)?;
    if !tree.is_leaf_stripped() {
        return Err(ScaleError::NotStripped);
    }
    let protos = recontract(layer_groups(tree, scale.get()));
    Ok(CoreTree::assemble(protos, 0)?)
}

/// Number of bars (equivalently nodes) of the tree collapsed at scale 1:t.
pub fn bar_count(tree: &CoreTree, t: u32) -> Result<usize, ScaleError> {
    let scale = CorenessScale::new(t)?;
    if !tree.is_leaf_stripped() {
        return Err(ScaleError::NotStripped);
    }
    Ok(recontract(layer_groups(tree, scale.get())).len())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AutoScale {
    pub scale: CorenessScale,
    pub bars: usize,
    /// (t, bar count) pairs evaluated by the binary search.
    pub probes: Vec<(u32, usize)>,
    /// False when some t below the binary-search answer also fits, i.e. the
    /// bar count turned out not to be monotone in t.
    pub monotone: bool,
}

/// Smallest t in `1..=c(G)+1` whose collapsed tree has at most
/// `target_bars` bars.
///
/// Runs a binary search that assumes the bar count is non-increasing in t,
/// then scans every smaller t to confirm that nothing below the answer
/// qualifies. The scan makes the result exact even when monotonicity fails.
pub fn auto_scale(tree: &CoreTree, target_bars: usize) -> Result<AutoScale, ScaleError> {
    if target_bars == 0 {
        return Err(ScaleError::InvalidTarget);
    }
    let top = tree.max_coreness() + 1;
    let mut probes = Vec::new();
    let (mut lo, mut hi) = (1u32, top);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        let bars = bar_count(tree, mid)?;
        probes.push((mid, bars));
        if bars <= target_bars {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let candidate = lo;

    let mut sorted = probes.clone();
    sorted.sort_unstable();
    let mut monotone = sorted.windows(2).all(|w| w[0].1 >= w[1].1);

    let mut chosen = candidate;
    for t in 1..candidate {
        if bar_count(tree, t)? <= target_bars {
            chosen = t;
            monotone = false;
            break;
        }
    }
    let bars = bar_count(tree, chosen)?;
    Ok(AutoScale {
        scale: CorenessScale::new(chosen)?,
        bars,
        probes,
        monotone,
    })
}

/// Reference collapse that literally expands every node into unit nodes,
/// groups same-layer neighbors with a union-find, merges each group and
/// re-contracts single-child chains. Slow; meant for cross-checking.
pub fn naive_collapse(tree: &CoreTree, t: u32) -> Result<CoreTree, ScaleError> {
    CorenessScale::new(t)?;
    if !tree.is_leaf_stripped() {
        return Err(ScaleError::NotStripped);
    }
    struct Unit {
        coreness: u32,
        parent: Option<usize>,
        n_minus: usize,
        actual: Option<(u32, u32)>,
        first_vertex: u32,
    }
    let mut units: Vec<Unit> = Vec::new();
    let mut last_unit = vec![usize::MAX; tree.len()];
    for (id, node) in tree.nodes().iter().enumerate() {
        // Pre-order ids: the parent has already been expanded.
        let mut parent = tree.parents()[id].map(|p| last_unit[p]);
        for c in node.min_c..=node.max_c {
            units.push(Unit {
                coreness: c,
                parent,
                n_minus: 0,
                actual: None,
                first_vertex: u32::MAX,
            });
            parent = Some(units.len() - 1);
        }
        let last = units.len() - 1;
        units[last].n_minus = node.n_minus;
        units[last].actual = node.actual_min.zip(node.actual_max);
        units[last].first_vertex = node.first_vertex;
        last_unit[id] = last;
    }

    let mut rep: Vec<usize> = (0..units.len()).collect();
    fn find(rep: &mut [usize], x: usize) -> usize {
        if rep[x] != x {
            let r = find(rep, rep[x]);
            rep[x] = r;
        }
        rep[x]
    }
    for i in 0..units.len() {
        if let Some(p) = units[i].parent {
            if units[p].coreness / t == units[i].coreness / t {
                let (a, b) = (find(&mut rep, i), find(&mut rep, p));
                rep[a] = b;
            }
        }
    }

    let mut group_of = vec![usize::MAX; units.len()];
    let mut groups: Vec<ProtoNode> = Vec::new();
    for i in 0..units.len() {
        let r = find(&mut rep, i);
        if group_of[r] == usize::MAX {
            group_of[r] = groups.len();
            groups.push(ProtoNode::range(u32::MAX, 0));
        }
        let g = group_of[r];
        group_of[i] = g;
        let u = &units[i];
        groups[g].min_c = groups[g].min_c.min(u.coreness);
        groups[g].max_c = groups[g].max_c.max(u.coreness);
        groups[g].absorb_members(u.n_minus, u.actual, u.first_vertex);
    }
    for i in 0..units.len() {
        if let Some(p) = units[i].parent {
            let (gi, gp) = (group_of[i], group_of[p]);
            if gi != gp {
                groups[gp].children.push(gi);
            }
        }
    }
    for g in &groups {
        assert_eq!(g.min_c % t, 0, "layer group must start on the t-grid");
    }
    Ok(CoreTree::assemble(recontract(groups), 0)?)
}
