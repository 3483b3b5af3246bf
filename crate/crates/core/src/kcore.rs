// SPDX-License-Identifier: Apache-2.0

//! Vertex coreness, edge coreness and the coreness-descending edge order.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ingest::{Graph, VertexId};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum KcoreError {
    #[error("({0}, {1}) is not an edge of the graph")]
    NotAnEdge(VertexId, VertexId),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorenessLabeling {
    coreness: Vec<u32>,
    degeneracy: u32,
}

impl CorenessLabeling {
    pub fn from_values(coreness: Vec<u32>) -> Self {
        let degeneracy = coreness.iter().copied().max().unwrap_or(0);
        CorenessLabeling { coreness, degeneracy }
    }

    pub fn coreness(&self, u: VertexId) -> u32 {
        self.coreness[u as usize]
    }

    pub fn values(&self) -> &[u32] {
        &self.coreness
    }

    pub fn degeneracy(&self) -> u32 {
        self.degeneracy
    }
}

/// Bucket-based peeling in O(n + m).
///
/// `vert` holds vertices sorted by current degree, `pos` is its inverse and
/// `bin[d]` is the first slot of degree `d`. Removing the vertex at the front
/// decrements each remaining neighbor by swapping it to the head of its bin
/// and shifting the bin boundary.
pub fn compute_coreness(g: &Graph) -> CorenessLabeling {
    let n = g.n();
    let mut deg: Vec<u32> = (0..n as VertexId).map(|u| g.degree(u) as u32).collect();
    let max_deg = deg.iter().copied().max().unwrap_or(0) as usize;

    let mut bin = vec![0usize; max_deg + 1];
    for &d in &deg {
        bin[d as usize] += 1;
    }
    let mut start = 0;
    for b in bin.iter_mut() {
        let count = *b;
        *b = start;
        start += count;
    }

    let mut vert = vec![0 as VertexId; n];
    let mut pos = vec![0usize; n];
    {
        let mut next = bin.clone();
        for v in 0..n {
            let d = deg[v] as usize;
            pos[v] = next[d];
            vert[pos[v]] = v as VertexId;
            next[d] += 1;
        }
    }

    for i in 0..n {
        let v = vert[i];
        let dv = deg[v as usize];
        for &u in g.neighbors(v) {
            let u = u as usize;
            let du = deg[u];
            if du > dv {
                let pu = pos[u];
                let pw = bin[du as usize];
                let w = vert[pw] as usize;
                if u != w {
                    vert.swap(pu, pw);
                    pos[u] = pw;
                    pos[w] = pu;
                }
                bin[du as usize] += 1;
                deg[u] = du - 1;
            }
        }
    }

    CorenessLabeling::from_values(deg)
}

/// `min(c(u), c(v))`, the largest k whose k-core contains the edge.
pub fn edge_coreness(g: &Graph, lab: &CorenessLabeling, u: VertexId, v: VertexId) -> Result<u32, KcoreError> {
    if !g.has_edge(u, v) {
        return Err(KcoreError::NotAnEdge(u, v));
    }
    Ok(lab.coreness(u).min(lab.coreness(v)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrderedEdge {
    pub u: VertexId,
    pub v: VertexId,
    pub coreness: u32,
}

/// Edges in non-increasing order of edge coreness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderedEdgeStream {
    edges: Vec<OrderedEdge>,
}

impl OrderedEdgeStream {
    pub fn edges(&self) -> &[OrderedEdge] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

/// Stable counting sort of the edges by coreness, highest bucket first.
/// Within a bucket edges keep the graph's lexicographic edge order.
pub fn sort_edges_desc(g: &Graph, lab: &CorenessLabeling) -> OrderedEdgeStream {
    let top = lab.degeneracy() as usize;
    let key = |(u, v): (VertexId, VertexId)| lab.coreness(u).min(lab.coreness(v)) as usize;

    let mut count = vec![0usize; top + 1];
    for e in g.edges() {
        count[key(e)] += 1;
    }
    // Slot offsets laid out from the highest coreness down.
    let mut next = vec![0usize; top + 1];
    let mut acc = 0;
    for c in (0..=top).rev() {
        next[c] = acc;
        acc += count[c];
    }

    let mut edges = vec![
        OrderedEdge {
            u: 0,
            v: 0,
            coreness: 0
        };
        acc
    ];
    for (u, v) in g.edges() {
        let c = key((u, v));
        edges[next[c]] = OrderedEdge {
            u,
            v,
            coreness: c as u32,
        };
        next[c] += 1;
    }
    OrderedEdgeStream { edges }
}

/// Vertices that survive repeatedly deleting every vertex of degree below `k`.
pub fn peel(g: &Graph, k: u32) -> Vec<bool> {
    let n = g.n();
    let mut alive = vec![true; n];
    loop {
        let doomed: Vec<usize> = (0..n)
            .filter(|&u| {
                alive[u]
                    && g.neighbors(u as VertexId)
                        .iter()
                        .filter(|&&w| alive[w as usize])
                        .count()
                        < k as usize
            })
            .collect();
        if doomed.is_empty() {
            return alive;
        }
        for u in doomed {
            alive[u] = false;
        }
    }
}

/// Literal deletion-based coreness for small graphs.
///
/// For k = 1, 2, ... every vertex that still has fewer than k live neighbors
/// is deleted (repeatedly, until none remain); vertices deleted in round k
/// have coreness k - 1.
pub fn brute_force_coreness(g: &Graph) -> CorenessLabeling {
    let n = g.n();
    let mut alive = vec![true; n];
    let mut remaining = n;
    let mut coreness = vec![0u32; n];
    let mut k = 1u32;
    while remaining > 0 {
        loop {
            let doomed: Vec<usize> = (0..n)
                .filter(|&u| {
                    alive[u]
                        && g.neighbors(u as VertexId)
                            .iter()
                            .filter(|&&w| alive[w as usize])
                            .count()
                            < k as usize
                })
                .collect();
            if doomed.is_empty() {
                break;
            }
            for u in doomed {
                alive[u] = false;
                coreness[u] = k - 1;
                remaining -= 1;
            }
        }
        k += 1;
    }
    CorenessLabeling::from_values(coreness)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn graph(edges: &[(u64, u64)]) -> Graph {
        Graph::from_edges(edges).unwrap()
    }

    fn k4_pendant() -> Graph {
        graph(&[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (0, 4)])
    }

    #[test]
    fn triangle_and_path() {
        let tri = graph(&[(0, 1), (1, 2), (0, 2)]);
        let lab = compute_coreness(&tri);
        assert_eq!(lab.values(), &[2, 2, 2]);
        assert_eq!(lab.degeneracy(), 2);
        let path = graph(&[(0, 1), (1, 2)]);
        let lab = compute_coreness(&path);
        assert_eq!(lab.values(), &[1, 1, 1]);
        assert_eq!(lab.degeneracy(), 1);
    }

    #[test]
    fn k4_with_pendant() {
        let g = k4_pendant();
        let oracle = brute_force_coreness(&g);
        assert_eq!(oracle.values(), &[3, 3, 3, 3, 1]);
        assert_eq!(compute_coreness(&g), oracle);
        assert_eq!(edge_coreness(&g, &oracle, 0, 4), Ok(1));
        assert_eq!(edge_coreness(&g, &oracle, 1, 2), Ok(3));
        assert_eq!(edge_coreness(&g, &oracle, 1, 4), Err(KcoreError::NotAnEdge(1, 4)));
    }

    #[test]
    fn edge_coreness_is_min() {
        let g = graph(&[(0, 1)]);
        let lab = CorenessLabeling::from_values(vec![3, 1]);
        assert_eq!(edge_coreness(&g, &lab, 0, 1), Ok(1));
        let lab = CorenessLabeling::from_values(vec![5, 5]);
        assert_eq!(edge_coreness(&g, &lab, 1, 0), Ok(5));
    }

    #[test]
    fn star_oracle() {
        let g = graph(&[(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)]);
        assert_eq!(brute_force_coreness(&g).values(), &[1; 6]);
        assert_eq!(compute_coreness(&g).values(), &[1; 6]);
    }

    #[test]
    fn sorted_stream_buckets() {
        let tri = graph(&[(0, 1), (1, 2), (0, 2)]);
        let s = sort_edges_desc(&tri, &compute_coreness(&tri));
        let pairs: Vec<_> = s.edges().iter().map(|e| (e.u, e.v, e.coreness)).collect();
        assert_eq!(pairs, vec![(0, 1, 2), (0, 2, 2), (1, 2, 2)]);

        let g = k4_pendant();
        let s = sort_edges_desc(&g, &compute_coreness(&g));
        let keys: Vec<u32> = s.edges().iter().map(|e| e.coreness).collect();
        assert_eq!(keys, vec![3, 3, 3, 3, 3, 3, 1]);
        assert_eq!((s.edges()[6].u, s.edges()[6].v), (0, 4));
    }

    #[test]
    fn empty_middle_bucket() {
        // Corenesses {1, 3} only: K4 plus a pendant path.
        let g = graph(&[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (3, 4), (4, 5)]);
        let lab = compute_coreness(&g);
        assert!(!lab.values().contains(&2));
        let s = sort_edges_desc(&g, &lab);
        assert!(s.edges().windows(2).all(|w| w[0].coreness >= w[1].coreness));
        assert_eq!(s.len(), g.m());
    }

    fn arb_graph() -> impl Strategy<Value = Graph> {
        (2u64..40, 0.02f64..0.5, any::<u64>()).prop_filter_map("needs an edge", |(n, p, seed)| {
            let g = crate::synth::gilbert(n as usize, p, seed);
            g.ok()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn peeling_matches_oracle(g in arb_graph()) {
            let lab = compute_coreness(&g);
            prop_assert_eq!(&lab, &brute_force_coreness(&g));
            for u in 0..g.n() as VertexId {
                prop_assert!(lab.coreness(u) >= 1);
                prop_assert!(lab.coreness(u) as usize <= g.degree(u));
            }
        }

        #[test]
        fn fixpoint_and_maximality(g in arb_graph()) {
            let lab = compute_coreness(&g);
            for k in 1..=lab.degeneracy() + 1 {
                let inside: Vec<bool> = lab.values().iter().map(|&c| c >= k).collect();
                for u in 0..g.n() as VertexId {
                    if inside[u as usize] {
                        let d = g.neighbors(u).iter().filter(|&&w| inside[w as usize]).count();
                        prop_assert!(d >= k as usize);
                    }
                }
                prop_assert_eq!(&inside, &peel(&g, k));
            }
        }

        #[test]
        fn stream_is_sorted_permutation(g in arb_graph()) {
            let lab = compute_coreness(&g);
            let s = sort_edges_desc(&g, &lab);
            prop_assert!(s.edges().windows(2).all(|w| w[0].coreness >= w[1].coreness));
            let mut got: Vec<_> = s.edges().iter().map(|e| (e.u, e.v)).collect();
            got.sort_unstable();
            prop_assert_eq!(got, g.edges().collect::<Vec<_>>());
            for e in s.edges() {
                prop_assert_eq!(e.coreness, lab.coreness(e.u).min(lab.coreness(e.v)));
            }
        }
    }
}
