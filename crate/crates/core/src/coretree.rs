// SPDX-License-Identifier: Apache-2.0

//! Core-connectivity tree construction.
//!
//! Edges are inserted in non-increasing order of edge coreness into a forest
//! whose leaves are the graph's vertices. A union-find over the vertices,
//! with a pointer from each set representative to the root of its forest
//! tree, finds the root of any leaf in near-constant amortized time. The
//! finished forest is then contracted (parent/child pairs with equal max
//! coreness merge), labeled with coreness ranges and cardinalities, and its
//! children are ordered by subtree height.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ingest::{Graph, VertexId};
use crate::kcore::{self, CorenessLabeling, OrderedEdgeStream};

pub type NodeId = usize;

const NONE: u32 = u32::MAX;

#[derive(Debug, Error)]
pub enum TreeError {
    #[error("edge ({u}, {v}) has coreness {got} but follows an edge of coreness {prev}")]
    OutOfOrder {
        u: VertexId,
        v: VertexId,
        prev: u32,
        got: u32,
    },
    #[error("self-loop on vertex {0}")]
    SelfLoop(VertexId),
    #[error("vertex {0} is out of range")]
    VertexOutOfRange(VertexId),
    #[error("forest is empty")]
    EmptyForest,
    #[error("vertex {0} is isolated")]
    IsolatedVertex(VertexId),
    #[error("inconsistent core tree: {0}")]
    Inconsistent(String),
    #[error("invalid tree json: {0}")]
    Json(#[from] serde_json::Error),
}

/// Disjoint sets with union by size and full path compression.
#[derive(Debug, Clone)]
struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
        }
    }

    fn find(&mut self, x: u32) -> u32 {
        let mut root = x;
        while self.parent[root as usize] != root {
            root = self.parent[root as usize];
        }
        let mut cur = x;
        while self.parent[cur as usize] != root {
            let next = self.parent[cur as usize];
            self.parent[cur as usize] = root;
            cur = next;
        }
        root
    }

    /// Merges two distinct representatives and returns the new one.
    fn union_roots(&mut self, a: u32, b: u32) -> u32 {
        let (big, small) = if self.size[a as usize] >= self.size[b as usize] {
            (a, b)
        } else {
            (b, a)
        };
        self.parent[small as usize] = big;
        self.size[big as usize] += self.size[small as usize];
        big
    }
}

/// Forest under construction. Node ids `0..n` are the vertex leaves; every
/// internal node created later is labeled with a max coreness.
#[derive(Debug, Clone)]
pub struct ForestState {
    n_vertices: usize,
    parent: Vec<u32>,
    max_c: Vec<u32>,
    sets: UnionFind,
    /// Indexed by union-find representative: the forest root of that set.
    tree_root: Vec<u32>,
    last_c: Option<u32>,
}

impl ForestState {
    /// One isolated leaf per vertex.
    pub fn new(n_vertices: usize) -> Self {
        ForestState {
            n_vertices,
            parent: vec![NONE; n_vertices],
            max_c: vec![NONE; n_vertices],
            sets: UnionFind::new(n_vertices),
            tree_root: (0..n_vertices as u32).collect(),
            last_c: None,
        }
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn node_count(&self) -> usize {
        self.parent.len()
    }

    pub fn is_leaf(&self, node: NodeId) -> bool {
        node < self.n_vertices
    }

    pub fn parent(&self, node: NodeId) -> Option<NodeId> {
        match self.parent[node] {
            NONE => None,
            p => Some(p as NodeId),
        }
    }

    /// Max coreness label of an internal node; `None` for vertex leaves.
    pub fn max_coreness(&self, node: NodeId) -> Option<u32> {
        (!self.is_leaf(node)).then(|| self.max_c[node])
    }

    pub fn children(&self, node: NodeId) -> Vec<NodeId> {
        (0..self.node_count())
            .filter(|&c| self.parent[c] as usize == node)
            .collect()
    }

    pub fn roots(&self) -> Vec<NodeId> {
        (0..self.node_count()).filter(|&x| self.parent[x] == NONE).collect()
    }

    /// Root of the forest tree holding vertex `u`'s leaf.
    pub fn root_of(&mut self, u: VertexId) -> NodeId {
        let rep = self.sets.find(u);
        self.tree_root[rep as usize] as NodeId
    }

    fn new_node(&mut self, max_c: u32, a: u32, b: u32) -> u32 {
        let id = self.parent.len() as u32;
        self.parent.push(NONE);
        self.max_c.push(max_c);
        self.parent[a as usize] = id;
        self.parent[b as usize] = id;
        id
    }

    fn add_child(&mut self, parent: u32, child: u32) {
        self.parent[child as usize] = parent;
    }

    /// Inserts edge `(u, v)` whose edge coreness is `c`.
    ///
    /// When both roots are internal and distinct, the root with the larger
    /// max coreness becomes a child of the other (ties: `v`'s root goes under
    /// `u`'s). That other root necessarily carries max coreness `c`.
    pub fn insert_edge(&mut self, u: VertexId, v: VertexId, c: u32) -> Result<(), TreeError> {
        if u == v {
            return Err(TreeError::SelfLoop(u));
        }
        for x in [u, v] {
            if x as usize >= self.n_vertices {
                return Err(TreeError::VertexOutOfRange(x));
            }
        }
        if let Some(prev) = self.last_c {
            if c > prev {
                return Err(TreeError::OutOfOrder { u, v, prev, got: c });
            }
        }
        self.last_c = Some(c);

        let rep_u = self.sets.find(u);
        let rep_v = self.sets.find(v);
        let root_u = self.tree_root[rep_u as usize];
        let root_v = self.tree_root[rep_v as usize];
        let u_alone = root_u == u;
        let v_alone = root_v == v;

        let new_root = match (u_alone, v_alone) {
            (true, true) => self.new_node(c, u, v),
            (false, true) => {
                if self.max_c[root_u as usize] == c {
                    self.add_child(root_u, v);
                    root_u
                } else {
                    self.new_node(c, root_u, v)
                }
            }
            (true, false) => {
                if self.max_c[root_v as usize] == c {
                    self.add_child(root_v, u);
                    root_v
                } else {
                    self.new_node(c, u, root_v)
                }
            }
            (false, false) if root_u == root_v => return Ok(()),
            (false, false) => {
                let (mu, mv) = (self.max_c[root_u as usize], self.max_c[root_v as usize]);
                let (upper, lower) = if mu <= mv { (root_u, root_v) } else { (root_v, root_u) };
                if self.max_c[upper as usize] == c {
                    self.add_child(upper, lower);
                    upper
                } else {
                    // Unreachable for streams produced by sort_edges_desc.
                    self.new_node(c, root_u, root_v)
                }
            }
        };
        let rep = self.sets.union_roots(rep_u, rep_v);
        self.tree_root[rep as usize] = new_root;
        Ok(())
    }
}

/// Runs [`ForestState::insert_edge`] over the whole stream.
pub fn build_forest(g: &Graph, stream: &OrderedEdgeStream) -> Result<ForestState, TreeError> {
    let mut forest = ForestState::new(g.n());
    for e in stream.edges() {
        forest.insert_edge(e.u, e.v, e.coreness)?;
    }
    Ok(forest)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoreNode {
    pub min_c: u32,
    pub max_c: u32,
    /// |V(μ)|.
    pub n: usize,
    /// |V⁻(μ)|: vertices of μ in none of its children.
    pub n_minus: usize,
    /// Coreness range actually present in V⁻(μ); `None` when it is empty.
    pub actual_min: Option<u32>,
    pub actual_max: Option<u32>,
    pub children: Vec<NodeId>,
    pub height: usize,
    /// Smallest vertex id in V(μ); final tie-breaker for child order.
    pub first_vertex: VertexId,
    /// Set on vertex leaves of an unstripped tree.
    pub vertex: Option<VertexId>,
}

impl CoreNode {
    pub fn is_vertex_leaf(&self) -> bool {
        self.vertex.is_some()
    }
}

/// Contracted core-connectivity tree. Node ids are in pre-order, so the
/// root is always node 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoreTree {
    nodes: Vec<CoreNode>,
    leaf_stripped: bool,
}

/// Node description before cardinalities, heights and child order are known.
#[derive(Debug, Clone)]
pub(crate) struct ProtoNode {
    pub min_c: u32,
    pub max_c: u32,
    pub n_minus: usize,
    pub actual: Option<(u32, u32)>,
    /// Smallest vertex of V⁻, `VertexId::MAX` if V⁻ is empty.
    pub first_vertex: VertexId,
    pub vertex: Option<VertexId>,
    pub children: Vec<usize>,
}

impl ProtoNode {
    pub fn range(min_c: u32, max_c: u32) -> Self {
        ProtoNode {
            min_c,
            max_c,
            n_minus: 0,
            actual: None,
            first_vertex: VertexId::MAX,
            vertex: None,
            children: Vec::new(),
        }
    }

    pub fn absorb_members(&mut self, count: usize, actual: Option<(u32, u32)>, first_vertex: VertexId) {
        self.n_minus += count;
        self.first_vertex = self.first_vertex.min(first_vertex);
        if let Some((lo, hi)) = actual {
            self.actual = Some(match self.actual {
                Some((a, b)) => (a.min(lo), b.max(hi)),
                None => (lo, hi),
            });
        }
    }
}

fn preorder(children: impl Fn(usize) -> Vec<usize>, root: usize) -> Vec<usize> {
    let mut order = Vec::new();
    let mut stack = vec![root];
    while let Some(x) = stack.pop() {
        order.push(x);
        let kids = children(x);
        stack.extend(kids.into_iter().rev());
    }
    order
}

impl CoreTree {
    /// Computes n, heights and first vertices bottom-up, orders children by
    /// (height, n, first vertex), renumbers in pre-order and validates.
    pub(crate) fn assemble(protos: Vec<ProtoNode>, root: usize) -> Result<CoreTree, TreeError> {
        let order = preorder(|x| protos[x].children.clone(), root);
        let mut n = vec![0usize; protos.len()];
        let mut height = vec![0usize; protos.len()];
        let mut first = vec![VertexId::MAX; protos.len()];
        for &x in order.iter().rev() {
            let p = &protos[x];
            n[x] = p.n_minus + p.children.iter().map(|&c| n[c]).sum::<usize>();
            height[x] = p.children.iter().map(|&c| height[c] + 1).max().unwrap_or(0);
            first[x] = p.children.iter().map(|&c| first[c]).fold(p.first_vertex, VertexId::min);
        }
        let mut sorted_children: Vec<Vec<usize>> = protos.iter().map(|p| p.children.clone()).collect();
        for kids in sorted_children.iter_mut() {
            kids.sort_by_key(|&c| (height[c], n[c], first[c]));
        }
        let order = preorder(|x| sorted_children[x].clone(), root);
        let mut new_id = vec![usize::MAX; protos.len()];
        for (i, &x) in order.iter().enumerate() {
            new_id[x] = i;
        }
        let leaf_stripped = order.iter().all(|&x| protos[x].vertex.is_none());
        let nodes = order
            .iter()
            .map(|&x| {
                let p = &protos[x];
                CoreNode {
                    min_c: p.min_c,
                    max_c: p.max_c,
                    n: n[x],
                    n_minus: p.n_minus,
                    actual_min: p.actual.map(|a| a.0),
                    actual_max: p.actual.map(|a| a.1),
                    children: sorted_children[x].iter().map(|&c| new_id[c]).collect(),
                    height: height[x],
                    first_vertex: first[x],
                    vertex: p.vertex,
                }
            })
            .collect();
        let tree = CoreTree { nodes, leaf_stripped };
        tree.validate()?;
        Ok(tree)
    }

    pub fn root(&self) -> NodeId {
        0
    }

    pub fn node(&self, id: NodeId) -> &CoreNode {
        &self.nodes[id]
    }

    pub fn nodes(&self) -> &[CoreNode] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn is_leaf_stripped(&self) -> bool {
        self.leaf_stripped
    }

    /// Number of vertices, i.e. n of the root.
    pub fn n_vertices(&self) -> usize {
        self.nodes[0].n
    }

    /// Largest max coreness in the tree; equals the degeneracy of the graph.
    pub fn max_coreness(&self) -> u32 {
        self.nodes
            .iter()
            .filter(|x| !x.is_vertex_leaf())
            .map(|x| x.max_c)
            .max()
            .unwrap_or(0)
    }

    /// Number of core nodes, not counting vertex leaves.
    pub fn non_leaf_count(&self) -> usize {
        self.nodes.iter().filter(|x| !x.is_vertex_leaf()).count()
    }

    /// Parent of every node; `None` for the root.
    pub fn parents(&self) -> Vec<Option<NodeId>> {
        let mut parent = vec![None; self.nodes.len()];
        for (id, node) in self.nodes.iter().enumerate() {
            for &c in &node.children {
                parent[c] = Some(id);
            }
        }
        parent
    }

    /// Checks every structural invariant of a finalized tree.
    pub fn validate(&self) -> Result<(), TreeError> {
        let bad = |msg: String| Err(TreeError::Inconsistent(msg));
        if self.nodes.is_empty() {
            return bad("no nodes".into());
        }
        let root = &self.nodes[0];
        if root.min_c != 0 {
            return bad(format!("root min_c is {}", root.min_c));
        }
        let mut minus_total = 0usize;
        let mut seen = vec![false; self.nodes.len()];
        seen[0] = true;
        for (id, node) in self.nodes.iter().enumerate() {
            if node.min_c > node.max_c {
                return bad(format!("node {id}: min_c {} > max_c {}", node.min_c, node.max_c));
            }
            let child_sum: usize = node.children.iter().map(|&c| self.nodes[c].n).sum();
            if child_sum > node.n || node.n - child_sum != node.n_minus {
                return bad(format!(
                    "node {id}: n {} children {} n_minus {}",
                    node.n, child_sum, node.n_minus
                ));
            }
            minus_total += node.n_minus;
            if (node.n_minus == 0) != node.actual_min.is_none()
                || node.actual_min.is_none() != node.actual_max.is_none()
            {
                return bad(format!("node {id}: actual range does not match n_minus"));
            }
            if let (Some(lo), Some(hi)) = (node.actual_min, node.actual_max) {
                if !node.is_vertex_leaf() && (lo < node.min_c || hi > node.max_c || lo > hi) {
                    return bad(format!(
                        "node {id}: actual range {lo}..{hi} outside {}..{}",
                        node.min_c, node.max_c
                    ));
                }
            }
            let expected_height = node
                .children
                .iter()
                .map(|&c| self.nodes[c].height + 1)
                .max()
                .unwrap_or(0);
            if node.height != expected_height {
                return bad(format!("node {id}: height {} expected {expected_height}", node.height));
            }
            for w in node.children.windows(2) {
                if self.nodes[w[0]].height > self.nodes[w[1]].height {
                    return bad(format!("node {id}: children not ordered by height"));
                }
            }
            if node.is_vertex_leaf() && !node.children.is_empty() {
                return bad(format!("vertex leaf {id} has children"));
            }
            for &c in &node.children {
                if c <= id || c >= self.nodes.len() || seen[c] {
                    return bad(format!("node {id}: bad child id {c}"));
                }
                seen[c] = true;
                let child = &self.nodes[c];
                if !child.is_vertex_leaf() && child.min_c != node.max_c + 1 {
                    return bad(format!(
                        "node {c}: min_c {} under parent max_c {}",
                        child.min_c, node.max_c
                    ));
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return bad("unreachable nodes".into());
        }
        if minus_total != root.n {
            return bad(format!("sum of n_minus {minus_total} != n {}", root.n));
        }
        Ok(())
    }

    /// Serializes the tree as nested node objects, root first.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.node_json(0)).expect("tree serializes")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(&self.node_json(0)).expect("tree serializes")
    }

    fn node_json(&self, id: NodeId) -> NodeJson {
        let x = &self.nodes[id];
        NodeJson {
            min_c: x.min_c,
            max_c: x.max_c,
            n: x.n,
            n_minus: x.n_minus,
            actual_min: x.actual_min,
            actual_max: x.actual_max,
            height: x.height,
            first_vertex: x.first_vertex,
            vertex: x.vertex,
            children: x.children.iter().map(|&c| self.node_json(c)).collect(),
        }
    }

    /// Parses the output of [`CoreTree::to_json`], keeping child order.
    pub fn from_json(text: &str) -> Result<CoreTree, TreeError> {
        let mut de = serde_json::Deserializer::from_str(text);
        de.disable_recursion_limit();
        let root = NodeJson::deserialize(&mut de)?;
        de.end()?;

        let mut nodes = Vec::new();
        let mut stack = vec![(root, None::<NodeId>)];
        while let Some((json, parent)) = stack.pop() {
            let id = nodes.len();
            if let Some(p) = parent {
                let p: &mut CoreNode = &mut nodes[p];
                p.children.push(id);
            }
            nodes.push(CoreNode {
                min_c: json.min_c,
                max_c: json.max_c,
                n: json.n,
                n_minus: json.n_minus,
                actual_min: json.actual_min,
                actual_max: json.actual_max,
                children: Vec::new(),
                height: json.height,
                first_vertex: json.first_vertex,
                vertex: json.vertex,
            });
            stack.extend(json.children.into_iter().rev().map(|c| (c, Some(id))));
        }
        let leaf_stripped = nodes.iter().all(|x| x.vertex.is_none());
        let tree = CoreTree { nodes, leaf_stripped };
        tree.validate()?;
        Ok(tree)
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct NodeJson {
    min_c: u32,
    max_c: u32,
    n: usize,
    n_minus: usize,
    actual_min: Option<u32>,
    actual_max: Option<u32>,
    height: usize,
    first_vertex: VertexId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    vertex: Option<VertexId>,
    children: Vec<NodeJson>,
}

/// Contracts the forest into the core-connectivity tree and annotates it.
///
/// A disconnected graph gets an artificial root with range 0..0 adopting one
/// subtree per component; otherwise the single root's range starts at 0.
pub fn finalize_tree(forest: &ForestState, lab: &CorenessLabeling, strip_leaves: bool) -> Result<CoreTree, TreeError> {
    let total = forest.node_count();
    let n = forest.n_vertices();
    if n == 0 {
        return Err(TreeError::EmptyForest);
    }
    if lab.values().len() != n {
        return Err(TreeError::Inconsistent(format!(
            "labeling covers {} vertices, forest has {n}",
            lab.values().len()
        )));
    }

    // Children in compressed form.
    let mut offsets = vec![0usize; total + 1];
    for x in 0..total {
        if let Some(p) = forest.parent(x) {
            offsets[p + 1] += 1;
        }
    }
    for i in 0..total {
        offsets[i + 1] += offsets[i];
    }
    let mut fill = offsets.clone();
    let mut kids = vec![0usize; offsets[total]];
    let mut roots = Vec::new();
    for x in 0..total {
        match forest.parent(x) {
            Some(p) => {
                kids[fill[p]] = x;
                fill[p] += 1;
            }
            None if forest.is_leaf(x) => return Err(TreeError::IsolatedVertex(x as VertexId)),
            None => roots.push(x),
        }
    }

    let mut protos: Vec<ProtoNode> = Vec::new();
    // Contracted node of each internal forest node.
    let mut cnode = vec![usize::MAX; total];
    let top = if roots.len() > 1 {
        protos.push(ProtoNode::range(0, 0));
        Some(0)
    } else {
        None
    };

    // Top-down so that parents are mapped before their children.
    let mut stack: Vec<usize> = roots.clone();
    while let Some(x) = stack.pop() {
        let parent_c = forest.parent(x).map(|p| cnode[p]).or(top);
        let max_c = forest.max_coreness(x).expect("internal node");
        let same_as_parent = forest
            .parent(x)
            .and_then(|p| forest.max_coreness(p))
            .is_some_and(|pm| pm == max_c);
        cnode[x] = if same_as_parent {
            parent_c.expect("parent mapped")
        } else {
            let min_c = match parent_c {
                Some(pc) => {
                    let pmax = protos[pc].max_c;
                    if max_c <= pmax {
                        return Err(TreeError::Inconsistent(format!(
                            "forest node {x} has max coreness {max_c} under {pmax}"
                        )));
                    }
                    pmax + 1
                }
                None => 0,
            };
            let id = protos.len();
            protos.push(ProtoNode::range(min_c, max_c));
            if let Some(pc) = parent_c {
                protos[pc].children.push(id);
            }
            id
        };
        for &c in &kids[offsets[x]..offsets[x + 1]] {
            if !forest.is_leaf(c) {
                stack.push(c);
            }
        }
    }

    // Vertex leaves hang off the contracted node of their forest parent.
    for v in 0..n {
        let owner = cnode[forest.parent(v).expect("checked above")];
        let c = lab.coreness(v as VertexId);
        if strip_leaves {
            protos[owner].absorb_members(1, Some((c, c)), v as VertexId);
        } else {
            let mut leaf = ProtoNode::range(c, c);
            leaf.absorb_members(1, Some((c, c)), v as VertexId);
            leaf.vertex = Some(v as VertexId);
            let id = protos.len();
            protos.push(leaf);
            protos[owner].children.push(id);
        }
    }

    CoreTree::assemble(protos, 0)
}

/// Coreness, edge ordering, forest and finalization in one call.
pub fn core_tree(g: &Graph, lab: &CorenessLabeling, strip_leaves: bool) -> Result<CoreTree, TreeError> {
    let stream = kcore::sort_edges_desc(g, lab);
    let forest = build_forest(g, &stream)?;
    finalize_tree(&forest, lab, strip_leaves)
}

/// Leaf-stripped tree built straight from the definition: every k-core for
/// k = 0..=c(G) by explicit peeling plus connected components, nested by
/// vertex-set containment, with equal-vertex-set chains contracted.
pub fn brute_force_core_tree(g: &Graph) -> CoreTree {
    let lab = kcore::brute_force_coreness(g);
    let n = g.n();

    struct Core {
        vertices: Vec<VertexId>,
        node: usize,
    }
    let mut protos: Vec<ProtoNode> = Vec::new();
    let mut sets: Vec<Vec<VertexId>> = Vec::new();
    let mut previous: Vec<Core> = Vec::new();
    let mut owner_prev = vec![usize::MAX; n];

    for k in 0..=lab.degeneracy() {
        let alive = if k == 0 { vec![true; n] } else { kcore::peel(g, k) };
        let mut comp = vec![usize::MAX; n];
        let mut cores: Vec<Core> = Vec::new();
        for s in 0..n {
            if !alive[s] || comp[s] != usize::MAX {
                continue;
            }
            let idx = cores.len();
            let mut members = vec![s as VertexId];
            comp[s] = idx;
            let mut head = 0;
            // k = 0 is the whole vertex set by convention, connected or not.
            if k == 0 {
                members = (0..n as VertexId).collect();
                comp.iter_mut().for_each(|c| *c = idx);
            } else {
                while head < members.len() {
                    let x = members[head];
                    head += 1;
                    for &y in g.neighbors(x) {
                        if alive[y as usize] && comp[y as usize] == usize::MAX {
                            comp[y as usize] = idx;
                            members.push(y);
                        }
                    }
                }
            }
            members.sort_unstable();
            cores.push(Core {
                vertices: members,
                node: usize::MAX,
            });
        }

        // Count children per parent core to detect one-child chains.
        let mut child_count = vec![0usize; previous.len()];
        if k > 0 {
            for core in &cores {
                child_count[owner_prev[core.vertices[0] as usize]] += 1;
            }
        }
        for core in cores.iter_mut() {
            let parent = (k > 0).then(|| owner_prev[core.vertices[0] as usize]);
            match parent {
                Some(p) if child_count[p] == 1 && previous[p].vertices.len() == core.vertices.len() => {
                    core.node = previous[p].node;
                    protos[core.node].max_c = k;
                }
                _ => {
                    let id = protos.len();
                    protos.push(ProtoNode::range(k, k));
                    sets.push(core.vertices.clone());
                    if let Some(p) = parent {
                        let pn = previous[p].node;
                        assert!(core
                            .vertices
                            .iter()
                            .all(|v| previous[p].vertices.binary_search(v).is_ok()));
                        protos[pn].children.push(id);
                    }
                    core.node = id;
                }
            }
        }
        for (i, core) in cores.iter().enumerate() {
            for &v in &core.vertices {
                owner_prev[v as usize] = i;
            }
        }
        // Vertices that dropped out keep a stale owner but are never queried again.
        previous = cores;
    }

    for id in 0..protos.len() {
        let mut covered = vec![false; n];
        for &c in &protos[id].children {
            for &v in &sets[c] {
                covered[v as usize] = true;
            }
        }
        let minus: Vec<VertexId> = sets[id].iter().copied().filter(|&v| !covered[v as usize]).collect();
        let actual = minus
            .iter()
            .map(|&v| lab.coreness(v))
            .fold(None, |acc: Option<(u32, u32)>, c| match acc {
                None => Some((c, c)),
                Some((a, b)) => Some((a.min(c), b.max(c))),
            });
        let first = minus.first().copied().unwrap_or(VertexId::MAX);
        protos[id].absorb_members(minus.len(), actual, first);
    }

    let tree = CoreTree::assemble(protos, 0).expect("oracle tree is consistent");
    debug_assert_eq!(tree.n_vertices(), sets[0].len());
    tree
}
