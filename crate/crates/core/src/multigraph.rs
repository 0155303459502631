//! Loopless multigraphs, the edge-list format, block decomposition,
//! degree-2 smoothing, and the treewidth-2 reduction test.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use thiserror::Error;

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("edge {edge} is a self-loop at vertex {vertex}")]
    SelfLoop { edge: EdgeId, vertex: VertexId },
    #[error("edge {edge} references vertex {vertex}, but the graph has {vertex_count} vertices")]
    VertexOutOfRange {
        edge: EdgeId,
        vertex: VertexId,
        vertex_count: usize,
    },
    #[error("edge {0} does not exist")]
    NoSuchEdge(EdgeId),
    #[error("graph is disconnected ({0} components)")]
    Disconnected(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: expected two vertex labels, found {content:?}")]
    Malformed { line: usize, content: String },
    #[error("line {line}: self-loop at vertex {label:?}")]
    SelfLoop { line: usize, label: String },
    #[error("edge list contains no edges")]
    Empty,
    #[error("graph is disconnected ({0} components)")]
    Disconnected(usize),
}

/// A loopless multigraph on the vertices `0..vertex_count`.
///
/// Edges are identified by their position in the edge list. Parallel edges
/// are distinct edges with equal endpoint sets.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Multigraph {
    vertex_count: usize,
    edges: Vec<[VertexId; 2]>,
    incidence: Vec<Vec<EdgeId>>,
}

impl Multigraph {
    pub fn new(vertex_count: usize, edges: Vec<[VertexId; 2]>) -> Result<Self, GraphError> {
        let mut incidence = vec![Vec::new(); vertex_count];
        for (id, &[a, b]) in edges.iter().enumerate() {
            for v in [a, b] {
                if v >= vertex_count {
                    return Err(GraphError::VertexOutOfRange {
                        edge: id,
                        vertex: v,
                        vertex_count,
                    });
                }
            }
            if a == b {
                return Err(GraphError::SelfLoop { edge: id, vertex: a });
            }
            incidence[a].push(id);
            incidence[b].push(id);
        }
        Ok(Multigraph {
            vertex_count,
            edges,
            incidence,
        })
    }

    /// Builds a graph whose vertex count is one more than the largest
    /// endpoint mentioned.
    pub fn from_edges(edges: &[(VertexId, VertexId)]) -> Result<Self, GraphError> {
        let n = edges.iter().map(|&(a, b)| a.max(b) + 1).max().unwrap_or(0);
        Self::new(n, edges.iter().map(|&(a, b)| [a, b]).collect())
    }

    /// The dipole with `multiplicity` parallel edges.
    pub fn dipole(multiplicity: usize) -> Self {
        Self::new(2, vec![[0, 1]; multiplicity]).expect("dipole is loopless")
    }

    pub fn cycle(length: usize) -> Self {
        assert!(length >= 2, "a loopless cycle needs at least two vertices");
        let edges = (0..length).map(|i| [i, (i + 1) % length]).collect();
        Self::new(length, edges).expect("cycle is loopless")
    }

    pub fn path(vertex_count: usize) -> Self {
        let edges = (1..vertex_count).map(|i| [i - 1, i]).collect();
        Self::new(vertex_count, edges).expect("path is loopless")
    }

    pub fn complete(vertex_count: usize) -> Self {
        let mut edges = Vec::new();
        for a in 0..vertex_count {
            for b in a + 1..vertex_count {
                edges.push([a, b]);
            }
        }
        Self::new(vertex_count, edges).expect("complete graph is loopless")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[[VertexId; 2]] {
        &self.edges
    }

    pub fn endpoints(&self, edge: EdgeId) -> [VertexId; 2] {
        self.edges[edge]
    }

    /// The endpoint of `edge` that is not `vertex`.
    pub fn opposite(&self, edge: EdgeId, vertex: VertexId) -> VertexId {
        let [a, b] = self.edges[edge];
        debug_assert!(a == vertex || b == vertex);
        if a == vertex {
            b
        } else {
            a
        }
    }

    /// Edges incident to `vertex`, in ascending id order.
    pub fn incident(&self, vertex: VertexId) -> &[EdgeId] {
        &self.incidence[vertex]
    }

    pub fn neighbors(&self, vertex: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.incidence[vertex].iter().map(move |&e| self.opposite(e, vertex))
    }

    pub fn degree(&self, vertex: VertexId) -> usize {
        self.incidence[vertex].len()
    }

    pub fn max_degree(&self) -> usize {
        self.incidence.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn degree_histogram(&self) -> BTreeMap<usize, usize> {
        let mut hist = BTreeMap::new();
        for inc in &self.incidence {
            *hist.entry(inc.len()).or_insert(0) += 1;
        }
        hist
    }

    pub fn is_regular(&self, degree: usize) -> bool {
        self.incidence.iter().all(|inc| inc.len() == degree)
    }

    /// Number of edges joining `a` and `b`.
    pub fn multiplicity(&self, a: VertexId, b: VertexId) -> usize {
        self.incidence[a].iter().filter(|&&e| self.opposite(e, a) == b).count()
    }

    /// Component index for every vertex, numbered in order of least vertex.
    pub fn components(&self) -> (usize, Vec<usize>) {
        let mut comp = vec![usize::MAX; self.vertex_count];
        let mut count = 0;
        let mut stack = Vec::new();
        for start in 0..self.vertex_count {
            if comp[start] != usize::MAX {
                continue;
            }
            comp[start] = count;
            stack.push(start);
            while let Some(v) = stack.pop() {
                for w in self.neighbors(v) {
                    if comp[w] == usize::MAX {
                        comp[w] = count;
                        stack.push(w);
                    }
                }
            }
            count += 1;
        }
        (count, comp)
    }

    pub fn component_count(&self) -> usize {
        self.components().0
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() <= 1
    }

    /// Cycle rank `|E| - |V| + c`, where `c` is the number of components.
    pub fn cycle_rank(&self) -> usize {
        self.edges.len() + self.component_count() - self.vertex_count
    }

    /// Replaces `edge` by a path of length two through a new vertex. The
    /// original id now joins the first endpoint to the new vertex.
    pub fn subdivide(&self, edge: EdgeId) -> Result<(Multigraph, VertexId), GraphError> {
        let [a, b] = *self.edges.get(edge).ok_or(GraphError::NoSuchEdge(edge))?;
        let mid = self.vertex_count;
        let mut edges = self.edges.clone();
        edges[edge] = [a, mid];
        edges.push([mid, b]);
        Ok((Self::new(self.vertex_count + 1, edges)?, mid))
    }

    /// Adds the given edges, growing the vertex set as needed.
    pub fn with_edges(&self, extra: &[(VertexId, VertexId)]) -> Result<Multigraph, GraphError> {
        let n = extra
            .iter()
            .map(|&(a, b)| a.max(b) + 1)
            .max()
            .unwrap_or(0)
            .max(self.vertex_count);
        let mut edges = self.edges.clone();
        edges.extend(extra.iter().map(|&(a, b)| [a, b]));
        Self::new(n, edges)
    }

    /// The subgraph formed by `edge_ids` and their endpoints. Vertices are
    /// renumbered in ascending order of their original ids; the returned
    /// vector maps new ids back to old ones.
    pub fn edge_subgraph(&self, edge_ids: &[EdgeId]) -> (Multigraph, Vec<VertexId>) {
        let used: BTreeSet<VertexId> = edge_ids.iter().flat_map(|&e| self.edges[e]).collect();
        let old_ids: Vec<VertexId> = used.into_iter().collect();
        let new_id: HashMap<VertexId, VertexId> = old_ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let edges = edge_ids
            .iter()
            .map(|&e| {
                let [a, b] = self.edges[e];
                [new_id[&a], new_id[&b]]
            })
            .collect();
        let g = Self::new(old_ids.len(), edges).expect("subgraph of a loopless graph");
        (g, old_ids)
    }

    /// Serializes to the edge-list format, one `u v` line per edge.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for [a, b] in &self.edges {
            let _ = writeln!(out, "{a} {b}");
        }
        out
    }
}

/// A parsed edge list together with the original vertex labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledGraph {
    pub graph: Multigraph,
    /// `labels[v]` is the label of vertex `v` in the source document.
    pub labels: Vec<String>,
}

impl LabeledGraph {
    pub fn vertex_of(&self, label: &str) -> Option<VertexId> {
        self.labels.iter().position(|l| l == label)
    }
}

/// Parses an edge list and rejects disconnected graphs.
pub fn parse_graph(text: &str) -> Result<Multigraph, ParseError> {
    parse_labeled(text).map(|lg| lg.graph)
}

/// Parses an edge list, keeping labels.
///
/// If every label is a nonnegative integer, vertex ids follow numeric order
/// of the labels (so a document using exactly `0..n` keeps its numbering).
/// Otherwise ids are assigned in order of first appearance.
pub fn parse_labeled(text: &str) -> Result<LabeledGraph, ParseError> {
    let mut raw: Vec<(String, String)> = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let (Some(a), Some(b), None) = (tokens.next(), tokens.next(), tokens.next()) else {
            return Err(ParseError::Malformed {
                line: idx + 1,
                content: line.to_string(),
            });
        };
        if a == b {
            return Err(ParseError::SelfLoop {
                line: idx + 1,
                label: a.to_string(),
            });
        }
        raw.push((a.to_string(), b.to_string()));
    }
    if raw.is_empty() {
        return Err(ParseError::Empty);
    }

    let mut labels: Vec<String> = Vec::new();
    let mut seen: HashMap<&str, VertexId> = HashMap::new();
    for (a, b) in &raw {
        for l in [a.as_str(), b.as_str()] {
            if !seen.contains_key(l) {
                seen.insert(l, labels.len());
                labels.push(l.to_string());
            }
        }
    }
    let numeric: Option<Vec<u128>> = labels.iter().map(|l| l.parse::<u128>().ok()).collect();
    if let Some(values) = numeric {
        let mut order: Vec<usize> = (0..labels.len()).collect();
        order.sort_by_key(|&i| values[i]);
        labels = order.iter().map(|&i| labels[i].clone()).collect();
        seen = labels.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
    }

    let edges = raw.iter().map(|(a, b)| [seen[a.as_str()], seen[b.as_str()]]).collect();
    let graph = Multigraph::new(labels.len(), edges).expect("labels are distinct per line");
    let components = graph.component_count();
    if components > 1 {
        return Err(ParseError::Disconnected(components));
    }
    Ok(LabeledGraph { graph, labels })
}

/// Biconnected components of a connected multigraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockDecomposition {
    blocks: Vec<Vec<EdgeId>>,
    block_of_edge: Vec<usize>,
    cut_vertices: Vec<VertexId>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockCutNode {
    Block(usize),
    Cut(VertexId),
}

/// Bipartite tree joining each block to the cut vertices it contains.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockCutTree {
    pub nodes: Vec<BlockCutNode>,
    pub adjacency: Vec<Vec<usize>>,
}

impl BlockCutTree {
    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }
}

impl BlockDecomposition {
    /// Edge sets of the blocks, each sorted; blocks are ordered by least edge id.
    pub fn blocks(&self) -> &[Vec<EdgeId>] {
        &self.blocks
    }

    pub fn block_of(&self, edge: EdgeId) -> usize {
        self.block_of_edge[edge]
    }

    pub fn cut_vertices(&self) -> &[VertexId] {
        &self.cut_vertices
    }

    pub fn is_bridge(&self, block: usize) -> bool {
        self.blocks[block].len() == 1
    }

    pub fn bridges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.blocks.iter().filter(|b| b.len() == 1).map(|b| b[0])
    }

    pub fn block_vertices(&self, g: &Multigraph, block: usize) -> Vec<VertexId> {
        let set: BTreeSet<VertexId> = self.blocks[block].iter().flat_map(|&e| g.endpoints(e)).collect();
        set.into_iter().collect()
    }

    pub fn block_cut_tree(&self, g: &Multigraph) -> BlockCutTree {
        let mut nodes: Vec<BlockCutNode> = (0..self.blocks.len()).map(BlockCutNode::Block).collect();
        let mut cut_node = HashMap::new();
        for &v in &self.cut_vertices {
            cut_node.insert(v, nodes.len());
            nodes.push(BlockCutNode::Cut(v));
        }
        let mut adjacency = vec![Vec::new(); nodes.len()];
        for b in 0..self.blocks.len() {
            for v in self.block_vertices(g, b) {
                if let Some(&c) = cut_node.get(&v) {
                    adjacency[b].push(c);
                    adjacency[c].push(b);
                }
            }
        }
        BlockCutTree { nodes, adjacency }
    }
}

/// Hopcroft-Tarjan over edge ids, so parallel edges are back edges rather
/// than tree-edge duplicates.
pub fn block_decomposition(g: &Multigraph) -> Result<BlockDecomposition, GraphError> {
    let components = g.component_count();
    if components > 1 {
        return Err(GraphError::Disconnected(components));
    }
    const UNSEEN: usize = usize::MAX;
    let n = g.vertex_count();
    let mut disc = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut blocks: Vec<Vec<EdgeId>> = Vec::new();
    let mut edge_stack: Vec<EdgeId> = Vec::new();
    // (vertex, edge to parent, next incidence index)
    let mut stack: Vec<(VertexId, EdgeId, usize)> = Vec::new();
    let mut time = 0;

    if n > 0 {
        disc[0] = time;
        low[0] = time;
        time += 1;
        stack.push((0, UNSEEN, 0));
    }
    while let Some(top) = stack.last_mut() {
        let (v, parent_edge, idx) = *top;
        if idx < g.degree(v) {
            top.2 += 1;
            let e = g.incident(v)[idx];
            if e == parent_edge {
                continue;
            }
            let w = g.opposite(e, v);
            if disc[w] == UNSEEN {
                edge_stack.push(e);
                disc[w] = time;
                low[w] = time;
                time += 1;
                stack.push((w, e, 0));
            } else if disc[w] < disc[v] {
                edge_stack.push(e);
                low[v] = low[v].min(disc[w]);
            }
        } else {
            stack.pop();
            if let Some(&(u, _, _)) = stack.last() {
                low[u] = low[u].min(low[v]);
                if low[v] >= disc[u] {
                    let mut block = Vec::new();
                    while let Some(e) = edge_stack.pop() {
                        block.push(e);
                        if e == parent_edge {
                            break;
                        }
                    }
                    block.sort_unstable();
                    blocks.push(block);
                }
            }
        }
    }
    blocks.sort_by_key(|b| b[0]);

    let mut block_of_edge = vec![0; g.edge_count()];
    let mut membership = vec![BTreeSet::new(); n];
    for (i, block) in blocks.iter().enumerate() {
        for &e in block {
            block_of_edge[e] = i;
            for v in g.endpoints(e) {
                membership[v].insert(i);
            }
        }
    }
    let cut_vertices = (0..n).filter(|&v| membership[v].len() > 1).collect();
    Ok(BlockDecomposition {
        blocks,
        block_of_edge,
        cut_vertices,
    })
}

/// Result of suppressing degree-2 vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Smoothed {
    Graph(Multigraph),
    /// The input was a cycle; smoothing it would leave a loop.
    Cycle,
}

/// Suppresses every degree-2 vertex whose two neighbours are distinct,
/// scanning vertices in ascending order. A degree-2 vertex on a 2-cycle
/// hanging off the rest of the graph is kept, since suppressing it would
/// create a loop. Surviving vertices keep their relative order.
pub fn smooth_degree2(g: &Multigraph) -> Smoothed {
    if g.vertex_count() >= 2 && g.is_regular(2) && g.is_connected() {
        return Smoothed::Cycle;
    }
    let mut edges: Vec<Option<[VertexId; 2]>> = g.edges().iter().copied().map(Some).collect();
    let mut incidence: Vec<Vec<EdgeId>> = (0..g.vertex_count()).map(|v| g.incident(v).to_vec()).collect();
    let mut removed = vec![false; g.vertex_count()];

    let other = |edge: [VertexId; 2], v: VertexId| if edge[0] == v { edge[1] } else { edge[0] };
    for v in 0..g.vertex_count() {
        if incidence[v].len() != 2 {
            continue;
        }
        let (e1, e2) = (incidence[v][0], incidence[v][1]);
        let a = other(edges[e1].unwrap(), v);
        let b = other(edges[e2].unwrap(), v);
        if a == b {
            continue;
        }
        let (keep, drop) = (e1.min(e2), e1.max(e2));
        edges[keep] = Some([a, b]);
        edges[drop] = None;
        // a keeps `keep` or loses `drop`; same for b
        for (end, old) in [(a, e1), (b, e2)] {
            let inc = &mut incidence[end];
            if old == drop {
                let pos = inc.iter().position(|&x| x == drop).unwrap();
                inc[pos] = keep;
            }
        }
        incidence[v].clear();
        removed[v] = true;
    }

    let mut new_id = vec![usize::MAX; g.vertex_count()];
    let mut count = 0;
    for v in 0..g.vertex_count() {
        if !removed[v] {
            new_id[v] = count;
            count += 1;
        }
    }
    let edges = edges
        .into_iter()
        .flatten()
        .map(|[a, b]| [new_id[a], new_id[b]])
        .collect();
    Smoothed::Graph(Multigraph::new(count, edges).expect("smoothing never creates loops"))
}

/// Decides treewidth at most 2 by exhaustively deleting parallel edges and
/// vertices of degree at most one, and suppressing degree-2 vertices. The
/// graph has treewidth at most 2 exactly when this empties it.
pub fn is_treewidth_at_most_2(g: &Multigraph) -> bool {
    let n = g.vertex_count();
    let mut adj: Vec<BTreeSet<VertexId>> = (0..n).map(|v| g.neighbors(v).collect()).collect();
    let mut alive = vec![true; n];
    let mut remaining = n;
    let mut work: Vec<VertexId> = (0..n).rev().collect();
    while let Some(v) = work.pop() {
        if !alive[v] {
            continue;
        }
        match adj[v].len() {
            0 | 1 => {
                if let Some(&w) = adj[v].iter().next() {
                    adj[w].remove(&v);
                    work.push(w);
                }
                adj[v].clear();
                alive[v] = false;
                remaining -= 1;
            }
            2 => {
                let mut it = adj[v].iter();
                let (a, b) = (*it.next().unwrap(), *it.next().unwrap());
                adj[a].remove(&v);
                adj[b].remove(&v);
                adj[a].insert(b);
                adj[b].insert(a);
                adj[v].clear();
                alive[v] = false;
                remaining -= 1;
                work.push(a);
                work.push(b);
            }
            _ => {}
        }
    }
    remaining == 0
}
