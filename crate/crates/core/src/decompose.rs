//! Structure of cubic biconnected series-parallel graphs.
//!
//! Every such graph arises from the dipole `D3` by repeatedly trisecting an
//! edge and doubling the middle third ([`apply_tau`]). Splitting a suitable
//! pair of terminals yields three *strings*: graphs built the same way from
//! `K2`, with two univalent roots and every other vertex trivalent. Each
//! string parses into a [`DmtExpression`] over `K2` whose evaluation gives
//! its partitioned genus distribution.

use std::collections::BTreeSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::multigraph::{block_decomposition, BlockDecomposition, EdgeId, GraphError, Multigraph, VertexId};
use crate::pgd::UUPartials;
use crate::productions::{mod_parallel, mod_series};

/// Why the inverse dmt reduction did not end at `D3`.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionFailure {
    #[error("vertex {vertex} has degree {degree}, expected 3")]
    NotCubic { vertex: VertexId, degree: usize },
    #[error("reduction stuck after {steps} steps with {remaining_vertices} vertices and no doubled edge")]
    Stuck { steps: usize, remaining_vertices: usize },
    #[error("step {steps}: removing doubled pair ({u}, {v}) would leave a loop at vertex {at}")]
    LoopCreated {
        steps: usize,
        u: VertexId,
        v: VertexId,
        at: VertexId,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecomposeError {
    #[error("not a cubic biconnected series-parallel graph: {0}")]
    NotCubicSp(#[from] ReductionFailure),
    #[error("invalid terminal pair ({p}, {q}): {reason}")]
    InvalidTerminals { p: VertexId, q: VertexId, reason: String },
    #[error("no vertex pair splits the graph into three strings")]
    NoValidTerminals,
    #[error("not a rooted string: {0}")]
    InvalidString(String),
    #[error("not a dmt-string: {0}")]
    NotDmtString(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A connected graph with univalent roots `source` and `target` in which
/// every other vertex is trivalent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedString {
    graph: Multigraph,
    source: VertexId,
    target: VertexId,
}

impl RootedString {
    pub fn new(graph: Multigraph, source: VertexId, target: VertexId) -> Result<Self, DecomposeError> {
        let n = graph.vertex_count();
        if source >= n || target >= n || source == target {
            return Err(DecomposeError::InvalidString(format!("bad roots ({source}, {target})")));
        }
        for v in 0..n {
            let want = if v == source || v == target { 1 } else { 3 };
            if graph.degree(v) != want {
                return Err(DecomposeError::InvalidString(format!(
                    "vertex {v} has degree {}, expected {want}",
                    graph.degree(v)
                )));
            }
        }
        if !graph.is_connected() {
            return Err(DecomposeError::InvalidString("disconnected".into()));
        }
        Ok(RootedString { graph, source, target })
    }

    pub fn k2() -> Self {
        RootedString {
            graph: Multigraph::dipole(1),
            source: 0,
            target: 1,
        }
    }

    pub fn graph(&self) -> &Multigraph {
        &self.graph
    }

    pub fn source(&self) -> VertexId {
        self.source
    }

    pub fn target(&self) -> VertexId {
        self.target
    }

    pub fn trivalent_count(&self) -> usize {
        self.graph.vertex_count() - 2
    }
}

/// Parsed form of a string: `K2` leaves joined by modified series and
/// parallel operations.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum DmtExpression {
    K2,
    /// Parallel join with a spike attached at each merged root.
    Parallel(Box<DmtExpression>, Box<DmtExpression>),
    /// Series join left to right, smoothing each merged root.
    Series(Vec<DmtExpression>),
}

impl DmtExpression {
    pub fn parallel(a: DmtExpression, b: DmtExpression) -> Self {
        DmtExpression::Parallel(Box::new(a), Box::new(b))
    }

    pub fn series(parts: Vec<DmtExpression>) -> Self {
        DmtExpression::Series(parts)
    }

    pub fn d_hat_2() -> Self {
        Self::parallel(DmtExpression::K2, DmtExpression::K2)
    }

    pub fn evaluate(&self) -> UUPartials {
        match self {
            DmtExpression::K2 => UUPartials::k2(),
            DmtExpression::Parallel(a, b) => mod_parallel(&a.evaluate(), &b.evaluate()),
            DmtExpression::Series(parts) => {
                let mut iter = parts.iter();
                let Some(first) = iter.next() else {
                    return UUPartials::k2();
                };
                iter.fold(first.evaluate(), |acc, p| mod_series(&acc, &p.evaluate()))
            }
        }
    }

    pub fn trivalent_count(&self) -> usize {
        match self {
            DmtExpression::K2 => 0,
            DmtExpression::Parallel(a, b) => a.trivalent_count() + b.trivalent_count() + 2,
            DmtExpression::Series(parts) => parts.iter().map(Self::trivalent_count).sum(),
        }
    }

    /// Normal form: nested and singleton series flattened, `K2` dropped
    /// from series, parallel operands ordered by their printed form.
    pub fn canonical(&self) -> Self {
        match self {
            DmtExpression::K2 => DmtExpression::K2,
            DmtExpression::Parallel(a, b) => {
                let (a, b) = (a.canonical(), b.canonical());
                if a.to_string() <= b.to_string() {
                    Self::parallel(a, b)
                } else {
                    Self::parallel(b, a)
                }
            }
            DmtExpression::Series(parts) => {
                let mut flat = Vec::new();
                for p in parts {
                    match p.canonical() {
                        DmtExpression::K2 => {}
                        DmtExpression::Series(inner) => flat.extend(inner),
                        other => flat.push(other),
                    }
                }
                match flat.len() {
                    0 => DmtExpression::K2,
                    1 => flat.pop().unwrap(),
                    _ => DmtExpression::Series(flat),
                }
            }
        }
    }

    /// Builds the physical string, with source 0 and target 1.
    pub fn realize(&self) -> RootedString {
        let mut b = StringBuilder {
            vertex_count: 2,
            edges: Vec::new(),
        };
        match b.build(self) {
            Body::Edge => b.edges.push([0, 1]),
            Body::Span { left, right } => {
                b.edges.insert(0, [0, left]);
                b.edges.push([right, 1]);
            }
        }
        let g = Multigraph::new(b.vertex_count, b.edges).expect("built strings are loopless");
        RootedString::new(g, 0, 1).expect("built strings satisfy the string invariants")
    }
}

impl fmt::Display for DmtExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DmtExpression::K2 => f.write_str("K2"),
            DmtExpression::Parallel(a, b) => write!(f, "P({a}, {b})"),
            DmtExpression::Series(parts) => {
                f.write_str("S(")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{p}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// A string under construction, minus its two pendant root edges.
enum Body {
    Edge,
    Span { left: VertexId, right: VertexId },
}

struct StringBuilder {
    vertex_count: usize,
    edges: Vec<[VertexId; 2]>,
}

impl StringBuilder {
    fn vertex(&mut self) -> VertexId {
        self.vertex_count += 1;
        self.vertex_count - 1
    }

    fn build(&mut self, expr: &DmtExpression) -> Body {
        match expr {
            DmtExpression::K2 => Body::Edge,
            DmtExpression::Parallel(a, b) => {
                let (p, q) = (self.vertex(), self.vertex());
                for side in [a, b] {
                    match self.build(side) {
                        Body::Edge => self.edges.push([p, q]),
                        Body::Span { left, right } => {
                            self.edges.push([p, left]);
                            self.edges.push([right, q]);
                        }
                    }
                }
                Body::Span { left: p, right: q }
            }
            DmtExpression::Series(parts) => {
                let mut acc = Body::Edge;
                for part in parts {
                    acc = match (acc, self.build(part)) {
                        (Body::Edge, x) | (x, Body::Edge) => x,
                        (Body::Span { left, right }, Body::Span { left: l2, right: r2 }) => {
                            self.edges.push([right, l2]);
                            Body::Span { left, right: r2 }
                        }
                    };
                }
                acc
            }
        }
    }
}

/// Trisects `edge` and doubles the middle third. The old id becomes the
/// first third; two new vertices and three new edges are appended.
pub fn apply_tau(g: &Multigraph, edge: EdgeId) -> Result<Multigraph, GraphError> {
    if edge >= g.edge_count() {
        return Err(GraphError::NoSuchEdge(edge));
    }
    let [x, y] = g.endpoints(edge);
    let (a, b) = (g.vertex_count(), g.vertex_count() + 1);
    let mut edges = g.edges().to_vec();
    edges[edge] = [x, a];
    edges.extend([[a, b], [a, b], [b, y]]);
    Multigraph::new(g.vertex_count() + 2, edges)
}

/// One inverse dmt step: the doubled pair `(u, v)` was removed and the
/// neighbours `x` and `y` joined directly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TauInverseStep {
    pub u: VertexId,
    pub v: VertexId,
    pub x: VertexId,
    pub y: VertexId,
}

/// Applies inverse dmt steps, always to the lowest doubled pair, until none
/// is left. Succeeds exactly when the graph reduces to `D3`, which certifies
/// a cubic biconnected series-parallel graph.
pub fn reduce_to_dipole(g: &Multigraph) -> Result<Vec<TauInverseStep>, ReductionFailure> {
    let n = g.vertex_count();
    for v in 0..n {
        if g.degree(v) != 3 {
            return Err(ReductionFailure::NotCubic {
                vertex: v,
                degree: g.degree(v),
            });
        }
    }
    let mut adj: Vec<Vec<VertexId>> = (0..n).map(|v| g.neighbors(v).collect()).collect();
    let mut alive = vec![true; n];
    let mut remaining = n;
    let mult = |adj: &[Vec<VertexId>], a: VertexId, b: VertexId| adj[a].iter().filter(|&&w| w == b).count();

    let mut doubled: BTreeSet<(VertexId, VertexId)> = BTreeSet::new();
    for v in 0..n {
        for &w in &adj[v] {
            if v < w && mult(&adj, v, w) == 2 {
                doubled.insert((v, w));
            }
        }
    }

    let mut steps = Vec::new();
    while let Some((u, v)) = doubled.pop_first() {
        if !alive[u] || !alive[v] || mult(&adj, u, v) != 2 {
            continue;
        }
        let x = *adj[u].iter().find(|&&w| w != v).unwrap();
        let y = *adj[v].iter().find(|&&w| w != u).unwrap();
        if x == y {
            return Err(ReductionFailure::LoopCreated {
                steps: steps.len(),
                u,
                v,
                at: x,
            });
        }
        alive[u] = false;
        alive[v] = false;
        remaining -= 2;
        for (end, old, new) in [(x, u, y), (y, v, x)] {
            let slot = adj[end].iter().position(|&w| w == old).unwrap();
            adj[end][slot] = new;
        }
        for end in [x, y] {
            let nbrs = adj[end].clone();
            for w in nbrs {
                let key = (end.min(w), end.max(w));
                if mult(&adj, end, w) == 2 {
                    doubled.insert(key);
                } else {
                    doubled.remove(&key);
                }
            }
        }
        steps.push(TauInverseStep { u, v, x, y });
    }
    if remaining == 2 {
        Ok(steps)
    } else {
        Err(ReductionFailure::Stuck {
            steps: steps.len(),
            remaining_vertices: remaining,
        })
    }
}

/// Splits `p` and `q` into one univalent copy per incident edge and returns
/// the three resulting components, ordered by the edge at `p` they contain.
pub fn split_into_strands(g: &Multigraph, p: VertexId, q: VertexId) -> Result<[RootedString; 3], DecomposeError> {
    let invalid = |reason: &str| DecomposeError::InvalidTerminals {
        p,
        q,
        reason: reason.to_string(),
    };
    let n = g.vertex_count();
    if p >= n || q >= n {
        return Err(invalid("no such vertex"));
    }
    if p == q {
        return Err(invalid("terminals coincide"));
    }
    if g.degree(p) != 3 || g.degree(q) != 3 {
        return Err(invalid("terminals must be trivalent"));
    }
    let copy = |root: VertexId, base: usize, e: EdgeId| base + g.incident(root).iter().position(|&x| x == e).unwrap();
    let edges: Vec<[VertexId; 2]> = (0..g.edge_count())
        .map(|e| {
            g.endpoints(e).map(|v| match v {
                v if v == p => copy(p, n, e),
                v if v == q => copy(q, n + 3, e),
                v => v,
            })
        })
        .collect();
    let split = Multigraph::new(n + 6, edges.clone())?;
    let (_, comp) = split.components();
    let p_comps: Vec<usize> = (0..3).map(|i| comp[n + i]).collect();
    let mut q_comps: Vec<usize> = (0..3).map(|i| comp[n + 3 + i]).collect();
    let distinct: BTreeSet<usize> = p_comps.iter().copied().collect();
    q_comps.sort_unstable();
    let mut sorted_p = p_comps.clone();
    sorted_p.sort_unstable();
    if distinct.len() != 3 || q_comps != sorted_p {
        return Err(invalid(
            "splitting does not give three strings, each with one copy of each terminal",
        ));
    }
    let used: BTreeSet<usize> = (0..n).filter(|&v| v != p && v != q).map(|v| comp[v]).collect();
    if !used.is_subset(&distinct) {
        return Err(invalid("splitting leaves a component with no terminal copy"));
    }

    let mut strands = Vec::with_capacity(3);
    for (i, &c) in p_comps.iter().enumerate() {
        let ids: Vec<EdgeId> = (0..edges.len()).filter(|&e| comp[edges[e][0]] == c).collect();
        let (sub, old) = split.edge_subgraph(&ids);
        let source = old.iter().position(|&v| v == n + i).unwrap();
        let target = old.iter().position(|&v| (n + 3..n + 6).contains(&v)).unwrap();
        strands.push(RootedString::new(sub, source, target)?);
    }
    Ok(strands.try_into().expect("three strands"))
}

/// Picks terminals for [`split_into_strands`]: adjacent pairs first, higher
/// multiplicity first and then by least edge id, then every other pair in
/// lexicographic order.
pub fn find_terminals(g: &Multigraph) -> Result<(VertexId, VertexId), DecomposeError> {
    let mut adjacent: Vec<(usize, EdgeId, VertexId, VertexId)> = Vec::new();
    let mut seen = BTreeSet::new();
    for (e, &[a, b]) in g.edges().iter().enumerate() {
        let key = (a.min(b), a.max(b));
        if seen.insert(key) {
            adjacent.push((g.multiplicity(a, b), e, key.0, key.1));
        }
    }
    adjacent.sort_by_key(|&(m, e, _, _)| (std::cmp::Reverse(m), e));
    for &(_, _, p, q) in &adjacent {
        if split_into_strands(g, p, q).is_ok() {
            return Ok((p, q));
        }
    }
    for p in 0..g.vertex_count() {
        for q in p + 1..g.vertex_count() {
            if !seen.contains(&(p, q)) && split_into_strands(g, p, q).is_ok() {
                return Ok((p, q));
            }
        }
    }
    Err(DecomposeError::NoValidTerminals)
}

/// Parses a string into its series/parallel expression.
///
/// The path from source to target alternates single bridges and blocks.
/// Each block has two gates; removing them leaves at most two pieces, each
/// a smaller string between the gates.
pub fn parse_dmt_string(s: &RootedString) -> Result<DmtExpression, DecomposeError> {
    let g = s.graph();
    if g.edge_count() == 1 {
        return Ok(DmtExpression::K2);
    }
    let bd = block_decomposition(g)?;
    let not_dmt = |msg: String| DecomposeError::NotDmtString(msg);

    let mut blocks = Vec::new();
    let mut prev = s.source();
    let mut edge = g.incident(prev)[0];
    let mut covered = 1;
    loop {
        let gate_in = g.opposite(edge, prev);
        if gate_in == s.target() {
            break;
        }
        let inner: Vec<EdgeId> = g.incident(gate_in).iter().copied().filter(|&e| e != edge).collect();
        let b = bd.block_of(inner[0]);
        if bd.block_of(inner[1]) != b || bd.is_bridge(b) {
            return Err(not_dmt(format!("vertex {gate_in} does not enter a block")));
        }
        let mut exits = Vec::new();
        for v in bd.block_vertices(g, b) {
            for &e in g.incident(v) {
                if bd.block_of(e) != b && e != edge {
                    exits.push((v, e));
                }
            }
        }
        let [(gate_out, next)] = exits[..] else {
            return Err(not_dmt(format!("block at vertex {gate_in} has {} exits", exits.len())));
        };
        if gate_out == gate_in {
            return Err(not_dmt(format!("vertex {gate_in} has two bridges")));
        }
        blocks.push(parse_block(g, &bd, b, gate_in, gate_out)?);
        covered += bd.blocks()[b].len() + 1;
        prev = gate_out;
        edge = next;
    }
    if covered != g.edge_count() {
        return Err(not_dmt("edges off the source-target spine".into()));
    }
    Ok(if blocks.len() == 1 {
        blocks.pop().unwrap()
    } else {
        DmtExpression::Series(blocks)
    })
}

fn parse_block(
    g: &Multigraph,
    bd: &BlockDecomposition,
    block: usize,
    u: VertexId,
    v: VertexId,
) -> Result<DmtExpression, DecomposeError> {
    let in_block = |e: EdgeId| bd.block_of(e) == block;
    let starts: Vec<EdgeId> = g.incident(u).iter().copied().filter(|&e| in_block(e)).collect();
    let mut branches = Vec::with_capacity(2);
    let mut branch_edges = 0;
    let mut visited = vec![false; g.vertex_count()];
    for &start in &starts {
        let w = g.opposite(start, u);
        if w == v {
            branches.push(DmtExpression::K2);
            branch_edges += 1;
            continue;
        }
        if visited[w] {
            return Err(DecomposeError::NotDmtString(format!(
                "both block edges at gate {u} lead to the same side"
            )));
        }
        // component of block - {u, v} containing w
        let mut members = vec![w];
        visited[w] = true;
        let mut i = 0;
        while i < members.len() {
            let x = members[i];
            i += 1;
            for &e in g.incident(x) {
                let y = g.opposite(e, x);
                if in_block(e) && y != u && y != v && !visited[y] {
                    visited[y] = true;
                    members.push(y);
                }
            }
        }
        let member_set: BTreeSet<VertexId> = members.iter().copied().collect();
        let mut edges: BTreeSet<EdgeId> = BTreeSet::new();
        for &x in &members {
            edges.extend(g.incident(x).iter().copied().filter(|&e| in_block(e)));
        }
        let to_u = edges.iter().filter(|&&e| g.endpoints(e).contains(&u)).count();
        let to_v: Vec<EdgeId> = edges.iter().copied().filter(|&e| g.endpoints(e).contains(&v)).collect();
        if to_u != 1 || to_v.len() != 1 {
            return Err(DecomposeError::NotDmtString(format!(
                "piece between gates {u} and {v} attaches {to_u} times to {u} and {} times to {v}",
                to_v.len()
            )));
        }
        // renumber: source 0, target 1, members from 2
        let mut local = std::collections::HashMap::new();
        local.insert(u, 0);
        local.insert(v, 1);
        for (k, &x) in member_set.iter().enumerate() {
            local.insert(x, k + 2);
        }
        let sub_edges = edges.iter().map(|&e| g.endpoints(e).map(|x| local[&x])).collect();
        branch_edges += edges.len();
        let sub = Multigraph::new(member_set.len() + 2, sub_edges)?;
        let string = RootedString::new(sub, 0, 1)?;
        branches.push(parse_dmt_string(&string)?);
    }
    if branch_edges != bd.blocks()[block].len() {
        return Err(DecomposeError::NotDmtString(format!(
            "block between gates {u} and {v} has more than two pieces"
        )));
    }
    let b = branches.pop().unwrap();
    let a = branches.pop().unwrap();
    Ok(DmtExpression::parallel(a, b))
}

/// Partitioned genus distribution of a string.
pub fn pgd_of_string(s: &RootedString) -> Result<UUPartials, DecomposeError> {
    Ok(parse_dmt_string(s)?.evaluate())
}

/// `D3` after `tau_steps` dmt steps on uniformly random edges.
pub fn random_cubic_sp(tau_steps: usize, seed: u64) -> Multigraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Multigraph::dipole(3);
    for _ in 0..tau_steps {
        let e = rng.gen_range(0..g.edge_count());
        g = apply_tau(&g, e).expect("edge in range");
    }
    g
}

/// `K2` after `tau_steps` dmt steps on uniformly random edges; roots 0 and 1.
pub fn random_dmt_string(tau_steps: usize, seed: u64) -> RootedString {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Multigraph::dipole(1);
    for _ in 0..tau_steps {
        let e = rng.gen_range(0..g.edge_count());
        g = apply_tau(&g, e).expect("edge in range");
    }
    RootedString::new(g, 0, 1).expect("dmt steps preserve the string invariants")
}

/// Identifies the sources of three strings into one vertex (0) and their
/// targets into another (1). Edges keep strand order.
pub fn merge_strands(strands: &[RootedString]) -> Multigraph {
    let mut edges = Vec::new();
    let mut next = 2;
    for s in strands {
        let mut local = vec![usize::MAX; s.graph().vertex_count()];
        local[s.source()] = 0;
        local[s.target()] = 1;
        for slot in local.iter_mut().filter(|x| **x == usize::MAX) {
            *slot = next;
            next += 1;
        }
        edges.extend(s.graph().edges().iter().map(|e| e.map(|x| local[x])));
    }
    Multigraph::new(next, edges).expect("merged strands are loopless")
}
