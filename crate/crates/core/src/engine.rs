//! Genus distributions of cubic biconnected series-parallel graphs, and of
//! connected graphs with treewidth at most 2 and maximum degree at most 3.

use std::collections::{BTreeMap, VecDeque};
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rayon::prelude::*;
use thiserror::Error;

use crate::decompose::{self, DecomposeError, DmtExpression, ReductionFailure};
use crate::multigraph::{self, EdgeId, Multigraph, Smoothed, VertexId};
use crate::oracle::rotation_census;
use crate::pgd::{ClosurePartials, GenusDistribution, UUPartials};
use crate::productions::{close_parallel, join_parallel};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("graph is disconnected ({0} components)")]
    Disconnected(usize),
    #[error("vertex {vertex} has degree {degree}; the maximum supported degree is 3")]
    DegreeTooHigh { vertex: VertexId, degree: usize },
    #[error("graph has treewidth greater than 2 (it has a K4 minor)")]
    TreewidthExceeded,
    #[error("not a cubic biconnected series-parallel graph: {0}")]
    NotCubicSp(ReductionFailure),
    #[error(transparent)]
    InvalidTerminals(DecomposeError),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl EngineError {
    /// Whether the error is about the input rather than a defect here.
    pub fn is_validation(&self) -> bool {
        !matches!(self, EngineError::Invariant(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputSummary {
    pub vertices: usize,
    pub edges: usize,
    pub degree_histogram: BTreeMap<usize, usize>,
    pub cycle_rank: usize,
}

impl InputSummary {
    pub fn of(g: &Multigraph) -> Self {
        InputSummary {
            vertices: g.vertex_count(),
            edges: g.edge_count(),
            degree_histogram: g.degree_histogram(),
            cycle_rank: g.cycle_rank(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrandTrace {
    pub expression: DmtExpression,
    pub vertices: usize,
    pub pgd: UUPartials,
}

/// Intermediate values of one run of the three-string algorithm.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubicTrace {
    pub terminals: (VertexId, VertexId),
    pub strands: Vec<StrandTrace>,
    /// The first two strands joined in parallel.
    pub closure: ClosurePartials,
    pub distribution: GenusDistribution,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BlockKind {
    /// Smooths to a cycle; one planar embedding.
    Cycle,
    Cubic(CubicTrace),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockTrace {
    pub edges: Vec<EdgeId>,
    pub kind: BlockKind,
    pub distribution: GenusDistribution,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Pipeline {
    CubicBiconnectedSp,
    Treewidth2MaxDegree3,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComputationReport {
    pub pipeline: Pipeline,
    pub summary: InputSummary,
    /// Present when the input itself went through the three-string algorithm.
    pub cubic: Option<CubicTrace>,
    /// Non-bridge blocks, for the general pipeline.
    pub blocks: Vec<BlockTrace>,
    pub bridges: usize,
    /// Product of the bar-amalgamation degree factors.
    pub bar_scalar: BigUint,
    pub distribution: GenusDistribution,
    pub timings: Vec<(&'static str, Duration)>,
}

struct Timer {
    phases: Vec<(&'static str, Duration)>,
    last: Instant,
}

impl Timer {
    fn start() -> Self {
        Timer {
            phases: Vec::new(),
            last: Instant::now(),
        }
    }

    fn lap(&mut self, name: &'static str) {
        let now = Instant::now();
        self.phases.push((name, now - self.last));
        self.last = now;
    }
}

/// Genus distribution of a cubic biconnected series-parallel graph, with
/// terminals chosen by [`decompose::find_terminals`].
pub fn gd_cubic_biconnected_sp(g: &Multigraph) -> Result<ComputationReport, EngineError> {
    cubic_report(g, None)
}

/// As [`gd_cubic_biconnected_sp`], splitting at the given terminals.
pub fn gd_cubic_with_terminals(g: &Multigraph, p: VertexId, q: VertexId) -> Result<ComputationReport, EngineError> {
    cubic_report(g, Some((p, q)))
}

fn cubic_report(g: &Multigraph, terminals: Option<(VertexId, VertexId)>) -> Result<ComputationReport, EngineError> {
    let mut timer = Timer::start();
    let trace = cubic_trace(g, terminals, &mut timer)?;
    check_distribution(g, &trace.distribution)?;
    timer.lap("verify");
    Ok(ComputationReport {
        pipeline: Pipeline::CubicBiconnectedSp,
        summary: InputSummary::of(g),
        distribution: trace.distribution.clone(),
        cubic: Some(trace),
        blocks: Vec::new(),
        bridges: 0,
        bar_scalar: BigUint::from(1u32),
        timings: timer.phases,
    })
}

fn cubic_trace(
    g: &Multigraph,
    terminals: Option<(VertexId, VertexId)>,
    timer: &mut Timer,
) -> Result<CubicTrace, EngineError> {
    decompose::reduce_to_dipole(g).map_err(EngineError::NotCubicSp)?;
    timer.lap("validate");
    let (p, q) = match terminals {
        Some(t) => t,
        None => decompose::find_terminals(g).map_err(|e| EngineError::Invariant(e.to_string()))?,
    };
    let strings = decompose::split_into_strands(g, p, q).map_err(|e| match e {
        e @ DecomposeError::InvalidTerminals { .. } => EngineError::InvalidTerminals(e),
        e => EngineError::Invariant(e.to_string()),
    })?;
    timer.lap("split");
    let strands = strings
        .iter()
        .map(|s| {
            let expression = decompose::parse_dmt_string(s).map_err(|e| EngineError::Invariant(e.to_string()))?;
            let pgd = expression.evaluate();
            Ok(StrandTrace {
                expression,
                vertices: s.graph().vertex_count(),
                pgd,
            })
        })
        .collect::<Result<Vec<_>, EngineError>>()?;
    timer.lap("strands");
    let closure = join_parallel(&strands[0].pgd, &strands[1].pgd);
    let distribution = close_parallel(&closure, &strands[2].pgd);
    timer.lap("close");
    Ok(CubicTrace {
        terminals: (p, q),
        strands,
        closure,
        distribution,
    })
}

/// Genus distribution of a connected graph of treewidth at most 2 and
/// maximum degree at most 3, assembling blocks from vertex 0.
pub fn gd_treewidth2_maxdeg3(g: &Multigraph) -> Result<ComputationReport, EngineError> {
    gd_treewidth2_maxdeg3_rooted(g, 0)
}

/// As [`gd_treewidth2_maxdeg3`], starting the bar-amalgamation from the
/// piece containing `root`.
///
/// Pieces are the non-bridge blocks and the vertices lying in no such block;
/// bridges join them into a tree. Walking that tree breadth-first, each bridge
/// `(u, v)` from the assembled part to a new piece multiplies the count by
/// `deg(u) * deg(v)` measured just before it is added, with a degree of zero
/// counting as one.
pub fn gd_treewidth2_maxdeg3_rooted(g: &Multigraph, root: VertexId) -> Result<ComputationReport, EngineError> {
    let mut timer = Timer::start();
    let components = g.component_count();
    if components > 1 {
        return Err(EngineError::Disconnected(components));
    }
    if let Some(v) = (0..g.vertex_count()).find(|&v| g.degree(v) > 3) {
        return Err(EngineError::DegreeTooHigh {
            vertex: v,
            degree: g.degree(v),
        });
    }
    if !multigraph::is_treewidth_at_most_2(g) {
        return Err(EngineError::TreewidthExceeded);
    }
    if root >= g.vertex_count().max(1) {
        return Err(EngineError::Invariant(format!("root {root} out of range")));
    }
    timer.lap("validate");
    if g.vertex_count() <= 1 {
        return Ok(ComputationReport {
            pipeline: Pipeline::Treewidth2MaxDegree3,
            summary: InputSummary::of(g),
            cubic: None,
            blocks: Vec::new(),
            bridges: 0,
            bar_scalar: BigUint::from(1u32),
            distribution: GenusDistribution::one(),
            timings: timer.phases,
        });
    }

    let bd = multigraph::block_decomposition(g).map_err(|e| EngineError::Invariant(e.to_string()))?;
    let block_ids: Vec<usize> = (0..bd.blocks().len()).filter(|&b| !bd.is_bridge(b)).collect();
    timer.lap("blocks");

    let blocks = block_ids
        .par_iter()
        .map(|&b| block_trace(g, bd.blocks()[b].clone()))
        .collect::<Result<Vec<_>, EngineError>>()?;
    timer.lap("block distributions");

    const NONE: usize = usize::MAX;
    let mut piece_of = vec![NONE; g.vertex_count()];
    let mut piece_vertices: Vec<Vec<VertexId>> = Vec::new();
    let mut cur_deg = vec![0usize; g.vertex_count()];
    for &b in &block_ids {
        let id = piece_vertices.len();
        let verts = bd.block_vertices(g, b);
        for &v in &verts {
            if piece_of[v] != NONE {
                return Err(EngineError::Invariant(format!(
                    "vertex {v} lies in two non-bridge blocks"
                )));
            }
            piece_of[v] = id;
        }
        for &e in &bd.blocks()[b] {
            for v in g.endpoints(e) {
                cur_deg[v] += 1;
            }
        }
        piece_vertices.push(verts);
    }
    for (v, piece) in piece_of.iter_mut().enumerate() {
        if *piece == NONE {
            *piece = piece_vertices.len();
            piece_vertices.push(vec![v]);
        }
    }
    let mut bridges_at: Vec<Vec<EdgeId>> = vec![Vec::new(); g.vertex_count()];
    let mut bridge_count = 0;
    for e in bd.bridges() {
        let [a, b] = g.endpoints(e);
        bridges_at[a].push(e);
        bridges_at[b].push(e);
        bridge_count += 1;
    }

    let mut bar_scalar = BigUint::from(1u32);
    let mut attached = vec![false; piece_vertices.len()];
    let mut queue = VecDeque::from([piece_of[root]]);
    attached[piece_of[root]] = true;
    while let Some(piece) = queue.pop_front() {
        for &u in &piece_vertices[piece] {
            for &e in &bridges_at[u] {
                let v = g.opposite(e, u);
                let next = piece_of[v];
                if attached[next] {
                    continue;
                }
                bar_scalar *= (cur_deg[u].max(1) * cur_deg[v].max(1)) as u64;
                cur_deg[u] += 1;
                cur_deg[v] += 1;
                attached[next] = true;
                queue.push_back(next);
            }
        }
    }
    if attached.iter().any(|a| !a) {
        return Err(EngineError::Invariant("bridges do not connect all pieces".into()));
    }

    let distribution = blocks
        .iter()
        .fold(GenusDistribution::one(), |acc, b| acc.convolve(&b.distribution))
        .scale(&bar_scalar);
    timer.lap("assemble");
    check_distribution(g, &distribution)?;
    timer.lap("verify");

    let cubic = match (&blocks[..], bridge_count) {
        (
            [BlockTrace {
                kind: BlockKind::Cubic(t),
                ..
            }],
            0,
        ) if g.is_regular(3) => Some(t.clone()),
        _ => None,
    };
    Ok(ComputationReport {
        pipeline: Pipeline::Treewidth2MaxDegree3,
        summary: InputSummary::of(g),
        cubic,
        blocks,
        bridges: bridge_count,
        bar_scalar,
        distribution,
        timings: timer.phases,
    })
}

fn block_trace(g: &Multigraph, edges: Vec<EdgeId>) -> Result<BlockTrace, EngineError> {
    let (sub, _) = g.edge_subgraph(&edges);
    match multigraph::smooth_degree2(&sub) {
        Smoothed::Cycle => Ok(BlockTrace {
            edges,
            kind: BlockKind::Cycle,
            distribution: GenusDistribution::one(),
        }),
        Smoothed::Graph(h) => {
            let mut timer = Timer::start();
            let trace = cubic_trace(&h, None, &mut timer).map_err(|e| {
                EngineError::Invariant(format!("block with edges {edges:?} failed the cubic pipeline: {e}"))
            })?;
            Ok(BlockTrace {
                edges,
                distribution: trace.distribution.clone(),
                kind: BlockKind::Cubic(trace),
            })
        }
    }
}

/// Total equals the rotation census, support is an interval, and the
/// maximum genus is at most the cycle rank.
fn check_distribution(g: &Multigraph, gd: &GenusDistribution) -> Result<(), EngineError> {
    let census = rotation_census(g);
    if gd.total() != census {
        return Err(EngineError::Invariant(format!(
            "total {} differs from the rotation census {census}",
            gd.total()
        )));
    }
    if !gd.has_consecutive_support() {
        return Err(EngineError::Invariant(format!("support of {gd} is not consecutive")));
    }
    if let Some(max) = gd.max_genus() {
        if max > g.cycle_rank() {
            return Err(EngineError::Invariant(format!(
                "genus {max} exceeds the cycle rank {}",
                g.cycle_rank()
            )));
        }
    }
    Ok(())
}
