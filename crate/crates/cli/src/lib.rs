//! Command implementations for the `spgenus` binary.
//!
//! Every command produces an [`OutputDocument`]; `main` only parses
//! arguments, prints, and maps errors to exit codes.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use spgenus_core::decompose::random_cubic_sp;
use spgenus_core::engine::{self, BlockKind, CubicTrace, Pipeline};
use spgenus_core::multigraph::{self, LabeledGraph, ParseError};
use spgenus_core::oracle::{self, OracleError};
use spgenus_core::{BigUint, ComputationReport, EngineError, GenusDistribution, Multigraph};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;
pub const EXIT_LIMIT: i32 = 4;
pub const EXIT_INTERNAL: i32 = 5;
/// Bad command line, as in BSD `sysexits.h`.
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Parser)]
#[command(
    name = "spgenus",
    version,
    about = "Exact genus distributions of series-parallel graphs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute the genus distribution of an edge-list file.
    Compute {
        file: PathBuf,
        /// Split a cubic input at these two vertex labels.
        #[arg(long, num_args = 2, value_names = ["P", "Q"])]
        terminals: Option<Vec<String>>,
        /// Include the partitioned genus distributions of every stage.
        #[arg(long)]
        pgd: bool,
        #[arg(long)]
        json: bool,
        /// Report per-phase timings (makes output vary between runs).
        #[arg(long)]
        timings: bool,
    },
    /// Genus distribution by enumerating all rotation systems.
    Oracle {
        file: PathBuf,
        #[arg(long, default_value_t = oracle::DEFAULT_LIMIT)]
        limit: u64,
        #[arg(long)]
        json: bool,
    },
    /// Run both the engine and the enumerator and compare.
    Check {
        file: PathBuf,
        #[arg(long, default_value_t = oracle::DEFAULT_LIMIT)]
        limit: u64,
        #[arg(long)]
        json: bool,
    },
    /// Print a random cubic series-parallel graph as an edge list.
    Generate {
        #[arg(long)]
        tau_steps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error: {0}")]
    Parse(ParseError),
    #[error("invalid input: {0}")]
    Validation(String),
    #[error("{0}")]
    Limit(OracleError),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => EXIT_PARSE,
            CliError::Parse(ParseError::Disconnected(_)) => EXIT_VALIDATION,
            CliError::Parse(_) => EXIT_PARSE,
            CliError::Validation(_) => EXIT_VALIDATION,
            CliError::Limit(_) => EXIT_LIMIT,
            CliError::Internal(_) => EXIT_INTERNAL,
        }
    }
}

impl From<EngineError> for CliError {
    fn from(e: EngineError) -> Self {
        if e.is_validation() {
            CliError::Validation(e.to_string())
        } else {
            CliError::Internal(e.to_string())
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::LimitExceeded { .. } => CliError::Limit(e),
            OracleError::Disconnected => CliError::Validation(e.to_string()),
            OracleError::InvalidRotation(_) => CliError::Internal(e.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphSummary {
    pub vertices: usize,
    pub edges: usize,
    /// Degree to number of vertices of that degree.
    pub degree_histogram: BTreeMap<usize, usize>,
    pub cycle_rank: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StrandDoc {
    pub expression: String,
    pub vertices: usize,
    pub uu_dot: Vec<String>,
    pub uu_prime: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClosureDoc {
    pub ss_dot: Vec<String>,
    pub ss_prime: Vec<String>,
    pub dd_dprime: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockDoc {
    /// Edge ids (line order in the input, from 0).
    pub edges: Vec<usize>,
    pub kind: &'static str,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub strands: Vec<StrandDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closure: Option<ClosureDoc>,
    pub distribution: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PartialsDoc {
    pub blocks: Vec<BlockDoc>,
    pub bridges: usize,
    pub bar_scalar: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleVerdict {
    pub verdict: &'static str,
    pub engine_distribution: Vec<String>,
    pub oracle_distribution: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_difference: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OutputDocument {
    pub tool: &'static str,
    pub version: &'static str,
    pub input_digest: String,
    pub mode: &'static str,
    pub pipeline: &'static str,
    pub graph: GraphSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub terminals: Option<[String; 2]>,
    pub genus_distribution: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub partials: Option<PartialsDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleVerdict>,
    /// Phase name to microseconds; only with `--timings`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<BTreeMap<String, u128>>,
}

impl OutputDocument {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("document serializes");
        s.push('\n');
        s
    }

    /// Human-readable rendering: distribution line, then a genus table.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let gd = GenusDistribution::from_decimal_strings(&self.genus_distribution).unwrap_or_default();
        let _ = writeln!(out, "genus distribution: {gd}");
        let _ = writeln!(
            out,
            "graph: {} vertices, {} edges, cycle rank {}; pipeline {}",
            self.graph.vertices, self.graph.edges, self.graph.cycle_rank, self.pipeline
        );
        if let Some([p, q]) = &self.terminals {
            let _ = writeln!(out, "terminals: {p} {q}");
        }
        let counts: Vec<&str> = self.genus_distribution.iter().map(String::as_str).collect();
        let width = counts.iter().map(|c| c.len()).max().unwrap_or(0).max(5);
        let _ = writeln!(out, "{:>5}  {:>width$}  {:>10}", "genus", "count", "cumulative");
        let total = gd.total();
        let mut running = BigUint::default();
        for (i, c) in gd.counts().iter().enumerate() {
            running += c;
            let _ = writeln!(
                out,
                "{i:>5}  {:>width$}  {:>10}",
                c.to_string(),
                percent(&running, &total)
            );
        }
        if let Some(p) = &self.partials {
            let _ = writeln!(out, "bridges: {}, bar scalar: {}", p.bridges, p.bar_scalar);
            for (i, b) in p.blocks.iter().enumerate() {
                let _ = writeln!(
                    out,
                    "block {i} ({}, {} edges): {}",
                    b.kind,
                    b.edges.len(),
                    b.distribution.join(" ")
                );
                for (k, s) in b.strands.iter().enumerate() {
                    let _ = writeln!(
                        out,
                        "  strand {}: {} ({} vertices) uu.: [{}] uu': [{}]",
                        k + 1,
                        s.expression,
                        s.vertices,
                        s.uu_dot.join(", "),
                        s.uu_prime.join(", ")
                    );
                }
                if let Some(c) = &b.closure {
                    let _ = writeln!(
                        out,
                        "  closure ss.: [{}] ss': [{}] dd'': [{}]",
                        c.ss_dot.join(", "),
                        c.ss_prime.join(", "),
                        c.dd_dprime.join(", ")
                    );
                }
            }
        }
        if let Some(v) = &self.oracle {
            let _ = writeln!(out, "engine: {}", v.engine_distribution.join(" "));
            let _ = writeln!(out, "oracle: {}", v.oracle_distribution.join(" "));
            match v.first_difference {
                Some(g) => {
                    let _ = writeln!(out, "verdict: {} (first difference at genus {g})", v.verdict);
                }
                None => {
                    let _ = writeln!(out, "verdict: {}", v.verdict);
                }
            }
        }
        if let Some(t) = &self.timings {
            for (phase, us) in t {
                let _ = writeln!(out, "time {phase}: {us} us");
            }
        }
        out
    }
}

/// `part / whole` as a percentage with two decimals, in exact arithmetic.
fn percent(part: &BigUint, whole: &BigUint) -> String {
    if *whole == BigUint::default() {
        return "-".into();
    }
    let basis = (part * BigUint::from(100_000u32) / whole + BigUint::from(5u32)) / BigUint::from(10u32);
    let basis = basis.to_string();
    // basis is in hundredths of a percent
    let padded = format!("{basis:0>3}");
    let (int, frac) = padded.split_at(padded.len() - 2);
    format!("{int}.{frac}%")
}

/// What `main` prints and the status it exits with.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

struct Input {
    labeled: LabeledGraph,
    digest: String,
}

fn read_input(path: &Path) -> Result<Input, CliError> {
    let bytes = std::fs::read(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })?;
    let digest = format!("sha256:{}", hex::encode(Sha256::digest(&bytes)));
    let text = String::from_utf8(bytes).map_err(|e| CliError::Io {
        path: path.to_owned(),
        source: std::io::Error::new(std::io::ErrorKind::InvalidData, e),
    })?;
    let labeled = multigraph::parse_labeled(&text).map_err(CliError::Parse)?;
    Ok(Input { labeled, digest })
}

fn summary(g: &Multigraph) -> GraphSummary {
    GraphSummary {
        vertices: g.vertex_count(),
        edges: g.edge_count(),
        degree_histogram: g.degree_histogram(),
        cycle_rank: g.cycle_rank(),
    }
}

fn decimal(gd: &GenusDistribution) -> Vec<String> {
    gd.to_decimal_strings()
}

fn pipeline_name(p: &Pipeline) -> &'static str {
    match p {
        Pipeline::CubicBiconnectedSp => "cubic-biconnected-sp",
        Pipeline::Treewidth2MaxDegree3 => "treewidth2-maxdeg3",
    }
}

fn strand_docs(t: &CubicTrace) -> (Vec<StrandDoc>, ClosureDoc) {
    let strands = t
        .strands
        .iter()
        .map(|s| StrandDoc {
            expression: s.expression.to_string(),
            vertices: s.vertices,
            uu_dot: decimal(&s.pgd.uu_dot),
            uu_prime: decimal(&s.pgd.uu_prime),
        })
        .collect();
    let closure = ClosureDoc {
        ss_dot: decimal(&t.closure.ss_dot),
        ss_prime: decimal(&t.closure.ss_prime),
        dd_dprime: decimal(&t.closure.dd_dprime),
    };
    (strands, closure)
}

fn partials_doc(g: &Multigraph, r: &ComputationReport) -> PartialsDoc {
    let blocks = match (&r.pipeline, &r.cubic) {
        (Pipeline::CubicBiconnectedSp, Some(t)) => {
            let (strands, closure) = strand_docs(t);
            vec![BlockDoc {
                edges: (0..g.edge_count()).collect(),
                kind: "cubic",
                strands,
                closure: Some(closure),
                distribution: decimal(&t.distribution),
            }]
        }
        _ => r
            .blocks
            .iter()
            .map(|b| match &b.kind {
                BlockKind::Cycle => BlockDoc {
                    edges: b.edges.clone(),
                    kind: "cycle",
                    strands: Vec::new(),
                    closure: None,
                    distribution: decimal(&b.distribution),
                },
                BlockKind::Cubic(t) => {
                    let (strands, closure) = strand_docs(t);
                    BlockDoc {
                        edges: b.edges.clone(),
                        kind: "cubic",
                        strands,
                        closure: Some(closure),
                        distribution: decimal(&b.distribution),
                    }
                }
            })
            .collect(),
    };
    PartialsDoc {
        blocks,
        bridges: r.bridges,
        bar_scalar: r.bar_scalar.to_string(),
    }
}

/// Whether the graph goes to the three-string algorithm directly.
fn is_cubic_block(g: &Multigraph) -> Result<bool, CliError> {
    if !g.is_regular(3) {
        return Ok(false);
    }
    let bd = multigraph::block_decomposition(g).map_err(|e| CliError::Internal(e.to_string()))?;
    Ok(bd.blocks().len() == 1 && !bd.is_bridge(0))
}

/// Runs the engine, choosing the pipeline from the degree structure.
fn run_engine(
    lg: &LabeledGraph,
    terminals: Option<&[String]>,
) -> Result<(ComputationReport, Option<[String; 2]>), CliError> {
    let g = &lg.graph;
    let cubic = is_cubic_block(g)?;
    let report = match (terminals, cubic) {
        (Some(t), true) => {
            let [p, q] = [&t[0], &t[1]].map(|l| {
                lg.vertex_of(l)
                    .ok_or_else(|| CliError::Validation(format!("no vertex labelled {l:?}")))
            });
            engine::gd_cubic_with_terminals(g, p?, q?)?
        }
        (Some(_), false) => {
            return Err(CliError::Validation(
                "--terminals needs a 3-regular biconnected graph".into(),
            ))
        }
        (None, true) => engine::gd_cubic_biconnected_sp(g)?,
        (None, false) => engine::gd_treewidth2_maxdeg3(g)?,
    };
    let terminals = report.cubic.as_ref().filter(|_| cubic).map(|t| {
        let (p, q) = t.terminals;
        [lg.labels[p].clone(), lg.labels[q].clone()]
    });
    Ok((report, terminals))
}

fn base_document(input: &Input, mode: &'static str, pipeline: &'static str, gd: &GenusDistribution) -> OutputDocument {
    OutputDocument {
        tool: "spgenus",
        version: env!("CARGO_PKG_VERSION"),
        input_digest: input.digest.clone(),
        mode,
        pipeline,
        graph: summary(&input.labeled.graph),
        terminals: None,
        genus_distribution: decimal(gd),
        partials: None,
        oracle: None,
        timings: None,
    }
}

pub fn cmd_compute(
    path: &Path,
    terminals: Option<&[String]>,
    emit_pgd: bool,
    timings: bool,
) -> Result<OutputDocument, CliError> {
    let input = read_input(path)?;
    let (report, chosen) = run_engine(&input.labeled, terminals)?;
    let mut doc = base_document(&input, "compute", pipeline_name(&report.pipeline), &report.distribution);
    doc.terminals = chosen;
    if emit_pgd {
        doc.partials = Some(partials_doc(&input.labeled.graph, &report));
    }
    if timings {
        doc.timings = Some(
            report
                .timings
                .iter()
                .map(|(k, d)| (k.to_string(), d.as_micros()))
                .collect(),
        );
    }
    Ok(doc)
}

pub fn cmd_oracle(path: &Path, limit: u64) -> Result<OutputDocument, CliError> {
    let input = read_input(path)?;
    let gd = oracle::gd_brute_force(&input.labeled.graph, limit)?;
    Ok(base_document(&input, "oracle", "rotation-enumeration", &gd))
}

fn first_difference(a: &GenusDistribution, b: &GenusDistribution) -> Option<usize> {
    (0..a.len().max(b.len())).find(|&i| a.get(i) != b.get(i))
}

/// Runs the enumerator and the engine; the verdict is in `doc.oracle`.
pub fn cmd_check(path: &Path, limit: u64) -> Result<OutputDocument, CliError> {
    let input = read_input(path)?;
    let expected = oracle::gd_brute_force(&input.labeled.graph, limit)?;
    let (report, chosen) = run_engine(&input.labeled, None)?;
    let diff = first_difference(&report.distribution, &expected);
    let mut doc = base_document(&input, "check", pipeline_name(&report.pipeline), &report.distribution);
    doc.terminals = chosen;
    doc.oracle = Some(OracleVerdict {
        verdict: if diff.is_none() { "MATCH" } else { "MISMATCH" },
        engine_distribution: decimal(&report.distribution),
        oracle_distribution: decimal(&expected),
        first_difference: diff,
    });
    Ok(doc)
}

pub fn cmd_generate(tau_steps: usize, seed: u64) -> String {
    random_cubic_sp(tau_steps, seed).to_edge_list()
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let render = |doc: OutputDocument, json: bool| {
        let code = match &doc.oracle {
            Some(v) if v.first_difference.is_some() => EXIT_MISMATCH,
            _ => EXIT_OK,
        };
        let stdout = if json { doc.to_json() } else { doc.to_table() };
        Outcome { stdout, code }
    };
    Ok(match &cli.command {
        Command::Compute {
            file,
            terminals,
            pgd,
            json,
            timings,
        } => render(cmd_compute(file, terminals.as_deref(), *pgd, *timings)?, *json),
        Command::Oracle { file, limit, json } => render(cmd_oracle(file, *limit)?, *json),
        Command::Check { file, limit, json } => render(cmd_check(file, *limit)?, *json),
        Command::Generate { tau_steps, seed } => Outcome {
            stdout: cmd_generate(*tau_steps, *seed),
            code: EXIT_OK,
        },
    })
}
