//! Compiling set-disjointness instances into clique-detection networks, and
//! brute-force checking of the compiled instances against the clique oracle.
//!
//! Given a lower-bound graph with designated family `E_1..E_k` and a
//! disjointness instance `(X, Y)`, the compiled graph adds the A-pair edge of
//! `E_i` whenever `x_i = 1` and the B-pair edge whenever `y_i = 1`. The
//! result contains a `K_4` exactly when some index has `x_i = y_i = 1`. For
//! targets larger than `K_4` a clique of fresh vertices is attached to every
//! original vertex.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{contains_clique, Graph, VertexSet};
use crate::lbgraph::LowerBoundGraph;

/// Largest `k` accepted by exhaustive checking (`4^k` compiled instances).
pub const EXHAUSTIVE_K_LIMIT: usize = 10;

/// A two-party set-disjointness instance: bit vectors `X` and `Y` of equal
/// length `k`. Indices are 0-based internally and 1-based in prose.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DisjInstance {
    x: Vec<bool>,
    y: Vec<bool>,
}

impl DisjInstance {
    pub fn new(x: Vec<bool>, y: Vec<bool>) -> Result<Self> {
        if x.is_empty() || x.len() != y.len() {
            return Err(Error::invalid(format!(
                "bit vectors must have equal nonzero length, got {} and {}",
                x.len(),
                y.len()
            )));
        }
        Ok(DisjInstance { x, y })
    }

    /// Parses `'0'`/`'1'` strings; index `i` of the string is bit `i`.
    pub fn from_bitstrings(x: &str, y: &str) -> Result<Self> {
        let parse = |s: &str| -> Result<Vec<bool>> {
            s.chars()
                .map(|c| match c {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    other => Err(Error::invalid(format!("bad bit character {other:?}"))),
                })
                .collect()
        };
        DisjInstance::new(parse(x)?, parse(y)?)
    }

    /// Builds the instance whose bit `i` is bit `i` of the given integers.
    pub fn from_integers(k: usize, x_bits: u64, y_bits: u64) -> Result<Self> {
        if k == 0 || k > 64 {
            return Err(Error::invalid(format!("k = {k} out of range 1..=64")));
        }
        let unpack = |v: u64| (0..k).map(|i| v >> i & 1 != 0).collect();
        DisjInstance::new(unpack(x_bits), unpack(y_bits))
    }

    pub fn k(&self) -> usize {
        self.x.len()
    }

    pub fn x_bit(&self, i: usize) -> bool {
        self.x[i]
    }

    pub fn y_bit(&self, i: usize) -> bool {
        self.y[i]
    }

    pub fn x_string(&self) -> String {
        self.x.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }

    pub fn y_string(&self) -> String {
        self.y.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }
}

/// `DISJ(X, Y)`: true iff some index has `x_i = y_i = 1`.
pub fn disj(inst: &DisjInstance) -> bool {
    inst.x.iter().zip(&inst.y).any(|(&a, &b)| a && b)
}

/// A graph whose vertices are split between two players. Alice holds
/// `G_A = (V, E_A ∪ C)` and Bob holds `G_B = (V, E_B ∪ C)`, where `C` is the
/// cut: both endpoints know every cut edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionedGraph {
    graph: Graph,
    side_a: VertexSet,
    side_b: VertexSet,
    cut_edges: Vec<(u32, u32)>,
    side_a_edges: Vec<(u32, u32)>,
    side_b_edges: Vec<(u32, u32)>,
}

impl PartitionedGraph {
    /// Splits `graph` by the given A side; the B side is the complement.
    pub fn new(graph: Graph, side_a: VertexSet) -> Result<Self> {
        let n = graph.n_vertices() as u32;
        if side_a.iter().any(|v| v >= n) {
            return Err(Error::invalid("side A contains out-of-range ids"));
        }
        let side_b: VertexSet = (0..n).filter(|&v| !side_a.contains(v)).collect();
        let mut cut_edges = Vec::new();
        let mut side_a_edges = Vec::new();
        let mut side_b_edges = Vec::new();
        for &(u, v) in graph.edges() {
            match (side_a.contains(u), side_a.contains(v)) {
                (true, true) => side_a_edges.push((u, v)),
                (false, false) => side_b_edges.push((u, v)),
                _ => cut_edges.push((u, v)),
            }
        }
        Ok(PartitionedGraph {
            graph,
            side_a,
            side_b,
            cut_edges,
            side_a_edges,
            side_b_edges,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn side_a(&self) -> &VertexSet {
        &self.side_a
    }

    pub fn side_b(&self) -> &VertexSet {
        &self.side_b
    }

    pub fn cut_edges(&self) -> &[(u32, u32)] {
        &self.cut_edges
    }

    pub fn side_a_edges(&self) -> &[(u32, u32)] {
        &self.side_a_edges
    }

    pub fn side_b_edges(&self) -> &[(u32, u32)] {
        &self.side_b_edges
    }

    pub fn cut_size(&self) -> usize {
        self.cut_edges.len()
    }
}

/// One disagreement between the clique oracle and `DISJ`.
#[derive(Clone, Debug, Serialize)]
pub struct Mismatch {
    pub x: String,
    pub y: String,
    pub disj_value: bool,
    pub clique_found: bool,
}

/// Outcome of sweeping compiled instances against the clique oracle.
#[derive(Clone, Debug, Serialize)]
pub struct ReductionReport {
    pub instances_checked: usize,
    pub mismatches: Vec<Mismatch>,
    pub cut_size: usize,
    pub passed: bool,
}

/// How [`check_reduction`] picks `(X, Y)` pairs.
#[derive(Clone, Copy, Debug)]
pub enum CheckMode {
    /// All `4^k` pairs; requires `k <= EXHAUSTIVE_K_LIMIT`.
    Exhaustive,
    /// `count` pairs drawn uniformly from a seeded stream.
    Sampled { count: usize, seed: u64 },
}

/// Compiles `(lbg, inst)` into the partitioned clique-detection graph for
/// target clique size `ell`.
///
/// Vertex layout: A-side ids `0..n_a`, then B-side ids `n_a..n_a+n_b`, then
/// `ell - 4` fresh vertices. The fresh vertices form a clique, connect to
/// every original vertex, and sit on Alice's side, so the cut is exactly the
/// base cross edges plus the fresh-to-B edges.
pub fn build_instance(
    lbg: &LowerBoundGraph,
    inst: &DisjInstance,
    ell: usize,
) -> Result<PartitionedGraph> {
    if ell < 4 {
        return Err(Error::invalid(format!("ell = {ell} must be at least 4")));
    }
    if inst.k() != lbg.k() {
        return Err(Error::invalid(format!(
            "instance length {} does not match designated family size {}",
            inst.k(),
            lbg.k()
        )));
    }
    let n_a = lbg.base().n_a() as u32;
    let n_b = lbg.base().n_b() as u32;
    let fresh = (ell - 4) as u32;
    let n = n_a + n_b + fresh;

    let mut edges = BTreeSet::new();
    for &(a, b) in lbg.base().edges() {
        edges.insert((a, n_a + b));
    }
    for (i, k) in lbg.designated().iter().enumerate() {
        if inst.x_bit(i) {
            edges.insert(k.a_pair());
        }
        if inst.y_bit(i) {
            let (b1, b2) = k.b_pair();
            edges.insert((n_a + b1, n_a + b2));
        }
    }
    for f in 0..fresh {
        let fv = n_a + n_b + f;
        for g in f + 1..fresh {
            edges.insert((fv, n_a + n_b + g));
        }
        for v in 0..n_a + n_b {
            edges.insert((v, fv));
        }
    }

    let graph = Graph::new(n as usize, edges)?;
    let side_a: VertexSet = (0..n_a).chain(n_a + n_b..n).collect();
    PartitionedGraph::new(graph, side_a)
}

/// Sweeps `(X, Y)` pairs, comparing `DISJ` against the clique oracle on the
/// compiled graph. Instances are independent and fan out across threads;
/// the report lists them in sweep order.
pub fn check_reduction(lbg: &LowerBoundGraph, ell: usize, mode: CheckMode) -> Result<ReductionReport> {
    let k = lbg.k();
    if k == 0 {
        return Err(Error::invalid("designated family is empty"));
    }
    if ell < 4 {
        return Err(Error::invalid(format!("ell = {ell} must be at least 4")));
    }
    let instances: Vec<DisjInstance> = match mode {
        CheckMode::Exhaustive => {
            if k > EXHAUSTIVE_K_LIMIT {
                return Err(Error::invalid(format!(
                    "exhaustive mode supports k <= {EXHAUSTIVE_K_LIMIT}, got {k}; use sampling"
                )));
            }
            let side = 1u64 << k;
            (0..side)
                .flat_map(|x| (0..side).map(move |y| (x, y)))
                .map(|(x, y)| DisjInstance::from_integers(k, x, y))
                .collect::<Result<_>>()?
        }
        CheckMode::Sampled { count, seed } => {
            // Bits are drawn directly, so any family size is supported.
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..count)
                .map(|_| {
                    let x = (0..k).map(|_| rng.random::<bool>()).collect();
                    let y = (0..k).map(|_| rng.random::<bool>()).collect();
                    DisjInstance::new(x, y)
                })
                .collect::<Result<_>>()?
        }
    };

    let mismatches: Vec<Mismatch> = instances
        .par_iter()
        .map(|inst| {
            let pg = build_instance(lbg, inst, ell)?;
            Ok((inst, disj(inst), contains_clique(pg.graph(), ell)))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter(|(_, d, c)| d != c)
        .map(|(inst, disj_value, clique_found)| Mismatch {
            x: inst.x_string(),
            y: inst.y_string(),
            disj_value,
            clique_found,
        })
        .collect();

    let cut_size = compiled_cut_size(lbg, ell);
    Ok(ReductionReport {
        instances_checked: instances.len(),
        passed: mismatches.is_empty(),
        mismatches,
        cut_size,
    })
}

fn compiled_cut_size(lbg: &LowerBoundGraph, ell: usize) -> usize {
    lbg.base().edge_count() + (ell - 4) * lbg.base().n_b()
}

/// Bits a round-synchronous simulation pushes through the compiled cut:
/// `rounds * cut_size * bandwidth`. `rounds = 0` is allowed and yields 0.
pub fn cut_traffic_bound(
    lbg: &LowerBoundGraph,
    ell: usize,
    rounds: u64,
    bandwidth: u64,
) -> Result<u64> {
    if ell < 4 {
        return Err(Error::invalid(format!("ell = {ell} must be at least 4")));
    }
    if bandwidth < 1 {
        return Err(Error::invalid("bandwidth must be at least 1"));
    }
    Ok(rounds * compiled_cut_size(lbg, ell) as u64 * bandwidth)
}
