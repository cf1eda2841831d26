//! Randomized construction and exhaustive verification of lower-bound graphs.
//!
//! A lower-bound graph is a bipartite graph whose edge set is the union of a
//! designated family of `K_{2,2}` copies such that (1) the edge count stays
//! under a budget, (2) every designated set really induces a `K_{2,2}`,
//! (3) mixing the A-pair of one designated set with the B-pair of another
//! never induces a `K_{2,2}`, and (4) the two pair graphs `H_A` and `H_B`
//! (vertices of one side, edges given by the designated pairs) are bipartite.
//!
//! The construction pipeline: sample a random bipartite graph with edge
//! probability `1/sqrt(n)`, enumerate its `K_{2,2}` copies in canonical
//! order, then greedily peel a conflict-free subfamily using per-pair
//! multiplicity caps, a random half sample of each side, and forbidden-pair
//! bookkeeping. The whole pipeline is a pure function of `(n, seed)`.

use std::collections::{BTreeSet, HashMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::graph::{enumerate_k22, is_bipartite, BipartiteGraph, Graph, VertexSet, K22};

/// Multiplicity cap applied to both A-pairs and B-pairs during peeling.
pub const PAIR_MULTIPLICITY_CAP: usize = 6;

/// A bipartite graph together with its designated `K_{2,2}` family, the
/// side-sample witnesses `A'`, `B'` and the derived pair graphs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LowerBoundGraph {
    base: BipartiteGraph,
    designated: Vec<K22>,
    sample_a: VertexSet,
    sample_b: VertexSet,
    h_a_edges: Vec<(u32, u32)>,
    h_b_edges: Vec<(u32, u32)>,
}

impl LowerBoundGraph {
    /// Assembles an instance from its parts. Only id ranges are validated
    /// here; whether the family actually satisfies the four defining items
    /// is the verifier's business, so candidate (possibly invalid) families
    /// can be represented and reported on.
    pub fn new(
        base: BipartiteGraph,
        designated: Vec<K22>,
        sample_a: VertexSet,
        sample_b: VertexSet,
    ) -> Result<Self> {
        let (n_a, n_b) = (base.n_a() as u32, base.n_b() as u32);
        for k in &designated {
            if k.a_pair().1 >= n_a || k.b_pair().1 >= n_b {
                return Err(Error::invalid(format!(
                    "designated set {k:?} out of range for sides {n_a} x {n_b}"
                )));
            }
        }
        if sample_a.iter().any(|v| v >= n_a) || sample_b.iter().any(|v| v >= n_b) {
            return Err(Error::invalid("side sample out of range"));
        }
        let h_a_edges: Vec<(u32, u32)> = designated
            .iter()
            .map(K22::a_pair)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let h_b_edges: Vec<(u32, u32)> = designated
            .iter()
            .map(K22::b_pair)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        Ok(LowerBoundGraph {
            base,
            designated,
            sample_a,
            sample_b,
            h_a_edges,
            h_b_edges,
        })
    }

    pub fn base(&self) -> &BipartiteGraph {
        &self.base
    }

    /// The designated family, in construction order.
    pub fn designated(&self) -> &[K22] {
        &self.designated
    }

    pub fn k(&self) -> usize {
        self.designated.len()
    }

    pub fn sample_a(&self) -> &VertexSet {
        &self.sample_a
    }

    pub fn sample_b(&self) -> &VertexSet {
        &self.sample_b
    }

    /// Edges of the pair graph `H_A` (canonical order, deduplicated).
    pub fn h_a_edges(&self) -> &[(u32, u32)] {
        &self.h_a_edges
    }

    pub fn h_b_edges(&self) -> &[(u32, u32)] {
        &self.h_b_edges
    }

    /// Pair graph on the A side.
    pub fn h_a(&self) -> Graph {
        Graph::new(self.base.n_a(), self.h_a_edges.iter().copied())
            .expect("pair edges are in range")
    }

    /// Pair graph on the B side.
    pub fn h_b(&self) -> Graph {
        Graph::new(self.base.n_b(), self.h_b_edges.iter().copied())
            .expect("pair edges are in range")
    }
}

/// Outcome of checking the four defining items against a concrete instance.
#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    /// Item 1: measured edge count and the bound it is checked against.
    pub edge_count: usize,
    pub m_bound: usize,
    pub edge_count_ok: bool,
    /// Item 2: base edge set equals the union of designated cross edges.
    pub union_ok: bool,
    /// Item 2: every designated set has all four cross edges present.
    pub all_designated_k22: bool,
    /// Item 3: ordered index pairs (i, j), i != j, whose mixed 4-set
    /// induces a `K_{2,2}`. Empty for a valid instance.
    pub cross_pair_violations: Vec<(usize, usize)>,
    /// Item 4: the pair graphs are bipartite.
    pub h_a_bipartite: bool,
    pub h_b_bipartite: bool,
    /// Size of the designated family.
    pub k_value: usize,
    pub passed: bool,
}

/// Counters gathered while constructing one instance.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ConstructionStats {
    /// Number of `K_{2,2}` copies in the random graph.
    pub k_total: usize,
    /// A-pairs whose copy multiplicity exceeds [`PAIR_MULTIPLICITY_CAP`].
    pub pairs_over_threshold_a: usize,
    /// Same for B-pairs.
    pub pairs_over_threshold_b: usize,
    /// Size of the peeled designated family.
    pub h_size: usize,
    /// Edge count of the assembled graph.
    pub edge_count: usize,
    /// Closed-form expectation `C(n,2)^2 p^4` of `k_total`.
    pub expected_k: f64,
}

/// Derives an independent stream seed from a user-facing seed and a role tag
/// (SHA-256 of the little-endian seed bytes followed by the tag; first eight
/// digest bytes, little-endian).
pub fn derive_seed(seed: u64, tag: &str) -> u64 {
    let mut hasher = Sha256::new();
    hasher.update(seed.to_le_bytes());
    hasher.update(tag.as_bytes());
    let digest = hasher.finalize();
    u64::from_le_bytes(digest[..8].try_into().expect("digest is long enough"))
}

/// Random bipartite graph with `|A| = |B| = n`: each of the `n^2` potential
/// edges is included independently with probability `p`, drawing one uniform
/// real per potential edge in ascending `(a, b)` order from a ChaCha8 stream.
pub fn generate_random_bipartite(n: usize, p: f64, seed: u64) -> Result<BipartiteGraph> {
    if n < 2 {
        return Err(Error::invalid(format!("side size {n} must be at least 2")));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::invalid(format!("edge probability {p} not in [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for a in 0..n as u32 {
        for b in 0..n as u32 {
            if rng.random::<f64>() < p {
                edges.push((a, b));
            }
        }
    }
    BipartiteGraph::new(n, n, edges)
}

/// The canonical `K_{2,2}` family of a graph plus per-pair indexes.
struct CopyIndex {
    copies: Vec<K22>,
    by_a_pair: HashMap<(u32, u32), Vec<u32>>,
    by_b_pair: HashMap<(u32, u32), Vec<u32>>,
}

impl CopyIndex {
    fn build(g: &BipartiteGraph) -> Self {
        let copies = enumerate_k22(g);
        let mut by_a_pair: HashMap<(u32, u32), Vec<u32>> = HashMap::new();
        let mut by_b_pair: HashMap<(u32, u32), Vec<u32>> = HashMap::new();
        for (idx, k) in copies.iter().enumerate() {
            by_a_pair.entry(k.a_pair()).or_default().push(idx as u32);
            by_b_pair.entry(k.b_pair()).or_default().push(idx as u32);
        }
        CopyIndex {
            copies,
            by_a_pair,
            by_b_pair,
        }
    }

    fn pairs_over_cap(map: &HashMap<(u32, u32), Vec<u32>>) -> usize {
        map.values().filter(|v| v.len() > PAIR_MULTIPLICITY_CAP).count()
    }
}

/// Per-acceptance instrumentation of the peeling loop.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct PeelCounters {
    /// Largest number of pairs any single acceptance pushed into `F_A`.
    pub max_fa_insertions: usize,
    /// Largest number of pairs any single acceptance pushed into `F_B`.
    pub max_fb_insertions: usize,
}

/// Greedy peeling: samples `A' ⊆ A` and `B' ⊆ B` with per-vertex probability
/// 1/2, then scans the canonical `K_{2,2}` family once. A copy is accepted
/// when both of its pair multiplicities (measured on the original family)
/// are at most the cap, exactly one of its A vertices lies in `A'`, exactly
/// one of its B vertices lies in `B'`, and neither pair is forbidden.
/// Accepting a copy forbids the B-pairs of every copy sharing its A-pair and
/// the A-pairs of every copy sharing its B-pair.
pub fn peel(g: &BipartiteGraph, seed: u64) -> LowerBoundGraph {
    let index = CopyIndex::build(g);
    peel_indexed(g, &index, seed).0
}

fn peel_indexed(g: &BipartiteGraph, index: &CopyIndex, seed: u64) -> (LowerBoundGraph, PeelCounters) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sample_a: VertexSet = (0..g.n_a() as u32)
        .filter(|_| rng.random::<f64>() < 0.5)
        .collect();
    let sample_b: VertexSet = (0..g.n_b() as u32)
        .filter(|_| rng.random::<f64>() < 0.5)
        .collect();

    let mut accepted = Vec::new();
    let mut forbidden_a: HashSet<(u32, u32)> = HashSet::new();
    let mut forbidden_b: HashSet<(u32, u32)> = HashSet::new();
    let mut counters = PeelCounters::default();

    for k in &index.copies {
        let (a1, a2) = k.a_pair();
        let (b1, b2) = k.b_pair();
        let a_mates = &index.by_a_pair[&(a1, a2)];
        let b_mates = &index.by_b_pair[&(b1, b2)];
        let in_a = sample_a.contains(a1) as usize + sample_a.contains(a2) as usize;
        let in_b = sample_b.contains(b1) as usize + sample_b.contains(b2) as usize;
        let admissible = a_mates.len() <= PAIR_MULTIPLICITY_CAP
            && b_mates.len() <= PAIR_MULTIPLICITY_CAP
            && in_a == 1
            && in_b == 1
            && !forbidden_a.contains(&(a1, a2))
            && !forbidden_b.contains(&(b1, b2));
        if !admissible {
            continue;
        }
        accepted.push(*k);
        counters.max_fa_insertions = counters.max_fa_insertions.max(b_mates.len());
        counters.max_fb_insertions = counters.max_fb_insertions.max(a_mates.len());
        for &idx in a_mates {
            forbidden_b.insert(index.copies[idx as usize].b_pair());
        }
        for &idx in b_mates {
            forbidden_a.insert(index.copies[idx as usize].a_pair());
        }
    }

    let mut edges = BTreeSet::new();
    for k in &accepted {
        edges.extend(k.cross_edges());
    }
    let base = BipartiteGraph::new(g.n_a(), g.n_b(), edges).expect("edges come from g");
    let lbg = LowerBoundGraph::new(base, accepted, sample_a, sample_b)
        .expect("peeled family is in range");
    (lbg, counters)
}

#[cfg(test)]
pub(crate) fn peel_with_counters(g: &BipartiteGraph, seed: u64) -> (LowerBoundGraph, PeelCounters) {
    let index = CopyIndex::build(g);
    peel_indexed(g, &index, seed)
}

/// End-to-end construction for side size `n`: random bipartite graph with
/// `p = 1/sqrt(n)` (edge stream seeded by tag `"edges"`), then peeling
/// (sample stream seeded by tag `"sample"`). Bit-identical output for
/// identical `(n, seed)`.
pub fn construct_lower_bound_graph(n: usize, seed: u64) -> Result<(LowerBoundGraph, ConstructionStats)> {
    if n < 4 {
        return Err(Error::invalid(format!("side size {n} must be at least 4")));
    }
    let p = 1.0 / (n as f64).sqrt();
    let g = generate_random_bipartite(n, p, derive_seed(seed, "edges"))?;
    let index = CopyIndex::build(&g);
    let (lbg, _) = peel_indexed(&g, &index, derive_seed(seed, "sample"));
    let choose2 = (n * (n - 1) / 2) as f64;
    let stats = ConstructionStats {
        k_total: index.copies.len(),
        pairs_over_threshold_a: CopyIndex::pairs_over_cap(&index.by_a_pair),
        pairs_over_threshold_b: CopyIndex::pairs_over_cap(&index.by_b_pair),
        h_size: lbg.k(),
        edge_count: lbg.base().edge_count(),
        expected_k: choose2 * choose2 * p.powi(4),
    };
    Ok((lbg, stats))
}

/// Checks the four defining items against `lbg` with edge budget `m_bound`.
/// Failures are reported, not raised.
pub fn verify_lower_bound_graph(lbg: &LowerBoundGraph, m_bound: usize) -> VerificationReport {
    let base = lbg.base();
    let edge_count = base.edge_count();
    let edge_count_ok = edge_count <= m_bound;

    let mut covered = BTreeSet::new();
    let mut all_designated_k22 = true;
    for k in lbg.designated() {
        for (a, b) in k.cross_edges() {
            if base.has_edge(a, b) {
                covered.insert((a, b));
            } else {
                all_designated_k22 = false;
            }
        }
    }
    let union_ok = all_designated_k22 && covered.len() == edge_count;

    let mut cross_pair_violations = Vec::new();
    for (i, ki) in lbg.designated().iter().enumerate() {
        for (j, kj) in lbg.designated().iter().enumerate() {
            if i == j {
                continue;
            }
            let (a1, a2) = ki.a_pair();
            let (b1, b2) = kj.b_pair();
            if base.has_edge(a1, b1)
                && base.has_edge(a1, b2)
                && base.has_edge(a2, b1)
                && base.has_edge(a2, b2)
            {
                cross_pair_violations.push((i, j));
            }
        }
    }

    let h_a_bipartite = is_bipartite(&lbg.h_a()).is_some();
    let h_b_bipartite = is_bipartite(&lbg.h_b()).is_some();

    let passed = edge_count_ok
        && union_ok
        && all_designated_k22
        && cross_pair_violations.is_empty()
        && h_a_bipartite
        && h_b_bipartite;

    VerificationReport {
        edge_count,
        m_bound,
        edge_count_ok,
        union_ok,
        all_designated_k22,
        cross_pair_violations,
        h_a_bipartite,
        h_b_bipartite,
        k_value: lbg.k(),
        passed,
    }
}

/// Min / mean / max of one statistic across seeds.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Aggregate {
    pub min: u64,
    pub mean: f64,
    pub max: u64,
}

impl Aggregate {
    fn over(values: impl Iterator<Item = u64> + Clone) -> Aggregate {
        let mut min = u64::MAX;
        let mut max = 0u64;
        let mut sum = 0f64;
        let mut count = 0usize;
        for v in values {
            min = min.min(v);
            max = max.max(v);
            sum += v as f64;
            count += 1;
        }
        Aggregate {
            min,
            mean: sum / count as f64,
            max,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SeedRun {
    pub seed: u64,
    pub stats: ConstructionStats,
}

/// Per-seed and aggregated construction statistics at one side size.
#[derive(Clone, Debug, Serialize)]
pub struct LemmaStatistics {
    pub n: usize,
    pub runs: Vec<SeedRun>,
    pub k_total: Aggregate,
    pub pairs_over_threshold_a: Aggregate,
    pub pairs_over_threshold_b: Aggregate,
    pub h_size: Aggregate,
    pub edge_count: Aggregate,
}

/// Runs [`construct_lower_bound_graph`] once per seed (seeds fan out across
/// threads, results merged in seed order) and aggregates the statistics.
pub fn lemma_statistics(n: usize, seeds: &[u64]) -> Result<LemmaStatistics> {
    if n < 16 {
        return Err(Error::invalid(format!("side size {n} must be at least 16")));
    }
    if seeds.len() < 5 {
        return Err(Error::invalid("at least 5 seeds required"));
    }
    let runs: Vec<SeedRun> = seeds
        .par_iter()
        .map(|&seed| {
            construct_lower_bound_graph(n, seed).map(|(_, stats)| SeedRun { seed, stats })
        })
        .collect::<Result<_>>()?;
    let field = |f: fn(&ConstructionStats) -> usize| {
        Aggregate::over(runs.iter().map(move |r| f(&r.stats) as u64))
    };
    Ok(LemmaStatistics {
        n,
        k_total: field(|s| s.k_total),
        pairs_over_threshold_a: field(|s| s.pairs_over_threshold_a),
        pairs_over_threshold_b: field(|s| s.pairs_over_threshold_b),
        h_size: field(|s| s.h_size),
        edge_count: field(|s| s.edge_count),
        runs,
    })
}

/// The concrete (4,12) demonstration instance: sides of size four, vertex
/// `a_i` adjacent to `b_{i-1}, b_i, b_{i+1}` cyclically, with the four
/// designated copies `{a_i, a_{i+1}, b_i, b_{i+1}}`. Both pair graphs are
/// 4-cycles; the side samples `{0, 2}` two-color them.
pub fn cyclic_4_12() -> LowerBoundGraph {
    let mut edges = Vec::new();
    for i in 0..4u32 {
        for d in [3u32, 0, 1] {
            edges.push((i, (i + d) % 4));
        }
    }
    let base = BipartiteGraph::new(4, 4, edges).expect("in range");
    let designated = (0..4u32)
        .map(|i| K22::new(i, (i + 1) % 4, i, (i + 1) % 4).expect("distinct"))
        .collect();
    LowerBoundGraph::new(
        base,
        designated,
        VertexSet::new(vec![0, 2]),
        VertexSet::new(vec![0, 2]),
    )
    .expect("in range")
}
