//! Core graph types and the exhaustive enumeration oracles.
//!
//! Everything in this module is deliberately brute force: these routines are
//! the ground truth that the randomized constructions, the reduction and the
//! protocols are checked against. Vertex ids are dense 0-based integers.

use std::collections::BTreeSet;
use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bits::BitSet;
use crate::error::{Error, Result};

/// Sorted, duplicate-free set of vertex ids.
#[derive(
    Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct VertexSet(Vec<u32>);

impl VertexSet {
    pub fn new(mut ids: Vec<u32>) -> Self {
        ids.sort_unstable();
        ids.dedup();
        VertexSet(ids)
    }

    /// Wraps a vector that is already sorted and duplicate-free.
    pub(crate) fn from_sorted(ids: Vec<u32>) -> Self {
        debug_assert!(ids.windows(2).all(|w| w[0] < w[1]));
        VertexSet(ids)
    }

    pub fn empty() -> Self {
        VertexSet(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, id: u32) -> bool {
        self.0.binary_search(&id).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    /// Number of members also present in `other`.
    pub fn count_in(&self, other: &VertexSet) -> usize {
        self.iter().filter(|&v| other.contains(v)).count()
    }
}

impl FromIterator<u32> for VertexSet {
    fn from_iter<T: IntoIterator<Item = u32>>(iter: T) -> Self {
        VertexSet::new(iter.into_iter().collect())
    }
}

/// Undirected simple graph on vertices `0..n_vertices`.
///
/// Edges are kept once in canonical `(low, high)` order; an adjacency bitset
/// per vertex backs the enumeration routines. Immutable after construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(u32, u32)>,
    adj: Vec<BitSet>,
}

impl Graph {
    /// Builds a graph from an edge list. Edges are canonicalized and
    /// deduplicated; self-loops and out-of-range endpoints are rejected.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (u32, u32)>) -> Result<Self> {
        if n > u32::MAX as usize {
            return Err(Error::invalid("vertex count exceeds u32 range"));
        }
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u == v {
                return Err(Error::invalid(format!("self-loop at vertex {u}")));
            }
            if u as usize >= n || v as usize >= n {
                return Err(Error::invalid(format!(
                    "edge ({u}, {v}) out of range for n = {n}"
                )));
            }
            set.insert((u.min(v), u.max(v)));
        }
        let edges: Vec<(u32, u32)> = set.into_iter().collect();
        let mut adj = vec![BitSet::new(n); n];
        for &(u, v) in &edges {
            adj[u as usize].set(v as usize);
            adj[v as usize].set(u as usize);
        }
        Ok(Graph { n, edges, adj })
    }

    pub fn complete(n: usize) -> Graph {
        let edges = (0..n as u32).flat_map(|u| (u + 1..n as u32).map(move |v| (u, v)));
        Graph::new(n, edges).expect("complete graph is well formed")
    }

    /// Erdos-Renyi style G(n, p) with every potential edge drawn from one
    /// uniform real per pair, in ascending `(u, v)` order, off a ChaCha8
    /// stream seeded from `seed`. Identical inputs give identical graphs on
    /// every platform.
    pub fn random(n: usize, p: f64, seed: u64) -> Result<Graph> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::invalid(format!("edge probability {p} not in [0, 1]")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut edges = Vec::new();
        for u in 0..n as u32 {
            for v in u + 1..n as u32 {
                if rng.random::<f64>() < p {
                    edges.push((u, v));
                }
            }
        }
        Graph::new(n, edges)
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in canonical `(low, high)` order, sorted.
    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        u != v && (u as usize) < self.n && (v as usize) < self.n && self.adj[u as usize].test(v as usize)
    }

    pub fn degree(&self, v: u32) -> usize {
        self.adj[v as usize].count()
    }

    /// Neighbors of `v` in ascending order.
    pub fn neighbors(&self, v: u32) -> Vec<u32> {
        self.adj[v as usize].ones().map(|u| u as u32).collect()
    }

    pub(crate) fn neighbors_bits(&self, v: usize) -> &BitSet {
        &self.adj[v]
    }
}

/// Bipartite graph with sides `A` (ids `0..n_a`) and `B` (ids `0..n_b`) and
/// cross edges only. Conversion to [`Graph`] maps `a_i -> i`, `b_j -> n_a + j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteGraph {
    n_a: usize,
    n_b: usize,
    edges: Vec<(u32, u32)>,
    adj_a: Vec<BitSet>,
}

impl BipartiteGraph {
    pub fn new(n_a: usize, n_b: usize, edges: impl IntoIterator<Item = (u32, u32)>) -> Result<Self> {
        if n_a > u32::MAX as usize || n_b > u32::MAX as usize {
            return Err(Error::invalid("side size exceeds u32 range"));
        }
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a as usize >= n_a || b as usize >= n_b {
                return Err(Error::invalid(format!(
                    "edge ({a}, {b}) out of range for sides {n_a} x {n_b}"
                )));
            }
            set.insert((a, b));
        }
        let edges: Vec<(u32, u32)> = set.into_iter().collect();
        let mut adj_a = vec![BitSet::new(n_b); n_a];
        for &(a, b) in &edges {
            adj_a[a as usize].set(b as usize);
        }
        Ok(BipartiteGraph {
            n_a,
            n_b,
            edges,
            adj_a,
        })
    }

    pub fn n_a(&self) -> usize {
        self.n_a
    }

    pub fn n_b(&self) -> usize {
        self.n_b
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(a_index, b_index)` pairs, sorted.
    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn has_edge(&self, a: u32, b: u32) -> bool {
        (a as usize) < self.n_a && (b as usize) < self.n_b && self.adj_a[a as usize].test(b as usize)
    }

    /// B-side neighborhood of an A vertex.
    pub(crate) fn b_neighbors(&self, a: usize) -> &BitSet {
        &self.adj_a[a]
    }

    /// The same graph over the unified id space: `a_i -> i`, `b_j -> n_a + j`.
    pub fn to_graph(&self) -> Graph {
        let off = self.n_a as u32;
        Graph::new(
            self.n_a + self.n_b,
            self.edges.iter().map(|&(a, b)| (a, off + b)),
        )
        .expect("bipartite edges are in range")
    }
}

/// A `K_{2,2}` copy in a bipartite graph: two A-side and two B-side vertices,
/// each pair held in ascending order. The derived ordering is the canonical
/// lexicographic order on `(a1, a2, b1, b2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct K22 {
    a: (u32, u32),
    b: (u32, u32),
}

impl K22 {
    pub fn new(a1: u32, a2: u32, b1: u32, b2: u32) -> Result<Self> {
        if a1 == a2 || b1 == b2 {
            return Err(Error::invalid("K22 requires two distinct vertices per side"));
        }
        Ok(K22 {
            a: (a1.min(a2), a1.max(a2)),
            b: (b1.min(b2), b1.max(b2)),
        })
    }

    pub fn a_pair(&self) -> (u32, u32) {
        self.a
    }

    pub fn b_pair(&self) -> (u32, u32) {
        self.b
    }

    /// The four cross edges, as `(a_index, b_index)` pairs.
    pub fn cross_edges(&self) -> [(u32, u32); 4] {
        [
            (self.a.0, self.b.0),
            (self.a.0, self.b.1),
            (self.a.1, self.b.0),
            (self.a.1, self.b.1),
        ]
    }

    /// The four vertices in the unified id space of [`BipartiteGraph::to_graph`].
    pub fn vertices(&self, n_a: usize) -> VertexSet {
        let off = n_a as u32;
        VertexSet::new(vec![self.a.0, self.a.1, off + self.b.0, off + self.b.1])
    }
}

/// Lists every `K_{2,2}` copy of `g`: all 4-sets `{a1, a2, b1, b2}` with
/// `a1 < a2`, `b1 < b2` and all four cross edges present, in canonical
/// lexicographic order of `(a1, a2, b1, b2)`.
pub fn enumerate_k22(g: &BipartiteGraph) -> Vec<K22> {
    let mut out = Vec::new();
    let mut common = Vec::new();
    for a1 in 0..g.n_a {
        for a2 in a1 + 1..g.n_a {
            common.clear();
            common.extend(g.b_neighbors(a1).and(g.b_neighbors(a2)).ones());
            for i in 0..common.len() {
                for j in i + 1..common.len() {
                    out.push(K22 {
                        a: (a1 as u32, a2 as u32),
                        b: (common[i] as u32, common[j] as u32),
                    });
                }
            }
        }
    }
    out
}

/// Lists every clique of size at least `min_size` exactly once, as sorted
/// vertex sets in lexicographic order. All cliques are listed, not only
/// maximal ones: members are extended in ascending id order, so each clique
/// is produced at exactly one point of the search tree.
pub fn enumerate_cliques(g: &Graph, min_size: usize) -> Vec<VertexSet> {
    assert!(min_size >= 1, "min_size must be at least 1");
    let mut out = Vec::new();
    let mut current = Vec::new();
    extend_cliques(g, &mut current, &BitSet::full(g.n), min_size, &mut out);
    out
}

fn extend_cliques(
    g: &Graph,
    current: &mut Vec<u32>,
    cands: &BitSet,
    min_size: usize,
    out: &mut Vec<VertexSet>,
) {
    for v in cands.ones() {
        current.push(v as u32);
        if current.len() >= min_size {
            out.push(VertexSet::from_sorted(current.clone()));
        }
        let mut next = cands.and(g.neighbors_bits(v));
        next.retain_above(v);
        if !next.is_empty() {
            extend_cliques(g, current, &next, min_size, out);
        }
        current.pop();
    }
}

/// Whether `g` contains a clique on `ell` vertices. Same branch-and-bound
/// search as [`enumerate_cliques`] with an early exit and a counting prune,
/// so the two always agree.
pub fn contains_clique(g: &Graph, ell: usize) -> bool {
    assert!(ell >= 1, "ell must be at least 1");
    if ell > g.n {
        return false;
    }
    search_clique(g, ell, &BitSet::full(g.n))
}

fn search_clique(g: &Graph, needed: usize, cands: &BitSet) -> bool {
    if needed == 0 {
        return true;
    }
    if cands.count() < needed {
        return false;
    }
    for v in cands.ones() {
        let mut next = cands.and(g.neighbors_bits(v));
        next.retain_above(v);
        if search_clique(g, needed - 1, &next) {
            return true;
        }
    }
    false
}

/// Two-colors `g` if it is bipartite, else `None`. The coloring is
/// deterministic: BFS from the lowest-id vertex of each component, which is
/// colored side 0; neighbors are visited in ascending order.
pub fn is_bipartite(g: &Graph) -> Option<Vec<u8>> {
    const UNSET: u8 = u8::MAX;
    let mut color = vec![UNSET; g.n];
    let mut queue = VecDeque::new();
    for start in 0..g.n {
        if color[start] != UNSET {
            continue;
        }
        color[start] = 0;
        queue.push_back(start);
        while let Some(u) = queue.pop_front() {
            for v in g.neighbors_bits(u).ones() {
                if color[v] == UNSET {
                    color[v] = 1 - color[u];
                    queue.push_back(v);
                } else if color[v] == color[u] {
                    return None;
                }
            }
        }
    }
    Some(color)
}
