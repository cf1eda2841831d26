//! Round-synchronous simulator of a bandwidth-limited message-passing
//! network running neighborhood-broadcast clique detection.
//!
//! Every node serializes its neighbor list (ascending ids, fixed-width
//! big-endian fields) and streams it over each incident edge at the edge
//! bandwidth, one chunk per round per direction. Once all streams complete,
//! every node knows the subgraph induced on its closed neighborhood and
//! reports whether it lies in a clique of the target size. Nothing is ever
//! forwarded further than one hop.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{contains_clique, Graph};
use crate::reduction::PartitionedGraph;
use crate::twoparty::BitString;

/// A topology with uniform per-edge, per-direction, per-round bandwidth.
#[derive(Clone, Debug)]
pub struct CongestNetwork {
    topology: Graph,
    bandwidth_b: u64,
    id_width: u32,
}

impl CongestNetwork {
    /// `bandwidth_b` is in bits; the id width is `ceil(log2 n)`, at least 1,
    /// and is known to every node up front.
    pub fn new(topology: Graph, bandwidth_b: u64) -> Result<Self> {
        if bandwidth_b < 1 {
            return Err(Error::invalid("bandwidth must be at least 1 bit"));
        }
        let n = topology.n_vertices();
        let id_width = if n <= 1 {
            1
        } else {
            (usize::BITS - (n - 1).leading_zeros()).max(1)
        };
        Ok(CongestNetwork {
            topology,
            bandwidth_b,
            id_width,
        })
    }

    pub fn topology(&self) -> &Graph {
        &self.topology
    }

    pub fn bandwidth_b(&self) -> u64 {
        self.bandwidth_b
    }

    pub fn id_width(&self) -> u32 {
        self.id_width
    }
}

/// One directed transmission: `bits` of payload over edge `(from, to)` in
/// round `round`. Payloads never exceed the network bandwidth.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct MessageRecord {
    pub round: u32,
    pub from: u32,
    pub to: u32,
    pub bits: u64,
}

/// Full record of one simulation.
#[derive(Clone, Debug)]
pub struct SimulationTrace {
    topology: Graph,
    bandwidth_b: u64,
    rounds_used: u32,
    messages: Vec<MessageRecord>,
    detections: Vec<bool>,
}

impl SimulationTrace {
    pub fn rounds_used(&self) -> u32 {
        self.rounds_used
    }

    pub fn messages(&self) -> &[MessageRecord] {
        &self.messages
    }

    /// Per-node detection flags, indexed by vertex id.
    pub fn detections(&self) -> &[bool] {
        &self.detections
    }

    pub fn detected(&self) -> bool {
        self.detections.iter().any(|&d| d)
    }

    pub fn detecting_nodes(&self) -> Vec<u32> {
        self.detections
            .iter()
            .enumerate()
            .filter_map(|(v, &d)| d.then_some(v as u32))
            .collect()
    }

    pub fn topology(&self) -> &Graph {
        &self.topology
    }

    pub fn bandwidth_b(&self) -> u64 {
        self.bandwidth_b
    }
}

fn encode_neighborhood(g: &Graph, v: u32, id_width: u32) -> BitString {
    let mut bits = BitString::new();
    for u in g.neighbors(v) {
        for k in (0..id_width).rev() {
            bits.push(u >> k & 1 != 0);
        }
    }
    bits
}

fn decode_ids(bits: &BitString, id_width: u32) -> Result<Vec<u32>> {
    if !bits.len().is_multiple_of(id_width as usize) {
        return Err(Error::invalid("payload length is not a multiple of the id width"));
    }
    let mut ids = Vec::with_capacity(bits.len() / id_width as usize);
    let mut i = 0;
    while i < bits.len() {
        let mut id = 0u32;
        for _ in 0..id_width {
            id = id << 1 | bits.get(i) as u32;
            i += 1;
        }
        ids.push(id);
    }
    Ok(ids)
}

/// Runs neighborhood-broadcast detection of `K_ell`.
///
/// Each node's serialized neighbor list (`deg * id_width` bits) streams over
/// every incident edge at `bandwidth_b` bits per round; the final chunk
/// carries the remainder, so received lengths are exact and the neighbor
/// count needs no framing. `rounds_used` is exactly
/// `max_u ceil(deg(u) * id_width / b)`. A node detects iff it lies in an
/// `ell`-clique of the subgraph it has learned on its closed neighborhood.
pub fn run_folklore_detection(net: &CongestNetwork, ell: usize) -> Result<SimulationTrace> {
    if ell < 3 {
        return Err(Error::invalid(format!("ell = {ell} must be at least 3")));
    }
    let g = net.topology();
    let n = g.n_vertices();
    let b = net.bandwidth_b() as usize;
    let w = net.id_width();

    let streams: Vec<BitString> = (0..n as u32).map(|v| encode_neighborhood(g, v, w)).collect();
    let rounds_used = streams
        .iter()
        .map(|s| s.len().div_ceil(b))
        .max()
        .unwrap_or(0) as u32;

    let mut messages = Vec::new();
    // inbox[v][u] accumulates the chunks v received from neighbor u.
    let mut inbox: Vec<Vec<(u32, BitString)>> = (0..n as u32)
        .map(|v| g.neighbors(v).into_iter().map(|u| (u, BitString::new())).collect())
        .collect();

    for round in 0..rounds_used {
        // Snapshot semantics: all sends of a round happen against the same
        // stream offsets; delivery order is (sender, receiver) ascending.
        for u in 0..n as u32 {
            let stream = &streams[u as usize];
            let start = round as usize * b;
            if start >= stream.len() {
                continue;
            }
            let end = (start + b).min(stream.len());
            let chunk = stream.slice(start, end);
            for v in g.neighbors(u) {
                messages.push(MessageRecord {
                    round,
                    from: u,
                    to: v,
                    bits: chunk.len() as u64,
                });
                let slot = inbox[v as usize]
                    .iter_mut()
                    .find(|(from, _)| *from == u)
                    .expect("sender is a neighbor");
                slot.1.extend(&chunk);
            }
        }
    }

    let mut detections = vec![false; n];
    for v in 0..n as u32 {
        let neighborhood = g.neighbors(v);
        if neighborhood.len() + 1 < ell {
            continue;
        }
        // Rebuild the received neighbor lists and keep only edges inside
        // this node's neighborhood; together with the node's own edges this
        // is everything two-hop knowledge provides.
        let index_of = |u: u32| neighborhood.binary_search(&u).ok();
        let mut local_edges = Vec::new();
        for (u, payload) in &inbox[v as usize] {
            let ui = index_of(*u).expect("inbox keyed by neighbors");
            for w_id in decode_ids(payload, w)? {
                if let Some(wi) = index_of(w_id) {
                    if ui != wi {
                        local_edges.push((ui as u32, wi as u32));
                    }
                }
            }
        }
        let local = Graph::new(neighborhood.len(), local_edges)?;
        // An ell-clique through v is ell-1 pairwise-adjacent neighbors.
        detections[v as usize] = if ell == 1 {
            true
        } else {
            contains_clique(&local, ell - 1)
        };
    }

    Ok(SimulationTrace {
        topology: g.clone(),
        bandwidth_b: net.bandwidth_b(),
        rounds_used,
        messages,
        detections,
    })
}

/// Bits the trace pushed through the cut of `pg`, counting each edge-round
/// as one duplex exchange at the heavier direction's payload. Every
/// edge-round contributes at most `bandwidth_b`, so the result is bounded by
/// `rounds_used * |C| * bandwidth_b` by construction, with equality exactly
/// when every cut edge is saturated every round.
pub fn measure_cut_traffic(trace: &SimulationTrace, pg: &PartitionedGraph) -> Result<u64> {
    if trace.topology() != pg.graph() {
        return Err(Error::invalid("trace topology does not match the partitioned graph"));
    }
    let cut: std::collections::BTreeSet<(u32, u32)> = pg.cut_edges().iter().copied().collect();
    let mut per_slot: std::collections::BTreeMap<(u32, u32, u32), u64> = Default::default();
    for m in trace.messages() {
        let edge = (m.from.min(m.to), m.from.max(m.to));
        if cut.contains(&edge) {
            let slot = per_slot.entry((m.round, edge.0, edge.1)).or_default();
            *slot = (*slot).max(m.bits);
        }
    }
    Ok(per_slot.values().sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::VertexSet;
    use crate::lbgraph::cyclic_4_12;
    use crate::reduction::{build_instance, DisjInstance};

    #[test]
    fn id_width_follows_vertex_count() {
        for (n, expected) in [(1, 1), (2, 1), (3, 2), (8, 3), (9, 4), (256, 8), (257, 9)] {
            let net = CongestNetwork::new(Graph::new(n, []).unwrap(), 4).unwrap();
            assert_eq!(net.id_width(), expected, "n = {n}");
        }
    }

    #[test]
    fn complete_graph_all_nodes_detect() {
        let net = CongestNetwork::new(Graph::complete(4), 16).unwrap();
        let trace = run_folklore_detection(&net, 4).unwrap();
        assert_eq!(trace.detecting_nodes(), vec![0, 1, 2, 3]);
        // deg = 3, id_width = 2, one round at 16 bits.
        assert_eq!(trace.rounds_used(), 1);
    }

    #[test]
    fn bipartite_topology_never_detects_triangles() {
        let g = crate::graph::BipartiteGraph::new(3, 3, [(0, 0), (0, 1), (1, 1), (2, 2), (1, 2)])
            .unwrap()
            .to_graph();
        let net = CongestNetwork::new(g, 2).unwrap();
        let trace = run_folklore_detection(&net, 3).unwrap();
        assert!(!trace.detected());
    }

    #[test]
    fn demo_compiled_instance_detection() {
        let lbg = cyclic_4_12();
        let inst = DisjInstance::from_bitstrings("1001", "0111").unwrap();
        let pg = build_instance(&lbg, &inst, 4).unwrap();
        let net = CongestNetwork::new(pg.graph().clone(), 4).unwrap();
        let trace = run_folklore_detection(&net, 4).unwrap();
        assert_eq!(net.id_width(), 3);
        assert_eq!(trace.detecting_nodes(), vec![0, 3, 4, 7]);
        // max degree 5: ceil(5 * 3 / 4) = 4 rounds.
        assert_eq!(trace.rounds_used(), 4);

        let traffic = measure_cut_traffic(&trace, &pg).unwrap();
        let cap = trace.rounds_used() as u64 * pg.cut_size() as u64 * 4;
        assert!(traffic <= cap, "{traffic} > {cap}");
    }

    #[test]
    fn rounds_formula_is_exact() {
        for seed in 0..10 {
            let g = Graph::random(20, 0.3, 4000 + seed).unwrap();
            for b in [1u64, 3, 8] {
                let net = CongestNetwork::new(g.clone(), b).unwrap();
                let trace = run_folklore_detection(&net, 4).unwrap();
                let expected = (0..20u32)
                    .map(|v| (g.degree(v) * net.id_width() as usize).div_ceil(b as usize))
                    .max()
                    .unwrap() as u32;
                assert_eq!(trace.rounds_used(), expected);
            }
        }
    }

    #[test]
    fn messages_respect_bandwidth() {
        let g = Graph::random(16, 0.5, 42).unwrap();
        let net = CongestNetwork::new(g, 3).unwrap();
        let trace = run_folklore_detection(&net, 4).unwrap();
        assert!(trace.messages().iter().all(|m| m.bits >= 1 && m.bits <= 3));
    }

    #[test]
    fn detection_matches_oracle_on_random_graphs() {
        for seed in 0..15 {
            let g = Graph::random(14, 0.45, 8000 + seed).unwrap();
            let net = CongestNetwork::new(g.clone(), 4).unwrap();
            for ell in [3, 4, 5] {
                let trace = run_folklore_detection(&net, ell).unwrap();
                assert_eq!(
                    trace.detected(),
                    contains_clique(&g, ell),
                    "seed {seed}, ell {ell}"
                );
            }
        }
    }

    #[test]
    fn rejects_small_ell_and_zero_bandwidth() {
        let g = Graph::complete(3);
        assert!(CongestNetwork::new(g.clone(), 0).is_err());
        let net = CongestNetwork::new(g, 1).unwrap();
        assert!(run_folklore_detection(&net, 2).is_err());
    }

    #[test]
    fn cut_traffic_of_empty_trace_and_empty_cut() {
        let g = Graph::new(4, []).unwrap();
        let net = CongestNetwork::new(g.clone(), 2).unwrap();
        let trace = run_folklore_detection(&net, 3).unwrap();
        assert_eq!(trace.rounds_used(), 0);
        let pg = PartitionedGraph::new(g, VertexSet::new(vec![0, 1])).unwrap();
        assert_eq!(measure_cut_traffic(&trace, &pg).unwrap(), 0);

        // Nonempty trace, empty cut: everything on one side.
        let g = Graph::complete(4);
        let net = CongestNetwork::new(g.clone(), 2).unwrap();
        let trace = run_folklore_detection(&net, 3).unwrap();
        let pg = PartitionedGraph::new(g, (0..4).collect()).unwrap();
        assert_eq!(measure_cut_traffic(&trace, &pg).unwrap(), 0);
    }

    #[test]
    fn cut_traffic_rejects_mismatched_topology() {
        let g = Graph::complete(4);
        let net = CongestNetwork::new(g, 2).unwrap();
        let trace = run_folklore_detection(&net, 3).unwrap();
        let other = PartitionedGraph::new(Graph::complete(5), (0..2).collect()).unwrap();
        assert!(measure_cut_traffic(&trace, &other).is_err());
    }

    #[test]
    fn cut_traffic_bounded_by_rounds_cut_bandwidth() {
        for seed in 0..10 {
            let g = Graph::random(18, 0.4, 600 + seed).unwrap();
            let side_a: VertexSet = (0..18u32).filter(|v| v % 3 != 0).collect();
            let pg = PartitionedGraph::new(g.clone(), side_a).unwrap();
            for b in [1u64, 4] {
                let net = CongestNetwork::new(g.clone(), b).unwrap();
                let trace = run_folklore_detection(&net, 4).unwrap();
                let traffic = measure_cut_traffic(&trace, &pg).unwrap();
                assert!(traffic <= trace.rounds_used() as u64 * pg.cut_size() as u64 * b);
            }
        }
    }
}
