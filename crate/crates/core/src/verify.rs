//! Independent checking oracles: BFS distances, connectivity, trees, MIS
//! checks, greedy MIS and stretch sampling.
//!
//! Nothing here goes through the probe oracle or shares code with the LCAs.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::{MultiGraph, VertexId};
use crate::lag;
use crate::tape::{Domain, Tape, TapeKey};

pub const UNREACHABLE: u32 = u32::MAX;

/// Simple undirected view: loops dropped, parallel edges merged, lists ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphView {
    adj: Vec<Vec<u32>>,
}

impl GraphView {
    pub fn from_edges(n: usize, edges: &[(u32, u32)]) -> Self {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u != v {
                adj[u as usize - 1].push(v);
                adj[v as usize - 1].push(u);
            }
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        GraphView { adj }
    }

    pub fn from_multigraph(g: &MultiGraph) -> Self {
        GraphView::from_edges(g.n(), g.edges())
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors(&self, v: u32) -> &[u32] {
        &self.adj[v as usize - 1]
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Number of distinct non-loop edges.
    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }
}

/// Unweighted distances from `src`; [`UNREACHABLE`] for other components.
pub fn bfs_distances(g: &GraphView, src: VertexId) -> Vec<u32> {
    let mut dist = vec![UNREACHABLE; g.n()];
    let mut queue = VecDeque::new();
    dist[src.index()] = 0;
    queue.push_back(src.0);
    while let Some(x) = queue.pop_front() {
        let dx = dist[x as usize - 1];
        for &y in g.neighbors(x) {
            let slot = &mut dist[y as usize - 1];
            if *slot == UNREACHABLE {
                *slot = dx + 1;
                queue.push_back(y);
            }
        }
    }
    dist
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Eccentricity {
    /// Largest finite distance from the source.
    pub reachable_max: u32,
    pub unreachable: usize,
}

pub fn eccentricity(g: &GraphView, src: VertexId) -> Eccentricity {
    let dist = bfs_distances(g, src);
    let mut out = Eccentricity {
        reachable_max: 0,
        unreachable: 0,
    };
    for d in dist {
        if d == UNREACHABLE {
            out.unreachable += 1;
        } else {
            out.reachable_max = out.reachable_max.max(d);
        }
    }
    out
}

pub fn is_connected(g: &GraphView) -> bool {
    g.n() == 0 || bfs_distances(g, VertexId(1)).iter().all(|&d| d != UNREACHABLE)
}

pub fn count_edges(g: &MultiGraph) -> usize {
    g.edge_count()
}

/// Connected with exactly `n - 1` edges (parallel copies and loops count).
pub fn is_tree(g: &MultiGraph) -> bool {
    g.edge_count() + 1 == g.n() && is_connected(&GraphView::from_multigraph(g))
}

/// Exact diameter by BFS from every vertex; `None` if disconnected.
pub fn diameter(g: &GraphView) -> Option<u32> {
    let mut best = 0;
    for v in 1..=g.n() as u32 {
        let e = eccentricity(g, VertexId(v));
        if e.unreachable > 0 {
            return None;
        }
        best = best.max(e.reachable_max);
    }
    Some(best)
}

/// Diameter of a tree by two sweeps; `None` if `g` is disconnected.
pub fn tree_diameter(g: &GraphView) -> Option<u32> {
    let first = bfs_distances(g, VertexId(1));
    if first.contains(&UNREACHABLE) {
        return None;
    }
    let far = first.iter().enumerate().max_by_key(|&(_, &d)| d).map(|(i, _)| i)?;
    bfs_distances(g, VertexId::from_index(far)).into_iter().max()
}

/// Longest distance from `root` to any vertex.
pub fn depth_from(g: &GraphView, root: VertexId) -> Option<u32> {
    let e = eccentricity(g, root);
    (e.unreachable == 0).then_some(e.reachable_max)
}

/// Independent (no internal edge) and maximal (every outsider has a neighbor inside).
pub fn is_mis(g: &GraphView, set: &[u32]) -> bool {
    let mut inside = vec![false; g.n()];
    for &v in set {
        if v == 0 || v as usize > g.n() {
            return false;
        }
        inside[v as usize - 1] = true;
    }
    for v in 1..=g.n() as u32 {
        let nbr_inside = g.neighbors(v).iter().any(|&w| inside[w as usize - 1]);
        if inside[v as usize - 1] == nbr_inside {
            return false;
        }
    }
    true
}

/// Lexicographically first MIS: scan vertices upward, add each one with no
/// neighbor already chosen.
pub fn greedy_mis(g: &GraphView) -> Vec<u32> {
    let mut blocked = vec![false; g.n()];
    let mut out = Vec::new();
    for v in 1..=g.n() as u32 {
        if blocked[v as usize - 1] {
            continue;
        }
        out.push(v);
        for &w in g.neighbors(v) {
            blocked[w as usize - 1] = true;
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StretchReport {
    pub pairs_checked: usize,
    pub max_stretch: f64,
    pub max_ecc_h: u32,
    pub disconnected_pairs: usize,
}

/// Checks `H ⊆ G`, then samples `k` vertex pairs from the tape and reports the
/// worst ratio `dist_H / dist_G` over pairs connected in `G`.
pub fn sampled_stretch(g: &GraphView, h: &GraphView, t: &impl Tape, k: usize) -> Result<StretchReport> {
    if g.n() != h.n() {
        return Err(Error::InvalidParameter("vertex counts differ".into()));
    }
    for u in 1..=h.n() as u32 {
        for &v in h.neighbors(u) {
            if !g.has_edge(u, v) {
                return Err(Error::NotASubgraph(VertexId(u), VertexId(v)));
            }
        }
    }
    let n = g.n() as u64;
    let mut report = StretchReport {
        pairs_checked: 0,
        max_stretch: 0.0,
        max_ecc_h: 0,
        disconnected_pairs: 0,
    };
    if n < 2 {
        return Ok(report);
    }
    for i in 0..k as u64 {
        let u = t.below(TapeKey::new(Domain::Sample, i, 0, 0), n) as u32 + 1;
        let mut v = t.below(TapeKey::new(Domain::Sample, i, 1, 0), n - 1) as u32 + 1;
        if v >= u {
            v += 1;
        }
        let dg = bfs_distances(g, VertexId(u));
        if dg[v as usize - 1] == UNREACHABLE {
            continue;
        }
        let dh = bfs_distances(h, VertexId(u));
        report.max_ecc_h = report
            .max_ecc_h
            .max(dh.iter().copied().filter(|&d| d != UNREACHABLE).max().unwrap_or(0));
        report.pairs_checked += 1;
        let d_h = dh[v as usize - 1];
        if d_h == UNREACHABLE {
            report.disconnected_pairs += 1;
        } else {
            let s = d_h as f64 / dg[v as usize - 1] as f64;
            report.max_stretch = report.max_stretch.max(s);
        }
    }
    Ok(report)
}

/// Builds the whole graph sampled by the local access generator by querying
/// every pair, plus its MIS from membership queries.
pub fn realize_lag_graph(t: &impl Tape, n: usize, p: f64) -> Result<(MultiGraph, Vec<u32>)> {
    let mut edges = Vec::new();
    for a in 1..=n as u32 {
        for b in (a + 1)..=n as u32 {
            if lag::query_edge(t, n, p, VertexId(a), VertexId(b))? {
                edges.push((a, b));
            }
        }
    }
    let mut members = Vec::new();
    for a in 1..=n as u32 {
        if lag::query_mis(t, n, p, VertexId(a))? {
            members.push(a);
        }
    }
    Ok((MultiGraph::from_edges(n, edges)?, members))
}
