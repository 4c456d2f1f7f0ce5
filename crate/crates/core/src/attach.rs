//! Spanner LCAs for preferential- and uniform-attachment multigraphs.
//!
//! Both keep an edge `(u, v, 1)` when one endpoint is the other's
//! highest-degree neighbor (HDN). The uniform-attachment variant also keeps
//! the first copy of every edge whose endpoints both have degree above a
//! threshold `D`, which joins the earliest arrivals to each other.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::graph::{EdgeRef, MultiGraph, VertexId};
use crate::probe::ProbeOracle;

/// `H_k = 1 + 1/2 + ... + 1/k`, summed smallest term first with compensation.
pub fn harmonic(k: u64) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidParameter("harmonic number of 0".into()));
    }
    let mut sum = 0.0f64;
    let mut carry = 0.0f64;
    for j in (1..=k).rev() {
        let term = 1.0 / j as f64;
        let t = sum + term;
        if sum.abs() >= term.abs() {
            carry += (sum - t) + term;
        } else {
            carry += (term - t) + sum;
        }
        sum = t;
    }
    Ok(sum + carry)
}

/// `H_k` with `H_0 = 0`.
fn harmonic0(k: u64) -> f64 {
    if k == 0 {
        0.0
    } else {
        harmonic(k).expect("k > 0")
    }
}

/// Distinct neighbor of `v` with the largest degree, ties to the smaller id.
/// `None` when `v` has no neighbor besides itself.
fn hdn(o: &ProbeOracle, v: VertexId) -> Result<Option<VertexId>> {
    let d = o.deg(v)?;
    let mut best: Option<(usize, VertexId)> = None;
    for i in 1..=d {
        let Some(w) = o.nbr(v, i)? else { continue };
        if w == v {
            continue;
        }
        let dw = o.deg(w)?;
        let better = match best {
            None => true,
            Some((bd, bw)) => dw > bd || (dw == bd && w < bw),
        };
        if better {
            best = Some((dw, w));
        }
    }
    Ok(best.map(|(_, w)| w))
}

/// The highest-degree neighbor of `v`.
pub fn highest_degree_neighbor(o: &ProbeOracle, v: VertexId) -> Result<VertexId> {
    hdn(o, v)?.ok_or(Error::IsolatedVertex(v))
}

fn hdn_rule(o: &ProbeOracle, e: EdgeRef) -> Result<bool> {
    if hdn(o, e.u)? == Some(e.v) {
        return Ok(true);
    }
    Ok(hdn(o, e.v)? == Some(e.u))
}

/// Preferential-attachment spanner: keep `(u, v, 1)` when `v` is the HDN of
/// `u` or vice versa. Self-loops and later parallel copies are never kept.
pub fn pa_query(o: &ProbeOracle, e: EdgeRef) -> Result<bool> {
    o.require_edge_ref(e)?;
    if e.is_loop() || e.i != 1 {
        return Ok(false);
    }
    hdn_rule(o, e)
}

#[derive(Debug, Clone, PartialEq)]
pub struct UaParams {
    pub n: usize,
    pub mu: u32,
    /// Degree threshold `D`.
    pub threshold: f64,
}

impl UaParams {
    /// `D = mu * (H_{n-1} - H_6) + mu / 2`.
    pub fn new(n: usize, mu: u32) -> Result<Self> {
        if n < 8 {
            return Err(Error::InvalidParameter("ua threshold needs n >= 8".into()));
        }
        if mu == 0 {
            return Err(Error::InvalidParameter("mu must be positive".into()));
        }
        let threshold = degree_bar(n, mu, 7);
        Ok(UaParams { n, mu, threshold })
    }

    /// Moves the threshold to the `m`-th intermediate center:
    /// `mu * (H_{n-1} - H_{k-1}) + mu / 2` with `k = floor(e² |C_m|)`.
    pub fn with_center(n: usize, mu: u32, m: u32) -> Result<Self> {
        let base = UaParams::new(n, mu)?;
        let ladder = CenterLadder::new(n, mu)
            .ok_or_else(|| Error::InvalidParameter("mu too small for an intermediate-center ladder".into()))?;
        if m == 0 || m as usize > ladder.sizes.len() {
            return Err(Error::InvalidParameter(format!(
                "center index {m} outside 1..={}",
                ladder.sizes.len()
            )));
        }
        let size = ladder.size(m);
        let k = ((std::f64::consts::E.powi(2) * size).floor() as u64).clamp(2, n as u64);
        Ok(UaParams {
            threshold: degree_bar(n, mu, k),
            ..base
        })
    }

    /// `mu * H_{n-1} - mu / 2`, the root-finding degree bar.
    pub fn root_threshold(&self) -> f64 {
        let mu = self.mu as f64;
        mu * harmonic0(self.n as u64 - 1) - mu / 2.0
    }
}

/// `lambda_k + mu / 2 = mu * (H_{n-1} - H_{k-1}) + mu / 2`.
pub fn degree_bar(n: usize, mu: u32, k: u64) -> f64 {
    let mu = mu as f64;
    mu * (harmonic0(n as u64 - 1) - harmonic0(k - 1)) + mu / 2.0
}

/// Expected in-degree `lambda_k = mu * (H_{n-1} - H_{k-1})` of the vertex
/// that arrived at time `k`.
pub fn expected_in_degree(n: usize, mu: u32, k: u64) -> f64 {
    mu as f64 * (harmonic0(n as u64 - 1) - harmonic0(k - 1))
}

/// Intermediate centers: `|C_m| = (n / e²) (3 ln(n) e² / mu)^m` for
/// `m = 1..=floor(M)`, `M = ln(n / e²) / ln(mu / (3 ln(n) e²))`.
#[derive(Debug, Clone, PartialEq)]
pub struct CenterLadder {
    pub depth: f64,
    pub sizes: Vec<f64>,
}

impl CenterLadder {
    /// `None` unless `mu > 3 ln(n) e²` (otherwise the sizes do not shrink).
    pub fn new(n: usize, mu: u32) -> Option<Self> {
        let e2 = std::f64::consts::E.powi(2);
        let nf = n as f64;
        let ratio = 3.0 * nf.ln() * e2 / mu as f64;
        if !(ratio < 1.0) || nf <= e2 {
            return None;
        }
        let depth = (nf / e2).ln() / (1.0 / ratio).ln();
        let sizes = (1..=depth.floor() as i32).map(|m| nf / e2 * ratio.powi(m)).collect();
        Some(CenterLadder { depth, sizes })
    }

    pub fn size(&self, m: u32) -> f64 {
        self.sizes[m as usize - 1]
    }
}

pub fn ua_threshold(params: &UaParams) -> f64 {
    params.threshold
}

/// Uniform-attachment spanner query.
///
/// Probes both degrees first; if both exceed `D` the answer is `i == 1` with
/// no further probes. Otherwise the HDN rule decides, again only for `i == 1`.
pub fn ua_query(o: &ProbeOracle, params: &UaParams, e: EdgeRef) -> Result<bool> {
    o.require_edge_ref(e)?;
    let du = o.deg(e.u)?;
    let dv = o.deg(e.v)?;
    if du.min(dv) as f64 > params.threshold {
        return Ok(e.i == 1);
    }
    if e.is_loop() || e.i != 1 {
        return Ok(false);
    }
    hdn_rule(o, e)
}

/// Arrival-time variant: keep the edge whose label is
/// `(owner = later endpoint, number = 1)`.
pub fn ua_arrival_query(g: &MultiGraph, e: EdgeRef) -> Result<bool> {
    let (arrival, labels) = match (g.arrival(), g.labels()) {
        (Some(a), Some(l)) => (a, l),
        _ => return Err(Error::MissingMetadata),
    };
    g.check_vertex(e.u)?;
    g.check_vertex(e.v)?;
    let pos = g.edge_position(e).ok_or(Error::InvalidEdgeRef(e.u, e.v, e.i))?;
    let label = labels[pos];
    let later = if arrival[e.u.index()] > arrival[e.v.index()] {
        e.u
    } else {
        e.v
    };
    Ok(label.owner == later && label.number == 1)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootFind {
    /// Vertex where the walk stopped.
    pub anchor: VertexId,
    pub walk_len: usize,
    /// `anchor` plus its neighbors above the root threshold, ascending.
    pub candidates: Vec<VertexId>,
}

/// Follows highest-degree neighbors from `start` until reaching a vertex of
/// degree at least `mu * H_{n-1} - mu / 2`, then returns it together with its
/// neighbors whose degree exceeds that bar.
pub fn ua_root_find(o: &ProbeOracle, params: &UaParams, start: VertexId) -> Result<RootFind> {
    o.check_vertex(start)?;
    let bar = params.root_threshold();
    let mut cur = start;
    let mut visited = HashSet::new();
    visited.insert(cur);
    let mut walk_len = 0;
    while (o.deg(cur)? as f64) < bar {
        let next = hdn(o, cur)?.ok_or(Error::RegimeViolation { start, at: cur })?;
        if !visited.insert(next) {
            return Err(Error::RegimeViolation { start, at: next });
        }
        cur = next;
        walk_len += 1;
    }
    let mut candidates = vec![cur];
    let d = o.deg(cur)?;
    for i in 1..=d {
        let Some(w) = o.nbr(cur, i)? else { continue };
        if w != cur && o.deg(w)? as f64 > bar {
            candidates.push(w);
        }
    }
    candidates.sort_unstable();
    candidates.dedup();
    Ok(RootFind {
        anchor: cur,
        walk_len,
        candidates,
    })
}

/// HDN of every vertex, computed in one pass over the adjacency lists.
/// Equivalent to calling [`highest_degree_neighbor`] per vertex; used by the
/// experiment drivers to evaluate all edge queries at once.
pub fn all_hdn(g: &MultiGraph) -> Vec<Option<VertexId>> {
    (1..=g.n() as u32)
        .map(|v| {
            let mut best: Option<(usize, u32)> = None;
            for &w in g.neighbors(VertexId(v)) {
                if w == v {
                    continue;
                }
                let dw = g.degree(VertexId(w));
                let better = match best {
                    None => true,
                    Some((bd, bw)) => dw > bd || (dw == bd && w < bw),
                };
                if better {
                    best = Some((dw, w));
                }
            }
            best.map(|(_, w)| VertexId(w))
        })
        .collect()
}
