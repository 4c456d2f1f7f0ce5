//! Center-based spanner LCA for Erdős–Rényi graphs, plus the two
//! subsampling baselines it is compared against.
//!
//! Vertices with id at most `T = floor(n^(1 - δ/2 - δ²/8))` are centers. An
//! edge is kept when both endpoints are centers, or when one endpoint is a
//! non-center and the other is its smallest-id center neighbor.

use crate::error::{Error, Result};
use crate::graph::VertexId;
use crate::probe::ProbeOracle;
use crate::tape::{Domain, Tape, TapeKey};

/// How a non-center finds its smallest center neighbor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanMode {
    /// One `Nbr(u, 1)` probe; needs ascending adjacency lists.
    Sorted,
    /// Enumerate the whole list with `Nbr` probes.
    ScanNbr,
    /// `Exists(u, 1)`, `Exists(u, 2)`, ... up to `T`, stopping at the first hit.
    ScanExists,
    /// `ScanNbr` when `n^δ <= n^(1-δ)`, `ScanExists` otherwise.
    Auto,
}

impl std::str::FromStr for ScanMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sorted" => Ok(ScanMode::Sorted),
            "nbr" => Ok(ScanMode::ScanNbr),
            "exists" => Ok(ScanMode::ScanExists),
            "auto" => Ok(ScanMode::Auto),
            other => Err(Error::InvalidParameter(format!("unknown mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErSpannerParams {
    pub n: usize,
    pub delta: f64,
    /// Center threshold `T`.
    pub threshold: u32,
    /// Never `Auto`; resolved at construction.
    pub mode: ScanMode,
}

impl ErSpannerParams {
    pub fn new(n: usize, delta: f64, mode: ScanMode) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("n must be positive".into()));
        }
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::InvalidParameter(format!("delta {delta} must lie in (0, 1)")));
        }
        let threshold = center_threshold(n, delta);
        let mode = match mode {
            ScanMode::Auto => {
                if delta <= 1.0 - delta {
                    ScanMode::ScanNbr
                } else {
                    ScanMode::ScanExists
                }
            }
            m => m,
        };
        Ok(ErSpannerParams {
            n,
            delta,
            threshold,
            mode,
        })
    }

    /// Derives `δ = ln(np) / ln(n)` from an edge probability.
    pub fn from_p(n: usize, p: f64, mode: ScanMode) -> Result<Self> {
        if !(p > 0.0 && p <= 1.0) {
            return Err(Error::InvalidProbability(p));
        }
        ErSpannerParams::new(n, delta_for(n, p), mode)
    }

    pub fn with_mode(self, mode: ScanMode) -> Result<Self> {
        ErSpannerParams::new(self.n, self.delta, mode)
    }

    /// The edge probability with `np = n^δ`.
    pub fn p(&self) -> f64 {
        (self.n as f64).powf(self.delta - 1.0)
    }
}

pub fn delta_for(n: usize, p: f64) -> f64 {
    ((n as f64) * p).ln() / (n as f64).ln()
}

/// `floor(n^(1 - δ/2 - δ²/8))`, clamped to `[1, n]`.
pub fn center_threshold(n: usize, delta: f64) -> u32 {
    let exponent = 1.0 - delta / 2.0 - delta * delta / 8.0;
    let t = (n as f64).powf(exponent).floor();
    t.clamp(1.0, n as f64) as u32
}

pub fn is_center(v: VertexId, params: &ErSpannerParams) -> bool {
    v.0 <= params.threshold
}

/// Smallest center among the neighbors of the non-center `u`.
pub fn first_center(o: &ProbeOracle, params: &ErSpannerParams, u: VertexId) -> Result<Option<VertexId>> {
    let t = params.threshold;
    match params.mode {
        ScanMode::Sorted => {
            if !o.is_sorted() {
                return Err(Error::UnsortedOracle);
            }
            Ok(o.nbr(u, 1)?.filter(|w| w.0 <= t))
        }
        ScanMode::ScanNbr => {
            let d = o.deg(u)?;
            let mut best: Option<VertexId> = None;
            for i in 1..=d {
                if let Some(w) = o.nbr(u, i)? {
                    if w.0 <= t && best.map_or(true, |b| w < b) {
                        best = Some(w);
                    }
                }
            }
            Ok(best)
        }
        ScanMode::ScanExists => {
            for c in 1..=t {
                if c == u.0 {
                    continue;
                }
                if o.exists(u, VertexId(c))? {
                    return Ok(Some(VertexId(c)));
                }
            }
            Ok(None)
        }
        ScanMode::Auto => unreachable!("mode resolved in ErSpannerParams::new"),
    }
}

/// Whether the edge `(u, v)` of `G` belongs to the spanner `H`.
pub fn spanner_query(o: &ProbeOracle, params: &ErSpannerParams, u: VertexId, v: VertexId) -> Result<bool> {
    o.require_edge(u, v)?;
    let (cu, cv) = (is_center(u, params), is_center(v, params));
    match (cu, cv) {
        (true, true) => Ok(true),
        (false, false) => Ok(false),
        (false, true) => Ok(first_center(o, params, u)? == Some(v)),
        (true, false) => Ok(first_center(o, params, v)? == Some(u)),
    }
}

/// `(2 + ε) ln(n) / n` with `ε = 0.5`.
pub fn connectivity_p0(n: usize) -> f64 {
    2.5 * (n as f64).ln() / n as f64
}

/// Keeps each edge independently with probability `min(p0 / p, 1)`.
pub fn baseline_subsample_query(
    o: &ProbeOracle,
    t: &impl Tape,
    n: usize,
    p: f64,
    u: VertexId,
    v: VertexId,
) -> Result<bool> {
    o.require_edge(u, v)?;
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::InvalidProbability(p));
    }
    let keep = (connectivity_p0(n) / p).min(1.0);
    t.coin(TapeKey::pair(Domain::EdgeKeep, u.0, v.0), keep)
}

/// The (up to) two adjacency positions `x` keeps, chosen without replacement
/// from `1..=deg(x)`. Depends only on the seed, `x` and `deg(x)`.
fn kept_positions(t: &impl Tape, x: VertexId, deg: usize) -> Vec<usize> {
    if deg <= 2 {
        return (1..=deg).collect();
    }
    let d = deg as u64;
    let first = t.below(TapeKey::new(Domain::TwoEdges, x.0 as u64, d, 0), d) + 1;
    let mut second = t.below(TapeKey::new(Domain::TwoEdges, x.0 as u64, d, 1), d - 1) + 1;
    if second >= first {
        second += 1;
    }
    vec![first as usize, second as usize]
}

fn keeps_from_side(o: &ProbeOracle, t: &impl Tape, x: VertexId, y: VertexId) -> Result<bool> {
    let d = o.deg(x)?;
    for pos in kept_positions(t, x, d) {
        if o.nbr(x, pos)? == Some(y) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Each vertex keeps two random edges; an edge survives if either endpoint kept it.
pub fn baseline_two_edges_query(o: &ProbeOracle, t: &impl Tape, u: VertexId, v: VertexId) -> Result<bool> {
    o.require_edge(u, v)?;
    Ok(keeps_from_side(o, t, u, v)? || keeps_from_side(o, t, v, u)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::MultiGraph;
    use crate::tape::RandomTape;

    #[test]
    fn threshold_at_sixteen() {
        // 16^(1 - 0.25 - 0.03125) = 2^2.875 ≈ 7.34
        let p = ErSpannerParams::new(16, 0.5, ScanMode::Sorted).unwrap();
        assert_eq!(p.threshold, 7);
        assert!(is_center(VertexId(7), &p));
        assert!(!is_center(VertexId(8), &p));
        assert!(is_center(VertexId(1), &p));
    }

    #[test]
    fn rejects_bad_delta() {
        assert!(ErSpannerParams::new(16, 0.0, ScanMode::Auto).is_err());
        assert!(ErSpannerParams::new(16, 1.0, ScanMode::Auto).is_err());
    }

    #[test]
    fn auto_mode_resolution() {
        assert_eq!(ErSpannerParams::new(100, 0.3, ScanMode::Auto).unwrap().mode, ScanMode::ScanNbr);
        assert_eq!(ErSpannerParams::new(100, 0.7, ScanMode::Auto).unwrap().mode, ScanMode::ScanExists);
    }

    fn hand_graph() -> MultiGraph {
        // Γ(10) = {2, 5, 12}; 3-5 is a center-center edge
        MultiGraph::from_edges(16, vec![(10, 2), (10, 5), (10, 12), (3, 5)]).unwrap()
    }

    #[test]
    fn hand_applied_rule_all_modes() {
        let g = hand_graph();
        for (oracle, mode) in [
            (ProbeOracle::sorted(&g), ScanMode::Sorted),
            (ProbeOracle::shuffled(&g, 3), ScanMode::ScanNbr),
            (ProbeOracle::shuffled(&g, 3), ScanMode::ScanExists),
        ] {
            let p = ErSpannerParams::new(16, 0.5, mode).unwrap();
            let q = |a, b| spanner_query(&oracle, &p, VertexId(a), VertexId(b)).unwrap();
            assert!(q(3, 5));
            assert!(q(10, 2));
            assert!(q(2, 10));
            assert!(!q(10, 5));
            assert!(!q(10, 12));
        }
    }

    #[test]
    fn sorted_mode_uses_one_nbr_probe() {
        let g = hand_graph();
        let o = ProbeOracle::sorted(&g);
        let p = ErSpannerParams::new(16, 0.5, ScanMode::Sorted).unwrap();
        spanner_query(&o, &p, VertexId(10), VertexId(5)).unwrap();
        let c = o.take();
        assert_eq!((c.nbr, c.deg, c.exists), (1, 0, 0));
    }

    #[test]
    fn sorted_mode_needs_sorted_oracle() {
        let g = hand_graph();
        let o = ProbeOracle::shuffled(&g, 1);
        let p = ErSpannerParams::new(16, 0.5, ScanMode::Sorted).unwrap();
        assert_eq!(spanner_query(&o, &p, VertexId(10), VertexId(2)), Err(Error::UnsortedOracle));
    }

    #[test]
    fn non_edge_rejected() {
        let g = hand_graph();
        let o = ProbeOracle::sorted(&g);
        let p = ErSpannerParams::new(16, 0.5, ScanMode::Sorted).unwrap();
        assert!(matches!(
            spanner_query(&o, &p, VertexId(1), VertexId(2)),
            Err(Error::NotAnEdge(..))
        ));
        let t = RandomTape::new(0);
        assert!(baseline_subsample_query(&o, &t, 16, 0.5, VertexId(1), VertexId(2)).is_err());
        assert!(baseline_two_edges_query(&o, &t, VertexId(1), VertexId(2)).is_err());
    }

    #[test]
    fn subsample_clamps_and_repeats() {
        let g = hand_graph();
        let o = ProbeOracle::sorted(&g);
        let t = RandomTape::new(4);
        let p0 = connectivity_p0(16);
        assert!(baseline_subsample_query(&o, &t, 16, p0, VertexId(10), VertexId(2)).unwrap());
        let first = baseline_subsample_query(&o, &t, 16, 1.0, VertexId(10), VertexId(12)).unwrap();
        for _ in 0..10 {
            assert_eq!(
                baseline_subsample_query(&o, &t, 16, 1.0, VertexId(12), VertexId(10)).unwrap(),
                first
            );
        }
        assert_eq!(o.counts().total(), 0);
    }

    #[test]
    fn two_edges_on_a_star() {
        let edges = (2..=101).map(|leaf| (1, leaf)).collect();
        let g = MultiGraph::from_edges(101, edges).unwrap();
        let o = ProbeOracle::shuffled(&g, 8);
        let t = RandomTape::new(8);
        let kept = (2..=101)
            .filter(|&leaf| baseline_two_edges_query(&o, &t, VertexId(1), VertexId(leaf)).unwrap())
            .count();
        assert_eq!(kept, 100);
        let from_center = (2..=101)
            .filter(|&leaf| keeps_from_side(&o, &t, VertexId(1), VertexId(leaf)).unwrap())
            .count();
        assert_eq!(from_center, 2);
    }

    #[test]
    fn two_edges_small_degree_keeps_everything() {
        let g = MultiGraph::from_edges(3, vec![(1, 2), (2, 3)]).unwrap();
        let o = ProbeOracle::sorted(&g);
        let t = RandomTape::new(0);
        assert!(baseline_two_edges_query(&o, &t, VertexId(1), VertexId(2)).unwrap());
        assert!(baseline_two_edges_query(&o, &t, VertexId(3), VertexId(2)).unwrap());
    }
}
