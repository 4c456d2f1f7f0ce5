//! Memoryless local access to a G(n, p) graph together with a maximal
//! independent set of it.
//!
//! The set is the greedy lowest-index MIS `M = (v_1 = 1, v_2, ...)`. Given `j`
//! members ending at `v_j`, the next member is `v_j + r` with
//! `r ~ Geom((1 - p)^j)`: each later vertex avoids all `j` members with
//! probability `(1 - p)^j`. Every query recomputes `M` from the tape.
//!
//! Edge answers:
//! * both endpoints in `M`: absent;
//! * neither in `M`: independent `p`-coin;
//! * member `v_j`, non-member `b` with `v_i < b < v_{i+1}`: if `j > i` an
//!   independent `p`-coin; otherwise the row `(v_1, b) .. (v_i, b)` is drawn
//!   conditioned on containing at least one edge (rejection sampling, with
//!   round keys that depend only on `b`), and its `j`-th entry is returned.

use crate::error::{Error, Result};
use crate::graph::VertexId;
use crate::tape::{Domain, Tape, TapeKey};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MisState {
    /// Strictly increasing, starts at 1.
    pub members: Vec<u32>,
}

impl MisState {
    pub fn contains(&self, v: VertexId) -> bool {
        self.members.binary_search(&v.0).is_ok()
    }

    /// 1-based position of `v` in `M`.
    pub fn position(&self, v: VertexId) -> Option<usize> {
        self.members.binary_search(&v.0).ok().map(|i| i + 1)
    }

    /// Number of members smaller than `v`.
    pub fn members_below(&self, v: VertexId) -> usize {
        self.members.partition_point(|&m| m < v.0)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

fn check_params(n: usize, p: f64) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::InvalidProbability(p));
    }
    Ok(())
}

fn check_vertex(n: usize, v: VertexId) -> Result<()> {
    if v.0 == 0 || v.0 as usize > n {
        Err(Error::VertexOutOfRange(v, n))
    } else {
        Ok(())
    }
}

/// Rejection rounds allowed for a conditioned row: `ceil(40 ln(n) / p)`.
pub fn retry_cap(n: usize, p: f64) -> u64 {
    ((40.0 * (n.max(2) as f64).ln() / p).ceil() as u64).max(1)
}

/// Recomputes `M` from the tape.
pub fn compute_mis(t: &impl Tape, n: usize, p: f64) -> Result<MisState> {
    check_params(n, p)?;
    let mut members = vec![1u32];
    if p == 1.0 {
        return Ok(MisState { members });
    }
    let log_miss = (-p).ln_1p();
    loop {
        let j = members.len();
        let last = *members.last().expect("non-empty") as u64;
        // probability that a later vertex misses all j members
        let q = (j as f64 * log_miss).exp();
        if q == 0.0 {
            break;
        }
        let r = t.geometric(TapeKey::new(Domain::Geom, j as u64, 0, 0), q)?;
        let next = last.saturating_add(r);
        if next > n as u64 {
            break;
        }
        members.push(next as u32);
    }
    Ok(MisState { members })
}

pub fn query_mis(t: &impl Tape, n: usize, p: f64, a: VertexId) -> Result<bool> {
    check_vertex(n, a)?;
    Ok(compute_mis(t, n, p)?.contains(a))
}

/// Edges `(v_1, b) .. (v_i, b)` conditioned on at least one being present.
fn conditioned_row(t: &impl Tape, n: usize, p: f64, b: VertexId, i: usize) -> Result<Vec<bool>> {
    let cap = retry_cap(n, p);
    for round in 1..=cap {
        let row: Vec<bool> = (1..=i as u64)
            .map(|s| t.coin(TapeKey::new(Domain::LagRow, b.0 as u64, round, s), p))
            .collect::<Result<_>>()?;
        if row.iter().any(|&x| x) {
            return Ok(row);
        }
    }
    Err(Error::RetryExhausted {
        vertex: b,
        rounds: cap,
    })
}

fn free_coin(t: &impl Tape, p: f64, a: VertexId, b: VertexId) -> Result<bool> {
    t.coin(TapeKey::pair(Domain::LagFree, a.0, b.0), p)
}

/// Whether `{a, b}` is an edge of the sampled graph.
pub fn query_edge(t: &impl Tape, n: usize, p: f64, a: VertexId, b: VertexId) -> Result<bool> {
    check_vertex(n, a)?;
    check_vertex(n, b)?;
    if a == b {
        return Err(Error::InvalidParameter(format!("self pair ({a}, {b})")));
    }
    let mis = compute_mis(t, n, p)?;
    match (mis.position(a), mis.position(b)) {
        (Some(_), Some(_)) => Ok(false),
        (None, None) => free_coin(t, p, a, b),
        (Some(j), None) => member_edge(t, n, p, &mis, j, a, b),
        (None, Some(j)) => member_edge(t, n, p, &mis, j, b, a),
    }
}

fn member_edge(
    t: &impl Tape,
    n: usize,
    p: f64,
    mis: &MisState,
    j: usize,
    member: VertexId,
    other: VertexId,
) -> Result<bool> {
    let i = mis.members_below(other);
    if j > i {
        return free_coin(t, p, member, other);
    }
    Ok(conditioned_row(t, n, p, other, i)?[j - 1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tape::RandomTape;

    #[test]
    fn certain_edges_give_singleton() {
        let t = RandomTape::new(3);
        assert_eq!(compute_mis(&t, 10, 1.0).unwrap().members, vec![1]);
        for a in 2..=10 {
            for b in (a + 1)..=10 {
                assert!(query_edge(&t, 10, 1.0, VertexId(a), VertexId(b)).unwrap());
            }
            assert!(query_edge(&t, 10, 1.0, VertexId(1), VertexId(a)).unwrap());
        }
    }

    #[test]
    fn tiny_p_gives_everything() {
        let t = RandomTape::new(3);
        assert_eq!(compute_mis(&t, 8, 1e-12).unwrap().members, (1..=8).collect::<Vec<_>>());
    }

    #[test]
    fn rejects_bad_inputs() {
        let t = RandomTape::new(0);
        assert!(compute_mis(&t, 5, 0.0).is_err());
        assert!(compute_mis(&t, 5, 1.5).is_err());
        assert!(query_edge(&t, 5, 0.5, VertexId(2), VertexId(2)).is_err());
        assert!(query_edge(&t, 5, 0.5, VertexId(2), VertexId(6)).is_err());
        assert!(query_mis(&t, 5, 0.5, VertexId(0)).is_err());
    }

    #[test]
    fn replay_is_stable() {
        let t = RandomTape::new(42);
        let first = compute_mis(&t, 6, 0.5).unwrap();
        assert_eq!(first.members[0], 1);
        for _ in 0..100 {
            assert_eq!(compute_mis(&t, 6, 0.5).unwrap(), first);
        }
    }

    #[test]
    fn members_never_adjacent_and_first_is_member() {
        for seed in 0..50 {
            let t = RandomTape::new(seed);
            let mis = compute_mis(&t, 12, 0.4).unwrap();
            assert!(query_mis(&t, 12, 0.4, VertexId(1)).unwrap());
            for w in mis.members.windows(2) {
                assert!(!query_edge(&t, 12, 0.4, VertexId(w[0]), VertexId(w[1])).unwrap());
            }
            let last = *mis.members.last().unwrap();
            for a in (last + 1)..=12 {
                assert!(!query_mis(&t, 12, 0.4, VertexId(a)).unwrap());
            }
        }
    }

    #[test]
    fn symmetric_answers() {
        let t = RandomTape::new(9);
        for a in 1..=10u32 {
            for b in (a + 1)..=10 {
                assert_eq!(
                    query_edge(&t, 10, 0.3, VertexId(a), VertexId(b)).unwrap(),
                    query_edge(&t, 10, 0.3, VertexId(b), VertexId(a)).unwrap()
                );
            }
        }
    }
}
