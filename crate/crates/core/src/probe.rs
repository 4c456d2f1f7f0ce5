//! Probe access to a graph: `Exists`, `Deg` and `Nbr`, with probe counting.

use std::cell::Cell;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::{Csr, EdgeRef, MultiGraph, VertexId};
use crate::tape::{Domain, RandomTape, Tape, TapeKey};

/// How the adjacency lists seen through `Nbr` are ordered.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdjacencyOrder {
    /// Ascending neighbor id.
    Sorted,
    /// Each list independently shuffled by the tape with this seed.
    Shuffled(u64),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ProbeCounts {
    pub exists: u64,
    pub deg: u64,
    pub nbr: u64,
}

impl ProbeCounts {
    pub fn total(&self) -> u64 {
        self.exists + self.deg + self.nbr
    }
}

impl std::ops::Add for ProbeCounts {
    type Output = ProbeCounts;
    fn add(self, o: ProbeCounts) -> ProbeCounts {
        ProbeCounts {
            exists: self.exists + o.exists,
            deg: self.deg + o.deg,
            nbr: self.nbr + o.nbr,
        }
    }
}

#[derive(Debug)]
struct OracleData {
    n: usize,
    order: AdjacencyOrder,
    /// Ascending lists, used for `Exists` and for multiplicity checks.
    sorted: Csr,
    /// Lists in probe order; `None` when identical to `sorted`.
    listed: Option<Csr>,
    /// `repeat[k]` is set when position `k` of the probe-order lists repeats an
    /// id seen earlier in the same list.
    repeat: Vec<bool>,
}

/// Read-only probe interface over a [`MultiGraph`].
///
/// The graph data is shared behind an `Arc`; each clone made with
/// [`ProbeOracle::fresh`] has its own counters, so concurrent workers never
/// contend on them.
#[derive(Debug)]
pub struct ProbeOracle {
    data: Arc<OracleData>,
    counts: Cell<ProbeCounts>,
}

impl ProbeOracle {
    pub fn new(graph: &MultiGraph, order: AdjacencyOrder) -> Self {
        let sorted = graph.adjacency().sorted();
        let listed = match order {
            AdjacencyOrder::Sorted => None,
            AdjacencyOrder::Shuffled(seed) => Some(shuffled(graph.adjacency(), &RandomTape::new(seed))),
        };
        let repeat = repeat_marks(listed.as_ref().unwrap_or(&sorted));
        ProbeOracle {
            data: Arc::new(OracleData {
                n: graph.n(),
                order,
                sorted,
                listed,
                repeat,
            }),
            counts: Cell::new(ProbeCounts::default()),
        }
    }

    pub fn sorted(graph: &MultiGraph) -> Self {
        ProbeOracle::new(graph, AdjacencyOrder::Sorted)
    }

    pub fn shuffled(graph: &MultiGraph, seed: u64) -> Self {
        ProbeOracle::new(graph, AdjacencyOrder::Shuffled(seed))
    }

    /// Same graph, zeroed counters.
    pub fn fresh(&self) -> Self {
        ProbeOracle {
            data: Arc::clone(&self.data),
            counts: Cell::new(ProbeCounts::default()),
        }
    }

    pub fn n(&self) -> usize {
        self.data.n
    }

    pub fn order(&self) -> AdjacencyOrder {
        self.data.order
    }

    pub fn is_sorted(&self) -> bool {
        self.data.order == AdjacencyOrder::Sorted
    }

    pub fn counts(&self) -> ProbeCounts {
        self.counts.get()
    }

    pub fn reset(&self) {
        self.counts.set(ProbeCounts::default());
    }

    /// Returns the counts accumulated so far and resets them.
    pub fn take(&self) -> ProbeCounts {
        self.counts.replace(ProbeCounts::default())
    }

    fn bump(&self, f: impl FnOnce(&mut ProbeCounts)) {
        let mut c = self.counts.get();
        f(&mut c);
        self.counts.set(c);
    }

    pub fn check_vertex(&self, v: VertexId) -> Result<()> {
        if v.0 == 0 || v.0 as usize > self.data.n {
            Err(Error::VertexOutOfRange(v, self.data.n))
        } else {
            Ok(())
        }
    }

    /// `Exists(u, v)`: whether at least one edge joins `u` and `v`.
    pub fn exists(&self, u: VertexId, v: VertexId) -> Result<bool> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        self.bump(|c| c.exists += 1);
        Ok(self.data.sorted.list(u.index()).binary_search(&v.0).is_ok())
    }

    /// `Deg(v)`: adjacency-list length; a self-loop counts twice.
    pub fn deg(&self, v: VertexId) -> Result<usize> {
        self.check_vertex(v)?;
        self.bump(|c| c.deg += 1);
        Ok(self.data.sorted.degree(v.index()))
    }

    /// `Nbr(v, i)`: the `i`-th (1-based) entry of `v`'s list, or `None` (⊥)
    /// past the end or when that id already occurred earlier in the list.
    pub fn nbr(&self, v: VertexId, i: usize) -> Result<Option<VertexId>> {
        self.check_vertex(v)?;
        self.bump(|c| c.nbr += 1);
        let csr = self.data.listed.as_ref().unwrap_or(&self.data.sorted);
        let idx = v.index();
        if i == 0 || i > csr.degree(idx) {
            return Ok(None);
        }
        let k = csr.offsets[idx] + i - 1;
        if self.data.repeat[k] {
            return Ok(None);
        }
        Ok(Some(VertexId(csr.targets[k])))
    }

    /// Number of parallel edges between `u` and `v`. Not a probe: used to
    /// validate query arguments.
    pub fn multiplicity(&self, u: VertexId, v: VertexId) -> usize {
        if self.check_vertex(u).is_err() || self.check_vertex(v).is_err() {
            return 0;
        }
        let list = self.data.sorted.list(u.index());
        let lo = list.partition_point(|&w| w < v.0);
        let hi = list.partition_point(|&w| w <= v.0);
        if u == v {
            (hi - lo) / 2
        } else {
            hi - lo
        }
    }

    /// Argument check shared by the LCAs; not a probe.
    pub(crate) fn require_edge(&self, u: VertexId, v: VertexId) -> Result<()> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if self.multiplicity(u, v) == 0 {
            return Err(Error::NotAnEdge(u, v));
        }
        Ok(())
    }

    /// Argument check for multigraph queries; not a probe.
    pub(crate) fn require_edge_ref(&self, e: EdgeRef) -> Result<()> {
        self.check_vertex(e.u)?;
        self.check_vertex(e.v)?;
        if e.i == 0 || e.i as usize > self.multiplicity(e.u, e.v) {
            return Err(Error::InvalidEdgeRef(e.u, e.v, e.i));
        }
        Ok(())
    }
}

fn shuffled(adj: &Csr, tape: &impl Tape) -> Csr {
    let mut out = adj.clone();
    for idx in 0..out.n() {
        let (lo, hi) = (out.offsets[idx], out.offsets[idx + 1]);
        let list = &mut out.targets[lo..hi];
        for i in (1..list.len()).rev() {
            let key = TapeKey::new(Domain::Shuffle, idx as u64 + 1, i as u64, 0);
            let j = tape.below(key, i as u64 + 1) as usize;
            list.swap(i, j);
        }
    }
    out
}

fn repeat_marks(csr: &Csr) -> Vec<bool> {
    let n = csr.n();
    let mut marks = vec![false; csr.targets.len()];
    // last_seen[w] == idx + 1 when w was already seen in list idx
    let mut last_seen = vec![0u32; n + 1];
    for idx in 0..n {
        let stamp = idx as u32 + 1;
        for k in csr.offsets[idx]..csr.offsets[idx + 1] {
            let w = csr.targets[k] as usize;
            if last_seen[w] == stamp {
                marks[k] = true;
            } else {
                last_seen[w] = stamp;
            }
        }
    }
    marks
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> MultiGraph {
        MultiGraph::from_edges(3, vec![(1, 2), (2, 3), (1, 3)]).unwrap()
    }

    #[test]
    fn exists_and_counter() {
        let o = ProbeOracle::sorted(&triangle());
        assert!(o.exists(VertexId(1), VertexId(2)).unwrap());
        let empty = ProbeOracle::sorted(&MultiGraph::from_edges(3, vec![]).unwrap());
        for _ in 0..5 {
            assert!(!empty.exists(VertexId(1), VertexId(2)).unwrap());
        }
        assert_eq!(empty.counts().exists, 5);
        assert!(o.exists(VertexId(4), VertexId(1)).is_err());
    }

    #[test]
    fn degree_conventions() {
        let g = MultiGraph::from_edges(3, vec![(1, 1)]).unwrap();
        let o = ProbeOracle::sorted(&g);
        assert_eq!(o.deg(VertexId(1)).unwrap(), 2);
        assert_eq!(o.deg(VertexId(3)).unwrap(), 0);
        assert!(o.deg(VertexId(0)).is_err());
    }

    #[test]
    fn nbr_past_end_and_repeats() {
        let g = MultiGraph::from_edges(3, vec![(1, 2), (1, 2), (1, 3)]).unwrap();
        let o = ProbeOracle::sorted(&g);
        let v = VertexId(1);
        assert_eq!(o.nbr(v, 1).unwrap(), Some(VertexId(2)));
        assert_eq!(o.nbr(v, 2).unwrap(), None);
        assert_eq!(o.nbr(v, 3).unwrap(), Some(VertexId(3)));
        assert_eq!(o.nbr(v, 4).unwrap(), None);
        assert_eq!(o.nbr(v, 0).unwrap(), None);
        assert_eq!(o.counts().nbr, 5);
    }

    #[test]
    fn sorted_order() {
        let g = MultiGraph::from_edges(9, vec![(1, 7), (1, 3), (1, 9)]).unwrap();
        let o = ProbeOracle::sorted(&g);
        assert_eq!(o.nbr(VertexId(1), 1).unwrap(), Some(VertexId(3)));
        assert_eq!(o.nbr(VertexId(1), 3).unwrap(), Some(VertexId(9)));
    }

    #[test]
    fn shuffled_lists_are_permutations() {
        let g = crate::generate::generate_er(60, 0.3, 2).unwrap();
        let o = ProbeOracle::shuffled(&g, 17);
        for v in 1..=60 {
            let v = VertexId(v);
            let d = o.deg(v).unwrap();
            let mut seen: Vec<u32> = (1..=d).map(|i| o.nbr(v, i).unwrap().unwrap().0).collect();
            seen.sort_unstable();
            assert_eq!(seen, g.adjacency().sorted().list(v.index()));
        }
    }

    #[test]
    fn multiplicity_of_loops_and_bundles() {
        let g = MultiGraph::from_edges(2, vec![(1, 1), (1, 1), (1, 2), (2, 1), (1, 2)]).unwrap();
        let o = ProbeOracle::sorted(&g);
        assert_eq!(o.multiplicity(VertexId(1), VertexId(1)), 2);
        assert_eq!(o.multiplicity(VertexId(2), VertexId(1)), 3);
        assert_eq!(o.multiplicity(VertexId(2), VertexId(2)), 0);
        assert_eq!(o.counts(), ProbeCounts::default());
    }

    #[test]
    fn fresh_oracle_has_own_counters() {
        let o = ProbeOracle::sorted(&triangle());
        o.deg(VertexId(1)).unwrap();
        let f = o.fresh();
        assert_eq!(f.counts().total(), 0);
        assert_eq!(o.take().deg, 1);
        assert_eq!(o.counts().total(), 0);
    }
}
