//! Multigraph storage.

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A 1-based vertex id.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VertexId(pub u32);

impl VertexId {
    /// Zero-based index into per-vertex arrays.
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize - 1
    }

    #[inline]
    pub fn from_index(i: usize) -> Self {
        VertexId(i as u32 + 1)
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<u32> for VertexId {
    fn from(v: u32) -> Self {
        VertexId(v)
    }
}

/// The `i`-th (1-based, in generation order) parallel edge between `u` and `v`.
///
/// `EdgeRef::new(u, v, i)` and `EdgeRef::new(v, u, i)` name the same edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EdgeRef {
    pub u: VertexId,
    pub v: VertexId,
    pub i: u32,
}

impl EdgeRef {
    pub fn new(u: impl Into<VertexId>, v: impl Into<VertexId>, i: u32) -> Self {
        EdgeRef {
            u: u.into(),
            v: v.into(),
            i,
        }
    }

    pub fn reversed(self) -> Self {
        EdgeRef {
            u: self.v,
            v: self.u,
            i: self.i,
        }
    }

    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }
}

/// Label attached to an attachment-model edge: the vertex whose round created
/// it and its position `1..=mu` within that round.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EdgeLabel {
    pub owner: VertexId,
    pub number: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum GraphModel {
    ErdosRenyi { p: f64 },
    PreferentialAttachment { mu: u32 },
    UniformAttachment { mu: u32 },
    /// Loaded from a file or built by hand.
    Explicit,
}

impl GraphModel {
    pub fn name(&self) -> &'static str {
        match self {
            GraphModel::ErdosRenyi { .. } => "er",
            GraphModel::PreferentialAttachment { .. } => "pa",
            GraphModel::UniformAttachment { .. } => "ua",
            GraphModel::Explicit => "explicit",
        }
    }

    pub fn param_string(&self) -> String {
        match self {
            GraphModel::ErdosRenyi { p } => format!("{p}"),
            GraphModel::PreferentialAttachment { mu } | GraphModel::UniformAttachment { mu } => {
                format!("{mu}")
            }
            GraphModel::Explicit => "-".to_string(),
        }
    }
}

/// Compressed adjacency: the neighbors of vertex index `i` are
/// `targets[offsets[i]..offsets[i + 1]]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Csr {
    pub(crate) offsets: Vec<usize>,
    pub(crate) targets: Vec<u32>,
}

impl Csr {
    /// Builds adjacency lists from an edge list, preserving edge order within
    /// each list. A self-loop contributes its endpoint twice.
    pub fn from_edges(n: usize, edges: &[(u32, u32)]) -> Self {
        let mut offsets = vec![0usize; n + 1];
        for &(u, v) in edges {
            offsets[u as usize] += 1;
            offsets[v as usize] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets[..n].to_vec();
        let mut targets = vec![0u32; offsets[n]];
        for &(u, v) in edges {
            let (ui, vi) = (u as usize - 1, v as usize - 1);
            targets[fill[ui]] = v;
            fill[ui] += 1;
            targets[fill[vi]] = u;
            fill[vi] += 1;
        }
        Csr { offsets, targets }
    }

    #[inline]
    pub fn list(&self, idx: usize) -> &[u32] {
        &self.targets[self.offsets[idx]..self.offsets[idx + 1]]
    }

    #[inline]
    pub fn degree(&self, idx: usize) -> usize {
        self.offsets[idx + 1] - self.offsets[idx]
    }

    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn sorted(&self) -> Csr {
        let mut out = self.clone();
        for i in 0..self.n() {
            out.targets[out.offsets[i]..out.offsets[i + 1]].sort_unstable();
        }
        out
    }
}

/// An undirected multigraph on vertices `1..=n`.
///
/// Parallel edges and self-loops are allowed. The edge list is kept in
/// generation order, which also fixes the lexicographic index of parallel
/// copies.
#[derive(Debug, Clone)]
pub struct MultiGraph {
    n: usize,
    edges: Vec<(u32, u32)>,
    adj: Csr,
    arrival: Option<Vec<u32>>,
    labels: Option<Vec<EdgeLabel>>,
    model: GraphModel,
    seed: Option<u64>,
    pair_index: OnceLock<HashMap<(u32, u32), Vec<u32>>>,
}

impl PartialEq for MultiGraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.edges == other.edges
            && self.arrival == other.arrival
            && self.labels == other.labels
    }
}

impl MultiGraph {
    /// Builds a graph from 1-based endpoint pairs.
    pub fn from_edges(n: usize, edges: Vec<(u32, u32)>) -> Result<Self> {
        if n == 0 || n > u32::MAX as usize - 1 {
            return Err(Error::InvalidParameter(format!("vertex count {n}")));
        }
        for &(u, v) in &edges {
            for w in [u, v] {
                if w == 0 || w as usize > n {
                    return Err(Error::VertexOutOfRange(VertexId(w), n));
                }
            }
        }
        let adj = Csr::from_edges(n, &edges);
        Ok(MultiGraph {
            n,
            edges,
            adj,
            arrival: None,
            labels: None,
            model: GraphModel::Explicit,
            seed: None,
            pair_index: OnceLock::new(),
        })
    }

    pub(crate) fn with_provenance(mut self, model: GraphModel, seed: u64) -> Self {
        self.model = model;
        self.seed = Some(seed);
        self
    }

    /// Attaches arrival times (`arrival[id - 1]` is the round in which `id` joined).
    pub fn with_arrival(mut self, arrival: Vec<u32>) -> Result<Self> {
        if arrival.len() != self.n {
            return Err(Error::InvalidParameter("arrival map length".into()));
        }
        let mut seen = vec![false; self.n];
        for &t in &arrival {
            if t == 0 || t as usize > self.n || std::mem::replace(&mut seen[t as usize - 1], true) {
                return Err(Error::InvalidParameter("arrival map is not a bijection".into()));
            }
        }
        self.arrival = Some(arrival);
        Ok(self)
    }

    /// Attaches one label per edge, aligned with [`MultiGraph::edges`].
    pub fn with_labels(mut self, labels: Vec<EdgeLabel>) -> Result<Self> {
        if labels.len() != self.edges.len() {
            return Err(Error::InvalidParameter("label count".into()));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in generation order.
    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn adjacency(&self) -> &Csr {
        &self.adj
    }

    pub fn neighbors(&self, v: VertexId) -> &[u32] {
        self.adj.list(v.index())
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj.degree(v.index())
    }

    pub fn arrival(&self) -> Option<&[u32]> {
        self.arrival.as_deref()
    }

    pub fn labels(&self) -> Option<&[EdgeLabel]> {
        self.labels.as_deref()
    }

    pub fn model(&self) -> GraphModel {
        self.model
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn check_vertex(&self, v: VertexId) -> Result<()> {
        if v.0 == 0 || v.0 as usize > self.n {
            Err(Error::VertexOutOfRange(v, self.n))
        } else {
            Ok(())
        }
    }

    /// Vertex whose arrival time is `t`, if arrival metadata is present.
    pub fn vertex_arriving_at(&self, t: u32) -> Option<VertexId> {
        let arrival = self.arrival.as_ref()?;
        arrival
            .iter()
            .position(|&a| a == t)
            .map(VertexId::from_index)
    }

    pub fn is_simple(&self) -> bool {
        let sorted = self.adj.sorted();
        (0..self.n).all(|i| {
            let list = sorted.list(i);
            list.iter().all(|&w| w as usize != i + 1) && list.windows(2).all(|w| w[0] != w[1])
        })
    }

    /// Index into [`MultiGraph::edges`] of the edge named by `e`.
    pub fn edge_position(&self, e: EdgeRef) -> Option<usize> {
        let index = self.pair_index.get_or_init(|| {
            let mut map: HashMap<(u32, u32), Vec<u32>> = HashMap::new();
            for (pos, &(u, v)) in self.edges.iter().enumerate() {
                map.entry((u.min(v), u.max(v))).or_default().push(pos as u32);
            }
            map
        });
        let key = (e.u.0.min(e.v.0), e.u.0.max(e.v.0));
        let copies = index.get(&key)?;
        if e.i == 0 {
            return None;
        }
        copies.get(e.i as usize - 1).map(|&p| p as usize)
    }

    /// Every edge as an [`EdgeRef`] with `u <= v`, ordered by `(u, v, i)`.
    pub fn edge_refs(&self) -> Vec<EdgeRef> {
        let sorted = self.adj.sorted();
        let mut out = Vec::with_capacity(self.edges.len());
        for ui in 0..self.n {
            let u = ui as u32 + 1;
            let list = sorted.list(ui);
            let mut j = list.partition_point(|&w| w < u);
            while j < list.len() {
                let v = list[j];
                let run = list[j..].iter().take_while(|&&w| w == v).count();
                let copies = if v == u { run / 2 } else { run };
                for i in 1..=copies {
                    out.push(EdgeRef::new(u, v, i as u32));
                }
                j += run;
            }
        }
        out
    }

    /// Subgraph on the same vertex set with the given edges.
    pub fn subgraph(&self, edges: Vec<(u32, u32)>) -> Result<MultiGraph> {
        MultiGraph::from_edges(self.n, edges)
    }
}
