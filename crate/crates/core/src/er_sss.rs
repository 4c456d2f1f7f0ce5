//! Sparse connected subgraph for Erdős–Rényi graphs.
//!
//! The input is first thinned to edge probability `p* = 7 ln(n) / n` by
//! pair-keyed coins, giving `G'`. On `G'` a four-round distributed algorithm
//! picks the kept edges:
//!
//! 1. every vertex learns its neighbors' ids;
//! 2. a vertex with a smaller neighbor is a non-candidate: it keeps the edge
//!    to its smallest neighbor and tells every other neighbor "you are not a
//!    leader"; the rest are candidates;
//! 3. a candidate that heard "you are not a leader" keeps the edge to the
//!    smallest neighbor that said so; otherwise it is a leader and names its
//!    largest neighbor as administrator;
//! 4. every administrator keeps all of its edges.
//!
//! [`reference_distributed`] runs the rounds globally. [`sss_query`] answers a
//! single edge by recomputing just the parts of the neighborhood it needs,
//! scanning full `G` adjacency lists and dropping edges that fail the
//! subsampling coin.

use std::collections::{BTreeSet, HashMap};
use std::rc::Rc;

use crate::error::{Error, Result};
use crate::graph::{MultiGraph, VertexId};
use crate::probe::ProbeOracle;
use crate::tape::{Domain, Tape, TapeKey};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SssParams {
    pub n: usize,
    pub p: f64,
    pub p_star: f64,
}

impl SssParams {
    pub fn new(n: usize, p: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter("n must be at least 2".into()));
        }
        if !(p > 0.0 && p <= 1.0) {
            return Err(Error::InvalidProbability(p));
        }
        Ok(SssParams {
            n,
            p,
            p_star: p_star(n),
        })
    }

    /// Probability that an edge of `G` survives into `G'`.
    pub fn keep_ratio(&self) -> f64 {
        (self.p_star / self.p).min(1.0)
    }
}

/// `7 ln(n) / n`, capped at 1.
pub fn p_star(n: usize) -> f64 {
    (7.0 * (n as f64).ln() / n as f64).min(1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RoleTag {
    NonCandidate,
    Candidate,
    Leader,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Role {
    pub tag: RoleTag,
    /// For a leader with at least one neighbor: its administrator.
    pub admin_of: Option<VertexId>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RoleCensus {
    pub non_candidates: usize,
    /// Candidates that did not become leaders.
    pub candidates: usize,
    pub leaders: usize,
    pub admins: usize,
}

#[derive(Debug, Clone)]
pub struct SssOutcome {
    /// Kept edges as `(min, max)`, ascending.
    pub edges: Vec<(u32, u32)>,
    pub roles: Vec<Role>,
    pub is_admin: Vec<bool>,
    pub subsampled_edges: usize,
}

impl SssOutcome {
    pub fn role(&self, v: VertexId) -> Role {
        self.roles[v.index()]
    }

    pub fn contains(&self, u: VertexId, v: VertexId) -> bool {
        let key = (u.0.min(v.0), u.0.max(v.0));
        self.edges.binary_search(&key).is_ok()
    }

    pub fn census(&self) -> RoleCensus {
        let mut c = RoleCensus::default();
        for r in &self.roles {
            match r.tag {
                RoleTag::NonCandidate => c.non_candidates += 1,
                RoleTag::Candidate => c.candidates += 1,
                RoleTag::Leader => c.leaders += 1,
            }
        }
        c.admins = self.is_admin.iter().filter(|&&a| a).count();
        c
    }
}

/// Whether the edge `{u, v}` of `G` survives into `G'`.
pub fn in_subsample(t: &impl Tape, params: &SssParams, u: VertexId, v: VertexId) -> Result<bool> {
    t.coin(TapeKey::pair(Domain::Subsample, u.0, v.0), params.keep_ratio())
}

/// Runs the four rounds on the whole subsampled graph.
pub fn reference_distributed(g: &MultiGraph, t: &impl Tape, params: &SssParams) -> Result<SssOutcome> {
    if !g.is_simple() {
        return Err(Error::NotSimple("sparse connected subgraph input".into()));
    }
    let n = g.n();
    let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut subsampled_edges = 0;
    for &(u, v) in g.edges() {
        if in_subsample(t, params, VertexId(u), VertexId(v))? {
            adj[u as usize - 1].push(v);
            adj[v as usize - 1].push(u);
            subsampled_edges += 1;
        }
    }

    let mut kept: BTreeSet<(u32, u32)> = BTreeSet::new();
    let mut keep = |a: u32, b: u32| {
        kept.insert((a.min(b), a.max(b)));
    };

    // round 1 is the id exchange; round 2
    let mut roles = vec![
        Role {
            tag: RoleTag::Candidate,
            admin_of: None
        };
        n
    ];
    let mut inbox: Vec<Vec<u32>> = vec![Vec::new(); n];
    for vi in 0..n {
        let v = vi as u32 + 1;
        let Some(&smallest) = adj[vi].iter().min() else {
            continue;
        };
        if smallest < v {
            roles[vi].tag = RoleTag::NonCandidate;
            keep(v, smallest);
            for &w in &adj[vi] {
                if w != smallest {
                    inbox[w as usize - 1].push(v);
                }
            }
        }
    }

    // round 3
    let mut is_admin = vec![false; n];
    for vi in 0..n {
        if roles[vi].tag != RoleTag::Candidate {
            continue;
        }
        let v = vi as u32 + 1;
        if let Some(&sender) = inbox[vi].iter().min() {
            keep(v, sender);
        } else {
            roles[vi].tag = RoleTag::Leader;
            if let Some(&largest) = adj[vi].iter().max() {
                roles[vi].admin_of = Some(VertexId(largest));
                is_admin[largest as usize - 1] = true;
            }
        }
    }

    // round 4
    for ai in 0..n {
        if is_admin[ai] {
            for &w in &adj[ai] {
                keep(ai as u32 + 1, w);
            }
        }
    }

    Ok(SssOutcome {
        edges: kept.into_iter().collect(),
        roles,
        is_admin,
        subsampled_edges,
    })
}

/// Whether the edge `(u, v)` of `G` is in the sparse connected subgraph.
pub fn sss_query(o: &ProbeOracle, t: &impl Tape, params: &SssParams, u: VertexId, v: VertexId) -> Result<bool> {
    o.require_edge(u, v)?;
    if u == v {
        return Err(Error::NotSimple("self-loop query".into()));
    }
    if !in_subsample(t, params, u, v)? {
        return Ok(false);
    }
    let mut view = LocalView {
        oracle: o,
        tape: t,
        params,
        cache: HashMap::new(),
    };
    Ok(view.kept_by(u, v)? || view.kept_by(v, u)? || view.is_admin(u)? || view.is_admin(v)?)
}

/// Per-query scratch state: `G'` neighborhoods fetched so far. Dropped when
/// the query returns.
struct LocalView<'a, T> {
    oracle: &'a ProbeOracle,
    tape: &'a T,
    params: &'a SssParams,
    cache: HashMap<u32, Rc<Vec<u32>>>,
}

impl<T: Tape> LocalView<'_, T> {
    /// Ascending `G'` neighbors of `x`.
    fn neighbors(&mut self, x: VertexId) -> Result<Rc<Vec<u32>>> {
        if let Some(list) = self.cache.get(&x.0) {
            return Ok(Rc::clone(list));
        }
        let d = self.oracle.deg(x)?;
        let mut list = Vec::new();
        for i in 1..=d {
            if let Some(w) = self.oracle.nbr(x, i)? {
                if w != x && in_subsample(self.tape, self.params, x, w)? {
                    list.push(w.0);
                }
            }
        }
        list.sort_unstable();
        let list = Rc::new(list);
        self.cache.insert(x.0, Rc::clone(&list));
        Ok(list)
    }

    fn smallest(&mut self, x: VertexId) -> Result<Option<u32>> {
        Ok(self.neighbors(x)?.first().copied())
    }

    fn is_candidate(&mut self, x: VertexId) -> Result<bool> {
        Ok(self.smallest(x)?.map_or(true, |s| x.0 < s))
    }

    /// Smallest neighbor that told candidate `x` "you are not a leader":
    /// a non-candidate whose smallest neighbor is not `x`.
    fn first_sender(&mut self, x: VertexId) -> Result<Option<u32>> {
        let nbrs = self.neighbors(x)?;
        for &y in nbrs.iter() {
            let ys = self.smallest(VertexId(y))?;
            let non_candidate = ys.is_some_and(|s| s < y);
            if non_candidate && ys != Some(x.0) {
                return Ok(Some(y));
            }
        }
        Ok(None)
    }

    fn is_leader(&mut self, x: VertexId) -> Result<bool> {
        Ok(self.is_candidate(x)? && self.first_sender(x)?.is_none())
    }

    /// Whether `x` keeps the edge to `y` in round 2 or round 3.
    fn kept_by(&mut self, x: VertexId, y: VertexId) -> Result<bool> {
        if self.is_candidate(x)? {
            Ok(self.first_sender(x)? == Some(y.0))
        } else {
            Ok(self.smallest(x)? == Some(y.0))
        }
    }

    /// Whether some leader neighbor of `x` named `x` as its administrator.
    fn is_admin(&mut self, x: VertexId) -> Result<bool> {
        let nbrs = self.neighbors(x)?;
        for &w in nbrs.iter() {
            let w = VertexId(w);
            // largest neighbor of w is x; check the cheap condition first
            if self.neighbors(w)?.last() == Some(&x.0) && self.is_leader(w)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}
