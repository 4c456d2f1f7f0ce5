//! Random graph generators.
//!
//! All randomness comes from a [`RandomTape`] seeded by the caller, so a
//! `(model, parameters, seed)` triple always produces the same graph.

use crate::error::{Error, Result};
use crate::graph::{EdgeLabel, GraphModel, MultiGraph, VertexId};
use crate::tape::{Domain, RandomTape, Tape, TapeKey};

/// G(n, p): every unordered pair `{u, v}`, `u != v`, is an edge independently
/// with probability `p`.
///
/// Each row `u` walks its candidate partners `u + 1..=n` with geometric gaps,
/// which samples the same distribution as one coin per pair in time
/// proportional to the number of edges.
pub fn generate_er(n: usize, p: f64, seed: u64) -> Result<MultiGraph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidProbability(p));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let tape = RandomTape::new(seed);
    let mut edges = Vec::new();
    if p > 0.0 {
        let expected = (n as f64) * (n as f64 - 1.0) / 2.0 * p;
        edges.reserve((expected * 1.01) as usize + 16);
        for u in 1..n as u64 {
            let mut pos = u;
            for k in 0.. {
                let gap = tape.geometric(TapeKey::new(Domain::ErSkip, u, k, 0), p)?;
                pos = pos.saturating_add(gap);
                if pos > n as u64 {
                    break;
                }
                edges.push((u as u32, pos as u32));
            }
        }
    }
    Ok(MultiGraph::from_edges(n, edges)?.with_provenance(GraphModel::ErdosRenyi { p }, seed))
}

/// Preferential attachment with `mu` edges per round.
///
/// Round 1 gives `v_1` its `mu` self-loops. In round `i`, each of the `mu`
/// edges lands on an earlier `v_j` with probability `d_j / (S + 1)` and is a
/// self-loop with probability `(d_i + 1) / (S + 1)`, where `S` is the current
/// total degree (including `v_i`). Degrees update after every edge. Vertex ids
/// are then relabeled by a uniform permutation; the arrival map is kept.
pub fn generate_pa(n: usize, mu: u32, seed: u64) -> Result<MultiGraph> {
    if n == 0 || mu == 0 {
        return Err(Error::InvalidParameter("pa requires n >= 1 and mu >= 1".into()));
    }
    let tape = RandomTape::new(seed);
    let total = 2 * mu as usize * n;
    // endpoint multiset: vertex t appears d_t times
    let mut endpoints: Vec<u32> = Vec::with_capacity(total);
    let mut edges: Vec<(u32, u32)> = Vec::with_capacity(mu as usize * n);
    for round in 1..=n as u32 {
        for s in 1..=mu {
            let sum = endpoints.len() as u64;
            let x = tape.below(TapeKey::new(Domain::PaDraw, round as u64, s as u64, 0), sum + 1);
            let target = if x == sum { round } else { endpoints[x as usize] };
            edges.push((round, target));
            endpoints.push(round);
            endpoints.push(target);
        }
    }
    drop(endpoints);
    let (relabeled, arrival) = relabel(n, edges, &tape);
    Ok(MultiGraph::from_edges(n, relabeled)?
        .with_arrival(arrival)?
        .with_provenance(GraphModel::PreferentialAttachment { mu }, seed))
}

/// Uniform attachment with `mu` edges per round.
///
/// `v_1` starts alone; each later `v_i` picks `mu` targets independently and
/// uniformly from `v_1..v_{i-1}`. Every edge carries the label
/// `(owner = v_i, number = s)`. Ids are relabeled as for preferential
/// attachment.
pub fn generate_ua(n: usize, mu: u32, seed: u64) -> Result<MultiGraph> {
    if n < 2 || mu == 0 {
        return Err(Error::InvalidParameter("ua requires n >= 2 and mu >= 1".into()));
    }
    let tape = RandomTape::new(seed);
    let mut edges = Vec::with_capacity(mu as usize * (n - 1));
    let mut owners = Vec::with_capacity(mu as usize * (n - 1));
    for round in 2..=n as u32 {
        for s in 1..=mu {
            let j = tape.below(TapeKey::new(Domain::UaDraw, round as u64, s as u64, 0), round as u64 - 1);
            edges.push((round, j as u32 + 1));
            owners.push((round, s));
        }
    }
    let (relabeled, arrival) = relabel(n, edges, &tape);
    let id_of = inverse(&arrival);
    let labels = owners
        .into_iter()
        .map(|(round, number)| EdgeLabel {
            owner: VertexId(id_of[round as usize - 1]),
            number,
        })
        .collect();
    Ok(MultiGraph::from_edges(n, relabeled)?
        .with_arrival(arrival)?
        .with_labels(labels)?
        .with_provenance(GraphModel::UniformAttachment { mu }, seed))
}

/// Uniform permutation of `1..=n` (Fisher–Yates on tape draws).
/// `perm[t - 1]` is the id given to the vertex that arrived at time `t`.
pub fn random_permutation(n: usize, tape: &impl Tape) -> Vec<u32> {
    let mut perm: Vec<u32> = (1..=n as u32).collect();
    for i in (1..n).rev() {
        let j = tape.below(TapeKey::new(Domain::Permute, i as u64, 0, 0), i as u64 + 1) as usize;
        perm.swap(i, j);
    }
    perm
}

/// Relabels arrival-time endpoints by a random permutation.
/// Returns the relabeled edges and `arrival[id - 1] = t`.
fn relabel(n: usize, edges: Vec<(u32, u32)>, tape: &impl Tape) -> (Vec<(u32, u32)>, Vec<u32>) {
    let perm = random_permutation(n, tape);
    let arrival = inverse(&perm);
    let edges = edges
        .into_iter()
        .map(|(a, b)| (perm[a as usize - 1], perm[b as usize - 1]))
        .collect();
    (edges, arrival)
}

fn inverse(perm: &[u32]) -> Vec<u32> {
    let mut inv = vec![0u32; perm.len()];
    for (i, &x) in perm.iter().enumerate() {
        inv[x as usize - 1] = i as u32 + 1;
    }
    inv
}
