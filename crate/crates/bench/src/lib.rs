//! Benchmark fixtures. The benchmarks themselves live in `benches/`.

use lca_core::generate::{generate_er, generate_pa, generate_ua};
use lca_core::{EdgeRef, MultiGraph};

/// A fixed graph and the first `k` of its edges, used as query inputs.
pub struct Fixture {
    pub graph: MultiGraph,
    pub queries: Vec<EdgeRef>,
}

fn fixture(graph: MultiGraph, k: usize) -> Fixture {
    let refs = graph.edge_refs();
    let step = (refs.len() / k.max(1)).max(1);
    let queries = refs.into_iter().step_by(step).take(k).collect();
    Fixture { graph, queries }
}

pub fn er_fixture(n: usize, p: f64, k: usize) -> Fixture {
    fixture(generate_er(n, p, 1).expect("valid ER parameters"), k)
}

pub fn pa_fixture(n: usize, mu: u32, k: usize) -> Fixture {
    fixture(generate_pa(n, mu, 1).expect("valid PA parameters"), k)
}

pub fn ua_fixture(n: usize, mu: u32, k: usize) -> Fixture {
    fixture(generate_ua(n, mu, 1).expect("valid UA parameters"), k)
}
