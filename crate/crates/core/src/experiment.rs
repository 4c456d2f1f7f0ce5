//! Seeded experiment drivers shared by the command line and the acceptance
//! tests. Each driver generates a graph, evaluates the local algorithm on it
//! and measures the result with the independent checks in [`crate::verify`].
//!
//! Spanners of the attachment models are assembled from one batch HDN pass
//! ([`all_hdn`]); probe statistics come from the exact per-query cost of the
//! HDN rule, and a tape-sampled subset of edges is answered through the real
//! probe oracle to cross-check both the answers and the costs.

use std::collections::HashSet;

use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::attach::{all_hdn, degree_bar, pa_query, ua_arrival_query, ua_query, ua_root_find, UaParams};
use crate::er_spanner::{is_center, spanner_query, ErSpannerParams, ScanMode};
use crate::er_sss::{reference_distributed, sss_query, RoleCensus, SssParams};
use crate::error::{Error, Result};
use crate::generate::{generate_er, generate_pa, generate_ua};
use crate::graph::{EdgeRef, MultiGraph, VertexId};
use crate::lag::{compute_mis, query_edge, query_mis, retry_cap};
use crate::probe::{ProbeCounts, ProbeOracle};
use crate::record::RunRecord;
use crate::tape::{CountingTape, Domain, RandomTape, Tape, TapeKey};
use crate::verify::{
    diameter, eccentricity, greedy_mis, is_connected, is_mis, realize_lag_graph, sampled_stretch,
    tree_diameter, GraphView, StretchReport,
};

/// Sampling slots used by the drivers, kept apart from the stretch sampler.
const SLOT_SOURCES: u64 = 1;
const SLOT_QUERIES: u64 = 2;
const SLOT_STARTS: u64 = 3;

fn sample_index(t: &impl Tape, i: u64, slot: u64, bound: u64) -> u64 {
    t.below(TapeKey::new(Domain::Sample, i, 0, slot), bound)
}

/// Running maximum and mean of per-query costs.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CostStats {
    pub queries: u64,
    pub total: u64,
    pub max: u64,
}

impl CostStats {
    pub fn push(&mut self, cost: u64) {
        self.queries += 1;
        self.total += cost;
        self.max = self.max.max(cost);
    }

    pub fn mean(&self) -> f64 {
        if self.queries == 0 {
            0.0
        } else {
            self.total as f64 / self.queries as f64
        }
    }
}

fn base_record(command: &str, g: &MultiGraph, p_or_mu: f64, seed: u64) -> RunRecord {
    RunRecord {
        command: command.to_string(),
        n: g.n() as u64,
        p_or_mu,
        delta: None,
        seed,
        edges_g: g.edge_count() as u64,
        edges_h: 0,
        connected: false,
        is_tree: false,
        max_stretch: None,
        ecc_bound: None,
        probes_max: 0,
        probes_mean: 0.0,
        wall_ms: None,
    }
}

fn sorted_pairs(mut pairs: Vec<(u32, u32)>) -> Vec<(u32, u32)> {
    for e in &mut pairs {
        *e = (e.0.min(e.1), e.0.max(e.1));
    }
    pairs.sort_unstable();
    pairs.dedup();
    pairs
}

// ---------------------------------------------------------------------------
// Erdős–Rényi spanner

#[derive(Debug, Clone)]
pub struct ErSpannerConfig {
    pub n: usize,
    pub delta: f64,
    pub seed: u64,
    pub mode: ScanMode,
    /// Vertex pairs sampled for the stretch check.
    pub pairs: usize,
    /// Sources whose eccentricity in `H` is measured.
    pub sources: usize,
}

#[derive(Debug, Clone)]
pub struct ErSpannerRun {
    pub record: RunRecord,
    pub params: ErSpannerParams,
    /// Kept edges as `(min, max)`, ascending.
    pub h_edges: Vec<(u32, u32)>,
    pub stretch: StretchReport,
    /// Largest finite eccentricity over the sampled sources.
    pub ecc_max: u32,
    /// Largest number of vertices unreachable from a sampled source.
    pub ecc_unreachable: usize,
    /// Non-centers with no center neighbor.
    pub uncovered: usize,
    /// In sorted mode: every query touching exactly one center used a single
    /// `Nbr` probe and nothing else, and every other query used none.
    pub sorted_probe_rule: bool,
}

pub fn run_er_spanner(cfg: &ErSpannerConfig) -> Result<ErSpannerRun> {
    let params = ErSpannerParams::new(cfg.n, cfg.delta, cfg.mode)?;
    let p = params.p();
    let g = generate_er(cfg.n, p, cfg.seed)?;
    let (h_edges, stats, sorted_probe_rule) = er_spanner_edges(&g, &params, cfg.seed)?;

    let gv = GraphView::from_multigraph(&g);
    let hv = GraphView::from_edges(g.n(), &h_edges);
    let tape = RandomTape::new(cfg.seed);
    let stretch = sampled_stretch(&gv, &hv, &tape, cfg.pairs)?;
    let (mut ecc_max, mut ecc_unreachable) = (0, 0);
    for i in 0..cfg.sources as u64 {
        let src = VertexId(sample_index(&tape, i, SLOT_SOURCES, g.n() as u64) as u32 + 1);
        let e = eccentricity(&hv, src);
        ecc_max = ecc_max.max(e.reachable_max);
        ecc_unreachable = ecc_unreachable.max(e.unreachable);
    }
    let uncovered = (params.threshold + 1..=g.n() as u32)
        .filter(|&v| !gv.neighbors(v).first().is_some_and(|&w| w <= params.threshold))
        .count();

    let connected = is_connected(&hv);
    let mut record = base_record("er-spanner", &g, p, cfg.seed);
    record.delta = Some(cfg.delta);
    record.edges_h = h_edges.len() as u64;
    record.connected = connected;
    record.is_tree = connected && h_edges.len() + 1 == g.n();
    record.max_stretch = (stretch.pairs_checked > 0).then_some(stretch.max_stretch);
    record.ecc_bound = (cfg.sources > 0).then_some(ecc_max);
    record.probes_max = stats.max;
    record.probes_mean = stats.mean();
    Ok(ErSpannerRun {
        record,
        params,
        h_edges,
        stretch,
        ecc_max,
        ecc_unreachable,
        uncovered,
        sorted_probe_rule,
    })
}

/// Answers the spanner query on every edge of `g`. Sorted mode uses the
/// sorted oracle; the scanning modes see a seed-shuffled adjacency.
pub fn er_spanner_edges(
    g: &MultiGraph,
    params: &ErSpannerParams,
    seed: u64,
) -> Result<(Vec<(u32, u32)>, CostStats, bool)> {
    let o = match params.mode {
        ScanMode::Sorted => ProbeOracle::sorted(g),
        _ => ProbeOracle::shuffled(g, seed),
    };
    let mut stats = CostStats::default();
    let mut rule = true;
    let mut kept = Vec::new();
    for &(u, v) in g.edges() {
        let (u, v) = (VertexId(u), VertexId(v));
        let keep = spanner_query(&o, params, u, v)?;
        let c = o.take();
        stats.push(c.total());
        if params.mode == ScanMode::Sorted {
            let mixed = is_center(u, params) != is_center(v, params);
            let expected = if mixed {
                ProbeCounts { exists: 0, deg: 0, nbr: 1 }
            } else {
                ProbeCounts::default()
            };
            rule &= c == expected;
        }
        if keep {
            kept.push((u.0, v.0));
        }
    }
    Ok((sorted_pairs(kept), stats, rule))
}

// ---------------------------------------------------------------------------
// Erdős–Rényi sparse connected subgraph

#[derive(Debug, Clone)]
pub struct ErSssConfig {
    pub n: usize,
    pub p: f64,
    pub seed: u64,
    /// Edges answered through the local algorithm; `None` means all of them.
    pub queries: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct ErSssRun {
    pub record: RunRecord,
    pub census: RoleCensus,
    pub h_edges: Vec<(u32, u32)>,
    /// Local answers that disagree with the global run.
    pub mismatches: usize,
    pub queries_run: usize,
}

pub fn run_er_sss(cfg: &ErSssConfig) -> Result<ErSssRun> {
    let params = SssParams::new(cfg.n, cfg.p)?;
    let g = generate_er(cfg.n, cfg.p, cfg.seed)?;
    let tape = RandomTape::new(cfg.seed);
    let outcome = reference_distributed(&g, &tape, &params)?;

    let o = ProbeOracle::sorted(&g);
    let m = g.edge_count();
    let picks: Vec<usize> = match cfg.queries {
        None => (0..m).collect(),
        Some(_) if m == 0 => Vec::new(),
        Some(k) => (0..k as u64)
            .map(|i| sample_index(&tape, i, SLOT_QUERIES, m as u64) as usize)
            .collect(),
    };
    let mut stats = CostStats::default();
    let mut mismatches = 0;
    for &idx in &picks {
        let (u, v) = g.edges()[idx];
        let (u, v) = (VertexId(u), VertexId(v));
        let local = sss_query(&o, &tape, &params, u, v)?;
        stats.push(o.take().total());
        if local != outcome.contains(u, v) {
            mismatches += 1;
        }
    }

    let hv = GraphView::from_edges(g.n(), &outcome.edges);
    let connected = is_connected(&hv);
    let mut record = base_record("er-sss", &g, cfg.p, cfg.seed);
    record.edges_h = outcome.edges.len() as u64;
    record.connected = connected;
    record.is_tree = connected && outcome.edges.len() + 1 == g.n();
    record.probes_max = stats.max;
    record.probes_mean = stats.mean();
    Ok(ErSssRun {
        record,
        census: outcome.census(),
        h_edges: outcome.edges,
        mismatches,
        queries_run: picks.len(),
    })
}

/// `10 n / ln² n`, the leader budget checked in acceptance runs.
pub fn leader_budget(n: usize) -> f64 {
    let l = (n as f64).ln();
    10.0 * n as f64 / (l * l)
}

// ---------------------------------------------------------------------------
// Attachment models

/// Probes spent by one HDN evaluation of `v`: a `Deg` on `v`, a `Nbr` per
/// list entry, and a `Deg` per distinct neighbor other than `v` (repeated
/// entries come back as ⊥ and are skipped).
pub fn hdn_cost(g: &MultiGraph, v: VertexId) -> u64 {
    let list = g.neighbors(v);
    let distinct: HashSet<u32> = list.iter().copied().filter(|&w| w != v.0).collect();
    1 + list.len() as u64 + distinct.len() as u64
}

/// Probe cost of the HDN rule on `(u, v)`: HDN of `u`, then HDN of `v`
/// unless the first evaluation already matched.
fn hdn_rule_cost(hdn: &[Option<VertexId>], costs: &[u64], u: VertexId, v: VertexId) -> u64 {
    let first = costs[u.index()];
    if hdn[u.index()] == Some(v) {
        first
    } else {
        first + costs[v.index()]
    }
}

fn hdn_pairs(hdn: &[Option<VertexId>]) -> Vec<(u32, u32)> {
    hdn.iter()
        .enumerate()
        .filter_map(|(i, h)| h.map(|w| (i as u32 + 1, w.0)))
        .collect()
}

/// Diameter of `H`: two sweeps for trees, all sources otherwise.
fn spanner_diameter(hv: &GraphView, tree: bool) -> Option<u32> {
    if tree {
        tree_diameter(hv)
    } else {
        diameter(hv)
    }
}

#[derive(Debug, Clone)]
pub struct AttachConfig {
    pub n: usize,
    pub mu: u32,
    pub seed: u64,
    /// Edges answered through the probe oracle as a cross-check.
    pub samples: usize,
}

#[derive(Debug, Clone)]
pub struct PaSpannerRun {
    pub record: RunRecord,
    pub h_edges: Vec<(u32, u32)>,
    pub diameter: Option<u32>,
    /// Sampled oracle answers or costs that disagree with the batch evaluation.
    pub mismatches: usize,
}

pub fn run_pa_spanner(cfg: &AttachConfig) -> Result<PaSpannerRun> {
    let g = generate_pa(cfg.n, cfg.mu, cfg.seed)?;
    let hdn = all_hdn(&g);
    let costs: Vec<u64> = (1..=g.n() as u32).map(|v| hdn_cost(&g, VertexId(v))).collect();
    let h_edges = sorted_pairs(hdn_pairs(&hdn));
    let h_set: HashSet<(u32, u32)> = h_edges.iter().copied().collect();

    let refs = g.edge_refs();
    let cost_of = |e: &EdgeRef| {
        if e.is_loop() || e.i != 1 {
            0
        } else {
            hdn_rule_cost(&hdn, &costs, e.u, e.v)
        }
    };
    let mut stats = CostStats::default();
    for e in &refs {
        stats.push(cost_of(e));
    }

    let o = ProbeOracle::shuffled(&g, cfg.seed);
    let tape = RandomTape::new(cfg.seed);
    let mut mismatches = 0;
    for k in 0..cfg.samples as u64 {
        let e = refs[sample_index(&tape, k, SLOT_QUERIES, refs.len() as u64) as usize];
        let keep = pa_query(&o, e)?;
        let spent = o.take().total();
        let expect = e.i == 1 && !e.is_loop() && h_set.contains(&(e.u.0.min(e.v.0), e.u.0.max(e.v.0)));
        if keep != expect || spent != cost_of(&e) {
            mismatches += 1;
        }
    }

    let hv = GraphView::from_edges(g.n(), &h_edges);
    let connected = is_connected(&hv);
    let tree = connected && h_edges.len() + 1 == g.n();
    let diam = if connected { spanner_diameter(&hv, tree) } else { None };
    let mut record = base_record("pa-spanner", &g, cfg.mu as f64, cfg.seed);
    record.edges_h = h_edges.len() as u64;
    record.connected = connected;
    record.is_tree = tree;
    record.ecc_bound = diam;
    record.probes_max = stats.max;
    record.probes_mean = stats.mean();
    Ok(PaSpannerRun {
        record,
        h_edges,
        diameter: diam,
        mismatches,
    })
}

#[derive(Debug, Clone)]
pub struct UaSpannerRun {
    pub record: RunRecord,
    pub params: UaParams,
    pub h_edges: Vec<(u32, u32)>,
    pub diameter: Option<u32>,
    /// Vertices whose degree exceeds the threshold.
    pub high_vertices: usize,
    pub mismatches: usize,
    /// Every query with both degrees above the threshold used exactly two
    /// `Deg` probes and nothing else.
    pub both_high_two_deg: bool,
    pub both_high_queries: usize,
}

pub fn run_ua_spanner(cfg: &AttachConfig, center: Option<u32>) -> Result<UaSpannerRun> {
    let params = match center {
        Some(m) => UaParams::with_center(cfg.n, cfg.mu, m)?,
        None => UaParams::new(cfg.n, cfg.mu)?,
    };
    let g = generate_ua(cfg.n, cfg.mu, cfg.seed)?;
    let high: Vec<bool> = (1..=g.n() as u32)
        .map(|v| g.degree(VertexId(v)) as f64 > params.threshold)
        .collect();
    let both_high = |e: &EdgeRef| high[e.u.index()] && high[e.v.index()];
    let hdn = all_hdn(&g);
    let costs: Vec<u64> = (1..=g.n() as u32).map(|v| hdn_cost(&g, VertexId(v))).collect();
    let refs = g.edge_refs();

    let mut kept = hdn_pairs(&hdn);
    kept.extend(refs.iter().filter(|e| e.i == 1 && both_high(e)).map(|e| (e.u.0, e.v.0)));
    let h_edges = sorted_pairs(kept);
    let h_set: HashSet<(u32, u32)> = h_edges.iter().copied().collect();

    let cost_of = |e: &EdgeRef| {
        if both_high(e) || e.is_loop() || e.i != 1 {
            2
        } else {
            2 + hdn_rule_cost(&hdn, &costs, e.u, e.v)
        }
    };
    let mut stats = CostStats::default();
    for e in &refs {
        stats.push(cost_of(e));
    }

    let o = ProbeOracle::shuffled(&g, cfg.seed);
    let tape = RandomTape::new(cfg.seed);
    let expect = |e: &EdgeRef| e.i == 1 && h_set.contains(&(e.u.0.min(e.v.0), e.u.0.max(e.v.0)));
    let mut mismatches = 0;
    for k in 0..cfg.samples as u64 {
        let e = refs[sample_index(&tape, k, SLOT_QUERIES, refs.len() as u64) as usize];
        let keep = ua_query(&o, &params, e)?;
        if keep != expect(&e) || o.take().total() != cost_of(&e) {
            mismatches += 1;
        }
    }
    let mut both_high_two_deg = true;
    let mut both_high_queries = 0;
    for e in refs.iter().filter(|e| both_high(e)) {
        let keep = ua_query(&o, &params, *e)?;
        both_high_two_deg &= o.take() == ProbeCounts { exists: 0, deg: 2, nbr: 0 };
        if keep != expect(e) {
            mismatches += 1;
        }
        both_high_queries += 1;
    }

    let hv = GraphView::from_edges(g.n(), &h_edges);
    let connected = is_connected(&hv);
    let tree = connected && h_edges.len() + 1 == g.n();
    let diam = if connected { spanner_diameter(&hv, tree) } else { None };
    let mut record = base_record("ua-spanner", &g, cfg.mu as f64, cfg.seed);
    record.edges_h = h_edges.len() as u64;
    record.connected = connected;
    record.is_tree = tree;
    record.ecc_bound = diam;
    record.probes_max = stats.max;
    record.probes_mean = stats.mean();
    Ok(UaSpannerRun {
        record,
        params,
        h_edges,
        diameter: diam,
        high_vertices: high.iter().filter(|&&h| h).count(),
        mismatches,
        both_high_two_deg,
        both_high_queries,
    })
}

/// Outcome of the degree/arrival separation check for one center size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Separation {
    pub size: u64,
    /// `lambda_size + mu / 2`.
    pub bar: f64,
    /// Arrivals `1..=size` whose degree is not above the bar.
    pub early_below: usize,
    /// Arrivals from `ceil(e² size)` on whose degree is not below the bar.
    pub late_above: usize,
}

impl Separation {
    pub fn holds(&self) -> bool {
        self.early_below == 0 && self.late_above == 0
    }
}

pub fn ua_separation(g: &MultiGraph, mu: u32, size: u64) -> Result<Separation> {
    let arrival = g.arrival().ok_or(Error::MissingMetadata)?;
    let n = g.n();
    if size == 0 || size as usize > n {
        return Err(Error::InvalidParameter(format!("center size {size}")));
    }
    let bar = degree_bar(n, mu, size);
    let late_from = (std::f64::consts::E.powi(2) * size as f64).ceil() as u32;
    let mut sep = Separation {
        size,
        bar,
        early_below: 0,
        late_above: 0,
    };
    for (i, &t) in arrival.iter().enumerate() {
        let d = g.degree(VertexId::from_index(i)) as f64;
        if t as u64 <= size && d <= bar {
            sep.early_below += 1;
        }
        if t >= late_from && d >= bar {
            sep.late_above += 1;
        }
    }
    Ok(sep)
}

#[derive(Debug, Clone)]
pub struct UaRootRun {
    pub record: RunRecord,
    /// Start vertex and the candidate set it produced.
    pub finds: Vec<(VertexId, Vec<VertexId>)>,
    /// Starts whose candidate set contains the first arrival.
    pub hits: usize,
    pub max_candidates: usize,
}

/// Runs root finding from the given starts, or from `samples` tape-sampled
/// starts when none are given.
pub fn run_ua_root(cfg: &AttachConfig, starts: &[VertexId]) -> Result<UaRootRun> {
    let params = UaParams::new(cfg.n, cfg.mu)?;
    let g = generate_ua(cfg.n, cfg.mu, cfg.seed)?;
    let root = g.vertex_arriving_at(1).ok_or(Error::MissingMetadata)?;
    let tape = RandomTape::new(cfg.seed);
    let starts: Vec<VertexId> = if starts.is_empty() {
        (0..cfg.samples as u64)
            .map(|i| VertexId(sample_index(&tape, i, SLOT_STARTS, g.n() as u64) as u32 + 1))
            .collect()
    } else {
        starts.to_vec()
    };
    let o = ProbeOracle::shuffled(&g, cfg.seed);
    let mut stats = CostStats::default();
    let mut finds = Vec::with_capacity(starts.len());
    let (mut hits, mut max_candidates) = (0, 0);
    for &s in &starts {
        let r = ua_root_find(&o, &params, s)?;
        stats.push(o.take().total());
        if r.candidates.contains(&root) {
            hits += 1;
        }
        max_candidates = max_candidates.max(r.candidates.len());
        finds.push((s, r.candidates));
    }
    let mut record = base_record("ua-root", &g, cfg.mu as f64, cfg.seed);
    record.probes_max = stats.max;
    record.probes_mean = stats.mean();
    Ok(UaRootRun {
        record,
        finds,
        hits,
        max_candidates,
    })
}

#[derive(Debug, Clone)]
pub struct ArrivalVariantRun {
    pub record: RunRecord,
    pub h_edges: Vec<(u32, u32)>,
    /// Longest path from the first arrival in `H`.
    pub root_depth: Option<u32>,
}

pub fn run_ua_arrival(cfg: &AttachConfig) -> Result<ArrivalVariantRun> {
    let g = generate_ua(cfg.n, cfg.mu, cfg.seed)?;
    let mut kept = Vec::new();
    for e in g.edge_refs() {
        if ua_arrival_query(&g, e)? {
            kept.push((e.u.0, e.v.0));
        }
    }
    let h = g.subgraph(kept)?;
    let hv = GraphView::from_multigraph(&h);
    let connected = is_connected(&hv);
    let tree = connected && h.edge_count() + 1 == g.n();
    let root = g.vertex_arriving_at(1).ok_or(Error::MissingMetadata)?;
    let root_depth = crate::verify::depth_from(&hv, root);
    let mut record = base_record("ua-spanner", &g, cfg.mu as f64, cfg.seed);
    record.edges_h = h.edge_count() as u64;
    record.connected = connected;
    record.is_tree = tree;
    record.ecc_bound = root_depth;
    Ok(ArrivalVariantRun {
        record,
        h_edges: sorted_pairs(h.edges().to_vec()),
        root_depth,
    })
}

// ---------------------------------------------------------------------------
// Local access generator for G(n, p) with its MIS

#[derive(Debug, Clone)]
pub struct LagRun {
    pub record: RunRecord,
    pub mis: Vec<u32>,
    /// Realized graph, when requested.
    pub graph: Option<MultiGraph>,
    /// Realized MIS equals the greedy MIS of the realized graph.
    pub matches_greedy: Option<bool>,
    pub is_mis: Option<bool>,
    /// Tape evaluations per query.
    pub work: CostStats,
}

/// Measures tape work over `queries` sampled edge queries and as many
/// membership queries, and optionally realizes the whole graph.
pub fn run_lag(n: usize, p: f64, seed: u64, queries: usize, realize: bool) -> Result<LagRun> {
    let tape = RandomTape::new(seed);
    let counting = CountingTape::new(RandomTape::new(seed));
    let mis = compute_mis(&tape, n, p)?.members;
    let mut work = CostStats::default();
    let sampler = RandomTape::new(seed ^ 0x5a5a_5a5a_5a5a_5a5a);
    if n >= 2 {
        for i in 0..queries as u64 {
            let a = sample_index(&sampler, i, SLOT_QUERIES, n as u64) as u32 + 1;
            let mut b = sample_index(&sampler, i, SLOT_STARTS, n as u64 - 1) as u32 + 1;
            if b >= a {
                b += 1;
            }
            query_edge(&counting, n, p, VertexId(a), VertexId(b))?;
            work.push(counting.take());
            query_mis(&counting, n, p, VertexId(a))?;
            work.push(counting.take());
        }
    }
    let mut record = RunRecord {
        command: "lag-mis".into(),
        n: n as u64,
        p_or_mu: p,
        delta: None,
        seed,
        edges_g: 0,
        edges_h: 0,
        connected: false,
        is_tree: false,
        max_stretch: None,
        ecc_bound: None,
        probes_max: work.max,
        probes_mean: work.mean(),
        wall_ms: None,
    };
    let (mut graph, mut matches_greedy, mut mis_ok) = (None, None, None);
    if realize {
        let (g, members) = realize_lag_graph(&tape, n, p)?;
        let gv = GraphView::from_multigraph(&g);
        matches_greedy = Some(greedy_mis(&gv) == members && members == mis);
        mis_ok = Some(is_mis(&gv, &members));
        record.edges_g = g.edge_count() as u64;
        record.connected = is_connected(&gv);
        record.is_tree = record.connected && g.edge_count() + 1 == n;
        graph = Some(g);
    }
    Ok(LagRun {
        record,
        mis,
        graph,
        matches_greedy,
        is_mis: mis_ok,
        work,
    })
}

/// `ceil(40 ln(n) / p) * |M|`, the per-query tape budget.
pub fn lag_work_budget(n: usize, p: f64, mis_size: usize) -> u64 {
    retry_cap(n, p) * mis_size as u64
}

/// Bit `k` of the code is the `k`-th pair `(a, b)`, `a < b`, in lexicographic order.
pub fn graph_code(g: &MultiGraph) -> u64 {
    let n = g.n() as u32;
    let gv = GraphView::from_multigraph(g);
    let mut code = 0u64;
    let mut k = 0;
    for a in 1..=n {
        for b in (a + 1)..=n {
            if gv.has_edge(a, b) {
                code |= 1 << k;
            }
            k += 1;
        }
    }
    code
}

#[derive(Debug, Clone)]
pub struct Chi2Report {
    pub trials: u64,
    /// Observed count per labeled graph, indexed by [`graph_code`].
    pub counts: Vec<u64>,
    pub statistic: f64,
    pub df: u64,
    pub p_value: f64,
    /// Trials whose MIS differed from the greedy MIS of the realized graph.
    pub greedy_mismatches: u64,
    /// Trials whose MIS failed the independence/maximality check.
    pub invalid_mis: u64,
}

impl Chi2Report {
    pub fn passes(&self, alpha: f64) -> bool {
        self.p_value >= alpha
    }
}

/// Realizes the generator for seeds `first_seed..first_seed + trials` and
/// tests the labeled-graph histogram against `G(n, p)` probabilities.
pub fn lag_chi2(n: usize, p: f64, first_seed: u64, trials: u64) -> Result<Chi2Report> {
    let pairs = n * n.saturating_sub(1) / 2;
    if pairs == 0 || pairs > 16 {
        return Err(Error::InvalidParameter(format!("chi-square needs 2 <= n <= 6, got {n}")));
    }
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be positive".into()));
    }
    let cells = 1usize << pairs;
    let mut counts = vec![0u64; cells];
    let (mut greedy_mismatches, mut invalid_mis) = (0, 0);
    for s in 0..trials {
        let tape = RandomTape::new(first_seed.wrapping_add(s));
        let (g, members) = realize_lag_graph(&tape, n, p)?;
        counts[graph_code(&g) as usize] += 1;
        let gv = GraphView::from_multigraph(&g);
        if greedy_mis(&gv) != members {
            greedy_mismatches += 1;
        }
        if !is_mis(&gv, &members) {
            invalid_mis += 1;
        }
    }
    let mut statistic = 0.0;
    for (code, &obs) in counts.iter().enumerate() {
        let m = (code as u64).count_ones() as i32;
        let expected = trials as f64 * p.powi(m) * (1.0 - p).powi(pairs as i32 - m);
        if expected > 0.0 {
            let d = obs as f64 - expected;
            statistic += d * d / expected;
        } else if obs > 0 {
            statistic = f64::INFINITY;
        }
    }
    let df = cells as u64 - 1;
    let dist = ChiSquared::new(df as f64).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let p_value = if statistic.is_finite() { dist.sf(statistic) } else { 0.0 };
    Ok(Chi2Report {
        trials,
        counts,
        statistic,
        df,
        p_value,
        greedy_mismatches,
        invalid_mis,
    })
}
