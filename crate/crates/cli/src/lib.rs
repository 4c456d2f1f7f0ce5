//! Command-line front end: argument parsing, seed iteration, CSV/JSON output
//! and `--assert` checks on top of the experiment drivers.

use std::fmt::Write as _;
use std::io::{BufRead, Write};
use std::ops::RangeInclusive;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use lca_core::edgelist::{read_edge_list, write_edge_list};
use lca_core::er_spanner::{delta_for, ScanMode};
use lca_core::er_sss::p_star;
use lca_core::experiment::*;
use lca_core::generate::{generate_er, generate_pa, generate_ua};
use lca_core::lag::{query_edge, query_mis};
use lca_core::record::CSV_HEADER;
use lca_core::verify::{
    diameter, eccentricity, is_connected, sampled_stretch, GraphView,
};
use lca_core::{RandomTape, RunRecord, VertexId};
use serde_json::{json, Value};

/// Graphs above this size get sampled eccentricities instead of an exact diameter.
const EXACT_DIAMETER_LIMIT: usize = 2000;

#[derive(Debug, Parser)]
#[command(
    name = "lca",
    version,
    about = "Local computation algorithms on random graphs: generators, spanners and a local access MIS generator",
    after_help = "All logarithms in derived parameters are natural logarithms.\n\
                  Seeds fully determine every output; identical invocations print identical bytes."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone)]
pub struct Common {
    /// Number of vertices.
    #[arg(long)]
    pub n: usize,
    /// Single seed (64-bit unsigned).
    #[arg(long, conflicts_with = "seeds", default_value_t = 0)]
    pub seed: u64,
    /// Inclusive seed range, written A..B.
    #[arg(long, value_parser = parse_seed_range)]
    pub seeds: Option<RangeInclusive<u64>>,
    /// Write output to FILE instead of standard output.
    #[arg(long, value_name = "FILE")]
    pub out: Option<std::path::PathBuf>,
    /// One JSON object per line instead of CSV.
    #[arg(long)]
    pub json: bool,
    /// Exit with status 1 if any run fails the command's checks.
    #[arg(long)]
    pub assert: bool,
    /// Fill the wall_ms column (makes output depend on the machine).
    #[arg(long)]
    pub timing: bool,
}

impl Common {
    fn seed_list(&self) -> Vec<u64> {
        match &self.seeds {
            Some(r) => r.clone().collect(),
            None => vec![self.seed],
        }
    }
}

fn parse_seed_range(s: &str) -> std::result::Result<RangeInclusive<u64>, String> {
    let (a, b) = s.split_once("..").ok_or("expected A..B")?;
    let a: u64 = a.trim().parse().map_err(|e| format!("bad start: {e}"))?;
    let b: u64 = b.trim().trim_start_matches('=').parse().map_err(|e| format!("bad end: {e}"))?;
    if a > b {
        return Err(format!("empty range {a}..{b}"));
    }
    Ok(a..=b)
}

fn parse_scan_mode(s: &str) -> std::result::Result<ScanMode, String> {
    s.parse().map_err(|e: lca_core::Error| e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Model {
    Er,
    Pa,
    Ua,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a graph and write it as an edge list.
    Gen {
        #[arg(long, value_enum)]
        model: Model,
        #[arg(long)]
        n: usize,
        /// Edge probability (er).
        #[arg(long, required_if_eq("model", "er"))]
        p: Option<f64>,
        /// Edges per arrival (pa, ua).
        #[arg(long, required_if_eq_any([("model", "pa"), ("model", "ua")]))]
        mu: Option<u32>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_name = "FILE")]
        out: Option<std::path::PathBuf>,
    },
    /// Center-based spanner on G(n, p) with n p = n^δ.
    ErSpanner {
        #[command(flatten)]
        common: Common,
        /// Edge probability; δ is derived as ln(n p) / ln(n).
        #[arg(long, conflicts_with = "delta", required_unless_present = "delta")]
        p: Option<f64>,
        #[arg(long)]
        delta: Option<f64>,
        /// sorted | nbr | exists | auto
        #[arg(long, default_value = "auto", value_parser = parse_scan_mode)]
        mode: ScanMode,
        /// Vertex pairs sampled for the stretch check.
        #[arg(long, default_value_t = 50)]
        pairs: usize,
        /// Sources whose eccentricity in H is measured.
        #[arg(long, default_value_t = 20)]
        sources: usize,
    },
    /// Sparse connected subgraph on G(n, p), p at least 7 ln(n) / n.
    ErSss {
        #[command(flatten)]
        common: Common,
        /// Edge probability; defaults to 7 ln(n) / n.
        #[arg(long)]
        p: Option<f64>,
        /// Edges answered by the local algorithm: a count or `all`.
        #[arg(long, default_value = "100")]
        queries: String,
    },
    /// Highest-degree-neighbor spanner on a preferential-attachment graph.
    PaSpanner {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        mu: u32,
        /// Edges re-answered through the probe oracle as a cross-check.
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Spanner on a uniform-attachment graph.
    UaSpanner {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        mu: u32,
        /// Keep an edge iff it is the first edge its later endpoint created.
        #[arg(long, conflicts_with = "threshold_center")]
        arrival_variant: bool,
        /// Move the degree threshold to the m-th intermediate center.
        #[arg(long, value_name = "M")]
        threshold_center: Option<u32>,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Root finding on a uniform-attachment graph.
    UaRoot {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        mu: u32,
        /// Start vertex; defaults to the last arrival.
        #[arg(long)]
        start: Option<u32>,
    },
    /// Local access to G(n, p) together with its greedy MIS.
    ///
    /// Without --realize, --trials or --queries, reads `MIS a` and `EDGE a b`
    /// lines from standard input and prints one answer (true/false) per line.
    LagMis {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        p: f64,
        /// Print the full adjacency matrix and the MIS.
        #[arg(long)]
        realize: bool,
        /// Realize the graph for this many consecutive seeds (starting at --seed).
        #[arg(long, requires = "chi2")]
        trials: Option<u64>,
        /// Chi-square test of the realized-graph histogram against G(n, p).
        #[arg(long, requires = "trials")]
        chi2: bool,
        /// Significance level for --chi2.
        #[arg(long, default_value_t = 0.001)]
        alpha: f64,
        /// Measure tape work over this many sampled queries and emit records.
        #[arg(long, conflicts_with_all = ["realize", "trials"])]
        queries: Option<usize>,
    },
    /// Check an edge list (and optionally a subgraph of it).
    Verify {
        /// Edge list of G.
        #[arg(long)]
        input: std::path::PathBuf,
        /// Edge list of a subgraph H to check for stretch.
        #[arg(long)]
        h: Option<std::path::PathBuf>,
        #[arg(long, default_value_t = 50)]
        pairs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_name = "FILE")]
        out: Option<std::path::PathBuf>,
        #[arg(long)]
        json: bool,
        /// Exit with status 1 unless the checked graph is connected.
        #[arg(long)]
        assert: bool,
    },
}

/// One emitted run: the record, extra JSON fields, a CSV-side comment and
/// the `--assert` verdict.
struct Row {
    record: RunRecord,
    extra: Vec<(&'static str, Value)>,
    note: Option<String>,
    ok: bool,
}

impl Row {
    fn plain(record: RunRecord, ok: bool) -> Row {
        Row {
            record,
            extra: Vec::new(),
            note: None,
            ok,
        }
    }
}

fn render(rows: &[Row], json_mode: bool) -> Result<String> {
    let mut s = String::new();
    if json_mode {
        for row in rows {
            let mut v = serde_json::to_value(&row.record)?;
            let obj = v.as_object_mut().expect("record serializes to an object");
            for (k, x) in &row.extra {
                obj.insert((*k).to_string(), x.clone());
            }
            writeln!(s, "{}", serde_json::to_string(&v)?)?;
        }
    } else {
        writeln!(s, "{CSV_HEADER}")?;
        for row in rows {
            writeln!(s, "{}", row.record.to_csv_row())?;
        }
    }
    Ok(s)
}

fn emit(text: &str, out: Option<&std::path::Path>, stdout: &mut dyn Write) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => stdout.write_all(text.as_bytes()).context("writing output"),
    }
}

/// Runs `f` once per seed, in seed order, then writes the rows. Returns the
/// process exit code.
fn per_seed(
    common: &Common,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
    mut f: impl FnMut(u64) -> Result<Row>,
) -> Result<i32> {
    let mut rows = Vec::new();
    for seed in common.seed_list() {
        let start = Instant::now();
        let mut row = f(seed).with_context(|| format!("seed {seed}"))?;
        if common.timing {
            row.record.wall_ms = Some(start.elapsed().as_millis() as u64);
        }
        rows.push(row);
    }
    emit(&render(&rows, common.json)?, common.out.as_deref(), stdout)?;
    if !common.json {
        for row in &rows {
            if let Some(note) = &row.note {
                writeln!(stderr, "# seed {}: {note}", row.record.seed)?;
            }
        }
    }
    let failed: Vec<u64> = rows.iter().filter(|r| !r.ok).map(|r| r.record.seed).collect();
    if common.assert && !failed.is_empty() {
        writeln!(stderr, "assertion failed for seeds {failed:?}")?;
        return Ok(1);
    }
    Ok(0)
}

fn check_probability(p: f64) -> Result<f64> {
    if !(p > 0.0 && p <= 1.0) {
        bail!("probability {p} must lie in (0, 1]");
    }
    Ok(p)
}

pub fn run(cli: Cli, stdin: &mut dyn BufRead, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    match cli.command {
        Command::Gen {
            model,
            n,
            p,
            mu,
            seed,
            out,
        } => {
            let g = match model {
                Model::Er => generate_er(n, p.expect("required by clap"), seed)?,
                Model::Pa => generate_pa(n, mu.expect("required by clap"), seed)?,
                Model::Ua => generate_ua(n, mu.expect("required by clap"), seed)?,
            };
            let mut buf = Vec::new();
            write_edge_list(&g, &mut buf)?;
            emit(std::str::from_utf8(&buf)?, out.as_deref(), stdout)?;
            Ok(0)
        }

        Command::ErSpanner {
            common,
            p,
            delta,
            mode,
            pairs,
            sources,
        } => {
            let delta = match (p, delta) {
                (Some(p), None) => delta_for(common.n, check_probability(p)?),
                (None, Some(d)) => d,
                _ => unreachable!("clap enforces exactly one of --p and --delta"),
            };
            let bound = 2.0 / delta + 5.0;
            per_seed(&common, stdout, stderr, |seed| {
                let run = run_er_spanner(&ErSpannerConfig {
                    n: common.n,
                    delta,
                    seed,
                    mode,
                    pairs,
                    sources,
                })?;
                let ok = run.record.max_stretch.map_or(true, |s| s <= bound)
                    && run.ecc_max as f64 <= bound
                    && run.stretch.disconnected_pairs == 0;
                Ok(Row {
                    extra: vec![
                        ("centers", json!(run.params.threshold)),
                        ("uncovered", json!(run.uncovered)),
                        ("disconnected_pairs", json!(run.stretch.disconnected_pairs)),
                    ],
                    note: Some(format!(
                        "centers={} uncovered={} disconnected_pairs={}",
                        run.params.threshold, run.uncovered, run.stretch.disconnected_pairs
                    )),
                    record: run.record,
                    ok,
                })
            })
        }

        Command::ErSss { common, p, queries } => {
            let p = check_probability(p.unwrap_or_else(|| p_star(common.n)))?;
            let queries = match queries.as_str() {
                "all" => None,
                k => Some(k.parse::<usize>().map_err(|_| anyhow!("--queries takes a count or `all`"))?),
            };
            per_seed(&common, stdout, stderr, |seed| {
                let run = run_er_sss(&ErSssConfig {
                    n: common.n,
                    p,
                    seed,
                    queries,
                })?;
                let c = run.census;
                Ok(Row {
                    extra: vec![
                        ("non_candidates", json!(c.non_candidates)),
                        ("candidates", json!(c.candidates)),
                        ("leaders", json!(c.leaders)),
                        ("admins", json!(c.admins)),
                        ("mismatches", json!(run.mismatches)),
                    ],
                    note: Some(format!(
                        "non_candidates={} candidates={} leaders={} admins={} mismatches={}",
                        c.non_candidates, c.candidates, c.leaders, c.admins, run.mismatches
                    )),
                    ok: run.record.connected && run.mismatches == 0,
                    record: run.record,
                })
            })
        }

        Command::PaSpanner { common, mu, samples } => per_seed(&common, stdout, stderr, |seed| {
            let run = run_pa_spanner(&AttachConfig {
                n: common.n,
                mu,
                seed,
                samples,
            })?;
            let ok = run.record.is_tree && run.mismatches == 0;
            Ok(Row {
                extra: vec![("mismatches", json!(run.mismatches))],
                note: (run.mismatches > 0).then(|| format!("mismatches={}", run.mismatches)),
                record: run.record,
                ok,
            })
        }),

        Command::UaSpanner {
            common,
            mu,
            arrival_variant,
            threshold_center,
            samples,
        } => per_seed(&common, stdout, stderr, |seed| {
            let cfg = AttachConfig {
                n: common.n,
                mu,
                seed,
                samples,
            };
            if arrival_variant {
                let run = run_ua_arrival(&cfg)?;
                let ok = run.record.is_tree;
                return Ok(Row::plain(run.record, ok));
            }
            let run = run_ua_spanner(&cfg, threshold_center)?;
            let ok = run.record.connected && run.mismatches == 0 && run.both_high_two_deg;
            Ok(Row {
                extra: vec![
                    ("threshold", json!(run.params.threshold)),
                    ("high_vertices", json!(run.high_vertices)),
                    ("mismatches", json!(run.mismatches)),
                ],
                note: Some(format!(
                    "threshold={} high_vertices={} mismatches={}",
                    run.params.threshold, run.high_vertices, run.mismatches
                )),
                record: run.record,
                ok,
            })
        }),

        Command::UaRoot { common, mu, start } => per_seed(&common, stdout, stderr, |seed| {
            let g = generate_ua(common.n, mu, seed)?;
            let start = match start {
                Some(s) => VertexId(s),
                None => g.vertex_arriving_at(common.n as u32).expect("arrival metadata"),
            };
            let run = run_ua_root(
                &AttachConfig {
                    n: common.n,
                    mu,
                    seed,
                    samples: 0,
                },
                &[start],
            )?;
            let candidates: Vec<u32> = run.finds[0].1.iter().map(|v| v.0).collect();
            let root = g.vertex_arriving_at(1).expect("arrival metadata").0;
            Ok(Row {
                extra: vec![("start", json!(start.0)), ("candidates", json!(candidates))],
                note: Some(format!(
                    "start={} candidates={}",
                    start.0,
                    candidates.iter().map(u32::to_string).collect::<Vec<_>>().join(" ")
                )),
                ok: run.hits == 1 && candidates.contains(&root),
                record: run.record,
            })
        }),

        Command::LagMis {
            common,
            p,
            realize,
            trials,
            chi2,
            alpha,
            queries,
        } => {
            let p = check_probability(p)?;
            let n = common.n;
            if chi2 {
                let trials = trials.expect("clap requires --trials with --chi2");
                let r = lag_chi2(n, p, common.seed, trials)?;
                let pass = r.passes(alpha) && r.greedy_mismatches == 0 && r.invalid_mis == 0;
                let text = if common.json {
                    format!(
                        "{}\n",
                        json!({
                            "command": "lag-mis", "n": n, "p": p, "first_seed": common.seed,
                            "trials": trials, "statistic": r.statistic, "df": r.df,
                            "p_value": r.p_value, "alpha": alpha, "pass": pass,
                            "greedy_mismatches": r.greedy_mismatches, "invalid_mis": r.invalid_mis,
                        })
                    )
                } else {
                    format!(
                        "chi2 {} statistic={:.6} df={} p_value={:.6} alpha={alpha} trials={trials} \
                         greedy_mismatches={} invalid_mis={}\n",
                        if pass { "PASS" } else { "FAIL" },
                        r.statistic,
                        r.df,
                        r.p_value,
                        r.greedy_mismatches,
                        r.invalid_mis
                    )
                };
                emit(&text, common.out.as_deref(), stdout)?;
                return Ok(if common.assert && !pass { 1 } else { 0 });
            }
            if realize {
                return realize_lag(&common, p, stdout, stderr);
            }
            if let Some(k) = queries {
                return per_seed(&common, stdout, stderr, |seed| {
                    let run = run_lag(n, p, seed, k, false)?;
                    let budget = 40.0 * (n as f64).ln() / p * run.mis.len() as f64;
                    Ok(Row {
                        extra: vec![("mis_size", json!(run.mis.len()))],
                        note: Some(format!("mis_size={}", run.mis.len())),
                        ok: run.work.max as f64 <= budget,
                        record: run.record,
                    })
                });
            }
            lag_queries(n, p, common.seed, stdin, stdout)
        }

        Command::Verify {
            input,
            h,
            pairs,
            seed,
            out,
            json,
            assert,
        } => verify_files(&input, h.as_deref(), pairs, seed, out.as_deref(), json, assert, stdout, stderr),
    }
}

fn realize_lag(common: &Common, p: f64, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    let n = common.n;
    let mut text = String::new();
    let mut failed = Vec::new();
    for seed in common.seed_list() {
        let run = run_lag(n, p, seed, 0, true)?;
        let g = run.graph.expect("realized");
        let gv = GraphView::from_multigraph(&g);
        let ok = run.matches_greedy == Some(true) && run.is_mis == Some(true);
        if !ok {
            failed.push(seed);
        }
        let matrix: Vec<Vec<u8>> = (1..=n as u32)
            .map(|a| (1..=n as u32).map(|b| gv.has_edge(a, b) as u8).collect())
            .collect();
        if common.json {
            writeln!(
                text,
                "{}",
                json!({"n": n, "p": p, "seed": seed, "adjacency": matrix, "mis": run.mis,
                       "is_mis": run.is_mis, "matches_greedy": run.matches_greedy})
            )?;
        } else {
            writeln!(text, "# seed {seed} n {n} p {p}")?;
            for row in &matrix {
                let cells: Vec<String> = row.iter().map(u8::to_string).collect();
                writeln!(text, "{}", cells.join(" "))?;
            }
            let m: Vec<String> = run.mis.iter().map(u32::to_string).collect();
            writeln!(text, "M {}", m.join(" "))?;
        }
    }
    emit(&text, common.out.as_deref(), stdout)?;
    if common.assert && !failed.is_empty() {
        writeln!(stderr, "assertion failed for seeds {failed:?}")?;
        return Ok(1);
    }
    Ok(0)
}

fn parse_vertex(tok: Option<&str>, line_no: usize) -> Result<VertexId> {
    let tok = tok.ok_or_else(|| anyhow!("line {line_no}: missing vertex"))?;
    Ok(VertexId(tok.parse().map_err(|_| anyhow!("line {line_no}: bad vertex `{tok}`"))?))
}

/// Answers `MIS a` / `EDGE a b` lines, one `true`/`false` per line.
fn lag_queries(n: usize, p: f64, seed: u64, stdin: &mut dyn BufRead, stdout: &mut dyn Write) -> Result<i32> {
    let t = RandomTape::new(seed);
    for (i, line) in stdin.lines().enumerate() {
        let line = line?;
        let mut tok = line.split_whitespace();
        let answer = match tok.next() {
            None => continue,
            Some("MIS") => query_mis(&t, n, p, parse_vertex(tok.next(), i + 1)?)?,
            Some("EDGE") => {
                let a = parse_vertex(tok.next(), i + 1)?;
                let b = parse_vertex(tok.next(), i + 1)?;
                query_edge(&t, n, p, a, b)?
            }
            Some(other) => bail!("line {}: unknown query `{other}` (expected MIS or EDGE)", i + 1),
        };
        if tok.next().is_some() {
            bail!("line {}: trailing tokens", i + 1);
        }
        writeln!(stdout, "{answer}")?;
    }
    stdout.flush()?;
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn verify_files(
    input: &std::path::Path,
    h_path: Option<&std::path::Path>,
    pairs: usize,
    seed: u64,
    out: Option<&std::path::Path>,
    json_mode: bool,
    assert: bool,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<i32> {
    let open = |p: &std::path::Path| -> Result<lca_core::MultiGraph> {
        let f = std::fs::File::open(p).with_context(|| format!("opening {}", p.display()))?;
        read_edge_list(std::io::BufReader::new(f)).with_context(|| format!("reading {}", p.display()))
    };
    let g = open(input)?;
    let gv = GraphView::from_multigraph(&g);
    let h = h_path.map(open).transpose()?;
    if let Some(h) = &h {
        if h.n() != g.n() {
            bail!("H has {} vertices, G has {}", h.n(), g.n());
        }
    }
    let target = h.as_ref().unwrap_or(&g);
    let tv = GraphView::from_multigraph(target);
    let connected = is_connected(&tv);
    let ecc = if tv.n() <= EXACT_DIAMETER_LIMIT {
        diameter(&tv)
    } else {
        let t = RandomTape::new(seed);
        let mut worst = 0;
        let mut all_reached = true;
        for i in 0..20u64 {
            let src = VertexId(
                lca_core::Tape::below(&t, lca_core::TapeKey::new(lca_core::Domain::Sample, i, 0, 1), tv.n() as u64)
                    as u32
                    + 1,
            );
            let e = eccentricity(&tv, src);
            worst = worst.max(e.reachable_max);
            all_reached &= e.unreachable == 0;
        }
        all_reached.then_some(worst)
    };
    let stretch = match &h {
        Some(_) => Some(sampled_stretch(&gv, &tv, &RandomTape::new(seed), pairs)?),
        None => None,
    };
    let record = RunRecord {
        command: "verify".into(),
        n: g.n() as u64,
        p_or_mu: match g.model() {
            lca_core::GraphModel::ErdosRenyi { p } => p,
            lca_core::GraphModel::PreferentialAttachment { mu } | lca_core::GraphModel::UniformAttachment { mu } => {
                mu as f64
            }
            lca_core::GraphModel::Explicit => 0.0,
        },
        delta: None,
        seed: g.seed().unwrap_or(seed),
        edges_g: g.edge_count() as u64,
        edges_h: target.edge_count() as u64,
        connected,
        is_tree: connected && target.edge_count() + 1 == target.n(),
        max_stretch: stretch.filter(|s| s.pairs_checked > 0).map(|s| s.max_stretch),
        ecc_bound: ecc,
        probes_max: 0,
        probes_mean: 0.0,
        wall_ms: None,
    };
    let row = Row {
        extra: stretch
            .map(|s| vec![("disconnected_pairs", json!(s.disconnected_pairs))])
            .unwrap_or_default(),
        note: None,
        ok: connected,
        record,
    };
    emit(&render(std::slice::from_ref(&row), json_mode)?, out, stdout)?;
    if assert && !row.ok {
        writeln!(stderr, "assertion failed: graph is not connected")?;
        return Ok(1);
    }
    Ok(0)
}
