//! Plain-text edge lists.
//!
//! The first line is `n m model params seed`; each following line is
//! `u v i`, the `i`-th parallel copy of `{u, v}` in generation order.
//! Vertex ids are 1-based. A missing seed or parameter is written as `-`.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::graph::{GraphModel, MultiGraph};

/// Copy index of every edge, aligned with [`MultiGraph::edges`].
fn copy_indices(edges: &[(u32, u32)]) -> Vec<u32> {
    let mut seen: HashMap<(u32, u32), u32> = HashMap::new();
    edges
        .iter()
        .map(|&(u, v)| {
            let c = seen.entry((u.min(v), u.max(v))).or_insert(0);
            *c += 1;
            *c
        })
        .collect()
}

pub fn write_edge_list(g: &MultiGraph, mut w: impl Write) -> Result<()> {
    let model = g.model();
    let seed = g.seed().map_or_else(|| "-".to_string(), |s| s.to_string());
    writeln!(
        w,
        "{} {} {} {} {}",
        g.n(),
        g.edge_count(),
        model.name(),
        model.param_string(),
        seed
    )?;
    for (&(u, v), i) in g.edges().iter().zip(copy_indices(g.edges())) {
        writeln!(w, "{u} {v} {i}")?;
    }
    Ok(())
}

pub fn edge_list_string(g: &MultiGraph) -> String {
    let mut buf = Vec::new();
    write_edge_list(g, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("ascii output")
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn field<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| parse_err(line, format!("bad {what} `{tok}`")))
}

fn parse_model(name: &str, params: &str, line: usize) -> Result<GraphModel> {
    Ok(match name {
        "er" => GraphModel::ErdosRenyi {
            p: field(Some(params), line, "p")?,
        },
        "pa" => GraphModel::PreferentialAttachment {
            mu: field(Some(params), line, "mu")?,
        },
        "ua" => GraphModel::UniformAttachment {
            mu: field(Some(params), line, "mu")?,
        },
        "explicit" => GraphModel::Explicit,
        other => return Err(parse_err(line, format!("unknown model `{other}`"))),
    })
}

pub fn read_edge_list(r: impl BufRead) -> Result<MultiGraph> {
    let mut lines = r.lines().enumerate().filter_map(|(i, l)| match l {
        Ok(s) if s.trim().is_empty() => None,
        other => Some((i + 1, other)),
    });
    let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
    let header = header?;
    let mut tok = header.split_whitespace();
    let n: usize = field(tok.next(), hl, "n")?;
    let m: usize = field(tok.next(), hl, "m")?;
    let name: String = field(tok.next(), hl, "model")?;
    let params: String = field(tok.next(), hl, "params")?;
    let seed: String = field(tok.next(), hl, "seed")?;
    if tok.next().is_some() {
        return Err(parse_err(hl, "trailing header fields"));
    }
    let model = parse_model(&name, &params, hl)?;
    let seed: Option<u64> = match seed.as_str() {
        "-" => None,
        s => Some(field(Some(s), hl, "seed")?),
    };

    let mut edges = Vec::with_capacity(m);
    let mut indices = Vec::with_capacity(m);
    for (ln, line) in lines {
        let line = line?;
        let mut tok = line.split_whitespace();
        let u: u32 = field(tok.next(), ln, "u")?;
        let v: u32 = field(tok.next(), ln, "v")?;
        let i: u32 = field(tok.next(), ln, "i")?;
        if tok.next().is_some() {
            return Err(parse_err(ln, "trailing edge fields"));
        }
        edges.push((u, v));
        indices.push((ln, i));
    }
    if edges.len() != m {
        return Err(parse_err(hl, format!("header says {m} edges, found {}", edges.len())));
    }
    for ((ln, i), expect) in indices.into_iter().zip(copy_indices(&edges)) {
        if i != expect {
            return Err(parse_err(ln, format!("copy index {i}, expected {expect}")));
        }
    }
    let g = MultiGraph::from_edges(n, edges)?;
    Ok(match seed {
        Some(s) => g.with_provenance(model, s),
        None if model == GraphModel::Explicit => g,
        None => return Err(parse_err(hl, "generated graph without a seed")),
    })
}
