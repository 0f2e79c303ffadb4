//! Edge-list ingestion and the `PPRG1` binary cache.
//!
//! Edge lists are SNAP-style text: one `u v` pair per line separated by
//! whitespace, with `#` comment lines and blank lines ignored. Node ids are
//! arbitrary nonnegative integers and are renumbered densely in increasing
//! order.
//!
//! The cache layout is, all integers little-endian `u64`:
//!
//! ```text
//! b"PPRG1" | n | m | degree[0..n] | adjacency[0..m]
//! ```
//!
//! where `m` is the total adjacency length (twice the edge count for an
//! undirected graph) and `adjacency` holds each node's sorted neighbour list
//! in node order. A cache whose adjacency is symmetric decodes as undirected.

use std::fs::File;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{BuildStats, Graph, GraphBuilder};

pub const CACHE_MAGIC: &[u8; 5] = b"PPRG1";

/// An edge list as read from text, before renumbering.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RawEdgeList {
    pub edges: Vec<(u64, u64)>,
    pub comment_lines: usize,
}

#[derive(Debug, Clone)]
pub struct LoadedGraph {
    pub graph: Graph,
    pub stats: BuildStats,
}

/// Parses edge-list text. Malformed lines report their 1-based line number.
pub fn parse_edge_list<R: BufRead>(reader: R) -> Result<RawEdgeList> {
    let mut out = RawEdgeList::default();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| match e.kind() {
            std::io::ErrorKind::InvalidData => Error::Parse {
                line: line_no,
                message: "invalid UTF-8".into(),
            },
            _ => Error::Io(e),
        })?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if trimmed.starts_with('#') {
            out.comment_lines += 1;
            continue;
        }
        let mut fields = trimmed.split_whitespace();
        let mut next_id = |what: &str| -> Result<u64> {
            let tok = fields.next().ok_or_else(|| Error::Parse {
                line: line_no,
                message: format!("missing {what} node id"),
            })?;
            tok.parse::<u64>().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("invalid {what} node id {tok:?}"),
            })
        };
        let u = next_id("source")?;
        let v = next_id("target")?;
        if let Some(extra) = fields.next() {
            return Err(Error::Parse {
                line: line_no,
                message: format!("unexpected trailing field {extra:?}"),
            });
        }
        out.edges.push((u, v));
    }
    Ok(out)
}

/// Parses edge-list bytes; convenient for in-memory input.
pub fn parse_edge_list_bytes(data: &[u8]) -> Result<RawEdgeList> {
    parse_edge_list(data)
}

impl RawEdgeList {
    /// Renumbers ids densely and builds the cleaned graph.
    pub fn into_graph(self, directed: bool) -> Result<LoadedGraph> {
        let mut ids: Vec<u64> = self.edges.iter().flat_map(|&(u, v)| [u, v]).collect();
        ids.sort_unstable();
        ids.dedup();
        if ids.len() > u32::MAX as usize {
            return Err(Error::InvalidGraph("too many distinct node ids".into()));
        }
        let dense = |id: u64| ids.binary_search(&id).expect("id collected above");
        let mut b = GraphBuilder::with_original_ids(ids.clone(), directed);
        for &(u, v) in &self.edges {
            b.add_edge(dense(u), dense(v));
        }
        let (graph, stats) = b.build()?;
        Ok(LoadedGraph { graph, stats })
    }
}

pub fn load_edge_list(path: impl AsRef<Path>, directed: bool) -> Result<LoadedGraph> {
    let file = File::open(path)?;
    parse_edge_list(BufReader::new(file))?.into_graph(directed)
}

/// Writes the graph as an edge list using original node ids.
pub fn write_edge_list<W: Write>(g: &Graph, mut w: W) -> Result<()> {
    for (u, v) in g.edges() {
        writeln!(w, "{}\t{}", g.original_id(u), g.original_id(v))?;
    }
    w.flush()?;
    Ok(())
}

pub fn encode_cache(g: &Graph) -> Vec<u8> {
    let n = g.node_count();
    let m = g.arc_count();
    let mut out = Vec::with_capacity(CACHE_MAGIC.len() + 8 * (2 + n + m));
    out.extend_from_slice(CACHE_MAGIC);
    out.extend_from_slice(&(n as u64).to_le_bytes());
    out.extend_from_slice(&(m as u64).to_le_bytes());
    for i in 0..n {
        out.extend_from_slice(&(g.degree(i) as u64).to_le_bytes());
    }
    for &t in g.targets() {
        out.extend_from_slice(&u64::from(t).to_le_bytes());
    }
    out
}

/// Decodes a `PPRG1` cache, validating every graph invariant.
pub fn decode_cache(data: &[u8]) -> Result<Graph> {
    let bad = |m: &str| Error::Cache(m.to_string());
    let body = data
        .strip_prefix(CACHE_MAGIC.as_slice())
        .ok_or_else(|| bad("missing PPRG1 header"))?;
    let mut words = body.chunks_exact(8);
    if !words.remainder().is_empty() {
        return Err(bad("payload is not a whole number of u64 words"));
    }
    let mut next = || {
        words
            .next()
            .map(|w| u64::from_le_bytes(w.try_into().unwrap()))
            .ok_or_else(|| bad("truncated"))
    };
    let n = next()?;
    let m = next()?;
    let expected = n
        .checked_add(m)
        .and_then(|t| t.checked_add(2))
        .and_then(|t| t.checked_mul(8))
        .ok_or_else(|| bad("header sizes overflow"))?;
    if expected != body.len() as u64 {
        return Err(bad("length does not match header"));
    }
    if n > u32::MAX as u64 {
        return Err(bad("node count exceeds u32 range"));
    }
    let (n, m) = (n as usize, m as usize);
    let mut offsets = Vec::with_capacity(n + 1);
    offsets.push(0usize);
    for _ in 0..n {
        let d = next()? as usize;
        let end = offsets.last().unwrap().checked_add(d);
        match end {
            Some(e) if e <= m => offsets.push(e),
            _ => return Err(bad("degrees exceed adjacency length")),
        }
    }
    if offsets[n] != m {
        return Err(bad("degrees do not sum to adjacency length"));
    }
    let mut targets = Vec::with_capacity(m);
    for _ in 0..m {
        let t = next()?;
        if t >= n as u64 {
            return Err(bad("neighbour id out of range"));
        }
        targets.push(t as u32);
    }
    // Symmetric adjacency is read back as undirected.
    let directed = Graph::from_csr(offsets.clone(), targets.clone(), true)?;
    if directed.is_symmetric() {
        Graph::from_csr(offsets, targets, false)
    } else {
        Ok(directed)
    }
}

pub fn write_cache(g: &Graph, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, encode_cache(g))?;
    Ok(())
}

pub fn read_cache(path: impl AsRef<Path>) -> Result<Graph> {
    let mut data = Vec::new();
    File::open(path)?.read_to_end(&mut data)?;
    decode_cache(&data)
}
