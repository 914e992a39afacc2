//! Plain-text file formats.
//!
//! Hypergraph: a header line `n d`, then one hyperedge per line as `d`
//! space-separated ascending vertex ids. Graph: a header line `n`, then one
//! edge per line `i j` with `i < j`. UTF-8, LF line endings.
//!
//! Readers skip blank lines and lines starting with `#`, which is where the
//! CLI records provenance metadata.

use std::io::{BufRead, Write};

use super::graph::Graph;
use super::hypergraph::Hypergraph;
use crate::error::{Error, Result};

pub fn write_hypergraph<W: Write>(mut w: W, h: &Hypergraph) -> Result<()> {
    writeln!(w, "{} {}", h.n(), h.d())?;
    for e in h.iter() {
        let mut line = String::with_capacity(8 * e.len());
        for (k, v) in e.iter().enumerate() {
            if k > 0 {
                line.push(' ');
            }
            line.push_str(&v.to_string());
        }
        line.push('\n');
        w.write_all(line.as_bytes())?;
    }
    Ok(())
}

pub fn write_graph<W: Write>(mut w: W, g: &Graph) -> Result<()> {
    writeln!(w, "{}", g.n())?;
    for &(i, j) in g.edges() {
        writeln!(w, "{i} {j}")?;
    }
    Ok(())
}

/// Writes `# `-prefixed comment lines.
pub fn write_comments<W: Write>(mut w: W, comments: &[String]) -> Result<()> {
    for c in comments {
        for line in c.lines() {
            writeln!(w, "# {line}")?;
        }
    }
    Ok(())
}

fn content_lines<R: BufRead>(r: R) -> impl Iterator<Item = (usize, std::io::Result<String>)> {
    r.lines().enumerate().filter_map(|(idx, line)| match line {
        Ok(l) => {
            let t = l.trim();
            if t.is_empty() || t.starts_with('#') {
                None
            } else {
                Some((idx + 1, Ok(t.to_string())))
            }
        }
        Err(e) => Some((idx + 1, Err(e))),
    })
}

fn parse_fields(line_no: usize, line: &str) -> Result<Vec<u64>> {
    line.split_ascii_whitespace()
        .map(|tok| {
            tok.parse::<u64>().map_err(|e| Error::Parse {
                line: line_no,
                msg: format!("{tok:?}: {e}"),
            })
        })
        .collect()
}

fn to_vertex(line: usize, v: u64) -> Result<u32> {
    u32::try_from(v).map_err(|_| Error::Parse {
        line,
        msg: format!("vertex id {v} too large"),
    })
}

pub fn read_hypergraph<R: BufRead>(r: R) -> Result<Hypergraph> {
    let mut lines = content_lines(r);
    let (line_no, header) = lines.next().ok_or(Error::Parse {
        line: 0,
        msg: "missing header".into(),
    })?;
    let header = parse_fields(line_no, &header?)?;
    let [n, d] = header[..] else {
        return Err(Error::Parse {
            line: line_no,
            msg: "header must be `n d`".into(),
        });
    };
    let mut edges = Vec::new();
    for (line_no, line) in lines {
        let fields = parse_fields(line_no, &line?)?;
        if fields.len() as u64 != d {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("expected {d} vertices, found {}", fields.len()),
            });
        }
        if fields.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Parse {
                line: line_no,
                msg: "vertex ids must be strictly ascending".into(),
            });
        }
        let e = fields
            .into_iter()
            .map(|v| to_vertex(line_no, v))
            .collect::<Result<Vec<u32>>>()?;
        edges.push(e);
    }
    Hypergraph::new(n as usize, d as usize, edges)
}

pub fn read_graph<R: BufRead>(r: R) -> Result<Graph> {
    let mut lines = content_lines(r);
    let (line_no, header) = lines.next().ok_or(Error::Parse {
        line: 0,
        msg: "missing header".into(),
    })?;
    let header = parse_fields(line_no, &header?)?;
    let [n] = header[..] else {
        return Err(Error::Parse {
            line: line_no,
            msg: "header must be `n`".into(),
        });
    };
    let mut edges = Vec::new();
    for (line_no, line) in lines {
        let fields = parse_fields(line_no, &line?)?;
        let [i, j] = fields[..] else {
            return Err(Error::Parse {
                line: line_no,
                msg: "edge lines must be `i j`".into(),
            });
        };
        if i >= j {
            return Err(Error::Parse {
                line: line_no,
                msg: "edges must satisfy i < j".into(),
            });
        }
        edges.push((to_vertex(line_no, i)?, to_vertex(line_no, j)?));
    }
    Graph::new(n as usize, edges)
}
