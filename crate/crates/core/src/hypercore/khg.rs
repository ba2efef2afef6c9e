//! The `.khg` text format: a header line `khg 1 <k> <n> <m>` followed by
//! `m` edges, one per line, as ascending vertex ids. Lines starting with `#`
//! are comments. Edges must appear in lexicographic order.

use super::{Hypergraph, Vertex};
use crate::error::{Error, Result};
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

pub fn write<W: Write>(h: &Hypergraph, mut w: W) -> Result<()> {
    writeln!(w, "khg 1 {} {} {}", h.k(), h.n(), h.edge_count())?;
    for e in h.edges() {
        let line: Vec<String> = e.iter().map(|v| v.to_string()).collect();
        writeln!(w, "{}", line.join(" "))?;
    }
    Ok(())
}

pub fn to_string(h: &Hypergraph) -> String {
    let mut buf = Vec::new();
    write(h, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("ascii output")
}

pub fn write_path(h: &Hypergraph, path: impl AsRef<Path>) -> Result<()> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    write(h, &mut f)?;
    f.flush()?;
    Ok(())
}

pub fn read<R: Read>(r: R) -> Result<Hypergraph> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut flat: Vec<Vertex> = Vec::new();
    let mut prev: Option<Vec<Vertex>> = None;
    let mut count = 0usize;
    for (i, line) in BufReader::new(r).lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let Some((k, n, m)) = header else {
            let f: Vec<&str> = t.split_whitespace().collect();
            if f.len() != 5 || f[0] != "khg" {
                return Err(Error::parse(lineno, "expected header `khg 1 <k> <n> <m>`"));
            }
            if f[1] != "1" {
                return Err(Error::Schema(format!("khg version {}", f[1])));
            }
            let num = |s: &str| {
                s.parse::<usize>()
                    .map_err(|_| Error::parse(lineno, format!("bad number {s:?}")))
            };
            let (k, n, m) = (num(f[2])?, num(f[3])?, num(f[4])?);
            if k == 0 {
                return Err(Error::parse(lineno, "k must be positive"));
            }
            header = Some((k, n, m));
            flat.reserve(k * m);
            continue;
        };
        let edge: Vec<Vertex> = t
            .split_whitespace()
            .map(|s| {
                s.parse::<Vertex>()
                    .map_err(|_| Error::parse(lineno, format!("bad vertex id {s:?}")))
            })
            .collect::<Result<_>>()?;
        if edge.len() != k {
            return Err(Error::parse(
                lineno,
                format!("edge has {} vertices, expected {k}", edge.len()),
            ));
        }
        if edge.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::parse(lineno, "edge ids must be strictly ascending"));
        }
        if edge[k - 1] as usize >= n {
            return Err(Error::parse(
                lineno,
                format!("vertex id out of range 0..{n}"),
            ));
        }
        if let Some(p) = &prev {
            if *p >= edge {
                return Err(Error::parse(
                    lineno,
                    "edges out of lexicographic order or duplicated",
                ));
            }
        }
        count += 1;
        if count > m {
            return Err(Error::parse(
                lineno,
                format!("more than the declared {m} edges"),
            ));
        }
        flat.extend_from_slice(&edge);
        prev = Some(edge);
    }
    let Some((k, n, m)) = header else {
        return Err(Error::parse(0, "missing header"));
    };
    if count != m {
        return Err(Error::parse(
            0,
            format!("declared {m} edges, found {count}"),
        ));
    }
    Ok(Hypergraph::from_sorted_unchecked(n, k, flat))
}

pub fn from_str(s: &str) -> Result<Hypergraph> {
    read(s.as_bytes())
}

pub fn read_path(path: impl AsRef<Path>) -> Result<Hypergraph> {
    read(std::fs::File::open(path)?)
}
