//! Graph and membership file formats.

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use leiden_core::{CsrGraph, GraphError, Symmetry};

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{0}")]
    Graph(#[from] GraphError),
}

impl LoadError {
    fn parse(line: usize, message: impl Into<String>) -> Self {
        Self::Parse {
            line,
            message: message.into(),
        }
    }

    /// Attaches a file path to bare IO errors.
    fn at(self, path: &Path) -> Self {
        match self {
            Self::Io { source, .. } => Self::Io {
                path: path.to_path_buf(),
                source,
            },
            other => other,
        }
    }
}

impl From<io::Error> for LoadError {
    fn from(source: io::Error) -> Self {
        Self::Io {
            path: PathBuf::new(),
            source,
        }
    }
}

fn open(path: &Path) -> Result<BufReader<File>, LoadError> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|source| LoadError::Io {
            path: path.to_path_buf(),
            source,
        })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Field {
    Pattern,
    Integer,
    Real,
}

/// Reads a MatrixMarket coordinate file.
pub fn load_matrix_market(path: impl AsRef<Path>) -> Result<CsrGraph, LoadError> {
    let path = path.as_ref();
    read_matrix_market(open(path)?).map_err(|e| e.at(path))
}

pub fn read_matrix_market(reader: impl BufRead) -> Result<CsrGraph, LoadError> {
    let mut lines = reader.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (field, symmetry) = match lines.next() {
        Some((no, line)) => parse_banner(no, &line?)?,
        None => {
            return Err(LoadError::parse(
                1,
                "empty file, expected a MatrixMarket header",
            ))
        }
    };

    let mut size = None;
    let mut entries = Vec::new();
    let mut expected = 0usize;
    let mut last = 1;
    for (no, line) in lines {
        last = no;
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let Some((rows, cols)) = size else {
            let rows = parse_count(no, tokens.next(), "row count")?;
            let cols = parse_count(no, tokens.next(), "column count")?;
            expected = parse_count(no, tokens.next(), "entry count")?;
            if tokens.next().is_some() {
                return Err(LoadError::parse(no, "size line has extra fields"));
            }
            size = Some((rows, cols));
            entries.reserve(expected);
            continue;
        };
        let n = rows.max(cols);
        let i = parse_index(no, tokens.next(), n)?;
        let j = parse_index(no, tokens.next(), n)?;
        let w = match field {
            Field::Pattern => 1.0,
            Field::Integer | Field::Real => {
                let tok = tokens
                    .next()
                    .ok_or_else(|| LoadError::parse(no, "missing weight"))?;
                let w: f64 = tok
                    .parse()
                    .map_err(|_| LoadError::parse(no, format!("invalid weight {tok:?}")))?;
                if field == Field::Integer && w.fract() != 0.0 {
                    return Err(LoadError::parse(
                        no,
                        format!("invalid integer weight {tok:?}"),
                    ));
                }
                check_weight(no, w)?
            }
        };
        if tokens.next().is_some() {
            return Err(LoadError::parse(no, "entry has extra fields"));
        }
        entries.push((i, j, w));
    }
    let Some((rows, cols)) = size else {
        return Err(LoadError::parse(last, "missing size line"));
    };
    if entries.len() != expected {
        return Err(LoadError::parse(
            last,
            format!(
                "header declares {expected} entries, found {}",
                entries.len()
            ),
        ));
    }
    Ok(CsrGraph::from_entries(rows.max(cols), &entries, symmetry)?)
}

fn parse_banner(no: usize, line: &str) -> Result<(Field, Symmetry), LoadError> {
    let lower = line.to_ascii_lowercase();
    let tokens: Vec<&str> = lower.split_whitespace().collect();
    if tokens.len() != 5 || tokens[0] != "%%matrixmarket" {
        return Err(LoadError::parse(
            no,
            "malformed header, expected %%MatrixMarket matrix coordinate <field> <symmetry>",
        ));
    }
    if tokens[1] != "matrix" || tokens[2] != "coordinate" {
        return Err(LoadError::parse(
            no,
            format!("unsupported format {} {}", tokens[1], tokens[2]),
        ));
    }
    let field = match tokens[3] {
        "pattern" => Field::Pattern,
        "integer" => Field::Integer,
        "real" => Field::Real,
        other => return Err(LoadError::parse(no, format!("unsupported field {other}"))),
    };
    let symmetry = match tokens[4] {
        "general" => Symmetry::General,
        "symmetric" => Symmetry::Symmetric,
        other => {
            return Err(LoadError::parse(
                no,
                format!("unsupported symmetry {other}"),
            ))
        }
    };
    Ok((field, symmetry))
}

fn parse_count(no: usize, tok: Option<&str>, what: &str) -> Result<usize, LoadError> {
    let tok = tok.ok_or_else(|| LoadError::parse(no, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| LoadError::parse(no, format!("invalid {what} {tok:?}")))
}

fn parse_index(no: usize, tok: Option<&str>, n: usize) -> Result<u32, LoadError> {
    let tok = tok.ok_or_else(|| LoadError::parse(no, "missing vertex index"))?;
    let i: u64 = tok
        .parse()
        .map_err(|_| LoadError::parse(no, format!("invalid vertex index {tok:?}")))?;
    if i == 0 || i > n as u64 {
        return Err(LoadError::parse(
            no,
            format!("vertex index out of range: {i} not in 1..={n}"),
        ));
    }
    Ok((i - 1) as u32)
}

fn check_weight(no: usize, w: f64) -> Result<f64, LoadError> {
    if !w.is_finite() {
        return Err(LoadError::parse(no, format!("non-finite weight {w}")));
    }
    if w < 0.0 {
        return Err(LoadError::parse(no, format!("negative weight {w}")));
    }
    Ok(w)
}

/// Reads an edge list: one `src dst [weight]` per line, 0-based ids, `#`
/// comments. Edges are undirected; the vertex count is one past the
/// largest id.
pub fn load_edge_list(path: impl AsRef<Path>) -> Result<CsrGraph, LoadError> {
    let path = path.as_ref();
    read_edge_list(open(path)?).map_err(|e| e.at(path))
}

pub fn read_edge_list(reader: impl BufRead) -> Result<CsrGraph, LoadError> {
    let mut entries = Vec::new();
    let mut n = 0usize;
    for (i, line) in reader.lines().enumerate() {
        let no = i + 1;
        let line = line?;
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = body.split_whitespace().collect();
        if !(2..=3).contains(&tokens.len()) {
            return Err(LoadError::parse(no, "expected `src dst [weight]`"));
        }
        let id = |tok: &str| -> Result<u32, LoadError> {
            tok.parse::<u32>()
                .ok()
                .filter(|&v| v < u32::MAX)
                .ok_or_else(|| LoadError::parse(no, format!("invalid vertex id {tok:?}")))
        };
        let (u, v) = (id(tokens[0])?, id(tokens[1])?);
        let w = match tokens.get(2) {
            Some(tok) => check_weight(
                no,
                tok.parse()
                    .map_err(|_| LoadError::parse(no, format!("invalid weight {tok:?}")))?,
            )?,
            None => 1.0,
        };
        n = n.max(u.max(v) as usize + 1);
        entries.push((u, v, w));
    }
    Ok(CsrGraph::from_entries(n, &entries, Symmetry::Symmetric)?)
}

/// Picks the reader from the extension: `.mtx` is MatrixMarket, anything
/// else an edge list.
pub fn load_graph(path: impl AsRef<Path>) -> Result<CsrGraph, LoadError> {
    let path = path.as_ref();
    match path.extension().and_then(|e| e.to_str()) {
        Some(ext) if ext.eq_ignore_ascii_case("mtx") => load_matrix_market(path),
        _ => load_edge_list(path),
    }
}

/// Writes `vertex<TAB>community` lines.
pub fn write_membership(path: impl AsRef<Path>, membership: &[u32]) -> Result<(), LoadError> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|source| LoadError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut out = BufWriter::new(file);
    write_membership_to(&mut out, membership)
        .and_then(|()| out.flush())
        .map_err(|source| LoadError::Io {
            path: path.to_path_buf(),
            source,
        })
}

pub fn write_membership_to(out: &mut impl Write, membership: &[u32]) -> io::Result<()> {
    for (v, c) in membership.iter().enumerate() {
        writeln!(out, "{v}\t{c}")?;
    }
    Ok(())
}

/// Reads a membership file. Vertices must appear exactly once each and
/// cover `0..len`.
pub fn read_membership(path: impl AsRef<Path>) -> Result<Vec<u32>, LoadError> {
    let path = path.as_ref();
    read_membership_from(open(path)?).map_err(|e| e.at(path))
}

pub fn read_membership_from(reader: impl BufRead) -> Result<Vec<u32>, LoadError> {
    let mut pairs = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let no = i + 1;
        let line = line?;
        let body = line.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let mut tokens = body.split_whitespace();
        let mut next = |what: &str| -> Result<u32, LoadError> {
            let tok = tokens
                .next()
                .ok_or_else(|| LoadError::parse(no, format!("missing {what}")))?;
            tok.parse()
                .map_err(|_| LoadError::parse(no, format!("invalid {what} {tok:?}")))
        };
        let (v, c) = (next("vertex")?, next("community")?);
        if tokens.next().is_some() {
            return Err(LoadError::parse(no, "expected `vertex<TAB>community`"));
        }
        pairs.push((no, v, c));
    }
    let len = pairs.len();
    let mut membership = vec![u32::MAX; len];
    for (no, v, c) in pairs {
        let slot = membership.get_mut(v as usize).ok_or_else(|| {
            LoadError::parse(no, format!("vertex {v} out of range for {len} lines"))
        })?;
        if *slot != u32::MAX {
            return Err(LoadError::parse(no, format!("vertex {v} listed twice")));
        }
        *slot = c;
    }
    Ok(membership)
}
