//! Triple files and benchmark metrics.
//!
//! Triples are stored as UTF-8 TSV, one `row<TAB>col<TAB>value` per line.
//! Metrics are CSV with a fixed header. Every file is written to a temporary
//! sibling and renamed into place.

use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::assoc::{AssocArray, TripleList};
use crate::error::{Error, Result};
use crate::semiring::{Semiring, Value};

/// Header of every metrics CSV.
pub const METRICS_HEADER: &str =
    "batch_index,batch_nnz,cumulative_edges,batch_seconds,inst_rate,cum_rate,layer_nnz,cascades";

/// Writes through a temp file in the target directory, then renames.
pub fn write_atomic<F>(path: &Path, body: F) -> Result<()>
where
    F: FnOnce(&mut BufWriter<&mut File>) -> std::io::Result<()>,
{
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(dir, e))?;
    {
        let mut w = BufWriter::new(tmp.as_file_mut());
        body(&mut w)
            .and_then(|_| w.flush())
            .map_err(|e| Error::io(path, e))?;
    }
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}

fn check_key(key: &str) -> Result<()> {
    if key.contains(['\t', '\n', '\r']) {
        return Err(Error::Format(format!(
            "key {key:?} contains a tab or newline and cannot be written as TSV"
        )));
    }
    Ok(())
}

fn write_triple_iter<'a, I>(triples: I, path: &Path) -> Result<()>
where
    I: IntoIterator<Item = (&'a str, &'a str, Value)> + Clone,
{
    for (r, c, _) in triples.clone() {
        check_key(r)?;
        check_key(c)?;
    }
    write_atomic(path, |w| {
        for (r, c, v) in triples {
            writeln!(w, "{r}\t{c}\t{v}")?;
        }
        Ok(())
    })
}

/// Writes the stored entries of `a` in `(row, col)` order.
pub fn write_triples(a: &AssocArray, path: impl AsRef<Path>) -> Result<()> {
    write_triple_iter(a.iter(), path.as_ref())
}

/// Writes raw triples in their given order, duplicates included.
pub fn write_triple_list(t: &TripleList, path: impl AsRef<Path>) -> Result<()> {
    write_triple_iter(t.iter(), path.as_ref())
}

/// Parses a TSV triple file without building an array.
pub fn read_triple_list(path: impl AsRef<Path>) -> Result<TripleList> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut out = TripleList::new();
    for (n, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        let parse_err = |message: String| Error::Parse {
            path: path.to_path_buf(),
            line: n + 1,
            message,
        };
        let mut fields = line.split('\t');
        let (Some(r), Some(c), Some(v), None) =
            (fields.next(), fields.next(), fields.next(), fields.next())
        else {
            return Err(parse_err(format!(
                "expected 3 tab-separated fields, got {}",
                line.split('\t').count()
            )));
        };
        let v: Value = v
            .trim()
            .parse()
            .map_err(|_| parse_err(format!("value '{v}' is not a number")))?;
        if v.is_nan() {
            return Err(parse_err("value is NaN".into()));
        }
        out.push(r, c, v);
    }
    Ok(out)
}

/// Reads a triple file into an array, folding duplicate lines with `⊕`.
pub fn read_triples(path: impl AsRef<Path>, semiring: Semiring) -> Result<AssocArray> {
    let path = path.as_ref();
    let t = read_triple_list(path)?;
    for (i, &v) in t.vals.iter().enumerate() {
        semiring.validate(v).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line: i + 1,
            message: e.to_string(),
        })?;
    }
    AssocArray::construct(&t, semiring)
}

/// One batch of a benchmark run.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricsRow {
    pub batch_index: usize,
    /// Edges submitted in this batch.
    pub batch_nnz: usize,
    pub cumulative_edges: u64,
    /// Construct + update time for this batch.
    pub batch_seconds: f64,
    pub inst_rate: f64,
    pub cum_rate: f64,
    pub layer_nnz: Vec<usize>,
    pub cascades: Vec<u64>,
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(";")
}

fn render_metrics(rows: &[MetricsRow], comment: Option<&str>) -> String {
    let mut s = String::new();
    if let Some(c) = comment {
        for line in c.lines() {
            let _ = writeln!(s, "# {line}");
        }
    }
    s.push_str(METRICS_HEADER);
    s.push('\n');
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{}",
            r.batch_index,
            r.batch_nnz,
            r.cumulative_edges,
            r.batch_seconds,
            r.inst_rate,
            r.cum_rate,
            join(&r.layer_nnz),
            join(&r.cascades)
        );
    }
    s
}

/// Writes metrics as CSV, optionally preceded by `#`-prefixed comment lines.
pub fn write_metrics(
    rows: &[MetricsRow],
    path: impl AsRef<Path>,
    comment: Option<&str>,
) -> Result<()> {
    let body = render_metrics(rows, comment);
    write_atomic(path.as_ref(), |w| w.write_all(body.as_bytes()))
}

/// Reads a CSV written by [`write_metrics`], skipping comment lines.
pub fn read_metrics(path: impl AsRef<Path>) -> Result<Vec<MetricsRow>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut rows = Vec::new();
    let mut header_seen = false;
    for (n, line) in text.lines().enumerate() {
        let err = |message: String| Error::Parse {
            path: path.to_path_buf(),
            line: n + 1,
            message,
        };
        if line.starts_with('#') {
            continue;
        }
        if !header_seen {
            if line != METRICS_HEADER {
                return Err(err(format!("unexpected header '{line}'")));
            }
            header_seen = true;
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 8 {
            return Err(err(format!("expected 8 fields, got {}", f.len())));
        }
        fn num<T: std::str::FromStr>(s: &str) -> Option<T> {
            s.parse().ok()
        }
        fn list<T: std::str::FromStr>(s: &str) -> Option<Vec<T>> {
            if s.is_empty() {
                return Some(Vec::new());
            }
            s.split(';').map(num).collect()
        }
        let row = (|| {
            Some(MetricsRow {
                batch_index: num(f[0])?,
                batch_nnz: num(f[1])?,
                cumulative_edges: num(f[2])?,
                batch_seconds: num(f[3])?,
                inst_rate: num(f[4])?,
                cum_rate: num(f[5])?,
                layer_nnz: list(f[6])?,
                cascades: list(f[7])?,
            })
        })()
        .ok_or_else(|| err("unparseable field".into()))?;
        rows.push(row);
    }
    if !header_seen {
        return Err(Error::Parse {
            path: path.to_path_buf(),
            line: 0,
            message: "missing header".into(),
        });
    }
    Ok(rows)
}
