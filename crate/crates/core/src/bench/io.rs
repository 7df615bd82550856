//! Text formats: edge lists, MatrixMarket coordinate files, label files,
//! dense score matrices and capacity lists.
//!
//! Every parser takes `&str` and reports failures as [`Error::Parse`] with a
//! 1-based line number. None of them panic on malformed input.

use crate::adjacency::SparseAdjacency;
use crate::assign::ScoreMatrix;
use crate::error::{Error, Result};

/// Largest vertex count accepted from a file header or edge list.
pub const MAX_VERTICES: usize = 1 << 26;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFormat {
    EdgeList,
    MatrixMarket,
}

impl std::str::FromStr for GraphFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "edgelist" | "edge-list" | "edges" => Ok(GraphFormat::EdgeList),
            "mtx" | "matrix-market" | "mm" => Ok(GraphFormat::MatrixMarket),
            other => Err(Error::param(format!("unknown graph format '{other}'"))),
        }
    }
}

fn is_comment(line: &str) -> bool {
    line.starts_with('#') || line.starts_with('%')
}

/// Non-empty, non-comment lines with their 1-based numbers.
fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !is_comment(l))
}

fn parse_index(tok: &str, line: usize) -> Result<usize> {
    tok.parse::<usize>().map_err(|_| {
        Error::parse(
            line,
            format!("expected a non-negative integer, found '{tok}'"),
        )
    })
}

/// Parsed graph before it is turned into an adjacency matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawGraph {
    pub n: usize,
    /// 0-based endpoints, as listed (possibly duplicated, possibly loops).
    pub edges: Vec<(usize, usize)>,
}

impl RawGraph {
    /// Symmetrized adjacency with duplicates collapsed.
    pub fn to_adjacency(&self, keep_self_loops: bool) -> Result<SparseAdjacency> {
        let edges = self
            .edges
            .iter()
            .copied()
            .filter(|&(i, j)| keep_self_loops || i != j);
        SparseAdjacency::from_edges(self.n, edges)
    }
}

/// Whitespace-separated `i j [ignored...]` pairs. Indices are 0-based if any
/// index is zero and 1-based otherwise; `n` is the largest vertex seen plus one.
pub fn parse_edge_list(text: &str) -> Result<RawGraph> {
    let mut raw = Vec::new();
    for (line, content) in data_lines(text) {
        let mut toks = content.split_whitespace();
        let (Some(a), Some(b)) = (toks.next(), toks.next()) else {
            return Err(Error::parse(line, "expected two vertex indices"));
        };
        raw.push((parse_index(a, line)?, parse_index(b, line)?));
    }
    let largest = raw.iter().map(|&(a, b)| a.max(b)).max();
    if largest.is_some_and(|m| m >= MAX_VERTICES) {
        return Err(Error::Input(format!(
            "vertex index exceeds the limit of {MAX_VERTICES}"
        )));
    }
    let zero_based = raw.iter().any(|&(a, b)| a == 0 || b == 0);
    let shift = usize::from(!zero_based);
    let n = largest.map_or(0, |m| m + 1 - shift);
    let edges = raw
        .into_iter()
        .map(|(a, b)| (a - shift, b - shift))
        .collect();
    Ok(RawGraph { n, edges })
}

/// MatrixMarket `coordinate` file with `pattern`, `integer` or `real` field
/// and `general` or `symmetric` symmetry. Entries with value zero are dropped;
/// other values are ignored.
pub fn parse_matrix_market(text: &str) -> Result<RawGraph> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "empty MatrixMarket file"))?;
    let fields: Vec<String> = header
        .split_whitespace()
        .map(str::to_ascii_lowercase)
        .collect();
    if fields.len() < 5 || fields[0] != "%%matrixmarket" || fields[1] != "matrix" {
        return Err(Error::parse(1, "missing '%%MatrixMarket matrix' header"));
    }
    if fields[2] != "coordinate" {
        return Err(Error::parse(
            1,
            format!("unsupported layout '{}'", fields[2]),
        ));
    }
    let has_value = match fields[3].as_str() {
        "pattern" => false,
        "integer" | "real" => true,
        other => return Err(Error::parse(1, format!("unsupported field '{other}'"))),
    };
    match fields[4].as_str() {
        "general" | "symmetric" => {}
        other => return Err(Error::parse(1, format!("unsupported symmetry '{other}'"))),
    }

    let mut body = lines.filter(|(_, l)| !l.is_empty() && !l.starts_with('%'));
    let (size_line, size) = body
        .next()
        .ok_or_else(|| Error::parse(1, "missing size line"))?;
    let dims: Vec<usize> = size
        .split_whitespace()
        .map(|t| parse_index(t, size_line))
        .collect::<Result<_>>()?;
    let [rows, cols, declared] = dims[..] else {
        return Err(Error::parse(
            size_line,
            "size line needs rows, columns and entry count",
        ));
    };
    if rows != cols {
        return Err(Error::parse(
            size_line,
            format!("adjacency must be square, got {rows}x{cols}"),
        ));
    }
    if rows > MAX_VERTICES {
        return Err(Error::parse(
            size_line,
            format!("{rows} vertices exceed the limit"),
        ));
    }

    let mut edges = Vec::with_capacity(declared.min(1 << 24));
    let mut seen = 0usize;
    for (line, content) in body {
        seen += 1;
        let mut toks = content.split_whitespace();
        let (Some(a), Some(b)) = (toks.next(), toks.next()) else {
            return Err(Error::parse(line, "expected row and column indices"));
        };
        let (i, j) = (parse_index(a, line)?, parse_index(b, line)?);
        if i == 0 || j == 0 || i > rows || j > rows {
            return Err(Error::parse(
                line,
                format!("entry ({i}, {j}) outside 1..={rows}"),
            ));
        }
        if has_value {
            let v = toks
                .next()
                .ok_or_else(|| Error::parse(line, "missing entry value"))?;
            let v: f64 = v
                .parse()
                .map_err(|_| Error::parse(line, format!("bad entry value '{v}'")))?;
            if v == 0.0 {
                continue;
            }
        }
        edges.push((i - 1, j - 1));
    }
    if seen != declared {
        return Err(Error::parse(
            size_line,
            format!("header declares {declared} entries, file has {seen}"),
        ));
    }
    Ok(RawGraph { n: rows, edges })
}

pub fn parse_graph(text: &str, format: GraphFormat) -> Result<RawGraph> {
    match format {
        GraphFormat::EdgeList => parse_edge_list(text),
        GraphFormat::MatrixMarket => parse_matrix_market(text),
    }
}

/// Community labels read from a file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Labels {
    /// Compacted to `0..k` in increasing order of the raw values.
    pub labels: Vec<u32>,
    pub k: usize,
    /// Raw value behind each compacted label.
    pub raw_values: Vec<i64>,
}

/// One integer label per line. Raw values are compacted to `0..K` in sorted
/// order, so 0-based, 1-based and gapped numberings all work. A MatrixMarket
/// `array` header and its size line are skipped.
pub fn parse_labels(text: &str) -> Result<Labels> {
    let mut raw = Vec::new();
    let mut skip_size_line = text.lines().next().is_some_and(|h| {
        h.trim().to_ascii_lowercase().starts_with("%%matrixmarket") && h.contains("array")
    });
    for (line, content) in data_lines(text) {
        if skip_size_line {
            skip_size_line = false;
            continue;
        }
        let mut toks = content.split_whitespace();
        let tok = toks.next().unwrap_or_default();
        if toks.next().is_some() {
            return Err(Error::parse(line, "expected a single label per line"));
        }
        let v: i64 = tok
            .parse()
            .map_err(|_| Error::parse(line, format!("expected an integer label, found '{tok}'")))?;
        raw.push(v);
    }
    let mut values = raw.clone();
    values.sort_unstable();
    values.dedup();
    let labels = raw
        .iter()
        .map(|v| values.binary_search(v).expect("value present") as u32)
        .collect();
    Ok(Labels {
        labels,
        k: values.len(),
        raw_values: values,
    })
}

/// Dense matrix, one row per line, entries separated by whitespace or commas.
pub fn parse_score_matrix(text: &str) -> Result<ScoreMatrix> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (line, content) in data_lines(text) {
        let row = content
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| Error::parse(line, format!("bad score '{t}'")))
            })
            .collect::<Result<Vec<_>>>()?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(Error::parse(
                    line,
                    format!("row has {} entries, expected {}", row.len(), first.len()),
                ));
            }
        }
        rows.push(row);
    }
    if rows.is_empty() || rows[0].is_empty() {
        return Err(Error::parse(1, "score matrix is empty"));
    }
    ScoreMatrix::from_rows(&rows)
}

/// Comma- or whitespace-separated non-negative integers.
pub fn parse_capacities(text: &str) -> Result<Vec<usize>> {
    let caps = text
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| parse_index(t, 1))
        .collect::<Result<Vec<_>>>()?;
    if caps.is_empty() {
        return Err(Error::parse(1, "no capacities given"));
    }
    Ok(caps)
}

/// Inclusive arithmetic range `min:max:step`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValueRange {
    pub min: f64,
    pub max: f64,
    pub step: f64,
}

impl ValueRange {
    pub fn new(min: f64, max: f64, step: f64) -> Result<Self> {
        if !(min.is_finite() && max.is_finite() && step.is_finite()) || step <= 0.0 || max < min {
            return Err(Error::param(format!("invalid range {min}:{max}:{step}")));
        }
        if (max - min) / step > 1e6 {
            return Err(Error::param("range has more than a million points"));
        }
        Ok(ValueRange { min, max, step })
    }

    pub fn values(&self) -> Vec<f64> {
        let count = ((self.max - self.min) / self.step + 1e-9).floor() as usize + 1;
        (0..count)
            .map(|i| self.min + i as f64 * self.step)
            .collect()
    }
}

impl std::str::FromStr for ValueRange {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<f64> = s
            .split(':')
            .map(|t| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::param(format!("bad range component '{t}'")))
            })
            .collect::<Result<_>>()?;
        match parts[..] {
            [v] => ValueRange::new(v, v, 1.0),
            [min, max, step] => ValueRange::new(min, max, step),
            _ => Err(Error::param(format!("expected 'min:max:step', got '{s}'"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_edge_list() {
        let g = parse_edge_list("1 2\n2 3\n3 1\n").unwrap();
        assert_eq!(g.n, 3);
        assert_eq!(g.to_adjacency(false).unwrap().nnz(), 6);
    }

    #[test]
    fn duplicate_edges_collapse() {
        let g = parse_edge_list("# comment\n1 2\n1 2\n% other\n2 3 0.5\n").unwrap();
        assert_eq!(g.to_adjacency(false).unwrap().nnz(), 4);
    }

    #[test]
    fn zero_based_edge_list() {
        let g = parse_edge_list("0 1\n1 2\n").unwrap();
        assert_eq!(g.n, 3);
        assert_eq!(g.edges, vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn self_loops_dropped_by_default() {
        let g = parse_edge_list("1 1\n1 2\n").unwrap();
        assert_eq!(g.to_adjacency(false).unwrap().nnz(), 2);
        assert_eq!(g.to_adjacency(true).unwrap().nnz(), 3);
    }

    #[test]
    fn edge_list_errors_carry_line_numbers() {
        match parse_edge_list("1 2\n\n3 x\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_edge_list("1\n").is_err());
        assert!(parse_edge_list("-1 2\n").is_err());
    }

    #[test]
    fn matrix_market_pattern_symmetric() {
        let text =
            "%%MatrixMarket matrix coordinate pattern symmetric\n% c\n4 4 3\n2 1\n3 2\n4 3\n";
        let g = parse_matrix_market(text).unwrap();
        assert_eq!(g.n, 4);
        let a = g.to_adjacency(false).unwrap();
        assert_eq!(a.nnz(), 6);
        assert!(a.contains(0, 1) && a.contains(1, 0));
    }

    #[test]
    fn matrix_market_values_and_errors() {
        let text = "%%MatrixMarket matrix coordinate real general\n3 3 2\n1 2 1.0\n2 3 0\n";
        assert_eq!(parse_matrix_market(text).unwrap().edges, vec![(0, 1)]);
        assert!(parse_matrix_market("%%MatrixMarket matrix array real general\n2 2\n").is_err());
        assert!(
            parse_matrix_market("%%MatrixMarket matrix coordinate pattern general\n2 3 0\n")
                .is_err()
        );
        assert!(parse_matrix_market(
            "%%MatrixMarket matrix coordinate pattern general\n2 2 2\n1 2\n"
        )
        .is_err());
        assert!(parse_matrix_market(
            "%%MatrixMarket matrix coordinate pattern general\n2 2 1\n3 1\n"
        )
        .is_err());
        assert!(parse_matrix_market("").is_err());
    }

    #[test]
    fn labels_are_compacted() {
        let l = parse_labels("1\n2\n2\n3\n").unwrap();
        assert_eq!(l.labels, vec![0, 1, 1, 2]);
        assert_eq!(l.k, 3);
        let l = parse_labels("0\n1\n# c\n0\n").unwrap();
        assert_eq!(l.labels, vec![0, 1, 0]);
        let l =
            parse_labels("%%MatrixMarket matrix array integer general\n3 1\n1\n2\n1\n").unwrap();
        assert_eq!(l.labels, vec![0, 1, 0]);
        assert!(parse_labels("1 2\n").is_err());
        assert!(parse_labels("a\n").is_err());
    }

    #[test]
    fn score_matrix_formats() {
        let c = parse_score_matrix("5 0\n4,0\n0, 3\n1 0\n").unwrap();
        assert_eq!((c.n(), c.k()), (4, 2));
        assert!(parse_score_matrix("1 2\n3\n").is_err());
        assert!(parse_score_matrix("1 nan\n").is_err());
        assert!(parse_score_matrix("").is_err());
    }

    #[test]
    fn capacities_and_ranges() {
        assert_eq!(parse_capacities("2,2 3").unwrap(), vec![2, 2, 3]);
        assert!(parse_capacities("").is_err());
        assert!(parse_capacities("1,-1").is_err());
        let r: ValueRange = "0:30:2.5".parse().unwrap();
        assert_eq!(r.values().len(), 13);
        assert_eq!(*r.values().last().unwrap(), 30.0);
        let r: ValueRange = "0:10:0.4".parse().unwrap();
        assert_eq!(r.values().len(), 26);
        assert!("1:0:1".parse::<ValueRange>().is_err());
        assert!("0:1:0".parse::<ValueRange>().is_err());
        assert_eq!("4".parse::<ValueRange>().unwrap().values(), vec![4.0]);
    }
}
