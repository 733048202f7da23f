//! Text formats: edge lists, MatrixMarket coordinate files and knowledge
//! JSON.
//!
//! Edge lists hold one `u v` pair per line; `#` and `%` start comments and
//! extra columns are ignored. Vertex ids are arbitrary integers, densified
//! to `0..n` in first-seen order, unless the file carries a
//! `# vertices: N` header (as written by [`write_edge_list`]), in which
//! case ids are taken as 0-based indices below N.

use std::collections::HashMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{ReconError, Result};
use crate::graph::{pair, BinaryGraph, CommonNeighborsMatrix};
use crate::knowledge::KnowledgeSet;

pub const KNOWLEDGE_SCHEMA_VERSION: u32 = 1;

/// A parsed graph and the original id of every vertex.
#[derive(Clone, Debug, PartialEq)]
pub struct LabeledGraph {
    pub graph: BinaryGraph,
    pub labels: Vec<i64>,
}

impl LabeledGraph {
    /// Whether vertex `i` was written as `i` in the input.
    pub fn is_identity(&self) -> bool {
        self.labels.iter().enumerate().all(|(i, &l)| l == i as i64)
    }
}

/// Reads an edge list, or a MatrixMarket adjacency file when the first
/// line is a `%%MatrixMarket` banner.
pub fn parse_graph(text: &str) -> Result<LabeledGraph> {
    if text.trim_start().starts_with("%%MatrixMarket") {
        let graph = parse_graph_mtx(text)?;
        let labels = (0..graph.vertex_count() as i64).collect();
        return Ok(LabeledGraph { graph, labels });
    }
    parse_edge_list(text)
}

pub fn parse_edge_list(text: &str) -> Result<LabeledGraph> {
    let mut declared: Option<usize> = None;
    let mut ids: HashMap<i64, usize> = HashMap::new();
    let mut labels = Vec::new();
    let mut raw: Vec<(usize, i64, i64)> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = line.trim();
        if let Some(comment) = line.strip_prefix('#').or_else(|| line.strip_prefix('%')) {
            if let Some(n) = comment.trim().strip_prefix("vertices:") {
                let n = n
                    .trim()
                    .parse()
                    .map_err(|_| ReconError::parse(line_no, format!("bad vertex count {:?}", n.trim())))?;
                declared = Some(n);
            }
            continue;
        }
        if line.is_empty() {
            continue;
        }
        let mut tok = line.split_whitespace();
        let mut id = || -> Result<i64> {
            let t = tok
                .next()
                .ok_or_else(|| ReconError::parse(line_no, "expected two vertex ids"))?;
            t.parse()
                .map_err(|_| ReconError::parse(line_no, format!("vertex id {t:?} is not an integer")))
        };
        let (a, b) = (id()?, id()?);
        raw.push((line_no, a, b));
    }

    let mut edges = Vec::with_capacity(raw.len());
    for &(line_no, a, b) in &raw {
        if a == b {
            return Err(ReconError::parse(line_no, format!("self-loop on vertex {a}")));
        }
        let (u, v) = match declared {
            Some(n) => {
                let idx = |x: i64| {
                    usize::try_from(x)
                        .ok()
                        .filter(|&x| x < n)
                        .ok_or_else(|| ReconError::parse(line_no, format!("vertex {x} outside 0..{n}")))
                };
                (idx(a)?, idx(b)?)
            }
            None => {
                let mut intern = |x: i64| {
                    *ids.entry(x).or_insert_with(|| {
                        labels.push(x);
                        labels.len() - 1
                    })
                };
                (intern(a), intern(b))
            }
        };
        edges.push((line_no, pair(u, v)));
    }
    let n = match declared {
        Some(n) => {
            labels = (0..n as i64).collect();
            n
        }
        None => labels.len(),
    };
    let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
    for &(line_no, e) in &edges {
        if let Some(first) = seen.insert(e, line_no) {
            return Err(ReconError::parse(
                line_no,
                format!("duplicate edge {} {} (first on line {first})", labels[e.0], labels[e.1]),
            ));
        }
    }
    let graph = BinaryGraph::from_edges(n, edges.into_iter().map(|(_, e)| e))?;
    Ok(LabeledGraph { graph, labels })
}

pub fn write_edge_list<W: Write>(g: &BinaryGraph, mut w: W) -> Result<()> {
    writeln!(w, "# vertices: {}", g.vertex_count())?;
    writeln!(w, "# edges: {}", g.edge_count())?;
    for (u, v) in g.edges() {
        writeln!(w, "{u} {v}")?;
    }
    Ok(())
}

/// `index label` per line, for graphs whose ids were densified.
pub fn write_labels<W: Write>(labels: &[i64], mut w: W) -> Result<()> {
    writeln!(w, "# index label")?;
    for (i, l) in labels.iter().enumerate() {
        writeln!(w, "{i} {l}")?;
    }
    Ok(())
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Field {
    Integer,
    Pattern,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Symmetry {
    Symmetric,
    General,
}

struct MtxHeader {
    field: Field,
    symmetry: Symmetry,
    rows: usize,
    entries: usize,
}

/// Banner, comments and size line; leaves `lines` at the first entry.
fn parse_mtx_header<'a, I>(lines: &mut I) -> Result<MtxHeader>
where
    I: Iterator<Item = (usize, &'a str)>,
{
    let (_, banner) = lines.next().ok_or_else(|| ReconError::parse(1, "empty file"))?;
    let words: Vec<String> = banner.split_whitespace().map(str::to_ascii_lowercase).collect();
    if words.len() != 5 || words[0] != "%%matrixmarket" || words[1] != "matrix" {
        return Err(ReconError::parse(1, "expected a %%MatrixMarket matrix banner"));
    }
    if words[2] != "coordinate" {
        return Err(ReconError::parse(1, format!("unsupported format {:?}", words[2])));
    }
    let field = match words[3].as_str() {
        "integer" => Field::Integer,
        "pattern" => Field::Pattern,
        other => return Err(ReconError::parse(1, format!("unsupported field {other:?}"))),
    };
    let symmetry = match words[4].as_str() {
        "symmetric" => Symmetry::Symmetric,
        "general" => Symmetry::General,
        other => return Err(ReconError::parse(1, format!("unsupported symmetry {other:?}"))),
    };
    for (line_no, line) in lines.by_ref() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        let nums: Vec<usize> = line
            .split_whitespace()
            .map(|t| {
                t.parse()
                    .map_err(|_| ReconError::parse(line_no, format!("bad size {t:?}")))
            })
            .collect::<Result<_>>()?;
        if nums.len() != 3 {
            return Err(ReconError::parse(line_no, "size line needs rows, columns and entries"));
        }
        if nums[0] != nums[1] {
            return Err(ReconError::parse(
                line_no,
                format!("matrix is {}x{}, not square", nums[0], nums[1]),
            ));
        }
        return Ok(MtxHeader {
            field,
            symmetry,
            rows: nums[0],
            entries: nums[2],
        });
    }
    Err(ReconError::parse(1, "missing size line"))
}

/// Yields `(line, row, col, value)` with 0-based indices.
fn mtx_entries<'a, I>(lines: I, h: &MtxHeader) -> Result<Vec<(usize, usize, usize, i64)>>
where
    I: Iterator<Item = (usize, &'a str)>,
{
    let mut out = Vec::with_capacity(h.entries);
    for (line_no, line) in lines {
        let line = line.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        let tok: Vec<&str> = line.split_whitespace().collect();
        let want = if h.field == Field::Pattern { 2 } else { 3 };
        if tok.len() != want {
            return Err(ReconError::parse(
                line_no,
                format!("expected {want} columns, found {}", tok.len()),
            ));
        }
        let index = |t: &str| -> Result<usize> {
            let i: usize = t
                .parse()
                .map_err(|_| ReconError::parse(line_no, format!("bad index {t:?}")))?;
            if i == 0 || i > h.rows {
                return Err(ReconError::parse(line_no, format!("index {i} outside 1..={}", h.rows)));
            }
            Ok(i - 1)
        };
        let (r, c) = (index(tok[0])?, index(tok[1])?);
        let value = if h.field == Field::Pattern {
            1
        } else {
            tok[2]
                .parse()
                .map_err(|_| ReconError::parse(line_no, format!("value {:?} is not an integer", tok[2])))?
        };
        out.push((line_no, r, c, value));
    }
    if out.len() != h.entries {
        return Err(ReconError::parse(
            0,
            format!("size line announces {} entries, found {}", h.entries, out.len()),
        ));
    }
    Ok(out)
}

/// Reads a common-neighbors matrix; symmetric files list the lower
/// triangle, general ones must be symmetric.
pub fn read_square_mtx(text: &str) -> Result<CommonNeighborsMatrix> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let h = parse_mtx_header(&mut lines)?;
    if h.field != Field::Integer {
        return Err(ReconError::parse(
            1,
            "common-neighbors matrix must have integer entries",
        ));
    }
    let n = h.rows;
    let mut data = vec![0u32; n * n];
    let mut set = vec![false; n * n];
    for (line_no, r, c, value) in mtx_entries(lines, &h)? {
        let value =
            u32::try_from(value).map_err(|_| ReconError::parse(line_no, format!("entry {value} is not a count")))?;
        let mut put = |i: usize, j: usize| -> Result<()> {
            if set[i * n + j] {
                return Err(ReconError::parse(
                    line_no,
                    format!("entry ({}, {}) given twice", i + 1, j + 1),
                ));
            }
            set[i * n + j] = true;
            data[i * n + j] = value;
            Ok(())
        };
        put(r, c)?;
        if h.symmetry == Symmetry::Symmetric && r != c {
            put(c, r)?;
        }
    }
    CommonNeighborsMatrix::from_dense(n, data)
}

pub fn write_square_mtx<W: Write>(g2: &CommonNeighborsMatrix, mut w: W) -> Result<()> {
    let n = g2.vertex_count();
    let entries: Vec<(usize, usize, u32)> = (0..n)
        .flat_map(|c| (c..n).map(move |r| (r, c)))
        .map(|(r, c)| (r, c, g2.get(r, c)))
        .filter(|&(_, _, v)| v != 0)
        .collect();
    writeln!(w, "%%MatrixMarket matrix coordinate integer symmetric")?;
    writeln!(w, "{n} {n} {}", entries.len())?;
    for (r, c, v) in entries {
        writeln!(w, "{} {} {v}", r + 1, c + 1)?;
    }
    Ok(())
}

/// Reads an adjacency matrix in MatrixMarket form; nonzero off-diagonal
/// entries are edges.
pub fn parse_graph_mtx(text: &str) -> Result<BinaryGraph> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let h = parse_mtx_header(&mut lines)?;
    let n = h.rows;
    let mut edges = Vec::new();
    for (line_no, r, c, value) in mtx_entries(lines, &h)? {
        if value == 0 {
            continue;
        }
        if r == c {
            return Err(ReconError::parse(line_no, format!("self-loop on vertex {}", r + 1)));
        }
        edges.push(pair(r, c));
    }
    edges.sort_unstable();
    if h.symmetry == Symmetry::General {
        // both orientations of an edge are expected here
        edges.dedup();
    } else if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
        return Err(ReconError::parse(
            0,
            format!("duplicate edge {} {}", w[0].0 + 1, w[0].1 + 1),
        ));
    }
    BinaryGraph::from_edges(n, edges)
}

pub fn write_graph_mtx<W: Write>(g: &BinaryGraph, mut w: W) -> Result<()> {
    let n = g.vertex_count();
    writeln!(w, "%%MatrixMarket matrix coordinate pattern symmetric")?;
    writeln!(w, "{n} {n} {}", g.edge_count())?;
    for (u, v) in g.edges() {
        writeln!(w, "{} {}", v + 1, u + 1)?;
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct KnowledgeDocument {
    schema_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    vertices: Option<usize>,
    #[serde(flatten)]
    knowledge: KnowledgeSet,
}

pub fn write_knowledge<W: Write>(k: &KnowledgeSet, vertices: usize, w: W) -> Result<()> {
    let doc = KnowledgeDocument {
        schema_version: KNOWLEDGE_SCHEMA_VERSION,
        vertices: Some(vertices),
        knowledge: k.clone(),
    };
    serde_json::to_writer_pretty(w, &doc)?;
    Ok(())
}

/// Parses and validates knowledge for a graph on `n` vertices.
pub fn read_knowledge(text: &str, n: usize) -> Result<KnowledgeSet> {
    let doc: KnowledgeDocument = serde_json::from_str(text)?;
    if doc.schema_version != KNOWLEDGE_SCHEMA_VERSION {
        return Err(ReconError::InvalidParameter(format!(
            "knowledge schema_version {} unsupported",
            doc.schema_version
        )));
    }
    if let Some(v) = doc.vertices {
        crate::tristate::check_same_n(n, v)?;
    }
    let mut k = KnowledgeSet::new(
        doc.knowledge.known_edges().iter().copied(),
        doc.knowledge.known_non_edges().iter().copied(),
    )?;
    k.validate(n)?;
    k.rho = doc.knowledge.rho;
    k.seed = doc.knowledge.seed;
    Ok(k)
}
