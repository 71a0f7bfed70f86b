//! The graph-coloring reduction: build a configuration `F(G)` from a graph so
//! that the chromatic number of `G` can be read off the exponent,
//! `χ(G) = X(F(G)) - 2M + 1`, and check the equation at desk scale.

use std::collections::BTreeSet;
use std::fmt;

use crate::config::{ConfigError, Configuration};
use crate::xcompute::{x_of, XError};

/// Vertex guard for the exact coloring search.
pub const CHROMATIC_MAX_VERTICES: usize = 12;

/// A simple undirected graph on vertices `1..=n` with no self-loops, no
/// duplicate edges and no isolated vertices (the reduction needs every vertex
/// covered by an edge).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl Graph {
    /// Builds a graph, normalizing edge orientation. Rejects self-loops,
    /// out-of-range endpoints and isolated vertices; duplicate edges collapse
    /// silently here (the DIMACS parser counts them).
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, DimacsError> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u == v {
                return Err(DimacsError::SelfLoop { line: 0, v: u });
            }
            if u == 0 || v == 0 || u > n || v > n {
                return Err(DimacsError::VertexOutOfRange { line: 0, v: u.max(v), n });
            }
            set.insert((u.min(v), u.max(v)));
        }
        let g = Graph { n, edges: set };
        if let Some(v) = g.isolated_vertex() {
            return Err(DimacsError::IsolatedVertex { v });
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    fn isolated_vertex(&self) -> Option<usize> {
        let mut covered = vec![false; self.n + 1];
        for &(u, v) in &self.edges {
            covered[u] = true;
            covered[v] = true;
        }
        (1..=self.n).find(|&v| !covered[v])
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DimacsError {
    MissingProblemLine,
    BadLine { line: usize, content: String },
    VertexOutOfRange { line: usize, v: usize, n: usize },
    SelfLoop { line: usize, v: usize },
    IsolatedVertex { v: usize },
}

impl fmt::Display for DimacsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DimacsError::MissingProblemLine => write!(f, "missing \"p edge n m\" line"),
            DimacsError::BadLine { line, content } => write!(f, "line {line}: cannot parse {content:?}"),
            DimacsError::VertexOutOfRange { line, v, n } => {
                write!(f, "line {line}: vertex {v} out of range 1..={n}")
            }
            DimacsError::SelfLoop { line, v } => write!(f, "line {line}: self-loop at vertex {v}"),
            DimacsError::IsolatedVertex { v } => {
                write!(f, "vertex {v} is isolated; the reduction requires none")
            }
        }
    }
}

impl std::error::Error for DimacsError {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HardnessError {
    MTooSmall { m: u32, n: usize },
    VertexGuard { n: usize },
    Config(ConfigError),
    X(XError),
}

impl fmt::Display for HardnessError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HardnessError::MTooSmall { m, n } => {
                write!(f, "reduction parameter M = {m} below the required n + 2 = {}", n + 2)
            }
            HardnessError::VertexGuard { n } => {
                write!(f, "coloring search limited to {CHROMATIC_MAX_VERTICES} vertices, got {n}")
            }
            HardnessError::Config(e) => write!(f, "{e}"),
            HardnessError::X(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for HardnessError {}

impl From<ConfigError> for HardnessError {
    fn from(e: ConfigError) -> Self {
        HardnessError::Config(e)
    }
}

impl From<XError> for HardnessError {
    fn from(e: XError) -> Self {
        HardnessError::X(e)
    }
}

/// Parse outcome: the graph plus the number of duplicate edge lines collapsed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimacsParse {
    pub graph: Graph,
    pub duplicate_edges: usize,
}

/// Parses DIMACS edge format: `c` comment lines, one `p edge n m` line, then
/// `e u v` lines with 1-based endpoints.
pub fn parse_dimacs(text: &str) -> Result<DimacsParse, DimacsError> {
    let mut n: Option<usize> = None;
    let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut duplicates = 0usize;
    for (idx, raw) in text.lines().enumerate() {
        let lno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let mut tokens = line.split_whitespace();
        match tokens.next() {
            Some("p") => {
                let bad = || DimacsError::BadLine { line: lno, content: raw.to_string() };
                if tokens.next() != Some("edge") {
                    return Err(bad());
                }
                let declared_n: usize = tokens.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
                let _declared_m: usize = tokens.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
                if tokens.next().is_some() {
                    return Err(bad());
                }
                n = Some(declared_n);
            }
            Some("e") => {
                let bad = || DimacsError::BadLine { line: lno, content: raw.to_string() };
                let n = n.ok_or(DimacsError::MissingProblemLine)?;
                let u: usize = tokens.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
                let v: usize = tokens.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
                if tokens.next().is_some() {
                    return Err(bad());
                }
                if u == 0 || v == 0 || u > n || v > n {
                    return Err(DimacsError::VertexOutOfRange { line: lno, v: u.max(v), n });
                }
                if u == v {
                    return Err(DimacsError::SelfLoop { line: lno, v: u });
                }
                if !edges.insert((u.min(v), u.max(v))) {
                    duplicates += 1;
                }
            }
            _ => return Err(DimacsError::BadLine { line: lno, content: raw.to_string() }),
        }
    }
    let n = n.ok_or(DimacsError::MissingProblemLine)?;
    let graph = Graph { n, edges };
    if let Some(v) = graph.isolated_vertex() {
        return Err(DimacsError::IsolatedVertex { v });
    }
    Ok(DimacsParse { graph, duplicate_edges: duplicates })
}

/// The vertex-edge incidence matrix: one column per edge, with ones at the
/// two endpoint rows.
pub fn incidence_matrix(g: &Graph) -> Result<Configuration, ConfigError> {
    let n = g.n;
    let cols: Vec<(u32, u8)> = g
        .edges()
        .map(|(u, v)| {
            let alpha = (1u32 << (n - u)) | (1u32 << (n - v));
            (alpha, 1)
        })
        .collect();
    Configuration::from_columns(n, &cols)
}

/// The reduction configuration `F(G)` on `2M + n` rows and `e + M + 1`
/// columns: all-ones blocks over the incidence matrix on the left, and
/// `[0_M | I^c_M]` stacked over `T_M` (over zeros) on the right.
pub fn reduction_matrix(g: &Graph, m_param: u32) -> Result<Configuration, HardnessError> {
    let n = g.n;
    if (m_param as usize) < n + 2 {
        return Err(HardnessError::MTooSmall { m: m_param, n });
    }
    let big_m = m_param as usize;
    let rows = 2 * big_m + n;
    if rows > crate::config::MAX_ROWS {
        return Err(HardnessError::Config(ConfigError::TooManyRows { rows }));
    }
    let bit = |i: usize| 1u32 << (rows - 1 - i);

    let mut cols: Vec<(u32, u8)> = Vec::with_capacity(g.num_edges() + big_m + 1);
    let upper_ones: u32 = (0..2 * big_m).map(bit).sum();
    for (u, v) in g.edges() {
        cols.push((upper_ones | bit(2 * big_m + u - 1) | bit(2 * big_m + v - 1), 1));
    }
    for j in 0..=big_m {
        let mut alpha = 0u32;
        for i in 0..big_m {
            // Row i of [0_M | I^c_M]: one unless column j hits the diagonal.
            if j >= 1 && i != j - 1 {
                alpha |= bit(i);
            }
        }
        for i in 0..big_m {
            // Row i of T_M: ones in the top j rows of the tower column.
            if i < j {
                alpha |= bit(big_m + i);
            }
        }
        cols.push((alpha, 1));
    }
    let cfg = Configuration::from_columns(rows, &cols)?;
    debug_assert!(cfg.is_simple(), "reduction matrix must be simple");
    Ok(cfg)
}

/// Exact chromatic number by backtracking, with the usual symmetry break of
/// allowing at most one fresh color per step.
pub fn chromatic_number(g: &Graph) -> Result<u32, HardnessError> {
    let n = g.n;
    if n > CHROMATIC_MAX_VERTICES {
        return Err(HardnessError::VertexGuard { n });
    }
    if n == 0 {
        return Ok(0);
    }
    let mut adj = vec![0u16; n];
    for (u, v) in g.edges() {
        adj[u - 1] |= 1 << (v - 1);
        adj[v - 1] |= 1 << (u - 1);
    }
    let mut colors = vec![u32::MAX; n];
    for k in 1..=n as u32 {
        if color_from(&adj, k, 0, 0, &mut colors) {
            return Ok(k);
        }
    }
    unreachable!("n colors always suffice")
}

fn color_from(adj: &[u16], k: u32, vertex: usize, used: u32, colors: &mut [u32]) -> bool {
    if vertex == adj.len() {
        return true;
    }
    for color in 0..k.min(used + 1) {
        let conflict = (0..vertex)
            .any(|w| adj[vertex] >> w & 1 == 1 && colors[w] == color);
        if !conflict {
            colors[vertex] = color;
            if color_from(adj, k, vertex + 1, used.max(color + 1), colors) {
                return true;
            }
        }
    }
    colors[vertex] = u32::MAX;
    false
}

/// Checks the reduction equation on a concrete instance: the chromatic number
/// must equal `X(F(G)) - 2M + 1`, and a pure product of identities must
/// realize the maximum avoider. The identity shape is tested directly rather
/// than read off the reported avoider, because the top level can hold several
/// avoiding shapes (the mirrored complement shape avoids whenever the
/// configuration carries both the all-zero and all-one columns) and the
/// reported one is just the lexicographically smallest. Practical only for
/// tiny graphs.
pub fn check_reduction(g: &Graph, m_param: u32) -> Result<bool, HardnessError> {
    let chi = chromatic_number(g)? as i64;
    let f = reduction_matrix(g, m_param)?;
    let result = x_of(&f)?;
    let from_x = result.x_value as i64 - 2 * m_param as i64 + 1;
    let identity_avoider =
        crate::products::member_of_family(&f, crate::products::ProductShape::new(result.x_value, 0, 0))
            .is_none();
    Ok(chi == from_x && identity_avoider)
}
