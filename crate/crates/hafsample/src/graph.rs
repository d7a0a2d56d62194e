//! Graph representation, ingestion, random generation and subset utilities.
//!
//! [`Graph`] stores a symmetric nonnegative adjacency matrix with a zero
//! diagonal; every sampler and hafnian in the crate consumes this object.
//! Graphs, [`VertexWeights`] and [`Subset`]s are immutable after
//! construction and safe to share across workers.

use std::fmt;
use std::path::Path;

use rand::Rng as _;

use crate::error::Error;
use crate::hafnian::SymMatrix;
use crate::rng::{self, StreamTag};
use crate::util::binomial;
use crate::Result;

/// Input format for [`Graph::load`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFormat {
    /// Lines `i j w` (or `i j` for weight 1); `#` comments and blank lines
    /// are ignored; vertex count is the largest index plus one.
    EdgeList,
    /// n comma-separated rows of n reals, no header.
    MatrixCsv,
}

/// A sorted set of distinct vertex indices; the collision-free outcome type.
///
/// Serializes as a plain index array.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
#[serde(transparent)]
pub struct Subset {
    vertices: Vec<usize>,
}

impl Subset {
    /// Wraps an already strictly increasing index list.
    pub fn from_sorted(vertices: Vec<usize>) -> Result<Self> {
        if !vertices.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::SubsetNotSorted);
        }
        Ok(Self { vertices })
    }

    /// Sorts the indices; duplicates are an error.
    pub fn from_unsorted(mut vertices: Vec<usize>) -> Result<Self> {
        vertices.sort_unstable();
        Self::from_sorted(vertices)
    }

    pub fn empty() -> Self {
        Self {
            vertices: Vec::new(),
        }
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    pub(crate) fn check_in_range(&self, n: usize) -> Result<()> {
        match self.vertices.last() {
            Some(&last) if last >= n => Err(Error::IndexOutOfRange { index: last, n }),
            _ => Ok(()),
        }
    }
}

/// Semicolon-joined indices, e.g. `0;2;5` — the on-disk subset syntax.
impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (pos, v) in self.vertices.iter().enumerate() {
            if pos > 0 {
                write!(f, ";")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Nonnegative per-vertex weights for the weighted-clique objective.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexWeights {
    w: Vec<f64>,
}

impl VertexWeights {
    pub fn new(w: Vec<f64>) -> Result<Self> {
        for (i, &v) in w.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFinite { i, j: i });
            }
            if v < 0.0 {
                return Err(Error::NegativeWeight { i, j: i, value: v });
            }
        }
        Ok(Self { w })
    }

    /// Uniform weight 1 everywhere.
    pub fn ones(n: usize) -> Self {
        Self { w: vec![1.0; n] }
    }

    pub fn len(&self) -> usize {
        self.w.len()
    }

    pub fn is_empty(&self) -> bool {
        self.w.is_empty()
    }

    pub fn get(&self, i: usize) -> f64 {
        self.w[i]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.w
    }

    /// Σ_{i∈s} w\[i\]; the maximum-weight-clique objective.
    pub fn clique_weight(&self, s: &Subset) -> f64 {
        s.vertices().iter().map(|&i| self.w[i]).sum()
    }

    /// Parses one real per line; `#` comments and blank lines are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut w = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let v: f64 = line.parse().map_err(|_| Error::Parse {
                line: lineno + 1,
                msg: format!("not a number: {line:?}"),
            })?;
            w.push(v);
        }
        Self::new(w)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }
}

/// Symmetric nonnegative weighted adjacency matrix with zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    n: usize,
    adj: Vec<f64>,
}

impl Graph {
    /// Builds from a row-major n×n matrix, enforcing symmetry, zero
    /// diagonal, nonnegativity and finiteness.
    pub fn from_adjacency(n: usize, adj: Vec<f64>) -> Result<Self> {
        if adj.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                got: adj.len(),
            });
        }
        for i in 0..n {
            let d = adj[i * n + i];
            if d != 0.0 {
                return Err(Error::NonzeroDiagonal { i, value: d });
            }
            for j in (i + 1)..n {
                let v = adj[i * n + j];
                if !v.is_finite() {
                    return Err(Error::NonFinite { i, j });
                }
                if v != adj[j * n + i] {
                    return Err(Error::Asymmetric { i, j });
                }
                if v < 0.0 {
                    return Err(Error::NegativeWeight { i, j, value: v });
                }
            }
        }
        Ok(Self { n, adj })
    }

    /// Builds from `(i, j, w)` triples, storing the weight on both
    /// orientations. Duplicate pairs (in either orientation) are an error.
    pub fn from_edges(n: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        let mut adj = vec![0.0; n * n];
        let mut seen = vec![false; n * n];
        for &(i, j, w) in edges {
            if i >= n || j >= n {
                return Err(Error::IndexOutOfRange { index: i.max(j), n });
            }
            if i == j {
                return Err(Error::SelfLoop { vertex: i });
            }
            let (a, b) = (i.min(j), i.max(j));
            if seen[a * n + b] {
                return Err(Error::DuplicateEdge { i: a, j: b });
            }
            seen[a * n + b] = true;
            if !w.is_finite() {
                return Err(Error::NonFinite { i, j });
            }
            if w < 0.0 {
                return Err(Error::NegativeWeight { i, j, value: w });
            }
            adj[a * n + b] = w;
            adj[b * n + a] = w;
        }
        Ok(Self { n, adj })
    }

    pub fn edgeless(n: usize) -> Self {
        Self {
            n,
            adj: vec![0.0; n * n],
        }
    }

    /// Complete graph on `n` vertices, unit weights.
    pub fn complete(n: usize) -> Self {
        let mut adj = vec![1.0; n * n];
        for i in 0..n {
            adj[i * n + i] = 0.0;
        }
        Self { n, adj }
    }

    /// Cycle 0-1-…-(n-1)-0, unit weights; `n >= 3`.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "a cycle needs at least 3 vertices");
        let edges: Vec<(usize, usize, f64)> = (0..n).map(|i| (i, (i + 1) % n, 1.0)).collect();
        Self::from_edges(n, &edges).expect("cycle edges are valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.adj[i * self.n + j]
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.weight(i, j) > 0.0
    }

    /// Positive-weight edges as `(i, j, w)` with `i < j`, ordered by `(i, j)`.
    pub fn edges(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                let w = self.weight(i, j);
                if w > 0.0 {
                    out.push((i, j, w));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n)
            .map(|i| ((i + 1)..self.n).filter(|&j| self.has_edge(i, j)).count())
            .sum()
    }

    /// Copy of the adjacency matrix as a [`SymMatrix`] for hafnian/encoding
    /// operations.
    pub fn to_sym_matrix(&self) -> SymMatrix {
        SymMatrix::from_flat(self.n, self.adj.clone())
            .expect("graph invariants imply a valid symmetric matrix")
    }

    /// Reads a graph file in the given format.
    pub fn load(path: impl AsRef<Path>, format: GraphFormat) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        match format {
            GraphFormat::EdgeList => Self::parse_edge_list(&text),
            GraphFormat::MatrixCsv => Self::parse_matrix_csv(&text),
        }
    }

    /// Parses the edge-list grammar. Vertex count is `max index + 1`.
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut edges: Vec<(usize, usize, f64)> = Vec::new();
        let mut max_index = 0usize;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != 2 && toks.len() != 3 {
                return Err(Error::Parse {
                    line: lineno + 1,
                    msg: format!("expected 'i j' or 'i j w', got {line:?}"),
                });
            }
            let parse_idx = |tok: &str| -> Result<usize> {
                tok.parse().map_err(|_| Error::Parse {
                    line: lineno + 1,
                    msg: format!("not a vertex index: {tok:?}"),
                })
            };
            let i = parse_idx(toks[0])?;
            let j = parse_idx(toks[1])?;
            let w = if toks.len() == 3 {
                toks[2].parse::<f64>().map_err(|_| Error::Parse {
                    line: lineno + 1,
                    msg: format!("not a weight: {:?}", toks[2]),
                })?
            } else {
                1.0
            };
            if i == j {
                return Err(Error::SelfLoop { vertex: i });
            }
            max_index = max_index.max(i).max(j);
            edges.push((i, j, w));
        }
        Self::from_edges(max_index + 1, &edges)
    }

    /// Parses the matrix-CSV grammar and checks the graph invariants.
    pub fn parse_matrix_csv(text: &str) -> Result<Self> {
        let m = SymMatrix::parse_csv(text)?;
        Self::from_adjacency(m.dim(), m.as_slice().to_vec())
    }

    /// Erdős–Rényi G(n, p) with unit edge weights; deterministic in `seed`.
    pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) || !p.is_finite() {
            return Err(Error::InvalidProbability { value: p });
        }
        let mut rng = rng::stream(seed, StreamTag::GraphGen, 0);
        let mut adj = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                if rng.random_bool(p) {
                    adj[i * n + j] = 1.0;
                    adj[j * n + i] = 1.0;
                }
            }
        }
        Ok(Self { n, adj })
    }

    /// Edge density of the induced subgraph: present pairs over C(|s|,2).
    /// An edge counts iff its weight is positive.
    pub fn density(&self, s: &Subset) -> Result<f64> {
        if s.len() < 2 {
            return Err(Error::SubsetTooSmall {
                need: 2,
                got: s.len(),
            });
        }
        s.check_in_range(self.n)?;
        let verts = s.vertices();
        let mut present = 0usize;
        for (a, &i) in verts.iter().enumerate() {
            for &j in &verts[a + 1..] {
                if self.has_edge(i, j) {
                    present += 1;
                }
            }
        }
        Ok(present as f64 / binomial(s.len(), 2) as f64)
    }

    /// True iff every pair in `s` is adjacent; the empty set and singletons
    /// are cliques.
    pub fn is_clique(&self, s: &Subset) -> bool {
        let verts = s.vertices();
        for (a, &i) in verts.iter().enumerate() {
            for &j in &verts[a + 1..] {
                if !self.has_edge(i, j) {
                    return false;
                }
            }
        }
        true
    }

    /// The |s|×|s| graph on the rows/columns selected by `s`, in sorted order.
    pub fn induced_subgraph(&self, s: &Subset) -> Result<Graph> {
        if s.is_empty() {
            return Err(Error::EmptySubset);
        }
        s.check_in_range(self.n)?;
        let verts = s.vertices();
        let k = verts.len();
        let mut adj = vec![0.0; k * k];
        for (a, &i) in verts.iter().enumerate() {
            for (b, &j) in verts.iter().enumerate() {
                adj[a * k + b] = self.weight(i, j);
            }
        }
        Ok(Graph { n: k, adj })
    }

    /// Reweights edges by diagonal factors Ω_ii = 1 + alpha·w_i:
    /// `adj'[i][j] = (1+αw_i)·adj[i][j]·(1+αw_j)`, diagonal kept zero.
    pub fn apply_vertex_weights(&self, w: &VertexWeights, alpha: f64) -> Result<Graph> {
        if w.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: w.len(),
            });
        }
        if alpha < 0.0 || !alpha.is_finite() {
            return Err(Error::NegativeAlpha(alpha));
        }
        let omega: Vec<f64> = w.as_slice().iter().map(|&wi| 1.0 + alpha * wi).collect();
        let mut adj = vec![0.0; self.n * self.n];
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                let v = omega[i] * self.weight(i, j) * omega[j];
                adj[i * self.n + j] = v;
                adj[j * self.n + i] = v;
            }
        }
        Ok(Graph { n: self.n, adj })
    }

    /// Whether the graph contains a matching of `size` vertex-disjoint
    /// edges. Greedy lower bound first, exact branching when inconclusive;
    /// exact search is only reached at desk scale.
    pub fn has_matching(&self, size: usize) -> bool {
        if size == 0 {
            return true;
        }
        if 2 * size > self.n {
            return false;
        }
        // greedy maximal matching
        let mut used = vec![false; self.n];
        let mut greedy = 0usize;
        for i in 0..self.n {
            if used[i] {
                continue;
            }
            for j in (i + 1)..self.n {
                if !used[j] && self.has_edge(i, j) {
                    used[i] = true;
                    used[j] = true;
                    greedy += 1;
                    break;
                }
            }
        }
        if greedy >= size {
            return true;
        }
        let mut active = vec![true; self.n];
        self.matching_branch(&mut active, size)
    }

    // Exists-a-matching branch: match the first active vertex with an active
    // neighbor, or leave it unmatched.
    fn matching_branch(&self, active: &mut Vec<bool>, need: usize) -> bool {
        if need == 0 {
            return true;
        }
        let Some(v) = active.iter().position(|&a| a) else {
            return false;
        };
        if active.iter().filter(|&&a| a).count() < 2 * need {
            return false;
        }
        active[v] = false;
        for u in (v + 1)..self.n {
            if active[u] && self.has_edge(v, u) {
                active[u] = false;
                if self.matching_branch(active, need - 1) {
                    active[u] = true;
                    active[v] = true;
                    return true;
                }
                active[u] = true;
            }
        }
        // v stays unmatched
        let ok = self.matching_branch(active, need);
        active[v] = true;
        ok
    }
}
