//! Exact hafnian computation.
//!
//! The hafnian of a symmetric 2n×2n matrix sums, over all perfect matchings
//! of the index set, the product of the matched entries; for a 0/1 adjacency
//! matrix it counts perfect matchings of the graph. Two routes are provided:
//!
//! - [`hafnian_naive`]: the (2n)!-term permutation sum, capped at dimension
//!   8. Deliberately literal; it exists as an independent oracle for the
//!   fast route.
//! - [`hafnian`]: first-index matching expansion with (2n-1)!! terms, capped
//!   at dimension 20.
//!
//! Both ignore diagonal entries, accept any symmetric real matrix (negative
//! entries included), return 1 for the empty matrix and 0 for odd dimension.

use itertools::Itertools;

use crate::error::Error;
use crate::graph::{Graph, Subset};
use crate::Result;

/// Largest dimension accepted by [`hafnian_naive`].
pub const NAIVE_DIM_CAP: usize = 8;

/// Largest dimension accepted by [`hafnian`]: 19!! ≈ 6.5e8 products.
pub const DIM_CAP: usize = 20;

/// Dense symmetric real matrix.
///
/// Entries may be negative; graph-side nonnegativity is enforced by
/// [`Graph`](crate::graph::Graph), not here.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    /// Builds from row-major entries, checking shape, symmetry and
    /// finiteness. Symmetry is exact: text-parsed duplicates agree bitwise.
    pub fn from_flat(dim: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                got: data.len(),
            });
        }
        for i in 0..dim {
            for j in 0..dim {
                let v = data[i * dim + j];
                if !v.is_finite() {
                    return Err(Error::NonFinite { i, j });
                }
                if j > i && v != data[j * dim + i] {
                    return Err(Error::Asymmetric { i, j });
                }
            }
        }
        Ok(Self { dim, data })
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            data: vec![0.0; dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    /// Sets both (i,j) and (j,i).
    pub fn set_sym(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.dim + j] = v;
        self.data[j * self.dim + i] = v;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// Parses the matrix-CSV format: n comma-separated rows of n reals, no
    /// header. Lines are 1-indexed in errors.
    pub fn parse_csv(text: &str) -> Result<Self> {
        let mut rows: Vec<Vec<f64>> = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let row: Vec<f64> = line
                .split(',')
                .map(|tok| {
                    tok.trim().parse::<f64>().map_err(|_| Error::Parse {
                        line: lineno + 1,
                        msg: format!("not a number: {tok:?}"),
                    })
                })
                .collect::<Result<_>>()?;
            rows.push(row);
        }
        let dim = rows.len();
        for (lineno, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::Parse {
                    line: lineno + 1,
                    msg: format!("expected {dim} columns, got {}", row.len()),
                });
            }
        }
        Self::from_flat(dim, rows.into_iter().flatten().collect())
    }
}

/// Permutation-sum hafnian: (1/(2ⁿ n!)) Σ_{σ∈S_2n} Π X\[σ(2i-1)\]\[σ(2i)\].
///
/// Oracle only; errors above dimension [`NAIVE_DIM_CAP`].
pub fn hafnian_naive(m: &SymMatrix) -> Result<f64> {
    let dim = m.dim();
    if dim > NAIVE_DIM_CAP {
        return Err(Error::DimCapExceeded {
            dim,
            cap: NAIVE_DIM_CAP,
        });
    }
    if dim == 0 {
        return Ok(1.0);
    }
    if dim % 2 == 1 {
        return Ok(0.0);
    }
    let n = dim / 2;
    let mut total = 0.0;
    for perm in (0..dim).permutations(dim) {
        let mut prod = 1.0;
        for pair in perm.chunks(2) {
            prod *= m.get(pair[0], pair[1]);
        }
        total += prod;
    }
    let factorial: f64 = (1..=n).map(|i| i as f64).product();
    Ok(total / (2f64.powi(n as i32) * factorial))
}

// Expansion over the lowest active index: haf(X) = Σ_j X[i0][j] · haf(X \ {i0,j}).
// `mask` holds the active indices; summation order is ascending j, so the
// result is bit-reproducible.
fn haf_masked(data: &[f64], dim: usize, mask: u32) -> f64 {
    if mask == 0 {
        return 1.0;
    }
    let i = mask.trailing_zeros() as usize;
    let rest = mask & !(1 << i);
    let mut acc = 0.0;
    let mut remaining = rest;
    while remaining != 0 {
        let j = remaining.trailing_zeros() as usize;
        remaining &= remaining - 1;
        let w = data[i * dim + j];
        if w != 0.0 {
            acc += w * haf_masked(data, dim, rest & !(1 << j));
        }
    }
    acc
}

/// Hafnian by first-index matching expansion; errors above [`DIM_CAP`].
pub fn hafnian(m: &SymMatrix) -> Result<f64> {
    let dim = m.dim();
    if dim > DIM_CAP {
        return Err(Error::DimCapExceeded { dim, cap: DIM_CAP });
    }
    if dim == 0 {
        return Ok(1.0);
    }
    if dim % 2 == 1 {
        return Ok(0.0);
    }
    // dim <= 20 here, so the mask fits u32
    Ok(haf_masked(m.as_slice(), dim, (1u32 << dim) - 1))
}

/// Hafnian of the adjacency submatrix induced by `s`.
///
/// Odd-size subsets return 0 by convention (an odd set has no perfect
/// matching); only a dimension above [`DIM_CAP`] is an error.
pub fn hafnian_sub(g: &Graph, s: &Subset) -> Result<f64> {
    let k = s.len();
    if k > DIM_CAP {
        return Err(Error::DimCapExceeded {
            dim: k,
            cap: DIM_CAP,
        });
    }
    if k % 2 == 1 {
        return Ok(0.0);
    }
    s.check_in_range(g.n())?;
    Ok(hafnian_in_graph(g, s.vertices()))
}

/// Internal fast path: hafnian of the submatrix of `g` on `verts` (sorted,
/// even length, in range). Builds a k×k scratch copy and runs the masked
/// recursion; used by sector enumeration where per-subset overhead matters.
pub(crate) fn hafnian_in_graph(g: &Graph, verts: &[usize]) -> f64 {
    let k = verts.len();
    debug_assert!(k.is_multiple_of(2) && k <= DIM_CAP);
    if k == 0 {
        return 1.0;
    }
    let mut sub = vec![0.0; k * k];
    for (a, &i) in verts.iter().enumerate() {
        for (b, &j) in verts.iter().enumerate().skip(a + 1) {
            let w = g.weight(i, j);
            sub[a * k + b] = w;
            sub[b * k + a] = w;
        }
    }
    let mask = (1u32 << k) - 1;
    haf_masked(&sub, k, mask)
}
