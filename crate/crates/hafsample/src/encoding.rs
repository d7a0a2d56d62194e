//! Compiling a graph into the edge-draw sampler program, plus the
//! squeezing-side calibration quantities.
//!
//! The classical program behind the hafnian-proportional sampler is: make
//! the matrix diagonally dominant (hafnians ignore diagonals), decompose it
//! into rank-one pair blocks, and read off one two-photon circuit per
//! positive-weight edge selected with probability q ∝ A_ij. None of the
//! circuits are materialized — [`EdgeModel`] keeps only the selection
//! probabilities and the trace coefficient, which is all sampling needs.
//! [`build_h`] exists to exercise the completely-positive decomposition the
//! construction rests on.

use serde::Serialize;

use crate::error::Error;
use crate::graph::Graph;
use crate::hafnian::SymMatrix;
use crate::Result;

/// One positive-weight edge of the compiled program.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    /// Adjacency weight A_ij.
    pub weight: f64,
    /// Selection probability q = A_ij / Σ A.
    pub q: f64,
}

/// The compiled sampler program: positive-weight edges with cumulative
/// selection probabilities and the trace coefficient Tr\[D²\] = 4·Σ A_ij.
#[derive(Debug, Clone, Serialize)]
pub struct EdgeModel {
    pub edges: Vec<Edge>,
    pub trace_coeff: f64,
    /// Vertex count of the source graph.
    pub n: usize,
    #[serde(skip)]
    cumprob: Vec<f64>,
}

impl EdgeModel {
    /// Index of the edge selected by uniform draw `u ∈ [0,1)`.
    pub fn select(&self, u: f64) -> usize {
        let idx = self.cumprob.partition_point(|&c| c <= u);
        idx.min(self.edges.len() - 1)
    }

    pub fn cumprob(&self) -> &[f64] {
        &self.cumprob
    }
}

/// Copy of `m` with each diagonal entry set to its off-diagonal row sum,
/// which makes a nonnegative symmetric matrix completely positive without
/// changing any hafnian.
pub fn diagonal_dominant_fix(m: &SymMatrix) -> Result<SymMatrix> {
    let dim = m.dim();
    let mut out = m.clone();
    for i in 0..dim {
        let mut row = 0.0;
        for j in 0..dim {
            if j == i {
                continue;
            }
            let v = m.get(i, j);
            if v < 0.0 {
                return Err(Error::NegativeWeight { i, j, value: v });
            }
            row += v;
        }
        out.set_sym(i, i, row);
    }
    Ok(out)
}

/// Rectangular matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct RectMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<f64>,
}

impl RectMatrix {
    fn zero(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    fn set(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.cols + c] = v;
    }

    /// H·Hᵀ as a symmetric matrix.
    pub fn gram(&self) -> SymMatrix {
        let mut out = SymMatrix::zero(self.rows);
        for i in 0..self.rows {
            for j in i..self.rows {
                let mut acc = 0.0;
                for c in 0..self.cols {
                    acc += self.get(i, c) * self.get(j, c);
                }
                out.set_sym(i, j, acc);
            }
        }
        out
    }
}

/// The M×M² pair-block factor H with H·Hᵀ = m.
///
/// Column M·i+j (for j < i) carries √(m\[i\]\[j\]) at rows i and j; all other
/// columns, including the M·i+i family, are zero. `m` must be the output of
/// [`diagonal_dominant_fix`]: the diagonal has to equal the off-diagonal row
/// sums exactly.
pub fn build_h(m: &SymMatrix) -> Result<RectMatrix> {
    let dim = m.dim();
    for i in 0..dim {
        let mut row = 0.0;
        for j in 0..dim {
            if j != i {
                let v = m.get(i, j);
                if v < 0.0 {
                    return Err(Error::NegativeWeight { i, j, value: v });
                }
                row += v;
            }
        }
        if m.get(i, i) != row {
            return Err(Error::NonzeroDiagonal {
                i,
                value: m.get(i, i) - row,
            });
        }
    }
    let mut h = RectMatrix::zero(dim, dim * dim);
    for i in 0..dim {
        for j in 0..i {
            let w = m.get(i, j);
            if w > 0.0 {
                let col = dim * i + j;
                let root = w.sqrt();
                h.set(i, col, root);
                h.set(j, col, root);
            }
        }
    }
    Ok(h)
}

/// Compiles a graph into its [`EdgeModel`].
pub fn build_edge_model(g: &Graph) -> Result<EdgeModel> {
    let raw = g.edges();
    if raw.is_empty() {
        return Err(Error::EdgelessGraph);
    }
    let total: f64 = raw.iter().map(|&(_, _, w)| w).sum();
    let mut edges = Vec::with_capacity(raw.len());
    let mut cumprob = Vec::with_capacity(raw.len());
    let mut acc = 0.0;
    for (i, j, w) in raw {
        let q = w / total;
        acc += q;
        edges.push(Edge { i, j, weight: w, q });
        cumprob.push(acc);
    }
    Ok(EdgeModel {
        edges,
        trace_coeff: 4.0 * total,
        n: g.n(),
        cumprob,
    })
}

/// Takagi singular values of a real symmetric matrix: the absolute
/// eigenvalues, sorted nonincreasing.
pub fn takagi_singular_values(m: &SymMatrix) -> Vec<f64> {
    let dim = m.dim();
    if dim == 0 {
        return Vec::new();
    }
    let mat = nalgebra::DMatrix::from_row_slice(dim, dim, m.as_slice());
    let eig = mat.symmetric_eigen();
    let mut vals: Vec<f64> = eig.eigenvalues.iter().map(|v| v.abs()).collect();
    vals.sort_by(|a, b| b.partial_cmp(a).expect("eigenvalues are finite"));
    vals
}

/// Squeezer assignment for a target mean photon number.
#[derive(Debug, Clone, Serialize)]
pub struct SqueezeSpec {
    /// Takagi values, nonincreasing.
    pub singvals: Vec<f64>,
    /// Rescaling factor c with c·λ_max < 1.
    pub scale: f64,
    /// r_i = atanh(c·λ_i).
    pub squeezers: Vec<f64>,
    /// Σ sinh²(r_i); equals the calibration target within 1e-9.
    pub mean_photons: f64,
}

fn mean_photons_at(singvals: &[f64], c: f64) -> f64 {
    singvals
        .iter()
        .map(|&l| {
            let t = (c * l).powi(2);
            t / (1.0 - t)
        })
        .sum()
}

/// Finds the rescaling factor c ∈ (0, 1/λ_max) such that the total mean
/// photon number Σ (cλ_i)²/(1−(cλ_i)²) equals `k`, by bisection (the target
/// is strictly increasing in c, with a pole at 1/λ_max).
pub fn calibrate_scale(singvals: &[f64], k: f64) -> Result<SqueezeSpec> {
    if k <= 0.0 || !k.is_finite() {
        return Err(Error::InvalidPhotonTarget(k));
    }
    let mut vals = singvals.to_vec();
    vals.sort_by(|a, b| b.partial_cmp(a).expect("singular values are finite"));
    let lambda_max = *vals.first().ok_or(Error::ZeroSingularValues)?;
    if lambda_max <= 0.0 {
        return Err(Error::ZeroSingularValues);
    }

    let mut lo = 0.0;
    let mut hi = (1.0 - 1e-12) / lambda_max;
    let mut c = 0.5 * hi;
    for _ in 0..200 {
        c = 0.5 * (lo + hi);
        let photons = mean_photons_at(&vals, c);
        if photons < k {
            lo = c;
        } else {
            hi = c;
        }
    }
    let squeezers: Vec<f64> = vals.iter().map(|&l| (c * l).atanh()).collect();
    let mean_photons = mean_photons_at(&vals, c);
    Ok(SqueezeSpec {
        singvals: vals,
        scale: c,
        squeezers,
        mean_photons,
    })
}

/// Input squeezing needed to keep the post-loss mean photon number: r' with
/// sinh²r = η·sinh²r'. Increases as the transmission η falls; identity at
/// η = 1.
pub fn loss_compensate(r: f64, eta: f64) -> Result<f64> {
    debug_assert!(r >= 0.0, "squeezing parameter must be nonnegative");
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(Error::InvalidTransmission(eta));
    }
    Ok((r.sinh().powi(2) / eta).sqrt().asinh())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Subset;
    use crate::hafnian::{hafnian, hafnian_sub};
    use approx::assert_relative_eq;

    fn max_abs_diff(a: &SymMatrix, b: &SymMatrix) -> f64 {
        a.as_slice()
            .iter()
            .zip(b.as_slice())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    }

    #[test]
    fn diagonal_fix_examples() {
        let k2 = Graph::complete(2).to_sym_matrix();
        let fixed = diagonal_dominant_fix(&k2).unwrap();
        assert_eq!(fixed.get(0, 0), 1.0);
        assert_eq!(fixed.get(1, 1), 1.0);
        assert_eq!(fixed.get(0, 1), 1.0);

        let zero = diagonal_dominant_fix(&SymMatrix::zero(3)).unwrap();
        assert_eq!(zero, SymMatrix::zero(3));

        let k4 = diagonal_dominant_fix(&Graph::complete(4).to_sym_matrix()).unwrap();
        for i in 0..4 {
            assert_eq!(k4.get(i, i), 3.0);
        }

        let mut neg = SymMatrix::zero(2);
        neg.set_sym(0, 1, -1.0);
        assert!(diagonal_dominant_fix(&neg).is_err());
    }

    #[test]
    fn diagonal_fix_preserves_submatrix_hafnians() {
        // the fix changes diagonals of every submatrix; hafnians ignore them
        let g = Graph::erdos_renyi(8, 0.6, 5).unwrap();
        let fixed = diagonal_dominant_fix(&g.to_sym_matrix()).unwrap();
        for (subset, _) in [
            (vec![0, 1, 2, 3], ()),
            (vec![1, 4, 5, 7], ()),
            (vec![0, 1, 2, 3, 4, 5], ()),
        ] {
            let s = Subset::from_sorted(subset.clone()).unwrap();
            let k = subset.len();
            let mut sub = SymMatrix::zero(k);
            for a in 0..k {
                for b in a..k {
                    sub.set_sym(a, b, fixed.get(subset[a], subset[b]));
                }
            }
            assert_eq!(hafnian(&sub).unwrap(), hafnian_sub(&g, &s).unwrap());
        }
    }

    #[test]
    fn build_h_k2() {
        let mut m = SymMatrix::zero(2);
        m.set_sym(0, 1, 4.0);
        let fixed = diagonal_dominant_fix(&m).unwrap();
        let h = build_h(&fixed).unwrap();
        assert_eq!(h.rows, 2);
        assert_eq!(h.cols, 4);
        let nonzero: Vec<usize> = (0..4)
            .filter(|&c| (0..2).any(|r| h.get(r, c) != 0.0))
            .collect();
        assert_eq!(nonzero, vec![2]); // column 2·1+0 for pair (1,0)
        assert_eq!(h.get(0, 2), 2.0);
        assert_eq!(h.get(1, 2), 2.0);
        assert_eq!(max_abs_diff(&h.gram(), &fixed), 0.0);
    }

    #[test]
    fn build_h_edgeless_is_zero() {
        let h = build_h(&SymMatrix::zero(3)).unwrap();
        assert!((0..3).all(|r| (0..9).all(|c| h.get(r, c) == 0.0)));
    }

    #[test]
    fn build_h_requires_fixed_diagonal() {
        let m = Graph::complete(3).to_sym_matrix(); // zero diagonal, row sums 2
        assert!(build_h(&m).is_err());
    }

    #[test]
    fn build_h_reconstructs_random_graphs() {
        // 100 random ER graphs, ‖HHᵀ − fixed‖_max ≤ 1e-12
        for seed in 0..100u64 {
            let n = 3 + (seed as usize % 10); // up to 12
            let g = Graph::erdos_renyi(n, 0.5, seed).unwrap();
            let fixed = diagonal_dominant_fix(&g.to_sym_matrix()).unwrap();
            let h = build_h(&fixed).unwrap();
            assert!(max_abs_diff(&h.gram(), &fixed) <= 1e-12, "seed {seed}");
        }
    }

    #[test]
    fn edge_model_uniform_cycle() {
        let model = build_edge_model(&Graph::cycle(4)).unwrap();
        assert_eq!(model.edges.len(), 4);
        for e in &model.edges {
            assert_relative_eq!(e.q, 0.25, epsilon = 1e-15);
        }
        assert_eq!(model.trace_coeff, 16.0);
    }

    #[test]
    fn edge_model_single_and_weighted() {
        let k2 = Graph::from_edges(2, &[(0, 1, 2.0)]).unwrap();
        let model = build_edge_model(&k2).unwrap();
        assert_eq!(model.edges.len(), 1);
        assert_eq!(model.edges[0].q, 1.0);
        assert_eq!(model.trace_coeff, 8.0);

        let tri = Graph::from_edges(3, &[(0, 1, 1.0), (0, 2, 2.0), (1, 2, 3.0)]).unwrap();
        let model = build_edge_model(&tri).unwrap();
        let qs: Vec<f64> = model.edges.iter().map(|e| e.q).collect();
        assert_relative_eq!(qs[0], 1.0 / 6.0, epsilon = 1e-15);
        assert_relative_eq!(qs[1], 2.0 / 6.0, epsilon = 1e-15);
        assert_relative_eq!(qs[2], 3.0 / 6.0, epsilon = 1e-15);
        assert_eq!(model.trace_coeff, 24.0);

        assert!(matches!(
            build_edge_model(&Graph::edgeless(3)),
            Err(Error::EdgelessGraph)
        ));
    }

    #[test]
    fn edge_model_normalization_and_reconstruction() {
        let g = Graph::erdos_renyi(9, 0.4, 17).unwrap();
        let model = build_edge_model(&g).unwrap();

        let q_sum: f64 = model.edges.iter().map(|e| e.q).sum();
        assert!((q_sum - 1.0).abs() <= 1e-12);
        assert!((model.cumprob().last().unwrap() - 1.0).abs() <= 1e-12);
        assert!(model.cumprob().windows(2).all(|w| w[0] < w[1]));

        // trace_coeff·q/4 recovers A_ij; the rank-one blocks rebuild A off-diagonal
        let mut rebuilt = SymMatrix::zero(g.n());
        for e in &model.edges {
            assert_relative_eq!(model.trace_coeff * e.q / 4.0, e.weight, epsilon = 1e-12);
            let add = model.trace_coeff * e.q / 4.0;
            rebuilt.set_sym(e.i, e.j, rebuilt.get(e.i, e.j) + add);
        }
        for i in 0..g.n() {
            for j in (i + 1)..g.n() {
                assert_relative_eq!(rebuilt.get(i, j), g.weight(i, j), epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn edge_selection_by_inversion() {
        let tri = Graph::from_edges(3, &[(0, 1, 1.0), (0, 2, 2.0), (1, 2, 3.0)]).unwrap();
        let model = build_edge_model(&tri).unwrap();
        assert_eq!(model.select(0.0), 0);
        assert_eq!(model.select(1.0 / 6.0), 1);
        assert_eq!(model.select(0.49), 1);
        assert_eq!(model.select(0.51), 2);
        assert_eq!(model.select(0.999_999), 2);
    }

    #[test]
    fn takagi_values() {
        let mut id = SymMatrix::zero(3);
        for i in 0..3 {
            id.set_sym(i, i, 1.0);
        }
        assert_eq!(takagi_singular_values(&id), vec![1.0, 1.0, 1.0]);

        let mut swap = SymMatrix::zero(2);
        swap.set_sym(0, 1, 1.0);
        let vals = takagi_singular_values(&swap);
        assert_relative_eq!(vals[0], 1.0, epsilon = 1e-12);
        assert_relative_eq!(vals[1], 1.0, epsilon = 1e-12);

        // K4: eigenvalues of J−I are 3, −1, −1, −1
        let vals = takagi_singular_values(&Graph::complete(4).to_sym_matrix());
        let expect = [3.0, 1.0, 1.0, 1.0];
        for (v, e) in vals.iter().zip(expect) {
            assert_relative_eq!(*v, e, epsilon = 1e-10);
        }
    }

    #[test]
    fn calibrate_closed_forms() {
        // single mode: c²/(1−c²) = 1 ⇒ c = 1/√2
        let spec = calibrate_scale(&[1.0], 1.0).unwrap();
        assert_relative_eq!(spec.scale, std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-10);
        assert_relative_eq!(
            spec.squeezers[0],
            (std::f64::consts::FRAC_1_SQRT_2).atanh(),
            epsilon = 1e-10
        );
        assert_relative_eq!(spec.squeezers[0], 0.881_373_587_019_543, epsilon = 1e-9);

        // two equal modes, k = 2: same c by symmetry
        let spec = calibrate_scale(&[1.0, 1.0], 2.0).unwrap();
        assert_relative_eq!(spec.scale, std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-10);
    }

    #[test]
    fn calibrate_bisection_residual() {
        let spec = calibrate_scale(&[3.0, 1.0, 1.0, 1.0], 10.0).unwrap();
        assert!((spec.mean_photons - 10.0).abs() <= 1e-9);
        assert!(spec.scale * 3.0 < 1.0);
        assert!(spec.squeezers.iter().all(|r| r.is_finite()));

        assert!(matches!(
            calibrate_scale(&[0.0, 0.0], 1.0),
            Err(Error::ZeroSingularValues)
        ));
        assert!(calibrate_scale(&[], 1.0).is_err());
        assert!(calibrate_scale(&[1.0], 0.0).is_err());
    }

    #[test]
    fn loss_compensation() {
        assert_relative_eq!(loss_compensate(1.3, 1.0).unwrap(), 1.3, epsilon = 1e-12);
        assert_eq!(loss_compensate(0.0, 0.5).unwrap(), 0.0);

        // strictly increasing as transmission falls
        let r = 1.380;
        let r07 = loss_compensate(r, 0.7).unwrap();
        let r05 = loss_compensate(r, 0.5).unwrap();
        assert!(r07 > r && r05 > r07);

        // η·sinh²r' = sinh²r
        for eta in [1.0, 0.7, 0.5, 0.123] {
            let rp = loss_compensate(r, eta).unwrap();
            let lhs = eta * rp.sinh().powi(2);
            let rhs = r.sinh().powi(2);
            assert!((lhs - rhs).abs() / rhs <= 1e-12);
        }

        assert!(loss_compensate(1.0, 0.0).is_err());
        assert!(loss_compensate(1.0, 1.2).is_err());
    }
}
