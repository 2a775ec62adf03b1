//! Small dense linear algebra on `Vec<f64>` points.

use nalgebra::DMatrix;

use crate::tol;

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(a: &[f64], s: f64) -> Vec<f64> {
    a.iter().map(|x| x * s).collect()
}

pub fn axpy(acc: &mut [f64], s: f64, x: &[f64]) {
    for (a, v) in acc.iter_mut().zip(x) {
        *a += s * v;
    }
}

pub fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

pub fn unit_axis(dim: usize, k: usize) -> Vec<f64> {
    let mut e = vec![0.0; dim];
    e[k] = 1.0;
    e
}

/// Eigen-decomposition of a real symmetric matrix, eigenvalues descending.
#[derive(Clone, Debug)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    /// `vectors[k]` is the unit eigenvector for `values[k]`.
    pub vectors: Vec<Vec<f64>>,
}

/// Cyclic Jacobi rotations over row-major `a` (n×n, symmetric).
///
/// Sweeps visit pairs `(p, q)` with `p < q` in lexicographic order and stop
/// once the off-diagonal Frobenius norm falls below `tol::EIG * max(1, ‖A‖_F)`.
pub fn jacobi_eigen(a: &[Vec<f64>]) -> SymmetricEigen {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a.to_vec();
    let mut v: Vec<Vec<f64>> = (0..n).map(|i| unit_axis(n, i)).collect();
    let frob = m.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();
    let target = tol::EIG * frob.max(1.0);
    for _sweep in 0..64 {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += 2.0 * m[p][q] * m[p][q];
            }
        }
        if off.sqrt() <= target * 1e-3 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[p][q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[k][p];
                    let mkq = m[k][q];
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[p][k];
                    let mqk = m[q][k];
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
                for row in v.iter_mut() {
                    let vkp = row[p];
                    let vkq = row[q];
                    row[p] = c * vkp - s * vkq;
                    row[q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[j][j].total_cmp(&m[i][i]));
    SymmetricEigen {
        values: order.iter().map(|&i| m[i][i]).collect(),
        vectors: order
            .iter()
            .map(|&i| (0..n).map(|k| v[k][i]).collect())
            .collect(),
    }
}

/// Orthonormal basis of the span of `vectors` in R^dim (rank cutoff `tol::RANK`).
pub fn orthonormal_span(vectors: &[Vec<f64>], dim: usize) -> Vec<Vec<f64>> {
    if vectors.is_empty() || dim == 0 {
        return Vec::new();
    }
    let mat = DMatrix::from_fn(vectors.len(), dim, |i, j| vectors[i][j]);
    let svd = mat.svd(false, true);
    let vt = svd.v_t.expect("requested V^T");
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let cutoff = tol::RANK * smax.max(1.0);
    svd.singular_values
        .iter()
        .enumerate()
        .filter(|(_, s)| **s > cutoff)
        .map(|(k, _)| vt.row(k).iter().cloned().collect())
        .collect()
}

pub fn rank(vectors: &[Vec<f64>], dim: usize) -> usize {
    orthonormal_span(vectors, dim).len()
}

/// Orthonormal basis of the orthogonal complement of an orthonormal `basis`.
pub fn complement(basis: &[Vec<f64>], dim: usize) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = basis.to_vec();
    let mut extra = Vec::new();
    for k in 0..dim {
        let mut e = unit_axis(dim, k);
        for _ in 0..2 {
            for b in &out {
                let c = dot(&e, b);
                axpy(&mut e, -c, b);
            }
        }
        let n = norm(&e);
        if n > 1e-6 {
            let e = scale(&e, 1.0 / n);
            out.push(e.clone());
            extra.push(e);
        }
        if out.len() == dim {
            break;
        }
    }
    extra
}

/// A point of an affine subspace plus an orthonormal basis of its directions.
#[derive(Clone, Debug)]
pub struct AffineHull {
    pub point: Vec<f64>,
    pub basis: Vec<Vec<f64>>,
}

impl AffineHull {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient(&self) -> usize {
        self.point.len()
    }

    /// Coordinates of `x` in the hull's basis (orthogonal projection).
    pub fn coords(&self, x: &[f64]) -> Vec<f64> {
        let d = sub(x, &self.point);
        self.basis.iter().map(|b| dot(&d, b)).collect()
    }

    /// Lifts a direction expressed in hull coordinates to the ambient space.
    pub fn lift_direction(&self, w: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.ambient()];
        for (b, c) in self.basis.iter().zip(w) {
            axpy(&mut out, *c, b);
        }
        out
    }
}

pub fn affine_hull(points: &[Vec<f64>]) -> AffineHull {
    let p0 = points[0].clone();
    let dim = p0.len();
    let diffs: Vec<Vec<f64>> = points[1..].iter().map(|p| sub(p, &p0)).collect();
    AffineHull {
        basis: orthonormal_span(&diffs, dim),
        point: p0,
    }
}

pub fn affine_rank(points: &[Vec<f64>]) -> usize {
    if points.len() <= 1 {
        return 0;
    }
    affine_hull(points).dim()
}

pub fn determinant(rows: &[Vec<f64>]) -> f64 {
    let n = rows.len();
    if n == 0 {
        return 1.0;
    }
    DMatrix::from_fn(n, n, |i, j| rows[i][j]).determinant()
}

/// Normal of the hyperplane through `points` (exactly `dim` of them in R^dim),
/// via cofactors of the difference matrix. `None` when they are affinely
/// dependent.
pub fn hyperplane_through(points: &[&[f64]]) -> Option<(Vec<f64>, f64)> {
    let dim = points[0].len();
    debug_assert_eq!(points.len(), dim);
    let diffs: Vec<Vec<f64>> = points[1..].iter().map(|p| sub(p, points[0])).collect();
    let mut normal = vec![0.0; dim];
    for (col, slot) in normal.iter_mut().enumerate() {
        let minor: Vec<Vec<f64>> = diffs
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(j, _)| *j != col)
                    .map(|(_, v)| *v)
                    .collect()
            })
            .collect();
        let sign = if col % 2 == 0 { 1.0 } else { -1.0 };
        *slot = sign * determinant(&minor);
    }
    let n = norm(&normal);
    let size: f64 = diffs.iter().map(|d| norm(d)).product();
    if n <= tol::RANK * size.max(f64::MIN_POSITIVE) || n == 0.0 {
        return None;
    }
    let normal = scale(&normal, 1.0 / n);
    let offset = dot(&normal, points[0]);
    Some((normal, offset))
}
