//! Isometric flattening of real symmetric matrices and the faces of the
//! trace-one spectrahedron.
//!
//! Flattening order is upper-triangular row-major: for `i` in `0..n`, for
//! `j` in `i..n`, emit `X[i][i]` on the diagonal and `sqrt(2) * X[i][j]` off
//! it. With this scaling `<flat(U), flat(X)> = tr(U X)`.

use std::f64::consts::SQRT_2;

use crate::linalg::{self, jacobi_eigen};

pub fn flat_len(n: usize) -> usize {
    n * (n + 1) / 2
}

/// Inverse of `flat_len`, if `len` is triangular.
pub fn order_of(len: usize) -> Option<usize> {
    (1..=len).find(|n| flat_len(*n) == len)
}

pub fn flatten(m: &[Vec<f64>]) -> Vec<f64> {
    let n = m.len();
    let mut out = Vec::with_capacity(flat_len(n));
    for i in 0..n {
        for j in i..n {
            out.push(if i == j { m[i][i] } else { SQRT_2 * m[i][j] });
        }
    }
    out
}

pub fn unflatten(x: &[f64], n: usize) -> Vec<Vec<f64>> {
    let mut m = vec![vec![0.0; n]; n];
    let mut it = x.iter();
    for i in 0..n {
        for j in i..n {
            let v = *it.next().expect("flattened length matches order");
            if i == j {
                m[i][i] = v;
            } else {
                m[i][j] = v / SQRT_2;
                m[j][i] = v / SQRT_2;
            }
        }
    }
    m
}

/// Flattened `a b^T + b a^T` scaled by `w`.
fn sym_outer(a: &[f64], b: &[f64], w: f64) -> Vec<f64> {
    let n = a.len();
    let m: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| w * (a[i] * b[j] + b[i] * a[j])).collect())
        .collect();
    flatten(&m)
}

/// Images of the flattened basis of Sym(k) under `Y -> V Y V^T`, where the
/// columns of `V` are the orthonormal `vectors`. These are orthonormal in the
/// flattened Sym(n).
pub fn embedding_columns(vectors: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let k = vectors.len();
    let mut cols = Vec::with_capacity(flat_len(k));
    for a in 0..k {
        for b in a..k {
            if a == b {
                cols.push(sym_outer(&vectors[a], &vectors[a], 0.5));
            } else {
                cols.push(sym_outer(&vectors[a], &vectors[b], 1.0 / SQRT_2));
            }
        }
    }
    cols
}

/// Top eigenvalue and an orthonormal basis of its eigenspace, grouping
/// eigenvalues within `tol` (relative to `max(1, |λ_max|)`).
pub fn top_eigenspace(u: &[f64], n: usize, tol: f64) -> (f64, Vec<Vec<f64>>) {
    let eig = jacobi_eigen(&unflatten(u, n));
    let top = eig.values[0];
    let slack = tol * top.abs().max(1.0);
    let vecs = eig
        .values
        .iter()
        .zip(eig.vectors)
        .take_while(|(v, _)| top - **v <= slack)
        .map(|(_, v)| v)
        .collect();
    (top, vecs)
}

/// Orthonormal basis of the trace-zero subspace of flattened Sym(n).
pub fn trace_zero_basis(n: usize) -> Vec<Vec<f64>> {
    let len = flat_len(n);
    let mut spanning = Vec::new();
    let diag_index = |i: usize| (0..i).map(|r| n - r).sum::<usize>();
    for i in 0..n {
        for j in i + 1..n {
            let mut e = vec![0.0; len];
            e[diag_index(i) + (j - i)] = 1.0;
            spanning.push(e);
        }
    }
    for i in 0..n.saturating_sub(1) {
        let mut e = vec![0.0; len];
        e[diag_index(i)] = 1.0;
        e[diag_index(i + 1)] = -1.0;
        spanning.push(e);
    }
    linalg::orthonormal_span(&spanning, len)
}

/// Flattened `I / n`, the barycenter of the spectrahedron.
pub fn barycenter(n: usize) -> Vec<f64> {
    let m: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { 1.0 / n as f64 } else { 0.0 })
                .collect()
        })
        .collect();
    flatten(&m)
}
