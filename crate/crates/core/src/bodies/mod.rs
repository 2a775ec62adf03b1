//! Compact convex bodies built from balls, V-polytopes, zero-padding
//! embeddings, Minkowski sums and the trace-one spectrahedron.
//!
//! Every body answers three questions: its support function, the argmax set
//! of a linear functional (returned as another body of the same algebra), and
//! the dimension of its affine hull.

mod doc;
pub mod spectral;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::linalg::{self, AffineHull};
use crate::oracle;
use crate::rng::CounterRng;
use crate::tol;

pub use doc::BodyDoc;

/// A compact convex set.
///
/// Build values through the checked constructors ([`ConvexBody::ball`],
/// [`ConvexBody::vpolytope`], ...) or by parsing JSON; both enforce the
/// dimension and deduplication invariants.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BodyDoc", into = "BodyDoc")]
pub enum ConvexBody {
    Ball {
        dim: usize,
        center: Vec<f64>,
        radius: f64,
    },
    VPolytope {
        vertices: Vec<Vec<f64>>,
    },
    /// `inner` padded with trailing zero coordinates up to `dim`.
    Embed {
        inner: Box<ConvexBody>,
        dim: usize,
    },
    Sum {
        left: Box<ConvexBody>,
        right: Box<ConvexBody>,
    },
    /// `{X symmetric n×n : X ⪰ 0, tr X = 1}` in flattened coordinates.
    Spectrahedron {
        n: usize,
    },
    /// A face of a spectrahedron: `Spectrahedron(k)` mapped isometrically
    /// onto a top eigenspace. Only produced by [`ConvexBody::exposed_face`].
    SpectralFace(SpectralFace),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralFace {
    k: usize,
    /// Images of the flattened Sym(k) basis; orthonormal.
    columns: Vec<Vec<f64>>,
}

impl SpectralFace {
    pub fn order(&self) -> usize {
        self.k
    }

    pub fn columns(&self) -> &[Vec<f64>] {
        &self.columns
    }

    fn map(&self, y: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.columns[0].len()];
        for (c, v) in self.columns.iter().zip(y) {
            linalg::axpy(&mut out, *v, c);
        }
        out
    }

    fn pull_back(&self, u: &[f64]) -> Vec<f64> {
        self.columns.iter().map(|c| linalg::dot(c, u)).collect()
    }
}

/// A linear functional used to expose faces. Need not be unit length.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Direction(pub Vec<f64>);

impl Direction {
    pub fn new(v: impl Into<Vec<f64>>) -> Self {
        Self(v.into())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// Unit vector along this direction; rejects the zero functional.
    pub fn normalized(&self) -> Result<Vec<f64>> {
        let n = linalg::norm(&self.0);
        if !(n > 0.0) || !n.is_finite() {
            return invalid("zero or non-finite direction");
        }
        Ok(linalg::scale(&self.0, 1.0 / n))
    }
}

impl From<Vec<f64>> for Direction {
    fn from(v: Vec<f64>) -> Self {
        Self(v)
    }
}

/// Projected directions shorter than this expose the whole body.
const FLAT_FUNCTIONAL: f64 = tol::FACE;

/// Probe directions for non-polytopal membership tests.
pub const MEMBERSHIP_GRID: usize = 1024;
const MEMBERSHIP_SEED: u64 = 0x6d656d62;

impl ConvexBody {
    pub fn ball(dim: usize, center: Vec<f64>, radius: f64) -> Result<Self> {
        if dim == 0 {
            return invalid("ball dimension must be positive");
        }
        if center.len() != dim {
            return invalid(format!(
                "ball center has {} coordinates, expected {dim}",
                center.len()
            ));
        }
        if !(radius >= 0.0) || !radius.is_finite() {
            return invalid("ball radius must be finite and nonnegative");
        }
        if center.iter().any(|c| !c.is_finite()) {
            return invalid("ball center must be finite");
        }
        Ok(Self::Ball {
            dim,
            center,
            radius,
        })
    }

    pub fn unit_ball(dim: usize) -> Self {
        Self::Ball {
            dim,
            center: vec![0.0; dim],
            radius: 1.0,
        }
    }

    /// V-polytope over `vertices`, merging points closer than `tol::POINT`.
    pub fn vpolytope(vertices: Vec<Vec<f64>>) -> Result<Self> {
        let Some(first) = vertices.first() else {
            return invalid("polytope needs at least one vertex");
        };
        let dim = first.len();
        if dim == 0 {
            return invalid("polytope vertices must have positive dimension");
        }
        if vertices.iter().any(|v| v.len() != dim) {
            return invalid("polytope vertices have inconsistent dimensions");
        }
        if vertices.iter().flatten().any(|c| !c.is_finite()) {
            return invalid("polytope vertices must be finite");
        }
        Ok(Self::VPolytope {
            vertices: dedupe_points(vertices),
        })
    }

    pub fn point(x: Vec<f64>) -> Result<Self> {
        Self::vpolytope(vec![x])
    }

    pub fn embed(inner: ConvexBody, dim: usize) -> Result<Self> {
        if dim < inner.ambient_dim() {
            return invalid(format!(
                "cannot embed a body of ambient dimension {} into dimension {dim}",
                inner.ambient_dim()
            ));
        }
        Ok(Self::Embed {
            inner: Box::new(inner),
            dim,
        })
    }

    pub fn sum(left: ConvexBody, right: ConvexBody) -> Result<Self> {
        if left.ambient_dim() != right.ambient_dim() {
            return invalid(format!(
                "Minkowski sum of ambient dimensions {} and {}",
                left.ambient_dim(),
                right.ambient_dim()
            ));
        }
        Ok(Self::Sum {
            left: Box::new(left),
            right: Box::new(right),
        })
    }

    pub fn spectrahedron(n: usize) -> Result<Self> {
        if n == 0 {
            return invalid("spectrahedron order must be positive");
        }
        Ok(Self::Spectrahedron { n })
    }

    pub(crate) fn spectral_face(k: usize, columns: Vec<Vec<f64>>) -> Result<Self> {
        if k == 0 || columns.len() != spectral::flat_len(k) {
            return invalid("spectral face needs k(k+1)/2 columns");
        }
        let len = columns[0].len();
        if columns.iter().any(|c| c.len() != len) || spectral::order_of(len).is_none() {
            return invalid("spectral face columns must live in a flattened symmetric space");
        }
        for (i, a) in columns.iter().enumerate() {
            for (j, b) in columns.iter().enumerate().skip(i) {
                let expect = if i == j { 1.0 } else { 0.0 };
                if (linalg::dot(a, b) - expect).abs() > 1e-8 {
                    return invalid("spectral face columns must be orthonormal");
                }
            }
        }
        Ok(Self::SpectralFace(SpectralFace { k, columns }))
    }

    pub fn ambient_dim(&self) -> usize {
        match self {
            Self::Ball { dim, .. } => *dim,
            Self::VPolytope { vertices } => vertices[0].len(),
            Self::Embed { dim, .. } => *dim,
            Self::Sum { left, .. } => left.ambient_dim(),
            Self::Spectrahedron { n } => spectral::flat_len(*n),
            Self::SpectralFace(f) => f.columns[0].len(),
        }
    }

    fn check_dim(&self, len: usize) -> Result<()> {
        if len != self.ambient_dim() {
            return invalid(format!(
                "vector of dimension {len} used with a body in dimension {}",
                self.ambient_dim()
            ));
        }
        Ok(())
    }

    /// `max { <u, x> : x in body }`.
    pub fn support_value(&self, u: &Direction) -> Result<f64> {
        self.check_dim(u.dim())?;
        u.normalized()?;
        Ok(self.support(u.as_slice()))
    }

    /// Support value for any direction of matching length, including zero.
    pub(crate) fn support(&self, u: &[f64]) -> f64 {
        match self {
            Self::Ball { center, radius, .. } => linalg::dot(u, center) + radius * linalg::norm(u),
            Self::VPolytope { vertices } => vertices
                .iter()
                .map(|v| linalg::dot(u, v))
                .fold(f64::NEG_INFINITY, f64::max),
            Self::Embed { inner, .. } => inner.support(&u[..inner.ambient_dim()]),
            Self::Sum { left, right } => left.support(u) + right.support(u),
            Self::Spectrahedron { n } => {
                linalg::jacobi_eigen(&spectral::unflatten(u, *n)).values[0]
            }
            Self::SpectralFace(f) => {
                let w = f.pull_back(u);
                linalg::jacobi_eigen(&spectral::unflatten(&w, f.k)).values[0]
            }
        }
    }

    /// One point attaining the support value along `u`.
    pub fn support_point(&self, u: &Direction) -> Result<Vec<f64>> {
        self.check_dim(u.dim())?;
        let unit = u.normalized()?;
        Ok(self.support_point_raw(&unit))
    }

    pub(crate) fn support_point_raw(&self, u: &[f64]) -> Vec<f64> {
        match self {
            Self::Ball { center, radius, .. } => {
                let n = linalg::norm(u);
                if n <= FLAT_FUNCTIONAL || *radius == 0.0 {
                    center.clone()
                } else {
                    let mut p = center.clone();
                    linalg::axpy(&mut p, radius / n, u);
                    p
                }
            }
            Self::VPolytope { vertices } => {
                let mut best = 0;
                let mut best_val = f64::NEG_INFINITY;
                for (i, v) in vertices.iter().enumerate() {
                    let val = linalg::dot(u, v);
                    if val > best_val {
                        best = i;
                        best_val = val;
                    }
                }
                vertices[best].clone()
            }
            Self::Embed { inner, dim } => {
                let mut p = inner.support_point_raw(&u[..inner.ambient_dim()]);
                p.resize(*dim, 0.0);
                p
            }
            Self::Sum { left, right } => {
                linalg::add(&left.support_point_raw(u), &right.support_point_raw(u))
            }
            Self::Spectrahedron { n } => {
                let eig = linalg::jacobi_eigen(&spectral::unflatten(u, *n));
                rank_one(&eig.vectors[0])
            }
            Self::SpectralFace(f) => {
                let w = f.pull_back(u);
                let eig = linalg::jacobi_eigen(&spectral::unflatten(&w, f.k));
                f.map(&rank_one(&eig.vectors[0]))
            }
        }
    }

    /// The face `argmax { <u, x> : x in body }` as a body of the same algebra.
    pub fn exposed_face(&self, u: &Direction) -> Result<ConvexBody> {
        self.check_dim(u.dim())?;
        let unit = u.normalized()?;
        Ok(self.face(&unit))
    }

    /// Argmax set for a direction whose nonzero part has unit scale; directions
    /// that vanish on this body's coordinates give back the whole body.
    pub(crate) fn face(&self, u: &[f64]) -> ConvexBody {
        let flat = linalg::norm(u) <= FLAT_FUNCTIONAL;
        match self {
            Self::Ball { center, radius, .. } => {
                if *radius == 0.0 {
                    return Self::VPolytope {
                        vertices: vec![center.clone()],
                    };
                }
                if flat {
                    return self.clone();
                }
                Self::VPolytope {
                    vertices: vec![self.support_point_raw(u)],
                }
            }
            Self::VPolytope { vertices } => {
                if flat {
                    return self.clone();
                }
                let vals: Vec<f64> = vertices.iter().map(|v| linalg::dot(u, v)).collect();
                let top = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                let slack = tol::FACE * top.abs().max(1.0);
                Self::VPolytope {
                    vertices: vertices
                        .iter()
                        .zip(&vals)
                        .filter(|(_, v)| top - **v <= slack)
                        .map(|(p, _)| p.clone())
                        .collect(),
                }
            }
            Self::Embed { inner, dim } => Self::Embed {
                inner: Box::new(inner.face(&u[..inner.ambient_dim()])),
                dim: *dim,
            },
            Self::Sum { left, right } => Self::Sum {
                left: Box::new(left.face(u)),
                right: Box::new(right.face(u)),
            },
            Self::Spectrahedron { n } => {
                if flat {
                    return self.clone();
                }
                let (_, vecs) = spectral::top_eigenspace(u, *n, tol::FACE);
                if vecs.len() == *n {
                    return self.clone();
                }
                Self::SpectralFace(SpectralFace {
                    k: vecs.len(),
                    columns: spectral::embedding_columns(&vecs),
                })
            }
            Self::SpectralFace(f) => {
                let w = f.pull_back(u);
                if flat || linalg::norm(&w) <= FLAT_FUNCTIONAL {
                    return self.clone();
                }
                let (_, vecs) = spectral::top_eigenspace(&w, f.k, tol::FACE);
                if vecs.len() == f.k {
                    return self.clone();
                }
                let inner = spectral::embedding_columns(&vecs);
                Self::SpectralFace(SpectralFace {
                    k: vecs.len(),
                    columns: inner.iter().map(|c| f.map(c)).collect(),
                })
            }
        }
    }

    /// Affine hull as a base point plus an orthonormal direction basis.
    pub fn affine_hull(&self) -> AffineHull {
        match self {
            Self::Ball {
                dim,
                center,
                radius,
            } => AffineHull {
                point: center.clone(),
                basis: if *radius > 0.0 {
                    (0..*dim).map(|k| linalg::unit_axis(*dim, k)).collect()
                } else {
                    Vec::new()
                },
            },
            Self::VPolytope { vertices } => linalg::affine_hull(vertices),
            Self::Embed { inner, dim } => {
                let h = inner.affine_hull();
                let pad = |mut v: Vec<f64>| {
                    v.resize(*dim, 0.0);
                    v
                };
                AffineHull {
                    point: pad(h.point),
                    basis: h.basis.into_iter().map(pad).collect(),
                }
            }
            Self::Sum { left, right } => {
                let a = left.affine_hull();
                let b = right.affine_hull();
                let dim = a.ambient();
                let mut span = a.basis;
                span.extend(b.basis);
                AffineHull {
                    point: linalg::add(&a.point, &b.point),
                    basis: linalg::orthonormal_span(&span, dim),
                }
            }
            Self::Spectrahedron { n } => AffineHull {
                point: spectral::barycenter(*n),
                basis: spectral::trace_zero_basis(*n),
            },
            Self::SpectralFace(f) => AffineHull {
                point: f.map(&spectral::barycenter(f.k)),
                basis: spectral::trace_zero_basis(f.k)
                    .iter()
                    .map(|b| f.map(b))
                    .collect(),
            },
        }
    }

    /// Dimension of the affine hull.
    pub fn body_dim(&self) -> usize {
        match self {
            Self::Ball { dim, radius, .. } => {
                if *radius > 0.0 {
                    *dim
                } else {
                    0
                }
            }
            Self::VPolytope { vertices } => linalg::affine_rank(vertices),
            Self::Embed { inner, .. } => inner.body_dim(),
            Self::Sum { .. } => self.affine_hull().dim(),
            Self::Spectrahedron { n } => spectral::flat_len(*n) - 1,
            Self::SpectralFace(f) => spectral::flat_len(f.k) - 1,
        }
    }

    /// True when the body is a polytope that [`ConvexBody::polytope_points`]
    /// can list explicitly.
    pub fn is_polytopal(&self) -> bool {
        match self {
            Self::Ball { radius, .. } => *radius == 0.0,
            Self::VPolytope { .. } => true,
            Self::Embed { inner, .. } => inner.is_polytopal(),
            Self::Sum { left, right } => left.is_polytopal() && right.is_polytopal(),
            Self::Spectrahedron { n } => *n == 1,
            Self::SpectralFace(f) => f.k == 1,
        }
    }

    /// A finite point set whose convex hull is the body, for polytopal bodies.
    /// Sums are returned as the raw pairwise-sum cloud (deduplicated).
    pub fn polytope_points(&self) -> Option<Vec<Vec<f64>>> {
        let pts = match self {
            Self::Ball { center, radius, .. } if *radius == 0.0 => vec![center.clone()],
            Self::Ball { .. } => return None,
            Self::VPolytope { vertices } => vertices.clone(),
            Self::Embed { inner, dim } => inner
                .polytope_points()?
                .into_iter()
                .map(|mut v| {
                    v.resize(*dim, 0.0);
                    v
                })
                .collect(),
            Self::Sum { left, right } => {
                let a = left.polytope_points()?;
                let b = right.polytope_points()?;
                let mut out = Vec::with_capacity(a.len() * b.len());
                for p in &a {
                    for q in &b {
                        out.push(linalg::add(p, q));
                    }
                }
                out
            }
            Self::Spectrahedron { n } if *n == 1 => vec![vec![1.0]],
            Self::SpectralFace(f) if f.k == 1 => vec![f.map(&[1.0])],
            _ => return None,
        };
        Some(dedupe_points(pts))
    }

    /// Membership test `<u, x> <= h(u) + tol` over a probe set of directions.
    ///
    /// For polytopal bodies the probes are the facet normals of the hull plus
    /// the normals of its affine hull, which makes the test exact. Otherwise
    /// the probes are `MEMBERSHIP_GRID` fixed pseudo-random unit directions,
    /// the coordinate axes and the affine-hull normals (both signs); this is a
    /// necessary condition only, sharp up to the grid resolution.
    pub fn contains(&self, x: &[f64], tol: f64) -> Result<bool> {
        self.check_dim(x.len())?;
        let dim = self.ambient_dim();
        let hull = self.affine_hull();
        for c in linalg::complement(&hull.basis, dim) {
            let off = linalg::dot(&c, &linalg::sub(x, &hull.point));
            if off.abs() > tol {
                return Ok(false);
            }
        }
        if let Some(points) = self.polytope_points() {
            if let Ok(lattice) = oracle::face_lattice_of_points(&points) {
                return Ok(lattice
                    .facets()
                    .iter()
                    .all(|f| linalg::dot(&f.normal, x) <= f.offset + tol));
            }
        }
        let rng = CounterRng::new(MEMBERSHIP_SEED);
        let axes = (0..dim).flat_map(|k| {
            let e = linalg::unit_axis(dim, k);
            [e.clone(), linalg::scale(&e, -1.0)]
        });
        let grid = (0..MEMBERSHIP_GRID as u64).map(|i| rng.unit_vector(i, dim));
        for u in axes.chain(grid) {
            if linalg::dot(&u, x) > self.support(&u) + tol {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Deterministic points of the body: support points along `count`
    /// pseudo-random directions, plus the listed vertices of polytopal bodies.
    pub fn sample_points(&self, count: usize, seed: u64) -> Vec<Vec<f64>> {
        let dim = self.ambient_dim();
        let rng = CounterRng::new(seed).substream(0x7370);
        let mut out: Vec<Vec<f64>> = (0..count as u64)
            .map(|i| self.support_point_raw(&rng.unit_vector(i, dim)))
            .collect();
        if let Some(pts) = self.polytope_points() {
            if pts.len() <= 4096 {
                out.extend(pts);
            }
        }
        out
    }

    /// Structural size, counting every node.
    pub fn node_count(&self) -> usize {
        match self {
            Self::Embed { inner, .. } => 1 + inner.node_count(),
            Self::Sum { left, right } => 1 + left.node_count() + right.node_count(),
            _ => 1,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(Error::from)
    }
}

fn rank_one(v: &[f64]) -> Vec<f64> {
    let m: Vec<Vec<f64>> = v
        .iter()
        .map(|a| v.iter().map(|b| a * b).collect())
        .collect();
    spectral::flatten(&m)
}

/// Removes points within `tol::POINT` of an earlier point, keeping order.
pub fn dedupe_points(points: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(points.len());
    for p in points {
        if !out.iter().any(|q| linalg::distance(&p, q) <= tol::POINT) {
            out.push(p);
        }
    }
    out
}
