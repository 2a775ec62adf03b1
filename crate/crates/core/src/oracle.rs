//! Brute-force face lattices of small V-polytopes.
//!
//! Facets come from enumerating every hyperplane through `r` affinely
//! independent points of the polytope (in its own `r`-dimensional affine
//! hull) and keeping the one-sided ones. All other faces are intersections
//! of facets. No convex-hull algorithm is involved, so the result can be used
//! to check the rest of the crate.

use std::collections::{BTreeSet, HashSet};

use serde::Serialize;

use crate::bodies::{dedupe_points, ConvexBody};
use crate::error::{invalid, Error, Result};
use crate::linalg::{self, AffineHull};
use crate::rng::CounterRng;
use crate::tol;

/// Largest affine-hull dimension the enumeration accepts.
pub const MAX_DIM: usize = 5;
/// Upper bound on the number of candidate hyperplanes, `C(n, r)`.
pub const MAX_CANDIDATES: u128 = 250_000;
/// Residual allowed between a face and the sum of its two summand faces.
pub const LEMMA_RESIDUAL: f64 = 1e-9;

#[derive(Clone, Debug, Serialize)]
pub struct Facet {
    pub vertices: Vec<usize>,
    /// Outward unit normal in ambient coordinates, inside the affine hull.
    pub normal: Vec<f64>,
    pub offset: f64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Face {
    /// Indices of every listed point lying on the face.
    pub vertices: Vec<usize>,
    pub dim: usize,
}

#[derive(Clone, Debug)]
pub struct FaceLattice {
    points: Vec<Vec<f64>>,
    hull: AffineHull,
    facets: Vec<Facet>,
    /// Sorted by `(dim, vertices)`; the last entry is the whole polytope.
    faces: Vec<Face>,
}

impl FaceLattice {
    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn hull(&self) -> &AffineHull {
        &self.hull
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn dim(&self) -> usize {
        self.hull.dim()
    }

    pub fn dims(&self) -> BTreeSet<usize> {
        self.faces.iter().map(|f| f.dim).collect()
    }

    /// Number of faces of each dimension `0..=dim`.
    pub fn f_vector(&self) -> Vec<usize> {
        let mut counts = vec![0; self.dim() + 1];
        for f in &self.faces {
            counts[f.dim] += 1;
        }
        counts
    }

    /// Indices of the extreme points (the singleton faces).
    pub fn extreme_points(&self) -> Vec<usize> {
        self.faces
            .iter()
            .filter(|f| f.vertices.len() == 1)
            .map(|f| f.vertices[0])
            .collect()
    }

    pub fn find(&self, vertices: &[usize]) -> Option<&Face> {
        self.faces.iter().find(|f| f.vertices == vertices)
    }

    pub fn is_face(&self, vertices: &[usize]) -> bool {
        self.find(vertices).is_some()
    }

    /// Sum of the normals of the facets containing `face`; exposes exactly
    /// that face. Zero for the whole polytope.
    pub fn exposing_direction(&self, face: &Face) -> Vec<f64> {
        let mut u = vec![0.0; self.hull.ambient()];
        for facet in &self.facets {
            if is_subset(&face.vertices, &facet.vertices) {
                linalg::axpy(&mut u, 1.0, &facet.normal);
            }
        }
        u
    }
}

fn is_subset(small: &[usize], big: &[usize]) -> bool {
    small.iter().all(|i| big.binary_search(i).is_ok())
}

fn intersect(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter()
        .filter(|i| b.binary_search(i).is_ok())
        .copied()
        .collect()
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Calls `f` on every `k`-subset of `0..n` in lexicographic order.
fn for_each_combination(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

struct Projected {
    hull: AffineHull,
    coords: Vec<Vec<f64>>,
    tol: f64,
}

fn project(points: &[Vec<f64>]) -> Result<Projected> {
    let hull = linalg::affine_hull(points);
    let r = hull.dim();
    if r > MAX_DIM {
        return Err(Error::SizeGuard(format!(
            "affine dimension {r} exceeds the oracle limit {MAX_DIM}"
        )));
    }
    let candidates = binomial(points.len(), r);
    if candidates > MAX_CANDIDATES {
        return Err(Error::SizeGuard(format!(
            "{candidates} candidate hyperplanes for {} points in dimension {r}",
            points.len()
        )));
    }
    let coords: Vec<Vec<f64>> = points.iter().map(|p| hull.coords(p)).collect();
    let tol = tol::FACE * tol::scale_of(coords.iter().flatten().copied());
    Ok(Projected { hull, coords, tol })
}

/// Visits each candidate hyperplane `(normal, offset)` in hull coordinates.
fn for_each_candidate(pr: &Projected, mut f: impl FnMut(&[f64], f64)) {
    let r = pr.hull.dim();
    for_each_combination(pr.coords.len(), r, |idx| {
        let pts: Vec<&[f64]> = idx.iter().map(|&i| pr.coords[i].as_slice()).collect();
        if let Some((a, b)) = linalg::hyperplane_through(&pts) {
            f(&a, b);
        }
    });
}

/// Face lattice of the convex hull of `P`'s vertices.
pub fn face_lattice(p: &ConvexBody) -> Result<FaceLattice> {
    match p {
        ConvexBody::VPolytope { vertices } => face_lattice_of_points(vertices),
        _ => invalid("face lattice needs a V-polytope"),
    }
}

/// Face lattice of the convex hull of a finite point list. Points must be
/// pairwise distinct (see [`dedupe_points`]).
pub fn face_lattice_of_points(points: &[Vec<f64>]) -> Result<FaceLattice> {
    if points.is_empty() {
        return invalid("empty point set");
    }
    let pr = project(points)?;
    let n = points.len();
    let r = pr.hull.dim();
    let mut facets: Vec<Facet> = Vec::new();
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    if r > 0 {
        for_each_candidate(&pr, |a, b| {
            let vals: Vec<f64> = pr.coords.iter().map(|c| linalg::dot(a, c) - b).collect();
            let sign = if vals.iter().all(|v| *v <= pr.tol) {
                1.0
            } else if vals.iter().all(|v| *v >= -pr.tol) {
                -1.0
            } else {
                return;
            };
            let incident: Vec<usize> = (0..n).filter(|&i| vals[i].abs() <= pr.tol).collect();
            if seen.insert(incident.clone()) {
                let local = linalg::scale(a, sign);
                let normal = pr.hull.lift_direction(&local);
                let offset = sign * b + linalg::dot(&normal, &pr.hull.point);
                facets.push(Facet {
                    vertices: incident,
                    normal,
                    offset,
                });
            }
        });
    }

    let mut sets: BTreeSet<Vec<usize>> = facets.iter().map(|f| f.vertices.clone()).collect();
    let mut queue: Vec<Vec<usize>> = sets.iter().cloned().collect();
    while let Some(face) = queue.pop() {
        for facet in &facets {
            let inter = intersect(&face, &facet.vertices);
            if !inter.is_empty() && sets.insert(inter.clone()) {
                queue.push(inter);
            }
        }
    }
    sets.insert((0..n).collect());

    let mut faces: Vec<Face> = sets
        .into_iter()
        .map(|vertices| {
            let sub: Vec<Vec<f64>> = vertices.iter().map(|&i| pr.coords[i].clone()).collect();
            Face {
                dim: linalg::affine_rank(&sub),
                vertices,
            }
        })
        .collect();
    faces.sort_by(|a, b| a.dim.cmp(&b.dim).then_with(|| a.vertices.cmp(&b.vertices)));

    Ok(FaceLattice {
        points: points.to_vec(),
        hull: pr.hull,
        facets,
        faces,
    })
}

/// True when some point sits between `τ_face` and `10·τ_face` of a candidate
/// hyperplane, i.e. incidence would hinge on rounding.
pub fn near_degenerate(points: &[Vec<f64>]) -> Result<bool> {
    let pr = project(points)?;
    if pr.hull.dim() == 0 {
        return Ok(false);
    }
    let mut bad = false;
    for_each_candidate(&pr, |a, b| {
        if bad {
            return;
        }
        bad = pr.coords.iter().any(|c| {
            let d = (linalg::dot(a, c) - b).abs();
            d > pr.tol && d <= 10.0 * pr.tol
        });
    });
    Ok(bad)
}

fn vertices_of(p: &ConvexBody) -> Result<&[Vec<f64>]> {
    match p {
        ConvexBody::VPolytope { vertices } => Ok(vertices),
        _ => invalid("expected a V-polytope"),
    }
}

/// Largest pairwise-sum cloud accepted by [`minkowski_sum`].
pub const MAX_SUM_POINTS: usize = 256;

/// `P ⊕ Q` as the extreme points of all pairwise vertex sums.
pub fn minkowski_sum(p: &ConvexBody, q: &ConvexBody) -> Result<ConvexBody> {
    let (a, b) = (vertices_of(p)?, vertices_of(q)?);
    if a[0].len() != b[0].len() {
        return invalid("Minkowski sum of polytopes in different dimensions");
    }
    if a.len() * b.len() > MAX_SUM_POINTS {
        return Err(Error::SizeGuard(format!(
            "{} pairwise sums exceed {MAX_SUM_POINTS}",
            a.len() * b.len()
        )));
    }
    let raw = dedupe_points(
        a.iter()
            .flat_map(|x| b.iter().map(move |y| linalg::add(x, y)))
            .collect(),
    );
    Ok(ConvexBody::VPolytope {
        vertices: extreme_subset(&raw)?,
    })
}

/// The extreme points among `points`, in their original order.
pub fn extreme_subset(points: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    let lattice = face_lattice_of_points(points)?;
    let mut keep = lattice.extreme_points();
    keep.sort_unstable();
    Ok(keep.into_iter().map(|i| points[i].clone()).collect())
}

/// A face of `P ⊕ Q` written as the sum of a face of `P` and a face of `Q`.
#[derive(Clone, Debug, Serialize)]
pub struct Decomposition {
    /// Vertex indices into the sum polytope.
    pub face: Vec<usize>,
    pub dim: usize,
    /// Point indices into `P`: every `p` with some `p + q` on the face.
    pub f_p: Vec<usize>,
    /// Point indices into `Q`, symmetrically.
    pub f_q: Vec<usize>,
    pub residual: f64,
}

/// Decomposes every face of `P ⊕ Q` into summand faces and checks both the
/// face property and hull equality; any failure is an error.
pub fn check_lemma1(p: &ConvexBody, q: &ConvexBody) -> Result<Vec<Decomposition>> {
    let (pv, qv) = (vertices_of(p)?, vertices_of(q)?);
    let sum = minkowski_sum(p, q)?;
    let cv = vertices_of(&sum)?;
    let lp = face_lattice_of_points(pv)?;
    let lq = face_lattice_of_points(qv)?;
    let lc = face_lattice_of_points(cv)?;
    let scale = tol::scale_of(cv.iter().flatten().copied());
    let slack = tol::FACE * scale;

    let mut out = Vec::with_capacity(lc.faces().len());
    for face in lc.faces() {
        let u = lc.exposing_direction(face);
        let hp: Vec<f64> = pv.iter().map(|x| linalg::dot(&u, x)).collect();
        let hq: Vec<f64> = qv.iter().map(|y| linalg::dot(&u, y)).collect();
        let max_p = hp.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let max_q = hq.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let h = cv
            .iter()
            .map(|x| linalg::dot(&u, x))
            .fold(f64::NEG_INFINITY, f64::max);
        // p is in F_P iff p + q lands on the face for some q; the best partner
        // is a maximiser of <u, q>.
        let f_p: Vec<usize> = (0..pv.len())
            .filter(|&i| hp[i] + max_q >= h - slack)
            .collect();
        let f_q: Vec<usize> = (0..qv.len())
            .filter(|&j| hq[j] + max_p >= h - slack)
            .collect();

        if !lp.is_face(&f_p) {
            return Err(Error::DecompositionFailure(format!(
                "F_P = {f_p:?} is not a face of P (face {:?} of the sum)",
                face.vertices
            )));
        }
        if !lq.is_face(&f_q) {
            return Err(Error::DecompositionFailure(format!(
                "F_Q = {f_q:?} is not a face of Q (face {:?} of the sum)",
                face.vertices
            )));
        }

        let sums: Vec<Vec<f64>> = f_p
            .iter()
            .flat_map(|&i| f_q.iter().map(move |&j| linalg::add(&pv[i], &qv[j])))
            .collect();
        let off_face = sums
            .iter()
            .map(|s| (h - linalg::dot(&u, s)).abs())
            .fold(0.0, f64::max);
        let uncovered = face
            .vertices
            .iter()
            .map(|&k| {
                sums.iter()
                    .map(|s| linalg::distance(s, &cv[k]))
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max);
        let residual = off_face.max(uncovered);
        if residual > LEMMA_RESIDUAL * scale {
            return Err(Error::DecompositionFailure(format!(
                "hull(F_P + F_Q) differs from face {:?} by {residual:e}",
                face.vertices
            )));
        }
        out.push(Decomposition {
            face: face.vertices.clone(),
            dim: face.dim,
            f_p,
            f_q,
            residual,
        });
    }
    Ok(out)
}

/// Random V-polytope with `1..=max_vertices` points uniform in `[-1, 1]^dim`.
pub fn random_polytope(rng: &CounterRng, dim: usize, max_vertices: usize) -> ConvexBody {
    let count = 1 + (rng.uniform_at(0) * max_vertices as f64) as usize;
    let count = count.min(max_vertices);
    let vertices = (0..count)
        .map(|i| {
            (0..dim)
                .map(|k| 2.0 * rng.uniform_at(1 + (i * dim + k) as u64) - 1.0)
                .collect()
        })
        .collect();
    ConvexBody::vpolytope(vertices).expect("random vertices are finite and nonempty")
}

/// Deterministic, well-conditioned random pair for the decomposition suite.
/// Draws are repeated (with a fresh substream) while `P`, `Q` or their raw
/// sum cloud is near-degenerate.
pub fn random_pair(seed: u64, dim: usize, max_vertices: usize) -> Result<(ConvexBody, ConvexBody)> {
    let base = CounterRng::new(seed).substream(dim as u64);
    for attempt in 0..64u64 {
        let p = random_polytope(&base.substream(2 * attempt), dim, max_vertices);
        let q = random_polytope(&base.substream(2 * attempt + 1), dim, max_vertices);
        let raw = p
            .polytope_points()
            .zip(q.polytope_points())
            .map(|(a, b)| {
                dedupe_points(
                    a.iter()
                        .flat_map(|x| b.iter().map(move |y| linalg::add(x, y)))
                        .collect(),
                )
            })
            .expect("polytopes list their points");
        let clouds = [vertices_of(&p)?.to_vec(), vertices_of(&q)?.to_vec(), raw];
        let mut degenerate = false;
        for c in &clouds {
            if near_degenerate(c)? {
                degenerate = true;
                break;
            }
        }
        if !degenerate {
            return Ok((p, q));
        }
    }
    Err(Error::Sampling(format!(
        "no well-conditioned pair for seed {seed} in dimension {dim}"
    )))
}
