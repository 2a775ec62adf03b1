//! Facial-dimension patterns of bodies in the algebra.
//!
//! The exact pattern is computed by structural rules; every proper entry is
//! backed by a witness chain (directions whose iterated exposed faces land on
//! a face of that dimension) which is checked numerically. Iterated exposure
//! reaches every face of every body the rules accept; for polytopes the
//! oracle lattice is the exact reference.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bodies::{spectral, ConvexBody, Direction};
use crate::error::{invalid, Error, Result};
use crate::linalg;
use crate::oracle;
use crate::rng::CounterRng;
use crate::tol;

/// Sorted set of face dimensions, always containing 0 and the body's own
/// dimension.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FacePattern(BTreeSet<usize>);

impl FacePattern {
    pub fn dims(&self) -> &BTreeSet<usize> {
        &self.0
    }

    pub fn contains(&self, d: usize) -> bool {
        self.0.contains(&d)
    }

    /// Positive entries, i.e. the increasing sequence `(d_1, ..., d_k)`.
    pub fn positive(&self) -> Vec<usize> {
        self.0.iter().copied().filter(|&d| d > 0).collect()
    }
}

impl<const N: usize> PartialEq<[usize; N]> for FacePattern {
    fn eq(&self, other: &[usize; N]) -> bool {
        self.0.iter().eq(other.iter())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessChain {
    pub directions: Vec<Direction>,
    pub claimed_dim: usize,
}

/// Dimension -> chain of ambient directions, for every proper entry.
type Chains = BTreeMap<usize, Vec<Vec<f64>>>;

struct Structural {
    dims: BTreeSet<usize>,
    chains: Chains,
}

/// Exact pattern plus one verified witness chain per non-full dimension.
pub fn face_pattern(body: &ConvexBody) -> Result<(FacePattern, Vec<WitnessChain>)> {
    let s = structural(body)?;
    let full = body.body_dim();
    debug_assert!(s.dims.contains(&0) && s.dims.contains(&full));
    let mut chains = Vec::with_capacity(s.chains.len());
    for (dim, dirs) in s.chains {
        if dim == full {
            continue;
        }
        let chain = WitnessChain {
            directions: dirs.into_iter().map(Direction::new).collect(),
            claimed_dim: dim,
        };
        if !verify_chain(body, &chain)? {
            return Err(Error::VerificationFailed(format!(
                "witness chain for dimension {dim} does not reach a face of that dimension"
            )));
        }
        chains.push(chain);
    }
    Ok((FacePattern(s.dims), chains))
}

fn structural(body: &ConvexBody) -> Result<Structural> {
    match body {
        ConvexBody::Ball { dim, radius, .. } => {
            if *radius == 0.0 {
                Ok(point_pattern())
            } else {
                Ok(Structural {
                    dims: BTreeSet::from([0, *dim]),
                    chains: BTreeMap::from([(0, vec![linalg::unit_axis(*dim, 0)])]),
                })
            }
        }
        ConvexBody::VPolytope { vertices } => polytope_pattern(vertices),
        ConvexBody::Embed { inner, dim } => {
            let s = structural(inner)?;
            Ok(Structural {
                dims: s.dims,
                chains: map_chains(s.chains, |u| {
                    let mut v = u.to_vec();
                    v.resize(*dim, 0.0);
                    v
                }),
            })
        }
        ConvexBody::Spectrahedron { n } => Ok(spectrahedron_pattern(*n)),
        ConvexBody::SpectralFace(f) => {
            let s = spectrahedron_pattern(f.order());
            Ok(Structural {
                dims: s.dims,
                chains: map_chains(s.chains, |w| {
                    let mut u = vec![0.0; f.columns()[0].len()];
                    for (c, x) in f.columns().iter().zip(w) {
                        linalg::axpy(&mut u, *x, c);
                    }
                    u
                }),
            })
        }
        ConvexBody::Sum { left, right } => {
            if let ConvexBody::Ball { .. } = **left {
                ball_sum_pattern(body, left, right)
            } else if let ConvexBody::Ball { .. } = **right {
                ball_sum_pattern(body, right, left)
            } else if body.is_polytopal() {
                let p = ConvexBody::vpolytope(left.polytope_points().expect("polytopal"))?;
                let q = ConvexBody::vpolytope(right.polytope_points().expect("polytopal"))?;
                let ConvexBody::VPolytope { vertices } = oracle::minkowski_sum(&p, &q)? else {
                    unreachable!("Minkowski sum of polytopes is a polytope")
                };
                polytope_pattern(&vertices)
            } else {
                Err(Error::UnsupportedComposition(
                    "Minkowski sum needs a ball summand or two polytopes".into(),
                ))
            }
        }
    }
}

fn point_pattern() -> Structural {
    Structural {
        dims: BTreeSet::from([0]),
        chains: BTreeMap::new(),
    }
}

fn map_chains(chains: Chains, f: impl Fn(&[f64]) -> Vec<f64>) -> Chains {
    chains
        .into_iter()
        .map(|(d, dirs)| (d, dirs.iter().map(|u| f(u)).collect()))
        .collect()
}

fn polytope_pattern(vertices: &[Vec<f64>]) -> Result<Structural> {
    let lattice = oracle::face_lattice_of_points(vertices)?;
    let full = lattice.dim();
    let mut chains = Chains::new();
    for face in lattice.faces() {
        if face.dim < full && !chains.contains_key(&face.dim) {
            chains.insert(face.dim, vec![lattice.exposing_direction(face)]);
        }
    }
    Ok(Structural {
        dims: lattice.dims(),
        chains,
    })
}

fn spectrahedron_pattern(n: usize) -> Structural {
    let mut dims = BTreeSet::new();
    let mut chains = Chains::new();
    for k in 1..=n {
        let d = spectral::flat_len(k) - 1;
        dims.insert(d);
        if k < n {
            let m: Vec<Vec<f64>> = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| if i == j && i < k { 1.0 } else { 0.0 })
                        .collect()
                })
                .collect();
            chains.insert(d, vec![spectral::flatten(&m)]);
        }
    }
    Structural { dims, chains }
}

/// `Ball + X`: faces are a boundary point of the ball plus a face of `X`.
/// Chains start with a direction orthogonal to `X` (the last axis when it
/// is), which exposes the translated copy of `X`, then follow `X`'s chains.
fn ball_sum_pattern(
    body: &ConvexBody,
    ball: &ConvexBody,
    other: &ConvexBody,
) -> Result<Structural> {
    let ConvexBody::Ball { radius, .. } = ball else {
        unreachable!()
    };
    let inner = structural(other)?;
    if *radius == 0.0 {
        return Ok(inner);
    }
    let n = body.ambient_dim();
    let full = body.body_dim();
    let hull = other.affine_hull();
    let last = linalg::unit_axis(n, n - 1);
    let orth = if hull.basis.iter().all(|b| b[n - 1].abs() <= tol::RANK) {
        Some(last)
    } else {
        linalg::complement(&hull.basis, n).into_iter().next()
    };

    let mut dims = inner.dims.clone();
    dims.insert(0);
    dims.insert(full);
    let mut chains = Chains::new();
    match orth {
        Some(e) => {
            for (d, dirs) in inner.chains {
                let mut c = vec![e.clone()];
                c.extend(dirs);
                chains.insert(d, c);
            }
            chains.entry(hull.dim()).or_insert_with(|| vec![e.clone()]);
            chains.entry(0).or_insert_with(|| vec![e]);
        }
        None => {
            chains = inner.chains;
            chains
                .entry(0)
                .or_insert_with(|| vec![linalg::unit_axis(n, 0)]);
        }
    }
    chains.remove(&full);
    Ok(Structural { dims, chains })
}

/// Points per terminal face checked for membership in the original body.
const CHAIN_SAMPLES: usize = 16;

/// Folds exposed faces along the chain and checks the terminal face's
/// dimension and that its sampled points lie in `body`.
pub fn verify_chain(body: &ConvexBody, chain: &WitnessChain) -> Result<bool> {
    let n = body.ambient_dim();
    if chain.directions.iter().any(|u| u.dim() != n) {
        return invalid("chain direction dimension does not match the body");
    }
    if chain.directions.len() > n.max(1) {
        return Ok(false);
    }
    let mut face = body.clone();
    for u in &chain.directions {
        face = face.exposed_face(u)?;
    }
    if face.body_dim() != chain.claimed_dim {
        return Ok(false);
    }
    let pts = face.sample_points(CHAIN_SAMPLES, 0);
    let tol = 1e-9 * tol::scale_of(pts.iter().flatten().copied());
    for p in &pts {
        if !body.contains(p, tol)? {
            return Ok(false);
        }
    }
    Ok(true)
}

const PROBE_STREAM: u64 = 0x70726f6265;

/// Histogram of exposed-face dimensions over `n_samples` uniformly random
/// directions. Direction `i` depends only on `(seed, i)`.
pub fn sample_probe(
    body: &ConvexBody,
    n_samples: usize,
    seed: u64,
) -> Result<BTreeMap<usize, usize>> {
    if n_samples == 0 {
        return invalid("n_samples must be at least 1");
    }
    let dim = body.ambient_dim();
    let rng = CounterRng::new(seed).substream(PROBE_STREAM);
    let dims: Vec<usize> = (0..n_samples as u64)
        .into_par_iter()
        .map(|i| body.face(&rng.unit_vector(i, dim)).body_dim())
        .collect();
    let mut hist = BTreeMap::new();
    for d in dims {
        *hist.entry(d).or_insert(0) += 1;
    }
    Ok(hist)
}
