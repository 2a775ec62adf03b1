//! Compact convex bodies with prescribed facial-dimension patterns.
//!
//! * [`bodies`]: balls, V-polytopes, embeddings, Minkowski sums and the
//!   trace-one spectrahedron, with support functions and exposed faces.
//! * [`construct`]: bodies realizing any increasing pattern of face
//!   dimensions, plus named fixtures.
//! * [`probe`]: exact facial-dimension patterns with witness chains, and a
//!   sampling cross-check.
//! * [`oracle`]: brute-force polytope face lattices and Minkowski-sum face
//!   decompositions.
//! * [`fractal`]: spherical Apollonian cap packings, Sierpinski triangles on
//!   the sphere, and box-counting dimension fits.
//! * [`mesh`] and [`cli`]: OBJ export and the command-line front end.

pub mod bodies;
pub mod cli;
pub mod construct;
pub mod error;
pub mod fractal;
pub mod linalg;
pub mod mesh;
pub mod oracle;
pub mod probe;
pub mod rng;
pub mod tol;

pub use bodies::{ConvexBody, Direction};
pub use construct::{build_pattern, catalog, Pattern};
pub use error::{Error, Result};
pub use probe::{face_pattern, sample_probe, verify_chain, FacePattern, WitnessChain};
