//! Convex hulls of fractal subsets of the unit sphere.
//!
//! Two constructions: the spherical Apollonian gasket left over after slicing
//! mutually tangent caps off the sphere, and a Sierpinski triangle centrally
//! projected onto the sphere. Their dimensions are estimated by box counting.

mod apollonian;
mod boxcount;
mod hull;
mod sampling;
mod sierpinski;
pub mod stereo;

pub use apollonian::{apollonian_packing, cap_count, Cap, CapPacking, PlanarCircle, MAX_DEPTH};
pub use boxcount::{box_dimension, dyadic_scales, fibonacci_sphere, BoxCountFit};
pub use hull::{face_census, FaceCensus, GasketHull, HullFace, CENSUS_DIRECTIONS};
pub use sampling::{residual_sample, CapIndex, ResidualSample};
pub use sierpinski::{sierpinski_planar, sierpinski_sphere, SierpinskiIfs};

pub type Vec3 = [f64; 3];

#[inline]
pub fn dot3(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub fn cross3(a: &Vec3, b: &Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

#[inline]
pub fn norm3(a: &Vec3) -> f64 {
    dot3(a, a).sqrt()
}

#[inline]
pub fn normalize3(a: &Vec3) -> Vec3 {
    let n = norm3(a);
    [a[0] / n, a[1] / n, a[2] / n]
}

/// Angle between two unit vectors, accurate for nearly parallel inputs.
#[inline]
pub fn angle_between(a: &Vec3, b: &Vec3) -> f64 {
    norm3(&cross3(a, b)).atan2(dot3(a, b))
}
