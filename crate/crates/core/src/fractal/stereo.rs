//! Stereographic chart of the unit sphere from a chosen pole.
//!
//! In frame coordinates `(a, b, c)` with the pole at `c = 1`, a sphere point
//! maps to `(a, b) / (1 - c)` and a plane point `p` with `s = |p|²` maps back
//! to `(2p, s - 1) / (s + 1)`. Circles on the sphere map to circles (or
//! lines, through the pole) in the plane.

use num_complex::Complex64;

use super::{cross3, dot3, normalize3, Vec3};

#[derive(Clone, Copy, Debug)]
pub struct Chart {
    e1: Vec3,
    e2: Vec3,
    pole: Vec3,
}

impl Chart {
    pub fn new(pole: Vec3) -> Self {
        let pole = normalize3(&pole);
        let helper = if pole[0].abs() < 0.9 {
            [1.0, 0.0, 0.0]
        } else {
            [0.0, 1.0, 0.0]
        };
        let e1 = normalize3(&cross3(&helper, &pole));
        let e2 = cross3(&pole, &e1);
        Self { e1, e2, pole }
    }

    pub fn pole(&self) -> Vec3 {
        self.pole
    }

    fn to_frame(&self, x: &Vec3) -> Vec3 {
        [dot3(x, &self.e1), dot3(x, &self.e2), dot3(x, &self.pole)]
    }

    fn from_frame(&self, f: &Vec3) -> Vec3 {
        let mut out = [0.0; 3];
        for k in 0..3 {
            out[k] = f[0] * self.e1[k] + f[1] * self.e2[k] + f[2] * self.pole[k];
        }
        out
    }

    pub fn to_plane(&self, x: &Vec3) -> Complex64 {
        let f = self.to_frame(x);
        let d = 1.0 - f[2];
        Complex64::new(f[0] / d, f[1] / d)
    }

    pub fn to_sphere(&self, p: Complex64) -> Vec3 {
        let s = p.norm_sqr();
        let d = s + 1.0;
        self.from_frame(&[2.0 * p.re / d, 2.0 * p.im / d, (s - 1.0) / d])
    }

    /// Planar image of the cap `{x : <normal, x> > offset}`: circle center,
    /// radius and signed curvature (negative when the cap contains the pole,
    /// so the cap becomes the circle's exterior). `None` when the boundary
    /// passes through the pole.
    pub fn cap_to_circle(&self, normal: &Vec3, offset: f64) -> Option<(Complex64, f64, f64)> {
        let n = self.to_frame(normal);
        let lead = n[2] - offset;
        if lead.abs() < 1e-14 {
            return None;
        }
        let center = Complex64::new(-n[0] / lead, -n[1] / lead);
        let r2 = center.norm_sqr() + (n[2] + offset) / lead;
        let radius = r2.sqrt();
        let curvature = if lead > 0.0 {
            -1.0 / radius
        } else {
            1.0 / radius
        };
        Some((center, radius, curvature))
    }

    /// Inverse of [`Chart::cap_to_circle`]: the cap whose image is the disk
    /// (positive curvature) or the exterior (negative curvature) of the circle.
    pub fn circle_to_cap(&self, center: Complex64, curvature: f64) -> (Vec3, f64) {
        let r = 1.0 / curvature.abs();
        let c2 = center.norm_sqr();
        let raw = [-center.re, -center.im, 0.5 * (1.0 - c2 + r * r)];
        let len = (raw[0] * raw[0] + raw[1] * raw[1] + raw[2] * raw[2]).sqrt();
        let lambda = -curvature.signum() / len;
        let n = [lambda * raw[0], lambda * raw[1], lambda * raw[2]];
        let offset = lambda * 0.5 * (-1.0 - c2 + r * r);
        (self.from_frame(&n), offset)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fractal::norm3;

    #[test]
    fn round_trip_plane_sphere_plane() {
        let chart = Chart::new([0.3, -0.5, 0.8]);
        for (re, im) in [(0.0, 0.0), (1.5, -2.0), (-0.01, 0.3), (7.0, 4.0)] {
            let p = Complex64::new(re, im);
            let x = chart.to_sphere(p);
            assert!((norm3(&x) - 1.0).abs() < 1e-12);
            let q = chart.to_plane(&x);
            assert!((p - q).norm() < 1e-12 * (1.0 + p.norm()), "{p} -> {q}");
        }
    }

    #[test]
    fn cap_circle_round_trip() {
        let chart = Chart::new([0.0, 0.0, 1.0]);
        for (normal, offset) in [
            ([0.0, 0.0, 1.0], 0.5),
            (normalize3(&[1.0, 1.0, -0.2]), 0.9),
            (normalize3(&[-1.0, 0.3, 0.1]), -0.3),
        ] {
            let (c, _, k) = chart.cap_to_circle(&normal, offset).unwrap();
            let (n2, t2) = chart.circle_to_cap(c, k);
            for i in 0..3 {
                assert!((normal[i] - n2[i]).abs() < 1e-12);
            }
            assert!((offset - t2).abs() < 1e-12);
        }
    }

    #[test]
    fn boundary_points_land_on_the_circle() {
        let chart = Chart::new(normalize3(&[0.2, 0.1, 1.0]));
        let n = normalize3(&[1.0, -2.0, 0.5]);
        let t = 0.4;
        let (c, r, _) = chart.cap_to_circle(&n, t).unwrap();
        // Points on the boundary circle of the cap.
        let u = normalize3(&cross3(&n, &[0.0, 0.0, 1.0]));
        let w = cross3(&n, &u);
        let s = (1.0 - t * t).sqrt();
        for i in 0..12 {
            let a = i as f64 * 0.5;
            let x = [
                t * n[0] + s * (a.cos() * u[0] + a.sin() * w[0]),
                t * n[1] + s * (a.cos() * u[1] + a.sin() * w[1]),
                t * n[2] + s * (a.cos() * u[2] + a.sin() * w[2]),
            ];
            let p = chart.to_plane(&x);
            assert!(((p - c).norm() - r).abs() < 1e-12);
        }
    }
}
