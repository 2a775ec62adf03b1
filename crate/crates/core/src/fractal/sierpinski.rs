use super::{norm3, Vec3};
use crate::error::{invalid, Result};
use crate::rng::CounterRng;

/// The three half-ratio contractions of the Sierpinski triangle, placed in
/// the plane `z = -1` (tangent to the sphere at the south pole) around
/// `(0, 0, -1)` with circumradius [`SierpinskiIfs::CIRCUMRADIUS`].
#[derive(Clone, Copy, Debug)]
pub struct SierpinskiIfs {
    vertices: [[f64; 2]; 3],
}

impl Default for SierpinskiIfs {
    fn default() -> Self {
        let r = Self::CIRCUMRADIUS;
        let v = |k: f64| {
            let a = std::f64::consts::FRAC_PI_2 + k * std::f64::consts::TAU / 3.0;
            [r * a.cos(), r * a.sin()]
        };
        Self {
            vertices: [v(0.0), v(1.0), v(2.0)],
        }
    }
}

impl SierpinskiIfs {
    /// Vertices sit 45° from the south pole; any two of them are about 75.5°
    /// apart on the sphere, so the projected triangle stays in an open
    /// hemisphere.
    pub const CIRCUMRADIUS: f64 = 1.0;

    pub fn vertices(&self) -> [[f64; 2]; 3] {
        self.vertices
    }

    #[inline]
    pub fn apply(&self, map: usize, p: [f64; 2]) -> [f64; 2] {
        let v = self.vertices[map];
        [0.5 * (p[0] + v[0]), 0.5 * (p[1] + v[1])]
    }

    /// Central projection of a chart point `(x, y, -1)` onto the sphere.
    pub fn project(p: [f64; 2]) -> Vec3 {
        let x = [p[0], p[1], -1.0];
        let n = norm3(&x);
        [x[0] / n, x[1] / n, x[2] / n]
    }
}

/// Chaos-game orbit of length `points`, starting from the first vertex (a
/// fixed point, so every iterate lies on the attractor).
pub fn sierpinski_planar(points: usize, seed: u64) -> Result<Vec<[f64; 2]>> {
    if points == 0 {
        return invalid("point count must be at least 1");
    }
    let ifs = SierpinskiIfs::default();
    let rng = CounterRng::new(seed).substream(0x73696572);
    let mut p = ifs.vertices[0];
    let mut out = Vec::with_capacity(points);
    for i in 0..points as u64 {
        let map = ((rng.uniform_at(i) * 3.0) as usize).min(2);
        p = ifs.apply(map, p);
        out.push(p);
    }
    Ok(out)
}

pub fn sierpinski_sphere(points: usize, seed: u64) -> Result<Vec<Vec3>> {
    Ok(sierpinski_planar(points, seed)?
        .into_iter()
        .map(SierpinskiIfs::project)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fractal::angle_between;

    #[test]
    fn vertices_are_fixed_points() {
        let ifs = SierpinskiIfs::default();
        for (k, v) in ifs.vertices().iter().enumerate() {
            assert_eq!(ifs.apply(k, *v), *v);
        }
    }

    #[test]
    fn projected_points_have_unit_norm() {
        for x in sierpinski_sphere(10_000, 3).unwrap() {
            assert!((norm3(&x) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn triangle_subtends_less_than_a_right_angle() {
        let v = SierpinskiIfs::default()
            .vertices()
            .map(SierpinskiIfs::project);
        for i in 0..3 {
            for j in i + 1..3 {
                assert!(angle_between(&v[i], &v[j]) < std::f64::consts::FRAC_PI_2);
            }
        }
    }

    #[test]
    fn orbit_is_reproducible() {
        assert_eq!(
            sierpinski_planar(100, 1).unwrap(),
            sierpinski_planar(100, 1).unwrap()
        );
        assert_ne!(
            sierpinski_planar(100, 1).unwrap(),
            sierpinski_planar(100, 2).unwrap()
        );
        assert!(sierpinski_planar(0, 1).is_err());
    }
}
