//! Apollonian cap packing of the unit sphere.
//!
//! Generation 0 is the four caps cut off by the face planes of the regular
//! tetrahedron whose midsphere is the unit sphere; their boundary circles
//! touch pairwise at the six edge midpoints. Each later generation places one
//! cap in every curvilinear-triangle gap, tangent to the three caps around
//! it. The gap filling runs in a stereographic chart, where the new circle of
//! gap `(a, b, c)` with opposite circle `d` is
//!
//! ```text
//! k  = 2 (k_a + k_b + k_c) - k_d
//! kz = 2 (k_a z_a + k_b z_b + k_c z_c) - k_d z_d
//! ```
//!
//! (the second root of the Descartes relation and its complex analogue).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::stereo::Chart;
use super::{angle_between, norm3, Vec3};
use crate::error::{invalid, Result};

pub const MAX_DEPTH: usize = 12;

/// The open cap `{x on the sphere : <normal, x> > offset}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cap {
    pub normal: Vec3,
    pub offset: f64,
}

impl Cap {
    pub fn new(normal: Vec3, offset: f64) -> Result<Self> {
        if (norm3(&normal) - 1.0).abs() > 1e-12 {
            return invalid("cap normal must have unit length");
        }
        if !(offset > -1.0 && offset < 1.0) {
            return invalid("cap offset must lie in (-1, 1)");
        }
        Ok(Self { normal, offset })
    }

    /// Angular radius of the cap seen from the sphere's center.
    pub fn angular_radius(&self) -> f64 {
        (1.0 - self.offset * self.offset)
            .max(0.0)
            .sqrt()
            .atan2(self.offset)
    }

    /// Area `2π (1 - offset)` on the unit sphere.
    pub fn area(&self) -> f64 {
        std::f64::consts::TAU * (1.0 - self.offset)
    }

    #[inline]
    pub fn contains(&self, x: &Vec3) -> bool {
        super::dot3(&self.normal, x) > self.offset
    }

    /// Angular gap between the boundary circles (negative when overlapping).
    pub fn separation(&self, other: &Cap) -> f64 {
        angle_between(&self.normal, &other.normal) - self.angular_radius() - other.angular_radius()
    }
}

/// Circle in the stereographic chart; negative curvature marks a circle
/// whose exterior is the cap.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlanarCircle {
    pub center: Complex64,
    pub curvature: f64,
}

impl PlanarCircle {
    fn weighted(&self) -> Complex64 {
        self.center * self.curvature
    }
}

/// Relative residual of the Descartes relation `(Σk)² = 2 Σk²`.
pub fn descartes_residual(k: [f64; 4]) -> f64 {
    let s: f64 = k.iter().sum();
    let q: f64 = k.iter().map(|x| x * x).sum();
    let scale: f64 = k.iter().map(|x| x.abs()).sum();
    (s * s - 2.0 * q).abs() / (scale * scale)
}

/// Relative residual of the complex Descartes relation
/// `(Σ k z)² = 2 Σ (k z)²`.
fn complex_descartes_residual(c: [&PlanarCircle; 4]) -> f64 {
    let w: Vec<Complex64> = c.iter().map(|x| x.weighted()).collect();
    let s: Complex64 = w.iter().sum();
    let q: Complex64 = w.iter().map(|x| x * x).sum();
    let scale: f64 =
        w.iter().map(|x| x.norm()).sum::<f64>() + c.iter().map(|x| x.curvature.abs()).sum::<f64>();
    (s * s - q * 2.0).norm() / (scale * scale)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CapPacking {
    pub caps: Vec<Cap>,
    pub generation_depth: usize,
    /// Generation of each cap (0 for the four tetrahedral caps).
    pub generations: Vec<usize>,
    /// Index pairs of caps generated tangent to each other.
    #[serde(skip)]
    pub tangencies: Vec<(usize, usize)>,
    /// Largest Descartes residual (real or complex) over generated quadruples.
    pub max_descartes_residual: f64,
}

impl CapPacking {
    pub fn len(&self) -> usize {
        self.caps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.caps.is_empty()
    }

    /// Total area of the open caps.
    pub fn cap_area(&self) -> f64 {
        self.caps.iter().map(Cap::area).sum()
    }

    /// Fraction of the sphere not covered by caps.
    pub fn residual_fraction(&self) -> f64 {
        1.0 - self.cap_area() / (4.0 * std::f64::consts::PI)
    }

    /// Largest deviation from tangency over generated tangent pairs.
    pub fn max_tangency_error(&self) -> f64 {
        self.tangencies
            .iter()
            .map(|&(i, j)| self.caps[i].separation(&self.caps[j]).abs())
            .fold(0.0, f64::max)
    }
}

/// Number of caps through `depth`: `4 + 2 (3^depth - 1)`.
pub fn cap_count(depth: usize) -> usize {
    4 + 2 * (3usize.pow(depth as u32) - 1)
}

fn tetrahedral_caps() -> [Cap; 4] {
    let s = 1.0 / 3f64.sqrt();
    let verts = [
        [1.0, 1.0, 1.0],
        [1.0, -1.0, -1.0],
        [-1.0, 1.0, -1.0],
        [-1.0, -1.0, 1.0],
    ];
    verts.map(|v| Cap {
        normal: [-v[0] * s, -v[1] * s, -v[2] * s],
        offset: s,
    })
}

pub fn apollonian_packing(depth: usize) -> Result<CapPacking> {
    if depth > MAX_DEPTH {
        return invalid(format!("depth {depth} exceeds the limit {MAX_DEPTH}"));
    }
    let initial = tetrahedral_caps();
    // The pole sits at the center of cap 0, so that cap becomes the exterior
    // of the outer circle and no boundary passes through the pole.
    let chart = Chart::new(initial[0].normal);
    let mut circles: Vec<PlanarCircle> = initial
        .iter()
        .map(|c| {
            let (center, _, curvature) = chart
                .cap_to_circle(&c.normal, c.offset)
                .expect("pole lies inside cap 0");
            PlanarCircle { center, curvature }
        })
        .collect();
    let mut caps: Vec<Cap> = initial.to_vec();
    let mut generations = vec![0; 4];
    let mut tangencies: Vec<(usize, usize)> = vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    let mut max_residual = descartes_residual([0, 1, 2, 3].map(|i| circles[i].curvature)).max(
        complex_descartes_residual([0, 1, 2, 3].map(|i| &circles[i])),
    );

    // (a, b, c, opposite)
    let mut gaps: Vec<[usize; 4]> = vec![[1, 2, 3, 0], [0, 2, 3, 1], [0, 1, 3, 2], [0, 1, 2, 3]];
    for generation in 1..=depth {
        let mut next = Vec::with_capacity(gaps.len() * 3);
        for [a, b, c, d] in gaps {
            let (ca, cb, cc, cd) = (circles[a], circles[b], circles[c], circles[d]);
            let k = 2.0 * (ca.curvature + cb.curvature + cc.curvature) - cd.curvature;
            let kz = (ca.weighted() + cb.weighted() + cc.weighted()) * 2.0 - cd.weighted();
            let fresh = PlanarCircle {
                center: kz / k,
                curvature: k,
            };
            max_residual = max_residual
                .max(descartes_residual([
                    ca.curvature,
                    cb.curvature,
                    cc.curvature,
                    k,
                ]))
                .max(complex_descartes_residual([&ca, &cb, &cc, &fresh]));
            let id = circles.len();
            circles.push(fresh);
            let (normal, offset) = chart.circle_to_cap(fresh.center, fresh.curvature);
            caps.push(Cap { normal, offset });
            generations.push(generation);
            tangencies.extend([(a, id), (b, id), (c, id)]);
            next.push([a, b, id, c]);
            next.push([a, id, c, b]);
            next.push([id, b, c, a]);
        }
        gaps = next;
    }

    Ok(CapPacking {
        caps,
        generation_depth: depth,
        generations,
        tangencies,
        max_descartes_residual: max_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn depth_zero_is_four_equal_tangent_caps() {
        let p = apollonian_packing(0).unwrap();
        assert_eq!(p.len(), 4);
        let r0 = p.caps[0].angular_radius();
        for c in &p.caps {
            assert!((c.angular_radius() - r0).abs() < 1e-14);
        }
        for i in 0..4 {
            for j in i + 1..4 {
                assert!(p.caps[i].separation(&p.caps[j]).abs() < 1e-12);
            }
        }
        // Area check: 1 - 4 * 2π(1 - 1/√3) / 4π = 2/√3 - 1.
        assert!((p.residual_fraction() - (2.0 / 3f64.sqrt() - 1.0)).abs() < 1e-14);
    }

    #[test]
    fn cap_counts_follow_gap_combinatorics() {
        for depth in 0..=5 {
            let p = apollonian_packing(depth).unwrap();
            assert_eq!(p.len(), cap_count(depth));
            let newest = p.generations.iter().filter(|&&g| g == depth).count();
            let expect = if depth == 0 {
                4
            } else {
                4 * 3usize.pow(depth as u32 - 1)
            };
            assert_eq!(newest, expect);
        }
        assert_eq!(apollonian_packing(1).unwrap().len(), 8);
        assert!(apollonian_packing(MAX_DEPTH + 1).is_err());
    }

    #[test]
    fn tangency_and_descartes_residuals() {
        for depth in [0, 1, 3, 6, 8] {
            let p = apollonian_packing(depth).unwrap();
            assert!(
                p.max_descartes_residual <= 1e-9,
                "depth {depth}: {}",
                p.max_descartes_residual
            );
            assert!(
                p.max_tangency_error() <= 1e-9,
                "depth {depth}: {}",
                p.max_tangency_error()
            );
            for c in &p.caps {
                assert!((norm3(&c.normal) - 1.0).abs() <= 1e-12);
                assert!(c.offset > -1.0 && c.offset < 1.0);
            }
        }
    }

    #[test]
    fn caps_are_pairwise_disjoint() {
        let p = apollonian_packing(4).unwrap();
        for i in 0..p.len() {
            for j in i + 1..p.len() {
                assert!(p.caps[i].separation(&p.caps[j]) >= -1e-9, "{i} {j}");
            }
        }
    }

    #[test]
    fn cap_validation() {
        assert!(Cap::new([1.0, 0.0, 0.0], 0.5).is_ok());
        assert!(Cap::new([2.0, 0.0, 0.0], 0.5).is_err());
        assert!(Cap::new([1.0, 0.0, 0.0], 1.0).is_err());
    }
}
