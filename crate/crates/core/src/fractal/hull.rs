use std::collections::BTreeMap;

use serde::Serialize;

use super::sampling::CapIndex;
use super::{cross3, dot3, norm3, normalize3, Cap, CapPacking, Vec3};
use crate::error::{invalid, Error, Result};
use crate::linalg::affine_rank;
use crate::rng::CounterRng;
use crate::tol;

/// Exposed face of the gasket hull.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum HullFace {
    Point {
        at: Vec3,
    },
    /// The flat disk spanned by a cap's boundary circle.
    Disk {
        center: Vec3,
        normal: Vec3,
        radius: f64,
    },
}

impl HullFace {
    pub fn dim(&self) -> usize {
        match self {
            HullFace::Point { .. } => 0,
            HullFace::Disk { .. } => 2,
        }
    }
}

/// Convex hull of the residual set of a packing: the unit ball with every
/// open cap sliced off along its plane.
pub struct GasketHull<'a> {
    caps: &'a [Cap],
    index: CapIndex,
}

impl<'a> GasketHull<'a> {
    pub fn new(packing: &'a CapPacking) -> Self {
        Self {
            caps: &packing.caps,
            index: CapIndex::new(&packing.caps),
        }
    }

    fn unit(u: &Vec3) -> Result<(Vec3, f64)> {
        let n = norm3(u);
        if !(n > 0.0) || !n.is_finite() {
            return invalid("direction must be nonzero and finite");
        }
        Ok((normalize3(u), n))
    }

    pub fn support_value(&self, u: &Vec3) -> Result<f64> {
        let (v, len) = Self::unit(u)?;
        Ok(len
            * match self.index.find(self.caps, &v) {
                None => 1.0,
                Some(id) => {
                    let cap = &self.caps[id];
                    let along = dot3(&v, &cap.normal);
                    let across = (1.0 - along * along).max(0.0).sqrt();
                    cap.offset * along + (1.0 - cap.offset * cap.offset).sqrt() * across
                }
            })
    }

    /// A direction outside every open cap exposes itself. Inside cap `i` the
    /// maximizer moves to the cap's boundary circle, and the cap normal itself
    /// exposes the whole disk.
    pub fn exposed_face(&self, u: &Vec3) -> Result<HullFace> {
        let (v, _) = Self::unit(u)?;
        let Some(id) = self.index.find(self.caps, &v) else {
            return Ok(HullFace::Point { at: v });
        };
        let cap = &self.caps[id];
        let along = dot3(&v, &cap.normal);
        let perp = [
            v[0] - along * cap.normal[0],
            v[1] - along * cap.normal[1],
            v[2] - along * cap.normal[2],
        ];
        let radius = (1.0 - cap.offset * cap.offset).sqrt();
        if norm3(&perp) <= tol::FACE {
            return Ok(disk_of(cap));
        }
        let w = normalize3(&perp);
        let at = [0, 1, 2].map(|k| cap.offset * cap.normal[k] + radius * w[k]);
        Ok(HullFace::Point { at })
    }

    /// Whether `x` on the sphere is the unique maximizer of its own direction.
    pub fn is_exposed_point(&self, x: &Vec3) -> bool {
        let Ok(h) = self.support_value(x) else {
            return false;
        };
        (h - 1.0).abs() <= tol::POINT
            && matches!(self.exposed_face(x), Ok(HullFace::Point { at }) if (0..3).all(|k| (at[k] - x[k]).abs() <= tol::POINT))
    }
}

fn disk_of(cap: &Cap) -> HullFace {
    HullFace::Disk {
        center: cap.normal.map(|c| c * cap.offset),
        normal: cap.normal,
        radius: (1.0 - cap.offset * cap.offset).sqrt(),
    }
}

fn circle_points(cap: &Cap, count: usize) -> Vec<Vec<f64>> {
    let n = cap.normal;
    let helper = if n[0].abs() < 0.9 {
        [1.0, 0.0, 0.0]
    } else {
        [0.0, 1.0, 0.0]
    };
    let a = normalize3(&cross3(&helper, &n));
    let b = cross3(&n, &a);
    let r = (1.0 - cap.offset * cap.offset).sqrt();
    (0..count)
        .map(|i| {
            let t = std::f64::consts::TAU * i as f64 / count as f64;
            (0..3)
                .map(|k| cap.offset * n[k] + r * (t.cos() * a[k] + t.sin() * b[k]))
                .collect()
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct FaceCensus {
    pub depth: usize,
    pub cap_count: usize,
    /// One flat disk per cap, in cap order.
    pub disk_faces: usize,
    /// Dimensions seen over random directions.
    pub direction_histogram: BTreeMap<usize, usize>,
    /// Every proper-face dimension found (disks and sampled faces).
    pub proper_dims: Vec<usize>,
}

pub const CENSUS_DIRECTIONS: u64 = 10_000;
/// Fixed so the census is a pure function of the packing.
pub const CENSUS_SEED: u64 = 0x63656e73;
const CIRCLE_SAMPLES: usize = 12;

/// Verifies the disk face of every cap and probes random directions.
pub fn face_census(packing: &CapPacking) -> Result<FaceCensus> {
    let hull = GasketHull::new(packing);
    let mut dims = std::collections::BTreeSet::new();
    for (i, cap) in packing.caps.iter().enumerate() {
        let h = hull.support_value(&cap.normal)?;
        if (h - cap.offset).abs() > tol::FACE {
            return Err(Error::VerificationFailed(format!(
                "cap {i}: support {h} differs from offset {}",
                cap.offset
            )));
        }
        let face = hull.exposed_face(&cap.normal)?;
        let rank = affine_rank(&circle_points(cap, CIRCLE_SAMPLES));
        if face.dim() != 2 || rank != 2 {
            return Err(Error::VerificationFailed(format!(
                "cap {i}: face of dimension {} with sampled rank {rank}",
                face.dim()
            )));
        }
        dims.insert(2);
    }
    let rng = CounterRng::new(CENSUS_SEED);
    let mut histogram = BTreeMap::new();
    for i in 0..CENSUS_DIRECTIONS {
        let v = rng.unit_vector(i, 3);
        let d = hull.exposed_face(&[v[0], v[1], v[2]])?.dim();
        *histogram.entry(d).or_insert(0) += 1;
        dims.insert(d);
    }
    Ok(FaceCensus {
        depth: packing.generation_depth,
        cap_count: packing.len(),
        disk_faces: packing.len(),
        direction_histogram: histogram,
        proper_dims: dims.into_iter().collect(),
    })
}
