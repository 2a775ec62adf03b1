use rayon::prelude::*;
use serde::Serialize;

use super::{Cap, CapPacking, Vec3};
use crate::error::{invalid, Error, Result};
use crate::rng::CounterRng;

/// Uniform grid over `[-1, 1]^3` listing, per cell, the caps that may reach it.
#[derive(Clone, Debug)]
pub struct CapIndex {
    cells: Vec<Vec<u32>>,
    res: usize,
}

const GRID_RES: usize = 64;

impl CapIndex {
    pub fn new(caps: &[Cap]) -> Self {
        let res = GRID_RES;
        let h = 2.0 / res as f64;
        let mut cells = vec![Vec::new(); res * res * res];
        let cell_of = |v: f64| (((v + 1.0) / h).floor().max(0.0) as usize).min(res - 1);
        for (id, cap) in caps.iter().enumerate() {
            // Points of the cap lie within chord distance rho of its normal.
            let rho = (2.0 * (1.0 - cap.offset)).max(0.0).sqrt() + 1e-9;
            let lo: Vec<usize> = (0..3).map(|k| cell_of(cap.normal[k] - rho)).collect();
            let hi: Vec<usize> = (0..3).map(|k| cell_of(cap.normal[k] + rho)).collect();
            for i in lo[0]..=hi[0] {
                for j in lo[1]..=hi[1] {
                    for l in lo[2]..=hi[2] {
                        let bmin = [
                            -1.0 + i as f64 * h,
                            -1.0 + j as f64 * h,
                            -1.0 + l as f64 * h,
                        ];
                        let mut near = 0.0;
                        let mut far = 0.0;
                        let mut to_center = 0.0;
                        for k in 0..3 {
                            let (a, b) = (bmin[k], bmin[k] + h);
                            let c = if 0.0 < a {
                                a
                            } else if 0.0 > b {
                                b
                            } else {
                                0.0
                            };
                            near += c * c;
                            far += a.abs().max(b.abs()).powi(2);
                            let n = cap.normal[k];
                            let d = if n < a {
                                a - n
                            } else if n > b {
                                n - b
                            } else {
                                0.0
                            };
                            to_center += d * d;
                        }
                        if near <= 1.0 && far >= 1.0 && to_center <= rho * rho {
                            cells[(i * res + j) * res + l].push(id as u32);
                        }
                    }
                }
            }
        }
        // Larger caps first: they reject most points.
        for list in cells.iter_mut() {
            list.sort_by(|&a, &b| caps[a as usize].offset.total_cmp(&caps[b as usize].offset));
        }
        Self { cells, res }
    }

    fn cell(&self, x: &Vec3) -> &[u32] {
        let h = 2.0 / self.res as f64;
        let idx = |v: f64| (((v + 1.0) / h).floor().max(0.0) as usize).min(self.res - 1);
        &self.cells[(idx(x[0]) * self.res + idx(x[1])) * self.res + idx(x[2])]
    }

    /// A cap whose open interior contains the unit vector `x`, if any.
    pub fn find(&self, caps: &[Cap], x: &Vec3) -> Option<usize> {
        self.cell(x)
            .iter()
            .map(|&id| id as usize)
            .find(|&id| caps[id].contains(x))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ResidualSample {
    pub points: Vec<Vec3>,
    /// Candidates drawn up to and including the last accepted point.
    pub candidates: u64,
}

impl ResidualSample {
    pub fn acceptance_ratio(&self) -> f64 {
        self.points.len() as f64 / self.candidates as f64
    }
}

const CHUNK: u64 = 1 << 16;
/// Candidates drawn before the acceptance-rate floor is enforced.
const MIN_CANDIDATES_FOR_ABORT: u64 = 100_000;
pub const MIN_ACCEPTANCE: f64 = 1e-4;

/// Uniform sphere points outside every open cap, by rejection. Candidate `i`
/// depends only on `(seed, i)`.
pub fn residual_sample(packing: &CapPacking, n: usize, seed: u64) -> Result<ResidualSample> {
    if n == 0 {
        return invalid("residual sample size must be at least 1");
    }
    let index = CapIndex::new(&packing.caps);
    let rng = CounterRng::new(seed).substream(0x7265736964);
    let mut accepted: Vec<(u64, Vec3)> = Vec::with_capacity(n);
    let mut drawn = 0u64;
    while accepted.len() < n {
        let chunk: Vec<(u64, Vec3)> = (drawn..drawn + CHUNK)
            .into_par_iter()
            .filter_map(|i| {
                let v = rng.unit_vector(i, 3);
                let x = [v[0], v[1], v[2]];
                index.find(&packing.caps, &x).is_none().then_some((i, x))
            })
            .collect();
        accepted.extend(chunk);
        drawn += CHUNK;
        if drawn >= MIN_CANDIDATES_FOR_ABORT
            && (accepted.len() as f64) < MIN_ACCEPTANCE * drawn as f64
        {
            return Err(Error::Sampling(format!(
                "acceptance {} of {drawn} candidates is below {MIN_ACCEPTANCE} (depth {}, {} caps)",
                accepted.len(),
                packing.generation_depth,
                packing.len()
            )));
        }
    }
    accepted.truncate(n);
    let candidates = accepted.last().map(|(i, _)| i + 1).unwrap_or(drawn);
    Ok(ResidualSample {
        points: accepted.into_iter().map(|(_, x)| x).collect(),
        candidates,
    })
}
