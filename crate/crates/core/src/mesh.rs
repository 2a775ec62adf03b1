//! Triangle meshes of 3-D bodies from support points on a geodesic grid.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use crate::bodies::{dedupe_points, ConvexBody};
use crate::error::{invalid, Error, Result};
use crate::rng::CounterRng;
use crate::tol;

type P3 = [f64; 3];

pub const MAX_RESOLUTION: usize = 6;

const JITTER: f64 = 1e-8;
const JITTER_SEED: u64 = 0x6a6974;

#[derive(Clone, Debug, PartialEq)]
pub struct Mesh {
    pub vertices: Vec<P3>,
    /// Counter-clockwise seen from outside.
    pub triangles: Vec<[usize; 3]>,
}

fn sub(a: &P3, b: &P3) -> P3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross(a: &P3, b: &P3) -> P3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn dot(a: &P3, b: &P3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn unit(a: &P3) -> P3 {
    let n = dot(a, a).sqrt();
    [a[0] / n, a[1] / n, a[2] / n]
}

/// Icosahedron subdivided `resolution` times, plus the six axis directions.
pub fn geodesic_directions(resolution: usize) -> Vec<P3> {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let mut verts: Vec<P3> = [
        [-1.0, phi, 0.0],
        [1.0, phi, 0.0],
        [-1.0, -phi, 0.0],
        [1.0, -phi, 0.0],
        [0.0, -1.0, phi],
        [0.0, 1.0, phi],
        [0.0, -1.0, -phi],
        [0.0, 1.0, -phi],
        [phi, 0.0, -1.0],
        [phi, 0.0, 1.0],
        [-phi, 0.0, -1.0],
        [-phi, 0.0, 1.0],
    ]
    .iter()
    .map(unit)
    .collect();
    let mut faces: Vec<[usize; 3]> = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    for _ in 0..resolution {
        let mut mid: HashMap<(usize, usize), usize> = HashMap::new();
        let mut next = Vec::with_capacity(faces.len() * 4);
        for [a, b, c] in faces {
            let mut m = |i: usize, j: usize| {
                *mid.entry((i.min(j), i.max(j))).or_insert_with(|| {
                    let p = [0, 1, 2].map(|k| verts[i][k] + verts[j][k]);
                    verts.push(unit(&p));
                    verts.len() - 1
                })
            };
            let (ab, bc, ca) = (m(a, b), m(b, c), m(c, a));
            next.extend([[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]);
        }
        faces = next;
    }
    for k in 0..3 {
        for s in [1.0, -1.0] {
            let mut e = [0.0; 3];
            e[k] = s;
            verts.push(e);
        }
    }
    verts
}

/// Convex hull mesh of the body's support points over the geodesic grid.
pub fn export_mesh(body: &ConvexBody, resolution: usize) -> Result<Mesh> {
    if body.ambient_dim() != 3 {
        return invalid(format!(
            "mesh export needs a body in R^3, got ambient dimension {}",
            body.ambient_dim()
        ));
    }
    if resolution > MAX_RESOLUTION {
        return invalid(format!(
            "resolution {resolution} exceeds the limit {MAX_RESOLUTION}"
        ));
    }
    let points: Vec<Vec<f64>> = geodesic_directions(resolution)
        .iter()
        .map(|u| body.support_point_raw(u))
        .collect();
    let points: Vec<P3> = dedupe_points(points)
        .into_iter()
        .map(|p| [p[0], p[1], p[2]])
        .collect();
    convex_hull(&points)
}

/// Incremental convex hull. Fails when the points span less than 3 dimensions.
pub fn convex_hull(points: &[P3]) -> Result<Mesh> {
    let scale = tol::scale_of(points.iter().flatten().copied());
    let eps = 1e-10 * scale;
    let degenerate = || Error::InvalidArgument("support points do not span a 3-D hull".into());
    if points.len() < 4 {
        return Err(degenerate());
    }
    // Initial tetrahedron from well-separated points.
    let i0 = 0;
    let i1 = (0..points.len())
        .max_by(|&a, &b| {
            let da = sub(&points[a], &points[i0]);
            let db = sub(&points[b], &points[i0]);
            dot(&da, &da).total_cmp(&dot(&db, &db))
        })
        .unwrap();
    let line = sub(&points[i1], &points[i0]);
    let i2 = (0..points.len())
        .max_by(|&a, &b| {
            let ca = cross(&line, &sub(&points[a], &points[i0]));
            let cb = cross(&line, &sub(&points[b], &points[i0]));
            dot(&ca, &ca).total_cmp(&dot(&cb, &cb))
        })
        .unwrap();
    let normal = cross(&line, &sub(&points[i2], &points[i0]));
    let height = |i: usize| dot(&normal, &sub(&points[i], &points[i0]));
    let i3 = (0..points.len())
        .max_by(|&a, &b| height(a).abs().total_cmp(&height(b).abs()))
        .unwrap();
    let nlen = dot(&normal, &normal).sqrt();
    if dot(&line, &line).sqrt() <= eps || nlen <= eps * scale || height(i3).abs() / nlen <= eps {
        return Err(degenerate());
    }

    // Coplanar and collinear support points are common (flat faces, ruled
    // patches). A tiny deterministic jitter resolves them into a consistent
    // triangulation; output vertices keep their original coordinates.
    let rng = CounterRng::new(JITTER_SEED);
    let work: Vec<P3> = points
        .iter()
        .enumerate()
        .map(|(i, p)| {
            [0, 1, 2].map(|k| {
                p[k] + JITTER * scale * (2.0 * rng.uniform_at(3 * i as u64 + k as u64) - 1.0)
            })
        })
        .collect();
    let eps = 1e-13 * scale;
    let mut faces: Vec<Option<Face>> = Vec::new();
    let push = |faces: &mut Vec<Option<Face>>, tri: [usize; 3]| {
        faces.push(Some(Face::new(&work, tri)));
    };
    let base = if height(i3) > 0.0 {
        [i0, i2, i1]
    } else {
        [i0, i1, i2]
    };
    push(&mut faces, base);
    push(&mut faces, [base[1], base[0], i3]);
    push(&mut faces, [base[2], base[1], i3]);
    push(&mut faces, [base[0], base[2], i3]);

    let used: HashSet<usize> = [i0, i1, i2, i3].into();
    for (pi, p) in work.iter().enumerate() {
        if used.contains(&pi) {
            continue;
        }
        let visible: Vec<usize> = faces
            .iter()
            .enumerate()
            .filter_map(|(k, f)| f.as_ref().filter(|f| f.distance(p) > eps).map(|_| k))
            .collect();
        if visible.is_empty() {
            continue;
        }
        let mut edges: HashSet<(usize, usize)> = HashSet::new();
        for &k in &visible {
            let t = faces[k].take().unwrap().tri;
            for e in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
                if !edges.remove(&(e.1, e.0)) {
                    edges.insert(e);
                }
            }
        }
        let mut horizon: Vec<(usize, usize)> = edges.into_iter().collect();
        horizon.sort_unstable();
        for (a, b) in horizon {
            push(&mut faces, [a, b, pi]);
        }
    }

    let tris: Vec<[usize; 3]> = faces.into_iter().flatten().map(|f| f.tri).collect();
    let mut remap: HashMap<usize, usize> = HashMap::new();
    let mut vertices = Vec::new();
    let mut ordered: Vec<usize> = tris.iter().flatten().copied().collect();
    ordered.sort_unstable();
    ordered.dedup();
    for i in ordered {
        remap.insert(i, vertices.len());
        vertices.push(points[i]);
    }
    Ok(Mesh {
        vertices,
        triangles: tris.iter().map(|t| t.map(|i| remap[&i])).collect(),
    })
}

struct Face {
    tri: [usize; 3],
    normal: P3,
    offset: f64,
}

impl Face {
    fn new(points: &[P3], tri: [usize; 3]) -> Self {
        let [a, b, c] = tri.map(|i| points[i]);
        let normal = unit(&cross(&sub(&b, &a), &sub(&c, &a)));
        Self {
            tri,
            normal,
            offset: dot(&normal, &a),
        }
    }

    fn distance(&self, p: &P3) -> f64 {
        dot(&self.normal, p) - self.offset
    }
}

impl Mesh {
    fn plane(&self, t: &[usize; 3]) -> (P3, f64) {
        let [a, b, c] = t.map(|i| self.vertices[i]);
        let n = unit(&cross(&sub(&b, &a), &sub(&c, &a)));
        (n, dot(&n, &a))
    }

    /// Distinct supporting planes among the triangles.
    pub fn facet_planes(&self) -> usize {
        let mut planes: Vec<(P3, f64)> = Vec::new();
        for t in &self.triangles {
            let (n, h) = self.plane(t);
            let known = planes
                .iter()
                .any(|(m, g)| (0..3).all(|k| (m[k] - n[k]).abs() <= 1e-9) && (g - h).abs() <= 1e-9);
            if !known {
                planes.push((n, h));
            }
        }
        planes.len()
    }

    /// Every edge borders exactly two triangles, with opposite orientations.
    pub fn is_watertight(&self) -> bool {
        let mut edges: HashMap<(usize, usize), usize> = HashMap::new();
        for t in &self.triangles {
            for e in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
                *edges.entry(e).or_default() += 1;
            }
        }
        edges
            .iter()
            .all(|(&(a, b), &n)| n == 1 && edges.get(&(b, a)) == Some(&1))
    }

    /// Extent of the vertices along a unit axis.
    pub fn width_along(&self, axis: &P3) -> f64 {
        let (lo, hi) = self
            .vertices
            .iter()
            .fold((f64::MAX, f64::MIN), |(lo, hi), v| {
                let s = dot(axis, v);
                (lo.min(s), hi.max(s))
            });
        hi - lo
    }

    pub fn to_obj(&self) -> String {
        let mut out = String::new();
        for v in &self.vertices {
            writeln!(out, "v {:.16e} {:.16e} {:.16e}", v[0], v[1], v[2]).unwrap();
        }
        for t in &self.triangles {
            writeln!(out, "f {} {} {}", t[0] + 1, t[1] + 1, t[2] + 1).unwrap();
        }
        out
    }
}
