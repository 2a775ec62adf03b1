//! Bodies with a prescribed facial-dimension pattern, and a small catalog of
//! named low-dimensional fixtures.
//!
//! The inductive step sums a unit ball in `R^{d_k}` with a zero-padded copy
//! of a body realizing the truncated pattern. Ball faces are points or the
//! whole ball, so proper faces of the sum are translates of faces of the
//! embedded body; the copy itself is exposed by the last coordinate axis.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bodies::ConvexBody;
use crate::error::{invalid, Error, Result};

/// Strictly increasing positive face dimensions `(d_1, ..., d_k)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Pattern(Vec<usize>);

impl Pattern {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.contains(&0) {
            return invalid("pattern entries must be positive");
        }
        if dims.windows(2).any(|w| w[0] >= w[1]) {
            return invalid(format!("pattern {dims:?} is not strictly increasing"));
        }
        Ok(Self(dims))
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn dims(&self) -> &[usize] {
        &self.0
    }

    pub fn top(&self) -> usize {
        self.0.last().copied().unwrap_or(0)
    }

    /// The pattern without its largest entry.
    pub fn truncated(&self) -> Pattern {
        Pattern(self.0[..self.0.len().saturating_sub(1)].to_vec())
    }

    /// Every pattern whose entries lie in `1..=max`, ordered by bitmask.
    pub fn all_up_to(max: usize) -> Vec<Pattern> {
        (0u32..1 << max)
            .map(|mask| Pattern((1..=max).filter(|d| mask >> (d - 1) & 1 == 1).collect()))
            .collect()
    }
}

impl TryFrom<Vec<usize>> for Pattern {
    type Error = Error;

    fn try_from(v: Vec<usize>) -> Result<Self> {
        Pattern::new(v)
    }
}

impl From<Pattern> for Vec<usize> {
    fn from(p: Pattern) -> Self {
        p.0
    }
}

impl FromStr for Pattern {
    type Err = Error;

    /// Comma-separated entries, e.g. `"1,3,6"`; the empty string is `()`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "()" {
            return Ok(Pattern::empty());
        }
        let dims = s
            .trim_matches(|c| c == '(' || c == ')')
            .split(',')
            .map(|t| {
                let t = t.trim();
                t.parse::<i64>()
                    .map_err(|_| Error::InvalidArgument(format!("bad pattern entry `{t}`")))
                    .and_then(|v| {
                        usize::try_from(v).map_err(|_| {
                            Error::InvalidArgument(format!("pattern entry {v} is negative"))
                        })
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        Pattern::new(dims)
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|d| d.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

fn segment() -> ConvexBody {
    ConvexBody::VPolytope {
        vertices: vec![vec![0.0], vec![1.0]],
    }
}

fn triangle() -> ConvexBody {
    ConvexBody::VPolytope {
        vertices: vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]],
    }
}

/// A compact convex body of dimension `d_k` whose faces have exactly the
/// dimensions `{0} ∪ d`. The empty pattern gives a single point of `R^1`.
pub fn build_pattern(d: &Pattern) -> ConvexBody {
    match d.dims() {
        [] => ConvexBody::VPolytope {
            vertices: vec![vec![0.0]],
        },
        [1] => segment(),
        [2] => ConvexBody::unit_ball(2),
        [1, 2] => triangle(),
        [n] => ConvexBody::unit_ball(*n),
        dims => {
            let n = *dims.last().expect("nonempty");
            let inner = build_pattern(&d.truncated());
            ConvexBody::Sum {
                left: Box::new(ConvexBody::unit_ball(n)),
                right: Box::new(ConvexBody::Embed {
                    inner: Box::new(inner),
                    dim: n,
                }),
            }
        }
    }
}

pub const CATALOG: &[&str] = &[
    "point",
    "segment",
    "disk",
    "triangle",
    "ball3",
    "tetrahedron",
    "hull-circle-two-points",
    "stadium2d",
    "square-plus-disk",
];

/// Vertices of the regular 64-gon inscribed in the unit circle of `z = 0`.
const CIRCLE_SIDES: usize = 64;

/// Named fixture bodies.
///
/// `hull-circle-two-points` is a polytope: a 64-gon standing in for the unit
/// circle, plus `(0, 0, ±1)`. Its faces are those of a bipyramid, not of the
/// smooth body it approximates; it exists for mesh export.
pub fn catalog(name: &str) -> Result<ConvexBody> {
    let body = match name {
        "point" => ConvexBody::VPolytope {
            vertices: vec![vec![0.0]],
        },
        "segment" => segment(),
        "disk" => ConvexBody::unit_ball(2),
        "triangle" => triangle(),
        "ball3" => ConvexBody::unit_ball(3),
        "tetrahedron" => ConvexBody::VPolytope {
            vertices: vec![
                vec![0.0, 0.0, 0.0],
                vec![1.0, 0.0, 0.0],
                vec![0.0, 1.0, 0.0],
                vec![0.0, 0.0, 1.0],
            ],
        },
        "hull-circle-two-points" => {
            let mut v: Vec<Vec<f64>> = (0..CIRCLE_SIDES)
                .map(|i| {
                    let t = std::f64::consts::TAU * i as f64 / CIRCLE_SIDES as f64;
                    vec![t.cos(), t.sin(), 0.0]
                })
                .collect();
            v.push(vec![0.0, 0.0, 1.0]);
            v.push(vec![0.0, 0.0, -1.0]);
            ConvexBody::vpolytope(v)?
        }
        "stadium2d" => ConvexBody::sum(
            ConvexBody::unit_ball(2),
            ConvexBody::vpolytope(vec![vec![0.0, 0.0], vec![2.0, 0.0]])?,
        )?,
        "square-plus-disk" => ConvexBody::sum(
            ConvexBody::unit_ball(2),
            ConvexBody::vpolytope(vec![
                vec![0.0, 0.0],
                vec![1.0, 0.0],
                vec![1.0, 1.0],
                vec![0.0, 1.0],
            ])?,
        )?,
        other => return Err(Error::UnknownFixture(other.to_string())),
    };
    Ok(body)
}
