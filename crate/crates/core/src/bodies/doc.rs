use serde::{Deserialize, Serialize};

use super::{ConvexBody, SpectralFace};
use crate::error::{invalid, Error, Result};

/// JSON shape of a body: a tagged union keyed by `"type"`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum BodyDoc {
    Ball {
        dim: usize,
        center: Vec<f64>,
        radius: f64,
    },
    Vpolytope {
        vertices: Vec<Vec<f64>>,
    },
    Embed {
        dim: usize,
        inner: Box<BodyDoc>,
    },
    Sum {
        left: Box<BodyDoc>,
        right: Box<BodyDoc>,
    },
    Spectrahedron {
        n: usize,
    },
    /// Only valid with a spectrahedron as `inner`.
    SpectralFace {
        inner: Box<BodyDoc>,
        columns: Vec<Vec<f64>>,
    },
}

impl TryFrom<BodyDoc> for ConvexBody {
    type Error = Error;

    fn try_from(doc: BodyDoc) -> Result<Self> {
        match doc {
            BodyDoc::Ball {
                dim,
                center,
                radius,
            } => ConvexBody::ball(dim, center, radius),
            BodyDoc::Vpolytope { vertices } => ConvexBody::vpolytope(vertices),
            BodyDoc::Embed { dim, inner } => ConvexBody::embed((*inner).try_into()?, dim),
            BodyDoc::Sum { left, right } => {
                ConvexBody::sum((*left).try_into()?, (*right).try_into()?)
            }
            BodyDoc::Spectrahedron { n } => ConvexBody::spectrahedron(n),
            BodyDoc::SpectralFace { inner, columns } => match *inner {
                BodyDoc::Spectrahedron { n } => ConvexBody::spectral_face(n, columns),
                _ => invalid("spectral_face must wrap a spectrahedron"),
            },
        }
    }
}

impl From<ConvexBody> for BodyDoc {
    fn from(body: ConvexBody) -> Self {
        match body {
            ConvexBody::Ball {
                dim,
                center,
                radius,
            } => BodyDoc::Ball {
                dim,
                center,
                radius,
            },
            ConvexBody::VPolytope { vertices } => BodyDoc::Vpolytope { vertices },
            ConvexBody::Embed { inner, dim } => BodyDoc::Embed {
                dim,
                inner: Box::new((*inner).into()),
            },
            ConvexBody::Sum { left, right } => BodyDoc::Sum {
                left: Box::new((*left).into()),
                right: Box::new((*right).into()),
            },
            ConvexBody::Spectrahedron { n } => BodyDoc::Spectrahedron { n },
            ConvexBody::SpectralFace(SpectralFace { k, columns }) => BodyDoc::SpectralFace {
                inner: Box::new(BodyDoc::Spectrahedron { n: k }),
                columns,
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bodies::{spectral, Direction};

    #[test]
    fn parses_documented_shapes() {
        let text = r#"{"type":"sum",
            "left":{"type":"ball","dim":3,"center":[0,0,0],"radius":1},
            "right":{"type":"embed","dim":3,"inner":{"type":"vpolytope","vertices":[[0],[1]]}}}"#;
        let body = ConvexBody::from_json(text).unwrap();
        assert_eq!(body.ambient_dim(), 3);
        assert_eq!(body.body_dim(), 3);
        let s = ConvexBody::from_json(r#"{"type":"spectrahedron","n":3}"#).unwrap();
        assert_eq!(s.ambient_dim(), 6);
    }

    #[test]
    fn rejects_invalid_documents() {
        for bad in [
            r#"{"type":"ball","dim":3,"center":[0,0],"radius":1}"#,
            r#"{"type":"vpolytope","vertices":[]}"#,
            r#"{"type":"embed","dim":1,"inner":{"type":"ball","dim":2,"center":[0,0],"radius":1}}"#,
            r#"{"type":"spectral_face","inner":{"type":"ball","dim":1,"center":[0],"radius":1},"columns":[[1]]}"#,
            r#"{"type":"cube","dim":3}"#,
        ] {
            assert!(ConvexBody::from_json(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn spectral_faces_round_trip() {
        let s = ConvexBody::spectrahedron(3).unwrap();
        let u = spectral::flatten(&[
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, -1.0],
        ]);
        let f = s.exposed_face(&Direction::new(u)).unwrap();
        assert!(matches!(f, ConvexBody::SpectralFace(_)));
        let back = ConvexBody::from_json(&f.to_json().unwrap()).unwrap();
        assert_eq!(back, f);
        assert_eq!(back.body_dim(), 2);
    }
}
