//! JSON domain specifications.
//!
//! ```json
//! {"type": "product",
//!  "left":  {"type": "half-plane", "point": "0", "normal": "i"},
//!  "right": {"type": "disk", "center": "0", "radius": 1}}
//! ```
//!
//! Complex numbers are written as literals (`"1-2i"`), plain numbers or
//! `[re, im]` pairs; they are always written back as literals.

use std::sync::Arc;

use kcat0_core::domains::{DefiningFunction, Polynomial};
use kcat0_core::{CMatrix, CPoint, Complex64, ConvexDomain, Node};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::complex::{format_complex, parse_complex};
use crate::error::CliError;

/// Complex number in a spec.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cx(pub Complex64);

impl Serialize for Cx {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_complex(self.0))
    }
}

impl<'de> Deserialize<'de> for Cx {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Pair([f64; 2]),
            Lit(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(x) => Ok(Cx(Complex64::new(x, 0.0))),
            Raw::Pair([re, im]) => Ok(Cx(Complex64::new(re, im))),
            Raw::Lit(s) => parse_complex(&s).map(Cx).map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Monomial {
    /// Exponents of `[x_1, y_1, x_2, y_2, ...]`.
    pub exponents: Vec<u32>,
    pub coef: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolynomialSpec {
    pub dim: usize,
    pub terms: Vec<Monomial>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum DomainSpec {
    Disk {
        center: Cx,
        radius: f64,
    },
    HalfPlane {
        point: Cx,
        normal: Cx,
    },
    Sector {
        vertex: Cx,
        alpha: f64,
        beta: f64,
    },
    Ball {
        center: Vec<Cx>,
        radius: f64,
    },
    Polydisk {
        centers: Vec<Cx>,
        radii: Vec<f64>,
    },
    Product {
        left: Box<DomainSpec>,
        right: Box<DomainSpec>,
    },
    Affine {
        matrix: Vec<Vec<Cx>>,
        offset: Vec<Cx>,
        inner: Box<DomainSpec>,
    },
    Intersection {
        members: Vec<DomainSpec>,
    },
    /// `{r < 0}` for a polynomial `r` in the real coordinates.
    Graph {
        polynomial: PolynomialSpec,
        c_proper: bool,
    },
}

fn point(v: &[Cx]) -> kcat0_core::Result<CPoint> {
    CPoint::new(v.iter().map(|z| z.0).collect())
}

fn cxs(p: &CPoint) -> Vec<Cx> {
    p.coords().iter().map(|&z| Cx(z)).collect()
}

impl DomainSpec {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(CliError::from_json)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("specs always serialize")
    }

    pub fn build(&self) -> kcat0_core::Result<ConvexDomain> {
        Ok(match self {
            DomainSpec::Disk { center, radius } => ConvexDomain::disk(center.0, *radius)?,
            DomainSpec::HalfPlane { point, normal } => ConvexDomain::half_plane(point.0, normal.0)?,
            DomainSpec::Sector { vertex, alpha, beta } => ConvexDomain::sector(vertex.0, *alpha, *beta)?,
            DomainSpec::Ball { center, radius } => ConvexDomain::ball(point(center)?, *radius)?,
            DomainSpec::Polydisk { centers, radii } => ConvexDomain::polydisk(point(centers)?, radii.clone())?,
            DomainSpec::Product { left, right } => ConvexDomain::product(left.build()?, right.build()?),
            DomainSpec::Affine { matrix, offset, inner } => {
                let rows: Vec<Vec<Complex64>> = matrix.iter().map(|r| r.iter().map(|z| z.0).collect()).collect();
                ConvexDomain::affine_image_node(CMatrix::from_rows(&rows)?, point(offset)?, inner.build()?)?
            }
            DomainSpec::Intersection { members } => {
                ConvexDomain::intersection(members.iter().map(|m| m.build()).collect::<kcat0_core::Result<_>>()?)?
            }
            DomainSpec::Graph { polynomial, c_proper } => {
                let p =
                    Polynomial::new(polynomial.dim, polynomial.terms.iter().map(|t| (t.exponents.clone(), t.coef)))?;
                ConvexDomain::graph(Arc::new(p), *c_proper)?
            }
        })
    }

    /// Spec of a domain tree; `None` for defining functions without a polynomial form.
    pub fn from_domain(d: &ConvexDomain) -> Option<Self> {
        Some(match d.node() {
            Node::Disk { center, radius } => DomainSpec::Disk { center: Cx(*center), radius: *radius },
            Node::HalfPlane { point, normal } => DomainSpec::HalfPlane { point: Cx(*point), normal: Cx(*normal) },
            Node::Sector { vertex, alpha, beta } => {
                DomainSpec::Sector { vertex: Cx(*vertex), alpha: *alpha, beta: *beta }
            }
            Node::Ball { center, radius } => DomainSpec::Ball { center: cxs(center), radius: *radius },
            Node::Polydisk { centers, radii } => DomainSpec::Polydisk { centers: cxs(centers), radii: radii.clone() },
            Node::Product(l, r) => {
                DomainSpec::Product { left: Box::new(Self::from_domain(l)?), right: Box::new(Self::from_domain(r)?) }
            }
            Node::AffineImage(img) => DomainSpec::Affine {
                matrix: img.matrix().rows().into_iter().map(|r| r.into_iter().map(Cx).collect()).collect(),
                offset: cxs(img.offset()),
                inner: Box::new(Self::from_domain(img.inner())?),
            },
            Node::Intersection(ms) => {
                DomainSpec::Intersection { members: ms.iter().map(Self::from_domain).collect::<Option<_>>()? }
            }
            Node::Graph(g) => {
                let p = g.function().polynomial()?;
                DomainSpec::Graph {
                    polynomial: PolynomialSpec {
                        dim: p.dim(),
                        terms: p.terms().map(|(e, c)| Monomial { exponents: e.clone(), coef: c }).collect(),
                    },
                    c_proper: g.declared_c_proper(),
                }
            }
        })
    }
}

fn c(re: f64, im: f64) -> Cx {
    Cx(Complex64::new(re, im))
}

fn poly(dim: usize, terms: &[(&[u32], f64)]) -> PolynomialSpec {
    let mut terms: Vec<Monomial> = terms.iter().map(|(e, k)| Monomial { exponents: e.to_vec(), coef: *k }).collect();
    terms.sort_by(|a, b| a.exponents.cmp(&b.exponents));
    PolynomialSpec { dim, terms }
}

fn unit_disk() -> DomainSpec {
    DomainSpec::Disk { center: c(0.0, 0.0), radius: 1.0 }
}

fn upper() -> DomainSpec {
    DomainSpec::HalfPlane { point: c(0.0, 0.0), normal: c(0.0, 1.0) }
}

fn right() -> DomainSpec {
    DomainSpec::HalfPlane { point: c(0.0, 0.0), normal: c(1.0, 0.0) }
}

/// Named domains available through `--builtin`.
pub const BUILTINS: &[(&str, &str)] = &[
    ("disk", "unit disk"),
    ("halfplane", "upper half-plane"),
    ("right-halfplane", "right half-plane"),
    ("quarter", "sector 0 < arg z < pi/2"),
    ("ball", "unit ball of C^2"),
    ("polydisk", "unit bidisk"),
    ("halfplane-x-disk", "upper half-plane times unit disk"),
    ("quarter-x-disk", "quarter sector times unit disk"),
    ("two-ball", "B((1,0),1) ∩ B((0,1),1) in C^2"),
    ("quadrant", "right half-plane times right half-plane"),
    ("quartic", "{Im z1 > |z2|^4}"),
    ("ball-graph", "unit ball of C^2 as {|z|^2 - 1 < 0}"),
];

pub fn builtin(name: &str) -> Option<DomainSpec> {
    let ball = |center: [f64; 2]| DomainSpec::Ball { center: vec![c(center[0], 0.0), c(center[1], 0.0)], radius: 1.0 };
    let quarter = DomainSpec::Sector { vertex: c(0.0, 0.0), alpha: 0.0, beta: std::f64::consts::FRAC_PI_2 };
    Some(match name {
        "disk" => unit_disk(),
        "halfplane" => upper(),
        "right-halfplane" => right(),
        "quarter" => quarter,
        "ball" => ball([0.0, 0.0]),
        "polydisk" => DomainSpec::Polydisk { centers: vec![c(0.0, 0.0); 2], radii: vec![1.0, 1.0] },
        "halfplane-x-disk" => DomainSpec::Product { left: Box::new(upper()), right: Box::new(unit_disk()) },
        "quarter-x-disk" => DomainSpec::Product { left: Box::new(quarter), right: Box::new(unit_disk()) },
        "two-ball" => DomainSpec::Intersection { members: vec![ball([1.0, 0.0]), ball([0.0, 1.0])] },
        "quadrant" => DomainSpec::Product { left: Box::new(right()), right: Box::new(right()) },
        "quartic" => DomainSpec::Graph {
            polynomial: poly(
                2,
                &[(&[0, 1, 0, 0], -1.0), (&[0, 0, 4, 0], 1.0), (&[0, 0, 2, 2], 2.0), (&[0, 0, 0, 4], 1.0)],
            ),
            c_proper: true,
        },
        "ball-graph" => DomainSpec::Graph {
            polynomial: poly(
                2,
                &[
                    (&[2, 0, 0, 0], 1.0),
                    (&[0, 2, 0, 0], 1.0),
                    (&[0, 0, 2, 0], 1.0),
                    (&[0, 0, 0, 2], 1.0),
                    (&[0, 0, 0, 0], -1.0),
                ],
            ),
            c_proper: true,
        },
        _ => return None,
    })
}

/// Polynomial defining function of a graph spec.
pub fn defining_polynomial(spec: &DomainSpec) -> Option<Polynomial> {
    match spec {
        DomainSpec::Graph { polynomial, .. } => {
            Polynomial::new(polynomial.dim, polynomial.terms.iter().map(|t| (t.exponents.clone(), t.coef))).ok()
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_build() {
        for (name, _) in BUILTINS {
            let spec = builtin(name).unwrap();
            let d = spec.build().unwrap();
            assert_eq!(DomainSpec::from_domain(&d).unwrap(), spec, "{name}");
        }
        assert!(builtin("nope").is_none());
    }

    #[test]
    fn json_round_trip() {
        for (name, _) in BUILTINS {
            let spec = builtin(name).unwrap();
            let back = DomainSpec::parse(&spec.to_json()).unwrap();
            assert_eq!(back, spec);
            assert_eq!(back.to_json(), spec.to_json());
        }
    }

    #[test]
    fn accepts_numbers_and_pairs() {
        let s = DomainSpec::parse(r#"{"type":"disk","center":[0.5,-1],"radius":2}"#).unwrap();
        assert_eq!(s, DomainSpec::Disk { center: c(0.5, -1.0), radius: 2.0 });
        let s = DomainSpec::parse(r#"{"type":"half-plane","point":0,"normal":"i"}"#).unwrap();
        assert_eq!(s, upper());
    }

    #[test]
    fn errors_carry_positions() {
        let e = DomainSpec::parse("{\n  \"type\": \"disk\",\n  \"radius\": oops\n}").unwrap_err();
        match e {
            CliError::DomainJson { line, column, .. } => {
                assert_eq!(line, 3);
                assert!(column > 0);
            }
            other => panic!("{other:?}"),
        }
        assert!(DomainSpec::parse(r#"{"type":"disk","center":0,"radius":1,"extra":2}"#).is_err());
        let bad = DomainSpec::parse(r#"{"type":"disk","center":0,"radius":-1}"#).unwrap();
        assert!(bad.build().is_err());
    }
}
