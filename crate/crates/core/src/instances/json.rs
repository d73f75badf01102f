//! JSON encoding of instances and witnesses.
//!
//! Every scalar is a string in `"p"` or `"p/q"` form so that no value ever
//! passes through a JSON float.
//!
//! ```json
//! {"kind": "quadratic", "n": 2, "m": 1, "matrices": [[["1", "0"], ["0", "-1"]]]}
//! {"kind": "tensor", "n1": 2, "n2": 2, "n3": 1, "entries": [[["1"], ["0"]], [["0"], ["1"]]]}
//! {"x": ["1", "1"], "y": ["1", "1"], "z": ["1", "0"]}
//! ```

use serde::{Deserialize, Serialize};

use super::problems::{BilinearInstance, PencilInstance, QuadraticInstance};
use super::tensor::Tensor3;
use super::witness::WitnessTriple;
use crate::error::{Error, Result};
use crate::exactmath::{format_rational, parse_rational, Matrix, Rational};

type Rows = Vec<Vec<String>>;

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum InstanceDoc {
    Quadratic {
        n: usize,
        m: usize,
        matrices: Vec<Rows>,
    },
    Bilinear {
        n: usize,
        r: usize,
        matrices: Vec<Rows>,
    },
    Pencil {
        n: usize,
        r: usize,
        matrices: Vec<Rows>,
    },
    Tensor {
        n1: usize,
        n2: usize,
        n3: usize,
        entries: Vec<Vec<Vec<String>>>,
    },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WitnessDoc {
    x: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    y: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    z: Option<Vec<String>>,
}

/// Any of the four problem instances.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Instance {
    Quadratic(QuadraticInstance),
    Bilinear(BilinearInstance),
    Pencil(PencilInstance),
    Tensor(Tensor3),
}

impl Instance {
    pub fn kind(&self) -> &'static str {
        match self {
            Instance::Quadratic(_) => "quadratic",
            Instance::Bilinear(_) => "bilinear",
            Instance::Pencil(_) => "pencil",
            Instance::Tensor(_) => "tensor",
        }
    }

    fn doc(&self) -> InstanceDoc {
        match self {
            Instance::Quadratic(q) => InstanceDoc::Quadratic {
                n: q.n(),
                m: q.m(),
                matrices: q.matrices().iter().map(encode_matrix).collect(),
            },
            Instance::Bilinear(b) => InstanceDoc::Bilinear {
                n: b.n(),
                r: b.r(),
                matrices: b.matrices().iter().map(encode_matrix).collect(),
            },
            Instance::Pencil(p) => InstanceDoc::Pencil {
                n: p.n(),
                r: p.r(),
                matrices: p.matrices().iter().map(encode_matrix).collect(),
            },
            Instance::Tensor(t) => {
                let [n1, n2, n3] = t.dims();
                InstanceDoc::Tensor {
                    n1,
                    n2,
                    n3,
                    entries: (0..n1)
                        .map(|i| {
                            (0..n2)
                                .map(|j| (0..n3).map(|k| format_rational(t.get(i, j, k))).collect())
                                .collect()
                        })
                        .collect(),
                }
            }
        }
    }

    pub fn to_value(&self) -> serde_json::Value {
        serde_json::to_value(self.doc()).expect("instance serializes")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.doc()).expect("instance serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: InstanceDoc =
            serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        match doc {
            InstanceDoc::Quadratic { n, m, matrices } => {
                expect_count("m", m, matrices.len())?;
                let ms = decode_matrices(n, &matrices)?;
                Ok(Instance::Quadratic(QuadraticInstance::new(n, ms)?))
            }
            InstanceDoc::Bilinear { n, r, matrices } => {
                expect_count("r", r, matrices.len())?;
                let ms = decode_matrices(n, &matrices)?;
                Ok(Instance::Bilinear(BilinearInstance::new(n, ms)?))
            }
            InstanceDoc::Pencil { n, r, matrices } => {
                expect_count("r + 1", r.saturating_add(1), matrices.len())?;
                let ms = decode_matrices(n, &matrices)?;
                Ok(Instance::Pencil(PencilInstance::new(n, ms)?))
            }
            InstanceDoc::Tensor { n1, n2, n3, entries } => {
                expect_count("n1", n1, entries.len())?;
                let mut data = Vec::new();
                for plane in &entries {
                    expect_count("n2", n2, plane.len())?;
                    for fiber in plane {
                        expect_count("n3", n3, fiber.len())?;
                        for s in fiber {
                            data.push(parse_rational(s)?);
                        }
                    }
                }
                if n1 == 0 || n2 == 0 || n3 == 0 {
                    return Err(Error::InvalidInstance("tensor dimensions must be positive".into()));
                }
                Ok(Instance::Tensor(Tensor3::new([n1, n2, n3], data)?))
            }
        }
    }
}

/// Witness file contents: a quadratic witness carries only `x`, a bilinear
/// witness `x` and `y`, pencil and tensor witnesses all three.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub x: Vec<Rational>,
    pub y: Option<Vec<Rational>>,
    pub z: Option<Vec<Rational>>,
}

impl Witness {
    pub fn quadratic(u: Vec<Rational>) -> Self {
        Self { x: u, y: None, z: None }
    }

    pub fn bilinear(x: Vec<Rational>, y: Vec<Rational>) -> Self {
        Self { x, y: Some(y), z: None }
    }

    pub fn triple(&self) -> Option<WitnessTriple> {
        Some(WitnessTriple {
            x: self.x.clone(),
            y: self.y.clone()?,
            z: self.z.clone()?,
        })
    }

    pub fn to_json(&self) -> String {
        let enc = |v: &Vec<Rational>| v.iter().map(format_rational).collect::<Vec<_>>();
        let doc = WitnessDoc {
            x: enc(&self.x),
            y: self.y.as_ref().map(enc),
            z: self.z.as_ref().map(enc),
        };
        serde_json::to_string_pretty(&doc).expect("witness serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: WitnessDoc = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        let dec = |v: &[String]| v.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>();
        Ok(Self {
            x: dec(&doc.x)?,
            y: doc.y.as_deref().map(dec).transpose()?,
            z: doc.z.as_deref().map(dec).transpose()?,
        })
    }
}

impl Serialize for Instance {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.doc().serialize(s)
    }
}

impl From<WitnessTriple> for Witness {
    fn from(w: WitnessTriple) -> Self {
        Self {
            x: w.x,
            y: Some(w.y),
            z: Some(w.z),
        }
    }
}

fn expect_count(field: &str, declared: usize, actual: usize) -> Result<()> {
    if declared != actual {
        return Err(Error::InvalidInstance(format!(
            "{field} = {declared} but {actual} entries given"
        )));
    }
    Ok(())
}

fn encode_matrix(m: &Matrix) -> Rows {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(format_rational).collect())
        .collect()
}

fn decode_matrices(n: usize, docs: &[Rows]) -> Result<Vec<Matrix>> {
    docs.iter()
        .map(|rows| {
            expect_count("n", n, rows.len())?;
            let mut data = Vec::with_capacity(n * n);
            for row in rows {
                expect_count("n", n, row.len())?;
                for s in row {
                    data.push(parse_rational(s)?);
                }
            }
            Matrix::new(n, n, data)
        })
        .collect()
}
