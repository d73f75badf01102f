//! Certified decisions at desk scale.
//!
//! Feasibility is only ever reported with an exactly verified witness or an
//! exact root-bracketing proof; infeasibility only with an exact algebraic
//! certificate (definiteness, Sturm counts, a nonzero hyperdeterminant or a
//! trivial kernel). A failed search yields [`Outcome::Unknown`], never
//! infeasibility.

mod binary;
mod bilinear;
mod quadratic;
mod search;
mod tensor;

use serde::Serialize;

use crate::exactmath::{Rational, UniPoly};
use crate::hyperdet::Method;
use crate::instances::WitnessTriple;
use crate::report::{ser_poly, ser_rational, ser_rationals};

pub use bilinear::{check_bilinear_verdict, decide_bilinear_n2};
pub use quadratic::{
    algebraic_quadratic_witness, check_quadratic_verdict, decide_quadratic, decide_quadratic_m1, decide_quadratic_n2};
pub use search::{numerical_search, SearchConfig, SearchOutcome};
pub use tensor::{check_tensor_verdict, decide, structural_witness};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    FeasibleCertified,
    InfeasibleCertified,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Sign {
    Positive,
    Negative,
}

/// Exact evidence attached to a verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    QuadraticWitness {
        #[serde(serialize_with = "ser_rationals")]
        u: Vec<Rational>,
    },
    BilinearWitness {
        #[serde(serialize_with = "ser_rationals")]
        x: Vec<Rational>,
        #[serde(serialize_with = "ser_rationals")]
        y: Vec<Rational>,
    },
    TensorWitness { witness: WitnessTriple },
    /// `Q_t` (1-based) is definite, so `uᵀQ_t u ≠ 0` for every `u ≠ 0`.
    Definite { t: usize, sign: Sign },
    /// `φ(s) = (a + s b)ᵀ Q (a + s b)` changes sign on `[lo, hi]`, so an
    /// isotropic vector lies on the segment (possibly irrational).
    SegmentRootBracket {
        #[serde(serialize_with = "ser_rationals")]
        a: Vec<Rational>,
        #[serde(serialize_with = "ser_rationals")]
        b: Vec<Rational>,
        #[serde(serialize_with = "ser_rational")]
        lo: Rational,
        #[serde(serialize_with = "ser_rational")]
        hi: Rational,
    },
    /// The common factor `gcd` of the affine-chart polynomials has a real root
    /// in `(lo, hi]` (Sturm count), though no rational one.
    CommonRootBracket {
        #[serde(serialize_with = "ser_poly")]
        gcd: UniPoly,
        #[serde(serialize_with = "ser_rational")]
        lo: Rational,
        #[serde(serialize_with = "ser_rational")]
        hi: Rational,
        roots: usize,
    },
    /// The affine-chart polynomials share no real root and the point at
    /// infinity is excluded by a nonzero value.
    NoCommonRealRoot {
        #[serde(serialize_with = "ser_poly")]
        gcd: UniPoly,
        #[serde(serialize_with = "ser_rational")]
        at_infinity: Rational,
    },
    NonzeroHyperdeterminant {
        #[serde(serialize_with = "ser_rational")]
        value: Rational,
        method: Method,
    },
    /// With a mode of size one the tensor is a matrix; a trivial left or right
    /// kernel rules out degeneracy.
    TrivialKernel { side: KernelSide, rank: usize },
    /// A `(n, 2, 2)` tensor with `n ≥ 3` is degenerate iff its `n` slices,
    /// read as bilinear forms on the two size-2 modes, share a real zero.
    /// `permutation` lists the two size-2 modes then the large one; the
    /// nested certificate is for that bilinear instance.
    BinaryForms {
        permutation: [usize; 3],
        certificate: Box<Certificate>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelSide {
    Left,
    Right,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Diagnostics {
    /// Which decision path produced the verdict.
    pub path: String,
    pub restarts: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub best_residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub found_at_restart: Option<usize>,
}

impl Diagnostics {
    pub fn path(path: &str) -> Self {
        Self {
            path: path.to_string(),
            ..Default::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub outcome: Outcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
    pub diagnostics: Diagnostics,
}

impl Verdict {
    pub fn feasible(cert: Certificate, diagnostics: Diagnostics) -> Self {
        Self {
            outcome: Outcome::FeasibleCertified,
            certificate: Some(cert),
            diagnostics,
        }
    }

    pub fn infeasible(cert: Certificate, diagnostics: Diagnostics) -> Self {
        Self {
            outcome: Outcome::InfeasibleCertified,
            certificate: Some(cert),
            diagnostics,
        }
    }

    pub fn unknown(diagnostics: Diagnostics) -> Self {
        Self {
            outcome: Outcome::Unknown,
            certificate: None,
            diagnostics,
        }
    }

    pub fn is_feasible(&self) -> bool {
        self.outcome == Outcome::FeasibleCertified
    }

    pub fn is_infeasible(&self) -> bool {
        self.outcome == Outcome::InfeasibleCertified
    }

    /// Witness carried by the certificate, if it is a witness.
    pub fn quadratic_witness(&self) -> Option<&[Rational]> {
        match &self.certificate {
            Some(Certificate::QuadraticWitness { u }) => Some(u),
            _ => None,
        }
    }

    pub fn bilinear_witness(&self) -> Option<(&[Rational], &[Rational])> {
        match &self.certificate {
            Some(Certificate::BilinearWitness { x, y }) => Some((x, y)),
            _ => None,
        }
    }

    pub fn tensor_witness(&self) -> Option<&WitnessTriple> {
        match &self.certificate {
            Some(Certificate::TensorWitness { witness }) => Some(witness),
            _ => None,
        }
    }
}
