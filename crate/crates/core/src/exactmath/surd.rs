//! Exact arithmetic in a real quadratic field `ℚ(√d)`.
//!
//! Used to verify witnesses whose coordinates are quadratic irrationals, such
//! as the isotropic vectors of `x² − 2y²`.

use num_traits::{Signed, Zero};
use serde::Serialize;

use super::rational::{format_rational, sqrt_exact};
use super::Rational;
use crate::error::{Error, Result};

/// `a + b√d`; the field is carried separately by [`QuadField`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Surd {
    pub a: Rational,
    pub b: Rational,
}

impl Serialize for Surd {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{} + {}*sqrt(d)", format_rational(&self.a), format_rational(&self.b)))
    }
}

impl Surd {
    pub fn rational(a: Rational) -> Self {
        Self { a, b: Rational::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuadField {
    #[serde(serialize_with = "crate::report::ser_rational")]
    d: Rational,
}

impl QuadField {
    /// Rejects `d ≤ 0` and rational squares, for which `ℚ(√d)` is not a real
    /// quadratic extension.
    pub fn new(d: Rational) -> Result<Self> {
        if !d.is_positive() || sqrt_exact(&d).is_some() {
            return Err(Error::InvalidArgument(format!("{d} does not define a real quadratic field")));
        }
        Ok(Self { d })
    }

    pub fn d(&self) -> &Rational {
        &self.d
    }

    pub fn sqrt_d(&self) -> Surd {
        Surd {
            a: Rational::zero(),
            b: Rational::from_integer(1.into()),
        }
    }

    pub fn add(&self, x: &Surd, y: &Surd) -> Surd {
        Surd {
            a: &x.a + &y.a,
            b: &x.b + &y.b,
        }
    }

    pub fn mul(&self, x: &Surd, y: &Surd) -> Surd {
        Surd {
            a: &x.a * &y.a + &x.b * &y.b * &self.d,
            b: &x.a * &y.b + &x.b * &y.a,
        }
    }

    pub fn scale(&self, c: &Rational, x: &Surd) -> Surd {
        Surd {
            a: c * &x.a,
            b: c * &x.b,
        }
    }

    /// Sign of `a + b√d` as -1, 0 or 1.
    pub fn sign(&self, x: &Surd) -> i8 {
        let sa = sign_of(&x.a);
        let sb = sign_of(&x.b);
        if sa == sb || sb == 0 {
            return sa;
        }
        if sa == 0 {
            return sb;
        }
        // opposite signs: compare a² with b²d
        let lhs = &x.a * &x.a;
        let rhs = &x.b * &x.b * &self.d;
        if lhs > rhs {
            sa
        } else {
            sb
        }
    }

    pub fn to_f64(&self, x: &Surd) -> f64 {
        super::rational::to_f64(&x.a) + super::rational::to_f64(&x.b) * super::rational::to_f64(&self.d).sqrt()
    }
}

fn sign_of(r: &Rational) -> i8 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

pub fn is_zero_surd_vec(v: &[Surd]) -> bool {
    v.iter().all(Surd::is_zero)
}
