use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar, always in lowest terms with positive denominator.
pub type Rational = BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p"` or `"p/q"` (optional leading `-` or `+`, decimal digits only).
pub fn parse_rational(s: &str) -> Result<Rational> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let num = parse_int(num, true)?;
    let den = match den {
        Some(d) => parse_int(d, false)?,
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(num, den))
}

fn parse_int(s: &str, allow_sign: bool) -> Result<BigInt> {
    let digits = match s.as_bytes().first() {
        Some(b'-') | Some(b'+') if allow_sign => &s[1..],
        _ => s,
    };
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse(format!("malformed rational component {s:?}")));
    }
    s.parse::<BigInt>()
        .map_err(|e| Error::Parse(format!("{s:?}: {e}")))
}

/// Canonical text form: `"p"` for integers, `"p/q"` otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Best rational approximation of `v` with denominator at most `max_den`,
/// via the continued-fraction expansion and its semiconvergents.
pub fn approximate(v: f64, max_den: u64) -> Option<Rational> {
    if !v.is_finite() {
        return None;
    }
    let max_den = max_den.max(1) as i128;
    let neg = v < 0.0;
    let mut x = v.abs();
    // convergents p/q
    let (mut p0, mut q0, mut p1, mut q1) = (0i128, 1i128, 1i128, 0i128);
    for _ in 0..64 {
        let a = x.floor();
        if a > 1e18 {
            break;
        }
        let a = a as i128;
        let p2 = a * p1 + p0;
        let q2 = a * q1 + q0;
        if q2 > max_den {
            // largest semiconvergent that still fits
            let k = (max_den - q0) / q1;
            let ps = k * p1 + p0;
            let qs = k * q1 + q0;
            let exact = v.abs();
            let err_s = (ps as f64 / qs as f64 - exact).abs();
            let err_c = (p1 as f64 / q1 as f64 - exact).abs();
            if k > 0 && err_s < err_c {
                p1 = ps;
                q1 = qs;
            }
            break;
        }
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        let f = x - a as f64;
        if f < 1e-15 {
            break;
        }
        x = 1.0 / f;
    }
    if q1 == 0 {
        return None;
    }
    let r = Rational::new(BigInt::from(p1), BigInt::from(q1));
    Some(if neg { -r } else { r })
}

/// Exact square root when `r` is the square of a rational.
pub fn sqrt_exact(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let n = isqrt_exact(r.numer())?;
    let d = isqrt_exact(r.denom())?;
    Some(Rational::new(n, d))
}

fn isqrt_exact(v: &BigInt) -> Option<BigInt> {
    let s = v.sqrt();
    (&s * &s == *v).then_some(s)
}

/// Integer sign as -1, 0 or 1.
pub fn sign(r: &Rational) -> i8 {
    match r.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

/// Reduces a rational vector to a primitive integer vector: coprime integer
/// entries with the first nonzero entry positive. The zero vector is returned
/// unchanged.
pub fn primitive(v: &[Rational]) -> Vec<Rational> {
    let lcm = v
        .iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let ints: Vec<BigInt> = v.iter().map(|r| (r * &lcm).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return v.to_vec();
    }
    let flip = ints
        .iter()
        .find(|x| !x.is_zero())
        .map(|x| x.is_negative())
        .unwrap_or(false);
    ints.into_iter()
        .map(|x| {
            let q = x / &g;
            Rational::from_integer(if flip { -q } else { q })
        })
        .collect()
}

pub fn is_zero_vec(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn scale(v: &[Rational], c: &Rational) -> Vec<Rational> {
    v.iter().map(|x| x * c).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("3").unwrap(), int(3));
        assert_eq!(parse_rational("-6/4").unwrap(), frac(-3, 2));
        assert_eq!(parse_rational("+0/7").unwrap(), int(0));
        for bad in ["", "1/0", "a", "1/-2", "1.5", " 1", "--1", "1/", "/2"] {
            assert!(parse_rational(bad).is_err(), "{bad:?} should be rejected");
        }
    }

    #[test]
    fn format_is_canonical() {
        assert_eq!(format_rational(&frac(4, -6)), "-2/3");
        assert_eq!(format_rational(&int(0)), "0");
    }

    #[test]
    fn approximation_respects_bound() {
        assert_eq!(approximate(0.333333333, 64), Some(frac(1, 3)));
        assert_eq!(approximate(-1.5, 64), Some(frac(-3, 2)));
        assert_eq!(approximate(std::f64::consts::PI, 10), Some(frac(22, 7)));
        let r = approximate(std::f64::consts::SQRT_2, 64).unwrap();
        assert!(*r.denom() <= BigInt::from(64));
        assert_eq!(approximate(f64::NAN, 8), None);
    }

    #[test]
    fn square_roots() {
        assert_eq!(sqrt_exact(&frac(9, 4)), Some(frac(3, 2)));
        assert_eq!(sqrt_exact(&int(2)), None);
        assert_eq!(sqrt_exact(&int(-4)), None);
    }

    #[test]
    fn primitive_vectors() {
        let v = vec![frac(-1, 2), frac(1, 3), int(0)];
        assert_eq!(primitive(&v), vec![int(3), int(-2), int(0)]);
        assert_eq!(primitive(&[int(0), int(0)]), vec![int(0), int(0)]);
    }
}
