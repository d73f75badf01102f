use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rational::{sign, sqrt_exact, Rational};
use crate::error::{Error, Result};

/// Dense univariate polynomial over ℚ, coefficients lowest degree first.
/// The zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

/// Interval endpoint for root counting.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bound {
    NegInfinity,
    Finite(Rational),
    PosInfinity,
}

impl Bound {
    fn rank(&self) -> u8 {
        match self {
            Bound::NegInfinity => 0,
            Bound::Finite(_) => 1,
            Bound::PosInfinity => 2,
        }
    }

    fn lt(&self, other: &Bound) -> bool {
        match (self, other) {
            (Bound::Finite(a), Bound::Finite(b)) => a < b,
            _ => self.rank() < other.rank(),
        }
    }
}

impl From<Rational> for Bound {
    fn from(r: Rational) -> Self {
        Bound::Finite(r)
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("{c}*t"),
                _ => format!("{c}*t^{i}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&v| Rational::from_integer(v.into())).collect())
    }

    /// `t - r`.
    pub fn linear_root(r: &Rational) -> Self {
        Self::new(vec![-r.clone(), Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * t + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new(
            (0..n)
                .map(|i| {
                    let a = self.coeffs.get(i).cloned().unwrap_or_default();
                    let b = o.coeffs.get(i).cloned().unwrap_or_default();
                    a + b
                })
                .collect(),
        )
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|v| v * c).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// Euclidean division: `self = q * d + r` with `deg r < deg d`.
    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self)> {
        let dl = d.lead().ok_or(Error::ZeroPolynomial)?.clone();
        let dd = d.coeffs.len() - 1;
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut q = vec![Rational::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] / &dl;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[k + j] -= &c * dc;
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        Ok((Self::new(q), Self::new(r)))
    }

    pub fn monic(&self) -> Self {
        match self.lead() {
            Some(l) => self.scale(&l.recip()),
            None => Self::zero(),
        }
    }

    /// Rescales by a positive rational so the coefficients are coprime integers.
    /// Signs are preserved, so sign evaluations are unaffected.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let l = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self.coeffs.iter().map(|c| (c * &l).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        Self::new(
            ints.into_iter()
                .map(|x| Rational::from_integer(x / &g))
                .collect(),
        )
    }

    /// Sign of the polynomial at a bound (limits at infinity).
    pub fn sign_at(&self, b: &Bound) -> i8 {
        let Some(lead) = self.lead() else { return 0 };
        match b {
            Bound::Finite(t) => sign(&self.eval(t)),
            Bound::PosInfinity => sign(lead),
            Bound::NegInfinity => {
                let s = sign(lead);
                if self.coeffs.len() % 2 == 0 {
                    -s
                } else {
                    s
                }
            }
        }
    }

    /// Square-free part `p / gcd(p, p')`, monic.
    pub fn squarefree(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let g = gcd_poly(self, &self.derivative())?;
        Ok(self.div_rem(&g)?.0.monic())
    }
}

/// Monic greatest common divisor over ℚ.
pub fn gcd_poly(a: &UniPoly, b: &UniPoly) -> Result<UniPoly> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let (mut x, mut y) = (a.clone(), b.clone());
    while !y.is_zero() {
        let r = x.div_rem(&y)?.1;
        x = y;
        y = r.primitive_part();
    }
    Ok(x.monic())
}

/// Sturm sequence of a polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SturmChain {
    polys: Vec<UniPoly>,
}

impl SturmChain {
    /// `p, p', -rem(p, p'), ...` with positive content removed from every
    /// remainder; stops at the first zero remainder.
    pub fn new(p: &UniPoly) -> Result<Self> {
        if p.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut polys = vec![p.clone()];
        let d = p.derivative();
        if d.is_zero() {
            return Ok(Self { polys });
        }
        polys.push(d);
        loop {
            let n = polys.len();
            let r = polys[n - 2].div_rem(&polys[n - 1])?.1;
            if r.is_zero() {
                break;
            }
            polys.push(r.neg().primitive_part());
        }
        Ok(Self { polys })
    }

    pub fn polys(&self) -> &[UniPoly] {
        &self.polys
    }

    /// The chain divided through by its last element (the gcd of `p` and `p'`
    /// up to a constant), so that multiple roots do not collapse every entry.
    fn reduced(&self) -> Result<Vec<UniPoly>> {
        let g = self.polys.last().expect("chain is never empty");
        self.polys.iter().map(|p| Ok(p.div_rem(g)?.0)).collect()
    }

    fn variations(chain: &[UniPoly], at: &Bound) -> usize {
        let signs: Vec<i8> = chain
            .iter()
            .map(|p| p.sign_at(at))
            .filter(|&s| s != 0)
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Number of distinct real roots in `(lo, hi]`.
    pub fn count(&self, lo: &Bound, hi: &Bound) -> Result<usize> {
        if !lo.lt(hi) {
            return Err(Error::EmptyInterval);
        }
        let chain = self.reduced()?;
        let a = Self::variations(&chain, lo);
        let b = Self::variations(&chain, hi);
        Ok(a.saturating_sub(b))
    }
}

/// Distinct real roots of `p` in `(lo, hi]`.
pub fn sturm_root_count(p: &UniPoly, lo: &Bound, hi: &Bound) -> Result<usize> {
    SturmChain::new(p)?.count(lo, hi)
}

/// All distinct rational roots, ascending.
pub fn rational_roots(p: &UniPoly) -> Result<Vec<Rational>> {
    let sf = p.squarefree()?;
    let mut roots = match sf.degree() {
        Some(0) => Vec::new(),
        Some(1) => vec![-sf.coeffs[0].clone() / &sf.coeffs[1]],
        Some(2) => {
            let (c, b) = (&sf.coeffs[0], &sf.coeffs[1]);
            let disc = b * b - Rational::from_integer(4.into()) * c;
            match sqrt_exact(&disc) {
                Some(s) => {
                    let two = Rational::from_integer(2.into());
                    vec![(-b - &s) / &two, (-b + &s) / two]
                }
                None => Vec::new(),
            }
        }
        _ => candidate_roots(&sf)
            .into_iter()
            .filter(|r| sf.eval(r).is_zero())
            .collect(),
    };
    roots.sort();
    roots.dedup();
    Ok(roots)
}

/// Rational root theorem candidates `±a/b` with `a | c0`, `b | lead`.
fn candidate_roots(p: &UniPoly) -> Vec<Rational> {
    let prim = p.primitive_part();
    let cs: Vec<BigInt> = prim.coeffs.iter().map(|c| c.numer().clone()).collect();
    let low = cs.iter().position(|c| !c.is_zero()).unwrap_or(0);
    let mut out = Vec::new();
    if low > 0 {
        out.push(Rational::zero());
    }
    let num = divisors(&cs[low]);
    let den = divisors(cs.last().expect("nonzero polynomial"));
    for a in &num {
        for b in &den {
            let r = Rational::new(a.clone(), b.clone());
            out.push(r.clone());
            out.push(-r);
        }
    }
    out
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            out.push(d.clone());
            let q = &n / &d;
            if q != d {
                out.push(q);
            }
        }
        d += 1;
    }
    out
}
