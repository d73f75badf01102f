//! Common real roots of polynomials on the affine chart `x = (1, t)` of the
//! projective line.

use num_traits::{Signed, Zero};

use crate::error::Result;
use crate::exactmath::rational::int;
use crate::exactmath::{gcd_poly, rational_roots, sturm_root_count, Bound, Rational, UniPoly};

/// Bisection steps when isolating an irrational common root.
const BRACKET_STEPS: usize = 24;

pub(super) enum ChartRoot {
    /// Every polynomial is identically zero.
    Everywhere,
    Rational(Rational),
    Irrational {
        gcd: UniPoly,
        lo: Rational,
        hi: Rational,
        roots: usize,
    },
    None {
        gcd: UniPoly,
    },
}

/// Monic gcd of the nonzero entries, or `None` if all vanish identically.
pub(super) fn common_factor(polys: &[UniPoly]) -> Result<Option<UniPoly>> {
    let mut g: Option<UniPoly> = None;
    for p in polys.iter().filter(|p| !p.is_zero()) {
        g = Some(match g {
            None => p.monic(),
            Some(acc) => gcd_poly(&acc, p)?,
        });
    }
    Ok(g)
}

pub(super) fn common_root(polys: &[UniPoly]) -> Result<ChartRoot> {
    let Some(g) = common_factor(polys)? else {
        return Ok(ChartRoot::Everywhere);
    };
    if g.degree() == Some(0) {
        return Ok(ChartRoot::None { gcd: g });
    }
    if let Some(r) = rational_roots(&g)?.into_iter().next() {
        return Ok(ChartRoot::Rational(r));
    }
    let all = sturm_root_count(&g, &Bound::NegInfinity, &Bound::PosInfinity)?;
    if all == 0 {
        return Ok(ChartRoot::None { gcd: g });
    }
    let (lo, hi) = isolate(&g)?;
    let roots = sturm_root_count(&g, &lo.clone().into(), &hi.clone().into())?;
    Ok(ChartRoot::Irrational { gcd: g, lo, hi, roots })
}

/// Cauchy bound: every root has absolute value below the result.
fn root_bound(p: &UniPoly) -> Rational {
    let lead = p.lead().expect("nonzero").abs();
    let max = p
        .coeffs()
        .iter()
        .map(|c| c.abs() / &lead)
        .max()
        .unwrap_or_else(Rational::zero);
    max + int(1)
}

/// A rational interval `(lo, hi]` containing at least one real root of `p`,
/// narrowed by bisection.
fn isolate(p: &UniPoly) -> Result<(Rational, Rational)> {
    let b = root_bound(p);
    let (mut lo, mut hi) = (-b.clone(), b);
    for _ in 0..BRACKET_STEPS {
        let mid = (&lo + &hi) / int(2);
        if sturm_root_count(p, &lo.clone().into(), &mid.clone().into())? > 0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok((lo, hi))
}
