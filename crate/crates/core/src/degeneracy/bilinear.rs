use num_traits::{One, Zero};

use super::binary::{common_factor, common_root, ChartRoot};
use super::{Certificate, Diagnostics, Outcome, Verdict};
use crate::error::{Error, Result};
use crate::exactmath::rational::{int, primitive};
use crate::exactmath::{kernel_basis, sturm_root_count, Bound, Matrix, Rational, UniPoly};
use crate::instances::{verify_bilinear_witness, BilinearInstance};

/// Rows `xᵀM_ℓ` for `x = (1, t)`, each as a pair of linear polynomials.
fn chart_rows(b: &BilinearInstance) -> Vec<(UniPoly, UniPoly)> {
    b.matrices()
        .iter()
        .map(|m| {
            (
                UniPoly::new(vec![m.get(0, 0).clone(), m.get(1, 0).clone()]),
                UniPoly::new(vec![m.get(0, 1).clone(), m.get(1, 1).clone()]),
            )
        })
        .collect()
}

/// All 2×2 minors of the stacked rows, as polynomials in `t`.
fn chart_minors(b: &BilinearInstance) -> Vec<UniPoly> {
    let rows = chart_rows(b);
    let mut out = Vec::new();
    for l in 0..rows.len() {
        for k in l + 1..rows.len() {
            out.push(rows[l].0.mul(&rows[k].1).sub(&rows[l].1.mul(&rows[k].0)));
        }
    }
    out
}

/// First nonzero 2×2 minor of the rows `(0, 1) M_ℓ`.
fn infinity_minor(b: &BilinearInstance) -> Option<Rational> {
    let ms = b.matrices();
    for l in 0..ms.len() {
        for k in l + 1..ms.len() {
            let d = ms[l].get(1, 0) * ms[k].get(1, 1) - ms[l].get(1, 1) * ms[k].get(1, 0);
            if !d.is_zero() {
                return Some(d);
            }
        }
    }
    None
}

fn witness_for_x(b: &BilinearInstance, x: Vec<Rational>, path: &str) -> Result<Verdict> {
    let rows: Vec<Vec<Rational>> = b
        .matrices()
        .iter()
        .map(|m| m.transpose().mul_vec(&x))
        .collect::<Result<_>>()?;
    let stack = Matrix::from_rows(rows)?;
    let y = kernel_basis(&stack)
        .into_iter()
        .next()
        .ok_or_else(|| Error::Consistency("rank-deficient stack has no kernel".into()))?;
    Ok(Verdict::feasible(
        Certificate::BilinearWitness {
            x: primitive(&x),
            y: primitive(&y),
        },
        Diagnostics::path(path),
    ))
}

/// Exact decision for two-dimensional bilinear feasibility.
///
/// For a fixed `x`, a nonzero `y` exists iff the `r × 2` matrix with rows
/// `xᵀM_ℓ` is rank deficient. On the chart `x = (1, t)` its 2×2 minors are
/// polynomials of degree at most two; the point `x = (0, 1)` is checked
/// directly.
pub fn decide_bilinear_n2(b: &BilinearInstance) -> Result<Verdict> {
    if b.n() != 2 {
        return Err(Error::InvalidArgument(format!(
            "two-dimensional oracle called with n = {}",
            b.n()
        )));
    }
    let infinity = infinity_minor(b);
    match common_root(&chart_minors(b))? {
        ChartRoot::Everywhere => witness_for_x(b, vec![int(1), int(0)], "sturm_chart"),
        ChartRoot::Rational(t) => witness_for_x(b, vec![int(1), t], "sturm_chart"),
        _ if infinity.is_none() => {
            witness_for_x(b, vec![Rational::zero(), Rational::one()], "sturm_infinity")
        }
        ChartRoot::Irrational { gcd, lo, hi, roots } => Ok(Verdict::feasible(
            Certificate::CommonRootBracket { gcd, lo, hi, roots },
            Diagnostics::path("sturm_bracket"),
        )),
        ChartRoot::None { gcd } => Ok(Verdict::infeasible(
            Certificate::NoCommonRealRoot {
                gcd,
                at_infinity: infinity.expect("checked above"),
            },
            Diagnostics::path("sturm"),
        )),
    }
}

/// Replays a verdict of [`decide_bilinear_n2`] (or any bilinear witness).
pub fn check_bilinear_verdict(b: &BilinearInstance, v: &Verdict) -> Result<bool> {
    let Some(cert) = &v.certificate else {
        return Ok(v.outcome == Outcome::Unknown);
    };
    Ok(match (v.outcome, cert) {
        (Outcome::FeasibleCertified, Certificate::BilinearWitness { x, y }) => {
            verify_bilinear_witness(b, x, y)?
        }
        (Outcome::FeasibleCertified, Certificate::CommonRootBracket { gcd, lo, hi, .. }) => {
            if b.n() != 2 || gcd.is_zero() {
                return Ok(false);
            }
            let divides = chart_minors(b)
                .iter()
                .all(|p| p.div_rem(gcd).map(|(_, r)| r.is_zero()).unwrap_or(false));
            divides && lo < hi && sturm_root_count(gcd, &lo.clone().into(), &hi.clone().into())? > 0
        }
        (Outcome::InfeasibleCertified, Certificate::NoCommonRealRoot { gcd, at_infinity }) => {
            if b.n() != 2 || at_infinity.is_zero() {
                return Ok(false);
            }
            let recomputed = common_factor(&chart_minors(b))?;
            let no_roots = gcd.degree() == Some(0)
                || sturm_root_count(gcd, &Bound::NegInfinity, &Bound::PosInfinity)? == 0;
            recomputed.as_ref() == Some(gcd) && infinity_minor(b).is_some() && no_roots
        }
        _ => false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn single_matrix_is_always_feasible() {
        let b = BilinearInstance::new(2, vec![Matrix::identity(2)]).unwrap();
        let verdict = decide_bilinear_n2(&b).unwrap();
        let (x, y) = verdict.bilinear_witness().unwrap();
        assert_eq!((x, y), (v(&[1, 0]).as_slice(), v(&[0, 1]).as_slice()));
    }

    #[test]
    fn identity_and_signature() {
        let b = BilinearInstance::new(
            2,
            vec![Matrix::identity(2), Matrix::from_i64(&[&[1, 0], &[0, -1]])],
        )
        .unwrap();
        assert_eq!(chart_minors(&b), vec![UniPoly::from_i64(&[0, -2])]);
        let verdict = decide_bilinear_n2(&b).unwrap();
        let (x, y) = verdict.bilinear_witness().unwrap();
        assert_eq!((x, y), (v(&[1, 0]).as_slice(), v(&[0, 1]).as_slice()));
        assert!(check_bilinear_verdict(&b, &verdict).unwrap());
    }

    #[test]
    fn no_real_common_root() {
        // x ↦ rows x, xJ with J a rotation: minor 1 + t², no real root,
        // and the point at infinity has minor 1.
        let b = BilinearInstance::new(
            2,
            vec![Matrix::identity(2), Matrix::from_i64(&[&[0, 1], &[-1, 0]])],
        )
        .unwrap();
        let verdict = decide_bilinear_n2(&b).unwrap();
        assert_eq!(verdict.outcome, Outcome::InfeasibleCertified);
        assert!(check_bilinear_verdict(&b, &verdict).unwrap());
    }

    #[test]
    fn irrational_common_root() {
        // minors t² − 2 from rows (1, t) and (t, 2)
        let b = BilinearInstance::new(
            2,
            vec![Matrix::identity(2), Matrix::from_i64(&[&[0, 2], &[1, 0]])],
        )
        .unwrap();
        let verdict = decide_bilinear_n2(&b).unwrap();
        assert!(matches!(verdict.certificate, Some(Certificate::CommonRootBracket { .. })));
        assert!(check_bilinear_verdict(&b, &verdict).unwrap());
    }

    #[test]
    fn wrong_dimension() {
        let b = BilinearInstance::new(3, vec![Matrix::identity(3)]).unwrap();
        assert!(decide_bilinear_n2(&b).is_err());
    }
}
