use num_traits::{One, Signed, Zero};

use super::binary::{common_factor, common_root, ChartRoot};
use super::search::SearchConfig;
use super::tensor::decide;
use super::{Certificate, Diagnostics, Sign, Verdict};
use crate::error::{Error, Result};
use crate::exactmath::rational::{int, primitive, sqrt_exact};
use crate::exactmath::{
    definiteness, kernel_basis, sturm_root_count, Definiteness, Matrix, QuadField, Rational, Surd, UniPoly,
};
use crate::instances::{verify_quadratic_witness, verify_quadratic_witness_surd, QuadraticInstance};
use crate::reductions::{extract_tensor_to_quad_witness, quad_to_tensor};

const BISECTION_STEPS: usize = 32;

fn unit(n: usize, i: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n];
    v[i] = Rational::one();
    v
}

fn axpy(a: &[Rational], s: &Rational, b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x + s * y).collect()
}

fn witness(u: Vec<Rational>, path: &str) -> Verdict {
    Verdict::feasible(
        Certificate::QuadraticWitness { u: primitive(&u) },
        Diagnostics::path(path),
    )
}

/// Single form: feasible iff `q` is neither positive nor negative definite.
pub fn decide_quadratic_m1(q: &Matrix) -> Result<Verdict> {
    match definiteness(q)? {
        Definiteness::PositiveDefinite => {
            return Ok(Verdict::infeasible(
                Certificate::Definite { t: 1, sign: Sign::Positive },
                Diagnostics::path("definiteness"),
            ))
        }
        Definiteness::NegativeDefinite => {
            return Ok(Verdict::infeasible(
                Certificate::Definite { t: 1, sign: Sign::Negative },
                Diagnostics::path("definiteness"),
            ))
        }
        Definiteness::Neither => {}
    }
    if let Some(k) = kernel_basis(q).into_iter().next() {
        return Ok(witness(k, "kernel"));
    }

    // q-orthogonal basis by symmetric Gram-Schmidt; a zero pivot is itself an
    // isotropic vector.
    let n = q.rows();
    let mut basis: Vec<(Vec<Rational>, Rational)> = Vec::with_capacity(n);
    for i in 0..n {
        let mut v = unit(n, i);
        for (w, dw) in &basis {
            let c = q.bilinear(w, &v)? / dw;
            v = axpy(&v, &-c, w);
        }
        let dv = q.bilinear(&v, &v)?;
        if dv.is_zero() {
            return Ok(witness(v, "isotropic_pivot"));
        }
        basis.push((v, dv));
    }
    let pos: Vec<_> = basis.iter().filter(|(_, d)| d.is_positive()).collect();
    let neg: Vec<_> = basis.iter().filter(|(_, d)| d.is_negative()).collect();

    // With aᵀqb = 0, φ(s) = aᵀqa + s² bᵀqb vanishes at s = √(−aᵀqa / bᵀqb).
    for (a, da) in &pos {
        for (b, db) in &neg {
            if let Some(s) = sqrt_exact(&(-da / db)) {
                return Ok(witness(axpy(a, &s, b), "segment_root"));
            }
        }
    }
    let (a, da) = pos[0];
    let (b, db) = neg[0];
    let phi = |s: &Rational| da + s * s * db;
    let mut lo = Rational::zero();
    let mut hi = Rational::one();
    while !phi(&hi).is_negative() {
        hi *= int(2);
    }
    for _ in 0..BISECTION_STEPS {
        let mid = (&lo + &hi) / int(2);
        if phi(&mid).is_positive() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Verdict::feasible(
        Certificate::SegmentRootBracket {
            a: a.clone(),
            b: b.clone(),
            lo,
            hi,
        },
        Diagnostics::path("segment_bracket"),
    ))
}

/// `uᵀQu` on the chart `u = (1, s)`.
fn chart_poly(q: &Matrix) -> UniPoly {
    UniPoly::new(vec![
        q.get(0, 0).clone(),
        q.get(0, 1) * int(2),
        q.get(1, 1).clone(),
    ])
}

/// Two variables, any number of forms: common real roots of the chart
/// polynomials, plus the point `u = (0, 1)`.
pub fn decide_quadratic_n2(inst: &QuadraticInstance) -> Result<Verdict> {
    if inst.n() != 2 {
        return Err(Error::InvalidArgument(format!(
            "two-variable oracle called with n = {}",
            inst.n()
        )));
    }
    let polys: Vec<UniPoly> = inst.matrices().iter().map(chart_poly).collect();
    let infinity = inst
        .matrices()
        .iter()
        .map(|q| q.get(1, 1).clone())
        .find(|v| !v.is_zero());
    let root = common_root(&polys)?;
    match root {
        ChartRoot::Everywhere => Ok(witness(vec![int(1), int(0)], "sturm_chart")),
        ChartRoot::Rational(s) => Ok(witness(vec![int(1), s], "sturm_chart")),
        _ if infinity.is_none() => Ok(witness(vec![int(0), int(1)], "sturm_infinity")),
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

/// Exact oracles where available, otherwise the composed tensor is handed to
/// [`decide`] and any witness is transported back.
pub fn decide_quadratic(inst: &QuadraticInstance, cfg: &SearchConfig) -> Result<Verdict> {
    for (t, q) in inst.matrices().iter().enumerate() {
        let sign = match definiteness(q)? {
            Definiteness::PositiveDefinite => Sign::Positive,
            Definiteness::NegativeDefinite => Sign::Negative,
            Definiteness::Neither => continue,
        };
        return Ok(Verdict::infeasible(
            Certificate::Definite { t: t + 1, sign },
            Diagnostics::path("definiteness"),
        ));
    }
    if inst.m() == 1 {
        return decide_quadratic_m1(&inst.matrices()[0]);
    }
    if inst.n() == 1 {
        // no definite 1x1 form left, so every form is zero
        return Ok(witness(vec![int(1)], "zero_forms"));
    }
    if inst.n() == 2 {
        return decide_quadratic_n2(inst);
    }
    let (t, _) = quad_to_tensor(inst);
    let v = decide(&t, cfg)?;
    match v.tensor_witness() {
        Some(w) => {
            let u = extract_tensor_to_quad_witness(inst, w)?;
            Ok(Verdict::feasible(
                Certificate::QuadraticWitness { u: primitive(&u) },
                Diagnostics {
                    path: format!("tensor/{}", v.diagnostics.path),
                    ..v.diagnostics
                },
            ))
        }
        None => Ok(Verdict {
            diagnostics: Diagnostics {
                path: format!("tensor/{}", v.diagnostics.path),
                ..v.diagnostics.clone()
            },
            ..v
        }),
    }
}

/// The exact witness in `ℚ(√d)` behind an irrational bracket certificate,
/// checked against the instance before it is returned.
pub fn algebraic_quadratic_witness(
    inst: &QuadraticInstance,
    v: &Verdict,
) -> Result<Option<(QuadField, Vec<Surd>)>> {
    let (field, u) = match &v.certificate {
        Some(Certificate::CommonRootBracket { gcd, .. }) if inst.n() == 2 && gcd.degree() == Some(2) => {
            // monic s² + p s + q: s = −p/2 + √(p² − 4q)/2
            let c = gcd.monic();
            let (q0, p1) = (&c.coeffs()[0], &c.coeffs()[1]);
            let field = QuadField::new(p1 * p1 - q0 * int(4))?;
            let half = Rational::new(1.into(), 2.into());
            let root = Surd {
                a: -p1 * &half,
                b: half,
            };
            (field, vec![Surd::rational(Rational::one()), root])
        }
        Some(Certificate::SegmentRootBracket { a, b, .. }) if inst.m() == 1 => {
            // φ(s) = A + 2Bs + Cs²: s = (−B + √(B² − AC)) / C
            let q = &inst.matrices()[0];
            let (qa, qb, qc) = (q.bilinear(a, a)?, q.bilinear(a, b)?, q.bilinear(b, b)?);
            if qc.is_zero() {
                return Ok(None);
            }
            let field = QuadField::new(&qb * &qb - &qa * &qc)?;
            let s = Surd {
                a: -&qb / &qc,
                b: Rational::one() / &qc,
            };
            let u = a
                .iter()
                .zip(b)
                .map(|(ai, bi)| field.add(&Surd::rational(ai.clone()), &field.scale(bi, &s)))
                .collect();
            (field, u)
        }
        _ => return Ok(None),
    };
    if !verify_quadratic_witness_surd(inst, &field, &u)? {
        return Err(Error::Consistency("bracket certificate does not yield an isotropic vector".into()));
    }
    Ok(Some((field, u)))
}

/// Replays the certificate of a verdict against the instance.
pub fn check_quadratic_verdict(inst: &QuadraticInstance, v: &Verdict) -> Result<bool> {
    let Some(cert) = &v.certificate else {
        return Ok(v.outcome == super::Outcome::Unknown);
    };
    Ok(match (v.outcome, cert) {
        (super::Outcome::FeasibleCertified, Certificate::QuadraticWitness { u }) => {
            verify_quadratic_witness(inst, u)?
        }
        (super::Outcome::FeasibleCertified, Certificate::SegmentRootBracket { a, b, lo, hi }) => {
            if inst.m() != 1 || a.len() != inst.n() || b.len() != inst.n() {
                return Ok(false);
            }
            let q = &inst.matrices()[0];
            let phi = |s: &Rational| {
                let u = axpy(a, s, b);
                q.bilinear(&u, &u)
            };
            let independent =
                crate::exactmath::rank_exact(&Matrix::from_rows(vec![a.clone(), b.clone()])?) == 2;
            independent && lo < hi && (phi(lo)? * phi(hi)?).is_negative()
        }
        (super::Outcome::FeasibleCertified, Certificate::CommonRootBracket { gcd, lo, hi, .. }) => {
            if inst.n() != 2 || gcd.is_zero() {
                return Ok(false);
            }
            let divides = inst
                .matrices()
                .iter()
                .map(chart_poly)
                .all(|p| p.div_rem(gcd).map(|(_, r)| r.is_zero()).unwrap_or(false));
            divides && lo < hi && sturm_root_count(gcd, &lo.clone().into(), &hi.clone().into())? > 0
        }
        (super::Outcome::InfeasibleCertified, Certificate::Definite { t, sign }) => {
            let Some(q) = t.checked_sub(1).and_then(|i| inst.matrices().get(i)) else {
                return Ok(false);
            };
            matches!(
                (definiteness(q)?, sign),
                (Definiteness::PositiveDefinite, Sign::Positive)
                    | (Definiteness::NegativeDefinite, Sign::Negative)
            )
        }
        (super::Outcome::InfeasibleCertified, Certificate::NoCommonRealRoot { gcd, at_infinity }) => {
            if inst.n() != 2 || at_infinity.is_zero() {
                return Ok(false);
            }
            let polys: Vec<UniPoly> = inst.matrices().iter().map(chart_poly).collect();
            let recomputed = common_factor(&polys)?;
            let at_inf_ok = inst.matrices().iter().any(|q| q.get(1, 1) == at_infinity);
            let no_roots = gcd.degree() == Some(0)
                || sturm_root_count(
                    gcd,
                    &crate::exactmath::Bound::NegInfinity,
                    &crate::exactmath::Bound::PosInfinity,
                )? == 0;
            recomputed.as_ref() == Some(gcd) && at_inf_ok && no_roots
        }
        (
            super::Outcome::InfeasibleCertified,
            Certificate::NonzeroHyperdeterminant { .. } | Certificate::TrivialKernel { .. },
        ) => super::tensor::check_tensor_verdict(&quad_to_tensor(inst).0, v)?,
        _ => false,
    })
}
