use num_traits::{One, Zero};

use super::bilinear::{check_bilinear_verdict, decide_bilinear_n2};
use super::search::{numerical_search, SearchConfig};
use super::{Certificate, Diagnostics, KernelSide, Outcome, Verdict};
use crate::error::{Error, Result};
use crate::exactmath::rational::primitive;
use crate::exactmath::{kernel_basis, rank_exact, Matrix, Rational};
use crate::hyperdet::{hyperdet, is_supported, Format};
use crate::instances::{verify_tensor_witness, BilinearInstance, Tensor3, WitnessTriple};

fn unit(n: usize, i: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n];
    v[i] = Rational::one();
    v
}

/// Permutation moving the first mode of size one to the end, and the
/// resulting matrix.
fn as_matrix(t: &Tensor3) -> Option<([usize; 3], Matrix)> {
    let dims = t.dims();
    let one = dims.iter().position(|&d| d == 1)?;
    let mut perm: Vec<usize> = (0..3).filter(|&m| m != one).collect();
    perm.push(one);
    let perm = [perm[0], perm[1], perm[2]];
    Some((perm, t.permuted(perm).slice(0)))
}

/// Undo `perm` on a witness of the permuted tensor.
fn unpermute(perm: [usize; 3], w: [Vec<Rational>; 3]) -> WitnessTriple {
    let mut out: [Vec<Rational>; 3] = Default::default();
    for (m, v) in w.into_iter().enumerate() {
        out[perm[m]] = v;
    }
    let [x, y, z] = out;
    WitnessTriple { x, y, z }
}

/// Witnesses that need no search: the zero tensor, a matrix with nontrivial
/// left and right kernels, or a coordinate triple whose three fibers vanish.
pub fn structural_witness(t: &Tensor3) -> Option<WitnessTriple> {
    let [n1, n2, n3] = t.dims();
    if t.is_zero() {
        return Some(WitnessTriple {
            x: unit(n1, 0),
            y: unit(n2, 0),
            z: unit(n3, 0),
        });
    }
    if let Some((perm, a)) = as_matrix(t) {
        let left = kernel_basis(&a.transpose()).into_iter().next()?;
        let right = kernel_basis(&a).into_iter().next()?;
        return Some(unpermute(perm, [primitive(&left), primitive(&right), vec![Rational::one()]]));
    }
    for i in 0..n1 {
        for j in 0..n2 {
            for k in 0..n3 {
                let fibers_vanish = (0..n3).all(|c| t.get(i, j, c).is_zero())
                    && (0..n2).all(|c| t.get(i, c, k).is_zero())
                    && (0..n1).all(|c| t.get(c, j, k).is_zero());
                if fibers_vanish {
                    return Some(WitnessTriple {
                        x: unit(n1, i),
                        y: unit(n2, j),
                        z: unit(n3, k),
                    });
                }
            }
        }
    }
    None
}

fn matrix_certificate(t: &Tensor3) -> Result<Option<Certificate>> {
    let Some((_, a)) = as_matrix(t) else {
        return Ok(None);
    };
    if is_supported(Format::of(t)) {
        let h = hyperdet(t)?;
        return Ok((!h.value.is_zero()).then_some(Certificate::NonzeroHyperdeterminant {
            value: h.value,
            method: h.method,
        }));
    }
    let rank = rank_exact(&a);
    Ok(if rank == a.rows() {
        Some(Certificate::TrivialKernel { side: KernelSide::Left, rank })
    } else if rank == a.cols() {
        Some(Certificate::TrivialKernel { side: KernelSide::Right, rank })
    } else {
        None
    })
}

/// `[j, k, l]` with `dims[j] = dims[k] = 2` and `dims[l] ≥ 3`.
fn binary_forms_permutation(t: &Tensor3) -> Option<[usize; 3]> {
    let dims = t.dims();
    let l = (0..3).find(|&m| dims[m] >= 3)?;
    let rest: Vec<usize> = (0..3).filter(|&m| m != l).collect();
    rest.iter().all(|&m| dims[m] == 2).then(|| [rest[0], rest[1], l])
}

fn binary_forms_instance(t: &Tensor3, perm: [usize; 3]) -> Result<BilinearInstance> {
    let p = t.permuted(perm);
    BilinearInstance::new(2, (0..p.dims()[2]).map(|a| p.slice(a)).collect())
}

/// Exact decision for `(n, 2, 2)`, `n ≥ 3`. Given a common zero `(y, z)` of
/// the slice forms, `T(x, y, z) = 0` for all `x`, which leaves two linear
/// conditions on `x`.
fn decide_binary_forms(t: &Tensor3) -> Result<Option<Verdict>> {
    let Some(perm) = binary_forms_permutation(t) else {
        return Ok(None);
    };
    let b = binary_forms_instance(t, perm)?;
    let v = decide_bilinear_n2(&b)?;
    let path = format!("binary_forms/{}", v.diagnostics.path);
    if let Some((y, z)) = v.bilinear_witness() {
        let p = t.permuted(perm);
        let mut rows = contract_yz_rows(&p, z, 1)?;
        rows.extend(contract_yz_rows(&p, y, 0)?);
        let w = kernel_basis(&Matrix::from_rows(rows)?)
            .into_iter()
            .next()
            .ok_or_else(|| Error::Consistency("two conditions left no kernel".into()))?;
        let witness = unpermute(perm, [y.to_vec(), z.to_vec(), primitive(&w)]).normalized();
        if !verify_tensor_witness(t, &witness)? {
            return Err(Error::Consistency("binary forms witness does not verify".into()));
        }
        return Ok(Some(Verdict::feasible(
            Certificate::TensorWitness { witness },
            Diagnostics::path(&path),
        )));
    }
    let Some(cert) = v.certificate else {
        return Ok(None);
    };
    let certificate = Certificate::BinaryForms {
        permutation: perm,
        certificate: Box::new(cert),
    };
    Ok(Some(Verdict {
        certificate: Some(certificate),
        diagnostics: Diagnostics::path(&path),
        ..v
    }))
}

/// Rows of the linear map `w ↦ P(·, v, w)` (`mode = 1`, fixing the second
/// mode) or `w ↦ P(v, ·, w)` (`mode = 0`) for a `(2, 2, n)` tensor.
fn contract_yz_rows(p: &Tensor3, v: &[Rational], mode: usize) -> Result<Vec<Vec<Rational>>> {
    let [_, _, n] = p.dims();
    Ok((0..2)
        .map(|free| {
            (0..n)
                .map(|c| {
                    (0..2).fold(Rational::zero(), |acc, i| {
                        let e = if mode == 1 { p.get(free, i, c) } else { p.get(i, free, c) };
                        acc + e * &v[i]
                    })
                })
                .collect()
        })
        .collect())
}

/// Structural shortcuts, then the hyperdeterminant where supported, then
/// numerical search. Infeasibility is reported only with an exact certificate.
pub fn decide(t: &Tensor3, cfg: &SearchConfig) -> Result<Verdict> {
    cfg.validate()?;
    if let Some(w) = structural_witness(t) {
        return Ok(Verdict::feasible(
            Certificate::TensorWitness { witness: w.normalized() },
            Diagnostics::path("structural"),
        ));
    }
    if let Some(cert) = matrix_certificate(t)? {
        return Ok(Verdict::infeasible(cert, Diagnostics::path("matrix")));
    }
    let mut hyperdet_zero = false;
    if is_supported(Format::of(t)) {
        let h = hyperdet(t)?;
        if !h.value.is_zero() {
            return Ok(Verdict::infeasible(
                Certificate::NonzeroHyperdeterminant {
                    value: h.value,
                    method: h.method,
                },
                Diagnostics::path("hyperdeterminant"),
            ));
        }
        hyperdet_zero = true;
    }
    if let Some(v) = decide_binary_forms(t)? {
        return Ok(v);
    }
    let out = numerical_search(t, cfg);
    let diagnostics = Diagnostics {
        path: if hyperdet_zero { "hyperdeterminant_zero/search" } else { "search" }.to_string(),
        restarts: out.restarts_run,
        best_residual: Some(out.best_residual),
        found_at_restart: out.found_at_restart,
    };
    Ok(match out.witness {
        Some(w) => Verdict::feasible(Certificate::TensorWitness { witness: w }, diagnostics),
        None => Verdict::unknown(diagnostics),
    })
}

/// Replays the certificate of a tensor verdict.
pub fn check_tensor_verdict(t: &Tensor3, v: &Verdict) -> Result<bool> {
    let Some(cert) = &v.certificate else {
        return Ok(v.outcome == Outcome::Unknown);
    };
    Ok(match (v.outcome, cert) {
        (Outcome::FeasibleCertified, Certificate::TensorWitness { witness }) => {
            witness.dims() == t.dims() && verify_tensor_witness(t, witness)?
        }
        (Outcome::InfeasibleCertified, Certificate::NonzeroHyperdeterminant { value, method }) => {
            if !is_supported(Format::of(t)) || value.is_zero() {
                return Ok(false);
            }
            let h = hyperdet(t)?;
            &h.value == value && &h.method == method
        }
        (Outcome::InfeasibleCertified, Certificate::TrivialKernel { side, rank }) => {
            let Some((_, a)) = as_matrix(t) else {
                return Ok(false);
            };
            let full = match side {
                KernelSide::Left => a.rows(),
                KernelSide::Right => a.cols(),
            };
            rank_exact(&a) == *rank && *rank == full
        }
        (outcome, Certificate::BinaryForms { permutation, certificate }) => {
            if binary_forms_permutation(t) != Some(*permutation) {
                return Ok(false);
            }
            let inner = Verdict {
                outcome,
                certificate: Some((**certificate).clone()),
                diagnostics: Diagnostics::default(),
            };
            let exact = matches!(
                **certificate,
                Certificate::CommonRootBracket { .. } | Certificate::NoCommonRealRoot { .. }
            );
            exact && check_bilinear_verdict(&binary_forms_instance(t, *permutation)?, &inner)?
        }
        _ => false,
    })
}
