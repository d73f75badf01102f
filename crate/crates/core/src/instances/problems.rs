use num_traits::Zero;

use super::tensor::Tensor3;
use super::witness::WitnessTriple;
use crate::error::{Error, Result};
use crate::exactmath::rational::is_zero_vec;
use crate::exactmath::surd::{is_zero_surd_vec, QuadField, Surd};
use crate::exactmath::{Matrix, Rational};

/// Homogeneous quadratic feasibility: find `u ≠ 0` with `uᵀQ_t u = 0` for all t.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticInstance {
    n: usize,
    qs: Vec<Matrix>,
}

/// Projective bilinear feasibility: find `x, y ≠ 0` with `xᵀM_ℓ y = 0` for all ℓ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BilinearInstance {
    n: usize,
    ms: Vec<Matrix>,
}

/// Singular bilinear pencil feasibility over `A_0, ..., A_r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PencilInstance {
    n: usize,
    matrices: Vec<Matrix>,
}

fn check_square(n: usize, ms: &[Matrix], what: &str) -> Result<()> {
    if ms.is_empty() {
        return Err(Error::InvalidInstance(format!("{what} needs at least one matrix")));
    }
    for (idx, m) in ms.iter().enumerate() {
        if m.rows() != n || m.cols() != n {
            return Err(Error::InvalidInstance(format!(
                "{what} matrix {idx} is {}x{}, expected {n}x{n}",
                m.rows(),
                m.cols()
            )));
        }
    }
    Ok(())
}

fn check_len(v: &[Rational], n: usize, name: &str) -> Result<()> {
    if v.len() != n {
        return Err(Error::Dimension(format!(
            "{name} has length {}, expected {n}",
            v.len()
        )));
    }
    Ok(())
}

impl QuadraticInstance {
    /// Asymmetric matrices are rejected rather than symmetrized.
    pub fn new(n: usize, qs: Vec<Matrix>) -> Result<Self> {
        check_square(n, &qs, "quadratic instance")?;
        if let Some(idx) = qs.iter().position(|q| !q.is_symmetric()) {
            return Err(Error::InvalidInstance(format!("Q_{} is not symmetric", idx + 1)));
        }
        Ok(Self { n, qs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.qs.len()
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.qs
    }
}

impl BilinearInstance {
    pub fn new(n: usize, ms: Vec<Matrix>) -> Result<Self> {
        check_square(n, &ms, "bilinear instance")?;
        Ok(Self { n, ms })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.ms.len()
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.ms
    }
}

impl PencilInstance {
    pub fn new(n: usize, matrices: Vec<Matrix>) -> Result<Self> {
        check_square(n, &matrices, "pencil instance")?;
        Ok(Self { n, matrices })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Index of the last pencil matrix; the pencil has `r + 1` matrices.
    pub fn r(&self) -> usize {
        self.matrices.len() - 1
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.matrices
    }

    /// `M(z) = Σ z_ℓ A_ℓ`.
    pub fn evaluate(&self, z: &[Rational]) -> Result<Matrix> {
        check_len(z, self.matrices.len(), "z")?;
        let mut acc = Matrix::zeros(self.n, self.n);
        for (a, c) in self.matrices.iter().zip(z) {
            if !c.is_zero() {
                acc = acc.add(&a.scaled(c))?;
            }
        }
        Ok(acc)
    }

    /// Slice tensor with `T(:, :, ℓ+1) = A_ℓ`.
    pub fn slice_tensor(&self) -> Tensor3 {
        Tensor3::from_slices(&self.matrices).expect("validated pencil")
    }
}

pub fn verify_quadratic_witness(inst: &QuadraticInstance, u: &[Rational]) -> Result<bool> {
    check_len(u, inst.n, "u")?;
    if is_zero_vec(u) {
        return Ok(false);
    }
    for q in &inst.qs {
        if !q.bilinear(u, u)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// [`verify_quadratic_witness`] for `u` with coordinates in `ℚ(√d)`.
pub fn verify_quadratic_witness_surd(inst: &QuadraticInstance, field: &QuadField, u: &[Surd]) -> Result<bool> {
    if u.len() != inst.n {
        return Err(Error::Dimension(format!("u has length {}, expected {}", u.len(), inst.n)));
    }
    if is_zero_surd_vec(u) {
        return Ok(false);
    }
    for q in &inst.qs {
        let mut acc = Surd::default();
        for i in 0..inst.n {
            for j in 0..inst.n {
                acc = field.add(&acc, &field.scale(q.get(i, j), &field.mul(&u[i], &u[j])));
            }
        }
        if !acc.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn verify_bilinear_witness(
    inst: &BilinearInstance,
    x: &[Rational],
    y: &[Rational],
) -> Result<bool> {
    check_len(x, inst.n, "x")?;
    check_len(y, inst.n, "y")?;
    if is_zero_vec(x) || is_zero_vec(y) {
        return Ok(false);
    }
    for m in &inst.ms {
        if !m.bilinear(x, y)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Checks `xᵀA_ℓ y = 0` for all ℓ, `M(z)y = 0`, `M(z)ᵀx = 0`, and nonzeroness.
pub fn verify_pencil_witness(inst: &PencilInstance, w: &WitnessTriple) -> Result<bool> {
    check_len(&w.x, inst.n, "x")?;
    check_len(&w.y, inst.n, "y")?;
    let mz = inst.evaluate(&w.z)?;
    if !w.is_nonzero() {
        return Ok(false);
    }
    for a in &inst.matrices {
        if !a.bilinear(&w.x, &w.y)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(is_zero_vec(&mz.mul_vec(&w.y)?) && is_zero_vec(&mz.transpose().mul_vec(&w.x)?))
}
