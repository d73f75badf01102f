//! The reduction chain quadratic → bilinear → pencil → tensor, with exact
//! witness transport in both directions.
//!
//! Every stage emits a [`ReductionTrace`] recording where each output matrix or
//! slice came from, so any slice of the final tensor can be attributed to a
//! source constraint.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactmath::rational::is_zero_vec;
use crate::exactmath::{Matrix, Rational, Surd};
use crate::instances::{
    verify_pencil_witness, BilinearInstance, PencilInstance, QuadraticInstance, Tensor3,
    WitnessTriple,
};

/// Origin of one emitted matrix or slice (indices are 1-based).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum Provenance {
    /// Copy of `Q_t` from the quadratic instance.
    Quadratic { t: usize },
    /// Antisymmetric minor `E_ij = e_i e_jᵀ − e_j e_iᵀ`.
    Minor { i: usize, j: usize },
    /// The zero matrix `A_0`.
    ZeroSlice,
    /// Copy of `M_ℓ` from the bilinear instance.
    Bilinear { l: usize },
    /// Pencil matrix `A_ℓ` stacked as slice `ℓ + 1`.
    Pencil { l: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StageTrace {
    pub stage: String,
    pub n: usize,
    /// Number of matrices (or mode-3 slices) emitted by this stage.
    pub count: usize,
    /// Provenance per emitted matrix, traced back to the original input.
    pub provenance: Vec<Provenance>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ReductionTrace {
    pub stages: Vec<StageTrace>,
}

impl ReductionTrace {
    fn push(&mut self, stage: &str, n: usize, provenance: Vec<Provenance>) {
        self.stages.push(StageTrace {
            stage: stage.to_string(),
            n,
            count: provenance.len(),
            provenance,
        });
    }

    pub fn extend(mut self, other: ReductionTrace) -> Self {
        self.stages.extend(other.stages);
        self
    }

    /// Provenance of the final stage, resolved through earlier stages back to
    /// the first input.
    pub fn resolved(&self) -> Vec<Provenance> {
        let mut current: Option<Vec<Provenance>> = None;
        for stage in &self.stages {
            let next = stage
                .provenance
                .iter()
                .map(|p| match (p, &current) {
                    (Provenance::Bilinear { l }, Some(prev))
                    | (Provenance::Pencil { l }, Some(prev)) => {
                        let idx = match p {
                            Provenance::Bilinear { .. } => l - 1,
                            _ => *l,
                        };
                        prev.get(idx).cloned().unwrap_or_else(|| p.clone())
                    }
                    _ => p.clone(),
                })
                .collect();
            current = Some(next);
        }
        current.unwrap_or_default()
    }
}

/// `E_ij = e_i e_jᵀ − e_j e_iᵀ` (0-based `i < j`), so `xᵀE_ij y = x_i y_j − x_j y_i`.
pub fn minor_matrix(n: usize, i: usize, j: usize) -> Matrix {
    let mut m = Matrix::zeros(n, n);
    m.set(i, j, Rational::one());
    m.set(j, i, -Rational::one());
    m
}

/// Appends the `n(n−1)/2` minor constraints (lexicographic pairs) to the
/// quadratic forms.
pub fn quad_to_bilinear(q: &QuadraticInstance) -> (BilinearInstance, ReductionTrace) {
    let n = q.n();
    let mut ms = q.matrices().to_vec();
    let mut prov: Vec<Provenance> = (1..=q.m()).map(|t| Provenance::Quadratic { t }).collect();
    for i in 0..n {
        for j in i + 1..n {
            ms.push(minor_matrix(n, i, j));
            prov.push(Provenance::Minor { i: i + 1, j: j + 1 });
        }
    }
    let mut trace = ReductionTrace::default();
    trace.push("bilinear", n, prov);
    (BilinearInstance::new(n, ms).expect("square matrices"), trace)
}

pub fn lift_quad_witness(u: &[Rational]) -> Result<(Vec<Rational>, Vec<Rational>)> {
    if is_zero_vec(u) {
        return Err(Error::ZeroWitness);
    }
    Ok((u.to_vec(), u.to_vec()))
}

/// Recovers `x` from a proportional pair `y = λx`.
pub fn extract_quad_witness(x: &[Rational], y: &[Rational]) -> Result<Vec<Rational>> {
    if x.len() != y.len() {
        return Err(Error::Dimension("x and y differ in length".into()));
    }
    if is_zero_vec(x) || is_zero_vec(y) {
        return Err(Error::ZeroWitness);
    }
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            if &x[i] * &y[j] != &x[j] * &y[i] {
                return Err(Error::NotProportional);
            }
        }
    }
    Ok(x.to_vec())
}

/// `A_0 = 0`, `A_ℓ = M_ℓ`.
pub fn bilinear_to_pencil(b: &BilinearInstance) -> (PencilInstance, ReductionTrace) {
    let n = b.n();
    let mut mats = vec![Matrix::zeros(n, n)];
    mats.extend(b.matrices().iter().cloned());
    let mut prov = vec![Provenance::ZeroSlice];
    prov.extend((1..=b.r()).map(|l| Provenance::Bilinear { l }));
    let mut trace = ReductionTrace::default();
    trace.push("pencil", n, prov);
    (PencilInstance::new(n, mats).expect("square matrices"), trace)
}

/// Completes `(x, y)` with `z = e_0 ∈ ℚ^{r+1}`, for which `M(z) = A_0 = 0`.
pub fn lift_bilinear_witness(x: &[Rational], y: &[Rational], r: usize) -> Result<WitnessTriple> {
    let mut z = vec![Rational::zero(); r + 1];
    z[0] = Rational::one();
    WitnessTriple::new(x.to_vec(), y.to_vec(), z)
}

/// Any verifying pencil witness satisfies `xᵀA_ℓ y = 0` for every ℓ, hence for
/// the source matrices.
pub fn extract_bilinear_witness(
    pencil: &PencilInstance,
    w: &WitnessTriple,
) -> Result<(Vec<Rational>, Vec<Rational>)> {
    if !verify_pencil_witness(pencil, w)? {
        return Err(Error::WitnessRejected("pencil witness".into()));
    }
    Ok((w.x.clone(), w.y.clone()))
}

/// Stacks `T(:, :, ℓ+1) = A_ℓ`; witnesses transport unchanged.
pub fn pencil_to_tensor(p: &PencilInstance) -> (Tensor3, ReductionTrace) {
    let prov = (0..=p.r()).map(|l| Provenance::Pencil { l }).collect();
    let mut trace = ReductionTrace::default();
    trace.push("tensor", p.n(), prov);
    (p.slice_tensor(), trace)
}

/// Full chain; the output has format `n × n × (m + n(n−1)/2 + 1)`.
pub fn quad_to_tensor(q: &QuadraticInstance) -> (Tensor3, ReductionTrace) {
    let (b, t1) = quad_to_bilinear(q);
    let (p, t2) = bilinear_to_pencil(&b);
    let (t, t3) = pencil_to_tensor(&p);
    (t, t1.extend(t2).extend(t3))
}

/// Forward transport of a quadratic witness to the composed tensor.
pub fn lift_quad_to_tensor_witness(q: &QuadraticInstance, u: &[Rational]) -> Result<WitnessTriple> {
    let (x, y) = lift_quad_witness(u)?;
    let r = q.m() + q.n() * q.n().saturating_sub(1) / 2;
    lift_bilinear_witness(&x, &y, r)
}

/// [`lift_quad_to_tensor_witness`] for a witness in `ℚ(√d)`.
pub fn lift_quad_to_tensor_witness_surd(
    q: &QuadraticInstance,
    u: &[Surd],
) -> Result<(Vec<Surd>, Vec<Surd>, Vec<Surd>)> {
    if u.iter().all(Surd::is_zero) {
        return Err(Error::ZeroWitness);
    }
    let r = q.m() + q.n() * q.n().saturating_sub(1) / 2;
    let mut z = vec![Surd::default(); r + 1];
    z[0] = Surd::rational(Rational::one());
    Ok((u.to_vec(), u.to_vec(), z))
}

/// Backward transport from a tensor witness of `quad_to_tensor(q)`.
pub fn extract_tensor_to_quad_witness(
    q: &QuadraticInstance,
    w: &WitnessTriple,
) -> Result<Vec<Rational>> {
    let (b, _) = quad_to_bilinear(q);
    let (p, _) = bilinear_to_pencil(&b);
    let (x, y) = extract_bilinear_witness(&p, w)?;
    extract_quad_witness(&x, &y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rational::int;
    use crate::instances::{
        verify_bilinear_witness, verify_quadratic_witness, verify_tensor_witness,
    };

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| int(x)).collect()
    }

    fn sig() -> QuadraticInstance {
        QuadraticInstance::new(2, vec![Matrix::from_i64(&[&[1, 0], &[0, -1]])]).unwrap()
    }

    #[test]
    fn minor_counts() {
        let q3 = QuadraticInstance::new(3, vec![Matrix::identity(3), Matrix::zeros(3, 3)]).unwrap();
        assert_eq!(quad_to_bilinear(&q3).0.r(), 5);
        let q1 = QuadraticInstance::new(1, vec![Matrix::from_i64(&[&[2]])]).unwrap();
        assert_eq!(quad_to_bilinear(&q1).0.r(), 1);
        assert_eq!(minor_matrix(2, 0, 1), Matrix::from_i64(&[&[0, 1], &[-1, 0]]));
    }

    #[test]
    fn minor_matrix_evaluates_to_minor() {
        let x = v(&[2, 3, 5]);
        let y = v(&[7, 11, 13]);
        let e = minor_matrix(3, 0, 2);
        assert_eq!(e.bilinear(&x, &y).unwrap(), int(2 * 13 - 5 * 7));
    }

    #[test]
    fn quadratic_lift_and_extract() {
        assert_eq!(lift_quad_witness(&v(&[1, 1])).unwrap(), (v(&[1, 1]), v(&[1, 1])));
        assert_eq!(lift_quad_witness(&v(&[0, 0])), Err(Error::ZeroWitness));
        let (b, _) = quad_to_bilinear(&sig());
        let (x, y) = lift_quad_witness(&v(&[1, 1])).unwrap();
        assert!(verify_bilinear_witness(&b, &x, &y).unwrap());
        assert_eq!(extract_quad_witness(&v(&[1, 1]), &v(&[2, 2])).unwrap(), v(&[1, 1]));
        assert_eq!(
            extract_quad_witness(&v(&[1, 0]), &v(&[0, 1])),
            Err(Error::NotProportional)
        );
    }

    #[test]
    fn pencil_stage() {
        let b = BilinearInstance::new(2, vec![Matrix::from_i64(&[&[1, 0], &[0, -1]])]).unwrap();
        let (p, trace) = bilinear_to_pencil(&b);
        assert_eq!(p.matrices().len(), 2);
        assert!(p.matrices()[0].is_zero());
        assert_eq!(p.matrices()[1], b.matrices()[0]);
        assert_eq!(trace.stages[0].provenance[0], Provenance::ZeroSlice);

        assert_eq!(lift_bilinear_witness(&v(&[1]), &v(&[1]), 1).unwrap().z, v(&[1, 0]));

        let id = BilinearInstance::new(2, vec![Matrix::identity(2)]).unwrap();
        let (pid, _) = bilinear_to_pencil(&id);
        let w = lift_bilinear_witness(&v(&[1, 0]), &v(&[0, 1]), 1).unwrap();
        assert_eq!(w, WitnessTriple::new(v(&[1, 0]), v(&[0, 1]), v(&[1, 0])).unwrap());
        assert!(verify_pencil_witness(&pid, &w).unwrap());
        let bad = lift_bilinear_witness(&v(&[1, 0]), &v(&[1, 0]), 1).unwrap();
        assert!(!verify_pencil_witness(&pid, &bad).unwrap());
        assert!(extract_bilinear_witness(&pid, &bad).is_err());
        assert_eq!(extract_bilinear_witness(&pid, &w).unwrap(), (v(&[1, 0]), v(&[0, 1])));
    }

    #[test]
    fn tensor_stage() {
        let p = PencilInstance::new(
            2,
            vec![Matrix::zeros(2, 2), Matrix::from_i64(&[&[1, 0], &[0, -1]])],
        )
        .unwrap();
        let (t, _) = pencil_to_tensor(&p);
        assert_eq!(t.dims(), [2, 2, 2]);
        assert!(t.slice(0).is_zero());
        assert_eq!(&t.slice(1), &p.matrices()[1]);

        let single = PencilInstance::new(3, vec![Matrix::zeros(3, 3)]).unwrap();
        let (t, _) = pencil_to_tensor(&single);
        assert_eq!(t.dims(), [3, 3, 1]);
        assert!(t.is_zero());
    }

    #[test]
    fn composed_chain() {
        let (t, trace) = quad_to_tensor(&sig());
        assert_eq!(t.dims(), [2, 2, 3]);
        let q3 = QuadraticInstance::new(3, vec![Matrix::identity(3), Matrix::identity(3)]).unwrap();
        assert_eq!(quad_to_tensor(&q3).0.dims(), [3, 3, 6]);

        let w = lift_quad_to_tensor_witness(&sig(), &v(&[1, 1])).unwrap();
        assert_eq!(w.z, v(&[1, 0, 0]));
        assert!(verify_tensor_witness(&t, &w).unwrap());
        let u = extract_tensor_to_quad_witness(&sig(), &w).unwrap();
        assert!(verify_quadratic_witness(&sig(), &u).unwrap());

        assert_eq!(
            trace.resolved(),
            vec![
                Provenance::ZeroSlice,
                Provenance::Quadratic { t: 1 },
                Provenance::Minor { i: 1, j: 2 }
            ]
        );
        assert_eq!(trace.stages.len(), 3);
        assert_eq!(trace.stages[2].count, 3);
    }
}
