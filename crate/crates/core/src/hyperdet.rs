//! Boundary formats and exact hyperdeterminants for the supported sizes.
//!
//! Supported formats, up to a permutation of modes:
//!
//! * `(n, n, 1)` for `n ≤ 8`: the hyperdeterminant is the determinant of the
//!   single slice.
//! * `(3, 2, 2)`: the three bilinear forms `f_a(y, z) = T(e_a, y, z)` on
//!   `P¹ × P¹` have a common zero exactly when `T` is degenerate. Multiplying
//!   each form by `y_0` and `y_1` gives six polynomials of bidegree `(2, 1)`
//!   in six monomials; the determinant of that 6×6 coefficient matrix vanishes
//!   on the common-zero locus and is a nonzero multiple of the resultant.
//!
//! The overall sign and scale are not normalized against any external
//! convention; only the zero set and the homogeneity degree are meaningful.

use num_traits::Zero;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactmath::rational::{int, primitive};
use crate::exactmath::{det_exact, kernel_basis, Matrix, Rational};
use crate::instances::{verify_tensor_witness, Tensor3, WitnessTriple};
use crate::seed;

/// Largest `n` for which `(n, n, 1)` is evaluated exactly.
pub const MAX_MATRIX_FORMAT: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Format(pub [usize; 3]);

impl Format {
    pub fn new(dims: [usize; 3]) -> Result<Self> {
        if dims.contains(&0) {
            return Err(Error::InvalidArgument(format!("format {dims:?} has a zero mode")));
        }
        Ok(Self(dims))
    }

    pub fn of(t: &Tensor3) -> Self {
        Self(t.dims())
    }

    /// `k_i = n_i − 1`.
    pub fn k(&self) -> [usize; 3] {
        self.0.map(|n| n - 1)
    }

    pub fn cells(&self) -> usize {
        self.0.iter().product()
    }

    pub fn permuted(&self, perm: [usize; 3]) -> Self {
        Self([self.0[perm[0]], self.0[perm[1]], self.0[perm[2]]])
    }

    /// Permutes `self` so the largest mode comes first, stable otherwise.
    fn descending(&self) -> [usize; 3] {
        let mut idx = [0, 1, 2];
        idx.sort_by(|&a, &b| self.0[b].cmp(&self.0[a]));
        idx
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    MatrixDeterminant,
    #[serde(rename = "resultant_322")]
    Resultant322,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HyperdetResult {
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub value: Rational,
    pub method: Method,
    /// Format after the boundary permutation was applied.
    pub format: Format,
    pub permutation: [usize; 3],
}

/// Mode permutation placing the largest mode first with `n0 = n1 + n2 − 1`.
pub fn boundary_permutation(f: Format) -> Option<[usize; 3]> {
    if f.0.contains(&0) {
        return None;
    }
    let perm = f.descending();
    let [n0, n1, n2] = f.permuted(perm).0;
    (n0 + 1 == n1 + n2).then_some(perm)
}

pub fn is_supported(f: Format) -> bool {
    match boundary_permutation(f).map(|p| f.permuted(p).0) {
        Some([n, m, 1]) => n == m && n <= MAX_MATRIX_FORMAT,
        Some([3, 2, 2]) => true,
        _ => false,
    }
}

/// Exact hyperdeterminant for any supported format.
pub fn hyperdet(t: &Tensor3) -> Result<HyperdetResult> {
    let f = Format::of(t);
    let perm = boundary_permutation(f).ok_or(Error::UnsupportedFormat(f.0))?;
    match f.permuted(perm).0 {
        [_, _, 1] => hyperdet_matrix(t),
        [3, 2, 2] => hyperdet_322(t),
        _ => Err(Error::UnsupportedFormat(f.0)),
    }
}

/// Format `(n, n, 1)` up to permutation: the determinant of the slice.
pub fn hyperdet_matrix(t: &Tensor3) -> Result<HyperdetResult> {
    let f = Format::of(t);
    let perm = boundary_permutation(f).ok_or(Error::UnsupportedFormat(f.0))?;
    let p = t.permuted(perm);
    let [n, m, l] = p.dims();
    if l != 1 || n != m || n > MAX_MATRIX_FORMAT {
        return Err(Error::UnsupportedFormat(f.0));
    }
    Ok(HyperdetResult {
        value: det_exact(&p.slice(0))?,
        method: Method::MatrixDeterminant,
        format: Format(p.dims()),
        permutation: perm,
    })
}

/// The 6×6 elimination matrix of a `(3, 2, 2)` tensor `P`.
///
/// Row `2a + s` holds `y_s · f_a(y, z)`; column `2m + c` is the monomial
/// `y_0^{2−m} y_1^m z_c`. Every entry is a single tensor entry or zero.
pub fn elimination_matrix_322(p: &Tensor3) -> Result<Matrix> {
    if p.dims() != [3, 2, 2] {
        return Err(Error::UnsupportedFormat(p.dims()));
    }
    let mut m = Matrix::zeros(6, 6);
    for a in 0..3 {
        for s in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    m.set(2 * a + s, 2 * (s + b) + c, p.get(a, b, c).clone());
                }
            }
        }
    }
    Ok(m)
}

/// Format `(3, 2, 2)` up to permutation.
pub fn hyperdet_322(t: &Tensor3) -> Result<HyperdetResult> {
    let f = Format::of(t);
    let perm = boundary_permutation(f).ok_or(Error::UnsupportedFormat(f.0))?;
    let p = t.permuted(perm);
    let m = elimination_matrix_322(&p).map_err(|_| Error::UnsupportedFormat(f.0))?;
    Ok(HyperdetResult {
        value: det_exact(&m)?,
        method: Method::Resultant322,
        format: Format(p.dims()),
        permutation: perm,
    })
}

/// Homogeneity degree of the evaluator for `f`, measured by scaling.
pub fn hyperdet_degree(f: Format) -> Result<usize> {
    let seed = f.0.iter().fold(0x5eed_u64, |acc, &n| acc * 31 + n as u64);
    let first = measure_degree(f, seed::derive(seed, 1, 0))?;
    let second = measure_degree(f, seed::derive(seed, 1, 1))?;
    if first != second {
        return Err(Error::Consistency(format!(
            "degree probes disagree for {:?}: {first} vs {second}",
            f.0
        )));
    }
    Ok(first)
}

/// One degree measurement on a random probe tensor with nonzero value:
/// finds `d` with `value(c·T) = c^d · value(T)` for `c = 2` and `c = 3`.
pub fn measure_degree(f: Format, probe_seed: u64) -> Result<usize> {
    if !is_supported(f) {
        return Err(Error::UnsupportedFormat(f.0));
    }
    let mut rng = seed::rng(probe_seed);
    let (t, base) = loop {
        let t = Tensor3::from_fn(f.0, |_, _, _| seed::small_int(&mut rng, 5));
        let v = hyperdet(&t)?.value;
        if !v.is_zero() {
            break (t, v);
        }
    };
    let mut found = None;
    for c in [2, 3] {
        let c = int(c);
        let ratio = hyperdet(&t.scaled(&c))?.value / &base;
        let mut power = int(1);
        let d = (0..=64).find(|_| {
            let hit = power == ratio;
            power *= &c;
            hit
        });
        let d = d.ok_or_else(|| Error::Consistency(format!("{ratio} is not a power of {c}")))?;
        if found.is_some_and(|prev| prev != d) {
            return Err(Error::Consistency("scale factors imply different degrees".into()));
        }
        found = Some(d);
    }
    Ok(found.expect("two scale factors probed"))
}

/// A random tensor of format `f` that is degenerate with a random planted
/// witness. The degeneracy equations are linear in the tensor entries once
/// `(x, y, z)` is fixed, so the output is a random point of that solution
/// space (never the zero tensor).
///
/// Panics when two modes have size one: there only the zero tensor is
/// degenerate.
pub fn degenerate_generator(f: Format, seed: u64) -> (Tensor3, WitnessTriple) {
    assert!(
        f.0.iter().filter(|&&d| d == 1).count() < 2,
        "format {:?} has no nonzero degenerate tensor",
        f.0
    );
    let mut rng = seed::rng(seed);
    let [n1, n2, n3] = f.0;
    let w = WitnessTriple {
        x: seed::nonzero_vector(&mut rng, n1, 2),
        y: seed::nonzero_vector(&mut rng, n2, 2),
        z: seed::nonzero_vector(&mut rng, n3, 2),
    };
    let t = degenerate_for_witness(f, &w, &mut rng).expect("nonzero witness has a nonzero solution");
    (t, w)
}

/// Linear constraints on the entries of `T` imposed by a witness triple:
/// one row per output coordinate of each of the three contractions.
pub fn degeneracy_constraints(f: Format, w: &WitnessTriple) -> Matrix {
    let [n1, n2, n3] = f.0;
    let cells = f.cells();
    let idx = |i: usize, j: usize, k: usize| (i * n2 + j) * n3 + k;
    let mut rows = Vec::with_capacity(n1 + n2 + n3);
    for k in 0..n3 {
        let mut r = vec![Rational::zero(); cells];
        for i in 0..n1 {
            for j in 0..n2 {
                r[idx(i, j, k)] = &w.x[i] * &w.y[j];
            }
        }
        rows.push(r);
    }
    for j in 0..n2 {
        let mut r = vec![Rational::zero(); cells];
        for i in 0..n1 {
            for k in 0..n3 {
                r[idx(i, j, k)] = &w.x[i] * &w.z[k];
            }
        }
        rows.push(r);
    }
    for i in 0..n1 {
        let mut r = vec![Rational::zero(); cells];
        for j in 0..n2 {
            for k in 0..n3 {
                r[idx(i, j, k)] = &w.y[j] * &w.z[k];
            }
        }
        rows.push(r);
    }
    Matrix::from_rows(rows).expect("rectangular constraint matrix")
}

/// Random nonzero tensor degenerate with the given witness; `None` when the
/// constraints only admit the zero tensor (or the witness has a zero factor).
pub fn degenerate_for_witness(
    f: Format,
    w: &WitnessTriple,
    rng: &mut impl Rng,
) -> Option<Tensor3> {
    if w.dims() != f.0 || !w.is_nonzero() {
        return None;
    }
    let basis = kernel_basis(&degeneracy_constraints(f, w));
    if basis.is_empty() {
        return None;
    }
    loop {
        let mut entries = vec![Rational::zero(); f.cells()];
        for b in &basis {
            let c = seed::small_int(rng, 3);
            if c.is_zero() {
                continue;
            }
            for (e, v) in entries.iter_mut().zip(b) {
                *e += &c * v;
            }
        }
        if entries.iter().any(|e| !e.is_zero()) {
            let t = Tensor3::new(f.0, primitive(&entries)).expect("cell count");
            debug_assert!(verify_tensor_witness(&t, w).unwrap_or(false));
            return Some(t);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rational::frac;

    fn random_322(seed: u64) -> Tensor3 {
        let mut rng = seed::rng(seed);
        Tensor3::from_fn([3, 2, 2], |_, _, _| seed::small_int(&mut rng, 3))
    }

    #[test]
    fn boundary_permutations() {
        assert_eq!(boundary_permutation(Format([3, 2, 2])), Some([0, 1, 2]));
        assert_eq!(boundary_permutation(Format([2, 2, 2])), None);
        assert_eq!(boundary_permutation(Format([2, 3, 2])), Some([1, 0, 2]));
        assert_eq!(boundary_permutation(Format([1, 4, 4])), Some([1, 2, 0]));
        assert_eq!(boundary_permutation(Format([4, 2, 2])), None);
        assert_eq!(boundary_permutation(Format([2, 4, 3])), Some([1, 2, 0]));
        assert_eq!(boundary_permutation(Format([5, 3, 3])), Some([0, 1, 2]));
        assert!(!is_supported(Format([5, 3, 3])));
        assert!(is_supported(Format([1, 8, 8])));
        assert!(!is_supported(Format([9, 9, 1])));
    }

    #[test]
    fn matrix_format_values() {
        let id = Tensor3::from_slices(&[Matrix::identity(3)]).unwrap();
        assert_eq!(hyperdet_matrix(&id).unwrap().value, int(1));
        let m = Tensor3::from_slices(&[Matrix::from_i64(&[&[1, 2], &[3, 4]])]).unwrap();
        assert_eq!(hyperdet(&m).unwrap().value, int(-2));
        // the same slice stored along modes 1 and 3
        let moved = m.permuted([2, 0, 1]);
        assert_eq!(moved.dims(), [1, 2, 2]);
        assert_eq!(hyperdet(&moved).unwrap().value, int(-2));
        let singular = Tensor3::from_slices(&[Matrix::from_i64(&[&[1, 2], &[2, 4]])]).unwrap();
        assert_eq!(hyperdet(&singular).unwrap().value, int(0));
        assert!(hyperdet_matrix(&random_322(1)).is_err());
        assert!(hyperdet_322(&id).is_err());
    }

    #[test]
    fn degenerate_outputs_vanish() {
        for s in 0..50 {
            let (t, w) = degenerate_generator(Format([3, 2, 2]), s);
            assert!(verify_tensor_witness(&t, &w).unwrap());
            assert!(!t.is_zero());
            assert_eq!(hyperdet_322(&t).unwrap().value, int(0), "seed {s}");
        }
    }

    #[test]
    fn generic_tensor_is_nonzero() {
        assert!(!hyperdet_322(&random_322(42)).unwrap().value.is_zero());
    }

    #[test]
    fn degrees() {
        assert_eq!(hyperdet_degree(Format([2, 2, 1])).unwrap(), 2);
        assert_eq!(hyperdet_degree(Format([4, 1, 4])).unwrap(), 4);
        assert_eq!(hyperdet_degree(Format([3, 2, 2])).unwrap(), 6);
        assert!(hyperdet_degree(Format([2, 2, 2])).is_err());
    }

    #[test]
    fn homogeneity() {
        let t = random_322(7);
        let v = hyperdet(&t).unwrap().value;
        for c in [int(-1), int(2), int(3), frac(1, 2)] {
            let scaled = hyperdet(&t.scaled(&c)).unwrap().value;
            let mut pow = int(1);
            for _ in 0..6 {
                pow *= &c;
            }
            assert_eq!(scaled, pow * &v);
        }
    }

    #[test]
    fn basis_witness_zeroes_coordinate_cells() {
        let f = Format([3, 2, 2]);
        let e = |n: usize| {
            let mut v = vec![int(0); n];
            v[0] = int(1);
            v
        };
        let w = WitnessTriple::new(e(3), e(2), e(2)).unwrap();
        let t = degenerate_for_witness(f, &w, &mut seed::rng(3)).unwrap();
        assert!(verify_tensor_witness(&t, &w).unwrap());
        for (i, j, k) in [(0, 0, 0), (0, 0, 1), (0, 1, 0), (1, 0, 0), (2, 0, 0)] {
            assert!(t.get(i, j, k).is_zero());
        }
        // zero tensor always satisfies the constraints
        let c = degeneracy_constraints(f, &w);
        assert!(c.mul_vec(&vec![int(0); 12]).unwrap().iter().all(Zero::is_zero));
    }

    #[test]
    #[should_panic(expected = "no nonzero degenerate tensor")]
    fn generator_rejects_vector_formats() {
        degenerate_generator(Format([1, 3, 1]), 0);
    }

    #[test]
    fn reference_fixture() {
        let e = [3, -1, 4, 1, -5, 9, 2, -6, 5, -3, 7, 8];
        let t = Tensor3::new([3, 2, 2], e.iter().map(|&v| int(v)).collect()).unwrap();
        assert_eq!(hyperdet_322(&t).unwrap().value, int(29228));
        assert_eq!(serde_json::to_value(Method::Resultant322).unwrap(), "resultant_322");
    }

    #[test]
    fn swapping_small_modes_keeps_sign() {
        for s in 0..40 {
            let t = random_322(s);
            let v = hyperdet_322(&t).unwrap().value;
            assert_eq!(hyperdet_322(&t.permuted([0, 2, 1])).unwrap().value, v);
            assert_eq!(hyperdet(&t.permuted([1, 0, 2])).unwrap().value, v);
        }
    }

    #[test]
    fn elimination_matrix_is_linear_in_entries() {
        for s in 0..20 {
            let (a, b) = (random_322(2 * s), random_322(2 * s + 1));
            let c = frac(-3, 2);
            let comb = Tensor3::from_fn([3, 2, 2], |i, j, k| a.get(i, j, k) + &c * b.get(i, j, k));
            let lhs = elimination_matrix_322(&comb).unwrap();
            let rhs = elimination_matrix_322(&a)
                .unwrap()
                .add(&elimination_matrix_322(&b).unwrap().scaled(&c))
                .unwrap();
            assert_eq!(lhs, rhs);
        }
    }
}
