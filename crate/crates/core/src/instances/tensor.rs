use num_traits::Zero;

use super::witness::WitnessTriple;
use crate::error::{Error, Result};
use crate::exactmath::rational::is_zero_vec;
use crate::exactmath::surd::{is_zero_surd_vec, QuadField, Surd};
use crate::exactmath::{Matrix, Rational};

/// Dense rational 3-tensor with entries indexed `(i, j, k)`, `k` fastest.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tensor3 {
    dims: [usize; 3],
    data: Vec<Rational>,
}

impl Tensor3 {
    pub fn new(dims: [usize; 3], data: Vec<Rational>) -> Result<Self> {
        let count = dims.iter().product::<usize>();
        if data.len() != count {
            return Err(Error::Dimension(format!(
                "{} entries for a {}x{}x{} tensor",
                data.len(),
                dims[0],
                dims[1],
                dims[2]
            )));
        }
        Ok(Self { dims, data })
    }

    pub fn zeros(dims: [usize; 3]) -> Self {
        Self {
            dims,
            data: vec![Rational::zero(); dims.iter().product()],
        }
    }

    pub fn from_fn(dims: [usize; 3], mut f: impl FnMut(usize, usize, usize) -> Rational) -> Self {
        let mut data = Vec::with_capacity(dims.iter().product());
        for i in 0..dims[0] {
            for j in 0..dims[1] {
                for k in 0..dims[2] {
                    data.push(f(i, j, k));
                }
            }
        }
        Self { dims, data }
    }

    /// Stacks `n1 x n2` matrices as the mode-3 slices.
    pub fn from_slices(slices: &[Matrix]) -> Result<Self> {
        let first = slices
            .first()
            .ok_or_else(|| Error::Dimension("no slices".into()))?;
        let (n1, n2) = (first.rows(), first.cols());
        if slices.iter().any(|s| s.rows() != n1 || s.cols() != n2) {
            return Err(Error::Dimension("slices of different shapes".into()));
        }
        Ok(Self::from_fn([n1, n2, slices.len()], |i, j, k| {
            slices[k].get(i, j).clone()
        }))
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn entries(&self) -> &[Rational] {
        &self.data
    }

    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.dims[1] + j) * self.dims[2] + k
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &Rational {
        &self.data[self.index(i, j, k)]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, v: Rational) {
        let idx = self.index(i, j, k);
        self.data[idx] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        Self {
            dims: self.dims,
            data: self.data.iter().map(|v| v * c).collect(),
        }
    }

    /// Mode-3 slice `T(:, :, k)` as an `n1 x n2` matrix.
    pub fn slice(&self, k: usize) -> Matrix {
        let [n1, n2, _] = self.dims;
        let data = (0..n1)
            .flat_map(|i| (0..n2).map(move |j| (i, j)))
            .map(|(i, j)| self.get(i, j, k).clone())
            .collect();
        Matrix::new(n1, n2, data).expect("slice shape")
    }

    /// Reorders modes: mode `m` of the result is mode `perm[m]` of `self`.
    pub fn permuted(&self, perm: [usize; 3]) -> Self {
        let old = self.dims;
        let dims = [old[perm[0]], old[perm[1]], old[perm[2]]];
        Self::from_fn(dims, |a, b, c| {
            let mut idx = [0; 3];
            idx[perm[0]] = a;
            idx[perm[1]] = b;
            idx[perm[2]] = c;
            self.get(idx[0], idx[1], idx[2]).clone()
        })
    }

    fn check(&self, mode: usize, v: &[Rational]) -> Result<()> {
        if v.len() != self.dims[mode] {
            return Err(Error::Dimension(format!(
                "vector of length {} on mode {} of size {}",
                v.len(),
                mode + 1,
                self.dims[mode]
            )));
        }
        Ok(())
    }
}

/// `T(x, y, ·)`: the k-th entry is `Σᵢⱼ T(i,j,k) xᵢ yⱼ`.
pub fn contract_xy(t: &Tensor3, x: &[Rational], y: &[Rational]) -> Result<Vec<Rational>> {
    t.check(0, x)?;
    t.check(1, y)?;
    let [n1, n2, n3] = t.dims;
    let mut out = vec![Rational::zero(); n3];
    for i in 0..n1 {
        if x[i].is_zero() {
            continue;
        }
        for j in 0..n2 {
            if y[j].is_zero() {
                continue;
            }
            let w = &x[i] * &y[j];
            for (k, o) in out.iter_mut().enumerate() {
                *o += &w * t.get(i, j, k);
            }
        }
    }
    Ok(out)
}

/// `T(x, ·, z)`.
pub fn contract_xz(t: &Tensor3, x: &[Rational], z: &[Rational]) -> Result<Vec<Rational>> {
    t.check(0, x)?;
    t.check(2, z)?;
    let [n1, n2, n3] = t.dims;
    let mut out = vec![Rational::zero(); n2];
    for i in 0..n1 {
        if x[i].is_zero() {
            continue;
        }
        for k in 0..n3 {
            if z[k].is_zero() {
                continue;
            }
            let w = &x[i] * &z[k];
            for (j, o) in out.iter_mut().enumerate() {
                *o += &w * t.get(i, j, k);
            }
        }
    }
    Ok(out)
}

/// `T(·, y, z)`.
pub fn contract_yz(t: &Tensor3, y: &[Rational], z: &[Rational]) -> Result<Vec<Rational>> {
    t.check(1, y)?;
    t.check(2, z)?;
    let [n1, n2, n3] = t.dims;
    let mut out = vec![Rational::zero(); n1];
    for j in 0..n2 {
        if y[j].is_zero() {
            continue;
        }
        for k in 0..n3 {
            if z[k].is_zero() {
                continue;
            }
            let w = &y[j] * &z[k];
            for (i, o) in out.iter_mut().enumerate() {
                *o += &w * t.get(i, j, k);
            }
        }
    }
    Ok(out)
}

/// All three contractions vanish and every factor is nonzero.
pub fn verify_tensor_witness(t: &Tensor3, w: &WitnessTriple) -> Result<bool> {
    let xy = contract_xy(t, &w.x, &w.y)?;
    let xz = contract_xz(t, &w.x, &w.z)?;
    let yz = contract_yz(t, &w.y, &w.z)?;
    Ok(w.is_nonzero() && is_zero_vec(&xy) && is_zero_vec(&xz) && is_zero_vec(&yz))
}

/// [`verify_tensor_witness`] for factors with coordinates in `ℚ(√d)`.
pub fn verify_tensor_witness_surd(
    t: &Tensor3,
    field: &QuadField,
    x: &[Surd],
    y: &[Surd],
    z: &[Surd],
) -> Result<bool> {
    let [n1, n2, n3] = t.dims;
    if x.len() != n1 || y.len() != n2 || z.len() != n3 {
        return Err(Error::Dimension(format!(
            "witness lengths ({}, {}, {}) for tensor {:?}",
            x.len(),
            y.len(),
            z.len(),
            t.dims
        )));
    }
    if is_zero_surd_vec(x) || is_zero_surd_vec(y) || is_zero_surd_vec(z) {
        return Ok(false);
    }
    let mut xy = vec![Surd::default(); n3];
    let mut xz = vec![Surd::default(); n2];
    let mut yz = vec![Surd::default(); n1];
    for i in 0..n1 {
        for j in 0..n2 {
            for k in 0..n3 {
                let e = t.get(i, j, k);
                if e.is_zero() {
                    continue;
                }
                xy[k] = field.add(&xy[k], &field.scale(e, &field.mul(&x[i], &y[j])));
                xz[j] = field.add(&xz[j], &field.scale(e, &field.mul(&x[i], &z[k])));
                yz[i] = field.add(&yz[i], &field.scale(e, &field.mul(&y[j], &z[k])));
            }
        }
    }
    Ok(is_zero_surd_vec(&xy) && is_zero_surd_vec(&xz) && is_zero_surd_vec(&yz))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rational::int;

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| int(x)).collect()
    }

    fn sample() -> Tensor3 {
        let s1 = Matrix::zeros(2, 2);
        let s2 = Matrix::from_i64(&[&[1, 0], &[0, -1]]);
        Tensor3::from_slices(&[s1, s2]).unwrap()
    }

    #[test]
    fn zero_tensor_contracts_to_zero() {
        let t = Tensor3::zeros([2, 3, 4]);
        assert_eq!(contract_xy(&t, &v(&[1, 2]), &v(&[3, 4, 5])).unwrap(), v(&[0; 4]));
        assert_eq!(contract_xz(&t, &v(&[1, 2]), &v(&[1; 4])).unwrap(), v(&[0; 3]));
        assert_eq!(contract_yz(&t, &v(&[1; 3]), &v(&[1; 4])).unwrap(), v(&[0; 2]));
        let w = WitnessTriple::new(v(&[1, 0]), v(&[0, 0, 1]), v(&[1, 1, 1, 1])).unwrap();
        assert!(verify_tensor_witness(&t, &w).unwrap());
    }

    #[test]
    fn signature_slice_cancels() {
        let t = Tensor3::from_slices(&[
            Matrix::from_i64(&[&[1, 0], &[0, -1]]),
            Matrix::zeros(2, 2),
        ])
        .unwrap();
        assert_eq!(contract_xy(&t, &v(&[1, 1]), &v(&[1, 1])).unwrap(), v(&[0, 0]));
    }

    #[test]
    fn verification_examples() {
        let t = sample();
        let good = WitnessTriple::new(v(&[1, 1]), v(&[1, 1]), v(&[1, 0])).unwrap();
        assert!(verify_tensor_witness(&t, &good).unwrap());
        let zero_x = WitnessTriple {
            x: v(&[0, 0]),
            y: v(&[1, 1]),
            z: v(&[1, 0]),
        };
        assert!(!verify_tensor_witness(&Tensor3::zeros([2, 2, 2]), &zero_x).unwrap());
        let wrong_z = WitnessTriple::new(v(&[1, 1]), v(&[1, 1]), v(&[0, 1])).unwrap();
        assert!(!verify_tensor_witness(&t, &wrong_z).unwrap());
    }

    #[test]
    fn dimension_errors() {
        let t = sample();
        assert!(contract_xy(&t, &v(&[1]), &v(&[1, 1])).is_err());
        assert!(contract_yz(&t, &v(&[1, 1]), &v(&[1, 1, 1])).is_err());
    }

    #[test]
    fn permutation_moves_entries() {
        let t = Tensor3::from_fn([2, 3, 4], |i, j, k| int((100 * i + 10 * j + k) as i64));
        let p = t.permuted([2, 0, 1]);
        assert_eq!(p.dims(), [4, 2, 3]);
        assert_eq!(p.get(3, 1, 2), t.get(1, 2, 3));
    }

    #[test]
    fn surd_witness_for_irrational_isotropic_line() {
        // slices 0 and x² − 2y², the composed form of the quadratic x² − 2y²
        let t = Tensor3::from_slices(&[Matrix::zeros(2, 2), Matrix::from_i64(&[&[1, 0], &[0, -2]])]).unwrap();
        let f = QuadField::new(int(2)).unwrap();
        let u = vec![f.sqrt_d(), Surd::rational(int(1))];
        let e0 = vec![Surd::rational(int(1)), Surd::default()];
        let e1 = vec![Surd::default(), Surd::rational(int(1))];
        assert!(verify_tensor_witness_surd(&t, &f, &u, &u, &e0).unwrap());
        assert!(!verify_tensor_witness_surd(&t, &f, &u, &u, &e1).unwrap());
        assert!(!verify_tensor_witness_surd(&t, &f, &u, &[Surd::default(), Surd::default()], &e0).unwrap());
        assert!(verify_tensor_witness_surd(&t, &f, &u, &u, &u[..1]).is_err());
    }
}
