//! Floating-point witness search with exact acceptance.
//!
//! The residual `‖T(x,y,·)‖² + ‖T(x,·,z)‖² + ‖T(·,y,z)‖²` is quadratic in each
//! factor once the other two are fixed, so each block step is an exact
//! minimization over the unit sphere: the eigenvector of the smallest
//! eigenvalue of a small Gram matrix. Block sweeps stall in flat valleys, so
//! each restart ends with Levenberg–Marquardt steps on the contractions.
//! Converged points are rounded to rationals and accepted only if
//! [`verify_tensor_witness`] passes.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::Rng;
use serde::Serialize;

use crate::error::Result;
use crate::exactmath::rational::{approximate, primitive, to_f64};
use crate::exactmath::{kernel_basis, Matrix, Rational};
use crate::instances::{verify_tensor_witness, Tensor3, WitnessTriple};
use crate::seed;

const SEARCH_STREAM: u64 = 0x7e57;
const SNAP_TO_ZERO: f64 = 1e-9;
const REFINE_STEPS: usize = 60;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchConfig {
    pub restarts: usize,
    /// Block sweeps per restart.
    pub iterations: usize,
    /// Acceptance threshold on the squared residual before rounding.
    pub tolerance: f64,
    pub denominator_bound: u64,
    pub seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            restarts: 200,
            iterations: 500,
            tolerance: 1e-10,
            denominator_bound: 64,
            seed: 0,
        }
    }
}

impl SearchConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0
            || self.iterations == 0
            || self.denominator_bound == 0
            || !(self.tolerance > 0.0)
        {
            return Err(crate::error::Error::InvalidArgument(
                "search bounds must be positive".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchOutcome {
    pub witness: Option<WitnessTriple>,
    pub restarts_run: usize,
    pub found_at_restart: Option<usize>,
    pub best_residual: f64,
}

struct FloatTensor {
    dims: [usize; 3],
    data: Vec<f64>,
}

impl FloatTensor {
    fn new(t: &Tensor3) -> Self {
        Self {
            dims: t.dims(),
            data: t.entries().iter().map(to_f64).collect(),
        }
    }

    fn at(&self, i: usize, j: usize, k: usize) -> f64 {
        self.data[(i * self.dims[1] + j) * self.dims[2] + k]
    }

    /// Coefficient matrices `(B, C)` such that, with the other two factors
    /// fixed, the two contractions involving `mode` equal `Bᵀv` and `Cᵀv`.
    fn blocks(&self, mode: usize, f: &[Vec<f64>; 3]) -> (DMatrix<f64>, DMatrix<f64>) {
        let [n1, n2, n3] = self.dims;
        match mode {
            0 => {
                let b = DMatrix::from_fn(n1, n3, |i, k| (0..n2).map(|j| self.at(i, j, k) * f[1][j]).sum());
                let c = DMatrix::from_fn(n1, n2, |i, j| (0..n3).map(|k| self.at(i, j, k) * f[2][k]).sum());
                (b, c)
            }
            1 => {
                let b = DMatrix::from_fn(n2, n3, |j, k| (0..n1).map(|i| self.at(i, j, k) * f[0][i]).sum());
                let c = DMatrix::from_fn(n2, n1, |j, i| (0..n3).map(|k| self.at(i, j, k) * f[2][k]).sum());
                (b, c)
            }
            _ => {
                let b = DMatrix::from_fn(n3, n2, |k, j| (0..n1).map(|i| self.at(i, j, k) * f[0][i]).sum());
                let c = DMatrix::from_fn(n3, n1, |k, i| (0..n2).map(|j| self.at(i, j, k) * f[1][j]).sum());
                (b, c)
            }
        }
    }

    /// The three contractions `T(x,y,·)`, `T(x,·,z)`, `T(·,y,z)`, concatenated.
    fn contractions(&self, f: &[Vec<f64>; 3]) -> Vec<f64> {
        let [n1, n2, n3] = self.dims;
        let mut out = vec![0.0; n1 + n2 + n3];
        for i in 0..n1 {
            for j in 0..n2 {
                for k in 0..n3 {
                    let t = self.at(i, j, k);
                    out[k] += t * f[0][i] * f[1][j];
                    out[n3 + j] += t * f[0][i] * f[2][k];
                    out[n3 + n2 + i] += t * f[1][j] * f[2][k];
                }
            }
        }
        out
    }

    fn residual(&self, f: &[Vec<f64>; 3]) -> f64 {
        self.contractions(f).iter().map(|r| r * r).sum()
    }

    /// Jacobian of the contractions plus the three sphere constraints
    /// `|v|² − 1`, columns ordered `x, y, z`.
    fn jacobian(&self, f: &[Vec<f64>; 3]) -> DMatrix<f64> {
        let [n1, n2, n3] = self.dims;
        let (ox, oy, oz) = (0, n1, n1 + n2);
        let mut j = DMatrix::zeros(n1 + n2 + n3 + 3, n1 + n2 + n3);
        for a in 0..n1 {
            for b in 0..n2 {
                for c in 0..n3 {
                    let t = self.at(a, b, c);
                    j[(c, ox + a)] += t * f[1][b];
                    j[(c, oy + b)] += t * f[0][a];
                    j[(n3 + b, ox + a)] += t * f[2][c];
                    j[(n3 + b, oz + c)] += t * f[0][a];
                    j[(n3 + n2 + a, oy + b)] += t * f[2][c];
                    j[(n3 + n2 + a, oz + c)] += t * f[1][b];
                }
            }
        }
        let base = n1 + n2 + n3;
        for (m, off) in [ox, oy, oz].into_iter().enumerate() {
            for (i, v) in f[m].iter().enumerate() {
                j[(base + m, off + i)] = 2.0 * v;
            }
        }
        j
    }

    fn full_residual(&self, f: &[Vec<f64>; 3]) -> DVector<f64> {
        let mut r = self.contractions(f);
        r.extend(f.iter().map(|v| v.iter().map(|x| x * x).sum::<f64>() - 1.0));
        DVector::from_vec(r)
    }

    /// Levenberg–Marquardt on the contractions with sphere constraints.
    fn refine(&self, f: &mut [Vec<f64>; 3], steps: usize, target: f64) {
        let mut mu = 1e-3;
        let mut r = self.full_residual(f);
        let mut cost = r.norm_squared();
        for _ in 0..steps {
            if cost < target {
                return;
            }
            let j = self.jacobian(f);
            let jt = j.transpose();
            let g = &jt * &r;
            let h = &jt * &j;
            let mut improved = false;
            for _ in 0..12 {
                let mut a = h.clone();
                for d in 0..a.nrows() {
                    a[(d, d)] += mu * (1.0 + h[(d, d)]);
                }
                let Some(step) = a.cholesky().map(|c| c.solve(&(-&g))) else {
                    mu *= 10.0;
                    continue;
                };
                let mut next = f.clone();
                let mut o = 0;
                for v in next.iter_mut() {
                    for x in v.iter_mut() {
                        *x += step[o];
                        o += 1;
                    }
                }
                let nr = self.full_residual(&next);
                let nc = nr.norm_squared();
                if nc < cost {
                    *f = next;
                    r = nr;
                    cost = nc;
                    mu = (mu * 0.3).max(1e-15);
                    improved = true;
                    break;
                }
                mu *= 10.0;
            }
            if !improved {
                return;
            }
        }
    }
}

fn normalize(v: &mut [f64]) {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if n > 0.0 {
        v.iter_mut().for_each(|x| *x /= n);
    }
}

fn smallest_eigenvector(g: DMatrix<f64>) -> Vec<f64> {
    let eig = SymmetricEigen::new(g);
    let idx = eig
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .unwrap_or(0);
    eig.eigenvectors.column(idx).iter().copied().collect()
}

fn random_unit(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-3 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

/// Coordinates scaled by the largest magnitude, then rationalized.
fn round_vector(v: &[f64], bound: u64) -> Option<Vec<Rational>> {
    let max = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if max == 0.0 || !max.is_finite() {
        return None;
    }
    let r: Vec<Rational> = v
        .iter()
        .map(|x| {
            let s = x / max;
            if s.abs() < SNAP_TO_ZERO {
                Some(Rational::default())
            } else {
                approximate(s, bound)
            }
        })
        .collect::<Option<_>>()?;
    Some(primitive(&r))
}

/// Exact linear conditions on factor `mode` given the other two factors.
fn exact_conditions(t: &Tensor3, mode: usize, w: &[Vec<Rational>; 3]) -> Matrix {
    let dims = t.dims();
    let others: Vec<usize> = (0..3).filter(|&m| m != mode).collect();
    let mut rows = Vec::new();
    for &fixed in &others {
        let free = 3 - mode - fixed;
        // contraction over `mode` and `fixed`, one row per index of `free`
        for out in 0..dims[free] {
            let mut row = vec![Rational::default(); dims[mode]];
            for (a, cell) in row.iter_mut().enumerate() {
                let mut s = Rational::default();
                for b in 0..dims[fixed] {
                    let mut idx = [0usize; 3];
                    idx[mode] = a;
                    idx[fixed] = b;
                    idx[free] = out;
                    s += t.get(idx[0], idx[1], idx[2]) * &w[fixed][b];
                }
                *cell = s;
            }
            rows.push(row);
        }
    }
    Matrix::from_rows(rows).expect("rectangular")
}

/// Candidate exact witnesses from a converged floating point.
fn round_candidates(t: &Tensor3, f: &[Vec<f64>; 3], bound: u64) -> Vec<WitnessTriple> {
    let rounded: Vec<Option<Vec<Rational>>> = f.iter().map(|v| round_vector(v, bound)).collect();
    let mut out = Vec::new();
    if let (Some(x), Some(y), Some(z)) = (&rounded[0], &rounded[1], &rounded[2]) {
        out.push(WitnessTriple {
            x: x.clone(),
            y: y.clone(),
            z: z.clone(),
        });
    }
    // round two factors, solve the linear conditions on the third exactly
    for mode in 0..3 {
        let others: Vec<usize> = (0..3).filter(|&m| m != mode).collect();
        let (Some(a), Some(b)) = (&rounded[others[0]], &rounded[others[1]]) else {
            continue;
        };
        let mut w: [Vec<Rational>; 3] = Default::default();
        w[others[0]] = a.clone();
        w[others[1]] = b.clone();
        for k in kernel_basis(&exact_conditions(t, mode, &w)) {
            let mut cand = w.clone();
            cand[mode] = primitive(&k);
            let [x, y, z] = cand;
            out.push(WitnessTriple { x, y, z });
        }
    }
    out
}

/// Runs restarts in index order; the first exactly verified witness wins.
pub fn numerical_search(t: &Tensor3, cfg: &SearchConfig) -> SearchOutcome {
    let ft = FloatTensor::new(t);
    let dims = t.dims();
    let mut best = f64::INFINITY;
    for restart in 0..cfg.restarts {
        let mut rng = seed::rng(seed::derive(cfg.seed, SEARCH_STREAM, restart as u64));
        let mut f: [Vec<f64>; 3] = [
            random_unit(&mut rng, dims[0]),
            random_unit(&mut rng, dims[1]),
            random_unit(&mut rng, dims[2]),
        ];
        let mut res = ft.residual(&f);
        for _ in 0..cfg.iterations {
            if res < cfg.tolerance * 1e-6 {
                break;
            }
            for mode in 0..3 {
                let (b, c) = ft.blocks(mode, &f);
                let g = &b * b.transpose() + &c * c.transpose();
                f[mode] = smallest_eigenvector(g);
            }
            let next = ft.residual(&f);
            let stalled = (res - next).abs() <= 1e-14 * res.max(1e-300);
            res = next;
            if stalled {
                break;
            }
        }
        if res >= cfg.tolerance * 1e-6 {
            ft.refine(&mut f, REFINE_STEPS, cfg.tolerance * 1e-6);
            f.iter_mut().for_each(|v| normalize(v));
            res = ft.residual(&f);
        }
        best = best.min(res);
        if res < cfg.tolerance {
            for cand in round_candidates(t, &f, cfg.denominator_bound) {
                if verify_tensor_witness(t, &cand).unwrap_or(false) {
                    return SearchOutcome {
                        witness: Some(cand.normalized()),
                        restarts_run: restart + 1,
                        found_at_restart: Some(restart),
                        best_residual: best,
                    };
                }
            }
        }
    }
    SearchOutcome {
        witness: None,
        restarts_run: cfg.restarts,
        found_at_restart: None,
        best_residual: best,
    }
}
