//! Counterexamples to deterministic embeddings of degeneracy, each packaged
//! with assertions that are re-checked exactly before a demo is returned.

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactmath::rational::int;
use crate::exactmath::Rational;
use crate::hyperdet::{degenerate_generator, hyperdet, Format};
use crate::instances::{verify_tensor_witness, Instance, Tensor3, WitnessTriple};
use crate::report::ser_rational;
use crate::seed;

const DEMO_STREAM: u64 = 0xde70;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DemoTag {
    DirectSum,
    Pairwise,
    Vandermonde,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Assertion {
    pub name: String,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FailureDemo {
    pub tag: DemoTag,
    #[serde(serialize_with = "ser_tensors")]
    pub instances: Vec<Tensor3>,
    pub witnesses: Vec<WitnessTriple>,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "ser_opt_rational")]
    pub hyperdet_t: Option<Rational>,
    pub assertions: Vec<Assertion>,
    pub verified: bool,
}

fn ser_tensors<S: serde::Serializer>(ts: &[Tensor3], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(ts.iter().map(|t| Instance::Tensor(t.clone())))
}

fn ser_opt_rational<S: serde::Serializer>(r: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => ser_rational(r, s),
        None => s.serialize_none(),
    }
}

impl FailureDemo {
    fn new(tag: DemoTag, instances: Vec<Tensor3>, witnesses: Vec<WitnessTriple>, assertions: Vec<Assertion>) -> Self {
        let verified = assertions.iter().all(|a| a.holds);
        Self {
            tag,
            instances,
            witnesses,
            hyperdet_t: None,
            assertions,
            verified,
        }
    }
}

fn assertion(name: &str, holds: bool) -> Assertion {
    Assertion {
        name: name.to_string(),
        holds,
    }
}

/// Block-diagonal placement of `t` and `s` on disjoint index ranges.
pub fn direct_sum(t: &Tensor3, s: &Tensor3) -> Tensor3 {
    let [a, b, c] = t.dims();
    let [d, e, f] = s.dims();
    Tensor3::from_fn([a + d, b + e, c + f], |i, j, k| {
        if i < a && j < b && k < c {
            t.get(i, j, k).clone()
        } else if i >= a && j >= b && k >= c {
            s.get(i - a, j - b, k - c).clone()
        } else {
            Rational::zero()
        }
    })
}

/// Witness of `s` padded with zeros on the coordinates of `t`.
pub fn pad_witness(t_dims: [usize; 3], w: &WitnessTriple) -> WitnessTriple {
    let pad = |n: usize, v: &[Rational]| {
        let mut out = vec![Rational::zero(); n];
        out.extend_from_slice(v);
        out
    };
    WitnessTriple {
        x: pad(t_dims[0], &w.x),
        y: pad(t_dims[1], &w.y),
        z: pad(t_dims[2], &w.z),
    }
}

/// A nondegenerate `T` whose direct sum with a degenerate `S` is degenerate.
pub fn demo_direct_sum_failure(seed: u64) -> Result<FailureDemo> {
    let f = Format([3, 2, 2]);
    let mut attempt = 0;
    let (t, h) = loop {
        let mut rng = seed::rng(seed::derive(seed, DEMO_STREAM, attempt));
        let t = Tensor3::from_fn(f.0, |_, _, _| seed::small_int(&mut rng, 3));
        let h = hyperdet(&t)?.value;
        if !h.is_zero() {
            break (t, h);
        }
        attempt += 1;
    };
    let (s, ws) = degenerate_generator(f, seed::derive(seed, DEMO_STREAM + 1, 0));
    let sum = direct_sum(&t, &s);
    let w = pad_witness(t.dims(), &ws);
    let in_s_block = w.x[..3].iter().all(Zero::is_zero)
        && w.y[..2].iter().all(Zero::is_zero)
        && w.z[..2].iter().all(Zero::is_zero);
    let assertions = vec![
        assertion("hyperdet_t_nonzero", !hyperdet(&t)?.value.is_zero()),
        assertion("s_witness_verifies", verify_tensor_witness(&s, &ws)?),
        assertion("padded_witness_verifies_on_sum", verify_tensor_witness(&sum, &w)?),
        assertion("witness_supported_in_s_block", in_s_block && w.is_nonzero()),
    ];
    let mut demo = FailureDemo::new(DemoTag::DirectSum, vec![t, s, sum], vec![ws, w], assertions);
    demo.hyperdet_t = Some(h);
    Ok(demo)
}

fn unit(n: usize, i: usize) -> Vec<Rational> {
    (0..n).map(|j| int((i == j) as i64)).collect()
}

/// `x_a y_a = x_a z_a = y_a z_a = 0` for every coordinate `a`.
pub fn coordinatewise_annihilation(w: &WitnessTriple) -> bool {
    let pairs = [(&w.x, &w.y), (&w.x, &w.z), (&w.y, &w.z)];
    pairs
        .iter()
        .all(|(u, v)| u.len() == v.len() && u.iter().zip(v.iter()).all(|(a, b)| (a * b).is_zero()))
}

/// Diagonal tensor with `D(a, a, a) = weights[a]`; its contractions are the
/// weighted coordinate products, so degeneracy with a witness is exactly
/// weighted coordinatewise annihilation.
pub fn diagonal_tensor(weights: &[Rational]) -> Tensor3 {
    let n = weights.len();
    Tensor3::from_fn([n, n, n], |i, j, k| {
        if i == j && j == k {
            weights[i].clone()
        } else {
            Rational::zero()
        }
    })
}

fn check_dimension(n: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!(
            "three distinct indices need n >= 3, got {n}"
        )));
    }
    Ok(())
}

pub fn demo_disjoint_support(n: usize) -> Result<FailureDemo> {
    demo_disjoint_support_at(n, [0, 1, 2])
}

/// `x = e_i, y = e_j, z = e_k` with distinct `i, j, k` (0-based).
pub fn demo_disjoint_support_at(n: usize, idx: [usize; 3]) -> Result<FailureDemo> {
    check_dimension(n)?;
    let [i, j, k] = idx;
    if i == j || j == k || i == k || idx.iter().any(|&a| a >= n) {
        return Err(Error::InvalidArgument(format!(
            "indices {idx:?} must be distinct and below {n}"
        )));
    }
    let w = WitnessTriple {
        x: unit(n, i),
        y: unit(n, j),
        z: unit(n, k),
    };
    let d = diagonal_tensor(&vec![int(1); n]);
    let assertions = vec![
        assertion("all_vectors_nonzero", w.is_nonzero()),
        assertion("pairwise_products_zero", coordinatewise_annihilation(&w)),
        assertion("diagonal_tensor_degenerate", verify_tensor_witness(&d, &w)?),
    ];
    Ok(FailureDemo::new(DemoTag::Pairwise, vec![d], vec![w], assertions))
}

pub fn demo_vandermonde_failure(n: usize) -> Result<FailureDemo> {
    check_dimension(n)?;
    demo_vandermonde_with(
        n,
        WitnessTriple {
            x: unit(n, 0),
            y: unit(n, 1),
            z: unit(n, 2),
        },
    )
}

/// Checks a candidate triple against every Vandermonde-weighted diagonal
/// tensor `D_p(a, a, a) = (a + 1)^p`, `p < n`. Triples that do not annihilate
/// coordinatewise are rejected.
pub fn demo_vandermonde_with(n: usize, w: WitnessTriple) -> Result<FailureDemo> {
    check_dimension(n)?;
    if w.dims() != [n; 3] {
        return Err(Error::Dimension(format!("witness dims {:?} for n = {n}", w.dims())));
    }
    if !coordinatewise_annihilation(&w) {
        return Err(Error::WitnessRejected(
            "triple does not annihilate coordinatewise".into(),
        ));
    }
    let tensors: Vec<Tensor3> = (0..n as u32)
        .map(|p| {
            let weights: Vec<Rational> = (1..=n as i64).map(|a| int(a.pow(p))).collect();
            diagonal_tensor(&weights)
        })
        .collect();
    let mut all_degenerate = true;
    for t in &tensors {
        all_degenerate &= verify_tensor_witness(t, &w)?;
    }
    let assertions = vec![
        assertion("all_vectors_nonzero", w.is_nonzero()),
        assertion("coordinatewise_annihilation", coordinatewise_annihilation(&w)),
        assertion("every_weighted_tensor_degenerate", all_degenerate),
    ];
    Ok(FailureDemo::new(DemoTag::Vandermonde, tensors, vec![w], assertions))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn direct_sum_layout() {
        let t = Tensor3::from_fn([2, 2, 2], |i, j, k| int((i + 2 * j + 4 * k) as i64 + 1));
        let s = Tensor3::from_fn([2, 2, 2], |i, j, k| int(-((i + j + k) as i64) - 1));
        let sum = direct_sum(&t, &s);
        assert_eq!(sum.dims(), [4, 4, 4]);
        assert_eq!(sum.get(3, 2, 3), s.get(1, 0, 1));
        assert_eq!(sum.get(1, 1, 0), t.get(1, 1, 0));
        assert!(sum.get(0, 3, 0).is_zero());

        let with_zero = direct_sum(&t, &Tensor3::zeros([1, 1, 1]));
        let w = pad_witness([2, 2, 2], &WitnessTriple::new(vec![int(1)], vec![int(1)], vec![int(1)]).unwrap());
        assert!(verify_tensor_witness(&with_zero, &w).unwrap());
    }

    #[test]
    fn direct_sum_demo() {
        for s in 0..5 {
            let d = demo_direct_sum_failure(s).unwrap();
            assert!(d.verified, "{:?}", d.assertions);
            assert!(!d.hyperdet_t.as_ref().unwrap().is_zero());
        }
    }

    #[test]
    fn both_blocks_degenerate() {
        let (t, wt) = degenerate_generator(Format([3, 2, 2]), 1);
        let (s, ws) = degenerate_generator(Format([3, 2, 2]), 2);
        let sum = direct_sum(&t, &s);
        let mut lead = wt.clone();
        lead.x.extend(vec![int(0); 3]);
        lead.y.extend(vec![int(0); 2]);
        lead.z.extend(vec![int(0); 2]);
        assert!(verify_tensor_witness(&sum, &lead).unwrap());
        assert!(verify_tensor_witness(&sum, &pad_witness(t.dims(), &ws)).unwrap());
    }

    #[test]
    fn disjoint_support_examples() {
        assert!(demo_disjoint_support(3).unwrap().verified);
        assert!(demo_disjoint_support(2).is_err());
        assert!(demo_disjoint_support_at(4, [0, 2, 3]).unwrap().verified);
        assert!(demo_disjoint_support_at(4, [0, 0, 3]).is_err());
    }

    #[test]
    fn vandermonde_examples() {
        for n in 3..=5 {
            assert!(demo_vandermonde_failure(n).unwrap().verified);
        }
        assert!(demo_vandermonde_failure(2).is_err());
        let overlapping = WitnessTriple {
            x: unit(3, 0),
            y: unit(3, 1),
            z: unit(3, 0),
        };
        assert!(matches!(
            demo_vandermonde_with(3, overlapping),
            Err(Error::WitnessRejected(_))
        ));
        let disjoint = demo_disjoint_support_at(4, [0, 2, 3]).unwrap().witnesses[0].clone();
        assert!(demo_vandermonde_with(4, disjoint).unwrap().verified);
    }
}
