use num_traits::{One, Zero};
use proptest::prelude::*;

use degen::degeneracy::{check_tensor_verdict, decide, SearchConfig};
use degen::exactmath::rational::{format_rational, int, parse_rational, primitive};
use degen::exactmath::{
    definiteness, det_exact, kernel_basis, rank_exact, sturm_root_count, Bound, Definiteness, Matrix, Rational,
    UniPoly,
};
use degen::hyperdet::{degenerate_generator, Format};
use degen::instances::{
    contract_xy, contract_yz, verify_pencil_witness, verify_quadratic_witness, verify_tensor_witness, Instance, PencilInstance,
    QuadraticInstance, Tensor3, Witness, WitnessTriple,
};
use degen::reductions::{
    extract_tensor_to_quad_witness, lift_quad_to_tensor_witness, pencil_to_tensor, quad_to_tensor,
};

fn rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=6).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

fn small_int() -> impl Strategy<Value = Rational> {
    (-3i64..=3).prop_map(int)
}

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
    proptest::collection::vec(small_int(), rows * cols).prop_map(move |d| Matrix::new(rows, cols, d).unwrap())
}

fn square() -> impl Strategy<Value = Matrix> {
    (1usize..=4).prop_flat_map(|n| matrix(n, n))
}

fn symmetric() -> impl Strategy<Value = Matrix> {
    square().prop_map(|m| m.add(&m.transpose()).unwrap())
}

fn tensor(max: usize) -> impl Strategy<Value = Tensor3> {
    [1..=max, 1..=max, 1..=max].prop_flat_map(|dims| {
        proptest::collection::vec(small_int(), dims.iter().product::<usize>())
            .prop_map(move |d| Tensor3::new(dims, d).unwrap())
    })
}

fn vector(n: usize) -> impl Strategy<Value = Vec<Rational>> {
    proptest::collection::vec(small_int(), n)
}

fn cofactor_det(m: &Matrix) -> Rational {
    let n = m.rows();
    if n == 1 {
        return m.get(0, 0).clone();
    }
    let mut acc = Rational::zero();
    for j in 0..n {
        let minor = Matrix::from_rows(
            (1..n).map(|i| (0..n).filter(|&c| c != j).map(|c| m.get(i, c).clone()).collect()).collect(),
        )
        .unwrap();
        let term = m.get(0, j) * cofactor_det(&minor);
        acc = if j % 2 == 0 { acc + term } else { acc - term };
    }
    acc
}

/// `det(tI − Q)` by Lagrange interpolation at `t = 0..=n`.
fn char_poly(q: &Matrix) -> UniPoly {
    let n = q.rows();
    let nodes: Vec<Rational> = (0..=n as i64).map(int).collect();
    let mut acc = UniPoly::zero();
    for (i, ti) in nodes.iter().enumerate() {
        let shifted = Matrix::identity(n).scaled(ti).add(&q.scaled(&int(-1))).unwrap();
        let mut basis = UniPoly::constant(det_exact(&shifted).unwrap());
        for (j, tj) in nodes.iter().enumerate() {
            if i != j {
                basis = basis.mul(&UniPoly::linear_root(tj)).scale(&(Rational::one() / (ti - tj)));
            }
        }
        acc = acc.add(&basis);
    }
    acc
}

fn sign_changes(p: &UniPoly) -> usize {
    let signs: Vec<bool> = p.coeffs().iter().filter(|c| !c.is_zero()).map(|c| c > &Rational::zero()).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]


    #[test]
    fn det_is_multiplicative((a, b) in (1usize..=4).prop_flat_map(|n| (matrix(n, n), matrix(n, n)))) {
        let ab = a.mul(&b).unwrap();
        prop_assert_eq!(det_exact(&ab).unwrap(), det_exact(&a).unwrap() * det_exact(&b).unwrap());
    }

    #[test]
    fn rank_nullity(m in (1usize..=4, 1usize..=5).prop_flat_map(|(r, c)| matrix(r, c))) {
        let c = m.cols();
        let k = kernel_basis(&m);
        prop_assert_eq!(rank_exact(&m) + k.len(), c);
        prop_assert_eq!(rank_exact(&m), rank_exact(&m.transpose()));
        prop_assert_eq!(rank_exact(&m) + kernel_basis(&m.transpose()).len(), m.rows());
        for v in &k {
            prop_assert!(m.mul_vec(v).unwrap().iter().all(Zero::is_zero));
        }
        if !k.is_empty() {
            prop_assert_eq!(rank_exact(&Matrix::from_rows(k.clone()).unwrap()), k.len());
        }
    }

    #[test]
    fn definiteness_agrees_with_descartes(q in symmetric()) {
        let p = char_poly(&q);
        let n = q.rows();
        prop_assert_eq!(p.degree(), Some(n));
        // all eigenvalues are real, so sign changes count positive roots exactly
        let positive = sign_changes(&p);
        let negative = sign_changes(&UniPoly::new(
            p.coeffs().iter().enumerate().map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() }).collect(),
        ));
        let expected = if positive == n {
            Definiteness::PositiveDefinite
        } else if negative == n {
            Definiteness::NegativeDefinite
        } else {
            Definiteness::Neither
        };
        prop_assert_eq!(definiteness(&q).unwrap(), expected);
    }

    #[test]
    fn sturm_counts_planted_roots(
        roots in proptest::collection::btree_set(-12i64..=12, 1..6),
        lead in prop_oneof![Just(1i64), Just(-3), Just(2)],
        (lo, hi) in (-15i64..=15, 1i64..=30).prop_map(|(a, w)| (a, a + w)),
        irreducible in any::<bool>(),
    ) {
        let halves: Vec<Rational> = roots.iter().map(|&r| Rational::new(r.into(), 2.into())).collect();
        let mut p = UniPoly::constant(int(lead));
        for r in &halves {
            p = p.mul(&UniPoly::linear_root(r));
        }
        if irreducible {
            p = p.mul(&UniPoly::from_i64(&[1, 0, 1]));
        }
        let (lo, hi) = (Rational::new(lo.into(), 2.into()), Rational::new(hi.into(), 2.into()));
        let expected = halves.iter().filter(|r| **r > lo && **r <= hi).count();
        prop_assert_eq!(sturm_root_count(&p, &Bound::from(lo), &Bound::from(hi)).unwrap(), expected);
        prop_assert_eq!(
            sturm_root_count(&p, &Bound::NegInfinity, &Bound::PosInfinity).unwrap(),
            halves.len()
        );
    }

    #[test]
    fn rational_text_round_trip(r in rational()) {
        prop_assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
    }

    #[test]
    fn instance_json_round_trip(t in tensor(3), k in 1usize..=3) {
        let inst = Instance::Tensor(t.clone());
        prop_assert_eq!(Instance::from_json(&inst.to_json()).unwrap(), inst);
        let [n, _, _] = t.dims();
        let slices: Vec<Matrix> = (0..k).map(|l| {
            Matrix::from_rows((0..n).map(|i| (0..n).map(|j| t.get(i, j % t.dims()[1], l % t.dims()[2]).clone()).collect()).collect()).unwrap()
        }).collect();
        let sym: Vec<Matrix> = slices.iter().map(|m| m.add(&m.transpose()).unwrap()).collect();
        for inst in [
            Instance::Pencil(PencilInstance::new(n, slices.clone()).unwrap()),
            Instance::Quadratic(QuadraticInstance::new(n, sym).unwrap()),
        ] {
            prop_assert_eq!(Instance::from_json(&inst.to_json()).unwrap(), inst);
        }
        let w = Witness::from(WitnessTriple { x: t.entries().to_vec(), y: vec![int(1)], z: vec![int(0), int(2)] });
        prop_assert_eq!(Witness::from_json(&w.to_json()).unwrap(), w);
    }

    #[test]
    fn tensor_witnesses_are_scale_invariant(
        dims in [1usize..=3, 1usize..=3, 1usize..=3].prop_filter("two unit modes", |d| {
            d.iter().filter(|&&n| n == 1).count() < 2
        }),
        seed in any::<u64>(),
        (a, b, c) in (1i64..=5, -5i64..=-1, 1i64..=7),
    ) {
        let (t, w) = degenerate_generator(Format(dims), seed);
        prop_assert!(verify_tensor_witness(&t, &w).unwrap());
        let s = |v: &[Rational], k: i64| v.iter().map(|e| e * int(k)).collect::<Vec<_>>();
        let scaled = WitnessTriple { x: s(&w.x, a), y: s(&w.y, b), z: s(&w.z, c) };
        prop_assert!(verify_tensor_witness(&t, &scaled).unwrap());
        prop_assert!(verify_tensor_witness(&t.scaled(&int(-2)), &w).unwrap());
        let zeroed = WitnessTriple { x: s(&w.x, 0), ..w.clone() };
        prop_assert!(!verify_tensor_witness(&t, &zeroed).unwrap());
    }

    #[test]
    fn contractions_are_multilinear(
        (t, x1, x2, y, z) in tensor(3).prop_flat_map(|t| {
            let [n1, n2, n3] = t.dims();
            (Just(t), vector(n1), vector(n1), vector(n2), vector(n3))
        }),
        k in -3i64..=3,
    ) {
        let comb: Vec<Rational> = x1.iter().zip(&x2).map(|(a, b)| a + b * int(k)).collect();
        let lhs = contract_xy(&t, &comb, &y).unwrap();
        let r1 = contract_xy(&t, &x1, &y).unwrap();
        let r2 = contract_xy(&t, &x2, &y).unwrap();
        let rhs: Vec<Rational> = r1.iter().zip(&r2).map(|(a, b)| a + b * int(k)).collect();
        prop_assert_eq!(lhs, rhs);
        let scaled: Vec<Rational> = y.iter().map(|e| e * Rational::new(k.into(), 7.into())).collect();
        prop_assert_eq!(
            contract_xy(&t, &x1, &scaled).unwrap(),
            r1.iter().map(|e| e * Rational::new(k.into(), 7.into())).collect::<Vec<_>>()
        );
        prop_assert_eq!(contract_yz(&t, &y, &z).unwrap(), contract_yz(&t.permuted([0, 2, 1]), &z, &y).unwrap());
    }

    #[test]
    fn pencil_and_tensor_verifiers_agree(
        (ms, ws) in (1usize..=3, 1usize..=3).prop_flat_map(|(n, r)| {
            let w = (vector(n), vector(n), vector(r)).prop_map(|(x, y, z)| WitnessTriple { x, y, z });
            (proptest::collection::vec(matrix(n, n), r), proptest::collection::vec(w, 20))
        }),
    ) {
        let p = PencilInstance::new(ms[0].rows(), ms).unwrap();
        let (t, _) = pencil_to_tensor(&p);
        for w in &ws {
            prop_assert_eq!(verify_pencil_witness(&p, w).unwrap(), verify_tensor_witness(&t, w).unwrap());
        }
    }

    #[test]
    fn reduction_lifts_and_extracts(
        n in 2usize..=4,
        u in vector(4),
        qs in proptest::collection::vec(matrix(4, 4), 1..=3),
    ) {
        let u: Vec<Rational> = u[..n].to_vec();
        prop_assume!(u.iter().any(|x| !x.is_zero()));
        let pivot = u.iter().position(|x| !x.is_zero()).unwrap();
        // plant u as an isotropic vector of every form
        let forms: Vec<Matrix> = qs
            .iter()
            .map(|m| {
                let m = Matrix::from_rows((0..n).map(|i| m.row(i)[..n].to_vec()).collect()).unwrap();
                let mut s = m.add(&m.transpose()).unwrap();
                let val = s.bilinear(&u, &u).unwrap();
                let fix = s.get(pivot, pivot) - val / (&u[pivot] * &u[pivot]);
                s.set(pivot, pivot, fix);
                s
            })
            .collect();
        let q = QuadraticInstance::new(n, forms).unwrap();
        prop_assert!(verify_quadratic_witness(&q, &u).unwrap());
        let (t, _) = quad_to_tensor(&q);
        let w = lift_quad_to_tensor_witness(&q, &u).unwrap();
        prop_assert!(verify_tensor_witness(&t, &w).unwrap());
        let back = extract_tensor_to_quad_witness(&q, &w).unwrap();
        prop_assert_eq!(primitive(&back), primitive(&u));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn det_matches_cofactor_expansion(
        m in (1usize..=4).prop_flat_map(|n| {
            proptest::collection::vec((-2i64..=2).prop_map(int), n * n)
                .prop_map(move |d| Matrix::new(n, n, d).unwrap())
        }),
    ) {
        prop_assert_eq!(det_exact(&m).unwrap(), cofactor_det(&m));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn decide_verdicts_replay(t in tensor(3)) {
        let cfg = SearchConfig { restarts: 8, ..SearchConfig::with_seed(3) };
        let v = decide(&t, &cfg).unwrap();
        prop_assert!(check_tensor_verdict(&t, &v).unwrap(), "{:?}", v);
        if let Some(w) = v.tensor_witness() {
            prop_assert!(verify_tensor_witness(&t, w).unwrap());
        }
    }
}
