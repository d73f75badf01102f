//! Completion polynomials `P_T(U) = Det(T̂(U))`.
//!
//! An input tensor is placed at the origin corner of the smallest supported
//! boundary format that contains it; every other target cell is a free
//! variable. Nothing here claims that `P_T ≡ 0` exactly for degenerate `T`:
//! zero verdicts are always qualified by the evaluation budget.

use num_traits::Zero;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactmath::rational::int;
use crate::exactmath::{format_rational, Rational};
use crate::hyperdet::{hyperdet, hyperdet_degree, is_supported, Format, MAX_MATRIX_FORMAT};
use crate::instances::Tensor3;
use crate::report::{digest, ser_rational, ser_rationals};
use crate::seed;

pub const DEFAULT_SAMPLE_BOUND: u64 = 1 << 20;
const SZ_STREAM: u64 = 0x525a;

/// Identifies the template construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PolynomialFamilyTag {
    CornerV1,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompletionTemplate {
    pub family: PolynomialFamilyTag,
    pub input: Format,
    pub target: Format,
    /// Input cell to target cell, in input row-major order.
    pub placement: Vec<([usize; 3], [usize; 3])>,
    /// Coordinates of `U`, in target row-major order.
    pub free: Vec<[usize; 3]>,
    pub fixed: Vec<FixedCell>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixedCell {
    pub cell: [usize; 3],
    #[serde(serialize_with = "ser_rational")]
    pub value: Rational,
}

impl CompletionTemplate {
    pub fn free_count(&self) -> usize {
        self.free.len()
    }

    /// `T̂(U)` at a concrete point.
    pub fn assemble(&self, t: &Tensor3, point: &[Rational]) -> Result<Tensor3> {
        if Format::of(t) != self.input {
            return Err(Error::Dimension(format!(
                "template expects {:?}, tensor is {:?}",
                self.input.0,
                t.dims()
            )));
        }
        if point.len() != self.free.len() {
            return Err(Error::Dimension(format!(
                "template has {} free cells, point has {}",
                self.free.len(),
                point.len()
            )));
        }
        let mut out = Tensor3::zeros(self.target.0);
        for (src, dst) in &self.placement {
            out.set(dst[0], dst[1], dst[2], t.get(src[0], src[1], src[2]).clone());
        }
        for (cell, u) in self.free.iter().zip(point) {
            out.set(cell[0], cell[1], cell[2], u.clone());
        }
        for FixedCell { cell, value } in &self.fixed {
            out.set(cell[0], cell[1], cell[2], value.clone());
        }
        Ok(out)
    }
}

fn cells(dims: [usize; 3]) -> impl Iterator<Item = [usize; 3]> {
    (0..dims[0]).flat_map(move |i| (0..dims[1]).flat_map(move |j| (0..dims[2]).map(move |k| [i, j, k])))
}

/// Supported boundary formats, smallest first.
fn supported_targets() -> Vec<Format> {
    let mut out: Vec<Format> = Vec::new();
    for n in 1..=MAX_MATRIX_FORMAT {
        for f in [[n, n, 1], [n, 1, n], [1, n, n]] {
            if !out.contains(&Format(f)) {
                out.push(Format(f));
            }
        }
    }
    out.extend([[3, 2, 2], [2, 3, 2], [2, 2, 3]].map(Format));
    out.sort_by_key(|f| f.cells());
    out.into_iter().filter(|&f| is_supported(f)).collect()
}

pub fn build_template(input: Format) -> Result<CompletionTemplate> {
    let target = supported_targets()
        .into_iter()
        .find(|t| (0..3).all(|m| t.0[m] >= input.0[m]))
        .ok_or(Error::UnsupportedFormat(input.0))?;
    let inside = |c: &[usize; 3]| (0..3).all(|m| c[m] < input.0[m]);
    Ok(CompletionTemplate {
        family: PolynomialFamilyTag::CornerV1,
        input,
        target,
        placement: cells(input.0).map(|c| (c, c)).collect(),
        free: cells(target.0).filter(|c| !inside(c)).collect(),
        fixed: Vec::new(),
    })
}

pub fn eval_completion(t: &Tensor3, tpl: &CompletionTemplate, point: &[Rational]) -> Result<Rational> {
    Ok(hyperdet(&tpl.assemble(t, point)?)?.value)
}

/// Upper bound on the degree of `P_T` in `U`: the measured homogeneity
/// degree of the target hyperdeterminant, since every target entry is affine
/// in `U`.
pub fn completion_degree(tpl: &CompletionTemplate) -> Result<usize> {
    hyperdet_degree(tpl.target)
}

fn point_digest(point: &[Rational]) -> String {
    let text: Vec<String> = point.iter().map(format_rational).collect();
    digest(text.join(",").as_bytes())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SzVerdict {
    AllZero,
    HittingPointFound,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Evaluation {
    pub trial: usize,
    pub point_digest: String,
    pub is_zero: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HittingPoint {
    #[serde(serialize_with = "ser_rationals")]
    pub point: Vec<Rational>,
    #[serde(serialize_with = "ser_rational")]
    pub value: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SzReport {
    pub trials: usize,
    pub sample_bound: u64,
    pub evaluations: Vec<Evaluation>,
    pub verdict: SzVerdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hitting_point: Option<HittingPoint>,
}

/// Schwartz–Zippel test: up to `trials` uniform integer points in
/// `[0, sample_bound)`, stopping at the first nonzero value.
pub fn sz_test(
    t: &Tensor3,
    tpl: &CompletionTemplate,
    trials: usize,
    sample_bound: u64,
    seed: u64,
) -> Result<SzReport> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let degree = completion_degree(tpl)?;
    if sample_bound < 2 * degree as u64 {
        return Err(Error::InvalidArgument(format!(
            "sample bound {sample_bound} is below twice the degree {degree}"
        )));
    }
    let mut evaluations = Vec::new();
    for trial in 0..trials {
        let mut rng = seed::rng(seed::derive(seed, SZ_STREAM, trial as u64));
        let point: Vec<Rational> = (0..tpl.free_count())
            .map(|_| Rational::from_integer(rng.gen_range(0..sample_bound).into()))
            .collect();
        let value = eval_completion(t, tpl, &point)?;
        evaluations.push(Evaluation {
            trial,
            point_digest: point_digest(&point),
            is_zero: value.is_zero(),
        });
        if !value.is_zero() {
            return Ok(SzReport {
                trials,
                sample_bound,
                evaluations,
                verdict: SzVerdict::HittingPointFound,
                hitting_point: Some(HittingPoint { point, value }),
            });
        }
    }
    Ok(SzReport {
        trials,
        sample_bound,
        evaluations,
        verdict: SzVerdict::AllZero,
        hitting_point: None,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    Zeros,
    UnitPoints,
    CoordinateRamp,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [Strategy::Zeros, Strategy::UnitPoints, Strategy::CoordinateRamp];

    fn points(self, f: usize) -> Vec<Vec<Rational>> {
        match self {
            Strategy::Zeros => vec![vec![Rational::zero(); f]],
            Strategy::UnitPoints => (0..f)
                .map(|i| (0..f).map(|j| int((i == j) as i64)).collect())
                .collect(),
            Strategy::CoordinateRamp => vec![(1..=f as i64).map(int).collect()],
        }
    }
}

/// First point of the strategy's fixed sequence with `P_T ≠ 0`.
pub fn hitting_attempt(t: &Tensor3, tpl: &CompletionTemplate, strategy: Strategy) -> Result<Option<HittingPoint>> {
    for point in strategy.points(tpl.free_count()) {
        let value = eval_completion(t, tpl, &point)?;
        if !value.is_zero() {
            return Ok(Some(HittingPoint { point, value }));
        }
    }
    Ok(None)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PitBudget {
    pub trials: usize,
    pub sample_bound: u64,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum PitOutcome {
    /// Not a proof that `P_T ≡ 0`.
    IdenticallyZeroUpToBudget { evaluations: usize },
    NonzeroWithPoint {
        found_by: String,
        #[serde(flatten)]
        point: HittingPoint,
    },
}

/// Deterministic strategies first, then random evaluation.
pub fn completion_pit(t: &Tensor3, tpl: &CompletionTemplate, budget: PitBudget) -> Result<PitOutcome> {
    let mut evaluations = 0;
    for s in Strategy::ALL {
        if let Some(point) = hitting_attempt(t, tpl, s)? {
            return Ok(PitOutcome::NonzeroWithPoint {
                found_by: serde_json::to_value(s)
                    .ok()
                    .and_then(|v| v.as_str().map(str::to_string))
                    .unwrap_or_default(),
                point,
            });
        }
        evaluations += s.points(tpl.free_count()).len();
    }
    let report = sz_test(t, tpl, budget.trials, budget.sample_bound, budget.seed)?;
    evaluations += report.evaluations.len();
    Ok(match report.hitting_point {
        Some(point) => PitOutcome::NonzeroWithPoint {
            found_by: "sz_test".into(),
            point,
        },
        None => PitOutcome::IdenticallyZeroUpToBudget { evaluations },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::Matrix;
    use crate::hyperdet::degenerate_generator;

    fn random(dims: [usize; 3], s: u64) -> Tensor3 {
        let mut rng = seed::rng(s);
        Tensor3::from_fn(dims, |_, _, _| seed::small_int(&mut rng, 3))
    }

    #[test]
    fn template_shapes() {
        let tpl = build_template(Format([2, 2, 2])).unwrap();
        assert_eq!(tpl.target, Format([3, 2, 2]));
        assert_eq!((tpl.placement.len(), tpl.free.len()), (8, 4));
        assert!(tpl.free.iter().all(|c| c[0] == 2));

        let id = build_template(Format([3, 2, 2])).unwrap();
        assert_eq!((id.target, id.free.len()), (Format([3, 2, 2]), 0));
        let id = build_template(Format([1, 4, 4])).unwrap();
        assert_eq!((id.target, id.free.len()), (Format([1, 4, 4]), 0));

        let grow = build_template(Format([2, 1, 1])).unwrap();
        assert_eq!((grow.target, grow.free.len()), (Format([2, 2, 1]), 2));

        assert_eq!(build_template(Format([4, 4, 4])), Err(Error::UnsupportedFormat([4, 4, 4])));
    }

    #[test]
    fn evaluation_examples() {
        let tpl = build_template(Format([2, 2, 2])).unwrap();
        let zero = Tensor3::zeros([2, 2, 2]);
        assert!(eval_completion(&zero, &tpl, &vec![int(0); 4]).unwrap().is_zero());
        assert!(eval_completion(&zero, &tpl, &vec![int(0); 3]).is_err());

        // the planted witness extends by zero-padding when U = 0
        let (t, _) = degenerate_generator(Format([2, 2, 2]), 4);
        assert!(eval_completion(&t, &tpl, &vec![int(0); 4]).unwrap().is_zero());
    }

    #[test]
    fn sz_examples() {
        let tpl = build_template(Format([2, 2, 2])).unwrap();
        let zero = Tensor3::zeros([2, 2, 2]);
        for s in 0..3 {
            assert_eq!(sz_test(&zero, &tpl, 5, DEFAULT_SAMPLE_BOUND, s).unwrap().verdict, SzVerdict::AllZero);
        }
        let t = random([2, 2, 2], 17);
        let r = sz_test(&t, &tpl, 20, DEFAULT_SAMPLE_BOUND, 1).unwrap();
        assert_eq!(r, sz_test(&t, &tpl, 20, DEFAULT_SAMPLE_BOUND, 1).unwrap());
        let hp = r.hitting_point.expect("generic input");
        assert_eq!(eval_completion(&t, &tpl, &hp.point).unwrap(), hp.value);
        assert!(sz_test(&t, &tpl, 0, DEFAULT_SAMPLE_BOUND, 1).is_err());
        assert!(sz_test(&t, &tpl, 1, 11, 1).is_err());
    }

    #[test]
    fn identity_template_matches_hyperdet() {
        for s in 0..10 {
            let t = random([3, 2, 2], s);
            let tpl = build_template(Format([3, 2, 2])).unwrap();
            let r = sz_test(&t, &tpl, 3, DEFAULT_SAMPLE_BOUND, s).unwrap();
            let zero = hyperdet(&t).unwrap().value.is_zero();
            assert_eq!(r.verdict == SzVerdict::AllZero, zero);
            let hit = hitting_attempt(&t, &tpl, Strategy::Zeros).unwrap();
            assert_eq!(hit.is_some(), !zero);
            if let Some(h) = hit {
                assert!(h.point.is_empty());
            }
        }
    }

    #[test]
    fn pit_examples() {
        let tpl = build_template(Format([2, 2, 2])).unwrap();
        let budget = PitBudget { trials: 5, sample_bound: DEFAULT_SAMPLE_BOUND, seed: 2 };
        assert!(matches!(
            completion_pit(&Tensor3::zeros([2, 2, 2]), &tpl, budget).unwrap(),
            PitOutcome::IdenticallyZeroUpToBudget { .. }
        ));
        for s in 0..10 {
            let t = random([2, 2, 2], 100 + s);
            let pit = completion_pit(&t, &tpl, budget).unwrap();
            for strategy in Strategy::ALL {
                if hitting_attempt(&t, &tpl, strategy).unwrap().is_some() {
                    assert!(matches!(pit, PitOutcome::NonzeroWithPoint { .. }));
                }
            }
            if let PitOutcome::NonzeroWithPoint { point, .. } = pit {
                assert!(!eval_completion(&t, &tpl, &point.point).unwrap().is_zero());
            }
        }
        let m = Tensor3::from_slices(&[Matrix::identity(2)]).unwrap();
        let id = build_template(Format([2, 2, 1])).unwrap();
        assert!(hitting_attempt(&m, &id, Strategy::Zeros).unwrap().is_some());
    }
}
