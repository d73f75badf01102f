use crate::error::{Error, Result};
use crate::exactmath::rational::{is_zero_vec, primitive};
use crate::exactmath::Rational;

/// Vectors `(x, y, z)` certifying tensor degeneracy or pencil feasibility.
///
/// Fields are public so that callers can hold candidate triples that fail the
/// nonzeroness condition; every verifier rejects those.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WitnessTriple {
    pub x: Vec<Rational>,
    pub y: Vec<Rational>,
    pub z: Vec<Rational>,
}

impl WitnessTriple {
    /// Requires each of `x`, `y`, `z` to have a nonzero coordinate.
    pub fn new(x: Vec<Rational>, y: Vec<Rational>, z: Vec<Rational>) -> Result<Self> {
        let w = Self { x, y, z };
        if !w.is_nonzero() {
            return Err(Error::ZeroWitness);
        }
        Ok(w)
    }

    pub fn is_nonzero(&self) -> bool {
        !is_zero_vec(&self.x) && !is_zero_vec(&self.y) && !is_zero_vec(&self.z)
    }

    pub fn dims(&self) -> [usize; 3] {
        [self.x.len(), self.y.len(), self.z.len()]
    }

    /// Each factor reduced to a primitive integer vector with positive leading
    /// entry. Degeneracy is projective, so this preserves every verdict.
    pub fn normalized(&self) -> Self {
        Self {
            x: primitive(&self.x),
            y: primitive(&self.y),
            z: primitive(&self.z),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rational::{frac, int};

    #[test]
    fn zero_factors_rejected() {
        assert_eq!(
            WitnessTriple::new(vec![int(0)], vec![int(1)], vec![int(1)]),
            Err(Error::ZeroWitness)
        );
    }

    #[test]
    fn normalization() {
        let w = WitnessTriple::new(
            vec![frac(-1, 2), frac(-1, 4)],
            vec![int(0), int(6)],
            vec![int(3)],
        )
        .unwrap();
        let n = w.normalized();
        assert_eq!(n.x, vec![int(2), int(1)]);
        assert_eq!(n.y, vec![int(0), int(1)]);
        assert_eq!(n.z, vec![int(1)]);
    }
}
