use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exactmath::rational::int;
use crate::exactmath::Rational;

/// Independent child seed for `(stream, index)` under a master seed
/// (splitmix64 finalizer over the mixed inputs).
pub fn derive(master: u64, stream: u64, index: u64) -> u64 {
    let mut z = master
        ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        ^ index.wrapping_mul(0xD1B5_4A32_D192_ED03);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small_int(rng: &mut impl Rng, bound: i64) -> Rational {
    int(rng.gen_range(-bound..=bound))
}

/// Random integer vector with entries in `[-bound, bound]`, not all zero.
pub fn nonzero_vector(rng: &mut impl Rng, len: usize, bound: i64) -> Vec<Rational> {
    loop {
        let v: Vec<i64> = (0..len).map(|_| rng.gen_range(-bound..=bound)).collect();
        if v.iter().any(|&x| x != 0) {
            return v.into_iter().map(int).collect();
        }
    }
}
