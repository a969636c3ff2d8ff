//! Seeded random points. Everything random in the crate goes through here so that a
//! seed fully determines the output.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::field::{Field, FieldElem};
use crate::poly::RingSpec;

/// Seed used when the caller does not supply one.
pub const DEFAULT_SEED: u64 = 0x5EED_F1B7;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Integer coordinates in `[-bound, bound]` for a point of the source space of `ring`,
/// with every projective factor nonzero.
pub fn random_source_coords<R: Rng>(rng: &mut R, ring: RingSpec, field: Field, bound: i64) -> Vec<FieldElem> {
    let factors: &[usize] = match ring {
        RingSpec::Triangular => &[3],
        RingSpec::Tensor => &[2, 2],
        RingSpec::Target => &[4],
    };
    let mut out = Vec::new();
    for &len in factors {
        loop {
            let part: Vec<FieldElem> = (0..len).map(|_| field.from_i64(rng.gen_range(-bound..=bound))).collect();
            if part.iter().any(|c| !c.is_zero()) {
                out.extend(part);
                break;
            }
        }
    }
    out
}

/// `n` seeded random source points with coordinates in `[-bound, bound]`.
pub fn source_points(ring: RingSpec, field: Field, n: usize, seed: u64, bound: i64) -> Vec<crate::fiber::ProjPoint> {
    let mut rng = rng(seed);
    let space = crate::fiber::PointSpace::source_of(ring);
    (0..n)
        .map(|_| {
            let c = random_source_coords(&mut rng, ring, field, bound);
            crate::fiber::ProjPoint::new(space, c).expect("factors are nonzero")
        })
        .collect()
}
