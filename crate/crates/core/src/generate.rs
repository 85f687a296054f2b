//! Seeded random instances for experiments and tests.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arrangement::{vertices, LpInstance};
use crate::exactlin::{rat, ratio, Rational, RationalMatrix};
use crate::matroid::matroid_from_matrix;

/// Every matroid involved is uniform and every vertex has exactly d nonzero coordinates.
pub fn is_generic(inst: &LpInstance) -> bool {
    let uniform = |m: &RationalMatrix| matroid_from_matrix(m).map(|m| m.is_uniform()).unwrap_or(false);
    if !uniform(inst.a()) || !uniform(&inst.stacked_cost()) {
        return false;
    }
    if inst.kernel().rows() > 0 && !uniform(&inst.stacked_dual()) {
        return false;
    }
    vertices(inst)
        .values()
        .all(|x| x.iter().filter(|v| !v.is_zero()).count() == inst.d())
}

/// A random d x n instance whose all-positive region is nonempty. Entries of A
/// and c are small integers; b = A x0 for a random positive rational x0.
pub fn random_instance(d: usize, n: usize, rng: &mut impl Rng) -> LpInstance {
    loop {
        let a = RationalMatrix::new(d, n, (0..d * n).map(|_| rat(rng.gen_range(-6..=6))).collect())
            .expect("shape");
        if a.rank() < d {
            continue;
        }
        let x0: Vec<Rational> = (0..n).map(|_| ratio(rng.gen_range(1..=9), rng.gen_range(1..=4))).collect();
        let b = a.mul_vec(&x0);
        let c: Vec<Rational> = (0..n).map(|_| ratio(rng.gen_range(-9..=9), rng.gen_range(1..=3))).collect();
        if let Ok(inst) = LpInstance::new(a, b, c) {
            return inst;
        }
    }
}

/// Like [`random_instance`] but resampled until [`is_generic`] holds.
pub fn random_generic(d: usize, n: usize, seed: u64) -> LpInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let inst = random_instance(d, n, &mut rng);
        if is_generic(&inst) {
            return inst;
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
