//! Fixed surfaces shared by the benches.

use arccoord::sample::{one_holed_torus, random_lengths, random_maximal_ribbon};
use arccoord::{MaximalCoordinates, SurfaceSignature};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn symmetric_torus() -> MaximalCoordinates {
    MaximalCoordinates::new(one_holed_torus(), vec![3f64.acosh(); 3]).expect("positive lengths")
}

/// Seeded random surface of the given type with a-lengths in `[0.3, 3)`.
pub fn random_surface(genus: usize, boundary: usize, seed: u64) -> MaximalCoordinates {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sig = SurfaceSignature::new(genus, boundary).expect("hyperbolic signature");
    let r = random_maximal_ribbon(&mut rng, sig);
    let a = random_lengths(&mut rng, r.n_arcs(), 0.3, 3.0);
    MaximalCoordinates::new(r, a).expect("positive lengths")
}

/// The signatures swept by the size-scaling benches.
pub const SIGNATURES: [(usize, usize); 4] = [(1, 1), (1, 2), (2, 2), (3, 3)];
