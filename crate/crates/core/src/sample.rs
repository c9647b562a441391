//! Standard arc systems and seeded random generators for surfaces.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::perm::Permutation;
use crate::ribbon::{RibbonStructure, SurfaceSignature};

/// Maximal system on the one-holed torus: three arcs, boundary order
/// `0+, 1-, 2+, 0-, 1+, 2-`, hexagons `(0+, 1+, 2+)` and `(0-, 1-, 2-)`.
pub fn one_holed_torus() -> RibbonStructure {
    let sig = SurfaceSignature::new(1, 1).expect("(1, 1) is hyperbolic");
    RibbonStructure::new(sig, vec![5, 4, 1, 0, 3, 2], vec![0; 6]).expect("valid torus system")
}

/// The three seams of a pair of pants: arc 0 runs from circle 0 to circle 1,
/// arc 1 from circle 1 to circle 2, arc 2 from circle 2 to circle 0.
pub fn pair_of_pants() -> RibbonStructure {
    let sig = SurfaceSignature::new(0, 3).expect("(0, 3) is hyperbolic");
    RibbonStructure::new(sig, vec![3, 4, 5, 0, 1, 2], vec![1, 0, 2, 1, 0, 2])
        .expect("valid pants system")
}

/// A uniformly random trivalent ribbon graph on `n_vertices` vertices,
/// returned as the dual maximal arc system. The signature is read off from
/// the orbit counts. `None` when the graph is disconnected.
pub fn random_trivalent<R: Rng + ?Sized>(rng: &mut R, n_vertices: usize) -> Option<RibbonStructure> {
    assert!(n_vertices >= 2 && n_vertices % 2 == 0, "need an even number of vertices");
    let n_darts = 3 * n_vertices;
    // raw labels: vertex v owns darts 3v, 3v+1, 3v+2 in cyclic order
    let mut pairing: Vec<usize> = (0..n_darts).collect();
    pairing.shuffle(rng);
    // raw dart pairing[i] becomes dart i, so pairs land on (2k, 2k+1)
    let mut label = vec![0; n_darts];
    for (i, &raw) in pairing.iter().enumerate() {
        label[raw] = i;
    }
    let mut sigma0 = vec![0; n_darts];
    for raw in 0..n_darts {
        let next = 3 * (raw / 3) + (raw % 3 + 1) % 3;
        sigma0[label[raw]] = label[next];
    }
    let sigma0 = Permutation::from_images(sigma0).expect("relabeled 3-cycles");
    let sigma0_inv = sigma0.inverse();
    // σ∞ = σ0⁻¹ ∘ σ1
    let sigma_inf: Vec<usize> = (0..n_darts).map(|d| sigma0_inv.apply(d ^ 1)).collect();
    let orbits = Permutation::from_images(sigma_inf.clone())?.orbits();
    let mut circles = vec![0; n_darts];
    for (c, orbit) in orbits.iter().enumerate() {
        for &d in orbit {
            circles[d] = c;
        }
    }
    let n_arcs = n_darts / 2;
    let closed_euler = n_vertices as i64 - n_arcs as i64 + orbits.len() as i64;
    if closed_euler % 2 != 0 || closed_euler > 2 {
        return None;
    }
    let genus = ((2 - closed_euler) / 2) as usize;
    let sig = SurfaceSignature::new(genus, orbits.len()).ok()?;
    let r = RibbonStructure::new(sig, sigma_inf, circles).ok()?;
    r.is_connected().then_some(r)
}

/// Random maximal system on the surface of type `(genus, n_boundary)`, by
/// rejection sampling of trivalent ribbon graphs.
pub fn random_maximal_ribbon<R: Rng + ?Sized>(
    rng: &mut R,
    signature: SurfaceSignature,
) -> RibbonStructure {
    let v = signature.hexagon_count();
    for _ in 0..1_000_000 {
        if let Some(r) = random_trivalent(rng, v) {
            if r.signature() == signature {
                return r;
            }
        }
    }
    panic!("rejection sampling failed for {signature:?}");
}

/// Uniform choice among hyperbolic signatures with `genus ≤ max_genus` and
/// `1 ≤ n ≤ max_boundary`.
pub fn random_signature<R: Rng + ?Sized>(
    rng: &mut R,
    max_genus: usize,
    max_boundary: usize,
) -> SurfaceSignature {
    let all: Vec<SurfaceSignature> = (0..=max_genus)
        .flat_map(|g| (1..=max_boundary).filter_map(move |n| SurfaceSignature::new(g, n).ok()))
        .collect();
    assert!(!all.is_empty(), "no hyperbolic signature in range");
    all[rng.random_range(0..all.len())]
}

pub fn random_lengths<R: Rng + ?Sized>(rng: &mut R, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(lo..hi)).collect()
}

/// Random relabeling of arcs and orientations.
pub fn random_relabeling<R: Rng + ?Sized>(rng: &mut R, n_arcs: usize) -> (Vec<usize>, Vec<bool>) {
    let mut perm: Vec<usize> = (0..n_arcs).collect();
    perm.shuffle(rng);
    let reverse = (0..n_arcs).map(|_| rng.random_bool(0.5)).collect();
    (perm, reverse)
}
