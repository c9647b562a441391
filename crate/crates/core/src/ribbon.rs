//! Arc systems on a bordered surface, encoded as ribbon structures on darts.
//!
//! An arc system with `N` arcs has `2N` darts (oriented arcs). Dart `2k` is
//! arc `k` in its forward orientation and dart `2k + 1` the same arc reversed,
//! so the orientation-reversing involution `σ1` is implicit. Two more
//! permutations carry the combinatorics:
//!
//! - `σ∞` sends a dart to the dart whose endpoint comes just *before* its own
//!   endpoint along the induced orientation of the boundary circle;
//! - `σ0 = σ1 ∘ σ∞⁻¹` cycles the oriented arcs bounding each complementary
//!   region, so a region bounded by `→αi, →αj, →αk` is the `σ0`-orbit
//!   `(→αi, →αj, →αk)`.
//!
//! Boundary-circle labels are stored per dart (the circle where the oriented
//! arc ends) and checked against the `σ∞`-orbits.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::perm::Permutation;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum RibbonError {
    #[error("surface of genus {genus} with {n_boundary} boundary circles is not hyperbolic with boundary")]
    InvalidSignature { genus: usize, n_boundary: usize },
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("boundary circle mismatch: {0}")]
    CircleMismatch(String),
    #[error("arc index {arc} out of range (system has {n_arcs} arcs)")]
    ArcOutOfRange { arc: usize, n_arcs: usize },
}

/// Topological type `(g, n)` of a compact surface with `n ≥ 1` boundary
/// circles and negative Euler characteristic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SurfaceSignature {
    genus: usize,
    n_boundary: usize,
}

impl SurfaceSignature {
    pub fn new(genus: usize, n_boundary: usize) -> Result<Self, RibbonError> {
        let sig = Self { genus, n_boundary };
        if n_boundary == 0 || sig.euler_characteristic() >= 0 {
            return Err(RibbonError::InvalidSignature { genus, n_boundary });
        }
        Ok(sig)
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn n_boundary(&self) -> usize {
        self.n_boundary
    }

    /// `χ = 2 − 2g − n`.
    pub fn euler_characteristic(&self) -> i64 {
        2 - 2 * self.genus as i64 - self.n_boundary as i64
    }

    /// Cardinality `6g − 6 + 3n` of a maximal arc system.
    pub fn maximal_arc_count(&self) -> usize {
        (-3 * self.euler_characteristic()) as usize
    }

    /// Number `4g − 4 + 2n` of right-angled hexagons cut out by a maximal system.
    pub fn hexagon_count(&self) -> usize {
        (-2 * self.euler_characteristic()) as usize
    }
}

/// An oriented arc. Darts `2k` and `2k + 1` are the two orientations of arc `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Dart(pub usize);

impl Dart {
    #[inline]
    pub fn forward(arc: usize) -> Self {
        Dart(2 * arc)
    }

    #[inline]
    pub fn backward(arc: usize) -> Self {
        Dart(2 * arc + 1)
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0
    }

    #[inline]
    pub fn arc(self) -> usize {
        self.0 / 2
    }

    /// The same arc with the opposite orientation (`σ1`).
    #[inline]
    pub fn reversed(self) -> Self {
        Dart(self.0 ^ 1)
    }

    #[inline]
    pub fn is_forward(self) -> bool {
        self.0 % 2 == 0
    }
}

impl fmt::Display for Dart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let arrow = if self.is_forward() { "+" } else { "-" };
        write!(f, "{}{}", self.arc(), arrow)
    }
}

/// Orbit counts of the three permutations, as reported by [`RibbonStructure::validate`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub sigma0_orbits: usize,
    pub sigma1_orbits: usize,
    pub sigma_inf_orbits: usize,
    pub sigma0_orbit_sizes: Vec<usize>,
    pub connected: bool,
}

/// A complementary region of the arc system: a `2m`-gon whose arc sides are
/// the `m` darts of one `σ0`-orbit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Region {
    pub darts: Vec<Dart>,
    /// Number of polygon sides, arc sides and boundary sides together.
    pub sides: usize,
}

impl Region {
    pub fn is_hexagon(&self) -> bool {
        self.sides == 6
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComplementReport {
    pub regions: Vec<Region>,
    /// True when every region is a disc and every boundary circle meets an arc.
    pub proper: bool,
    /// `σ0`-orbits, arcs and `σ∞`-orbits of the closed-up surface.
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    /// `V − E + F` from orbit counts.
    pub closed_euler: i64,
    /// `2 − 2g` from the signature.
    pub expected_closed_euler: i64,
}

/// Arc system on a bordered surface as a dart permutation structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RibbonStructure {
    signature: SurfaceSignature,
    n_arcs: usize,
    sigma_inf: Permutation,
    sigma_inf_inv: Permutation,
    sigma0: Permutation,
    sigma0_inv: Permutation,
    circle_of_dart: Vec<usize>,
}

impl RibbonStructure {
    /// Builds a structure from `σ∞` (as images) and per-dart circle labels.
    pub fn new(
        signature: SurfaceSignature,
        sigma_inf: Vec<usize>,
        circle_of_dart: Vec<usize>,
    ) -> Result<Self, RibbonError> {
        if sigma_inf.len() % 2 != 0 {
            return Err(RibbonError::InvalidPermutation(format!(
                "odd number of darts ({})",
                sigma_inf.len()
            )));
        }
        let sigma_inf = Permutation::from_images(sigma_inf).ok_or_else(|| {
            RibbonError::InvalidPermutation("sigma_inf is not a bijection of the darts".into())
        })?;
        if circle_of_dart.len() != sigma_inf.len() {
            return Err(RibbonError::CircleMismatch(format!(
                "{} circle labels for {} darts",
                circle_of_dart.len(),
                sigma_inf.len()
            )));
        }
        if let Some((d, &c)) = circle_of_dart
            .iter()
            .enumerate()
            .find(|(_, &c)| c >= signature.n_boundary())
        {
            return Err(RibbonError::CircleMismatch(format!(
                "dart {d} labeled with circle {c}, surface has {} circles",
                signature.n_boundary()
            )));
        }
        let orbits = sigma_inf.orbits();
        let mut owner: Vec<Option<usize>> = vec![None; signature.n_boundary()];
        for (o, orbit) in orbits.iter().enumerate() {
            let c = circle_of_dart[orbit[0]];
            if let Some(&d) = orbit.iter().find(|&&d| circle_of_dart[d] != c) {
                return Err(RibbonError::CircleMismatch(format!(
                    "sigma_inf orbit through dart {} spans circles {c} and {}",
                    orbit[0], circle_of_dart[d]
                )));
            }
            if let Some(prev) = owner[c] {
                return Err(RibbonError::CircleMismatch(format!(
                    "circle {c} carries two sigma_inf orbits (through darts {} and {})",
                    orbits[prev][0], orbit[0]
                )));
            }
            owner[c] = Some(o);
        }

        let n_darts = sigma_inf.len();
        let sigma_inf_inv = sigma_inf.inverse();
        let sigma0 = Permutation::from_images(
            (0..n_darts).map(|d| sigma_inf_inv.apply(d) ^ 1).collect(),
        )
        .expect("σ1 ∘ σ∞⁻¹ is a bijection");
        let sigma0_inv = sigma0.inverse();
        Ok(Self {
            signature,
            n_arcs: n_darts / 2,
            sigma_inf,
            sigma_inf_inv,
            sigma0,
            sigma0_inv,
            circle_of_dart,
        })
    }

    /// Like [`RibbonStructure::new`] but with an explicit `σ1`, which must be
    /// the pairing involution `2k ↔ 2k + 1`.
    pub fn from_permutations(
        signature: SurfaceSignature,
        sigma1: Vec<usize>,
        sigma_inf: Vec<usize>,
        circle_of_dart: Vec<usize>,
    ) -> Result<Self, RibbonError> {
        if sigma1.len() != sigma_inf.len() {
            return Err(RibbonError::InvalidPermutation(format!(
                "sigma1 acts on {} darts, sigma_inf on {}",
                sigma1.len(),
                sigma_inf.len()
            )));
        }
        if let Some(d) = (0..sigma1.len()).find(|&d| sigma1[d] == d) {
            return Err(RibbonError::InvalidPermutation(format!(
                "sigma1 fixes dart {d}"
            )));
        }
        if let Some(d) = (0..sigma1.len()).find(|&d| sigma1[d] != d ^ 1) {
            return Err(RibbonError::InvalidPermutation(format!(
                "sigma1 sends dart {d} to {}, expected the pairing 2k <-> 2k+1",
                sigma1[d]
            )));
        }
        Self::new(signature, sigma_inf, circle_of_dart)
    }

    pub fn signature(&self) -> SurfaceSignature {
        self.signature
    }

    pub fn n_arcs(&self) -> usize {
        self.n_arcs
    }

    pub fn n_darts(&self) -> usize {
        2 * self.n_arcs
    }

    pub fn darts(&self) -> impl Iterator<Item = Dart> {
        (0..self.n_darts()).map(Dart)
    }

    #[inline]
    pub fn sigma_inf(&self, d: Dart) -> Dart {
        Dart(self.sigma_inf.apply(d.0))
    }

    /// The dart whose endpoint comes just *after* that of `d`.
    #[inline]
    pub fn sigma_inf_inv(&self, d: Dart) -> Dart {
        Dart(self.sigma_inf_inv.apply(d.0))
    }

    #[inline]
    pub fn sigma0(&self, d: Dart) -> Dart {
        Dart(self.sigma0.apply(d.0))
    }

    #[inline]
    pub fn sigma0_inv(&self, d: Dart) -> Dart {
        Dart(self.sigma0_inv.apply(d.0))
    }

    #[inline]
    pub fn sigma1(&self, d: Dart) -> Dart {
        d.reversed()
    }

    /// Circle where the oriented arc `d` ends.
    #[inline]
    pub fn circle_of(&self, d: Dart) -> usize {
        self.circle_of_dart[d.0]
    }

    pub fn circle_of_dart(&self) -> &[usize] {
        &self.circle_of_dart
    }

    pub fn sigma_inf_perm(&self) -> &Permutation {
        &self.sigma_inf
    }

    pub fn sigma0_perm(&self) -> &Permutation {
        &self.sigma0
    }

    pub fn sigma1_perm(&self) -> Permutation {
        Permutation::from_images((0..self.n_darts()).map(|d| d ^ 1).collect())
            .expect("pairing involution")
    }

    /// `σ0`-orbits, i.e. complementary regions, as dart cycles.
    pub fn regions(&self) -> Vec<Vec<Dart>> {
        self.sigma0
            .orbits()
            .into_iter()
            .map(|o| o.into_iter().map(Dart).collect())
            .collect()
    }

    /// Darts ending on `circle` in positive boundary order, starting from the
    /// smallest dart. Empty if no arc meets the circle.
    pub fn boundary_cycle(&self, circle: usize) -> Vec<Dart> {
        let Some(start) = self.darts().find(|&d| self.circle_of(d) == circle) else {
            return Vec::new();
        };
        let mut cycle = vec![start];
        let mut d = self.sigma_inf_inv(start);
        while d != start {
            cycle.push(d);
            d = self.sigma_inf_inv(d);
        }
        cycle
    }

    pub fn is_connected(&self) -> bool {
        let n = self.n_darts();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(d) = queue.pop_front() {
            for e in [d ^ 1, self.sigma_inf.apply(d), self.sigma_inf_inv.apply(d)] {
                if !seen[e] {
                    seen[e] = true;
                    queue.push_back(e);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Re-checks every structural invariant and reports orbit counts.
    pub fn validate(&self) -> Result<ValidationReport, RibbonError> {
        let rebuilt = Self::new(
            self.signature,
            self.sigma_inf.images().to_vec(),
            self.circle_of_dart.clone(),
        )?;
        debug_assert_eq!(&rebuilt, self);
        let sigma0_orbits = self.sigma0.orbits();
        Ok(ValidationReport {
            sigma0_orbit_sizes: sigma0_orbits.iter().map(Vec::len).collect(),
            sigma0_orbits: sigma0_orbits.len(),
            sigma1_orbits: self.n_arcs,
            sigma_inf_orbits: self.sigma_inf.orbits().len(),
            connected: self.is_connected(),
        })
    }

    /// A maximal system has `6g − 6 + 3n` arcs, only triangular `σ0`-orbits
    /// (hexagons) and meets every boundary circle.
    pub fn is_maximal(&self) -> bool {
        self.n_arcs == self.signature.maximal_arc_count()
            && self.sigma0.orbits().iter().all(|o| o.len() == 3)
            && self.sigma_inf.orbits().len() == self.signature.n_boundary()
            && self.is_connected()
    }

    pub fn classify_complement(&self) -> ComplementReport {
        let regions: Vec<Region> = self
            .regions()
            .into_iter()
            .map(|darts| Region {
                sides: 2 * darts.len(),
                darts,
            })
            .collect();
        let vertices = regions.len();
        let edges = self.n_arcs;
        let faces = self.sigma_inf.orbits().len();
        let closed_euler = vertices as i64 - edges as i64 + faces as i64;
        let expected_closed_euler = 2 - 2 * self.signature.genus() as i64;
        let proper = edges > 0
            && self.is_connected()
            && faces == self.signature.n_boundary()
            && vertices as i64 - edges as i64 == self.signature.euler_characteristic();
        ComplementReport {
            regions,
            proper,
            vertices,
            edges,
            faces,
            closed_euler,
            expected_closed_euler,
        }
    }

    /// The subsystem made of `arcs` (any order, no repeats), relabeled
    /// `0..arcs.len()` in ascending order of the original index. Returns the
    /// subsystem and, for each new arc, its original index.
    pub fn restrict(&self, arcs: &[usize]) -> Result<(Self, Vec<usize>), RibbonError> {
        let mut keep: Vec<usize> = arcs.to_vec();
        keep.sort_unstable();
        keep.dedup();
        if let Some(&arc) = keep.iter().find(|&&a| a >= self.n_arcs) {
            return Err(RibbonError::ArcOutOfRange {
                arc,
                n_arcs: self.n_arcs,
            });
        }
        let mut new_index = vec![usize::MAX; self.n_arcs];
        for (k, &a) in keep.iter().enumerate() {
            new_index[a] = k;
        }
        let relabel = |d: usize| 2 * new_index[d / 2] + d % 2;
        let n_new = 2 * keep.len();
        let mut sigma_inf = vec![0; n_new];
        let mut circles = vec![0; n_new];
        for &a in &keep {
            for d in [2 * a, 2 * a + 1] {
                let mut e = self.sigma_inf.apply(d);
                while new_index[e / 2] == usize::MAX {
                    e = self.sigma_inf.apply(e);
                }
                sigma_inf[relabel(d)] = relabel(e);
                circles[relabel(d)] = self.circle_of_dart[d];
            }
        }
        Ok((Self::new(self.signature, sigma_inf, circles)?, keep))
    }

    /// Renames arc `k` to `arc_perm[k]`, swapping its two orientations when
    /// `reverse[k]` is set.
    pub fn relabel(&self, arc_perm: &[usize], reverse: &[bool]) -> Result<Self, RibbonError> {
        let darts = self.dart_relabeling(arc_perm, reverse)?;
        let sigma_inf = self.sigma_inf.conjugate(&darts);
        let mut circles = vec![0; self.n_darts()];
        for d in 0..self.n_darts() {
            circles[darts.apply(d)] = self.circle_of_dart[d];
        }
        Self::new(self.signature, sigma_inf.images().to_vec(), circles)
    }

    /// Dart permutation induced by an arc relabeling (see [`Self::relabel`]).
    pub fn dart_relabeling(
        &self,
        arc_perm: &[usize],
        reverse: &[bool],
    ) -> Result<Permutation, RibbonError> {
        if arc_perm.len() != self.n_arcs || reverse.len() != self.n_arcs {
            return Err(RibbonError::InvalidPermutation(
                "relabeling has the wrong length".into(),
            ));
        }
        Permutation::from_images(
            (0..self.n_darts())
                .map(|d| 2 * arc_perm[d / 2] + ((d % 2) ^ usize::from(reverse[d / 2])))
                .collect(),
        )
        .ok_or_else(|| RibbonError::InvalidPermutation("arc relabeling is not a bijection".into()))
    }

    /// Finds a dart bijection `φ` with `φσ1 = σ1φ`, `φσ∞ = σ∞φ` and equal
    /// circle labels. `accept(d, φ(d))` can veto individual pairs. Only
    /// connected structures are matched.
    pub fn find_isomorphism_with(
        &self,
        other: &Self,
        mut accept: impl FnMut(Dart, Dart) -> bool,
    ) -> Option<Permutation> {
        if self.signature != other.signature
            || self.n_arcs != other.n_arcs
            || !self.is_connected()
            || !other.is_connected()
        {
            return None;
        }
        let n = self.n_darts();
        if n == 0 {
            return Some(Permutation::identity(0));
        }
        'candidates: for target in 0..n {
            let mut map = vec![usize::MAX; n];
            let mut used = vec![false; n];
            map[0] = target;
            used[target] = true;
            let mut queue = VecDeque::from([0usize]);
            while let Some(d) = queue.pop_front() {
                let e = map[d];
                if self.circle_of_dart[d] != other.circle_of_dart[e] || !accept(Dart(d), Dart(e)) {
                    continue 'candidates;
                }
                for (dn, en) in [
                    (d ^ 1, e ^ 1),
                    (self.sigma_inf.apply(d), other.sigma_inf.apply(e)),
                ] {
                    if map[dn] == usize::MAX {
                        if used[en] {
                            continue 'candidates;
                        }
                        map[dn] = en;
                        used[en] = true;
                        queue.push_back(dn);
                    } else if map[dn] != en {
                        continue 'candidates;
                    }
                }
            }
            return Permutation::from_images(map);
        }
        None
    }

    pub fn find_isomorphism(&self, other: &Self) -> Option<Permutation> {
        self.find_isomorphism_with(other, |_, _| true)
    }
}
