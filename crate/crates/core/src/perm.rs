//! Permutations of a finite set `{0, .., n-1}` stored as image vectors.

use serde::{Deserialize, Serialize};

/// A bijection of `{0, .., n-1}`, stored by images.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self {
            images: (0..n).collect(),
        }
    }

    /// Returns `None` unless `images` is a bijection of `0..images.len()`.
    pub fn from_images(images: Vec<usize>) -> Option<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return None;
            }
            seen[x] = true;
        }
        Some(Self { images })
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.images.len()];
        for (x, &y) in self.images.iter().enumerate() {
            inv[y] = x;
        }
        Self { images: inv }
    }

    /// `self ∘ other`: apply `other` first, then `self`.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len(), "permutation sizes differ");
        Self {
            images: other.images.iter().map(|&x| self.images[x]).collect(),
        }
    }

    /// Conjugate by a relabeling: returns `q` with `q(r(x)) = r(p(x))`.
    pub fn conjugate(&self, relabel: &Self) -> Self {
        let mut images = vec![0; self.len()];
        for x in 0..self.len() {
            images[relabel.apply(x)] = relabel.apply(self.apply(x));
        }
        Self { images }
    }

    /// Cycles, each starting at its smallest element, ordered by that element.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x);
                x = self.images[x];
            }
            out.push(cycle);
        }
        out
    }

    pub fn fixed_points(&self) -> impl Iterator<Item = usize> + '_ {
        self.images
            .iter()
            .enumerate()
            .filter_map(|(x, &y)| (x == y).then_some(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::from_images(vec![0, 0]).is_none());
        assert!(Permutation::from_images(vec![0, 2]).is_none());
        assert!(Permutation::from_images(vec![1, 0]).is_some());
    }

    #[test]
    fn compose_applies_right_factor_first() {
        let p = Permutation::from_images(vec![1, 2, 0]).unwrap();
        let q = Permutation::from_images(vec![0, 2, 1]).unwrap();
        // (p ∘ q)(1) = p(2) = 0
        assert_eq!(p.compose(&q).apply(1), 0);
        assert_eq!(p.compose(&p.inverse()), Permutation::identity(3));
    }

    #[test]
    fn orbits_of_a_six_cycle_and_a_split() {
        let p = Permutation::from_images(vec![1, 2, 0, 4, 3, 5]).unwrap();
        assert_eq!(p.orbits(), vec![vec![0, 1, 2], vec![3, 4], vec![5]]);
        assert_eq!(p.fixed_points().collect::<Vec<_>>(), vec![5]);
    }
}
