use std::fmt;

use itertools::Itertools;

use crate::error::{Error, Result};

/// A permutation of `{0..n-1}` in one-line notation: `i ↦ images[i]`.
///
/// Composition follows functions: `(σ ∘ τ)(i) = σ(τ(i))`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    images: Vec<u8>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n as u8).collect(),
        }
    }

    /// From 0-based images.
    pub fn from_images(images: Vec<u8>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            let slot = seen
                .get_mut(i as usize)
                .ok_or_else(|| Error::Parse(format!("image {i} out of range")))?;
            if *slot {
                return Err(Error::Parse(format!("image {i} repeated")));
            }
            *slot = true;
        }
        Ok(Permutation { images })
    }

    /// From disjoint cycles over 1-based points, e.g. `[[1, 2]]` is the transposition (12).
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<u8> = (0..n as u8).collect();
        let mut used = vec![false; n];
        for cycle in cycles {
            for (idx, &p) in cycle.iter().enumerate() {
                if p == 0 || p > n || used[p - 1] {
                    return Err(Error::Parse(format!("bad cycle point {p}")));
                }
                used[p - 1] = true;
                let next = cycle[(idx + 1) % cycle.len()];
                images[p - 1] = (next - 1) as u8;
            }
        }
        Permutation::from_images(images)
    }

    /// A representative of the conjugacy class with the given cycle type.
    pub fn of_cycle_type(cycle_type: &[usize]) -> Self {
        let n: usize = cycle_type.iter().sum();
        let mut images = Vec::with_capacity(n);
        let mut start = 0;
        for &len in cycle_type {
            for i in 0..len {
                images.push((start + (i + 1) % len) as u8);
            }
            start += len;
        }
        Permutation { images }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u8] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation {
            images: other.images.iter().map(|&i| self.images[i as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0u8; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j as usize] = i as u8;
        }
        Permutation { images }
    }

    /// Cycle lengths in non-increasing order.
    pub fn cycle_type(&self) -> Vec<usize> {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut lens = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.images[i] as usize;
                len += 1;
            }
            lens.push(len);
        }
        lens.sort_unstable_by(|a, b| b.cmp(a));
        lens
    }

    pub fn sign(&self) -> i32 {
        let transpositions: usize = self.cycle_type().iter().map(|l| l - 1).sum();
        if transpositions % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// All of `S_n` in lexicographic order of one-line notation.
    pub fn all(n: usize) -> impl Iterator<Item = Permutation> {
        (0..n as u8)
            .permutations(n)
            .map(|images| Permutation { images })
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.images.iter().map(|i| (i + 1).to_string()).collect();
        write!(f, "[{}]", parts.join(" "))
    }
}
