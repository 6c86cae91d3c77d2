use std::fmt;

use crate::error::{Error, Result};

use super::MAX_N;

/// A bijection on `{0, .., n-1}` stored inline; `images[k]` is the image of `k`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    n: u8,
    images: [u8; MAX_N],
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        assert!(n <= MAX_N, "permutation size {n} exceeds {MAX_N}");
        let mut images = [0u8; MAX_N];
        for (k, slot) in images.iter_mut().enumerate() {
            *slot = k as u8;
        }
        Self { n: n as u8, images }
    }

    pub fn from_images(images: &[usize]) -> Result<Self> {
        let n = images.len();
        if n > MAX_N {
            return Err(Error::TooManyParticles { n, max: MAX_N });
        }
        let mut seen = [false; MAX_N];
        let mut out = [0u8; MAX_N];
        for (k, &im) in images.iter().enumerate() {
            if im >= n || seen[im] {
                return Err(Error::InvalidArgument(format!(
                    "{images:?} is not a permutation"
                )));
            }
            seen[im] = true;
            out[k] = im as u8;
        }
        for (k, slot) in out.iter_mut().enumerate().skip(n) {
            *slot = k as u8;
        }
        Ok(Self {
            n: n as u8,
            images: out,
        })
    }

    pub fn transposition(n: usize, i: usize, j: usize) -> Self {
        let mut p = Self::identity(n);
        p.images.swap(i, j);
        p
    }

    pub fn len(&self) -> usize {
        self.n as usize
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn apply(&self, k: usize) -> usize {
        self.images[k] as usize
    }

    pub fn images(&self) -> Vec<usize> {
        self.images[..self.len()]
            .iter()
            .map(|&v| v as usize)
            .collect()
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn compose(&self, other: &Self) -> Self {
        debug_assert_eq!(self.n, other.n);
        let mut out = Self::identity(self.len());
        for k in 0..self.len() {
            out.images[k] = self.images[other.images[k] as usize];
        }
        out
    }

    pub fn inverse(&self) -> Self {
        let mut out = Self::identity(self.len());
        for k in 0..self.len() {
            out.images[self.images[k] as usize] = k as u8;
        }
        out
    }

    /// Number of inversions; equals the minimal number of adjacent swaps.
    pub fn inversions(&self) -> usize {
        let n = self.len();
        let mut count = 0;
        for a in 0..n {
            for b in a + 1..n {
                if self.images[a] > self.images[b] {
                    count += 1;
                }
            }
        }
        count
    }

    pub fn sign(&self) -> i64 {
        if self.inversions() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// All permutations of `n` elements in lexicographic order of their image lists.
    pub fn all(n: usize) -> Vec<Self> {
        let mut current: Vec<usize> = (0..n).collect();
        let mut out = Vec::new();
        loop {
            out.push(Self::from_images(&current).expect("valid permutation"));
            // next lexicographic permutation
            let Some(i) = (0..n.saturating_sub(1))
                .rev()
                .find(|&i| current[i] < current[i + 1])
            else {
                break;
            };
            let j = (i + 1..n).rev().find(|&j| current[j] > current[i]).unwrap();
            current.swap(i, j);
            current[i + 1..].reverse();
        }
        out
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation{:?}", self.images())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumerates_factorial_many() {
        assert_eq!(Permutation::all(0).len(), 1);
        assert_eq!(Permutation::all(3).len(), 6);
        assert_eq!(Permutation::all(4).len(), 24);
        let all = Permutation::all(3);
        assert_eq!(all[0], Permutation::identity(3));
        assert_eq!(all[5].images(), vec![2, 1, 0]);
    }

    #[test]
    fn inversion_counts_and_parity() {
        let p = Permutation::from_images(&[2, 0, 1]).unwrap();
        assert_eq!(p.inversions(), 2);
        assert_eq!(p.sign(), 1);
        let t = Permutation::transposition(4, 1, 3);
        assert_eq!(t.sign(), -1);
        assert_eq!(t.compose(&t), Permutation::identity(4));
    }

    #[test]
    fn composition_is_associative_and_inverse_works() {
        let all = Permutation::all(4);
        for a in all.iter().step_by(5) {
            for b in all.iter().step_by(7) {
                for c in all.iter().step_by(3) {
                    assert_eq!(a.compose(&b.compose(c)), a.compose(b).compose(c));
                }
                assert_eq!(a.compose(&a.inverse()), Permutation::identity(4));
                assert_eq!(a.compose(b).sign(), a.sign() * b.sign());
            }
        }
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::from_images(&[0, 0, 1]).is_err());
        assert!(Permutation::from_images(&[0, 3]).is_err());
    }
}
