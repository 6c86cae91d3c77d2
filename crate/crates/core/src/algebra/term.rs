use std::fmt;

use num_rational::Rational64;
use num_traits::Zero;

use super::numbers::ComplexRational;
use super::permutation::Permutation;
use super::{MAX_N, MAX_PAIRS};

/// Which coordinate family a variable or difference belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Var {
    X,
    Z,
}

impl Var {
    pub fn letter(self) -> char {
        match self {
            Var::X => 'x',
            Var::Z => 'z',
        }
    }
}

const fn build_slot_table() -> [(u8, u8); MAX_PAIRS] {
    let mut table = [(0u8, 0u8); MAX_PAIRS];
    let mut i = 0;
    let mut slot = 0;
    while i < MAX_N {
        let mut j = i + 1;
        while j < MAX_N {
            table[slot] = (i as u8, j as u8);
            slot += 1;
            j += 1;
        }
        i += 1;
    }
    table
}

const SLOT_PAIRS: [(u8, u8); MAX_PAIRS] = build_slot_table();

/// Storage slot of the ordered pair `i < j`.
#[inline]
pub(crate) fn pair_slot(i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < MAX_N);
    i * (2 * MAX_N - i - 1) / 2 + (j - i - 1)
}

#[inline]
pub(crate) fn slot_pair(slot: usize) -> (usize, usize) {
    let (i, j) = SLOT_PAIRS[slot];
    (i as usize, j as usize)
}

/// Laurent monomial `∏ x_k^{x[k]} ∏ z_k^{z[k]}`; unused trailing slots stay zero.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub x: [i32; MAX_N],
    pub z: [i32; MAX_N],
}

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn var(family: Var, k: usize) -> Self {
        let mut m = Self::default();
        m.exps_mut(family)[k] = 1;
        m
    }

    pub fn exps(&self, family: Var) -> &[i32; MAX_N] {
        match family {
            Var::X => &self.x,
            Var::Z => &self.z,
        }
    }

    pub fn exps_mut(&mut self, family: Var) -> &mut [i32; MAX_N] {
        match family {
            Var::X => &mut self.x,
            Var::Z => &mut self.z,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = *self;
        for k in 0..MAX_N {
            out.x[k] += other.x[k];
            out.z[k] += other.z[k];
        }
        out
    }

    pub fn degree(&self, family: Var) -> i32 {
        self.exps(family).iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.x.iter().chain(self.z.iter()).all(|&e| e == 0)
    }
}

/// `∏_{i<j} (x_i - x_j)^{-x_pow} ∏_{i<j} (z_i - z_j)^{-z_pow}`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DiffDenominator {
    x: [u8; MAX_PAIRS],
    z: [u8; MAX_PAIRS],
}

impl DiffDenominator {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn slots(&self, family: Var) -> &[u8; MAX_PAIRS] {
        match family {
            Var::X => &self.x,
            Var::Z => &self.z,
        }
    }

    pub(crate) fn slots_mut(&mut self, family: Var) -> &mut [u8; MAX_PAIRS] {
        match family {
            Var::X => &mut self.x,
            Var::Z => &mut self.z,
        }
    }

    /// Power of `(v_i - v_j)^{-1}` for `i < j`.
    pub fn power(&self, family: Var, i: usize, j: usize) -> u32 {
        self.slots(family)[pair_slot(i, j)] as u32
    }

    pub fn set_power(&mut self, family: Var, i: usize, j: usize, p: u32) {
        self.slots_mut(family)[pair_slot(i, j)] =
            u8::try_from(p).expect("denominator power overflow");
    }

    pub fn bump(&mut self, family: Var, i: usize, j: usize, by: u32) {
        let p = self.power(family, i, j) + by;
        self.set_power(family, i, j, p);
    }

    /// Non-zero entries as `(i, j, power)` with `i < j`.
    pub fn pairs(&self, family: Var) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        self.slots(family)
            .iter()
            .enumerate()
            .filter(|(_, &p)| p > 0)
            .map(|(s, &p)| {
                let (i, j) = slot_pair(s);
                (i, j, p as u32)
            })
    }

    pub fn is_one(&self) -> bool {
        self.x.iter().chain(self.z.iter()).all(|&p| p == 0)
    }

    pub fn has(&self, family: Var) -> bool {
        self.slots(family).iter().any(|&p| p > 0)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = *self;
        for s in 0..MAX_PAIRS {
            out.x[s] += other.x[s];
            out.z[s] += other.z[s];
        }
        out
    }

    pub fn lcm(&self, other: &Self) -> Self {
        let mut out = *self;
        for s in 0..MAX_PAIRS {
            out.x[s] = out.x[s].max(other.x[s]);
            out.z[s] = out.z[s].max(other.z[s]);
        }
        out
    }

    pub(crate) fn swap_families(&self) -> Self {
        Self {
            x: self.z,
            z: self.x,
        }
    }
}

/// The single exponential factor a term may carry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExponentialTag {
    None,
    /// `exp(i Σ_k x_{π(k)} z_k)`
    PlaneWave(Permutation),
    /// `exp(-c Σ_k x_k²)`, with `c ≠ 0`.
    Gaussian(Rational64),
}

impl ExponentialTag {
    /// Gaussian with the given rate, collapsing a zero rate to `None`.
    pub fn gaussian(rate: Rational64) -> Self {
        if rate.is_zero() {
            ExponentialTag::None
        } else {
            ExponentialTag::Gaussian(rate)
        }
    }

    pub fn gaussian_rate(&self) -> Option<Rational64> {
        match self {
            ExponentialTag::None => Some(Rational64::zero()),
            ExponentialTag::Gaussian(c) => Some(*c),
            ExponentialTag::PlaneWave(_) => None,
        }
    }
}

impl fmt::Display for ExponentialTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExponentialTag::None => Ok(()),
            ExponentialTag::PlaneWave(p) => {
                write!(f, "exp(i(")?;
                for k in 0..p.len() {
                    if k > 0 {
                        write!(f, "+")?;
                    }
                    write!(f, "x{}z{}", p.apply(k) + 1, k + 1)?;
                }
                write!(f, "))")
            }
            ExponentialTag::Gaussian(c) => write!(f, "exp(-{c}[x^2])"),
        }
    }
}

/// Identity of a term up to its coefficient; ordering is the canonical term order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TermKey {
    pub tag: ExponentialTag,
    pub mono: Monomial,
    pub denom: DiffDenominator,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub coeff: ComplexRational,
    pub mono: Monomial,
    pub denom: DiffDenominator,
    pub tag: ExponentialTag,
}

impl Term {
    pub fn key(&self) -> TermKey {
        TermKey {
            tag: self.tag,
            mono: self.mono,
            denom: self.denom,
        }
    }

    pub fn from_key(key: TermKey, coeff: ComplexRational) -> Self {
        Self {
            coeff,
            mono: key.mono,
            denom: key.denom,
            tag: key.tag,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slots_round_trip() {
        for s in 0..MAX_PAIRS {
            let (i, j) = slot_pair(s);
            assert!(i < j);
            assert_eq!(pair_slot(i, j), s);
        }
    }

    #[test]
    fn zero_rate_gaussian_is_plain() {
        assert_eq!(
            ExponentialTag::gaussian(Rational64::zero()),
            ExponentialTag::None
        );
        assert_eq!(
            ExponentialTag::None.gaussian_rate(),
            Some(Rational64::zero())
        );
    }
}
