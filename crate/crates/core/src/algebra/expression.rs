use std::collections::HashMap;
use std::fmt;

use num_rational::Rational64;
use num_traits::Zero;

use crate::error::{Error, Result};

use super::numbers::{integer, real, ComplexRational};
use super::permutation::Permutation;
use super::poly::Poly;
use super::term::{slot_pair, DiffDenominator, ExponentialTag, Monomial, Term, TermKey, Var};
use super::{MAX_N, MAX_PAIRS};

/// Exact sum of terms `coeff · monomial · difference-denominators · exponential`.
///
/// Terms are kept merged and sorted by [`TermKey`], so two expressions built the same
/// way compare and serialize identically. Distinct term lists may still denote the same
/// function (a denominator may cancel against its numerator); [`Expression::normalize`]
/// produces the unique reduced form used for exact equality tests.
#[derive(Clone, Debug, PartialEq)]
pub struct Expression {
    n: usize,
    terms: Vec<Term>,
}

/// Merges terms sharing a key; `finish` yields canonical order.
pub(crate) struct Accumulator {
    n: usize,
    map: HashMap<TermKey, ComplexRational>,
}

impl Accumulator {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            map: HashMap::new(),
        }
    }

    pub fn push(&mut self, key: TermKey, coeff: ComplexRational) {
        if coeff.is_zero() {
            return;
        }
        match self.map.entry(key) {
            std::collections::hash_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
            }
            std::collections::hash_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
        }
    }

    pub fn push_expr(&mut self, e: &Expression, scale: &ComplexRational) {
        for t in &e.terms {
            self.push(t.key(), &t.coeff * scale);
        }
    }

    pub fn finish(self) -> Expression {
        let mut terms: Vec<Term> = self
            .map
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| Term::from_key(k, c))
            .collect();
        terms.sort_by(|a, b| a.key().cmp(&b.key()));
        Expression { n: self.n, terms }
    }
}

fn tag_product(a: &ExponentialTag, b: &ExponentialTag) -> Result<ExponentialTag> {
    use ExponentialTag::*;
    match (a, b) {
        (None, t) | (t, None) => Ok(*t),
        (Gaussian(p), Gaussian(q)) => Ok(ExponentialTag::gaussian(p + q)),
        _ => Err(Error::OutsideRing(format!("{a} × {b}"))),
    }
}

impl Expression {
    pub fn zero(n: usize) -> Self {
        assert!(n <= MAX_N, "particle count {n} exceeds {MAX_N}");
        Self {
            n,
            terms: Vec::new(),
        }
    }

    pub fn constant(n: usize, c: ComplexRational) -> Self {
        Self::term(
            n,
            c,
            Monomial::one(),
            DiffDenominator::one(),
            ExponentialTag::None,
        )
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, real(integer(1)))
    }

    pub fn term(
        n: usize,
        coeff: ComplexRational,
        mono: Monomial,
        denom: DiffDenominator,
        tag: ExponentialTag,
    ) -> Self {
        let mut acc = Accumulator::new(n);
        acc.push(TermKey { tag, mono, denom }, coeff);
        let e = acc.finish();
        assert!(n <= MAX_N);
        e
    }

    /// The coordinate `x_k` or `z_k`.
    pub fn var(n: usize, family: Var, k: usize) -> Self {
        assert!(k < n, "variable index {k} out of range for {n} particles");
        Self::term(
            n,
            real(integer(1)),
            Monomial::var(family, k),
            DiffDenominator::one(),
            ExponentialTag::None,
        )
    }

    /// `1 / (v_i - v_j)` for `i ≠ j`.
    pub fn inverse_difference(n: usize, family: Var, i: usize, j: usize) -> Self {
        assert!(i != j && i < n && j < n);
        let (a, b, sign) = if i < j { (i, j, 1) } else { (j, i, -1) };
        let mut d = DiffDenominator::one();
        d.set_power(family, a, b, 1);
        Self::term(
            n,
            real(integer(sign)),
            Monomial::one(),
            d,
            ExponentialTag::None,
        )
    }

    pub fn plane_wave(perm: Permutation) -> Self {
        Self::term(
            perm.len(),
            real(integer(1)),
            Monomial::one(),
            DiffDenominator::one(),
            ExponentialTag::PlaneWave(perm),
        )
    }

    /// `exp(-rate · Σ x_k²)`
    pub fn gaussian(n: usize, rate: Rational64) -> Self {
        Self::term(
            n,
            real(integer(1)),
            Monomial::one(),
            DiffDenominator::one(),
            ExponentialTag::gaussian(rate),
        )
    }

    /// `∏_{i>j} (v_i - v_j)`, expanded.
    pub fn vandermonde(n: usize, family: Var) -> Self {
        let mut out = Self::one(n);
        for j in 0..n {
            for i in j + 1..n {
                let diff = Self::var(n, family, i).sub(&Self::var(n, family, j));
                out = out.mul(&diff).expect("polynomials stay in the ring");
            }
        }
        out
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = Term>) -> Result<Self> {
        if n > MAX_N {
            return Err(Error::TooManyParticles { n, max: MAX_N });
        }
        let mut acc = Accumulator::new(n);
        for t in terms {
            validate_term(n, &t)?;
            acc.push(t.key(), t.coeff);
        }
        Ok(acc.finish())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// Structurally empty. See [`Expression::is_zero`] for the semantic test.
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub(crate) fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.n {
            Err(Error::IndexOutOfRange {
                index: i,
                n: self.n,
            })
        } else {
            Ok(())
        }
    }

    fn check_same_n(&self, other: &Self) {
        assert_eq!(self.n, other.n, "particle counts differ");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_same_n(other);
        let mut acc = Accumulator::new(self.n);
        let one = real(integer(1));
        acc.push_expr(self, &one);
        acc.push_expr(other, &one);
        acc.finish()
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check_same_n(other);
        let mut acc = Accumulator::new(self.n);
        acc.push_expr(self, &real(integer(1)));
        acc.push_expr(other, &real(integer(-1)));
        acc.finish()
    }

    pub fn neg(&self) -> Self {
        self.scale(&real(integer(-1)))
    }

    pub fn scale(&self, c: &ComplexRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.n);
        }
        let terms = self
            .terms
            .iter()
            .map(|t| Term {
                coeff: &t.coeff * c,
                ..t.clone()
            })
            .collect();
        Self { n: self.n, terms }
    }

    pub fn sum<'a>(n: usize, parts: impl IntoIterator<Item = &'a Expression>) -> Self {
        let mut acc = Accumulator::new(n);
        let one = real(integer(1));
        for p in parts {
            assert_eq!(p.n, n);
            acc.push_expr(p, &one);
        }
        acc.finish()
    }

    /// Ring product; fails when two plane waves or a plane wave and a Gaussian meet.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same_n(other);
        let mut acc = Accumulator::new(self.n);
        for a in &self.terms {
            for b in &other.terms {
                let tag = tag_product(&a.tag, &b.tag)?;
                acc.push(
                    TermKey {
                        tag,
                        mono: a.mono.mul(&b.mono),
                        denom: a.denom.mul(&b.denom),
                    },
                    &a.coeff * &b.coeff,
                );
            }
        }
        Ok(acc.finish())
    }

    pub fn pow(&self, k: u32) -> Result<Self> {
        let mut out = Self::one(self.n);
        for _ in 0..k {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    /// Multiplies every term by `mono` (no tag change).
    pub fn mul_monomial(&self, coeff: &ComplexRational, mono: &Monomial) -> Self {
        let mut acc = Accumulator::new(self.n);
        for t in &self.terms {
            acc.push(
                TermKey {
                    tag: t.tag,
                    mono: t.mono.mul(mono),
                    denom: t.denom,
                },
                &t.coeff * coeff,
            );
        }
        acc.finish()
    }

    /// Multiplies every term by `∏ (v_i - v_j)^{-p}` as given by `denom`.
    pub fn mul_denominator(&self, denom: &DiffDenominator) -> Self {
        let mut acc = Accumulator::new(self.n);
        for t in &self.terms {
            acc.push(
                TermKey {
                    tag: t.tag,
                    mono: t.mono,
                    denom: t.denom.mul(denom),
                },
                t.coeff.clone(),
            );
        }
        acc.finish()
    }

    /// Shifts every Gaussian rate by `delta` (`exp(-delta [x²])` factor). Plane waves are rejected.
    pub fn shift_gaussian(&self, delta: Rational64) -> Result<Self> {
        let mut acc = Accumulator::new(self.n);
        for t in &self.terms {
            let rate = t
                .tag
                .gaussian_rate()
                .ok_or_else(|| Error::OutsideRing("Gaussian factor on a plane-wave term".into()))?;
            acc.push(
                TermKey {
                    tag: ExponentialTag::gaussian(rate + delta),
                    mono: t.mono,
                    denom: t.denom,
                },
                t.coeff.clone(),
            );
        }
        Ok(acc.finish())
    }

    pub fn has_denominators(&self) -> bool {
        self.terms.iter().any(|t| !t.denom.is_one())
    }

    pub fn tags(&self) -> Vec<ExponentialTag> {
        let mut tags: Vec<ExponentialTag> = self.terms.iter().map(|t| t.tag).collect();
        tags.dedup();
        tags
    }

    /// Terms carrying `tag`, as their own expression.
    pub fn tag_part(&self, tag: &ExponentialTag) -> Self {
        Self {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|t| t.tag == *tag)
                .cloned()
                .collect(),
        }
    }

    /// Reduced form: per exponential tag, one common denominator with every
    /// difference factor that divides the numerator cancelled.
    pub fn normalize(&self) -> Self {
        let mut out: Vec<Term> = Vec::new();
        let mut start = 0;
        while start < self.terms.len() {
            let tag = self.terms[start].tag;
            let end = start
                + self.terms[start..]
                    .iter()
                    .take_while(|t| t.tag == tag)
                    .count();
            normalize_group(&self.terms[start..end], tag, &mut out);
            start = end;
        }
        out.sort_by(|a, b| a.key().cmp(&b.key()));
        Self {
            n: self.n,
            terms: out,
        }
    }

    /// Exact zero test.
    pub fn is_zero(&self) -> bool {
        if self.terms.is_empty() {
            return true;
        }
        self.normalize().is_empty()
    }

    /// Exact equality as functions.
    pub fn equivalent(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }

    /// Maximal total x-degree of numerators and total denominator degree.
    pub fn degree_profile(&self) -> (i32, u32) {
        let num = self
            .terms
            .iter()
            .map(|t| t.mono.degree(Var::X))
            .max()
            .unwrap_or(0);
        let den = self
            .terms
            .iter()
            .map(|t| t.denom.pairs(Var::X).map(|(_, _, p)| p).sum::<u32>())
            .max()
            .unwrap_or(0);
        (num, den)
    }
}

fn validate_term(n: usize, t: &Term) -> Result<()> {
    for k in n..MAX_N {
        if t.mono.x[k] != 0 || t.mono.z[k] != 0 {
            return Err(Error::IndexOutOfRange { index: k, n });
        }
    }
    if t.mono.x.iter().any(|&e| e < 0) {
        return Err(Error::InvalidArgument(
            "negative x exponents belong in the difference denominator".into(),
        ));
    }
    for family in [Var::X, Var::Z] {
        for (_, j, _) in t.denom.pairs(family) {
            if j >= n {
                return Err(Error::IndexOutOfRange { index: j, n });
            }
        }
    }
    if let ExponentialTag::PlaneWave(p) = &t.tag {
        if p.len() != n {
            return Err(Error::ParticleCountMismatch {
                left: p.len(),
                right: n,
            });
        }
    }
    Ok(())
}

fn normalize_group(terms: &[Term], tag: ExponentialTag, out: &mut Vec<Term>) {
    let common = terms
        .iter()
        .fold(DiffDenominator::one(), |acc, t| acc.lcm(&t.denom));
    let mut multipliers: HashMap<DiffDenominator, Poly> = HashMap::new();
    let mut numerator = Poly::default();
    for t in terms {
        let mult = multipliers
            .entry(t.denom)
            .or_insert_with(|| cofactor(&common, &t.denom));
        numerator.add_scaled(mult, &t.coeff, &t.mono);
    }
    if numerator.is_zero() {
        return;
    }
    let mut denom = common;
    for family in [Var::X, Var::Z] {
        for slot in 0..MAX_PAIRS {
            let (i, j) = slot_pair(slot);
            while denom.slots(family)[slot] > 0 {
                match numerator.divide_by_difference(family, i, j) {
                    Some(q) => {
                        numerator = q;
                        denom.slots_mut(family)[slot] -= 1;
                    }
                    None => break,
                }
            }
        }
    }
    out.extend(numerator.terms.into_iter().map(|(mono, coeff)| Term {
        coeff,
        mono,
        denom,
        tag,
    }));
}

/// `common / denom` as an expanded polynomial.
fn cofactor(common: &DiffDenominator, denom: &DiffDenominator) -> Poly {
    let mut out = Poly::one();
    for family in [Var::X, Var::Z] {
        for slot in 0..MAX_PAIRS {
            let p = common.slots(family)[slot] - denom.slots(family)[slot];
            if p > 0 {
                let (i, j) = slot_pair(slot);
                out = out.mul(&Poly::difference_power(family, i, j, p as u32));
            }
        }
    }
    out
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, t) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({} + {}i)", t.coeff.re, t.coeff.im)?;
            for (family, exps) in [(Var::X, &t.mono.x), (Var::Z, &t.mono.z)] {
                for (idx, &e) in exps.iter().enumerate().take(self.n) {
                    if e == 1 {
                        write!(f, "·{}{}", family.letter(), idx + 1)?;
                    } else if e != 0 {
                        write!(f, "·{}{}^{}", family.letter(), idx + 1, e)?;
                    }
                }
                for (i, j, p) in t.denom.pairs(family) {
                    let l = family.letter();
                    write!(f, "/({l}{}-{l}{})", i + 1, j + 1)?;
                    if p > 1 {
                        write!(f, "^{p}")?;
                    }
                }
            }
            if t.tag != ExponentialTag::None {
                write!(f, "·{}", t.tag)?;
            }
        }
        Ok(())
    }
}

impl Default for Expression {
    fn default() -> Self {
        Self::zero(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::numbers::cr;

    fn x(n: usize, k: usize) -> Expression {
        Expression::var(n, Var::X, k)
    }

    #[test]
    fn add_and_negate_cancel() {
        let e = x(2, 0)
            .mul(&x(2, 1))
            .unwrap()
            .add(&Expression::constant(2, cr(3, -1)));
        assert!(e.add(&e.neg()).is_empty());
    }

    #[test]
    fn normalize_cancels_common_difference() {
        // (x1^2 - x2^2) / (x1 - x2) = x1 + x2
        let num = x(2, 0).pow(2).unwrap().sub(&x(2, 1).pow(2).unwrap());
        let q = num
            .mul(&Expression::inverse_difference(2, Var::X, 0, 1))
            .unwrap();
        assert!(q.has_denominators());
        let r = q.normalize();
        assert!(!r.has_denominators());
        assert_eq!(r, x(2, 0).add(&x(2, 1)));
    }

    #[test]
    fn partial_fractions_are_recognised_as_equal() {
        // 1/(x1-x2) - 1/(x1-x3) == (x2-x3)/((x1-x2)(x1-x3))
        let n = 3;
        let a = Expression::inverse_difference(n, Var::X, 0, 1)
            .sub(&Expression::inverse_difference(n, Var::X, 0, 2));
        let b = x(n, 1)
            .sub(&x(n, 2))
            .mul(&Expression::inverse_difference(n, Var::X, 0, 1))
            .unwrap()
            .mul(&Expression::inverse_difference(n, Var::X, 0, 2))
            .unwrap();
        assert!(a.equivalent(&b));
        assert!(!a.equivalent(&b.scale(&cr(2, 0))));
    }

    #[test]
    fn gaussians_multiply_and_plane_waves_do_not() {
        let g = Expression::gaussian(2, Rational64::new(1, 2));
        let gg = g.mul(&g).unwrap();
        assert_eq!(gg, Expression::gaussian(2, Rational64::new(1, 1)));
        let pw = Expression::plane_wave(Permutation::identity(2));
        assert!(pw.mul(&g).is_err());
        assert!(pw.mul(&pw).is_err());
    }

    #[test]
    fn vandermonde_of_two() {
        assert_eq!(Expression::vandermonde(2, Var::X), x(2, 1).sub(&x(2, 0)));
        assert_eq!(Expression::vandermonde(3, Var::Z).len(), 6);
    }

    #[test]
    fn from_terms_validates_indices() {
        let mut mono = Monomial::one();
        mono.x[2] = 1;
        let t = Term {
            coeff: cr(1, 0),
            mono,
            denom: DiffDenominator::one(),
            tag: ExponentialTag::None,
        };
        assert!(Expression::from_terms(2, [t]).is_err());
    }
}
