//! Sparse Laurent polynomials in x and z: the numerators used by normalization.

use std::collections::HashMap;

use num_integer::binomial;
use num_traits::Zero;

use super::numbers::{integer, real, ComplexRational};
use super::term::{Monomial, Var};

#[derive(Clone, Debug, Default)]
pub(crate) struct Poly {
    pub terms: HashMap<Monomial, ComplexRational>,
}

impl Poly {
    pub fn one() -> Self {
        let mut p = Self::default();
        p.terms.insert(Monomial::one(), real(integer(1)));
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, mono: Monomial, coeff: ComplexRational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            std::collections::hash_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            std::collections::hash_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
        }
    }

    /// `self += coeff · mono · other`
    pub fn add_scaled(&mut self, other: &Poly, coeff: &ComplexRational, mono: &Monomial) {
        for (m, c) in &other.terms {
            self.add_term(m.mul(mono), c * coeff);
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::default();
        for (m, c) in &self.terms {
            out.add_scaled(other, c, m);
        }
        out
    }

    /// `(v_i - v_j)^p`, expanded.
    pub fn difference_power(family: Var, i: usize, j: usize, p: u32) -> Poly {
        let mut out = Poly::default();
        for k in 0..=p {
            let mut mono = Monomial::one();
            mono.exps_mut(family)[i] = (p - k) as i32;
            mono.exps_mut(family)[j] = k as i32;
            let mut c = integer(binomial(p as i64, k as i64));
            if k % 2 == 1 {
                c = -c;
            }
            out.add_term(mono, real(c));
        }
        out
    }

    /// Exact quotient by `(v_i - v_j)`, or `None` when the remainder is non-zero.
    ///
    /// Synthetic division in `v_i` with coefficients in the remaining variables;
    /// negative powers of `v_i` are shifted out first (they are units).
    pub fn divide_by_difference(&self, family: Var, i: usize, j: usize) -> Option<Poly> {
        if self.is_zero() {
            return Some(Poly::default());
        }
        let shift = self
            .terms
            .keys()
            .map(|m| m.exps(family)[i])
            .min()
            .unwrap_or(0)
            .min(0);
        let degree = (self.terms.keys().map(|m| m.exps(family)[i]).max().unwrap() - shift) as usize;
        if degree == 0 {
            return None;
        }
        // Coefficient polynomials C_k of v_i^k (after the shift).
        let mut coeffs: Vec<Poly> = vec![Poly::default(); degree + 1];
        for (m, c) in &self.terms {
            let mut rest = *m;
            let k = (rest.exps(family)[i] - shift) as usize;
            rest.exps_mut(family)[i] = 0;
            coeffs[k].add_term(rest, c.clone());
        }
        let vj = Monomial::var(family, j);
        let one = real(integer(1));
        // q_{d-1} = C_d ; q_{k-1} = C_k + v_j q_k ; remainder = C_0 + v_j q_0
        let mut quotient: Vec<Poly> = vec![Poly::default(); degree];
        quotient[degree - 1] = coeffs[degree].clone();
        for k in (1..degree).rev() {
            let mut q = std::mem::take(&mut coeffs[k]);
            q.add_scaled(&quotient[k], &one, &vj);
            quotient[k - 1] = q;
        }
        let mut remainder = std::mem::take(&mut coeffs[0]);
        remainder.add_scaled(&quotient[0], &one, &vj);
        if !remainder.is_zero() {
            return None;
        }
        let mut out = Poly::default();
        for (k, q) in quotient.into_iter().enumerate() {
            for (m, c) in q.terms {
                let mut mono = m;
                mono.exps_mut(family)[i] = k as i32 + shift;
                out.add_term(mono, c);
            }
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(k: usize) -> Monomial {
        Monomial::var(Var::X, k)
    }

    #[test]
    fn difference_power_expands_binomially() {
        let p = Poly::difference_power(Var::X, 0, 1, 3);
        assert_eq!(p.terms.len(), 4);
        let mut m = Monomial::one();
        m.x[0] = 1;
        m.x[1] = 2;
        assert_eq!(p.terms[&m], real(integer(3)));
    }

    #[test]
    fn division_inverts_multiplication() {
        let mut base = Poly::default();
        base.add_term(x(0).mul(&x(2)), real(integer(2)));
        base.add_term(Monomial::var(Var::Z, 1), real(integer(-5)));
        let prod = base.mul(&Poly::difference_power(Var::X, 0, 2, 1));
        let q = prod.divide_by_difference(Var::X, 0, 2).unwrap();
        assert_eq!(q.terms, base.terms);
        assert!(base.divide_by_difference(Var::X, 0, 2).is_none());
    }

    #[test]
    fn laurent_division_in_z() {
        // (z_0 - z_1) * z_0^{-2}
        let mut inv = Poly::default();
        let mut m = Monomial::one();
        m.z[0] = -2;
        inv.add_term(m, real(integer(1)));
        let prod = inv.mul(&Poly::difference_power(Var::Z, 0, 1, 1));
        let q = prod.divide_by_difference(Var::Z, 0, 1).unwrap();
        assert_eq!(q.terms, inv.terms);
    }
}
