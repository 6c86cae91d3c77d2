//! Operators on [`Expression`]: coordinate permutations, derivatives, the exchange
//! (Dunkl) operators and the Vandermonde products built from them.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

use super::expression::{Accumulator, Expression};
use super::numbers::{imag_unit, integer, real, ComplexRational};
use super::permutation::Permutation;
use super::poly::Poly;
use super::term::{DiffDenominator, ExponentialTag, Monomial, Term, TermKey, Var};
use super::MAX_N;

/// Largest particle count accepted by [`symmetrize`].
pub const MAX_SYMMETRIZE_N: usize = 6;
/// Largest particle count accepted by the Vandermonde operator products.
pub const MAX_VANDERMONDE_N: usize = 4;

/// Exchange symmetry class of an expression.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Symmetric,
    Antisymmetric,
}

impl Parity {
    pub fn sign(self) -> i64 {
        match self {
            Parity::Symmetric => 1,
            Parity::Antisymmetric => -1,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Parity::Symmetric => Parity::Antisymmetric,
            Parity::Antisymmetric => Parity::Symmetric,
        }
    }
}

/// Relabels `x_k → x_{σ(k)}`. Denominators are re-oriented with the matching sign and
/// plane-wave tags compose with `σ`; Gaussian tags and all z data are untouched.
pub fn permute_x(e: &Expression, sigma: &Permutation) -> Expression {
    let n = e.n();
    assert_eq!(sigma.len(), n);
    let mut acc = Accumulator::new(n);
    for t in e.terms() {
        let mut mono = t.mono;
        for k in 0..n {
            mono.x[sigma.apply(k)] = t.mono.x[k];
        }
        let mut denom = t.denom;
        let mut negate = false;
        *denom.slots_mut(Var::X) = Default::default();
        for (a, b, p) in t.denom.pairs(Var::X) {
            let (sa, sb) = (sigma.apply(a), sigma.apply(b));
            if sa < sb {
                denom.bump(Var::X, sa, sb, p);
            } else {
                denom.bump(Var::X, sb, sa, p);
                negate ^= p % 2 == 1;
            }
        }
        let tag = match t.tag {
            ExponentialTag::PlaneWave(pi) => ExponentialTag::PlaneWave(sigma.compose(&pi)),
            other => other,
        };
        let coeff = if negate {
            -t.coeff.clone()
        } else {
            t.coeff.clone()
        };
        acc.push(TermKey { tag, mono, denom }, coeff);
    }
    acc.finish()
}

/// `M_ij · e`: swaps particles `i` and `j`.
pub fn apply_exchange(e: &Expression, i: usize, j: usize) -> Result<Expression> {
    e.check_index(i)?;
    e.check_index(j)?;
    if i == j {
        return Err(Error::InvalidArgument(format!(
            "exchange needs two distinct particles, got {i} twice"
        )));
    }
    Ok(permute_x(e, &Permutation::transposition(e.n(), i, j)))
}

/// `∂/∂x_i`, closed on monomials, difference denominators and both exponential kinds.
pub fn derivative_x(e: &Expression, i: usize) -> Result<Expression> {
    e.check_index(i)?;
    let mut acc = Accumulator::new(e.n());
    for t in e.terms() {
        differentiate_term(t, i, &mut acc);
    }
    Ok(acc.finish())
}

fn differentiate_term(t: &Term, i: usize, acc: &mut Accumulator) {
    let base = t.key();
    let ex = t.mono.x[i];
    if ex != 0 {
        let mut key = base;
        key.mono.x[i] -= 1;
        acc.push(key, &t.coeff * real(integer(ex as i64)));
    }
    for (a, b, p) in t.denom.pairs(Var::X) {
        // d/dx_a (x_a - x_b)^{-p} = -p (x_a - x_b)^{-p-1};  d/dx_b gives +p
        let sign = if a == i {
            -1
        } else if b == i {
            1
        } else {
            continue;
        };
        let mut key = base;
        key.denom.bump(Var::X, a, b, 1);
        acc.push(key, &t.coeff * real(integer(sign * p as i64)));
    }
    match t.tag {
        ExponentialTag::None => {}
        ExponentialTag::PlaneWave(pi) => {
            let k = pi.inverse().apply(i);
            let mut key = base;
            key.mono.z[k] += 1;
            acc.push(key, &t.coeff * imag_unit());
        }
        ExponentialTag::Gaussian(c) => {
            let mut key = base;
            key.mono.x[i] += 1;
            let factor = real(BigRational::new(
                (-2 * *c.numer()).into(),
                (*c.denom()).into(),
            ));
            acc.push(key, &t.coeff * factor);
        }
    }
}

/// Exchange operator `Π_i = ∂_i + Σ_{j≠i} M_ij g/(x_i − x_j)`, with `M_ij` acting on
/// everything to its right:
///
/// `Π_i e = ∂_i e − g Σ_{j≠i} (x_i − x_j)^{-1} M_ij e`.
///
/// With this ordering `−½ Σ Π_i²` equals `−½ Σ ∂_i² + Σ_{i<j} g(g − M_ij)/(x_i − x_j)²`.
pub fn apply_dunkl(e: &Expression, i: usize, g: &BigRational) -> Result<Expression> {
    e.check_index(i)?;
    let n = e.n();
    let mut acc = Accumulator::new(n);
    for t in e.terms() {
        differentiate_term(t, i, &mut acc);
    }
    if !g.is_zero() {
        let minus_g = real(-g.clone());
        for j in (0..n).filter(|&j| j != i) {
            let swapped = permute_x(e, &Permutation::transposition(n, i, j));
            let (a, b, sign) = if i < j { (i, j, 1) } else { (j, i, -1) };
            let coeff = &minus_g * real(integer(sign));
            for t in swapped.terms() {
                let mut key = t.key();
                key.denom.bump(Var::X, a, b, 1);
                acc.push(key, &t.coeff * &coeff);
            }
        }
    }
    Ok(acc.finish())
}

/// `Σ_{σ ∈ S_N} M_σ e`.
pub fn symmetrize(e: &Expression) -> Result<Expression> {
    if e.n() > MAX_SYMMETRIZE_N {
        return Err(Error::TooManyParticles {
            n: e.n(),
            max: MAX_SYMMETRIZE_N,
        });
    }
    let parts: Vec<Expression> = Permutation::all(e.n())
        .iter()
        .map(|s| permute_x(e, s))
        .collect();
    Ok(Expression::sum(e.n(), parts.iter()))
}

/// Exchange parity, decided exactly on adjacent transpositions. `None` for mixed symmetry.
pub fn parity(e: &Expression) -> Option<Parity> {
    let n = e.n();
    if n < 2 || e.is_zero() {
        return Some(Parity::Symmetric);
    }
    let mut found: Option<Parity> = None;
    for k in 0..n - 1 {
        let swapped = permute_x(e, &Permutation::transposition(n, k, k + 1));
        let this = if swapped.sub(e).is_zero() {
            Parity::Symmetric
        } else if swapped.add(e).is_zero() {
            Parity::Antisymmetric
        } else {
            return None;
        };
        match found {
            None => found = Some(this),
            Some(p) if p != this => return None,
            _ => {}
        }
    }
    found
}

/// The literal operator product `Δ̂_Π = ∏_{i>j} (Π_i − Π_j)` at coupling `g`.
pub fn apply_vandermonde_hat(e: &Expression, g: &BigRational) -> Result<Expression> {
    let n = e.n();
    if n > MAX_VANDERMONDE_N {
        return Err(Error::TooManyParticles {
            n,
            max: MAX_VANDERMONDE_N,
        });
    }
    let mut cur = e.clone();
    for j in 0..n {
        for i in j + 1..n {
            let a = apply_dunkl(&cur, i, g)?;
            let b = apply_dunkl(&cur, j, g)?;
            cur = a.sub(&b).normalize();
        }
    }
    Ok(cur)
}

/// Coupling at which the exchange operators reproduce the bosonic projection on an
/// input of the given parity: on antisymmetric functions `M_ij` acts as `−1`, which is
/// the same as flipping the sign of `g` in every `Π_i`.
pub fn projected_coupling(g: &BigRational, parity: Parity) -> BigRational {
    match parity {
        Parity::Symmetric => g.clone(),
        Parity::Antisymmetric => -g.clone(),
    }
}

/// `Δ̄_g e`: `Δ̂_Π` with every exchange operator moved to the right and set to 1.
///
/// Accepts symmetric inputs (where this is `Δ̂_Π e` directly) and antisymmetric inputs
/// (where it is `Δ̂_Π e` at coupling `−g`). The result has the opposite parity.
pub fn apply_vandermonde_bar(e: &Expression, g: &BigRational) -> Result<Expression> {
    let p = parity(e).ok_or(Error::NotSymmetric)?;
    apply_vandermonde_hat(e, &projected_coupling(g, p))
}

/// Exact quotient of a denominator-free expression by `(v_i − v_j)`, tag by tag.
pub fn divide_by_difference(e: &Expression, family: Var, i: usize, j: usize) -> Result<Expression> {
    e.check_index(i)?;
    e.check_index(j)?;
    let not_divisible = Error::NotDivisible {
        family: family.letter(),
        i,
        j,
    };
    if i == j {
        return Err(Error::InvalidArgument(
            "difference of a variable with itself".into(),
        ));
    }
    if e.has_denominators() {
        return Err(Error::InvalidArgument(
            "divideByDifference expects a polynomial input".into(),
        ));
    }
    let mut acc = Accumulator::new(e.n());
    for tag in e.tags() {
        let mut poly = Poly::default();
        for t in e.terms().iter().filter(|t| t.tag == tag) {
            poly.add_term(t.mono, t.coeff.clone());
        }
        let q = poly
            .divide_by_difference(family, i, j)
            .ok_or_else(|| not_divisible.clone())?;
        for (mono, coeff) in q.terms {
            acc.push(
                TermKey {
                    tag,
                    mono,
                    denom: DiffDenominator::one(),
                },
                coeff,
            );
        }
    }
    Ok(acc.finish())
}

/// Substitutes `x ↔ z` throughout. Only defined for expressions without Gaussian tags.
pub fn swap_xz(e: &Expression) -> Result<Expression> {
    let mut acc = Accumulator::new(e.n());
    for t in e.terms() {
        if t.mono.z.iter().any(|&p| p < 0) {
            return Err(Error::OutsideRing(
                "negative z powers would become negative x powers".into(),
            ));
        }
        let tag = match t.tag {
            ExponentialTag::None => ExponentialTag::None,
            // exp(i Σ_k z_{π(k)} x_k) = exp(i Σ_k x_{π⁻¹(k)} z_k)
            ExponentialTag::PlaneWave(pi) => ExponentialTag::PlaneWave(pi.inverse()),
            ExponentialTag::Gaussian(_) => {
                return Err(Error::OutsideRing(
                    "Gaussian factors have no z counterpart".into(),
                ))
            }
        };
        let mono = Monomial {
            x: t.mono.z,
            z: t.mono.x,
        };
        acc.push(
            TermKey {
                tag,
                mono,
                denom: t.denom.swap_families(),
            },
            t.coeff.clone(),
        );
    }
    Ok(acc.finish())
}

/// `Σ_k v_k²` as an expression.
pub fn square_sum(n: usize, family: Var) -> Expression {
    let parts: Vec<Expression> = (0..n)
        .map(|k| {
            let mut m = Monomial::one();
            m.exps_mut(family)[k] = 2;
            Expression::term(
                n,
                ComplexRational::one(),
                m,
                DiffDenominator::one(),
                ExponentialTag::None,
            )
        })
        .collect();
    Expression::sum(n, parts.iter())
}

/// Scattering (trap-free) Calogero Hamiltonian
/// `−½ Σ ∂_i² + Σ_{i<j} g(g−1)/(x_i − x_j)²`.
pub fn apply_scattering_calogero(e: &Expression, g: &BigRational) -> Result<Expression> {
    let n = e.n();
    let mut acc = Accumulator::new(n);
    let minus_half = real(BigRational::new((-1).into(), 2.into()));
    for i in 0..n {
        let d2 = derivative_x(&derivative_x(e, i)?, i)?;
        acc.push_expr(&d2, &minus_half);
    }
    let strength = g * (g - BigRational::one());
    if !strength.is_zero() {
        let c = real(strength);
        for i in 0..n {
            for j in i + 1..n {
                let mut d = DiffDenominator::one();
                d.set_power(Var::X, i, j, 2);
                acc.push_expr(&e.mul_denominator(&d), &c);
            }
        }
    }
    Ok(acc.finish())
}

pub(crate) fn check_n(n: usize) -> Result<()> {
    if n == 0 || n > MAX_N {
        Err(Error::InvalidArgument(format!(
            "particle count must be in 1..={MAX_N}, got {n}"
        )))
    } else {
        Ok(())
    }
}
