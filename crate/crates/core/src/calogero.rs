//! Harmonic Calogero eigenstates from symmetrized ladder monomials, plus the 2-body
//! deformed Hermite polynomials.

use std::collections::BTreeMap;

use num_rational::{BigRational, Rational64};
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::numbers::{format_rational, i_pow, integer, is_integer, rational, real};
use crate::algebra::ops::{apply_dunkl, apply_scattering_calogero, check_n, square_sum};
use crate::algebra::{Expression, Permutation, Var};
use crate::error::{Error, Result};

/// Default cap on the number of terms any intermediate expression may reach.
pub const DEFAULT_TERM_BUDGET: usize = 1_000_000;

/// A harmonic Calogero eigenstate stored on the wedge `x_1 < … < x_N`.
///
/// The physical state is `π^{pi_power} · body`; `pi_power` is kept apart so the body
/// stays exact.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CalogeroState {
    pub n: usize,
    #[serde(serialize_with = "ser_rational")]
    pub g: BigRational,
    pub ell: Vec<u32>,
    #[serde(serialize_with = "ser_rational")]
    pub energy: BigRational,
    #[serde(rename = "piPower", serialize_with = "ser_rational")]
    pub pi_power: BigRational,
    pub body: Expression,
}

pub(crate) fn ser_rational<S: serde::Serializer>(
    q: &BigRational,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(q))
}

/// `Σ ℓ_i + g N(N−1)/2 + N/2` at `ω = 1`.
pub fn calogero_energy(n: usize, g: &BigRational, ell: &[u32]) -> BigRational {
    let total: u64 = ell.iter().map(|&l| l as u64).sum();
    let pairs = (n * n.saturating_sub(1) / 2) as i64;
    integer(total as i64) + g * integer(pairs) + rational(n as i64, 2)
}

/// Coupling seen by the exchange operators when a wedge representative of the given
/// `g` is manipulated. `Δ_x^g` flips sign under every exchange for odd `g`, so the
/// exchange terms of the symmetric extension act with `−g` on the representative.
pub fn effective_coupling(g: &BigRational) -> BigRational {
    let odd = is_integer(g) && !(g.to_integer() % 2i32).is_zero();
    if odd {
        -g.clone()
    } else {
        g.clone()
    }
}

fn integer_coupling(g: &BigRational) -> Result<u32> {
    if !is_integer(g) || g < &BigRational::zero() {
        return Err(Error::NonIntegerCoupling(format_rational(g)));
    }
    u32::try_from(g.to_integer()).map_err(|_| Error::NonIntegerCoupling(format_rational(g)))
}

fn validate_ell(n: usize, ell: &[u32]) -> Result<()> {
    if ell.len() != n {
        return Err(Error::InvalidArgument(format!(
            "ell has {} entries, expected {n}",
            ell.len()
        )));
    }
    if ell.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidArgument(format!(
            "ell must be nondecreasing, got {ell:?}"
        )));
    }
    Ok(())
}

fn check_budget(e: &Expression, budget: usize) -> Result<()> {
    if e.len() > budget {
        Err(Error::BudgetExceeded {
            terms: e.len(),
            budget,
        })
    } else {
        Ok(())
    }
}

/// `ψ_0 = Δ_x^g e^{−[x²]/2}`, energy `g N(N−1)/2 + N/2`.
pub fn ground_state(n: usize, g: &BigRational) -> Result<CalogeroState> {
    check_n(n)?;
    let power = integer_coupling(g)?;
    let body = Expression::vandermonde(n, Var::X)
        .pow(power)?
        .mul(&Expression::gaussian(n, Rational64::new(1, 2)))?;
    Ok(CalogeroState {
        n,
        g: g.clone(),
        ell: vec![0; n],
        energy: calogero_energy(n, g, &vec![0; n]),
        pi_power: BigRational::zero(),
        body,
    })
}

/// `a_i^+ e = e^{[x²]/2} Π_i e^{−[x²]/2} e`, with `Π_i` at coupling `g`.
pub fn raise(e: &Expression, i: usize, g: &BigRational) -> Result<Expression> {
    let half = Rational64::new(1, 2);
    let inner = e.shift_gaussian(half)?;
    apply_dunkl(&inner, i, g)?.shift_gaussian(-half)
}

/// `a_i e = −e^{−[x²]/2} Π_i e^{[x²]/2} e = −(Π_i + x_i) e`.
pub fn lower(e: &Expression, i: usize, g: &BigRational) -> Result<Expression> {
    let half = Rational64::new(1, 2);
    let inner = e.shift_gaussian(-half)?;
    Ok(apply_dunkl(&inner, i, g)?.shift_gaussian(half)?.neg())
}

/// `ψ_ℓ = 2^{gN(N−1)/2} π^{−N/2} Σ_{π∈S_N} ∏_i (i a^+_{π(i)})^{ℓ_i} ψ_0`.
pub fn build_state(n: usize, g: &BigRational, ell: &[u32]) -> Result<CalogeroState> {
    build_state_with_budget(n, g, ell, DEFAULT_TERM_BUDGET)
}

pub fn build_state_with_budget(
    n: usize,
    g: &BigRational,
    ell: &[u32],
    budget: usize,
) -> Result<CalogeroState> {
    check_n(n)?;
    validate_ell(n, ell)?;
    let power = integer_coupling(g)?;
    let ground = ground_state(n, g)?;
    let geff = effective_coupling(g);

    // The a^+ commute, so the S_N sum collapses onto distinct exponent vectors.
    let mut orbit: BTreeMap<Vec<u32>, i64> = BTreeMap::new();
    for p in Permutation::all(n) {
        let mut m = vec![0u32; n];
        for (i, &l) in ell.iter().enumerate() {
            m[p.apply(i)] = l;
        }
        *orbit.entry(m).or_insert(0) += 1;
    }
    let orbit: Vec<(Vec<u32>, i64)> = orbit.into_iter().collect();

    let parts: Vec<Expression> = orbit
        .par_iter()
        .map(|(m, mult)| {
            let mut cur = ground.body.clone();
            for (k, &times) in m.iter().enumerate() {
                for _ in 0..times {
                    cur = raise(&cur, k, &geff)?.normalize();
                    check_budget(&cur, budget)?;
                }
            }
            Ok(cur.scale(&real(integer(*mult))))
        })
        .collect::<Result<Vec<_>>>()?;

    let total: i64 = ell.iter().map(|&l| l as i64).sum();
    let pairs = (n * (n - 1) / 2) as u32;
    let prefactor = i_pow(total)
        * real(BigRational::from_integer(
            num_bigint::BigInt::from(2).pow(power * pairs),
        ));
    let body = Expression::sum(n, parts.iter())
        .normalize()
        .scale(&prefactor);
    check_budget(&body, budget)?;
    Ok(CalogeroState {
        n,
        g: g.clone(),
        ell: ell.to_vec(),
        energy: calogero_energy(n, g, ell),
        pi_power: rational(-(n as i64), 2),
        body,
    })
}

/// `−½ Σ ∂_i² + Σ_{i<j} g(g−1)/(x_i − x_j)² + ½ Σ x_i²` at `ω = 1`.
pub fn apply_harmonic_calogero(e: &Expression, g: &BigRational) -> Result<Expression> {
    let kinetic = apply_scattering_calogero(e, g)?;
    let trap = square_sum(e.n(), Var::X)
        .mul(e)?
        .scale(&real(rational(1, 2)));
    Ok(kinetic.add(&trap))
}

/// Exact eigen-residual `H ψ − E ψ`, normalized.
pub fn harmonic_residual(state: &CalogeroState) -> Result<Expression> {
    let h = apply_harmonic_calogero(&state.body, &state.g)?;
    Ok(h.sub(&state.body.scale(&real(state.energy.clone())))
        .normalize())
}

/// Polynomial in one variable with exact rational coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeformedHermite {
    pub ell: u32,
    pub g: BigRational,
    pub coefficients: Vec<BigRational>,
}

impl DeformedHermite {
    pub fn degree(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }

    pub fn eval(&self, x: f64) -> f64 {
        let c: Vec<f64> = self
            .coefficients
            .iter()
            .map(crate::algebra::numbers::rational_to_f64)
            .collect();
        c.iter().rev().fold(0.0, |acc, &a| acc * x + a)
    }

    /// Coefficients in `y = x²`: the polynomial is even.
    pub fn even_coefficients_f64(&self) -> Vec<f64> {
        self.coefficients
            .iter()
            .step_by(2)
            .map(crate::algebra::numbers::rational_to_f64)
            .collect()
    }
}

/// `H_{2ℓ,g}(x/√2)`: ℓ applications of `2 x^{−g} e^{x²/2} (d² − g(g−1)/x²) x^g e^{−x²/2}`
/// to `1`. Conjugating through `x^g e^{−x²/2}` gives the polynomial recursion
/// `p ↦ 2[p'' + 2g p'/x − 2x p' + (x² − 2g − 1) p]`.
pub fn deformed_hermite(ell: u32, g: &BigRational) -> DeformedHermite {
    let two = integer(2);
    let mut p = vec![BigRational::one()];
    for _ in 0..ell {
        let d = p.len() + 1;
        let mut next = vec![BigRational::zero(); d + 1];
        for (k, c) in p.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let kk = integer(k as i64);
            if k >= 2 {
                // p'' + 2g p'/x
                next[k - 2] += c * &kk * (&kk - BigRational::one() + &two * g);
            }
            // −2x p' + (−2g − 1) p
            next[k] += c * (-&two * &kk - &two * g - BigRational::one());
            next[k + 2] += c.clone();
        }
        p = next.into_iter().map(|c| c * &two).collect();
    }
    while p.len() > 1 && p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    DeformedHermite {
        ell,
        g: g.clone(),
        coefficients: p,
    }
}
