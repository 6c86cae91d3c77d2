//! Exact checks of the Vandermonde intertwiner: its action on `Δ^g` times a Gaussian
//! and the relation `H̄_{g+1} Δ̄_g = Δ̄_g H̄_g`.

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use serde::Serialize;

use crate::algebra::numbers::{integer, real};
use crate::algebra::ops::{apply_scattering_calogero, check_n, square_sum, MAX_VANDERMONDE_N};
use crate::algebra::{apply_vandermonde_bar, Expression, Var};
use crate::error::{Error, Result};
use crate::scattering::{symmetrized_plane_wave, CheckReport};

#[derive(Clone, Debug, Serialize)]
pub struct ConstantReport {
    pub n: usize,
    pub g: u32,
    /// `(−2)^{N(N−1)/2}` as an exact integer.
    pub constant: String,
    pub checks: Vec<CheckReport>,
    pub pass: bool,
}

fn pairs(n: usize) -> u32 {
    (n * (n - 1) / 2) as u32
}

fn minus_two_pow(k: i32) -> BigRational {
    let base = BigRational::from_integer(BigInt::from(-2));
    if k >= 0 {
        num_traits::pow(base, k as usize)
    } else {
        num_traits::pow(base.recip(), (-k) as usize)
    }
}

/// `Δ̄_g(Δ^g e^{−c[x²]}) − κ Δ^{g+1} e^{−c[x²]}`.
fn constant_residual(
    n: usize,
    g: u32,
    rate: Rational64,
    kappa: &BigRational,
) -> Result<Expression> {
    let gauss = Expression::gaussian(n, rate);
    let d = Expression::vandermonde(n, Var::X);
    let lhs = apply_vandermonde_bar(&d.pow(g)?.mul(&gauss)?, &integer(g as i64))?;
    let rhs = d.pow(g + 1)?.mul(&gauss)?.scale(&real(kappa.clone()));
    Ok(lhs.sub(&rhs).normalize())
}

fn check_size(n: usize, g: u32) -> Result<()> {
    check_n(n)?;
    if n > MAX_VANDERMONDE_N {
        return Err(Error::TooManyParticles {
            n,
            max: MAX_VANDERMONDE_N,
        });
    }
    if g > 3 {
        return Err(Error::InvalidArgument(format!(
            "coupling {g} exceeds the supported range 0..=3"
        )));
    }
    Ok(())
}

/// The constant `(−2)^{N(N−1)/2}` at rate 1, its rescaled counterpart
/// `(−2)^{−N(N−1)/2}` at rate 1/4, and the chain
/// `Δ̄_{g−1} ⋯ Δ̄_0 e^{−[v²]/4} = (−2)^{−gN(N−1)/2} Δ^g e^{−[v²]/4}`.
pub fn intertwiner_constant_check(n: usize, g: u32) -> Result<ConstantReport> {
    check_size(n, g)?;
    let p = pairs(n) as i32;
    let mut checks = vec![
        CheckReport::from_residual(
            format!("rate 1, constant (-2)^{p}"),
            constant_residual(n, g, Rational64::new(1, 1), &minus_two_pow(p))?,
        ),
        CheckReport::from_residual(
            format!("rate 1/4, constant (-2)^-{p}"),
            constant_residual(n, g, Rational64::new(1, 4), &minus_two_pow(-p))?,
        ),
    ];
    let quarter = Expression::gaussian(n, Rational64::new(1, 4));
    let mut chain = quarter.clone();
    for k in 0..g {
        chain = apply_vandermonde_bar(&chain, &integer(k as i64))?.normalize();
    }
    let target = Expression::vandermonde(n, Var::X)
        .pow(g)?
        .mul(&quarter)?
        .scale(&real(minus_two_pow(-(g as i32) * p)));
    checks.push(CheckReport::from_residual(
        format!("chain of {g} intertwiners"),
        chain.sub(&target).normalize(),
    ));
    let pass = checks.iter().all(|c| c.pass);
    Ok(ConstantReport {
        n,
        g,
        constant: minus_two_pow(p).to_string(),
        checks,
        pass,
    })
}

/// Symmetric probes: a Gaussian, `[x²]` times a Gaussian and the symmetrized plane wave.
pub fn default_test_expressions(n: usize) -> Result<Vec<Expression>> {
    let gauss = Expression::gaussian(n, Rational64::new(1, 1));
    Ok(vec![
        gauss.clone(),
        square_sum(n, Var::X).mul(&gauss)?,
        symmetrized_plane_wave(n)?,
    ])
}

/// `H̄_{g+1} Δ̄_g e − Δ̄_g H̄_g e` for every test expression.
pub fn intertwining_relation_check(
    n: usize,
    g: u32,
    tests: &[Expression],
) -> Result<Vec<CheckReport>> {
    check_size(n, g)?;
    let gq = integer(g as i64);
    let next = integer(g as i64 + 1);
    tests
        .iter()
        .enumerate()
        .map(|(k, e)| {
            if e.n() != n {
                return Err(Error::ParticleCountMismatch {
                    left: e.n(),
                    right: n,
                });
            }
            let left = apply_scattering_calogero(&apply_vandermonde_bar(e, &gq)?, &next)?;
            let right =
                apply_vandermonde_bar(&apply_scattering_calogero(e, &gq)?.normalize(), &gq)?;
            Ok(CheckReport::from_residual(
                format!("intertwining n={n} g={g} probe {k}"),
                left.sub(&right).normalize(),
            ))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_constants() {
        for (n, g) in [(2, 0), (2, 2), (3, 1)] {
            let r = intertwiner_constant_check(n, g).unwrap();
            assert!(r.pass, "{r:?}");
        }
        assert_eq!(intertwiner_constant_check(3, 1).unwrap().constant, "-8");
    }

    #[test]
    fn wrong_constant_is_caught() {
        let r = constant_residual(2, 1, Rational64::new(1, 1), &integer(2)).unwrap();
        assert!(!r.is_zero());
    }

    #[test]
    fn relation_on_probes() {
        let tests = default_test_expressions(2).unwrap();
        for g in 0..=2 {
            for c in intertwining_relation_check(2, g, &tests).unwrap() {
                assert!(c.pass, "{c:?}");
            }
        }
    }
}
