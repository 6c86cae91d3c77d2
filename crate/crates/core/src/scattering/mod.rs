//! Trap-free Calogero scattering states `h_g[x, z]`.

pub mod bessel;
mod structure;

use num_complex::Complex64;
use serde::Serialize;

use crate::algebra::numbers::{integer, rational, real};
use crate::algebra::ops::{
    apply_scattering_calogero, check_n, square_sum, swap_xz, MAX_VANDERMONDE_N,
};
use crate::algebra::{
    apply_vandermonde_bar, symmetrize, DiffDenominator, Expression, Permutation, Var,
};
use crate::calogero::DEFAULT_TERM_BUDGET;
use crate::error::{Error, Result};

pub use bessel::bessel_scattering_2body;
pub use structure::check_sij_structure;

/// Symbolic scattering state at integer coupling.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScatteringState {
    pub n: usize,
    pub g: u32,
    pub form: &'static str,
    pub body: Expression,
}

/// `S e^{i Σ x_k z_k}`.
pub fn symmetrized_plane_wave(n: usize) -> Result<Expression> {
    check_n(n)?;
    symmetrize(&Expression::plane_wave(Permutation::identity(n)))
}

/// `h_g = (−1)^{gN(N−1)/2} Δ_z^{−g} Δ̄_{g−1} ⋯ Δ̄_0 S e^{i Σ x_k z_k}`.
///
/// With `Δ_z = ∏_{i>j}(z_i − z_j)` the sign combines with `Δ_z^{−g}` into
/// `∏_{i<j}(z_i − z_j)^{−g}`. Only part of that denominator cancels: the result keeps
/// genuine `1/(z_i − z_j)` factors paired with `1/(x_i − x_j)`.
pub fn build_scattering_symbolic(n: usize, g: u32) -> Result<ScatteringState> {
    build_scattering_with_budget(n, g, DEFAULT_TERM_BUDGET)
}

pub fn build_scattering_with_budget(n: usize, g: u32, budget: usize) -> Result<ScatteringState> {
    check_n(n)?;
    if n > MAX_VANDERMONDE_N {
        return Err(Error::TooManyParticles {
            n,
            max: MAX_VANDERMONDE_N,
        });
    }
    let mut cur = symmetrized_plane_wave(n)?;
    for k in 0..g {
        cur = apply_vandermonde_bar(&cur, &integer(k as i64))?.normalize();
        if cur.len() > budget {
            return Err(Error::BudgetExceeded {
                terms: cur.len(),
                budget,
            });
        }
    }
    if g > 0 {
        let mut d = DiffDenominator::one();
        for i in 0..n {
            for j in i + 1..n {
                d.set_power(Var::Z, i, j, g);
            }
        }
        cur = cur.mul_denominator(&d).normalize();
    }
    Ok(ScatteringState {
        n,
        g,
        form: "symbolic",
        body: cur,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub pass: bool,
    /// Number of terms left in the normalized residual.
    #[serde(rename = "residualTerms")]
    pub residual_terms: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<Expression>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CheckReport {
    pub fn from_residual(name: impl Into<String>, residual: Expression) -> Self {
        let residual_terms = residual.len();
        Self {
            name: name.into(),
            pass: residual_terms == 0,
            residual_terms,
            residual: (residual_terms > 0).then_some(residual),
            detail: None,
        }
    }
}

/// `H̄_g h − ½[z²] h`, with `H̄_g = −½ Σ ∂_i² + Σ_{i<j} g(g−1)/(x_i − x_j)²`.
pub fn eigen_residual(body: &Expression, g: u32) -> Result<Expression> {
    let gq = integer(g as i64);
    let h = apply_scattering_calogero(body, &gq)?;
    let rhs = square_sum(body.n(), Var::Z)
        .mul(body)?
        .scale(&real(rational(1, 2)));
    Ok(h.sub(&rhs).normalize())
}

pub fn check_eigen(h: &ScatteringState) -> Result<CheckReport> {
    let r = eigen_residual(&h.body, h.g)?;
    Ok(CheckReport::from_residual(
        format!("eigen n={} g={}", h.n, h.g),
        r,
    ))
}

/// `h[x, z] − h[z, x]` together with the `s_ij` structure of every prefactor.
pub fn check_swap_symmetry(h: &ScatteringState) -> Result<CheckReport> {
    let swapped = swap_xz(&h.body)?;
    let residual = swapped.sub(&h.body).normalize();
    let mut report = CheckReport::from_residual(format!("swap n={} g={}", h.n, h.g), residual);
    match check_sij_structure(&h.body) {
        Ok(()) => report.detail = Some("prefactors are polynomials in s_ij".into()),
        Err(e) => {
            report.pass = false;
            report.detail = Some(e.to_string());
        }
    }
    Ok(report)
}

/// `e^{−iπN(N−1)g/4} e^{iπ g c(π)}` with `c(π)` the inversion number.
pub fn asymptotic_phases(n: usize, g: f64) -> Vec<(Permutation, Complex64)> {
    let base = -std::f64::consts::PI * (n * n.saturating_sub(1)) as f64 * g / 4.0;
    Permutation::all(n)
        .into_iter()
        .map(|p| {
            let phase = base + std::f64::consts::PI * g * p.inversions() as f64;
            (p, Complex64::from_polar(1.0, phase))
        })
        .collect()
}

/// Value of the symbolic `h_g` at the 2-body factorized form
/// `h_g((x_2 − x_1)(z_2 − z_1)/2) e^{i(x_1 + x_2)(z_1 + z_2)/2}`.
pub fn factorized_2body(g: f64, x: [f64; 2], z: [Complex64; 2]) -> Result<Complex64> {
    let s = (z[1] - z[0]) * ((x[1] - x[0]) / 2.0);
    let cm = (z[0] + z[1]) * ((x[0] + x[1]) / 2.0);
    Ok(bessel_scattering_2body(g, s)? * (Complex64::i() * cm).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::numbers::cr;

    fn pw(images: &[usize]) -> Expression {
        Expression::plane_wave(Permutation::from_images(images).unwrap())
    }

    #[test]
    fn two_body_low_couplings() {
        let h0 = build_scattering_symbolic(2, 0).unwrap();
        assert_eq!(h0.body, pw(&[0, 1]).add(&pw(&[1, 0])));
        let h1 = build_scattering_symbolic(2, 1).unwrap();
        assert!(h1
            .body
            .equivalent(&pw(&[0, 1]).sub(&pw(&[1, 0])).scale(&cr(0, -1))));
    }

    #[test]
    fn three_body_fermions_are_a_slater_sum() {
        let h = build_scattering_symbolic(3, 1).unwrap();
        let parts: Vec<Expression> = Permutation::all(3)
            .into_iter()
            .map(|p| Expression::plane_wave(p).scale(&cr(0, p.sign())))
            .collect();
        assert!(h.body.equivalent(&Expression::sum(3, parts.iter())));
    }

    #[test]
    fn two_body_eigen_and_swap() {
        for g in 0..=2 {
            let h = build_scattering_symbolic(2, g).unwrap();
            assert!(check_eigen(&h).unwrap().pass, "g={g}");
            assert!(check_swap_symmetry(&h).unwrap().pass, "g={g}");
        }
    }

    #[test]
    fn corrupted_state_fails_eigen_check() {
        let mut h = build_scattering_symbolic(2, 2).unwrap();
        let terms: Vec<_> = h.body.terms()[1..].to_vec();
        h.body = Expression::from_terms(2, terms).unwrap();
        let r = check_eigen(&h).unwrap();
        assert!(!r.pass);
        assert!(r.residual_terms > 0);
    }

    #[test]
    fn phases_for_two_bodies() {
        let p = asymptotic_phases(2, 1.0);
        assert!((p[0].1 - Complex64::new(0.0, -1.0)).norm() < 1e-15);
        assert!((p[1].1 - Complex64::new(0.0, 1.0)).norm() < 1e-15);
        assert!(asymptotic_phases(2, 0.0)
            .iter()
            .all(|(_, c)| (c - 1.0).norm() < 1e-15));
    }
}
