//! One-dimensional kernel integrals for the relative 2-body problem.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::BigRational;
use serde::Serialize;

use super::quadrature::{gauss_hermite, gauss_laguerre};
use crate::algebra::numbers::rational_to_f64;
use crate::calogero::{deformed_hermite, DeformedHermite};
use crate::error::{Error, Result};
use crate::scattering::bessel::{
    irregular_leading_coefficient, irregular_with_derivative, regular_part, regular_with_derivative,
};

const HERMITE_POINTS: usize = 96;
const LAGUERRE_POINTS: usize = 90;

/// Physicists' Hermite polynomial.
pub fn hermite(n: u32, x: f64) -> f64 {
    let (mut prev, mut cur) = (0.0, 1.0);
    for k in 0..n {
        let next = 2.0 * x * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `∫ e^{−(x − iz)²/2} H_n(x/√2) dx`, with `x = √2 t` on a Gauss–Hermite rule.
pub fn gauss_integral_2body_free(n: u32, z: Complex64) -> Result<Complex64> {
    if n % 2 != 0 {
        return Err(Error::InvalidArgument(format!(
            "degree must be even, got {n}"
        )));
    }
    let rule = gauss_hermite(HERMITE_POINTS)?;
    let k = Complex64::i() * 2f64.sqrt() * z;
    let sum: Complex64 = rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&t, &w)| (k * t).exp() * (w * hermite(n, t)))
        .sum();
    Ok(sum * 2f64.sqrt() * (z * z / 2.0).exp())
}

/// Closed form `√(2π) (i√2 z)^n`.
pub fn free_target(n: u32, z: Complex64) -> Complex64 {
    (Complex64::i() * 2f64.sqrt() * z).powu(n) * (2.0 * PI).sqrt()
}

#[derive(Clone, Debug, Serialize)]
pub struct KernelIntegral {
    pub value: Complex64,
    /// Difference between two rule sizes.
    #[serde(rename = "errorEstimate")]
    pub error_estimate: f64,
    pub nodes: usize,
}

fn laguerre_sum(g: f64, z: Complex64, poly: &[f64], points: usize) -> Result<Complex64> {
    let rule = gauss_laguerre(points, g - 0.5)?;
    let mut total = Complex64::new(0.0, 0.0);
    for (&u, &w) in rule.nodes.iter().zip(&rule.weights) {
        let r = regular_part(g, z * (2.0 * u).sqrt())?;
        // p(x) as a polynomial in x² = 2u
        let p = poly.iter().rev().fold(0.0, |acc, &c| acc * 2.0 * u + c);
        total += r * (w * p);
    }
    Ok(total)
}

/// `∫_0^∞ e^{z²/2} h_g(xz) e^{−x²/2} x^g H_{2ℓ,g}(x/√2) dx`.
///
/// With `u = x²/2` and `h_g(s) = s^g R_g(s²)` the integrand becomes
/// `e^{z²/2} z^g 2^{g−1/2} u^{g−1/2} e^{−u} R_g(2uz²) P(u)`, so the `x^{2g−1}` behaviour at
/// the origin is carried by a generalized Gauss–Laguerre weight.
pub fn kernel_integral_2body(g: &BigRational, ell: u32, z: Complex64) -> Result<KernelIntegral> {
    kernel_integral_2body_with(g, ell, z, LAGUERRE_POINTS)
}

pub fn kernel_integral_2body_with(
    g: &BigRational,
    ell: u32,
    z: Complex64,
    points: usize,
) -> Result<KernelIntegral> {
    let gf = rational_to_f64(g);
    if gf < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "coupling must be non-negative, got {gf}"
        )));
    }
    let poly = deformed_hermite(ell, g).even_coefficients_f64();
    let pre = (z * z / 2.0).exp() * z.powf(gf) * 2f64.powf(gf - 0.5);
    let pre = if gf == 0.0 {
        (z * z / 2.0).exp() * 2f64.powf(-0.5)
    } else {
        pre
    };
    let coarse = laguerre_sum(gf, z, &poly, points)? * pre;
    let fine = laguerre_sum(gf, z, &poly, points + points / 2)? * pre;
    let error_estimate = (fine - coarse).norm();
    let scale = fine.norm().max(1e-300);
    if !fine.is_finite() || error_estimate > 1e-6 * scale {
        return Err(Error::NonConvergence(format!(
            "kernel integral at g = {gf}, ℓ = {ell}, z = {z}: achieved relative error {:.3e}",
            error_estimate / scale
        )));
    }
    Ok(KernelIntegral {
        value: fine,
        error_estimate,
        nodes: points + points / 2,
    })
}

/// Closed form `(−2)^ℓ √(2π) z^{g+2ℓ}` on the principal branch.
pub fn kernel_target(g: f64, ell: u32, z: Complex64) -> Complex64 {
    let zg = if g == 0.0 {
        Complex64::new(1.0, 0.0)
    } else {
        z.powf(g)
    };
    zg * z.powu(2 * ell) * (-2f64).powi(ell as i32) * (2.0 * PI).sqrt()
}

/// Observed power-law behaviour of one boundary quantity.
#[derive(Clone, Debug, Serialize)]
pub struct ScalingFit {
    pub name: String,
    pub predicted: f64,
    pub fitted: f64,
    pub values: Vec<f64>,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundaryReport {
    pub g: f64,
    pub ell: u32,
    pub z: f64,
    pub epsilons: Vec<f64>,
    pub fits: Vec<ScalingFit>,
    /// Limit of the combined term with the irregular solution and its prediction
    /// `2(1 − 2g) c z^{1−g} p(0)`.
    #[serde(rename = "irregularLimit")]
    pub irregular_limit: Option<(f64, f64)>,
    pub pass: bool,
}

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let num: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    num / den
}

fn fit(name: &str, predicted: f64, eps: &[f64], values: Vec<f64>) -> ScalingFit {
    let lx: Vec<f64> = eps.iter().map(|e| e.ln()).collect();
    let ly: Vec<f64> = values.iter().map(|v| v.abs().ln()).collect();
    let fitted = slope(&lx, &ly);
    let allowed = if predicted == 0.0 {
        0.05
    } else {
        0.05 * predicted.abs()
    };
    ScalingFit {
        name: name.into(),
        predicted,
        fitted,
        values,
        pass: (fitted - predicted).abs() <= allowed,
    }
}

fn poly_with_derivative(p: &DeformedHermite, x: f64) -> (f64, f64) {
    let c: Vec<f64> = p.coefficients.iter().map(rational_to_f64).collect();
    let value = c.iter().rev().fold(0.0, |acc, &a| acc * x + a);
    let deriv = c
        .iter()
        .enumerate()
        .skip(1)
        .rev()
        .fold(0.0, |acc, (k, &a)| acc * x + k as f64 * a);
    (value, deriv)
}

/// Boundary terms `−2 h F'` and `2 F dh/dx` at `x = ε`, where
/// `F = x^g e^{−x²/2} H_{2ℓ−2,g}(x/√2)` and `h = h_g(xz)`, for `ε = 2^{−6} … 2^{−12}`.
///
/// Each term behaves like `ε^{2g−1}` and their sum like `ε^{2g+1}`. The negative control
/// repeats the sum with the irregular solution `∼ (xz)^{1−g}` in place of `h`, whose sum
/// tends to a constant. When `g − ½` is an integer `J_{½−g} = ±J_{g−½}`, there is no
/// independent second solution and the control is omitted.
pub fn boundary_term_check(g: &BigRational, ell: u32, z: f64) -> Result<BoundaryReport> {
    let gf = rational_to_f64(g);
    if gf <= 0.0 || ell == 0 {
        return Err(Error::InvalidArgument(format!(
            "need g > 0 and ℓ ≥ 1, got g = {gf}, ℓ = {ell}"
        )));
    }
    let p = deformed_hermite(ell - 1, g);
    let eps: Vec<f64> = (6..=12).map(|k| 2f64.powi(-k)).collect();
    let mut first = Vec::new();
    let mut second = Vec::new();
    let mut combined = Vec::new();
    let mut irregular = Vec::new();
    for &e in &eps {
        let (pv, pd) = poly_with_derivative(&p, e);
        let gauss = (-e * e / 2.0).exp();
        let f = e.powf(gf) * gauss * pv;
        let df = gauss * (gf * e.powf(gf - 1.0) * pv - e.powf(gf + 1.0) * pv + e.powf(gf) * pd);
        let (h, dh) = regular_with_derivative(gf, e * z)?;
        let (q, dq) = irregular_with_derivative(gf, e * z)?;
        first.push(-2.0 * h * df);
        second.push(2.0 * f * dh * z);
        combined.push(2.0 * (f * dh * z - h * df));
        irregular.push(2.0 * (f * dq * z - q * df));
    }
    let limit = *irregular.last().expect("non-empty");
    let predicted_limit = 2.0
        * (1.0 - 2.0 * gf)
        * irregular_leading_coefficient(gf)
        * z.powf(1.0 - gf)
        * poly_with_derivative(&p, 0.0).0;
    let mut fits = vec![
        fit("h dF/dx", 2.0 * gf - 1.0, &eps, first),
        fit("F dh/dx", 2.0 * gf - 1.0, &eps, second),
        fit("combined", 2.0 * gf + 1.0, &eps, combined),
    ];
    let degenerate = (gf - 0.5).fract() == 0.0;
    let irregular_limit = (!degenerate).then_some((limit, predicted_limit));
    let limit_ok = degenerate || (limit / predicted_limit - 1.0).abs() < 0.05;
    if !degenerate {
        fits.push(fit("combined, irregular solution", 0.0, &eps, irregular));
    }
    let pass = fits.iter().all(|f| f.pass) && limit_ok;
    Ok(BoundaryReport {
        g: gf,
        ell,
        z,
        epsilons: eps,
        fits,
        irregular_limit,
        pass,
    })
}
