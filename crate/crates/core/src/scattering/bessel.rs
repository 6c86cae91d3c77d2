//! `h_g(s) = √(2π) √s J_{g−1/2}(s)` and its irregular partner.
//!
//! `h_g(s) = s^g R_g(s²)` with `R_g` entire; every evaluation goes through `R_g` so the
//! branch of `s^g` is the principal one regardless of the method used.

use std::f64::consts::PI;

use num_complex::Complex64;
use statrs::function::gamma::{gamma, ln_gamma};

use crate::error::{Error, Result};

/// Series / asymptotic switchover radius for non-integer `g`.
pub const SWITCH_RADIUS: f64 = 16.0;
const SERIES_MAX_TERMS: usize = 400;
const EPS: f64 = 1e-17;

fn recip_gamma(x: f64) -> f64 {
    if x <= 0.0 && x.fract() == 0.0 {
        0.0
    } else if x > 150.0 {
        (-ln_gamma(x)).exp()
    } else {
        1.0 / gamma(x)
    }
}

fn as_integer(g: f64) -> Option<u32> {
    (g >= 0.0 && g.fract() == 0.0 && g < 64.0).then_some(g as u32)
}

/// `Σ_k (−w/4)^k / (k! Γ(a + k))` and its `w`-derivative.
fn hypergeometric_0f1(a: f64, w: Complex64) -> Result<(Complex64, Complex64)> {
    let q = -w / 4.0;
    // first index with a non-vanishing coefficient (a Γ pole kills the leading ones)
    let k0 = if a <= 0.0 && a.fract() == 0.0 {
        (1.0 - a) as usize
    } else {
        0
    };
    let mut c = recip_gamma(a + k0 as f64) / factorial(k0);
    let mut value = Complex64::new(0.0, 0.0);
    let mut deriv = Complex64::new(0.0, 0.0);
    let mut qk = q.powu(k0 as u32);
    let mut qk1 = if k0 > 0 {
        q.powu(k0 as u32 - 1)
    } else {
        Complex64::new(0.0, 0.0)
    };
    for k in k0..k0 + SERIES_MAX_TERMS {
        let term = qk * c;
        value += term;
        if k > 0 {
            deriv += qk1 * c * (k as f64 * -0.25);
        }
        if k > k0 + 4 && term.norm() <= EPS * value.norm() {
            return Ok((value, deriv));
        }
        if q == Complex64::new(0.0, 0.0) && k > k0 {
            return Ok((value, deriv));
        }
        qk1 = qk;
        qk *= q;
        c /= (k + 1) as f64 * (a + k as f64);
    }
    Err(Error::NonConvergence(format!(
        "0F1 series at a = {a}, w = {w}"
    )))
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|v| v as f64).product()
}

/// `R_g(w)` by its power series.
fn regular_part_series(g: f64, w: Complex64) -> Result<Complex64> {
    let (s, _) = hypergeometric_0f1(g + 0.5, w)?;
    Ok(s * (2.0 * PI).sqrt() * 2f64.powf(0.5 - g))
}

/// Hankel asymptotic `√(2π)√t J_ν(t) = 2[P cos ω − Q sin ω]`, `Re t > 0`.
fn hankel(nu: f64, t: Complex64) -> Result<Complex64> {
    let mu = 4.0 * nu * nu;
    let omega = t - (nu * PI / 2.0 + PI / 4.0);
    let mut p = Complex64::new(0.0, 0.0);
    let mut q = Complex64::new(0.0, 0.0);
    let mut a = Complex64::new(1.0, 0.0);
    let mut prev = f64::INFINITY;
    for k in 0..200 {
        let mag = a.norm();
        if mag > prev {
            break;
        }
        match k % 4 {
            0 => p += a,
            1 => q += a,
            2 => p -= a,
            _ => q -= a,
        }
        if mag < EPS {
            return Ok(2.0 * (p * omega.cos() - q * omega.sin()));
        }
        prev = mag;
        let m = (2 * k + 1) as f64;
        a = a * (mu - m * m) / ((k + 1) as f64 * 8.0 * t);
    }
    if prev < 1e-12 {
        Ok(2.0 * (p * omega.cos() - q * omega.sin()))
    } else {
        Err(Error::NonConvergence(format!(
            "asymptotic series at ν = {nu}, |t| = {}",
            t.norm()
        )))
    }
}

/// `h_g(s) = 2 s j_{g−1}(s)` by upward spherical-Bessel recurrence.
fn half_integer_closed_form(g: u32, s: Complex64) -> Complex64 {
    let mut prev = s.cos() / s;
    let mut cur = s.sin() / s;
    if g == 0 {
        return 2.0 * s * prev;
    }
    for n in 0..g - 1 {
        let next = (2 * n + 1) as f64 / s * cur - prev;
        prev = cur;
        cur = next;
    }
    2.0 * s * cur
}

/// `R_g(s²)` such that `h_g(s) = s^g R_g(s²)`.
pub fn regular_part(g: f64, s: Complex64) -> Result<Complex64> {
    if g < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "coupling must be non-negative, got {g}"
        )));
    }
    let r = s.norm();
    if let Some(gi) = as_integer(g) {
        if r < 2.0f64.max(gi as f64) {
            return regular_part_series(g, s * s);
        }
        return Ok(half_integer_closed_form(gi, s) / s.powu(gi));
    }
    if r < SWITCH_RADIUS {
        return regular_part_series(g, s * s);
    }
    let t = if s.re >= 0.0 { s } else { -s };
    Ok(hankel(g - 0.5, t)? / t.powf(g))
}

/// `√(2π) √s J_{g−1/2}(s)` on the principal branch.
pub fn bessel_scattering_2body(g: f64, s: Complex64) -> Result<Complex64> {
    let r = regular_part(g, s)?;
    Ok(if g == 0.0 { r } else { s.powf(g) * r })
}

/// Largest disagreement between the series and the asymptotic form on the circle
/// `|s| = SWITCH_RADIUS`, relative to the oscillation amplitude `2 e^{|Im s|}`.
pub fn switchover_gap(g: f64) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for k in -4..=4 {
        let theta = k as f64 * PI / 20.0;
        let s = Complex64::from_polar(SWITCH_RADIUS, theta);
        let a = s.powf(g) * regular_part_series(g, s * s)?;
        let b = hankel(g - 0.5, s)?;
        worst = worst.max((a - b).norm() / (2.0 * s.im.abs().exp()));
    }
    Ok(worst)
}

/// Value and `s`-derivative of the regular solution, series only (`|s|` small).
pub fn regular_with_derivative(g: f64, s: f64) -> Result<(f64, f64)> {
    let c = (2.0 * PI).sqrt() * 2f64.powf(0.5 - g);
    let (f, df) = hypergeometric_0f1(g + 0.5, Complex64::new(s * s, 0.0))?;
    let (f, df) = (c * f.re, c * df.re);
    // s^g F(s²)
    let value = s.powf(g) * f;
    let deriv = g * s.powf(g - 1.0) * f + s.powf(g) * 2.0 * s * df;
    Ok((value, deriv))
}

/// Value and derivative of the irregular solution `√(2π)√s J_{1/2−g}(s) ∼ s^{1−g}`.
pub fn irregular_with_derivative(g: f64, s: f64) -> Result<(f64, f64)> {
    let c = (2.0 * PI).sqrt() * 2f64.powf(g - 0.5);
    let (f, df) = hypergeometric_0f1(1.5 - g, Complex64::new(s * s, 0.0))?;
    let (f, df) = (c * f.re, c * df.re);
    let p = 1.0 - g;
    let value = s.powf(p) * f;
    let deriv = p * s.powf(p - 1.0) * f + s.powf(p) * 2.0 * s * df;
    Ok((value, deriv))
}

/// Leading coefficient `c` in `irregular(s) ≈ c s^{1−g}`.
pub fn irregular_leading_coefficient(g: f64) -> f64 {
    (2.0 * PI).sqrt() * 2f64.powf(g - 0.5) * recip_gamma(1.5 - g)
}

/// Leading coefficient `c` in `h_g(s) ≈ c s^g`.
pub fn regular_leading_coefficient(g: f64) -> f64 {
    (2.0 * PI).sqrt() * 2f64.powf(0.5 - g) * recip_gamma(g + 0.5)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn re(v: f64) -> Complex64 {
        Complex64::new(v, 0.0)
    }

    #[test]
    fn integer_couplings_reduce_to_trigonometry() {
        assert!((bessel_scattering_2body(0.0, re(PI)).unwrap() - re(-2.0)).norm() < 1e-14);
        assert!((bessel_scattering_2body(1.0, re(PI / 2.0)).unwrap() - re(2.0)).norm() < 1e-14);
        assert!((bessel_scattering_2body(2.0, re(PI)).unwrap() - re(2.0)).norm() < 1e-13);
        let s = 0.01;
        let small = bessel_scattering_2body(2.0, re(s)).unwrap().re;
        assert!((small / (s * s) - 2.0 / 3.0).abs() < 1e-4);
    }

    #[test]
    fn switchover_is_seamless() {
        for g in [0.25, 0.5, 0.75, 1.5, 2.7, 3.5] {
            let gap = switchover_gap(g).unwrap();
            assert!(gap < 1e-10, "g={g} gap={gap}");
        }
    }

    #[test]
    fn half_integer_g_from_both_sides() {
        // g = 1/2: √(2π)√s J_0(s); at the first zero of J_0 the value vanishes
        let j0_zero = 2.404_825_557_695_773;
        assert!(bessel_scattering_2body(0.5, re(j0_zero)).unwrap().norm() < 1e-13);
    }

    #[test]
    fn complex_arguments_use_principal_branch() {
        let s = Complex64::new(-0.4, 0.3);
        let direct = bessel_scattering_2body(1.0, s).unwrap();
        assert!((direct - 2.0 * s.sin()).norm() < 1e-14);
        let g = 1.5;
        let v = bessel_scattering_2body(g, s).unwrap();
        assert!((v - s.powf(g) * regular_part(g, s).unwrap()).norm() < 1e-15);
    }

    #[test]
    fn leading_coefficients() {
        let s = 1e-4;
        for g in [0.25, 0.75, 2.0] {
            let (v, _) = regular_with_derivative(g, s).unwrap();
            assert!((v / s.powf(g) / regular_leading_coefficient(g) - 1.0).abs() < 1e-6);
            let (w, _) = irregular_with_derivative(g, s).unwrap();
            assert!((w / s.powf(1.0 - g) / irregular_leading_coefficient(g) - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn derivatives_match_differences() {
        let (g, s, h) = (0.75, 0.6, 1e-6);
        let (_, d) = regular_with_derivative(g, s).unwrap();
        let fd = (regular_with_derivative(g, s + h).unwrap().0
            - regular_with_derivative(g, s - h).unwrap().0)
            / (2.0 * h);
        assert!((d - fd).abs() < 1e-8);
        let (_, d) = irregular_with_derivative(g, s).unwrap();
        let fd = (irregular_with_derivative(g, s + h).unwrap().0
            - irregular_with_derivative(g, s - h).unwrap().0)
            / (2.0 * h);
        assert!((d - fd).abs() < 1e-8);
    }
}
