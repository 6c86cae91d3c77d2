//! Linear (LLL-induced) anyon states in a harmonic well, their spectra and degeneracies.

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::algebra::numbers::{format_rational, integer, is_integer, rational, real};
use crate::algebra::ops::check_n;
use crate::algebra::term::{ExponentialTag, Monomial};
use crate::algebra::{Expression, Permutation, Var};
use crate::calogero::ser_rational;
use crate::error::{Error, Result};

/// `∏_{i<j}(z_i − z_j)^α Σ_π ∏_i z_{π(i)}^{ℓ_i}`.
///
/// For integer `α` the monodromy factor is expanded into `body`. Otherwise `body` holds
/// only the symmetric sum and `label_power` records the unexpanded exponent.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AnyonState {
    pub n: usize,
    #[serde(serialize_with = "ser_rational")]
    pub alpha: BigRational,
    pub ell: Vec<u32>,
    #[serde(rename = "labelPower", serialize_with = "ser_rational")]
    pub label_power: BigRational,
    pub body: Expression,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectrumParams {
    pub omega: f64,
    pub omega_c: f64,
}

impl SpectrumParams {
    pub fn new(omega: f64, omega_c: f64) -> Result<Self> {
        if !(omega >= 0.0 && omega_c >= 0.0) || (omega == 0.0 && omega_c == 0.0) {
            return Err(Error::InvalidArgument(format!(
                "need omega >= 0, omega_c >= 0, not both zero (got {omega}, {omega_c})"
            )));
        }
        Ok(Self { omega, omega_c })
    }

    pub fn trap(omega: f64) -> Self {
        Self {
            omega,
            omega_c: 0.0,
        }
    }

    pub fn omega_t(&self) -> f64 {
        self.omega.hypot(self.omega_c)
    }
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

/// `Σ_{π∈S_N} ∏_i z_{π(i)}^{ℓ_i}` (every permutation counted, so `ℓ = 0` gives `N!`).
pub fn symmetric_monomial_sum(n: usize, ell: &[u32]) -> Expression {
    let parts: Vec<Expression> = Permutation::all(n)
        .into_iter()
        .map(|p| {
            let mut m = Monomial::one();
            for (i, &l) in ell.iter().enumerate() {
                m.z[p.apply(i)] = l as i32;
            }
            Expression::term(
                n,
                real(integer(1)),
                m,
                Default::default(),
                ExponentialTag::None,
            )
        })
        .collect();
    Expression::sum(n, parts.iter())
}

/// `∏_{i<j}(z_i − z_j)`.
pub fn monodromy_factor(n: usize) -> Expression {
    let mut out = Expression::one(n);
    for i in 0..n {
        for j in i + 1..n {
            let d = Expression::var(n, Var::Z, i).sub(&Expression::var(n, Var::Z, j));
            out = out.mul(&d).expect("polynomials");
        }
    }
    out
}

pub fn lll_state(n: usize, alpha: &BigRational, ell: &[u32]) -> Result<AnyonState> {
    check_n(n)?;
    validate_ell(n, ell)?;
    if alpha < &BigRational::zero() {
        return Err(Error::InvalidArgument(format!(
            "alpha must be non-negative, got {}",
            format_rational(alpha)
        )));
    }
    let sym = symmetric_monomial_sum(n, ell);
    let (body, label_power) = if is_integer(alpha) {
        let k = alpha
            .to_integer()
            .to_u32()
            .ok_or_else(|| Error::InvalidArgument("alpha too large".into()))?;
        (monodromy_factor(n).pow(k)?.mul(&sym)?, BigRational::zero())
    } else {
        (sym, alpha.clone())
    };
    Ok(AnyonState {
        n,
        alpha: alpha.clone(),
        ell: ell.to_vec(),
        label_power,
        body,
    })
}

fn pairs(n: usize) -> f64 {
    (n * n.saturating_sub(1)) as f64 / 2.0
}

/// Linear-state energy. Without a field this is `ω[Σℓ + αN(N−1)/2] + Nω`; in general
/// `(ω_t − ω_c)[Σℓ + αN(N−1)/2] + N ω_t`.
pub fn energy(n: usize, alpha: f64, ell: &[u32], params: &SpectrumParams) -> f64 {
    let total: u64 = ell.iter().map(|&l| l as u64).sum();
    let omega_t = params.omega_t();
    (omega_t - params.omega_c) * (total as f64 + alpha * pairs(n)) + n as f64 * omega_t
}

/// Exact energy at `ω_c = 0` for rational `ω` and `α`.
pub fn energy_exact(
    n: usize,
    alpha: &BigRational,
    ell: &[u32],
    omega: &BigRational,
) -> BigRational {
    let total: u64 = ell.iter().map(|&l| l as u64).sum();
    let p = integer((n * n.saturating_sub(1) / 2) as i64);
    omega * (integer(total as i64) + alpha * p) + omega * integer(n as i64)
}

/// Euler operator `Σ z_k ∂/∂z_k` on a holomorphic expression.
fn euler(e: &Expression) -> Result<Expression> {
    let mut parts = Vec::with_capacity(e.len());
    for t in e.terms() {
        if t.tag != ExponentialTag::None
            || t.mono.degree(Var::X) != 0
            || t.mono.x.iter().any(|&v| v != 0)
        {
            return Err(Error::InvalidArgument(
                "input is not a holomorphic function of z".into(),
            ));
        }
        if t.denom.has(Var::X) {
            return Err(Error::InvalidArgument(
                "input is not a holomorphic function of z".into(),
            ));
        }
        let den: i64 = t.denom.pairs(Var::Z).map(|(_, _, p)| p as i64).sum();
        let degree = t.mono.degree(Var::Z) as i64 - den;
        parts.push(Expression::term(
            e.n(),
            &t.coeff * real(integer(degree)),
            t.mono,
            t.denom,
            t.tag,
        ));
    }
    Ok(Expression::sum(e.n(), parts.iter()))
}

/// `H_α` restricted to holomorphic inputs: the `∂̄` terms annihilate the body, leaving
/// `ω(Σ z_i ∂_i + α_label N(N−1)/2) + Nω`, where `α_label` is the unexpanded part of
/// the monodromy exponent.
pub fn apply_anyon_hamiltonian(s: &AnyonState, omega: &BigRational) -> Result<Expression> {
    let n = s.n;
    let e = euler(&s.body)?;
    let label = &s.label_power * integer((n * n.saturating_sub(1) / 2) as i64);
    let shift = real(omega * label + omega * integer(n as i64));
    Ok(e.scale(&real(omega.clone())).add(&s.body.scale(&shift)))
}

/// `H_α ψ − E ψ` at `ω_c = 0`, normalized.
pub fn anyon_residual(s: &AnyonState, omega: &BigRational) -> Result<Expression> {
    let h = apply_anyon_hamiltonian(s, omega)?;
    let e = energy_exact(s.n, &s.alpha, &s.ell, omega);
    Ok(h.sub(&s.body.scale(&real(e))).normalize())
}

/// Number of nondecreasing `N`-tuples of non-negative integers summing to `total`:
/// partitions of `total` into at most `N` parts.
pub fn count_degeneracy(n: usize, total: u32) -> u64 {
    let t = total as usize;
    // p[k][m]: partitions of m into parts of size at most k (equivalently, at most k parts)
    let mut p = vec![0u64; t + 1];
    p[0] = 1;
    for k in 1..=n {
        for m in k..=t {
            p[m] += p[m - k];
        }
    }
    p[t]
}

/// One row of a spectrum table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumRow {
    pub n: usize,
    pub alpha: f64,
    pub ell: Vec<u32>,
    pub omega: f64,
    #[serde(rename = "omegaC")]
    pub omega_c: f64,
    pub energy: f64,
}

/// All nondecreasing `ℓ` with `Σℓ = total`, lexicographic.
pub fn partitions(n: usize, total: u32) -> Vec<Vec<u32>> {
    fn rec(slots: usize, remaining: u32, min: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if slots == 0 {
            if remaining == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        let mut v = min;
        while v as u64 * slots as u64 <= remaining as u64 {
            prefix.push(v);
            rec(slots - 1, remaining - v, v, prefix, out);
            prefix.pop();
            v += 1;
        }
    }
    let mut out = Vec::new();
    rec(n, total, 0, &mut Vec::with_capacity(n), &mut out);
    out
}

pub fn spectrum_table(
    n: usize,
    alphas: &[f64],
    max_excitation: u32,
    params: &SpectrumParams,
) -> Vec<SpectrumRow> {
    let mut rows = Vec::new();
    for &alpha in alphas {
        for total in 0..=max_excitation {
            for ell in partitions(n, total) {
                rows.push(SpectrumRow {
                    n,
                    alpha,
                    energy: energy(n, alpha, &ell, params),
                    ell,
                    omega: params.omega,
                    omega_c: params.omega_c,
                });
            }
        }
    }
    rows
}

/// Exact `(ω_t − ω_c)[Σℓ + αN(N−1)/2] + N ω_t` for rational `ω_t ≥ ω_c`.
pub fn energy_field_exact(
    n: usize,
    alpha: &BigRational,
    ell: &[u32],
    omega_t: &BigRational,
    omega_c: &BigRational,
) -> BigRational {
    let total: u64 = ell.iter().map(|&l| l as u64).sum();
    let p = integer((n * n.saturating_sub(1) / 2) as i64);
    (omega_t - omega_c) * (integer(total as i64) + alpha * p) + omega_t * integer(n as i64)
}

#[derive(Clone, Debug, Serialize)]
pub struct PropertyCheck {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

/// Exact spectrum properties over every `ℓ` with `Σℓ ≤ max_total`: linearity in `α`,
/// the boson/fermion staircase correspondence, the `ω → 0` collapse onto `Nω_c` and
/// the degeneracy recursion against explicit enumeration.
pub fn spectrum_checks(n: usize, max_total: u32) -> Result<Vec<PropertyCheck>> {
    check_n(n)?;
    // (ω_t, ω_c) pairs with rational ω_t: a pure trap, a 3-4-5 field, and ω = 0
    let fields = [
        (integer(1), integer(0)),
        (integer(5), integer(4)),
        (integer(2), integer(2)),
    ];
    let alphas = [
        integer(0),
        rational(1, 3),
        rational(1, 2),
        rational(3, 4),
        integer(1),
    ];
    let staircase: Vec<u32> = (0..n as u32).collect();
    let (mut affine, mut endpoint, mut collapse) = (0usize, 0usize, 0usize);
    let mut failures = Vec::new();
    for total in 0..=max_total {
        for ell in partitions(n, total) {
            for (wt, wc) in &fields {
                let e = |a: &BigRational, l: &[u32]| energy_field_exact(n, a, l, wt, wc);
                let (e0, e1) = (e(&alphas[0], &ell), e(&alphas[4], &ell));
                for a in &alphas {
                    affine += 1;
                    if e(a, &ell) != &e0 + a * (&e1 - &e0) {
                        failures.push(format!(
                            "not affine at ell={ell:?} alpha={}",
                            format_rational(a)
                        ));
                    }
                }
                endpoint += 1;
                let shifted: Vec<u32> = ell.iter().zip(&staircase).map(|(l, s)| l + s).collect();
                if e1 != e(&alphas[0], &shifted) {
                    failures.push(format!("fermion endpoint differs at ell={ell:?}"));
                }
                if wt == wc {
                    for a in &alphas {
                        collapse += 1;
                        if e(a, &ell) != wc * integer(n as i64) {
                            failures
                                .push(format!("omega = 0 energy is not N omega_c at ell={ell:?}"));
                        }
                    }
                }
            }
        }
    }
    let mut checks = vec![
        PropertyCheck {
            name: "affine in alpha".into(),
            pass: failures.iter().all(|f| !f.starts_with("not affine")),
            detail: format!("{affine} energies"),
        },
        PropertyCheck {
            name: "Bose/Fermi staircase".into(),
            pass: failures.iter().all(|f| !f.starts_with("fermion")),
            detail: format!("{endpoint} pairs"),
        },
        PropertyCheck {
            name: "omega = 0 degeneracy".into(),
            pass: failures.iter().all(|f| !f.starts_with("omega")),
            detail: format!("{collapse} energies"),
        },
    ];
    let mismatched: Vec<u32> = (0..=max_total)
        .filter(|&t| count_degeneracy(n, t) != partitions(n, t).len() as u64)
        .collect();
    checks.push(PropertyCheck {
        name: "degeneracy counts".into(),
        pass: mismatched.is_empty(),
        detail: if mismatched.is_empty() {
            format!("levels 0..={max_total}")
        } else {
            format!("mismatch at levels {mismatched:?}")
        },
    });
    if let Some(f) = failures.first() {
        checks[0].detail = format!("{}; first failure: {f}", checks[0].detail);
    }
    Ok(checks)
}

/// `α = p/q` with small denominators, for flags given as decimals.
pub fn alpha_from_f64(alpha: f64) -> Option<BigRational> {
    (1..=1000i64).find_map(|q| {
        let p = (alpha * q as f64).round();
        ((alpha * q as f64 - p).abs() < 1e-12).then(|| rational(p as i64, q))
    })
}
