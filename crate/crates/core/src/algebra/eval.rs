//! Floating-point evaluation of expressions.

use num_complex::Complex64;

use crate::error::{Error, Result};

use super::expression::Expression;
use super::numbers::to_c64;
use super::term::{ExponentialTag, Var};
use super::MAX_N;

fn int_pow(base: Complex64, e: i32) -> Complex64 {
    if e >= 0 {
        base.powu(e as u32)
    } else {
        base.powu((-e) as u32).inv()
    }
}

fn check_lengths(e: &Expression, x: &[f64], z: &[Complex64]) -> Result<()> {
    if x.len() != e.n() {
        return Err(Error::ParticleCountMismatch {
            left: x.len(),
            right: e.n(),
        });
    }
    if z.len() != e.n() {
        return Err(Error::ParticleCountMismatch {
            left: z.len(),
            right: e.n(),
        });
    }
    Ok(())
}

/// Evaluates `e` at real `x` and complex `z`, summing in canonical term order.
pub fn eval_numeric(e: &Expression, x: &[f64], z: &[Complex64]) -> Result<Complex64> {
    check_lengths(e, x, z)?;
    let mut total = Complex64::new(0.0, 0.0);
    for t in e.terms() {
        let mut v = to_c64(&t.coeff);
        for k in 0..e.n() {
            if t.mono.x[k] != 0 {
                v *= int_pow(Complex64::new(x[k], 0.0), t.mono.x[k]);
            }
            if t.mono.z[k] != 0 {
                v *= int_pow(z[k], t.mono.z[k]);
            }
        }
        for (i, j, p) in t.denom.pairs(Var::X) {
            let d = x[i] - x[j];
            if d == 0.0 {
                return Err(Error::Singular { i, j });
            }
            v /= d.powi(p as i32);
        }
        for (i, j, p) in t.denom.pairs(Var::Z) {
            let d = z[i] - z[j];
            if d == Complex64::new(0.0, 0.0) {
                return Err(Error::Singular { i, j });
            }
            v /= d.powu(p);
        }
        v *= match t.tag {
            ExponentialTag::None => Complex64::new(1.0, 0.0),
            ExponentialTag::Gaussian(c) => {
                let rate = *c.numer() as f64 / *c.denom() as f64;
                Complex64::new((-rate * x.iter().map(|v| v * v).sum::<f64>()).exp(), 0.0)
            }
            ExponentialTag::PlaneWave(pi) => {
                let phase: Complex64 = (0..e.n()).map(|k| x[pi.apply(k)] * z[k]).sum();
                (Complex64::i() * phase).exp()
            }
        };
        total += v;
    }
    Ok(total)
}

#[derive(Clone, Debug)]
enum CompiledTag {
    None,
    Gaussian(f64),
    /// `exp(i Σ_k x_k w_k)` with `w_k = z_{π⁻¹(k)}` already substituted.
    PlaneWave([Complex64; MAX_N]),
}

#[derive(Clone, Debug)]
struct CompiledTerm {
    coeff: Complex64,
    x: [i32; MAX_N],
    denom: Vec<(usize, usize, i32)>,
    tag: usize,
}

/// An expression with `z` fixed, ready for repeated evaluation in `x`.
///
/// Terms sharing an exponential factor are grouped so the exponential is computed once
/// per point.
#[derive(Clone, Debug)]
pub struct XEvaluator {
    n: usize,
    tags: Vec<CompiledTag>,
    terms: Vec<CompiledTerm>,
}

impl XEvaluator {
    pub fn new(e: &Expression, z: &[Complex64]) -> Result<Self> {
        if z.len() != e.n() {
            return Err(Error::ParticleCountMismatch {
                left: z.len(),
                right: e.n(),
            });
        }
        let n = e.n();
        let mut tag_keys: Vec<ExponentialTag> = Vec::new();
        let mut tags = Vec::new();
        let mut terms = Vec::with_capacity(e.len());
        for t in e.terms() {
            let tag = match tag_keys.iter().position(|k| *k == t.tag) {
                Some(p) => p,
                None => {
                    tag_keys.push(t.tag);
                    tags.push(match t.tag {
                        ExponentialTag::None => CompiledTag::None,
                        ExponentialTag::Gaussian(c) => {
                            CompiledTag::Gaussian(*c.numer() as f64 / *c.denom() as f64)
                        }
                        ExponentialTag::PlaneWave(pi) => {
                            let mut w = [Complex64::new(0.0, 0.0); MAX_N];
                            for k in 0..n {
                                w[pi.apply(k)] = z[k];
                            }
                            CompiledTag::PlaneWave(w)
                        }
                    });
                    tags.len() - 1
                }
            };
            let mut coeff = to_c64(&t.coeff);
            for k in 0..n {
                if t.mono.z[k] != 0 {
                    coeff *= int_pow(z[k], t.mono.z[k]);
                }
            }
            for (i, j, p) in t.denom.pairs(Var::Z) {
                let d = z[i] - z[j];
                if d == Complex64::new(0.0, 0.0) {
                    return Err(Error::Singular { i, j });
                }
                coeff /= d.powu(p);
            }
            let denom = t
                .denom
                .pairs(Var::X)
                .map(|(i, j, p)| (i, j, p as i32))
                .collect();
            terms.push(CompiledTerm {
                coeff,
                x: t.mono.x,
                denom,
                tag,
            });
        }
        Ok(Self { n, tags, terms })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Value at `x`, with `exp(-rate [x²])` divided out of every Gaussian factor.
    pub fn eval_scaled(&self, x: &[f64], rate: f64) -> Result<Complex64> {
        debug_assert_eq!(x.len(), self.n);
        let r2: f64 = x.iter().map(|v| v * v).sum();
        let factors: Vec<Complex64> = self
            .tags
            .iter()
            .map(|t| match t {
                CompiledTag::None => Complex64::new((rate * r2).exp(), 0.0),
                CompiledTag::Gaussian(c) => Complex64::new(((rate - c) * r2).exp(), 0.0),
                CompiledTag::PlaneWave(w) => {
                    let phase: Complex64 = (0..self.n).map(|k| w[k] * x[k]).sum();
                    (Complex64::i() * phase).exp() * (rate * r2).exp()
                }
            })
            .collect();
        let mut total = Complex64::new(0.0, 0.0);
        for t in &self.terms {
            let mut v = t.coeff;
            for k in 0..self.n {
                if t.x[k] != 0 {
                    v *= x[k].powi(t.x[k]);
                }
            }
            for &(i, j, p) in &t.denom {
                let d = x[i] - x[j];
                if d == 0.0 {
                    return Err(Error::Singular { i, j });
                }
                v /= d.powi(p);
            }
            total += v * factors[t.tag];
        }
        Ok(total)
    }

    pub fn eval(&self, x: &[f64]) -> Result<Complex64> {
        self.eval_scaled(x, 0.0)
    }
}
