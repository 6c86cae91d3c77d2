//! Checks that every plane-wave prefactor of `h_g` is a rational function of the
//! products `s_ij = (x_{π(i)} − x_{π(j)})(z_i − z_j)` alone.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use crate::algebra::numbers::ComplexRational;
use crate::algebra::term::{ExponentialTag, Monomial, Var};
use crate::algebra::{Expression, Permutation};
use crate::error::{Error, Result};

fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect()
}

fn s_factor(n: usize, pi: &Permutation, i: usize, j: usize) -> Expression {
    let x = Expression::var(n, Var::X, pi.apply(i)).sub(&Expression::var(n, Var::X, pi.apply(j)));
    let z = Expression::var(n, Var::Z, i).sub(&Expression::var(n, Var::Z, j));
    x.mul(&z).expect("polynomials")
}

fn compositions(parts: usize, total: u32) -> Vec<Vec<u32>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(parts - 1, total - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Exact test that `target` lies in the span of `columns` (all as monomial maps).
fn in_span(
    columns: &[HashMap<Monomial, ComplexRational>],
    target: &HashMap<Monomial, ComplexRational>,
) -> bool {
    let mut index: BTreeMap<Monomial, usize> = BTreeMap::new();
    for m in columns.iter().flat_map(|c| c.keys()).chain(target.keys()) {
        let next = index.len();
        index.entry(*m).or_insert(next);
    }
    let rows = index.len();
    let cols = columns.len();
    let mut a = vec![vec![ComplexRational::zero(); cols + 1]; rows];
    for (c, col) in columns.iter().enumerate() {
        for (m, v) in col {
            a[index[m]][c] = v.clone();
        }
    }
    for (m, v) in target {
        a[index[m]][cols] = v.clone();
    }
    let mut pivot_row = 0;
    for c in 0..cols {
        let Some(p) = (pivot_row..rows).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        a.swap(pivot_row, p);
        let inv = ComplexRational::one() / a[pivot_row][c].clone();
        for v in a[pivot_row].iter_mut() {
            *v = &*v * &inv;
        }
        let pivot = a[pivot_row].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r != pivot_row && !row[c].is_zero() {
                let f = row[c].clone();
                for k in c..=cols {
                    row[k] = &row[k] - &f * &pivot[k];
                }
            }
        }
        pivot_row += 1;
    }
    a[pivot_row..].iter().all(|row| row[cols].is_zero())
}

/// Fails with a description of the first prefactor that is not a function of `s_ij`.
pub fn check_sij_structure(body: &Expression) -> Result<()> {
    let n = body.n();
    let fail = |msg: String| Err(Error::InvalidArgument(msg));
    for tag in body.tags() {
        let pi = match tag {
            ExponentialTag::PlaneWave(p) => p,
            ExponentialTag::None => Permutation::identity(n),
            ExponentialTag::Gaussian(_) => {
                return fail("Gaussian factor in a scattering state".into())
            }
        };
        let part = body.tag_part(&tag);
        let mut cleared = part.clone();
        for (i, j) in pairs(n) {
            let (a, b) = (pi.apply(i).min(pi.apply(j)), pi.apply(i).max(pi.apply(j)));
            let m = part
                .terms()
                .iter()
                .map(|t| t.denom.power(Var::Z, i, j).max(t.denom.power(Var::X, a, b)))
                .max()
                .unwrap_or(0);
            if m > 0 {
                cleared = cleared.mul(&s_factor(n, &pi, i, j).pow(m)?)?;
            }
        }
        let cleared = cleared.normalize();
        if cleared.has_denominators() {
            return fail(format!(
                "tag {tag}: denominators survive multiplication by s_ij powers"
            ));
        }
        let mut by_degree: BTreeMap<i32, HashMap<Monomial, ComplexRational>> = BTreeMap::new();
        for t in cleared.terms() {
            let (dx, dz) = (t.mono.degree(Var::X), t.mono.degree(Var::Z));
            if dx != dz || t.mono.z.iter().any(|&e| e < 0) {
                return fail(format!(
                    "tag {tag}: monomial with x-degree {dx} and z-degree {dz}"
                ));
            }
            by_degree
                .entry(dx)
                .or_default()
                .insert(t.mono, t.coeff.clone());
        }
        let ps = pairs(n);
        let factors: Vec<Expression> = ps.iter().map(|&(i, j)| s_factor(n, &pi, i, j)).collect();
        for (d, target) in by_degree {
            let columns: Vec<HashMap<Monomial, ComplexRational>> = compositions(ps.len(), d as u32)
                .into_iter()
                .map(|alpha| {
                    let mut e = Expression::one(n);
                    for (f, &k) in factors.iter().zip(&alpha) {
                        e = e.mul(&f.pow(k).expect("polynomial")).expect("polynomial");
                    }
                    e.terms()
                        .iter()
                        .map(|t| (t.mono, t.coeff.clone()))
                        .collect()
                })
                .collect();
            if !in_span(&columns, &target) {
                return fail(format!(
                    "tag {tag}: degree-{d} part is not a polynomial in s_ij"
                ));
            }
        }
    }
    Ok(())
}
