//! Gauss rules from three-term recurrences, and tensor grids built from them.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};

/// A one-dimensional rule `Σ w_k f(x_k) ≈ ∫ f(x) w(x) dx`.
#[derive(Clone, Debug, PartialEq)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Orthonormal recurrence `β_{k+1} p_{k+1} = (x − a_k) p_k − β_k p_{k−1}`.
struct Recurrence {
    a: Vec<f64>,
    /// `β_1 … β_{n}`; `b[k]` couples `p_k` and `p_{k+1}`.
    b: Vec<f64>,
    mu0: f64,
}

impl Recurrence {
    /// Values `p_{n}(x)`, `p_n'(x)` and `Σ_{k<n} p_k(x)²`.
    fn evaluate(&self, n: usize, x: f64) -> (f64, f64, f64) {
        let mut p_prev = 0.0;
        let mut p = 1.0 / self.mu0.sqrt();
        let mut d_prev = 0.0;
        let mut d = 0.0;
        let mut sum = 0.0;
        for k in 0..n {
            sum += p * p;
            let beta_k = if k == 0 { 0.0 } else { self.b[k - 1] };
            let p_next = ((x - self.a[k]) * p - beta_k * p_prev) / self.b[k];
            let d_next = ((x - self.a[k]) * d + p - beta_k * d_prev) / self.b[k];
            p_prev = p;
            p = p_next;
            d_prev = d;
            d = d_next;
        }
        (p, d, sum)
    }

    fn rule(&self, n: usize) -> Result<Rule> {
        if n == 0 {
            return Err(Error::Quadrature(
                "a Gauss rule needs at least one node".into(),
            ));
        }
        let mut jacobi = DMatrix::<f64>::zeros(n, n);
        for k in 0..n {
            jacobi[(k, k)] = self.a[k];
            if k + 1 < n {
                jacobi[(k, k + 1)] = self.b[k];
                jacobi[(k + 1, k)] = self.b[k];
            }
        }
        let mut nodes: Vec<f64> = SymmetricEigen::new(jacobi)
            .eigenvalues
            .iter()
            .copied()
            .collect();
        nodes.sort_by(f64::total_cmp);
        let mut weights = Vec::with_capacity(n);
        for x in nodes.iter_mut() {
            for _ in 0..3 {
                let (p, d, _) = self.evaluate(n, *x);
                if d == 0.0 || !d.is_finite() {
                    break;
                }
                let step = p / d;
                *x -= step;
                if step.abs() <= 1e-16 * x.abs().max(1.0) {
                    break;
                }
            }
            let (_, _, sum) = self.evaluate(n, *x);
            weights.push(1.0 / sum);
        }
        if nodes.windows(2).any(|w| w[0] >= w[1])
            || weights.iter().any(|w| !w.is_finite() || *w < 0.0)
        {
            return Err(Error::Quadrature(format!("degenerate {n}-point rule")));
        }
        Ok(Rule { nodes, weights })
    }
}

/// Weight `e^{−x²}` on the real line.
pub fn gauss_hermite(n: usize) -> Result<Rule> {
    let rec = Recurrence {
        a: vec![0.0; n],
        b: (1..=n).map(|k| (k as f64 / 2.0).sqrt()).collect(),
        mu0: std::f64::consts::PI.sqrt(),
    };
    rec.rule(n)
}

/// Weight `x^α e^{−x}` on `[0, ∞)`, `α > −1`.
pub fn gauss_laguerre(n: usize, alpha: f64) -> Result<Rule> {
    if alpha <= -1.0 {
        return Err(Error::Quadrature(format!(
            "Laguerre exponent must exceed −1, got {alpha}"
        )));
    }
    let rec = Recurrence {
        a: (0..n).map(|k| 2.0 * k as f64 + alpha + 1.0).collect(),
        b: (1..=n)
            .map(|k| (k as f64 * (k as f64 + alpha)).sqrt())
            .collect(),
        mu0: gamma(alpha + 1.0),
    };
    rec.rule(n)
}

/// Weight `1` on `[−1, 1]`.
pub fn gauss_legendre(n: usize) -> Result<Rule> {
    let rec = Recurrence {
        a: vec![0.0; n],
        b: (1..=n)
            .map(|k| k as f64 / ((4 * k * k - 1) as f64).sqrt())
            .collect(),
        mu0: 2.0,
    };
    rec.rule(n)
}

/// Composite Gauss–Legendre on `[lo, hi]` with equal panels.
pub fn legendre_panels(lo: f64, hi: f64, panels: usize, order: usize) -> Result<Rule> {
    if !(hi > lo) || panels == 0 {
        return Err(Error::Quadrature(format!(
            "empty interval [{lo}, {hi}] or no panels"
        )));
    }
    let base = gauss_legendre(order)?;
    let h = (hi - lo) / panels as f64;
    let mut nodes = Vec::with_capacity(panels * order);
    let mut weights = Vec::with_capacity(panels * order);
    for p in 0..panels {
        let mid = lo + (p as f64 + 0.5) * h;
        for (x, w) in base.nodes.iter().zip(&base.weights) {
            nodes.push(mid + 0.5 * h * x);
            weights.push(0.5 * h * w);
        }
    }
    Ok(Rule { nodes, weights })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Scheme {
    GaussHermiteTensor,
    GaussLegendrePanels,
    HalfLineGeneralizedLaguerre,
}

/// `N`-dimensional nodes with weights for `∫ f(x) e^{−rate [x²]} dx`.
#[derive(Clone, Debug)]
pub struct QuadratureGrid {
    pub scheme: Scheme,
    pub dim: usize,
    /// Flattened, `dim` coordinates per node.
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// Rate of the Gaussian weight absorbed into `weights`.
    pub rate: f64,
    /// Every node lies in `x_1 < … < x_N` and the grid covers only that wedge.
    pub wedge_filter: bool,
    /// Box radius for the panel scheme.
    pub truncation: Option<f64>,
}

impl QuadratureGrid {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn node(&self, k: usize) -> &[f64] {
        &self.nodes[k * self.dim..(k + 1) * self.dim]
    }

    /// Tensor product of Gauss–Hermite rules. Dimension `k` uses `points + k` nodes so no
    /// two coordinates of a node coincide (only one of the rules is odd and holds `0`
    /// when `points` is even and `dim ≤ 3`).
    pub fn hermite_tensor(dim: usize, points: usize, wedge_filter: bool) -> Result<Self> {
        let rules = (0..dim)
            .map(|k| gauss_hermite(points + k))
            .collect::<Result<Vec<_>>>()?;
        let mut grid = tensor(Scheme::GaussHermiteTensor, &rules, 1.0);
        if wedge_filter {
            grid.keep(|x| x.windows(2).all(|w| w[0] < w[1]));
            grid.wedge_filter = true;
        }
        Ok(grid)
    }

    /// Wedge grid from composite Gauss–Legendre in gap coordinates
    /// `x_1 = t ∈ [−R, R]`, `x_k = x_{k−1} + u_k`, `u_k ∈ [0, 2R]`. The map has unit
    /// Jacobian and every node is strictly ordered.
    pub fn wedge_panels(
        dim: usize,
        radius: f64,
        panels_per_unit: f64,
        order: usize,
    ) -> Result<Self> {
        let panels = ((2.0 * radius * panels_per_unit).ceil() as usize).max(1);
        let t = legendre_panels(-radius, radius, panels, order)?;
        let u = legendre_panels(0.0, 2.0 * radius, panels, order)?;
        let mut rules = vec![t];
        rules.extend(std::iter::repeat_n(u, dim.saturating_sub(1)));
        let mut grid = tensor(Scheme::GaussLegendrePanels, &rules, 0.0);
        for k in 0..grid.len() {
            let x = &mut grid.nodes[k * dim..(k + 1) * dim];
            for i in 1..dim {
                x[i] += x[i - 1];
            }
        }
        grid.wedge_filter = true;
        grid.truncation = Some(radius);
        Ok(grid)
    }

    fn keep(&mut self, pred: impl Fn(&[f64]) -> bool) {
        let dim = self.dim;
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        for k in 0..self.len() {
            let x = &self.nodes[k * dim..(k + 1) * dim];
            if pred(x) {
                nodes.extend_from_slice(x);
                weights.push(self.weights[k]);
            }
        }
        self.nodes = nodes;
        self.weights = weights;
    }
}

fn tensor(scheme: Scheme, rules: &[Rule], rate: f64) -> QuadratureGrid {
    let dim = rules.len();
    let total: usize = rules.iter().map(Rule::len).product();
    let mut nodes = Vec::with_capacity(total * dim);
    let mut weights = Vec::with_capacity(total);
    let mut idx = vec![0usize; dim];
    for _ in 0..total {
        let mut w = 1.0;
        for (k, r) in rules.iter().enumerate() {
            nodes.push(r.nodes[idx[k]]);
            w *= r.weights[idx[k]];
        }
        weights.push(w);
        for k in (0..dim).rev() {
            idx[k] += 1;
            if idx[k] < rules[k].len() {
                break;
            }
            idx[k] = 0;
        }
    }
    QuadratureGrid {
        scheme,
        dim,
        nodes,
        weights,
        rate,
        wedge_filter: false,
        truncation: None,
    }
}

/// Smallest `R` with `e^{−R²} R^{degree} < bound`.
pub fn box_radius(degree: u32, bound: f64) -> f64 {
    let mut r: f64 = 1.0;
    while (-r * r + degree as f64 * r.ln()).exp() >= bound {
        r += 0.25;
    }
    r
}

/// Pairwise summation over a fixed order; the result does not depend on how the values
/// were produced.
pub fn tree_sum<T: Copy + std::ops::Add<Output = T> + Default>(values: &[T]) -> T {
    match values.len() {
        0 => T::default(),
        1 => values[0],
        n => tree_sum(&values[..n / 2]) + tree_sum(&values[n / 2..]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn hermite_moments() {
        let r = gauss_hermite(30).unwrap();
        assert!((r.weights.iter().sum::<f64>() - PI.sqrt()).abs() < 1e-13);
        assert!((r.integrate(|x| x.powi(4)) - 0.75 * PI.sqrt()).abs() < 1e-13);
        assert!(r.integrate(|x| x.powi(5)).abs() < 1e-13);
    }

    #[test]
    fn laguerre_moments() {
        for alpha in [-0.25, 0.0, 0.5, 2.2] {
            let r = gauss_laguerre(40, alpha).unwrap();
            let m0 = gamma(alpha + 1.0);
            assert!(
                (r.weights.iter().sum::<f64>() / m0 - 1.0).abs() < 1e-12,
                "alpha={alpha}"
            );
            let m3 = gamma(alpha + 4.0);
            assert!((r.integrate(|x| x.powi(3)) / m3 - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn legendre_panels_are_exact_on_polynomials() {
        let r = legendre_panels(-1.0, 3.0, 5, 6).unwrap();
        assert!((r.weights.iter().sum::<f64>() - 4.0).abs() < 1e-13);
        assert!((r.integrate(|x| x.powi(7)) - (3f64.powi(8) - 1.0) / 8.0).abs() < 1e-9);
    }

    #[test]
    fn wedge_grid_has_ordered_nodes_and_right_volume() {
        let g = QuadratureGrid::wedge_panels(3, 6.0, 1.0, 8).unwrap();
        assert!((0..g.len()).all(|k| g.node(k).windows(2).all(|w| w[0] < w[1])));
        let gauss: f64 = (0..g.len())
            .map(|k| g.weights[k] * (-g.node(k).iter().map(|v| v * v).sum::<f64>()).exp())
            .sum();
        assert!((gauss - PI.powf(1.5) / 6.0).abs() < 1e-12);
    }

    #[test]
    fn hermite_tensor_has_no_ties() {
        let g = QuadratureGrid::hermite_tensor(3, 12, false).unwrap();
        assert!((g.weights.iter().sum::<f64>() - PI.powf(1.5)).abs() < 1e-12);
        assert!((0..g.len()).all(|k| {
            let x = g.node(k);
            x[0] != x[1] && x[1] != x[2] && x[0] != x[2]
        }));
        let f = QuadratureGrid::hermite_tensor(2, 12, true).unwrap();
        assert!((0..f.len()).all(|k| f.node(k)[0] < f.node(k)[1]));
    }

    #[test]
    fn radius_bound() {
        let r = box_radius(4, 1e-10);
        assert!((-r * r).exp() * r.powi(4) < 1e-10);
        assert!(tree_sum(&[1.0, 2.0, 3.0, 4.0, 5.0]) == 15.0);
    }
}
