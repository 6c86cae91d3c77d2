//! Integration over the wedge `x_1 < … < x_N` with a deterministic reduction.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::quadrature::{box_radius, tree_sum, QuadratureGrid, Scheme};
use crate::algebra::{Expression, Var, XEvaluator};
use crate::error::{Error, Result};

/// Something that can be sampled at `x` with `e^{rate [x²]}` folded in, so Gaussian
/// weights never have to be divided out explicitly.
pub trait Integrand: Sync {
    fn dim(&self) -> usize;
    fn eval_scaled(&self, x: &[f64], rate: f64) -> Result<Complex64>;
}

/// `scale · e^{−gaussian [x²]} · Π_k f_k(x)`, where each factor carries its own Gaussian
/// rate `r_k` that is divided out before multiplying.
pub struct ProductIntegrand {
    dim: usize,
    factors: Vec<(XEvaluator, f64)>,
    gaussian: f64,
    scale: Complex64,
}

impl ProductIntegrand {
    pub fn new(dim: usize, gaussian: f64, scale: Complex64) -> Self {
        Self {
            dim,
            factors: Vec::new(),
            gaussian,
            scale,
        }
    }

    pub fn factor(mut self, f: XEvaluator, rate: f64) -> Result<Self> {
        if f.n() != self.dim {
            return Err(Error::ParticleCountMismatch {
                left: f.n(),
                right: self.dim,
            });
        }
        self.factors.push((f, rate));
        Ok(self)
    }
}

impl Integrand for ProductIntegrand {
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval_scaled(&self, x: &[f64], rate: f64) -> Result<Complex64> {
        let mut v = self.scale;
        let mut remaining = rate - self.gaussian;
        for (f, r) in &self.factors {
            v *= f.eval_scaled(x, *r)?;
            remaining -= r;
        }
        let r2: f64 = x.iter().map(|t| t * t).sum();
        Ok(v * (remaining * r2).exp())
    }
}

/// Wedge integral on `grid`. A wedge grid is summed directly; a full-space grid
/// integrates the symmetric extension `f(sort x)` and divides by `N!`.
pub fn wedge_integrate(f: &dyn Integrand, grid: &QuadratureGrid) -> Result<Complex64> {
    if f.dim() != grid.dim {
        return Err(Error::ParticleCountMismatch {
            left: f.dim(),
            right: grid.dim,
        });
    }
    let values = (0..grid.len())
        .into_par_iter()
        .map(|k| {
            let w = grid.weights[k];
            if grid.wedge_filter {
                return Ok(f.eval_scaled(grid.node(k), grid.rate)? * w);
            }
            let mut x = grid.node(k).to_vec();
            x.sort_by(f64::total_cmp);
            Ok(f.eval_scaled(&x, grid.rate)? * w)
        })
        .collect::<Result<Vec<Complex64>>>()?;
    let factorial: f64 = if grid.wedge_filter {
        1.0
    } else {
        (1..=grid.dim).map(|k| k as f64).product()
    };
    Ok(tree_sum(&values) / factorial)
}

/// Grid sizes for the two strategies.
#[derive(Clone, Debug, Serialize)]
pub struct WedgeConfig {
    /// Gauss–Hermite points along the first axis of the full-space grid.
    #[serde(rename = "hermitePoints")]
    pub hermite_points: usize,
    /// Gauss–Legendre order per panel of the gap-coordinate grid.
    #[serde(rename = "panelOrder")]
    pub panel_order: usize,
    #[serde(rename = "panelsPerUnit")]
    pub panels_per_unit: f64,
    /// Fixed box radius; derived from the envelope when absent.
    #[serde(rename = "boxRadius")]
    pub box_radius: Option<f64>,
}

impl WedgeConfig {
    pub fn for_dim(n: usize) -> Self {
        match n {
            0..=2 => Self {
                hermite_points: 48,
                panel_order: 12,
                panels_per_unit: 1.0,
                box_radius: None,
            },
            _ => Self {
                hermite_points: 30,
                panel_order: 10,
                panels_per_unit: 1.0,
                box_radius: None,
            },
        }
    }

    /// Same scheme with roughly 1.5 times the nodes per axis.
    pub fn refined(&self) -> Self {
        let even = |k: usize| k + k / 2 + (k + k / 2) % 2;
        Self {
            hermite_points: even(self.hermite_points),
            panel_order: self.panel_order + self.panel_order / 2,
            panels_per_unit: self.panels_per_unit,
            box_radius: self.box_radius.map(|r| r + 1.0),
        }
    }
}

/// Largest total `x` degree of the polynomial parts.
pub fn envelope_degree(exprs: &[&Expression]) -> u32 {
    exprs
        .iter()
        .map(|e| {
            e.terms()
                .iter()
                .map(|t| t.mono.degree(Var::X).max(0) as u32)
                .max()
                .unwrap_or(0)
        })
        .sum()
}

/// Radius such that `e^{−R² + R s} R^d` falls below `bound`, with `s` the growth rate of
/// the plane waves.
pub fn truncation_radius(degree: u32, growth: f64, bound: f64) -> f64 {
    let shifted = box_radius(degree, bound);
    let mut r = shifted;
    while (-r * r + r * growth + degree as f64 * r.ln()).exp() >= bound {
        r += 0.25;
    }
    r
}

#[derive(Clone, Debug, Serialize)]
pub struct StrategyPair {
    pub panels: Complex64,
    pub hermite: Complex64,
    #[serde(rename = "panelNodes")]
    pub panel_nodes: usize,
    #[serde(rename = "hermiteNodes")]
    pub hermite_nodes: usize,
    #[serde(rename = "boxRadius")]
    pub box_radius: f64,
    pub gap: f64,
    pub retried: bool,
}

fn both(f: &dyn Integrand, cfg: &WedgeConfig, radius: f64) -> Result<StrategyPair> {
    let n = f.dim();
    let mut points = cfg.hermite_points;
    if points % 2 == 1 {
        points += 1;
    }
    let panels = QuadratureGrid::wedge_panels(n, radius, cfg.panels_per_unit, cfg.panel_order)?;
    let hermite = QuadratureGrid::hermite_tensor(n, points, false)?;
    debug_assert_eq!(panels.scheme, Scheme::GaussLegendrePanels);
    let a = wedge_integrate(f, &panels)?;
    let b = wedge_integrate(f, &hermite)?;
    let gap = (a - b).norm() / a.norm().max(b.norm()).max(f64::MIN_POSITIVE);
    Ok(StrategyPair {
        panels: a,
        hermite: b,
        panel_nodes: panels.len(),
        hermite_nodes: hermite.len(),
        box_radius: radius,
        gap,
        retried: false,
    })
}

/// Runs both strategies; when they disagree by more than `agreement` the grids are
/// refined once and the refined pair is returned.
pub fn integrate_both(
    f: &dyn Integrand,
    cfg: &WedgeConfig,
    radius: f64,
    agreement: f64,
) -> Result<StrategyPair> {
    let first = both(f, cfg, radius)?;
    if first.gap <= agreement {
        return Ok(first);
    }
    let fine = cfg.refined();
    let mut second = both(f, &fine, fine.box_radius.unwrap_or(radius + 1.0))?;
    second.retried = true;
    Ok(second)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::numbers::cr;
    use num_rational::Rational64;
    use std::f64::consts::PI;

    fn gaussian_integrand(n: usize, poly: Expression) -> ProductIntegrand {
        let z = vec![Complex64::new(0.0, 0.0); n];
        let e = poly
            .mul(&Expression::gaussian(n, Rational64::new(1, 1)))
            .unwrap();
        ProductIntegrand::new(n, 0.0, Complex64::new(1.0, 0.0))
            .factor(XEvaluator::new(&e, &z).unwrap(), 1.0)
            .unwrap()
    }

    #[test]
    fn gaussian_wedges() {
        let f = gaussian_integrand(2, Expression::one(2));
        let r = integrate_both(&f, &WedgeConfig::for_dim(2), 6.0, 1e-10).unwrap();
        assert!((r.panels.re - PI / 2.0).abs() < 1e-12);
        assert!((r.hermite.re - PI / 2.0).abs() < 1e-12);
        let f = gaussian_integrand(3, Expression::one(3));
        let r = integrate_both(&f, &WedgeConfig::for_dim(3), 6.0, 1e-10).unwrap();
        assert!((r.panels.re - PI.powf(1.5) / 6.0).abs() < 1e-10);
        assert!((r.hermite.re - PI.powf(1.5) / 6.0).abs() < 1e-10);
    }

    #[test]
    fn relative_coordinate_oracle() {
        // in r = (x_2 − x_1)/√2 the wedge integral of (x_2 − x_1) e^{−[x²]} is √π · √2 ∫_0^∞ r e^{−r²} dr
        let d = Expression::vandermonde(2, Var::X);
        let f = gaussian_integrand(2, d.clone());
        let exact = (PI / 2.0).sqrt();
        let panels = QuadratureGrid::wedge_panels(2, 6.0, 1.0, 12).unwrap();
        assert!((wedge_integrate(&f, &panels).unwrap().re - exact).abs() < 1e-12);
        // the sorted extension |x_2 − x_1| has a kink, so the full-space rule only converges algebraically
        let coarse = wedge_integrate(&f, &QuadratureGrid::hermite_tensor(2, 24, false).unwrap())
            .unwrap()
            .re;
        let fine = wedge_integrate(&f, &QuadratureGrid::hermite_tensor(2, 96, false).unwrap())
            .unwrap()
            .re;
        assert!((fine - exact).abs() < (coarse - exact).abs());
        assert!((fine - exact).abs() > 1e-8);

        // (x_2 − x_1)² e^{−[x²]} is analytic: half of π
        let f = gaussian_integrand(2, d.pow(2).unwrap());
        let r = integrate_both(&f, &WedgeConfig::for_dim(2), 6.0, 1e-10).unwrap();
        assert!((r.panels.re - PI / 2.0).abs() < 1e-12);
        assert!(r.gap < 1e-12 && !r.retried, "{r:?}");
    }

    #[test]
    fn reduction_is_independent_of_thread_count() {
        let e = Expression::vandermonde(3, Var::X)
            .pow(2)
            .unwrap()
            .scale(&cr(1, 1));
        let f = gaussian_integrand(3, e);
        let grid = QuadratureGrid::hermite_tensor(3, 16, false).unwrap();
        let one = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let four = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap();
        let a = one.install(|| wedge_integrate(&f, &grid)).unwrap();
        let b = four.install(|| wedge_integrate(&f, &grid)).unwrap();
        assert_eq!(a.re.to_bits(), b.re.to_bits());
        assert_eq!(a.im.to_bits(), b.im.to_bits());
    }
}
