//! `N`-body wedge integrals: the Vandermonde identity and the full kernel map.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::wedge::{
    envelope_degree, integrate_both, truncation_radius, ProductIntegrand, StrategyPair, WedgeConfig,
};
use crate::algebra::numbers::integer;
use crate::algebra::{eval_numeric, Expression, Var, XEvaluator};
use crate::anyon::lll_state;
use crate::calogero::build_state;
use crate::error::{Error, Result};
use crate::scattering::build_scattering_symbolic;

pub const Z_RADIUS: f64 = 1.5;
pub const Z_SEPARATION: f64 = 0.3;
pub const PRNG: &str = "ChaCha8";

/// Complex `N`-tuples in the disk `|z| ≤ 1.5` with pairwise separation `≥ 0.3`.
pub fn sample_z(n: usize, count: usize, seed: u64) -> Vec<Vec<Complex64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let mut z: Vec<Complex64> = Vec::with_capacity(n);
        while z.len() < n {
            let r = Z_RADIUS * rng.random::<f64>().sqrt();
            let theta = 2.0 * PI * rng.random::<f64>();
            let c = Complex64::from_polar(r, theta);
            if z.iter().all(|w| (w - c).norm() >= Z_SEPARATION) {
                z.push(c);
            }
        }
        out.push(z);
    }
    out
}

/// `Δ_z = ∏_{i>j} (z_i − z_j)`.
pub fn vandermonde_z(z: &[Complex64]) -> Complex64 {
    let mut v = Complex64::new(1.0, 0.0);
    for i in 0..z.len() {
        for j in 0..i {
            v *= z[i] - z[j];
        }
    }
    v
}

fn pairs(n: usize) -> i32 {
    (n * n.saturating_sub(1) / 2) as i32
}

/// Sum of `|Im z_k|`, the exponential growth rate of the plane waves in `x`.
fn growth(z: &[Complex64]) -> f64 {
    z.iter().map(|c| c.im.abs()).sum()
}

fn default_radius(cfg: &WedgeConfig, degree: u32, z: &[Complex64], tol: f64) -> f64 {
    cfg.box_radius
        .unwrap_or_else(|| truncation_radius(degree, growth(z), 0.01 * tol).max(4.0))
}

#[derive(Clone, Debug, Serialize)]
pub struct VandermondeReport {
    pub n: usize,
    pub g: u32,
    pub z: Vec<Complex64>,
    pub lhs: StrategyPair,
    pub rhs: Complex64,
    pub ratio: Complex64,
}

/// `∫_{wedge} Δ_x^g e^{−[x²]} h_g[x, z] [dx]` against `2^{−gN(N−1)/2} π^{N/2} Δ_z^g e^{−[z²]/4}`.
pub fn vandermonde_integral(
    n: usize,
    g: u32,
    z: &[Complex64],
    cfg: &WedgeConfig,
    tol: f64,
) -> Result<VandermondeReport> {
    let h = build_scattering_symbolic(n, g)?;
    vandermonde_integral_with(&h.body, g, z, cfg, tol)
}

pub fn vandermonde_integral_with(
    h: &Expression,
    g: u32,
    z: &[Complex64],
    cfg: &WedgeConfig,
    tol: f64,
) -> Result<VandermondeReport> {
    let n = h.n();
    let d = Expression::vandermonde(n, Var::X).pow(g)?;
    let f = ProductIntegrand::new(n, 1.0, Complex64::new(1.0, 0.0))
        .factor(XEvaluator::new(&d, z)?, 0.0)?
        .factor(XEvaluator::new(h, z)?, 0.0)?;
    let radius = default_radius(cfg, envelope_degree(&[&d, h]), z, tol);
    let lhs = integrate_both(&f, cfg, radius, 10.0 * tol)?;
    let z2: Complex64 = z.iter().map(|c| c * c).sum();
    let rhs = vandermonde_z(z).powu(g)
        * 2f64.powi(-(g as i32) * pairs(n))
        * PI.powf(n as f64 / 2.0)
        * (-z2 / 4.0).exp();
    let ratio = lhs.panels / rhs;
    Ok(VandermondeReport {
        n,
        g,
        z: z.to_vec(),
        lhs,
        rhs,
        ratio,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Case {
    pub n: usize,
    pub g: u32,
    pub ell: Vec<u32>,
}

#[derive(Clone, Debug, Serialize)]
pub struct MappingSample {
    pub z: Vec<Complex64>,
    pub lhs: Complex64,
    pub rhs: Complex64,
    #[serde(rename = "relErr")]
    pub rel_err: f64,
    /// Relative disagreement between the two wedge strategies.
    #[serde(rename = "strategyGap")]
    pub strategy_gap: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct GridMeta {
    pub schemes: [&'static str; 2],
    pub config: WedgeConfig,
    #[serde(rename = "boxRadius")]
    pub box_radius: Vec<f64>,
    #[serde(rename = "panelNodes")]
    pub panel_nodes: usize,
    #[serde(rename = "hermiteNodes")]
    pub hermite_nodes: usize,
    pub retried: usize,
    pub prng: &'static str,
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct MappingReport {
    pub case: Case,
    pub samples: Vec<MappingSample>,
    /// Least-squares `c` in `lhs ≈ c · rhs`.
    pub constant: Complex64,
    /// Standard deviation of `lhs / rhs` over the samples.
    #[serde(rename = "ratioSpread")]
    pub ratio_spread: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(rename = "gridMeta")]
    pub grid_meta: GridMeta,
}

/// `Δ_z^g Σ_{π∈S_N} ∏_i z_{π(i)}^{ℓ_i}`, `Δ_z = ∏_{i>j}(z_i − z_j)`.
///
/// The anyon state uses `∏_{i<j}(z_i − z_j)^g`, which differs by `(−1)^{gN(N−1)/2}`.
pub fn mapping_target(g: u32, ell: &[u32], z: &[Complex64]) -> Result<Complex64> {
    let n = z.len();
    let state = lll_state(n, &integer(g as i64), ell)?;
    let v = eval_numeric(&state.body, &vec![0.0; n], z)?;
    let sign = if (g as i32 * pairs(n)) % 2 == 0 {
        1.0
    } else {
        -1.0
    };
    Ok(v * sign)
}

/// `e^{[z²]/4} ∫_{wedge} e^{−[x²]/2} h_g[x, z] ψ_ℓ[x] [dx]` at each sample, compared with
/// [`mapping_target`].
pub fn verify_mapping(
    n: usize,
    g: u32,
    ell: &[u32],
    z_samples: &[Vec<Complex64>],
    cfg: &WedgeConfig,
    tol: f64,
) -> Result<MappingReport> {
    let h = build_scattering_symbolic(n, g)?;
    let psi = build_state(n, &integer(g as i64), ell)?;
    verify_mapping_with(&h.body, &psi.body, g, ell, z_samples, cfg, tol)
}

/// As [`verify_mapping`] with prebuilt `h_g` and state body (`ψ_ℓ = π^{−N/2} body`).
pub fn verify_mapping_with(
    h: &Expression,
    psi: &Expression,
    g: u32,
    ell: &[u32],
    z_samples: &[Vec<Complex64>],
    cfg: &WedgeConfig,
    tol: f64,
) -> Result<MappingReport> {
    let n = h.n();
    if z_samples.is_empty() {
        return Err(Error::InvalidArgument("no z samples".into()));
    }
    let degree = envelope_degree(&[h, psi]);
    let mut samples = Vec::with_capacity(z_samples.len());
    let mut radii = Vec::new();
    let (mut panel_nodes, mut hermite_nodes, mut retried) = (0, 0, 0);
    for z in z_samples {
        if z.len() != n {
            return Err(Error::ParticleCountMismatch {
                left: z.len(),
                right: n,
            });
        }
        let z2: Complex64 = z.iter().map(|c| c * c).sum();
        let scale = (z2 / 4.0).exp() * PI.powf(-(n as f64) / 2.0);
        let f = ProductIntegrand::new(n, 0.5, scale)
            .factor(XEvaluator::new(h, z)?, 0.0)?
            .factor(XEvaluator::new(psi, z)?, 0.5)?;
        let radius = default_radius(cfg, degree, z, tol);
        let pair = integrate_both(&f, cfg, radius, 10.0 * tol)?;
        let rhs = mapping_target(g, ell, z)?;
        let lhs = pair.panels;
        radii.push(radius);
        panel_nodes = pair.panel_nodes;
        hermite_nodes = pair.hermite_nodes;
        retried += pair.retried as usize;
        samples.push(MappingSample {
            z: z.clone(),
            lhs,
            rhs,
            rel_err: (lhs - rhs).norm() / rhs.norm(),
            strategy_gap: pair.gap,
        });
    }
    let num: Complex64 = samples.iter().map(|s| s.rhs.conj() * s.lhs).sum();
    let den: f64 = samples.iter().map(|s| s.rhs.norm_sqr()).sum();
    let constant = num / den;
    let ratios: Vec<Complex64> = samples.iter().map(|s| s.lhs / s.rhs).collect();
    let mean = ratios.iter().sum::<Complex64>() / ratios.len() as f64;
    let ratio_spread =
        (ratios.iter().map(|r| (r - mean).norm_sqr()).sum::<f64>() / ratios.len() as f64).sqrt();
    let pass = samples
        .iter()
        .all(|s| s.rel_err <= tol && s.strategy_gap <= 10.0 * tol)
        && (constant - 1.0).norm() <= tol
        && ratio_spread <= tol;
    Ok(MappingReport {
        case: Case {
            n,
            g,
            ell: ell.to_vec(),
        },
        samples,
        constant,
        ratio_spread,
        tolerance: tol,
        pass,
        grid_meta: GridMeta {
            schemes: ["GaussLegendrePanels", "GaussHermiteTensor"],
            config: cfg.clone(),
            box_radius: radii,
            panel_nodes,
            hermite_nodes,
            retried,
            prng: PRNG,
            seed: None,
        },
    })
}
