//! `cak`: build states, run verification suites and tabulate spectra. Machine output is
//! JSON on stdout (or `--out`); a short summary goes to stderr.

mod config;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde::Serialize;
use serde_json::{json, Value};

use cak_core::algebra::numbers::{format_rational, is_integer, rational_to_f64};
use cak_core::anyon::{
    count_degeneracy, lll_state, spectrum_checks, spectrum_table, SpectrumParams,
};
use cak_core::calogero::build_state;
use cak_core::kernel_map::mapping::{sample_z, verify_mapping, PRNG};
use cak_core::kernel_map::{
    boundary_term_check, intertwiner_constant_check, intertwining::default_test_expressions,
    intertwining_relation_check, WedgeConfig,
};
use cak_core::scattering::{build_scattering_symbolic, check_eigen, check_swap_symmetry};
use cak_core::Error;

use config::{
    parse_coupling, parse_ell, parse_list, resolve_ell, thread_cap, FileConfig, DEFAULT_SAMPLES,
    DEFAULT_SEED,
};

#[derive(Parser)]
#[command(
    name = "cak",
    version,
    about = "Calogero eigenstates, scattering states and their kernel map onto anyons"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a Calogero eigenstate or a linear anyon state and print it as JSON.
    BuildState(BuildArgs),
    /// Run a verification suite; exit status 1 if any check fails.
    Verify(VerifyArgs),
    /// Energy table of linear anyon states, or a single degeneracy count.
    Spectrum(SpectrumArgs),
}

#[derive(Args)]
struct Shared {
    /// JSON file with defaults for any flag (camelCase keys).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write JSON here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Model {
    Calogero,
    Anyon,
}

#[derive(Args)]
struct BuildArgs {
    #[command(flatten)]
    shared: Shared,
    #[arg(long, value_enum)]
    model: Option<Model>,
    /// Calogero coupling (integer).
    #[arg(long)]
    g: Option<String>,
    /// Statistics parameter of the anyon state.
    #[arg(long)]
    alpha: Option<String>,
    /// Nondecreasing excitation labels, e.g. 0,2.
    #[arg(long)]
    ell: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Map,
    Eigen,
    Intertwine,
    Boundary,
    Spectrum,
    All,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    shared: Shared,
    #[arg(long, value_enum)]
    suite: Option<Suite>,
    #[arg(long)]
    g: Option<String>,
    #[arg(long)]
    ell: Option<String>,
    /// Tolerance for the mapping suite (default 1e-6 for n ≤ 2, 1e-3 for n = 3).
    #[arg(long)]
    tol: Option<f64>,
    /// Gauss–Hermite points per axis of the full-space grid.
    #[arg(long)]
    grid_points: Option<usize>,
    /// Box radius of the wedge panel grid (derived from the integrand when absent).
    #[arg(long)]
    box_radius: Option<f64>,
    #[arg(long)]
    z_seed: Option<u64>,
    /// Number of z samples.
    #[arg(long)]
    samples: Option<usize>,
    /// Highest total excitation for the spectrum suite.
    #[arg(long)]
    max_excitation: Option<u32>,
}

#[derive(Args)]
struct SpectrumArgs {
    #[command(flatten)]
    shared: Shared,
    /// Comma-separated α values.
    #[arg(long)]
    alpha_steps: Option<String>,
    #[arg(long)]
    max_excitation: Option<u32>,
    #[arg(long)]
    omega: Option<f64>,
    #[arg(long)]
    omega_c: Option<f64>,
    /// Print only the number of states at this total excitation.
    #[arg(long)]
    count_degeneracy: Option<u32>,
}

/// Failure with its exit status.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BudgetExceeded { .. } => 3,
            Error::NonConvergence(_)
            | Error::Quadrature(_)
            | Error::Singular { .. }
            | Error::NotDivisible { .. }
            | Error::OutsideRing(_) => 1,
            _ => 2,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

/// JSON document plus whether every check passed.
struct Outcome {
    json: Value,
    pass: bool,
    summary: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    if let Some(k) = thread_cap().map_err(Failure::usage)? {
        rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
            .map_err(|e| Failure::usage(e.to_string()))?;
    }
    let start = Instant::now();
    let (outcome, out) = match cli.command {
        Command::BuildState(a) => {
            let file = FileConfig::load(a.shared.config.as_deref()).map_err(Failure::usage)?;
            let out = a.shared.out.clone().or(file.out.clone());
            (build(a, file)?, out)
        }
        Command::Verify(a) => {
            let file = FileConfig::load(a.shared.config.as_deref()).map_err(Failure::usage)?;
            let out = a.shared.out.clone().or(file.out.clone());
            (verify(a, file)?, out)
        }
        Command::Spectrum(a) => {
            let file = FileConfig::load(a.shared.config.as_deref()).map_err(Failure::usage)?;
            let out = a.shared.out.clone().or(file.out.clone());
            (spectrum(a, file)?, out)
        }
    };
    let text = serde_json::to_string_pretty(&outcome.json).expect("reports serialize") + "\n";
    match out {
        Some(path) => std::fs::write(&path, text).map_err(|e| Failure {
            code: 2,
            message: format!("cannot write {}: {e}", path.display()),
        })?,
        None => print!("{text}"),
    }
    eprintln!("{} ({:.2?})", outcome.summary, start.elapsed());
    Ok(if outcome.pass { 0 } else { 1 })
}

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn particle_count(shared: &Shared, file: &FileConfig) -> Result<usize, Failure> {
    let n = shared.n.or(file.n).unwrap_or(2);
    if n == 0 || n > cak_core::algebra::MAX_N {
        return Err(Failure::usage(format!(
            "--n must be in 1..={}, got {n}",
            cak_core::algebra::MAX_N
        )));
    }
    Ok(n)
}

fn coupling(
    flag: Option<String>,
    file: Option<String>,
    name: &str,
    default: &str,
) -> Result<BigRational, Failure> {
    let s = flag.or(file).unwrap_or_else(|| default.to_string());
    parse_coupling(name, &s).map_err(Failure::usage)
}

fn integer_coupling(g: &BigRational) -> Result<u32, Failure> {
    if !is_integer(g) || rational_to_f64(g) < 0.0 || rational_to_f64(g) > 16.0 {
        return Err(Failure::usage(format!(
            "this command needs an integer coupling in 0..=16, got {}",
            format_rational(g)
        )));
    }
    Ok(rational_to_f64(g) as u32)
}

fn labels(n: usize, flag: Option<String>, file: Option<Vec<u32>>) -> Result<Vec<u32>, Failure> {
    let ell = match flag {
        Some(s) => Some(parse_ell(&s).map_err(Failure::usage)?),
        None => file,
    };
    resolve_ell(n, ell).map_err(Failure::usage)
}

fn build(a: BuildArgs, file: FileConfig) -> Result<Outcome, Failure> {
    let n = particle_count(&a.shared, &file)?;
    let ell = labels(n, a.ell, file.ell.clone())?;
    let model = match (a.model, file.model.as_deref()) {
        (Some(m), _) => m,
        (None, None | Some("calogero")) => Model::Calogero,
        (None, Some("anyon")) => Model::Anyon,
        (None, Some(other)) => return Err(Failure::usage(format!("unknown model {other:?}"))),
    };
    match model {
        Model::Calogero => {
            let g = coupling(a.g, file.g, "g", "1")?;
            let s = build_state(n, &g, &ell)?;
            let summary = format!(
                "calogero n={n} g={} ell={ell:?}: {} terms, energy {}",
                format_rational(&g),
                s.body.len(),
                format_rational(&s.energy)
            );
            Ok(Outcome {
                json: to_json(&s),
                pass: true,
                summary,
            })
        }
        Model::Anyon => {
            let alpha = coupling(a.alpha, file.alpha, "alpha", "0")?;
            let s = lll_state(n, &alpha, &ell)?;
            let summary = format!(
                "anyon n={n} alpha={} ell={ell:?}: {} terms",
                format_rational(&alpha),
                s.body.len()
            );
            Ok(Outcome {
                json: to_json(&s),
                pass: true,
                summary,
            })
        }
    }
}

struct VerifyParams {
    n: usize,
    g: BigRational,
    ell: Vec<u32>,
    tol: Option<f64>,
    cfg: WedgeConfig,
    seed: u64,
    samples: usize,
    max_excitation: u32,
}

fn verify(a: VerifyArgs, file: FileConfig) -> Result<Outcome, Failure> {
    let suite = match (a.suite, file.suite.as_deref()) {
        (Some(s), _) => s,
        (None, None) => Suite::All,
        (None, Some(s)) => {
            Suite::from_str(s, true).map_err(|_| Failure::usage(format!("unknown suite {s:?}")))?
        }
    };
    let n = particle_count(&a.shared, &file)?;
    let mut cfg = WedgeConfig::for_dim(n);
    if let Some(p) = a.grid_points.or(file.grid_points) {
        if p < 2 {
            return Err(Failure::usage("--grid-points must be at least 2"));
        }
        cfg.hermite_points = p;
    }
    if let Some(r) = a.box_radius.or(file.box_radius) {
        if !(r > 0.0) {
            return Err(Failure::usage("--box-radius must be positive"));
        }
        cfg.box_radius = Some(r);
    }
    let tol = a.tol.or(file.tol);
    if tol.is_some_and(|t| !(t > 0.0)) {
        return Err(Failure::usage("--tol must be positive"));
    }
    let p = VerifyParams {
        n,
        g: coupling(a.g, file.g.clone(), "g", "1")?,
        ell: labels(n, a.ell, file.ell.clone())?,
        tol,
        cfg,
        seed: a.z_seed.or(file.z_seed).unwrap_or(DEFAULT_SEED),
        samples: a.samples.or(file.samples).unwrap_or(DEFAULT_SAMPLES).max(1),
        max_excitation: a.max_excitation.or(file.max_excitation).unwrap_or(10),
    };
    match suite {
        Suite::Map => suite_map(&p),
        Suite::Eigen => suite_eigen(&p),
        Suite::Intertwine => suite_intertwine(&p),
        Suite::Boundary => suite_boundary(&p),
        Suite::Spectrum => suite_spectrum(&p),
        Suite::All => {
            let parts = [
                ("map", suite_map(&p)?),
                ("eigen", suite_eigen(&p)?),
                ("intertwine", suite_intertwine(&p)?),
                ("boundary", suite_boundary(&p)?),
                ("spectrum", suite_spectrum(&p)?),
            ];
            let pass = parts.iter().all(|(_, o)| o.pass);
            let summary = parts
                .iter()
                .map(|(_, o)| o.summary.as_str())
                .collect::<Vec<_>>()
                .join("\n");
            let mut json = serde_json::Map::new();
            json.insert("suite".into(), json!("all"));
            json.insert("pass".into(), json!(pass));
            for (name, o) in parts {
                json.insert(name.into(), o.json);
            }
            Ok(Outcome {
                json: Value::Object(json),
                pass,
                summary,
            })
        }
    }
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "FAIL"
    }
}

fn suite_map(p: &VerifyParams) -> Result<Outcome, Failure> {
    if p.n > 3 {
        return Err(Failure::usage(format!(
            "mapping integrals support n <= 3, got {}",
            p.n
        )));
    }
    let g = integer_coupling(&p.g)?;
    let tol = p.tol.unwrap_or(if p.n <= 2 { 1e-6 } else { 1e-3 });
    let zs = sample_z(p.n, p.samples, p.seed);
    let mut report = verify_mapping(p.n, g, &p.ell, &zs, &p.cfg, tol)?;
    report.grid_meta.seed = Some(p.seed);
    let worst = report.samples.iter().map(|s| s.rel_err).fold(0.0, f64::max);
    let summary = format!(
        "map n={} g={g} ell={:?}: {} (max rel err {worst:.2e}, tol {tol:.1e}, {} z samples, {PRNG} seed {})",
        p.n,
        p.ell,
        verdict(report.pass),
        report.samples.len(),
        p.seed
    );
    Ok(Outcome {
        pass: report.pass,
        json: to_json(&report),
        summary,
    })
}

fn suite_eigen(p: &VerifyParams) -> Result<Outcome, Failure> {
    let g = integer_coupling(&p.g)?;
    let h = build_scattering_symbolic(p.n, g)?;
    let checks = vec![check_eigen(&h)?, check_swap_symmetry(&h)?];
    let pass = checks.iter().all(|c| c.pass);
    let summary = format!(
        "eigen n={} g={g}: {} ({} terms in h_g)",
        p.n,
        verdict(pass),
        h.body.len()
    );
    Ok(Outcome {
        json: json!({ "suite": "eigen", "n": p.n, "g": g, "pass": pass, "checks": checks }),
        pass,
        summary,
    })
}

fn suite_intertwine(p: &VerifyParams) -> Result<Outcome, Failure> {
    let g = integer_coupling(&p.g)?;
    let constant = intertwiner_constant_check(p.n, g)?;
    let relation = intertwining_relation_check(p.n, g, &default_test_expressions(p.n)?)?;
    let pass = constant.pass && relation.iter().all(|c| c.pass);
    let summary = format!(
        "intertwine n={} g={g}: {} (constant {})",
        p.n,
        verdict(pass),
        constant.constant
    );
    Ok(Outcome {
        json: json!({ "suite": "intertwine", "n": p.n, "g": g, "pass": pass, "constant": constant, "relation": relation }),
        pass,
        summary,
    })
}

fn suite_boundary(p: &VerifyParams) -> Result<Outcome, Failure> {
    let ell = p.ell.last().copied().unwrap_or(0).max(1);
    let report = boundary_term_check(&p.g, ell, 1.0)?;
    let combined = report
        .fits
        .iter()
        .find(|f| f.name == "combined")
        .map(|f| f.fitted)
        .unwrap_or(f64::NAN);
    let summary = format!(
        "boundary g={} ell={ell}: {} (combined exponent {combined:.3}, predicted {:.3})",
        format_rational(&p.g),
        verdict(report.pass),
        2.0 * report.g + 1.0
    );
    Ok(Outcome {
        pass: report.pass,
        json: json!({ "suite": "boundary", "pass": report.pass, "report": report }),
        summary,
    })
}

fn suite_spectrum(p: &VerifyParams) -> Result<Outcome, Failure> {
    let checks = spectrum_checks(p.n, p.max_excitation)?;
    let pass = checks.iter().all(|c| c.pass);
    let summary = format!(
        "spectrum n={} up to level {}: {}",
        p.n,
        p.max_excitation,
        verdict(pass)
    );
    Ok(Outcome {
        json: json!({ "suite": "spectrum", "n": p.n, "pass": pass, "checks": checks }),
        pass,
        summary,
    })
}

fn spectrum(a: SpectrumArgs, file: FileConfig) -> Result<Outcome, Failure> {
    let n = particle_count(&a.shared, &file)?;
    if let Some(level) = a.count_degeneracy.or(file.count_degeneracy) {
        let count = count_degeneracy(n, level);
        return Ok(Outcome {
            json: json!({ "n": n, "level": level, "degeneracy": count }),
            pass: true,
            summary: format!("degeneracy {count}"),
        });
    }
    let alphas = match a.alpha_steps {
        Some(s) => parse_list(&s).map_err(Failure::usage)?,
        None => file
            .alpha_steps
            .clone()
            .unwrap_or_else(|| vec![0.0, 0.5, 1.0]),
    };
    if alphas.iter().any(|v| !v.is_finite()) {
        return Err(Failure::usage("--alpha-steps must be finite"));
    }
    let max_excitation = a.max_excitation.or(file.max_excitation).unwrap_or(2);
    let params = SpectrumParams::new(
        a.omega.or(file.omega).unwrap_or(1.0),
        a.omega_c.or(file.omega_c).unwrap_or(0.0),
    )?;
    let rows = spectrum_table(n, &alphas, max_excitation, &params);
    let degeneracy: Vec<Value> = (0..=max_excitation)
        .map(|t| json!({ "level": t, "count": count_degeneracy(n, t) }))
        .collect();
    let summary = format!(
        "spectrum n={n}: {} rows over {} alpha values",
        rows.len(),
        alphas.len()
    );
    Ok(Outcome {
        json: json!({
            "n": n,
            "omega": params.omega,
            "omegaC": params.omega_c,
            "omegaT": params.omega_t(),
            "rows": rows,
            "degeneracy": degeneracy,
        }),
        pass: true,
        summary,
    })
}
