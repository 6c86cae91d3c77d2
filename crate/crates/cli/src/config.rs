//! Run parameters: command-line flags layered over an optional JSON config file.

use std::path::{Path, PathBuf};

use num_rational::BigRational;
use serde::Deserialize;

use cak_core::algebra::numbers::parse_decimal_rational;

pub const DEFAULT_SEED: u64 = 2024;
pub const DEFAULT_SAMPLES: usize = 8;

/// Every field a config file may set. Flags win over the file, the file over defaults.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct FileConfig {
    pub model: Option<String>,
    pub suite: Option<String>,
    pub n: Option<usize>,
    pub g: Option<String>,
    pub alpha: Option<String>,
    pub ell: Option<Vec<u32>>,
    pub tol: Option<f64>,
    pub grid_points: Option<usize>,
    pub box_radius: Option<f64>,
    pub z_seed: Option<u64>,
    pub samples: Option<usize>,
    pub alpha_steps: Option<Vec<f64>>,
    pub max_excitation: Option<u32>,
    pub omega: Option<f64>,
    pub omega_c: Option<f64>,
    pub count_degeneracy: Option<u32>,
    pub out: Option<PathBuf>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, String> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("invalid config {}: {e}", path.display()))
    }
}

pub fn parse_coupling(name: &str, s: &str) -> Result<BigRational, String> {
    parse_decimal_rational(s)
        .ok_or_else(|| format!("--{name} expects a number such as 2, 1/2 or 0.75, got {s:?}"))
}

pub fn parse_ell(s: &str) -> Result<Vec<u32>, String> {
    s.split(',')
        .map(|part| {
            part.trim()
                .parse::<u32>()
                .map_err(|_| format!("--ell expects non-negative integers like 0,2, got {s:?}"))
        })
        .collect()
}

pub fn parse_list(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|part| {
            part.trim()
                .parse::<f64>()
                .map_err(|_| format!("expected comma-separated numbers, got {s:?}"))
        })
        .collect()
}

/// Nondecreasing, one entry per particle; defaults to all zeros.
pub fn resolve_ell(n: usize, ell: Option<Vec<u32>>) -> Result<Vec<u32>, String> {
    let ell = ell.unwrap_or_else(|| vec![0; n]);
    if ell.len() != n {
        return Err(format!("--ell has {} entries but --n is {n}", ell.len()));
    }
    if ell.windows(2).any(|w| w[0] > w[1]) {
        return Err(format!("--ell must be nondecreasing, got {ell:?}"));
    }
    Ok(ell)
}

/// Worker count from `CAK_THREADS`, if set.
pub fn thread_cap() -> Result<Option<usize>, String> {
    match std::env::var("CAK_THREADS") {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(k) if k > 0 => Ok(Some(k)),
            _ => Err(format!("CAK_THREADS must be a positive integer, got {v:?}")),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parsing() {
        assert_eq!(parse_ell("0, 2").unwrap(), vec![0, 2]);
        assert!(parse_ell("0,-1").is_err());
        assert_eq!(
            parse_coupling("g", "0.5").unwrap(),
            BigRational::new(1.into(), 2.into())
        );
        assert!(resolve_ell(2, Some(vec![2, 0])).is_err());
        assert_eq!(resolve_ell(3, None).unwrap(), vec![0, 0, 0]);
    }

    #[test]
    fn config_rejects_unknown_keys() {
        assert!(serde_json::from_str::<FileConfig>(r#"{"n": 2, "bogus": 1}"#).is_err());
        let c: FileConfig = serde_json::from_str(r#"{"n": 3, "g": "1/2", "zSeed": 9}"#).unwrap();
        assert_eq!((c.n, c.z_seed), (Some(3), Some(9)));
    }
}
