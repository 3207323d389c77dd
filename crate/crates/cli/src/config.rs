//! The simulation config file and its conversion into core types.

use std::path::{Path, PathBuf};

use actevo::cliques::{FamilyComponent, InvariantFamily};
use actevo::measure::parse_rational;
use actevo::{Analysis, Measure, Tuple};
use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

use crate::report::{FamilyEntry, Mode, Weights};

/// `{law_file, mode, Lambda_W | family, k_min, k_max, k, replications, seed, alpha, window}`.
/// Unset fields fall back to command-line flags, then to the defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub law_file: Option<PathBuf>,
    #[serde(default)]
    pub mode: Mode,
    #[serde(rename = "Lambda_W")]
    pub lambda_w: Option<Weights>,
    pub family: Option<Vec<FamilyEntry>>,
    pub k_min: Option<i64>,
    pub k_max: Option<i64>,
    pub k: Option<i64>,
    pub replications: Option<usize>,
    pub seed: Option<u64>,
    pub alpha: Option<f64>,
    pub window: Option<usize>,
}

impl RunConfig {
    /// Reads a config file; a relative `law_file` is taken relative to the config's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        let mut cfg: RunConfig = serde_json::from_str(&text).map_err(|e| {
            actevo::Error::Input(format!(
                "config {}, line {} column {}: {e}",
                path.display(),
                e.line(),
                e.column()
            ))
        })?;
        if let (Some(law), Some(dir)) = (&cfg.law_file, path.parent()) {
            if law.is_relative() {
                cfg.law_file = Some(dir.join(law));
            }
        }
        Ok(cfg)
    }
}

pub fn tuple_measure(w: &Weights, n: usize) -> actevo::Result<Measure<Tuple>> {
    let pairs = w
        .iter()
        .map(|(x, q)| {
            let t: Tuple = x.parse()?;
            let t = Tuple::new(&t.points().iter().map(|p| p + 1).collect::<Vec<_>>(), n)?;
            Ok((t, parse_rational(q)?))
        })
        .collect::<actevo::Result<Vec<_>>>()?;
    Measure::from_weights(pairs)
}

/// `Λ_W` from the config, or uniform on `W`.
pub fn lambda_w(an: &Analysis, w: Option<&Weights>) -> actevo::Result<Measure<Tuple>> {
    match w {
        Some(w) => tuple_measure(w, an.s.n()),
        None => Measure::uniform(an.cliques.w.iter().cloned()),
    }
}

pub fn family(an: &Analysis, entries: &[FamilyEntry]) -> actevo::Result<InvariantFamily> {
    let comps = entries
        .iter()
        .map(|e| {
            Ok(FamilyComponent {
                c: parse_rational(&e.c)?,
                lambda_w: e
                    .lambda_w
                    .as_ref()
                    .map(|w| tuple_measure(w, an.s.n()))
                    .transpose()?,
            })
        })
        .collect::<actevo::Result<Vec<_>>>()?;
    InvariantFamily::new(an, comps)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_family_config() {
        let json = r#"{
            "law_file": "law.json",
            "mode": "nonstationary",
            "family": [{"c": "1/2", "Lambda_W": {"(1,2,3,4,5,6)": "1"}}, {"c": "1/2", "Lambda_W": {"(1,2,3,4,5,6)": "1"}}, {"c": "0"}],
            "replications": 2000
        }"#;
        let cfg: RunConfig = serde_json::from_str(json).unwrap();
        assert_eq!(cfg.mode, Mode::Nonstationary);
        assert_eq!(cfg.family.as_ref().unwrap().len(), 3);
        assert_eq!(cfg.replications, Some(2000));
        assert!(serde_json::from_str::<RunConfig>(r#"{"replicas": 1}"#).is_err());
    }

    #[test]
    fn tuple_weights_are_checked() {
        let mut w = Weights::new();
        w.insert("(2,4,5)".into(), "1".into());
        assert!(tuple_measure(&w, 5).is_ok());
        assert!(tuple_measure(&w, 4).is_err());
        w.insert("(1,3,5)".into(), "1/2".into());
        assert!(tuple_measure(&w, 5).is_err());
    }
}
