//! Plain-text run manifest: enough metadata to re-execute a run exactly.
//!
//! One `key=value` pair per line. The experiment plan fields plus the seed
//! pin down every random draw, so feeding a manifest back to the simulator
//! reproduces the original records byte for byte.

use std::collections::BTreeMap;
use thiserror::Error;

use mzsim_core::trials::{ExperimentPlan, Mode};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ManifestError {
    #[error("line {line}: expected key=value")]
    Syntax { line: usize },
    #[error("duplicate key {key:?}")]
    Duplicate { key: String },
    #[error("unknown key {key:?}")]
    Unknown { key: String },
    #[error("missing key {key:?}")]
    Missing { key: &'static str },
    #[error("key {key:?}: cannot parse value {value:?}")]
    Value { key: &'static str, value: String },
}

/// Metadata written next to every simulation's outputs.
#[derive(Debug, Clone, PartialEq)]
pub struct RunManifest {
    pub plan: ExperimentPlan,
    pub tool: String,
    pub version: String,
    /// Unix timestamp of the run; informational only.
    pub created_unix: u64,
    /// Output file names, relative to the manifest's directory.
    pub records: String,
    pub counts: String,
    pub coins: Option<String>,
}

impl RunManifest {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("tool={}\n", self.tool));
        out.push_str(&format!("version={}\n", self.version));
        out.push_str(&format!("created_unix={}\n", self.created_unix));
        out.push_str(&format!("mode={}\n", self.plan.mode));
        out.push_str(&format!("phi_start={}\n", self.plan.phi_start));
        out.push_str(&format!("phi_step={}\n", self.plan.phi_step));
        out.push_str(&format!("settings={}\n", self.plan.n_settings));
        out.push_str(&format!("trials={}\n", self.plan.trials_per_setting));
        out.push_str(&format!("sigma={}\n", self.plan.sigma));
        out.push_str(&format!("seed={}\n", self.plan.seed));
        out.push_str(&format!("records={}\n", self.records));
        out.push_str(&format!("counts={}\n", self.counts));
        if let Some(coins) = &self.coins {
            out.push_str(&format!("coins={coins}\n"));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, ManifestError> {
        let mut pairs: BTreeMap<&str, &str> = BTreeMap::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) =
                line.split_once('=').ok_or(ManifestError::Syntax { line: idx + 1 })?;
            if pairs.insert(key, value).is_some() {
                return Err(ManifestError::Duplicate { key: key.to_string() });
            }
        }

        const KNOWN: [&str; 13] = [
            "tool", "version", "created_unix", "mode", "phi_start", "phi_step", "settings",
            "trials", "sigma", "seed", "records", "counts", "coins",
        ];
        if let Some(key) = pairs.keys().find(|k| !KNOWN.contains(*k)) {
            return Err(ManifestError::Unknown { key: key.to_string() });
        }

        let get = |key: &'static str| pairs.get(key).copied().ok_or(ManifestError::Missing { key });
        let parse_f64 = |key: &'static str| -> Result<f64, ManifestError> {
            let value = get(key)?;
            value.parse().map_err(|_| ManifestError::Value { key, value: value.to_string() })
        };
        let parse_u64 = |key: &'static str| -> Result<u64, ManifestError> {
            let value = get(key)?;
            value.parse().map_err(|_| ManifestError::Value { key, value: value.to_string() })
        };
        let parse_usize = |key: &'static str| -> Result<usize, ManifestError> {
            let value = get(key)?;
            value.parse().map_err(|_| ManifestError::Value { key, value: value.to_string() })
        };

        let mode_text = get("mode")?;
        let mode: Mode = mode_text
            .parse()
            .map_err(|_| ManifestError::Value { key: "mode", value: mode_text.to_string() })?;

        Ok(Self {
            plan: ExperimentPlan {
                mode,
                phi_start: parse_f64("phi_start")?,
                phi_step: parse_f64("phi_step")?,
                n_settings: parse_usize("settings")?,
                trials_per_setting: parse_usize("trials")?,
                sigma: parse_f64("sigma")?,
                seed: parse_u64("seed")?,
            },
            tool: get("tool")?.to_string(),
            version: get("version")?.to_string(),
            created_unix: parse_u64("created_unix")?,
            records: get("records")?.to_string(),
            counts: get("counts")?.to_string(),
            coins: pairs.get("coins").map(|s| s.to_string()),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> RunManifest {
        RunManifest {
            plan: ExperimentPlan {
                mode: Mode::RandomizedNoisy,
                phi_start: -0.25,
                phi_step: std::f64::consts::TAU / 32.0,
                n_settings: 33,
                trials_per_setting: 1000,
                sigma: 0.5,
                seed: 42,
            },
            tool: "mzsim".into(),
            version: "0.1.0".into(),
            created_unix: 1_755_000_000,
            records: "records.csv".into(),
            counts: "counts.csv".into(),
            coins: Some("coins.txt".into()),
        }
    }

    #[test]
    fn round_trips_including_exact_floats() {
        let m = sample();
        let parsed = RunManifest::from_text(&m.to_text()).unwrap();
        assert_eq!(parsed, m);
        // The step is an irrational-looking float; equality above is bitwise.
        assert_eq!(parsed.plan.phi_step, std::f64::consts::TAU / 32.0);
    }

    #[test]
    fn coins_key_is_optional() {
        let mut m = sample();
        m.coins = None;
        let text = m.to_text();
        assert!(!text.contains("coins="));
        assert_eq!(RunManifest::from_text(&text).unwrap(), m);
    }

    #[test]
    fn rejects_malformed_input() {
        assert_eq!(
            RunManifest::from_text("tool mzsim\n"),
            Err(ManifestError::Syntax { line: 1 })
        );
        assert_eq!(
            RunManifest::from_text("tool=a\ntool=b\n"),
            Err(ManifestError::Duplicate { key: "tool".into() })
        );
        assert_eq!(
            RunManifest::from_text("flavor=vanilla\n"),
            Err(ManifestError::Unknown { key: "flavor".into() })
        );
        let text = sample().to_text().replace("seed=42\n", "");
        assert_eq!(RunManifest::from_text(&text), Err(ManifestError::Missing { key: "seed" }));
        let text = sample().to_text().replace("seed=42", "seed=forty-two");
        assert!(matches!(
            RunManifest::from_text(&text),
            Err(ManifestError::Value { key: "seed", .. })
        ));
        let text = sample().to_text().replace("mode=randomized-noisy", "mode=chaotic");
        assert!(matches!(
            RunManifest::from_text(&text),
            Err(ManifestError::Value { key: "mode", .. })
        ));
    }
}
