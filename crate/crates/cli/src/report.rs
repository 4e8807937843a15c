//! Run reports and the content-addressed cache that stores them.

use std::io::Write;
use std::path::{Path, PathBuf};

use hhwb_core::decomposition::{DecompositionReport, Verdict};
use hhwb_core::dgcore::GradedDims;
use hhwb_core::hochschild::{Certificate, HomologySummary};
use hhwb_core::qlinalg::{Arithmetic, RankMode};
use serde::{Deserialize, Serialize};

use crate::input::{sha256_hex, InputInfo};

pub const TOOL: &str = "hhwb";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Options that determine the result; part of the cache key.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Params {
    pub max_level: usize,
    pub normalized: bool,
    pub mode: RankMode,
    /// Homological degrees, inclusive.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degrees: Option<(i64, i64)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub twist: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    pub allow_truncated: bool,
    pub strict: bool,
}

/// Options that only say where things go.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Destinations {
    pub out: Option<PathBuf>,
    pub csv: Option<PathBuf>,
    pub cache_dir: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunOptions {
    pub params: Params,
    pub destinations: Destinations,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Row {
    /// Homological degree.
    pub degree: i64,
    pub dim: u64,
    pub certificate: Certificate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Validation {
        valid: bool,
        diagnostics: Vec<String>,
    },
    Homology {
        twist: String,
        max_level: usize,
        rows: Vec<Row>,
        summary: HomologySummary,
        warnings: Vec<String>,
    },
    Decomposition(DecompositionReport),
    Series {
        input_dims: GradedDims,
        n: usize,
        dims: GradedDims,
        truncated: bool,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateCounts {
    pub exact: usize,
    pub heuristic: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub arithmetic: Arithmetic,
    pub certificates: CertificateCounts,
    pub primes: Vec<u64>,
    pub seeds: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timings {
    pub wall_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<InputInfo>,
    pub options: Params,
    pub result: Outcome,
    pub provenance: Provenance,
    pub timings: Timings,
}

fn count(certs: impl Iterator<Item = Certificate>) -> CertificateCounts {
    let mut c = CertificateCounts::default();
    for x in certs {
        match x {
            Certificate::Exact => c.exact += 1,
            Certificate::Heuristic => c.heuristic += 1,
        }
    }
    c
}

impl Provenance {
    pub fn of(outcome: &Outcome, mode: &RankMode) -> Provenance {
        let primes = match mode {
            RankMode::Exact => Vec::new(),
            RankMode::Modular(ps) => ps.clone(),
        };
        let (arithmetic, certificates) = match outcome {
            Outcome::Validation { .. } | Outcome::Series { .. } => (Arithmetic::Exact, CertificateCounts::default()),
            Outcome::Homology { summary, .. } => {
                (summary.arithmetic(), count(summary.degrees.values().map(|d| d.certificate)))
            }
            Outcome::Decomposition(r) => {
                let mut a = r.base_homology.arithmetic();
                for s in &r.summands {
                    a = a.merge(&s.arithmetic);
                }
                (a, count(r.summands.iter().flat_map(|s| s.degrees.values().map(|d| d.certificate))))
            }
        };
        Provenance { arithmetic, certificates, primes, seeds: Vec::new() }
    }
}

impl Report {
    /// 0 ok, 1 mismatch or invalid input, 3 inconclusive.
    pub fn exit_code(&self) -> i32 {
        match &self.result {
            Outcome::Validation { valid, .. } => i32::from(!valid),
            Outcome::Homology { .. } | Outcome::Series { .. } => 0,
            Outcome::Decomposition(r) => {
                if r.any_mismatch() {
                    1
                } else if r.verdicts.values().any(|v| v.verdict == Verdict::Heuristic) {
                    3
                } else {
                    0
                }
            }
        }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut text = serde_json::to_vec_pretty(self).expect("report serializes");
        text.push(b'\n');
        text
    }

    /// `(degree, …)` rows for spreadsheets.
    pub fn csv_rows(&self) -> (Vec<&'static str>, Vec<Vec<String>>) {
        match &self.result {
            Outcome::Homology { rows, .. } => (
                vec!["degree", "dim", "certificate"],
                rows.iter()
                    .map(|r| vec![r.degree.to_string(), r.dim.to_string(), format!("{:?}", r.certificate).to_lowercase()])
                    .collect(),
            ),
            Outcome::Decomposition(r) => (
                vec!["degree", "lhs", "rhs", "verdict"],
                r.verdicts
                    .values()
                    .rev()
                    .map(|v| {
                        vec![
                            v.homological.to_string(),
                            v.lhs.to_string(),
                            v.rhs.to_string(),
                            format!("{:?}", v.verdict).to_lowercase(),
                        ]
                    })
                    .collect(),
            ),
            Outcome::Series { dims, .. } => (
                vec!["degree", "dim"],
                dims.iter().collect::<Vec<_>>().into_iter().rev().map(|(k, d)| vec![(-k).to_string(), d.to_string()]).collect(),
            ),
            Outcome::Validation { diagnostics, .. } => {
                (vec!["diagnostic"], diagnostics.iter().map(|d| vec![d.clone()]).collect())
            }
        }
    }
}

pub fn write_csv(report: &Report, path: &Path) -> std::io::Result<()> {
    let (header, rows) = report.csv_rows();
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(&header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    w.flush()
}

/// Key of a run: command, input digest and result-determining options.
pub fn cache_key(command: &str, input: Option<&InputInfo>, params: &Params) -> String {
    let digest = input.map(|i| i.sha256.as_str()).unwrap_or("");
    let payload = serde_json::to_string(&(TOOL, VERSION, command, digest, params)).expect("serializable key");
    sha256_hex(payload.as_bytes())
}

pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: PathBuf) -> Cache {
        Cache { dir }
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    pub fn get(&self, key: &str) -> Option<Vec<u8>> {
        std::fs::read(self.path(key)).ok()
    }

    /// Write-then-rename so readers never see a partial file.
    pub fn put(&self, key: &str, bytes: &[u8]) -> std::io::Result<()> {
        std::fs::create_dir_all(&self.dir)?;
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        tmp.write_all(bytes)?;
        tmp.as_file().sync_all()?;
        tmp.persist(self.path(key)).map_err(|e| e.error)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> Params {
        Params {
            max_level: 5,
            normalized: true,
            mode: RankMode::Exact,
            degrees: Some((0, 2)),
            twist: None,
            n: None,
            allow_truncated: false,
            strict: false,
        }
    }

    #[test]
    fn cache_round_trip_is_byte_identical() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path().join("nested"));
        let key = cache_key("compute", None, &params());
        assert!(cache.get(&key).is_none());
        cache.put(&key, b"{\"a\": 1}\n").unwrap();
        assert_eq!(cache.get(&key).unwrap(), b"{\"a\": 1}\n");
        cache.put(&key, b"{\"a\": 2}\n").unwrap();
        assert_eq!(cache.get(&key).unwrap(), b"{\"a\": 2}\n");
    }

    #[test]
    fn keys_depend_on_every_param() {
        let base = cache_key("compute", None, &params());
        let mut p = params();
        p.normalized = false;
        assert_ne!(cache_key("compute", None, &p), base);
        let mut p = params();
        p.degrees = Some((0, 3));
        assert_ne!(cache_key("compute", None, &p), base);
        assert_ne!(cache_key("decompose", None, &params()), base);
        let info = InputInfo { source: "x".into(), sha256: "00".into() };
        assert_ne!(cache_key("compute", Some(&info), &params()), base);
        assert_eq!(cache_key("compute", None, &params()), base);
    }
}
