//! Deterministic CSV/JSON emission and the run manifest.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// 17 significant digits, enough to round-trip any f64.
pub fn fmt_f64(x: f64) -> Result<String> {
    if !x.is_finite() {
        return Err(Error::Verification(format!("non-finite value {x} in CSV output")));
    }
    Ok(format!("{x:.16e}"))
}

/// A named output file held in memory until the run succeeds.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputFile {
    pub name: String,
    pub bytes: Vec<u8>,
}

impl OutputFile {
    pub fn json<T: Serialize>(name: &str, value: &T) -> Result<Self> {
        let mut bytes = serde_json::to_vec_pretty(value).map_err(|e| Error::Parse(e.to_string()))?;
        bytes.push(b'\n');
        Ok(Self {
            name: name.into(),
            bytes,
        })
    }

    pub fn csv(name: &str, header: &[&str], rows: &[Vec<String>]) -> Result<Self> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Parse(e.to_string());
        w.write_record(header).map_err(io)?;
        for r in rows {
            w.write_record(r).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
        Ok(Self {
            name: name.into(),
            bytes,
        })
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageTiming {
    pub stage: String,
    pub millis: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FileDigest {
    pub file: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub config_hash: String,
    pub version: String,
    pub wall_millis: f64,
    pub stages: Vec<StageTiming>,
    pub outputs: Vec<FileDigest>,
}

pub const MANIFEST_FILE: &str = "manifest.json";

impl RunManifest {
    pub fn load(dir: &Path) -> Result<Self> {
        let path = dir.join(MANIFEST_FILE);
        let text = std::fs::read_to_string(&path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Files whose digest no longer matches, with the reason.
    pub fn verify(&self, dir: &Path) -> Vec<(String, String)> {
        self.outputs
            .iter()
            .filter_map(|f| match std::fs::read(dir.join(&f.file)) {
                Ok(bytes) if sha256_hex(&bytes) == f.sha256 => None,
                Ok(_) => Some((f.file.clone(), "digest mismatch".into())),
                Err(e) => Some((f.file.clone(), e.to_string())),
            })
            .collect()
    }
}

/// Writes the files and returns their digests.
pub fn write_files(dir: &Path, files: &[OutputFile]) -> Result<Vec<FileDigest>> {
    std::fs::create_dir_all(dir).map_err(|e| Error::Parse(format!("{}: {e}", dir.display())))?;
    files
        .iter()
        .map(|f| {
            std::fs::write(dir.join(&f.name), &f.bytes).map_err(|e| Error::Parse(format!("{}: {e}", f.name)))?;
            Ok(FileDigest {
                file: f.name.clone(),
                sha256: sha256_hex(&f.bytes),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for x in [1.0, 0.1, -2.5e-300, std::f64::consts::PI, f64::MAX, 5e-324] {
            let s = fmt_f64(x).unwrap();
            assert_eq!(s.parse::<f64>().unwrap(), x);
        }
        assert_eq!(fmt_f64(1.0).unwrap(), "1.0000000000000000e0");
        assert!(fmt_f64(f64::NAN).is_err());
        assert!(fmt_f64(f64::INFINITY).is_err());
    }

    #[test]
    fn manifest_detects_tampering() {
        let dir = tempfile::tempdir().unwrap();
        let files = vec![OutputFile::csv("a.csv", &["x"], &[vec!["1".into()]]).unwrap()];
        let outputs = write_files(dir.path(), &files).unwrap();
        let m = RunManifest {
            command: "gap".into(),
            config_hash: String::new(),
            version: "0".into(),
            wall_millis: 0.0,
            stages: vec![],
            outputs,
        };
        assert!(m.verify(dir.path()).is_empty());
        std::fs::write(dir.path().join("a.csv"), "y\n").unwrap();
        assert_eq!(m.verify(dir.path()).len(), 1);
    }
}
