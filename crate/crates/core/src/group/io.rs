//! Generator-set files.
//!
//! A file is either a bare JSON array of d x d matrices or an object
//! `{"symmetric": true, "generators": [...]}`. Entries are integers or
//! `"num/den"` strings. Bare arrays are symmetrized on load; an asserted
//! symmetric set is verified instead.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::genset::GenSet;
use super::intmat::IntMat;
use crate::error::{Error, Result};

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum GenFile {
    Bare(Vec<Vec<Vec<Value>>>),
    Tagged {
        #[serde(default)]
        symmetric: bool,
        generators: Vec<Vec<Vec<Value>>>,
    },
}

#[derive(Debug, Serialize)]
struct GenFileOut {
    symmetric: bool,
    generators: Vec<Vec<Vec<String>>>,
}

pub fn parse_generators(json: &str) -> Result<GenSet<IntMat>> {
    let file: GenFile = serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))?;
    let (symmetric, raw) = match file {
        GenFile::Bare(m) => (false, m),
        GenFile::Tagged { symmetric, generators } => (symmetric, generators),
    };
    let mats = raw.iter().map(|rows| parse_matrix(rows)).collect::<Result<Vec<_>>>()?;
    if let Some(d) = mats.first().map(|m| m.d()) {
        if mats.iter().any(|m| m.d() != d) {
            return Err(Error::Parse("generators of different dimensions".into()));
        }
    }
    if symmetric {
        GenSet::asserted_symmetric(mats)
    } else {
        GenSet::symmetrized(mats)
    }
}

pub fn load_generators(path: &std::path::Path) -> Result<GenSet<IntMat>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse_generators(&text)
}

/// Writes a generator set in the tagged form, entries as strings.
pub fn generators_to_json(gens: &GenSet<IntMat>) -> String {
    let out = GenFileOut {
        symmetric: true,
        generators: gens
            .members()
            .iter()
            .map(|m| {
                (0..m.d())
                    .map(|i| (0..m.d()).map(|j| m.get(i, j).to_string()).collect())
                    .collect()
            })
            .collect(),
    };
    serde_json::to_string(&out).expect("serializable")
}

fn parse_matrix(rows: &[Vec<Value>]) -> Result<IntMat> {
    let d = rows.len();
    if rows.iter().any(|r| r.len() != d) {
        return Err(Error::Parse("matrix is not square".into()));
    }
    let entries = rows.iter().flatten().map(parse_entry).collect::<Result<Vec<_>>>()?;
    IntMat::new(d, entries)
}

fn parse_entry(v: &Value) -> Result<BigRational> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(|i| BigRational::from_integer(i.into()))
            .ok_or_else(|| Error::Parse(format!("non-integer entry {n}"))),
        Value::String(s) => {
            let (num, den) = match s.split_once('/') {
                Some((n, d)) => (n.trim(), d.trim()),
                None => (s.trim(), "1"),
            };
            let num: BigInt = num.parse().map_err(|_| Error::Parse(format!("bad entry {s}")))?;
            let den: BigInt = den.parse().map_err(|_| Error::Parse(format!("bad entry {s}")))?;
            if den == BigInt::from(0) {
                return Err(Error::Parse(format!("zero denominator in {s}")));
            }
            Ok(BigRational::new(num, den))
        }
        other => Err(Error::Parse(format!("unsupported entry {other}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::sanov;

    #[test]
    fn bare_array_is_symmetrized() {
        let g = parse_generators("[[[1,2],[0,1]], [[1,0],[2,1]]]").unwrap();
        assert_eq!(g, sanov());
    }

    #[test]
    fn rational_entries() {
        let g = parse_generators(r#"[[["1","1/2"],[0,1]]]"#).unwrap();
        assert_eq!(g.len(), 2);
        assert!(!g.members()[0].is_integral());
    }

    #[test]
    fn asserted_symmetry_is_verified() {
        let err = parse_generators(r#"{"symmetric": true, "generators": [[[1,2],[0,1]]]}"#);
        assert_eq!(err, Err(Error::NotSymmetric));
        let ok = parse_generators(r#"{"symmetric": true, "generators": [[[1,2],[0,1]], [[1,-2],[0,1]]]}"#);
        assert_eq!(ok.unwrap().len(), 2);
    }

    #[test]
    fn determinant_checked() {
        assert_eq!(parse_generators("[[[2,0],[0,1]]]"), Err(Error::NotDeterminantOne));
    }

    #[test]
    fn round_trip() {
        let s = sanov();
        assert_eq!(parse_generators(&generators_to_json(&s)).unwrap(), s);
    }
}
