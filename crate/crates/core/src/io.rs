//! JSON formats for fans, morphisms and divisors.
//!
//! ```json
//! {"rank": 2, "rays": [[1,0],[0,1]], "max_cones": [[0,1]]}
//! ```
//!
//! Fans may carry an extra `"general_cones"` list for non-simplicial cones.
//! A morphism is `{"matrix": [[...]], "source": <fan>, "target": <fan>}` where
//! each fan is inline or a path relative to the morphism file. A divisor is
//! `{"coeffs": {"2": "1/2", "0": 3}}`; absent rays have coefficient zero.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::fan::{Cone, Fan, FanMorphism};
use crate::lattice::{IntMatrix, LatticeVector};
use crate::positivity::TorusDivisor;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FanFile {
    pub rank: usize,
    pub rays: Vec<Vec<i64>>,
    pub max_cones: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub general_cones: Vec<Vec<usize>>,
}

impl FanFile {
    pub fn from_fan(fan: &Fan) -> Result<Self> {
        Ok(FanFile {
            rank: fan.rank(),
            rays: fan.rays().iter().map(LatticeVector::to_i64).collect::<Result<_>>()?,
            max_cones: fan.max_cones().iter().map(|c| c.rays().to_vec()).collect(),
            general_cones: fan.general_cones().iter().map(|c| c.rays().to_vec()).collect(),
        })
    }

    /// Checks shapes and indices; geometric validity is left to `validate_fan`.
    pub fn to_fan(&self) -> Result<Fan> {
        for r in &self.rays {
            if r.len() != self.rank {
                return Err(Error::DimensionMismatch {
                    expected: self.rank,
                    found: r.len(),
                });
            }
        }
        let count = self.rays.len();
        for c in self.max_cones.iter().chain(&self.general_cones) {
            if let Some(&index) = c.iter().find(|&&i| i >= count) {
                return Err(Error::RayOutOfRange { index, count });
            }
        }
        let cone = |c: &Vec<usize>| Cone::new(c.clone());
        Ok(Fan::with_general_cones(
            self.rank,
            self.rays.iter().map(|r| LatticeVector::from_i64(r)).collect(),
            self.max_cones.iter().map(cone).collect(),
            self.general_cones.iter().map(cone).collect(),
        ))
    }
}

fn parse_err(e: impl std::fmt::Display) -> Error {
    Error::Parse(e.to_string())
}

pub fn parse_fan(text: &str) -> Result<Fan> {
    let file: FanFile = serde_json::from_str(text).map_err(parse_err)?;
    file.to_fan()
}

/// Compact single-line JSON.
pub fn fan_to_json(fan: &Fan) -> Result<String> {
    serde_json::to_string(&FanFile::from_fan(fan)?).map_err(parse_err)
}

pub fn read_fan(path: &Path) -> Result<Fan> {
    parse_fan(&read(path)?)
}

pub fn write_fan(path: &Path, fan: &Fan) -> Result<()> {
    let mut text = fan_to_json(fan)?;
    text.push('\n');
    fs::write(path, text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

pub fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FanRef {
    Inline(FanFile),
    Path(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismFile {
    /// Rows are target coordinates; an empty list is the map to the rank-0 lattice.
    pub matrix: Vec<Vec<i64>>,
    pub source: FanRef,
    pub target: FanRef,
}

impl MorphismFile {
    pub fn from_morphism(m: &FanMorphism) -> Result<Self> {
        let matrix = (0..m.matrix().rows())
            .map(|i| {
                LatticeVector::new(m.matrix().row(i).to_vec()).to_i64()
            })
            .collect::<Result<_>>()?;
        Ok(MorphismFile {
            matrix,
            source: FanRef::Inline(FanFile::from_fan(m.source())?),
            target: FanRef::Inline(FanFile::from_fan(m.target())?),
        })
    }
}

fn resolve(r: &FanRef, base: Option<&Path>) -> Result<Fan> {
    match r {
        FanRef::Inline(f) => f.to_fan(),
        FanRef::Path(p) => {
            let path = match base {
                Some(dir) => dir.join(p),
                None => PathBuf::from(p),
            };
            read_fan(&path)
        }
    }
}

/// Parses a morphism; fan paths are resolved against `base`.
pub fn parse_morphism(text: &str, base: Option<&Path>) -> Result<FanMorphism> {
    let file: MorphismFile = serde_json::from_str(text).map_err(parse_err)?;
    let source = resolve(&file.source, base)?;
    let target = resolve(&file.target, base)?;
    let rows: Vec<Vec<BigInt>> = file
        .matrix
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    if let Some(r) = rows.iter().find(|r| r.len() != source.rank()) {
        return Err(Error::ShapeMismatch(format!(
            "matrix row has {} entries, source rank is {}",
            r.len(),
            source.rank()
        )));
    }
    let matrix = IntMatrix::from_rows(&rows, source.rank())?;
    FanMorphism::new(matrix, source, target)
}

pub fn read_morphism(path: &Path) -> Result<FanMorphism> {
    parse_morphism(&read(path)?, path.parent())
}

pub fn morphism_to_json(m: &FanMorphism) -> Result<String> {
    serde_json::to_string(&MorphismFile::from_morphism(m)?).map_err(parse_err)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
enum Coefficient {
    Int(i64),
    Text(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DivisorFile {
    coeffs: BTreeMap<String, Coefficient>,
}

/// Parses a divisor for a fan with `rays` rays.
pub fn parse_divisor(text: &str, rays: usize) -> Result<TorusDivisor> {
    let file: DivisorFile = serde_json::from_str(text).map_err(parse_err)?;
    let mut d = vec![BigRational::from_integer(BigInt::from(0)); rays];
    for (key, value) in &file.coeffs {
        let index: usize = key
            .parse()
            .map_err(|_| Error::Parse(format!("ray index {key:?} is not a number")))?;
        if index >= rays {
            return Err(Error::RayOutOfRange { index, count: rays });
        }
        d[index] = match value {
            Coefficient::Int(x) => BigRational::from_integer(BigInt::from(*x)),
            Coefficient::Text(s) => BigRational::from_str(s.trim())
                .map_err(|_| Error::Parse(format!("coefficient {s:?} is not a rational number")))?,
        };
    }
    Ok(TorusDivisor::new(d))
}

pub fn read_divisor(path: &Path, rays: usize) -> Result<TorusDivisor> {
    parse_divisor(&read(path)?, rays)
}

/// Serializes nonzero coefficients; integers as numbers when they fit, otherwise `"p/q"`.
pub fn divisor_to_json(d: &TorusDivisor) -> Result<String> {
    let coeffs = d
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| **c != BigRational::from_integer(BigInt::from(0)))
        .map(|(i, c)| {
            let value = match (c.is_integer(), i64::try_from(c.to_integer())) {
                (true, Ok(x)) => Coefficient::Int(x),
                _ => Coefficient::Text(c.to_string()),
            };
            (i.to_string(), value)
        })
        .collect();
    serde_json::to_string_pretty(&DivisorFile { coeffs }).map_err(parse_err)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn fan_round_trip() {
        for (_, fan) in fixtures::all_fans() {
            let text = fan_to_json(&fan).unwrap();
            assert_eq!(parse_fan(&text).unwrap(), fan);
        }
    }

    #[test]
    fn simplicial_fans_omit_general_cones() {
        let text = fan_to_json(&fixtures::p1()).unwrap();
        assert!(!text.contains("general_cones"));
        let text = fan_to_json(&fixtures::atiyah_target()).unwrap();
        assert!(text.contains("general_cones"));
    }

    #[test]
    fn fan_shape_errors() {
        let err = parse_fan(r#"{"rank": 2, "rays": [[1,0],[0]], "max_cones": [[0,1]]}"#).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { expected: 2, found: 1 });
        let err = parse_fan(r#"{"rank": 1, "rays": [[1]], "max_cones": [[3]]}"#).unwrap_err();
        assert_eq!(err, Error::RayOutOfRange { index: 3, count: 1 });
        assert!(matches!(parse_fan(r#"{"rank": 1, "rays": [[1]]"#), Err(Error::Parse(_))));
    }

    #[test]
    fn morphism_round_trip() {
        for (_, m) in fixtures::all_morphisms() {
            let text = morphism_to_json(&m).unwrap();
            assert_eq!(parse_morphism(&text, None).unwrap(), m);
        }
    }

    #[test]
    fn morphism_to_point_has_empty_matrix() {
        let text = r#"{"matrix": [], "source": {"rank": 1, "rays": [[1],[-1]], "max_cones": [[0],[1]]},
                       "target": {"rank": 0, "rays": [], "max_cones": [[]]}}"#;
        let m = parse_morphism(text, None).unwrap();
        assert_eq!(m, FanMorphism::to_point(fixtures::p1()));
    }

    #[test]
    fn morphism_shape_error() {
        let text = r#"{"matrix": [[1,0,0]], "source": {"rank": 1, "rays": [[1],[-1]], "max_cones": [[0],[1]]},
                       "target": {"rank": 1, "rays": [[1],[-1]], "max_cones": [[0],[1]]}}"#;
        assert!(matches!(parse_morphism(text, None), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn divisors() {
        let d = parse_divisor(r#"{"coeffs": {"0": 1, "2": "-3/4"}}"#, 4).unwrap();
        assert_eq!(d.coefficient(0), &BigRational::from_integer(1.into()));
        assert_eq!(d.coefficient(1), &BigRational::from_integer(0.into()));
        assert_eq!(d.coefficient(2), &BigRational::new((-3).into(), 4.into()));
        assert_eq!(parse_divisor(&divisor_to_json(&d).unwrap(), 4).unwrap(), d);
        assert_eq!(
            parse_divisor(r#"{"coeffs": {"5": 1}}"#, 4).unwrap_err(),
            Error::RayOutOfRange { index: 5, count: 4 }
        );
        assert!(matches!(parse_divisor(r#"{"coeffs": {"0": "x"}}"#, 4), Err(Error::Parse(_))));
    }
}
