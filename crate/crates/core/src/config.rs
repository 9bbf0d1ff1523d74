//! JSON input schemas. Rationals are written as `"p/q"` strings or plain integers.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{CertError, ConfigError};
use crate::linalg::{Matrix, Vector};
use crate::motiveiso::{FourfoldData, SurfaceData};
use crate::quadform::{self, Isometry, QuadSpace};
use crate::rational::{self, int, Rational};
use crate::realization::RealizationConfig;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Int(i64),
    Str(String),
}

impl Num {
    pub fn value(&self) -> Result<Rational, ConfigError> {
        match self {
            Num::Int(n) => Ok(int(*n)),
            Num::Str(s) => Ok(rational::parse(s)?),
        }
    }
}

pub type VectorJson = Vec<Num>;
pub type MatrixJson = Vec<Vec<Num>>;

pub fn vector(v: &[Num]) -> Result<Vector, ConfigError> {
    v.iter().map(Num::value).collect()
}

pub fn matrix(m: &MatrixJson) -> Result<Matrix, ConfigError> {
    let rows: Vec<Vector> = m.iter().map(|r| vector(r)).collect::<Result<_, _>>()?;
    let n = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != n) {
        return Err(ConfigError::Schema("matrix rows have different lengths".into()));
    }
    Ok(Matrix::from_rows(rows)?)
}

pub fn matrix_json(m: &Matrix) -> MatrixJson {
    m.to_strings()
        .into_iter()
        .map(|r| r.into_iter().map(Num::Str).collect())
        .collect()
}

pub fn vector_json(v: &[Rational]) -> VectorJson {
    rational::vec_to_strings(v).into_iter().map(Num::Str).collect()
}

fn quad_space(m: &MatrixJson) -> Result<QuadSpace, ConfigError> {
    let g = matrix(m)?;
    if g.rows() != g.cols() {
        return Err(ConfigError::Schema(format!("gram is {}x{}, not square", g.rows(), g.cols())));
    }
    Ok(QuadSpace::new(g)?)
}

/// `{"gram": M, "alg_basis": [v, …], "generators": [M, …]}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FourfoldJson {
    pub gram: MatrixJson,
    #[serde(default)]
    pub alg_basis: Vec<VectorJson>,
    #[serde(default)]
    pub generators: Vec<MatrixJson>,
}

impl FourfoldJson {
    pub fn from_data(d: &FourfoldData) -> Self {
        FourfoldJson {
            gram: matrix_json(d.prim().gram()),
            alg_basis: d.alg_basis.iter().map(|a| vector_json(a)).collect(),
            generators: d.group.generators().iter().map(matrix_json).collect(),
        }
    }

    fn parts(&self) -> Result<(QuadSpace, Vec<Vector>, Vec<Matrix>), ConfigError> {
        let space = quad_space(&self.gram)?;
        let alg: Vec<Vector> = self.alg_basis.iter().map(|v| vector(v)).collect::<Result<_, _>>()?;
        if let Some(i) = alg.iter().position(|a| a.len() != space.dim()) {
            return Err(ConfigError::Schema(format!("alg_basis[{i}] has the wrong length")));
        }
        let gens: Vec<Matrix> = self.generators.iter().map(matrix).collect::<Result<_, _>>()?;
        Ok((space, alg, gens))
    }

    pub fn build(&self) -> Result<FourfoldData, ConfigError> {
        let (space, alg, gens) = self.parts()?;
        let group = quadform::group_closure(&space, &gens, 1 << 12)?;
        let cfg = RealizationConfig::new(space).map_err(schema)?;
        FourfoldData::new(Arc::new(cfg), alg, Some(group)).map_err(schema)
    }

    /// Both data sets, with group elements aligned generator by generator.
    pub fn build_pair(&self, other: &FourfoldJson) -> Result<(FourfoldData, FourfoldData), ConfigError> {
        let (s1, a1, g1) = self.parts()?;
        let (s2, a2, g2) = other.parts()?;
        let (ga, gb) = quadform::group_closure_paired(&s1, &g1, &s2, &g2, 1 << 12)?;
        let c1 = RealizationConfig::new(s1).map_err(schema)?;
        let c2 = RealizationConfig::new(s2).map_err(schema)?;
        Ok((
            FourfoldData::new(Arc::new(c1), a1, Some(ga)).map_err(schema)?,
            FourfoldData::new(Arc::new(c2), a2, Some(gb)).map_err(schema)?,
        ))
    }
}

fn schema(e: impl std::fmt::Display) -> ConfigError {
    ConfigError::Schema(e.to_string())
}

/// `{"degree": 2, "gram": M, "ns_basis": [v, …]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceJson {
    pub degree: u32,
    pub gram: MatrixJson,
    #[serde(default)]
    pub ns_basis: Vec<VectorJson>,
}

impl SurfaceJson {
    pub fn build(&self) -> Result<SurfaceData, ConfigError> {
        let space = quad_space(&self.gram)?;
        let ns: Vec<Vector> = self.ns_basis.iter().map(|v| vector(v)).collect::<Result<_, _>>()?;
        SurfaceData::new(self.degree, space, ns).map_err(|e: CertError| schema(e))
    }
}

/// Where the primitive Gram matrix comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GramSource {
    Default,
    Random,
    Explicit(Matrix),
}

impl GramSource {
    /// `default`, `random`, or a path to a JSON matrix.
    pub fn from_arg(arg: &str) -> Result<GramSource, ConfigError> {
        match arg {
            "default" => Ok(GramSource::Default),
            "random" => Ok(GramSource::Random),
            path => {
                let m: MatrixJson = read_json(Path::new(path))?;
                Ok(GramSource::Explicit(matrix(&m)?))
            }
        }
    }
}

/// Top-level run configuration. Every field is optional.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub seed: u64,
    pub rank: usize,
    /// Primary Gram matrix; the built-in diagonal form when absent.
    pub gram: Option<MatrixJson>,
    /// Second Gram matrix for independence checks; random when absent.
    pub second_gram: Option<MatrixJson>,
    pub witt_instances: usize,
    pub gamma_pairs: usize,
    pub max_alg_rank: usize,
    /// An explicit pair to certify, with `iso_tr` in canonical transcendental bases.
    pub fourfold: Option<FourfoldJson>,
    pub fourfold2: Option<FourfoldJson>,
    pub iso_tr: Option<MatrixJson>,
    /// An explicit cubic and K3 pair with `iso_k3` between transcendental parts.
    pub surface: Option<SurfaceJson>,
    pub iso_k3: Option<MatrixJson>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 2024,
            rank: 22,
            gram: None,
            second_gram: None,
            witt_instances: 200,
            gamma_pairs: 20,
            max_alg_rank: 3,
            fourfold: None,
            fourfold2: None,
            iso_tr: None,
            surface: None,
            iso_k3: None,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<RunConfig, ConfigError> {
        let cfg: RunConfig = read_json(path)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if let Some(g) = &self.gram {
            let s = quad_space(g)?;
            s.require_nondegenerate()?;
        }
        if let Some(g) = &self.second_gram {
            quad_space(g)?.require_nondegenerate()?;
        }
        match (&self.fourfold, &self.fourfold2, &self.iso_tr) {
            (None, None, None) | (Some(_), None, None) => {}
            (Some(a), Some(b), Some(m)) => {
                a.build_pair(b)?;
                matrix(m)?;
            }
            _ => {
                return Err(ConfigError::Schema(
                    "fourfold2 and iso_tr require fourfold and each other".into(),
                ))
            }
        }
        if let Some(s) = &self.surface {
            s.build()?;
            if self.fourfold.is_none() || self.iso_k3.is_none() {
                return Err(ConfigError::Schema("surface requires fourfold and iso_k3".into()));
            }
        }
        Ok(())
    }

    pub fn explicit_pair(&self) -> Result<Option<(FourfoldData, FourfoldData, Isometry)>, ConfigError> {
        match (&self.fourfold, &self.fourfold2, &self.iso_tr) {
            (Some(a), Some(b), Some(m)) => {
                let (d1, d2) = a.build_pair(b)?;
                Ok(Some((d1, d2, Isometry::new(matrix(m)?))))
            }
            _ => Ok(None),
        }
    }

    pub fn explicit_k3(&self) -> Result<Option<(FourfoldData, SurfaceData, Isometry)>, ConfigError> {
        match (&self.fourfold, &self.surface, &self.iso_k3) {
            (Some(a), Some(s), Some(m)) => Ok(Some((a.build()?, s.build()?, Isometry::new(matrix(m)?)))),
            _ => Ok(None),
        }
    }
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(serde_json::from_str(&text)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fourfold_round_trip() {
        let text = r#"{"gram": [[2, 0], [0, "-1/2"]], "alg_basis": [[1, 0]]}"#;
        let j: FourfoldJson = serde_json::from_str(text).unwrap();
        let d = j.build().unwrap();
        assert_eq!(d.prim().q(&d.alg_basis[0]), int(2));
        let back = FourfoldJson::from_data(&d);
        assert_eq!(back.build().unwrap().prim(), d.prim());
    }

    #[test]
    fn schema_errors() {
        let bad = r#"{"gram": [[1, 0], [0]]}"#;
        let j: FourfoldJson = serde_json::from_str(bad).unwrap();
        assert!(matches!(j.build(), Err(ConfigError::Schema(_))));
        assert!(serde_json::from_str::<FourfoldJson>(r#"{"gram": [[1]], "extra": 1}"#).is_err());
        let iso = r#"{"gram": [[1, 0], [0, -1]], "alg_basis": [[1, 1]]}"#;
        let j: FourfoldJson = serde_json::from_str(iso).unwrap();
        assert!(j.build().is_err());
        let run: RunConfig = serde_json::from_str(r#"{"fourfold2": {"gram": [[1]]}}"#).unwrap();
        assert!(run.validate().is_err());
    }

    #[test]
    fn defaults() {
        let run: RunConfig = serde_json::from_str("{}").unwrap();
        assert_eq!(run, RunConfig::default());
        assert_eq!(GramSource::from_arg("random").unwrap(), GramSource::Random);
    }
}
