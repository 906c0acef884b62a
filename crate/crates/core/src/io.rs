//! JSON file formats and the builtin family names accepted on the command
//! line: `upper-triangular:n`, `sl2-sym:d` and `nt-blocks:{i:c,...};m0;m0p`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constructions::{
    char_p_subspace, nt_module_from_blocks, sym_power, upper_triangular_rep, ConstructionError,
};
use crate::field::{Field, FieldError, Scalar};
use crate::grouprep::{GroupError, MatrixGroup, Mode, Representation};
use crate::linalg::{LinalgError, Matrix, MatrixJson, Subspace, SubspaceJson};
use crate::ntwitness::{NtError, NtModule, NtModuleJson};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("unknown builtin {0:?}")]
    UnknownBuiltin(String),
    #[error("malformed {what}: {text:?}")]
    Malformed { what: &'static str, text: String },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error(transparent)]
    Nt(#[from] NtError),
}

impl From<serde_json::Error> for IoError {
    fn from(e: serde_json::Error) -> Self {
        IoError::Json(e.to_string())
    }
}

/// `{"field", "degree", "generators", "rep_dim", "images"}`. The
/// representation's field is read from the images and defaults to the
/// group's field when there are none.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct RepJson {
    pub field: String,
    pub degree: usize,
    pub generators: Vec<MatrixJson>,
    pub rep_dim: usize,
    pub images: Vec<MatrixJson>,
}

pub fn rep_to_json(rep: &Representation) -> RepJson {
    let g = rep.group();
    RepJson {
        field: g.field().to_string(),
        degree: g.degree(),
        generators: g.generators().iter().map(Matrix::to_json).collect(),
        rep_dim: rep.dim(),
        images: rep.images().iter().map(Matrix::to_json).collect(),
    }
}

pub fn group_from_json(json: &RepJson, element_cap: Option<usize>) -> Result<MatrixGroup, IoError> {
    let field = Field::parse(&json.field)?;
    let gens =
        json.generators.iter().map(|m| parse_matrix_in(&field, m, json.degree)).collect::<Result<Vec<_>, _>>()?;
    let group = MatrixGroup::new(&field, json.degree, gens)?;
    Ok(match element_cap {
        Some(cap) => group.with_cap(cap),
        None => group,
    })
}

pub fn rep_from_json(json: &RepJson, element_cap: Option<usize>) -> Result<Representation, IoError> {
    let group = group_from_json(json, element_cap)?;
    let field = match json.images.first() {
        Some(m) => Field::parse(&m.field)?,
        None => group.field().clone(),
    };
    let images = json.images.iter().map(|m| parse_matrix_in(&field, m, json.rep_dim)).collect::<Result<Vec<_>, _>>()?;
    Ok(Representation::new(&group, &field, json.rep_dim, images)?)
}

fn parse_matrix_in(field: &Field, m: &MatrixJson, cols: usize) -> Result<Matrix, IoError> {
    if Field::parse(&m.field)? != *field {
        return Err(LinalgError::MixedContext.into());
    }
    let mat = Matrix::from_json_in(field, &m.rows, Some(cols))?;
    if mat.rows() != cols || mat.cols() != cols {
        return Err(IoError::Invalid(format!("expected a {cols}x{cols} matrix, got {}x{}", mat.rows(), mat.cols())));
    }
    Ok(mat)
}

pub fn parse_rep(text: &str, element_cap: Option<usize>) -> Result<Representation, IoError> {
    rep_from_json(&serde_json::from_str(text)?, element_cap)
}

pub fn parse_group(text: &str, element_cap: Option<usize>) -> Result<MatrixGroup, IoError> {
    group_from_json(&serde_json::from_str(text)?, element_cap)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum SubspaceFile {
    List(Vec<SubspaceJson>),
    Wrapped { subspaces: Vec<SubspaceJson> },
}

/// A JSON list of subspaces, bare or as `{"subspaces": [...]}`.
pub fn parse_subspaces(text: &str) -> Result<Vec<Subspace>, IoError> {
    let list = match serde_json::from_str(text)? {
        SubspaceFile::List(l) | SubspaceFile::Wrapped { subspaces: l } => l,
    };
    Ok(list.iter().map(Subspace::from_json).collect::<Result<Vec<_>, _>>()?)
}

pub fn subspaces_to_json(family: &[Subspace]) -> Vec<SubspaceJson> {
    family.iter().map(Subspace::to_json).collect()
}

pub fn parse_nt_module(text: &str) -> Result<NtModule, IoError> {
    let json: NtModuleJson = serde_json::from_str(text)?;
    Ok(NtModule::from_json(&json)?)
}

pub fn parse_vector(field: &Field, items: &[String]) -> Result<Vec<Scalar>, IoError> {
    Ok(items.iter().map(|s| field.parse_scalar(s)).collect::<Result<Vec<_>, _>>()?)
}

/// `exhaustive` or `sample:<n>`; sampling uses `seed`.
pub fn parse_mode(text: &str, seed: u64) -> Result<Mode, IoError> {
    if text == "exhaustive" {
        return Ok(Mode::Exhaustive);
    }
    let count = text
        .strip_prefix("sample:")
        .and_then(|n| n.parse::<u64>().ok())
        .ok_or_else(|| IoError::Malformed { what: "mode", text: text.into() })?;
    Ok(Mode::Sample { seed, count })
}

/// A representation named on the command line, with its default family.
#[derive(Clone, Debug)]
pub struct BuiltinRep {
    pub rep: Representation,
    pub family: Vec<Subspace>,
}

fn parse_count(what: &'static str, text: &str) -> Result<usize, IoError> {
    text.parse().map_err(|_| IoError::Malformed { what, text: text.into() })
}

/// `upper-triangular:n` is `B_n` by left multiplication with `{L_i}`;
/// `sl2-sym:d` is `SL₂` on degree-`d` forms, with the hyperplane without
/// `x^{p-1}y^{p-1}` when `d = 2p - 2`. Returns `None` for other names.
pub fn builtin_rep(name: &str, field: &Field) -> Option<Result<BuiltinRep, IoError>> {
    let (kind, arg) = name.split_once(':')?;
    let build = || -> Result<BuiltinRep, IoError> {
        match kind {
            "upper-triangular" => {
                let n = parse_count("upper-triangular size", arg)?;
                if n == 0 {
                    return Err(IoError::Invalid("upper-triangular needs n >= 1".into()));
                }
                let (rep, family) = upper_triangular_rep(n, field);
                Ok(BuiltinRep { rep, family })
            }
            "sl2-sym" => {
                let d = parse_count("symmetric power degree", arg)?;
                let rep = sym_power(field, d).rep;
                let family = char_p_subspace(field, d).map(|s| vec![s]).unwrap_or_default();
                Ok(BuiltinRep { rep, family })
            }
            _ => Err(IoError::UnknownBuiltin(name.into())),
        }
    };
    match kind {
        "upper-triangular" | "sl2-sym" => Some(build()),
        _ => None,
    }
}

/// Parses `{i:c,...};m0;m0p`.
pub fn parse_nt_blocks(spec: &str) -> Result<(BTreeMap<i64, usize>, usize, usize), IoError> {
    let bad = || IoError::Malformed { what: "nt-blocks spec", text: spec.into() };
    let s: String = spec.chars().filter(|c| !c.is_whitespace()).collect();
    let parts: Vec<&str> = s.split(';').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let inner = parts[0].strip_prefix('{').and_then(|r| r.strip_suffix('}')).ok_or_else(bad)?;
    let mut blocks = BTreeMap::new();
    for item in inner.split(',').filter(|x| !x.is_empty()) {
        let (i, c) = item.split_once(':').ok_or_else(bad)?;
        let i: i64 = i.parse().map_err(|_| bad())?;
        let c: usize = c.parse().map_err(|_| bad())?;
        *blocks.entry(i).or_insert(0) += c;
    }
    let m0 = parts[1].parse().map_err(|_| bad())?;
    let m0p = parts[2].parse().map_err(|_| bad())?;
    Ok((blocks, m0, m0p))
}

/// `nt-blocks:<spec>` over `field`; `None` for other names.
pub fn builtin_nt_module(name: &str, field: &Field) -> Option<Result<NtModule, IoError>> {
    let spec = name.strip_prefix("nt-blocks:")?;
    Some(parse_nt_blocks(spec).and_then(|(b, m0, m0p)| Ok(nt_module_from_blocks(field, &b, m0, m0p)?)))
}
