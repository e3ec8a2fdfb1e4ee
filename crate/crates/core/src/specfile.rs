//! JSON monoid specs and scale files.
//!
//! A spec is `{"family": ..., "bound": n, "moduli": [..], "divisors":
//! [{"id": n, "class": [..]}], "generators": [[..]], "d": n}`; the
//! quadratic-field family also takes `class_number` and `norm_bound`.
//! For `affine`, `d` is the ambient dimension; for `quadratic_field` it is
//! the squarefree radicand.

use std::collections::HashMap;
use std::path::Path;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::decay::parse_ratio;
use crate::error::{KrullError, Result};
use crate::monoid::{build_preset, KrullPresentation, MonoidSpec, PresetParams};
use crate::numberfield::{FieldPresentation, QuadraticField};
use crate::zeta::{Scale, ScaleValue};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DivisorEntry {
    pub id: u64,
    pub class: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub family: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub moduli: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub divisors: Option<Vec<DivisorEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class_number: Option<u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub norm_bound: Option<u64>,
}

/// A loaded spec. Quadratic fields are exposed through their principal
/// ideal monoid presentation, with the field kept alongside.
#[derive(Debug, Clone)]
pub struct LoadedSpec {
    pub source: SpecFile,
    pub monoid: MonoidSpec,
    pub field: Option<(QuadraticField, FieldPresentation)>,
}

impl LoadedSpec {
    pub fn presentation(&self) -> Option<&KrullPresentation> {
        self.monoid.as_krull()
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| KrullError::InvalidParameter(format!("cannot read {}: {e}", path.display())))
}

pub fn parse_spec(text: &str) -> Result<SpecFile> {
    serde_json::from_str(text).map_err(|e| KrullError::InvalidParameter(format!("invalid spec: {e}")))
}

/// Builds the spec. `bound_override` replaces the truncation bound of
/// bounded presets (`bound`, or `norm_bound` for fields) when the file
/// leaves it out.
pub fn build_spec(spec: &SpecFile, bound_override: Option<u64>) -> Result<LoadedSpec> {
    if spec.family == "quadratic_field" {
        let d = spec.d.ok_or_else(|| KrullError::InvalidParameter("quadratic_field needs d".into()))?;
        let h = spec
            .class_number
            .ok_or_else(|| KrullError::InvalidParameter("quadratic_field needs class_number".into()))?;
        let x = spec
            .norm_bound
            .or(bound_override)
            .ok_or_else(|| KrullError::InvalidParameter("quadratic_field needs norm_bound".into()))?;
        let field = QuadraticField::new(d, h)?;
        let fp = field.presentation(x)?;
        return Ok(LoadedSpec {
            source: spec.clone(),
            monoid: MonoidSpec::Krull(fp.pres.clone()),
            field: Some((field, fp)),
        });
    }
    let dim = match spec.d {
        Some(d) if d <= 0 => return Err(KrullError::InvalidParameter(format!("dimension d = {d} must be positive"))),
        Some(d) => Some(d as usize),
        None => None,
    };
    let params = PresetParams {
        bound: spec.bound.or(bound_override),
        moduli: spec.moduli.clone().unwrap_or_default(),
        classes: spec.divisors.iter().flatten().map(|e| (e.id, e.class.clone())).collect(),
        generators: spec.generators.clone().unwrap_or_default(),
        dim,
    };
    Ok(LoadedSpec { source: spec.clone(), monoid: build_preset(&spec.family, &params)?, field: None })
}

pub fn load_spec(path: &Path, bound_override: Option<u64>) -> Result<LoadedSpec> {
    build_spec(&parse_spec(&read(path)?)?, bound_override)
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum RawValue {
    Number(f64),
    Text(String),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScaleFile {
    values: HashMap<String, RawValue>,
}

/// Scale file: `{"values": {"<strong atom label>": 1.5 | "p/q"}}`.
pub fn parse_scale(pres: &KrullPresentation, name: &str, text: &str) -> Result<Scale> {
    let file: ScaleFile =
        serde_json::from_str(text).map_err(|e| KrullError::InvalidParameter(format!("invalid scale file: {e}")))?;
    let mut values = HashMap::new();
    for (label, raw) in file.values {
        let v = match raw {
            RawValue::Number(x) => ScaleValue::Real(x),
            RawValue::Text(s) => {
                let r: BigRational =
                    parse_ratio(&s)
                        .or_else(|| s.trim().parse().ok().map(BigRational::from_integer))
                        .ok_or_else(|| KrullError::InvalidParameter(format!("bad scale value `{s}` for {label}")))?;
                ScaleValue::Rational(r)
            }
        };
        values.insert(label, v);
    }
    Scale::from_labels(pres, name, &values)
}

pub fn load_scale(pres: &KrullPresentation, path: &Path) -> Result<Scale> {
    parse_scale(pres, &format!("file:{}", path.display()), &read(path)?)
}
