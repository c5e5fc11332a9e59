//! The quiver specification file.
//!
//! A spec is a JSON document naming the vertices explicitly:
//!
//! ```json
//! {
//!   "vertices": ["1", "2"],
//!   "arrows": [{"from": "1", "to": "2"}, {"from": "1", "to": "2"}],
//!   "dimension": {"1": 1, "2": 1},
//!   "stability": {"1": 1, "2": -1},
//!   "framing": {"i": "1", "j": "2", "N": 2},
//!   "oracle": {"prime": 2, "budget": 1000000, "seed": 1}
//! }
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use quiver_moduli::field::PrimeField;
use quiver_moduli::{DimensionVector, Quiver, StabilityParameter};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrowSpec {
    pub from: String,
    pub to: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FramingBlock {
    pub i: String,
    pub j: String,
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<i64>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleBlock {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prime: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuiverSpecFile {
    pub vertices: Vec<String>,
    #[serde(default)]
    pub arrows: Vec<ArrowSpec>,
    pub dimension: BTreeMap<String, i64>,
    pub stability: BTreeMap<String, i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub framing: Option<FramingBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleBlock>,
}

impl QuiverSpecFile {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec files always serialize")
    }
}

/// A malformed or inconsistent spec, with the location of the problem.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputError {
    pub origin: String,
    pub location: Option<String>,
    pub message: String,
    pub hint: Option<String>,
}

impl InputError {
    fn at(origin: &str, location: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            origin: origin.to_owned(),
            location: Some(location.into()),
            message: message.into(),
            hint: None,
        }
    }
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.origin)?;
        if let Some(loc) = &self.location {
            write!(f, ": at `{loc}`")?;
        }
        write!(f, ": {}", self.message)?;
        if let Some(hint) = &self.hint {
            write!(f, "\nhint: {hint}")?;
        }
        Ok(())
    }
}

impl std::error::Error for InputError {}

/// A validated spec with the core objects built from it.
#[derive(Debug, Clone)]
pub struct ParsedSpec {
    pub file: QuiverSpecFile,
    pub quiver: Quiver,
    pub dimension: DimensionVector,
    pub stability: StabilityParameter,
}

impl ParsedSpec {
    pub fn vertex(&self, name: &str) -> Option<usize> {
        self.quiver.vertex_index(name).ok()
    }
}

pub fn load(path: &Path) -> Result<ParsedSpec, InputError> {
    let origin = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| InputError {
        origin: origin.clone(),
        location: None,
        message: format!("cannot read file: {e}"),
        hint: None,
    })?;
    parse_str(&text, &origin)
}

pub fn parse_str(text: &str, origin: &str) -> Result<ParsedSpec, InputError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let file: QuiverSpecFile = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        InputError {
            origin: origin.to_owned(),
            location: (path != ".").then_some(path),
            message: e.into_inner().to_string(),
            hint: None,
        }
    })?;
    validate(file, origin)
}

fn vertex_map(
    origin: &str,
    field: &str,
    map: &BTreeMap<String, i64>,
    names: &[String],
) -> Result<Vec<i64>, InputError> {
    if let Some(extra) = map.keys().find(|k| !names.contains(k)) {
        return Err(InputError::at(origin, format!("{field}.{extra}"), "not a declared vertex"));
    }
    names
        .iter()
        .map(|n| {
            map.get(n)
                .copied()
                .ok_or_else(|| InputError::at(origin, field, format!("missing entry for vertex `{n}`")))
        })
        .collect()
}

pub fn validate(file: QuiverSpecFile, origin: &str) -> Result<ParsedSpec, InputError> {
    if file.vertices.is_empty() {
        return Err(InputError::at(origin, "vertices", "at least one vertex is required"));
    }
    for (k, name) in file.vertices.iter().enumerate() {
        if file.vertices[..k].contains(name) {
            return Err(InputError::at(origin, format!("vertices[{k}]"), format!("duplicate vertex `{name}`")));
        }
    }
    for (k, a) in file.arrows.iter().enumerate() {
        for (end, name) in [("from", &a.from), ("to", &a.to)] {
            if !file.vertices.contains(name) {
                return Err(InputError::at(
                    origin,
                    format!("arrows[{k}].{end}"),
                    format!("unknown vertex `{name}`"),
                ));
            }
        }
    }
    let quiver = Quiver::new(
        file.vertices.iter().cloned(),
        file.arrows.iter().map(|a| (a.from.clone(), a.to.clone())),
    )
    .map_err(|e| InputError::at(origin, "arrows", e.to_string()))?;

    let dims = vertex_map(origin, "dimension", &file.dimension, &file.vertices)?;
    if let Some(k) = dims.iter().position(|&v| v < 0) {
        return Err(InputError::at(
            origin,
            format!("dimension.{}", file.vertices[k]),
            "dimensions must be nonnegative",
        ));
    }
    let dimension = DimensionVector::new(dims).expect("checked nonnegative");

    let stability = StabilityParameter::new(vertex_map(origin, "stability", &file.stability, &file.vertices)?);
    let pairing = stability.pairing(&dimension);
    if pairing != 0 {
        let canonical = quiver.canonical_stability(&dimension).ok().map(|t| {
            let entries: Vec<String> = file
                .vertices
                .iter()
                .zip(t.values())
                .map(|(n, v)| format!("\"{n}\": {v}"))
                .collect();
            format!("the canonical parameter {{{}}} pairs to zero", entries.join(", "))
        });
        return Err(InputError {
            hint: canonical,
            ..InputError::at(
                origin,
                "stability",
                format!("theta(d) = {pairing}, the stability parameter must pair to 0 with the dimension vector"),
            )
        });
    }

    if let Some(framing) = &file.framing {
        for (end, name) in [("i", &framing.i), ("j", &framing.j)] {
            if !file.vertices.contains(name) {
                return Err(InputError::at(
                    origin,
                    format!("framing.{end}"),
                    format!("unknown vertex `{name}`"),
                ));
            }
        }
        if framing.scale.is_some_and(|n| n < 1) {
            return Err(InputError::at(origin, "framing.N", "the framing scale must be at least 1"));
        }
    }
    if let Some(p) = file.oracle.as_ref().and_then(|o| o.prime) {
        PrimeField::new(p).map_err(|e| InputError::at(origin, "oracle.prime", e.to_string()))?;
    }

    Ok(ParsedSpec {
        file,
        quiver,
        dimension,
        stability,
    })
}
