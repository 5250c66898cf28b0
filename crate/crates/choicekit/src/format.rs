//! JSON file formats.
//!
//! Rationals are strings `"p/q"` (or `"p"` for integers); integer JSON
//! numbers are accepted on input as well. Vectors are arrays of rationals.

use std::fmt;
use std::str::FromStr;

use choicekit_core::assessment::AssessmentFamily;
use choicekit_core::choice::ChoiceModel;
use choicekit_core::cone::ProperCone;
use choicekit_core::rules::{OptionSet, Rule, RuleSet, SchemeParams};
use choicekit_core::{Rational, Vector};
use serde::de::{self, DeserializeOwned};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

/// A malformed or inconsistent input file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormatError(pub String);

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for FormatError {}

impl From<choicekit_core::Error> for FormatError {
    fn from(e: choicekit_core::Error) -> Self {
        Self(e.to_string())
    }
}

type Result<T> = std::result::Result<T, FormatError>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Num(pub Rational);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Num {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Int(i64),
        }
        match Raw::deserialize(d)? {
            Raw::Int(n) => Ok(Num(Rational::from_integer(n.into()))),
            Raw::Text(t) => Rational::from_str(t.trim())
                .map(Num)
                .map_err(|_| de::Error::custom(format!("`{t}` is not a rational number"))),
        }
    }
}

pub type JsonVector = Vec<Num>;

pub fn vector_from_json(v: &[Num]) -> Result<Vector> {
    Ok(Vector::new(v.iter().map(|n| n.0.clone()).collect())?)
}

pub fn vectors_from_json(vs: &[JsonVector]) -> Result<Vec<Vector>> {
    vs.iter().map(|v| vector_from_json(v)).collect()
}

pub fn vector_to_json(v: &Vector) -> JsonVector {
    v.coords().iter().cloned().map(Num).collect()
}

pub fn vectors_to_json(vs: &[Vector]) -> Vec<JsonVector> {
    vs.iter().map(vector_to_json).collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeJson {
    pub dim: usize,
    pub generators: Vec<JsonVector>,
}

impl ConeJson {
    /// The generators, checked against `dim` but not for bluntness.
    pub fn generators(&self) -> Result<Vec<Vector>> {
        let generators = vectors_from_json(&self.generators)?;
        if let Some(bad) = generators.iter().find(|g| g.dim() != self.dim) {
            return Err(choicekit_core::Error::DimensionMismatch {
                expected: self.dim,
                found: bad.dim(),
            }
            .into());
        }
        Ok(generators)
    }

    pub fn to_cone(&self) -> Result<ProperCone> {
        Ok(ProperCone::new(self.dim, self.generators()?)?)
    }

    pub fn from_cone(cone: &ProperCone) -> Self {
        Self {
            dim: cone.dim(),
            generators: vectors_to_json(cone.generators()),
        }
    }
}

/// An option set: a bare array of points is a finite set.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OptionSetJson {
    Points(Vec<JsonVector>),
    Tagged(TaggedSet),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub enum TaggedSet {
    Finite(Vec<JsonVector>),
    Posi(Vec<JsonVector>),
    OpenRay { base: JsonVector, direction: JsonVector },
    Union(Vec<OptionSetJson>),
}

impl OptionSetJson {
    pub fn to_set(&self) -> Result<OptionSet> {
        Ok(match self {
            Self::Points(p) | Self::Tagged(TaggedSet::Finite(p)) => OptionSet::finite(vectors_from_json(p)?)?,
            Self::Tagged(TaggedSet::Posi(p)) => OptionSet::posi(vectors_from_json(p)?)?,
            Self::Tagged(TaggedSet::OpenRay { base, direction }) => {
                OptionSet::open_ray(vector_from_json(base)?, vector_from_json(direction)?)?
            }
            Self::Tagged(TaggedSet::Union(parts)) => {
                OptionSet::Union(parts.iter().map(Self::to_set).collect::<Result<_>>()?)
            }
        })
    }

    /// The points of a finite set, in input order.
    pub fn to_points(&self) -> Result<Vec<Vector>> {
        match self {
            Self::Points(p) | Self::Tagged(TaggedSet::Finite(p)) => vectors_from_json(p),
            _ => Err(FormatError("expected a finite option set".into())),
        }
    }

    pub fn from_set(set: &OptionSet) -> Self {
        Self::Tagged(match set {
            OptionSet::Finite(p) => TaggedSet::Finite(vectors_to_json(p)),
            OptionSet::Posi(p) => TaggedSet::Posi(vectors_to_json(p)),
            OptionSet::OpenRay { base, direction } => TaggedSet::OpenRay {
                base: vector_to_json(base),
                direction: vector_to_json(direction),
            },
            OptionSet::Union(parts) => TaggedSet::Union(parts.iter().map(Self::from_set).collect()),
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ConclusionJson {
    Empty(EmptyMarker),
    Set(OptionSetJson),
}

/// The string `"empty"`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EmptyMarker {
    Empty,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleJson {
    #[serde(default)]
    pub premises: Vec<OptionSetJson>,
    pub conclusion: ConclusionJson,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RulesJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    pub rules: Vec<RuleJson>,
}

impl RulesJson {
    /// The rule set; without an explicit `dim` it is read off the rules.
    pub fn to_rules(&self) -> Result<RuleSet> {
        let rules: Vec<Rule> = self
            .rules
            .iter()
            .map(|r| {
                let premises = r.premises.iter().map(OptionSetJson::to_set).collect::<Result<_>>()?;
                let conclusion = match &r.conclusion {
                    ConclusionJson::Empty(_) => None,
                    ConclusionJson::Set(s) => Some(s.to_set()?),
                };
                Ok(Rule::new(premises, conclusion))
            })
            .collect::<Result<_>>()?;
        let dim = self
            .dim
            .or_else(|| rules.iter().find_map(Rule::dim))
            .ok_or_else(|| FormatError("rules file needs a \"dim\" when no rule mentions a vector".into()))?;
        Ok(RuleSet::new(dim, rules)?)
    }

    pub fn from_rules(rules: &RuleSet) -> Self {
        Self {
            dim: Some(rules.dim()),
            rules: rules
                .rules()
                .iter()
                .map(|r| RuleJson {
                    premises: r.premises.iter().map(OptionSetJson::from_set).collect(),
                    conclusion: match &r.conclusion {
                        None => ConclusionJson::Empty(EmptyMarker::Empty),
                        Some(c) => ConclusionJson::Set(OptionSetJson::from_set(c)),
                    },
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssessmentJson {
    pub dim: usize,
    pub basis: Vec<Vec<JsonVector>>,
}

impl AssessmentJson {
    pub fn to_family(&self) -> Result<AssessmentFamily> {
        let basis = self.basis.iter().map(|s| vectors_from_json(s)).collect::<Result<_>>()?;
        Ok(AssessmentFamily::new(self.dim, basis)?)
    }
}

/// A choice model: `{"cones": [...]}`, `{"assessment": {...}}` or a single
/// cone record.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ModelJson {
    Cones(ConesModel),
    Assessment(AssessmentModel),
    Cone(ConeJson),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConesModel {
    pub cones: Vec<ConeJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssessmentModel {
    pub assessment: AssessmentJson,
}

/// A model whose assessment, if any, is not yet extended.
pub enum ParsedModel {
    Cones(Vec<ProperCone>),
    Assessment(AssessmentFamily),
}

impl ModelJson {
    pub fn to_model(&self) -> Result<ParsedModel> {
        Ok(match self {
            Self::Cones(m) => {
                let cones: Vec<ProperCone> = m.cones.iter().map(ConeJson::to_cone).collect::<Result<_>>()?;
                ChoiceModel::from_cones(cones.clone())?;
                ParsedModel::Cones(cones)
            }
            Self::Cone(c) => ParsedModel::Cones(vec![c.to_cone()?]),
            Self::Assessment(m) => ParsedModel::Assessment(m.assessment.to_family()?),
        })
    }

    pub fn from_cones(cones: &[ProperCone]) -> Self {
        Self::Cones(ConesModel {
            cones: cones.iter().map(ConeJson::from_cone).collect(),
        })
    }
}

/// Probes for rule schemes; each scheme reads the field it needs.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeParamsJson {
    pub dim: usize,
    #[serde(default)]
    pub probes: Vec<JsonVector>,
    #[serde(default)]
    pub pairs: Vec<(JsonVector, JsonVector)>,
    #[serde(default)]
    pub sets: Vec<Vec<JsonVector>>,
}

impl SchemeParamsJson {
    pub fn to_params(&self) -> Result<SchemeParams> {
        Ok(SchemeParams {
            probes: vectors_from_json(&self.probes)?,
            pairs: self
                .pairs
                .iter()
                .map(|(u, v)| Ok((vector_from_json(u)?, vector_from_json(v)?)))
                .collect::<Result<_>>()?,
            sets: self.sets.iter().map(|s| vectors_from_json(s)).collect::<Result<_>>()?,
        })
    }
}

pub fn parse<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| FormatError(e.to_string()))
}

/// Indented JSON with arrays of scalars, such as vectors, kept on one line.
pub fn to_pretty<T: Serialize>(value: &T) -> String {
    let value = serde_json::to_value(value).expect("JSON values always serialize");
    let mut out = String::new();
    write_value(&mut out, &value, 0);
    out.push('\n');
    out
}

fn write_value(out: &mut String, value: &Value, depth: usize) {
    let pad = |out: &mut String, depth: usize| out.push_str(&"  ".repeat(depth));
    match value {
        Value::Array(items) if items.iter().all(|v| !v.is_array() && !v.is_object()) => {
            let items: Vec<String> = items
                .iter()
                .map(|v| serde_json::to_string(v).expect("scalars serialize"))
                .collect();
            out.push('[');
            out.push_str(&items.join(", "));
            out.push(']');
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                pad(out, depth + 1);
                write_value(out, item, depth + 1);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            pad(out, depth);
            out.push(']');
        }
        Value::Object(fields) if fields.is_empty() => out.push_str("{}"),
        Value::Object(fields) => {
            out.push_str("{\n");
            for (i, (key, item)) in fields.iter().enumerate() {
                pad(out, depth + 1);
                out.push_str(&serde_json::to_string(key).expect("keys serialize"));
                out.push_str(": ");
                write_value(out, item, depth + 1);
                out.push_str(if i + 1 < fields.len() { ",\n" } else { "\n" });
            }
            pad(out, depth);
            out.push('}');
        }
        scalar => out.push_str(&serde_json::to_string(scalar).expect("scalars serialize")),
    }
}
