//! Machine-readable notation census: sources, observations, validation,
//! statistics and draft-notation import.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::path::Path;

use serde::Serialize;
use serde_json::{Map, Value};

use crate::context::Language;
use crate::om::is_identifier;
use crate::xmlutil::{escape_attr, escape_text};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Source {
    pub key: String,
    pub title: String,
    pub culture: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub publisher_url: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub download_url: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Observation {
    pub id: String,
    /// `cd/name` of the observed symbol.
    pub semantic: String,
    pub culture: String,
    pub symbol_name: String,
    pub source_key: String,
    pub locator: String,
    pub image: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unicode_repr: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
}

impl Observation {
    /// The leading subtag of the culture label, e.g. `fr` for `fr-school`.
    pub fn language_subtag(&self) -> &str {
        self.culture.split('-').next().unwrap_or("")
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Census {
    pub sources: Vec<Source>,
    pub observations: Vec<Observation>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{path}: {reason}")]
pub struct CensusParseError {
    pub path: String,
    pub reason: String,
}

fn parse_err(path: &str, reason: impl Into<String>) -> CensusParseError {
    CensusParseError {
        path: path.to_owned(),
        reason: reason.into(),
    }
}

fn kind(v: &Value) -> &'static str {
    match v {
        Value::Null => "null",
        Value::Bool(_) => "a boolean",
        Value::Number(_) => "a number",
        Value::String(_) => "a string",
        Value::Array(_) => "an array",
        Value::Object(_) => "an object",
    }
}

struct Fields<'a> {
    obj: &'a Map<String, Value>,
    path: String,
}

impl<'a> Fields<'a> {
    fn new(v: &'a Value, path: String, known: &[&str], warnings: &mut Vec<String>) -> Result<Self, CensusParseError> {
        let obj = v
            .as_object()
            .ok_or_else(|| parse_err(&path, format!("expected an object, found {}", kind(v))))?;
        for k in obj.keys() {
            if !known.contains(&k.as_str()) {
                warnings.push(format!("{path}.{k}: unknown field ignored"));
            }
        }
        Ok(Fields { obj, path })
    }

    fn optional(&self, name: &str) -> Result<Option<String>, CensusParseError> {
        match self.obj.get(name) {
            None | Some(Value::Null) => Ok(None),
            Some(Value::String(s)) => Ok(Some(s.clone())),
            Some(other) => Err(parse_err(
                &format!("{}.{name}", self.path),
                format!("expected a string, found {}", kind(other)),
            )),
        }
    }

    fn required(&self, name: &str) -> Result<String, CensusParseError> {
        self.optional(name)?
            .ok_or_else(|| parse_err(&format!("{}.{name}", self.path), "missing required field"))
    }
}

const SOURCE_FIELDS: &[&str] = &["key", "title", "culture", "publisher_url", "download_url"];
const OBSERVATION_FIELDS: &[&str] = &[
    "id",
    "semantic",
    "culture",
    "symbol_name",
    "source_key",
    "locator",
    "image",
    "unicode_repr",
    "description",
];

fn array<'a>(root: &'a Map<String, Value>, name: &str) -> Result<&'a [Value], CensusParseError> {
    match root.get(name) {
        Some(Value::Array(items)) => Ok(items),
        Some(other) => Err(parse_err(name, format!("expected an array, found {}", kind(other)))),
        None => Err(parse_err(name, "missing required field")),
    }
}

/// Parses a census file. Unknown fields are reported in the returned
/// warning list rather than rejected.
pub fn parse_census(text: &str) -> Result<(Census, Vec<String>), CensusParseError> {
    let root: Value = serde_json::from_str(text).map_err(|e| parse_err("$", e.to_string()))?;
    let mut warnings = Vec::new();
    let top = Fields::new(&root, "$".into(), &["sources", "observations"], &mut warnings)?;

    let mut census = Census::default();
    for (i, v) in array(top.obj, "sources")?.iter().enumerate() {
        let f = Fields::new(v, format!("sources[{i}]"), SOURCE_FIELDS, &mut warnings)?;
        census.sources.push(Source {
            key: f.required("key")?,
            title: f.required("title")?,
            culture: f.required("culture")?,
            publisher_url: f.optional("publisher_url")?,
            download_url: f.optional("download_url")?,
        });
    }
    for (i, v) in array(top.obj, "observations")?.iter().enumerate() {
        let f = Fields::new(v, format!("observations[{i}]"), OBSERVATION_FIELDS, &mut warnings)?;
        census.observations.push(Observation {
            id: f.required("id")?,
            semantic: f.required("semantic")?,
            culture: f.required("culture")?,
            symbol_name: f.required("symbol_name")?,
            source_key: f.required("source_key")?,
            locator: f.required("locator")?,
            image: f.required("image")?,
            unicode_repr: f.optional("unicode_repr")?,
            description: f.optional("description")?,
        });
    }
    Ok((census, warnings))
}

impl Census {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("census serializes")
    }

    pub fn source_keys(&self) -> HashSet<&str> {
        self.sources.iter().map(|s| s.key.as_str()).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FindingCode {
    /// Observation refers to a source key that is not in the bibliography.
    E001,
    /// Semantic is not of the form `cd/name`.
    E002,
    /// A required field is empty.
    E003,
    /// Two observations share an id.
    E004,
    /// Two sources share a key.
    E005,
    /// Observation has no character reproduction.
    W001,
    /// Referenced image is missing under the assets root.
    W002,
}

impl FindingCode {
    pub fn is_error(self) -> bool {
        !matches!(self, FindingCode::W001 | FindingCode::W002)
    }
}

impl fmt::Display for FindingCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Finding {
    pub code: FindingCode,
    pub path: String,
    pub message: String,
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}: {}", self.code, self.path, self.message)
    }
}

fn finding(code: FindingCode, path: String, message: String) -> Finding {
    Finding { code, path, message }
}

pub fn is_semantic(s: &str) -> bool {
    s.split_once('/')
        .is_some_and(|(cd, name)| is_identifier(cd) && is_identifier(name))
}

fn empty_fields(path: &str, fields: &[(&str, &str)], out: &mut Vec<Finding>) {
    for (name, value) in fields {
        if value.trim().is_empty() {
            out.push(finding(FindingCode::E003, format!("{path}.{name}"), format!("required field `{name}` is empty")));
        }
    }
}

/// Findings that concern one observation on its own, checked against the
/// census bibliography.
fn observation_findings(o: &Observation, path: &str, source_keys: &HashSet<&str>, assets: Option<&Path>) -> Vec<Finding> {
    let mut out = Vec::new();
    empty_fields(
        path,
        &[
            ("id", &o.id),
            ("semantic", &o.semantic),
            ("culture", &o.culture),
            ("symbol_name", &o.symbol_name),
            ("source_key", &o.source_key),
            ("locator", &o.locator),
            ("image", &o.image),
        ],
        &mut out,
    );
    if !o.semantic.trim().is_empty() && !is_semantic(&o.semantic) {
        out.push(finding(
            FindingCode::E002,
            format!("{path}.semantic"),
            format!("semantic `{}` is not of the form cd/name", o.semantic),
        ));
    }
    if !o.source_key.trim().is_empty() && !source_keys.contains(o.source_key.as_str()) {
        out.push(finding(
            FindingCode::E001,
            format!("{path}.source_key"),
            format!("source `{}` is not in the bibliography", o.source_key),
        ));
    }
    if o.unicode_repr.as_deref().is_none_or(str::is_empty) {
        out.push(finding(FindingCode::W001, format!("{path}.unicode_repr"), "no unicode reproduction".into()));
    }
    if let Some(root) = assets {
        if !o.image.trim().is_empty() && !root.join(&o.image).is_file() {
            out.push(finding(
                FindingCode::W002,
                format!("{path}.image"),
                format!("image `{}` not found under the assets root", o.image),
            ));
        }
    }
    out
}

/// Checks a census. Image files are only checked when `assets` is given.
pub fn validate_census(c: &Census, assets: Option<&Path>) -> Vec<Finding> {
    let mut out = Vec::new();
    let mut keys = HashSet::new();
    for (i, s) in c.sources.iter().enumerate() {
        let path = format!("sources[{i}]");
        empty_fields(&path, &[("key", &s.key), ("title", &s.title), ("culture", &s.culture)], &mut out);
        if !s.key.trim().is_empty() && !keys.insert(s.key.as_str()) {
            out.push(finding(FindingCode::E005, format!("{path}.key"), format!("duplicate source key `{}`", s.key)));
        }
    }
    let mut ids = HashSet::new();
    for (i, o) in c.observations.iter().enumerate() {
        let path = format!("observations[{i}]");
        out.extend(observation_findings(o, &path, &keys, assets));
        if !o.id.trim().is_empty() && !ids.insert(o.id.as_str()) {
            out.push(finding(FindingCode::E004, format!("{path}.id"), format!("duplicate observation id `{}`", o.id)));
        }
    }
    out
}

pub fn has_errors(findings: &[Finding]) -> bool {
    findings.iter().any(|f| f.code.is_error())
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CensusStats {
    pub observations: usize,
    pub sources: usize,
    pub per_semantic: BTreeMap<String, usize>,
    pub per_culture: BTreeMap<String, usize>,
    /// Semantics observed under at least two distinct cultures.
    pub multi_culture_semantics: Vec<String>,
}

pub fn census_stats(c: &Census) -> CensusStats {
    let mut stats = CensusStats {
        observations: c.observations.len(),
        sources: c.sources.len(),
        ..CensusStats::default()
    };
    let mut cultures: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    for o in &c.observations {
        *stats.per_semantic.entry(o.semantic.clone()).or_default() += 1;
        *stats.per_culture.entry(o.culture.clone()).or_default() += 1;
        cultures.entry(&o.semantic).or_default().insert(&o.culture);
    }
    stats.multi_culture_semantics = cultures
        .into_iter()
        .filter(|(_, c)| c.len() >= 2)
        .map(|(s, _)| s.to_owned())
        .collect();
    stats
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ImportError {
    #[error("observation `{id}` has errors: {}", findings.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Findings { id: String, findings: Vec<Finding> },
    #[error("observation `{id}`: culture `{culture}` does not start with a language subtag")]
    Culture { id: String, culture: String },
}

fn comment_safe(s: &str) -> String {
    // `--` may not appear inside an XML comment.
    let mut out = s.replace("--", "- -");
    if out.ends_with('-') {
        out.push(' ');
    }
    out
}

/// Produces a draft notation file for one observation of `census`.
pub fn import_observation(o: &Observation, census: &Census) -> Result<String, ImportError> {
    let errors: Vec<Finding> = observation_findings(o, "observation", &census.source_keys(), None)
        .into_iter()
        .filter(|f| f.code.is_error())
        .collect();
    if !errors.is_empty() {
        return Err(ImportError::Findings {
            id: o.id.clone(),
            findings: errors,
        });
    }
    let lang = Language::new(o.language_subtag()).map_err(|_| ImportError::Culture {
        id: o.id.clone(),
        culture: o.culture.clone(),
    })?;
    let (cd, name) = o.semantic.split_once('/').expect("validated semantic");
    let text = o
        .unicode_repr
        .as_deref()
        .filter(|s| !s.is_empty())
        .unwrap_or(&o.symbol_name);
    Ok(format!(
        concat!(
            "<notations>\n",
            "  <notation id=\"draft-{id}\" draft=\"true\" observation=\"{obs}\">\n",
            "    <!-- source: {source}; locator: {locator} -->\n",
            "    <prototype><OMS cd=\"{cd}\" name=\"{name}\"/></prototype>\n",
            "    <rendering lang=\"{lang}\" precedence=\"500\"><mtext>{text}</mtext></rendering>\n",
            "  </notation>\n",
            "</notations>\n",
        ),
        id = escape_attr(&o.id),
        obs = escape_attr(&o.id),
        source = comment_safe(&o.source_key),
        locator = comment_safe(&o.locator),
        cd = cd,
        name = name,
        lang = lang,
        text = escape_text(text),
    ))
}
