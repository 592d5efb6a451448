//! Locale-dependent number formatting.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::om::{Decimal, OMObject};

const BUILTIN: &str = include_str!("../data/locales.json");
const FALLBACK_LANGUAGE: &str = "en";

/// Separators used to write numbers in one language.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocaleNumberSpec {
    pub decimal_sep: String,
    pub group_sep: String,
    pub group_size: usize,
    /// Integer parts with fewer digits than this are left ungrouped.
    pub min_grouping_digits: usize,
}

impl LocaleNumberSpec {
    pub fn new(decimal_sep: &str, group_sep: &str) -> Self {
        LocaleNumberSpec {
            decimal_sep: decimal_sep.to_owned(),
            group_sep: group_sep.to_owned(),
            group_size: 3,
            min_grouping_digits: 4,
        }
    }

    fn validate(&self, lang: &str) -> Result<(), LocaleError> {
        if self.decimal_sep.is_empty() || self.decimal_sep == self.group_sep {
            return Err(LocaleError::Invalid(lang.to_owned(), "decimal and group separators must differ".into()));
        }
        if self.group_size < 2 {
            return Err(LocaleError::Invalid(lang.to_owned(), "group_size must be at least 2".into()));
        }
        Ok(())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum LocaleError {
    #[error("locale table is not valid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("locale `{0}`: {1}")]
    Invalid(String, String),
}

/// Number specs per language. Unknown languages use the `en` entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocaleTable {
    specs: BTreeMap<String, LocaleNumberSpec>,
}

impl Default for LocaleTable {
    fn default() -> Self {
        LocaleTable::from_json(BUILTIN).expect("built-in locale table")
    }
}

impl LocaleTable {
    /// Parses a table of the form `{"de": {"decimal_sep": ",", ...}, ...}`.
    pub fn from_json(text: &str) -> Result<Self, LocaleError> {
        let specs: BTreeMap<String, LocaleNumberSpec> = serde_json::from_str(text)?;
        for (lang, spec) in &specs {
            spec.validate(lang)?;
        }
        Ok(LocaleTable { specs })
    }

    /// The built-in table with entries of `text` replacing or adding languages.
    pub fn with_overrides(mut self, text: &str) -> Result<Self, LocaleError> {
        let extra = LocaleTable::from_json(text)?;
        self.specs.extend(extra.specs);
        if !self.specs.contains_key(FALLBACK_LANGUAGE) {
            self.specs.insert(FALLBACK_LANGUAGE.into(), LocaleNumberSpec::new(".", ","));
        }
        Ok(self)
    }

    pub fn get(&self, language: &str) -> &LocaleNumberSpec {
        self.specs
            .get(language)
            .or_else(|| self.specs.get(FALLBACK_LANGUAGE))
            .expect("locale table always has a fallback entry")
    }

    pub fn languages(&self) -> impl Iterator<Item = &str> {
        self.specs.keys().map(String::as_str)
    }
}

fn group_digits(digits: &str, spec: &LocaleNumberSpec, out: &mut String) {
    if digits.len() < spec.min_grouping_digits {
        out.push_str(digits);
        return;
    }
    let head = digits.len() % spec.group_size;
    if head > 0 {
        out.push_str(&digits[..head]);
    }
    for (i, chunk) in digits.as_bytes()[head..].chunks(spec.group_size).enumerate() {
        if head > 0 || i > 0 {
            out.push_str(&spec.group_sep);
        }
        out.push_str(std::str::from_utf8(chunk).expect("ascii digits"));
    }
}

pub fn format_integer(value: &BigInt, spec: &LocaleNumberSpec) -> String {
    let mut out = String::new();
    if value.is_negative() {
        out.push('-');
    }
    group_digits(&value.abs().to_string(), spec, &mut out);
    out
}

pub fn format_decimal(value: &Decimal, spec: &LocaleNumberSpec) -> String {
    let mut out = String::new();
    if value.negative {
        out.push('-');
    }
    group_digits(&value.int_digits, spec, &mut out);
    if !value.frac_digits.is_empty() {
        out.push_str(&spec.decimal_sep);
        out.push_str(&value.frac_digits);
    }
    out
}

/// Formats integers and decimals; `None` for any other object.
pub fn format_number(num: &OMObject, spec: &LocaleNumberSpec) -> Option<String> {
    match num {
        OMObject::Integer(i) => Some(format_integer(i, spec)),
        OMObject::Decimal(d) => Some(format_decimal(d, spec)),
        _ => None,
    }
}
