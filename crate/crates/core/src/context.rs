//! Rendering context and the rules deciding which rendering applies.
//!
//! A [`RenderContext`] places a reader along four dimensions: language,
//! output format, educational level and collection. A rendering carries a
//! [`ContextConstraint`]; it is eligible when every dimension it specifies is
//! satisfied, and among eligible renderings the one with the highest
//! [`Specificity`] wins.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ContextError {
    #[error("invalid language tag `{0}` (expected 2-8 lowercase ASCII letters)")]
    Language(String),
    #[error("invalid format `{0}` (expected mathml, latex or text)")]
    Format(String),
    #[error("invalid level `{0}` (expected 1-4)")]
    Level(String),
    #[error("invalid level range `{0}`")]
    LevelRange(String),
    #[error("invalid dimension order `{0}`")]
    DimensionOrder(String),
}

/// A lowercase language subtag such as `de` or `fr`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Language(String);

impl Language {
    pub fn new(tag: &str) -> Result<Self, ContextError> {
        if (2..=8).contains(&tag.len()) && tag.bytes().all(|b| b.is_ascii_lowercase()) {
            Ok(Language(tag.to_owned()))
        } else {
            Err(ContextError::Language(tag.to_owned()))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl TryFrom<String> for Language {
    type Error = ContextError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        Language::new(&s)
    }
}

impl From<Language> for String {
    fn from(l: Language) -> String {
        l.0
    }
}

impl FromStr for Language {
    type Err = ContextError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Language::new(s)
    }
}

impl fmt::Display for Language {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[serde(rename = "mathml")]
    MathMl,
    Latex,
    Text,
}

impl Format {
    pub const ALL: [Format; 3] = [Format::MathMl, Format::Latex, Format::Text];

    pub fn as_str(self) -> &'static str {
        match self {
            Format::MathMl => "mathml",
            Format::Latex => "latex",
            Format::Text => "text",
        }
    }
}

impl FromStr for Format {
    type Err = ContextError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "mathml" => Ok(Format::MathMl),
            "latex" => Ok(Format::Latex),
            "text" => Ok(Format::Text),
            _ => Err(ContextError::Format(s.to_owned())),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Educational level: 1 elementary, 2 secondary, 3 university entry,
/// 4 university.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct Level(u8);

impl Level {
    pub const MIN: u8 = 1;
    pub const MAX: u8 = 4;

    pub fn new(level: u8) -> Result<Self, ContextError> {
        if (Self::MIN..=Self::MAX).contains(&level) {
            Ok(Level(level))
        } else {
            Err(ContextError::Level(level.to_string()))
        }
    }

    pub fn get(self) -> u8 {
        self.0
    }

    pub fn all() -> impl Iterator<Item = Level> {
        (Self::MIN..=Self::MAX).map(Level)
    }
}

impl TryFrom<u8> for Level {
    type Error = ContextError;
    fn try_from(v: u8) -> Result<Self, Self::Error> {
        Level::new(v)
    }
}

impl From<Level> for u8 {
    fn from(l: Level) -> u8 {
        l.0
    }
}

impl FromStr for Level {
    type Err = ContextError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.parse::<u8>()
            .ok()
            .and_then(|v| Level::new(v).ok())
            .ok_or_else(|| ContextError::Level(s.to_owned()))
    }
}

/// Inclusive level range, `lo <= hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LevelRange {
    lo: Level,
    hi: Level,
}

impl LevelRange {
    pub fn new(lo: Level, hi: Level) -> Result<Self, ContextError> {
        if lo <= hi {
            Ok(LevelRange { lo, hi })
        } else {
            Err(ContextError::LevelRange(format!("{}-{}", lo.0, hi.0)))
        }
    }

    pub fn lo(self) -> Level {
        self.lo
    }

    pub fn hi(self) -> Level {
        self.hi
    }

    pub fn contains(self, level: Level) -> bool {
        self.lo <= level && level <= self.hi
    }

    pub fn is_full(self) -> bool {
        self.lo.0 == Level::MIN && self.hi.0 == Level::MAX
    }
}

/// `"3-4"` or a single level `"4"`.
impl FromStr for LevelRange {
    type Err = ContextError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ContextError::LevelRange(s.to_owned());
        let (lo, hi) = match s.split_once('-') {
            Some((lo, hi)) => (lo.trim(), hi.trim()),
            None => (s.trim(), s.trim()),
        };
        let lo: Level = lo.parse().map_err(|_| bad())?;
        let hi: Level = hi.parse().map_err(|_| bad())?;
        LevelRange::new(lo, hi).map_err(|_| bad())
    }
}

impl fmt::Display for LevelRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lo == self.hi {
            write!(f, "{}", self.lo.0)
        } else {
            write!(f, "{}-{}", self.lo.0, self.hi.0)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RenderContext {
    pub language: Language,
    pub format: Format,
    pub level: Level,
    /// Empty means the item belongs to no collection.
    pub collection: String,
}

impl RenderContext {
    pub fn new(language: Language, format: Format, level: Level, collection: impl Into<String>) -> Self {
        RenderContext {
            language,
            format,
            level,
            collection: collection.into(),
        }
    }

    /// Convenience constructor that panics on invalid input; meant for tests
    /// and literals.
    pub fn parse(language: &str, format: &str, level: u8, collection: &str) -> Self {
        RenderContext::new(
            Language::new(language).expect("language"),
            format.parse().expect("format"),
            Level::new(level).expect("level"),
            collection,
        )
    }
}

impl fmt::Display for RenderContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {:?})", self.language, self.format, self.level.0, self.collection)
    }
}

/// Conditions a rendering places on the context. Empty sets and `None`
/// leave a dimension unconstrained.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ContextConstraint {
    pub languages: BTreeSet<Language>,
    pub formats: BTreeSet<Format>,
    pub levels: Option<LevelRange>,
    pub collections: BTreeSet<String>,
}

/// The four context dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Dimension {
    Collection,
    Level,
    Language,
    Format,
}

impl FromStr for Dimension {
    type Err = ContextError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "collection" => Ok(Dimension::Collection),
            "level" => Ok(Dimension::Level),
            "language" => Ok(Dimension::Language),
            "format" => Ok(Dimension::Format),
            _ => Err(ContextError::DimensionOrder(s.to_owned())),
        }
    }
}

/// Priority of the dimensions when comparing specificities, highest first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DimensionOrder([Dimension; 4]);

impl Default for DimensionOrder {
    fn default() -> Self {
        DimensionOrder([Dimension::Collection, Dimension::Level, Dimension::Language, Dimension::Format])
    }
}

impl DimensionOrder {
    /// `order` must be a permutation of the four dimensions.
    pub fn new(order: [Dimension; 4]) -> Result<Self, ContextError> {
        let distinct: BTreeSet<_> = order.iter().map(|d| *d as u8).collect();
        if distinct.len() == 4 {
            Ok(DimensionOrder(order))
        } else {
            Err(ContextError::DimensionOrder(format!("{order:?}")))
        }
    }

    pub fn dimensions(&self) -> [Dimension; 4] {
        self.0
    }
}

/// Parses a comma-separated permutation such as `collection,level,language,format`.
impl FromStr for DimensionOrder {
    type Err = ContextError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let dims = s
            .split(',')
            .map(|d| d.trim().parse())
            .collect::<Result<Vec<Dimension>, _>>()?;
        let arr: [Dimension; 4] = dims
            .try_into()
            .map_err(|_| ContextError::DimensionOrder(s.to_owned()))?;
        DimensionOrder::new(arr)
    }
}

/// Which dimensions a rendering pinned down, ordered by priority.
/// Compared lexicographically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Specificity([u8; 4]);

impl Specificity {
    pub fn from_bits(bits: [u8; 4]) -> Self {
        debug_assert!(bits.iter().all(|b| *b <= 1));
        Specificity(bits)
    }

    pub fn bits(self) -> [u8; 4] {
        self.0
    }
}

impl fmt::Display for Specificity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.0;
        write!(f, "({a},{b},{c},{d})")
    }
}

impl ContextConstraint {
    pub fn is_specified(&self, dim: Dimension) -> bool {
        match dim {
            Dimension::Collection => !self.collections.is_empty(),
            Dimension::Level => self.levels.is_some(),
            Dimension::Language => !self.languages.is_empty(),
            Dimension::Format => !self.formats.is_empty(),
        }
    }

    pub fn language_ok(&self, language: &Language) -> bool {
        self.languages.is_empty() || self.languages.contains(language)
    }

    pub fn format_ok(&self, format: Format) -> bool {
        self.formats.is_empty() || self.formats.contains(&format)
    }

    pub fn level_ok(&self, level: Level) -> bool {
        self.levels.is_none_or(|r| r.contains(level))
    }

    /// An empty collection never satisfies a specified collection set.
    pub fn collection_ok(&self, collection: &str) -> bool {
        self.collections.is_empty() || (!collection.is_empty() && self.collections.contains(collection))
    }

    /// True when the level and collection dimensions hold for every possible
    /// delivery, i.e. the constraint only depends on language and format.
    pub fn dynamically_total(&self) -> bool {
        self.collections.is_empty() && self.levels.is_none_or(LevelRange::is_full)
    }

    /// Specificity under `order`, computed as if the constraint is eligible.
    pub fn specificity_bits(&self, order: &DimensionOrder) -> Specificity {
        let mut bits = [0u8; 4];
        for (slot, dim) in bits.iter_mut().zip(order.0) {
            *slot = u8::from(self.is_specified(dim));
        }
        Specificity(bits)
    }
}

pub fn eligible(c: &ContextConstraint, ctx: &RenderContext) -> bool {
    c.language_ok(&ctx.language) && c.format_ok(ctx.format) && c.level_ok(ctx.level) && c.collection_ok(&ctx.collection)
}

/// Specificity of an eligible constraint in the default dimension order.
/// `None` when `c` is not eligible under `ctx`.
pub fn specificity(c: &ContextConstraint, ctx: &RenderContext) -> Option<Specificity> {
    specificity_with(c, ctx, &DimensionOrder::default())
}

pub fn specificity_with(c: &ContextConstraint, ctx: &RenderContext, order: &DimensionOrder) -> Option<Specificity> {
    eligible(c, ctx).then(|| c.specificity_bits(order))
}
