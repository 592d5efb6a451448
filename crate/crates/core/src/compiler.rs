//! Two-stage rendering.
//!
//! [`compile`] fixes the static dimensions of the context (language and
//! format) and does all prototype matching up front. Where the winning
//! rendering still depends on the educational level or the collection, the
//! compiled template keeps a [`Compiled::Branch`] whose guards are the
//! dynamic parts of the competing constraints, ranked as selection would
//! rank them. [`deliver`] resolves those branches for one reader without
//! touching the matcher.

use std::collections::BTreeSet;
use std::num::NonZeroUsize;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use lru::LruCache;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::context::{ContextConstraint, Format, Language, Level, LevelRange};
use crate::locale::{LocaleNumberSpec, LocaleTable};
use crate::notation::NotationStore;
use crate::om::{serialize_om, OMObject};
use crate::pres::{PresNode, Presentation};
use crate::renderer::{instantiate, render_fallback, render_leaf, wrap_if, Output};

pub const ARTIFACT_VERSION: u32 = 1;
pub const DEFAULT_CACHE_CAPACITY: usize = 10_000;

/// Dynamic residue of a rendering constraint.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Guard {
    pub levels: Option<LevelRange>,
    pub collections: BTreeSet<String>,
}

impl Guard {
    fn of(c: &ContextConstraint) -> Self {
        Guard {
            levels: c.levels,
            collections: c.collections.clone(),
        }
    }

    pub fn admits(&self, level: Level, collection: &str) -> bool {
        self.levels.is_none_or(|r| r.contains(level))
            && (self.collections.is_empty() || (!collection.is_empty() && self.collections.contains(collection)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arm {
    pub guard: Guard,
    pub body: Compiled,
}

/// A presentation tree with residual choices over level and collection.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Compiled {
    Lit(PresNode),
    Element {
        tag: String,
        attrs: Vec<(String, String)>,
        children: Vec<Compiled>,
    },
    Group {
        fallback: bool,
        children: Vec<Compiled>,
    },
    /// The first arm whose guard admits the delivery context wins, else `default`.
    Branch { arms: Vec<Arm>, default: Box<Compiled> },
}

fn all_lit(children: &[Compiled]) -> bool {
    children.iter().all(|c| matches!(c, Compiled::Lit(_)))
}

fn unwrap_lits(children: Vec<Compiled>) -> Vec<PresNode> {
    children
        .into_iter()
        .map(|c| match c {
            Compiled::Lit(n) => n,
            _ => unreachable!("checked by all_lit"),
        })
        .collect()
}

impl Output for Compiled {
    fn element(tag: &str, attrs: Vec<(String, String)>, children: Vec<Self>) -> Self {
        if all_lit(&children) {
            Compiled::Lit(PresNode::element(tag, attrs, unwrap_lits(children)))
        } else {
            Compiled::Element {
                tag: tag.to_owned(),
                attrs,
                children,
            }
        }
    }

    fn text(text: String) -> Self {
        Compiled::Lit(PresNode::Text(text))
    }

    fn group(fallback: bool, children: Vec<Self>) -> Self {
        if all_lit(&children) {
            Compiled::Lit(PresNode::Group {
                fallback,
                children: unwrap_lits(children),
            })
        } else {
            Compiled::Group { fallback, children }
        }
    }
}

impl Compiled {
    pub fn branch_count(&self) -> usize {
        match self {
            Compiled::Lit(_) => 0,
            Compiled::Element { children, .. } | Compiled::Group { children, .. } => {
                children.iter().map(Compiled::branch_count).sum()
            }
            Compiled::Branch { arms, default } => {
                1 + default.branch_count() + arms.iter().map(|a| a.body.branch_count()).sum::<usize>()
            }
        }
    }

    fn resolve(&self, level: Level, collection: &str) -> PresNode {
        match self {
            Compiled::Lit(n) => n.clone(),
            Compiled::Element { tag, attrs, children } => PresNode::Element {
                tag: tag.clone(),
                attrs: attrs.clone(),
                children: children.iter().map(|c| c.resolve(level, collection)).collect(),
            },
            Compiled::Group { fallback, children } => PresNode::Group {
                fallback: *fallback,
                children: children.iter().map(|c| c.resolve(level, collection)).collect(),
            },
            Compiled::Branch { arms, default } => arms
                .iter()
                .find(|a| a.guard.admits(level, collection))
                .map_or(default.as_ref(), |a| &a.body)
                .resolve(level, collection),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompiledTemplate {
    pub language: Language,
    pub format: Format,
    pub root: Compiled,
}

#[derive(Debug, thiserror::Error)]
pub enum ArtifactError {
    #[error("template artifact is not valid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("template artifact version {found} is not supported (expected {ARTIFACT_VERSION})")]
    Version { found: u32 },
}

#[derive(Serialize, Deserialize)]
struct Artifact {
    notemill_template: u32,
    language: Language,
    format: Format,
    root: Compiled,
}

impl CompiledTemplate {
    pub fn branch_count(&self) -> usize {
        self.root.branch_count()
    }

    /// Versioned JSON artifact, suitable for precompiling documents.
    pub fn to_artifact(&self) -> String {
        serde_json::to_string(&Artifact {
            notemill_template: ARTIFACT_VERSION,
            language: self.language.clone(),
            format: self.format,
            root: self.root.clone(),
        })
        .expect("compiled templates serialize")
    }

    pub fn from_artifact(text: &str) -> Result<Self, ArtifactError> {
        let version: serde_json::Value = serde_json::from_str(text)?;
        let found = version.get("notemill_template").and_then(serde_json::Value::as_u64).unwrap_or(0);
        if found != u64::from(ARTIFACT_VERSION) {
            return Err(ArtifactError::Version {
                found: u32::try_from(found).unwrap_or(u32::MAX),
            });
        }
        let a: Artifact = serde_json::from_value(version)?;
        Ok(CompiledTemplate {
            language: a.language,
            format: a.format,
            root: a.root,
        })
    }
}

struct Compiler<'a> {
    store: &'a NotationStore,
    locale: &'a LocaleNumberSpec,
    language: &'a Language,
    format: Format,
}

impl Compiler<'_> {
    fn node(&self, expr: &OMObject, argprec: u32) -> Compiled {
        if let Some((leaf, precedence)) = render_leaf(expr, self.format, self.locale) {
            return wrap_if(Compiled::Lit(leaf), precedence, argprec, self.format);
        }
        let mut arms: Vec<Arm> = Vec::new();
        let mut default = None;
        for cand in self.store.static_candidates(expr, self.language, self.format) {
            let constraint = &cand.rendering.constraint;
            let guard = Guard::of(constraint);
            if !constraint.dynamically_total() && arms.iter().any(|a| a.guard == guard) {
                continue;
            }
            let inner = instantiate(&cand.rendering.template, &cand.bindings, &mut |e, p| self.node(e, p));
            let body = wrap_if(inner, cand.rendering.precedence, argprec, self.format);
            if constraint.dynamically_total() {
                default = Some(body);
                break;
            }
            arms.push(Arm { guard, body });
        }
        let default = default.unwrap_or_else(|| render_fallback(expr, self.format, &mut |e, p| self.node(e, p)));
        if arms.is_empty() {
            default
        } else {
            Compiled::Branch {
                arms,
                default: Box::new(default),
            }
        }
    }
}

/// Specializes `expr` to a language and format.
pub fn compile(
    expr: &OMObject,
    store: &NotationStore,
    locales: &LocaleTable,
    language: &Language,
    format: Format,
) -> CompiledTemplate {
    let compiler = Compiler {
        store,
        locale: locales.get(language.as_str()),
        language,
        format,
    };
    CompiledTemplate {
        language: language.clone(),
        format,
        root: compiler.node(expr, 0),
    }
}

/// Resolves the remaining branches for one delivery.
pub fn deliver(template: &CompiledTemplate, level: Level, collection: &str) -> Presentation {
    Presentation::new(template.format, template.root.resolve(level, collection))
}

/// Cache key: content hash of the serialized expression plus the static
/// dimensions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CompileKey {
    digest: [u8; 32],
    language: Language,
    format: Format,
}

impl CompileKey {
    pub fn new(expr: &OMObject, language: &Language, format: Format) -> Self {
        CompileKey::from_serialized(&serialize_om(expr), language, format)
    }

    fn from_serialized(serialized: &str, language: &Language, format: Format) -> Self {
        let mut digest = [0u8; 32];
        digest.copy_from_slice(&Sha256::digest(serialized.as_bytes()));
        CompileKey {
            digest,
            language: language.clone(),
            format,
        }
    }
}

struct Entry {
    // Compared on every hit; the digest only locates the entry.
    source: Arc<str>,
    template: Arc<CompiledTemplate>,
}

/// Bounded LRU cache of compiled templates.
///
/// A cache must only ever be used with one store and locale table, since
/// neither is part of the key. Concurrent callers may compile the same key
/// twice; the first result inserted is the one kept and returned to both.
pub struct TemplateCache {
    entries: Mutex<LruCache<CompileKey, Entry>>,
    hits: AtomicU64,
    misses: AtomicU64,
}

impl Default for TemplateCache {
    fn default() -> Self {
        TemplateCache::new(NonZeroUsize::new(DEFAULT_CACHE_CAPACITY).expect("nonzero"))
    }
}

impl std::fmt::Debug for TemplateCache {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TemplateCache")
            .field("len", &self.len())
            .field("hits", &self.hits())
            .field("misses", &self.misses())
            .finish()
    }
}

impl TemplateCache {
    pub fn new(capacity: NonZeroUsize) -> Self {
        TemplateCache {
            entries: Mutex::new(LruCache::new(capacity)),
            hits: AtomicU64::new(0),
            misses: AtomicU64::new(0),
        }
    }

    pub fn hits(&self) -> u64 {
        self.hits.load(Ordering::Relaxed)
    }

    pub fn misses(&self) -> u64 {
        self.misses.load(Ordering::Relaxed)
    }

    pub fn len(&self) -> usize {
        self.entries.lock().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get_or_compile(
        &self,
        expr: &OMObject,
        store: &NotationStore,
        locales: &LocaleTable,
        language: &Language,
        format: Format,
    ) -> Arc<CompiledTemplate> {
        let source = serialize_om(expr);
        let key = CompileKey::from_serialized(&source, language, format);
        {
            let mut entries = self.entries.lock().expect("cache lock");
            if let Some(e) = entries.get(&key) {
                if *e.source == *source {
                    self.hits.fetch_add(1, Ordering::Relaxed);
                    return Arc::clone(&e.template);
                }
            }
        }
        self.misses.fetch_add(1, Ordering::Relaxed);
        let template = Arc::new(compile(expr, store, locales, language, format));

        let mut entries = self.entries.lock().expect("cache lock");
        if let Some(e) = entries.get(&key) {
            if *e.source == *source {
                return Arc::clone(&e.template);
            }
        }
        entries.put(
            key,
            Entry {
                source: source.into(),
                template: Arc::clone(&template),
            },
        );
        template
    }
}
