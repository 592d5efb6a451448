//! Culture-aware rendering of OpenMath expressions.
//!
//! Notation definitions pair a semantic prototype with context-constrained
//! presentation templates. An expression is rendered by matching it against
//! the prototypes and picking, for each subterm, the rendering that best fits
//! the reader's language, output format, educational level and collection.
//! Rendering can be split into a compile step over the static dimensions and
//! a cheap per-reader delivery step.

pub mod census;
pub mod compiler;
pub mod context;
pub mod locale;
pub mod matcher;
pub mod notation;
pub mod om;
pub mod pres;
pub mod renderer;
mod xmlutil;

pub use compiler::{compile, deliver, CompileKey, CompiledTemplate, TemplateCache};
pub use context::{ContextConstraint, Format, Language, Level, RenderContext};
pub use locale::{format_number, LocaleNumberSpec, LocaleTable};
pub use notation::{load_notations, LoadOptions, NotationError, NotationFile, NotationStore};
pub use om::{parse_compact, parse_om, serialize_om, to_compact, OMObject, ParseError, Symbol};
pub use pres::{PresNode, Presentation};
pub use renderer::{fallback_render, render, Renderer};
