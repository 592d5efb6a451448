//! Presentation trees produced by rendering.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::context::Format;
use crate::xmlutil::{escape_attr, escape_text};

pub const MATHML_NS: &str = "http://www.w3.org/1998/Math/MathML";

/// Class attached to MathML output produced without a notation.
pub const FALLBACK_CLASS: &str = "notation-fallback";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PresNode {
    /// A MathML element.
    Element {
        tag: String,
        attrs: Vec<(String, String)>,
        children: Vec<PresNode>,
    },
    Text(String),
    /// Concatenation, used by the LaTeX and text targets. `fallback` marks
    /// output generated because no notation matched.
    Group { fallback: bool, children: Vec<PresNode> },
}

impl PresNode {
    pub fn element(tag: &str, attrs: Vec<(String, String)>, children: Vec<PresNode>) -> Self {
        PresNode::Element {
            tag: tag.to_owned(),
            attrs,
            children,
        }
    }

    pub fn token(tag: &str, text: impl Into<String>) -> Self {
        PresNode::element(tag, Vec::new(), vec![PresNode::Text(text.into())])
    }

    pub fn is_fallback(&self) -> bool {
        match self {
            PresNode::Element { attrs, .. } => attrs
                .iter()
                .any(|(k, v)| k == "class" && v.split_whitespace().any(|c| c == FALLBACK_CLASS)),
            PresNode::Group { fallback, .. } => *fallback,
            PresNode::Text(_) => false,
        }
    }

    /// Number of fallback-marked nodes in the tree.
    pub fn fallback_count(&self) -> usize {
        let own = usize::from(self.is_fallback());
        own + match self {
            PresNode::Element { children, .. } | PresNode::Group { children, .. } => {
                children.iter().map(PresNode::fallback_count).sum()
            }
            PresNode::Text(_) => 0,
        }
    }

    fn write_xml(&self, out: &mut String) {
        match self {
            PresNode::Element { tag, attrs, children } => {
                out.push('<');
                out.push_str(tag);
                for (k, v) in attrs {
                    out.push(' ');
                    out.push_str(k);
                    out.push_str("=\"");
                    out.push_str(&escape_attr(v));
                    out.push('"');
                }
                if children.is_empty() {
                    out.push_str("/>");
                    return;
                }
                out.push('>');
                for c in children {
                    c.write_xml(out);
                }
                out.push_str("</");
                out.push_str(tag);
                out.push('>');
            }
            PresNode::Text(t) => out.push_str(&escape_text(t)),
            PresNode::Group { children, .. } => {
                for c in children {
                    c.write_xml(out);
                }
            }
        }
    }

    fn write_plain(&self, out: &mut String) {
        match self {
            PresNode::Text(t) => out.push_str(t),
            PresNode::Element { children, .. } | PresNode::Group { children, .. } => {
                for c in children {
                    c.write_plain(out);
                }
            }
        }
    }
}

/// A rendered expression in one output format.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    pub format: Format,
    /// For MathML, the `math` element; otherwise a group.
    pub root: PresNode,
}

impl Presentation {
    /// Wraps a rendered expression as a complete document for `format`.
    pub fn new(format: Format, node: PresNode) -> Self {
        let root = match format {
            Format::MathMl => PresNode::element("math", vec![("xmlns".into(), MATHML_NS.into())], vec![node]),
            Format::Latex | Format::Text => node,
        };
        Presentation { format, root }
    }

    pub fn fallback_count(&self) -> usize {
        self.root.fallback_count()
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        match self.format {
            Format::MathMl => self.root.write_xml(&mut out),
            Format::Latex | Format::Text => self.root.write_plain(&mut out),
        }
        f.write_str(&out)
    }
}
