//! Reader for notation definition files.
//!
//! ```xml
//! <notations xmlns:l="urn:notemill:layout">
//!   <notation id="binomial">
//!     <prototype>
//!       <OMA><OMS cd="combinat1" name="binomial"/><slot name="n"/><slot name="k"/></OMA>
//!     </prototype>
//!     <rendering lang="fr ru" precedence="1000">
//!       <msubsup><mi mathvariant="normal">C</mi><render slot="n"/><render slot="k"/></msubsup>
//!     </rendering>
//!     <rendering precedence="1000"><l:tex>\binom{<render slot="n"/>}{<render slot="k"/>}</l:tex></rendering>
//!   </notation>
//! </notations>
//! ```

use std::collections::{BTreeSet, HashMap};
use std::path::{Path, PathBuf};

use roxmltree::{Document, Node};

use super::{Notation, NotationStore, Pattern, Prototype, RenderSlot, Rendering, SlotKind, Template, TemplateNode, MAX_PRECEDENCE};
use crate::context::{ContextConstraint, Format, Language, LevelRange};
use crate::om::xml::{element_children, error_at, identifier_attr, is_om_namespace, parse_bvar_name, parse_leaf, required_attr, xml_error};
use crate::om::{is_identifier, OMObject, ParseError};

/// Namespace of the `l:tex` and `l:txt` template wrappers.
pub const LAYOUT_NS: &str = "urn:notemill:layout";
const MATHML_NS: &str = "http://www.w3.org/1998/Math/MathML";

const TOKEN_ELEMENTS: &[&str] = &["mi", "mn", "mo", "mtext", "ms"];
const LAYOUT_ELEMENTS: &[&str] = &[
    "mrow", "mfrac", "msqrt", "mroot", "mstyle", "merror", "mpadded", "mphantom", "menclose", "msub", "msup",
    "msubsup", "munder", "mover", "munderover", "mmultiscripts", "mprescripts", "none", "mtable", "mtr", "mtd",
    "mspace",
];

#[derive(Debug, thiserror::Error)]
pub enum NotationError {
    #[error("{file}:{line}:{column}: {reason}")]
    Format {
        file: String,
        line: u32,
        column: u32,
        reason: String,
    },
    #[error("duplicate notation id `{id}` in {first} and {second}")]
    DuplicateId { id: String, first: String, second: String },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, Copy, Default)]
pub struct LoadOptions {
    /// Accept notations marked `draft="true"`, reporting a warning for each.
    pub allow_drafts: bool,
}

/// A notation document and the name used for ordering and diagnostics.
#[derive(Debug, Clone)]
pub struct NotationFile {
    pub name: String,
    pub text: String,
}

impl NotationFile {
    pub fn new(name: impl Into<String>, text: impl Into<String>) -> Self {
        NotationFile {
            name: name.into(),
            text: text.into(),
        }
    }
}

/// Loads documents in file-name order and indexes them. Returns the store
/// and any warnings.
pub fn load_notations(files: &[NotationFile], options: LoadOptions) -> Result<(NotationStore, Vec<String>), NotationError> {
    let mut ordered: Vec<&NotationFile> = files.iter().collect();
    ordered.sort_by(|a, b| a.name.cmp(&b.name));

    let mut notations = Vec::new();
    let mut warnings = Vec::new();
    let mut seen: HashMap<String, String> = HashMap::new();
    for file in ordered {
        let format_err = |e: ParseError| NotationError::Format {
            file: file.name.clone(),
            line: e.line,
            column: e.column,
            reason: e.reason,
        };
        for n in parse_file(file, options, &mut warnings).map_err(format_err)? {
            if let Some(first) = seen.insert(n.id.clone(), file.name.clone()) {
                return Err(NotationError::DuplicateId {
                    id: n.id,
                    first,
                    second: file.name.clone(),
                });
            }
            notations.push(n);
        }
    }
    Ok((NotationStore::from_notations(notations), warnings))
}

impl NotationStore {
    /// Loads every `*.xml` file of `dir`.
    pub fn load_dir(dir: &Path, options: LoadOptions) -> Result<(NotationStore, Vec<String>), NotationError> {
        let io = |path: &Path| {
            let path = path.to_path_buf();
            move |source| NotationError::Io { path, source }
        };
        let mut files = Vec::new();
        for entry in std::fs::read_dir(dir).map_err(io(dir))? {
            let path = entry.map_err(io(dir))?.path();
            if path.extension().is_some_and(|e| e == "xml") && path.is_file() {
                let text = std::fs::read_to_string(&path).map_err(io(&path))?;
                let name = path.file_name().unwrap_or_default().to_string_lossy().into_owned();
                files.push(NotationFile::new(name, text));
            }
        }
        load_notations(&files, options)
    }
}

fn parse_file(file: &NotationFile, options: LoadOptions, warnings: &mut Vec<String>) -> Result<Vec<Notation>, ParseError> {
    let doc = Document::parse(&file.text).map_err(xml_error)?;
    let root = doc.root_element();
    if root.tag_name().name() != "notations" {
        return Err(error_at(&doc, root, "root element must be <notations>"));
    }
    element_children(&doc, root)?
        .into_iter()
        .map(|n| parse_notation(&doc, n, file, options, warnings))
        .collect()
}

fn parse_notation(
    doc: &Document,
    node: Node,
    file: &NotationFile,
    options: LoadOptions,
    warnings: &mut Vec<String>,
) -> Result<Notation, ParseError> {
    if node.tag_name().name() != "notation" {
        return Err(error_at(doc, node, format!("expected <notation>, found <{}>", node.tag_name().name())));
    }
    let id = required_attr(doc, node, "id")?.to_owned();
    if id.trim().is_empty() {
        return Err(error_at(doc, node, "notation id is empty"));
    }
    let draft = match node.attribute("draft") {
        None | Some("false") => false,
        Some("true") => true,
        Some(other) => return Err(error_at(doc, node, format!("draft must be true or false, not `{other}`"))),
    };
    if draft {
        if !options.allow_drafts {
            return Err(error_at(doc, node, format!("notation `{id}` is a draft (drafts are not allowed)")));
        }
        warnings.push(format!("{}: notation `{id}` is a draft", file.name));
    }
    for a in node.attributes() {
        if !matches!(a.name(), "id" | "draft" | "observation") {
            return Err(error_at(doc, node, format!("unknown notation attribute `{}`", a.name())));
        }
    }

    let children = element_children(doc, node)?;
    let (proto_node, rendering_nodes) = children
        .split_first()
        .filter(|(p, _)| p.tag_name().name() == "prototype")
        .ok_or_else(|| error_at(doc, node, format!("notation `{id}` must start with <prototype>")))?;
    let prototype = parse_prototype(doc, *proto_node)?;
    if rendering_nodes.is_empty() {
        return Err(error_at(doc, node, format!("notation `{id}` has no rendering")));
    }
    let renderings = rendering_nodes
        .iter()
        .map(|r| parse_rendering(doc, *r, &prototype))
        .collect::<Result<Vec<_>, _>>()?;

    Ok(Notation {
        id,
        prototype,
        renderings,
        source_observation: node.attribute("observation").map(str::to_owned),
        draft,
        file: file.name.clone(),
    })
}

fn parse_prototype(doc: &Document, node: Node) -> Result<Prototype, ParseError> {
    let children = element_children(doc, node)?;
    let [only] = children.as_slice() else {
        return Err(error_at(doc, node, "<prototype> must hold exactly one expression"));
    };
    let pattern = parse_pattern(doc, *only)?;
    Prototype::new(pattern).map_err(|r| error_at(doc, node, r))
}

fn parse_pattern(doc: &Document, node: Node) -> Result<Pattern, ParseError> {
    if node.tag_name().name() == "slot" && node.tag_name().namespace().is_none() {
        return parse_slot(doc, node);
    }
    if let Some(leaf) = parse_leaf(doc, node)? {
        return Ok(Pattern::Lit(leaf));
    }
    let tag = node.tag_name().name();
    if !is_om_namespace(node) {
        return Err(error_at(doc, node, format!("unknown element <{tag}> in prototype")));
    }
    match tag {
        "OMA" => {
            let children = element_children(doc, node)?;
            let (head, args) = children.split_first().ok_or_else(|| error_at(doc, node, "empty OMA"))?;
            Ok(Pattern::Apply {
                head: Box::new(parse_pattern(doc, *head)?),
                args: args.iter().map(|a| parse_pattern(doc, *a)).collect::<Result<_, _>>()?,
            })
        }
        "OMBIND" => {
            let children = element_children(doc, node)?;
            let [binder, bvar, body] = children.as_slice() else {
                return Err(error_at(doc, node, "OMBIND needs binder, OMBVAR and body"));
            };
            if bvar.tag_name().name() != "OMBVAR" {
                return Err(error_at(doc, *bvar, "expected <OMBVAR>"));
            }
            let vars = element_children(doc, *bvar)?
                .into_iter()
                .map(|v| {
                    if v.tag_name().name() == "slot" {
                        parse_slot(doc, v)
                    } else {
                        parse_bvar_name(doc, v).map(|n| Pattern::Lit(OMObject::Variable(n)))
                    }
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Pattern::Bind {
                binder: Box::new(parse_pattern(doc, *binder)?),
                vars,
                body: Box::new(parse_pattern(doc, *body)?),
            })
        }
        _ => Err(error_at(doc, node, format!("unknown element <{tag}> in prototype"))),
    }
}

fn parse_slot(doc: &Document, node: Node) -> Result<Pattern, ParseError> {
    let name = identifier_attr(doc, node, "name")?.to_owned();
    let kind = match node.attribute("kind") {
        None | Some("single") => SlotKind::Single,
        Some("sequence") => SlotKind::Sequence,
        Some(other) => return Err(error_at(doc, node, format!("unknown slot kind `{other}`"))),
    };
    Ok(Pattern::Slot { name, kind })
}

fn split_list(value: &str) -> impl Iterator<Item = &str> {
    value.split_whitespace()
}

fn parse_rendering(doc: &Document, node: Node, proto: &Prototype) -> Result<Rendering, ParseError> {
    if node.tag_name().name() != "rendering" {
        return Err(error_at(doc, node, format!("expected <rendering>, found <{}>", node.tag_name().name())));
    }
    let mut constraint = ContextConstraint::default();
    let mut precedence = None;
    let mut declared_formats = None;
    for a in node.attributes() {
        let v = a.value();
        match a.name() {
            "lang" => {
                constraint.languages = split_list(v)
                    .map(|t| Language::new(t).map_err(|e| error_at(doc, node, e.to_string())))
                    .collect::<Result<BTreeSet<_>, _>>()?;
            }
            "format" => {
                declared_formats = Some(
                    split_list(v)
                        .map(|t| t.parse::<Format>().map_err(|e| error_at(doc, node, e.to_string())))
                        .collect::<Result<BTreeSet<_>, _>>()?,
                );
            }
            "levels" => {
                constraint.levels = Some(v.parse::<LevelRange>().map_err(|e| error_at(doc, node, e.to_string()))?);
            }
            "collections" => {
                constraint.collections = split_list(v).map(str::to_owned).collect();
            }
            "precedence" => {
                let p = v
                    .trim()
                    .parse::<u32>()
                    .ok()
                    .filter(|p| *p <= MAX_PRECEDENCE)
                    .ok_or_else(|| error_at(doc, node, format!("precedence `{v}` is not an integer in 0..=1000")))?;
                precedence = Some(p);
            }
            other => return Err(error_at(doc, node, format!("unknown rendering attribute `{other}`"))),
        }
    }
    let precedence = precedence.ok_or_else(|| error_at(doc, node, "<rendering> is missing attribute `precedence`"))?;

    let template = parse_template(doc, node)?;
    if let Some(declared) = declared_formats {
        if declared.len() != 1 || !declared.contains(&template.target) {
            return Err(error_at(
                doc,
                node,
                format!("format attribute must be `{}` for this template body", template.target),
            ));
        }
    }
    constraint.formats = [template.target].into();
    check_template_slots(doc, node, &template, proto)?;
    Ok(Rendering {
        constraint,
        precedence,
        template,
    })
}

fn parse_template(doc: &Document, node: Node) -> Result<Template, ParseError> {
    let children = element_children(doc, node)?;
    if let [only] = children.as_slice() {
        if only.tag_name().namespace() == Some(LAYOUT_NS) {
            let target = match only.tag_name().name() {
                "tex" => Format::Latex,
                "txt" => Format::Text,
                other => return Err(error_at(doc, *only, format!("unknown layout element `{other}`"))),
            };
            return Ok(Template {
                target,
                nodes: parse_text_body(doc, *only, true)?,
            });
        }
    }
    if children.is_empty() {
        return Err(error_at(doc, node, "empty rendering"));
    }
    let nodes = children
        .iter()
        .map(|c| parse_mathml(doc, *c))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Template {
        target: Format::MathMl,
        nodes,
    })
}

fn parse_text_body(doc: &Document, node: Node, allow_slots: bool) -> Result<Vec<TemplateNode>, ParseError> {
    let mut out = Vec::new();
    for child in node.children() {
        if child.is_text() {
            let t = child.text().unwrap_or_default();
            if !t.is_empty() {
                out.push(TemplateNode::Text(t.to_owned()));
            }
        } else if child.is_element() {
            if allow_slots && child.tag_name().name() == "render" {
                out.push(TemplateNode::Slot(parse_render(doc, child, false)?));
            } else {
                return Err(error_at(doc, child, format!("unexpected <{}> in text template", child.tag_name().name())));
            }
        }
    }
    Ok(out)
}

fn parse_render(doc: &Document, node: Node, mathml: bool) -> Result<RenderSlot, ParseError> {
    let name = identifier_attr(doc, node, "slot")?.to_owned();
    let argprec = match node.attribute("argprec") {
        None => 0,
        Some(v) => v
            .trim()
            .parse::<u32>()
            .ok()
            .filter(|p| *p <= MAX_PRECEDENCE)
            .ok_or_else(|| error_at(doc, node, format!("argprec `{v}` is not an integer in 0..=1000")))?,
    };
    for a in node.attributes() {
        if !matches!(a.name(), "slot" | "argprec") {
            return Err(error_at(doc, node, format!("unknown render attribute `{}`", a.name())));
        }
    }
    let mut separator = None;
    for child in element_children(doc, node)? {
        if child.tag_name().name() != "sep" || separator.is_some() {
            return Err(error_at(doc, child, "<render> may only contain one <sep>"));
        }
        let sep = if mathml {
            element_children(doc, child)?
                .into_iter()
                .map(|c| {
                    if c.tag_name().name() == "render" {
                        Err(error_at(doc, c, "separators cannot contain slots"))
                    } else {
                        parse_mathml(doc, c)
                    }
                })
                .collect::<Result<Vec<_>, _>>()?
        } else {
            parse_text_body(doc, child, false)?
        };
        separator = Some(sep);
    }
    Ok(RenderSlot { name, argprec, separator })
}

fn parse_mathml(doc: &Document, node: Node) -> Result<TemplateNode, ParseError> {
    let tag = node.tag_name().name();
    if tag == "render" && node.tag_name().namespace().is_none() {
        return Ok(TemplateNode::Slot(parse_render(doc, node, true)?));
    }
    if !matches!(node.tag_name().namespace(), None | Some(MATHML_NS)) {
        return Err(error_at(doc, node, format!("<{tag}> is not a MathML element")));
    }
    let attrs = node
        .attributes()
        .map(|a| (a.name().to_owned(), a.value().to_owned()))
        .collect();
    if TOKEN_ELEMENTS.contains(&tag) {
        let mut text = String::new();
        for child in node.children() {
            if child.is_element() {
                return Err(error_at(doc, child, format!("token element <{tag}> may only contain text")));
            }
            if child.is_text() {
                text.push_str(child.text().unwrap_or_default());
            }
        }
        let text = text.trim();
        if text.is_empty() {
            return Err(error_at(doc, node, format!("token element <{tag}> is empty")));
        }
        return Ok(TemplateNode::Element {
            tag: tag.to_owned(),
            attrs,
            children: vec![TemplateNode::Text(text.to_owned())],
        });
    }
    if !LAYOUT_ELEMENTS.contains(&tag) {
        return Err(error_at(doc, node, format!("<{tag}> is not a supported MathML element")));
    }
    let children = element_children(doc, node)?
        .into_iter()
        .map(|c| parse_mathml(doc, c))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(TemplateNode::Element {
        tag: tag.to_owned(),
        attrs,
        children,
    })
}

fn check_template_slots(doc: &Document, node: Node, template: &Template, proto: &Prototype) -> Result<(), ParseError> {
    let refs = template.slot_refs();
    for r in &refs {
        match proto.slot_kind(&r.name) {
            None => {
                return Err(error_at(doc, node, format!("template uses slot `{}` which the prototype does not declare", r.name)));
            }
            Some(SlotKind::Single) if r.separator.is_some() => {
                return Err(error_at(doc, node, format!("<sep> on single slot `{}`", r.name)));
            }
            _ => {}
        }
    }
    for (name, kind) in proto.slots() {
        if *kind == SlotKind::Single && !refs.iter().any(|r| &r.name == name) {
            return Err(error_at(doc, node, format!("template never renders slot `{name}`")));
        }
    }
    debug_assert!(refs.iter().all(|r| is_identifier(&r.name)));
    Ok(())
}
