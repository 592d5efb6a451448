use num_bigint::BigInt;
use roxmltree::{Document, Node};

use super::{is_identifier, Decimal, OMObject, ParseError};
use crate::xmlutil::{escape_attr, escape_text};

pub(crate) const OPENMATH_NS: &str = "http://www.openmath.org/OpenMath";

/// Parses an `OMOBJ` document.
pub fn parse_om(input: &str) -> Result<OMObject, ParseError> {
    let doc = Document::parse(input).map_err(xml_error)?;
    let root = doc.root_element();
    expect_om_tag(&doc, root, "OMOBJ")?;
    let children = element_children(&doc, root)?;
    match children.as_slice() {
        [only] => parse_om_node(&doc, *only),
        [] => Err(error_at(&doc, root, "OMOBJ is empty")),
        _ => Err(error_at(&doc, root, "OMOBJ must contain exactly one object")),
    }
}

/// Emits the canonical encoding: no insignificant whitespace, no namespace.
pub fn serialize_om(obj: &OMObject) -> String {
    let mut out = String::from("<OMOBJ>");
    write_object(obj, &mut out);
    out.push_str("</OMOBJ>");
    out
}

fn write_object(obj: &OMObject, out: &mut String) {
    match obj {
        OMObject::Integer(i) => {
            out.push_str("<OMI>");
            out.push_str(&i.to_string());
            out.push_str("</OMI>");
        }
        OMObject::Decimal(d) => {
            out.push_str("<OMF dec=\"");
            out.push_str(&d.to_string());
            out.push_str("\"/>");
        }
        OMObject::Variable(name) => {
            out.push_str("<OMV name=\"");
            out.push_str(&escape_attr(name));
            out.push_str("\"/>");
        }
        OMObject::Symbol(s) => {
            out.push_str("<OMS cd=\"");
            out.push_str(&escape_attr(&s.cd));
            out.push_str("\" name=\"");
            out.push_str(&escape_attr(&s.name));
            out.push_str("\"/>");
        }
        OMObject::String(s) => {
            out.push_str("<OMSTR>");
            out.push_str(&escape_text(s));
            out.push_str("</OMSTR>");
        }
        OMObject::Apply { head, args } => {
            out.push_str("<OMA>");
            write_object(head, out);
            for a in args {
                write_object(a, out);
            }
            out.push_str("</OMA>");
        }
        OMObject::Bind { binder, vars, body } => {
            out.push_str("<OMBIND>");
            write_object(binder, out);
            out.push_str("<OMBVAR>");
            for v in vars {
                out.push_str("<OMV name=\"");
                out.push_str(&escape_attr(v));
                out.push_str("\"/>");
            }
            out.push_str("</OMBVAR>");
            write_object(body, out);
            out.push_str("</OMBIND>");
        }
    }
}

pub(crate) fn xml_error(e: roxmltree::Error) -> ParseError {
    let pos = e.pos();
    ParseError::new(pos.row, pos.col, e.to_string())
}

pub(crate) fn error_at(doc: &Document, node: Node, reason: impl Into<String>) -> ParseError {
    let pos = doc.text_pos_at(node.range().start);
    ParseError::new(pos.row, pos.col, reason)
}

pub(crate) fn is_om_namespace(node: Node) -> bool {
    matches!(node.tag_name().namespace(), None | Some(OPENMATH_NS))
}

fn expect_om_tag(doc: &Document, node: Node, tag: &str) -> Result<(), ParseError> {
    if node.tag_name().name() == tag && is_om_namespace(node) {
        Ok(())
    } else {
        Err(error_at(
            doc,
            node,
            format!("expected <{tag}>, found <{}>", node.tag_name().name()),
        ))
    }
}

/// Child elements of `node`; whitespace-only text is skipped, any other
/// text is an error.
pub(crate) fn element_children<'a, 'i>(
    doc: &Document,
    node: Node<'a, 'i>,
) -> Result<Vec<Node<'a, 'i>>, ParseError> {
    let mut out = Vec::new();
    for child in node.children() {
        if child.is_element() {
            out.push(child);
        } else if child.is_text() && !child.text().unwrap_or("").trim().is_empty() {
            return Err(error_at(doc, child, "unexpected text between elements"));
        }
    }
    Ok(out)
}

pub(crate) fn required_attr<'a>(
    doc: &Document,
    node: Node<'a, '_>,
    name: &str,
) -> Result<&'a str, ParseError> {
    node.attribute(name).ok_or_else(|| {
        error_at(
            doc,
            node,
            format!("<{}> is missing attribute `{name}`", node.tag_name().name()),
        )
    })
}

pub(crate) fn identifier_attr<'a>(
    doc: &Document,
    node: Node<'a, '_>,
    name: &str,
) -> Result<&'a str, ParseError> {
    let value = required_attr(doc, node, name)?;
    if is_identifier(value) {
        Ok(value)
    } else {
        Err(error_at(doc, node, format!("`{value}` is not a valid {name}")))
    }
}

/// Parses one of the leaf elements `OMI`, `OMF`, `OMV`, `OMS`, `OMSTR`.
/// Returns `Ok(None)` for any other element.
pub(crate) fn parse_leaf(doc: &Document, node: Node) -> Result<Option<OMObject>, ParseError> {
    if !is_om_namespace(node) {
        return Ok(None);
    }
    let obj = match node.tag_name().name() {
        "OMI" => {
            let text = leaf_text(doc, node)?;
            let value = text
                .trim()
                .parse::<BigInt>()
                .map_err(|_| error_at(doc, node, format!("`{}` is not an integer", text.trim())))?;
            OMObject::Integer(value)
        }
        "OMF" => {
            if node.attribute("hex").is_some() {
                return Err(error_at(doc, node, "OMF hex encoding is not supported"));
            }
            for a in node.attributes() {
                if a.name() != "dec" {
                    return Err(error_at(doc, node, format!("OMF does not accept attribute `{}`", a.name())));
                }
            }
            let dec = required_attr(doc, node, "dec")?;
            OMObject::Decimal(Decimal::parse(dec).map_err(|r| error_at(doc, node, r))?)
        }
        "OMV" => OMObject::Variable(identifier_attr(doc, node, "name")?.to_owned()),
        "OMS" => OMObject::sym(identifier_attr(doc, node, "cd")?, identifier_attr(doc, node, "name")?),
        "OMSTR" => OMObject::String(leaf_text(doc, node)?),
        _ => return Ok(None),
    };
    Ok(Some(obj))
}

fn leaf_text(doc: &Document, node: Node) -> Result<String, ParseError> {
    let mut text = String::new();
    for child in node.children() {
        if child.is_element() {
            return Err(error_at(doc, child, format!("<{}> may only contain text", node.tag_name().name())));
        }
        if child.is_text() {
            text.push_str(child.text().unwrap_or_default());
        }
    }
    Ok(text)
}

/// Names of the variables in an `OMBVAR` element.
pub(crate) fn parse_bvar_name(doc: &Document, node: Node) -> Result<String, ParseError> {
    if node.tag_name().name() != "OMV" || !is_om_namespace(node) {
        return Err(error_at(doc, node, "OMBVAR may only contain OMV elements"));
    }
    Ok(identifier_attr(doc, node, "name")?.to_owned())
}

pub(crate) fn parse_om_node(doc: &Document, node: Node) -> Result<OMObject, ParseError> {
    if let Some(leaf) = parse_leaf(doc, node)? {
        return Ok(leaf);
    }
    let tag = node.tag_name().name();
    if !is_om_namespace(node) {
        return Err(error_at(doc, node, format!("unknown element <{tag}>")));
    }
    match tag {
        "OMA" => {
            let children = element_children(doc, node)?;
            let (head, args) = children
                .split_first()
                .ok_or_else(|| error_at(doc, node, "empty OMA"))?;
            Ok(OMObject::apply(
                parse_om_node(doc, *head)?,
                args.iter().map(|a| parse_om_node(doc, *a)).collect::<Result<_, _>>()?,
            ))
        }
        "OMBIND" => {
            let children = element_children(doc, node)?;
            let [binder, bvar, body] = children.as_slice() else {
                return Err(error_at(doc, node, "OMBIND needs binder, OMBVAR and body"));
            };
            expect_om_tag(doc, *bvar, "OMBVAR")?;
            let vars = element_children(doc, *bvar)?
                .into_iter()
                .map(|v| parse_bvar_name(doc, v))
                .collect::<Result<Vec<_>, _>>()?;
            if vars.is_empty() {
                return Err(error_at(doc, *bvar, "OMBVAR binds no variables"));
            }
            Ok(OMObject::bind(parse_om_node(doc, *binder)?, vars, parse_om_node(doc, *body)?))
        }
        _ => Err(error_at(doc, node, format!("unknown element <{tag}>"))),
    }
}
