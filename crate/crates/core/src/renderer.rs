//! Recursive rendering of expressions through a notation store.
//!
//! Numbers, variables and strings are rendered directly. Every other node
//! goes through [`NotationStore::select`]; the winning template is
//! instantiated with its slots rendered recursively, and a child is wrapped
//! in parentheses when its precedence is below the slot's `argprec`. Nodes
//! without a notation use the generic `cd.name(args)` form, marked so that
//! gaps in the notation set can be detected.
//!
//! The instantiation code is generic over [`Output`] so that the compiler
//! can reuse it to build templates with residual branches.

use std::sync::LazyLock;

use crate::context::{Format, RenderContext};
use crate::locale::{format_number, LocaleNumberSpec, LocaleTable};
use crate::matcher::{Binding, Bindings};
use crate::notation::{NotationStore, Template, TemplateNode, MAX_PRECEDENCE};
use crate::om::OMObject;
use crate::pres::{PresNode, Presentation, FALLBACK_CLASS};

/// Precedence of numbers, variables, strings and fallback output.
pub const ATOM_PRECEDENCE: u32 = MAX_PRECEDENCE;

/// Precedence of negative number literals, which read like a prefix minus.
pub const NEGATIVE_NUMBER_PRECEDENCE: u32 = 250;

static DEFAULT_LOCALES: LazyLock<LocaleTable> = LazyLock::new(LocaleTable::default);

/// Builder interface shared by direct rendering and compilation.
pub(crate) trait Output: Sized {
    fn element(tag: &str, attrs: Vec<(String, String)>, children: Vec<Self>) -> Self;
    fn text(text: String) -> Self;
    fn group(fallback: bool, children: Vec<Self>) -> Self;
}

impl Output for PresNode {
    fn element(tag: &str, attrs: Vec<(String, String)>, children: Vec<Self>) -> Self {
        PresNode::element(tag, attrs, children)
    }

    fn text(text: String) -> Self {
        PresNode::Text(text)
    }

    fn group(fallback: bool, children: Vec<Self>) -> Self {
        PresNode::Group { fallback, children }
    }
}

fn token<T: Output>(tag: &str, text: impl Into<String>) -> T {
    T::element(tag, Vec::new(), vec![T::text(text.into())])
}

/// Parenthesizes `inner` for the target format.
pub(crate) fn wrap<T: Output>(inner: T, format: Format) -> T {
    match format {
        Format::MathMl => T::element("mrow", Vec::new(), vec![token("mo", "("), inner, token("mo", ")")]),
        Format::Latex => T::group(false, vec![T::text("\\left(".into()), inner, T::text("\\right)".into())]),
        Format::Text => T::group(false, vec![T::text("(".into()), inner, T::text(")".into())]),
    }
}

pub(crate) fn wrap_if<T: Output>(inner: T, precedence: u32, argprec: u32, format: Format) -> T {
    if precedence < argprec {
        wrap(inner, format)
    } else {
        inner
    }
}

pub(crate) fn latex_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\backslash{}"),
            '{' | '}' | '_' | '#' | '$' | '%' | '&' => {
                out.push('\\');
                out.push(c);
            }
            '^' => out.push_str("\\^{}"),
            '~' => out.push_str("\\~{}"),
            _ => out.push(c),
        }
    }
    out
}

fn latex_number(s: &str) -> String {
    s.replace(',', "{,}").replace('\u{a0}', "\\,")
}

/// Renders numbers, variables and strings. `None` for every other object.
pub(crate) fn render_leaf(expr: &OMObject, format: Format, locale: &LocaleNumberSpec) -> Option<(PresNode, u32)> {
    let node = match expr {
        OMObject::Integer(_) | OMObject::Decimal(_) => {
            let text = format_number(expr, locale)?;
            let precedence = if text.starts_with('-') {
                NEGATIVE_NUMBER_PRECEDENCE
            } else {
                ATOM_PRECEDENCE
            };
            let node = match format {
                Format::MathMl => token("mn", text),
                Format::Latex => PresNode::Text(latex_number(&text)),
                Format::Text => PresNode::Text(text),
            };
            return Some((node, precedence));
        }
        OMObject::Variable(name) => match format {
            Format::MathMl => token("mi", name.as_str()),
            Format::Latex if name.chars().count() == 1 => PresNode::Text(name.clone()),
            Format::Latex => PresNode::Text(format!("\\mathit{{{}}}", latex_escape(name))),
            Format::Text => PresNode::Text(name.clone()),
        },
        OMObject::String(s) => match format {
            Format::MathMl if s.is_empty() => PresNode::element("mspace", Vec::new(), Vec::new()),
            Format::MathMl => token("mtext", s.as_str()),
            Format::Latex => PresNode::Text(format!("\\text{{{}}}", latex_escape(s))),
            Format::Text => PresNode::Text(s.clone()),
        },
        _ => return None,
    };
    Some((node, ATOM_PRECEDENCE))
}

/// Fills `template` with rendered bindings. `child` renders a bound subtree
/// for a slot with the given argprec, wrapping it as needed.
pub(crate) fn instantiate<T: Output>(
    template: &Template,
    bindings: &Bindings,
    child: &mut dyn FnMut(&OMObject, u32) -> T,
) -> T {
    let mut nodes = Vec::new();
    fill(&template.nodes, bindings, child, &mut nodes);
    match template.target {
        Format::MathMl if nodes.len() == 1 => nodes.pop().expect("one node"),
        Format::MathMl => T::element("mrow", Vec::new(), nodes),
        Format::Latex | Format::Text => T::group(false, nodes),
    }
}

fn fill<T: Output>(
    nodes: &[TemplateNode],
    bindings: &Bindings,
    child: &mut dyn FnMut(&OMObject, u32) -> T,
    out: &mut Vec<T>,
) {
    for node in nodes {
        match node {
            TemplateNode::Element { tag, attrs, children } => {
                let mut inner = Vec::new();
                fill(children, bindings, child, &mut inner);
                out.push(T::element(tag, attrs.clone(), inner));
            }
            TemplateNode::Text(t) => out.push(T::text(t.clone())),
            TemplateNode::Slot(slot) => match bindings.get(&slot.name) {
                Some(Binding::Single(obj)) => out.push(child(obj, slot.argprec)),
                Some(Binding::Sequence(items)) => {
                    for (i, obj) in items.iter().enumerate() {
                        if i > 0 {
                            if let Some(sep) = &slot.separator {
                                fill(sep, bindings, child, out);
                            }
                        }
                        out.push(child(obj, slot.argprec));
                    }
                }
                None => debug_assert!(false, "template slot `{}` is unbound", slot.name),
            },
        }
    }
}

fn fallback_name<T: Output>(cd: &str, name: &str, format: Format) -> T {
    let ident = format!("{cd}.{name}");
    match format {
        Format::MathMl => token("mi", ident),
        Format::Latex => T::text(format!("\\mathrm{{{}}}", latex_escape(&ident))),
        Format::Text => T::text(ident),
    }
}

/// Generic form for nodes without a notation: `cd.name`, `cd.name(a, b)`
/// or `cd.name(x, y; body)`. Symbol-headed output carries the fallback marker.
pub(crate) fn render_fallback<T: Output>(
    expr: &OMObject,
    format: Format,
    child: &mut dyn FnMut(&OMObject, u32) -> T,
) -> T {
    let marked = |fallback: bool, children: Vec<T>| match format {
        Format::MathMl => {
            let attrs = if fallback {
                vec![("class".to_owned(), FALLBACK_CLASS.to_owned())]
            } else {
                Vec::new()
            };
            T::element("mrow", attrs, children)
        }
        Format::Latex | Format::Text => T::group(fallback, children),
    };
    let punct = |p: &str| match format {
        Format::MathMl => token("mo", p),
        Format::Latex | Format::Text => T::text(p.to_owned()),
    };
    let comma = || match format {
        Format::MathMl => token("mo", ","),
        Format::Latex | Format::Text => T::text(", ".into()),
    };

    match expr {
        OMObject::Symbol(s) => match format {
            Format::MathMl => T::element(
                "mi",
                vec![("class".to_owned(), FALLBACK_CLASS.to_owned())],
                vec![T::text(format!("{}.{}", s.cd, s.name))],
            ),
            _ => T::group(true, vec![fallback_name(&s.cd, &s.name, format)]),
        },
        OMObject::Apply { head: h, args } => {
            let (head_node, is_symbol) = match h.as_ref() {
                OMObject::Symbol(s) => (fallback_name(&s.cd, &s.name, format), true),
                other => (child(other, ATOM_PRECEDENCE), false),
            };
            let mut parts = vec![head_node, punct("(")];
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    parts.push(comma());
                }
                parts.push(child(a, 0));
            }
            parts.push(punct(")"));
            marked(is_symbol, parts)
        }
        OMObject::Bind { binder, vars, body } => {
            let (head_node, is_symbol) = match binder.as_ref() {
                OMObject::Symbol(s) => (fallback_name(&s.cd, &s.name, format), true),
                other => (child(other, ATOM_PRECEDENCE), false),
            };
            let mut parts = vec![head_node, punct("(")];
            for (i, v) in vars.iter().enumerate() {
                if i > 0 {
                    parts.push(comma());
                }
                parts.push(child(&OMObject::Variable(v.clone()), 0));
            }
            parts.push(match format {
                Format::MathMl => token("mo", ";"),
                Format::Latex | Format::Text => T::text("; ".into()),
            });
            parts.push(child(body, 0));
            parts.push(punct(")"));
            marked(is_symbol, parts)
        }
        _ => unreachable!("leaves are rendered by render_leaf"),
    }
}

/// Direct renderer: selects notations under a complete context.
#[derive(Debug, Clone, Copy)]
pub struct Renderer<'a> {
    store: &'a NotationStore,
    locales: &'a LocaleTable,
}

impl<'a> Renderer<'a> {
    pub fn new(store: &'a NotationStore, locales: &'a LocaleTable) -> Self {
        Renderer { store, locales }
    }

    pub fn render(&self, expr: &OMObject, ctx: &RenderContext) -> Presentation {
        Presentation::new(ctx.format, self.node(expr, ctx, 0))
    }

    /// Renders `expr` with the generic form at the root, whatever notations
    /// exist for it. Subexpressions are rendered normally.
    pub fn render_fallback(&self, expr: &OMObject, ctx: &RenderContext) -> Presentation {
        let node = match render_leaf(expr, ctx.format, self.locales.get(ctx.language.as_str())) {
            Some((leaf, _)) => leaf,
            None => render_fallback(expr, ctx.format, &mut |e, p| self.node(e, ctx, p)),
        };
        Presentation::new(ctx.format, node)
    }

    fn node(&self, expr: &OMObject, ctx: &RenderContext, argprec: u32) -> PresNode {
        if let Some((leaf, precedence)) = render_leaf(expr, ctx.format, self.locales.get(ctx.language.as_str())) {
            return wrap_if(leaf, precedence, argprec, ctx.format);
        }
        match self.store.select(expr, ctx) {
            Some(sel) => {
                let inner = instantiate(&sel.rendering.template, &sel.bindings, &mut |e, p| self.node(e, ctx, p));
                wrap_if(inner, sel.rendering.precedence, argprec, ctx.format)
            }
            None => render_fallback(expr, ctx.format, &mut |e, p| self.node(e, ctx, p)),
        }
    }
}

/// Renders with the built-in locale table.
pub fn render(expr: &OMObject, store: &NotationStore, ctx: &RenderContext) -> Presentation {
    Renderer::new(store, &DEFAULT_LOCALES).render(expr, ctx)
}

pub fn fallback_render(expr: &OMObject, store: &NotationStore, ctx: &RenderContext) -> Presentation {
    Renderer::new(store, &DEFAULT_LOCALES).render_fallback(expr, ctx)
}
