//! Notation definitions and the store that selects among them.
//!
//! A [`Notation`] pairs one semantic [`Prototype`] with an ordered list of
//! [`Rendering`]s, each constrained to a cultural context. The
//! [`NotationStore`] indexes notations by head symbol and, for a given
//! expression and context, picks the rendering to use ([`NotationStore::select`]).

mod loader;

use std::collections::{BTreeSet, HashMap};

use crate::context::{eligible, ContextConstraint, DimensionOrder, Format, Language, RenderContext, Specificity};
use crate::matcher::{match_prototype, Bindings};
use crate::om::{OMObject, Symbol};

pub use loader::{load_notations, LoadOptions, NotationError, NotationFile};

pub const MAX_PRECEDENCE: u32 = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SlotKind {
    Single,
    Sequence,
}

/// An expression pattern. Leaves without slots are stored as [`Pattern::Lit`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Pattern {
    Slot { name: String, kind: SlotKind },
    Lit(OMObject),
    Apply { head: Box<Pattern>, args: Vec<Pattern> },
    /// `vars` holds `Lit(Variable)` or slots that capture variables.
    Bind { binder: Box<Pattern>, vars: Vec<Pattern>, body: Box<Pattern> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Prototype {
    pattern: Pattern,
    head: Symbol,
    slots: Vec<(String, SlotKind)>,
}

impl Prototype {
    /// Checks the prototype invariants: concrete symbol in head position,
    /// unique slot names, at most one sequence slot, which must close an
    /// argument or bound-variable list.
    pub fn new(pattern: Pattern) -> Result<Self, String> {
        let head = match &pattern {
            Pattern::Lit(OMObject::Symbol(s)) => s.clone(),
            Pattern::Apply { head, .. } | Pattern::Bind { binder: head, .. } => match head.as_ref() {
                Pattern::Lit(OMObject::Symbol(s)) => s.clone(),
                _ => return Err("prototype head must be a concrete symbol".into()),
            },
            _ => return Err("prototype must be a symbol, application or binding".into()),
        };
        let mut slots = Vec::new();
        collect_slots(&pattern, false, &mut slots)?;
        let mut seen = BTreeSet::new();
        for (name, _) in &slots {
            if !seen.insert(name.as_str()) {
                return Err(format!("slot `{name}` occurs more than once"));
            }
        }
        if slots.iter().filter(|(_, k)| *k == SlotKind::Sequence).count() > 1 {
            return Err("at most one sequence slot is allowed".into());
        }
        Ok(Prototype { pattern, head, slots })
    }

    pub fn pattern(&self) -> &Pattern {
        &self.pattern
    }

    pub fn head(&self) -> &Symbol {
        &self.head
    }

    /// Slots in left-to-right order.
    pub fn slots(&self) -> &[(String, SlotKind)] {
        &self.slots
    }

    pub fn slot_kind(&self, name: &str) -> Option<SlotKind> {
        self.slots.iter().find(|(n, _)| n == name).map(|(_, k)| *k)
    }
}

fn collect_slots(p: &Pattern, seq_allowed: bool, out: &mut Vec<(String, SlotKind)>) -> Result<(), String> {
    match p {
        Pattern::Slot { name, kind } => {
            if *kind == SlotKind::Sequence && !seq_allowed {
                return Err(format!("sequence slot `{name}` must be the last argument"));
            }
            out.push((name.clone(), *kind));
        }
        Pattern::Lit(_) => {}
        Pattern::Apply { head, args } => {
            collect_slots(head, false, out)?;
            collect_list(args, out)?;
        }
        Pattern::Bind { binder, vars, body } => {
            collect_slots(binder, false, out)?;
            if vars.is_empty() {
                return Err("binding pattern binds no variables".into());
            }
            for v in vars {
                if !matches!(v, Pattern::Slot { .. } | Pattern::Lit(OMObject::Variable(_))) {
                    return Err("bound variables must be variables or slots".into());
                }
            }
            collect_list(vars, out)?;
            collect_slots(body, false, out)?;
        }
    }
    Ok(())
}

fn collect_list(items: &[Pattern], out: &mut Vec<(String, SlotKind)>) -> Result<(), String> {
    for (i, item) in items.iter().enumerate() {
        collect_slots(item, i + 1 == items.len(), out)?;
    }
    Ok(())
}

/// A substitution point inside a template.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RenderSlot {
    pub name: String,
    /// A child whose own precedence is below this value gets parenthesized.
    pub argprec: u32,
    /// Placed between the items of a sequence slot.
    pub separator: Option<Vec<TemplateNode>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TemplateNode {
    /// A MathML element; only present in MathML templates.
    Element {
        tag: String,
        attrs: Vec<(String, String)>,
        children: Vec<TemplateNode>,
    },
    Text(String),
    Slot(RenderSlot),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Template {
    /// The output format the template's tokens are written for.
    pub target: Format,
    pub nodes: Vec<TemplateNode>,
}

impl Template {
    /// Every slot reference in document order, separators excluded.
    pub fn slot_refs(&self) -> Vec<&RenderSlot> {
        fn walk<'a>(nodes: &'a [TemplateNode], out: &mut Vec<&'a RenderSlot>) {
            for n in nodes {
                match n {
                    TemplateNode::Element { children, .. } => walk(children, out),
                    TemplateNode::Text(_) => {}
                    TemplateNode::Slot(s) => out.push(s),
                }
            }
        }
        let mut out = Vec::new();
        walk(&self.nodes, &mut out);
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rendering {
    pub constraint: ContextConstraint,
    pub precedence: u32,
    pub template: Template,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Notation {
    pub id: String,
    pub prototype: Prototype,
    pub renderings: Vec<Rendering>,
    pub source_observation: Option<String>,
    pub draft: bool,
    /// File the notation was loaded from.
    pub file: String,
}

/// The winning candidate for an expression under a context.
#[derive(Debug, Clone)]
pub struct Selection<'s> {
    pub notation: &'s Notation,
    pub rendering: &'s Rendering,
    pub rendering_index: usize,
    pub bindings: Bindings,
}

/// A rendering whose prototype matched, with its fixed specificity.
#[derive(Debug, Clone)]
pub struct Candidate<'s> {
    pub notation: &'s Notation,
    pub rendering: &'s Rendering,
    pub rendering_index: usize,
    pub bindings: Bindings,
    pub specificity: Specificity,
}

/// Immutable, head-symbol indexed collection of notations.
#[derive(Debug, Clone, Default)]
pub struct NotationStore {
    notations: Vec<Notation>,
    index: HashMap<Symbol, Vec<usize>>,
    order: DimensionOrder,
}

impl NotationStore {
    pub(crate) fn from_notations(notations: Vec<Notation>) -> Self {
        let mut index: HashMap<Symbol, Vec<usize>> = HashMap::new();
        for (i, n) in notations.iter().enumerate() {
            index.entry(n.prototype.head().clone()).or_default().push(i);
        }
        NotationStore {
            notations,
            index,
            order: DimensionOrder::default(),
        }
    }

    /// Replaces the dimension priority used to rank eligible renderings.
    pub fn with_dimension_order(mut self, order: DimensionOrder) -> Self {
        self.order = order;
        self
    }

    pub fn dimension_order(&self) -> &DimensionOrder {
        &self.order
    }

    /// All notations in declaration order.
    pub fn notations(&self) -> &[Notation] {
        &self.notations
    }

    pub fn len(&self) -> usize {
        self.notations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.notations.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&Notation> {
        self.notations.iter().find(|n| n.id == id)
    }

    /// Notations whose head is `head`, in declaration order.
    pub fn by_head(&self, head: &Symbol) -> impl Iterator<Item = &Notation> {
        self.index
            .get(head)
            .into_iter()
            .flatten()
            .map(move |&i| &self.notations[i])
    }

    /// Collection ids mentioned by any rendering constraint.
    pub fn collections(&self) -> BTreeSet<&str> {
        self.notations
            .iter()
            .flat_map(|n| &n.renderings)
            .flat_map(|r| r.constraint.collections.iter().map(String::as_str))
            .collect()
    }

    /// Languages mentioned by any rendering constraint.
    pub fn languages(&self) -> BTreeSet<&Language> {
        self.notations
            .iter()
            .flat_map(|n| &n.renderings)
            .flat_map(|r| r.constraint.languages.iter())
            .collect()
    }

    /// Among renderings whose prototype matches `expr` and whose constraint
    /// is eligible under `ctx`, the one of highest specificity; on ties the
    /// earliest declared.
    pub fn select(&self, expr: &OMObject, ctx: &RenderContext) -> Option<Selection<'_>> {
        let head = expr.head_symbol()?;
        let mut best: Option<(Specificity, Selection<'_>)> = None;
        for notation in self.by_head(head) {
            let Some(bindings) = match_prototype(&notation.prototype, expr) else {
                continue;
            };
            for (i, rendering) in notation.renderings.iter().enumerate() {
                if !eligible(&rendering.constraint, ctx) {
                    continue;
                }
                let spec = rendering.constraint.specificity_bits(&self.order);
                if best.as_ref().is_none_or(|(s, _)| spec > *s) {
                    best = Some((
                        spec,
                        Selection {
                            notation,
                            rendering,
                            rendering_index: i,
                            bindings: bindings.clone(),
                        },
                    ));
                }
            }
        }
        best.map(|(_, s)| s)
    }

    /// Renderings that match `expr` and are eligible on the static
    /// dimensions (language and format), ranked as `select` would rank them:
    /// specificity descending, then declaration order.
    pub fn static_candidates(&self, expr: &OMObject, language: &Language, format: Format) -> Vec<Candidate<'_>> {
        let Some(head) = expr.head_symbol() else {
            return Vec::new();
        };
        let mut out = Vec::new();
        for notation in self.by_head(head) {
            let Some(bindings) = match_prototype(&notation.prototype, expr) else {
                continue;
            };
            for (i, rendering) in notation.renderings.iter().enumerate() {
                let c = &rendering.constraint;
                if c.language_ok(language) && c.format_ok(format) {
                    out.push(Candidate {
                        notation,
                        rendering,
                        rendering_index: i,
                        bindings: bindings.clone(),
                        specificity: c.specificity_bits(&self.order),
                    });
                }
            }
        }
        // Stable sort keeps declaration order among equal specificities.
        out.sort_by_key(|c| std::cmp::Reverse(c.specificity));
        out
    }
}
