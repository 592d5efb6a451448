//! Structural matching of prototypes against expressions.

use std::cell::Cell;
use std::collections::BTreeMap;

use crate::notation::{Pattern, Prototype, SlotKind};
use crate::om::OMObject;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Binding {
    Single(OMObject),
    Sequence(Vec<OMObject>),
}

/// Slot name to captured subtree(s). After a successful match the domain is
/// exactly the prototype's slot names.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Bindings(BTreeMap<String, Binding>);

impl Bindings {
    pub fn get(&self, slot: &str) -> Option<&Binding> {
        self.0.get(slot)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Binding)> {
        self.0.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn insert(&mut self, slot: &str, binding: Binding) {
        let previous = self.0.insert(slot.to_owned(), binding);
        debug_assert!(previous.is_none(), "slot `{slot}` bound twice");
    }
}

thread_local! {
    static INVOCATIONS: Cell<u64> = const { Cell::new(0) };
}

/// Number of [`match_prototype`] calls made on the current thread.
pub fn invocation_count() -> u64 {
    INVOCATIONS.with(Cell::get)
}

pub fn match_prototype(proto: &Prototype, expr: &OMObject) -> Option<Bindings> {
    INVOCATIONS.with(|c| c.set(c.get() + 1));
    let mut bindings = Bindings::default();
    match_pattern(proto.pattern(), expr, &mut bindings).then_some(bindings)
}

fn match_pattern(pattern: &Pattern, expr: &OMObject, out: &mut Bindings) -> bool {
    match (pattern, expr) {
        (Pattern::Slot { name, kind: SlotKind::Single }, _) => {
            out.insert(name, Binding::Single(expr.clone()));
            true
        }
        // Sequence slots only occur in argument lists, handled below.
        (Pattern::Slot { kind: SlotKind::Sequence, .. }, _) => false,
        (Pattern::Lit(lit), _) => lit == expr,
        (Pattern::Apply { head, args }, OMObject::Apply { head: e_head, args: e_args }) => {
            match_pattern(head, e_head, out) && match_list(args, e_args, out)
        }
        (
            Pattern::Bind { binder, vars, body },
            OMObject::Bind {
                binder: e_binder,
                vars: e_vars,
                body: e_body,
            },
        ) => {
            let e_vars: Vec<OMObject> = e_vars.iter().map(|v| OMObject::Variable(v.clone())).collect();
            match_pattern(binder, e_binder, out) && match_list(vars, &e_vars, out) && match_pattern(body, e_body, out)
        }
        _ => false,
    }
}

fn match_list(patterns: &[Pattern], items: &[OMObject], out: &mut Bindings) -> bool {
    let (fixed, rest) = match patterns.split_last() {
        Some((Pattern::Slot { name, kind: SlotKind::Sequence }, fixed)) => (fixed, Some(name)),
        _ => (patterns, None),
    };
    let arity_ok = match rest {
        Some(_) => items.len() >= fixed.len(),
        None => items.len() == fixed.len(),
    };
    if !arity_ok {
        return false;
    }
    if !fixed.iter().zip(items).all(|(p, e)| match_pattern(p, e, out)) {
        return false;
    }
    if let Some(name) = rest {
        out.insert(name, Binding::Sequence(items[fixed.len()..].to_vec()));
    }
    true
}

/// Replaces every slot in the prototype by its binding.
///
/// For bindings produced by [`match_prototype`] this reproduces the matched
/// expression; `None` if a slot is unbound or a binding has the wrong shape.
pub fn substitute(proto: &Prototype, bindings: &Bindings) -> Option<OMObject> {
    fn one(p: &Pattern, b: &Bindings) -> Option<OMObject> {
        match p {
            Pattern::Slot { name, kind: SlotKind::Single } => match b.get(name)? {
                Binding::Single(o) => Some(o.clone()),
                Binding::Sequence(_) => None,
            },
            Pattern::Slot { kind: SlotKind::Sequence, .. } => None,
            Pattern::Lit(o) => Some(o.clone()),
            Pattern::Apply { head, args } => Some(OMObject::apply(one(head, b)?, list(args, b)?)),
            Pattern::Bind { binder, vars, body } => {
                let vars = list(vars, b)?
                    .into_iter()
                    .map(|v| match v {
                        OMObject::Variable(n) => Some(n),
                        _ => None,
                    })
                    .collect::<Option<Vec<_>>>()?;
                if vars.is_empty() {
                    return None;
                }
                Some(OMObject::bind(one(binder, b)?, vars, one(body, b)?))
            }
        }
    }
    fn list(ps: &[Pattern], b: &Bindings) -> Option<Vec<OMObject>> {
        let mut out = Vec::new();
        for p in ps {
            match p {
                Pattern::Slot { name, kind: SlotKind::Sequence } => match b.get(name)? {
                    Binding::Sequence(items) => out.extend(items.iter().cloned()),
                    Binding::Single(_) => return None,
                },
                _ => out.push(one(p, b)?),
            }
        }
        Some(out)
    }
    one(proto.pattern(), bindings)
}
