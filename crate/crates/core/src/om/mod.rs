//! OpenMath expression trees.
//!
//! [`OMObject`] covers the subset of OpenMath needed for rendering: integers,
//! decimals kept as exact digit strings, variables, symbols, strings,
//! applications and bindings. Two concrete syntaxes are supported, the
//! OpenMath XML encoding ([`parse_om`] / [`serialize_om`]) and a compact
//! textual form ([`parse_compact`] / [`to_compact`]) used by tests and the CLI.

mod compact;
pub(crate) mod xml;

use std::fmt;

use num_bigint::BigInt;

pub use compact::{parse_compact, to_compact};
pub use xml::{parse_om, serialize_om};

/// A symbol from a content dictionary, identified by `(cd, name)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol {
    pub cd: String,
    pub name: String,
}

impl Symbol {
    pub fn new(cd: impl Into<String>, name: impl Into<String>) -> Self {
        Symbol {
            cd: cd.into(),
            name: name.into(),
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.cd, self.name)
    }
}

/// An exact decimal number as written in the source.
///
/// Digits are never normalized: `12.50` stays `12.50` and `007.5` stays
/// `007.5`, so that localized output reproduces the author's digits.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Decimal {
    pub negative: bool,
    pub int_digits: String,
    pub frac_digits: String,
}

impl Decimal {
    /// Parses `[-]d+[.d*]`. Exponents are not accepted.
    pub fn parse(text: &str) -> Result<Self, String> {
        let (negative, rest) = match text.strip_prefix('-') {
            Some(r) => (true, r),
            None => (false, text),
        };
        let (int_digits, frac_digits) = match rest.split_once('.') {
            Some((i, f)) => (i, f),
            None => (rest, ""),
        };
        if int_digits.is_empty() {
            return Err(format!("decimal `{text}` has no integer digits"));
        }
        if !int_digits.bytes().all(|b| b.is_ascii_digit())
            || !frac_digits.bytes().all(|b| b.is_ascii_digit())
        {
            return Err(format!("`{text}` is not a plain decimal number"));
        }
        Ok(Decimal {
            negative,
            int_digits: int_digits.to_owned(),
            frac_digits: frac_digits.to_owned(),
        })
    }
}

impl fmt::Display for Decimal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negative {
            f.write_str("-")?;
        }
        f.write_str(&self.int_digits)?;
        if !self.frac_digits.is_empty() {
            write!(f, ".{}", self.frac_digits)?;
        }
        Ok(())
    }
}

/// A semantic mathematical expression.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum OMObject {
    Integer(BigInt),
    Decimal(Decimal),
    Variable(String),
    Symbol(Symbol),
    String(String),
    Apply {
        head: Box<OMObject>,
        args: Vec<OMObject>,
    },
    /// Invariant: `vars` is nonempty.
    Bind {
        binder: Box<OMObject>,
        vars: Vec<String>,
        body: Box<OMObject>,
    },
}

impl OMObject {
    pub fn int(value: impl Into<BigInt>) -> Self {
        OMObject::Integer(value.into())
    }

    pub fn var(name: impl Into<String>) -> Self {
        OMObject::Variable(name.into())
    }

    pub fn sym(cd: impl Into<String>, name: impl Into<String>) -> Self {
        OMObject::Symbol(Symbol::new(cd, name))
    }

    pub fn apply(head: OMObject, args: Vec<OMObject>) -> Self {
        OMObject::Apply {
            head: Box::new(head),
            args,
        }
    }

    pub fn bind(binder: OMObject, vars: Vec<String>, body: OMObject) -> Self {
        debug_assert!(!vars.is_empty(), "binding without bound variables");
        OMObject::Bind {
            binder: Box::new(binder),
            vars,
            body: Box::new(body),
        }
    }

    /// The symbol notations are indexed under: the object itself when it is
    /// a symbol, or the symbol in head position of an application or binding.
    pub fn head_symbol(&self) -> Option<&Symbol> {
        match self {
            OMObject::Symbol(s) => Some(s),
            OMObject::Apply { head, .. } => match head.as_ref() {
                OMObject::Symbol(s) => Some(s),
                _ => None,
            },
            OMObject::Bind { binder, .. } => match binder.as_ref() {
                OMObject::Symbol(s) => Some(s),
                _ => None,
            },
            _ => None,
        }
    }

    /// Number of nodes in the tree (bound variables count as nodes).
    pub fn size(&self) -> usize {
        match self {
            OMObject::Apply { head, args } => 1 + head.size() + args.iter().map(Self::size).sum::<usize>(),
            OMObject::Bind { binder, vars, body } => 1 + binder.size() + vars.len() + body.size(),
            _ => 1,
        }
    }
}

impl fmt::Display for OMObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&to_compact(self))
    }
}

/// Matches `[A-Za-z_][A-Za-z0-9_-]*`, the shape required of CD names,
/// symbol names and variable names.
pub fn is_identifier(s: &str) -> bool {
    let mut bytes = s.bytes();
    match bytes.next() {
        Some(b) if b.is_ascii_alphabetic() || b == b'_' => {}
        _ => return false,
    }
    bytes.all(|b| b.is_ascii_alphanumeric() || b == b'_' || b == b'-')
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{column}: {reason}")]
pub struct ParseError {
    pub line: u32,
    pub column: u32,
    pub reason: String,
}

impl ParseError {
    pub(crate) fn new(line: u32, column: u32, reason: impl Into<String>) -> Self {
        ParseError {
            line,
            column,
            reason: reason.into(),
        }
    }
}
