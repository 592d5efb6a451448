//! Corpus access, generators and independent oracles shared by the
//! integration tests and the acceptance runner.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;

use notemill::census::{Census, Observation, Source};
use notemill::context::{specificity_with, Level};
use notemill::matcher::Binding;
use notemill::notation::{Pattern, Prototype, SlotKind};
use notemill::om::Decimal;
use notemill::{
    load_notations, parse_compact, parse_om, Format, Language, LoadOptions, NotationFile, NotationStore, OMObject,
    RenderContext,
};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const LANGUAGES: [&str; 8] = ["en", "de", "nl", "es", "fr", "fi", "hu", "ru"];
pub const COLLECTIONS: [&str; 3] = ["", "ee-handbook", "combinatorics-research"];

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn notation_files() -> Vec<NotationFile> {
    let dir = corpus_dir().join("notations");
    let mut files: Vec<NotationFile> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "xml"))
        .map(|p| {
            NotationFile::new(
                p.file_name().unwrap().to_string_lossy(),
                std::fs::read_to_string(&p).unwrap(),
            )
        })
        .collect();
    files.sort_by(|a, b| a.name.cmp(&b.name));
    files
}

pub fn corpus_store() -> NotationStore {
    load_notations(&notation_files(), LoadOptions::default()).unwrap().0
}

pub fn store_from_file(path: &std::path::Path) -> NotationStore {
    let text = std::fs::read_to_string(path).unwrap();
    load_notations(&[NotationFile::new(path.to_string_lossy(), text)], LoadOptions::default())
        .unwrap()
        .0
}

/// Corpus expressions by case name. Each case exists as XML and compact
/// text; both encodings must agree.
pub fn corpus_expressions() -> Vec<(String, OMObject)> {
    let dir = corpus_dir().join("expressions");
    let mut out = Vec::new();
    for e in std::fs::read_dir(&dir).unwrap() {
        let p = e.unwrap().path();
        if p.extension().is_some_and(|x| x == "xml") {
            let xml = parse_om(&std::fs::read_to_string(&p).unwrap()).unwrap();
            let compact = parse_compact(std::fs::read_to_string(p.with_extension("om")).unwrap().trim()).unwrap();
            assert_eq!(xml, compact, "{} and its compact twin differ", p.display());
            out.push((p.file_stem().unwrap().to_string_lossy().into_owned(), xml));
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

#[derive(Debug, Clone)]
pub struct GoldenRow {
    pub case: String,
    pub ctx: RenderContext,
    pub expected: String,
}

pub fn golden_rows() -> Vec<GoldenRow> {
    let text = std::fs::read_to_string(corpus_dir().join("golden/cultural.tsv")).unwrap();
    text.lines()
        .filter(|l| !l.starts_with('#') && !l.is_empty())
        .map(|l| {
            let f: Vec<&str> = l.split('\t').collect();
            assert_eq!(f.len(), 6, "bad golden line {l:?}");
            GoldenRow {
                case: f[0].to_owned(),
                ctx: RenderContext::parse(f[1], f[2], f[3].parse().unwrap(), f[4]),
                expected: f[5].to_owned(),
            }
        })
        .collect()
}

/// Every context of the acceptance grid.
pub fn all_contexts() -> Vec<RenderContext> {
    let mut out = Vec::new();
    for lang in LANGUAGES {
        for format in Format::ALL {
            for level in 1..=4 {
                for coll in COLLECTIONS {
                    out.push(RenderContext::parse(lang, format.as_str(), level, coll));
                }
            }
        }
    }
    out
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

// ---------------------------------------------------------------------------
// Generators

const IDENTS: [&str; 6] = ["a", "b", "x", "y1", "long_name", "set-x"];

fn ident(rng: &mut ChaCha8Rng) -> String {
    IDENTS[rng.random_range(0..IDENTS.len())].to_owned()
}

pub fn random_string(rng: &mut ChaCha8Rng, max: usize) -> String {
    const CHARS: &[char] = &['a', 'Z', '0', ' ', '<', '>', '&', '"', '\'', '\\', '\n', '\t', '\r', 'é', 'ℕ', 'Н', '-', ']', '{'];
    let n = rng.random_range(0..=max);
    (0..n).map(|_| CHARS[rng.random_range(0..CHARS.len())]).collect()
}

fn digits(rng: &mut ChaCha8Rng, min: usize, max: usize) -> String {
    let n = rng.random_range(min..=max);
    (0..n).map(|_| char::from(b'0' + rng.random_range(0..10u8))).collect()
}

fn random_leaf(rng: &mut ChaCha8Rng) -> OMObject {
    match rng.random_range(0..6) {
        0 => {
            let big: i128 = rng.random_range(-10i128.pow(30)..10i128.pow(30));
            OMObject::int(big)
        }
        1 => OMObject::int(rng.random_range(-5i64..50)),
        2 => OMObject::Decimal(Decimal {
            negative: rng.random_bool(0.3),
            int_digits: digits(rng, 1, 6),
            frac_digits: digits(rng, 0, 4),
        }),
        3 => OMObject::var(ident(rng)),
        4 => OMObject::sym(ident(rng), ident(rng)),
        _ => OMObject::String(random_string(rng, 8)),
    }
}

/// A random OpenMath tree of depth at most `depth`.
pub fn random_om(rng: &mut ChaCha8Rng, depth: u32) -> OMObject {
    if depth <= 1 || rng.random_bool(0.3) {
        return random_leaf(rng);
    }
    let head = if rng.random_bool(0.8) {
        OMObject::sym(ident(rng), ident(rng))
    } else {
        random_om(rng, depth - 1)
    };
    if rng.random_bool(0.8) {
        let n = rng.random_range(0..4);
        OMObject::apply(head, (0..n).map(|_| random_om(rng, depth - 1)).collect())
    } else {
        let n = rng.random_range(1..4);
        OMObject::bind(head, (0..n).map(|_| ident(rng)).collect(), random_om(rng, depth - 1))
    }
}

/// A random expression over the ten operators of `tests/fixtures/arith10.xml`.
/// Literals are non-negative; negation only appears as `unary_minus`.
pub fn random_arith(rng: &mut ChaCha8Rng, depth: u32) -> OMObject {
    if depth <= 1 || rng.random_bool(0.25) {
        return match rng.random_range(0..4) {
            0 => OMObject::int(rng.random_range(0..20)),
            1 => OMObject::int(rng.random_range(900..3_000_000i64)),
            2 => OMObject::var(["a", "b", "x"][rng.random_range(0..3)]),
            _ => OMObject::var(["xy", "rate"][rng.random_range(0..2)]),
        };
    }
    let sub = |rng: &mut ChaCha8Rng| random_arith(rng, depth - 1);
    let op = |name: &str| OMObject::sym("arith1", name);
    match rng.random_range(0..10) {
        0 | 1 => {
            let name = if rng.random_bool(0.5) { "plus" } else { "times" };
            let n = rng.random_range(2..5);
            OMObject::apply(op(name), (0..n).map(|_| sub(rng)).collect())
        }
        2 => OMObject::apply(op("minus"), vec![sub(rng), sub(rng)]),
        3 => OMObject::apply(op("divide"), vec![sub(rng), sub(rng)]),
        4 => OMObject::apply(op("power"), vec![sub(rng), sub(rng)]),
        5 => OMObject::apply(op("unary_minus"), vec![sub(rng)]),
        6 => OMObject::apply(OMObject::sym("integer1", "factorial"), vec![sub(rng)]),
        7 => OMObject::apply(op("abs"), vec![sub(rng)]),
        8 => OMObject::apply(OMObject::sym("relation1", "eq"), vec![sub(rng), sub(rng)]),
        _ => OMObject::apply(OMObject::sym("relation1", "lt"), vec![sub(rng), sub(rng)]),
    }
}

fn maybe(rng: &mut ChaCha8Rng) -> Option<String> {
    rng.random_bool(0.5).then(|| random_string(rng, 6))
}

pub fn random_census(rng: &mut ChaCha8Rng) -> Census {
    let cultures = ["fr", "de", "en-ee", "ru", "es", "fr-research"];
    let n_sources = rng.random_range(0..5);
    let sources: Vec<Source> = (0..n_sources)
        .map(|i| Source {
            key: format!("s{i}"),
            title: random_string(rng, 10),
            culture: cultures[rng.random_range(0..cultures.len())].to_owned(),
            publisher_url: maybe(rng),
            download_url: maybe(rng),
        })
        .collect();
    let n_obs = rng.random_range(0..12);
    let observations = (0..n_obs)
        .map(|i| Observation {
            id: format!("o{}", rng.random_range(0..=i)),
            semantic: if rng.random_bool(0.8) {
                format!("{}/{}", ident(rng), ident(rng))
            } else {
                random_string(rng, 6)
            },
            culture: cultures[rng.random_range(0..cultures.len())].to_owned(),
            symbol_name: random_string(rng, 5),
            source_key: format!("s{}", rng.random_range(0..6)),
            locator: random_string(rng, 5),
            image: random_string(rng, 5),
            unicode_repr: maybe(rng),
            description: maybe(rng),
        })
        .collect();
    Census { sources, observations }
}

// ---------------------------------------------------------------------------
// Oracles

/// Replaces the slots of a pattern by an assignment.
fn instantiate_pattern(p: &Pattern, assign: &BTreeMap<String, Binding>) -> Option<Vec<OMObject>> {
    Some(match p {
        Pattern::Slot { name, kind } => match (kind, assign.get(name)?) {
            (SlotKind::Single, Binding::Single(o)) => vec![o.clone()],
            (SlotKind::Sequence, Binding::Sequence(items)) => items.clone(),
            _ => return None,
        },
        Pattern::Lit(o) => vec![o.clone()],
        Pattern::Apply { head, args } => {
            let [head] = <[OMObject; 1]>::try_from(instantiate_pattern(head, assign)?).ok()?;
            let mut out = Vec::new();
            for a in args {
                out.extend(instantiate_pattern(a, assign)?);
            }
            vec![OMObject::apply(head, out)]
        }
        Pattern::Bind { binder, vars, body } => {
            let [binder] = <[OMObject; 1]>::try_from(instantiate_pattern(binder, assign)?).ok()?;
            let [body] = <[OMObject; 1]>::try_from(instantiate_pattern(body, assign)?).ok()?;
            let mut names = Vec::new();
            for v in vars {
                for o in instantiate_pattern(v, assign)? {
                    match o {
                        OMObject::Variable(n) => names.push(n),
                        _ => return None,
                    }
                }
            }
            if names.is_empty() {
                return None;
            }
            vec![OMObject::bind(binder, names, body)]
        }
    })
}

fn subtrees(e: &OMObject, out: &mut Vec<OMObject>, lists: &mut Vec<Vec<OMObject>>) {
    out.push(e.clone());
    match e {
        OMObject::Apply { head, args } => {
            subtrees(head, out, lists);
            for i in 0..=args.len() {
                lists.push(args[i..].to_vec());
            }
            for a in args {
                subtrees(a, out, lists);
            }
        }
        OMObject::Bind { binder, vars, body } => {
            subtrees(binder, out, lists);
            for v in vars {
                out.push(OMObject::var(v.clone()));
            }
            subtrees(body, out, lists);
        }
        _ => {}
    }
}

/// Exhaustive matcher: tries every assignment of subtrees (and argument
/// suffixes for sequence slots) to the slots and keeps those whose
/// instantiation equals `expr`.
pub fn brute_force_matches(proto: &Prototype, expr: &OMObject) -> Vec<BTreeMap<String, Binding>> {
    let mut singles = Vec::new();
    let mut lists = vec![Vec::new()];
    subtrees(expr, &mut singles, &mut lists);
    singles.dedup();
    let slots = proto.slots().to_vec();
    let mut found = Vec::new();
    let mut assign = BTreeMap::new();
    #[allow(clippy::too_many_arguments)]
    fn go(
        i: usize,
        slots: &[(String, SlotKind)],
        singles: &[OMObject],
        lists: &[Vec<OMObject>],
        assign: &mut BTreeMap<String, Binding>,
        proto: &Prototype,
        expr: &OMObject,
        found: &mut Vec<BTreeMap<String, Binding>>,
    ) {
        if i == slots.len() {
            if instantiate_pattern(proto.pattern(), assign).as_deref() == Some(std::slice::from_ref(expr))
                && !found.contains(assign)
            {
                found.push(assign.clone());
            }
            return;
        }
        let (name, kind) = &slots[i];
        match kind {
            SlotKind::Single => {
                for s in singles {
                    assign.insert(name.clone(), Binding::Single(s.clone()));
                    go(i + 1, slots, singles, lists, assign, proto, expr, found);
                }
            }
            SlotKind::Sequence => {
                for l in lists {
                    assign.insert(name.clone(), Binding::Sequence(l.clone()));
                    go(i + 1, slots, singles, lists, assign, proto, expr, found);
                }
            }
        }
        assign.remove(name);
    }
    go(0, &slots, &singles, &lists, &mut assign, proto, expr, &mut found);
    found
}

/// Linear scan over every rendering of every notation, without the head
/// index: the first rendering of maximal specificity among those whose
/// prototype matches (per the brute-force oracle) and whose constraint is
/// eligible. Returns `(notation id, rendering index)`.
pub fn linear_select(store: &NotationStore, expr: &OMObject, ctx: &RenderContext) -> Option<(String, usize)> {
    let matching: Vec<bool> = store
        .notations()
        .iter()
        .map(|n| !brute_force_matches(&n.prototype, expr).is_empty())
        .collect();
    linear_select_among(store, &matching, ctx)
}

/// [`linear_select`] with the per-notation match results precomputed.
pub fn linear_select_among(store: &NotationStore, matching: &[bool], ctx: &RenderContext) -> Option<(String, usize)> {
    let mut best: Option<(notemill::context::Specificity, String, usize)> = None;
    for (n, _) in store.notations().iter().zip(matching).filter(|(_, m)| **m) {
        for (i, r) in n.renderings.iter().enumerate() {
            if let Some(s) = specificity_with(&r.constraint, ctx, store.dimension_order()) {
                if best.as_ref().is_none_or(|(b, _, _)| s > *b) {
                    best = Some((s, n.id.clone(), i));
                }
            }
        }
    }
    best.map(|(_, id, i)| (id, i))
}

/// Conventional-precedence reader for the LaTeX produced by the ten-operator
/// store. Unbracketed `+` and `\cdot` chains become one n-ary node; `-` and
/// `/` associate to the left, `^` takes a braced exponent, `!` is postfix
/// and binds tighter than `^`, unary minus binds tighter than products but
/// looser than powers, `=` and `<` bind loosest.
pub mod latex_reader {
    use notemill::OMObject;
    use num_bigint::BigInt;

    #[derive(Debug, Clone, PartialEq)]
    enum Tok {
        Num(String),
        Var(String),
        Plus,
        Minus,
        Cdot,
        Slash,
        Caret,
        LBrace,
        RBrace,
        Bang,
        Eq,
        Lt,
        LParen,
        RParen,
        LBar,
        RBar,
    }

    fn lex(s: &str) -> Result<Vec<Tok>, String> {
        let mut out = Vec::new();
        let mut rest = s;
        while let Some(c) = rest.chars().next() {
            if c == ' ' {
                rest = &rest[1..];
                continue;
            }
            let (tok, len) = if c.is_ascii_digit() {
                let mut num = String::new();
                let mut i = 0;
                loop {
                    let r = &rest[i..];
                    if let Some(d) = r.chars().next().filter(char::is_ascii_digit) {
                        num.push(d);
                        i += 1;
                    } else if r.starts_with("{,}") && r[3..].starts_with(|c: char| c.is_ascii_digit()) {
                        i += 3;
                    } else {
                        break;
                    }
                }
                (Tok::Num(num), i)
            } else if c.is_ascii_alphabetic() {
                (Tok::Var(c.to_string()), 1)
            } else if let Some(r) = rest.strip_prefix("\\mathit{") {
                let end = r.find('}').ok_or("unterminated \\mathit")?;
                (Tok::Var(r[..end].to_owned()), 8 + end + 1)
            } else {
                let table: [(&str, Tok); 14] = [
                    ("\\left(", Tok::LParen),
                    ("\\right)", Tok::RParen),
                    ("\\left|", Tok::LBar),
                    ("\\right|", Tok::RBar),
                    ("\\cdot", Tok::Cdot),
                    ("+", Tok::Plus),
                    ("-", Tok::Minus),
                    ("/", Tok::Slash),
                    ("^", Tok::Caret),
                    ("{", Tok::LBrace),
                    ("}", Tok::RBrace),
                    ("!", Tok::Bang),
                    ("=", Tok::Eq),
                    ("<", Tok::Lt),
                ];
                let (p, t) = table
                    .into_iter()
                    .find(|(p, _)| rest.starts_with(p))
                    .ok_or_else(|| format!("unexpected input at {rest:?}"))?;
                (t, p.len())
            };
            out.push(tok);
            rest = &rest[len..];
        }
        Ok(out)
    }

    struct Parser {
        toks: Vec<Tok>,
        pos: usize,
    }

    fn op(cd: &str, name: &str, args: Vec<OMObject>) -> OMObject {
        OMObject::apply(OMObject::sym(cd, name), args)
    }

    impl Parser {
        fn peek(&self) -> Option<&Tok> {
            self.toks.get(self.pos)
        }

        fn eat(&mut self, t: &Tok) -> bool {
            if self.peek() == Some(t) {
                self.pos += 1;
                true
            } else {
                false
            }
        }

        fn expect(&mut self, t: Tok) -> Result<(), String> {
            if self.eat(&t) {
                Ok(())
            } else {
                Err(format!("expected {t:?} at token {}, found {:?}", self.pos, self.peek()))
            }
        }

        fn relation(&mut self) -> Result<OMObject, String> {
            let lhs = self.additive()?;
            if self.eat(&Tok::Eq) {
                return Ok(op("relation1", "eq", vec![lhs, self.additive()?]));
            }
            if self.eat(&Tok::Lt) {
                return Ok(op("relation1", "lt", vec![lhs, self.additive()?]));
            }
            Ok(lhs)
        }

        fn additive(&mut self) -> Result<OMObject, String> {
            let mut lhs = self.multiplicative()?;
            let mut chain = false;
            loop {
                if self.eat(&Tok::Plus) {
                    let rhs = self.multiplicative()?;
                    match (&mut lhs, chain) {
                        (OMObject::Apply { args, .. }, true) => args.push(rhs),
                        _ => lhs = op("arith1", "plus", vec![lhs, rhs]),
                    }
                    chain = true;
                } else if self.eat(&Tok::Minus) {
                    lhs = op("arith1", "minus", vec![lhs, self.multiplicative()?]);
                    chain = false;
                } else {
                    return Ok(lhs);
                }
            }
        }

        fn multiplicative(&mut self) -> Result<OMObject, String> {
            let mut lhs = self.unary()?;
            let mut chain = false;
            loop {
                if self.eat(&Tok::Cdot) {
                    let rhs = self.unary()?;
                    match (&mut lhs, chain) {
                        (OMObject::Apply { args, .. }, true) => args.push(rhs),
                        _ => lhs = op("arith1", "times", vec![lhs, rhs]),
                    }
                    chain = true;
                } else if self.eat(&Tok::Slash) {
                    lhs = op("arith1", "divide", vec![lhs, self.unary()?]);
                    chain = false;
                } else {
                    return Ok(lhs);
                }
            }
        }

        fn unary(&mut self) -> Result<OMObject, String> {
            if self.eat(&Tok::Minus) {
                return Ok(op("arith1", "unary_minus", vec![self.unary()?]));
            }
            self.power()
        }

        fn power(&mut self) -> Result<OMObject, String> {
            let base = self.postfix()?;
            if self.eat(&Tok::Caret) {
                self.expect(Tok::LBrace)?;
                let exp = self.relation()?;
                self.expect(Tok::RBrace)?;
                return Ok(op("arith1", "power", vec![base, exp]));
            }
            Ok(base)
        }

        fn postfix(&mut self) -> Result<OMObject, String> {
            let mut e = self.primary()?;
            while self.eat(&Tok::Bang) {
                e = op("integer1", "factorial", vec![e]);
            }
            Ok(e)
        }

        fn primary(&mut self) -> Result<OMObject, String> {
            let t = self.peek().cloned().ok_or("unexpected end of input")?;
            self.pos += 1;
            match t {
                Tok::Num(d) => Ok(OMObject::Integer(d.parse::<BigInt>().map_err(|e| e.to_string())?)),
                Tok::Var(v) => Ok(OMObject::var(v)),
                Tok::LParen => {
                    let e = self.relation()?;
                    self.expect(Tok::RParen)?;
                    Ok(e)
                }
                Tok::LBar => {
                    let e = self.relation()?;
                    self.expect(Tok::RBar)?;
                    Ok(op("arith1", "abs", vec![e]))
                }
                other => Err(format!("unexpected {other:?} at token {}", self.pos - 1)),
            }
        }
    }

    pub fn read(latex: &str) -> Result<OMObject, String> {
        let mut p = Parser { toks: lex(latex)?, pos: 0 };
        let e = p.relation()?;
        if p.pos != p.toks.len() {
            return Err(format!("trailing tokens from {}", p.pos));
        }
        Ok(e)
    }
}

/// Random notation stores over three symbols, written as notation XML, so
/// that compile/deliver can be checked against direct rendering on stores
/// with many competing constraints.
pub fn random_store_xml(rng: &mut ChaCha8Rng) -> String {
    let mut out = String::from(r#"<notations xmlns:l="urn:notemill:layout">"#);
    let langs = ["en", "de", "fr"];
    let colls = ["c1", "c2"];
    for (si, sym) in ["f", "g", "k"].iter().enumerate() {
        let n_notations = rng.random_range(0..3);
        for ni in 0..n_notations {
            let unary = si != 2;
            let proto = if unary {
                format!(r#"<OMA><OMS cd="t" name="{sym}"/><slot name="a"/></OMA>"#)
            } else {
                format!(r#"<OMS cd="t" name="{sym}"/>"#)
            };
            out.push_str(&format!(r#"<notation id="{sym}{ni}"><prototype>{proto}</prototype>"#));
            let n_render = rng.random_range(1..6);
            for ri in 0..n_render {
                let mut attrs = String::new();
                if rng.random_bool(0.4) {
                    attrs.push_str(&format!(r#" lang="{}""#, langs[rng.random_range(0..3)]));
                }
                if rng.random_bool(0.4) {
                    let lo = rng.random_range(1..=4u8);
                    let hi = rng.random_range(lo..=4u8);
                    attrs.push_str(&format!(r#" levels="{lo}-{hi}""#));
                }
                if rng.random_bool(0.4) {
                    let c: Vec<&str> = colls.iter().copied().filter(|_| rng.random_bool(0.6)).collect();
                    if !c.is_empty() {
                        attrs.push_str(&format!(r#" collections="{}""#, c.join(" ")));
                    }
                }
                let prec = [0, 100, 500, 1000][rng.random_range(0..4)];
                let argprec = [0, 200, 1000][rng.random_range(0..3)];
                let tag = format!("{sym}{ni}r{ri}");
                let (m, l, t) = if unary {
                    (
                        format!(r#"<mrow><mi>{tag}</mi><render slot="a" argprec="{argprec}"/></mrow>"#),
                        format!(r#"<l:tex>\{tag} <render slot="a" argprec="{argprec}"/></l:tex>"#),
                        format!(r#"<l:txt>{tag} <render slot="a" argprec="{argprec}"/></l:txt>"#),
                    )
                } else {
                    (format!("<mi>{tag}</mi>"), format!(r"<l:tex>\{tag}</l:tex>"), format!("<l:txt>{tag}</l:txt>"))
                };
                for body in [m, l, t] {
                    if rng.random_bool(0.8) {
                        out.push_str(&format!(r#"<rendering{attrs} precedence="{prec}">{body}</rendering>"#));
                    }
                }
            }
            // Every notation needs at least one rendering.
            let slot = if unary { r#"<render slot="a"/>"# } else { "" };
            out.push_str(&format!(r#"<rendering precedence="1000" lang="fi"><mi>{sym}{ni}fi</mi>{slot}</rendering>"#));
            out.push_str("</notation>");
        }
    }
    out.push_str("</notations>");
    out
}

pub fn random_store_expr(rng: &mut ChaCha8Rng, depth: u32) -> OMObject {
    if depth <= 1 || rng.random_bool(0.3) {
        return match rng.random_range(0..3) {
            0 => OMObject::sym("t", "k"),
            1 => OMObject::int(rng.random_range(-3..3)),
            _ => OMObject::sym("t", "unknown"),
        };
    }
    let head = ["f", "g", "h"][rng.random_range(0..3)];
    OMObject::apply(OMObject::sym("t", head), vec![random_store_expr(rng, depth - 1)])
}

pub fn random_contexts(langs: &[&str], colls: &[&str]) -> Vec<RenderContext> {
    let mut out = Vec::new();
    for l in langs {
        for f in Format::ALL {
            for lv in Level::all() {
                for c in colls {
                    out.push(RenderContext::new(Language::new(l).unwrap(), f, lv, *c));
                }
            }
        }
    }
    out
}
