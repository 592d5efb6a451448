//! Compact expression syntax.
//!
//! ```text
//! expr    := primary ( "(" [ expr ("," expr)* ] ")" )*
//! primary := cd "/" name
//!          | ["-"] digits
//!          | "#" ["-"] digits [ "." digits* ]
//!          | "$" name
//!          | '"' chars '"'
//!          | "bind" "(" expr "," "[" "$" name ("," "$" name)* "]" "," expr ")"
//! ```
//!
//! Whitespace between tokens is ignored. Inside strings `\"` and `\\` escape.

use num_bigint::BigInt;

use super::{is_identifier, Decimal, OMObject, ParseError};

pub fn parse_compact(input: &str) -> Result<OMObject, ParseError> {
    let mut p = Parser { src: input, pos: 0 };
    let obj = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("trailing input"));
    }
    Ok(obj)
}

pub fn to_compact(obj: &OMObject) -> String {
    let mut out = String::new();
    write(obj, &mut out);
    out
}

fn write(obj: &OMObject, out: &mut String) {
    match obj {
        OMObject::Integer(i) => out.push_str(&i.to_string()),
        OMObject::Decimal(d) => {
            out.push('#');
            out.push_str(&d.to_string());
        }
        OMObject::Variable(v) => {
            out.push('$');
            out.push_str(v);
        }
        OMObject::Symbol(s) => {
            out.push_str(&s.cd);
            out.push('/');
            out.push_str(&s.name);
        }
        OMObject::String(s) => {
            out.push('"');
            for c in s.chars() {
                if c == '"' || c == '\\' {
                    out.push('\\');
                }
                out.push(c);
            }
            out.push('"');
        }
        OMObject::Apply { head, args } => {
            write(head, out);
            out.push('(');
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write(a, out);
            }
            out.push(')');
        }
        OMObject::Bind { binder, vars, body } => {
            out.push_str("bind(");
            write(binder, out);
            out.push_str(", [");
            for (i, v) in vars.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                out.push('$');
                out.push_str(v);
            }
            out.push_str("], ");
            write(body, out);
            out.push(')');
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, reason: impl Into<String>) -> ParseError {
        let before = &self.src[..self.pos];
        let line = before.matches('\n').count() as u32 + 1;
        let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) as u32 + 1;
        ParseError::new(line, column, reason)
    }

    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{c}`")))
        }
    }

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> &str {
        let start = self.pos;
        let len = self.rest().find(|c| !f(c)).unwrap_or(self.rest().len());
        self.pos += len;
        &self.src[start..self.pos]
    }

    fn identifier(&mut self, what: &str) -> Result<String, ParseError> {
        let start = self.pos;
        let word = self
            .take_while(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
            .to_owned();
        if is_identifier(&word) {
            Ok(word)
        } else {
            self.pos = start;
            Err(self.error(format!("expected {what}")))
        }
    }

    fn expr(&mut self) -> Result<OMObject, ParseError> {
        let mut obj = self.primary()?;
        while self.eat('(') {
            let mut args = Vec::new();
            if !self.eat(')') {
                loop {
                    args.push(self.expr()?);
                    if self.eat(')') {
                        break;
                    }
                    self.expect(',')?;
                }
            }
            obj = OMObject::apply(obj, args);
        }
        Ok(obj)
    }

    fn primary(&mut self) -> Result<OMObject, ParseError> {
        self.skip_ws();
        match self.peek() {
            None => Err(self.error("unexpected end of input")),
            Some('$') => {
                self.pos += 1;
                Ok(OMObject::Variable(self.identifier("variable name")?))
            }
            Some('#') => {
                self.pos += 1;
                let start = self.pos;
                let text = self
                    .take_while(|c| c.is_ascii_digit() || c == '.' || c == '-')
                    .to_owned();
                Decimal::parse(&text).map(OMObject::Decimal).map_err(|r| {
                    self.pos = start;
                    self.error(r)
                })
            }
            Some('"') => {
                self.pos += 1;
                let mut value = String::new();
                let mut chars = self.rest().char_indices();
                loop {
                    match chars.next() {
                        None => return Err(self.error("unterminated string")),
                        Some((i, '"')) => {
                            self.pos += i + 1;
                            return Ok(OMObject::String(value));
                        }
                        Some((_, '\\')) => match chars.next() {
                            Some((_, c @ ('"' | '\\'))) => value.push(c),
                            _ => return Err(self.error("bad escape in string")),
                        },
                        Some((_, c)) => value.push(c),
                    }
                }
            }
            Some(c) if c.is_ascii_digit() || c == '-' => {
                let start = self.pos;
                let negative = self.eat('-');
                let digits = self.take_while(|c| c.is_ascii_digit()).to_owned();
                if digits.is_empty() {
                    self.pos = start;
                    return Err(self.error("expected digits"));
                }
                let mut value: BigInt = digits.parse().expect("ascii digits");
                if negative {
                    value = -value;
                }
                Ok(OMObject::Integer(value))
            }
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                let word = self.identifier("symbol")?;
                self.skip_ws();
                if self.peek() == Some('/') {
                    self.pos += 1;
                    let name = self.identifier("symbol name")?;
                    Ok(OMObject::sym(word, name))
                } else if word == "bind" && self.peek() == Some('(') {
                    self.binding()
                } else {
                    Err(self.error(format!("expected `/` after `{word}`")))
                }
            }
            Some(c) => Err(self.error(format!("unexpected `{c}`"))),
        }
    }

    fn binding(&mut self) -> Result<OMObject, ParseError> {
        self.expect('(')?;
        let binder = self.expr()?;
        self.expect(',')?;
        self.expect('[')?;
        let mut vars = Vec::new();
        loop {
            self.expect('$')?;
            vars.push(self.identifier("variable name")?);
            if self.eat(']') {
                break;
            }
            self.expect(',')?;
        }
        self.expect(',')?;
        let body = self.expr()?;
        self.expect(')')?;
        Ok(OMObject::bind(binder, vars, body))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::om::parse_om;

    #[test]
    fn binomial() {
        assert_eq!(
            parse_compact("combinat1/binomial(5,3)").unwrap(),
            OMObject::apply(OMObject::sym("combinat1", "binomial"), vec![OMObject::int(5), OMObject::int(3)])
        );
    }

    #[test]
    fn decimal() {
        assert_eq!(
            parse_compact("#12.5").unwrap(),
            OMObject::Decimal(Decimal {
                negative: false,
                int_digits: "12".into(),
                frac_digits: "5".into()
            })
        );
    }

    #[test]
    fn binding_matches_xml() {
        let compact = parse_compact("bind(quant1/exists, [$n], relation1/eq(arith1/power($n,2),4))").unwrap();
        let xml = parse_om(
            r#"<OMOBJ><OMBIND><OMS cd="quant1" name="exists"/><OMBVAR><OMV name="n"/></OMBVAR><OMA><OMS cd="relation1" name="eq"/><OMA><OMS cd="arith1" name="power"/><OMV name="n"/><OMI>2</OMI></OMA><OMI>4</OMI></OMA></OMBIND></OMOBJ>"#,
        )
        .unwrap();
        assert_eq!(compact, xml);
    }

    #[test]
    fn printing_round_trips() {
        for src in [
            "arith1/plus(1, -2, #0.50, $x)",
            "bind(fns1/lambda, [$x, $y], $x)",
            "$f(1)(2)",
            "\"say \\\"hi\\\" \\\\ \"",
            "cd/f()",
            "bind(a/b, [$x], c/d)(1)",
        ] {
            let obj = parse_compact(src).unwrap();
            assert_eq!(to_compact(&obj), src);
        }
    }

    #[test]
    fn bind_is_a_keyword_only_before_paren() {
        assert_eq!(parse_compact("bind/x").unwrap(), OMObject::sym("bind", "x"));
    }

    #[test]
    fn errors_have_positions() {
        let err = parse_compact("arith1/plus(1,\n  2,)").unwrap_err();
        assert_eq!(err.line, 2);
        assert_eq!(err.column, 5);
        for bad in ["", "plus", "arith1/", "$", "#", "#.5", "\"open", "1 2", "bind(a/b, [], 1)", "(1)"] {
            assert!(parse_compact(bad).is_err(), "{bad:?}");
        }
    }
}
