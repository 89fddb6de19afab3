//! Recursive-descent parser for the symbol language.
//!
//! ```text
//! sum     := product ('+' product)*
//! product := term ('*' term)*
//! term    := scalar '*' primary | primary
//! primary := name '(' [arg (',' arg)*] ')' | '(' sum ')'
//! arg     := ident '=' complex | complex | sum
//! scalar  := real ['i'] | '(' complex ')'
//! complex := real ['i'] [('+'|'-') [real] 'i'] | ['+'|'-'] 'i'
//! ```
//! Whitespace is ignored everywhere.

use num_complex::Complex64;

use super::Symbol;
use crate::error::{Error, Result};

/// Parses and validates a symbol expression.
pub fn parse_symbol(text: &str) -> Result<Symbol> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let s = p.sum()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return p.error(format!("unexpected `{}`", p.src[p.pos] as char));
    }
    s.validate()?;
    Ok(s)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

enum Arg {
    Named(String, Complex64, usize),
    Value(Complex64),
    Expr(Symbol),
}

impl<'a> Parser<'a> {
    fn error<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { pos: self.pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            match self.peek() {
                Some(found) => self.error(format!("expected `{}`, found `{}`", c as char, found as char)),
                None => self.error(format!("expected `{}`, found end of input", c as char)),
            }
        }
    }

    fn sum(&mut self) -> Result<Symbol> {
        let mut items = vec![self.product()?];
        while self.eat(b'+') {
            items.push(self.product()?);
        }
        Ok(if items.len() == 1 { items.pop().unwrap() } else { Symbol::Sum(items) })
    }

    fn product(&mut self) -> Result<Symbol> {
        let mut items = vec![self.term()?];
        while self.eat(b'*') {
            items.push(self.term()?);
        }
        Ok(if items.len() == 1 { items.pop().unwrap() } else { Symbol::Product(items) })
    }

    fn term(&mut self) -> Result<Symbol> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() || c == b'.' || c == b'-' || c == b'+' => {
                let c = self.scalar_literal()?;
                self.expect(b'*')?;
                Ok(Symbol::Scale(c, Box::new(self.primary()?)))
            }
            Some(b'(') => {
                // a parenthesised complex scalar must be followed by '*'
                let save = self.pos;
                self.pos += 1;
                if let Ok(c) = self.complex() {
                    if self.eat(b')') && self.eat(b'*') {
                        return Ok(Symbol::Scale(c, Box::new(self.primary()?)));
                    }
                }
                self.pos = save;
                self.primary()
            }
            _ => self.primary(),
        }
    }

    fn scalar_literal(&mut self) -> Result<Complex64> {
        let x = self.real()?;
        Ok(if self.imag_suffix() { Complex64::new(0.0, x) } else { Complex64::from(x) })
    }

    fn primary(&mut self) -> Result<Symbol> {
        if self.eat(b'(') {
            let s = self.sum()?;
            self.expect(b')')?;
            return Ok(s);
        }
        let start = {
            self.skip_ws();
            self.pos
        };
        let name = self.ident();
        if name.is_empty() {
            return match self.peek() {
                Some(c) => self.error(format!("expected a symbol family, found `{}`", c as char)),
                None => self.error("expected a symbol family, found end of input"),
            };
        }
        self.expect(b'(')?;
        let mut args = Vec::new();
        if !self.eat(b')') {
            loop {
                args.push(self.arg()?);
                if self.eat(b')') {
                    break;
                }
                self.expect(b',')?;
            }
        }
        self.build(&name, start, args)
    }

    fn ident(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
            if self.pos == start && self.src[self.pos].is_ascii_digit() {
                break;
            }
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn arg(&mut self) -> Result<Arg> {
        self.skip_ws();
        let start = self.pos;
        let name = self.ident();
        if !name.is_empty() {
            if self.eat(b'=') {
                let value = self.complex()?;
                return Ok(Arg::Named(name, value, start));
            }
            if name != "i" {
                // a nested expression starting with a family name
                self.pos = start;
                return Ok(Arg::Expr(self.sum()?));
            }
            self.pos = start;
        }
        let save = self.pos;
        if let Ok(value) = self.complex() {
            if matches!(self.peek(), Some(b',') | Some(b')')) {
                return Ok(Arg::Value(value));
            }
        }
        self.pos = save;
        Ok(Arg::Expr(self.sum()?))
    }

    fn real(&mut self) -> Result<f64> {
        self.skip_ws();
        let start = self.pos;
        let s = self.src;
        let mut i = self.pos;
        if i < s.len() && (s[i] == b'+' || s[i] == b'-') {
            i += 1;
        }
        let digits_start = i;
        while i < s.len() && s[i].is_ascii_digit() {
            i += 1;
        }
        if i < s.len() && s[i] == b'.' {
            i += 1;
            while i < s.len() && s[i].is_ascii_digit() {
                i += 1;
            }
        }
        if i == digits_start || (i == digits_start + 1 && s[digits_start] == b'.') {
            return self.error("expected a number");
        }
        if i < s.len() && (s[i] == b'e' || s[i] == b'E') {
            let mut j = i + 1;
            if j < s.len() && (s[j] == b'+' || s[j] == b'-') {
                j += 1;
            }
            if j < s.len() && s[j].is_ascii_digit() {
                while j < s.len() && s[j].is_ascii_digit() {
                    j += 1;
                }
                i = j;
            }
        }
        let text = std::str::from_utf8(&s[start..i]).expect("ascii slice");
        match text.parse::<f64>() {
            Ok(x) => {
                self.pos = i;
                Ok(x)
            }
            Err(_) => self.error(format!("malformed number `{text}`")),
        }
    }

    /// Consumes an `i` suffix when it is not the start of an identifier.
    fn imag_suffix(&mut self) -> bool {
        self.skip_ws();
        let s = self.src;
        if self.pos < s.len() && s[self.pos] == b'i' {
            let next = s.get(self.pos + 1).copied();
            if !matches!(next, Some(c) if c.is_ascii_alphanumeric() || c == b'_' || c == b'(') {
                self.pos += 1;
                return true;
            }
        }
        false
    }

    fn complex(&mut self) -> Result<Complex64> {
        self.skip_ws();
        // bare ±i
        let save = self.pos;
        let sign = match self.src.get(self.pos) {
            Some(b'-') => {
                self.pos += 1;
                -1.0
            }
            Some(b'+') => {
                self.pos += 1;
                1.0
            }
            _ => 1.0,
        };
        if self.imag_suffix() {
            return Ok(Complex64::new(0.0, sign));
        }
        self.pos = save;
        let first = self.real()?;
        if self.imag_suffix() {
            return Ok(Complex64::new(0.0, first));
        }
        let save = self.pos;
        match self.peek() {
            Some(c @ (b'+' | b'-')) => {
                self.pos += 1;
                let sgn = if c == b'-' { -1.0 } else { 1.0 };
                if self.imag_suffix() {
                    return Ok(Complex64::new(first, sgn));
                }
                match self.real() {
                    Ok(im) if (!im.is_sign_negative() || im == 0.0)
                        && self.imag_suffix() => {
                            return Ok(Complex64::new(first, sgn * im));
                        }
                    _ => {}
                }
                self.pos = save;
                Ok(Complex64::from(first))
            }
            _ => Ok(Complex64::from(first)),
        }
    }

    fn build(&self, name: &str, start: usize, args: Vec<Arg>) -> Result<Symbol> {
        let family_err = |msg: String| -> Result<Symbol> { Err(Error::Parameter { family: name.to_string(), msg }) };
        let mut named: Vec<(String, Complex64)> = Vec::new();
        let mut values = Vec::new();
        let mut exprs = Vec::new();
        for a in args {
            match a {
                Arg::Named(n, v, pos) => {
                    if named.iter().any(|(m, _)| *m == n) {
                        return Err(Error::Syntax { pos, msg: format!("duplicate parameter `{n}`") });
                    }
                    named.push((n, v));
                }
                Arg::Value(v) => values.push(v),
                Arg::Expr(e) => exprs.push(e),
            }
        }
        let allowed: &[&str] = match name {
            "const" => &["c"],
            "vpow" => &["p"],
            "oscexp" | "vi" => &[],
            "sininvpow" | "cosinvpow" | "logpow" => &["alpha", "beta"],
            "plainsin_invpow" => &["alpha", "tau"],
            "trunc" | "head" => &["cutoff"],
            _ => return Err(Error::Syntax { pos: start, msg: format!("unknown symbol family `{name}`") }),
        };
        if let Some((n, _)) = named.iter().find(|(n, _)| !allowed.contains(&n.as_str())) {
            return family_err(format!("unknown parameter `{n}` (expected one of: {})", allowed.join(", ")));
        }
        let wants_expr = matches!(name, "trunc" | "head");
        if !wants_expr && !exprs.is_empty() {
            return family_err("does not take a sub-expression".into());
        }
        if name != "const" && !values.is_empty() {
            return family_err("parameters must be given as name=value".into());
        }
        let get = |key: &str| named.iter().find(|(n, _)| n == key).map(|(_, v)| *v);
        let real = |key: &str| -> Result<f64> {
            match get(key) {
                None => Err(Error::Parameter { family: name.to_string(), msg: format!("missing parameter `{key}`") }),
                Some(v) if v.im != 0.0 => {
                    Err(Error::Parameter { family: name.to_string(), msg: format!("parameter `{key}` must be real") })
                }
                Some(v) => Ok(v.re),
            }
        };
        let s = match name {
            "const" => {
                let c = match (get("c"), values.as_slice()) {
                    (Some(c), []) => c,
                    (None, [c]) => *c,
                    (None, []) => return family_err("missing value".into()),
                    _ => return family_err("expects exactly one value".into()),
                };
                Symbol::Const(c)
            }
            "vpow" => Symbol::VPow(get("p").ok_or_else(|| Error::Parameter {
                family: name.into(),
                msg: "missing parameter `p`".into(),
            })?),
            "oscexp" => Symbol::OscExp,
            "vi" => Symbol::Vi,
            "sininvpow" => Symbol::SinInvPow { alpha: real("alpha")?, beta: real("beta")? },
            "cosinvpow" => Symbol::CosInvPow { alpha: real("alpha")?, beta: real("beta")? },
            "logpow" => Symbol::LogPow { alpha: real("alpha")?, beta: real("beta")? },
            "plainsin_invpow" => Symbol::PlainSinInvPow { alpha: real("alpha")?, tau: real("tau")? },
            _ => {
                if exprs.len() != 1 {
                    return family_err("expects exactly one sub-expression".into());
                }
                let inner = Box::new(exprs.pop().unwrap());
                let cutoff = real("cutoff")?;
                if name == "trunc" {
                    Symbol::Truncate { cutoff, inner }
                } else {
                    Symbol::Head { cutoff, inner }
                }
            }
        };
        s.validate()?;
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn basic_forms() {
        assert_eq!(parse_symbol("const(1)").unwrap(), Symbol::Const(Complex64::from(1.0)));
        assert_eq!(parse_symbol(" const ( c = 2i ) ").unwrap(), Symbol::Const(Complex64::new(0.0, 2.0)));
        assert_eq!(
            parse_symbol("sininvpow(alpha=1,beta=0.5)").unwrap(),
            Symbol::SinInvPow { alpha: 1.0, beta: 0.5 }
        );
        assert_eq!(parse_symbol("vpow(p=-0.5+i)").unwrap(), Symbol::VPow(Complex64::new(-0.5, 1.0)));
        assert_eq!(parse_symbol("vpow(p=1e-1-2.5i)").unwrap(), Symbol::VPow(Complex64::new(0.1, -2.5)));
        let c = parse_symbol("sininvpow(alpha=1,beta=0.75)*plainsin_invpow(alpha=1,tau=0.5)").unwrap();
        assert_eq!(
            c,
            Symbol::Product(vec![
                Symbol::SinInvPow { alpha: 1.0, beta: 0.75 },
                Symbol::PlainSinInvPow { alpha: 1.0, tau: 0.5 }
            ])
        );
    }

    #[test]
    fn precedence_and_scalars() {
        let s = parse_symbol("0.5*vpow(p=-0.25)+2i*oscexp()*vi()").unwrap();
        assert_eq!(
            s,
            Symbol::Sum(vec![
                Symbol::Scale(Complex64::from(0.5), Box::new(Symbol::VPow(Complex64::from(-0.25)))),
                Symbol::Product(vec![
                    Symbol::Scale(Complex64::new(0.0, 2.0), Box::new(Symbol::OscExp)),
                    Symbol::Vi
                ]),
            ])
        );
        let s = parse_symbol("(1-2i)*(const(1)+oscexp())").unwrap();
        assert!(matches!(s, Symbol::Scale(c, _) if c == Complex64::new(1.0, -2.0)));
        let s = parse_symbol("trunc(cutoff=0.5, 2*vi())").unwrap();
        assert!(matches!(s, Symbol::Truncate { cutoff, .. } if cutoff == 0.5));
    }

    #[test]
    fn syntax_errors_carry_position() {
        match parse_symbol("const(1) + ") {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 11),
            other => panic!("{other:?}"),
        }
        match parse_symbol("oscexp(") {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 7),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_symbol("bogus(x=1)"), Err(Error::Syntax { pos: 0, .. })));
        assert!(matches!(parse_symbol("const(1))"), Err(Error::Syntax { pos: 8, .. })));
        assert!(matches!(parse_symbol("2 oscexp()"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn parameter_errors() {
        assert!(matches!(parse_symbol("sininvpow(alpha=1,beta=1)"), Err(Error::Parameter { .. })));
        assert!(matches!(parse_symbol("sininvpow(alpha=1)"), Err(Error::Parameter { .. })));
        assert!(matches!(parse_symbol("sininvpow(alpha=1,gamma=0.2)"), Err(Error::Parameter { .. })));
        assert!(matches!(parse_symbol("vpow(p=-1)"), Err(Error::Parameter { .. })));
        assert!(matches!(parse_symbol("logpow(alpha=1i,beta=0)"), Err(Error::Parameter { .. })));
        assert!(matches!(parse_symbol("oscexp(p=1)"), Err(Error::Parameter { .. })));
    }

    #[test]
    fn canonical_print_examples() {
        for text in [
            "const(1)",
            "const(0.5-2i)",
            "sininvpow(alpha=1,beta=0.5)",
            "0.5*vpow(p=-0.25)+(0.5+1i)*oscexp()",
            "(2*oscexp())*vi()",
            "trunc(cutoff=0.3183098861837907,sininvpow(alpha=1,beta=0.5))",
            "head(cutoff=2,const(1)+vi())",
            "const(1)*(vi()+oscexp())",
        ] {
            let s = parse_symbol(text).unwrap();
            assert_eq!(s.to_string(), text);
        }
    }

    fn leaf() -> impl Strategy<Value = Symbol> {
        let num = prop_oneof![(-5.0f64..5.0), Just(0.0), Just(1.0), (1e-9f64..1e-6)];
        prop_oneof![
            (num.clone(), num.clone()).prop_map(|(a, b)| Symbol::Const(Complex64::new(a, b))),
            (-0.99f64..3.0, -2.0f64..2.0).prop_map(|(a, b)| Symbol::VPow(Complex64::new(a, b))),
            Just(Symbol::OscExp),
            Just(Symbol::Vi),
            (0.1f64..3.0, 0.01f64..0.99).prop_map(|(alpha, beta)| Symbol::SinInvPow { alpha, beta }),
            (0.1f64..3.0, 0.01f64..0.99).prop_map(|(alpha, beta)| Symbol::CosInvPow { alpha, beta }),
            (0.1f64..3.0, 0.01f64..3.0).prop_map(|(alpha, tau)| Symbol::PlainSinInvPow { alpha, tau }),
            (0.1f64..3.0, 0.0f64..0.99).prop_map(|(alpha, beta)| Symbol::LogPow { alpha, beta }),
        ]
    }

    fn tree() -> impl Strategy<Value = Symbol> {
        leaf().prop_recursive(3, 16, 3, |inner| {
            prop_oneof![
                prop::collection::vec(inner.clone(), 2..4).prop_map(Symbol::Sum),
                prop::collection::vec(inner.clone(), 2..4).prop_map(Symbol::Product),
                (-3.0f64..3.0, -3.0f64..3.0, inner.clone())
                    .prop_map(|(a, b, s)| Symbol::Scale(Complex64::new(a, b), Box::new(s))),
                (1e-3f64..10.0, inner.clone()).prop_map(|(c, s)| Symbol::Truncate { cutoff: c, inner: Box::new(s) }),
                (1e-3f64..10.0, inner).prop_map(|(c, s)| Symbol::Head { cutoff: c, inner: Box::new(s) }),
            ]
        })
    }

    proptest! {
        #[test]
        fn print_parse_roundtrip(s in tree()) {
            let text = s.to_string();
            let back = parse_symbol(&text).unwrap();
            prop_assert_eq!(back, s);
        }

        #[test]
        fn whitespace_insensitive(s in tree()) {
            let text = s.to_string();
            let spaced: String = text.chars().flat_map(|c| {
                // spaces may not split numeric literals
                if matches!(c, '(' | ')' | ',' | '*' | '=') { vec![' ', c, ' '] } else { vec![c] }
            }).collect();
            prop_assert_eq!(parse_symbol(&spaced).unwrap(), s);
        }
    }
}
