//! Expression grammar for defining equations.
//!
//! ```text
//! equation := expr '=' expr
//! expr     := term (('+' | '-') term)*
//! term     := unary (('*' | '/') unary)*
//! unary    := '-' unary | power
//! power    := atom ('^' INT)?
//! atom     := INT | 'i' | IDENT | 'conj' '(' expr ')' | '(' expr ')'
//! ```
//!
//! Rationals are written `p/q`, i.e. as a quotient of integer literals.

use std::fmt;

use num_bigint::BigInt;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Int(BigInt),
    I,
    Var(String),
    Conj(Box<Expr>),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equation {
    pub lhs: Expr,
    pub rhs: Expr,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    /// Byte offset into the source.
    pub pos: usize,
    pub message: String,
}

impl ParseError {
    /// Message followed by the source line and a caret under the offending position.
    pub fn render(&self, source: &str) -> String {
        let col = source[..self.pos.min(source.len())].chars().count();
        format!("{}\n  {}\n  {}^", self, source, " ".repeat(col))
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "syntax error at offset {}: {}", self.pos, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
    Eq,
    End,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Int(v) => format!("number {v}"),
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Plus => "`+`".into(),
        Tok::Minus => "`-`".into(),
        Tok::Star => "`*`".into(),
        Tok::Slash => "`/`".into(),
        Tok::Caret => "`^`".into(),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::Comma => "`,`".into(),
        Tok::Eq => "`=`".into(),
        Tok::End => "end of input".into(),
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = src[i..].chars().next().unwrap();
        if c.is_whitespace() {
            i += c.len_utf8();
            continue;
        }
        let start = i;
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            '=' => Tok::Eq,
            '0'..='9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((Tok::Int(src[start..i].parse().unwrap()), start));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(src[start..i].to_string()), start));
                continue;
            }
            other => {
                return Err(ParseError {
                    pos: start,
                    message: format!("unexpected character `{other}`"),
                })
            }
        };
        out.push((tok, start));
        i += c.len_utf8();
    }
    out.push((Tok::End, src.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if t != Tok::End {
            self.at += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            pos: self.pos(),
            message: message.into(),
        })
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), ParseError> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected {what}, found {}", describe(self.peek())))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let exp = match self.peek().clone() {
            Tok::Int(v) => match u32::try_from(&v) {
                Ok(e) => e,
                Err(_) => return self.error("exponent too large"),
            },
            Tok::Minus => return self.error("only nonnegative integer exponents are allowed"),
            other => return self.error(format!("expected an integer exponent, found {}", describe(&other))),
        };
        self.bump();
        if *self.peek() == Tok::Caret {
            return self.error("chained `^`; add parentheses");
        }
        Ok(Expr::Pow(Box::new(base), exp))
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek().clone() {
            Tok::Int(v) => {
                self.bump();
                Ok(Expr::Int(v))
            }
            Tok::Ident(name) if name == "i" => {
                self.bump();
                Ok(Expr::I)
            }
            Tok::Ident(name) if name == "conj" => {
                self.bump();
                self.expect(Tok::LParen, "`(` after conj")?;
                let inner = self.expr()?;
                self.expect(Tok::RParen, "`)` closing conj(")?;
                Ok(Expr::Conj(Box::new(inner)))
            }
            Tok::Ident(name) => {
                self.bump();
                Ok(Expr::Var(name))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            other => self.error(format!(
                "expected a number, variable or `(`, found {}",
                describe(&other)
            )),
        }
    }
}

pub fn parse_expr(src: &str) -> Result<Expr, ParseError> {
    let mut p = Parser { toks: lex(src)?, at: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return p.error(format!("unexpected {}", describe(p.peek())));
    }
    Ok(e)
}

pub fn parse_equation(src: &str) -> Result<Equation, ParseError> {
    let mut p = Parser { toks: lex(src)?, at: 0 };
    let lhs = p.expr()?;
    p.expect(Tok::Eq, "`=`")?;
    let rhs = p.expr()?;
    if *p.peek() != Tok::End {
        return p.error(format!("unexpected {}", describe(p.peek())));
    }
    Ok(Equation { lhs, rhs })
}

/// Comma-separated expressions, as used for point coordinates.
pub fn parse_list(src: &str) -> Result<Vec<Expr>, ParseError> {
    let mut p = Parser { toks: lex(src)?, at: 0 };
    let mut out = vec![p.expr()?];
    while *p.peek() == Tok::Comma {
        p.bump();
        out.push(p.expr()?);
    }
    if *p.peek() != Tok::End {
        return p.error(format!("expected `,` or end of input, found {}", describe(p.peek())));
    }
    Ok(out)
}

fn precedence(e: &Expr) -> u8 {
    match e {
        Expr::Bin(BinOp::Add | BinOp::Sub, ..) => 1,
        Expr::Bin(BinOp::Mul | BinOp::Div, ..) => 2,
        Expr::Neg(_) => 3,
        Expr::Pow(..) => 4,
        _ => 5,
    }
}

fn write_child(f: &mut fmt::Formatter<'_>, e: &Expr, parens: bool) -> fmt::Result {
    if parens {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

/// Prints with the fewest parentheses that reparse to the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Int(v) => write!(f, "{v}"),
            Expr::I => write!(f, "i"),
            Expr::Var(s) => write!(f, "{s}"),
            Expr::Conj(e) => write!(f, "conj({e})"),
            Expr::Neg(e) => {
                write!(f, "-")?;
                write_child(f, e, precedence(e) < 3)
            }
            Expr::Pow(b, k) => {
                write_child(f, b, precedence(b) < 5)?;
                write!(f, "^{k}")
            }
            Expr::Bin(op, a, b) => {
                let p = precedence(self);
                write_child(f, a, precedence(a) < p)?;
                let sym = match op {
                    BinOp::Add => " + ",
                    BinOp::Sub => " - ",
                    BinOp::Mul => "*",
                    BinOp::Div => "/",
                };
                write!(f, "{sym}")?;
                // Left-associative: an equal-precedence right operand needs parentheses.
                write_child(f, b, precedence(b) <= p)
            }
        }
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn var(s: &str) -> Expr {
        Expr::Var(s.into())
    }

    #[test]
    fn heisenberg_equation() {
        let e = parse_equation("w = conj(w) + 2*i*z*conj(z)").unwrap();
        assert_eq!(e.lhs, var("w"));
        assert_eq!(e.to_string(), "w = conj(w) + 2*i*z*conj(z)");
    }

    #[test]
    fn precedence_and_unary_minus() {
        let e = parse_expr("-x^2 + a*-b").unwrap();
        let expected = Expr::Bin(
            BinOp::Add,
            Box::new(Expr::Neg(Box::new(Expr::Pow(Box::new(var("x")), 2)))),
            Box::new(Expr::Bin(
                BinOp::Mul,
                Box::new(var("a")),
                Box::new(Expr::Neg(Box::new(var("b")))),
            )),
        );
        assert_eq!(e, expected);
        assert_eq!(parse_expr("a - (b - c)").unwrap().to_string(), "a - (b - c)");
        assert_eq!(parse_expr("(a - b) - c").unwrap().to_string(), "a - b - c");
    }

    #[test]
    fn unclosed_parenthesis_is_located() {
        let src = "w = conj(w) + 2*i*z*conj(z";
        let err = parse_equation(src).unwrap_err();
        assert_eq!(err.pos, src.len());
        assert!(err.message.contains("closing conj"));
        assert!(err.render(src).ends_with('^'));
    }

    #[test]
    fn bad_exponents_and_characters() {
        assert!(parse_expr("x^-1").unwrap_err().message.contains("nonnegative"));
        assert!(parse_expr("x^2^2").is_err());
        assert_eq!(parse_expr("x $ y").unwrap_err().pos, 2);
        assert!(parse_equation("w conj(w)").is_err());
    }

    #[test]
    fn point_lists() {
        let l = parse_list("1/2, -i").unwrap();
        assert_eq!(l.len(), 2);
        assert_eq!(l[1], Expr::Neg(Box::new(Expr::I)));
    }

    fn arb_expr() -> impl Strategy<Value = Expr> {
        let leaf = prop_oneof![
            (0u32..20).prop_map(|v| Expr::Int(v.into())),
            Just(Expr::I),
            prop_oneof![Just("z"), Just("w"), Just("x1"), Just("u")].prop_map(|s| Expr::Var(s.to_string())),
        ];
        leaf.prop_recursive(5, 40, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(|e| Expr::Conj(Box::new(e))),
                inner.clone().prop_map(|e| Expr::Neg(Box::new(e))),
                (inner.clone(), 0u32..5).prop_map(|(e, k)| Expr::Pow(Box::new(e), k)),
                (
                    prop_oneof![Just(BinOp::Add), Just(BinOp::Sub), Just(BinOp::Mul), Just(BinOp::Div)],
                    inner.clone(),
                    inner
                )
                    .prop_map(|(op, a, b)| Expr::Bin(op, Box::new(a), Box::new(b))),
            ]
        })
    }

    proptest! {
        #[test]
        fn print_then_parse_round_trips(e in arb_expr()) {
            let printed = e.to_string();
            prop_assert_eq!(parse_expr(&printed).unwrap(), e);
        }
    }
}
