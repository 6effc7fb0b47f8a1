//! Pratt parser for coefficient expressions.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::symbolic::expr::{Exponent, Jet, Name};
use crate::symbolic::Expr;

/// Position of a character, both 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

impl Pos {
    pub const START: Pos = Pos { line: 1, column: 1 };
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExprError {
    #[error("{pos}: syntax error: expected {}, found {found}", expected.join(" or "))]
    Syntax {
        pos: Pos,
        /// Length of the offending token in characters (at least 1).
        len: usize,
        expected: Vec<String>,
        found: String,
    },
    #[error("{pos}: unknown identifier `{name}`")]
    UnknownIdentifier { pos: Pos, name: String },
}

impl ExprError {
    pub fn pos(&self) -> Pos {
        match self {
            ExprError::Syntax { pos, .. } | ExprError::UnknownIdentifier { pos, .. } => *pos,
        }
    }
}

/// Names an expression may mention.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Scope {
    pub vars: Vec<String>,
    pub params: Vec<String>,
    /// Arbitrary functions and their arguments. `F3_t_x` parses as the
    /// mixed derivative jet of a declared `F3(t, x)`.
    pub functions: BTreeMap<String, Vec<String>>,
}

pub const RESERVED: [&str; 3] = ["ln", "exp", "sqrt"];

impl Scope {
    pub fn new<S: AsRef<str>>(vars: &[S], params: &[S]) -> Scope {
        Scope {
            vars: vars.iter().map(|s| s.as_ref().to_string()).collect(),
            params: params.iter().map(|s| s.as_ref().to_string()).collect(),
            functions: BTreeMap::new(),
        }
    }

    pub fn with_function<S: AsRef<str>>(mut self, name: &str, args: &[S]) -> Scope {
        self.functions.insert(
            name.to_string(),
            args.iter().map(|s| s.as_ref().to_string()).collect(),
        );
        self
    }

    fn resolve(&self, name: &str) -> Option<Expr> {
        if self.vars.iter().any(|v| v == name) {
            return Some(Expr::var(name));
        }
        if self.params.iter().any(|p| p == name) {
            return Some(Expr::param(name));
        }
        let mut parts = name.split('_');
        let head = parts.next()?;
        let args = self.functions.get(head)?;
        let arg_refs: Vec<&str> = args.iter().map(String::as_str).collect();
        let mut jet = Jet::new(head, &arg_refs);
        for p in parts {
            jet = jet.bump(p)?;
        }
        Some(Expr::jet(jet))
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Op(char),
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(n) => format!("number `{n}`"),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Op(c) => format!("`{c}`"),
            Tok::End => "end of input".to_string(),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    pos: Pos,
    len: usize,
}

fn lex(text: &str, origin: Pos) -> Result<Vec<Token>, ExprError> {
    let mut out = Vec::new();
    let mut pos = origin;
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = pos;
        if c == '\n' {
            pos.line += 1;
            pos.column = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            pos.column += 1;
            i += 1;
            continue;
        }
        let begin = i;
        let tok = if c.is_ascii_digit() {
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[begin..i].iter().collect();
            Tok::Int(s.parse().expect("digits"))
        } else if c.is_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            Tok::Ident(chars[begin..i].iter().collect())
        } else if "+-*/^()".contains(c) {
            i += 1;
            Tok::Op(c)
        } else {
            return Err(ExprError::Syntax {
                pos: start,
                len: 1,
                expected: vec!["expression".into()],
                found: format!("`{c}`"),
            });
        };
        let len = i - begin;
        pos.column += len;
        out.push(Token {
            tok,
            pos: start,
            len,
        });
    }
    out.push(Token {
        tok: Tok::End,
        pos,
        len: 1,
    });
    Ok(out)
}

const BP_SUM: u8 = 10;
const BP_PRODUCT: u8 = 20;
const BP_UNARY: u8 = 25;
const BP_POWER: u8 = 30;

struct Parser<'a> {
    tokens: Vec<Token>,
    at: usize,
    depth: usize,
    scope: &'a Scope,
}

fn syntax(t: &Token, expected: &[&str]) -> ExprError {
    ExprError::Syntax {
        pos: t.pos,
        len: t.len.max(1),
        expected: expected.iter().map(|s| s.to_string()).collect(),
        found: t.tok.describe(),
    }
}

const AFTER_OPERAND: [&str; 6] = ["`+`", "`-`", "`*`", "`/`", "`^`", "end of input"];

impl Parser<'_> {
    fn peek(&self) -> &Token {
        &self.tokens[self.at]
    }

    fn next(&mut self) -> Token {
        let t = self.tokens[self.at].clone();
        if self.at + 1 < self.tokens.len() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, c: char) -> Result<(), ExprError> {
        let t = self.next();
        if t.tok == Tok::Op(c) {
            Ok(())
        } else {
            let want = format!("`{c}`");
            Err(syntax(&t, &[want.as_str()]))
        }
    }

    fn expr(&mut self, min_bp: u8) -> Result<Expr, ExprError> {
        let mut lhs = self.prefix()?;
        loop {
            let t = self.peek().clone();
            let (op, bp) = match t.tok {
                Tok::Op(c @ ('+' | '-')) => (c, BP_SUM),
                Tok::Op(c @ ('*' | '/')) => (c, BP_PRODUCT),
                Tok::Op('^') => ('^', BP_POWER),
                Tok::Op(')') | Tok::End => break,
                _ => {
                    let mut expected = AFTER_OPERAND.to_vec();
                    if self.depth > 0 {
                        expected[5] = "`)`";
                    }
                    return Err(syntax(&t, &expected));
                }
            };
            if bp < min_bp || (bp == min_bp && op != '^') {
                break;
            }
            self.next();
            lhs = match op {
                '+' => lhs + self.expr(bp)?,
                '-' => lhs - self.expr(bp)?,
                '*' => lhs * self.expr(bp)?,
                '/' => lhs / self.expr(bp)?,
                _ => {
                    let start = self.peek().clone();
                    // right-associative: the exponent may itself contain `^`
                    let ex = self.expr(bp)?;
                    let ex = rational_exponent(&ex).ok_or_else(|| ExprError::Syntax {
                        pos: start.pos,
                        len: start.len,
                        expected: vec!["rational constant exponent".into()],
                        found: format!("`{ex}`"),
                    })?;
                    Expr::pow(lhs, ex)
                }
            };
        }
        Ok(lhs)
    }

    fn prefix(&mut self) -> Result<Expr, ExprError> {
        let t = self.next();
        match &t.tok {
            Tok::Int(n) => Ok(Expr::constant(BigRational::from_integer(n.clone()))),
            Tok::Op('-') => Ok(-self.expr(BP_UNARY)?),
            Tok::Op('+') => self.expr(BP_UNARY),
            Tok::Op('(') => {
                self.depth += 1;
                let e = self.expr(0)?;
                self.expect(')')?;
                self.depth -= 1;
                Ok(e)
            }
            Tok::Ident(name) if RESERVED.contains(&name.as_str()) => {
                self.expect('(')?;
                self.depth += 1;
                let arg = self.expr(0)?;
                self.expect(')')?;
                self.depth -= 1;
                Ok(match name.as_str() {
                    "ln" => Expr::ln(arg),
                    "exp" => Expr::exp(arg),
                    _ => Expr::sqrt(arg),
                })
            }
            Tok::Ident(name) => {
                self.scope
                    .resolve(name)
                    .ok_or_else(|| ExprError::UnknownIdentifier {
                        pos: t.pos,
                        name: name.clone(),
                    })
            }
            _ => Err(syntax(&t, &["number", "identifier", "`(`", "`-`"])),
        }
    }
}

fn rational_exponent(e: &Expr) -> Option<Exponent> {
    let q = e.as_const()?;
    Some(Exponent::new(q.numer().to_i64()?, q.denom().to_i64()?))
}

/// Parses `text` over the names in `scope`.
pub fn parse_expression(text: &str, scope: &Scope) -> Result<Expr, ExprError> {
    parse_expression_at(text, scope, Pos::START)
}

/// Like [`parse_expression`], reporting positions relative to `origin`.
pub fn parse_expression_at(text: &str, scope: &Scope, origin: Pos) -> Result<Expr, ExprError> {
    let tokens = lex(text, origin)?;
    let mut p = Parser {
        tokens,
        at: 0,
        depth: 0,
        scope,
    };
    let e = p.expr(0)?;
    let t = p.next();
    if t.tok != Tok::End {
        return Err(syntax(&t, &AFTER_OPERAND));
    }
    Ok(e)
}

/// Shorthand for a scope with only variables and parameters.
pub fn parse_in(text: &str, vars: &[&str], params: &[&str]) -> Result<Expr, ExprError> {
    parse_expression(text, &Scope::new(vars, params))
}

/// Names of all variables and parameters mentioned by `e`.
pub fn free_names(e: &Expr) -> Vec<Name> {
    use crate::symbolic::Symbol;
    e.symbols()
        .into_iter()
        .filter_map(|s| match s {
            Symbol::Name(n) => Some(n),
            Symbol::Jet(_) => None,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::canonicalize;

    fn scope() -> Scope {
        Scope::new(&["t", "x"], &["a1", "b", "lambda"])
    }

    #[test]
    fn coefficient_with_reciprocal() {
        let e = parse_expression("a1 - 1/x", &scope()).unwrap();
        let x = Expr::var("x");
        assert_eq!(e, Expr::param("a1") - Expr::one() / &x);
        assert_eq!(e.to_string(), "a1 - 1/x");
    }

    #[test]
    fn precedence_and_associativity() {
        let s = scope();
        let e = parse_expression("2^3^2", &s).unwrap();
        assert_eq!(e, Expr::int(512));
        let e = parse_expression("-t^2", &s).unwrap();
        assert_eq!(e, -Expr::powi(Expr::var("t"), 2));
        let e = parse_expression("t - x - 1", &s).unwrap();
        let (t, x) = (Expr::var("t"), Expr::var("x"));
        assert_eq!(canonicalize(&e), canonicalize(&(&t - &x - 1)));
        let e = parse_expression("t/x/2", &s).unwrap();
        assert_eq!(canonicalize(&e), canonicalize(&(&t / (&x * 2))));
    }

    #[test]
    fn rational_exponent_and_functions() {
        let s = scope();
        let e = parse_expression("t^(1/2) + sqrt(x) + exp(t) - ln(x)", &s).unwrap();
        assert_eq!(e.to_string(), "t^(1/2) + x^(1/2) + exp(t) - ln(x)");
        let err = parse_expression("t^x", &s).unwrap_err();
        assert!(matches!(
            err,
            ExprError::Syntax {
                pos: Pos { column: 3, .. },
                ..
            }
        ));
    }

    #[test]
    fn empty_input_is_a_syntax_error() {
        let err = parse_expression("", &scope()).unwrap_err();
        assert_eq!(err.pos(), Pos::START);
    }

    #[test]
    fn implicit_multiplication_is_rejected() {
        match parse_expression("2x", &scope()).unwrap_err() {
            ExprError::Syntax { pos, found, .. } => {
                assert_eq!(pos.column, 2);
                assert_eq!(found, "identifier `x`");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_identifiers_are_positioned() {
        let err = parse_expression("t + zeta", &scope()).unwrap_err();
        assert_eq!(
            err,
            ExprError::UnknownIdentifier {
                pos: Pos { line: 1, column: 5 },
                name: "zeta".into()
            }
        );
    }

    #[test]
    fn jets_of_declared_functions() {
        let s = scope().with_function("F3", &["t", "x"]);
        let e = parse_expression("F3_t_x", &s).unwrap();
        let j = Jet::new("F3", &["t", "x"])
            .bump("t")
            .unwrap()
            .bump("x")
            .unwrap();
        assert_eq!(e, Expr::jet(j));
        assert!(parse_expression("F3_y", &s).is_err());
    }
}
