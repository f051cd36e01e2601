//! Text to expression conversion.
//!
//! Grammar:
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' unary)?
//! atom  := number | ident | ident '(' expr (',' expr)* ')' | '(' expr ')'
//! ```
//!
//! Numbers are integer or decimal literals and become exact rationals.
//! There is no implicit multiplication. The statement layer of the CLI uses
//! the same syntax tree with two extensions (string literals and `[...]`
//! lists), enabled through [`parse_ast`].

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result, SourceSpan};
use crate::expr::{canonicalize, Constant, Direction, Expr, Func, Node, RawExpr, Rational};
use crate::symbol::{Symbol, SymbolTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

/// Untyped syntax tree.
#[derive(Debug, Clone, PartialEq)]
pub enum Ast {
    Num(Rational, SourceSpan),
    Ident(String, SourceSpan),
    Str(String, SourceSpan),
    List(Vec<Ast>, SourceSpan),
    Call { name: String, args: Vec<Ast>, span: SourceSpan },
    Neg(Box<Ast>, SourceSpan),
    Bin(BinOp, Box<Ast>, Box<Ast>, SourceSpan),
}

impl Ast {
    pub fn span(&self) -> SourceSpan {
        match self {
            Ast::Num(_, s)
            | Ast::Ident(_, s)
            | Ast::Str(_, s)
            | Ast::List(_, s)
            | Ast::Neg(_, s)
            | Ast::Bin(_, _, _, s) => *s,
            Ast::Call { span, .. } => *span,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Rational),
    Ident(String),
    Str(String),
    Op(char),
    End,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Num(_) => "number".into(),
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Str(_) => "string".into(),
        Tok::Op(c) => format!("`{c}`"),
        Tok::End => "end of input".into(),
    }
}

fn syntax(span: SourceSpan, message: impl Into<String>) -> Error {
    Error::Syntax { span, message: message.into() }
}

fn lex(text: &str, extended: bool) -> Result<Vec<(Tok, SourceSpan)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        if c.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let int_part = &text[start..i];
            let mut value = Rational::from_integer(int_part.parse::<BigInt>().unwrap());
            if i < bytes.len() && bytes[i] == b'.' {
                i += 1;
                let frac_start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if frac_start == i {
                    return Err(syntax(SourceSpan::new(start, i), "expected digits after decimal point"));
                }
                let digits = &text[frac_start..i];
                let num = digits.parse::<BigInt>().unwrap();
                let den = num_traits::pow(BigInt::from(10), digits.len());
                value += Rational::new(num, den);
            }
            out.push((Tok::Num(value), SourceSpan::new(start, i)));
        } else if c.is_ascii_alphabetic() || c == '_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((Tok::Ident(text[start..i].to_string()), SourceSpan::new(start, i)));
        } else if extended && c == '"' {
            i += 1;
            while i < bytes.len() && bytes[i] != b'"' {
                i += 1;
            }
            if i >= bytes.len() {
                return Err(syntax(SourceSpan::new(start, i), "unterminated string"));
            }
            out.push((Tok::Str(text[start + 1..i].to_string()), SourceSpan::new(start, i + 1)));
            i += 1;
        } else if "+-*/^(),".contains(c) || (extended && (c == '[' || c == ']')) {
            out.push((Tok::Op(c), SourceSpan::new(start, start + 1)));
            i += 1;
        } else {
            let ch = text[start..].chars().next().unwrap();
            return Err(syntax(
                SourceSpan::new(start, start + ch.len_utf8()),
                format!("unexpected character `{ch}`"),
            ));
        }
    }
    out.push((Tok::End, SourceSpan::point(text.len())));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, SourceSpan)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn span(&self) -> SourceSpan {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, SourceSpan) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, c: char) -> Result<SourceSpan> {
        if *self.peek() == Tok::Op(c) {
            Ok(self.bump().1)
        } else {
            Err(syntax(self.span(), format!("expected `{c}`, found {}", describe(self.peek()))))
        }
    }

    fn expr(&mut self) -> Result<Ast> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Op('+') => BinOp::Add,
                Tok::Op('-') => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            let span = SourceSpan::new(lhs.span().start, rhs.span().end);
            lhs = Ast::Bin(op, Box::new(lhs), Box::new(rhs), span);
        }
    }

    fn term(&mut self) -> Result<Ast> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Op('*') => BinOp::Mul,
                Tok::Op('/') => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            let span = SourceSpan::new(lhs.span().start, rhs.span().end);
            lhs = Ast::Bin(op, Box::new(lhs), Box::new(rhs), span);
        }
    }

    fn unary(&mut self) -> Result<Ast> {
        if *self.peek() == Tok::Op('-') {
            let start = self.bump().1.start;
            let inner = self.unary()?;
            let span = SourceSpan::new(start, inner.span().end);
            return Ok(Ast::Neg(Box::new(inner), span));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Ast> {
        let base = self.atom()?;
        if *self.peek() == Tok::Op('^') {
            self.bump();
            let exp = self.unary()?;
            let span = SourceSpan::new(base.span().start, exp.span().end);
            return Ok(Ast::Bin(BinOp::Pow, Box::new(base), Box::new(exp), span));
        }
        Ok(base)
    }

    fn comma_list(&mut self, close: char) -> Result<(Vec<Ast>, SourceSpan)> {
        let mut items = Vec::new();
        if *self.peek() == Tok::Op(close) {
            return Ok((items, self.bump().1));
        }
        loop {
            items.push(self.expr()?);
            match self.peek() {
                Tok::Op(',') => {
                    self.bump();
                }
                Tok::Op(c) if *c == close => return Ok((items, self.bump().1)),
                other => {
                    return Err(syntax(
                        self.span(),
                        format!("expected `,` or `{close}`, found {}", describe(other)),
                    ))
                }
            }
        }
    }

    fn atom(&mut self) -> Result<Ast> {
        let (tok, span) = self.bump();
        match tok {
            Tok::Num(r) => Ok(Ast::Num(r, span)),
            Tok::Str(s) => Ok(Ast::Str(s, span)),
            Tok::Ident(name) => {
                if *self.peek() == Tok::Op('(') {
                    self.bump();
                    let (args, close) = self.comma_list(')')?;
                    Ok(Ast::Call { name, args, span: SourceSpan::new(span.start, close.end) })
                } else {
                    Ok(Ast::Ident(name, span))
                }
            }
            Tok::Op('(') => {
                let inner = self.expr()?;
                self.expect(')')?;
                Ok(inner)
            }
            Tok::Op('[') => {
                let (items, close) = self.comma_list(']')?;
                Ok(Ast::List(items, SourceSpan::new(span.start, close.end)))
            }
            other => Err(syntax(span, format!("expected an expression, found {}", describe(&other)))),
        }
    }
}

/// Parses `text` into a syntax tree. With `extended`, string literals and
/// bracketed lists are also accepted.
pub fn parse_ast(text: &str, extended: bool) -> Result<Ast> {
    let toks = lex(text, extended)?;
    let mut p = Parser { toks, pos: 0 };
    let ast = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(syntax(p.span(), format!("unexpected {}", describe(p.peek()))));
    }
    Ok(ast)
}

fn arity(name: &str, args: &[Ast], n: usize, span: SourceSpan) -> Result<()> {
    if args.len() != n {
        return Err(syntax(span, format!("`{name}` takes {n} argument(s), got {}", args.len())));
    }
    Ok(())
}

/// Reads the variable, point and degree out of an order-term argument such
/// as `x^5` or `(x - 1)^3`.
fn order_parts(arg: &Expr, span: SourceSpan) -> Result<(Symbol, Expr, u32)> {
    let (base, exp) = arg.as_base_exp();
    let degree = exp
        .as_i64()
        .filter(|d| *d >= 1)
        .and_then(|d| u32::try_from(d).ok())
        .ok_or_else(|| syntax(span, "order term needs a positive integer exponent"))?;
    if let Some(v) = base.as_symbol() {
        return Ok((v.clone(), Expr::zero(), degree));
    }
    if let Node::Add(ts) = base.node() {
        if let [c, v] = ts.as_slice() {
            if let (Some(_), Some(v)) = (c.as_rational(), v.as_symbol()) {
                return Ok((v.clone(), -c, degree));
            }
        }
    }
    Err(syntax(span, "order term must be a power of `x` or `(x - a)`"))
}

/// Converts a syntax tree of the core grammar to a raw expression.
pub fn ast_to_raw(ast: &Ast, table: &SymbolTable) -> Result<RawExpr> {
    let rec = |a: &Ast| ast_to_raw(a, table);
    Ok(match ast {
        Ast::Num(r, _) => RawExpr::Num(r.clone()),
        Ast::Ident(name, span) => match name.as_str() {
            "pi" => RawExpr::Named(Constant::Pi),
            "I" => RawExpr::Named(Constant::ImaginaryUnit),
            "oo" => RawExpr::Named(Constant::Infinity),
            "E" => RawExpr::Func(Func::Exp, Box::new(RawExpr::Num(Rational::one()))),
            _ => RawExpr::Sym(table.resolve(name).map_err(|_| syntax(*span, format!("invalid name `{name}`")))?),
        },
        Ast::Str(_, span) => return Err(syntax(*span, "string literals are not expressions")),
        Ast::List(_, span) => return Err(syntax(*span, "lists are not expressions")),
        Ast::Neg(a, _) => RawExpr::Neg(Box::new(rec(a)?)),
        Ast::Bin(op, a, b, _) => {
            let (a, b) = (Box::new(rec(a)?), Box::new(rec(b)?));
            match op {
                BinOp::Add => RawExpr::Add(vec![*a, *b]),
                BinOp::Sub => RawExpr::Sub(a, b),
                BinOp::Mul => RawExpr::Mul(vec![*a, *b]),
                BinOp::Div => RawExpr::Div(a, b),
                BinOp::Pow => RawExpr::Pow(a, b),
            }
        }
        Ast::Call { name, args, span } => {
            if let Some(f) = Func::from_name(name) {
                arity(name, args, 1, *span)?;
                return Ok(RawExpr::Func(f, Box::new(rec(&args[0])?)));
            }
            match name.as_str() {
                "sqrt" => {
                    arity(name, args, 1, *span)?;
                    RawExpr::Pow(
                        Box::new(rec(&args[0])?),
                        Box::new(RawExpr::Num(Rational::new(BigInt::one(), BigInt::from(2)))),
                    )
                }
                "O" => {
                    arity(name, args, 1, *span)?;
                    let arg = canonicalize(&rec(&args[0])?)?;
                    let (var, point, degree) = order_parts(&arg, *span)?;
                    RawExpr::Order { var, point: Box::new(point.to_raw()), degree }
                }
                "Limit" => {
                    if args.len() != 3 && args.len() != 4 {
                        return Err(syntax(*span, "`Limit` takes 3 or 4 arguments"));
                    }
                    let var = match &args[1] {
                        Ast::Ident(v, s) => table.resolve(v).map_err(|_| syntax(*s, "expected a symbol"))?,
                        other => return Err(syntax(other.span(), "expected a symbol")),
                    };
                    let dir = match args.get(3) {
                        None => Direction::Both,
                        Some(Ast::Ident(d, s)) => Direction::from_keyword(d)
                            .ok_or_else(|| syntax(*s, "expected `left`, `right` or `both`"))?,
                        Some(other) => return Err(syntax(other.span(), "expected a direction")),
                    };
                    RawExpr::Limit {
                        body: Box::new(rec(&args[0])?),
                        var,
                        point: Box::new(rec(&args[2])?),
                        dir,
                    }
                }
                _ => return Err(Error::UnknownFunction { name: name.clone(), span: *span }),
            }
        }
    })
}

/// Parses `text` with every identifier an assumption-free symbol.
pub fn parse(text: &str) -> Result<Expr> {
    parse_with(text, &SymbolTable::new())
}

/// Parses `text`, resolving identifiers through `table`.
pub fn parse_with(text: &str, table: &SymbolTable) -> Result<Expr> {
    let ast = parse_ast(text, false)?;
    canonicalize(&ast_to_raw(&ast, table)?)
}

/// Parses without canonicalizing.
pub fn parse_raw(text: &str, table: &SymbolTable) -> Result<RawExpr> {
    ast_to_raw(&parse_ast(text, false)?, table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence_and_folding() {
        assert_eq!(parse("2+3*4").unwrap(), Expr::int(14));
        assert_eq!(parse("0.5").unwrap(), Expr::frac(1, 2));
        let x = Expr::symbol(&Symbol::plain("x").unwrap());
        assert_eq!(parse("-x^2").unwrap(), -x.powi(2).unwrap());
    }

    #[test]
    fn right_associative_power() {
        let e = parse("x^y^z").unwrap();
        let expect = parse("x^(y^z)").unwrap();
        assert_eq!(e, expect);
        assert_ne!(e, parse("(x^y)^z").unwrap());
    }

    #[test]
    fn no_implicit_multiplication() {
        assert!(matches!(parse("2x"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn unknown_function() {
        match parse("foo(x)") {
            Err(Error::UnknownFunction { name, span }) => {
                assert_eq!(name, "foo");
                assert_eq!(span, SourceSpan::new(0, 6));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn error_spans() {
        match parse("1 + * 2") {
            Err(Error::Syntax { span, .. }) => assert_eq!(span, SourceSpan::new(4, 5)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn worked_example_inputs() {
        let e = parse("a * x + b * x^2 + c * sin(x^2)").unwrap();
        assert_eq!(e.terms().len(), 3);
        let e = parse("(1 + 1/n)^n").unwrap();
        assert!(matches!(e.node(), Node::Pow(..)));
    }

    #[test]
    fn order_and_limit_round_trip() {
        for s in ["1 - x^2/2 + x^4/24 + O(x^5)", "Limit((1 + 1/n)^n, n, oo)", "O((x - 1)^3)", "Limit(1/x, x, 0, right)"] {
            let e = parse(s).unwrap();
            assert_eq!(e.to_string(), s);
        }
    }

    #[test]
    fn whitespace_insensitive() {
        assert_eq!(parse(" a*( b+c ) ").unwrap(), parse("a*(b+c)").unwrap());
    }
}
