//! Statement evaluation against a binding environment.

use std::collections::BTreeMap;

use symcas::calculus::{der, der2, diff, doit, integrate, limit, remove_order, taylor};
use symcas::matrix::{self, Eigen, MatrixExpr, Qr};
use symcas::parser::{ast_to_raw, parse_ast, Ast, BinOp};
use symcas::polys::{cancel, collect, expand, factor};
use symcas::solver::{solve_lin, solve_sys, SolutionSet};
use symcas::symbol::{is_valid_identifier, RESERVED_NAMES};
use symcas::{
    ask, evalf, Assumptions, Bindings, Constant, Direction, Error, Expr, Func, Property, SourceSpan, Symbol,
    SymbolTable, Tri,
};

use crate::render;
use crate::table::{cancellation_table, format_table};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputMode {
    Infix,
    Latex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Options {
    pub mode: OutputMode,
    pub digits: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options { mode: OutputMode::Infix, digits: 15 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Expr(Expr),
    Matrix(MatrixExpr),
    /// A scalar factor times a matrix, kept apart for display.
    Scaled(Expr, MatrixExpr),
    List(Vec<Value>),
    Solutions(SolutionSet),
    Eigen(Vec<Eigen>),
    Qr(Qr),
    Text(String),
}

impl Value {
    fn kind(&self) -> &'static str {
        match self {
            Value::Expr(_) => "an expression",
            Value::Matrix(_) | Value::Scaled(..) => "a matrix",
            Value::List(_) => "a list",
            Value::Solutions(_) => "a solution set",
            Value::Eigen(_) => "an eigen decomposition",
            Value::Qr(_) => "a QR factorization",
            Value::Text(_) => "text",
        }
    }
}

/// An error message with an optional byte range in the statement.
#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostic {
    pub message: String,
    pub span: Option<SourceSpan>,
}

impl Diagnostic {
    fn new(message: impl Into<String>, span: SourceSpan) -> Diagnostic {
        Diagnostic { message: message.into(), span: Some(span) }
    }

    fn shifted(mut self, by: usize) -> Diagnostic {
        self.span = self.span.map(|s| SourceSpan::new(s.start + by, s.end + by));
        self
    }

    /// Message followed by the statement with the span underlined.
    pub fn render(&self, line: &str) -> String {
        let mut out = format!("error: {}", self.message);
        if let Some(s) = self.span {
            let start = s.start.min(line.len());
            let width = s.end.saturating_sub(s.start).max(1);
            out.push_str(&format!("\n  {line}\n  {}{}", " ".repeat(start), "^".repeat(width)));
        }
        out
    }
}

fn kernel(span: SourceSpan) -> impl Fn(Error) -> Diagnostic {
    move |e| match e {
        Error::Syntax { span, message } => Diagnostic::new(format!("syntax error: {message}"), span),
        Error::UnknownFunction { name, span } => Diagnostic::new(format!("unknown function `{name}`"), span),
        other => Diagnostic::new(other.to_string(), span),
    }
}

type Res<T> = Result<T, Diagnostic>;

/// Bindings, declared symbols and output options of one session.
#[derive(Debug, Clone, Default)]
pub struct Session {
    bindings: BTreeMap<String, Value>,
    table: SymbolTable,
    pub options: Options,
}

/// Removes a trailing `#` comment that is not inside a string literal.
fn strip_comment(line: &str) -> &str {
    let mut in_str = false;
    for (i, c) in line.char_indices() {
        match c {
            '"' => in_str = !in_str,
            '#' if !in_str => return &line[..i],
            _ => {}
        }
    }
    line
}

fn find_assignment(line: &str) -> Option<usize> {
    let mut in_str = false;
    let bytes = line.as_bytes();
    for i in 0..bytes.len() {
        match bytes[i] {
            b'"' => in_str = !in_str,
            b':' if !in_str && bytes.get(i + 1) == Some(&b'=') => return Some(i),
            _ => {}
        }
    }
    None
}

impl Session {
    pub fn new(options: Options) -> Session {
        Session { options, ..Session::default() }
    }

    pub fn get(&self, name: &str) -> Option<&Value> {
        self.bindings.get(name)
    }

    /// Runs one statement. Output is empty for assignments and blank lines.
    /// On error the session is unchanged.
    pub fn run_statement(&mut self, line: &str) -> Res<String> {
        let code = strip_comment(line);
        if code.trim().is_empty() {
            return Ok(String::new());
        }
        let (target, rhs_start) = match find_assignment(code) {
            Some(i) => {
                let name = code[..i].trim();
                let at = SourceSpan::new(code.len() - code.trim_start().len(), i);
                if !is_valid_identifier(name) || RESERVED_NAMES.contains(&name) {
                    return Err(Diagnostic::new(format!("cannot assign to `{name}`"), at));
                }
                (Some(name.to_string()), i + 2)
            }
            None => (None, 0),
        };
        let rhs = &code[rhs_start..];
        let ast = parse_ast(rhs, true).map_err(|e| kernel(SourceSpan::new(0, rhs.len()))(e).shifted(rhs_start))?;
        let mut ev = Evaluator { bindings: &self.bindings, table: self.table.clone(), options: self.options };
        let value = ev.eval(&ast).map_err(|d| d.shifted(rhs_start))?;
        let table = ev.table;
        self.table = table;
        match target {
            Some(name) => {
                self.bindings.insert(name, value);
                Ok(String::new())
            }
            None => Ok(render::value(&value, self.options.mode)),
        }
    }
}

struct Evaluator<'a> {
    bindings: &'a BTreeMap<String, Value>,
    table: SymbolTable,
    options: Options,
}

fn expect<T>(v: Option<T>, what: &str, found: &Value, span: SourceSpan) -> Res<T> {
    v.ok_or_else(|| Diagnostic::new(format!("expected {what}, found {}", found.kind()), span))
}

fn keyword(a: &Ast) -> Option<&str> {
    match a {
        Ast::Ident(s, _) | Ast::Str(s, _) => Some(s.as_str()),
        _ => None,
    }
}

fn arity(name: &str, args: &[Ast], range: std::ops::RangeInclusive<usize>, span: SourceSpan) -> Res<()> {
    if range.contains(&args.len()) {
        return Ok(());
    }
    let want = if range.start() == range.end() {
        format!("{}", range.start())
    } else {
        format!("{} to {}", range.start(), range.end())
    };
    Err(Diagnostic::new(format!("`{name}` takes {want} argument(s), got {}", args.len()), span))
}

fn tri(t: Tri) -> &'static str {
    match t {
        Tri::Yes => "true",
        Tri::No => "false",
        Tri::Unknown => "unknown",
    }
}

fn map_value(v: &Value, f: &mut dyn FnMut(&Expr) -> symcas::Result<Expr>) -> symcas::Result<Value> {
    Ok(match v {
        Value::Expr(e) => Value::Expr(f(e)?),
        Value::Matrix(m) => Value::Matrix(m.map(f)?),
        Value::Scaled(c, m) => Value::Matrix(m.scale(c).map(f)?),
        Value::List(items) => Value::List(items.iter().map(|x| map_value(x, f)).collect::<symcas::Result<_>>()?),
        other => other.clone(),
    })
}

impl Evaluator<'_> {
    fn eval(&mut self, ast: &Ast) -> Res<Value> {
        match ast {
            Ast::Num(r, _) => Ok(Value::Expr(Expr::rational(r.clone()))),
            Ast::Str(s, _) => Ok(Value::Text(s.clone())),
            Ast::Ident(name, span) => self.ident(name, *span),
            Ast::List(items, _) => Ok(Value::List(items.iter().map(|a| self.eval(a)).collect::<Res<_>>()?)),
            Ast::Neg(a, span) => {
                let v = self.eval(a)?;
                self.binop(BinOp::Mul, Value::Expr(Expr::int(-1)), v, *span)
            }
            Ast::Bin(op, a, b, span) => {
                let (a, b) = (self.eval(a)?, self.eval(b)?);
                self.binop(*op, a, b, *span)
            }
            Ast::Call { name, args, span } => self.call(name, args, *span, ast),
        }
    }

    fn ident(&self, name: &str, span: SourceSpan) -> Res<Value> {
        if let Some(v) = self.bindings.get(name) {
            let table = &self.table;
            return map_value(v, &mut |e| e.refresh_symbols(table)).map_err(kernel(span));
        }
        Ok(Value::Expr(match name {
            "pi" => Expr::constant(Constant::Pi),
            "I" => Expr::constant(Constant::ImaginaryUnit),
            "oo" => Expr::infinity(),
            "E" => Expr::e(),
            _ => Expr::symbol(&self.table.resolve(name).map_err(kernel(span))?),
        }))
    }

    fn to_expr(&self, v: &Value, span: SourceSpan) -> Res<Expr> {
        match v {
            Value::Expr(e) => Ok(e.clone()),
            Value::Matrix(m) if m.shape() == (1, 1) => Ok(m.get(0, 0).clone()),
            other => expect(None, "an expression", other, span),
        }
    }

    fn to_matrix(&self, v: &Value, span: SourceSpan) -> Res<MatrixExpr> {
        match v {
            Value::Matrix(m) => Ok(m.clone()),
            Value::Scaled(c, m) => Ok(m.scale(c)),
            Value::List(items) if items.iter().all(|x| matches!(x, Value::List(_))) && !items.is_empty() => {
                let rows = items
                    .iter()
                    .map(|r| match r {
                        Value::List(xs) => xs.iter().map(|x| self.to_expr(x, span)).collect::<Res<Vec<_>>>(),
                        _ => unreachable!(),
                    })
                    .collect::<Res<Vec<_>>>()?;
                MatrixExpr::from_rows(rows).map_err(kernel(span))
            }
            Value::List(items) => {
                Ok(MatrixExpr::column(items.iter().map(|x| self.to_expr(x, span)).collect::<Res<_>>()?))
            }
            other => expect(None, "a matrix", other, span),
        }
    }

    fn to_exprs(&self, v: &Value, span: SourceSpan) -> Res<Vec<Expr>> {
        match v {
            Value::Expr(e) => Ok(vec![e.clone()]),
            Value::Matrix(m) => Ok(m.entries().to_vec()),
            Value::Scaled(c, m) => Ok(m.scale(c).entries().to_vec()),
            Value::List(items) => {
                let mut out = Vec::new();
                for x in items {
                    out.extend(self.to_exprs(x, span)?);
                }
                Ok(out)
            }
            other => expect(None, "expressions", other, span),
        }
    }

    fn to_symbols(&self, v: &Value, span: SourceSpan) -> Res<Vec<Symbol>> {
        self.to_exprs(v, span)?
            .iter()
            .map(|e| {
                e.as_symbol().cloned().ok_or_else(|| Diagnostic::new(format!("`{e}` is not a symbol"), span))
            })
            .collect()
    }

    fn to_symbol(&self, v: &Value, span: SourceSpan) -> Res<Symbol> {
        let e = self.to_expr(v, span)?;
        e.as_symbol().cloned().ok_or_else(|| Diagnostic::new(format!("`{e}` is not a symbol"), span))
    }

    fn to_int(&self, v: &Value, span: SourceSpan) -> Res<i64> {
        let e = self.to_expr(v, span)?;
        e.as_i64().ok_or_else(|| Diagnostic::new(format!("`{e}` is not an integer"), span))
    }

    fn to_count(&self, v: &Value, span: SourceSpan) -> Res<usize> {
        let n = self.to_int(v, span)?;
        usize::try_from(n).map_err(|_| Diagnostic::new(format!("`{n}` is negative"), span))
    }

    /// 1-based indices to 0-based.
    fn to_indices(&self, v: &Value, span: SourceSpan) -> Res<Vec<usize>> {
        self.to_exprs(v, span)?
            .iter()
            .map(|e| match e.as_i64() {
                Some(i) if i >= 1 => Ok(i as usize - 1),
                _ => Err(Diagnostic::new(format!("`{e}` is not a positive index"), span)),
            })
            .collect()
    }

    fn binop(&self, op: BinOp, a: Value, b: Value, span: SourceSpan) -> Res<Value> {
        use Value::{Expr as E, Matrix as M};
        let k = kernel(span);
        let promote = |v: Value| -> Res<Value> {
            match v {
                Value::List(_) | Value::Scaled(..) => Ok(M(self.to_matrix(&v, span)?)),
                other => Ok(other),
            }
        };
        let (a, b) = (promote(a)?, promote(b)?);
        let a = match a {
            M(m) if m.shape() == (1, 1) && matches!(b, E(_)) => E(m.get(0, 0).clone()),
            other => other,
        };
        let b = match b {
            M(m) if m.shape() == (1, 1) && matches!(a, E(_)) => E(m.get(0, 0).clone()),
            other => other,
        };
        Ok(match (op, a, b) {
            (BinOp::Add, E(x), E(y)) => E(x + y),
            (BinOp::Sub, E(x), E(y)) => E(x - y),
            (BinOp::Mul, E(x), E(y)) => E(x * y),
            (BinOp::Div, E(x), E(y)) => E(x.checked_div(&y).map_err(k)?),
            (BinOp::Pow, E(x), E(y)) => E(Expr::pow(&x, &y).map_err(k)?),
            (BinOp::Add, M(x), M(y)) => M(x.add(&y).map_err(k)?),
            (BinOp::Sub, M(x), M(y)) => M(x.sub(&y).map_err(k)?),
            (BinOp::Mul, M(x), M(y)) => M(x.matmul(&y).map_err(k)?),
            (BinOp::Mul, E(c), M(m)) | (BinOp::Mul, M(m), E(c)) => M(m.scale(&c)),
            (BinOp::Div, M(m), E(c)) => M(m.scale(&c.recip().map_err(k)?)),
            (BinOp::Pow, M(m), E(n)) => M(self.matrix_power(&m, &n, span)?),
            (op, x, y) => {
                let sym = match op {
                    BinOp::Add => "+",
                    BinOp::Sub => "-",
                    BinOp::Mul => "*",
                    BinOp::Div => "/",
                    BinOp::Pow => "^",
                };
                return Err(Diagnostic::new(format!("cannot apply `{sym}` to {} and {}", x.kind(), y.kind()), span));
            }
        })
    }

    fn matrix_power(&self, m: &MatrixExpr, n: &Expr, span: SourceSpan) -> Res<MatrixExpr> {
        let k = n.as_i64().ok_or_else(|| Diagnostic::new("matrix powers need an integer exponent", span))?;
        if !m.is_square() {
            return Err(Diagnostic::new("matrix powers need a square matrix", span));
        }
        let base = if k < 0 { matrix::inv(m).map_err(kernel(span))? } else { m.clone() };
        let mut out = MatrixExpr::identity(m.rows());
        for _ in 0..k.unsigned_abs() {
            out = out.matmul(&base).map_err(kernel(span))?;
        }
        Ok(out)
    }

    fn args(&mut self, args: &[Ast]) -> Res<Vec<Value>> {
        args.iter().map(|a| self.eval(a)).collect()
    }

    fn call(&mut self, name: &str, args: &[Ast], span: SourceSpan, ast: &Ast) -> Res<Value> {
        let k = kernel(span);
        if let Some(f) = Func::from_name(name).or((name == "sqrt").then_some(Func::Exp)) {
            arity(name, args, 1..=1, span)?;
            let v = self.eval(&args[0])?;
            let sqrt = name == "sqrt";
            return map_value(&v, &mut |e| if sqrt { e.sqrt() } else { Expr::func(f, e) }).map_err(k);
        }
        match name {
            "O" | "Limit" => {
                let raw = ast_to_raw(ast, &self.table).map_err(&k)?;
                Ok(Value::Expr(symcas::expr::canonicalize(&raw).map_err(k)?))
            }
            "sym" => self.sym(args, span),
            "der" => {
                arity(name, args, 2..=2, span)?;
                let v = self.args(args)?;
                match &v[1] {
                    Value::Expr(x) if x.as_symbol().is_some() => {
                        let s = x.as_symbol().unwrap().clone();
                        map_value(&v[0], &mut |e| diff(e, &s)).map_err(k)
                    }
                    other => {
                        let vars = self.to_symbols(other, span)?;
                        let g = der(&self.to_expr(&v[0], span)?, &vars).map_err(k)?;
                        Ok(Value::Matrix(MatrixExpr::column(g)))
                    }
                }
            }
            "der2" => {
                arity(name, args, 2..=2, span)?;
                let v = self.args(args)?;
                let vars = self.to_symbols(&v[1], span)?;
                Ok(Value::Matrix(der2(&self.to_expr(&v[0], span)?, &vars).map_err(k)?))
            }
            "int" => {
                arity(name, args, 2..=2, span)?;
                let v = self.args(args)?;
                let x = self.to_symbol(&v[1], span)?;
                Ok(Value::Expr(integrate(&self.to_expr(&v[0], span)?, &x).map_err(k)?))
            }
            "taylor" => {
                arity(name, args, 4..=4, span)?;
                let v = self.args(args)?;
                let x = self.to_symbol(&v[1], span)?;
                let x0 = self.to_expr(&v[2], span)?;
                let n = u32::try_from(self.to_int(&v[3], span)?)
                    .map_err(|_| Diagnostic::new("series order must be positive", span))?;
                Ok(Value::Expr(taylor(&self.to_expr(&v[0], span)?, &x, &x0, n).map_err(k)?.to_expr()))
            }
            "drop_remainder" => {
                arity(name, args, 1..=1, span)?;
                let v = self.eval(&args[0])?;
                map_value(&v, &mut |e| Ok(remove_order(e))).map_err(k)
            }
            "limit" => self.limit(args, span),
            "doit" => self.entrywise(name, args, span, &mut |e| doit(e)),
            "expand" => self.entrywise(name, args, span, &mut |e| expand(e)),
            "simplify" | "cancel" => self.entrywise(name, args, span, &mut |e| cancel(e)),
            "factor" => self.entrywise(name, args, span, &mut |e| factor(e)),
            "collect" => {
                arity(name, args, 2..=2, span)?;
                let v = self.args(args)?;
                let x = self.to_symbol(&v[1], span)?;
                map_value(&v[0], &mut |e| collect(e, &x)).map_err(k)
            }
            "subs" => self.subs(args, span),
            "solve_sys" => {
                arity(name, args, 2..=3, span)?;
                let v = self.args(args)?;
                let mut eqs = self.to_exprs(&v[0], span)?;
                if v.len() == 3 {
                    let rhs = self.to_exprs(&v[1], span)?;
                    if rhs.len() != eqs.len() {
                        return Err(Diagnostic::new("left and right sides differ in length", span));
                    }
                    eqs = eqs.iter().zip(&rhs).map(|(l, r)| l - r).collect();
                }
                let vars = self.to_symbols(v.last().unwrap(), span)?;
                Ok(Value::Solutions(solve_sys(&eqs, &vars).map_err(k)?))
            }
            "solve_lin" => {
                arity(name, args, 1..=2, span)?;
                let v = self.args(args)?;
                let a = self.to_matrix(&v[0], span)?;
                let r = match v.get(1) {
                    Some(b) => solve_lin(&a, &self.to_matrix(b, span)?),
                    None => matrix::inv(&a),
                };
                Ok(Value::Matrix(r.map_err(k)?))
            }
            "det" => {
                let m = self.one_matrix(name, args, span)?;
                Ok(Value::Expr(matrix::det(&m).map_err(k)?))
            }
            "inv" => {
                let m = self.one_matrix(name, args, span)?;
                Ok(Value::Matrix(matrix::inv(&m).map_err(k)?))
            }
            "eigen" => {
                let m = self.one_matrix(name, args, span)?;
                Ok(Value::Eigen(matrix::eigen(&m).map_err(k)?))
            }
            "eigenvalues" => {
                let m = self.one_matrix(name, args, span)?;
                let es = matrix::eigen(&m).map_err(k)?;
                Ok(Value::List(es.into_iter().map(|e| Value::Expr(e.value)).collect()))
            }
            "qr" => {
                let m = self.one_matrix(name, args, span)?;
                Ok(Value::Qr(matrix::qr(&m).map_err(k)?))
            }
            "nullspace" => {
                let m = self.one_matrix(name, args, span)?;
                Ok(Value::List(matrix::nullspace(&m).map_err(k)?.into_iter().map(Value::Matrix).collect()))
            }
            "schur" => {
                arity(name, args, 2..=2, span)?;
                let v = self.args(args)?;
                let m = self.to_matrix(&v[0], span)?;
                Ok(Value::Matrix(matrix::schur_complement(&m, self.to_count(&v[1], span)?).map_err(k)?))
            }
            "t" | "transpose" => Ok(Value::Matrix(self.one_matrix(name, args, span)?.transpose())),
            "matrix" => self.matrix(args, span),
            "diag" => {
                arity(name, args, 1..=2, span)?;
                let v = self.args(args)?;
                let d = if v.len() == 2 {
                    vec![self.to_expr(&v[0], span)?; self.to_count(&v[1], span)?]
                } else {
                    self.to_exprs(&v[0], span)?
                };
                Ok(Value::Matrix(MatrixExpr::diag(&d)))
            }
            "identity" => {
                arity(name, args, 1..=1, span)?;
                let v = self.eval(&args[0])?;
                Ok(Value::Matrix(MatrixExpr::identity(self.to_count(&v, span)?)))
            }
            "cbind" | "rbind" => {
                let v = self.args(args)?;
                let vecs = v.iter().map(|x| self.to_exprs(x, span)).collect::<Res<Vec<_>>>()?;
                let m = if name == "cbind" { MatrixExpr::from_columns(vecs) } else { MatrixExpr::from_rows(vecs) };
                Ok(Value::Matrix(m.map_err(k)?))
            }
            "entry" => {
                arity(name, args, 3..=3, span)?;
                let v = self.args(args)?;
                let m = self.to_matrix(&v[0], span)?;
                let (i, j) = (self.to_indices(&v[1], span)?, self.to_indices(&v[2], span)?);
                match (i.as_slice(), j.as_slice()) {
                    ([i], [j]) if *i < m.rows() && *j < m.cols() => Ok(Value::Expr(m.get(*i, *j).clone())),
                    _ => Err(Diagnostic::new("index out of range", span)),
                }
            }
            "submatrix" | "drop" => {
                arity(name, args, 3..=3, span)?;
                let v = self.args(args)?;
                let m = self.to_matrix(&v[0], span)?;
                let (i, j) = (self.to_indices(&v[1], span)?, self.to_indices(&v[2], span)?);
                let r = if name == "drop" { m.without(&i, &j) } else { m.submatrix(&i, &j) };
                Ok(Value::Matrix(r.map_err(k)?))
            }
            "hadamard" => {
                arity(name, args, 2..=2, span)?;
                let v = self.args(args)?;
                let (a, b) = (self.to_matrix(&v[0], span)?, self.to_matrix(&v[1], span)?);
                Ok(Value::Matrix(a.hadamard(&b).map_err(k)?))
            }
            "sum" => {
                arity(name, args, 1..=1, span)?;
                let v = self.eval(&args[0])?;
                Ok(Value::Expr(Expr::add(self.to_exprs(&v, span)?)))
            }
            "denominator" => {
                let m = self.one_matrix(name, args, span)?;
                let (c, rest) = matrix::extract_common_denominator(&m).map_err(k)?;
                Ok(Value::Scaled(c, rest))
            }
            "tex" => {
                arity(name, args, 1..=1, span)?;
                let v = self.eval(&args[0])?;
                Ok(Value::Text(render::value(&v, OutputMode::Latex)))
            }
            "evalf" => {
                arity(name, args, 1..=2, span)?;
                let v = self.args(args)?;
                let digits = match v.get(1) {
                    Some(d) => self.to_count(d, span)?,
                    None => self.options.digits,
                };
                match &v[0] {
                    Value::Matrix(m) => {
                        let cells = m
                            .to_rows()
                            .iter()
                            .map(|r| r.iter().map(|e| evalf(e, digits)).collect::<symcas::Result<Vec<_>>>())
                            .collect::<symcas::Result<Vec<_>>>()
                            .map_err(k)?;
                        Ok(Value::Text(render::grid(&cells)))
                    }
                    other => Ok(Value::Text(evalf(&self.to_expr(other, span)?, digits).map_err(k)?)),
                }
            }
            "ask" => {
                arity(name, args, 2..=2, span)?;
                let word = keyword(&args[1]).unwrap_or("");
                let prop = Property::from_keyword(word)
                    .ok_or_else(|| Diagnostic::new(format!("unknown property `{word}`"), args[1].span()))?;
                let v = self.eval(&args[0])?;
                Ok(Value::Text(tri(ask(&self.to_expr(&v, span)?, prop)).to_string()))
            }
            "table" => {
                arity(name, args, 5..=5, span)?;
                let v = self.args(args)?;
                let rational = |x: &Value| -> Res<symcas::Rational> {
                    let e = self.to_expr(x, span)?;
                    e.as_rational().cloned().ok_or_else(|| Diagnostic::new(format!("`{e}` is not a rational"), span))
                };
                let rows = cancellation_table(
                    &self.to_expr(&v[0], span)?,
                    &self.to_expr(&v[1], span)?,
                    &rational(&v[2])?,
                    &rational(&v[3])?,
                    self.to_count(&v[4], span)?,
                )
                .map_err(k)?;
                Ok(Value::Text(format_table(&rows)))
            }
            _ => Err(Diagnostic::new(format!("unknown command `{name}`"), span)),
        }
    }

    fn one_matrix(&mut self, name: &str, args: &[Ast], span: SourceSpan) -> Res<MatrixExpr> {
        arity(name, args, 1..=1, span)?;
        let v = self.eval(&args[0])?;
        self.to_matrix(&v, span)
    }

    fn entrywise(
        &mut self,
        name: &str,
        args: &[Ast],
        span: SourceSpan,
        f: &mut dyn FnMut(&Expr) -> symcas::Result<Expr>,
    ) -> Res<Value> {
        arity(name, args, 1..=1, span)?;
        let v = self.eval(&args[0])?;
        map_value(&v, f).map_err(kernel(span))
    }

    fn sym(&mut self, args: &[Ast], span: SourceSpan) -> Res<Value> {
        if args.is_empty() {
            return Err(Diagnostic::new("`sym` takes a name and optional assumptions", span));
        }
        let name = match &args[0] {
            Ast::Str(s, _) | Ast::Ident(s, _) => s.clone(),
            other => return Err(Diagnostic::new("expected a symbol name", other.span())),
        };
        let mut assumptions = Assumptions::NONE;
        for a in &args[1..] {
            let word = keyword(a).unwrap_or("");
            let extra = Assumptions::from_keyword(word)
                .ok_or_else(|| Diagnostic::new(format!("unknown assumption `{word}`"), a.span()))?;
            assumptions = assumptions.union(extra);
        }
        let s = self.table.declare(&name, assumptions).map_err(kernel(args[0].span()))?;
        Ok(Value::Expr(Expr::symbol(&s)))
    }

    fn limit(&mut self, args: &[Ast], span: SourceSpan) -> Res<Value> {
        if args.len() < 3 {
            return Err(Diagnostic::new("`limit` takes an expression, a variable, a point and options", span));
        }
        let e = self.eval(&args[0])?;
        let e = self.to_expr(&e, span)?;
        let x = self.eval(&args[1])?;
        let x = self.to_symbol(&x, args[1].span())?;
        let p = self.eval(&args[2])?;
        let p = self.to_expr(&p, args[2].span())?;
        let mut dir = Direction::Both;
        let mut deferred = false;
        for a in &args[3..] {
            match keyword(a) {
                Some("deferred") => deferred = true,
                Some(w) if Direction::from_keyword(w).is_some() => dir = Direction::from_keyword(w).unwrap(),
                _ => return Err(Diagnostic::new("expected `left`, `right`, `both` or `deferred`", a.span())),
            }
        }
        if deferred {
            return Ok(Value::Expr(Expr::limit(&e, &x, &p, dir)));
        }
        Ok(Value::Expr(limit(&e, &x, &p, dir).map_err(kernel(span))?))
    }

    fn subs(&mut self, args: &[Ast], span: SourceSpan) -> Res<Value> {
        arity("subs", args, 2..=3, span)?;
        let v = self.args(args)?;
        let bindings = match (&v[1], v.get(2)) {
            (Value::Solutions(s), which) => {
                let i = match which {
                    Some(w) => self.to_count(w, span)?,
                    None => 1,
                };
                if i == 0 || i > s.len() {
                    return Err(Diagnostic::new(format!("no solution {i}"), span));
                }
                s.bindings(i - 1)
            }
            (lhs, Some(rhs)) => {
                let syms = self.to_symbols(lhs, span)?;
                let vals = self.to_exprs(rhs, span)?;
                if syms.len() != vals.len() {
                    return Err(Diagnostic::new("symbols and values differ in length", span));
                }
                Bindings::new(syms.into_iter().zip(vals).collect()).map_err(kernel(span))?
            }
            (_, None) => return Err(Diagnostic::new("`subs` needs a symbol and a value, or a solution set", span)),
        };
        map_value(&v[0], &mut |e| e.subs(&bindings)).map_err(kernel(span))
    }

    fn matrix(&mut self, args: &[Ast], span: SourceSpan) -> Res<Value> {
        arity("matrix", args, 1..=3, span)?;
        let v = self.args(args)?;
        let k = kernel(span);
        if v.len() == 1 {
            return Ok(Value::Matrix(self.to_matrix(&v[0], span)?));
        }
        let rows = self.to_count(&v[1], span)?;
        let entries = self.to_exprs(&v[0], span)?;
        let cols = match v.get(2) {
            Some(c) => self.to_count(c, span)?,
            None if rows > 0 => entries.len() / rows,
            None => 0,
        };
        let filled = if entries.len() == 1 { vec![entries[0].clone(); rows * cols] } else { entries };
        // Column-major fill.
        let by_col = MatrixExpr::new(cols, rows, filled).map_err(k)?;
        Ok(Value::Matrix(by_col.transpose()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(s: &mut Session, line: &str) -> String {
        s.run_statement(line).unwrap_or_else(|d| panic!("{}", d.render(line)))
    }

    #[test]
    fn bindings_and_printing() {
        let mut s = Session::default();
        assert_eq!(run(&mut s, "x := sym(\"x\")"), "");
        assert_eq!(run(&mut s, "x"), "x");
        assert_eq!(run(&mut s, "f := (1 + 1/n)^n  # comment"), "");
        assert_eq!(run(&mut s, "limit(f, n, oo)"), "exp(1)");
        assert_eq!(run(&mut s, "tex(limit(f, n, oo, deferred))"), r"\lim_{n \to \infty} \left(1 + \frac{1}{n}\right)^{n}");
        assert_eq!(run(&mut s, "evalf(limit(f, n, oo), 3)"), "2.72");
    }

    #[test]
    fn matrices() {
        let mut s = Session::default();
        run(&mut s, "A := matrix([a, b, c, d], 2)");
        assert_eq!(run(&mut s, "A"), "[a  c]\n[b  d]");
        assert_eq!(run(&mut s, "det(A)"), "a*d - b*c");
        assert_eq!(run(&mut s, "denominator(inv(A))"), "1/(a*d - b*c) *\n[d   -c]\n[-b  a]");
        assert_eq!(run(&mut s, "A * identity(2) - A"), "[0  0]\n[0  0]");
        assert_eq!(run(&mut s, "entry(A, 2, 1)"), "b");
        assert_eq!(run(&mut s, "matrix(0, 2, 3)"), "[0  0  0]\n[0  0  0]");
    }

    #[test]
    fn errors_leave_session_intact() {
        let mut s = Session::default();
        run(&mut s, "y := 2");
        let d = s.run_statement("y := foo(3)").unwrap_err();
        assert_eq!(d.render("y := foo(3)"), "error: unknown command `foo`\n  y := foo(3)\n       ^^^^^^");
        assert_eq!(run(&mut s, "y"), "2");
        let d = s.run_statement("z := (1 + ").unwrap_err();
        assert!(d.message.starts_with("syntax error"));
        assert!(s.run_statement("oo := 1").is_err());
        assert!(s.run_statement("det(1, 2)").unwrap_err().message.contains("takes 1 argument"));
        assert!(s.get("z").is_none());
    }

    #[test]
    fn assumptions_take_effect() {
        let mut s = Session::default();
        run(&mut s, "x := sym(\"x\", real)");
        assert_eq!(run(&mut s, "ask(x, real)"), "true");
        assert_eq!(run(&mut s, "solve_sys(x^2 + 1, x)"), "No solutions");
        run(&mut s, "x := sym(\"x\")");
        assert_eq!(run(&mut s, "solve_sys(x^2 + 1, x)"), "Solution 1:\n  x =  -I\nSolution 2:\n  x =  I");
    }

    #[test]
    fn latex_mode() {
        let mut s = Session::new(Options { mode: OutputMode::Latex, digits: 15 });
        assert_eq!(run(&mut s, "x^2/2"), r"\frac{x^{2}}{2}");
        assert_eq!(run(&mut s, "evalf(exp(1/9))"), "1.11751906874186");
    }
}
