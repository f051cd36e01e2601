//! Uncanonicalized trees, as produced by the parser.

use super::{Constant, Direction, Expr, Func, Node, Rational};
use crate::error::Result;
use crate::symbol::Symbol;

/// An expression tree with no normalization applied.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RawExpr {
    Num(Rational),
    Named(Constant),
    Sym(Symbol),
    Add(Vec<RawExpr>),
    Mul(Vec<RawExpr>),
    Neg(Box<RawExpr>),
    Sub(Box<RawExpr>, Box<RawExpr>),
    Div(Box<RawExpr>, Box<RawExpr>),
    Pow(Box<RawExpr>, Box<RawExpr>),
    Func(Func, Box<RawExpr>),
    Order { var: Symbol, point: Box<RawExpr>, degree: u32 },
    Limit { body: Box<RawExpr>, var: Symbol, point: Box<RawExpr>, dir: Direction },
}

/// Builds the canonical form of a raw tree.
pub fn canonicalize(raw: &RawExpr) -> Result<Expr> {
    Ok(match raw {
        RawExpr::Num(r) => Expr::rational(r.clone()),
        RawExpr::Named(c) => Expr::constant(*c),
        RawExpr::Sym(s) => Expr::symbol(s),
        RawExpr::Add(ts) => Expr::add(ts.iter().map(canonicalize).collect::<Result<_>>()?),
        RawExpr::Mul(fs) => Expr::mul(fs.iter().map(canonicalize).collect::<Result<_>>()?),
        RawExpr::Neg(a) => -canonicalize(a)?,
        RawExpr::Sub(a, b) => canonicalize(a)? - canonicalize(b)?,
        RawExpr::Div(a, b) => canonicalize(a)?.checked_div(&canonicalize(b)?)?,
        RawExpr::Pow(b, e) => Expr::pow(&canonicalize(b)?, &canonicalize(e)?)?,
        RawExpr::Func(f, a) => Expr::func(*f, &canonicalize(a)?)?,
        RawExpr::Order { var, point, degree } => Expr::order(var, &canonicalize(point)?, *degree),
        RawExpr::Limit { body, var, point, dir } => {
            Expr::limit(&canonicalize(body)?, var, &canonicalize(point)?, *dir)
        }
    })
}

impl Expr {
    /// The tree as a raw expression with the same shape.
    pub fn to_raw(&self) -> RawExpr {
        match self.node() {
            Node::Const(r) => RawExpr::Num(r.clone()),
            Node::Named(c) => RawExpr::Named(*c),
            Node::Sym(s) => RawExpr::Sym(s.clone()),
            Node::Pow(b, e) => RawExpr::Pow(Box::new(b.to_raw()), Box::new(e.to_raw())),
            Node::Func(f, a) => RawExpr::Func(*f, Box::new(a.to_raw())),
            Node::Mul(fs) => RawExpr::Mul(fs.iter().map(Expr::to_raw).collect()),
            Node::Add(ts) => RawExpr::Add(ts.iter().map(Expr::to_raw).collect()),
            Node::Order { var, point, degree } => RawExpr::Order {
                var: var.clone(),
                point: Box::new(point.to_raw()),
                degree: *degree,
            },
            Node::Limit { body, var, point, dir } => RawExpr::Limit {
                body: Box::new(body.to_raw()),
                var: var.clone(),
                point: Box::new(point.to_raw()),
                dir: *dir,
            },
        }
    }
}
