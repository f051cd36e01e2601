//! Symbolic differentiation.

use crate::assume::{ask, Property};
use crate::error::{Error, Result};
use crate::expr::{Expr, Func, Node};
use crate::matrix::MatrixExpr;
use crate::symbol::Symbol;

/// Partial derivative of `e` with respect to `v`.
pub fn diff(e: &Expr, v: &Symbol) -> Result<Expr> {
    if e.is_free_of(v) && !e.contains_order() && !e.contains_limit() {
        return Ok(Expr::zero());
    }
    Ok(match e.node() {
        Node::Const(_) | Node::Named(_) => Expr::zero(),
        Node::Sym(s) => {
            if s == v {
                Expr::one()
            } else {
                Expr::zero()
            }
        }
        Node::Add(ts) => Expr::add(ts.iter().map(|t| diff(t, v)).collect::<Result<_>>()?),
        Node::Mul(fs) => {
            let mut terms = Vec::new();
            for i in 0..fs.len() {
                let d = diff(&fs[i], v)?;
                if d.is_zero() {
                    continue;
                }
                let mut parts: Vec<Expr> = fs.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, f)| f.clone()).collect();
                parts.push(d);
                terms.push(Expr::mul(parts));
            }
            Expr::add(terms)
        }
        Node::Pow(b, x) => {
            let db = diff(b, v)?;
            if x.is_free_of(v) {
                let lowered = Expr::pow(b, &(x - &Expr::one()))?;
                Expr::mul(vec![x.clone(), lowered, db])
            } else {
                // d(b^x) = b^x * (x' log b + x b'/b)
                let dx = diff(x, v)?;
                let log_part = Expr::mul(vec![dx, b.log()?]);
                let base_part = Expr::mul(vec![x.clone(), db, b.recip()?]);
                Expr::mul(vec![e.clone(), log_part + base_part])
            }
        }
        Node::Func(f, a) => {
            let da = diff(a, v)?;
            let outer = match f {
                Func::Sin => a.cos()?,
                Func::Cos => -a.sin()?,
                Func::Exp => e.clone(),
                Func::Log => a.recip()?,
                Func::Abs => {
                    if !ask(a, Property::Real).is_yes() {
                        return Err(Error::NonDifferentiable(format!(
                            "abs({a}) has an argument not known to be real"
                        )));
                    }
                    Expr::mul(vec![a.clone(), e.recip()?])
                }
            };
            Expr::mul(vec![outer, da])
        }
        Node::Order { .. } => return Err(Error::UnsupportedNode("cannot differentiate an order term".into())),
        Node::Limit { .. } => {
            return Err(Error::UnsupportedNode("cannot differentiate an unevaluated limit".into()))
        }
    })
}

/// Gradient of `e` over `vars`, in order.
pub fn der(e: &Expr, vars: &[Symbol]) -> Result<Vec<Expr>> {
    vars.iter().map(|v| diff(e, v)).collect()
}

/// Hessian of `e` over `vars`. The upper triangle is mirrored so the
/// result is symmetric.
pub fn der2(e: &Expr, vars: &[Symbol]) -> Result<MatrixExpr> {
    let n = vars.len();
    let mut h = MatrixExpr::zeros(n, n);
    for (i, gi) in der(e, vars)?.iter().enumerate() {
        for j in i..n {
            let d = diff(gi, &vars[j])?;
            h.set(j, i, d.clone());
            h.set(i, j, d);
        }
    }
    Ok(h)
}
