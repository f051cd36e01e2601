//! Compilation of expressions to double-precision closures.

use std::sync::Arc;

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::expr::{Constant, Expr, Func, Node};
use crate::symbol::Symbol;

type Compiled = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// An expression compiled for evaluation over machine floats.
#[derive(Clone)]
pub struct NumericFn {
    arity: usize,
    f: Compiled,
}

impl NumericFn {
    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Evaluates at `args`, given in the order of the variable list.
    pub fn eval(&self, args: &[f64]) -> f64 {
        assert_eq!(args.len(), self.arity, "wrong number of arguments");
        (self.f)(args)
    }
}

impl std::fmt::Debug for NumericFn {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "NumericFn(arity = {})", self.arity)
    }
}

pub fn as_numeric_fn(e: &Expr, vars: &[Symbol]) -> Result<NumericFn> {
    Ok(NumericFn { arity: vars.len(), f: compile(e, vars)? })
}

fn compile(e: &Expr, vars: &[Symbol]) -> Result<Compiled> {
    Ok(match e.node() {
        Node::Const(r) => {
            let v = r.to_f64().unwrap_or(f64::NAN);
            Arc::new(move |_| v)
        }
        Node::Named(Constant::Pi) => Arc::new(|_| std::f64::consts::PI),
        Node::Named(Constant::Infinity) => Arc::new(|_| f64::INFINITY),
        Node::Named(Constant::ImaginaryUnit) => {
            return Err(Error::UnsupportedNode("imaginary unit".into()))
        }
        Node::Sym(s) => {
            let i = vars
                .iter()
                .position(|v| v == s)
                .ok_or_else(|| Error::NotGround(s.name().to_string()))?;
            Arc::new(move |xs| xs[i])
        }
        Node::Add(ts) => {
            let parts = ts.iter().map(|t| compile(t, vars)).collect::<Result<Vec<_>>>()?;
            Arc::new(move |xs| parts.iter().map(|p| p(xs)).sum())
        }
        Node::Mul(fs) => {
            let parts = fs.iter().map(|t| compile(t, vars)).collect::<Result<Vec<_>>>()?;
            Arc::new(move |xs| parts.iter().map(|p| p(xs)).product())
        }
        Node::Pow(b, x) => {
            let base = compile(b, vars)?;
            if let Some(n) = x.as_i64().and_then(|n| i32::try_from(n).ok()) {
                Arc::new(move |xs| base(xs).powi(n))
            } else if let Some(q) = x.as_rational() {
                let odd_den = q.denom().to_u64().is_some_and(|d| d % 2 == 1);
                let odd_num = q.numer().to_i64().is_some_and(|n| n % 2 != 0);
                let qf = q.to_f64().unwrap_or(f64::NAN);
                Arc::new(move |xs| {
                    let b = base(xs);
                    if b < 0.0 && odd_den {
                        let m = (-b).powf(qf);
                        if odd_num {
                            -m
                        } else {
                            m
                        }
                    } else {
                        b.powf(qf)
                    }
                })
            } else {
                let exp = compile(x, vars)?;
                Arc::new(move |xs| base(xs).powf(exp(xs)))
            }
        }
        Node::Func(f, a) => {
            let arg = compile(a, vars)?;
            let op: fn(f64) -> f64 = match f {
                Func::Abs => f64::abs,
                Func::Cos => f64::cos,
                Func::Exp => f64::exp,
                Func::Log => f64::ln,
                Func::Sin => f64::sin,
            };
            Arc::new(move |xs| op(arg(xs)))
        }
        Node::Order { .. } => return Err(Error::UnsupportedNode("order term".into())),
        Node::Limit { .. } => return Err(Error::UnsupportedNode("unevaluated limit".into())),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;

    #[test]
    fn taylor_polynomial_at_zero() {
        let x = Symbol::plain("x").unwrap();
        let f = as_numeric_fn(&parse("x^4/24 - x^2/2 + 1").unwrap(), &[x.clone()]).unwrap();
        assert_eq!(f.eval(&[0.0]), 1.0);
        let id = as_numeric_fn(&Expr::symbol(&x), &[x]).unwrap();
        assert_eq!(id.eval(&[3.5]), 3.5);
    }

    #[test]
    fn rejects_order_terms() {
        let x = Symbol::plain("x").unwrap();
        assert!(as_numeric_fn(&parse("1 + O(x^2)").unwrap(), &[x]).is_err());
    }
}
