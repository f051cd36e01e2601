//! Antiderivatives for an elementary class of integrands.

use super::diff::diff;
use crate::error::{Error, Result};
use crate::expr::{Expr, Func, Node, Rational};
use crate::polys::{expand, is_zero_rational};
use crate::symbol::Symbol;

fn unsupported(e: &Expr) -> Error {
    Error::UnsupportedIntegrand(e.to_string())
}

/// `(a, b)` with `e = a*v + b`, both free of `v`.
fn linear_parts(e: &Expr, v: &Symbol) -> Option<(Expr, Expr)> {
    let d = diff(e, v).ok()?;
    if !d.is_free_of(v) || d.is_zero() {
        return None;
    }
    let b = expand(&(e - &(&d * &Expr::symbol(v)))).ok()?;
    b.is_free_of(v).then_some((d, b))
}

/// Antiderivative of a single factor that depends on `v`.
fn integrate_atom(f: &Expr, v: &Symbol) -> Result<Expr> {
    let ve = Expr::symbol(v);
    match f.node() {
        Node::Sym(_) => Ok(Expr::mul(vec![Expr::frac(1, 2), Expr::pow(&ve, &Expr::int(2))?])),
        Node::Pow(b, x) if x.is_free_of(v) => {
            let (a, _) = linear_parts(b, v).ok_or_else(|| unsupported(f))?;
            let q = x.as_rational().ok_or_else(|| unsupported(f))?;
            if *q == -Rational::from_integer(1.into()) {
                Ok(Expr::mul(vec![b.log()?, a.recip()?]))
            } else {
                let k = Expr::rational(q + Rational::from_integer(1.into()));
                Ok(Expr::mul(vec![Expr::pow(b, &k)?, k.recip()?, a.recip()?]))
            }
        }
        Node::Pow(b, x) if b.is_free_of(v) => {
            // c^(a v + b) = exp((a v + b) log c)
            let (a, _) = linear_parts(x, v).ok_or_else(|| unsupported(f))?;
            Ok(Expr::mul(vec![f.clone(), a.recip()?, b.log()?.recip()?]))
        }
        Node::Func(func, arg) => {
            let (a, _) = linear_parts(arg, v).ok_or_else(|| unsupported(f))?;
            let inv = a.recip()?;
            match func {
                Func::Exp => Ok(Expr::mul(vec![f.clone(), inv])),
                Func::Sin => Ok(Expr::mul(vec![Expr::int(-1), arg.cos()?, inv])),
                Func::Cos => Ok(Expr::mul(vec![arg.sin()?, inv])),
                Func::Log | Func::Abs => Err(unsupported(f)),
            }
        }
        _ => Err(unsupported(f)),
    }
}

fn integrate_term(t: &Expr, v: &Symbol) -> Result<Expr> {
    if t.is_free_of(v) {
        return Ok(Expr::mul(vec![t.clone(), Expr::symbol(v)]));
    }
    let (constant, dependent): (Vec<Expr>, Vec<Expr>) = t.factors().iter().cloned().partition(|f| f.is_free_of(v));
    if dependent.len() != 1 {
        return Err(unsupported(t));
    }
    let mut parts = constant;
    parts.push(integrate_atom(&dependent[0], v)?);
    Ok(Expr::mul(parts))
}

fn integrate_sum(e: &Expr, v: &Symbol) -> Result<Expr> {
    let mut out = Vec::new();
    for t in e.terms() {
        match integrate_term(t, v) {
            Ok(r) => out.push(r),
            Err(err) => {
                let ex = expand(t)?;
                if ex == *t || !matches!(ex.node(), Node::Add(_)) {
                    return Err(err);
                }
                out.push(integrate_sum(&ex, v)?);
            }
        }
    }
    Ok(Expr::add(out))
}

/// Antiderivative of `e` in `v`, without a constant of integration.
///
/// Covers sums and constant multiples of powers of linear forms, `1/v`,
/// and `exp`, `sin`, `cos` of linear forms. The result is checked by
/// differentiating it back.
pub fn integrate(e: &Expr, v: &Symbol) -> Result<Expr> {
    if e.contains_order() || e.contains_limit() {
        return Err(unsupported(e));
    }
    let r = integrate_sum(e, v)?;
    let check = diff(&r, v)? - e.clone();
    if !is_zero_rational(&expand(&check)?)? {
        return Err(unsupported(e));
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;

    fn int(s: &str) -> Result<String> {
        integrate(&parse(s).unwrap(), &Symbol::plain("x").unwrap()).map(|e| e.to_string())
    }

    #[test]
    fn elementary() {
        assert_eq!(int("a*x + b*x^2").unwrap(), "a*x^2/2 + b*x^3/3");
        assert_eq!(int("cos(x)").unwrap(), "sin(x)");
        assert_eq!(int("exp(2*x)").unwrap(), "exp(2*x)/2");
        assert_eq!(int("1/x").unwrap(), "log(x)");
        assert_eq!(int("3").unwrap(), "3*x");
        assert_eq!(int("sqrt(x)").unwrap(), "2*x^(3/2)/3");
        assert_eq!(int("(x + 1)^2").unwrap(), "(x + 1)^3/3");
    }

    #[test]
    fn fresnel_is_unsupported() {
        assert!(matches!(int("c*sin(x^2)"), Err(Error::UnsupportedIntegrand(_))));
        assert!(matches!(int("x*exp(x)"), Err(Error::UnsupportedIntegrand(_))));
    }
}
