//! Taylor polynomials with an order term.

use num_bigint::BigInt;

use super::diff::diff;
use crate::error::{Error, Result};
use crate::expr::{Expr, Node, Rational};
use crate::symbol::Symbol;

/// A truncated series: polynomial part plus `O((v - x0)^n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesExpansion {
    pub polynomial: Expr,
    pub order: Expr,
}

impl SeriesExpansion {
    pub fn to_expr(&self) -> Expr {
        Expr::add(vec![self.polynomial.clone(), self.order.clone()])
    }
}

impl std::fmt::Display for SeriesExpansion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.to_expr())
    }
}

/// `sum_{k < n} e^(k)(x0) / k! * (v - x0)^k + O((v - x0)^n)`.
///
/// The expansion is computed at zero after shifting `v -> v + x0`.
pub fn taylor(e: &Expr, v: &Symbol, x0: &Expr, n: u32) -> Result<SeriesExpansion> {
    if n == 0 {
        return Err(Error::Domain("series order must be positive".into()));
    }
    let free = x0.free_symbols();
    if !free.is_empty() || x0.is_infinite() {
        return Err(Error::NotGround(format!("expansion point {x0}")));
    }
    if e.contains_order() || e.contains_limit() {
        return Err(Error::UnsupportedSeries(e.to_string()));
    }
    let ve = Expr::symbol(v);
    let mut g = e.subs1(v, &(&ve + x0))?;
    let base = if x0.is_zero() { ve.clone() } else { &ve - x0 };
    let mut terms = Vec::new();
    let mut factorial = BigInt::from(1);
    for k in 0..n {
        if k > 0 {
            factorial *= k;
            g = diff(&g, v).map_err(|err| match err {
                Error::NonDifferentiable(m) => Error::UnsupportedSeries(m),
                other => other,
            })?;
        }
        let at = g.subs1(v, &Expr::zero())?;
        if at.is_infinite() {
            return Err(Error::Domain(format!("derivative {k} is singular at {x0}")));
        }
        if !at.is_zero() {
            let inv = Expr::rational(Rational::new(BigInt::from(1), factorial.clone()));
            terms.push(Expr::mul(vec![at, inv, Expr::pow(&base, &Expr::int(k as i64))?]));
        }
    }
    Ok(SeriesExpansion { polynomial: Expr::add(terms), order: Expr::order(v, x0, n) })
}

pub fn drop_remainder(s: &SeriesExpansion) -> Expr {
    s.polynomial.clone()
}

/// Removes order terms from a sum.
pub fn remove_order(e: &Expr) -> Expr {
    match e.node() {
        Node::Order { .. } => Expr::zero(),
        Node::Add(ts) => Expr::add(ts.iter().filter(|t| !matches!(t.node(), Node::Order { .. })).cloned().collect()),
        _ => e.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;

    fn tay(s: &str, x0: i64, n: u32) -> SeriesExpansion {
        taylor(&parse(s).unwrap(), &Symbol::plain("x").unwrap(), &Expr::int(x0), n).unwrap()
    }

    #[test]
    fn cosine() {
        let s = tay("cos(x)", 0, 5);
        assert_eq!(s.to_string(), "1 - x^2/2 + x^4/24 + O(x^5)");
        assert_eq!(drop_remainder(&s).to_string(), "x^4/24 - x^2/2 + 1");
        assert_eq!(remove_order(&s.to_expr()), drop_remainder(&s));
    }

    #[test]
    fn polynomials_and_exp() {
        assert_eq!(tay("x^2", 0, 5).to_string(), "x^2 + O(x^5)");
        assert_eq!(tay("exp(x)", 0, 4).to_string(), "1 + x + x^2/2 + x^3/6 + O(x^4)");
        assert_eq!(tay("log(x)", 1, 3).to_string(), "-1 - (x - 1)^2/2 + x + O((x - 1)^3)");
    }

    #[test]
    fn singular_point() {
        let x = Symbol::plain("x").unwrap();
        assert!(matches!(taylor(&parse("log(x)").unwrap(), &x, &Expr::zero(), 3), Err(Error::Domain(_))));
    }
}
