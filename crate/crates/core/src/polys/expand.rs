//! Expansion, collection and the univariate polynomial view.

use std::collections::BTreeMap;

use num_traits::{Signed, ToPrimitive};

use super::ring::Ring;
use crate::error::{Error, Result};
use crate::expr::{Expr, Node};
use crate::symbol::Symbol;

/// Fully distributes products and integer powers of sums.
///
/// Function arguments and radicands are expanded too. When the whole
/// expression is a polynomial once common factors cancel, the cancelled
/// polynomial is returned.
pub fn expand(e: &Expr) -> Result<Expr> {
    let deep = expand_inner(e)?;
    let flat = distribute(&deep)?;
    if flat.contains_order() || flat.contains_limit() || !has_sum_denominator(&flat) {
        return Ok(flat);
    }
    let mut ring = Ring::new();
    let r = ring.to_ratfunc(&flat)?;
    if r.is_polynomial() {
        return Ok(ring.to_expr(&r));
    }
    Ok(flat)
}

fn has_sum_denominator(e: &Expr) -> bool {
    e.any(&|x| match x.node() {
        Node::Pow(b, p) => matches!(b.node(), Node::Add(_)) && p.as_rational().is_some_and(|r| r.is_negative()),
        _ => false,
    })
}

/// Expands inside function arguments and non-integer power bases.
fn expand_inner(e: &Expr) -> Result<Expr> {
    match e.node() {
        Node::Func(..) => e.map_children(&mut |c| expand(c)),
        Node::Pow(_, p) if p.as_integer().is_none() => e.map_children(&mut |c| expand(c)),
        Node::Const(_) | Node::Named(_) | Node::Sym(_) | Node::Order { .. } | Node::Limit { .. } => Ok(e.clone()),
        _ => e.map_children(&mut expand_inner),
    }
}

fn product(a: &[Expr], b: &[Expr]) -> Vec<Expr> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            out.push(Expr::mul(vec![x.clone(), y.clone()]));
        }
    }
    out
}

/// Terms of the distributed form of `e`.
fn distribute_terms(e: &Expr) -> Result<Vec<Expr>> {
    Ok(match e.node() {
        Node::Add(ts) => {
            let mut out = Vec::new();
            for t in ts {
                out.extend(distribute_terms(t)?);
            }
            out
        }
        Node::Mul(fs) => {
            let mut acc = vec![Expr::one()];
            for f in fs {
                let ts = distribute_terms(f)?;
                acc = product(&acc, &ts);
                acc = Expr::add(acc).terms().to_vec();
            }
            acc
        }
        Node::Pow(b, p) if matches!(b.node(), Node::Add(_) | Node::Mul(_)) => match p.as_i64() {
            Some(n) if n > 0 => {
                let base = distribute_terms(b)?;
                let mut acc = vec![Expr::one()];
                let mut sq = base;
                let mut k = n;
                while k > 0 {
                    if k & 1 == 1 {
                        acc = Expr::add(product(&acc, &sq)).terms().to_vec();
                    }
                    k >>= 1;
                    if k > 0 {
                        sq = Expr::add(product(&sq, &sq)).terms().to_vec();
                    }
                }
                acc
            }
            Some(n) if n < 0 => {
                let base = distribute(&Expr::pow(b, &Expr::int(-n))?)?;
                vec![base.recip()?]
            }
            _ => vec![e.clone()],
        },
        _ => vec![e.clone()],
    })
}

fn distribute(e: &Expr) -> Result<Expr> {
    Ok(Expr::add(distribute_terms(e)?))
}

/// Splits a monomial into its power of `v` and a `v`-free coefficient.
fn split_power(term: &Expr, v: &Symbol) -> Result<(u32, Expr)> {
    let mut k = 0u32;
    let mut rest = Vec::new();
    for f in term.factors() {
        let (b, p) = f.as_base_exp();
        if b.as_symbol() == Some(v) {
            k += p
                .as_integer()
                .and_then(|n| n.to_u32())
                .ok_or_else(|| Error::NotPolynomialIn(v.name().to_string()))?;
        } else if f.contains_symbol(v) {
            return Err(Error::NotPolynomialIn(v.name().to_string()));
        } else {
            rest.push(f.clone());
        }
    }
    Ok((k, Expr::mul(rest)))
}

fn coefficient_map(e: &Expr, v: &Symbol) -> Result<BTreeMap<u32, Expr>> {
    if e.contains_order() || e.contains_limit() {
        return Err(Error::NotPolynomialIn(v.name().to_string()));
    }
    let mut groups: BTreeMap<u32, Vec<Expr>> = BTreeMap::new();
    for t in expand(e)?.terms() {
        let (k, c) = split_power(t, v)?;
        groups.entry(k).or_default().push(c);
    }
    Ok(groups.into_iter().map(|(k, cs)| (k, Expr::add(cs))).filter(|(_, c)| !c.is_zero()).collect())
}

fn power(v: &Symbol, k: u32) -> Expr {
    Expr::pow(&Expr::symbol(v), &Expr::int(k as i64)).expect("positive power")
}

/// Groups an expression polynomial in `v` as a sum of `c_k * v^k`.
pub fn collect(e: &Expr, v: &Symbol) -> Result<Expr> {
    let map = coefficient_map(e, v)?;
    Ok(Expr::add(map.into_iter().map(|(k, c)| Expr::mul(vec![c, power(v, k)])).collect()))
}

/// A polynomial in one variable with expression coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnivariatePoly {
    variable: Symbol,
    coefficients: Vec<Expr>,
}

impl UnivariatePoly {
    /// Coefficients are given in ascending degree. Trailing zeros are
    /// dropped; coefficients must be free of the variable.
    pub fn new(variable: Symbol, mut coefficients: Vec<Expr>) -> Result<UnivariatePoly> {
        if coefficients.iter().any(|c| c.contains_symbol(&variable)) {
            return Err(Error::NotPolynomialIn(variable.name().to_string()));
        }
        while coefficients.last().is_some_and(Expr::is_zero) {
            coefficients.pop();
        }
        Ok(UnivariatePoly { variable, coefficients })
    }

    /// Reads `e` as a polynomial in `v`.
    pub fn from_expr(e: &Expr, v: &Symbol) -> Result<UnivariatePoly> {
        let map = coefficient_map(e, v)?;
        let n = map.keys().next_back().map_or(0, |k| *k as usize + 1);
        let mut cs = vec![Expr::zero(); n];
        for (k, c) in map {
            cs[k as usize] = c;
        }
        UnivariatePoly::new(v.clone(), cs)
    }

    pub fn variable(&self) -> &Symbol {
        &self.variable
    }

    pub fn coefficients(&self) -> &[Expr] {
        &self.coefficients
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coefficients.len().checked_sub(1)
    }

    pub fn to_expr(&self) -> Expr {
        Expr::add(
            self.coefficients
                .iter()
                .enumerate()
                .map(|(k, c)| Expr::mul(vec![c.clone(), power(&self.variable, k as u32)]))
                .collect(),
        )
    }

    pub fn derivative(&self) -> UnivariatePoly {
        let cs = self
            .coefficients
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.scale(&crate::expr::Rational::from_integer((k as i64).into())))
            .collect();
        UnivariatePoly { variable: self.variable.clone(), coefficients: cs }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;

    fn ex(s: &str) -> String {
        expand(&parse(s).unwrap()).unwrap().to_string()
    }

    #[test]
    fn distributes() {
        assert_eq!(ex("(u - v)*(u + v)"), "u^2 - v^2");
        assert_eq!(ex("(x - 1)^7"), "x^7 - 7*x^6 + 21*x^5 - 35*x^4 + 35*x^3 - 21*x^2 + 7*x - 1");
        assert_eq!(ex("x"), "x");
        assert_eq!(ex("sin((x + 1)^2)"), "sin(x^2 + 2*x + 1)");
        assert_eq!(ex("1/(x + 1)^2"), "1/(x^2 + 2*x + 1)");
        assert_eq!(ex("(x^2 - 1)/(x - 1)"), "x + 1");
    }

    #[test]
    fn collects() {
        let x = Symbol::plain("x").unwrap();
        let c = |s: &str| collect(&parse(s).unwrap(), &x).unwrap().to_string();
        assert_eq!(c("x*y + x - 3 + 2*x^2 - z*x^2 + x^3"), "x^3 + x^2*(2 - z) + x*(y + 1) - 3");
        assert_eq!(c("5"), "5");
        assert_eq!(c("(x + y)^2"), "x^2 + 2*x*y + y^2");
        assert!(matches!(collect(&parse("sin(x)").unwrap(), &x), Err(Error::NotPolynomialIn(_))));
    }

    #[test]
    fn univariate_view() {
        let x = Symbol::plain("x").unwrap();
        let p = UnivariatePoly::from_expr(&parse("(x - a)*(x + 2)").unwrap(), &x).unwrap();
        assert_eq!(p.degree(), Some(2));
        assert_eq!(p.coefficients()[1].to_string(), "2 - a");
        assert_eq!(p.derivative().to_expr().to_string(), "-a + 2*x + 2");
    }
}
