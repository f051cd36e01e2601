//! Factorization over the rationals and root extraction.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::expand::{expand, UnivariatePoly};
use super::poly::Poly;
use super::qpoly::QPoly;
use super::ring::{RatFunc, Ring};
use crate::error::{Error, Result};
use crate::expr::{Expr, Rational};
use crate::printer::to_infix;
use crate::symbol::Symbol;

/// A factored expression. `complete` is false when a factor of degree
/// three or more without rational roots was left unsplit, or when the
/// input was not univariate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub expr: Expr,
    pub complete: bool,
}

fn qpoly_expr(p: &QPoly, x: &Symbol) -> Expr {
    let xe = Expr::symbol(x);
    Expr::add(
        p.0.iter()
            .enumerate()
            .map(|(k, c)| Expr::mul(vec![Expr::rational(c.clone()), Expr::pow(&xe, &Expr::int(k as i64)).unwrap()]))
            .collect(),
    )
}

fn rational_coefficients(p: &UnivariatePoly) -> Option<QPoly> {
    let cs: Option<Vec<Rational>> = p.coefficients().iter().map(|c| c.as_rational().cloned()).collect();
    cs.map(QPoly::new)
}

/// Linear factor `q*x - p` for the root `p/q`.
fn linear(r: &Rational) -> QPoly {
    QPoly::new(vec![-Rational::from_integer(r.numer().clone()), Rational::from_integer(r.denom().clone())])
}

/// Irreducible-over-Q factors with multiplicities, primitive with
/// positive leading coefficients, plus whether every factor is known
/// irreducible.
fn factor_qpoly(p: &QPoly) -> (Vec<(QPoly, u32)>, bool) {
    let mut out = Vec::new();
    let mut complete = true;
    for (m, a) in p.square_free() {
        let mut rest = a;
        for r in rest.rational_roots() {
            out.push((linear(&r), m));
            let (q, _) = rest.divrem(&QPoly::new(vec![-r.clone(), Rational::one()]));
            rest = q;
        }
        if rest.degree() > 0 {
            if rest.degree() > 2 {
                complete = false;
            }
            out.push((rest.content_primitive().1, m));
        }
    }
    (out, complete)
}

/// Factors a polynomial. Univariate rational polynomials are split into
/// linear factors at rational roots with square-free multiplicities;
/// other input only has its numeric and monomial content extracted.
pub fn factor_full(e: &Expr) -> Result<Factorization> {
    let ex = expand(e)?;
    let free = ex.free_symbols();
    if free.is_empty() {
        return Ok(Factorization { expr: ex, complete: true });
    }
    if free.len() == 1 {
        let x = free.iter().next().unwrap();
        if let Ok(up) = UnivariatePoly::from_expr(&ex, x) {
            if let Some(q) = rational_coefficients(&up) {
                let (fs, complete) = factor_qpoly(&q);
                let lead_prod = fs.iter().fold(Rational::one(), |acc, (f, m)| {
                    acc * num_traits::pow(f.lead(), *m as usize)
                });
                let mut parts = vec![Expr::rational(q.lead() / lead_prod)];
                for (f, m) in &fs {
                    parts.push(Expr::pow(&qpoly_expr(f, x), &Expr::int(*m as i64))?);
                }
                return Ok(Factorization { expr: Expr::mul(parts), complete });
            }
        }
    }
    Ok(Factorization { expr: extract_content(&ex)?, complete: false })
}

pub fn factor(e: &Expr) -> Result<Expr> {
    Ok(factor_full(e)?.expr)
}

fn extract_content(e: &Expr) -> Result<Expr> {
    let mut ring = Ring::new();
    let r = ring.to_ratfunc(e)?;
    if !r.is_polynomial() || r.num.len() < 2 {
        return Ok(e.clone());
    }
    let p = r.num.scale(&r.den.as_constant().unwrap().recip());
    let c = rational_content(&p);
    let mono = p.monomial_content();
    let unit = Poly::monomial(mono.clone(), c.clone());
    let rest = p.div_exact(&unit).expect("content divides");
    Ok(Expr::mul(vec![ring.poly_to_expr(&unit), ring.poly_to_expr(&rest)]))
}

/// Positive rational gcd of the coefficients.
fn rational_content(p: &Poly) -> Rational {
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    for (_, c) in p.terms() {
        num = num.gcd(c.numer());
        den = den.lcm(c.denom());
    }
    Rational::new(num, den)
}

/// `sqrt(d)` with numeric content pulled out, or an exact polynomial
/// square root when one exists (then `exact` is true).
fn discriminant_root(ring: &mut Ring, d: &Expr) -> Result<(Expr, bool)> {
    let r = ring.to_ratfunc(d)?;
    if let Some(c) = r.as_constant() {
        return Ok((Expr::rational(c).sqrt()?, false));
    }
    if r.is_polynomial() {
        let p = r.num.scale(&r.den.as_constant().unwrap().recip());
        if let Some(s) = p.sqrt_exact() {
            return Ok((ring.poly_to_expr(&s), true));
        }
        let c = rational_content(&p);
        let rest = p.scale(&c.recip());
        return Ok((Expr::mul(vec![Expr::rational(c).sqrt()?, ring.poly_to_expr(&rest).sqrt()?]), false));
    }
    Ok((d.sqrt()?, false))
}

fn quadratic_roots(a: &Expr, b: &Expr, c: &Expr, m: u32) -> Result<Vec<(Expr, u32)>> {
    let mut ring = Ring::new();
    let two_a = ring.to_ratfunc(&a.scale(&Rational::from_integer(2.into())))?;
    let neg_b = ring.to_ratfunc(&-b)?;
    let center = ring.div(&neg_b, &two_a)?;
    let disc = expand(&(b * b - Expr::int(4) * a * c))?;
    if disc.is_zero() {
        return Ok(vec![(ring.to_expr(&center), 2 * m)]);
    }
    let (s, exact) = discriminant_root(&mut ring, &disc)?;
    if exact {
        let sr = ring.to_ratfunc(&s)?;
        let half = ring.div(&sr, &two_a)?;
        let mut roots = vec![ring.to_expr(&ring.sub(&center, &half)), ring.to_expr(&ring.add(&center, &half))];
        roots.sort_by_key(to_infix);
        return Ok(roots.into_iter().map(|r| (r, m)).collect());
    }
    let inv = ring.to_expr(&ring.div(&RatFunc::one(), &two_a)?);
    let half = Expr::mul(vec![s, inv]);
    let center = ring.to_expr(&center);
    Ok(vec![(center.clone() - half.clone(), m), (center + half, m)])
}

/// Roots with multiplicities: every rational root, plus closed forms for
/// residual quadratics. Symbolic coefficients are supported up to degree
/// two after removing a power of the variable.
pub fn poly_roots(p: &UnivariatePoly) -> Result<Vec<(Expr, u32)>> {
    if p.is_zero() {
        return Err(Error::Domain("the zero polynomial vanishes everywhere".into()));
    }
    if let Some(q) = rational_coefficients(p) {
        let mut roots = Vec::new();
        let mut radicals = Vec::new();
        for (m, a) in q.square_free() {
            let mut rest = a;
            for r in rest.rational_roots() {
                roots.push((r.clone(), m));
                rest = rest.divrem(&QPoly::new(vec![-r, Rational::one()])).0;
            }
            match rest.degree() {
                0 => {}
                2 => {
                    let c = |i: usize| Expr::rational(rest.0[i].clone());
                    radicals.extend(quadratic_roots(&c(2), &c(1), &c(0), m)?);
                }
                _ => return Err(Error::UnsolvableResidual(format!("{} = 0", to_infix(&qpoly_expr(&rest, p.variable()))))),
            }
        }
        roots.sort();
        let mut out: Vec<(Expr, u32)> = roots.into_iter().map(|(r, m)| (Expr::rational(r), m)).collect();
        out.extend(radicals);
        return Ok(out);
    }
    let cs = p.coefficients();
    let zeros = cs.iter().take_while(|c| c.is_zero()).count();
    let cs = &cs[zeros..];
    let mut out = Vec::new();
    if zeros > 0 {
        out.push((Expr::zero(), zeros as u32));
    }
    match cs.len() {
        1 => {}
        2 => {
            let mut ring = Ring::new();
            let num = ring.to_ratfunc(&-&cs[0])?;
            let den = ring.to_ratfunc(&cs[1])?;
            out.push((ring.to_expr(&ring.div(&num, &den)?), 1));
        }
        3 => out.extend(quadratic_roots(&cs[2], &cs[1], &cs[0], 1)?),
        _ => {
            let rest = UnivariatePoly::new(p.variable().clone(), cs.to_vec())?;
            return Err(Error::UnsolvableResidual(format!("{} = 0", to_infix(&rest.to_expr()))));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;

    fn fac(s: &str) -> String {
        factor(&parse(s).unwrap()).unwrap().to_string()
    }

    fn roots(s: &str, v: &str) -> Vec<(String, u32)> {
        let v = Symbol::plain(v).unwrap();
        let p = UnivariatePoly::from_expr(&parse(s).unwrap(), &v).unwrap();
        poly_roots(&p).unwrap().into_iter().map(|(r, m)| (r.to_string(), m)).collect()
    }

    #[test]
    fn factors() {
        assert_eq!(fac("x^7 - 7*x^6 + 21*x^5 - 35*x^4 + 35*x^3 - 21*x^2 + 7*x - 1"), "(x - 1)^7");
        assert_eq!(fac("x^2 - 1"), "(x - 1)*(x + 1)");
        assert_eq!(fac("x^2 + 1"), "x^2 + 1");
        assert_eq!(fac("2*x^2 - 2"), "2*(x - 1)*(x + 1)");
        assert_eq!(fac("x^3/2 - x/2"), "x*(x - 1)*(x + 1)/2");
        let f = factor_full(&parse("x^3 - 2").unwrap()).unwrap();
        assert!(!f.complete);
    }

    #[test]
    fn roots_of_quadratics() {
        assert_eq!(roots("x^2 + 1", "x"), vec![("-I".into(), 1), ("I".into(), 1)]);
        assert_eq!(roots("(x - 1)^7", "x"), vec![("1".into(), 7)]);
        assert_eq!(
            roots("l^2 - (a + d)*l + a*d - b*c", "l"),
            vec![
                ("a/2 + d/2 - sqrt(a^2 - 2*a*d + 4*b*c + d^2)/2".into(), 1),
                ("a/2 + d/2 + sqrt(a^2 - 2*a*d + 4*b*c + d^2)/2".into(), 1)
            ]
        );
        assert_eq!(roots("(l - a)*(l - d)", "l"), vec![("a".into(), 1), ("d".into(), 1)]);
        assert_eq!(roots("x^2 - 2", "x"), vec![("-sqrt(2)".into(), 1), ("sqrt(2)".into(), 1)]);
    }

    #[test]
    fn unsolvable() {
        let x = Symbol::plain("x").unwrap();
        let p = UnivariatePoly::from_expr(&parse("x^3 - 2").unwrap(), &x).unwrap();
        assert!(matches!(poly_roots(&p), Err(Error::UnsolvableResidual(_))));
    }
}
