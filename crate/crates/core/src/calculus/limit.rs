//! Limits and deferred limit evaluation.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::diff::diff;
use super::series::{Expander, SeriesError};
use crate::assume::{ask, Property};
use crate::error::{Error, Result};
use crate::expr::{Direction, Expr, Func, Node, Rational};
use crate::polys::cancel;
use crate::symbol::{Assumptions, Symbol};

/// Maximum truncation order tried by the series engine.
pub const SERIES_DEPTH: i64 = 8;
/// Maximum number of L'Hopital rounds.
pub const LHOPITAL_ROUNDS: usize = 8;

fn undetermined(e: &Expr) -> Error {
    Error::LimitUndetermined(e.to_string())
}

fn signed_infinity(sign: i32) -> Expr {
    if sign > 0 {
        Expr::infinity()
    } else {
        -Expr::infinity()
    }
}

/// A fresh positive symbol not occurring in `e`.
fn fresh(e: &Expr) -> Symbol {
    let free = e.free_symbols();
    let mut name = String::from("t_");
    while free.iter().any(|s| s.name() == name) {
        name.push('_');
    }
    Symbol::new(&name, Assumptions::POSITIVE).expect("valid name")
}

fn is_finite_value(e: &Expr) -> bool {
    !e.any(&|x| x.is_infinite() || matches!(x.node(), Node::Limit { .. } | Node::Order { .. }))
}

/// Limit of `g` as `t -> 0+`.
fn limit_zero(g: &Expr, t: &Symbol, depth: usize) -> Result<Expr> {
    if g.is_free_of(t) {
        return Ok(g.clone());
    }
    if let Ok(v) = g.subs1(t, &Expr::zero()) {
        if is_finite_value(&v) {
            return Ok(v);
        }
    }
    if let Node::Func(f, a) = g.node() {
        if matches!(f, Func::Exp | Func::Log) {
            if let Ok(inner) = limit_zero(a, t, depth) {
                return match (f, inner.infinity_sign()) {
                    (Func::Exp, Some(s)) => Ok(if s > 0 { Expr::infinity() } else { Expr::zero() }),
                    (Func::Log, Some(1)) => Ok(Expr::infinity()),
                    (Func::Log, _) if inner.is_zero() => Ok(-Expr::infinity()),
                    (_, None) => Ok(Expr::func(*f, &inner)?),
                    _ => Err(undetermined(g)),
                };
            }
        }
    }
    let mut unsupported = None;
    for cap in 2..=SERIES_DEPTH + 1 {
        let ex = Expander { t, cap: Rational::from_integer(BigInt::from(cap)) };
        match ex.series(g) {
            Ok(s) => {
                if let Some((k, c)) = s.lead() {
                    if k.is_positive() {
                        return Ok(Expr::zero());
                    }
                    if k.is_zero() {
                        return Ok(c.clone());
                    }
                    if ask(c, Property::Positive).is_yes() {
                        return Ok(signed_infinity(1));
                    }
                    if ask(c, Property::Negative).is_yes() {
                        return Ok(signed_infinity(-1));
                    }
                    return Err(undetermined(g));
                }
            }
            Err(SeriesError::NeedMore) => {}
            Err(SeriesError::Unsupported(why)) => {
                unsupported = Some(why);
                break;
            }
            Err(SeriesError::Kernel(e)) => return Err(e),
        }
    }
    match unsupported {
        Some(_) if depth > 0 => lhopital(g, t, depth - 1),
        Some(why) => Err(Error::LimitUndetermined(format!("{g}: {why}"))),
        None => Err(undetermined(g)),
    }
}

/// Splits `g` into numerator and denominator by the sign of exponents.
fn as_fraction(g: &Expr) -> Result<(Expr, Expr)> {
    let mut num = Vec::new();
    let mut den = Vec::new();
    for f in g.factors() {
        let (b, x) = f.as_base_exp();
        if x.has_negative_coeff() {
            den.push(Expr::pow(&b, &-x)?);
        } else {
            num.push(f.clone());
        }
    }
    Ok((Expr::mul(num), Expr::mul(den)))
}

/// Rewrites a `0 * oo` product as a quotient of two vanishing parts.
fn zero_times_infinity(g: &Expr, t: &Symbol, depth: usize) -> Result<Option<(Expr, Expr)>> {
    let mut zeros = Vec::new();
    let mut rest = Vec::new();
    for f in g.factors() {
        if f.is_free_of(t) {
            rest.push(f.clone());
            continue;
        }
        match limit_zero(f, t, depth) {
            Ok(l) if l.is_zero() => zeros.push(f.recip()?),
            Ok(_) => rest.push(f.clone()),
            Err(_) => return Ok(None),
        }
    }
    if zeros.is_empty() || rest.is_empty() {
        return Ok(None);
    }
    Ok(Some((Expr::mul(rest), Expr::mul(zeros))))
}

fn lhopital(g: &Expr, t: &Symbol, depth: usize) -> Result<Expr> {
    let (mut num, mut den) = as_fraction(g)?;
    if den.is_free_of(t) {
        if let Some((n, d)) = zero_times_infinity(g, t, depth)? {
            num = n;
            den = d;
        }
    }
    for _ in 0..LHOPITAL_ROUNDS {
        if den.is_free_of(t) {
            break;
        }
        let ln = limit_zero(&num, t, depth)?;
        let ld = limit_zero(&den, t, depth)?;
        let both_zero = ln.is_zero() && ld.is_zero();
        let both_infinite = ln.is_infinite() && ld.is_infinite();
        if !both_zero && !both_infinite {
            if ld.is_zero() || ln.is_infinite() || ld.is_infinite() {
                break;
            }
            return Ok(cancel(&(ln * ld.recip()?))?);
        }
        num = diff(&num, t)?;
        den = diff(&den, t)?;
        let q = cancel(&(num.clone() * den.recip()?))?;
        if let Ok(v) = q.subs1(t, &Expr::zero()) {
            if is_finite_value(&v) {
                return Ok(v);
            }
        }
    }
    Err(undetermined(g))
}

fn one_sided(e: &Expr, v: &Symbol, point: &Expr, side: i32) -> Result<Expr> {
    let t = fresh(e);
    let te = Expr::symbol(&t);
    let sub = if side > 0 { point + &te } else { point - &te };
    limit_zero(&e.subs1(v, &sub)?, &t, LHOPITAL_ROUNDS)
}

/// The limit of `e` as `v` approaches `point` from the given side.
pub fn limit(e: &Expr, v: &Symbol, point: &Expr, dir: Direction) -> Result<Expr> {
    if e.is_free_of(v) {
        return Ok(e.clone());
    }
    if let Some(sign) = point.infinity_sign() {
        let t = fresh(e);
        let sub = Expr::mul(vec![Expr::int(sign as i64), Expr::symbol(&t).recip()?]);
        return limit_zero(&e.subs1(v, &sub)?, &t, LHOPITAL_ROUNDS);
    }
    if let Ok(val) = e.subs1(v, point) {
        if is_finite_value(&val) {
            return Ok(val);
        }
    }
    match dir {
        Direction::Right => one_sided(e, v, point, 1),
        Direction::Left => one_sided(e, v, point, -1),
        Direction::Both => {
            let r = one_sided(e, v, point, 1)?;
            let l = one_sided(e, v, point, -1)?;
            let same = r == l || (is_finite_value(&r) && is_finite_value(&l) && cancel(&(&r - &l))?.is_zero());
            if same {
                Ok(r)
            } else {
                Err(Error::LimitUndetermined(format!("one-sided limits {l} and {r} differ")))
            }
        }
    }
}

/// Evaluates every deferred limit in `e`, innermost first.
pub fn doit(e: &Expr) -> Result<Expr> {
    let inner = e.map_children(&mut |c| doit(c))?;
    match inner.node() {
        Node::Limit { body, var, point, dir } => limit(body, var, point, *dir),
        _ => Ok(inner),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;

    fn lim(s: &str, v: &str, p: &str) -> String {
        limit(&parse(s).unwrap(), &Symbol::plain(v).unwrap(), &parse(p).unwrap(), Direction::Both)
            .unwrap()
            .to_string()
    }

    #[test]
    fn euler() {
        assert_eq!(lim("(1 + 1/n)^n", "n", "oo"), "exp(1)");
    }

    #[test]
    fn classic_forms() {
        assert_eq!(lim("sin(x)/x", "x", "0"), "1");
        assert_eq!(lim("(1 - cos(x))/x^2", "x", "0"), "1/2");
        assert_eq!(lim("(x^2 - 1)/(x - 1)", "x", "1"), "2");
        assert_eq!(lim("c", "x", "3"), "c");
        assert_eq!(lim("x + 1", "x", "2"), "3");
        assert_eq!(lim("1/x", "x", "oo"), "0");
        assert_eq!(lim("x^2", "x", "oo"), "oo");
        assert_eq!(lim("exp(-x)", "x", "oo"), "0");
        assert_eq!(lim("(1 + 2/n)^n", "n", "oo"), "exp(2)");
    }

    #[test]
    fn two_sided_disagreement() {
        let x = Symbol::plain("x").unwrap();
        assert!(limit(&parse("1/x").unwrap(), &x, &Expr::zero(), Direction::Both).is_err());
        assert_eq!(limit(&parse("1/x").unwrap(), &x, &Expr::zero(), Direction::Right).unwrap().to_string(), "oo");
        assert_eq!(limit(&parse("1/x").unwrap(), &x, &Expr::zero(), Direction::Left).unwrap().to_string(), "-oo");
        assert_eq!(limit(&parse("x*log(x)").unwrap(), &x, &Expr::zero(), Direction::Right).unwrap().to_string(), "0");
    }

    #[test]
    fn deferred() {
        let n = Symbol::plain("n").unwrap();
        let d = Expr::limit(&parse("(1 + 1/n)^n").unwrap(), &n, &Expr::infinity(), Direction::Both);
        assert_eq!(doit(&d).unwrap(), Expr::e());
        assert_eq!(doit(&parse("x + 1").unwrap()).unwrap().to_string(), "x + 1");
    }
}
