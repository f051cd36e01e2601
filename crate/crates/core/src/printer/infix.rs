//! Linear infix rendering, reparseable by the parser.

use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::terms::{ordered_factors, ordered_terms};
use crate::expr::{Direction, Expr, Node, Rational};

const PREC_ADD: u8 = 10;
const PREC_MUL: u8 = 20;
const PREC_POW: u8 = 30;
const PREC_ATOM: u8 = 40;

fn precedence(e: &Expr) -> u8 {
    match e.node() {
        Node::Add(_) => PREC_ADD,
        Node::Mul(_) => PREC_MUL,
        Node::Const(r) if r.is_negative() => PREC_ADD,
        Node::Const(r) if !r.is_integer() => PREC_MUL,
        Node::Pow(_, x) if x.as_rational().is_some_and(|q| q.is_negative()) => PREC_MUL,
        Node::Pow(_, x) if x.as_rational().is_some_and(|q| *q == half()) => PREC_ATOM,
        Node::Pow(..) => PREC_POW,
        _ => PREC_ATOM,
    }
}

fn half() -> Rational {
    Rational::new(BigInt::one(), BigInt::from(2))
}

fn paren_below(e: &Expr, level: u8) -> String {
    let s = to_infix(e);
    if precedence(e) < level {
        format!("({s})")
    } else {
        s
    }
}

pub fn to_infix(e: &Expr) -> String {
    match e.node() {
        Node::Const(r) => r.to_string(),
        Node::Named(c) => c.name().to_string(),
        Node::Sym(s) => s.name().to_string(),
        Node::Add(_) => add_str(e),
        Node::Mul(_) => mul_str(e),
        Node::Pow(b, x) => pow_str(e, b, x),
        Node::Func(f, a) => format!("{}({})", f.name(), to_infix(a)),
        Node::Order { var, point, degree } => {
            let base = if point.is_zero() {
                var.name().to_string()
            } else {
                format!("({})", to_infix(&(Expr::symbol(var) - point)))
            };
            if *degree == 1 {
                format!("O({base})")
            } else {
                format!("O({base}^{degree})")
            }
        }
        Node::Limit { body, var, point, dir } => {
            let mut s = format!("Limit({}, {}, {}", to_infix(body), var.name(), to_infix(point));
            if *dir != Direction::Both {
                s.push_str(", ");
                s.push_str(dir.keyword());
            }
            s.push(')');
            s
        }
    }
}

fn add_str(e: &Expr) -> String {
    let mut out = String::new();
    for (i, t) in ordered_terms(e).iter().enumerate() {
        if i == 0 {
            out.push_str(&to_infix(t));
        } else if t.has_negative_coeff() {
            out.push_str(" - ");
            out.push_str(&to_infix(&-t));
        } else {
            out.push_str(" + ");
            out.push_str(&to_infix(t));
        }
    }
    out
}

/// Numerator and denominator factor lists of a product with its sign.
pub(crate) fn split_fraction(e: &Expr) -> (bool, Vec<Expr>, Vec<Expr>) {
    let (c, rest) = e.as_coeff_mul();
    let negative = c.is_negative();
    let c = c.abs();
    let mut num = Vec::new();
    let mut den = Vec::new();
    if !c.numer().is_one() {
        num.push(Expr::rational(Rational::from_integer(c.numer().clone())));
    }
    if !c.denom().is_one() {
        den.push(Expr::rational(Rational::from_integer(c.denom().clone())));
    }
    if !rest.is_one() {
        for f in ordered_factors(rest.factors()) {
            match f.node() {
                Node::Pow(b, x) if x.as_rational().is_some_and(|q| q.is_negative()) => {
                    let q = -x.as_rational().unwrap();
                    if q.is_one() {
                        den.push(b.clone());
                    } else {
                        den.push(Expr::from_node(Node::Pow(b.clone(), Expr::rational(q))));
                    }
                }
                _ => num.push(f),
            }
        }
    }
    (negative, num, den)
}

fn mul_str(e: &Expr) -> String {
    let (negative, num, den) = split_fraction(e);
    let sign = if negative { "-" } else { "" };
    let a: Vec<String> = num.iter().map(|f| paren_below(f, PREC_MUL)).collect();
    let a = if a.is_empty() { "1".to_string() } else { a.join("*") };
    let b: Vec<String> = den.iter().map(|f| paren_below(f, PREC_MUL)).collect();
    match b.len() {
        0 => format!("{sign}{a}"),
        1 => format!("{sign}{a}/{}", b[0]),
        _ => format!("{sign}{a}/({})", b.join("*")),
    }
}

fn is_atom_like(e: &Expr) -> bool {
    match e.node() {
        Node::Const(r) => r.is_integer() && !r.is_negative(),
        Node::Named(_) | Node::Sym(_) | Node::Func(..) => true,
        _ => false,
    }
}

fn pow_str(e: &Expr, b: &Expr, x: &Expr) -> String {
    if let Some(q) = x.as_rational() {
        if *q == half() {
            return format!("sqrt({})", to_infix(b));
        }
        if q.is_negative() {
            return mul_str(e);
        }
    }
    let base = if is_atom_like(b) { to_infix(b) } else { format!("({})", to_infix(b)) };
    let exp = match x.node() {
        Node::Sym(_) | Node::Named(_) => to_infix(x),
        Node::Const(r) if r.is_integer() && !r.is_negative() => to_infix(x),
        _ => format!("({})", to_infix(x)),
    };
    format!("{base}^{exp}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::Symbol;

    fn s(n: &str) -> Expr {
        Expr::symbol(&Symbol::plain(n).unwrap())
    }

    #[test]
    fn sums_and_differences() {
        let (u, v) = (s("u"), s("v"));
        assert_eq!(to_infix(&(u.powi(2).unwrap() - v.powi(2).unwrap())), "u^2 - v^2");
        assert_eq!(to_infix(&(Expr::int(2) - s("z"))), "2 - z");
        assert_eq!(to_infix(&(s("y") - s("x") + Expr::one())), "-x + y + 1");
        assert_eq!(to_infix(&(s("x") - Expr::one())), "x - 1");
        assert_eq!(to_infix(&Expr::frac(7, 12)), "7/12");
    }

    #[test]
    fn products_and_quotients() {
        let (x, y) = (s("x"), s("y"));
        assert_eq!(to_infix(&(Expr::frac(1, 24) * x.powi(4).unwrap())), "x^4/24");
        assert_eq!(to_infix(&(Expr::frac(3, 2) * &x)), "3*x/2");
        assert_eq!(to_infix(&(-&y * x.powi(-2).unwrap())), "-y/x^2");
        assert_eq!(to_infix(&(&y * (&x + &y).recip().unwrap())), "y/(x + y)");
        assert_eq!(to_infix(&(&x * &y).recip().unwrap()), "1/(x*y)");
        assert_eq!(to_infix(&(y.powi(2).unwrap() * &x)), "x*y^2");
    }

    #[test]
    fn powers() {
        let (x, n) = (s("x"), s("n"));
        let e = Expr::pow(&(Expr::one() + n.recip().unwrap()), &n).unwrap();
        assert_eq!(to_infix(&e), "(1 + 1/n)^n");
        assert_eq!(to_infix(&x.sqrt().unwrap()), "sqrt(x)");
        assert_eq!(to_infix(&x.sqrt().unwrap().recip().unwrap()), "1/sqrt(x)");
        assert_eq!(to_infix(&Expr::pow(&x, &Expr::frac(3, 2)).unwrap()), "x^(3/2)");
        assert_eq!(to_infix(&Expr::pow(&Expr::int(-2), &x).unwrap()), "(-2)^x");
    }

    #[test]
    fn lagrangian_shape() {
        let a = s("a");
        let p: Vec<Expr> = (1..=3).map(|i| s(&format!("p{i}"))).collect();
        let y: Vec<Expr> = (1..=3).map(|i| s(&format!("y{i}"))).collect();
        let mut e = &a * (&p[0] + &p[1] + &p[2] - Expr::one());
        for i in 0..3 {
            e = e - &y[i] * p[i].log().unwrap();
        }
        assert_eq!(
            to_infix(&e),
            "a*(p1 + p2 + p3 - 1) - y1*log(p1) - y2*log(p2) - y3*log(p3)"
        );
    }
}
