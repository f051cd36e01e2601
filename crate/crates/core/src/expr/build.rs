//! Canonicalizing constructors.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{Constant, Direction, Expr, Func, Node, Rational};
use crate::assume::{ask, Property, Tri};
use crate::error::{Error, Result};
use crate::symbol::Symbol;

/// Integer powers larger than this stay symbolic instead of being folded.
const MAX_FOLD_EXPONENT: u32 = 4096;

/// Perfect powers are pulled out of integer radicands up to this prime.
const RADICAL_PRIME_LIMIT: u32 = 1000;

impl Expr {
    /// Canonical sum of `terms`.
    pub fn add(terms: Vec<Expr>) -> Expr {
        canon_add(terms)
    }

    /// Canonical product of `factors`.
    pub fn mul(factors: Vec<Expr>) -> Expr {
        canon_mul(factors)
    }

    /// Canonical power. Fails only on an exact zero raised to a negative power.
    pub fn pow(base: &Expr, exp: &Expr) -> Result<Expr> {
        pow_canon(base.clone(), exp.clone())
    }

    pub fn powi(&self, n: i64) -> Result<Expr> {
        Expr::pow(self, &Expr::int(n))
    }

    pub fn recip(&self) -> Result<Expr> {
        self.powi(-1)
    }

    pub fn checked_div(&self, den: &Expr) -> Result<Expr> {
        Ok(self * den.recip()?)
    }

    pub fn sqrt(&self) -> Result<Expr> {
        Expr::pow(self, &Expr::frac(1, 2))
    }

    pub fn func(f: Func, arg: &Expr) -> Result<Expr> {
        func_canon(f, arg.clone())
    }

    pub fn sin(&self) -> Result<Expr> {
        Expr::func(Func::Sin, self)
    }

    pub fn cos(&self) -> Result<Expr> {
        Expr::func(Func::Cos, self)
    }

    pub fn exp(&self) -> Result<Expr> {
        Expr::func(Func::Exp, self)
    }

    pub fn log(&self) -> Result<Expr> {
        Expr::func(Func::Log, self)
    }

    pub fn abs(&self) -> Result<Expr> {
        Expr::func(Func::Abs, self)
    }

    /// Multiplies by a rational constant.
    pub fn scale(&self, c: &Rational) -> Expr {
        Expr::mul(vec![Expr::rational(c.clone()), self.clone()])
    }

    /// The order term `O((var - point)^degree)`.
    pub fn order(var: &Symbol, point: &Expr, degree: u32) -> Expr {
        Expr::from_node(Node::Order { var: var.clone(), point: point.clone(), degree })
    }

    /// An unevaluated limit of `body` as `var` approaches `point`.
    pub fn limit(body: &Expr, var: &Symbol, point: &Expr, dir: Direction) -> Expr {
        Expr::from_node(Node::Limit {
            body: body.clone(),
            var: var.clone(),
            point: point.clone(),
            dir,
        })
    }
}

fn with_coeff(c: Rational, rest: Expr) -> Expr {
    if c.is_one() {
        return rest;
    }
    if rest.is_one() {
        return Expr::rational(c);
    }
    let mut fs = vec![Expr::rational(c)];
    match rest.node() {
        Node::Mul(xs) => fs.extend(xs.iter().cloned()),
        _ => fs.push(rest),
    }
    Expr::from_node(Node::Mul(fs))
}

/// Base that an order term measures powers of: `var` or `var - point`.
fn order_base(var: &Symbol, point: &Expr) -> Expr {
    if point.is_zero() {
        Expr::symbol(var)
    } else {
        canon_add(vec![Expr::symbol(var), -point])
    }
}

/// True if `term` is a multiple of `base^k` with `k >= degree` and the
/// remaining factors free of `var`.
fn absorbed_by(term: &Expr, var: &Symbol, base: &Expr, degree: u32) -> bool {
    let mut power: Option<Rational> = None;
    for f in term.factors() {
        let (b, e) = f.as_base_exp();
        if &b == base {
            match e.as_rational() {
                Some(k) => power = Some(k.clone()),
                None => return false,
            }
        } else if f.contains_symbol(var) {
            return false;
        }
    }
    matches!(power, Some(k) if k >= Rational::from_integer(BigInt::from(degree)))
}

fn canon_add(terms: Vec<Expr>) -> Expr {
    let mut constant = Rational::zero();
    let mut groups: BTreeMap<Expr, Rational> = BTreeMap::new();
    let mut orders: Vec<(Symbol, Expr, u32)> = Vec::new();
    let mut stack = terms;
    while let Some(t) = stack.pop() {
        match t.node() {
            Node::Add(ts) => stack.extend(ts.iter().cloned()),
            Node::Const(r) => constant += r,
            Node::Order { var, point, degree } => {
                match orders.iter_mut().find(|(v, p, _)| v == var && p == point) {
                    Some(slot) => slot.2 = slot.2.min(*degree),
                    None => orders.push((var.clone(), point.clone(), *degree)),
                }
            }
            _ => {
                let (c, rest) = t.as_coeff_mul();
                // A rational multiple of a sum joins the enclosing sum.
                if let Node::Add(ts) = rest.node() {
                    let k = Expr::rational(c);
                    stack.extend(ts.iter().map(|x| canon_mul(vec![k.clone(), x.clone()])));
                    continue;
                }
                *groups.entry(rest).or_insert_with(Rational::zero) += c;
            }
        }
    }
    let bases: Vec<Expr> = orders.iter().map(|(v, p, _)| order_base(v, p)).collect();
    let mut out = Vec::with_capacity(groups.len() + 1 + orders.len());
    if !constant.is_zero() {
        out.push(Expr::rational(constant));
    }
    for (rest, c) in groups {
        if c.is_zero() {
            continue;
        }
        let term = with_coeff(c, rest);
        let absorbed = orders
            .iter()
            .zip(&bases)
            .any(|((v, _, d), b)| absorbed_by(&term, v, b, *d));
        if !absorbed {
            out.push(term);
        }
    }
    for (v, p, d) in orders {
        out.push(Expr::order(&v, &p, d));
    }
    out.sort();
    match out.len() {
        0 => Expr::zero(),
        1 => out.pop().unwrap(),
        _ => Expr::from_node(Node::Add(out)),
    }
}

fn canon_mul(factors: Vec<Expr>) -> Expr {
    let mut coeff = Rational::one();
    let mut stack = factors;
    let mut groups: BTreeMap<Expr, Vec<Expr>> = BTreeMap::new();
    // Each pass merges like bases; a merged power can itself produce a
    // product (e.g. I^3 = -I), which then needs another pass.
    for _pass in 0..64 {
        while let Some(f) = stack.pop() {
            match f.node() {
                Node::Mul(fs) => stack.extend(fs.iter().cloned()),
                Node::Const(r) => coeff *= r,
                _ => {
                    let (b, e) = f.as_base_exp();
                    groups.entry(b).or_default().push(e);
                }
            }
        }
        if coeff.is_zero() {
            return Expr::zero();
        }
        let mut merged = Vec::with_capacity(groups.len());
        let mut again = false;
        for (base, mut exps) in std::mem::take(&mut groups) {
            let single = exps.len() == 1;
            let e = if single { exps.pop().unwrap() } else { canon_add(exps) };
            // A lone factor is already canonical; only merged groups need
            // the power rules again.
            let p = if single {
                if e.is_one() {
                    base
                } else {
                    raw_pow(base, e)
                }
            } else {
                pow_canon(base.clone(), e.clone())
                    .unwrap_or_else(|_| Expr::from_node(Node::Pow(base, e)))
            };
            match p.node() {
                Node::Const(r) => coeff *= r,
                Node::Mul(_) => {
                    stack.push(p);
                    again = true;
                }
                _ => merged.push(p),
            }
        }
        if !again {
            return finish_mul(coeff, merged);
        }
        stack.extend(merged);
    }
    // Unreachable for well-formed input; keep whatever the last pass built.
    let rest: Vec<Expr> = groups
        .into_iter()
        .map(|(b, es)| Expr::from_node(Node::Pow(b, canon_add(es))))
        .chain(stack)
        .collect();
    finish_mul(coeff, rest)
}

fn finish_mul(coeff: Rational, mut fs: Vec<Expr>) -> Expr {
    if coeff.is_zero() {
        return Expr::zero();
    }
    if fs.is_empty() {
        return Expr::rational(coeff);
    }
    fs.sort();
    if coeff.is_one() && fs.len() == 1 {
        return fs.pop().unwrap();
    }
    if !coeff.is_one() {
        fs.insert(0, Expr::rational(coeff));
    }
    Expr::from_node(Node::Mul(fs))
}

fn raw_pow(b: Expr, e: Expr) -> Expr {
    Expr::from_node(Node::Pow(b, e))
}

fn rational_powi(r: &Rational, n: &BigInt) -> Option<Rational> {
    let k = n.abs().to_u32().filter(|k| *k <= MAX_FOLD_EXPONENT)?;
    let num = num_traits::pow(r.numer().clone(), k as usize);
    let den = num_traits::pow(r.denom().clone(), k as usize);
    let p = Rational::new(num, den);
    Some(if n.is_negative() { p.recip() } else { p })
}

/// `n^(1/m)` when it is an exact integer.
fn exact_root(n: &BigInt, m: u32) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.nth_root(m);
    if num_traits::pow(r.clone(), m as usize) == *n {
        Some(r)
    } else {
        None
    }
}

/// Positive integer `n` to a fractional power `f` in (0, 1).
fn int_frac_pow(n: &BigInt, f: &Rational) -> Expr {
    if n.is_one() {
        return Expr::one();
    }
    let m = f.denom().to_u32();
    if let Some(root) = m.and_then(|m| exact_root(n, m)) {
        if let Some(v) = rational_powi(&Rational::from_integer(root), f.numer()) {
            return Expr::rational(v);
        }
    }
    let (outside, inside) = m.map_or((BigInt::one(), n.clone()), |m| split_power(n, m));
    let rest = raw_pow(Expr::rational(Rational::from_integer(inside)), Expr::rational(f.clone()));
    if outside.is_one() {
        return rest;
    }
    let k = f.numer().to_u32().unwrap_or(1) as usize;
    Expr::mul(vec![Expr::rational(Rational::from_integer(num_traits::pow(outside, k))), rest])
}

/// Writes `n = s^m * t` pulling out the `m`-th powers of small primes.
fn split_power(n: &BigInt, m: u32) -> (BigInt, BigInt) {
    let mut s = BigInt::one();
    let mut t = n.clone();
    for p in 2u32..RADICAL_PRIME_LIMIT {
        let pm = num_traits::pow(BigInt::from(p), m as usize);
        if pm > t {
            break;
        }
        while (&t % &pm).is_zero() {
            t /= &pm;
            s *= p;
        }
    }
    (s, t)
}

fn const_pow(r: &Rational, q: &Rational) -> Result<Expr> {
    if r.is_zero() {
        return if q.is_positive() {
            Ok(Expr::zero())
        } else {
            Err(Error::Domain("division by zero".into()))
        };
    }
    if q.is_integer() {
        return Ok(match rational_powi(r, q.numer()) {
            Some(v) => Expr::rational(v),
            None => raw_pow(Expr::rational(r.clone()), Expr::rational(q.clone())),
        });
    }
    let p = q.numer();
    let m = q.denom();
    if r.is_negative() {
        let mag = const_pow(&-r, q)?;
        if m.is_odd() {
            // Real-root convention for odd denominators.
            return Ok(if p.is_odd() { -mag } else { mag });
        }
        if *m == BigInt::from(2) {
            let i_part = pow_canon(Expr::imaginary_unit(), Expr::rational(Rational::from_integer(p.clone())))?;
            return Ok(Expr::mul(vec![i_part, mag]));
        }
        return Ok(raw_pow(Expr::rational(r.clone()), Expr::rational(q.clone())));
    }
    // r > 0: split q = k + f with 0 < f < 1, then (a/b)^f = a^f * b^(1-f) / b.
    let k = q.floor();
    let f = q - &k;
    let int_part = rational_powi(r, k.numer())
        .map(Expr::rational)
        .unwrap_or_else(|| raw_pow(Expr::rational(r.clone()), Expr::rational(k.clone())));
    let a = r.numer();
    let b = r.denom();
    let mut fs = vec![int_part, int_frac_pow(a, &f)];
    if !b.is_one() {
        fs.push(int_frac_pow(b, &(Rational::one() - &f)));
        fs.push(Expr::rational(Rational::new(BigInt::one(), b.clone())));
    }
    Ok(Expr::mul(fs))
}

fn imaginary_power(n: &BigInt) -> Expr {
    let k = n.mod_floor(&BigInt::from(4)).to_u8().unwrap_or(0);
    match k {
        0 => Expr::one(),
        1 => Expr::imaginary_unit(),
        2 => Expr::int(-1),
        _ => Expr::from_node(Node::Mul(vec![Expr::int(-1), Expr::imaginary_unit()])),
    }
}

fn pow_canon(b: Expr, e: Expr) -> Result<Expr> {
    if let Some(q) = e.as_rational() {
        if q.is_zero() {
            return Ok(Expr::one());
        }
        if q.is_one() {
            return Ok(b);
        }
    }
    if b.is_one() {
        return Ok(Expr::one());
    }
    match (b.node(), e.node()) {
        (Node::Const(r), Node::Const(q)) => const_pow(r, q),
        (Node::Const(r), _) if r.is_zero() => Ok(raw_pow(b, e)),
        (Node::Named(Constant::ImaginaryUnit), Node::Const(q)) if q.is_integer() => {
            Ok(imaginary_power(q.numer()))
        }
        (Node::Pow(b0, e0), _) => {
            let e_int = e.as_integer().is_some();
            let both_const = e0.is_const() && e.is_const();
            if e_int || (both_const && ask(b0, Property::Nonnegative) == Tri::Yes) {
                return pow_canon(b0.clone(), Expr::mul(vec![e0.clone(), e.clone()]));
            }
            let half = Rational::new(BigInt::one(), BigInt::from(2));
            if e.as_rational() == Some(&half) && ask(b0, Property::Real) == Tri::Yes {
                if let Some(n) = e0.as_integer() {
                    if n.is_even() && n.is_positive() {
                        let a = func_canon(Func::Abs, b0.clone())?;
                        return pow_canon(a, Expr::rational(Rational::from_integer(n / 2)));
                    }
                }
            }
            Ok(raw_pow(b, e))
        }
        (Node::Mul(fs), Node::Const(q)) => {
            if q.is_integer() {
                let parts = fs
                    .iter()
                    .map(|f| pow_canon(f.clone(), e.clone()))
                    .collect::<Result<Vec<_>>>()?;
                return Ok(canon_mul(parts));
            }
            let (pos, rest): (Vec<Expr>, Vec<Expr>) =
                fs.iter().cloned().partition(|f| ask(f, Property::Positive) == Tri::Yes);
            if pos.is_empty() {
                return Ok(raw_pow(b, e));
            }
            let mut parts = pos
                .into_iter()
                .map(|f| pow_canon(f, e.clone()))
                .collect::<Result<Vec<_>>>()?;
            let rest = match rest.len() {
                0 => Expr::one(),
                1 => rest.into_iter().next().unwrap(),
                _ => Expr::from_node(Node::Mul(rest)),
            };
            parts.push(pow_canon(rest, e.clone())?);
            Ok(canon_mul(parts))
        }
        (Node::Func(Func::Exp, a), Node::Const(q)) if q.is_integer() => {
            func_canon(Func::Exp, Expr::mul(vec![a.clone(), e.clone()]))
        }
        (Node::Func(Func::Abs, a), Node::Const(q))
            if q.is_integer() && q.numer().is_even() && ask(a, Property::Real) == Tri::Yes =>
        {
            pow_canon(a.clone(), e.clone())
        }
        _ => Ok(raw_pow(b, e)),
    }
}

/// If `arg` is `k*pi` for an integer `k`, returns `k`.
fn integer_multiple_of_pi(arg: &Expr) -> Option<BigInt> {
    if arg.is_zero() {
        return Some(BigInt::zero());
    }
    let (c, rest) = arg.as_coeff_mul();
    match rest.node() {
        Node::Named(Constant::Pi) if c.is_integer() => Some(c.numer().clone()),
        _ => None,
    }
}

fn raw_func(f: Func, a: Expr) -> Expr {
    Expr::from_node(Node::Func(f, a))
}

fn func_canon(f: Func, arg: Expr) -> Result<Expr> {
    match f {
        Func::Sin => {
            if integer_multiple_of_pi(&arg).is_some() {
                return Ok(Expr::zero());
            }
            if arg.has_negative_coeff() {
                return Ok(-func_canon(Func::Sin, -&arg)?);
            }
            Ok(raw_func(f, arg))
        }
        Func::Cos => {
            if let Some(k) = integer_multiple_of_pi(&arg) {
                return Ok(Expr::int(if k.is_even() { 1 } else { -1 }));
            }
            if arg.has_negative_coeff() {
                return func_canon(Func::Cos, -&arg);
            }
            Ok(raw_func(f, arg))
        }
        Func::Exp => {
            if arg.is_zero() {
                return Ok(Expr::one());
            }
            Ok(raw_func(f, arg))
        }
        Func::Log => {
            if arg.is_one() {
                return Ok(Expr::zero());
            }
            if arg.is_zero() {
                return Err(Error::Domain("log(0)".into()));
            }
            if let Node::Func(Func::Exp, inner) = arg.node() {
                if inner.is_const() {
                    return Ok(inner.clone());
                }
            }
            Ok(raw_func(f, arg))
        }
        Func::Abs => abs_canon(arg),
    }
}

fn abs_canon(arg: Expr) -> Result<Expr> {
    match arg.node() {
        Node::Const(r) => return Ok(Expr::rational(r.abs())),
        Node::Named(Constant::ImaginaryUnit) => return Ok(Expr::one()),
        Node::Named(_) => return Ok(arg),
        Node::Func(Func::Abs, _) => return Ok(arg),
        Node::Mul(fs) => {
            if let Some(c) = fs[0].as_rational() {
                if !c.is_one() {
                    let (c, rest) = arg.as_coeff_mul();
                    return Ok(Expr::mul(vec![Expr::rational(c.abs()), abs_canon(rest)?]));
                }
            }
        }
        _ => {}
    }
    match ask(&arg, Property::Nonnegative) {
        Tri::Yes => return Ok(arg),
        Tri::No if ask(&arg, Property::Real) == Tri::Yes => return Ok(-arg),
        _ => {}
    }
    Ok(raw_func(Func::Abs, arg))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::Assumptions;

    fn sym(n: &str) -> Expr {
        Expr::symbol(&Symbol::plain(n).unwrap())
    }

    #[test]
    fn rational_folding() {
        assert_eq!(Expr::frac(1, 3) + Expr::frac(1, 4), Expr::frac(7, 12));
        assert_eq!(Expr::int(2) + Expr::int(3) * Expr::int(4), Expr::int(14));
    }

    #[test]
    fn like_factors_merge() {
        let x = sym("x");
        assert_eq!(&x * &x, x.powi(2).unwrap());
        assert_eq!(&x * x.recip().unwrap(), Expr::one());
        assert_eq!(x.powi(0).unwrap(), Expr::one());
    }

    #[test]
    fn like_terms_merge() {
        let x = sym("x");
        let y = sym("y");
        let e = &x + &y + &x - &y;
        assert_eq!(e, Expr::int(2) * &x);
        assert!((&x - &x).is_zero());
    }

    #[test]
    fn no_auto_expansion() {
        let (u, v) = (sym("u"), sym("v"));
        let e = (&u - &v) * (&u + &v);
        assert!(matches!(e.node(), Node::Mul(fs) if fs.len() == 2));
    }

    #[test]
    fn flattening() {
        let (a, b, c) = (sym("a"), sym("b"), sym("c"));
        let e = (&a + &b) + &c;
        assert!(matches!(e.node(), Node::Add(ts) if ts.len() == 3));
        let p = (&a * &b) * &c;
        assert!(matches!(p.node(), Node::Mul(fs) if fs.len() == 3));
    }

    #[test]
    fn rational_powers() {
        assert_eq!(Expr::pow(&Expr::int(8), &Expr::frac(1, 3)).unwrap(), Expr::int(2));
        let s2 = Expr::int(2).sqrt().unwrap();
        assert!(matches!(s2.node(), Node::Pow(..)));
        assert_eq!(&s2 * &s2, Expr::int(2));
        assert_eq!(Expr::int(-4).sqrt().unwrap(), Expr::int(2) * Expr::imaginary_unit());
        assert_eq!(Expr::imaginary_unit().powi(2).unwrap(), Expr::int(-1));
        // (1/2)^(1/2) and 2^(-1/2) share one canonical form.
        assert_eq!(Expr::frac(1, 2).sqrt().unwrap(), Expr::pow(&Expr::int(2), &Expr::frac(-1, 2)).unwrap());
    }

    #[test]
    fn zero_powers() {
        assert_eq!(Expr::pow(&Expr::zero(), &Expr::zero()).unwrap(), Expr::one());
        assert!(matches!(Expr::zero().recip(), Err(Error::Domain(_))));
    }

    #[test]
    fn power_of_product_distributes_integer_exponent() {
        let (y, s) = (sym("y"), sym("s"));
        let p = &y * s.recip().unwrap();
        let lhs = -&y * p.powi(-2).unwrap();
        assert_eq!(lhs, -(s.powi(2).unwrap() * y.recip().unwrap()));
    }

    #[test]
    fn abs_rules() {
        let b = sym("b");
        let r = Expr::symbol(&Symbol::new("r", Assumptions::REAL).unwrap());
        let p = Expr::symbol(&Symbol::new("p", Assumptions::POSITIVE).unwrap());
        assert_eq!(Expr::int(-3).abs().unwrap(), Expr::int(3));
        assert_eq!(p.abs().unwrap(), p);
        assert!(matches!(b.abs().unwrap().node(), Node::Func(Func::Abs, _)));
        assert_eq!(r.powi(2).unwrap().sqrt().unwrap(), r.abs().unwrap());
        assert_eq!(r.abs().unwrap().powi(2).unwrap(), r.powi(2).unwrap());
    }

    #[test]
    fn trig_constants() {
        assert_eq!(Expr::zero().sin().unwrap(), Expr::zero());
        assert_eq!(Expr::zero().cos().unwrap(), Expr::one());
        assert_eq!(Expr::pi().cos().unwrap(), Expr::int(-1));
        let x = sym("x");
        assert_eq!((-&x).sin().unwrap(), -x.sin().unwrap());
        assert_eq!((-&x).cos().unwrap(), x.cos().unwrap());
        assert!(Expr::zero().log().is_err());
    }
}
