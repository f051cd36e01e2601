//! Rational functions over a ring of expression generators.
//!
//! Any subexpression that is not built from `+`, `*` and integer powers
//! becomes a generator: symbols, function applications, named constants,
//! and powers with non-integer exponents. A generator `b^(1/q)` carries the
//! relation `g^q = b`, and `I` carries `I^2 = -1`, so products of radicals
//! reduce.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::One;

use super::poly::{gcd, Mono, Poly};
use crate::error::{Error, Result};
use crate::expr::{Constant, Expr, Node, Rational};
use crate::printer::ordered_terms;

/// A quotient of polynomials in lowest terms with a normalized denominator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatFunc {
    pub num: Poly,
    pub den: Poly,
}

impl RatFunc {
    pub fn zero() -> RatFunc {
        RatFunc { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> RatFunc {
        RatFunc::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> RatFunc {
        RatFunc { num: Poly::constant(c), den: Poly::one() }
    }

    pub fn from_poly(p: Poly) -> RatFunc {
        RatFunc { num: p, den: Poly::one() }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        let n = self.num.as_constant()?;
        let d = self.den.as_constant()?;
        Some(n / d)
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    /// Builds `num / den` in lowest terms.
    pub fn new(num: Poly, den: Poly) -> Result<RatFunc> {
        if den.is_zero() {
            return Err(Error::Domain("division by zero".into()));
        }
        if num.is_zero() {
            return Ok(RatFunc::zero());
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_constant() {
            (num, den)
        } else {
            (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
        };
        let u = den.unit();
        let inv = u.recip();
        Ok(RatFunc { num: num.scale(&inv), den: den.scale(&inv) })
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }
}

#[derive(Debug, Clone)]
struct Relation {
    power: u32,
    value: Poly,
}

/// Generator table shared by the rational functions of one computation.
#[derive(Debug, Clone, Default)]
pub struct Ring {
    gens: Vec<Expr>,
    index: HashMap<Expr, usize>,
    relations: Vec<Option<Relation>>,
}

impl Ring {
    pub fn new() -> Ring {
        Ring::default()
    }

    pub fn gens(&self) -> &[Expr] {
        &self.gens
    }

    fn register(&mut self, e: &Expr, relation: Option<Relation>) -> usize {
        if let Some(i) = self.index.get(e) {
            return *i;
        }
        let i = self.gens.len();
        self.gens.push(e.clone());
        self.index.insert(e.clone(), i);
        self.relations.push(relation);
        i
    }

    /// Index of `e` as a generator, registering it if new.
    pub fn generator(&mut self, e: &Expr) -> usize {
        self.register(e, None)
    }

    pub fn index_of(&self, e: &Expr) -> Option<usize> {
        self.index.get(e).copied()
    }

    /// Applies the generator relations until no exponent exceeds them.
    pub fn reduce(&self, p: Poly) -> Poly {
        if self.relations.iter().all(Option::is_none) {
            return p;
        }
        let mut p = p;
        for _ in 0..64 {
            let mut changed = false;
            let mut out = Poly::zero();
            for (m, c) in p.terms() {
                let mut rest: Mono = m.clone();
                let mut factor = Poly::one();
                for (i, rel) in self.relations.iter().enumerate() {
                    let Some(rel) = rel else { continue };
                    let e = rest.get(i).copied().unwrap_or(0);
                    if e >= rel.power {
                        rest[i] = e % rel.power;
                        factor = factor.mul(&rel.value.pow(e / rel.power));
                        changed = true;
                    }
                }
                out = out.add(&Poly::monomial(rest, c.clone()).mul(&factor));
            }
            p = out;
            if !changed {
                break;
            }
        }
        p
    }

    pub fn add(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        if a.den == b.den {
            return RatFunc::new(a.num.add(&b.num), a.den.clone()).expect("nonzero denominator");
        }
        let num = a.num.mul(&b.den).add(&b.num.mul(&a.den));
        RatFunc::new(self.reduce(num), self.reduce(a.den.mul(&b.den))).expect("nonzero denominator")
    }

    pub fn sub(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        self.add(a, &b.neg())
    }

    pub fn mul(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        if a.is_zero() || b.is_zero() {
            return RatFunc::zero();
        }
        let num = self.reduce(a.num.mul(&b.num));
        let den = self.reduce(a.den.mul(&b.den));
        RatFunc::new(num, den).expect("nonzero denominator")
    }

    pub fn div(&self, a: &RatFunc, b: &RatFunc) -> Result<RatFunc> {
        if b.is_zero() {
            return Err(Error::Domain("division by zero".into()));
        }
        let num = self.reduce(a.num.mul(&b.den));
        let den = self.reduce(a.den.mul(&b.num));
        RatFunc::new(num, den)
    }

    pub fn powi(&self, a: &RatFunc, n: i64) -> Result<RatFunc> {
        let k = u32::try_from(n.unsigned_abs()).map_err(|_| Error::Domain("exponent too large".into()))?;
        let num = self.reduce(a.num.pow(k));
        let den = self.reduce(a.den.pow(k));
        if n >= 0 {
            RatFunc::new(num, den)
        } else {
            RatFunc::new(den, num)
        }
    }

    /// Converts an expression, registering any new generators.
    pub fn to_ratfunc(&mut self, e: &Expr) -> Result<RatFunc> {
        Ok(match e.node() {
            Node::Const(r) => RatFunc::constant(r.clone()),
            Node::Named(Constant::ImaginaryUnit) => {
                let rel = Relation { power: 2, value: Poly::constant(-Rational::one()) };
                RatFunc::from_poly(Poly::var(self.register(e, Some(rel))))
            }
            Node::Add(ts) => {
                let mut acc = RatFunc::zero();
                for t in ts {
                    let v = self.to_ratfunc(t)?;
                    acc = self.add(&acc, &v);
                }
                acc
            }
            Node::Mul(fs) => {
                let mut acc = RatFunc::one();
                for f in fs {
                    let v = self.to_ratfunc(f)?;
                    acc = self.mul(&acc, &v);
                }
                acc
            }
            Node::Pow(b, x) => match x.as_rational() {
                Some(q) if q.is_integer() => match x.as_i64() {
                    Some(n) => {
                        let base = self.to_ratfunc(b)?;
                        self.powi(&base, n)?
                    }
                    None => RatFunc::from_poly(Poly::var(self.generator(e))),
                },
                Some(q) => {
                    let unit = Rational::new(BigInt::one(), q.denom().clone());
                    let g = Expr::from_node(Node::Pow(b.clone(), Expr::rational(unit)));
                    let i = match self.index_of(&g) {
                        Some(i) => i,
                        None => {
                            let base = self.to_ratfunc(b)?;
                            let power = u32::try_from(q.denom()).ok();
                            let rel = match (base.is_polynomial(), power) {
                                (true, Some(power)) => {
                                    let c = base.den.as_constant().unwrap();
                                    Some(Relation { power, value: base.num.scale(&c.recip()) })
                                }
                                _ => None,
                            };
                            self.register(&g, rel)
                        }
                    };
                    let p = q.numer();
                    let k = i64::try_from(p).map_err(|_| Error::Domain("exponent too large".into()))?;
                    self.powi(&RatFunc::from_poly(Poly::var(i)), k)?
                }
                None => RatFunc::from_poly(Poly::var(self.generator(e))),
            },
            _ => RatFunc::from_poly(Poly::var(self.generator(e))),
        })
    }

    fn mono_expr(&self, m: &Mono) -> Expr {
        let fs: Vec<Expr> = m
            .iter()
            .enumerate()
            .filter(|(_, k)| **k > 0)
            .map(|(i, k)| {
                if *k == 1 {
                    self.gens[i].clone()
                } else {
                    Expr::pow(&self.gens[i], &Expr::int(*k as i64)).expect("positive power")
                }
            })
            .collect();
        Expr::mul(fs)
    }

    pub fn poly_to_expr(&self, p: &Poly) -> Expr {
        Expr::add(
            p.terms()
                .map(|(m, c)| Expr::mul(vec![Expr::rational(c.clone()), self.mono_expr(m)]))
                .collect(),
        )
    }

    /// Expression form: an expanded numerator over a denominator written
    /// as monomial content times a primitive polynomial whose first printed
    /// term is positive.
    pub fn to_expr(&self, r: &RatFunc) -> Expr {
        if let Some(c) = r.den.as_constant() {
            return self.poly_to_expr(&r.num.scale(&c.recip()));
        }
        let mut num = r.num.clone();
        let content = r.den.monomial_content();
        let rest = r.den.div_exact(&Poly::monomial(content.clone(), Rational::one())).expect("monomial divides");
        let rest_expr = self.poly_to_expr(&rest);
        let flip = ordered_terms(&rest_expr).first().is_some_and(|t| t.has_negative_coeff());
        let rest_expr = if flip {
            num = num.neg();
            self.poly_to_expr(&rest.neg())
        } else {
            rest_expr
        };
        let den_expr = Expr::mul(vec![self.mono_expr(&content), rest_expr]);
        let inv = den_expr.recip().expect("nonzero denominator");
        Expr::mul(vec![self.poly_to_expr(&num), inv])
    }
}

/// Puts a rational expression over a common denominator in lowest terms.
pub fn cancel(e: &Expr) -> Result<Expr> {
    let mut ring = Ring::new();
    let r = ring.to_ratfunc(e)?;
    Ok(ring.to_expr(&r))
}

/// True if `e` is identically zero as a rational function of its generators.
pub fn is_zero_rational(e: &Expr) -> Result<bool> {
    if e.is_zero() {
        return Ok(true);
    }
    let mut ring = Ring::new();
    Ok(ring.to_ratfunc(e)?.is_zero())
}
