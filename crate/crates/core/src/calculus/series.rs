//! Truncated generalized power series at `t -> 0+`, used by `limit`.
//!
//! Exponents are rationals and coefficients are expressions free of `t`.
//! Every series carries the exponent of its remainder term; terms at or
//! beyond a global cap are dropped.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::assume::{ask, Property};
use crate::error::Error;
use crate::expr::{Expr, Func, Node, Rational};
use crate::polys::cancel;
use crate::symbol::Symbol;

#[derive(Debug)]
pub(crate) enum SeriesError {
    /// Every computed term cancelled; a higher cap may succeed.
    NeedMore,
    Unsupported(String),
    Kernel(Error),
}

impl From<Error> for SeriesError {
    fn from(e: Error) -> Self {
        SeriesError::Kernel(e)
    }
}

type SResult<T> = std::result::Result<T, SeriesError>;

#[derive(Debug, Clone)]
pub(crate) struct Series {
    /// Nonzero coefficients by increasing exponent, all below `order`.
    pub terms: Vec<(Rational, Expr)>,
    /// Exponent of the remainder; `None` when the series is exact.
    pub order: Option<Rational>,
}

fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn min_order(a: &Option<Rational>, b: &Option<Rational>) -> Option<Rational> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y).clone()),
        (Some(x), None) | (None, Some(x)) => Some(x.clone()),
        (None, None) => None,
    }
}

fn tidy(c: Expr) -> SResult<Expr> {
    if c.any(&|x| matches!(x.node(), Node::Add(_))) {
        Ok(cancel(&c)?)
    } else {
        Ok(c)
    }
}

pub(crate) struct Expander<'a> {
    pub t: &'a Symbol,
    pub cap: Rational,
}

impl Series {
    fn exact(terms: Vec<(Rational, Expr)>) -> Series {
        Series { terms, order: None }
    }

    fn constant(c: Expr) -> Series {
        if c.is_zero() {
            Series::exact(vec![])
        } else {
            Series::exact(vec![(Rational::zero(), c)])
        }
    }

    pub fn lead(&self) -> Option<&(Rational, Expr)> {
        self.terms.first()
    }

    fn lead_exp(&self) -> Option<Rational> {
        self.lead().map(|(k, _)| k.clone()).or_else(|| self.order.clone())
    }

    fn coeff_at_zero(&self) -> Expr {
        self.terms.iter().find(|(k, _)| k.is_zero()).map_or_else(Expr::zero, |(_, c)| c.clone())
    }

    fn has_negative_powers(&self) -> bool {
        self.terms.first().is_some_and(|(k, _)| k.is_negative())
    }

    fn without_constant(&self) -> Series {
        Series { terms: self.terms.iter().filter(|(k, _)| !k.is_zero()).cloned().collect(), order: self.order.clone() }
    }
}

impl Expander<'_> {
    fn build(&self, map: BTreeMap<Rational, Vec<Expr>>, order: Option<Rational>) -> SResult<Series> {
        let order = min_order(&order, &Some(self.cap.clone()));
        let mut terms = Vec::new();
        for (k, cs) in map {
            if order.as_ref().is_some_and(|o| k >= *o) {
                break;
            }
            let c = tidy(Expr::add(cs))?;
            if !c.is_zero() {
                terms.push((k, c));
            }
        }
        Ok(Series { terms, order })
    }

    fn truncate(&self, s: Series) -> SResult<Series> {
        let mut map: BTreeMap<Rational, Vec<Expr>> = BTreeMap::new();
        for (k, c) in s.terms {
            map.entry(k).or_default().push(c);
        }
        let order = match s.order {
            Some(o) => Some(o),
            None if map.keys().next_back().is_some_and(|k| *k >= self.cap) => Some(self.cap.clone()),
            None => None,
        };
        self.build(map, order)
    }

    fn add(&self, a: &Series, b: &Series) -> SResult<Series> {
        let mut map: BTreeMap<Rational, Vec<Expr>> = BTreeMap::new();
        for (k, c) in a.terms.iter().chain(&b.terms) {
            map.entry(k.clone()).or_default().push(c.clone());
        }
        self.build(map, min_order(&a.order, &b.order))
    }

    fn mul(&self, a: &Series, b: &Series) -> SResult<Series> {
        let la = a.lead_exp().unwrap_or_else(Rational::zero);
        let lb = b.lead_exp().unwrap_or_else(Rational::zero);
        let order = min_order(&a.order.as_ref().map(|o| o + &lb), &b.order.as_ref().map(|o| o + &la));
        let mut map: BTreeMap<Rational, Vec<Expr>> = BTreeMap::new();
        for (ka, ca) in &a.terms {
            for (kb, cb) in &b.terms {
                map.entry(ka + kb).or_default().push(Expr::mul(vec![ca.clone(), cb.clone()]));
            }
        }
        let needs_cap = order.is_none() && map.keys().next_back().is_some_and(|k| *k >= self.cap);
        let order = if needs_cap { Some(self.cap.clone()) } else { order };
        self.build(map, order)
    }

    fn scale(&self, s: &Series, c: &Expr) -> SResult<Series> {
        self.mul(s, &Series::constant(c.clone()))
    }

    /// Sums `coeffs[j] * r^j` where `r` has only positive exponents.
    fn compose(&self, coeffs: &dyn Fn(usize) -> Expr, r: &Series, budget: &Rational) -> SResult<Series> {
        let Some((m, _)) = r.lead() else {
            return Ok(Series { terms: vec![(Rational::zero(), coeffs(0))], order: r.order.clone() }.pruned());
        };
        let m = m.clone();
        let mut acc = Series::constant(coeffs(0));
        let mut power = Series::constant(Expr::one());
        let mut j = 1usize;
        while int(j as i64) * &m < *budget {
            power = self.mul(&power, r)?;
            let c = coeffs(j);
            if !c.is_zero() {
                let term = self.scale(&power, &c)?;
                acc = self.add(&acc, &term)?;
            }
            j += 1;
            if j > 64 {
                break;
            }
        }
        let tail = min_order(&r.order, &Some(budget.clone()));
        acc.order = min_order(&acc.order, &tail);
        self.truncate(acc)
    }

    /// Splits `s = c * t^k * (1 + r)`.
    fn factor_lead(&self, s: &Series) -> SResult<(Rational, Expr, Series)> {
        let (k, c) = s.lead().cloned().ok_or(SeriesError::NeedMore)?;
        let inv = c.recip()?;
        let terms = s.terms[1..].iter().map(|(e, d)| (e - &k, Expr::mul(vec![d.clone(), inv.clone()]))).collect();
        let order = s.order.as_ref().map(|o| o - &k);
        Ok((k, c, Series { terms, order }))
    }

    fn powq(&self, s: &Series, q: &Rational) -> SResult<Series> {
        if q.is_integer() && !q.is_negative() && s.order.is_none() {
            let n: u32 = q.to_integer().try_into().map_err(|_| SeriesError::Unsupported("huge power".into()))?;
            let mut acc = Series::constant(Expr::one());
            for _ in 0..n {
                acc = self.mul(&acc, s)?;
            }
            return Ok(acc);
        }
        let (k, c, r) = self.factor_lead(s)?;
        let shift = &k * q;
        let budget = &self.cap - &shift;
        let qq = q.clone();
        let binom = move |j: usize| {
            let mut b = Rational::one();
            for i in 0..j {
                b = b * (&qq - int(i as i64)) / int(i as i64 + 1);
            }
            Expr::rational(b)
        };
        let unit = self.compose(&binom, &r, &budget)?;
        let lead = Expr::pow(&c, &Expr::rational(q.clone()))?;
        let scaled = self.scale(&unit, &lead)?;
        Ok(self.shift(scaled, &shift))
    }

    fn shift(&self, s: Series, by: &Rational) -> Series {
        Series {
            terms: s.terms.into_iter().map(|(k, c)| (k + by, c)).collect(),
            order: s.order.map(|o| o + by),
        }
    }

    fn exp(&self, s: &Series) -> SResult<Series> {
        if s.has_negative_powers() {
            return Err(SeriesError::Unsupported("essential singularity in exp".into()));
        }
        let c0 = s.coeff_at_zero();
        let r = s.without_constant();
        let fact = |j: usize| Expr::rational(Rational::new(BigInt::one(), (1..=j as u64).product::<u64>().into()));
        let unit = self.compose(&fact, &r, &self.cap)?;
        self.scale(&unit, &c0.exp()?)
    }

    fn log(&self, s: &Series) -> SResult<Series> {
        let (k, c, r) = self.factor_lead(s)?;
        if !k.is_zero() {
            return Err(SeriesError::Unsupported("logarithmic term".into()));
        }
        let coeff = |j: usize| {
            if j == 0 {
                Expr::zero()
            } else {
                let sign = if j % 2 == 1 { 1 } else { -1 };
                Expr::frac(sign, j as i64)
            }
        };
        let unit = self.compose(&coeff, &r, &self.cap)?;
        self.add(&unit, &Series::constant(c.log()?))
    }

    fn trig(&self, f: Func, s: &Series) -> SResult<Series> {
        if s.has_negative_powers() {
            return Err(SeriesError::Unsupported("oscillating singularity".into()));
        }
        let c0 = s.coeff_at_zero();
        let r = s.without_constant();
        let inv_fact = |j: usize| Rational::new(BigInt::one(), (1..=j as u64).product::<u64>().into());
        let sin_c = move |j: usize| {
            if j % 2 == 1 {
                let sign = if (j / 2) % 2 == 0 { int(1) } else { int(-1) };
                Expr::rational(sign * inv_fact(j))
            } else {
                Expr::zero()
            }
        };
        let cos_c = move |j: usize| {
            if j % 2 == 0 {
                let sign = if (j / 2) % 2 == 0 { int(1) } else { int(-1) };
                Expr::rational(sign * inv_fact(j))
            } else {
                Expr::zero()
            }
        };
        let sr = self.compose(&sin_c, &r, &self.cap)?;
        let cr = self.compose(&cos_c, &r, &self.cap)?;
        let (a, b) = match f {
            Func::Sin => (self.scale(&cr, &c0.sin()?)?, self.scale(&sr, &c0.cos()?)?),
            _ => (self.scale(&cr, &c0.cos()?)?, self.scale(&sr, &-c0.sin()?)?),
        };
        self.add(&a, &b)
    }

    /// Expansion of `e` in powers of `t`.
    pub fn series(&self, e: &Expr) -> SResult<Series> {
        if e.is_free_of(self.t) && !e.is_infinite() && !e.contains_order() && !e.contains_limit() {
            if e.any(&|x| x.is_infinite()) {
                return Err(SeriesError::Unsupported("infinite coefficient".into()));
            }
            return Ok(Series::constant(e.clone()));
        }
        match e.node() {
            Node::Sym(_) => self.truncate(Series::exact(vec![(Rational::one(), Expr::one())])),
            Node::Add(ts) => {
                let mut acc = Series::exact(vec![]);
                for t in ts {
                    acc = self.add(&acc, &self.series(t)?)?;
                }
                Ok(acc)
            }
            Node::Mul(fs) => {
                let mut acc = Series::constant(Expr::one());
                for f in fs {
                    acc = self.mul(&acc, &self.series(f)?)?;
                }
                Ok(acc)
            }
            Node::Pow(b, x) => {
                if let Some(q) = x.as_rational() {
                    let base = self.series(b)?;
                    self.powq(&base, q)
                } else if x.is_free_of(self.t) {
                    Err(SeriesError::Unsupported(format!("symbolic power {e}")))
                } else {
                    // b^x = exp(x log b)
                    let lb = self.log(&self.series(b)?)?;
                    let arg = self.mul(&self.series(x)?, &lb)?;
                    self.exp(&arg)
                }
            }
            Node::Func(f, a) => {
                let s = self.series(a)?;
                match f {
                    Func::Exp => self.exp(&s),
                    Func::Log => self.log(&s),
                    Func::Sin | Func::Cos => self.trig(*f, &s),
                    Func::Abs => {
                        let (_, c) = s.lead().ok_or(SeriesError::NeedMore)?;
                        if ask(c, Property::Positive).is_yes() {
                            Ok(s)
                        } else if ask(c, Property::Negative).is_yes() {
                            self.scale(&s, &Expr::int(-1))
                        } else {
                            Err(SeriesError::Unsupported(format!("sign of {c}")))
                        }
                    }
                }
            }
            _ => Err(SeriesError::Unsupported(format!("cannot expand {e}"))),
        }
    }
}

impl Series {
    fn pruned(self) -> Series {
        Series { terms: self.terms.into_iter().filter(|(_, c)| !c.is_zero()).collect(), order: self.order }
    }
}
