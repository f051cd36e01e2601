//! Arbitrary-precision evaluation to decimal text.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::bigfloat::{self, BigFloat};
use crate::error::{Error, Result};
use crate::expr::{Constant, Expr, Func, Node, Rational};

fn complex(what: &str) -> Error {
    Error::Domain(format!("{what} has no real value"))
}

fn eval(e: &Expr, p: u64) -> Result<BigFloat> {
    let wp = p + 16;
    Ok(match e.node() {
        Node::Const(r) => BigFloat::from_rational(r, wp),
        Node::Named(Constant::Pi) => bigfloat::pi(wp),
        Node::Named(Constant::ImaginaryUnit) => {
            return Err(Error::UnsupportedNode("imaginary unit in numeric evaluation".into()))
        }
        Node::Named(Constant::Infinity) => return Err(Error::UnsupportedNode("oo".into())),
        Node::Sym(s) => return Err(Error::NotGround(s.name().to_string())),
        Node::Add(ts) => {
            let mut acc = BigFloat::zero();
            for t in ts {
                acc = acc.add(&eval(t, p)?, wp);
            }
            acc
        }
        Node::Mul(fs) => {
            let mut acc = BigFloat::from_int(1);
            for f in fs {
                acc = acc.mul(&eval(f, p)?, wp);
            }
            acc
        }
        Node::Pow(b, x) => pow(b, x, p)?,
        Node::Func(f, a) => {
            let v = eval(a, p)?;
            match f {
                Func::Exp => bigfloat::exp(&v, wp).ok_or_else(|| Error::Domain("exp overflow".into()))?,
                Func::Log => bigfloat::log(&v, wp).ok_or_else(|| complex("log of a non-positive number"))?,
                Func::Sin => bigfloat::sin_cos(&v, wp).ok_or_else(|| Error::Domain("argument too large".into()))?.0,
                Func::Cos => bigfloat::sin_cos(&v, wp).ok_or_else(|| Error::Domain("argument too large".into()))?.1,
                Func::Abs => v.abs(),
            }
        }
        Node::Order { .. } => return Err(Error::UnsupportedNode("order term".into())),
        Node::Limit { .. } => return Err(Error::UnsupportedNode("unevaluated limit".into())),
    })
}

fn pow(b: &Expr, x: &Expr, p: u64) -> Result<BigFloat> {
    let wp = p + 16;
    let base = eval(b, p)?;
    if let Some(q) = x.as_rational() {
        if let Some(n) = x.as_i64() {
            return base.powi(n, wp).ok_or_else(|| Error::Domain("division by zero".into()));
        }
        if base.is_zero() {
            return if q.is_positive() { Ok(BigFloat::zero()) } else { Err(Error::Domain("division by zero".into())) };
        }
        if base.is_negative() {
            let odd_den = q.denom() % 2u32 == BigInt::one();
            if !odd_den {
                return Err(complex("even root of a negative number"));
            }
            let mag = pow_positive(&base.abs(), q, wp)?;
            let odd_num = q.numer() % 2u32 != BigInt::zero();
            return Ok(if odd_num { mag.neg() } else { mag });
        }
        return pow_positive(&base, q, wp);
    }
    if base.is_zero() {
        return Ok(BigFloat::zero());
    }
    if base.is_negative() {
        return Err(complex("non-rational power of a negative number"));
    }
    let ex = eval(x, p)?;
    let l = bigfloat::log(&base, wp).ok_or_else(|| complex("log"))?;
    bigfloat::exp(&l.mul(&ex, wp), wp).ok_or_else(|| Error::Domain("overflow".into()))
}

fn pow_positive(base: &BigFloat, q: &Rational, wp: u64) -> Result<BigFloat> {
    if *q == Rational::new(BigInt::one(), BigInt::from(2)) {
        return base.sqrt(wp).ok_or_else(|| complex("sqrt"));
    }
    let l = bigfloat::log(base, wp + 16).ok_or_else(|| complex("log"))?;
    let qf = BigFloat::from_rational(q, wp + 16);
    bigfloat::exp(&l.mul(&qf, wp + 16), wp).ok_or_else(|| Error::Domain("overflow".into()))
}

fn pow10(k: u64) -> BigInt {
    num_traits::pow(BigInt::from(10), k as usize)
}

fn ten_pow(k: i64) -> Rational {
    if k >= 0 {
        Rational::from_integer(pow10(k as u64))
    } else {
        Rational::new(BigInt::one(), pow10((-k) as u64))
    }
}

/// Formats `v` to `digits` significant digits, rounding to nearest. With
/// `trim`, trailing zeros are dropped (used for exact values).
pub(crate) fn format_decimal(v: &Rational, digits: usize, trim: bool) -> String {
    if v.is_zero() {
        return "0".into();
    }
    let sign = if v.is_negative() { "-" } else { "" };
    let a = v.abs();
    let mut e10 = ((a.numer().bits() as f64 - a.denom().bits() as f64) * std::f64::consts::LOG10_2).floor() as i64;
    while ten_pow(e10) > a {
        e10 -= 1;
    }
    while ten_pow(e10 + 1) <= a {
        e10 += 1;
    }
    let scaled = &a * ten_pow(digits as i64 - 1 - e10);
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let mut n = (scaled + half).floor().to_integer();
    if n == pow10(digits as u64) {
        n = pow10(digits as u64 - 1);
        e10 += 1;
    }
    let mut s = n.to_string();
    if trim {
        let t = s.trim_end_matches('0');
        s = if t.is_empty() { "0".into() } else { t.to_string() };
    }
    let body = if (-5..digits as i64).contains(&e10) {
        if e10 >= 0 {
            let int_len = e10 as usize + 1;
            if s.len() <= int_len {
                format!("{s}{}", "0".repeat(int_len - s.len()))
            } else {
                format!("{}.{}", &s[..int_len], &s[int_len..])
            }
        } else {
            format!("0.{}{s}", "0".repeat((-e10 - 1) as usize))
        }
    } else {
        let mantissa = if s.len() > 1 { format!("{}.{}", &s[..1], &s[1..]) } else { s.clone() };
        let exp_sign = if e10 < 0 { "-" } else { "+" };
        format!("{mantissa}e{exp_sign}{}", e10.abs())
    };
    format!("{sign}{body}")
}

fn check_evaluable(e: &Expr) -> Result<()> {
    let free = e.free_symbols();
    if !free.is_empty() {
        let names: Vec<&str> = free.iter().map(|s| s.name()).collect();
        return Err(Error::NotGround(names.join(", ")));
    }
    if e.contains_order() {
        return Err(Error::UnsupportedNode("order term".into()));
    }
    if e.contains_limit() {
        return Err(Error::UnsupportedNode("unevaluated limit".into()));
    }
    Ok(())
}

/// Decimal value of a ground expression correct to `digits` significant
/// digits.
pub fn evalf(e: &Expr, digits: usize) -> Result<String> {
    if digits == 0 {
        return Err(Error::Domain("digits must be positive".into()));
    }
    check_evaluable(e)?;
    if let Some(r) = e.as_rational() {
        return Ok(format_decimal(r, digits, true));
    }
    let mut p = (digits as f64 * 3.33) as u64 + 32;
    let mut prev = eval(e, p)?;
    for _ in 0..8 {
        let q = p + 64 + p / 2;
        let next = eval(e, q)?;
        let a = format_decimal(&prev.to_rational(), digits, false);
        let b = format_decimal(&next.to_rational(), digits, false);
        if a == b {
            return Ok(b);
        }
        // A value that keeps shrinking with precision is a cancelled zero.
        if next.top() < -(p as i64) / 2 && prev.top() < -(p as i64) / 2 {
            return Ok("0".into());
        }
        prev = next;
        p = q;
    }
    Ok(format_decimal(&prev.to_rational(), digits, false))
}

/// Numeric value as a double, through the arbitrary-precision evaluator.
pub fn evalf_f64(e: &Expr) -> Result<f64> {
    check_evaluable(e)?;
    Ok(eval(e, 96)?.to_f64())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_decimals() {
        assert_eq!(evalf(&Expr::frac(7, 8), 15).unwrap(), "0.875");
        assert_eq!(evalf(&Expr::frac(1, 3), 5).unwrap(), "0.33333");
        assert_eq!(evalf(&Expr::int(-12), 15).unwrap(), "-12");
    }

    #[test]
    fn exp_values() {
        assert_eq!(evalf(&Expr::e(), 3).unwrap(), "2.72");
        assert_eq!(evalf(&Expr::frac(1, 9).exp().unwrap(), 15).unwrap(), "1.11751906874186");
        assert_eq!(
            evalf(&Expr::frac(49, 144).exp().unwrap(), 30).unwrap(),
            "1.40533790799143890537847414768"
        );
    }

    #[test]
    fn pi_digits() {
        assert_eq!(evalf(&Expr::pi(), 20).unwrap(), "3.1415926535897932385");
    }

    #[test]
    fn small_and_large_magnitudes() {
        assert_eq!(format_decimal(&Rational::new(1.into(), 1000000.into()), 3, true), "1e-6");
        assert_eq!(format_decimal(&Rational::new(12345.into(), 1000000.into()), 3, false), "0.0123");
        assert_eq!(format_decimal(&Rational::from_integer(123456.into()), 3, false), "1.23e+5");
        assert_eq!(format_decimal(&Rational::new(9999.into(), 1000.into()), 3, false), "10.0");
    }

    #[test]
    fn errors() {
        let x = Expr::symbol(&crate::symbol::Symbol::plain("x").unwrap());
        assert!(matches!(evalf(&x, 5), Err(Error::NotGround(_))));
    }
}
