//! Binary floating point with arbitrary-precision mantissa.
//!
//! A value is `m * 2^e`. Every operation truncates the mantissa to the
//! working precision; callers add guard bits and confirm results by
//! re-evaluating at a higher precision.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::expr::Rational;

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct BigFloat {
    pub m: BigInt,
    pub e: i64,
}

fn bits(n: &BigInt) -> i64 {
    n.bits() as i64
}

fn shl(n: &BigInt, k: i64) -> BigInt {
    if k >= 0 {
        n << (k as usize)
    } else {
        n >> ((-k) as usize)
    }
}

impl BigFloat {
    pub fn zero() -> BigFloat {
        BigFloat { m: BigInt::zero(), e: 0 }
    }

    pub fn from_int(n: i64) -> BigFloat {
        BigFloat { m: BigInt::from(n), e: 0 }
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.m.is_negative()
    }

    /// Position of the most significant bit: `|x|` lies in `[2^(t-1), 2^t)`.
    pub fn top(&self) -> i64 {
        bits(&self.m) + self.e
    }

    fn round(mut self, p: u64) -> BigFloat {
        let b = bits(&self.m);
        let p = p as i64;
        if b > p {
            let k = b - p;
            // Shift the magnitude so truncation is symmetric around zero.
            let neg = self.m.is_negative();
            let mag = self.m.abs() >> (k as usize);
            self.m = if neg { -mag } else { mag };
            self.e += k;
        }
        if self.m.is_zero() {
            self.e = 0;
        }
        self
    }

    pub fn from_rational(r: &Rational, p: u64) -> BigFloat {
        if r.is_zero() {
            return BigFloat::zero();
        }
        let (n, d) = (r.numer(), r.denom());
        let k = p as i64 + bits(d) - bits(n) + 2;
        let m = if k >= 0 { (n << (k as usize)) / d } else { n / (d << ((-k) as usize)) };
        BigFloat { m, e: -k }.round(p)
    }

    pub fn to_rational(&self) -> Rational {
        if self.e >= 0 {
            Rational::from_integer(&self.m << (self.e as usize))
        } else {
            Rational::new(self.m.clone(), BigInt::one() << ((-self.e) as usize))
        }
    }

    pub fn neg(&self) -> BigFloat {
        BigFloat { m: -&self.m, e: self.e }
    }

    pub fn abs(&self) -> BigFloat {
        BigFloat { m: self.m.abs(), e: self.e }
    }

    pub fn add(&self, o: &BigFloat, p: u64) -> BigFloat {
        if self.is_zero() {
            return o.clone().round(p);
        }
        if o.is_zero() {
            return self.clone().round(p);
        }
        // A summand entirely below the precision window of the other is dropped.
        let gap = p as i64 + 4;
        if self.top() - o.top() > gap {
            return self.clone().round(p);
        }
        if o.top() - self.top() > gap {
            return o.clone().round(p);
        }
        let e = self.e.min(o.e);
        let m = shl(&self.m, self.e - e) + shl(&o.m, o.e - e);
        BigFloat { m, e }.round(p)
    }

    pub fn sub(&self, o: &BigFloat, p: u64) -> BigFloat {
        self.add(&o.neg(), p)
    }

    pub fn mul(&self, o: &BigFloat, p: u64) -> BigFloat {
        BigFloat { m: &self.m * &o.m, e: self.e + o.e }.round(p)
    }

    pub fn div(&self, o: &BigFloat, p: u64) -> Option<BigFloat> {
        if o.is_zero() {
            return None;
        }
        let k = p as i64 + bits(&o.m) - bits(&self.m) + 2;
        let m = shl(&self.m, k.max(0)) / &o.m;
        Some(BigFloat { m, e: self.e - o.e - k.max(0) }.round(p))
    }

    pub fn mul_pow2(&self, k: i64) -> BigFloat {
        BigFloat { m: self.m.clone(), e: self.e + k }
    }

    pub fn sqrt(&self, p: u64) -> Option<BigFloat> {
        if self.is_negative() {
            return None;
        }
        if self.is_zero() {
            return Some(BigFloat::zero());
        }
        let mut shift = (2 * p as i64 + 4 - bits(&self.m)).max(0);
        if (self.e - shift).is_odd() {
            shift += 1;
        }
        let m = (&self.m << (shift as usize)).sqrt();
        Some(BigFloat { m, e: (self.e - shift) / 2 }.round(p))
    }

    pub fn powi(&self, n: i64, p: u64) -> Option<BigFloat> {
        let mut base = self.clone();
        let mut acc = BigFloat::from_int(1);
        let mut k = n.unsigned_abs();
        let wp = p + 2 * (64 - k.leading_zeros() as u64) + 8;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base, wp);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base, wp);
            }
        }
        if n < 0 {
            BigFloat::from_int(1).div(&acc, p)
        } else {
            Some(acc.round(p))
        }
    }

    /// Nearest integer, or `None` if it does not fit an `i64`.
    pub fn round_to_i64(&self) -> Option<i64> {
        let half = BigFloat { m: BigInt::one(), e: -1 };
        let shifted = self.add(&half, (self.top().max(0) + 8) as u64);
        let r = shifted.to_rational().floor();
        r.numer().to_i64()
    }

    pub fn to_f64(&self) -> f64 {
        let b = bits(&self.m);
        let (m, e) = if b > 60 { (shl(&self.m, 60 - b), self.e + b - 60) } else { (self.m.clone(), self.e) };
        let m = m.to_f64().unwrap_or(0.0);
        m * 2f64.powi(e.clamp(-2000, 2000) as i32)
    }
}

/// `2^w * atanh(1/n)` as an integer, for `n >= 2`.
fn atanh_inv_fixed(n: u64, w: u64) -> BigInt {
    let one = BigInt::one() << (w as usize);
    let n2 = BigInt::from(n * n);
    let mut power = one / BigInt::from(n);
    let mut sum = BigInt::zero();
    let mut k: u64 = 0;
    while !power.is_zero() {
        sum += &power / BigInt::from(2 * k + 1);
        power /= &n2;
        k += 1;
    }
    sum
}

/// `2^w * atan(1/n)` as an integer.
fn atan_inv_fixed(n: u64, w: u64) -> BigInt {
    let one = BigInt::one() << (w as usize);
    let n2 = BigInt::from(n * n);
    let mut power = one / BigInt::from(n);
    let mut sum = BigInt::zero();
    let mut k: u64 = 0;
    while !power.is_zero() {
        let term = &power / BigInt::from(2 * k + 1);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &n2;
        k += 1;
    }
    sum
}

pub(crate) fn ln2(p: u64) -> BigFloat {
    let w = p + 16;
    BigFloat { m: atanh_inv_fixed(3, w) << 1usize, e: -(w as i64) }.round(p)
}

pub(crate) fn pi(p: u64) -> BigFloat {
    let w = p + 16;
    let m = (atan_inv_fixed(5, w) << 4usize) - (atan_inv_fixed(239, w) << 2usize);
    BigFloat { m, e: -(w as i64) }.round(p)
}

/// Fixed-point representation `round(x * 2^w)`.
fn to_fixed(x: &BigFloat, w: u64) -> BigInt {
    shl(&x.m, x.e + w as i64)
}

pub(crate) fn exp(x: &BigFloat, p: u64) -> Option<BigFloat> {
    if x.is_zero() {
        return Some(BigFloat::from_int(1));
    }
    if x.top() > 40 {
        return None;
    }
    let extra = x.top().max(0) as u64;
    let wp = p + extra + 32;
    let l2 = ln2(wp);
    let k = x.div(&l2, wp)?.round_to_i64()?;
    let r = x.sub(&l2.mul(&BigFloat::from_int(k), wp), wp);
    // Halve the argument s times, sum the series, then square back.
    let s = ((p as f64).sqrt() as u64).max(4);
    let w = wp + s + 16;
    let rf = to_fixed(&r, w) >> (s as usize);
    let one = BigInt::one() << (w as usize);
    let mut term = one.clone();
    let mut sum = one;
    let mut i: u64 = 1;
    loop {
        term = (&term * &rf >> (w as usize)) / BigInt::from(i);
        if term.is_zero() {
            break;
        }
        sum += &term;
        i += 1;
    }
    for _ in 0..s {
        sum = &sum * &sum >> (w as usize);
    }
    Some(BigFloat { m: sum, e: k - w as i64 }.round(p))
}

pub(crate) fn log(x: &BigFloat, p: u64) -> Option<BigFloat> {
    if x.is_negative() || x.is_zero() {
        return None;
    }
    let wp = p + 32;
    let b = bits(&x.m);
    // x = y * 2^k with y in [1, 2).
    let k = x.e + b - 1;
    let y = BigFloat { m: x.m.clone(), e: -(b - 1) };
    let one = BigFloat::from_int(1);
    let z = y.sub(&one, wp).div(&y.add(&one, wp), wp)?;
    let w = wp + 16;
    let zf = to_fixed(&z, w);
    let z2 = &zf * &zf >> (w as usize);
    let mut power = zf;
    let mut sum = BigInt::zero();
    let mut i: u64 = 0;
    while !power.is_zero() {
        sum += &power / BigInt::from(2 * i + 1);
        power = &power * &z2 >> (w as usize);
        i += 1;
    }
    let ly = BigFloat { m: sum << 1usize, e: -(w as i64) };
    let kl = ln2(wp).mul(&BigFloat::from_int(k), wp);
    Some(ly.add(&kl, p))
}

/// Returns `(sin x, cos x)`.
pub(crate) fn sin_cos(x: &BigFloat, p: u64) -> Option<(BigFloat, BigFloat)> {
    if x.top() > 60 {
        return None;
    }
    let extra = x.top().max(0) as u64;
    let wp = p + extra + 32;
    let half_pi = pi(wp).mul_pow2(-1);
    let q = x.div(&half_pi, wp)?.round_to_i64()?;
    let r = x.sub(&half_pi.mul(&BigFloat::from_int(q), wp), wp);
    let w = wp + 16;
    let rf = to_fixed(&r, w);
    let r2 = &rf * &rf >> (w as usize);
    let one = BigInt::one() << (w as usize);
    // Taylor series for sin and cos of the reduced argument.
    let mut s_term = rf.clone();
    let mut s_sum = rf;
    let mut c_term = one.clone();
    let mut c_sum = one;
    let mut i: u64 = 1;
    loop {
        c_term = -(&c_term * &r2 >> (w as usize)) / BigInt::from((2 * i - 1) * (2 * i));
        s_term = -(&s_term * &r2 >> (w as usize)) / BigInt::from((2 * i) * (2 * i + 1));
        if c_term.is_zero() && s_term.is_zero() {
            break;
        }
        c_sum += &c_term;
        s_sum += &s_term;
        i += 1;
    }
    let s = BigFloat { m: s_sum, e: -(w as i64) }.round(p);
    let c = BigFloat { m: c_sum, e: -(w as i64) }.round(p);
    Some(match q.rem_euclid(4) {
        0 => (s, c),
        1 => (c, s.neg()),
        2 => (s.neg(), c.neg()),
        _ => (c.neg(), s),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn approx(x: &BigFloat) -> f64 {
        x.to_f64()
    }

    #[test]
    fn constants() {
        assert!((approx(&pi(200)) - std::f64::consts::PI).abs() < 1e-15);
        assert!((approx(&ln2(200)) - std::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn elementary_functions() {
        let x = BigFloat::from_rational(&Rational::new(BigInt::from(7), BigInt::from(3)), 200);
        assert!((approx(&exp(&x, 200).unwrap()) - (7.0f64 / 3.0).exp()).abs() < 1e-13);
        assert!((approx(&log(&x, 200).unwrap()) - (7.0f64 / 3.0).ln()).abs() < 1e-15);
        let (s, c) = sin_cos(&x, 200).unwrap();
        assert!((approx(&s) - (7.0f64 / 3.0).sin()).abs() < 1e-15);
        assert!((approx(&c) - (7.0f64 / 3.0).cos()).abs() < 1e-15);
        assert!((approx(&x.sqrt(200).unwrap()) - (7.0f64 / 3.0).sqrt()).abs() < 1e-15);
        let neg = x.neg();
        assert!((approx(&exp(&neg, 200).unwrap()) - (-7.0f64 / 3.0).exp()).abs() < 1e-15);
    }
}
