//! Dense univariate polynomials over the rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::expr::Rational;

/// Coefficients in ascending degree; no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QPoly(pub Vec<Rational>);

/// Trial division stops at this prime bound; a larger cofactor is kept whole.
const TRIAL_LIMIT: u64 = 1 << 20;

impl QPoly {
    pub fn new(mut c: Vec<Rational>) -> QPoly {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        QPoly(c)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn lead(&self) -> Rational {
        self.0.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.0.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn sub(&self, o: &QPoly) -> QPoly {
        let n = self.0.len().max(o.0.len());
        let z = Rational::zero();
        QPoly::new((0..n).map(|i| self.0.get(i).unwrap_or(&z) - o.0.get(i).unwrap_or(&z)).collect())
    }

    pub fn derivative(&self) -> QPoly {
        QPoly::new(
            self.0.iter().enumerate().skip(1).map(|(i, c)| c * Rational::from_integer(BigInt::from(i))).collect(),
        )
    }

    pub fn monic(&self) -> QPoly {
        let l = self.lead();
        QPoly(self.0.iter().map(|c| c / &l).collect())
    }

    /// Quotient and remainder.
    pub fn divrem(&self, d: &QPoly) -> (QPoly, QPoly) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let mut r = self.0.clone();
        let dd = d.degree();
        let dl = d.lead();
        if r.len() < d.0.len() {
            return (QPoly(vec![]), self.clone());
        }
        let mut q = vec![Rational::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] / &dl;
            if !c.is_zero() {
                for (j, dc) in d.0.iter().enumerate() {
                    r[k + j] -= &c * dc;
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        (QPoly::new(q), QPoly::new(r))
    }

    pub fn div_exact(&self, d: &QPoly) -> QPoly {
        let (q, r) = self.divrem(d);
        debug_assert!(r.is_zero());
        q
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, o: &QPoly) -> QPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    /// Rational content with the sign of the leading coefficient, and the
    /// primitive integer polynomial left after dividing it out.
    pub fn content_primitive(&self) -> (Rational, QPoly) {
        if self.is_zero() {
            return (Rational::zero(), self.clone());
        }
        let den = self.0.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = self.0.iter().fold(BigInt::zero(), |acc, c| acc.gcd(&(c * Rational::from_integer(den.clone())).to_integer()));
        let mut content = Rational::new(num, den);
        if self.lead().is_negative() {
            content = -content;
        }
        let prim = QPoly(self.0.iter().map(|c| c / &content).collect());
        (content, prim)
    }

    /// Square-free decomposition `self = c * prod a_i^i` with monic `a_i`,
    /// returned as `(i, a_i)` for the non-constant factors.
    pub fn square_free(&self) -> Vec<(u32, QPoly)> {
        let mut out = Vec::new();
        if self.degree() == 0 {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.div_exact(&a0);
        let mut c = df.div_exact(&a0);
        let mut d = c.sub(&b.derivative());
        let mut i = 1;
        while b.degree() > 0 {
            let a = b.gcd(&d);
            b = b.div_exact(&a);
            c = d.div_exact(&a);
            d = c.sub(&b.derivative());
            if a.degree() > 0 {
                out.push((i, a));
            }
            i += 1;
        }
        out
    }

    /// Rational roots, each listed once, in ascending order.
    pub fn rational_roots(&self) -> Vec<Rational> {
        let mut roots = Vec::new();
        let (_, mut p) = self.content_primitive();
        while p.degree() > 0 && p.0[0].is_zero() {
            p = QPoly(p.0[1..].to_vec());
            if !roots.contains(&Rational::zero()) {
                roots.push(Rational::zero());
            }
        }
        if p.degree() == 0 {
            roots.sort();
            return roots;
        }
        let a0 = p.0[0].to_integer().abs();
        let an = p.lead().to_integer().abs();
        let nums = divisors(&a0);
        let dens = divisors(&an);
        for q in &dens {
            for n in &nums {
                if n.gcd(q) != BigInt::one() {
                    continue;
                }
                for s in [n.clone(), -n.clone()] {
                    let r = Rational::new(s, q.clone());
                    if !roots.contains(&r) && p.eval(&r).is_zero() {
                        roots.push(r);
                    }
                }
            }
        }
        roots.sort();
        roots
    }
}

fn factorize(n: &BigInt) -> Vec<(BigInt, u32)> {
    let mut out = Vec::new();
    let mut m = n.abs();
    let mut p = 2u64;
    while p <= TRIAL_LIMIT && BigInt::from(p) * BigInt::from(p) <= m {
        let bp = BigInt::from(p);
        let mut k = 0;
        while (&m % &bp).is_zero() {
            m /= &bp;
            k += 1;
        }
        if k > 0 {
            out.push((bp, k));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > BigInt::one() {
        out.push((m, 1));
    }
    out
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut ds = vec![BigInt::one()];
    for (p, k) in factorize(n) {
        let mut next = Vec::new();
        for d in &ds {
            let mut pk = BigInt::one();
            for _ in 0..=k {
                next.push(d * &pk);
                pk *= &p;
            }
        }
        ds = next;
    }
    ds.sort();
    ds
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(cs: &[i64]) -> QPoly {
        QPoly::new(cs.iter().map(|c| Rational::from_integer(BigInt::from(*c))).collect())
    }

    #[test]
    fn division_and_gcd() {
        let a = q(&[-1, 0, 1]);
        let b = q(&[-1, 1]);
        let (quo, rem) = a.divrem(&b);
        assert_eq!(quo, q(&[1, 1]));
        assert!(rem.is_zero());
        assert_eq!(a.gcd(&q(&[1, 2, 1])), q(&[1, 1]));
    }

    #[test]
    fn square_free_parts() {
        // (x - 1)^3 (x + 2)
        let p = q(&[-1, 3, -3, 1]).mul_naive(&q(&[2, 1]));
        let sf = p.square_free();
        assert_eq!(sf, vec![(1, q(&[2, 1])), (3, q(&[-1, 1]))]);
    }

    #[test]
    fn roots() {
        let p = q(&[-6, 1, 1]).mul_naive(&q(&[1, 0, 1])).mul_naive(&q(&[-1, 2]));
        let half = Rational::new(1.into(), 2.into());
        assert_eq!(
            p.rational_roots(),
            vec![Rational::from_integer((-3).into()), half, Rational::from_integer(2.into())]
        );
    }

    impl QPoly {
        fn mul_naive(&self, o: &QPoly) -> QPoly {
            let mut c = vec![Rational::zero(); self.0.len() + o.0.len() - 1];
            for (i, a) in self.0.iter().enumerate() {
                for (j, b) in o.0.iter().enumerate() {
                    c[i + j] += a * b;
                }
            }
            QPoly::new(c)
        }
    }
}
