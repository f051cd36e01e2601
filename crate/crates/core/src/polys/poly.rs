//! Sparse multivariate polynomials over the rationals.
//!
//! Variables are indices into a generator list owned by a
//! [`Ring`](super::ring::Ring). A monomial is an exponent vector with
//! trailing zeros trimmed, so the natural `Vec` ordering is lexicographic
//! order with variable 0 most significant.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::expr::Rational;

pub type Mono = Vec<u32>;

fn trim(mut m: Mono) -> Mono {
    while m.last() == Some(&0) {
        m.pop();
    }
    m
}

fn mono_mul(a: &Mono, b: &Mono) -> Mono {
    let n = a.len().max(b.len());
    let mut out = vec![0; n];
    for (i, e) in a.iter().enumerate() {
        out[i] += e;
    }
    for (i, e) in b.iter().enumerate() {
        out[i] += e;
    }
    trim(out)
}

fn mono_div(a: &Mono, b: &Mono) -> Option<Mono> {
    if b.len() > a.len() && b[a.len()..].iter().any(|e| *e > 0) {
        return None;
    }
    let mut out = a.clone();
    for (i, e) in b.iter().enumerate() {
        if out[i] < *e {
            return None;
        }
        out[i] -= e;
    }
    Some(trim(out))
}

fn exponent(m: &Mono, v: usize) -> u32 {
    m.get(v).copied().unwrap_or(0)
}

fn with_exponent(m: &Mono, v: usize, e: u32) -> Mono {
    let mut out = m.clone();
    if out.len() <= v {
        out.resize(v + 1, 0);
    }
    out[v] = e;
    trim(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Mono, Rational>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly::default()
    }

    pub fn one() -> Poly {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Poly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Vec::new(), c);
        }
        Poly { terms }
    }

    pub fn var(v: usize) -> Poly {
        Poly::monomial(with_exponent(&Vec::new(), v, 1), Rational::one())
    }

    pub fn monomial(m: Mono, c: Rational) -> Poly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(trim(m), c);
        }
        Poly { terms }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Mono, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value if this is a constant polynomial.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Vec::new()).cloned(),
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    /// Leading term in lexicographic order.
    pub fn lead(&self) -> Option<(&Mono, &Rational)> {
        self.terms.iter().next_back()
    }

    fn add_term(&mut self, m: Mono, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(slot) => {
                slot.insert(c);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn scale(&self, k: &Rational) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect() }
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                out.add_term(mono_mul(m1, m2), c1 * c2);
            }
        }
        out
    }

    fn mul_term(&self, m: &Mono, c: &Rational) -> Poly {
        Poly { terms: self.terms.iter().map(|(k, v)| (mono_mul(k, m), v * c)).collect() }
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut acc = Poly::one();
        let mut base = self.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Highest variable index occurring, if any.
    pub fn max_var(&self) -> Option<usize> {
        self.terms.keys().filter(|m| !m.is_empty()).map(|m| m.len() - 1).max()
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.keys().map(|m| exponent(m, v)).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.iter().sum::<u32>()).max().unwrap_or(0)
    }

    pub fn contains_var(&self, v: usize) -> bool {
        self.terms.keys().any(|m| exponent(m, v) > 0)
    }

    /// Coefficients with respect to variable `v`, indexed by power.
    pub fn coeffs_in(&self, v: usize) -> Vec<Poly> {
        let mut out = vec![Poly::zero(); self.degree_in(v) as usize + 1];
        for (m, c) in &self.terms {
            let k = exponent(m, v);
            out[k as usize].add_term(with_exponent(m, v, 0), c.clone());
        }
        out
    }

    pub fn from_coeffs_in(v: usize, coeffs: &[Poly]) -> Poly {
        let mut out = Poly::zero();
        for (k, c) in coeffs.iter().enumerate() {
            for (m, x) in &c.terms {
                out.add_term(with_exponent(m, v, k as u32), x.clone());
            }
        }
        out
    }

    /// Exact quotient, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        if d.is_zero() {
            return None;
        }
        if let Some(c) = d.as_constant() {
            return Some(self.scale(&c.recip()));
        }
        let (dm, dc) = d.lead().map(|(m, c)| (m.clone(), c.clone()))?;
        let mut r = self.clone();
        let mut q = Poly::zero();
        while let Some((rm, rc)) = r.lead().map(|(m, c)| (m.clone(), c.clone())) {
            let tm = mono_div(&rm, &dm)?;
            let tc = rc / &dc;
            r = r.sub(&d.mul_term(&tm, &tc));
            q.add_term(tm, tc);
        }
        Some(q)
    }

    /// The largest monomial dividing every term.
    pub fn monomial_content(&self) -> Mono {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else { return Vec::new() };
        let mut out = first.clone();
        for m in it {
            out.truncate(m.len());
            for (i, e) in out.iter_mut().enumerate() {
                *e = (*e).min(m[i]);
            }
        }
        trim(out)
    }

    /// Rational `u` with `self / u` having coprime integer coefficients and
    /// a positive leading coefficient.
    pub fn unit(&self) -> Rational {
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            num_gcd = num_gcd.gcd(c.numer());
            den_lcm = den_lcm.lcm(c.denom());
        }
        if num_gcd.is_zero() {
            return Rational::one();
        }
        let u = Rational::new(num_gcd, den_lcm);
        match self.lead() {
            Some((_, c)) if c.is_negative() => -u,
            _ => u,
        }
    }

    pub fn normalized(&self) -> Poly {
        self.scale(&self.unit().recip())
    }

    /// Content with respect to `v`: the gcd of the coefficients in `v`.
    pub fn content_in(&self, v: usize) -> Poly {
        let mut g = Poly::zero();
        for c in self.coeffs_in(v) {
            g = gcd(&g, &c);
            if g.is_constant() && !g.is_zero() {
                return Poly::one();
            }
        }
        g
    }

    pub fn primitive_in(&self, v: usize) -> Poly {
        let c = self.content_in(v);
        if c.is_zero() {
            return self.clone();
        }
        self.div_exact(&c).expect("content divides")
    }

    pub fn derivative_in(&self, v: usize) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let k = exponent(m, v);
            if k > 0 {
                out.add_term(with_exponent(m, v, k - 1), c * Rational::from_integer(BigInt::from(k)));
            }
        }
        out
    }

    /// Exact square root, if `self` is the square of a polynomial.
    pub fn sqrt_exact(&self) -> Option<Poly> {
        if self.is_zero() {
            return Some(Poly::zero());
        }
        let (m, c) = self.lead()?;
        if m.iter().any(|e| e % 2 != 0) || c.is_negative() {
            return None;
        }
        let root_c = rational_sqrt(c)?;
        let half: Mono = m.iter().map(|e| e / 2).collect();
        let mut s = Poly::monomial(half, root_c);
        for _ in 0..=self.len() {
            let rem = self.sub(&s.mul(&s));
            let Some((rm, rc)) = rem.lead().map(|(m, c)| (m.clone(), c.clone())) else {
                return Some(s);
            };
            let (sm, sc) = s.lead().map(|(m, c)| (m.clone(), c.clone()))?;
            let tm = mono_div(&rm, &sm)?;
            if tm >= sm {
                return None;
            }
            let tc = rc / (sc * Rational::from_integer(BigInt::from(2)));
            s.add_term(tm, tc);
        }
        None
    }
}

fn rational_sqrt(c: &Rational) -> Option<Rational> {
    let n = c.numer().sqrt();
    let d = c.denom().sqrt();
    (&n * &n == *c.numer() && &d * &d == *c.denom()).then(|| Rational::new(n, d))
}

/// Pseudo-remainder of `p` by `q` with respect to `v`.
fn prem(p: &Poly, q: &Poly, v: usize) -> Poly {
    let dq = q.degree_in(v);
    let lcq = q.coeffs_in(v).pop().unwrap();
    let mut r = p.clone();
    let mut guard = 0;
    while !r.is_zero() && r.degree_in(v) >= dq && guard < 10_000 {
        let dr = r.degree_in(v);
        let lcr = r.coeffs_in(v).pop().unwrap();
        let shift = Poly::monomial(with_exponent(&Vec::new(), v, dr - dq), Rational::one());
        r = r.mul(&lcq).sub(&lcr.mul(&shift).mul(q));
        guard += 1;
    }
    r
}

/// Greatest common divisor, normalized by [`Poly::normalized`].
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.normalized();
    }
    if b.is_zero() {
        return a.normalized();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    let v = a.max_var().max(b.max_var()).unwrap();
    if !a.contains_var(v) {
        return gcd(a, &b.content_in(v));
    }
    if !b.contains_var(v) {
        return gcd(&a.content_in(v), b);
    }
    let ca = a.content_in(v);
    let cb = b.content_in(v);
    let c = gcd(&ca, &cb);
    let mut p = a.div_exact(&ca).expect("content divides");
    let mut q = b.div_exact(&cb).expect("content divides");
    if p.degree_in(v) < q.degree_in(v) {
        std::mem::swap(&mut p, &mut q);
    }
    loop {
        let r = prem(&p, &q, v);
        if r.is_zero() {
            break;
        }
        if !r.contains_var(v) {
            q = Poly::one();
            break;
        }
        p = q;
        q = r.primitive_in(v);
    }
    c.mul(&q.primitive_in(v)).normalized()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Poly {
        Poly::var(0)
    }
    fn y() -> Poly {
        Poly::var(1)
    }
    fn k(n: i64) -> Poly {
        Poly::constant(Rational::from_integer(n.into()))
    }

    #[test]
    fn arithmetic() {
        let p = x().add(&k(1)).mul(&x().sub(&k(1)));
        assert_eq!(p, x().mul(&x()).sub(&k(1)));
        assert_eq!(x().add(&k(1)).pow(3).degree_in(0), 3);
    }

    #[test]
    fn exact_division() {
        let a = x().add(&y());
        let b = x().sub(&y());
        let p = a.mul(&b);
        assert_eq!(p.div_exact(&a), Some(b.clone()));
        assert_eq!(p.div_exact(&x()), None);
    }

    #[test]
    fn multivariate_gcd() {
        let a = x().add(&y());
        let b = x().sub(&y()).mul(&k(3));
        let c = x().mul(&y()).add(&k(2));
        let g = gcd(&a.mul(&c), &b.mul(&c));
        assert_eq!(g, c);
        assert_eq!(gcd(&a.mul(&a), &a.mul(&b)), a);
        assert_eq!(gcd(&x(), &y()), Poly::one());
    }

    #[test]
    fn square_roots() {
        let d = x().sub(&y());
        assert_eq!(d.mul(&d).sqrt_exact(), Some(d.clone()));
        assert_eq!(x().mul(&x()).add(&k(1)).sqrt_exact(), None);
        let s = x().scale(&Rational::new(1.into(), 2.into())).add(&k(3));
        assert_eq!(s.mul(&s).sqrt_exact(), Some(s));
    }

    #[test]
    fn monomial_content() {
        let p = x().mul(&y()).mul(&y()).add(&x().mul(&x()).mul(&y()));
        assert_eq!(p.monomial_content(), vec![1, 1]);
    }
}
