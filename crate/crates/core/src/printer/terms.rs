//! Display ordering of sum terms and product factors.
//!
//! The canonical order is chosen for cheap structural comparison; printed
//! output instead orders terms by descending lexicographic monomial degree
//! over the generators that occur in the sum, which reads the way
//! polynomials are usually written.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::expr::{Expr, Node, Rational};

fn class(e: &Expr) -> u8 {
    match e.node() {
        Node::Const(_) => 0,
        Node::Named(_) => 1,
        Node::Sym(_) => 2,
        Node::Add(_) => 3,
        Node::Mul(_) => 4,
        Node::Pow(..) => 5,
        Node::Func(..) => 6,
        Node::Order { .. } => 7,
        Node::Limit { .. } => 8,
    }
}

fn cmp_seq(a: &[Expr], b: &[Expr]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match display_cmp(x, y) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    a.len().cmp(&b.len())
}

/// Order used for generators and product factors in printed output.
pub(crate) fn display_cmp(a: &Expr, b: &Expr) -> Ordering {
    match class(a).cmp(&class(b)) {
        Ordering::Equal => {}
        o => return o,
    }
    match (a.node(), b.node()) {
        (Node::Const(x), Node::Const(y)) => x.cmp(y),
        (Node::Named(x), Node::Named(y)) => x.name().cmp(y.name()),
        (Node::Sym(x), Node::Sym(y)) => x.name().cmp(y.name()),
        (Node::Add(x), Node::Add(y)) | (Node::Mul(x), Node::Mul(y)) => cmp_seq(x, y),
        (Node::Pow(b1, e1), Node::Pow(b2, e2)) => {
            display_cmp(b1, b2).then_with(|| display_cmp(e1, e2))
        }
        (Node::Func(f, x), Node::Func(g, y)) => {
            f.name().cmp(g.name()).then_with(|| display_cmp(x, y))
        }
        _ => a.cmp(b),
    }
}

/// Splits a factor into a generator and an integer multiplicity:
/// `x^3 -> (x, 3)`, `x^(3/2) -> (x^(1/2), 3)`, `exp(x) -> (exp(x), 1)`.
fn decompose_power(f: &Expr) -> (Expr, Rational) {
    if let Node::Pow(b, e) = f.node() {
        if let Some(q) = e.as_rational() {
            if q.is_integer() {
                return (b.clone(), q.clone());
            }
            let unit = Rational::new(BigInt::one(), q.denom().clone());
            let g = Expr::from_node(Node::Pow(b.clone(), Expr::rational(unit)));
            return (g, Rational::from_integer(q.numer().clone()));
        }
    }
    (f.clone(), Rational::one())
}

fn monomial(term: &Expr) -> Vec<(Expr, Rational)> {
    let (_, rest) = term.as_coeff_mul();
    if rest.is_one() {
        return Vec::new();
    }
    rest.factors()
        .iter()
        .filter(|f| !f.free_symbols().is_empty())
        .map(decompose_power)
        .collect()
}

/// Terms of `e` in print order.
pub(crate) fn ordered_terms(e: &Expr) -> Vec<Expr> {
    let terms = e.terms();
    if let [a, b] = terms {
        // `c - x` reads better than `-x + c` for a single negated factor.
        let single_neg = |t: &Expr| match t.node() {
            Node::Mul(fs) => fs.len() == 2 && fs[0].as_rational().is_some_and(|c| c.is_negative()),
            _ => false,
        };
        let pos_num = |t: &Expr| t.as_rational().is_some_and(|c| c.is_positive());
        if pos_num(a) && single_neg(b) && !b.contains_order() {
            return vec![a.clone(), b.clone()];
        }
    }
    let monos: Vec<Vec<(Expr, Rational)>> = terms.iter().map(monomial).collect();
    let mut gens: Vec<Expr> = monos.iter().flatten().map(|(g, _)| g.clone()).collect();
    gens.sort_by(display_cmp);
    gens.dedup();
    let vectors: Vec<Vec<Rational>> = monos
        .iter()
        .map(|m| {
            gens.iter()
                .map(|g| {
                    m.iter()
                        .filter(|(h, _)| h == g)
                        .fold(Rational::zero(), |acc, (_, k)| acc + k)
                })
                .collect()
        })
        .collect();
    let ascending = terms.iter().any(|t| matches!(t.node(), Node::Order { .. }));
    let mut idx: Vec<usize> = (0..terms.len()).collect();
    idx.sort_by(|&i, &j| {
        let oi = matches!(terms[i].node(), Node::Order { .. });
        let oj = matches!(terms[j].node(), Node::Order { .. });
        if oi != oj {
            return oi.cmp(&oj);
        }
        let by_degree = vectors[i].cmp(&vectors[j]);
        let by_degree = if ascending { by_degree } else { by_degree.reverse() };
        by_degree.then_with(|| terms[i].cmp(&terms[j]))
    });
    idx.into_iter().map(|i| terms[i].clone()).collect()
}

/// Non-constant factors of a product in print order.
pub(crate) fn ordered_factors(factors: &[Expr]) -> Vec<Expr> {
    let mut fs: Vec<Expr> = factors.iter().filter(|f| !f.is_const()).cloned().collect();
    fs.sort_by(|a, b| {
        let (ba, ea) = a.as_base_exp();
        let (bb, eb) = b.as_base_exp();
        display_cmp(&ba, &bb).then_with(|| ea.cmp(&eb))
    });
    fs
}
