use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;

use symcas::calculus::diff;
use symcas::expr::canonicalize;
use symcas::matrix::{self, MatrixExpr};
use symcas::polys::{cancel, expand, factor};
use symcas::solver::solve_sys;
use symcas::{as_numeric_fn, parse, to_infix, Bindings, Expr, Func, Rational, Symbol};

fn sym(n: &str) -> Symbol {
    Symbol::plain(n).unwrap()
}

fn rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=6).prop_map(|(n, d)| Rational::new(BigInt::from(n), BigInt::from(d)))
}

fn leaf() -> impl Strategy<Value = Expr> {
    prop_oneof![
        prop::sample::select(vec!["x", "y", "z"]).prop_map(|n| Expr::symbol(&sym(n))),
        rational().prop_map(Expr::rational),
    ]
}

fn expr() -> impl Strategy<Value = Expr> {
    leaf().prop_recursive(4, 40, 3, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 2..4).prop_map(Expr::add),
            prop::collection::vec(inner.clone(), 2..4).prop_map(Expr::mul),
            (inner.clone(), -3i64..=3).prop_map(|(b, k)| b.powi(k).unwrap_or(b)),
            (inner.clone(), prop::sample::select(vec![Func::Sin, Func::Cos, Func::Exp, Func::Abs]))
                .prop_map(|(a, f)| Expr::func(f, &a).unwrap_or(a)),
            inner.prop_map(|a| a.sqrt().unwrap_or(a)),
        ]
    })
}

fn polynomial() -> impl Strategy<Value = Expr> {
    let x = Expr::symbol(&sym("x"));
    prop::collection::vec(
        (prop::collection::vec(-4i64..=4, 1..4), 1i64..=2),
        1..4,
    )
    .prop_map(move |factors| {
        let parts: Vec<Expr> = factors
            .into_iter()
            .map(|(cs, k)| {
                let mut terms: Vec<Expr> = cs
                    .iter()
                    .enumerate()
                    .map(|(j, c)| Expr::mul(vec![Expr::int(*c), x.powi(j as i64).unwrap()]))
                    .collect();
                terms.push(x.powi(cs.len() as i64).unwrap());
                Expr::add(terms).powi(k).unwrap()
            })
            .collect();
        Expr::mul(parts)
    })
}

fn rational_matrix(n: usize) -> impl Strategy<Value = Vec<Vec<Rational>>> {
    prop::collection::vec(prop::collection::vec(rational(), n), n)
}

fn to_matrix(rows: &[Vec<Rational>]) -> MatrixExpr {
    MatrixExpr::from_rows(rows.iter().map(|r| r.iter().cloned().map(Expr::rational).collect()).collect()).unwrap()
}

/// Determinant by cofactor expansion along the first row.
fn cofactor_det(m: &[Vec<Rational>]) -> Rational {
    if m.is_empty() {
        return Rational::one();
    }
    let mut total = Rational::zero();
    for (j, a) in m[0].iter().enumerate() {
        let minor: Vec<Vec<Rational>> = m[1..]
            .iter()
            .map(|r| r.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, v)| v.clone()).collect())
            .collect();
        let term = a * cofactor_det(&minor);
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

fn is_zero_matrix(m: &MatrixExpr) -> bool {
    m.cancel().map(|c| c.entries().iter().all(Expr::is_zero)).unwrap_or(false)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn canonical_form_is_idempotent(e in expr()) {
        prop_assert_eq!(canonicalize(&e.to_raw()).unwrap(), e);
    }

    #[test]
    fn print_then_parse_round_trips(e in expr()) {
        let text = to_infix(&e);
        prop_assert_eq!(parse(&text).unwrap(), e, "{}", text);
    }

    #[test]
    fn sums_and_products_commute(a in expr(), b in expr()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
    }

    #[test]
    fn subtracting_self_is_zero(a in expr()) {
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn derivative_is_linear(a in expr(), b in expr(), c in rational()) {
        let x = sym("x");
        let lhs = diff(&(&a + &Expr::rational(c.clone()) * &b), &x);
        let rhs = diff(&a, &x).and_then(|da| diff(&b, &x).map(|db| &da + &Expr::rational(c) * &db));
        if let (Ok(l), Ok(r)) = (lhs, rhs) {
            prop_assert!(expand(&(&l - &r)).map(|d| d.is_zero()).unwrap_or(true));
        }
    }

    #[test]
    fn expand_of_factor_is_identity(p in polynomial()) {
        let e = expand(&p).unwrap();
        prop_assert_eq!(expand(&factor(&e).unwrap()).unwrap(), e);
    }

    #[test]
    fn expanded_polynomial_agrees_numerically(p in polynomial(), t in -2.0f64..2.0) {
        let x = sym("x");
        let e = expand(&p).unwrap();
        let f = as_numeric_fn(&p, std::slice::from_ref(&x)).unwrap().eval(&[t]);
        let g = as_numeric_fn(&e, std::slice::from_ref(&x)).unwrap().eval(&[t]);
        prop_assert!((f - g).abs() <= 1e-9 * f.abs().max(1.0));
    }

    #[test]
    fn det_matches_cofactor_expansion(rows in (1usize..=4).prop_flat_map(rational_matrix)) {
        let d = matrix::det(&to_matrix(&rows)).unwrap();
        prop_assert_eq!(d, Expr::rational(cofactor_det(&rows)));
    }

    #[test]
    fn det_is_multiplicative(a in rational_matrix(3), b in rational_matrix(3)) {
        let (ma, mb) = (to_matrix(&a), to_matrix(&b));
        let lhs = matrix::det(&ma.matmul(&mb).unwrap()).unwrap();
        let rhs = matrix::det(&ma).unwrap() * matrix::det(&mb).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn inverse_times_matrix_is_identity(rows in rational_matrix(3)) {
        let m = to_matrix(&rows);
        match matrix::inv(&m) {
            Ok(mi) => prop_assert_eq!(m.matmul(&mi).unwrap(), MatrixExpr::identity(3)),
            Err(_) => prop_assert!(cofactor_det(&rows).is_zero()),
        }
    }

    #[test]
    fn linear_solution_has_zero_residual(rows in rational_matrix(3), rhs in prop::collection::vec(rational(), 3)) {
        prop_assume!(!cofactor_det(&rows).is_zero());
        let a = to_matrix(&rows);
        let b = MatrixExpr::column(rhs.into_iter().map(Expr::rational).collect());
        let x = matrix::solve_linear(&a, &b).unwrap();
        prop_assert_eq!(a.matmul(&x).unwrap(), b);
    }

    #[test]
    fn qr_reconstructs_the_matrix(rows in rational_matrix(2)) {
        prop_assume!(!cofactor_det(&rows).is_zero());
        let m = to_matrix(&rows);
        let f = matrix::qr(&m).unwrap();
        let back = f.q.matmul(&f.r).unwrap();
        prop_assert!(is_zero_matrix(&back.sub(&m).unwrap()), "{} vs {}", back, m);
        let qtq = f.q.transpose().matmul(&f.q).unwrap();
        prop_assert!(is_zero_matrix(&qtq.sub(&MatrixExpr::identity(2)).unwrap()));
    }

    #[test]
    fn eigenpairs_satisfy_definition(rows in rational_matrix(2)) {
        let m = to_matrix(&rows);
        let pairs = matrix::eigen(&m).unwrap();
        let total: u32 = pairs.iter().map(|e| e.multiplicity).sum();
        prop_assert_eq!(total, 2);
        for e in &pairs {
            for v in &e.vectors {
                let r = m.matmul(v).unwrap().sub(&v.scale(&e.value)).unwrap();
                prop_assert!(is_zero_matrix(&r), "{} for {}", r, e.value);
            }
        }
    }

    #[test]
    fn schur_complement_factors_determinant(rows in rational_matrix(4), k in 1usize..=3) {
        let m = to_matrix(&rows);
        let a = m.submatrix(&(0..k).collect::<Vec<_>>(), &(0..k).collect::<Vec<_>>()).unwrap();
        let da = matrix::det(&a).unwrap();
        prop_assume!(!da.is_zero());
        let s = matrix::schur_complement(&m, k).unwrap();
        prop_assert_eq!(da * matrix::det(&s).unwrap(), matrix::det(&m).unwrap());
    }

    #[test]
    fn quadratic_roots_solve_the_equation(r1 in rational(), r2 in rational()) {
        let x = sym("x");
        let xe = Expr::symbol(&x);
        let eq = expand(&((&xe - &Expr::rational(r1.clone())) * (&xe - &Expr::rational(r2.clone())))).unwrap();
        let sols = solve_sys(std::slice::from_ref(&eq), std::slice::from_ref(&x)).unwrap();
        prop_assert_eq!(sols.len(), if r1 == r2 { 1 } else { 2 });
        for b in sols.iter() {
            prop_assert!(eq.subs(&b).unwrap().is_zero());
        }
    }

    #[test]
    fn parametric_linear_system_residuals(a in rational(), b in rational()) {
        let eqs = [parse("u*x + y - k").unwrap(), parse("x - y - 1").unwrap()];
        let sols = solve_sys(&eqs, &[sym("x"), sym("y")]).unwrap();
        prop_assert_eq!(sols.len(), 1);
        let inst = Bindings::new(vec![
            (sym("u"), Expr::rational(a.clone())),
            (sym("k"), Expr::rational(b)),
        ]).unwrap();
        for eq in &eqs {
            let r = cancel(&eq.subs(&sols.bindings(0)).unwrap()).unwrap();
            prop_assert!(r.is_zero(), "{}", r);
            if a != -Rational::one() {
                prop_assert!(r.subs(&inst).unwrap().is_zero());
            }
        }
    }
}
