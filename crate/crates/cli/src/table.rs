//! Side-by-side floating-point and exact evaluation of two forms of a
//! univariate expression.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use symcas::{as_numeric_fn, Error, Expr, Rational, Result, Symbol};

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub x: Rational,
    pub first: f64,
    pub second: f64,
    pub exact: Rational,
}

fn variable(a: &Expr, b: &Expr) -> Result<Symbol> {
    let mut free = a.free_symbols();
    free.extend(b.free_symbols());
    let mut it = free.into_iter();
    match (it.next(), it.next()) {
        (Some(v), None) => Ok(v),
        (None, _) => Err(Error::Domain("expressions have no variable".into())),
        (Some(v), Some(w)) => Err(Error::NotGround(format!("{v}, {w}"))),
    }
}

fn exact_at(e: &Expr, v: &Symbol, x: &Rational) -> Result<Rational> {
    let value = e.subs1(v, &Expr::rational(x.clone()))?;
    value.as_rational().cloned().ok_or_else(|| Error::NotGround(value.to_string()))
}

/// Evaluates `first` and `second` at `points` equally spaced abscissae
/// spanning `center +- half_width`. The exact column is the value of
/// `first`; a point where the two forms differ exactly is an error.
pub fn cancellation_table(
    first: &Expr,
    second: &Expr,
    center: &Rational,
    half_width: &Rational,
    points: usize,
) -> Result<Vec<Row>> {
    if points == 0 {
        return Err(Error::Domain("need at least one point".into()));
    }
    let v = variable(first, second)?;
    let f = as_numeric_fn(first, std::slice::from_ref(&v))?;
    let g = as_numeric_fn(second, std::slice::from_ref(&v))?;
    let mut rows = Vec::with_capacity(points);
    for k in 0..points {
        let x = if points == 1 {
            center.clone()
        } else {
            let t = Rational::new(BigInt::from(2 * k), BigInt::from(points - 1)) - Rational::from_integer(1.into());
            center + half_width * t
        };
        let exact = exact_at(first, &v, &x)?;
        let other = exact_at(second, &v, &x)?;
        if exact != other {
            return Err(Error::Domain(format!("the two forms differ at {x}: {exact} and {other}")));
        }
        let xf = x.to_f64().unwrap_or(f64::NAN);
        rows.push(Row { first: f.eval(&[xf]), second: g.eval(&[xf]), x, exact });
    }
    Ok(rows)
}

pub fn format_table(rows: &[Row]) -> String {
    let mut out = vec![format!("{:<26}  {:<24}  {:<24}  {}", "x", "first (f64)", "second (f64)", "exact")];
    for r in rows {
        let xf = r.x.to_f64().unwrap_or(f64::NAN);
        out.push(format!("{:<26.17e}  {:<24.16e}  {:<24.16e}  {}", xf, r.first, r.second, r.exact));
    }
    out.join("\n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use symcas::parse;

    fn forms() -> (Expr, Expr) {
        let p = parse("(x - 1)^7").unwrap();
        (p.clone(), symcas::polys::expand(&p).unwrap())
    }

    #[test]
    fn exact_values_agree_and_floats_diverge() {
        let (p, e) = forms();
        let h = Rational::new(BigInt::one(), BigInt::from(1u64 << 20));
        let rows = cancellation_table(&p, &e, &Rational::one(), &h, 3).unwrap();
        let last = &rows[2];
        assert_eq!(last.x, Rational::one() + &h);
        let tiny = Rational::new(BigInt::one(), num_traits::pow(BigInt::from(2), 140));
        assert_eq!(last.exact, tiny);
        let t = tiny.to_f64().unwrap();
        assert_eq!(last.first, t);
        // Every digit cancels: the expanded form evaluates to exactly zero.
        assert_eq!(last.second, 0.0);
        assert_eq!(rows[1].exact, Rational::from_integer(0.into()));
    }

    #[test]
    fn wider_offset_shows_noise() {
        let (p, e) = forms();
        let h = Rational::new(BigInt::one(), BigInt::from(1u64 << 17));
        let rows = cancellation_table(&p, &e, &Rational::one(), &h, 3).unwrap();
        let t = rows[2].exact.to_f64().unwrap();
        assert_eq!(rows[2].first, t);
        assert!(((rows[2].second - t) / t).abs() > 1e3);
    }

    #[test]
    fn integer_point() {
        let (p, e) = forms();
        let rows = cancellation_table(&p, &e, &Rational::from_integer(2.into()), &Rational::one(), 1).unwrap();
        assert_eq!((rows[0].first, rows[0].second), (1.0, 1.0));
        assert_eq!(rows[0].exact, Rational::one());
        assert!(format_table(&rows).lines().count() == 2);
    }

    #[test]
    fn needs_one_variable() {
        let r = cancellation_table(&parse("x*y").unwrap(), &parse("x").unwrap(), &Rational::one(), &Rational::one(), 2);
        assert!(matches!(r, Err(Error::NotGround(_))));
    }
}
