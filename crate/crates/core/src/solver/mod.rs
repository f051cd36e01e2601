//! Linear systems and small polynomial systems.

use std::fmt;

use crate::assume::{ask, Property};
use crate::calculus::diff;
use crate::error::{Error, Result};
use crate::expr::{Bindings, Expr};
use crate::matrix::{solve_linear, MatrixExpr};
use crate::polys::{cancel, poly_roots, Ring, UnivariatePoly};
use crate::printer::to_infix;
use crate::symbol::Symbol;

/// Solves `A x = b`.
pub fn solve_lin(a: &MatrixExpr, b: &MatrixExpr) -> Result<MatrixExpr> {
    solve_linear(a, b)
}

/// Solutions of a system, each binding every unknown in order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionSet {
    unknowns: Vec<Symbol>,
    solutions: Vec<Vec<Expr>>,
}

impl SolutionSet {
    pub fn unknowns(&self) -> &[Symbol] {
        &self.unknowns
    }

    pub fn len(&self) -> usize {
        self.solutions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.solutions.is_empty()
    }

    /// Values of solution `i`, aligned with `unknowns()`.
    pub fn values(&self, i: usize) -> &[Expr] {
        &self.solutions[i]
    }

    pub fn bindings(&self, i: usize) -> Bindings {
        Bindings::new(self.unknowns.iter().cloned().zip(self.solutions[i].iter().cloned()).collect())
            .expect("unknowns are distinct")
    }

    pub fn iter(&self) -> impl Iterator<Item = Bindings> + '_ {
        (0..self.len()).map(|i| self.bindings(i))
    }
}

impl fmt::Display for SolutionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.solutions.is_empty() {
            return write!(f, "No solutions");
        }
        let width = self.unknowns.iter().map(|s| s.name().len()).max().unwrap_or(0);
        let mut lines = Vec::new();
        for (i, sol) in self.solutions.iter().enumerate() {
            lines.push(format!("Solution {}:", i + 1));
            for (u, v) in self.unknowns.iter().zip(sol) {
                lines.push(format!("  {:width$} =  {}", u.name(), to_infix(v)));
            }
        }
        write!(f, "{}", lines.join("\n"))
    }
}

/// Numerator of `e` over a common denominator, plus the denominator when
/// it is not constant. Fails if an unknown occurs outside a polynomial
/// position.
fn clear(e: &Expr, unknowns: &[Symbol]) -> Result<(Expr, Option<Expr>)> {
    let mut ring = Ring::new();
    let r = ring.to_ratfunc(e)?;
    for g in ring.gens() {
        if g.as_symbol().is_some() {
            continue;
        }
        if let Some(u) = unknowns.iter().find(|u| g.contains_symbol(u)) {
            return Err(Error::NotPolynomialIn(u.name().to_string()));
        }
    }
    let num = ring.poly_to_expr(&r.num);
    let den = (!r.den.is_constant()).then(|| ring.poly_to_expr(&r.den));
    Ok((num, den))
}

fn mentions_any(e: &Expr, unknowns: &[Symbol]) -> bool {
    unknowns.iter().any(|u| e.contains_symbol(u))
}

/// Tries the system as `A x = b`.
fn linear_solution(eqs: &[Expr], unknowns: &[Symbol]) -> Result<Option<Vec<Expr>>> {
    if eqs.len() != unknowns.len() {
        return Ok(None);
    }
    let zero = Bindings::new(unknowns.iter().map(|u| (u.clone(), Expr::zero())).collect())?;
    let mut a = Vec::new();
    let mut b = Vec::new();
    for e in eqs {
        let mut row = Vec::new();
        for u in unknowns {
            let c = diff(e, u)?;
            if mentions_any(&c, unknowns) {
                return Ok(None);
            }
            row.push(c);
        }
        a.push(row);
        b.push(-e.subs(&zero)?);
    }
    match solve_linear(&MatrixExpr::from_rows(a)?, &MatrixExpr::column(b)) {
        Ok(x) => Ok(Some(x.entries().to_vec())),
        Err(Error::SingularMatrix) => Ok(None),
        Err(e) => Err(e),
    }
}

enum Step {
    Linear { eq: usize, unknown: usize, value: Expr },
    Roots { unknown: usize, roots: Vec<Expr> },
}

/// Picks the next elimination step: an equation linear in an unknown with
/// a coefficient free of the unknowns, then a univariate equation, then
/// any equation linear in an unknown.
fn next_step(eqs: &[Expr], unknowns: &[Symbol]) -> Result<Step> {
    let mut fallback = None;
    for (i, e) in eqs.iter().enumerate() {
        for (j, u) in unknowns.iter().enumerate() {
            if !e.contains_symbol(u) {
                continue;
            }
            let p = UnivariatePoly::from_expr(e, u)?;
            if p.degree() != Some(1) {
                continue;
            }
            let c = &p.coefficients()[1];
            let value = || cancel(&(-&p.coefficients()[0] * &c.recip()?));
            if !mentions_any(c, unknowns) {
                return Ok(Step::Linear { eq: i, unknown: j, value: value()? });
            }
            if fallback.is_none() {
                fallback = Some(Step::Linear { eq: i, unknown: j, value: value()? });
            }
        }
    }
    for e in eqs {
        let present: Vec<usize> = (0..unknowns.len()).filter(|&j| e.contains_symbol(&unknowns[j])).collect();
        if let [j] = present[..] {
            let p = UnivariatePoly::from_expr(e, &unknowns[j])?;
            let roots = poly_roots(&p)?.into_iter().map(|(r, _)| r).collect();
            return Ok(Step::Roots { unknown: j, roots });
        }
    }
    fallback.ok_or_else(|| {
        let shown: Vec<String> = eqs.iter().map(|e| format!("{} = 0", to_infix(e))).collect();
        Error::UnsolvableResidual(shown.join(", "))
    })
}

/// Solves by substitution; returns values aligned with `unknowns`.
fn triangularize(eqs: Vec<Expr>, unknowns: &[Symbol]) -> Result<Vec<Vec<Expr>>> {
    let mut live = Vec::new();
    for e in eqs {
        let (num, _) = clear(&e, unknowns)?;
        if num.is_zero() {
            continue;
        }
        if !mentions_any(&num, unknowns) {
            return Ok(Vec::new());
        }
        live.push(num);
    }
    if unknowns.is_empty() {
        return Ok(vec![Vec::new()]);
    }
    if live.is_empty() {
        let names: Vec<&str> = unknowns.iter().map(Symbol::name).collect();
        return Err(Error::UnsolvableResidual(format!("no equations determine {}", names.join(", "))));
    }
    let (branches, unknown, rest) = match next_step(&live, unknowns)? {
        Step::Linear { eq, unknown, value } => {
            live.remove(eq);
            (vec![value], unknown, live)
        }
        Step::Roots { unknown, roots } => (roots, unknown, live),
    };
    let u = &unknowns[unknown];
    let others: Vec<Symbol> = unknowns.iter().filter(|s| *s != u).cloned().collect();
    let mut out = Vec::new();
    for value in branches {
        let mut sub = Vec::new();
        for e in &rest {
            match e.subs1(u, &value) {
                Ok(s) => sub.push(s),
                Err(Error::Domain(_)) => continue,
                Err(err) => return Err(err),
            }
        }
        for partial in triangularize(sub, &others)? {
            let back = Bindings::new(others.iter().cloned().zip(partial.iter().cloned()).collect())?;
            let Ok(v) = value.subs(&back) else { continue };
            let v = cancel(&v)?;
            let mut full = partial;
            full.insert(unknown, v);
            out.push(full);
        }
    }
    Ok(out)
}

fn respects_assumptions(u: &Symbol, v: &Expr) -> bool {
    let a = u.assumptions();
    let fails = |p| ask(v, p).is_no();
    !(a.is_real() && fails(Property::Real)
        || a.is_positive() && fails(Property::Positive)
        || a.is_integer() && fails(Property::Integer))
}

/// Solves `equations = 0` for `unknowns`.
///
/// Denominators are cleared first and candidates that make one of them
/// vanish are discarded. Solutions contradicting an unknown's assumptions
/// are dropped. The result is ordered by the printed values.
pub fn solve_sys(equations: &[Expr], unknowns: &[Symbol]) -> Result<SolutionSet> {
    if let Some((i, _)) = unknowns.iter().enumerate().find(|(i, u)| unknowns[..*i].contains(u)) {
        return Err(Error::Domain(format!("unknown `{}` is listed twice", unknowns[i])));
    }
    let mut nums = Vec::new();
    let mut conditions = Vec::new();
    for e in equations {
        let (num, den) = clear(e, unknowns)?;
        nums.push(num);
        conditions.extend(den);
    }
    let candidates = match linear_solution(&nums, unknowns)? {
        Some(x) => vec![x],
        None => triangularize(nums, unknowns)?,
    };
    let mut solutions = Vec::new();
    for values in candidates {
        let b = Bindings::new(unknowns.iter().cloned().zip(values.iter().cloned()).collect())?;
        let mut ok = unknowns.iter().zip(&values).all(|(u, v)| respects_assumptions(u, v));
        for c in &conditions {
            ok = ok && c.subs(&b).map_or(false, |v| cancel(&v).map_or(false, |v| !v.is_zero()));
        }
        if ok {
            solutions.push(values);
        }
    }
    solutions.sort_by_cached_key(|vals| vals.iter().map(to_infix).collect::<Vec<_>>());
    solutions.dedup();
    Ok(SolutionSet { unknowns: unknowns.to_vec(), solutions })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;
    use crate::symbol::Assumptions;

    fn syms(names: &[&str]) -> Vec<Symbol> {
        names.iter().map(|n| Symbol::plain(n).unwrap()).collect()
    }

    fn exprs(src: &[&str]) -> Vec<Expr> {
        src.iter().map(|s| parse(s).unwrap()).collect()
    }

    #[test]
    fn lagrange_multinomial() {
        let eqs = exprs(&["a - y1/p1", "a - y2/p2", "a - y3/p3", "p1 + p2 + p3 - 1"]);
        let s = solve_sys(&eqs, &syms(&["p1", "p2", "p3", "a"])).unwrap();
        assert_eq!(
            s.to_string(),
            "Solution 1:\n  p1 =  y1/(y1 + y2 + y3)\n  p2 =  y2/(y1 + y2 + y3)\n  p3 =  y3/(y1 + y2 + y3)\n  a  =  y1 + y2 + y3"
        );
    }

    #[test]
    fn quadratics_and_assumptions() {
        let x = syms(&["x"]);
        assert_eq!(solve_sys(&exprs(&["x^2 + 1"]), &x).unwrap().to_string(), "Solution 1:\n  x =  -I\nSolution 2:\n  x =  I");
        let real = [Symbol::new("x", Assumptions::REAL).unwrap()];
        let e = parse("x^2 + 1").unwrap().subs1(&x[0], &Expr::symbol(&real[0])).unwrap();
        assert_eq!(solve_sys(&[e], &real).unwrap().to_string(), "No solutions");
        let pos = [Symbol::new("x", Assumptions::POSITIVE).unwrap()];
        let e = parse("x^2 - 1").unwrap().subs1(&x[0], &Expr::symbol(&pos[0])).unwrap();
        assert_eq!(solve_sys(&[e], &pos).unwrap().to_string(), "Solution 1:\n  x =  1");
        assert_eq!(solve_sys(&exprs(&["x^2 - 1"]), &x).unwrap().len(), 2);
    }

    #[test]
    fn anova_normal_equations() {
        let xtx = MatrixExpr::from_rows(vec![exprs(&["6", "2", "2"]), exprs(&["2", "2", "0"]), exprs(&["2", "0", "2"])]).unwrap();
        let xty = MatrixExpr::column(exprs(&["y1 + y2 + y3 + y4 + y5 + y6", "y3 + y4", "y5 + y6"]));
        let b = solve_lin(&xtx, &xty).unwrap();
        assert_eq!(b.to_string(), "[[y1/2 + y2/2], [-y1/2 - y2/2 + y3/2 + y4/2], [-y1/2 - y2/2 + y5/2 + y6/2]]");
    }

    #[test]
    fn mixed_system() {
        let s = solve_sys(&exprs(&["x + y - 3", "x*y - 2"]), &syms(&["x", "y"])).unwrap();
        assert_eq!(s.to_string(), "Solution 1:\n  x =  1\n  y =  2\nSolution 2:\n  x =  2\n  y =  1");
        let s = solve_sys(&exprs(&["x - 1/x"]), &syms(&["x"])).unwrap();
        assert_eq!(s.len(), 2);
        assert!(solve_sys(&exprs(&["x - 1", "x - 2"]), &syms(&["x"])).unwrap().is_empty());
    }

    #[test]
    fn failures() {
        assert!(matches!(solve_sys(&exprs(&["x + y"]), &syms(&["x", "y"])), Err(Error::UnsolvableResidual(_))));
        assert!(matches!(solve_sys(&exprs(&["x^3 - 2"]), &syms(&["x"])), Err(Error::UnsolvableResidual(_))));
        assert!(matches!(solve_sys(&exprs(&["log(x) - 1"]), &syms(&["x"])), Err(Error::NotPolynomialIn(_))));
        assert!(matches!(solve_sys(&exprs(&["x^2 + y^2 - 1", "x^2 - y^2"]), &syms(&["x", "y"])), Err(Error::UnsolvableResidual(_))));
    }
}
