//! Determinants, inverses, null spaces, eigenpairs, QR and Schur complements.
//!
//! Elimination runs over rational functions of the entries' generators, so
//! a pivot is rejected only when it is identically zero.

use super::MatrixExpr;
use crate::error::{Error, Result};
use crate::expr::{Expr, Func, Node};
use crate::polys::{cancel, gcd, poly_roots, Poly, RatFunc, Ring, UnivariatePoly};
use crate::symbol::Symbol;

type Grid = Vec<Vec<RatFunc>>;

fn to_grid(ring: &mut Ring, m: &MatrixExpr) -> Result<Grid> {
    (0..m.rows()).map(|i| m.row(i).iter().map(|e| ring.to_ratfunc(e)).collect()).collect()
}

fn from_grid(ring: &Ring, g: &[Vec<RatFunc>], cols: usize) -> MatrixExpr {
    let entries = g.iter().flat_map(|r| r.iter().map(|x| ring.to_expr(x))).collect();
    MatrixExpr::new(g.len(), cols, entries).expect("grid is rectangular")
}

fn require_square(m: &MatrixExpr, what: &str) -> Result<()> {
    if !m.is_square() {
        return Err(Error::Shape(format!("{what} needs a square matrix, got {}x{}", m.rows(), m.cols())));
    }
    Ok(())
}

fn bareiss(ring: &Ring, mut a: Grid) -> Result<RatFunc> {
    let n = a.len();
    if n == 0 {
        return Ok(RatFunc::one());
    }
    let mut negate = false;
    let mut prev = RatFunc::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    negate = !negate;
                }
                None => return Ok(RatFunc::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = ring.sub(&ring.mul(&a[i][j], &a[k][k]), &ring.mul(&a[i][k], &a[k][j]));
                a[i][j] = ring.div(&t, &prev)?;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    Ok(if negate { d.neg() } else { d })
}

/// Determinant by fraction-free elimination.
pub fn det(m: &MatrixExpr) -> Result<Expr> {
    require_square(m, "det")?;
    let mut ring = Ring::new();
    let g = to_grid(&mut ring, m)?;
    let d = bareiss(&ring, g)?;
    Ok(ring.to_expr(&d))
}

/// Reduces the leading `pivot_cols` columns to reduced row echelon form.
/// Returns the pivot columns in order.
fn rref(ring: &Ring, a: &mut Grid, pivot_cols: usize) -> Result<Vec<usize>> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for c in 0..pivot_cols {
        if row == a.len() {
            break;
        }
        let Some(p) = (row..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(row, p);
        let inv = ring.div(&RatFunc::one(), &a[row][c])?;
        a[row] = a[row].iter().map(|x| ring.mul(x, &inv)).collect();
        for i in 0..a.len() {
            if i != row && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..a[i].len() {
                    let t = ring.mul(&f, &a[row][j]);
                    a[i][j] = ring.sub(&a[i][j], &t);
                }
            }
        }
        pivots.push(c);
        row += 1;
    }
    Ok(pivots)
}

/// Solves `A X = B` for square nonsingular `A`.
pub fn solve_linear(a: &MatrixExpr, b: &MatrixExpr) -> Result<MatrixExpr> {
    require_square(a, "solve")?;
    if b.rows() != a.rows() {
        return Err(Error::Shape(format!(
            "right-hand side has {} rows, expected {}",
            b.rows(),
            a.rows()
        )));
    }
    let n = a.rows();
    let mut ring = Ring::new();
    let mut g = to_grid(&mut ring, a)?;
    for (row, rhs) in g.iter_mut().zip(to_grid(&mut ring, b)?) {
        row.extend(rhs);
    }
    if rref(&ring, &mut g, n)?.len() < n {
        return Err(Error::SingularMatrix);
    }
    let sol: Grid = g.into_iter().map(|r| r[n..].to_vec()).collect();
    Ok(from_grid(&ring, &sol, b.cols()))
}

/// An inverse together with the expressions that must not vanish for it
/// to be valid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Inverse {
    pub matrix: MatrixExpr,
    pub nonzero: Vec<Expr>,
}

pub fn inverse(m: &MatrixExpr) -> Result<Inverse> {
    require_square(m, "inv")?;
    let d = det(m)?;
    if d.is_zero() {
        return Err(Error::SingularMatrix);
    }
    let matrix = solve_linear(m, &MatrixExpr::identity(m.rows()))?;
    let nonzero = if d.is_const() { Vec::new() } else { vec![d] };
    Ok(Inverse { matrix, nonzero })
}

pub fn inv(m: &MatrixExpr) -> Result<MatrixExpr> {
    Ok(inverse(m)?.matrix)
}

fn nullspace_in(ring: &Ring, mut g: Grid, cols: usize) -> Result<Vec<MatrixExpr>> {
    let pivots = rref(ring, &mut g, cols)?;
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![RatFunc::zero(); cols];
        v[free] = RatFunc::one();
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = g[r][free].neg();
        }
        let entries = v.iter().map(|x| ring.to_expr(x)).collect();
        basis.push(MatrixExpr::column(entries));
    }
    Ok(basis)
}

/// Basis of the null space, one vector per free column with that
/// component set to 1.
pub fn nullspace(m: &MatrixExpr) -> Result<Vec<MatrixExpr>> {
    let mut ring = Ring::new();
    let g = to_grid(&mut ring, m)?;
    nullspace_in(&ring, g, m.cols())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Eigen {
    pub value: Expr,
    pub multiplicity: u32,
    pub vectors: Vec<MatrixExpr>,
}

fn fresh_symbol(m: &MatrixExpr, stem: &str) -> Symbol {
    let mut name = stem.to_string();
    while m.entries().iter().any(|e| e.free_symbols().iter().any(|s| s.name() == name)) {
        name.push('_');
    }
    Symbol::plain(&name).expect("valid name")
}

/// Eigenvalues as roots of the characteristic polynomial, each with a
/// null-space basis of `A - value*I`.
pub fn eigen(m: &MatrixExpr) -> Result<Vec<Eigen>> {
    require_square(m, "eigen")?;
    let n = m.rows();
    let lam = fresh_symbol(m, "lambda");
    let shifted = MatrixExpr::identity(n).scale(&Expr::symbol(&lam)).sub(m)?;
    let chi = UnivariatePoly::from_expr(&det(&shifted)?, &lam)?;
    let mut out = Vec::new();
    for (value, multiplicity) in poly_roots(&chi)? {
        let b = m.sub(&MatrixExpr::identity(n).scale(&value))?;
        out.push(Eigen { vectors: nullspace(&b)?, value, multiplicity });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Qr {
    pub q: MatrixExpr,
    pub r: MatrixExpr,
}

fn dot(a: &[Expr], b: &[Expr]) -> Expr {
    Expr::add(a.iter().zip(b).map(|(x, y)| x * y).collect())
}

/// Gram-Schmidt orthonormalization of the columns.
pub fn qr(m: &MatrixExpr) -> Result<Qr> {
    let (rows, cols) = m.shape();
    let t = m.transpose();
    let mut ortho: Vec<Vec<Expr>> = Vec::new();
    let mut squares: Vec<Expr> = Vec::new();
    let mut norms: Vec<Expr> = Vec::new();
    let mut r = MatrixExpr::zeros(cols, cols);
    let mut q_cols = Vec::new();
    for j in 0..cols {
        let a = t.row(j);
        let mut v = a.to_vec();
        for i in 0..j {
            let p = dot(&ortho[i], a);
            r.set(i, j, cancel(&(&p * &norms[i].recip()?))?);
            let coef = cancel(&(&p * &squares[i].recip()?))?;
            for k in 0..rows {
                v[k] = cancel(&(&v[k] - &(&coef * &ortho[i][k])))?;
            }
        }
        let sq = cancel(&dot(&v, &v))?;
        if sq.is_zero() {
            return Err(Error::StructurallyDependentColumns);
        }
        let nonzero: Vec<&Expr> = v.iter().filter(|x| !x.is_zero()).collect();
        let norm = if nonzero.len() == 1 { nonzero[0].abs()? } else { sq.sqrt()? };
        let inv = norm.recip()?;
        q_cols.push(v.iter().map(|x| cancel(&(x * &inv))).collect::<Result<Vec<_>>>()?);
        r.set(j, j, norm.clone());
        ortho.push(v);
        squares.push(sq);
        norms.push(norm);
    }
    Ok(Qr { q: MatrixExpr::from_columns(q_cols).unwrap_or_else(|_| MatrixExpr::zeros(rows, 0)), r })
}

/// Rewrites `abs(x)^(2k)` as `x^(2k)`.
pub fn abs_squares(e: &Expr) -> Result<Expr> {
    let inner = e.map_children(&mut |c| abs_squares(c))?;
    if let Node::Pow(b, x) = inner.node() {
        if let (Node::Func(Func::Abs, arg), Some(k)) = (b.node(), x.as_integer()) {
            if (k % 2u8) == 0u8.into() {
                return Expr::pow(arg, x);
            }
        }
    }
    Ok(inner)
}

/// `D - C A^-1 B` for the partition of `m` after the leading `k` rows and
/// columns.
pub fn schur_complement(m: &MatrixExpr, k: usize) -> Result<MatrixExpr> {
    require_square(m, "schur_complement")?;
    let n = m.rows();
    if k > n {
        return Err(Error::Shape(format!("block size {k} exceeds dimension {n}")));
    }
    let head: Vec<usize> = (0..k).collect();
    let tail: Vec<usize> = (k..n).collect();
    let d = m.submatrix(&tail, &tail)?;
    if k == 0 {
        return d.cancel();
    }
    let a = m.submatrix(&head, &head)?;
    let b = m.submatrix(&head, &tail)?;
    let c = m.submatrix(&tail, &head)?;
    d.sub(&c.matmul(&solve_linear(&a, &b)?)?)?.cancel()
}

/// Writes `m` as `factor * rest` where `factor` is one over the least
/// common denominator of the entries.
pub fn extract_common_denominator(m: &MatrixExpr) -> Result<(Expr, MatrixExpr)> {
    let mut ring = Ring::new();
    let g = to_grid(&mut ring, m)?;
    let mut lcm = Poly::one();
    for x in g.iter().flatten() {
        let h = gcd(&lcm, &x.den);
        lcm = lcm.mul(&x.den.div_exact(&h).expect("gcd divides"));
    }
    let scale = RatFunc::from_poly(lcm.clone());
    let rest: Grid = g.iter().map(|r| r.iter().map(|x| ring.mul(x, &scale)).collect()).collect();
    let factor = ring.to_expr(&RatFunc::new(Poly::one(), lcm)?);
    Ok((factor, from_grid(&ring, &rest, m.cols())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;

    fn m(rows: &[&[&str]]) -> MatrixExpr {
        MatrixExpr::from_rows(rows.iter().map(|r| r.iter().map(|s| parse(s).unwrap()).collect()).collect()).unwrap()
    }

    fn abcd() -> MatrixExpr {
        m(&[&["a", "c"], &["b", "d"]])
    }

    #[test]
    fn symbolic_determinant_and_inverse() {
        assert_eq!(det(&abcd()).unwrap().to_string(), "a*d - b*c");
        let i = inverse(&abcd()).unwrap();
        assert_eq!(
            i.matrix.to_string(),
            "[[d/(a*d - b*c), -c/(a*d - b*c)], [-b/(a*d - b*c), a/(a*d - b*c)]]"
        );
        assert_eq!(i.nonzero[0].to_string(), "a*d - b*c");
        let (f, rest) = extract_common_denominator(&i.matrix).unwrap();
        assert_eq!(f.to_string(), "1/(a*d - b*c)");
        assert_eq!(rest.to_string(), "[[d, -c], [-b, a]]");
        assert_eq!(abcd().matmul(&i.matrix).unwrap().cancel().unwrap(), MatrixExpr::identity(2));
    }

    #[test]
    fn anova_inverse() {
        let xtx = m(&[&["6", "2", "2"], &["2", "2", "0"], &["2", "0", "2"]]);
        assert_eq!(
            inv(&xtx).unwrap(),
            m(&[&["1/2", "-1/2", "-1/2"], &["-1/2", "1", "1/2"], &["-1/2", "1/2", "1"]])
        );
        assert!(inverse(&xtx).unwrap().nonzero.is_empty());
    }

    #[test]
    fn singular() {
        assert_eq!(inv(&m(&[&["1", "2"], &["2", "4"]])), Err(Error::SingularMatrix));
        assert_eq!(inv(&m(&[&["a", "b"], &["a", "b"]])), Err(Error::SingularMatrix));
        assert_eq!(det(&m(&[&["0", "1"], &["1", "0"]])).unwrap(), Expr::int(-1));
    }

    #[test]
    fn eigenpairs() {
        let e = eigen(&abcd()).unwrap();
        assert_eq!(e.len(), 2);
        assert_eq!(e[0].value.to_string(), "a/2 + d/2 - sqrt(a^2 - 2*a*d + 4*b*c + d^2)/2");
        assert_eq!(
            e[0].vectors[0].to_string(),
            "[[-2*c/(a - d + sqrt(a^2 - 2*a*d + 4*b*c + d^2))], [1]]"
        );
        let d = eigen(&MatrixExpr::diag(&[parse("e1").unwrap(), parse("e2").unwrap()])).unwrap();
        let vals: Vec<String> = d.iter().map(|x| x.value.to_string()).collect();
        assert_eq!(vals, ["e1", "e2"]);
        assert_eq!(d[0].vectors[0].to_string(), "[[1], [0]]");
        let r = eigen(&MatrixExpr::identity(2)).unwrap();
        assert_eq!(r[0].multiplicity, 2);
        assert_eq!(r[0].vectors.len(), 2);
    }

    #[test]
    fn qr_of_scaled_basis() {
        let f = qr(&m(&[&["b", "0"], &["0", "1"]])).unwrap();
        assert_eq!(f.q.to_string(), "[[b/abs(b), 0], [0, 1]]");
        assert_eq!(f.r.to_string(), "[[abs(b), 0], [0, 1]]");
        let qtq = f.q.transpose().matmul(&f.q).unwrap().map(&mut |e| cancel(&abs_squares(e)?)).unwrap();
        assert_eq!(qtq, MatrixExpr::identity(2));
        let id = qr(&MatrixExpr::identity(2)).unwrap();
        assert_eq!((id.q, id.r), (MatrixExpr::identity(2), MatrixExpr::identity(2)));
        assert_eq!(qr(&m(&[&["1", "2"], &["1", "2"]])), Err(Error::StructurallyDependentColumns));
    }

    #[test]
    fn schur() {
        let l = m(&[&["1", "0", "0", "0"], &["-a", "1", "0", "0"], &["-a", "0", "1", "0"], &["-a", "0", "0", "1"]]);
        let vue = MatrixExpr::diag(&[parse("1").unwrap(), parse("v2").unwrap(), parse("v2").unwrap(), parse("v2").unwrap()]);
        let k = l.transpose().matmul(&inv(&vue).unwrap()).unwrap().matmul(&l).unwrap().expand().unwrap();
        assert_eq!(k.get(0, 0).to_string(), "3*a^2/v2 + 1");
        let v = inv(&l).unwrap().matmul(&vue).unwrap().matmul(&inv(&l).unwrap().transpose()).unwrap().expand().unwrap();
        assert_eq!(v.row(1).iter().map(|e| e.to_string()).collect::<Vec<_>>(), ["a", "a^2 + v2", "a^2", "a^2"]);
        let s = schur_complement(&k, 1).unwrap();
        let (f, rest) = extract_common_denominator(&s).unwrap();
        assert_eq!(f.to_string(), "1/(v2*(3*a^2 + v2))");
        assert_eq!(
            rest.to_string(),
            "[[2*a^2 + v2, -a^2, -a^2], [-a^2, 2*a^2 + v2, -a^2], [-a^2, -a^2, 2*a^2 + v2]]"
        );
        assert_eq!(schur_complement(&v, 4).unwrap().shape(), (0, 0));
    }
}
