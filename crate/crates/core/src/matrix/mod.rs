//! Dense matrices of expressions.

mod linalg;

use std::fmt;

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::polys::{cancel, expand};
use crate::printer::{matrix_latex, to_infix};

pub use linalg::{
    abs_squares, det, eigen, extract_common_denominator, inv, inverse, nullspace, qr, schur_complement, solve_linear,
    Eigen, Inverse, Qr,
};

/// A row-major matrix of canonical expressions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MatrixExpr {
    rows: usize,
    cols: usize,
    entries: Vec<Expr>,
}

impl MatrixExpr {
    pub fn new(rows: usize, cols: usize, entries: Vec<Expr>) -> Result<MatrixExpr> {
        if entries.len() != rows * cols {
            return Err(Error::Shape(format!("{} entries do not fill a {rows}x{cols} matrix", entries.len())));
        }
        Ok(MatrixExpr { rows, cols, entries })
    }

    pub fn from_rows(rows: Vec<Vec<Expr>>) -> Result<MatrixExpr> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Shape("rows have different lengths".into()));
        }
        MatrixExpr::new(r, c, rows.into_iter().flatten().collect())
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(columns: Vec<Vec<Expr>>) -> Result<MatrixExpr> {
        Ok(MatrixExpr::from_rows(columns)?.transpose())
    }

    pub fn zeros(rows: usize, cols: usize) -> MatrixExpr {
        MatrixExpr { rows, cols, entries: vec![Expr::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> MatrixExpr {
        MatrixExpr::diag(&vec![Expr::one(); n])
    }

    pub fn diag(values: &[Expr]) -> MatrixExpr {
        let n = values.len();
        let mut m = MatrixExpr::zeros(n, n);
        for (i, v) in values.iter().enumerate() {
            m.entries[i * n + i] = v.clone();
        }
        m
    }

    pub fn column(values: Vec<Expr>) -> MatrixExpr {
        MatrixExpr { rows: values.len(), cols: 1, entries: values }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Expr] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &Expr {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Expr) {
        self.entries[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[Expr] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Expr>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn map(&self, f: &mut dyn FnMut(&Expr) -> Result<Expr>) -> Result<MatrixExpr> {
        let entries = self.entries.iter().map(|e| f(e)).collect::<Result<_>>()?;
        Ok(MatrixExpr { rows: self.rows, cols: self.cols, entries })
    }

    pub fn transpose(&self) -> MatrixExpr {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j).clone());
            }
        }
        MatrixExpr { rows: self.cols, cols: self.rows, entries }
    }

    fn same_shape(&self, o: &MatrixExpr, what: &str) -> Result<()> {
        if self.shape() != o.shape() {
            return Err(Error::Shape(format!(
                "{what} of {}x{} and {}x{} matrices",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, o: &MatrixExpr) -> Result<MatrixExpr> {
        self.same_shape(o, "sum")?;
        let entries = self.entries.iter().zip(&o.entries).map(|(a, b)| a + b).collect();
        Ok(MatrixExpr { rows: self.rows, cols: self.cols, entries })
    }

    pub fn sub(&self, o: &MatrixExpr) -> Result<MatrixExpr> {
        self.same_shape(o, "difference")?;
        let entries = self.entries.iter().zip(&o.entries).map(|(a, b)| a - b).collect();
        Ok(MatrixExpr { rows: self.rows, cols: self.cols, entries })
    }

    /// Entrywise product.
    pub fn hadamard(&self, o: &MatrixExpr) -> Result<MatrixExpr> {
        self.same_shape(o, "entrywise product")?;
        let entries = self.entries.iter().zip(&o.entries).map(|(a, b)| a * b).collect();
        Ok(MatrixExpr { rows: self.rows, cols: self.cols, entries })
    }

    pub fn scale(&self, c: &Expr) -> MatrixExpr {
        MatrixExpr { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(|e| c * e).collect() }
    }

    pub fn matmul(&self, o: &MatrixExpr) -> Result<MatrixExpr> {
        if self.cols != o.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        let mut entries = Vec::with_capacity(self.rows * o.cols);
        for i in 0..self.rows {
            for j in 0..o.cols {
                entries.push(Expr::add((0..self.cols).map(|k| self.get(i, k) * o.get(k, j)).collect()));
            }
        }
        Ok(MatrixExpr { rows: self.rows, cols: o.cols, entries })
    }

    /// Rows and columns selected by index, in the given order.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Result<MatrixExpr> {
        if let Some(i) = rows.iter().find(|i| **i >= self.rows) {
            return Err(Error::Shape(format!("row index {i} out of range")));
        }
        if let Some(j) = cols.iter().find(|j| **j >= self.cols) {
            return Err(Error::Shape(format!("column index {j} out of range")));
        }
        let mut entries = Vec::with_capacity(rows.len() * cols.len());
        for &i in rows {
            for &j in cols {
                entries.push(self.get(i, j).clone());
            }
        }
        Ok(MatrixExpr { rows: rows.len(), cols: cols.len(), entries })
    }

    /// Drops the listed rows and columns.
    pub fn without(&self, rows: &[usize], cols: &[usize]) -> Result<MatrixExpr> {
        let keep_r: Vec<usize> = (0..self.rows).filter(|i| !rows.contains(i)).collect();
        let keep_c: Vec<usize> = (0..self.cols).filter(|j| !cols.contains(j)).collect();
        self.submatrix(&keep_r, &keep_c)
    }

    pub fn expand(&self) -> Result<MatrixExpr> {
        self.map(&mut |e| expand(e))
    }

    /// Puts every entry over a common denominator in lowest terms.
    pub fn cancel(&self) -> Result<MatrixExpr> {
        self.map(&mut |e| cancel(e))
    }

    pub fn to_latex(&self) -> String {
        matrix_latex(&self.to_rows())
    }
}

impl fmt::Display for MatrixExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| format!("[{}]", self.row(i).iter().map(to_infix).collect::<Vec<_>>().join(", ")))
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;

    fn m(rows: &[&[&str]]) -> MatrixExpr {
        MatrixExpr::from_rows(rows.iter().map(|r| r.iter().map(|s| parse(s).unwrap()).collect()).collect()).unwrap()
    }

    #[test]
    fn construction() {
        let a = MatrixExpr::from_columns(vec![
            vec![parse("a").unwrap(), parse("b").unwrap()],
            vec![parse("c").unwrap(), parse("d").unwrap()],
        ])
        .unwrap();
        assert_eq!(a.to_string(), "[[a, c], [b, d]]");
        let d = MatrixExpr::diag(&[parse("e1").unwrap(), parse("e2").unwrap()]);
        assert_eq!(d.to_string(), "[[e1, 0], [0, e2]]");
        assert_eq!(a.matmul(&d).unwrap().to_string(), "[[a*e1, c*e2], [b*e1, d*e2]]");
        assert_eq!(a.matmul(&d).unwrap().to_latex(), r"\left[\begin{matrix}a e_{1} & c e_{2}\\b e_{1} & d e_{2}\end{matrix}\right]");
        assert!(MatrixExpr::new(2, 2, vec![Expr::one()]).is_err());
    }

    #[test]
    fn anova_gram_matrix() {
        let x = m(&[&["1", "0", "0"], &["1", "0", "0"], &["1", "1", "0"], &["1", "1", "0"], &["1", "0", "1"], &["1", "0", "1"]]);
        let xtx = x.transpose().matmul(&x).unwrap();
        assert_eq!(xtx, m(&[&["6", "2", "2"], &["2", "2", "0"], &["2", "0", "2"]]));
    }

    #[test]
    fn slicing() {
        let a = m(&[&["1", "2", "3"], &["4", "5", "6"], &["7", "8", "9"]]);
        assert_eq!(a.without(&[0], &[0]).unwrap(), m(&[&["5", "6"], &["8", "9"]]));
        assert_eq!(a.submatrix(&[2], &[0, 2]).unwrap(), m(&[&["7", "9"]]));
        assert!(a.submatrix(&[3], &[0]).is_err());
    }
}
