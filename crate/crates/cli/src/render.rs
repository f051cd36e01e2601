//! Text rendering of session values.

use symcas::matrix::{Eigen, MatrixExpr, Qr};
use symcas::printer::symbol_latex;
use symcas::solver::SolutionSet;
use symcas::{to_infix, to_latex, Expr};

use crate::session::{OutputMode, Value};

/// Left-aligned columns inside brackets, one row per line.
pub fn grid(cells: &[Vec<String>]) -> String {
    if cells.is_empty() {
        return "[]".into();
    }
    let cols = cells[0].len();
    let widths: Vec<usize> =
        (0..cols).map(|j| cells.iter().map(|r| r[j].chars().count()).max().unwrap_or(0)).collect();
    cells
        .iter()
        .map(|r| {
            let padded: Vec<String> = r.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
            format!("[{}]", padded.join("  ").trim_end())
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn expr(e: &Expr, mode: OutputMode) -> String {
    match mode {
        OutputMode::Infix => to_infix(e),
        OutputMode::Latex => to_latex(e),
    }
}

pub fn matrix(m: &MatrixExpr, mode: OutputMode) -> String {
    match mode {
        OutputMode::Infix => {
            grid(&m.to_rows().iter().map(|r| r.iter().map(to_infix).collect()).collect::<Vec<_>>())
        }
        OutputMode::Latex => m.to_latex(),
    }
}

fn solutions(s: &SolutionSet, mode: OutputMode) -> String {
    match mode {
        OutputMode::Infix => s.to_string(),
        OutputMode::Latex => {
            if s.is_empty() {
                return "No solutions".into();
            }
            let mut lines = Vec::new();
            for i in 0..s.len() {
                lines.push(format!("Solution {}:", i + 1));
                for (u, v) in s.unknowns().iter().zip(s.values(i)) {
                    lines.push(format!("  {} = {}", symbol_latex(u.name()), to_latex(v)));
                }
            }
            lines.join("\n")
        }
    }
}

fn vector(m: &MatrixExpr, mode: OutputMode) -> String {
    match mode {
        OutputMode::Infix => format!("[{}]", m.entries().iter().map(to_infix).collect::<Vec<_>>().join(", ")),
        OutputMode::Latex => m.to_latex(),
    }
}

fn eigen(es: &[Eigen], mode: OutputMode) -> String {
    let mut lines = Vec::new();
    for (i, e) in es.iter().enumerate() {
        lines.push(format!("Eigenvalue {}: {} (multiplicity {})", i + 1, expr(&e.value, mode), e.multiplicity));
        for v in &e.vectors {
            lines.push(format!("  vector: {}", vector(v, mode)));
        }
    }
    lines.join("\n")
}

fn qr(f: &Qr, mode: OutputMode) -> String {
    format!("Q:\n{}\nR:\n{}", matrix(&f.q, mode), matrix(&f.r, mode))
}

pub fn value(v: &Value, mode: OutputMode) -> String {
    match v {
        Value::Expr(e) => expr(e, mode),
        Value::Matrix(m) => matrix(m, mode),
        Value::Scaled(c, m) => match mode {
            OutputMode::Infix => format!("{} *\n{}", to_infix(c), matrix(m, mode)),
            OutputMode::Latex => format!("{} {}", to_latex(c), m.to_latex()),
        },
        Value::List(items) => {
            if items.iter().all(|x| matches!(x, Value::Expr(_))) {
                format!("[{}]", items.iter().map(|x| value(x, mode)).collect::<Vec<_>>().join(", "))
            } else {
                items.iter().map(|x| value(x, mode)).collect::<Vec<_>>().join("\n")
            }
        }
        Value::Solutions(s) => solutions(s, mode),
        Value::Eigen(es) => eigen(es, mode),
        Value::Qr(f) => qr(f, mode),
        Value::Text(t) => t.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn aligned_grid() {
        let cells = vec![vec!["1".to_string(), "-1/2".to_string()], vec!["-1/2".to_string(), "1".to_string()]];
        assert_eq!(grid(&cells), "[1     -1/2]\n[-1/2  1]");
        assert_eq!(grid(&[]), "[]");
    }
}
