//! Infix and LaTeX printers.

mod infix;
mod latex;
mod terms;

pub use infix::to_infix;
pub use latex::{matrix_latex, symbol_latex, to_latex};
pub(crate) use terms::ordered_terms;
