//! A small symbolic computer algebra kernel.

pub mod assume;
pub mod calculus;
pub mod error;
pub mod eval;
pub mod matrix;
pub mod expr;
pub mod parser;
pub mod polys;
pub mod printer;
pub mod solver;
pub mod symbol;

pub use assume::{ask, Property, Tri};
pub use eval::{as_numeric_fn, evalf, NumericFn};
pub use error::{Error, Result, SourceSpan};
pub use expr::{Bindings, Constant, Direction, Expr, Func, Node, RawExpr, Rational};
pub use parser::{parse, parse_with};
pub use printer::{to_infix, to_latex};
pub use symbol::{Assumptions, Symbol, SymbolTable};
