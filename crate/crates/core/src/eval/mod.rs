//! Numeric evaluation.

mod bigfloat;
mod evalf;
mod numeric;

pub use evalf::{evalf, evalf_f64};
pub use numeric::{as_numeric_fn, NumericFn};
