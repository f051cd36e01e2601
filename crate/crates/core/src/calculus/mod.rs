//! Differentiation, integration, series and limits.

mod diff;
mod integrate;
mod limit;
mod series;
mod taylor;

pub use diff::{der, der2, diff};
pub use integrate::integrate;
pub use limit::{doit, limit, LHOPITAL_ROUNDS, SERIES_DEPTH};
pub use taylor::{drop_remainder, remove_order, taylor, SeriesExpansion};
