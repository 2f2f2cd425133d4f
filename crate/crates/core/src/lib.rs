// `!(x > 0.0)` style checks are used on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod descent;
pub mod dfl;
pub mod formula;
pub mod ilr;
pub mod ops;
pub mod refine;
