//! Scalar fuzzy operators and their partial derivatives.
//!
//! Every operator kind exposes an `apply` method on raw `f64` values for the
//! hot paths (evaluation, refinement, descent) and a `grad` method returning
//! [`Partials`]. The free functions in this module wrap them with
//! [`UnitValue`] checking.

mod aggregate;
mod binary;
mod fraction;
mod implication;

use thiserror::Error;

pub use aggregate::{AggregateGrad, Aggregator, EPS_LOG};
pub use binary::{TConorm, TNorm};
pub use fraction::nonvanishing_fraction_mc;
pub use implication::{Implication, Sigmoidal, EPS_DIV};

/// Values outside `[0, 1]` by at most this much are clamped instead of rejected.
pub const UNIT_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OpsError {
    #[error("value {0} is outside the unit interval")]
    OutOfRange(f64),
    #[error("invalid parameter p = {p} for {what}")]
    InvalidParameter { what: &'static str, p: f64 },
    #[error("invalid sigmoid parameters s = {s}, b0 = {b0}")]
    InvalidSigmoid { s: f64, b0: f64 },
    #[error("sampling needs n >= 2 and samples >= 1 (got n = {n}, samples = {samples})")]
    InvalidSampling { n: usize, samples: usize },
}

/// A truth value in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct UnitValue(f64);

impl UnitValue {
    pub const ZERO: UnitValue = UnitValue(0.0);
    pub const ONE: UnitValue = UnitValue(1.0);

    pub fn new(value: f64) -> Result<Self, OpsError> {
        if !(-UNIT_EPS..=1.0 + UNIT_EPS).contains(&value) {
            return Err(OpsError::OutOfRange(value));
        }
        Ok(UnitValue(value.clamp(0.0, 1.0)))
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl From<UnitValue> for f64 {
    fn from(v: UnitValue) -> f64 {
        v.0
    }
}

impl TryFrom<f64> for UnitValue {
    type Error = OpsError;

    fn try_from(value: f64) -> Result<Self, Self::Error> {
        UnitValue::new(value)
    }
}

/// Partial derivatives of a binary operator with respect to its first and
/// second argument. `flagged` marks evaluation on a kink or singular point,
/// where the returned numbers follow a fixed subgradient convention.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Partials {
    pub first: f64,
    pub second: f64,
    pub flagged: bool,
}

impl Partials {
    pub(crate) fn new(first: f64, second: f64) -> Self {
        Partials {
            first,
            second,
            flagged: false,
        }
    }

    pub(crate) fn flag_if(mut self, cond: bool) -> Self {
        self.flagged |= cond;
        self
    }

    /// Replaces non-finite entries by 0 and flags the result.
    pub(crate) fn sanitized(self) -> Self {
        if self.first.is_finite() && self.second.is_finite() {
            self
        } else {
            Partials {
                first: if self.first.is_finite() {
                    self.first
                } else {
                    0.0
                },
                second: if self.second.is_finite() {
                    self.second
                } else {
                    0.0
                },
                flagged: true,
            }
        }
    }
}

pub fn negate(a: UnitValue) -> UnitValue {
    UnitValue(1.0 - a.0)
}

pub fn tnorm(kind: TNorm, a: UnitValue, b: UnitValue) -> Result<UnitValue, OpsError> {
    kind.validate()?;
    UnitValue::new(kind.apply(a.0, b.0))
}

pub fn tconorm(kind: TConorm, a: UnitValue, b: UnitValue) -> Result<UnitValue, OpsError> {
    kind.validate()?;
    UnitValue::new(kind.apply(a.0, b.0))
}

pub fn implication(kind: &Implication, a: UnitValue, c: UnitValue) -> Result<UnitValue, OpsError> {
    kind.validate()?;
    UnitValue::new(kind.apply(a.0, c.0))
}

/// Aggregates `xs`. The result lies in `[0, 1]` except for
/// [`Aggregator::LogProduct`], whose codomain is `[-inf, 0]`.
pub fn aggregate(kind: Aggregator, xs: &[UnitValue]) -> Result<f64, OpsError> {
    kind.validate()?;
    let raw: Vec<f64> = xs.iter().map(|x| x.0).collect();
    Ok(kind.apply(&raw))
}

pub fn tnorm_grad(kind: TNorm, a: UnitValue, b: UnitValue) -> Partials {
    kind.grad(a.0, b.0)
}

pub fn tconorm_grad(kind: TConorm, a: UnitValue, b: UnitValue) -> Partials {
    kind.grad(a.0, b.0)
}

/// Returns `(dI/da, dI/dc)` packed as [`Partials`].
pub fn implication_grad(kind: &Implication, a: UnitValue, c: UnitValue) -> Partials {
    kind.grad(a.0, c.0)
}

pub fn aggregate_grad(kind: Aggregator, xs: &[UnitValue]) -> AggregateGrad {
    let raw: Vec<f64> = xs.iter().map(|x| x.0).collect();
    kind.grad(&raw)
}
