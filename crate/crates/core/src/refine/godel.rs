use crate::ops::TNorm;

use super::{
    refine_tconorm_family, refine_tnorm_family, Family, RefineError, RefineInput, RefinementResult,
    Step,
};

struct Godel;

impl Family for Godel {
    fn tnorm(&self) -> TNorm {
        TNorm::Godel
    }

    /// Every entry below the target is lifted to it.
    fn tnorm_increase(&self, input: &RefineInput) -> Step {
        Step::exact(input.t.iter().map(|&v| v.max(input.target)).collect())
    }

    /// Only the largest entry moves.
    fn tconorm_increase(&self, input: &RefineInput) -> Step {
        let mut out = input.t.clone();
        out[input.tie.argmax(&input.t)] = input.target;
        Step::exact(out)
    }
}

pub fn refine_godel_tnorm(input: &RefineInput) -> Result<RefinementResult, RefineError> {
    refine_tnorm_family(&Godel, input)
}

pub fn refine_godel_tconorm(input: &RefineInput) -> Result<RefinementResult, RefineError> {
    refine_tconorm_family(&Godel, input)
}

/// Refines the Gödel residuum `I(a, c) = 1 if a <= c else c`. Values below 1
/// need `a > c`, realized as `a >= target + eps`.
pub fn refine_godel_implication(a: f64, c: f64, target: f64, eps: f64) -> (f64, f64) {
    let current = if a <= c { 1.0 } else { c };
    if current == target {
        return (a, c);
    }
    if target < 1.0 {
        ((target + eps).min(1.0).max(a), target)
    } else {
        (a, a.max(c))
    }
}
