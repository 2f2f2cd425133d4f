use crate::ops::TNorm;

use super::{
    refine_tconorm_family, refine_tnorm_family, Family, RefineError, RefineInput, RefinementResult,
    Step,
};

struct Lukasiewicz;

fn ascending(t: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..t.len()).collect();
    idx.sort_by(|&i, &j| t[i].total_cmp(&t[j]));
    idx
}

impl Family for Lukasiewicz {
    fn tnorm(&self) -> TNorm {
        TNorm::Lukasiewicz
    }

    /// The `K` smallest entries rise by a common `delta`, the others saturate
    /// at 1. `K` is the largest count for which no lifted entry passes 1.
    fn tnorm_increase(&self, input: &RefineInput) -> Step {
        let (n, m) = (input.t.len(), input.consts.len() as f64);
        let sum_c: f64 = input.consts.iter().sum();
        let order = ascending(&input.t);
        let mut prefix: Vec<f64> = Vec::with_capacity(n + 1);
        prefix.push(0.0);
        for &i in &order {
            prefix.push(prefix.last().unwrap() + input.t[i]);
        }
        for k in (1..=n).rev() {
            let delta = (input.target + m + k as f64 - 1.0 - sum_c - prefix[k]) / k as f64;
            if delta <= 1.0 - input.t[order[k - 1]] {
                let mut out = vec![1.0; n];
                for &i in &order[..k] {
                    out[i] = input.t[i] + delta;
                }
                return Step::exact(out);
            }
        }
        Step::exact(vec![1.0; n])
    }

    /// Uniform shift `(target - sum) / n`. Entries cannot pass 1 because the
    /// new sum equals a target of at most 1; the redistribution below only
    /// guards against rounding.
    fn tconorm_increase(&self, input: &RefineInput) -> Step {
        let n = input.t.len();
        let sum: f64 = input.t.iter().chain(&input.consts).sum();
        let mut out: Vec<f64> = input
            .t
            .iter()
            .map(|v| v + (input.target - sum) / n as f64)
            .collect();
        let mut flagged = false;
        let excess: f64 = out.iter().map(|v| (v - 1.0).max(0.0)).sum();
        if excess > 0.0 {
            flagged = true;
            let open: Vec<usize> = (0..n).filter(|&i| out[i] < 1.0).collect();
            for v in &mut out {
                *v = v.min(1.0);
            }
            if !open.is_empty() {
                let share = excess / open.len() as f64;
                for i in open {
                    out[i] = (out[i] + share).min(1.0);
                }
            }
        }
        Step {
            refined: out,
            flagged,
        }
    }
}

pub fn refine_luk_tnorm(input: &RefineInput) -> Result<RefinementResult, RefineError> {
    refine_tnorm_family(&Lukasiewicz, input)
}

pub fn refine_luk_tconorm(input: &RefineInput) -> Result<RefinementResult, RefineError> {
    refine_tconorm_family(&Lukasiewicz, input)
}
