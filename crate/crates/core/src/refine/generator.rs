use crate::ops::{Implication, TNorm};

use super::{
    refine_tconorm_family, refine_tnorm_family, unchanged, Connective, Family, Norm, RefineError,
    RefineInput, RefinementResult, Step,
};

/// Tolerance of the interval test that selects how many entries to lift.
const SCAN_TOL: f64 = 1e-12;

/// Additive generator `g` of a continuous Archimedean t-norm:
/// `T(x) = g⁻¹(min(g(0), sum g(x_i)))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AdditiveGenerator {
    /// `-ln x`; strict, `g(0+) = ∞`.
    Product,
    /// `1 - x`.
    Lukasiewicz,
    /// `(1 - x)^p`.
    Yager(f64),
}

impl AdditiveGenerator {
    pub fn g(self, x: f64) -> f64 {
        match self {
            AdditiveGenerator::Product => -x.max(1e-300).ln(),
            AdditiveGenerator::Lukasiewicz => 1.0 - x,
            AdditiveGenerator::Yager(p) => (1.0 - x).max(0.0).powf(p),
        }
    }

    /// Pseudo-inverse: values past `g(0)` map to 0.
    pub fn inverse(self, y: f64) -> f64 {
        let y = y.max(0.0);
        match self {
            AdditiveGenerator::Product => (-y).exp(),
            AdditiveGenerator::Lukasiewicz => (1.0 - y).max(0.0),
            AdditiveGenerator::Yager(p) => (1.0 - y.powf(1.0 / p)).max(0.0),
        }
    }

    pub fn at_zero(self) -> f64 {
        match self {
            AdditiveGenerator::Product => f64::INFINITY,
            _ => 1.0,
        }
    }

    pub fn is_strict(self) -> bool {
        self.at_zero().is_infinite()
    }

    pub fn tnorm(self) -> TNorm {
        match self {
            AdditiveGenerator::Product => TNorm::Product,
            AdditiveGenerator::Lukasiewicz => TNorm::Lukasiewicz,
            AdditiveGenerator::Yager(p) => TNorm::Yager(p),
        }
    }

    fn check(self) -> Result<(), RefineError> {
        match self {
            AdditiveGenerator::Yager(p) if !(p.is_finite() && p >= 1.0) => Err(
                RefineError::InvalidInput(format!("Yager exponent {p} must be >= 1")),
            ),
            _ => Ok(()),
        }
    }
}

impl Family for AdditiveGenerator {
    fn tnorm(&self) -> TNorm {
        AdditiveGenerator::tnorm(*self)
    }

    /// Sort descending and lift the `n - K` smallest entries to a common
    /// level `λ_K`, choosing `K` so that `λ_K` sits between the `K`-th and
    /// `(K+1)`-th largest entries.
    fn tnorm_increase(&self, input: &RefineInput) -> Step {
        let g = *self;
        let n = input.t.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| input.t[j].total_cmp(&input.t[i]));
        let sorted: Vec<f64> = order.iter().map(|&i| input.t[i]).collect();
        let budget = g.g(input.target) - input.consts.iter().map(|&c| g.g(c)).sum::<f64>();
        let mut kept = 0.0;
        let mut best: Option<(f64, usize, f64)> = None;
        for k in 0..n {
            let lambda = g.inverse((budget - kept) / (n - k) as f64).min(1.0);
            let above = if k == 0 {
                0.0
            } else {
                (lambda - sorted[k - 1]).max(0.0)
            };
            let below = (sorted[k] - lambda).max(0.0);
            let violation = above + below;
            if violation <= SCAN_TOL {
                return Step::exact(lift(&input.t, &order[k..], lambda));
            }
            if best.is_none_or(|(v, _, _)| violation < v) {
                best = Some((violation, k, lambda));
            }
            kept += g.g(sorted[k]);
        }
        let (_, k, lambda) = best.expect("n >= 1");
        Step {
            refined: lift(&input.t, &order[k..], lambda),
            flagged: true,
        }
    }

    /// Only the largest entry moves, to the level that makes the dual
    /// t-conorm equal the target.
    fn tconorm_increase(&self, input: &RefineInput) -> Step {
        let g = *self;
        let j = input.tie.argmax(&input.t);
        let mut out = input.t.clone();
        out[j] = if input.target == 1.0 && g.is_strict() {
            1.0
        } else {
            let rest: f64 = input
                .t
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != j)
                .map(|(_, &v)| v)
                .chain(input.consts.iter().copied())
                .map(|v| g.g(1.0 - v))
                .sum();
            let top = if input.target == 1.0 {
                g.at_zero()
            } else {
                g.g(1.0 - input.target)
            };
            1.0 - g.inverse(top - rest)
        };
        Step::exact(out)
    }
}

fn lift(t: &[f64], idx: &[usize], level: f64) -> Vec<f64> {
    let mut out = t.to_vec();
    for &i in idx {
        out[i] = level;
    }
    out
}

/// Refinement of the t-norm generated by `g` under the L1 norm.
pub fn refine_generator_tnorm(
    g: &AdditiveGenerator,
    input: &RefineInput,
) -> Result<RefinementResult, RefineError> {
    g.check()?;
    if input.norm != Norm::L1 {
        return Err(RefineError::Unsupported(
            "generator refinement is only closed-form under L1".into(),
        ));
    }
    refine_tnorm_family(g, input)
}

/// Refinement of the t-conorm dual to the t-norm generated by `g`, under L1.
pub fn refine_generator_tconorm(
    g: &AdditiveGenerator,
    input: &RefineInput,
) -> Result<RefinementResult, RefineError> {
    g.check()?;
    if input.norm != Norm::L1 {
        return Err(RefineError::Unsupported(
            "generator refinement is only closed-form under L1".into(),
        ));
    }
    refine_tconorm_family(g, input)
}

/// Residuum `I(a, c) = min(1, g⁻¹(g(c) - g(a)))` of a strict t-norm,
/// refined under L1. Returns the refined `[a, c]`.
pub fn refine_generator_residuum(
    g: &AdditiveGenerator,
    a: f64,
    c: f64,
    target: f64,
) -> Result<RefinementResult, RefineError> {
    if !g.is_strict() {
        return Err(RefineError::Unsupported(
            "residuum refinement needs a strict generator".into(),
        ));
    }
    let input = RefineInput::new(vec![a, c], target);
    input.validate()?;
    let conn = Connective::Implication(residuum(*g));
    if conn.evaluate(&input.t, &[]) == target {
        return Ok(unchanged(&conn, &input, false));
    }
    // Moving c alone is optimal whenever a > 0; the other candidates cover
    // a = 0, where every c gives 1.
    let mut candidates = vec![a, 1.0];
    if target > 0.0 && g.g(c) >= g.g(target) {
        candidates.push(g.inverse(g.g(c) - g.g(target)));
    }
    let mut best: Option<RefinementResult> = None;
    for a2 in candidates {
        let c2 = if target == 1.0 {
            a2.max(c)
        } else if target == 0.0 {
            0.0
        } else {
            g.inverse(g.g(target) + g.g(a2))
        };
        let achieved = conn.evaluate(&[a2, c2], &[]);
        if (achieved - target).abs() > 1e-9 {
            continue;
        }
        let distance = Norm::L1.distance(&[a2, c2], &input.t);
        if best.as_ref().is_none_or(|b| distance < b.distance) {
            best = Some(RefinementResult {
                refined: vec![a2, c2],
                achieved,
                distance,
                clamped: false,
                flagged: false,
            });
        }
    }
    best.ok_or(RefineError::NoFeasiblePoint(target))
}

fn residuum(g: AdditiveGenerator) -> Implication {
    match g {
        AdditiveGenerator::Product => Implication::Goguen,
        AdditiveGenerator::Lukasiewicz => Implication::Lukasiewicz,
        AdditiveGenerator::Yager(p) => Implication::YagerR(p),
    }
}
