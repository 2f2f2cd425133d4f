//! Minimal refinement functions: given a connective, the current truth values
//! of its free inputs and a target, find the closest input vector at which
//! the connective takes the target value.
//!
//! Every family supplies two primitives, an increase of the t-norm and an
//! increase of the dual t-conorm. Decreases go through the strong-negation
//! dual: lowering `T` at `t` is raising `S` at `1 - t`.

mod generator;
mod godel;
mod implication;
mod lukasiewicz;
pub mod oracle;

use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::ops::{Implication, TConorm, TNorm};

pub use generator::{
    refine_generator_residuum, refine_generator_tconorm, refine_generator_tnorm, AdditiveGenerator,
};
pub use godel::{refine_godel_implication, refine_godel_tconorm, refine_godel_tnorm};
pub use implication::{refine_implication, refine_monotone_1d, simpl_refine};
pub use lukasiewicz::{refine_luk_tconorm, refine_luk_tnorm};

/// Default `eps` for the strict inequality of the Gödel implication.
pub const DEFAULT_EPS_IMPL: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RefineError {
    #[error("unsupported refinement: {0}")]
    Unsupported(String),
    #[error("no feasible point for target {0}")]
    NoFeasiblePoint(f64),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Norm {
    #[default]
    L1,
    L2,
}

impl Norm {
    pub fn distance(self, a: &[f64], b: &[f64]) -> f64 {
        let d = a.iter().zip(b).map(|(x, y)| (x - y).abs());
        match self {
            Norm::L1 => d.sum(),
            Norm::L2 => d.map(|v| v * v).sum::<f64>().sqrt(),
        }
    }
}

/// How argmin/argmax ties are resolved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieBreak {
    #[default]
    Lowest,
    /// Uniform choice among the tied indices, reproducible from the seed.
    Seeded(u64),
}

impl TieBreak {
    pub(crate) fn pick(self, tied: &[usize]) -> usize {
        match self {
            TieBreak::Lowest => tied[0],
            TieBreak::Seeded(seed) => *tied
                .choose(&mut ChaCha8Rng::seed_from_u64(seed))
                .expect("non-empty"),
        }
    }

    pub(crate) fn argmax(self, t: &[f64]) -> usize {
        let m = t.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let tied: Vec<usize> = (0..t.len()).filter(|&i| t[i] == m).collect();
        self.pick(&tied)
    }
}

/// Free truth values `t`, fixed inputs `consts` and the requested value.
#[derive(Debug, Clone, PartialEq)]
pub struct RefineInput {
    pub t: Vec<f64>,
    pub consts: Vec<f64>,
    pub target: f64,
    pub norm: Norm,
    pub tie: TieBreak,
}

impl RefineInput {
    pub fn new(t: Vec<f64>, target: f64) -> Self {
        RefineInput {
            t,
            consts: Vec::new(),
            target,
            norm: Norm::L1,
            tie: TieBreak::Lowest,
        }
    }

    pub fn with_consts(mut self, consts: Vec<f64>) -> Self {
        self.consts = consts;
        self
    }

    pub fn with_norm(mut self, norm: Norm) -> Self {
        self.norm = norm;
        self
    }

    pub fn with_tie(mut self, tie: TieBreak) -> Self {
        self.tie = tie;
        self
    }

    pub fn validate(&self) -> Result<(), RefineError> {
        let unit = |v: f64| (0.0..=1.0).contains(&v);
        if let Some(v) = self.t.iter().chain(&self.consts).find(|v| !unit(**v)) {
            return Err(RefineError::InvalidInput(format!(
                "truth value {v} outside [0, 1]"
            )));
        }
        if !unit(self.target) {
            return Err(RefineError::InvalidInput(format!(
                "target {} outside [0, 1]",
                self.target
            )));
        }
        Ok(())
    }

    fn negated(&self) -> RefineInput {
        RefineInput {
            t: self.t.iter().map(|v| 1.0 - v).collect(),
            consts: self.consts.iter().map(|v| 1.0 - v).collect(),
            target: 1.0 - self.target,
            norm: self.norm,
            tie: self.tie,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RefinementResult {
    pub refined: Vec<f64>,
    /// Connective value at `refined`.
    pub achieved: f64,
    /// Distance from the input vector in the requested norm.
    pub distance: f64,
    /// The target lay outside the attainable range and was moved to its end.
    pub clamped: bool,
    /// A numerical fallback was taken; minimality is not guaranteed.
    pub flagged: bool,
}

/// A connective over free inputs followed by constants.
#[derive(Debug, Clone, PartialEq)]
pub enum Connective {
    TNorm(TNorm),
    TConorm(TConorm),
    /// Two free inputs `[a, c]`, no constants.
    Implication(Implication),
    /// One free input, no constants.
    Identity,
}

impl Connective {
    pub fn evaluate(&self, t: &[f64], consts: &[f64]) -> f64 {
        let all = t.iter().chain(consts).copied();
        match self {
            Connective::TNorm(k) => all.fold(1.0, |acc, v| k.apply(acc, v)),
            Connective::TConorm(k) => all.fold(0.0, |acc, v| k.apply(acc, v)),
            Connective::Implication(i) => i.apply(t[0], t[1]),
            Connective::Identity => t[0],
        }
    }

    /// `[min, max]` over the free inputs with the constants fixed.
    pub fn attainable_range(&self, n: usize, consts: &[f64]) -> (f64, f64) {
        let lo = self.evaluate(&vec![0.0; n], consts);
        let hi = self.evaluate(&vec![1.0; n], consts);
        match self {
            Connective::Implication(_) => (0.0, 1.0),
            _ => (lo.min(hi), lo.max(hi)),
        }
    }
}

/// Output of a one-directional primitive.
pub(crate) struct Step {
    pub refined: Vec<f64>,
    pub flagged: bool,
}

impl Step {
    pub fn exact(refined: Vec<f64>) -> Self {
        Step {
            refined,
            flagged: false,
        }
    }
}

/// Increase primitives of one t-norm family. Inputs are only called with a
/// target strictly above the current value and within range.
pub(crate) trait Family {
    fn tnorm(&self) -> TNorm;
    fn tnorm_increase(&self, input: &RefineInput) -> Step;
    fn tconorm_increase(&self, input: &RefineInput) -> Step;
}

fn finish(conn: &Connective, input: &RefineInput, step: Step, clamped: bool) -> RefinementResult {
    let refined: Vec<f64> = step
        .refined
        .into_iter()
        .map(|v| v.clamp(0.0, 1.0))
        .collect();
    RefinementResult {
        achieved: conn.evaluate(&refined, &input.consts),
        distance: input.norm.distance(&refined, &input.t),
        refined,
        clamped,
        flagged: step.flagged,
    }
}

/// Clamps the target into the attainable range; returns the clamped input
/// and whether clamping happened.
fn clamp_target(conn: &Connective, input: &RefineInput) -> (RefineInput, bool) {
    let (lo, hi) = conn.attainable_range(input.t.len(), &input.consts);
    let target = input.target.clamp(lo, hi);
    let mut out = input.clone();
    out.target = target;
    (out, target != input.target)
}

pub(crate) fn unchanged(conn: &Connective, input: &RefineInput, clamped: bool) -> RefinementResult {
    finish(conn, input, Step::exact(input.t.clone()), clamped)
}

fn negate_step(step: Step) -> Step {
    Step {
        refined: step.refined.into_iter().map(|v| 1.0 - v).collect(),
        flagged: step.flagged,
    }
}

pub(crate) fn refine_tnorm_family<F: Family>(
    family: &F,
    input: &RefineInput,
) -> Result<RefinementResult, RefineError> {
    input.validate()?;
    let conn = Connective::TNorm(family.tnorm());
    let (input, clamped) = clamp_target(&conn, input);
    let current = conn.evaluate(&input.t, &input.consts);
    if input.t.is_empty() || current == input.target {
        return Ok(unchanged(&conn, &input, clamped));
    }
    let step = if input.target > current {
        family.tnorm_increase(&input)
    } else {
        negate_step(family.tconorm_increase(&input.negated()))
    };
    Ok(finish(&conn, &input, step, clamped))
}

pub(crate) fn refine_tconorm_family<F: Family>(
    family: &F,
    input: &RefineInput,
) -> Result<RefinementResult, RefineError> {
    input.validate()?;
    let conn = Connective::TConorm(family.tnorm().dual());
    let (input, clamped) = clamp_target(&conn, input);
    let current = conn.evaluate(&input.t, &input.consts);
    if input.t.is_empty() || current == input.target {
        return Ok(unchanged(&conn, &input, clamped));
    }
    let step = if input.target > current {
        family.tconorm_increase(&input)
    } else {
        negate_step(family.tnorm_increase(&input.negated()))
    };
    Ok(finish(&conn, &input, step, clamped))
}

/// `1 - f(1 - t, 1 - consts, 1 - target)`: turns a refiner for a connective
/// into one for its dual.
pub fn dual_refine<F>(refiner: F, input: &RefineInput) -> Result<RefinementResult, RefineError>
where
    F: Fn(&RefineInput) -> Result<RefinementResult, RefineError>,
{
    let r = refiner(&input.negated())?;
    let refined: Vec<f64> = r.refined.iter().map(|v| 1.0 - v).collect();
    Ok(RefinementResult {
        distance: input.norm.distance(&refined, &input.t),
        refined,
        achieved: 1.0 - r.achieved,
        clamped: r.clamped,
        flagged: r.flagged,
    })
}

fn generator_for(kind: TNorm, norm: Norm) -> Result<AdditiveGenerator, RefineError> {
    let g = match kind {
        TNorm::Product => AdditiveGenerator::Product,
        TNorm::Yager(p) if p >= 1.0 && p.is_finite() => AdditiveGenerator::Yager(p),
        other => {
            return Err(RefineError::Unsupported(format!(
                "no refinement function for {other:?}"
            )))
        }
    };
    if norm == Norm::L2 {
        return Err(RefineError::Unsupported(format!(
            "{kind:?} refinement has no closed form under L2"
        )));
    }
    Ok(g)
}

/// Minimal refinement of an n-ary t-norm.
pub fn refine_tnorm(kind: TNorm, input: &RefineInput) -> Result<RefinementResult, RefineError> {
    match kind {
        TNorm::Godel => refine_godel_tnorm(input),
        TNorm::Lukasiewicz => refine_luk_tnorm(input),
        _ => refine_generator_tnorm(&generator_for(kind, input.norm)?, input),
    }
}

/// Minimal refinement of an n-ary t-conorm.
pub fn refine_tconorm(kind: TConorm, input: &RefineInput) -> Result<RefinementResult, RefineError> {
    match kind {
        TConorm::Godel => refine_godel_tconorm(input),
        TConorm::Lukasiewicz => refine_luk_tconorm(input),
        _ => refine_generator_tconorm(&generator_for(kind.dual(), input.norm)?, input),
    }
}
