//! Iterative Local Refinement: forward-evaluate a ground formula, then push a
//! scheduled target for the root down the tree with the minimal refinement
//! function of each connective, and merge the changes proposed for
//! propositions that occur more than once.

use thiserror::Error;

use crate::formula::{EvalTrace, FlatFormula, Formula, FormulaError, LogicConfig, Node};
use crate::ops::{Aggregator, Implication, TConorm, TNorm};
use crate::refine::{
    refine_implication, refine_monotone_1d, refine_tconorm, refine_tnorm, Norm, RefineError,
    RefineInput, TieBreak,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IlrError {
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error(transparent)]
    Refine(#[from] RefineError),
    #[error("no refinement function for {0}")]
    Unsupported(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

/// How several proposed changes to one proposition are merged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Combine {
    /// The signed change of largest magnitude; ties go to the first seen.
    #[default]
    MaxAbs,
    Mean,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieMode {
    #[default]
    Deterministic,
    Seeded(u64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct IlrParams {
    /// Fraction of the remaining gap the root target moves per iteration.
    pub alpha: f64,
    pub max_iters: usize,
    pub converge_tol: f64,
    pub converge_patience: usize,
    pub combine: Combine,
    /// Margin for the strict inequality of the Gödel implication.
    pub eps_impl: f64,
    pub tie_mode: TieMode,
}

impl Default for IlrParams {
    fn default() -> Self {
        IlrParams {
            alpha: 1.0,
            max_iters: 1000,
            converge_tol: 1e-7,
            converge_patience: 3,
            combine: Combine::MaxAbs,
            eps_impl: crate::refine::DEFAULT_EPS_IMPL,
            tie_mode: TieMode::Deterministic,
        }
    }
}

impl IlrParams {
    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn validate(&self) -> Result<(), IlrError> {
        let bad = |m: String| Err(IlrError::InvalidParams(m));
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return bad(format!("alpha {} not in (0, 1]", self.alpha));
        }
        if self.max_iters == 0 {
            return bad("max_iters must be at least 1".into());
        }
        if !(self.converge_tol >= 0.0) {
            return bad(format!(
                "converge_tol {} must be non-negative",
                self.converge_tol
            ));
        }
        if !(self.eps_impl > 0.0) {
            return bad(format!("eps_impl {} must be positive", self.eps_impl));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryPoint {
    pub iteration: usize,
    pub satisfaction: f64,
    /// L1 distance of the current truth vector from the initial one.
    pub l1_to_initial: f64,
}

/// Outcome of an iterative refinement method (ILR or gradient descent).
#[derive(Debug, Clone, PartialEq)]
pub struct RefinementRun {
    pub final_truths: Vec<f64>,
    /// Starts with iteration 0, the initial state.
    pub trajectory: Vec<TrajectoryPoint>,
    /// Whether the final satisfaction is within tolerance of the target.
    pub converged: bool,
    pub iterations_used: usize,
}

impl RefinementRun {
    pub fn final_satisfaction(&self) -> f64 {
        self.trajectory
            .last()
            .expect("trajectory is never empty")
            .satisfaction
    }
}

pub fn combine(deltas: &[f64], mode: Combine) -> f64 {
    if deltas.is_empty() {
        return 0.0;
    }
    match mode {
        Combine::MaxAbs => {
            deltas
                .iter()
                .copied()
                .fold(0.0, |best, d| if d.abs() > best.abs() { d } else { best })
        }
        Combine::Mean => deltas.iter().sum::<f64>() / deltas.len() as f64,
    }
}

#[derive(Debug, Clone, Copy)]
enum Refiner {
    TNorm(TNorm),
    TConorm(TConorm),
}

fn unsupported<T>(what: impl std::fmt::Debug) -> Result<T, IlrError> {
    Err(IlrError::Unsupported(format!("{what:?}")))
}

fn tnorm_refiner(k: TNorm) -> Result<Refiner, IlrError> {
    match k {
        TNorm::Godel | TNorm::Lukasiewicz | TNorm::Product => Ok(Refiner::TNorm(k)),
        other => unsupported(other),
    }
}

fn tconorm_refiner(k: TConorm) -> Result<Refiner, IlrError> {
    match k {
        TConorm::Godel | TConorm::Lukasiewicz | TConorm::Product => Ok(Refiner::TConorm(k)),
        other => unsupported(other),
    }
}

fn aggregate_refiner(a: Aggregator) -> Result<Refiner, IlrError> {
    match a {
        Aggregator::Min => Ok(Refiner::TNorm(TNorm::Godel)),
        Aggregator::Product => Ok(Refiner::TNorm(TNorm::Product)),
        Aggregator::LukasiewiczA => Ok(Refiner::TNorm(TNorm::Lukasiewicz)),
        Aggregator::Max => Ok(Refiner::TConorm(TConorm::Godel)),
        Aggregator::ProbSum => Ok(Refiner::TConorm(TConorm::Product)),
        Aggregator::LukasiewiczE => Ok(Refiner::TConorm(TConorm::Lukasiewicz)),
        other => unsupported(other),
    }
}

fn check_implication(i: &Implication) -> Result<(), IlrError> {
    match i {
        Implication::GodelR
        | Implication::KleeneDienes
        | Implication::Reichenbach
        | Implication::Lukasiewicz
        | Implication::Goguen => Ok(()),
        other => unsupported(other),
    }
}

fn node_refiner(config: &LogicConfig, node: &Node) -> Result<Option<Refiner>, IlrError> {
    Ok(match node {
        Node::And(_) => Some(tnorm_refiner(config.tnorm)?),
        Node::Or(_) => Some(tconorm_refiner(config.tconorm)?),
        Node::Aggregate(q, _) => Some(aggregate_refiner(config.aggregator(*q))?),
        Node::Implies(..) => {
            check_implication(&config.implication)?;
            None
        }
        Node::Prop(_) | Node::Const(_) | Node::Not(_) => None,
    })
}

/// Rejects configurations without a refinement function for some connective
/// that occurs in `flat`.
pub fn check_supported(config: &LogicConfig, flat: &FlatFormula) -> Result<(), IlrError> {
    for n in flat.nodes() {
        node_refiner(config, n)?;
    }
    Ok(())
}

struct Backward<'a> {
    config: &'a LogicConfig,
    flat: &'a FlatFormula,
    trace: &'a EvalTrace,
    eps_impl: f64,
    tie: TieBreak,
    deltas: Vec<Vec<f64>>,
}

impl Backward<'_> {
    fn tie_for(&self, node: usize) -> TieBreak {
        match self.tie {
            TieBreak::Lowest => TieBreak::Lowest,
            TieBreak::Seeded(s) => {
                TieBreak::Seeded(s ^ (node as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
            }
        }
    }

    fn visit(&mut self, node: usize, target: f64) -> Result<(), IlrError> {
        let target = target.clamp(0.0, 1.0);
        let nodes = self.flat.nodes();
        match &nodes[node] {
            Node::Prop(p) => self.deltas[*p].push(target - self.trace.value(node)),
            Node::Const(_) => {}
            Node::Not(c) => self.visit(*c, 1.0 - target)?,
            Node::And(cs) | Node::Or(cs) | Node::Aggregate(_, cs) => {
                let refiner = node_refiner(self.config, &nodes[node])?.expect("n-ary connective");
                let (free, consts): (Vec<usize>, Vec<usize>) = cs
                    .iter()
                    .partition(|&&c| !matches!(nodes[c], Node::Const(_)));
                if free.is_empty() {
                    return Ok(());
                }
                let input =
                    RefineInput::new(free.iter().map(|&c| self.trace.value(c)).collect(), target)
                        .with_consts(consts.iter().map(|&c| self.trace.value(c)).collect())
                        .with_tie(self.tie_for(node));
                let r = match refiner {
                    Refiner::TNorm(k) => refine_tnorm(k, &input)?,
                    Refiner::TConorm(k) => refine_tconorm(k, &input)?,
                };
                for (&c, &v) in free.iter().zip(&r.refined) {
                    self.visit(c, v)?;
                }
            }
            Node::Implies(a, c) => {
                let (a, c) = (*a, *c);
                let imp = &self.config.implication;
                let (va, vc) = (self.trace.value(a), self.trace.value(c));
                match (
                    matches!(nodes[a], Node::Const(_)),
                    matches!(nodes[c], Node::Const(_)),
                ) {
                    (false, false) => {
                        let r = refine_implication(
                            imp,
                            va,
                            vc,
                            target,
                            self.eps_impl,
                            Norm::L1,
                            self.tie_for(node),
                        )?;
                        self.visit(a, r.refined[0])?;
                        self.visit(c, r.refined[1])?;
                    }
                    (true, false) => {
                        let r = refine_monotone_1d(|x| imp.apply(va, x), vc, target);
                        self.visit(c, r.refined[0])?;
                    }
                    (false, true) => {
                        let r = refine_monotone_1d(|x| imp.apply(x, vc), va, target);
                        self.visit(a, r.refined[0])?;
                    }
                    (true, true) => {}
                }
            }
        }
        Ok(())
    }
}

/// One backward pass from the root with the given target. Returns, for each
/// proposition, the changes proposed by its occurrences in traversal order.
pub fn backward(
    config: &LogicConfig,
    flat: &FlatFormula,
    trace: &EvalTrace,
    target: f64,
    eps_impl: f64,
    tie: TieBreak,
) -> Result<Vec<Vec<f64>>, IlrError> {
    let mut b = Backward {
        config,
        flat,
        trace,
        eps_impl,
        tie,
        deltas: vec![Vec::new(); flat.num_props()],
    };
    b.visit(flat.root(), target)?;
    Ok(b.deltas)
}

fn l1(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}

/// Runs ILR on a ground formula from `t0` towards `target`.
pub fn ilr_run(
    config: &LogicConfig,
    formula: &Formula,
    t0: &[f64],
    target: f64,
    params: &IlrParams,
) -> Result<RefinementRun, IlrError> {
    params.validate()?;
    if !(0.0..=1.0).contains(&target) {
        return Err(IlrError::InvalidParams(format!(
            "target {target} outside [0, 1]"
        )));
    }
    if let Some(v) = t0.iter().find(|v| !(0.0..=1.0).contains(*v)) {
        return Err(IlrError::InvalidParams(format!(
            "initial truth value {v} outside [0, 1]"
        )));
    }
    let flat = FlatFormula::compile(formula)?;
    check_supported(config, &flat)?;

    let mut t = t0.to_vec();
    let mut trace = flat.forward(config, &t)?;
    let mut value = trace.root_value();
    let mut trajectory = vec![TrajectoryPoint {
        iteration: 0,
        satisfaction: value,
        l1_to_initial: 0.0,
    }];
    let mut best = (value - target).abs();
    let mut converged = best <= params.converge_tol;
    let mut stalled = 0;
    let mut iterations_used = 0;

    while !converged && iterations_used < params.max_iters {
        iterations_used += 1;
        let tie = match params.tie_mode {
            TieMode::Deterministic => TieBreak::Lowest,
            TieMode::Seeded(s) => TieBreak::Seeded(s.wrapping_add(iterations_used as u64)),
        };
        let scheduled = value + params.alpha * (target - value);
        let deltas = backward(config, &flat, &trace, scheduled, params.eps_impl, tie)?;
        for (p, ds) in deltas.iter().enumerate() {
            if !ds.is_empty() {
                t[p] = (t[p] + combine(ds, params.combine)).clamp(0.0, 1.0);
            }
        }
        trace = flat.forward(config, &t)?;
        value = trace.root_value();
        trajectory.push(TrajectoryPoint {
            iteration: iterations_used,
            satisfaction: value,
            l1_to_initial: l1(&t, t0),
        });

        let residual = (value - target).abs();
        if residual <= params.converge_tol {
            converged = true;
        } else if residual < best - params.converge_tol {
            best = residual;
            stalled = 0;
        } else {
            stalled += 1;
            if stalled >= params.converge_patience {
                break;
            }
        }
    }
    Ok(RefinementRun {
        final_truths: t,
        trajectory,
        converged,
        iterations_used,
    })
}
