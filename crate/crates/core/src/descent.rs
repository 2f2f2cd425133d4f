//! Gradient-descent baseline: truth values are parameterized as `σ(z)` and
//! ADAM minimizes `|f(σ(z)) - target| + β ‖σ(z) - t0‖`.

use thiserror::Error;

use crate::formula::{FlatFormula, Formula, FormulaError, LogicConfig, Node, Quantifier};
use crate::ilr::{RefinementRun, TrajectoryPoint};
use crate::ops::{Aggregator, TNorm, EPS_LOG};
use crate::refine::Norm;

/// Differences at most this large count as zero in `|·|` subgradients.
const SIGN_DEADZONE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DescentError {
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("the log-product loss needs a positive target")]
    LogOfZero,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdamParams {
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
    pub iterations: usize,
    /// Stop once the satisfaction is this close to the target.
    pub stop_tol: f64,
}

impl Default for AdamParams {
    fn default() -> Self {
        AdamParams {
            lr: 0.01,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
            iterations: 1000,
            stop_tol: 1e-7,
        }
    }
}

impl AdamParams {
    pub fn validate(&self) -> Result<(), DescentError> {
        let bad = |m: String| Err(DescentError::InvalidParams(m));
        if self.iterations == 0 {
            return bad("iterations must be at least 1".into());
        }
        if !(self.lr > 0.0 && self.lr.is_finite()) {
            return bad(format!("learning rate {} must be positive", self.lr));
        }
        for (name, b) in [("beta1", self.beta1), ("beta2", self.beta2)] {
            if !(0.0..1.0).contains(&b) {
                return bad(format!("{name} = {b} not in [0, 1)"));
            }
        }
        if !(self.eps > 0.0) {
            return bad(format!("eps {} must be positive", self.eps));
        }
        Ok(())
    }
}

/// First term of the surrogate loss.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SurrogateKind {
    /// `|f(t) - target|`.
    Direct,
    /// `|sum_i ln c_i - ln target|` over the clauses `c_i` of a product conjunction.
    LogProduct,
    /// `|sum_i c_i - (n - 1) - target|`: a Łukasiewicz conjunction without its outer max.
    LukasiewiczSum,
}

pub fn logistic(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

pub fn logit(t: f64) -> f64 {
    let t = t.clamp(1e-6, 1.0 - 1e-6);
    (t / (1.0 - t)).ln()
}

fn sign(x: f64) -> f64 {
    if x.abs() <= SIGN_DEADZONE {
        0.0
    } else {
        x.signum()
    }
}

#[derive(Debug, Clone)]
pub struct SurrogateLoss {
    config: LogicConfig,
    flat: FlatFormula,
    t0: Vec<f64>,
    target: f64,
    pub beta: f64,
    pub reg_norm: Norm,
    kind: SurrogateKind,
    /// Root children whose values form the clauses of the log and sum variants.
    clauses: Vec<usize>,
}

impl SurrogateLoss {
    /// Builds the loss with `β = 0.1` and an L1 regularizer. The variant is
    /// picked from the configuration and the root connective.
    pub fn new(
        config: &LogicConfig,
        formula: &Formula,
        t0: &[f64],
        target: f64,
    ) -> Result<Self, DescentError> {
        if !(0.0..=1.0).contains(&target) {
            return Err(DescentError::InvalidParams(format!(
                "target {target} outside [0, 1]"
            )));
        }
        if let Some(v) = t0.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(DescentError::InvalidParams(format!(
                "initial truth value {v} outside [0, 1]"
            )));
        }
        let mut config = config.clone();
        let log_root = config.universal == Aggregator::LogProduct;
        if log_root {
            config.universal = Aggregator::Product;
        }
        let flat = FlatFormula::compile(formula)?;
        if t0.len() < flat.num_props() {
            return Err(FormulaError::MissingAssignment(t0.len()).into());
        }
        let root = flat.root();
        let (kind, clauses) = match &flat.nodes()[root] {
            Node::And(cs) if config.tnorm == TNorm::Product => {
                (SurrogateKind::LogProduct, cs.clone())
            }
            Node::Aggregate(Quantifier::Universal, cs)
                if config.universal == Aggregator::Product =>
            {
                (SurrogateKind::LogProduct, cs.clone())
            }
            Node::And(cs) if config.tnorm == TNorm::Lukasiewicz => {
                (SurrogateKind::LukasiewiczSum, cs.clone())
            }
            Node::Aggregate(Quantifier::Universal, cs)
                if config.universal == Aggregator::LukasiewiczA =>
            {
                (SurrogateKind::LukasiewiczSum, cs.clone())
            }
            _ if log_root => (SurrogateKind::LogProduct, vec![root]),
            _ => (SurrogateKind::Direct, vec![root]),
        };
        if kind == SurrogateKind::LogProduct && target == 0.0 {
            return Err(DescentError::LogOfZero);
        }
        Ok(SurrogateLoss {
            config,
            flat,
            t0: t0.to_vec(),
            target,
            beta: 0.1,
            reg_norm: Norm::L1,
            kind,
            clauses,
        })
    }

    pub fn with_beta(mut self, beta: f64) -> Result<Self, DescentError> {
        if !(beta >= 0.0 && beta.is_finite()) {
            return Err(DescentError::InvalidParams(format!(
                "beta {beta} must be finite and non-negative"
            )));
        }
        self.beta = beta;
        Ok(self)
    }

    pub fn with_reg_norm(mut self, norm: Norm) -> Self {
        self.reg_norm = norm;
        self
    }

    /// Forces a variant of the first term.
    pub fn with_kind(mut self, kind: SurrogateKind) -> Result<Self, DescentError> {
        if kind == SurrogateKind::LogProduct && self.target == 0.0 {
            return Err(DescentError::LogOfZero);
        }
        if kind == SurrogateKind::Direct {
            self.clauses = vec![self.flat.root()];
        }
        self.kind = kind;
        Ok(self)
    }

    pub fn kind(&self) -> SurrogateKind {
        self.kind
    }

    pub fn t0(&self) -> &[f64] {
        &self.t0
    }

    /// `f(t)` under the plain evaluator.
    pub fn satisfaction(&self, t: &[f64]) -> f64 {
        self.flat
            .forward(&self.config, t)
            .expect("validated at construction")
            .root_value()
    }

    /// The starting point `logit(clamp(t0))`.
    pub fn initial_z(&self) -> Vec<f64> {
        self.t0.iter().map(|&t| logit(t)).collect()
    }

    /// Loss value and gradient with respect to `z`.
    pub fn value_and_grad(&self, z: &[f64]) -> (f64, Vec<f64>) {
        let t: Vec<f64> = z.iter().map(|&v| logistic(v)).collect();
        self.value_and_grad_at(z, &t)
    }

    fn value_and_grad_at(&self, z: &[f64], t: &[f64]) -> (f64, Vec<f64>) {
        let trace = self
            .flat
            .forward(&self.config, t)
            .expect("validated at construction");
        let vals = trace.values();
        let (term, seeds): (f64, Vec<(usize, f64)>) = match self.kind {
            SurrogateKind::Direct => {
                let diff = trace.root_value() - self.target;
                (diff.abs(), vec![(self.flat.root(), sign(diff))])
            }
            SurrogateKind::LogProduct => {
                let logs: f64 = self
                    .clauses
                    .iter()
                    .map(|&c| vals[c].max(EPS_LOG).ln())
                    .sum();
                let diff = logs - self.target.ln();
                let s = sign(diff);
                (
                    diff.abs(),
                    self.clauses
                        .iter()
                        .map(|&c| (c, s / vals[c].max(EPS_LOG)))
                        .collect(),
                )
            }
            SurrogateKind::LukasiewiczSum => {
                let n = self.clauses.len() as f64;
                let sum: f64 = self.clauses.iter().map(|&c| vals[c]).sum();
                let diff = sum - (n - 1.0) - self.target;
                let s = sign(diff);
                (diff.abs(), self.clauses.iter().map(|&c| (c, s)).collect())
            }
        };
        let adj = self.flat.backward(&self.config, &trace, &seeds);
        let (mut grad_t, _) = self.flat.prop_gradients(&adj, t.len());

        let dev: Vec<f64> = t.iter().zip(&self.t0).map(|(a, b)| a - b).collect();
        let reg = match self.reg_norm {
            Norm::L1 => {
                for (g, d) in grad_t.iter_mut().zip(&dev) {
                    *g += self.beta * sign(*d);
                }
                dev.iter().map(|d| d.abs()).sum::<f64>()
            }
            Norm::L2 => {
                let norm = dev.iter().map(|d| d * d).sum::<f64>().sqrt();
                if norm > 0.0 {
                    for (g, d) in grad_t.iter_mut().zip(&dev) {
                        *g += self.beta * d / norm;
                    }
                }
                norm
            }
        };
        let grad_z = grad_t.iter().zip(z).map(|(g, &zi)| {
            let s = logistic(zi);
            g * s * (1.0 - s)
        });
        (term + self.beta * reg, grad_z.collect())
    }
}

/// `value_and_grad` as a free function.
pub fn surrogate_value_and_grad(loss: &SurrogateLoss, z: &[f64]) -> (f64, Vec<f64>) {
    loss.value_and_grad(z)
}

/// ADAM state: first and second moment estimates with bias correction.
#[derive(Debug, Clone)]
pub struct Adam {
    params: AdamParams,
    m: Vec<f64>,
    v: Vec<f64>,
    steps: i32,
}

impl Adam {
    pub fn new(params: &AdamParams, n: usize) -> Self {
        Adam {
            params: params.clone(),
            m: vec![0.0; n],
            v: vec![0.0; n],
            steps: 0,
        }
    }

    pub fn step(&mut self, x: &mut [f64], grad: &[f64]) {
        let p = &self.params;
        self.steps += 1;
        let (c1, c2) = (
            1.0 - p.beta1.powi(self.steps),
            1.0 - p.beta2.powi(self.steps),
        );
        for i in 0..x.len() {
            self.m[i] = p.beta1 * self.m[i] + (1.0 - p.beta1) * grad[i];
            self.v[i] = p.beta2 * self.v[i] + (1.0 - p.beta2) * grad[i] * grad[i];
            x[i] -= p.lr * (self.m[i] / c1) / ((self.v[i] / c2).sqrt() + p.eps);
        }
    }
}

/// Truth values for `z`; coordinates never moved keep their exact initial value.
fn truths(loss: &SurrogateLoss, z: &[f64], z0: &[f64]) -> Vec<f64> {
    z.iter()
        .zip(z0)
        .zip(&loss.t0)
        .map(|((&zi, &z0i), &t0i)| if zi == z0i { t0i } else { logistic(zi) })
        .collect()
}

fn l1(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}

/// Runs ADAM from `logit(t0)`; the run is deterministic in its inputs.
pub fn adam_minimize(
    loss: &SurrogateLoss,
    params: &AdamParams,
) -> Result<RefinementRun, DescentError> {
    params.validate()?;
    let z0 = loss.initial_z();
    let mut z = z0.clone();
    let mut adam = Adam::new(params, z.len());
    let mut t = truths(loss, &z, &z0);
    let mut sat = loss.satisfaction(&t);
    let mut trajectory = vec![TrajectoryPoint {
        iteration: 0,
        satisfaction: sat,
        l1_to_initial: 0.0,
    }];
    let mut converged = (sat - loss.target).abs() <= params.stop_tol;
    let mut iterations_used = 0;
    while !converged && iterations_used < params.iterations {
        iterations_used += 1;
        let (_, g) = loss.value_and_grad_at(&z, &t);
        adam.step(&mut z, &g);
        t = truths(loss, &z, &z0);
        sat = loss.satisfaction(&t);
        trajectory.push(TrajectoryPoint {
            iteration: iterations_used,
            satisfaction: sat,
            l1_to_initial: l1(&t, &loss.t0),
        });
        converged = (sat - loss.target).abs() <= params.stop_tol;
    }
    Ok(RefinementRun {
        final_truths: t,
        trajectory,
        converged,
        iterations_used,
    })
}
