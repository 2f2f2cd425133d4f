//! Differentiable fuzzy logic loss `L = -sum_phi w_phi * val(phi)` and its
//! gradient with respect to ground-atom truth values.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::formula::{
    FlatFormula, FormulaError, Interpretation, LogicConfig, PropId, WeightedFormula,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DflError {
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error("finite-difference step {0} outside [1e-8, 1e-3]")]
    InvalidStep(f64),
}

/// `dL/dt` for every atom that occurs in the knowledge base.
#[derive(Debug, Clone, PartialEq)]
pub struct DflGradients {
    pub loss: f64,
    grads: BTreeMap<PropId, f64>,
    flagged: BTreeSet<PropId>,
}

impl DflGradients {
    /// Partial derivative of the loss; 0 for atoms outside the knowledge base.
    pub fn get(&self, atom: PropId) -> f64 {
        self.grads.get(&atom).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (PropId, f64)> + '_ {
        self.grads.iter().map(|(&k, &v)| (k, v))
    }

    pub fn len(&self) -> usize {
        self.grads.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grads.is_empty()
    }

    /// Whether some path from the atom to a root crossed a kink.
    pub fn is_flagged(&self, atom: PropId) -> bool {
        self.flagged.contains(&atom)
    }
}

fn compile_all(kb: &[WeightedFormula]) -> Result<Vec<(f64, FlatFormula)>, FormulaError> {
    kb.iter()
        .map(|wf| Ok((wf.weight, FlatFormula::compile(&wf.formula)?)))
        .collect()
}

/// Valuation of each formula in order.
pub fn valuations(
    config: &LogicConfig,
    kb: &[WeightedFormula],
    interp: &Interpretation,
) -> Result<Vec<f64>, DflError> {
    let mut out = Vec::with_capacity(kb.len());
    for (_, flat) in compile_all(kb)? {
        out.push(flat.forward(config, interp.truths())?.root_value());
    }
    Ok(out)
}

fn loss_at(
    config: &LogicConfig,
    compiled: &[(f64, FlatFormula)],
    truths: &[f64],
) -> Result<f64, FormulaError> {
    let mut loss = 0.0;
    for (w, flat) in compiled {
        loss -= w * flat.forward(config, truths)?.root_value();
    }
    Ok(loss)
}

pub fn dfl_loss(
    config: &LogicConfig,
    kb: &[WeightedFormula],
    interp: &Interpretation,
) -> Result<f64, DflError> {
    Ok(loss_at(config, &compile_all(kb)?, interp.truths())?)
}

pub fn dfl_grad(
    config: &LogicConfig,
    kb: &[WeightedFormula],
    interp: &Interpretation,
) -> Result<DflGradients, DflError> {
    let truths = interp.truths();
    let mut out = DflGradients {
        loss: 0.0,
        grads: BTreeMap::new(),
        flagged: BTreeSet::new(),
    };
    for (w, flat) in compile_all(kb)? {
        let trace = flat.forward(config, truths)?;
        out.loss -= w * trace.root_value();
        let adj = flat.backward(config, &trace, &[(flat.root(), -w)]);
        let (grads, flags) = flat.prop_gradients(&adj, flat.num_props());
        for p in flat.props() {
            *out.grads.entry(p).or_insert(0.0) += grads[p];
            if flags[p] {
                out.flagged.insert(p);
            }
        }
    }
    Ok(out)
}

/// Outcome of comparing analytic gradients with central differences.
#[derive(Debug, Clone, PartialEq)]
pub struct FdReport {
    /// Largest absolute discrepancy over unflagged atoms.
    pub max_abs_err: f64,
    /// Atom attaining `max_abs_err`.
    pub worst: Option<PropId>,
    pub checked: usize,
    /// Atoms skipped because their gradient passed through a kink.
    pub excluded: Vec<PropId>,
}

/// Central differences with step `h`, clamping perturbed values to `[0, 1]`
/// and dividing by the actual step taken.
pub fn fd_check(
    config: &LogicConfig,
    kb: &[WeightedFormula],
    interp: &Interpretation,
    h: f64,
) -> Result<FdReport, DflError> {
    if !(1e-8..=1e-3).contains(&h) {
        return Err(DflError::InvalidStep(h));
    }
    let compiled = compile_all(kb)?;
    let analytic = dfl_grad(config, kb, interp)?;
    let mut truths = interp.truths().to_vec();
    let mut report = FdReport {
        max_abs_err: 0.0,
        worst: None,
        checked: 0,
        excluded: Vec::new(),
    };
    for (atom, g) in analytic.iter() {
        if analytic.is_flagged(atom) {
            report.excluded.push(atom);
            continue;
        }
        let x = truths[atom];
        let (hi, lo) = ((x + h).min(1.0), (x - h).max(0.0));
        truths[atom] = hi;
        let f_hi = loss_at(config, &compiled, &truths)?;
        truths[atom] = lo;
        let f_lo = loss_at(config, &compiled, &truths)?;
        truths[atom] = x;
        let err = ((f_hi - f_lo) / (hi - lo) - g).abs();
        report.checked += 1;
        if report.worst.is_none() || err > report.max_abs_err {
            report.max_abs_err = err;
            report.worst = Some(atom);
        }
    }
    Ok(report)
}
