//! SAT refinement experiments: every (instance, seed) pair draws one initial
//! truth vector that all methods and logics start from.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use refine_core::descent::{adam_minimize, AdamParams, DescentError, SurrogateLoss};
use refine_core::formula::{FormulaError, LogicConfig};
use refine_core::ilr::{ilr_run, IlrError, IlrParams, RefinementRun};
use serde::Serialize;
use thiserror::Error;

use crate::cnf::cnf_to_formula;
use crate::dimacs::CnfInstance;

pub const CSV_HEADER: [&str; 8] = [
    "instance",
    "method",
    "logic",
    "param",
    "iteration",
    "satisfaction",
    "l1_norm",
    "seed",
];
pub const SUMMARY_HEADER: [&str; 10] = [
    "instance",
    "method",
    "logic",
    "param",
    "seed",
    "iterations_used",
    "converged",
    "satisfaction",
    "l1_norm",
    "feasible",
];

/// Satisfaction at least `target - FEASIBLE_TOL` counts as reaching the target.
pub const FEASIBLE_TOL: f64 = 1e-7;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error(transparent)]
    Ilr(#[from] IlrError),
    #[error(transparent)]
    Descent(#[from] DescentError),
}

impl ExperimentError {
    /// Whether the failure comes from an operator combination without support.
    pub fn is_unsupported(&self) -> bool {
        matches!(
            self,
            ExperimentError::Ilr(IlrError::Unsupported(_))
                | ExperimentError::Formula(FormulaError::UnsupportedConfig(_))
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    Ilr,
    Adam,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Ilr => "ilr",
            Method::Adam => "adam",
        })
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "ilr" => Ok(Method::Ilr),
            "adam" => Ok(Method::Adam),
            other => Err(format!("unknown method '{other}'")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub methods: Vec<Method>,
    /// Logic preset names as accepted by `LogicConfig::from_name`.
    pub logics: Vec<String>,
    /// ILR scheduling parameters; one run per value.
    pub alphas: Vec<f64>,
    /// ADAM regularization weights; one run per value.
    pub betas: Vec<f64>,
    pub lr: f64,
    pub target: f64,
    /// Keep only the first this many clauses of each instance.
    pub max_clauses: Option<usize>,
    /// Iteration cap for both methods.
    pub max_iters: usize,
    pub seeds: Vec<u64>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            methods: vec![Method::Ilr],
            logics: vec!["lukasiewicz".into()],
            alphas: vec![1.0],
            betas: vec![0.1],
            lr: 0.01,
            target: 1.0,
            max_clauses: None,
            max_iters: 1000,
            seeds: vec![0],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRecord {
    pub instance: String,
    pub method: String,
    pub logic: String,
    /// `alpha` for ILR, `beta` for ADAM.
    pub param: f64,
    pub iteration: usize,
    pub satisfaction: f64,
    pub l1_norm: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub instance: String,
    pub method: String,
    pub logic: String,
    pub param: f64,
    pub seed: u64,
    pub iterations_used: usize,
    pub converged: bool,
    pub satisfaction: f64,
    pub l1_norm: f64,
    pub feasible: bool,
}

/// Initial truth values `~ U[0, 1)`, drawn from ChaCha8 seeded with `seed`.
pub fn initial_truths(num_vars: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..num_vars).map(|_| rng.random::<f64>()).collect()
}

/// One method on one instance from `t0`.
pub fn run_method(
    inst: &CnfInstance,
    method: Method,
    logic: &LogicConfig,
    param: f64,
    t0: &[f64],
    cfg: &ExperimentConfig,
) -> Result<RefinementRun, ExperimentError> {
    let inst = match cfg.max_clauses {
        Some(k) => inst.truncated(k),
        None => inst.clone(),
    };
    let formula = cnf_to_formula(&inst);
    Ok(match method {
        Method::Ilr => {
            let params = IlrParams {
                alpha: param,
                max_iters: cfg.max_iters,
                ..IlrParams::default()
            };
            ilr_run(logic, &formula, t0, cfg.target, &params)?
        }
        Method::Adam => {
            let loss = SurrogateLoss::new(logic, &formula, t0, cfg.target)?.with_beta(param)?;
            let params = AdamParams {
                lr: cfg.lr,
                iterations: cfg.max_iters,
                ..AdamParams::default()
            };
            adam_minimize(&loss, &params)?
        }
    })
}

struct Task<'a> {
    name: &'a str,
    inst: &'a CnfInstance,
    seed: u64,
    method: Method,
    logic: &'a str,
    param: f64,
}

/// Runs every (instance, seed, method, logic, parameter) combination in
/// parallel. Output order is canonical: the nesting order of the loops above.
pub fn run_experiment(
    instances: &[(String, CnfInstance)],
    cfg: &ExperimentConfig,
) -> Result<(Vec<RunRecord>, Vec<RunSummary>), ExperimentError> {
    let logics: Vec<LogicConfig> = cfg
        .logics
        .iter()
        .map(|l| LogicConfig::from_name(l))
        .collect::<Result<_, _>>()?;
    let mut tasks = Vec::new();
    for (name, inst) in instances {
        for &seed in &cfg.seeds {
            for &method in &cfg.methods {
                for logic in &cfg.logics {
                    let params = if method == Method::Ilr {
                        &cfg.alphas
                    } else {
                        &cfg.betas
                    };
                    for &param in params {
                        tasks.push(Task {
                            name,
                            inst,
                            seed,
                            method,
                            logic,
                            param,
                        });
                    }
                }
            }
        }
    }
    let results: Vec<(Vec<RunRecord>, RunSummary)> = tasks
        .par_iter()
        .map(|task| {
            let t0 = initial_truths(task.inst.num_vars, task.seed);
            let config = &logics[cfg
                .logics
                .iter()
                .position(|l| l == task.logic)
                .expect("listed logic")];
            let run = run_method(task.inst, task.method, config, task.param, &t0, cfg)?;
            let record = |iteration, satisfaction, l1_norm| RunRecord {
                instance: task.name.to_string(),
                method: task.method.to_string(),
                logic: task.logic.to_string(),
                param: task.param,
                iteration,
                satisfaction,
                l1_norm,
                seed: task.seed,
            };
            let records = run
                .trajectory
                .iter()
                .map(|p| record(p.iteration, p.satisfaction, p.l1_to_initial))
                .collect();
            let last = run.trajectory.last().expect("non-empty trajectory");
            let summary = RunSummary {
                instance: task.name.to_string(),
                method: task.method.to_string(),
                logic: task.logic.to_string(),
                param: task.param,
                seed: task.seed,
                iterations_used: run.iterations_used,
                converged: run.converged,
                satisfaction: last.satisfaction,
                l1_norm: last.l1_to_initial,
                feasible: last.satisfaction >= cfg.target - FEASIBLE_TOL,
            };
            Ok((records, summary))
        })
        .collect::<Result<_, ExperimentError>>()?;
    let mut records = Vec::new();
    let mut summaries = Vec::with_capacity(results.len());
    for (r, s) in results {
        records.extend(r);
        summaries.push(s);
    }
    Ok((records, summaries))
}

fn write_rows<W: Write, T: Serialize>(
    out: W,
    header: &[&str],
    rows: &[T],
) -> Result<(), ExperimentError> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(out);
    w.write_record(header)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Per-iteration rows under [`CSV_HEADER`]; the header is written even when
/// there are no rows.
pub fn write_records<W: Write>(out: W, records: &[RunRecord]) -> Result<(), ExperimentError> {
    write_rows(out, &CSV_HEADER, records)
}

pub fn write_summaries<W: Write>(out: W, summaries: &[RunSummary]) -> Result<(), ExperimentError> {
    write_rows(out, &SUMMARY_HEADER, summaries)
}
