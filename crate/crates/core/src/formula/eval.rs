use crate::ops::Aggregator;

use super::{Formula, FormulaError, LogicConfig, PropId, Quantifier};

/// One node of a [`FlatFormula`]; child references are indices of earlier nodes.
#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Prop(PropId),
    Const(f64),
    Not(usize),
    And(Vec<usize>),
    Or(Vec<usize>),
    Implies(usize, usize),
    Aggregate(Quantifier, Vec<usize>),
}

/// A ground formula stored in post-order: children precede parents and the
/// root is the last node.
#[derive(Debug, Clone, PartialEq)]
pub struct FlatFormula {
    nodes: Vec<Node>,
    num_props: usize,
}

/// Per-node values of one forward pass, aligned with [`FlatFormula::nodes`].
#[derive(Debug, Clone, PartialEq)]
pub struct EvalTrace {
    values: Vec<f64>,
}

impl EvalTrace {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, node: usize) -> f64 {
        self.values[node]
    }

    pub fn root_value(&self) -> f64 {
        *self.values.last().expect("non-empty trace")
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Reverse-mode result: the adjoint of every node and whether a kink lies on
/// some path from that node to the root.
#[derive(Debug, Clone, PartialEq)]
pub struct Adjoints {
    pub node: Vec<f64>,
    pub flagged: Vec<bool>,
}

impl FlatFormula {
    pub fn compile(formula: &Formula) -> Result<Self, FormulaError> {
        let mut flat = FlatFormula {
            nodes: Vec::with_capacity(formula.node_count()),
            num_props: 0,
        };
        flat.push(formula)?;
        Ok(flat)
    }

    fn push(&mut self, f: &Formula) -> Result<usize, FormulaError> {
        let node = match f {
            Formula::Prop(p) => {
                self.num_props = self.num_props.max(p + 1);
                Node::Prop(*p)
            }
            Formula::Const(v) => Node::Const(*v),
            Formula::Not(c) => Node::Not(self.push(c)?),
            Formula::And(cs) => Node::And(self.push_all(cs)?),
            Formula::Or(cs) => Node::Or(self.push_all(cs)?),
            Formula::Aggregate(q, cs) => Node::Aggregate(*q, self.push_all(cs)?),
            Formula::Implies(a, c) => {
                let a = self.push(a)?;
                let c = self.push(c)?;
                Node::Implies(a, c)
            }
            Formula::Atom { .. } | Formula::Forall(..) | Formula::Exists(..) => {
                return Err(FormulaError::NotGround)
            }
        };
        if let Node::And(cs) | Node::Or(cs) = &node {
            if cs.is_empty() {
                return Err(FormulaError::EmptyConnective("and/or"));
            }
        }
        self.nodes.push(node);
        Ok(self.nodes.len() - 1)
    }

    fn push_all(&mut self, cs: &[Formula]) -> Result<Vec<usize>, FormulaError> {
        cs.iter().map(|c| self.push(c)).collect()
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn root(&self) -> usize {
        self.nodes.len() - 1
    }

    /// One past the largest proposition id referenced.
    pub fn num_props(&self) -> usize {
        self.num_props
    }

    /// Distinct proposition ids referenced, ascending.
    pub fn props(&self) -> Vec<PropId> {
        let mut out: Vec<PropId> = self
            .nodes
            .iter()
            .filter_map(|n| {
                if let Node::Prop(p) = n {
                    Some(*p)
                } else {
                    None
                }
            })
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn children(&self, node: usize) -> Vec<usize> {
        match &self.nodes[node] {
            Node::Prop(_) | Node::Const(_) => Vec::new(),
            Node::Not(c) => vec![*c],
            Node::And(cs) | Node::Or(cs) | Node::Aggregate(_, cs) => cs.clone(),
            Node::Implies(a, c) => vec![*a, *c],
        }
    }

    /// Rebuilds the subformula rooted at `node`.
    pub fn subformula(&self, node: usize) -> Formula {
        match &self.nodes[node] {
            Node::Prop(p) => Formula::Prop(*p),
            Node::Const(v) => Formula::Const(*v),
            Node::Not(c) => Formula::not(self.subformula(*c)),
            Node::And(cs) => Formula::And(cs.iter().map(|&c| self.subformula(c)).collect()),
            Node::Or(cs) => Formula::Or(cs.iter().map(|&c| self.subformula(c)).collect()),
            Node::Aggregate(q, cs) => {
                Formula::Aggregate(*q, cs.iter().map(|&c| self.subformula(c)).collect())
            }
            Node::Implies(a, c) => Formula::implies(self.subformula(*a), self.subformula(*c)),
        }
    }

    fn check_log_product(&self, config: &LogicConfig) -> Result<(), FormulaError> {
        let root = self.root();
        for (i, n) in self.nodes.iter().enumerate() {
            if let Node::Aggregate(q, _) = n {
                if config.aggregator(*q) == Aggregator::LogProduct && i != root {
                    return Err(FormulaError::LogProductNotOutermost);
                }
            }
        }
        Ok(())
    }

    pub fn forward(&self, config: &LogicConfig, truths: &[f64]) -> Result<EvalTrace, FormulaError> {
        if truths.len() < self.num_props {
            return Err(FormulaError::MissingAssignment(truths.len()));
        }
        self.check_log_product(config)?;
        let mut values = Vec::with_capacity(self.nodes.len());
        let mut scratch = Vec::new();
        for n in &self.nodes {
            let v = match n {
                Node::Prop(p) => truths[*p],
                Node::Const(v) => *v,
                Node::Not(c) => 1.0 - values[*c],
                Node::And(cs) => fold(cs, &values, |a, b| config.tnorm.apply(a, b)),
                Node::Or(cs) => fold(cs, &values, |a, b| config.tconorm.apply(a, b)),
                Node::Implies(a, c) => config.implication.apply(values[*a], values[*c]),
                Node::Aggregate(q, cs) => {
                    scratch.clear();
                    scratch.extend(cs.iter().map(|&c| values[c]));
                    config.aggregator(*q).apply(&scratch)
                }
            };
            values.push(v);
        }
        Ok(EvalTrace { values })
    }

    /// Propagates adjoints from `seeds` (pairs of node and initial adjoint)
    /// down to the leaves using the operators' partial derivatives.
    pub fn backward(
        &self,
        config: &LogicConfig,
        trace: &EvalTrace,
        seeds: &[(usize, f64)],
    ) -> Adjoints {
        let n = self.nodes.len();
        let mut adj = vec![0.0; n];
        let mut flagged = vec![false; n];
        for &(node, a) in seeds {
            adj[node] += a;
        }
        let vals = &trace.values;
        let mut scratch = Vec::new();
        for i in (0..n).rev() {
            let g = adj[i];
            let inherited = flagged[i];
            let active = g != 0.0;
            match &self.nodes[i] {
                Node::Prop(_) | Node::Const(_) => {}
                Node::Not(c) => {
                    adj[*c] -= g;
                    flagged[*c] |= inherited;
                }
                Node::And(cs) | Node::Or(cs) => {
                    let is_and = matches!(self.nodes[i], Node::And(_));
                    let apply = |a: f64, b: f64| {
                        if is_and {
                            config.tnorm.apply(a, b)
                        } else {
                            config.tconorm.apply(a, b)
                        }
                    };
                    let grad = |a: f64, b: f64| {
                        if is_and {
                            config.tnorm.grad(a, b)
                        } else {
                            config.tconorm.grad(a, b)
                        }
                    };
                    scratch.clear();
                    let mut acc = vals[cs[0]];
                    scratch.push(acc);
                    for &c in &cs[1..] {
                        acc = apply(acc, vals[c]);
                        scratch.push(acc);
                    }
                    let mut up = g;
                    let mut kink = false;
                    for k in (1..cs.len()).rev() {
                        let p = grad(scratch[k - 1], vals[cs[k]]);
                        kink |= p.flagged;
                        adj[cs[k]] += up * p.second;
                        up *= p.first;
                    }
                    adj[cs[0]] += up;
                    let f = inherited || (active && kink);
                    for &c in cs {
                        flagged[c] |= f;
                    }
                }
                Node::Implies(a, c) => {
                    let p = config.implication.grad(vals[*a], vals[*c]);
                    adj[*a] += g * p.first;
                    adj[*c] += g * p.second;
                    let f = inherited || (active && p.flagged);
                    flagged[*a] |= f;
                    flagged[*c] |= f;
                }
                Node::Aggregate(q, cs) => {
                    scratch.clear();
                    scratch.extend(cs.iter().map(|&c| vals[c]));
                    let ag = config.aggregator(*q).grad(&scratch);
                    for (&c, d) in cs.iter().zip(&ag.grad) {
                        adj[c] += g * d;
                    }
                    let f = inherited || (active && ag.flagged);
                    for &c in cs {
                        flagged[c] |= f;
                    }
                }
            }
        }
        Adjoints { node: adj, flagged }
    }

    /// Sums node adjoints per proposition; the flag is set when any
    /// occurrence is flagged.
    pub fn prop_gradients(&self, adjoints: &Adjoints, num_props: usize) -> (Vec<f64>, Vec<bool>) {
        let mut grads = vec![0.0; num_props];
        let mut flags = vec![false; num_props];
        for (i, n) in self.nodes.iter().enumerate() {
            if let Node::Prop(p) = n {
                grads[*p] += adjoints.node[i];
                flags[*p] |= adjoints.flagged[i];
            }
        }
        (grads, flags)
    }
}

fn fold(cs: &[usize], values: &[f64], op: impl Fn(f64, f64) -> f64) -> f64 {
    let mut acc = values[cs[0]];
    for &c in &cs[1..] {
        acc = op(acc, values[c]);
    }
    acc
}

/// Evaluates a ground formula, returning the root value and the full trace.
pub fn evaluate(
    config: &LogicConfig,
    formula: &Formula,
    truths: &[f64],
) -> Result<(f64, EvalTrace), FormulaError> {
    let flat = FlatFormula::compile(formula)?;
    let trace = flat.forward(config, truths)?;
    Ok((trace.root_value(), trace))
}

fn leaf_range(f: &Formula) -> Option<(f64, f64)> {
    match f {
        Formula::Prop(_) => Some((0.0, 1.0)),
        Formula::Const(v) => Some((*v, *v)),
        Formula::Not(c) => match c.as_ref() {
            Formula::Prop(_) => Some((0.0, 1.0)),
            Formula::Const(v) => Some((1.0 - v, 1.0 - v)),
            _ => None,
        },
        _ => None,
    }
}

/// Smallest and largest value a single connective over literals and
/// constants can take when the literals vary freely.
pub fn attainable_range(
    config: &LogicConfig,
    formula: &Formula,
) -> Result<(f64, f64), FormulaError> {
    let unsupported = || FormulaError::UnsupportedNesting;
    if let Some(r) = leaf_range(formula) {
        return Ok(r);
    }
    let consts = |cs: &[Formula]| -> Result<Vec<f64>, FormulaError> {
        let mut out = Vec::new();
        for c in cs {
            match leaf_range(c).ok_or_else(unsupported)? {
                (lo, hi) if lo == hi => out.push(lo),
                _ => {}
            }
        }
        Ok(out)
    };
    match formula {
        Formula::And(cs) => {
            let k = consts(cs)?;
            Ok((
                0.0,
                k.iter().fold(1.0, |acc, &c| config.tnorm.apply(acc, c)),
            ))
        }
        Formula::Or(cs) => {
            let k = consts(cs)?;
            Ok((
                k.iter().fold(0.0, |acc, &c| config.tconorm.apply(acc, c)),
                1.0,
            ))
        }
        Formula::Aggregate(q, cs) => {
            let agg = config.aggregator(*q);
            let k = consts(cs)?;
            let free = cs.len() - k.len();
            let with = |v: f64| {
                let mut xs = k.clone();
                xs.extend(std::iter::repeat_n(v, free));
                agg.apply(&xs)
            };
            use Aggregator::*;
            match agg {
                Min | Product | LukasiewiczA | YagerA(_) | NilpotentA | Max | ProbSum
                | LukasiewiczE | YagerE(_) | NilpotentE | Gme(_) | Gm(_) | Rmse | Mae => {
                    Ok((with(0.0), with(1.0)))
                }
                LogProduct => Err(unsupported()),
            }
        }
        Formula::Implies(a, c) => {
            let (alo, ahi) = leaf_range(a).ok_or_else(unsupported)?;
            let (clo, chi) = leaf_range(c).ok_or_else(unsupported)?;
            // Implications are non-increasing in the antecedent and
            // non-decreasing in the consequent.
            Ok((
                config.implication.apply(ahi, clo),
                config.implication.apply(alo, chi),
            ))
        }
        _ => Err(unsupported()),
    }
}
