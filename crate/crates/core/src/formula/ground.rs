use std::collections::{BTreeMap, HashMap};
use std::fmt;

use super::{Formula, FormulaError, PropId, Quantifier};

/// A predicate applied to domain objects, e.g. `partOf(o2,o1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroundAtom {
    pub predicate: String,
    pub args: Vec<String>,
}

impl GroundAtom {
    pub fn new(predicate: impl Into<String>, args: &[&str]) -> Self {
        GroundAtom {
            predicate: predicate.into(),
            args: args.iter().map(|s| s.to_string()).collect(),
        }
    }

    /// Parses `p(a,b)`, `p()` or `p`.
    pub fn parse(text: &str) -> Result<Self, FormulaError> {
        let bad = || FormulaError::BadAtom(text.to_string());
        let text = text.trim();
        let Some(open) = text.find('(') else {
            if text.is_empty() || text.contains(')') || text.contains(',') {
                return Err(bad());
            }
            return Ok(GroundAtom {
                predicate: text.to_string(),
                args: Vec::new(),
            });
        };
        let inner = text[open + 1..].strip_suffix(')').ok_or_else(bad)?;
        let predicate = text[..open].trim();
        if predicate.is_empty() || inner.contains('(') || inner.contains(')') {
            return Err(bad());
        }
        let args: Vec<String> = if inner.trim().is_empty() {
            Vec::new()
        } else {
            inner.split(',').map(|a| a.trim().to_string()).collect()
        };
        if args.iter().any(|a| a.is_empty()) {
            return Err(bad());
        }
        Ok(GroundAtom {
            predicate: predicate.to_string(),
            args,
        })
    }
}

impl fmt::Display for GroundAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.args.is_empty() {
            write!(f, "{}", self.predicate)
        } else {
            write!(f, "{}({})", self.predicate, self.args.join(","))
        }
    }
}

/// Finite domain, predicate signature and a truth value per ground atom.
/// Ground atoms receive dense proposition ids in insertion order.
#[derive(Debug, Clone, Default)]
pub struct Interpretation {
    domain: Vec<String>,
    arities: BTreeMap<String, usize>,
    atoms: Vec<GroundAtom>,
    index: HashMap<GroundAtom, PropId>,
    truths: Vec<f64>,
}

impl Interpretation {
    pub fn new(domain: Vec<String>, arities: BTreeMap<String, usize>) -> Self {
        Interpretation {
            domain,
            arities,
            ..Default::default()
        }
    }

    pub fn domain(&self) -> &[String] {
        &self.domain
    }

    pub fn arity(&self, predicate: &str) -> Option<usize> {
        self.arities.get(predicate).copied()
    }

    /// Inserts or overwrites the truth value of `atom`, returning its id.
    pub fn set(&mut self, atom: GroundAtom, value: f64) -> Result<PropId, FormulaError> {
        if !(0.0..=1.0).contains(&value) {
            return Err(FormulaError::InvalidConstant(value));
        }
        match self.arities.get(&atom.predicate) {
            None => return Err(FormulaError::UnknownPredicate(atom.predicate.clone())),
            Some(&k) if k != atom.args.len() => {
                return Err(FormulaError::ArityMismatch {
                    predicate: atom.predicate.clone(),
                    expected: k,
                    found: atom.args.len(),
                })
            }
            _ => {}
        }
        if let Some(obj) = atom.args.iter().find(|a| !self.domain.contains(a)) {
            return Err(FormulaError::UnknownObject(obj.clone()));
        }
        if let Some(&id) = self.index.get(&atom) {
            self.truths[id] = value;
            return Ok(id);
        }
        let id = self.atoms.len();
        self.index.insert(atom.clone(), id);
        self.atoms.push(atom);
        self.truths.push(value);
        Ok(id)
    }

    pub fn id(&self, atom: &GroundAtom) -> Option<PropId> {
        self.index.get(atom).copied()
    }

    pub fn atom(&self, id: PropId) -> &GroundAtom {
        &self.atoms[id]
    }

    pub fn atoms(&self) -> &[GroundAtom] {
        &self.atoms
    }

    pub fn truths(&self) -> &[f64] {
        &self.truths
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }
}

/// Expands quantifiers over the interpretation's domain and replaces atoms
/// by their proposition ids. Multi-variable quantifiers enumerate
/// assignments lexicographically with the first variable outermost.
pub fn ground(formula: &Formula, interp: &Interpretation) -> Result<Formula, FormulaError> {
    let mut env: Vec<(String, usize)> = Vec::new();
    ground_rec(formula, interp, &mut env)
}

fn ground_rec(
    f: &Formula,
    interp: &Interpretation,
    env: &mut Vec<(String, usize)>,
) -> Result<Formula, FormulaError> {
    Ok(match f {
        Formula::Prop(_) | Formula::Const(_) => f.clone(),
        Formula::Atom { predicate, args } => {
            let expected = interp
                .arity(predicate)
                .ok_or_else(|| FormulaError::UnknownPredicate(predicate.clone()))?;
            if expected != args.len() {
                return Err(FormulaError::ArityMismatch {
                    predicate: predicate.clone(),
                    expected,
                    found: args.len(),
                });
            }
            let mut objects = Vec::with_capacity(args.len());
            for a in args {
                let (_, obj) = env
                    .iter()
                    .rev()
                    .find(|(v, _)| v == a)
                    .ok_or_else(|| FormulaError::UnboundVariable(a.clone()))?;
                objects.push(interp.domain[*obj].clone());
            }
            let atom = GroundAtom {
                predicate: predicate.clone(),
                args: objects,
            };
            let id = interp
                .id(&atom)
                .ok_or_else(|| FormulaError::MissingAtom(atom.to_string()))?;
            Formula::Prop(id)
        }
        Formula::Not(c) => Formula::not(ground_rec(c, interp, env)?),
        Formula::And(cs) => Formula::And(ground_all(cs, interp, env)?),
        Formula::Or(cs) => Formula::Or(ground_all(cs, interp, env)?),
        Formula::Aggregate(q, cs) => Formula::Aggregate(*q, ground_all(cs, interp, env)?),
        Formula::Implies(a, c) => {
            Formula::implies(ground_rec(a, interp, env)?, ground_rec(c, interp, env)?)
        }
        Formula::Forall(vars, body) => {
            Formula::Aggregate(Quantifier::Universal, expand(vars, body, interp, env)?)
        }
        Formula::Exists(vars, body) => {
            Formula::Aggregate(Quantifier::Existential, expand(vars, body, interp, env)?)
        }
    })
}

fn ground_all(
    cs: &[Formula],
    interp: &Interpretation,
    env: &mut Vec<(String, usize)>,
) -> Result<Vec<Formula>, FormulaError> {
    cs.iter().map(|c| ground_rec(c, interp, env)).collect()
}

fn expand(
    vars: &[String],
    body: &Formula,
    interp: &Interpretation,
    env: &mut Vec<(String, usize)>,
) -> Result<Vec<Formula>, FormulaError> {
    let size = interp.domain.len();
    if size == 0 {
        return Err(FormulaError::EmptyDomain);
    }
    for (i, v) in vars.iter().enumerate() {
        if env.iter().any(|(b, _)| b == v) || vars[..i].contains(v) {
            return Err(FormulaError::VariableRebound(v.clone()));
        }
    }
    let base = env.len();
    let k = vars.len();
    let count = size
        .checked_pow(k as u32)
        .ok_or(FormulaError::TooManyInstances)?;
    let mut out = Vec::with_capacity(count);
    let mut digits = vec![0usize; k];
    for _ in 0..count {
        env.truncate(base);
        env.extend(vars.iter().cloned().zip(digits.iter().copied()));
        out.push(ground_rec(body, interp, env)?);
        for d in (0..k).rev() {
            digits[d] += 1;
            if digits[d] < size {
                break;
            }
            digits[d] = 0;
        }
    }
    env.truncate(base);
    Ok(out)
}
