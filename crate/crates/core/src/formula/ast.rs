use std::fmt;

use super::FormulaError;

/// Dense index of a proposition (a ground atom once grounded).
pub type PropId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quantifier {
    Universal,
    Existential,
}

/// Propositional or first-order formula tree.
///
/// `Atom`, `Forall` and `Exists` only appear before grounding; grounding
/// replaces them by `Prop` leaves and `Aggregate` nodes.
#[derive(Debug, Clone, PartialEq)]
pub enum Formula {
    Prop(PropId),
    Const(f64),
    Atom {
        predicate: String,
        args: Vec<String>,
    },
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Forall(Vec<String>, Box<Formula>),
    Exists(Vec<String>, Box<Formula>),
    Aggregate(Quantifier, Vec<Formula>),
}

impl Formula {
    pub fn prop(id: PropId) -> Formula {
        Formula::Prop(id)
    }

    pub fn constant(value: f64) -> Result<Formula, FormulaError> {
        if (0.0..=1.0).contains(&value) {
            Ok(Formula::Const(value))
        } else {
            Err(FormulaError::InvalidConstant(value))
        }
    }

    pub fn atom(predicate: impl Into<String>, args: &[&str]) -> Formula {
        Formula::Atom {
            predicate: predicate.into(),
            args: args.iter().map(|s| s.to_string()).collect(),
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(child: Formula) -> Formula {
        Formula::Not(Box::new(child))
    }

    pub fn and(children: Vec<Formula>) -> Result<Formula, FormulaError> {
        if children.is_empty() {
            return Err(FormulaError::EmptyConnective("and"));
        }
        Ok(Formula::And(children))
    }

    pub fn or(children: Vec<Formula>) -> Result<Formula, FormulaError> {
        if children.is_empty() {
            return Err(FormulaError::EmptyConnective("or"));
        }
        Ok(Formula::Or(children))
    }

    pub fn implies(antecedent: Formula, consequent: Formula) -> Formula {
        Formula::Implies(Box::new(antecedent), Box::new(consequent))
    }

    pub fn forall(vars: &[&str], body: Formula) -> Formula {
        Formula::Forall(vars.iter().map(|s| s.to_string()).collect(), Box::new(body))
    }

    pub fn exists(vars: &[&str], body: Formula) -> Formula {
        Formula::Exists(vars.iter().map(|s| s.to_string()).collect(), Box::new(body))
    }

    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Prop(_) | Formula::Const(_) | Formula::Atom { .. } => Vec::new(),
            Formula::Not(c) | Formula::Forall(_, c) | Formula::Exists(_, c) => vec![c],
            Formula::And(cs) | Formula::Or(cs) | Formula::Aggregate(_, cs) => cs.iter().collect(),
            Formula::Implies(a, c) => vec![a, c],
        }
    }

    pub fn node_count(&self) -> usize {
        1 + self
            .children()
            .iter()
            .map(|c| c.node_count())
            .sum::<usize>()
    }

    /// True when the formula has no atoms or quantifiers left.
    pub fn is_ground(&self) -> bool {
        match self {
            Formula::Atom { .. } | Formula::Forall(..) | Formula::Exists(..) => false,
            _ => self.children().iter().all(|c| c.is_ground()),
        }
    }

    /// Distinct proposition ids, in ascending order.
    pub fn props(&self) -> Vec<PropId> {
        let mut out = Vec::new();
        self.collect_props(&mut out);
        out.sort_unstable();
        out.dedup();
        out
    }

    fn collect_props(&self, out: &mut Vec<PropId>) {
        if let Formula::Prop(p) = self {
            out.push(*p);
        }
        for c in self.children() {
            c.collect_props(out);
        }
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, head: &str, items: &[Formula]) -> fmt::Result {
    write!(f, "({head}")?;
    for item in items {
        write!(f, " {item}")?;
    }
    write!(f, ")")
}

/// Prints the prefix s-expression syntax accepted by [`super::parse`].
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Prop(p) => write!(f, "#{p}"),
            Formula::Const(v) => write!(f, "{v}"),
            Formula::Atom { predicate, args } => {
                if args.is_empty() {
                    write!(f, "{predicate}")
                } else {
                    write!(f, "({predicate} {})", args.join(" "))
                }
            }
            Formula::Not(c) => write!(f, "(not {c})"),
            Formula::And(cs) => write_list(f, "and", cs),
            Formula::Or(cs) => write_list(f, "or", cs),
            Formula::Implies(a, c) => write!(f, "(=> {a} {c})"),
            Formula::Forall(vars, body) => write!(f, "(forall ({}) {body})", vars.join(" ")),
            Formula::Exists(vars, body) => write!(f, "(exists ({}) {body})", vars.join(" ")),
            Formula::Aggregate(Quantifier::Universal, cs) => write_list(f, "forall*", cs),
            Formula::Aggregate(Quantifier::Existential, cs) => write_list(f, "exists*", cs),
        }
    }
}

/// A top-level knowledge-base formula with its weight.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedFormula {
    pub weight: f64,
    pub formula: Formula,
}

impl WeightedFormula {
    pub fn new(weight: f64, formula: Formula) -> Result<Self, FormulaError> {
        if !(weight.is_finite() && weight > 0.0) {
            return Err(FormulaError::InvalidWeight(weight));
        }
        Ok(WeightedFormula { weight, formula })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn node_count_and_props() {
        let f = Formula::and(vec![
            Formula::not(Formula::prop(3)),
            Formula::or(vec![Formula::prop(1), Formula::prop(3)]).unwrap(),
        ])
        .unwrap();
        assert_eq!(f.node_count(), 6);
        assert_eq!(f.props(), vec![1, 3]);
        assert!(f.is_ground());
        assert!(!Formula::atom("p", &["x"]).is_ground());
    }

    #[test]
    fn display_is_prefix_syntax() {
        let f = Formula::forall(
            &["x"],
            Formula::implies(Formula::atom("chair", &["x"]), Formula::Const(0.5)),
        );
        assert_eq!(f.to_string(), "(forall (x) (=> (chair x) 0.5))");
    }

    #[test]
    fn rejects_bad_construction() {
        assert!(Formula::and(vec![]).is_err());
        assert!(Formula::constant(1.5).is_err());
        assert!(WeightedFormula::new(0.0, Formula::Const(1.0)).is_err());
    }
}
