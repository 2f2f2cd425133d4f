use std::collections::BTreeMap;

use serde::Deserialize;

use super::{ground, parse, FormulaError, GroundAtom, Interpretation, WeightedFormula};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct KbFile {
    domain: Vec<String>,
    predicates: BTreeMap<String, usize>,
    formulas: Vec<KbFormula>,
    interpretation: BTreeMap<String, f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct KbFormula {
    #[serde(default = "unit_weight")]
    weight: f64,
    expr: String,
}

fn unit_weight() -> f64 {
    1.0
}

/// A weighted knowledge base together with the interpretation it is
/// evaluated under. Atoms get proposition ids in sorted key order.
#[derive(Debug, Clone)]
pub struct KnowledgeBase {
    pub interpretation: Interpretation,
    pub formulas: Vec<WeightedFormula>,
}

impl KnowledgeBase {
    /// Reads the JSON layout
    /// `{"domain": [..], "predicates": {name: arity}, "formulas": [{"weight": w, "expr": s}], "interpretation": {"p(a)": v}}`.
    pub fn from_json(text: &str) -> Result<Self, FormulaError> {
        let file: KbFile =
            serde_json::from_str(text).map_err(|e| FormulaError::Json(e.to_string()))?;
        let mut interpretation = Interpretation::new(file.domain, file.predicates);
        for (key, value) in &file.interpretation {
            interpretation.set(GroundAtom::parse(key)?, *value)?;
        }
        let formulas = file
            .formulas
            .iter()
            .map(|f| WeightedFormula::new(f.weight, parse(&f.expr)?))
            .collect::<Result<_, _>>()?;
        Ok(KnowledgeBase {
            interpretation,
            formulas,
        })
    }

    /// Grounds every formula over the interpretation's domain.
    pub fn grounded(&self) -> Result<Vec<WeightedFormula>, FormulaError> {
        self.formulas
            .iter()
            .map(|wf| {
                Ok(WeightedFormula {
                    weight: wf.weight,
                    formula: ground(&wf.formula, &self.interpretation)?,
                })
            })
            .collect()
    }
}
