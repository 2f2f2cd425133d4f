use crate::ops::{Aggregator, Implication, TConorm, TNorm};

use super::{FormulaError, Quantifier};

/// Which implication a symmetric configuration pairs with its t-norm.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImplicationFlavor {
    /// `I(a, c) = S(1 - a, c)` with the dual t-conorm.
    S,
    /// The residuum of the t-norm.
    R,
}

/// Operator tuple fixing a fuzzy semantics. Negation is always `1 - a`.
#[derive(Debug, Clone, PartialEq)]
pub struct LogicConfig {
    pub tnorm: TNorm,
    pub tconorm: TConorm,
    pub implication: Implication,
    pub universal: Aggregator,
    pub existential: Aggregator,
}

impl LogicConfig {
    /// Builds every operator from one t-norm family: the dual t-conorm, the
    /// S- or R-implication and the n-ary extensions as aggregators.
    pub fn symmetric(tnorm: TNorm, flavor: ImplicationFlavor) -> Result<Self, FormulaError> {
        tnorm
            .validate()
            .map_err(|e| FormulaError::UnsupportedConfig(e.to_string()))?;
        use ImplicationFlavor::*;
        let (implication, universal, existential) = match (tnorm, flavor) {
            (TNorm::Godel, S) => (Implication::KleeneDienes, Aggregator::Min, Aggregator::Max),
            (TNorm::Godel, R) => (Implication::GodelR, Aggregator::Min, Aggregator::Max),
            (TNorm::Product, S) => (
                Implication::Reichenbach,
                Aggregator::Product,
                Aggregator::ProbSum,
            ),
            (TNorm::Product, R) => (
                Implication::Goguen,
                Aggregator::Product,
                Aggregator::ProbSum,
            ),
            (TNorm::Lukasiewicz, _) => (
                Implication::Lukasiewicz,
                Aggregator::LukasiewiczA,
                Aggregator::LukasiewiczE,
            ),
            (TNorm::NilpotentMin, _) => (
                Implication::Fodor,
                Aggregator::NilpotentA,
                Aggregator::NilpotentE,
            ),
            (TNorm::Yager(p), S) => (
                Implication::YagerS(p),
                Aggregator::YagerA(p),
                Aggregator::YagerE(p),
            ),
            (TNorm::Yager(p), R) => (
                Implication::YagerR(p),
                Aggregator::YagerA(p),
                Aggregator::YagerE(p),
            ),
            (TNorm::Drastic, _) => {
                return Err(FormulaError::UnsupportedConfig(
                    "the drastic t-norm has no aggregator in this library".into(),
                ))
            }
        };
        Ok(LogicConfig {
            tnorm,
            tconorm: tnorm.dual(),
            implication,
            universal,
            existential,
        })
    }

    pub fn godel() -> Self {
        Self::symmetric(TNorm::Godel, ImplicationFlavor::S).expect("valid preset")
    }

    pub fn product() -> Self {
        Self::symmetric(TNorm::Product, ImplicationFlavor::S).expect("valid preset")
    }

    pub fn lukasiewicz() -> Self {
        Self::symmetric(TNorm::Lukasiewicz, ImplicationFlavor::S).expect("valid preset")
    }

    /// Parses a preset name:
    ///
    /// | name | t-norm | implication |
    /// |---|---|---|
    /// | `godel`, `godel-r` | min | Kleene-Dienes, Gödel |
    /// | `product`, `product-r` | product | Reichenbach, Goguen |
    /// | `product-log` | product | Reichenbach, log-product `forall` |
    /// | `lukasiewicz` | Łukasiewicz | Łukasiewicz |
    /// | `nilpotent` | nilpotent min | Fodor |
    /// | `yager:P`, `yager-r:P` | Yager | Yager S / R |
    /// | `<name>+sigmoid:S` | as `<name>` | sigmoidal wrapper with slope `S` |
    pub fn from_name(name: &str) -> Result<Self, FormulaError> {
        let unsupported =
            || FormulaError::UnsupportedConfig(format!("unknown logic configuration '{name}'"));
        let (base, sigmoid) = match name.split_once("+sigmoid:") {
            Some((b, s)) => (b, Some(s.parse::<f64>().map_err(|_| unsupported())?)),
            None => (name, None),
        };
        let (family, param) = match base.split_once(':') {
            Some((f, p)) => (f, Some(p.parse::<f64>().map_err(|_| unsupported())?)),
            None => (base, None),
        };
        use ImplicationFlavor::*;
        let mut cfg = match (family.to_ascii_lowercase().as_str(), param) {
            ("godel" | "goedel", None) => Self::symmetric(TNorm::Godel, S)?,
            ("godel-r" | "goedel-r", None) => Self::symmetric(TNorm::Godel, R)?,
            ("product", None) => Self::symmetric(TNorm::Product, S)?,
            ("product-r", None) => Self::symmetric(TNorm::Product, R)?,
            ("product-log", None) => {
                let mut c = Self::symmetric(TNorm::Product, S)?;
                c.universal = Aggregator::LogProduct;
                c
            }
            ("lukasiewicz" | "luk", None) => Self::symmetric(TNorm::Lukasiewicz, S)?,
            ("nilpotent", None) => Self::symmetric(TNorm::NilpotentMin, S)?,
            ("yager", Some(p)) => Self::symmetric(TNorm::Yager(p), S)?,
            ("yager-r", Some(p)) => Self::symmetric(TNorm::Yager(p), R)?,
            _ => return Err(unsupported()),
        };
        if let Some(s) = sigmoid {
            cfg.implication = Implication::sigmoidal(cfg.implication, s, -0.5)
                .map_err(|e| FormulaError::UnsupportedConfig(e.to_string()))?;
        }
        Ok(cfg)
    }

    pub fn aggregator(&self, q: Quantifier) -> Aggregator {
        match q {
            Quantifier::Universal => self.universal,
            Quantifier::Existential => self.existential,
        }
    }
}
