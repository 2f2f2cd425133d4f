use super::{OpsError, Partials};

/// Fuzzy conjunctions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TNorm {
    Godel,
    Product,
    Lukasiewicz,
    Drastic,
    NilpotentMin,
    /// Yager family with exponent `p`; a t-norm only for `p >= 1`.
    Yager(f64),
}

/// Fuzzy disjunctions, each the strong-negation dual of the t-norm with the
/// same name.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TConorm {
    Godel,
    Product,
    Lukasiewicz,
    Drastic,
    NilpotentMax,
    Yager(f64),
}

fn check_p(what: &'static str, p: f64, min: f64, inclusive: bool) -> Result<(), OpsError> {
    let ok = p.is_finite() && if inclusive { p >= min } else { p > min };
    if ok {
        Ok(())
    } else {
        Err(OpsError::InvalidParameter { what, p })
    }
}

impl TNorm {
    pub fn dual(self) -> TConorm {
        match self {
            TNorm::Godel => TConorm::Godel,
            TNorm::Product => TConorm::Product,
            TNorm::Lukasiewicz => TConorm::Lukasiewicz,
            TNorm::Drastic => TConorm::Drastic,
            TNorm::NilpotentMin => TConorm::NilpotentMax,
            TNorm::Yager(p) => TConorm::Yager(p),
        }
    }

    /// Checks the t-norm axioms' parameter range (Yager needs `p >= 1`).
    pub fn validate(self) -> Result<(), OpsError> {
        match self {
            TNorm::Yager(p) => check_p("Yager t-norm", p, 1.0, true),
            _ => Ok(()),
        }
    }

    /// Looser check for analysis use, where any `p > 0` is accepted.
    pub fn validate_relaxed(self) -> Result<(), OpsError> {
        match self {
            TNorm::Yager(p) => check_p("Yager t-norm", p, 0.0, false),
            _ => Ok(()),
        }
    }

    pub fn apply(self, a: f64, b: f64) -> f64 {
        // Neutral and absorbing elements are handled first so that T(1, a) = a
        // and T(0, a) = 0 hold exactly; `1 - (1 - a)` does not round-trip in
        // floating point.
        if a == 1.0 {
            return b;
        }
        if b == 1.0 {
            return a;
        }
        if a == 0.0 || b == 0.0 {
            return 0.0;
        }
        match self {
            TNorm::Godel => a.min(b),
            TNorm::Product => a * b,
            TNorm::Lukasiewicz => (a + b - 1.0).max(0.0),
            TNorm::Drastic => 0.0,
            TNorm::NilpotentMin => {
                if a + b > 1.0 {
                    a.min(b)
                } else {
                    0.0
                }
            }
            TNorm::Yager(p) => {
                let s = (1.0 - a).powf(p) + (1.0 - b).powf(p);
                (1.0 - s.powf(1.0 / p)).max(0.0)
            }
        }
    }

    pub fn grad(self, a: f64, b: f64) -> Partials {
        match self {
            TNorm::Godel => godel_min_grad(a, b),
            TNorm::Product => Partials::new(b, a),
            TNorm::Lukasiewicz => {
                let s = a + b - 1.0;
                if s >= 0.0 {
                    Partials::new(1.0, 1.0).flag_if(s == 0.0)
                } else {
                    Partials::new(0.0, 0.0)
                }
            }
            TNorm::Drastic => {
                if b == 1.0 {
                    Partials::new(1.0, 0.0).flag_if(true)
                } else if a == 1.0 {
                    Partials::new(0.0, 1.0).flag_if(true)
                } else {
                    Partials::new(0.0, 0.0)
                }
            }
            TNorm::NilpotentMin => {
                let s = a + b;
                if s > 1.0 {
                    godel_min_grad(a, b)
                } else {
                    Partials::new(0.0, 0.0).flag_if(s == 1.0)
                }
            }
            TNorm::Yager(p) => {
                let (x, y) = (1.0 - a, 1.0 - b);
                let s = x.powf(p) + y.powf(p);
                if s > 1.0 {
                    Partials::new(0.0, 0.0)
                } else if s == 0.0 {
                    Partials::new(0.0, 0.0).flag_if(true)
                } else {
                    let base = s.powf(1.0 / p - 1.0);
                    Partials::new(base * x.powf(p - 1.0), base * y.powf(p - 1.0))
                        .flag_if(s == 1.0)
                        .sanitized()
                }
            }
        }
    }
}

fn godel_min_grad(a: f64, b: f64) -> Partials {
    if a <= b {
        Partials::new(1.0, 0.0).flag_if(a == b)
    } else {
        Partials::new(0.0, 1.0)
    }
}

impl TConorm {
    pub fn dual(self) -> TNorm {
        match self {
            TConorm::Godel => TNorm::Godel,
            TConorm::Product => TNorm::Product,
            TConorm::Lukasiewicz => TNorm::Lukasiewicz,
            TConorm::Drastic => TNorm::Drastic,
            TConorm::NilpotentMax => TNorm::NilpotentMin,
            TConorm::Yager(p) => TNorm::Yager(p),
        }
    }

    pub fn validate(self) -> Result<(), OpsError> {
        match self {
            TConorm::Yager(p) => check_p("Yager t-conorm", p, 1.0, true),
            _ => Ok(()),
        }
    }

    pub fn validate_relaxed(self) -> Result<(), OpsError> {
        match self {
            TConorm::Yager(p) => check_p("Yager t-conorm", p, 0.0, false),
            _ => Ok(()),
        }
    }

    pub fn apply(self, a: f64, b: f64) -> f64 {
        if a == 0.0 {
            return b;
        }
        if b == 0.0 {
            return a;
        }
        if a == 1.0 || b == 1.0 {
            return 1.0;
        }
        match self {
            TConorm::Godel => a.max(b),
            TConorm::Product => (a + b - a * b).min(1.0),
            TConorm::Lukasiewicz => (a + b).min(1.0),
            TConorm::Drastic => 1.0,
            TConorm::NilpotentMax => {
                if a + b >= 1.0 {
                    1.0
                } else {
                    a.max(b)
                }
            }
            TConorm::Yager(p) => (a.powf(p) + b.powf(p)).powf(1.0 / p).min(1.0),
        }
    }

    /// Derivatives through the dual: dS/da (a, b) = dT/dx (1 - a, 1 - b).
    pub fn grad(self, a: f64, b: f64) -> Partials {
        self.dual().grad(1.0 - a, 1.0 - b)
    }
}
