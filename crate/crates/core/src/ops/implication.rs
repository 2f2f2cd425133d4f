use super::{OpsError, Partials, TConorm};

/// Guard for the Goguen division `c / a` as `a` approaches 0.
pub const EPS_DIV: f64 = 1e-12;

/// Fuzzy implications `I(a, c)`: S-implications, R-implications (residua)
/// and sigmoidal wrappers around either.
#[derive(Debug, Clone, PartialEq)]
pub enum Implication {
    KleeneDienes,
    Reichenbach,
    Lukasiewicz,
    DuboisPrade,
    Fodor,
    GodelR,
    Goguen,
    WeberR,
    YagerS(f64),
    YagerR(f64),
    Sigmoidal(Box<Sigmoidal>),
}

/// Rescaled logistic squashing of a base implication that keeps the values
/// 0 and 1 fixed.
#[derive(Debug, Clone, PartialEq)]
pub struct Sigmoidal {
    inner: Implication,
    s: f64,
    b0: f64,
    d: f64,
    h: f64,
}

fn logistic(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

impl Sigmoidal {
    pub const DEFAULT_OFFSET: f64 = -0.5;

    pub fn new(inner: Implication, s: f64, b0: f64) -> Result<Self, OpsError> {
        if !(s.is_finite() && s > 0.0 && b0.is_finite()) {
            return Err(OpsError::InvalidSigmoid { s, b0 });
        }
        inner.validate()?;
        let lo = (-s * (1.0 + b0)).exp();
        let hi = (-s * b0).exp();
        let d = (1.0 + lo) / (hi - lo);
        let h = 1.0 + hi;
        if !(d.is_finite() && h.is_finite()) {
            return Err(OpsError::InvalidSigmoid { s, b0 });
        }
        Ok(Sigmoidal { inner, s, b0, d, h })
    }

    pub fn inner(&self) -> &Implication {
        &self.inner
    }

    pub fn steepness(&self) -> f64 {
        self.s
    }

    pub fn offset(&self) -> f64 {
        self.b0
    }

    pub fn squash(&self, i: f64) -> f64 {
        if i <= 0.0 {
            return 0.0;
        }
        if i >= 1.0 {
            return 1.0;
        }
        (self.d * (self.h * logistic(self.s * (i + self.b0)) - 1.0)).clamp(0.0, 1.0)
    }

    pub fn squash_derivative(&self, i: f64) -> f64 {
        let sig = logistic(self.s * (i + self.b0));
        self.d * self.h * self.s * sig * (1.0 - sig)
    }
}

impl Implication {
    pub fn sigmoidal(inner: Implication, s: f64, b0: f64) -> Result<Self, OpsError> {
        Ok(Implication::Sigmoidal(Box::new(Sigmoidal::new(
            inner, s, b0,
        )?)))
    }

    pub fn validate(&self) -> Result<(), OpsError> {
        match self {
            Implication::YagerS(p) => TConorm::Yager(*p).validate(),
            Implication::YagerR(p) => {
                if p.is_finite() && *p > 0.0 {
                    Ok(())
                } else {
                    Err(OpsError::InvalidParameter {
                        what: "Yager R-implication",
                        p: *p,
                    })
                }
            }
            Implication::Sigmoidal(sig) => sig.inner.validate(),
            _ => Ok(()),
        }
    }

    /// The t-conorm `S` with `I(a, c) = S(1 - a, c)`, if this is an S-implication.
    pub fn s_conorm(&self) -> Option<TConorm> {
        match self {
            Implication::KleeneDienes => Some(TConorm::Godel),
            Implication::Reichenbach => Some(TConorm::Product),
            Implication::Lukasiewicz => Some(TConorm::Lukasiewicz),
            Implication::DuboisPrade => Some(TConorm::Drastic),
            Implication::Fodor => Some(TConorm::NilpotentMax),
            Implication::YagerS(p) => Some(TConorm::Yager(*p)),
            _ => None,
        }
    }

    pub fn apply(&self, a: f64, c: f64) -> f64 {
        match self {
            Implication::KleeneDienes => (1.0 - a).max(c),
            Implication::Reichenbach => 1.0 - a + a * c,
            Implication::Lukasiewicz => (1.0 - a + c).min(1.0),
            Implication::DuboisPrade => {
                if a == 1.0 {
                    c
                } else if c == 0.0 {
                    1.0 - a
                } else {
                    1.0
                }
            }
            Implication::Fodor => {
                if a <= c {
                    1.0
                } else {
                    (1.0 - a).max(c)
                }
            }
            Implication::GodelR => {
                if a <= c {
                    1.0
                } else {
                    c
                }
            }
            Implication::Goguen => {
                if a <= c {
                    1.0
                } else if a <= EPS_DIV {
                    (c / EPS_DIV).min(1.0)
                } else {
                    c / a
                }
            }
            Implication::WeberR => {
                if a < 1.0 {
                    1.0
                } else {
                    c
                }
            }
            Implication::YagerS(p) => ((1.0 - a).powf(*p) + c.powf(*p)).powf(1.0 / p).min(1.0),
            Implication::YagerR(p) => {
                if a <= c {
                    1.0
                } else {
                    let d = (1.0 - c).powf(*p) - (1.0 - a).powf(*p);
                    (1.0 - d.max(0.0).powf(1.0 / p)).clamp(0.0, 1.0)
                }
            }
            Implication::Sigmoidal(sig) => sig.squash(sig.inner.apply(a, c)),
        }
    }

    /// Returns `(dI/da, dI/dc)`.
    pub fn grad(&self, a: f64, c: f64) -> Partials {
        match self {
            Implication::KleeneDienes => kleene_dienes_grad(a, c),
            Implication::Reichenbach => Partials::new(c - 1.0, a),
            Implication::Lukasiewicz => {
                if a >= c {
                    Partials::new(-1.0, 1.0).flag_if(a == c)
                } else {
                    Partials::new(0.0, 0.0)
                }
            }
            Implication::DuboisPrade => {
                if a == 1.0 {
                    Partials::new(0.0, 1.0).flag_if(true)
                } else if c == 0.0 {
                    Partials::new(-1.0, 0.0).flag_if(true)
                } else {
                    Partials::new(0.0, 0.0)
                }
            }
            Implication::Fodor => {
                if a <= c {
                    Partials::new(0.0, 0.0).flag_if(a == c)
                } else {
                    kleene_dienes_grad(a, c)
                }
            }
            Implication::GodelR => {
                if a > c {
                    Partials::new(0.0, 1.0)
                } else {
                    Partials::new(0.0, 0.0).flag_if(a == c)
                }
            }
            Implication::Goguen => {
                if a > c {
                    let guarded = a.max(EPS_DIV);
                    let cap = 1.0 / EPS_DIV;
                    Partials::new(
                        (-c / (guarded * guarded)).max(-cap),
                        (1.0 / guarded).min(cap),
                    )
                    .flag_if(a <= EPS_DIV)
                } else {
                    Partials::new(0.0, 0.0).flag_if(a == c)
                }
            }
            Implication::WeberR => {
                if a == 1.0 {
                    Partials::new(0.0, 1.0).flag_if(true)
                } else {
                    Partials::new(0.0, 0.0)
                }
            }
            Implication::YagerS(p) => {
                let x = 1.0 - a;
                let s = x.powf(*p) + c.powf(*p);
                if s > 1.0 {
                    Partials::new(0.0, 0.0)
                } else if s == 0.0 {
                    Partials::new(0.0, 0.0).flag_if(true)
                } else {
                    let base = s.powf(1.0 / p - 1.0);
                    Partials::new(-base * x.powf(p - 1.0), base * c.powf(p - 1.0))
                        .flag_if(s == 1.0)
                        .sanitized()
                }
            }
            Implication::YagerR(p) => {
                if a <= c {
                    Partials::new(0.0, 0.0).flag_if(a == c)
                } else {
                    let d = (1.0 - c).powf(*p) - (1.0 - a).powf(*p);
                    let base = d.powf(1.0 / p - 1.0);
                    Partials::new(
                        -base * (1.0 - a).powf(p - 1.0),
                        base * (1.0 - c).powf(p - 1.0),
                    )
                    .sanitized()
                }
            }
            Implication::Sigmoidal(sig) => {
                let inner = sig.inner.grad(a, c);
                let k = sig.squash_derivative(sig.inner.apply(a, c));
                Partials {
                    first: k * inner.first,
                    second: k * inner.second,
                    flagged: inner.flagged,
                }
                .sanitized()
            }
        }
    }
}

fn kleene_dienes_grad(a: f64, c: f64) -> Partials {
    let na = 1.0 - a;
    if na >= c {
        Partials::new(-1.0, 0.0).flag_if(na == c)
    } else {
        Partials::new(0.0, 1.0)
    }
}
