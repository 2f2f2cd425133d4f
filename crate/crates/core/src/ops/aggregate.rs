use super::OpsError;

/// Floor used for `1/x` in the log-product gradient.
pub const EPS_LOG: f64 = 1e-30;

/// Variadic operators used for the quantifiers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Aggregator {
    Min,
    Max,
    Product,
    /// Sum of logarithms; only meaningful as the outermost universal aggregator.
    LogProduct,
    LukasiewiczA,
    LukasiewiczE,
    YagerA(f64),
    YagerE(f64),
    NilpotentA,
    NilpotentE,
    /// Generalized mean error `1 - (mean (1-x)^p)^(1/p)`.
    Gme(f64),
    /// Generalized mean `(mean x^p)^(1/p)`.
    Gm(f64),
    Rmse,
    Mae,
    ProbSum,
}

/// Gradient of an aggregator; `flagged` marks kinks and singular points.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateGrad {
    pub grad: Vec<f64>,
    pub flagged: bool,
}

impl AggregateGrad {
    fn zeros(n: usize, flagged: bool) -> Self {
        AggregateGrad {
            grad: vec![0.0; n],
            flagged,
        }
    }

    fn unit(n: usize, i: usize, flagged: bool) -> Self {
        let mut grad = vec![0.0; n];
        grad[i] = 1.0;
        AggregateGrad { grad, flagged }
    }

    fn sanitized(mut self) -> Self {
        for g in &mut self.grad {
            if !g.is_finite() {
                *g = 0.0;
                self.flagged = true;
            }
        }
        self
    }
}

impl Aggregator {
    /// Whether the aggregator generalizes a conjunction (used for `forall`).
    pub fn is_universal(self) -> bool {
        use Aggregator::*;
        matches!(
            self,
            Min | Product
                | LogProduct
                | LukasiewiczA
                | YagerA(_)
                | NilpotentA
                | Gme(_)
                | Rmse
                | Mae
        )
    }

    pub fn validate(self) -> Result<(), OpsError> {
        let check = |what, p: f64| {
            if p.is_finite() && p > 0.0 {
                Ok(())
            } else {
                Err(OpsError::InvalidParameter { what, p })
            }
        };
        match self {
            Aggregator::YagerA(p) | Aggregator::YagerE(p) => check("Yager aggregator", p),
            Aggregator::Gme(p) => check("generalized mean error", p),
            Aggregator::Gm(p) => check("generalized mean", p),
            _ => Ok(()),
        }
    }

    /// Value on the empty input: the neutral element of the underlying operator.
    pub fn empty_value(self) -> f64 {
        match self {
            Aggregator::LogProduct => 0.0,
            k if k.is_universal() => 1.0,
            _ => 0.0,
        }
    }

    pub fn apply(self, xs: &[f64]) -> f64 {
        if xs.is_empty() {
            return self.empty_value();
        }
        let n = xs.len() as f64;
        match self {
            Aggregator::Min => xs.iter().copied().fold(f64::INFINITY, f64::min),
            Aggregator::Max => xs.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            Aggregator::Product => xs.iter().product(),
            Aggregator::LogProduct => xs.iter().map(|x| x.ln()).sum(),
            Aggregator::LukasiewiczA => (xs.iter().sum::<f64>() - (n - 1.0)).max(0.0),
            Aggregator::LukasiewiczE => xs.iter().sum::<f64>().min(1.0),
            Aggregator::YagerA(p) => {
                let s: f64 = xs.iter().map(|x| (1.0 - x).powf(p)).sum();
                (1.0 - s.powf(1.0 / p)).max(0.0)
            }
            Aggregator::YagerE(p) => {
                let s: f64 = xs.iter().map(|x| x.powf(p)).sum();
                s.powf(1.0 / p).min(1.0)
            }
            Aggregator::NilpotentA => {
                if xs.len() == 1 {
                    return xs[0];
                }
                let (i, j) = two_smallest(xs);
                if xs[i] + xs[j] > 1.0 {
                    xs[i]
                } else {
                    0.0
                }
            }
            Aggregator::NilpotentE => {
                if xs.len() == 1 {
                    return xs[0];
                }
                let (i, j) = two_largest(xs);
                if xs[i] + xs[j] < 1.0 {
                    xs[i]
                } else {
                    1.0
                }
            }
            Aggregator::Gme(p) => {
                let mean: f64 = xs.iter().map(|x| (1.0 - x).powf(p)).sum::<f64>() / n;
                1.0 - mean.powf(1.0 / p)
            }
            Aggregator::Gm(p) => {
                let mean: f64 = xs.iter().map(|x| x.powf(p)).sum::<f64>() / n;
                mean.powf(1.0 / p)
            }
            Aggregator::Rmse => Aggregator::Gme(2.0).apply(xs),
            Aggregator::Mae => Aggregator::Gme(1.0).apply(xs),
            Aggregator::ProbSum => 1.0 - xs.iter().map(|x| 1.0 - x).product::<f64>(),
        }
    }

    pub fn grad(self, xs: &[f64]) -> AggregateGrad {
        let len = xs.len();
        if len == 0 {
            return AggregateGrad::zeros(0, false);
        }
        let n = len as f64;
        match self {
            Aggregator::Min => {
                let i = argmin(xs);
                AggregateGrad::unit(len, i, count_equal(xs, xs[i]) > 1)
            }
            Aggregator::Max => {
                let i = argmax(xs);
                AggregateGrad::unit(len, i, count_equal(xs, xs[i]) > 1)
            }
            Aggregator::Product => AggregateGrad {
                grad: leave_one_out_products(xs.iter().copied()),
                flagged: false,
            },
            Aggregator::LogProduct => AggregateGrad {
                grad: xs.iter().map(|x| 1.0 / x.max(EPS_LOG)).collect(),
                flagged: xs.iter().any(|&x| x < EPS_LOG),
            },
            Aggregator::LukasiewiczA => {
                let s = xs.iter().sum::<f64>() - (n - 1.0);
                if s >= 0.0 {
                    AggregateGrad {
                        grad: vec![1.0; len],
                        flagged: s == 0.0,
                    }
                } else {
                    AggregateGrad::zeros(len, false)
                }
            }
            Aggregator::LukasiewiczE => {
                let s = xs.iter().sum::<f64>();
                if s <= 1.0 {
                    AggregateGrad {
                        grad: vec![1.0; len],
                        flagged: s == 1.0,
                    }
                } else {
                    AggregateGrad::zeros(len, false)
                }
            }
            Aggregator::YagerA(p) => {
                let s: f64 = xs.iter().map(|x| (1.0 - x).powf(p)).sum();
                if s > 1.0 {
                    AggregateGrad::zeros(len, false)
                } else if s == 0.0 {
                    AggregateGrad::zeros(len, true)
                } else {
                    let base = s.powf(1.0 / p - 1.0);
                    AggregateGrad {
                        grad: xs.iter().map(|x| base * (1.0 - x).powf(p - 1.0)).collect(),
                        flagged: s == 1.0,
                    }
                    .sanitized()
                }
            }
            Aggregator::YagerE(p) => {
                let s: f64 = xs.iter().map(|x| x.powf(p)).sum();
                if s > 1.0 {
                    AggregateGrad::zeros(len, false)
                } else if s == 0.0 {
                    AggregateGrad::zeros(len, true)
                } else {
                    let base = s.powf(1.0 / p - 1.0);
                    AggregateGrad {
                        grad: xs.iter().map(|x| base * x.powf(p - 1.0)).collect(),
                        flagged: s == 1.0,
                    }
                    .sanitized()
                }
            }
            Aggregator::NilpotentA => {
                if len == 1 {
                    return AggregateGrad::unit(1, 0, false);
                }
                let (i, j) = two_smallest(xs);
                let s = xs[i] + xs[j];
                if s > 1.0 {
                    AggregateGrad::unit(len, i, xs[i] == xs[j])
                } else {
                    AggregateGrad::zeros(len, s == 1.0)
                }
            }
            Aggregator::NilpotentE => {
                if len == 1 {
                    return AggregateGrad::unit(1, 0, false);
                }
                let (i, j) = two_largest(xs);
                let s = xs[i] + xs[j];
                if s < 1.0 {
                    AggregateGrad::unit(len, i, xs[i] == xs[j])
                } else {
                    AggregateGrad::zeros(len, s == 1.0)
                }
            }
            Aggregator::Gme(p) => {
                let s: f64 = xs.iter().map(|x| (1.0 - x).powf(p)).sum();
                let scale = (1.0 / n).powf(1.0 / p) * s.powf(1.0 / p - 1.0);
                AggregateGrad {
                    grad: xs.iter().map(|x| scale * (1.0 - x).powf(p - 1.0)).collect(),
                    flagged: false,
                }
                .sanitized()
            }
            Aggregator::Gm(p) => {
                let mean: f64 = xs.iter().map(|x| x.powf(p)).sum::<f64>() / n;
                let scale = mean.powf(1.0 / p - 1.0) / n;
                AggregateGrad {
                    grad: xs.iter().map(|x| scale * x.powf(p - 1.0)).collect(),
                    flagged: false,
                }
                .sanitized()
            }
            Aggregator::Rmse => Aggregator::Gme(2.0).grad(xs),
            Aggregator::Mae => Aggregator::Gme(1.0).grad(xs),
            Aggregator::ProbSum => AggregateGrad {
                grad: leave_one_out_products(xs.iter().map(|x| 1.0 - x)),
                flagged: false,
            },
        }
    }
}

/// Lowest index of the minimum.
pub(crate) fn argmin(xs: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in xs.iter().enumerate().skip(1) {
        if x < xs[best] {
            best = i;
        }
    }
    best
}

/// Lowest index of the maximum.
pub(crate) fn argmax(xs: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in xs.iter().enumerate().skip(1) {
        if x > xs[best] {
            best = i;
        }
    }
    best
}

fn count_equal(xs: &[f64], v: f64) -> usize {
    xs.iter().filter(|&&x| x == v).count()
}

fn two_smallest(xs: &[f64]) -> (usize, usize) {
    let i = argmin(xs);
    let j = (0..xs.len())
        .filter(|&k| k != i)
        .min_by(|&a, &b| xs[a].total_cmp(&xs[b]))
        .unwrap();
    (i, j)
}

fn two_largest(xs: &[f64]) -> (usize, usize) {
    let i = argmax(xs);
    let j = (0..xs.len())
        .filter(|&k| k != i)
        .max_by(|&a, &b| xs[a].total_cmp(&xs[b]))
        .unwrap();
    (i, j)
}

fn leave_one_out_products(values: impl Iterator<Item = f64>) -> Vec<f64> {
    let v: Vec<f64> = values.collect();
    let mut out = vec![1.0; v.len()];
    let mut acc = 1.0;
    for i in 0..v.len() {
        out[i] = acc;
        acc *= v[i];
    }
    acc = 1.0;
    for i in (0..v.len()).rev() {
        out[i] *= acc;
        acc *= v[i];
    }
    out
}
