use crate::ops::{Implication, TConorm};

use super::{
    refine_generator_residuum, refine_godel_implication, refine_tconorm, unchanged,
    AdditiveGenerator, Connective, Norm, RefineError, RefineInput, RefinementResult, TieBreak,
};

/// Refines the S-implication `S(1 - a, c)` by refining `S` at `[1 - a, c]`.
pub fn simpl_refine<F>(
    conorm_refiner: F,
    a: f64,
    c: f64,
    target: f64,
    norm: Norm,
    tie: TieBreak,
) -> Result<RefinementResult, RefineError>
where
    F: Fn(&RefineInput) -> Result<RefinementResult, RefineError>,
{
    let input = RefineInput::new(vec![1.0 - a, c], target)
        .with_norm(norm)
        .with_tie(tie);
    let r = conorm_refiner(&input)?;
    let refined = vec![1.0 - r.refined[0], r.refined[1]];
    Ok(RefinementResult {
        distance: norm.distance(&refined, &[a, c]),
        refined,
        ..r
    })
}

/// Minimal refinement of a two-place implication; `refined = [a', c']`.
pub fn refine_implication(
    kind: &Implication,
    a: f64,
    c: f64,
    target: f64,
    eps: f64,
    norm: Norm,
    tie: TieBreak,
) -> Result<RefinementResult, RefineError> {
    RefineInput::new(vec![a, c], target).validate()?;
    match kind {
        Implication::GodelR => {
            if !(eps > 0.0) {
                return Err(RefineError::InvalidInput(format!(
                    "eps must be positive, got {eps}"
                )));
            }
            let (a2, c2) = refine_godel_implication(a, c, target, eps);
            let refined = vec![a2, c2];
            Ok(RefinementResult {
                achieved: kind.apply(a2, c2),
                distance: norm.distance(&refined, &[a, c]),
                refined,
                clamped: false,
                flagged: false,
            })
        }
        Implication::Goguen => {
            if norm != Norm::L1 {
                return Err(RefineError::Unsupported(
                    "residuum refinement is only closed-form under L1".into(),
                ));
            }
            refine_generator_residuum(&AdditiveGenerator::Product, a, c, target)
        }
        _ => match kind.s_conorm() {
            Some(s @ (TConorm::Godel | TConorm::Product | TConorm::Lukasiewicz)) => {
                simpl_refine(|i| refine_tconorm(s, i), a, c, target, norm, tie)
            }
            _ => Err(RefineError::Unsupported(format!(
                "no refinement function for implication {kind:?}"
            ))),
        },
    }
}

/// Moves a single input of a monotone function `f` on `[0, 1]` to the
/// nearest point where `f` equals the target, or to the endpoint closest to
/// it when the target is out of reach. Returns a one-element result.
pub fn refine_monotone_1d<F: Fn(f64) -> f64>(f: F, x: f64, target: f64) -> RefinementResult {
    let conn = Connective::Identity;
    let input = RefineInput::new(vec![x], target);
    let here = f(x);
    if here == target {
        let mut r = unchanged(&conn, &input, false);
        r.achieved = here;
        return r;
    }
    let up = target > here;
    // The end of [0, 1] in the direction where f moves toward the target.
    let (f0, f1) = (f(0.0), f(1.0));
    let end = if (f1 - here) * (target - here) > 0.0 {
        1.0
    } else if (f0 - here) * (target - here) > 0.0 {
        0.0
    } else {
        x
    };
    let reached = |v: f64| if up { v >= target } else { v <= target };
    let (x2, clamped) = if end == x || !reached(f(end)) {
        (end, true)
    } else {
        let (mut near, mut far) = (x, end);
        for _ in 0..100 {
            let mid = 0.5 * (near + far);
            if mid == near || mid == far {
                break;
            }
            if reached(f(mid)) {
                far = mid;
            } else {
                near = mid;
            }
        }
        (far, false)
    };
    RefinementResult {
        refined: vec![x2],
        achieved: f(x2),
        distance: (x2 - x).abs(),
        clamped,
        flagged: false,
    }
}
