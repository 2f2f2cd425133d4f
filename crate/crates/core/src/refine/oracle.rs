//! Brute-force reference for minimal refinement, for tests.
//!
//! All but one coordinate are taken from a grid (plus the original value);
//! the remaining coordinate is solved by bisection, which is exact for the
//! monotone connectives used here. The closest feasible point wins.

use super::{Connective, RefineError, RefineInput, RefinementResult};

/// Points whose value is this close to the target count as feasible.
pub const FEASIBLE_TOL: f64 = 1e-9;

pub fn brute_force_refine(
    conn: &Connective,
    input: &RefineInput,
    grid_step: f64,
) -> Result<RefinementResult, RefineError> {
    input.validate()?;
    let n = input.t.len();
    if n == 0 || n > 4 {
        return Err(RefineError::InvalidInput(format!(
            "oracle supports 1..=4 free inputs, got {n}"
        )));
    }
    if !(grid_step >= 0.005) {
        return Err(RefineError::InvalidInput(format!(
            "grid step {grid_step} below 0.005"
        )));
    }
    let steps = (1.0 / grid_step).round() as usize;
    let mut axes: Vec<Vec<f64>> = Vec::with_capacity(n);
    for &v in &input.t {
        let mut axis: Vec<f64> = (0..=steps)
            .map(|i| (i as f64 * grid_step).min(1.0))
            .collect();
        axis.push(v);
        axes.push(axis);
    }
    let f = |x: &[f64]| conn.evaluate(x, &input.consts);
    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut point = input.t.clone();
    for j in 0..n {
        let others: Vec<usize> = (0..n).filter(|&i| i != j).collect();
        let mut counter = vec![0usize; others.len()];
        loop {
            for (slot, &i) in others.iter().enumerate() {
                point[i] = axes[i][counter[slot]];
            }
            if let Some(xj) = solve_line(&f, &mut point, j, input.t[j], input.target) {
                point[j] = xj;
                if (f(&point) - input.target).abs() <= FEASIBLE_TOL {
                    let d = input.norm.distance(&point, &input.t);
                    if best.as_ref().is_none_or(|(bd, _)| d < *bd) {
                        best = Some((d, point.clone()));
                    }
                }
            }
            // Odometer over the grid of the other coordinates.
            let mut slot = 0;
            while slot < counter.len() {
                counter[slot] += 1;
                if counter[slot] < axes[others[slot]].len() {
                    break;
                }
                counter[slot] = 0;
                slot += 1;
            }
            if slot == counter.len() {
                break;
            }
        }
    }
    let (distance, refined) = best.ok_or(RefineError::NoFeasiblePoint(input.target))?;
    Ok(RefinementResult {
        achieved: f(&refined),
        distance,
        refined,
        clamped: false,
        flagged: false,
    })
}

/// Nearest `x_j` to `start` with `f = target`, other coordinates fixed.
fn solve_line<F: Fn(&[f64]) -> f64>(
    f: &F,
    point: &mut [f64],
    j: usize,
    start: f64,
    target: f64,
) -> Option<f64> {
    let mut at = |v: f64| {
        point[j] = v;
        f(point)
    };
    let here = at(start);
    if here == target {
        return Some(start);
    }
    let up = target > here;
    let reached = |v: f64| if up { v >= target } else { v <= target };
    let mut found = None;
    for end in [0.0, 1.0] {
        if end == start || !reached(at(end)) {
            continue;
        }
        let (mut near, mut far) = (start, end);
        for _ in 0..64 {
            let mid = 0.5 * (near + far);
            if mid == near || mid == far {
                break;
            }
            if reached(at(mid)) {
                far = mid;
            } else {
                near = mid;
            }
        }
        if found.is_none_or(|x: f64| (far - start).abs() < (x - start).abs()) {
            found = Some(far);
        }
    }
    found
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ops::{TConorm, TNorm};

    #[test]
    fn identity_returns_target() {
        let r = brute_force_refine(
            &Connective::Identity,
            &RefineInput::new(vec![0.3], 0.8),
            0.05,
        )
        .unwrap();
        assert!((r.refined[0] - 0.8).abs() < 1e-12);
    }

    #[test]
    fn godel_tconorm_matches_closed_form() {
        let r = brute_force_refine(
            &Connective::TConorm(TConorm::Godel),
            &RefineInput::new(vec![0.2, 0.6], 0.8),
            0.02,
        )
        .unwrap();
        assert!((r.distance - 0.2).abs() < 1e-9, "{r:?}");
    }

    #[test]
    fn infeasible_target_is_an_error() {
        let input = RefineInput::new(vec![0.5], 0.9).with_consts(vec![0.4]);
        assert!(matches!(
            brute_force_refine(&Connective::TNorm(TNorm::Godel), &input, 0.05),
            Err(RefineError::NoFeasiblePoint(_))
        ));
    }

    #[test]
    fn rejects_large_problems() {
        assert!(brute_force_refine(
            &Connective::Identity,
            &RefineInput::new(vec![0.1; 5], 0.5),
            0.1
        )
        .is_err());
        assert!(brute_force_refine(
            &Connective::Identity,
            &RefineInput::new(vec![0.1], 0.5),
            0.001
        )
        .is_err());
    }
}
