//! CNF to fuzzy formula, uniform random 3-SAT and a brute-force solver.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use refine_core::formula::Formula;

use crate::dimacs::CnfInstance;

/// `And` over clauses, each an `Or` of literals; variable `v` is
/// proposition `v - 1` and negative literals are wrapped in `Not`.
pub fn cnf_to_formula(inst: &CnfInstance) -> Formula {
    let clause = |c: &Vec<i32>| {
        Formula::Or(
            c.iter()
                .map(|&l| {
                    let p = Formula::Prop(l.unsigned_abs() as usize - 1);
                    if l > 0 {
                        p
                    } else {
                        Formula::not(p)
                    }
                })
                .collect(),
        )
    };
    Formula::And(inst.clauses.iter().map(clause).collect())
}

/// Clauses of three distinct variables with independent random signs.
pub fn random_3sat<R: Rng>(num_vars: usize, num_clauses: usize, rng: &mut R) -> CnfInstance {
    assert!(num_vars >= 3, "3-SAT needs at least three variables");
    let clauses = (0..num_clauses)
        .map(|_| {
            sample(rng, num_vars, 3)
                .into_iter()
                .map(|v| {
                    let v = v as i32 + 1;
                    if rng.random::<bool>() {
                        v
                    } else {
                        -v
                    }
                })
                .collect()
        })
        .collect();
    CnfInstance { num_vars, clauses }
}

/// Exhaustive search over all assignments; only for small `num_vars`.
pub fn solve_brute_force(inst: &CnfInstance) -> Option<Vec<bool>> {
    assert!(inst.num_vars <= 26, "brute force limited to 26 variables");
    let masks: Vec<(u32, u32)> = inst
        .clauses
        .iter()
        .map(|c| {
            c.iter().fold((0, 0), |(pos, neg), &l| {
                let bit = 1u32 << (l.unsigned_abs() - 1);
                if l > 0 {
                    (pos | bit, neg)
                } else {
                    (pos, neg | bit)
                }
            })
        })
        .collect();
    (0u32..1 << inst.num_vars)
        .find(|&a| masks.iter().all(|&(pos, neg)| (a & pos) | (!a & neg) != 0))
        .map(|a| (0..inst.num_vars).map(|v| a >> v & 1 == 1).collect())
}

/// Draws random 3-SAT instances from `seed` until a satisfiable one turns up.
pub fn generate_satisfiable(num_vars: usize, num_clauses: usize, seed: u64) -> CnfInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let inst = random_3sat(num_vars, num_clauses, &mut rng);
        if solve_brute_force(&inst).is_some() {
            return inst;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use refine_core::formula::{evaluate, LogicConfig};

    #[test]
    fn formula_shape() {
        let inst = CnfInstance {
            num_vars: 2,
            clauses: vec![vec![1, -2]],
        };
        let expected = Formula::And(vec![Formula::Or(vec![
            Formula::Prop(0),
            Formula::not(Formula::Prop(1)),
        ])]);
        assert_eq!(cnf_to_formula(&inst), expected);
    }

    #[test]
    fn godel_all_true_on_positive_instance() {
        let inst = CnfInstance {
            num_vars: 3,
            clauses: vec![vec![1, 2], vec![3], vec![2, 3, 1]],
        };
        let (v, _) = evaluate(&LogicConfig::godel(), &cnf_to_formula(&inst), &[1.0; 3]).unwrap();
        assert_eq!(v, 1.0);
    }

    #[test]
    fn lukasiewicz_half_satisfies_3sat() {
        let inst = generate_satisfiable(8, 30, 1);
        let (v, _) = evaluate(
            &LogicConfig::lukasiewicz(),
            &cnf_to_formula(&inst),
            &[0.5; 8],
        )
        .unwrap();
        assert_eq!(v, 1.0);
    }

    #[test]
    fn generator_is_seeded_and_checked() {
        let a = generate_satisfiable(10, 43, 5);
        assert_eq!(a, generate_satisfiable(10, 43, 5));
        assert!(a.clauses.iter().all(|c| c.len() == 3));
        let model = solve_brute_force(&a).unwrap();
        assert!(a.satisfied_by(&model));
        let unsat = CnfInstance {
            num_vars: 1,
            clauses: vec![vec![1], vec![-1]],
        };
        assert_eq!(solve_brute_force(&unsat), None);
    }
}
