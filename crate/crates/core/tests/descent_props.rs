use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use refine_core::descent::{adam_minimize, AdamParams, SurrogateKind, SurrogateLoss};
use refine_core::formula::{parse, LogicConfig};
use refine_core::refine::Norm;

fn sat_formula() -> refine_core::formula::Formula {
    parse("(and (or #0 (not #1) #2) (or (not #0) #3) (or #1 #2 (not #3)) (or (not #2) #4))")
        .unwrap()
}

#[test]
fn surrogate_gradient_matches_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let f = sat_formula();
    let h = 1e-6;
    let mut checked = 0;
    for (name, norm) in [
        ("product", Norm::L1),
        ("product", Norm::L2),
        ("product-log", Norm::L1),
    ] {
        let config = LogicConfig::from_name(name).unwrap();
        let t0: Vec<f64> = (0..5).map(|_| rng.random::<f64>()).collect();
        let loss = SurrogateLoss::new(&config, &f, &t0, 0.9)
            .unwrap()
            .with_beta(0.3)
            .unwrap()
            .with_reg_norm(norm);
        for _ in 0..50 {
            let z: Vec<f64> = (0..5).map(|_| rng.random_range(-3.0..3.0)).collect();
            let (_, grad) = loss.value_and_grad(&z);
            for i in 0..z.len() {
                let mut up = z.clone();
                let mut down = z.clone();
                up[i] += h;
                down[i] -= h;
                let fd = (loss.value_and_grad(&up).0 - loss.value_and_grad(&down).0) / (2.0 * h);
                assert!(
                    (grad[i] - fd).abs() <= 1e-6 * (1.0 + fd.abs()),
                    "{name} {norm:?} z {z:?} d{i}: {} vs {fd}",
                    grad[i]
                );
                checked += 1;
            }
        }
    }
    assert_eq!(checked, 3 * 50 * 5);
}

#[test]
fn product_roots_use_the_log_variant() {
    let f = sat_formula();
    let t0 = [0.5; 5];
    assert_eq!(
        SurrogateLoss::new(&LogicConfig::product(), &f, &t0, 1.0)
            .unwrap()
            .kind(),
        SurrogateKind::LogProduct
    );
    assert_eq!(
        SurrogateLoss::new(&LogicConfig::lukasiewicz(), &f, &t0, 1.0)
            .unwrap()
            .kind(),
        SurrogateKind::LukasiewiczSum
    );
    assert_eq!(
        SurrogateLoss::new(&LogicConfig::godel(), &f, &t0, 1.0)
            .unwrap()
            .kind(),
        SurrogateKind::Direct
    );
}

#[test]
fn a_large_regularizer_pins_the_initial_truths() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let t0: Vec<f64> = (0..5).map(|_| rng.random_range(0.05..0.95)).collect();
    for name in ["godel", "lukasiewicz", "product"] {
        let config = LogicConfig::from_name(name).unwrap();
        let loss = SurrogateLoss::new(&config, &sat_formula(), &t0, 1.0)
            .unwrap()
            .with_beta(1e3)
            .unwrap();
        let params = AdamParams {
            iterations: 200,
            stop_tol: 0.0,
            ..AdamParams::default()
        };
        let run = adam_minimize(&loss, &params).unwrap();
        let drift = run
            .final_truths
            .iter()
            .zip(&t0)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(drift <= 0.01, "{name}: drift {drift}");
    }
}

#[test]
fn trajectory_reports_linear_satisfaction() {
    let config = LogicConfig::from_name("product-log").unwrap();
    let t0 = [0.3, 0.6, 0.2, 0.7, 0.4];
    let loss = SurrogateLoss::new(&config, &sat_formula(), &t0, 1.0).unwrap();
    let run = adam_minimize(
        &loss,
        &AdamParams {
            iterations: 100,
            ..AdamParams::default()
        },
    )
    .unwrap();
    let last = run.trajectory.last().unwrap();
    assert!((0.0..=1.0).contains(&last.satisfaction));
    assert!((last.satisfaction - loss.satisfaction(&run.final_truths)).abs() <= 1e-12);
    assert!(last.satisfaction > run.trajectory[0].satisfaction);
    assert!(run.final_truths.iter().all(|&t| t > 0.0 && t < 1.0));
}

#[test]
fn iteration_zero_reports_the_initial_satisfaction() {
    let f = sat_formula();
    for t0 in [[0.3, 0.6, 0.2, 0.7, 0.4], [0.0, 1.0, 0.0, 0.5, 1.0]] {
        for name in ["godel", "lukasiewicz", "product"] {
            let config = LogicConfig::from_name(name).unwrap();
            let loss = SurrogateLoss::new(&config, &f, &t0, 1.0).unwrap();
            let run = adam_minimize(
                &loss,
                &AdamParams {
                    iterations: 1,
                    ..AdamParams::default()
                },
            )
            .unwrap();
            let direct = refine_core::formula::evaluate(&config, &f, &t0).unwrap().0;
            assert!(
                (run.trajectory[0].satisfaction - direct).abs() <= 1e-9,
                "{name} {t0:?}"
            );
        }
    }
}
