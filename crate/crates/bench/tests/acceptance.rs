//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

#![allow(clippy::type_complexity)]

use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use refine_bench::dimacs::{parse_dimacs, CnfInstance};
use refine_bench::experiment::{run_experiment, ExperimentConfig, Method, RunSummary};
use refine_core::ops::{nonvanishing_fraction_mc, Aggregator, Implication, TConorm, TNorm};
use refine_core::refine::oracle::brute_force_refine;
use refine_core::refine::{
    refine_implication, refine_tconorm, refine_tnorm, Connective, Norm, RefineInput,
    RefinementResult, TieBreak, DEFAULT_EPS_IMPL,
};

const CHAIR_VALUE: f64 = 0.612;
const CHAIR_VALUE_TOL: f64 = 5e-4;
const CHAIR_GRAD_TOL: f64 = 1e-3;
const FD_STEP: f64 = 1e-5;
const FD_ABS_TOL: f64 = 1e-6;
const FD_REL_TOL: f64 = 1e-4;
const KINK_MARGIN: f64 = 0.05;
const FD_POINTS: usize = 100;
const EXACT_CASES: usize = 1000;
const EXACT_TOL: f64 = 1e-9;
const MINIMAL_CASES: usize = 200;
const GRID_STEP: f64 = 0.025;
const FRACTION_SAMPLES: usize = 100_000;
const FRACTION_TOL: f64 = 0.02;
const SEEDS: [u64; 3] = [1, 2, 3];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data")
}

fn refine_cli(args: &[&str]) -> String {
    let out = Command::new(env!("CARGO_BIN_EXE_refine"))
        .args(args)
        .output()
        .expect("run refine");
    assert!(
        out.status.success(),
        "refine {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf-8 output")
}

struct ChairRun {
    loss: f64,
    valuation: f64,
    grads: Vec<(String, f64)>,
}

fn chair_cli() -> ChairRun {
    let kb = data_dir().join("chair.json");
    let text = refine_cli(&["dfl", "--kb", kb.to_str().unwrap(), "--config", "product"]);
    let mut run = ChairRun {
        loss: f64::NAN,
        valuation: f64::NAN,
        grads: Vec::new(),
    };
    for line in text.lines() {
        if let Some(v) = line.strip_prefix("# loss: ") {
            run.loss = v.parse().unwrap();
        } else if let Some(v) = line.strip_prefix("# valuation[0]: ") {
            run.valuation = v.parse().unwrap();
        } else if !line.starts_with('#') && line != "atom,grad,flagged" {
            // Atom names contain commas; the gradient is the second-to-last field.
            let mut fields = line.rsplitn(3, ',');
            let _flag = fields.next();
            let g: f64 = fields.next().unwrap().parse().unwrap();
            run.grads.push((fields.next().unwrap().to_string(), g));
        }
    }
    run
}

/// Closed form of the chair rule under product logic with Reichenbach
/// implication: prod over x, y of `1 - chair(x) partOf(y,x) (1-cushion(y)) (1-armRest(y))`.
fn chair_closed_form(v: &[f64; 10]) -> f64 {
    let [chair1, chair2, cushion1, cushion2, arm1, arm2, p11, p22, p12, p21] = *v;
    let chair = [chair1, chair2];
    let cushion = [cushion1, cushion2];
    let arm = [arm1, arm2];
    // part[y][x] = partOf(o_{y+1}, o_{x+1})
    let part = [[p11, p12], [p21, p22]];
    let mut prod = 1.0;
    for x in 0..2 {
        for y in 0..2 {
            prod *= 1.0 - chair[x] * part[y][x] * (1.0 - cushion[y]) * (1.0 - arm[y]);
        }
    }
    prod
}

const CHAIR_ATOMS: [&str; 10] = [
    "chair(o1)",
    "chair(o2)",
    "cushion(o1)",
    "cushion(o2)",
    "armRest(o1)",
    "armRest(o2)",
    "partOf(o1,o1)",
    "partOf(o2,o2)",
    "partOf(o1,o2)",
    "partOf(o2,o1)",
];
const CHAIR_TRUTHS: [f64; 10] = [0.9, 0.4, 0.05, 0.5, 0.05, 0.1, 0.001, 0.001, 0.01, 0.95];
/// Reference partials to 4 decimals, in `CHAIR_ATOMS` order. They are derivatives of the
/// valuation, so they equal minus the loss gradient.
const CHAIR_REFERENCE: [f64; 10] = [
    -0.4261, -0.0058, 0.0029, 0.7662, 0.0029, 0.4257, -0.4978, -0.1103, -0.2219, -0.4031,
];

fn criterion_1() -> Outcome {
    let run = chair_cli();
    let oracle = chair_closed_form(&CHAIR_TRUTHS);
    let pass = (run.valuation - CHAIR_VALUE).abs() <= CHAIR_VALUE_TOL
        && (run.loss + CHAIR_VALUE).abs() <= CHAIR_VALUE_TOL
        && (run.valuation - oracle).abs() <= 1e-12;
    outcome(
        pass,
        format!(
            "valuation {:.6} loss {:.6} (closed form {oracle:.6})",
            run.valuation, run.loss
        ),
    )
}

fn criterion_2() -> Outcome {
    let run = chair_cli();
    let mut worst = 0.0f64;
    let mut missing = Vec::new();
    for (atom, expected) in CHAIR_ATOMS.iter().zip(CHAIR_REFERENCE) {
        match run.grads.iter().find(|(a, _)| a == atom) {
            Some((_, g)) => worst = worst.max((-g - expected).abs()),
            None => missing.push(*atom),
        }
    }
    // Independent check of the signs and magnitudes against the closed form.
    let mut oracle_err = 0.0f64;
    for (i, atom) in CHAIR_ATOMS.iter().enumerate() {
        let mut up = CHAIR_TRUTHS;
        let mut down = CHAIR_TRUTHS;
        up[i] += 1e-6;
        down[i] -= 1e-6;
        let dval = (chair_closed_form(&up) - chair_closed_form(&down)) / 2e-6;
        if let Some((_, g)) = run.grads.iter().find(|(a, _)| a == atom) {
            oracle_err = oracle_err.max((-g - dval).abs());
        }
    }
    let pass = missing.is_empty()
        && run.grads.len() == CHAIR_ATOMS.len()
        && worst <= CHAIR_GRAD_TOL
        && oracle_err <= 1e-8;
    outcome(
        pass,
        format!(
            "{} of {} partials (the KB has 10 ground atoms), max |-dL - reference| {worst:.2e}, vs closed form {oracle_err:.2e}{}",
            CHAIR_ATOMS.len() - missing.len(),
            CHAIR_ATOMS.len(),
            if missing.is_empty() { String::new() } else { format!(", missing {missing:?}") }
        ),
    )
}

type Grad = (Vec<f64>, bool);
type Kinks = Box<dyn Fn(&[f64]) -> Vec<f64>>;

/// A differentiable operator together with the level-set functions whose
/// zeros are its kinks.
struct Smooth {
    name: String,
    arity: usize,
    value: Box<dyn Fn(&[f64]) -> f64>,
    grad: Box<dyn Fn(&[f64]) -> Grad>,
    kinks: Kinks,
}

fn pair_kinks(x: &[f64]) -> Vec<f64> {
    let mut k = Vec::new();
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            k.push(x[i] - x[j]);
            k.push(x[i] + x[j] - 1.0);
        }
    }
    k
}

fn smooth_tnorm(kind: TNorm) -> Smooth {
    let kinks: Kinks = match kind {
        TNorm::Godel => Box::new(|x| vec![x[0] - x[1]]),
        TNorm::Lukasiewicz => Box::new(|x| vec![x[0] + x[1] - 1.0]),
        TNorm::NilpotentMin => Box::new(pair_kinks),
        TNorm::Yager(p) => Box::new(move |x| {
            vec![((1.0 - x[0]).powf(p) + (1.0 - x[1]).powf(p)).powf(1.0 / p) - 1.0]
        }),
        TNorm::Product | TNorm::Drastic => Box::new(|_| vec![]),
    };
    Smooth {
        name: format!("T {kind:?}"),
        arity: 2,
        value: Box::new(move |x| kind.apply(x[0], x[1])),
        grad: Box::new(move |x| {
            let p = kind.grad(x[0], x[1]);
            (vec![p.first, p.second], p.flagged)
        }),
        kinks,
    }
}

fn smooth_tconorm(kind: TConorm) -> Smooth {
    let kinks: Kinks = match kind {
        TConorm::Godel => Box::new(|x| vec![x[0] - x[1]]),
        TConorm::Lukasiewicz => Box::new(|x| vec![x[0] + x[1] - 1.0]),
        TConorm::NilpotentMax => Box::new(pair_kinks),
        TConorm::Yager(p) => {
            Box::new(move |x| vec![(x[0].powf(p) + x[1].powf(p)).powf(1.0 / p) - 1.0])
        }
        TConorm::Product | TConorm::Drastic => Box::new(|_| vec![]),
    };
    Smooth {
        name: format!("S {kind:?}"),
        arity: 2,
        value: Box::new(move |x| kind.apply(x[0], x[1])),
        grad: Box::new(move |x| {
            let p = kind.grad(x[0], x[1]);
            (vec![p.first, p.second], p.flagged)
        }),
        kinks,
    }
}

fn implication_kinks(kind: &Implication, a: f64, c: f64) -> Vec<f64> {
    match kind {
        Implication::KleeneDienes => vec![1.0 - a - c],
        Implication::Lukasiewicz
        | Implication::GodelR
        | Implication::Goguen
        | Implication::YagerR(_) => vec![a - c],
        Implication::Fodor => vec![a - c, 1.0 - a - c],
        Implication::YagerS(p) => vec![((1.0 - a).powf(*p) + c.powf(*p)).powf(1.0 / p) - 1.0],
        Implication::Sigmoidal(sig) => implication_kinks(sig.inner(), a, c),
        Implication::Reichenbach | Implication::DuboisPrade | Implication::WeberR => vec![],
    }
}

fn smooth_implication(kind: Implication) -> Smooth {
    let (k1, k2, k3) = (kind.clone(), kind.clone(), kind.clone());
    Smooth {
        name: format!("I {kind:?}"),
        arity: 2,
        value: Box::new(move |x| k1.apply(x[0], x[1])),
        grad: Box::new(move |x| {
            let p = k2.grad(x[0], x[1]);
            (vec![p.first, p.second], p.flagged)
        }),
        kinks: Box::new(move |x| implication_kinks(&k3, x[0], x[1])),
    }
}

fn smooth_aggregator(kind: Aggregator, n: usize) -> Smooth {
    let kinks: Kinks = match kind {
        Aggregator::Min | Aggregator::Max => {
            Box::new(|x| pair_kinks(x).into_iter().step_by(2).collect())
        }
        Aggregator::NilpotentA | Aggregator::NilpotentE => Box::new(pair_kinks),
        Aggregator::LukasiewiczA => {
            Box::new(|x| vec![x.iter().sum::<f64>() - (x.len() as f64 - 1.0)])
        }
        Aggregator::LukasiewiczE => Box::new(|x| vec![x.iter().sum::<f64>() - 1.0]),
        Aggregator::YagerA(p) => Box::new(move |x| {
            vec![
                x.iter()
                    .map(|v| (1.0 - v).powf(p))
                    .sum::<f64>()
                    .powf(1.0 / p)
                    - 1.0,
            ]
        }),
        Aggregator::YagerE(p) => {
            Box::new(move |x| vec![x.iter().map(|v| v.powf(p)).sum::<f64>().powf(1.0 / p) - 1.0])
        }
        _ => Box::new(|_| vec![]),
    };
    Smooth {
        name: format!("A {kind:?}"),
        arity: n,
        value: Box::new(move |x| kind.apply(x)),
        grad: Box::new(move |x| {
            let g = kind.grad(x);
            (g.grad, g.flagged)
        }),
        kinks,
    }
}

fn operator_suite() -> Vec<Smooth> {
    let mut ops = Vec::new();
    for t in [
        TNorm::Godel,
        TNorm::Product,
        TNorm::Lukasiewicz,
        TNorm::Drastic,
        TNorm::NilpotentMin,
        TNorm::Yager(2.0),
        TNorm::Yager(3.5),
    ] {
        ops.push(smooth_tnorm(t));
        ops.push(smooth_tconorm(t.dual()));
    }
    let implications = vec![
        Implication::KleeneDienes,
        Implication::Reichenbach,
        Implication::Lukasiewicz,
        Implication::DuboisPrade,
        Implication::Fodor,
        Implication::GodelR,
        Implication::Goguen,
        Implication::WeberR,
        Implication::YagerS(2.0),
        Implication::YagerR(2.0),
        Implication::sigmoidal(Implication::Reichenbach, 9.0, -0.5).unwrap(),
        Implication::sigmoidal(Implication::Lukasiewicz, 4.0, -0.5).unwrap(),
    ];
    ops.extend(implications.into_iter().map(smooth_implication));
    let aggregators = [
        Aggregator::Min,
        Aggregator::Max,
        Aggregator::Product,
        Aggregator::LogProduct,
        Aggregator::LukasiewiczA,
        Aggregator::LukasiewiczE,
        Aggregator::YagerA(2.0),
        Aggregator::YagerE(2.0),
        Aggregator::NilpotentA,
        Aggregator::NilpotentE,
        Aggregator::Gme(2.0),
        Aggregator::Gm(1.5),
        Aggregator::Rmse,
        Aggregator::Mae,
        Aggregator::ProbSum,
    ];
    for n in [3, 5] {
        ops.extend(aggregators.iter().map(|&a| smooth_aggregator(a, n)));
    }
    ops
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut failures = Vec::new();
    let mut checked = 0;
    let ops = operator_suite();
    for op in &ops {
        let mut points = 0;
        let mut attempts = 0;
        while points < FD_POINTS && attempts < 1_000_000 {
            attempts += 1;
            let x: Vec<f64> = (0..op.arity)
                .map(|_| rng.random_range(KINK_MARGIN..=1.0 - KINK_MARGIN))
                .collect();
            if (op.kinks)(&x).iter().any(|k| k.abs() < KINK_MARGIN) {
                continue;
            }
            points += 1;
            let (grad, flagged) = (op.grad)(&x);
            if flagged {
                failures.push(format!("{} flagged at {x:?}", op.name));
                continue;
            }
            for i in 0..op.arity {
                let mut up = x.clone();
                let mut down = x.clone();
                up[i] += FD_STEP;
                down[i] -= FD_STEP;
                let fd = ((op.value)(&up) - (op.value)(&down)) / (2.0 * FD_STEP);
                let tol = FD_ABS_TOL.max(FD_REL_TOL * fd.abs());
                checked += 1;
                if (grad[i] - fd).abs() > tol {
                    failures.push(format!(
                        "{} d{i} at {x:?}: analytic {} fd {fd}",
                        op.name, grad[i]
                    ));
                }
            }
        }
        if points < FD_POINTS {
            failures.push(format!("{}: only {points} admissible points", op.name));
        }
    }
    let detail = format!(
        "{} operators, {checked} partials, {} mismatches",
        ops.len(),
        failures.len()
    );
    match failures.first() {
        None => outcome(true, detail),
        Some(f) => outcome(false, format!("{detail}; first: {f}")),
    }
}

#[derive(Clone)]
enum Refiner {
    Nary(Connective, Norm),
    Implication(Implication, Norm),
}

impl Refiner {
    fn name(&self) -> String {
        match self {
            Refiner::Nary(c, n) => format!("{c:?}/{n:?}"),
            Refiner::Implication(i, n) => format!("{i:?}/{n:?}"),
        }
    }

    fn connective(&self) -> Connective {
        match self {
            Refiner::Nary(c, _) => c.clone(),
            Refiner::Implication(i, _) => Connective::Implication(i.clone()),
        }
    }

    fn norm(&self) -> Norm {
        match self {
            Refiner::Nary(_, n) | Refiner::Implication(_, n) => *n,
        }
    }

    fn run(&self, t: &[f64], target: f64) -> RefinementResult {
        let input = RefineInput::new(t.to_vec(), target).with_norm(self.norm());
        match self {
            Refiner::Nary(Connective::TNorm(k), _) => refine_tnorm(*k, &input),
            Refiner::Nary(Connective::TConorm(k), _) => refine_tconorm(*k, &input),
            Refiner::Implication(i, n) => refine_implication(
                i,
                t[0],
                t[1],
                target,
                DEFAULT_EPS_IMPL,
                *n,
                TieBreak::Lowest,
            ),
            Refiner::Nary(c, _) => panic!("no refiner for {c:?}"),
        }
        .unwrap_or_else(|e| panic!("{} at {t:?} -> {target}: {e}", self.name()))
    }
}

/// Every closed-form refiner with the norms it supports.
fn refiners() -> Vec<Refiner> {
    let mut out = Vec::new();
    for (t, l2) in [
        (TNorm::Godel, true),
        (TNorm::Lukasiewicz, true),
        (TNorm::Product, false),
        (TNorm::Yager(2.0), false),
    ] {
        let norms: &[Norm] = if l2 {
            &[Norm::L1, Norm::L2]
        } else {
            &[Norm::L1]
        };
        for &n in norms {
            out.push(Refiner::Nary(Connective::TNorm(t), n));
            out.push(Refiner::Nary(Connective::TConorm(t.dual()), n));
        }
    }
    for (i, l2) in [
        (Implication::KleeneDienes, true),
        (Implication::Reichenbach, false),
        (Implication::Lukasiewicz, true),
        (Implication::GodelR, true),
        (Implication::Goguen, false),
    ] {
        out.push(Refiner::Implication(i.clone(), Norm::L1));
        if l2 {
            out.push(Refiner::Implication(i, Norm::L2));
        }
    }
    out
}

/// A random case: inputs, then a target inside the attainable range.
fn random_case(rng: &mut ChaCha8Rng, r: &Refiner, n: usize) -> (Vec<f64>, f64) {
    let conn = r.connective();
    let n = if matches!(r, Refiner::Implication(..)) {
        2
    } else {
        n
    };
    let mut t: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
    if matches!(r, Refiner::Implication(Implication::Goguen, _)) {
        // At a = 0 only the value 1 is reachable by moving c alone; keep a away.
        t[0] = t[0].max(0.01);
    }
    let (lo, hi) = conn.attainable_range(n, &[]);
    (t, lo + rng.random::<f64>() * (hi - lo))
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let refiners = refiners();
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    for r in &refiners {
        for case in 0..EXACT_CASES {
            let (t, target) = random_case(&mut rng, r, 2 + case % 4);
            let res = r.run(&t, target);
            let err = (r.connective().evaluate(&res.refined, &[]) - target).abs();
            worst = worst.max(err);
            if err > EXACT_TOL || res.refined.iter().any(|v| !(0.0..=1.0).contains(v)) {
                failures.push(format!(
                    "{} {t:?} -> {target}: {:?} err {err:e}",
                    r.name(),
                    res.refined
                ));
            }
        }
    }
    let detail = format!(
        "{} refiners x {EXACT_CASES} cases, max |f - target| {worst:.1e}, {} failures",
        refiners.len(),
        failures.len()
    );
    match failures.first() {
        None => outcome(true, detail),
        Some(f) => outcome(false, format!("{detail}; first: {f}")),
    }
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let refiners = refiners();
    let mut failures = Vec::new();
    let mut worst_excess = f64::NEG_INFINITY;
    let mut flagged = 0;
    for r in &refiners {
        for case in 0..MINIMAL_CASES {
            let n = 2 + case % 2;
            let (t, target) = random_case(&mut rng, r, n);
            let closed = r.run(&t, target);
            flagged += closed.flagged as usize;
            let input = RefineInput::new(t.clone(), target).with_norm(r.norm());
            let oracle =
                brute_force_refine(&r.connective(), &input, GRID_STEP).expect("oracle point");
            let bound = t.len() as f64 * GRID_STEP;
            worst_excess = worst_excess.max(closed.distance - oracle.distance);
            if closed.distance > oracle.distance + bound {
                failures.push(format!(
                    "{} {t:?} -> {target}: closed {} oracle {}",
                    r.name(),
                    closed.distance,
                    oracle.distance
                ));
            }
        }
    }
    let detail = format!(
        "{} refiners x {MINIMAL_CASES} cases, max (closed - oracle) {worst_excess:.1e} vs bound n*{GRID_STEP}, {flagged} flagged, {} failures",
        refiners.len(),
        failures.len()
    );
    match failures.first() {
        None => outcome(true, detail),
        Some(f) => outcome(false, format!("{detail}; first: {f}")),
    }
}

/// Volume of the positive orthant of the unit `n`-ball.
fn orthant_ball_volume(n: u32) -> f64 {
    // Gamma(n/2 + 1) by the half-integer recurrence.
    let mut gamma = if n.is_multiple_of(2) {
        1.0
    } else {
        PI.sqrt() / 2.0
    };
    let mut k = if n.is_multiple_of(2) { 1.0 } else { 1.5 };
    while k <= n as f64 / 2.0 {
        gamma *= k;
        k += 1.0;
    }
    PI.powf(n as f64 / 2.0) / gamma / 2f64.powi(n as i32)
}

fn criterion_6() -> Outcome {
    let n = 3;
    let cases = [
        ("lukasiewicz", Aggregator::LukasiewiczA, 1.0 / 6.0),
        (
            "nilpotent",
            Aggregator::NilpotentA,
            1.0 / 2f64.powi(n as i32 - 1),
        ),
        ("yager p=2", Aggregator::YagerA(2.0), orthant_ball_volume(n)),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, agg, expected) in cases {
        let f = nonvanishing_fraction_mc(agg, n as usize, FRACTION_SAMPLES, 1).unwrap();
        pass &= (f - expected).abs() <= FRACTION_TOL;
        parts.push(format!("{name} {f:.4} (expected {expected:.4})"));
    }
    outcome(pass, parts.join(", "))
}

fn vendored_instances() -> Vec<(String, CnfInstance)> {
    let dir = data_dir().join("uf20-91");
    let mut paths: Vec<PathBuf> = std::fs::read_dir(&dir)
        .expect("vendored instances")
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "cnf"))
        .collect();
    paths.sort();
    paths
        .iter()
        .map(|p| {
            let text = std::fs::read_to_string(p).unwrap();
            (
                p.file_stem().unwrap().to_string_lossy().into_owned(),
                parse_dimacs(&text).unwrap(),
            )
        })
        .collect()
}

fn experiment(cfg: ExperimentConfig) -> Vec<RunSummary> {
    run_experiment(&vendored_instances(), &cfg)
        .expect("experiment runs")
        .1
}

fn sat_config(
    methods: &[Method],
    logic: &str,
    alphas: &[f64],
    max_clauses: Option<usize>,
) -> ExperimentConfig {
    ExperimentConfig {
        methods: methods.to_vec(),
        logics: vec![logic.into()],
        alphas: alphas.to_vec(),
        max_clauses,
        seeds: SEEDS.to_vec(),
        ..ExperimentConfig::default()
    }
}

fn criterion_7() -> Outcome {
    let runs = experiment(sat_config(&[Method::Ilr], "lukasiewicz", &[1.0], None));
    let fast = runs
        .iter()
        .filter(|r| r.feasible && r.iterations_used <= 5)
        .count();
    let iters: Vec<usize> = runs.iter().map(|r| r.iterations_used).collect();
    let feasible = runs.iter().filter(|r| r.feasible).count();
    outcome(
        runs.len() == 9 && fast >= 7,
        format!("{fast}/{} runs feasible within 5 iterations (need 7), {feasible} feasible overall, iterations {iters:?}", runs.len()),
    )
}

fn criterion_8() -> Outcome {
    let runs = experiment(sat_config(
        &[Method::Ilr, Method::Adam],
        "godel",
        &[0.1, 1.0],
        None,
    ));
    let feasible = runs
        .iter()
        .filter(|r| r.feasible || r.satisfaction >= 1.0)
        .count();
    let best = runs.iter().map(|r| r.satisfaction).fold(0.0, f64::max);
    outcome(
        runs.len() == 27 && feasible == 0,
        format!(
            "{feasible}/{} runs feasible, best satisfaction {best:.4}",
            runs.len()
        ),
    )
}

fn criterion_9() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for logic in ["godel", "lukasiewicz", "product"] {
        let runs = experiment(sat_config(&[Method::Ilr], logic, &[1.0], Some(20)));
        let feasible = runs.iter().filter(|r| r.feasible).count();
        // At least 80% of 9 runs.
        pass &= runs.len() == 9 && feasible * 10 >= runs.len() * 8;
        parts.push(format!("{logic} {feasible}/{}", runs.len()));
    }
    outcome(
        pass,
        format!("{} feasible (need 8/9 each)", parts.join(", ")),
    )
}

fn criterion_10() -> Outcome {
    let mut cfg = sat_config(&[Method::Adam], "lukasiewicz", &[], Some(20));
    cfg.max_iters = 500;
    let runs = experiment(cfg);
    let feasible = runs.iter().filter(|r| r.feasible).count();
    let iters: Vec<usize> = runs.iter().map(|r| r.iterations_used).collect();
    outcome(
        runs.len() == 9 && feasible == runs.len(),
        format!("{feasible}/{} runs feasible within 500 iterations (beta 0.1, lr 0.01), iterations {iters:?}", runs.len()),
    )
}

fn main() -> ExitCode {
    let criteria: [(u32, &str, fn() -> Outcome, u64); 10] = [
        (1, "chair valuation", criterion_1, 1),
        (2, "chair gradients", criterion_2, 1),
        (3, "derivative suite", criterion_3, 30),
        (4, "refinement exactness", criterion_4, 10),
        (5, "refinement minimality", criterion_5, 60),
        (6, "nonvanishing fractions", criterion_6, 10),
        (7, "ILR speed on 91 clauses", criterion_7, 10),
        (8, "Godel infeasibility", criterion_8, 60),
        (9, "20-clause feasibility", criterion_9, 30),
        (10, "ADAM baseline", criterion_10, 60),
    ];
    let mut failed = 0;
    for (id, name, check, budget) in criteria {
        let start = Instant::now();
        let out = check();
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(budget);
        let pass = out.pass && in_time;
        failed += !pass as usize;
        println!(
            "criterion {id:>2} {}: {name}: {} [{:.2}s / {budget}s{}]",
            if pass { "PASS" } else { "FAIL" },
            out.detail,
            elapsed.as_secs_f64(),
            if in_time { "" } else { ", over budget" }
        );
    }
    println!(
        "criterion 11 INFO: exact SAT curves are not compared; the regularization weight, learning rate, instance set and seed count behind them are unknown"
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
