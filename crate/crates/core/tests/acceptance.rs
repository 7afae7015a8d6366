//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tlsynth::cost::{int, parse_rational, rat, ExtendedCost, Rational};
use tlsynth::debruijn::{DualGraph, Edge};
use tlsynth::harness::{measure_ratio, Algorithm, GeneratorSpec, Guarantee, MeasureConfig};
use tlsynth::policy::{policy_from_rows, DeterministicPolicy, RandomizedPolicy, SlidingWindow, TablePolicy};
use tlsynth::problem::{bundled_names, file_migration, load_bundled, LocalProblem};
use tlsynth::ratio::{brute_force_max_ratio, evaluate_policy, max_ratio_cycle, CycleRatio};
use tlsynth::synthesis::{synthesize_det, synthesize_rand, SynthesisConfig};
use tlsynth::Alphabet;

/// Tolerances, pinned.
const RANDOMIZED_T3_LOW: f64 = 2.667;
const RANDOMIZED_T3_HIGH: f64 = 2.677;
const RANDOMIZED_T2_MAX: f64 = 3.51;
const ORACLE_GRAPHS: usize = 500;
const ORACLE_MAX_VERTICES: usize = 12;
const ORACLE_MAX_LEN: usize = 8;
const SLIDING_TRIALS: usize = 1000;
const SLIDING_LEN: usize = 500;
const BLOCKS_RATIO_MIN: f64 = 1.9;
const ADAPTIVE_RATIO_MIN: f64 = 5.9;
const LOWER_BOUND_REPEATS: usize = 200;
const MIXED_TARGET: f64 = 2.62;
const MIXED_SLACK: f64 = 0.05;
const MIXED_TRIALS: usize = 1000;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn fm(alpha: Rational) -> LocalProblem {
    file_migration(alpha).expect("file migration")
}

fn det_ratio(alpha: Rational, t: usize) -> CycleRatio {
    synthesize_det(&fm(alpha), &SynthesisConfig::new(t)).expect("synthesis").ratio
}

fn three_competitive() -> [DeterministicPolicy; 3] {
    let base = ["0", "0", "0", "1", "0", "0", "1", "1", "0", "0", "1", "1", "0", "1", "1", "1"];
    let mut a2 = base;
    a2[0b1010] = "0";
    let mut a3 = base;
    a3[0b0101] = "1";
    [base, a2, a3].map(|outs| {
        let windows: Vec<String> = (0..16).map(|c| format!("{c:04b}")).collect();
        let rows: Vec<(&str, &str)> = windows.iter().map(String::as_str).zip(outs).collect();
        policy_from_rows(4, &Alphabet::binary(), &Alphabet::binary(), &rows).expect("policy row")
    })
}

fn criterion_1() -> Outcome {
    let cells: [(Rational, usize, Rational); 9] = [
        (rat(1, 10), 1, int(11)),
        (rat(1, 5), 1, int(6)),
        (rat(3, 10), 1, rat(13, 3)),
        (rat(1, 2), 1, int(3)),
        (rat(1, 2), 2, int(3)),
        (int(1), 1, int(4)),
        (int(1), 2, int(4)),
        (int(1), 4, int(3)),
        (rat(3, 2), 4, rat(7, 2)),
    ];
    let mut bad = Vec::new();
    for (alpha, t, want) in cells {
        let got = det_ratio(alpha, t);
        if got != CycleRatio::Finite(want) {
            bad.push(format!("alpha={alpha} T={t}: got {got}, want {want}"));
        }
    }
    outcome(bad.is_empty(), if bad.is_empty() { "all 9 cells exact".to_string() } else { bad.join("; ") })
}

fn criterion_2() -> Outcome {
    let problem = fm(int(1));
    let tables = three_competitive();
    let mut notes = Vec::new();
    let mut ok = true;
    for (i, t) in tables.iter().enumerate() {
        let (_, verdict) = evaluate_policy(&problem, &TablePolicy::Deterministic(t.clone())).expect("eval");
        let r = verdict.ratio();
        ok &= r == CycleRatio::Finite(int(3));
        notes.push(format!("policy {}={r}", i + 1));
    }
    let mut config = SynthesisConfig::new(4);
    config.collect_all_optimal = true;
    let all = synthesize_det(&problem, &config).expect("synthesis");
    let contained = tables.iter().all(|t| all.policies.contains(t));
    ok &= contained && all.ratio == CycleRatio::Finite(int(3));
    notes.push(format!("optimum {} with {} optimal tables, contains the three reference policies: {contained}", all.ratio, all.policies.len()));
    outcome(ok, notes.join(", "))
}

fn criterion_3() -> Outcome {
    let problem = fm(int(1));
    let entries = ["0", "0.3309", "0.2711", "1", "0", "0.7289", "0.6691", "1"];
    let table: Vec<Rational> = entries.iter().map(|e| parse_rational(e).expect("entry")).collect();
    let policy = RandomizedPolicy::new(3, Alphabet::binary(), Alphabet::binary(), table).expect("policy");
    let (graph, verdict) = evaluate_policy(&problem, &TablePolicy::Randomized(policy)).expect("eval");
    let r = verdict.ratio().to_f64();
    let in_range = (RANDOMIZED_T3_LOW..=RANDOMIZED_T3_HIGH).contains(&r);
    let mut windows: Vec<String> = Vec::new();
    let mut adversary_zero = true;
    for &v in &verdict.best.vertices {
        let w = graph.vertex_inputs(v).expect("window");
        windows.push(w.iter().map(|s| s.to_string()).collect());
        adversary_zero &= graph.vertex_adversary(v).expect("adversary").iter().all(|&a| a == 0);
    }
    if let Some(start) = windows.iter().position(|w| w == "000") {
        windows.rotate_left(start);
    }
    let expected = ["000", "001", "011", "110", "100"];
    let witness_ok = windows == expected && adversary_zero;
    outcome(
        in_range && witness_ok,
        format!("ratio {r:.4}, witness {} adversary all-0: {adversary_zero}", windows.join("->")),
    )
}

fn criterion_4() -> Outcome {
    let problem = fm(int(1));
    let mut config = SynthesisConfig::new(2);
    config.grid_step = rat(1, 20);
    let start = Instant::now();
    let result = synthesize_rand(&problem, &config).expect("randomized synthesis");
    let r = result.ratio.to_f64();
    let det = det_ratio(int(1), 2).to_f64();
    outcome(
        r <= RANDOMIZED_T2_MAX && r < det,
        format!("randomized {r:.4} vs deterministic {det} in {:.1}s", start.elapsed().as_secs_f64()),
    )
}

fn random_graph(rng: &mut ChaCha8Rng) -> DualGraph {
    let n = rng.gen_range(1..=ORACLE_MAX_VERTICES);
    let m = rng.gen_range(1..=3 * n);
    let edges = (0..m)
        .map(|_| Edge {
            source: rng.gen_range(0..n),
            target: rng.gen_range(0..n),
            input: 0,
            adversary: 0,
            q: ExtendedCost::Finite(rat(rng.gen_range(0..6), rng.gen_range(1..4))),
            w: ExtendedCost::Finite(if rng.gen_bool(0.3) { int(0) } else { rat(rng.gen_range(1..5), rng.gen_range(1..3)) }),
        })
        .collect();
    DualGraph::from_edges(n, edges).expect("graph")
}

fn exhaustive_opt(problem: &LocalProblem, x: &[usize]) -> ExtendedCost {
    let ny = problem.outputs().len();
    let total = ny.pow(x.len() as u32);
    let mut best: Option<ExtendedCost> = None;
    for code in 0..total {
        let mut c = code;
        let y: Vec<usize> = (0..x.len())
            .map(|_| {
                let s = c % ny;
                c /= ny;
                s
            })
            .collect();
        let cost = problem.evaluate(x, &y).expect("evaluate").total;
        if best.is_none_or(|b| problem.objective().better(&cost, &b)) {
            best = Some(cost);
        }
    }
    best.expect("non-empty")
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut graph_mismatch = 0;
    for _ in 0..ORACLE_GRAPHS {
        let g = random_graph(&mut rng);
        let a = max_ratio_cycle(&g).map(|v| v.ratio());
        let b = brute_force_max_ratio(&g).map(|v| v.ratio());
        if a != b {
            graph_mismatch += 1;
        }
    }
    let mut opt_mismatch = 0;
    let mut sequences = 0;
    for name in bundled_names() {
        let problem = load_bundled(name).expect("bundled");
        let nx = problem.inputs().len();
        for len in 1..=ORACLE_MAX_LEN {
            for code in 0..nx.pow(len as u32) {
                let mut c = code;
                let x: Vec<usize> = (0..len)
                    .map(|_| {
                        let s = c % nx;
                        c /= nx;
                        s
                    })
                    .collect();
                sequences += 1;
                if problem.offline_opt(&x).expect("opt").0 != exhaustive_opt(&problem, &x) {
                    opt_mismatch += 1;
                }
            }
        }
    }
    outcome(
        graph_mismatch == 0 && opt_mismatch == 0,
        format!(
            "{ORACLE_GRAPHS} graphs: {graph_mismatch} mismatches; {sequences} sequences: {opt_mismatch} mismatches; {:.1}s",
            start.elapsed().as_secs_f64()
        ),
    )
}

fn criterion_6() -> Outcome {
    let mut notes = Vec::new();
    let mut total_violations = 0;
    for (alpha, t) in [(1i128, 6usize), (2, 12)] {
        let problem = fm(int(alpha));
        let algorithm = Algorithm::SlidingWindow(SlidingWindow::new(t, int(alpha)).expect("sliding window"));
        let check = Guarantee { c: int(6), d: int(6 * alpha) };
        let runs = [
            (GeneratorSpec::Blocks { block: t, repeats: 50 }, 1),
            (GeneratorSpec::Adaptive { phases: 50, cutoff: 10_000 }, 1),
            (GeneratorSpec::Uniform { length: SLIDING_LEN, p: rat(1, 2), seed: 6 }, SLIDING_TRIALS),
        ];
        for (generator, trials) in runs {
            let config = MeasureConfig { trials, seed: 6, check: Some(check) };
            let record = measure_ratio(&algorithm, &problem, &generator, &config).expect("measure");
            total_violations += record.violations;
            notes.push(format!("{generator}: {} violations", record.violations));
        }
    }
    outcome(total_violations == 0, notes.join("; "))
}

fn criterion_7() -> Outcome {
    let problem = fm(int(6));
    let sw = Algorithm::SlidingWindow(SlidingWindow::new(6, int(6)).expect("sliding window"));
    let blocks = GeneratorSpec::Blocks { block: 6, repeats: LOWER_BOUND_REPEATS };
    let r = measure_ratio(&sw, &problem, &blocks, &MeasureConfig::default()).expect("measure").mean_ratio;
    let mut ok = r >= BLOCKS_RATIO_MIN;
    let mut notes = vec![format!("sliding window blocks ratio {r:.4}")];

    let problem = fm(rat(1, 5));
    let adaptive = GeneratorSpec::Adaptive { phases: LOWER_BOUND_REPEATS, cutoff: 10_000 };
    for t in 1..=3 {
        let mut config = SynthesisConfig::new(t);
        config.collect_all_optimal = true;
        let result = synthesize_det(&problem, &config).expect("synthesis");
        let mut worst = f64::INFINITY;
        for policy in &result.policies {
            let alg = Algorithm::Table(TablePolicy::Deterministic(policy.clone()));
            let rec = measure_ratio(&alg, &problem, &adaptive, &MeasureConfig::default()).expect("measure");
            worst = worst.min(rec.mean_ratio);
        }
        ok &= worst >= ADAPTIVE_RATIO_MIN;
        notes.push(format!("T={t}: {} optimal policies, min adaptive ratio {worst:.4}", result.policies.len()));
    }
    outcome(ok, notes.join("; "))
}

fn criterion_8() -> Outcome {
    let alpha = 5.0;
    let t = tlsynth::policy::mixed_resetting_horizon(alpha);
    let problem = fm(int(5));
    let algorithm = Algorithm::MixedResetting { horizon: t };
    let mut ok = true;
    let mut notes = vec![format!("T={t}")];
    for generator in [
        GeneratorSpec::Blocks { block: t, repeats: 50 },
        GeneratorSpec::Uniform { length: SLIDING_LEN, p: rat(1, 2), seed: 8 },
    ] {
        let config = MeasureConfig { trials: MIXED_TRIALS, seed: 8, check: None };
        let rec = measure_ratio(&algorithm, &problem, &generator, &config).expect("measure");
        let limit = MIXED_TARGET + 3.0 * rec.stderr + MIXED_SLACK;
        ok &= rec.mean_ratio <= limit;
        notes.push(format!("{generator}: mean {:.4} (stderr {:.4}, limit {limit:.4})", rec.mean_ratio, rec.stderr));
    }
    outcome(ok, notes.join("; "))
}

fn criterion_9() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    let forced = synthesize_det(&fm(int(1)), &SynthesisConfig::new(3)).expect("synthesis");
    ok &= forced.stats.examined == 64;
    notes.push(format!("T=3 examined {}", forced.stats.examined));
    let mut mismatches = 0;
    for alpha in [rat(1, 2), int(1), int(2)] {
        let problem = fm(alpha);
        for t in 1..=3 {
            let on = synthesize_det(&problem, &SynthesisConfig::new(t)).expect("synthesis").ratio;
            let mut off = SynthesisConfig::new(t);
            off.self_loop_forcing = false;
            off.prune_cycle_length = 0;
            let off = synthesize_det(&problem, &off).expect("synthesis").ratio;
            if on != off {
                mismatches += 1;
                notes.push(format!("alpha={alpha} T={t}: {on} vs {off}"));
            }
        }
    }
    ok &= mismatches == 0;
    notes.push(format!("{mismatches} on/off mismatches over 9 cells"));
    outcome(ok, notes.join("; "))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("1 deterministic ratio grid", criterion_1),
        ("2 three-competitive T=4 policies", criterion_2),
        ("3 randomized T=3 policy", criterion_3),
        ("4 randomized beats deterministic at T=2", criterion_4),
        ("5 oracle equivalence", criterion_5),
        ("6 sliding window guarantee", criterion_6),
        ("7 lower-bound realization", criterion_7),
        ("8 mixed resetting bound", criterion_8),
        ("9 pruning consistency", criterion_9),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let o = run();
        let tag = if o.passed { "PASS" } else { "FAIL" };
        if !o.passed {
            failed += 1;
        }
        println!("{tag} [{name}] {} ({:.1}s)", o.detail, start.elapsed().as_secs_f64());
    }
    println!("SKIP [10 T=5 lower bounds] 2^30 candidates, out of scope; available via --verify-lower-bound");
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
