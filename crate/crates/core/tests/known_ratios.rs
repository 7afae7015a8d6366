use tlsynth::cost::{format_decimal, int, parse_rational, rat, Rational};
use tlsynth::policy::{policy_from_rows, DeterministicPolicy, RandomizedPolicy, TablePolicy};
use tlsynth::problem::file_migration;
use tlsynth::ratio::{evaluate_policy, CycleRatio};
use tlsynth::synthesis::{synthesize_det, synthesize_rand, SynthesisConfig};
use tlsynth::Alphabet;

fn det(alpha: Rational, t: usize) -> CycleRatio {
    synthesize_det(&file_migration(alpha).unwrap(), &SynthesisConfig::new(t)).unwrap().ratio
}

fn alpha_rows() -> Vec<Rational> {
    (1..=16).map(|k| rat(k, 10)).collect()
}

/// Deterministic optimum for `T ∈ {1, 2}`: `1 + 1/α` up to α = 1/2, then `2 + 2α`.
fn small_t_expected(alpha: Rational) -> Rational {
    if alpha <= rat(1, 2) {
        int(1) + int(1) / alpha
    } else {
        int(2) + int(2) * alpha
    }
}

#[test]
fn deterministic_t1_t2_columns() {
    for alpha in alpha_rows() {
        let want = CycleRatio::Finite(small_t_expected(alpha));
        assert_eq!(det(alpha, 1), want, "alpha={alpha} T=1");
        assert_eq!(det(alpha, 2), want, "alpha={alpha} T=2");
    }
}

#[test]
fn deterministic_t3_matches_t1() {
    for alpha in [rat(1, 10), rat(1, 2), rat(7, 10), int(1), rat(3, 2)] {
        assert_eq!(det(alpha, 3), CycleRatio::Finite(small_t_expected(alpha)), "alpha={alpha}");
    }
}

#[test]
fn deterministic_t4_printed_cells() {
    let cells = [("0.1", "11"), ("0.5", "3"), ("0.7", "3.4"), ("0.9", "3.222"), ("1.0", "3"), ("1.1", "3.1"), ("1.3", "3.3"), ("1.5", "3.5")];
    for (a, printed) in cells {
        let got = det(parse_rational(a).unwrap(), 4).value().unwrap();
        let digits = printed.split('.').nth(1).map_or(0, str::len) as u32;
        assert_eq!(format_decimal(&got, digits), printed, "alpha={a}");
    }
}

#[test]
fn randomized_t2_column() {
    let cells = [("0.5", "3"), ("0.6", "3.006"), ("0.7", "3.055"), ("0.8", "3.2"), ("1.0", "3.5"), ("1.2", "3.8"), ("1.5", "4.25")];
    for (a, printed) in cells {
        let problem = file_migration(parse_rational(a).unwrap()).unwrap();
        let got = synthesize_rand(&problem, &SynthesisConfig::new(2)).unwrap().ratio.to_f64();
        let want: f64 = printed.parse().unwrap();
        assert!(got <= want + 5e-4, "alpha={a}: {got} vs {want}");
    }
}

fn three_competitive() -> Vec<DeterministicPolicy> {
    let a1 = ["0", "0", "0", "1", "0", "0", "1", "1", "0", "0", "1", "1", "0", "1", "1", "1"];
    let mut a2 = a1;
    a2[0b1010] = "0";
    let mut a3 = a1;
    a3[0b0101] = "1";
    let windows: Vec<String> = (0..16).map(|c| format!("{c:04b}")).collect();
    [a1, a2, a3]
        .iter()
        .map(|outs| {
            let rows: Vec<(&str, &str)> = windows.iter().map(String::as_str).zip(outs.iter().copied()).collect();
            policy_from_rows(4, &Alphabet::binary(), &Alphabet::binary(), &rows).unwrap()
        })
        .collect()
}

#[test]
fn three_competitive_policies_are_all_optima() {
    let problem = file_migration(int(1)).unwrap();
    let mut config = SynthesisConfig::new(4);
    config.collect_all_optimal = true;
    let result = synthesize_det(&problem, &config).unwrap();
    assert_eq!(result.ratio, CycleRatio::Finite(int(3)));
    let mut expected = three_competitive();
    expected.sort();
    assert_eq!(result.policies, expected);
    for p in &expected {
        let (_, v) = evaluate_policy(&problem, &TablePolicy::Deterministic(p.clone())).unwrap();
        assert_eq!(v.ratio(), CycleRatio::Finite(int(3)));
    }
}

#[test]
fn printed_randomized_policy_ratio_and_witness() {
    let problem = file_migration(int(1)).unwrap();
    let entries = ["0", "0.3309", "0.2711", "1", "0", "0.7289", "0.6691", "1"];
    let table = entries.iter().map(|e| parse_rational(e).unwrap()).collect();
    let policy = RandomizedPolicy::new(3, Alphabet::binary(), Alphabet::binary(), table).unwrap();
    let (graph, v) = evaluate_policy(&problem, &TablePolicy::Randomized(policy)).unwrap();
    assert_eq!(v.ratio(), CycleRatio::Finite(rat(26691, 10000)));
    let labels: Vec<String> = v.best.vertices.iter().map(|&x| graph.vertex_label(x)).collect();
    assert_eq!(labels, ["000|0", "001|0", "011|0", "110|0", "100|0"]);
    assert_eq!(v.best.input, vec![1, 1, 0, 0, 0]);
}

#[test]
fn randomized_t3_beats_three() {
    let problem = file_migration(int(1)).unwrap();
    let mut config = SynthesisConfig::new(3);
    config.grid_step = rat(1, 5);
    let got = synthesize_rand(&problem, &config).unwrap().ratio.to_f64();
    assert!(got <= 2.672, "{got}");
}
