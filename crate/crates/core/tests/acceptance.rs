//! Acceptance gates. Prints one PASS/FAIL line per criterion plus supporting
//! diagnostics. Exits non-zero on failure only when `ACCEPTANCE_STRICT=1`, so
//! a known red does not stop the remaining test targets.

use std::time::Instant;

use cfdim::cantor::DEFAULT_ENUMERATION_BUDGET;
use cfdim::cf::{continuants, cylinder, quasi_mult_ratio, Word};
use cfdim::classify::{classify_fbb, ClassifierConfig, Formula, VerdictKind};
use cfdim::cover::{covering_root, predicted_dimension};
use cfdim::pressure::{dim_root, root_finite, Potential, SpectralConfig};
use cfdim::verify::{agreement_grid, ratio_agreement, run_suite, toy_schemes, Report, Suite, VerifyConfig};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

struct Gate {
    lines: Vec<String>,
    failed: usize,
}

impl Gate {
    fn record(&mut self, id: &str, passed: bool, detail: String, started: Instant) {
        let mark = if passed { "PASS" } else { "FAIL" };
        let line = format!("{mark} {id}: {detail} [{:.1} s]", started.elapsed().as_secs_f64());
        println!("{line}");
        self.lines.push(line);
        if !passed {
            self.failed += 1;
        }
    }

    fn note(&self, text: String) {
        println!("     {text}");
    }
}

fn spectral(m: u64) -> SpectralConfig {
    SpectralConfig::default().with_alphabet(m)
}

fn pool(threads: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap()
}

fn ratio_equivalence(gate: &mut Gate) {
    let t = Instant::now();
    let grid = agreement_grid();
    let mut worst: f64 = 0.0;
    for pot in [
        Potential::sb(2.0).unwrap(),
        Potential::sb(16.0).unwrap(),
        Potential::s0(16.0).unwrap(),
        Potential::g(16.0, 4.5).unwrap(),
    ] {
        for m in 1..=3 {
            worst = worst.max(ratio_agreement(&pot, m, 12, &grid, &SpectralConfig::default()).unwrap());
        }
    }
    let passed = worst <= 1e-3 && t.elapsed().as_secs_f64() <= 60.0;
    gate.record(
        "1 spectral vs direct ratio",
        passed,
        format!("4 potentials, M = 1..3, 20 points: max |diff| = {worst:.3e} (<= 1e-3, <= 60 s)"),
        t,
    );
}

fn bounded_alphabet(gate: &mut Gate) {
    let t = Instant::now();
    let spectral_root = dim_root(&Potential::zero(), &spectral(2)).unwrap();
    let roots: Vec<f64> = (14..=16)
        .map(|n| root_finite(Potential::zero(), n, 2).unwrap())
        .collect();
    let finite = roots[2];
    let diff = (spectral_root - finite).abs();
    let passed = diff <= 1e-3 && (spectral_root - 0.5313).abs() <= 0.005;
    gate.record(
        "2 bounded alphabet M = 2",
        passed,
        format!("spectral {spectral_root:.6}, depth-16 root {finite:.6}, |diff| = {diff:.3e} (<= 1e-3); value vs 0.5313 ± 0.005"),
        t,
    );
    // depth roots converge geometrically; Aitken's delta-squared on depths 14..16
    let (a, b, c) = (roots[0], roots[1], roots[2]);
    let aitken = c - (c - b).powi(2) / ((c - b) - (b - a));
    gate.note(format!(
        "diagnostic: depth roots 14/15/16 = {a:.6} / {b:.6} / {c:.6}, extrapolated {aitken:.6}, |extrapolated − spectral| = {:.3e}",
        (aitken - spectral_root).abs()
    ));
}

fn s_b_limits(gate: &mut Gate) {
    let t = Instant::now();
    let cfg = spectral(256);
    let sb = |b: f64| dim_root(&Potential::sb(b).unwrap(), &cfg).unwrap();
    let near_one = sb(1.0001);
    let large = sb(1e6);
    let ladder: Vec<f64> = [1.5, 2.0, 4.0, 16.0, 256.0].into_iter().map(sb).collect();
    let decreasing = ladder.windows(2).all(|w| w[1] < w[0]);
    let in_time = t.elapsed().as_secs_f64() <= 120.0;
    let passed = near_one > 0.98 && large > 0.5 && large < 0.52 && decreasing && in_time;
    gate.record(
        "3 s_B limits at M = 256",
        passed,
        format!(
            "s_B(1.0001) = {near_one:.6} (> 0.98), s_B(1e6) = {large:.6} (in (0.5, 0.52)), ladder {} decreasing = {decreasing}",
            ladder.iter().map(|v| format!("{v:.6}")).collect::<Vec<_>>().join(" ")
        ),
        t,
    );
}

fn boundary_identity(gate: &mut Gate) {
    let t = Instant::now();
    let cfg = SpectralConfig::default();
    let mut worst: f64 = 0.0;
    for b1 in [4.0f64, 16.0, 100.0] {
        let s0 = dim_root(&Potential::s0(b1).unwrap(), &cfg).unwrap();
        let g = dim_root(&Potential::g(b1, b1.powf(s0)).unwrap(), &cfg).unwrap();
        worst = worst.max((g - s0).abs());
    }
    let passed = worst <= 1e-4 && t.elapsed().as_secs_f64() <= 120.0;
    gate.record(
        "4 boundary identity",
        passed,
        format!("B1 in {{4, 16, 100}}, M = 128: max |g(B1, B1^s0) − s0| = {worst:.3e} (<= 1e-4)"),
        t,
    );
}

fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64)).collect()
}

fn regime_map(gate: &mut Gate) {
    let t = Instant::now();
    let cfg = ClassifierConfig::default();
    let single = ClassifierConfig::single(cfg.spectral);
    let b1s = logspace(2.0, 1000.0, 20);
    let b2s = logspace(1.05, 1000.0, 20);
    let (mut mismatches, mut counts) = (0usize, [0usize; 3]);
    let mut worst_gap: f64 = 0.0;
    for &b1 in &b1s {
        // independent region oracle: √B1 from arithmetic, the s0 curve from the root solver
        let s0 = dim_root(&Potential::s0(b1).unwrap(), &cfg.spectral).unwrap();
        let curve = b1.powf(s0);
        for &b2 in &b2s {
            let v = classify_fbb(b1, b2, &cfg).unwrap();
            let ok = if b2 <= b1.sqrt() {
                counts[0] += 1;
                v.kind == VerdictKind::Empty
            } else if b2 >= curve {
                counts[2] += 1;
                v.kind == VerdictKind::Dimension && (v.value.unwrap() - s0).abs() <= 1e-9
            } else {
                counts[1] += 1;
                let g = dim_root(&Potential::g(b1, b2).unwrap(), &cfg.spectral).unwrap();
                v.kind == VerdictKind::Dimension && (v.value.unwrap() - g).abs() <= 1e-3
            };
            if !ok {
                mismatches += 1;
            }
        }
        if curve > b1.sqrt() {
            // a single solve keeps the boundary band narrow, so the lower probe takes the g branch
            let below = classify_fbb(b1, curve * (1.0 - 1e-6), &single).unwrap();
            let above = classify_fbb(b1, curve * (1.0 + 1e-6), &single).unwrap();
            if below.formula != Some(Formula::G) || above.formula != Some(Formula::S0) {
                mismatches += 1;
            }
            if let (Some(x), Some(y)) = (below.value, above.value) {
                worst_gap = worst_gap.max((x - y).abs());
            }
        }
    }
    let passed = mismatches == 0 && worst_gap <= 1e-3 && counts.iter().all(|&c| c > 0);
    gate.record(
        "5 F_{B1,B2} regime map",
        passed,
        format!(
            "20x20 grid, cells empty/middle/upper = {}/{}/{}, {mismatches} mismatches, continuity gap across the s0 curve {worst_gap:.3e} (<= 1e-3)",
            counts[0], counts[1], counts[2]
        ),
        t,
    );
}

fn suite_gate(gate: &mut Gate, id: &str, report: &Report, limit: f64, t: Instant) {
    for c in &report.checks {
        gate.note(format!("{} {}: {}", if c.passed { "pass" } else { "fail" }, c.name, c.detail));
    }
    let passed_checks = report.checks.iter().filter(|c| c.passed).count();
    gate.record(
        id,
        report.passed && t.elapsed().as_secs_f64() <= limit,
        format!("{passed_checks}/{} checks passed (<= {limit} s)", report.checks.len()),
        t,
    );
}

/// Names of the failed checks; empty when the word passes.
fn word_checks(digits: &[u64]) -> Vec<&'static str> {
    let w = Word::new(digits.to_vec()).unwrap();
    let n = w.len();
    let conv = continuants(&w);
    let mut failures = Vec::new();
    for k in 1..=n {
        let (pk, qk) = (BigInt::from(conv[k - 1].p.clone()), BigInt::from(conv[k - 1].q.clone()));
        let (pp, qp) = if k == 1 {
            (BigInt::from(0), BigInt::from(1))
        } else {
            (BigInt::from(conv[k - 2].p.clone()), BigInt::from(conv[k - 2].q.clone()))
        };
        let want = if k % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        if pp * &qk - pk * qp != want {
            failures.push("determinant");
            break;
        }
    }
    let q = w.q();
    if &q * &q < BigUint::from(2u32).pow((n - 1) as u32) {
        failures.push("q_n >= 2^((n-1)/2)");
    }
    let prod = digits.iter().fold(BigUint::one(), |acc, &d| acc * d);
    if prod > q || q > BigUint::from(2u32).pow(n as u32) * &prod {
        failures.push("product bounds");
    }
    let qq = BigInt::from(&q * &q);
    let len = cylinder(&w).unwrap().length();
    if len < BigRational::new(BigInt::one(), BigInt::from(2) * &qq) || len > BigRational::new(BigInt::one(), qq) {
        failures.push("cylinder length");
    }
    if n >= 2 {
        let cut = n / 2;
        let r = quasi_mult_ratio(&w.prefix(cut), &Word::new(digits[cut..].to_vec()).unwrap()).unwrap();
        if r < BigRational::one() || r > BigRational::from_integer(BigInt::from(2)) {
            failures.push("quasi-multiplicativity");
        }
    }
    failures
}

fn cf_properties(gate: &mut Gate) {
    let t = Instant::now();
    let words = 100_000u64;
    let failures: Vec<(u64, &'static str)> = (0..words)
        .into_par_iter()
        .flat_map_iter(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(i);
            let len = rng.gen_range(1..=40);
            // mix small digits with occasional huge ones
            let digits: Vec<u64> = (0..len)
                .map(|_| match rng.gen_range(0..10) {
                    0 => rng.gen_range(1..=u64::MAX),
                    1..=3 => rng.gen_range(1..=10_000),
                    _ => rng.gen_range(1..=5),
                })
                .collect();
            word_checks(&digits).into_iter().map(move |f| (i, f))
        })
        .collect();
    let passed = failures.is_empty() && t.elapsed().as_secs_f64() <= 30.0;
    gate.record(
        "7 continued-fraction properties",
        passed,
        format!("10^5 seeded words of length 1..40: {} failures (0 allowed, <= 30 s)", failures.len()),
        t,
    );
    if let Some((seed, name)) = failures.first() {
        gate.note(format!("first failure: word seed {seed}, {name}"));
    }
}

fn covering(gate: &mut Gate) {
    let t = Instant::now();
    let sc = toy_schemes().unwrap().remove(0);
    let predicted = predicted_dimension(&sc, &SpectralConfig::default()).unwrap();
    let depth = sc.max_enumerable_depth(DEFAULT_ENUMERATION_BUDGET);
    let roots: Vec<f64> = (1..=depth)
        .map(|d| covering_root(&sc, d, predicted, DEFAULT_ENUMERATION_BUDGET).unwrap().root)
        .collect();
    let root = *roots.last().unwrap();
    gate.record(
        "9 covering root vs prediction",
        (root - predicted).abs() <= 0.1 && t.elapsed().as_secs_f64() <= 180.0,
        format!("E(2,2) M=3 N=3, depth {depth}: root {root:.6}, predicted min(s_A1, g) = {predicted:.6}, |diff| = {:.6} (<= 0.1)", (root - predicted).abs()),
        t,
    );
    gate.note(format!(
        "diagnostic: covering roots by depth {}",
        roots.iter().map(|r| format!("{r:.4}")).collect::<Vec<_>>().join(" ")
    ));
}

fn main() {
    let mut gate = Gate {
        lines: Vec::new(),
        failed: 0,
    };
    let threads = std::thread::available_parallelism().map_or(4, |n| n.get()).max(2);

    ratio_equivalence(&mut gate);
    bounded_alphabet(&mut gate);
    s_b_limits(&mut gate);
    boundary_identity(&mut gate);
    regime_map(&mut gate);

    let cfg = VerifyConfig::default();
    let mut timed = Vec::new();
    for suite in Suite::ALL {
        let t = Instant::now();
        let report = pool(threads).install(|| run_suite(suite, &cfg)).unwrap();
        timed.push((suite, report, t.elapsed()));
    }
    let t = Instant::now() - timed[0].2;
    suite_gate(&mut gate, "6 props suite", &timed[0].1, 30.0, t);

    cf_properties(&mut gate);

    let t = Instant::now() - timed[2].2;
    suite_gate(&mut gate, "8 cantor toy schemes", &timed[2].1, 120.0, t);

    covering(&mut gate);

    let t = Instant::now();
    let mut differing = Vec::new();
    for (suite, report, _) in &timed {
        let single = pool(1).install(|| run_suite(*suite, &cfg)).unwrap();
        if single.render() != report.render() {
            differing.push(suite.name());
        }
    }
    gate.record(
        "10 reproducibility across thread counts",
        differing.is_empty(),
        format!("4 suites, 1 vs {threads} threads, differing reports: {differing:?}"),
        t,
    );

    let total = gate.lines.len();
    println!("acceptance: {}/{total} criteria passed", total - gate.failed);
    if gate.failed > 0 && std::env::var("ACCEPTANCE_STRICT").is_ok_and(|v| v == "1") {
        std::process::exit(1);
    }
}
