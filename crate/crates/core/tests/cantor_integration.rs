use std::collections::BTreeMap;

use cfdim::cantor::{build_scheme, gap_report, mass_consistency, Layout, SchemeParams, DEFAULT_ENUMERATION_BUDGET};
use cfdim::cf::Word;
use cfdim::cover::{boxcount, covering_root, dyadic_ladder, predicted_dimension, sample_cloud};
use cfdim::pressure::SpectralConfig;
use cfdim::Error;
use proptest::prelude::*;

fn toy1() -> cfdim::cantor::CantorScheme {
    build_scheme(&SchemeParams::toy(2.0, 2.0, 3, 3)).unwrap()
}

#[test]
fn block_frequencies_match_weights() {
    // first block of N = 3 digits under μ1, 10^4 independent seeds
    let sc = toy1();
    let probs = sc.block_probabilities(3).unwrap();
    let draws = 10_000usize;
    let mut counts: BTreeMap<Vec<u64>, usize> = BTreeMap::new();
    for seed in 0..draws as u64 {
        let (_, w) = sc.sample_point(seed, 3).unwrap();
        *counts.entry(w.digits().to_vec()).or_default() += 1;
    }
    let mut index = 0;
    for a in 1..=3u64 {
        for b in 1..=3u64 {
            for c in 1..=3u64 {
                let p = probs[index];
                index += 1;
                let got = *counts.get(&vec![a, b, c]).unwrap_or(&0) as f64;
                let mean = p * draws as f64;
                let sigma = (draws as f64 * p * (1.0 - p)).sqrt();
                assert!((got - mean).abs() <= 3.0 * sigma, "block {a}{b}{c}: {got} vs {mean} ± {sigma}");
            }
        }
    }
}

#[test]
fn forced_digits_are_uniform() {
    let sc = toy1();
    let mut counts = [0usize; 16];
    let draws = 8_000;
    for seed in 0..draws {
        let (_, w) = sc.sample_point(seed, 4).unwrap();
        counts[(w.digits()[3] - 16) as usize] += 1;
    }
    let p = 1.0 / 16.0;
    let sigma = (draws as f64 * p * (1.0 - p)).sqrt();
    for c in counts {
        assert!((c as f64 - draws as f64 * p).abs() <= 4.0 * sigma);
    }
}

#[test]
fn both_layouts_are_consistent() {
    for layout in [Layout::Explicit, Layout::Literal] {
        let params = SchemeParams {
            layout,
            eps: 40.0,
            ..SchemeParams::toy(1.3, 1.2, 3, 2)
        };
        let sc = build_scheme(&params).unwrap();
        let depth = sc.max_enumerable_depth(DEFAULT_ENUMERATION_BUDGET);
        assert!(depth as u128 > sc.levels[1].position, "{layout:?}: depth {depth}");
        for j in [1, 2] {
            let rep = mass_consistency(&sc, j, depth, DEFAULT_ENUMERATION_BUDGET).unwrap();
            assert!(rep.max_child_sum_error < 1e-12, "{layout:?} {rep:?}");
            assert!(rep.max_normalization_error < 1e-12, "{layout:?} {rep:?}");
        }
    }
}

#[test]
fn empty_window_is_infeasible() {
    // A2^{n_1} = 0.3^4 makes [ceil(0.0081), ceil(0.0162) − 1] empty
    let r = build_scheme(&SchemeParams::toy(2.0, 0.3, 3, 3));
    assert!(matches!(r, Err(Error::Infeasible(_))));
}

#[test]
fn gap_bound_is_tested_against_all_neighbours() {
    let sc = toy1();
    let rep = gap_report(&sc, 2, DEFAULT_ENUMERATION_BUDGET).unwrap();
    assert_eq!(rep.cylinders, 9);
    assert!(rep.min_gap_ratio > 0.0);
}

#[test]
fn covering_report_is_well_formed() {
    let sc = toy1();
    let predicted = predicted_dimension(&sc, &SpectralConfig::default()).unwrap();
    assert!((predicted - 0.48042).abs() < 1e-4);
    for depth in 1..=6 {
        let rep = covering_root(&sc, depth, predicted, DEFAULT_ENUMERATION_BUDGET).unwrap();
        assert!((0.0..=1.0).contains(&rep.root));
        assert!(rep.bracket.0 <= rep.root && rep.root <= rep.bracket.1);
        assert!(rep.sum_below > rep.sum_at_prediction && rep.sum_at_prediction > rep.sum_above);
    }
}

#[test]
fn box_count_of_samples_is_near_prediction() {
    let sc = toy1();
    let predicted = predicted_dimension(&sc, &SpectralConfig::default()).unwrap();
    let points = sample_cloud(&sc, 0, 10_000, 40).unwrap();
    let bc = boxcount(&points, &dyadic_ladder(3, 10)).unwrap();
    assert!(bc.heuristic);
    assert!((bc.slope - predicted).abs() <= 0.15, "slope {}", bc.slope);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn samples_are_members_and_deterministic(seed in any::<u64>(), depth in 1usize..40) {
        let sc = toy1();
        let (x, w) = sc.sample_point(seed, depth).unwrap();
        prop_assert!(sc.is_member_prefix(&w));
        prop_assert_eq!(sc.sample_point(seed, depth).unwrap(), (x.clone(), w.clone()));
        prop_assert!(cfdim::cf::cylinder(&w).unwrap().contains(&x));
    }

    #[test]
    fn mass_requires_membership(digits in prop::collection::vec(1u64..40, 1..7)) {
        let sc = toy1();
        let w = Word::new(digits).unwrap();
        let r = sc.mass(&w, 1);
        prop_assert_eq!(r.is_ok(), sc.is_member_prefix(&w));
        if let Ok(m) = r {
            prop_assert!(m.logmass <= 1e-12);
        }
    }
}
