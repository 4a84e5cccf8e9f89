use cfdim::classify::{classify_f2, classify_fbb, Certificate, ClassifierConfig, Verdict, VerdictKind};
use cfdim::growth::{incompatibility_test, GrowthSpec};
use cfdim::pressure::{dim_root, Potential, SpectralConfig};
use proptest::prelude::*;

fn quick() -> ClassifierConfig {
    ClassifierConfig::single(SpectralConfig {
        alphabet_max: 32,
        root_tol: 1e-9,
        ..SpectralConfig::default()
    })
}

fn family() -> impl Strategy<Value = GrowthSpec> {
    prop_oneof![
        (0.5f64..4.0).prop_map(|a| GrowthSpec::power(a).unwrap()),
        (0.2f64..5.0, 1.5f64..300.0).prop_map(|(c, b)| GrowthSpec::exponential(c, b).unwrap()),
        (0.2f64..5.0, 1.5f64..4.0).prop_map(|(beta, b)| GrowthSpec::doubly_exp(beta, b).unwrap()),
        (0.2f64..5.0, 1.5f64..4.0, -3i64..3)
            .prop_map(|(beta, b, k)| GrowthSpec::shifted_doubly_exp(beta, b, k).unwrap()),
    ]
}

/// Orders verdicts: Empty < ZeroOrEmpty (0) < Dimension(value).
fn rank(v: &Verdict) -> f64 {
    match v.kind {
        VerdictKind::Empty => -1.0,
        VerdictKind::ZeroOrEmpty => 0.0,
        VerdictKind::Dimension => v.value.unwrap(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn verdict_shape(p1 in family(), p2 in family()) {
        let v = classify_f2(&p1, &p2, &quick()).unwrap();
        match v.kind {
            VerdictKind::Dimension => {
                let x = v.value.unwrap();
                prop_assert!((0.0..=1.0).contains(&x));
                prop_assert!(v.formula.is_some());
            }
            VerdictKind::Empty => {
                prop_assert!(v.value.is_none());
                prop_assert!(v.certificates.iter().any(|c| matches!(
                    c,
                    Certificate::ParameterInequality { .. } | Certificate::Incompatibility { .. }
                )), "{:?}", v);
            }
            VerdictKind::ZeroOrEmpty => prop_assert!(v.value.is_none()),
        }
    }

    #[test]
    fn forced_emptiness_excludes_positive_dimension(p1 in family(), p2 in family()) {
        if incompatibility_test(&p1, &p2, 50).unwrap().is_empty_forced() {
            let v = classify_f2(&p1, &p2, &quick()).unwrap();
            prop_assert!(!v.is_positive_dimension(), "{} / {}: {:?}", p1, p2, v);
        }
    }

    #[test]
    fn exponential_pair_matches_fbb(b1 in 1.5f64..500.0, b2 in 1.2f64..500.0) {
        let cfg = quick();
        let a = classify_f2(
            &GrowthSpec::exponential(1.0, b1).unwrap(),
            &GrowthSpec::exponential(1.0, b2).unwrap(),
            &cfg,
        ).unwrap();
        let b = classify_fbb(b1, b2, &cfg).unwrap();
        prop_assert_eq!(a.kind, b.kind);
        prop_assert_eq!(a.value, b.value);
    }

    #[test]
    fn enlarging_the_upper_bound_never_hurts(b1 in 2.0f64..300.0, lo in 1.2f64..40.0, factor in 1.0f64..8.0, c in 0.5f64..4.0) {
        let cfg = quick();
        let phi1 = GrowthSpec::exponential(1.0, b1).unwrap();
        let small = classify_f2(&phi1, &GrowthSpec::exponential(c, lo).unwrap(), &cfg).unwrap();
        let large = classify_f2(&phi1, &GrowthSpec::exponential(c, lo * factor).unwrap(), &cfg).unwrap();
        prop_assert!(rank(&large) >= rank(&small) - 1e-8, "{:?} then {:?}", small, large);
        if small.kind != VerdictKind::Empty {
            prop_assert!(large.kind != VerdictKind::Empty);
        }
    }

    #[test]
    fn continuous_across_the_s0_curve(b1 in 2.0f64..100.0) {
        let cfg = quick();
        let s0 = dim_root(&Potential::s0(b1).unwrap(), &cfg.spectral).unwrap();
        // the truncated s0 must stay above 1/2 for the curve to sit above √B1
        prop_assume!(s0 > 0.5);
        let edge = b1.powf(s0);
        let below = classify_fbb(b1, edge * (1.0 - 1e-6), &cfg).unwrap();
        let above = classify_fbb(b1, edge * (1.0 + 1e-6), &cfg).unwrap();
        let gap = (below.value.unwrap() - above.value.unwrap()).abs();
        prop_assert!(gap <= 1e-3, "gap {}", gap);
    }
}
