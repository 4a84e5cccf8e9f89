use cfdim::cf::{cf_expand, continuants, cylinder, cylinder_length, determinant, quasi_mult_ratio, ClosedSide, Word};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};
use proptest::prelude::*;

fn word_strategy(max_len: usize, max_digit: u64) -> impl Strategy<Value = Word> {
    prop::collection::vec(1..=max_digit, 1..=max_len).prop_map(|d| Word::new(d).unwrap())
}

/// Backward evaluation `1/(a_1 + 1/(a_2 + ...))`, independent of the
/// forward continuant recurrence.
fn nested_value(digits: &[u64]) -> BigRational {
    let mut x = BigRational::zero();
    for &a in digits.iter().rev() {
        x = (BigRational::from_integer(BigInt::from(a)) + x).recip();
    }
    x
}

fn product(digits: &[u64]) -> BigUint {
    digits.iter().fold(BigUint::one(), |acc, &d| acc * d)
}

proptest! {
    #[test]
    fn determinant_alternates(w in word_strategy(40, 1000)) {
        for n in 1..=w.len() {
            let want = if n % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            prop_assert_eq!(determinant(&w.prefix(n)), want);
        }
    }

    #[test]
    fn convergents_match_nested_evaluation(w in word_strategy(30, 50)) {
        let conv = continuants(&w);
        for n in 1..=w.len() {
            prop_assert_eq!(conv[n - 1].value(), nested_value(&w.digits()[..n]));
        }
    }

    #[test]
    fn continuant_growth_bounds(w in word_strategy(60, 20)) {
        let n = w.len();
        let q = w.q();
        let prod = product(w.digits());
        prop_assert!(prod <= q);
        prop_assert!(q <= (BigUint::from(2u32).pow(n as u32)) * &prod);
        // q_n^2 >= 2^{n-1}
        prop_assert!(&q * &q >= BigUint::from(2u32).pow((n - 1) as u32));
    }

    #[test]
    fn cylinder_length_sandwich(w in word_strategy(30, 100)) {
        let q = BigInt::from(w.q());
        let len = cylinder(&w).unwrap().length();
        prop_assert_eq!(&len, &cylinder_length(&w));
        let upper = BigRational::new(BigInt::one(), &q * &q);
        let lower = BigRational::new(BigInt::one(), BigInt::from(2) * &q * &q);
        prop_assert!(lower <= len && len <= upper);
    }

    #[test]
    fn cylinder_contains_its_rationals(w in word_strategy(12, 30), tail in 2u64..50) {
        let c = cylinder(&w).unwrap();
        let mut ext = w.digits().to_vec();
        ext.push(tail);
        prop_assert!(c.contains(&nested_value(&ext)));
        prop_assert!(c.contains(&c.midpoint()));
        let expected = if w.len() % 2 == 0 { ClosedSide::Left } else { ClosedSide::Right };
        prop_assert_eq!(c.closed_side, expected);
    }

    #[test]
    fn subcylinders_are_ordered_by_parity(w in word_strategy(10, 20), a in 1u64..30) {
        let child = |d: u64| {
            let mut v = w.digits().to_vec();
            v.push(d);
            cylinder(&Word::new(v).unwrap()).unwrap()
        };
        let (lo, hi) = (child(a), child(a + 1));
        // depth n+1 children move right to left when n is even, left to right when odd
        if w.len() % 2 == 0 {
            prop_assert!(hi.right <= lo.left);
        } else {
            prop_assert!(lo.right <= hi.left);
        }
        let parent = cylinder(&w).unwrap();
        prop_assert!(parent.left <= lo.left && lo.right <= parent.right);
    }

    #[test]
    fn expansion_inverts_evaluation(mut digits in prop::collection::vec(1u64..1000, 1..25), last in 2u64..1000) {
        digits.push(last);
        let x = nested_value(&digits);
        let e = cf_expand(&x, digits.len() + 5).unwrap();
        prop_assert!(e.terminated);
        prop_assert_eq!(e.word.digits(), &digits[..]);
    }

    #[test]
    fn quasi_multiplicativity(u in word_strategy(15, 40), v in word_strategy(15, 40)) {
        let r = quasi_mult_ratio(&u, &v).unwrap();
        prop_assert!(r >= BigRational::one());
        prop_assert!(r <= BigRational::from_integer(BigInt::from(2)));
    }

    #[test]
    fn word_serde_round_trip(w in word_strategy(20, u64::MAX)) {
        let json = serde_json::to_string(&w).unwrap();
        prop_assert_eq!(serde_json::from_str::<Word>(&json).unwrap(), w);
    }
}

#[test]
fn deep_words_do_not_overflow() {
    let w = Word::new(vec![u64::MAX; 200]).unwrap();
    assert_eq!(determinant(&w), BigInt::one());
    assert!(w.q().bits() > 200 * 63);
}

#[test]
fn zero_digit_rejected_in_json() {
    assert!(serde_json::from_str::<Word>("[1,0,2]").is_err());
}
