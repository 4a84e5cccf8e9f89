//! Exact continued-fraction machinery: continuants, cylinders, the Gauss map.
//!
//! Continuants follow `p_{k+1} = a_{k+1} p_k + p_{k-1}` and
//! `q_{k+1} = a_{k+1} q_k + q_{k-1}` seeded with `p_{-1} = 1, q_{-1} = 0,
//! p_0 = 0, q_0 = 1`. All arithmetic is arbitrary precision; `ln q_k` is
//! carried alongside for the log-space sum modules.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::logspace::log_add_exp;

/// A finite sequence of partial quotients `a_1 .. a_n`, all at least 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct Word(Vec<u64>);

impl Word {
    pub fn new(digits: Vec<u64>) -> Result<Self> {
        if let Some((position, &digit)) = digits.iter().enumerate().find(|(_, &d)| d == 0) {
            return Err(Error::InvalidDigit {
                position: position + 1,
                digit,
            });
        }
        Ok(Word(digits))
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn digits(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Append one digit. Panics on zero, which would break the word invariant.
    pub fn push(&mut self, digit: u64) {
        assert!(digit >= 1, "partial quotients are positive");
        self.0.push(digit);
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut digits = self.0.clone();
        digits.extend_from_slice(&other.0);
        Word(digits)
    }

    pub fn prefix(&self, len: usize) -> Word {
        Word(self.0[..len].to_vec())
    }

    /// Nested-fraction value `[0; a_1, ..., a_n] = p_n / q_n`.
    pub fn value(&self) -> BigRational {
        let (p, q) = self.pq();
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }

    /// Final `(p_n, q_n)` without materialising the whole trail.
    pub fn pq(&self) -> (BigUint, BigUint) {
        let s = ContinuantState::of(self);
        (s.p, s.q)
    }

    /// Final denominator `q_n`.
    pub fn q(&self) -> BigUint {
        self.pq().1
    }
}

impl TryFrom<Vec<u64>> for Word {
    type Error = Error;
    fn try_from(v: Vec<u64>) -> Result<Self> {
        Word::new(v)
    }
}

impl From<Word> for Vec<u64> {
    fn from(w: Word) -> Self {
        w.0
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|d| d.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// The pair `(p_k, q_k)` together with the log shadow `ln q_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Convergent {
    pub p: BigUint,
    pub q: BigUint,
    pub log_q: f64,
}

impl Convergent {
    pub fn value(&self) -> BigRational {
        BigRational::new(BigInt::from(self.p.clone()), BigInt::from(self.q.clone()))
    }
}

/// Running state of the recurrence: the current and previous convergents.
#[derive(Debug, Clone)]
pub(crate) struct ContinuantState {
    pub p_prev: BigUint,
    pub q_prev: BigUint,
    pub p: BigUint,
    pub q: BigUint,
    pub log_q_prev: f64,
    pub log_q: f64,
}

impl ContinuantState {
    pub fn seed() -> Self {
        ContinuantState {
            p_prev: BigUint::one(),
            q_prev: BigUint::zero(),
            p: BigUint::zero(),
            q: BigUint::one(),
            log_q_prev: f64::NEG_INFINITY,
            log_q: 0.0,
        }
    }

    pub fn step(&mut self, digit: u64) {
        let p_next = &self.p * digit + &self.p_prev;
        let q_next = &self.q * digit + &self.q_prev;
        let log_next = log_add_exp((digit as f64).ln() + self.log_q, self.log_q_prev);
        self.p_prev = std::mem::replace(&mut self.p, p_next);
        self.q_prev = std::mem::replace(&mut self.q, q_next);
        self.log_q_prev = std::mem::replace(&mut self.log_q, log_next);
    }

    pub fn of(word: &Word) -> Self {
        let mut s = Self::seed();
        for &d in word.digits() {
            s.step(d);
        }
        s
    }
}

/// Convergents `(p_k, q_k)` for `k = 1..=n`.
pub fn continuants(word: &Word) -> Vec<Convergent> {
    let mut state = ContinuantState::seed();
    word.digits()
        .iter()
        .map(|&d| {
            state.step(d);
            Convergent {
                p: state.p.clone(),
                q: state.q.clone(),
                log_q: state.log_q,
            }
        })
        .collect()
}

/// Continuants of raw digits, rejecting any digit below 1.
pub fn continuants_of(digits: &[u64]) -> Result<Vec<Convergent>> {
    Ok(continuants(&Word::new(digits.to_vec())?))
}

/// `p_{n-1} q_n - p_n q_{n-1}`, which equals `(-1)^n`.
pub fn determinant(word: &Word) -> BigInt {
    let s = ContinuantState::of(word);
    BigInt::from(s.p_prev) * BigInt::from(s.q) - BigInt::from(s.p) * BigInt::from(s.q_prev)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClosedSide {
    Left,
    Right,
}

/// The cylinder `I_n(a_1..a_n)` as an exact half-open interval.
#[derive(Debug, Clone, PartialEq)]
pub struct CylinderInterval {
    pub left: BigRational,
    pub right: BigRational,
    pub closed_side: ClosedSide,
    pub order: usize,
}

impl CylinderInterval {
    pub fn length(&self) -> BigRational {
        &self.right - &self.left
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        match self.closed_side {
            ClosedSide::Left => &self.left <= x && x < &self.right,
            ClosedSide::Right => &self.left < x && x <= &self.right,
        }
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.left + &self.right) / BigInt::from(2)
    }
}

/// `I_n(w)`: endpoints `p_n/q_n` and `(p_n + p_{n-1})/(q_n + q_{n-1})`.
/// Even `n` is closed on the left at `p_n/q_n`, odd `n` closed on the right.
pub fn cylinder(word: &Word) -> Result<CylinderInterval> {
    if word.is_empty() {
        return Err(Error::EmptyWord);
    }
    let s = ContinuantState::of(word);
    let a = BigRational::new(BigInt::from(s.p.clone()), BigInt::from(s.q.clone()));
    let b = BigRational::new(
        BigInt::from(&s.p + &s.p_prev),
        BigInt::from(&s.q + &s.q_prev),
    );
    let n = word.len();
    Ok(if n.is_multiple_of(2) {
        CylinderInterval {
            left: a,
            right: b,
            closed_side: ClosedSide::Left,
            order: n,
        }
    } else {
        CylinderInterval {
            left: b,
            right: a,
            closed_side: ClosedSide::Right,
            order: n,
        }
    })
}

/// `1 / (q_n (q_n + q_{n-1}))` exactly.
pub fn cylinder_length(word: &Word) -> BigRational {
    let s = ContinuantState::of(word);
    BigRational::new(
        BigInt::one(),
        BigInt::from(&s.q * (&s.q + &s.q_prev)),
    )
}

/// Result of expanding a rational: the word and whether `T^k(x)` hit 0.
#[derive(Debug, Clone, PartialEq)]
pub struct Expansion {
    pub word: Word,
    pub terminated: bool,
}

/// One step of the Gauss map on an exact rational in `(0, 1)`:
/// returns `(floor(1/x), 1/x - floor(1/x))`.
pub fn gauss_step(x: &BigRational) -> (BigInt, BigRational) {
    let inv = x.recip();
    let a = inv.floor().to_integer();
    let rest = inv - BigRational::from_integer(a.clone());
    (a, rest)
}

/// Expand `x` in `[0, 1)` to at most `depth` partial quotients.
///
/// Rationals terminate; the Gauss map never produces a final digit 1 in a
/// word of length at least 2, so the result is already in canonical form.
pub fn cf_expand(x: &BigRational, depth: usize) -> Result<Expansion> {
    if x.is_negative() || x >= &BigRational::one() {
        return Err(Error::OutOfUnitInterval(x.to_string()));
    }
    let mut digits = Vec::with_capacity(depth);
    let mut current = x.clone();
    while digits.len() < depth {
        if current.is_zero() {
            return Ok(Expansion {
                word: Word(digits),
                terminated: true,
            });
        }
        let (a, rest) = gauss_step(&current);
        let digit = a
            .to_u64()
            .ok_or_else(|| Error::InvalidParameter(format!("partial quotient {a} exceeds u64")))?;
        digits.push(digit);
        current = rest;
    }
    Ok(Expansion {
        word: Word(digits),
        terminated: current.is_zero(),
    })
}

/// `q_{n+m}(u v) / (q_n(u) q_m(v))`, always in `[1, 2]`.
pub fn quasi_mult_ratio(u: &Word, v: &Word) -> Result<BigRational> {
    if u.is_empty() || v.is_empty() {
        return Err(Error::EmptyWord);
    }
    let joint = u.concat(v).q();
    let denom = u.q() * v.q();
    Ok(BigRational::new(BigInt::from(joint), BigInt::from(denom)))
}

/// `gcd(p, q)`; equals 1 for convergents of a valid word.
pub fn convergent_gcd(c: &Convergent) -> BigUint {
    c.p.gcd(&c.q)
}
