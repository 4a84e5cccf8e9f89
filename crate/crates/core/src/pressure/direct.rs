//! Exact cylinder sums `f_n(s) = Σ_{a_i <= M} exp(n·α(s))·q_n(a_1..a_n)^{-2s}`.
//!
//! Words are enumerated depth-first with checked `u128` continuants. The word
//! space is cut into a fixed set of prefixes; each prefix subtree is summed
//! sequentially and the partial sums are merged pairwise in prefix order, so
//! the result does not depend on the worker count.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::logspace::ScaledSum;
use crate::pressure::Potential;

pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Minimum number of independent subtrees handed to the thread pool.
const MIN_PREFIXES: u64 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SumQuery {
    pub potential: Potential,
    pub s: f64,
    pub depth: usize,
    pub alphabet_max: u64,
    pub budget: u64,
}

impl SumQuery {
    pub fn new(potential: Potential, s: f64, depth: usize, alphabet_max: u64) -> Self {
        SumQuery {
            potential,
            s,
            depth,
            alphabet_max,
            budget: DEFAULT_BUDGET,
        }
    }
}

/// Rejects enumerations of more than `budget` words.
pub(crate) fn check_budget(alphabet_max: u64, depth: usize, budget: u64) -> Result<()> {
    let required = (alphabet_max as f64).powi(depth as i32);
    if required > budget as f64 {
        return Err(Error::BudgetExceeded { required, budget });
    }
    Ok(())
}

#[derive(Clone, Copy)]
struct Node {
    q_prev: u128,
    q: u128,
}

impl Node {
    const ROOT: Node = Node { q_prev: 0, q: 1 };

    #[inline]
    fn child(self, digit: u64, depth: usize) -> Result<Node> {
        let q = self
            .q
            .checked_mul(digit as u128)
            .and_then(|v| v.checked_add(self.q_prev))
            .ok_or(Error::ContinuantOverflow { depth })?;
        Ok(Node { q_prev: self.q, q })
    }
}

/// All prefixes of length `len` in lexicographic order.
fn prefixes(alphabet_max: u64, len: usize) -> Result<Vec<Node>> {
    let mut level = vec![Node::ROOT];
    for d in 1..=len {
        let mut next = Vec::with_capacity(level.len() * alphabet_max as usize);
        for node in &level {
            for a in 1..=alphabet_max {
                next.push(node.child(a, d)?);
            }
        }
        level = next;
    }
    Ok(level)
}

fn subtree(node: Node, remaining: usize, depth: usize, m: u64, two_s: f64, acc: &mut ScaledSum) -> Result<()> {
    if remaining == 0 {
        acc.add_log(-two_s * (node.q as f64).ln());
        return Ok(());
    }
    for a in 1..=m {
        subtree(node.child(a, depth - remaining + 1)?, remaining - 1, depth, m, two_s, acc)?;
    }
    Ok(())
}

/// `ln Σ q_n^{-2s}` over all words of length `depth` with digits `<= m`.
pub(crate) fn log_q_power_sum(s: f64, depth: usize, m: u64) -> Result<f64> {
    // The all-ones word has the smallest q_n and hence the largest term.
    let mut ones = Node::ROOT;
    for d in 1..=depth {
        ones = ones.child(1, d)?;
    }
    let two_s = 2.0 * s;
    let shift = -two_s * (ones.q as f64).ln();

    let mut split = 0;
    let mut count = 1u64;
    while split < depth && count < MIN_PREFIXES {
        split += 1;
        count = count.saturating_mul(m);
    }
    let roots = prefixes(m, split)?;
    let parts = roots
        .par_iter()
        .map(|&node| {
            let mut acc = ScaledSum::new(shift);
            subtree(node, depth - split, depth, m, two_s, &mut acc)?;
            Ok(acc)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ScaledSum::merge(&parts).ln())
}

/// `log f_n(s)`.
pub fn direct_sum(query: &SumQuery) -> Result<f64> {
    query.potential.validate()?;
    if query.alphabet_max == 0 {
        return Err(Error::InvalidParameter("alphabet_max must be at least 1".into()));
    }
    check_budget(query.alphabet_max, query.depth, query.budget)?;
    let body = log_q_power_sum(query.s, query.depth, query.alphabet_max)?;
    Ok(query.depth as f64 * query.potential.alpha(query.s) + body)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RootConfig {
    /// Bisection stops once the bracket is narrower than this.
    pub tol: f64,
    pub budget: u64,
    /// Right end of the search bracket `[0, upper]`.
    pub upper: f64,
}

impl Default for RootConfig {
    fn default() -> Self {
        RootConfig {
            tol: 1e-10,
            budget: DEFAULT_BUDGET,
            upper: 1.5,
        }
    }
}

/// Root in `s` of `f_n(s) = 1` with default tolerances.
pub fn root_finite(potential: Potential, depth: usize, alphabet_max: u64) -> Result<f64> {
    root_finite_with(potential, depth, alphabet_max, &RootConfig::default())
}

/// Root in `s` of `f_n(s) = 1` by bisection on `[0, cfg.upper]`. Returns 0
/// when `f_n(0) <= 1` already.
pub fn root_finite_with(potential: Potential, depth: usize, alphabet_max: u64, cfg: &RootConfig) -> Result<f64> {
    if depth == 0 {
        return Err(Error::InvalidParameter("depth must be at least 1".into()));
    }
    let eval = |s: f64| {
        direct_sum(&SumQuery {
            potential,
            s,
            depth,
            alphabet_max,
            budget: cfg.budget,
        })
    };
    if eval(cfg.upper)? > 0.0 {
        return Err(Error::NoRoot { upper: cfg.upper });
    }
    if eval(0.0)? <= 0.0 {
        return Ok(0.0);
    }
    let (mut lo, mut hi) = (0.0, cfg.upper);
    while hi - lo > cfg.tol {
        let mid = 0.5 * (lo + hi);
        if eval(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
