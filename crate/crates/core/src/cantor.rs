//! The sparse Cantor construction behind `E(A1, A2)`.
//!
//! Digits are free in `{1..M}` except at a sparse set of index pairs
//! `(n_k, n_k + 1)`, where they are forced into the windows
//! `[ceil(c1·A1^{n_k}), ceil(2·c1·A1^{n_k}) − 1]` and
//! `[ceil(c2·A2^{n_k}), ceil(2·c2·A2^{n_k}) − 1]`. Free digits are grouped in
//! blocks of length `N`; two mass distributions weight the blocks by the
//! roots `s` and `g` of the block pressure equations and split each forced
//! window uniformly.
//!
//! Toy schemes (small `N`, `M`, explicit `ε`) are fully enumerable at small
//! depth. [`StrictLayout`] keeps the large-`N` constants and only computes the
//! sparse positions.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cf::{cylinder, ContinuantState, Word};
use crate::error::{Error, Result};
use crate::logspace::log_sum_exp;
use crate::pressure::{root_finite_with, Potential, RootConfig};

/// Enumeration budget for the exhaustive checks.
pub const DEFAULT_ENUMERATION_BUDGET: u64 = 200_000;

/// Largest block table built for the mass distributions.
const BLOCK_TABLE_LIMIT: u64 = 1_000_000;

/// Minimum number of independent subtrees handed to the thread pool.
const MIN_PREFIXES: f64 = 64.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Layout {
    /// `n_1 = ℓ_1·N + 1` and `n_k − n_{k−1} = ℓ_k·N + 2`: every free segment is
    /// exactly `ℓ_k` blocks.
    Explicit,
    /// `n_k − n_{k−1} = ℓ_k·N + 1`: after the first level the last block of
    /// each free segment has length `N − 1`.
    Literal,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SchemeParams {
    #[serde(rename = "A1")]
    pub a1: f64,
    #[serde(rename = "A2")]
    pub a2: f64,
    pub c1: f64,
    pub c2: f64,
    #[serde(rename = "M")]
    pub alphabet_max: u64,
    #[serde(rename = "N")]
    pub block: usize,
    pub eps: f64,
    pub levels: usize,
    pub layout: Layout,
    /// Bisection width for the block roots `s` and `g`.
    pub root_tol: f64,
}

impl SchemeParams {
    /// Desk-scale scheme with `c1 = c2 = 1`, `ε = 1/2` and two levels.
    pub fn toy(a1: f64, a2: f64, alphabet_max: u64, block: usize) -> Self {
        SchemeParams {
            a1,
            a2,
            c1: 1.0,
            c2: 1.0,
            alphabet_max,
            block,
            eps: 0.5,
            levels: 2,
            layout: Layout::Explicit,
            root_tol: 1e-14,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if !(self.a1.is_finite() && self.a1 > 1.0) {
            return bad(format!("A1 must exceed 1, got {}", self.a1));
        }
        for (name, v) in [("A2", self.a2), ("c1", self.c1), ("c2", self.c2), ("eps", self.eps)] {
            if !(v.is_finite() && v > 0.0) {
                return bad(format!("{name} must be positive, got {v}"));
            }
        }
        if self.alphabet_max < 3 {
            return bad(format!("M must be at least 3, got {}", self.alphabet_max));
        }
        if self.block < 2 {
            return bad(format!("N must be at least 2, got {}", self.block));
        }
        if self.levels == 0 || self.levels > 4 {
            return bad(format!("levels must be between 1 and 4, got {}", self.levels));
        }
        Ok(())
    }

    /// `ε/2 · (N − 1)/2`: the log₂ gain per unit of `ℓ_k`.
    fn gain_per_ell(&self) -> f64 {
        (self.block as f64 - 1.0) / 2.0 * self.eps / 2.0
    }

    /// Minimal `ℓ_k` for `k = 1..levels` with
    /// `(2^{ℓ_k(N−1)/2})^{ε/2} >= Π_{t<k} (M+1)^{ℓ_t N} (A1·A2)^{Σ_{i<=t} ℓ_i N + t}`.
    pub fn sparse_lengths(&self) -> Result<Vec<u128>> {
        let gain = self.gain_per_ell();
        let n = self.block as f64;
        let log_m1 = ((self.alphabet_max + 1) as f64).log2();
        let log_a = (self.a1 * self.a2).log2();
        let mut ells: Vec<u128> = Vec::with_capacity(self.levels);
        let mut rhs = 0.0;
        let mut cumulative = 0.0;
        for k in 0..self.levels {
            if k > 0 {
                let t = k as f64;
                let prev = ells[k - 1] as f64;
                cumulative += prev * n;
                rhs += prev * n * log_m1 + (cumulative + t) * log_a;
            }
            let raw = (rhs / gain).ceil().max(1.0);
            if !(raw < 1e30) {
                return Err(Error::Infeasible(format!("ℓ_{} exceeds the representable range", k + 1)));
            }
            let mut ell = raw as u128;
            // guard against round-off in the division
            while (ell as f64) * gain < rhs {
                ell += 1;
            }
            ells.push(ell);
        }
        Ok(ells)
    }

    /// Sparse positions `n_k` (1-based) for the given `ℓ_k`.
    pub fn positions(&self, ells: &[u128]) -> Result<Vec<u128>> {
        let n = self.block as u128;
        let step = match self.layout {
            Layout::Explicit => 2,
            Layout::Literal => 1,
        };
        let mut out: Vec<u128> = Vec::with_capacity(ells.len());
        let overflow = || Error::Infeasible("sparse positions exceed the representable range".into());
        for (k, &ell) in ells.iter().enumerate() {
            let span = ell.checked_mul(n).ok_or_else(overflow)?;
            let pos = if k == 0 {
                span.checked_add(1)
            } else {
                span.checked_add(step).and_then(|d| out[k - 1].checked_add(d))
            };
            out.push(pos.ok_or_else(overflow)?);
        }
        Ok(out)
    }
}

/// Symbolic layout under the full largeness condition
/// `(2^{(N−1)/2})^{ε/2} >= 2^{100}`; nothing is enumerated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrictLayout {
    pub params: SchemeParams,
    pub ells: Vec<u128>,
    pub positions: Vec<u128>,
}

pub fn build_strict(params: &SchemeParams) -> Result<StrictLayout> {
    params.validate()?;
    if params.gain_per_ell() < 100.0 {
        return Err(Error::Infeasible(format!(
            "(2^((N−1)/2))^(ε/2) = 2^{} is below 2^100",
            params.gain_per_ell()
        )));
    }
    let ells = params.sparse_lengths()?;
    let positions = params.positions(&ells)?;
    Ok(StrictLayout {
        params: *params,
        ells,
        positions,
    })
}

/// Integer digit window `[ceil(c·A^n), ceil(2c·A^n) − 1]`, exact.
#[derive(Debug, Clone, PartialEq)]
pub struct ForcedWindow {
    pub lo: BigUint,
    pub hi: BigUint,
    /// `log(hi − lo + 1)`.
    pub log_count: f64,
    /// Digits as `u64`, or `None` when the window lies beyond `u64`.
    pub digits: Option<(u64, u64)>,
}

impl ForcedWindow {
    fn new(constant: f64, base: f64, exponent: u128) -> Result<Self> {
        let exponent = u32::try_from(exponent)
            .map_err(|_| Error::Infeasible(format!("window exponent {exponent} too large")))?;
        let rat = |v: f64| BigRational::from_float(v).expect("finite");
        let power = num_traits::pow(rat(base), exponent as usize);
        let scaled = rat(constant) * power;
        let lo = scaled.ceil().to_integer();
        let hi = (scaled * BigInt::from(2)).ceil().to_integer() - BigInt::one();
        if lo > hi || lo < BigInt::one() {
            return Err(Error::Infeasible(format!(
                "empty digit window [{lo}, {hi}] for {constant}·{base}^{exponent}"
            )));
        }
        let lo = lo.to_biguint().expect("positive");
        let hi = hi.to_biguint().expect("positive");
        let count = &hi - &lo + BigUint::one();
        let digits = match (lo.to_u64(), hi.to_u64()) {
            (Some(a), Some(b)) => Some((a, b)),
            _ => None,
        };
        Ok(ForcedWindow {
            log_count: ln_big(&count),
            lo,
            hi,
            digits,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Level {
    pub ell: u128,
    /// `n_k`, 1-based.
    pub position: u128,
    /// Windows at `n_k` (scaled by `c1·A1^{n_k}`) and `n_k + 1` (`c2·A2^{n_k}`).
    pub windows: [ForcedWindow; 2],
}

#[derive(Debug, Clone, PartialEq)]
struct BlockTable {
    log_w: [Vec<f64>; 2],
    log_z: [f64; 2],
}

/// What the construction prescribes at one index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slot {
    Free { block_start: u64, block_len: usize },
    Forced { level: usize, which: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CantorScheme {
    pub params: SchemeParams,
    /// Root of `Σ (A1^N q_N²)^{-s} = 1` over blocks of length `N`.
    pub s: f64,
    /// Root of `Σ A1^N ((A1²A2)^N q_N²)^{-g} = 1`.
    pub g: f64,
    pub levels: Vec<Level>,
    blocks: BTreeMap<usize, BlockTable>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MassValue {
    pub j: u8,
    pub logmass: f64,
}

pub(crate) fn ln_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits < 1000 {
        return x.to_f64().expect("finite below 2^1000").ln();
    }
    let shift = bits - 64;
    (x >> shift).to_f64().expect("64 bits").ln() + shift as f64 * std::f64::consts::LN_2
}

fn ln_rat(x: &BigRational) -> f64 {
    let num = x.numer().to_biguint().expect("positive");
    let den = x.denom().to_biguint().expect("positive");
    ln_big(&num) - ln_big(&den)
}

/// Base-`M` index of a block, first digit most significant.
fn block_index(digits: &[u64], m: u64) -> usize {
    digits.iter().fold(0usize, |acc, &d| acc * m as usize + (d - 1) as usize)
}

/// Builds the toy scheme: `ℓ_k`, `n_k`, exact windows, block roots and tables.
pub fn build_scheme(params: &SchemeParams) -> Result<CantorScheme> {
    params.validate()?;
    let ells = params.sparse_lengths()?;
    let positions = params.positions(&ells)?;
    let mut levels = Vec::with_capacity(ells.len());
    for (&ell, &position) in ells.iter().zip(&positions) {
        levels.push(Level {
            ell,
            position,
            windows: [
                ForcedWindow::new(params.c1, params.a1, position)?,
                ForcedWindow::new(params.c2, params.a2, position)?,
            ],
        });
    }
    let (m, n) = (params.alphabet_max, params.block);
    let root_cfg = RootConfig {
        tol: params.root_tol,
        ..RootConfig::default()
    };
    let s = root_finite_with(Potential::sb(params.a1)?, n, m, &root_cfg)?;
    let g = root_finite_with(Potential::g(params.a1 * params.a2, params.a1)?, n, m, &root_cfg)?;

    let mut scheme = CantorScheme {
        params: *params,
        s,
        g,
        levels,
        blocks: BTreeMap::new(),
    };
    let mut lengths = vec![n];
    if params.layout == Layout::Literal && params.levels >= 2 {
        lengths.push(n - 1);
    }
    for len in lengths {
        let table = scheme.block_table(len)?;
        scheme.blocks.insert(len, table);
    }
    Ok(scheme)
}

impl CantorScheme {
    fn block_table(&self, len: usize) -> Result<BlockTable> {
        let m = self.params.alphabet_max;
        let count = (m as f64).powi(len as i32);
        if count > BLOCK_TABLE_LIMIT as f64 {
            return Err(Error::BudgetExceeded {
                required: count,
                budget: BLOCK_TABLE_LIMIT,
            });
        }
        let (a1, a2) = (self.params.a1, self.params.a2);
        let l = len as f64;
        let mut w1 = Vec::with_capacity(count as usize);
        let mut w2 = Vec::with_capacity(count as usize);
        let mut digits = vec![1u64; len];
        loop {
            let log_q = ContinuantState::of(&Word::new(digits.clone())?).log_q;
            w1.push(-self.s * (l * a1.ln() + 2.0 * log_q));
            w2.push(l * a1.ln() - self.g * (l * (a1 * a1 * a2).ln() + 2.0 * log_q));
            // odometer, last digit fastest
            let mut i = len;
            loop {
                if i == 0 {
                    let log_z = [log_sum_exp(&w1), log_sum_exp(&w2)];
                    return Ok(BlockTable { log_w: [w1, w2], log_z });
                }
                i -= 1;
                if digits[i] < m {
                    digits[i] += 1;
                    break;
                }
                digits[i] = 1;
            }
        }
    }

    /// The role of index `pos` (1-based).
    pub fn slot(&self, pos: u64) -> Slot {
        let n = self.params.block as u64;
        let mut seg_start: u64 = 1;
        for (k, level) in self.levels.iter().enumerate() {
            let nk = level.position;
            if (pos as u128) < nk {
                let offset = pos - seg_start;
                let block_start = seg_start + offset / n * n;
                let seg_end = (nk - 1) as u64;
                let block_len = (seg_end - block_start + 1).min(n) as usize;
                return Slot::Free { block_start, block_len };
            }
            if pos as u128 == nk {
                return Slot::Forced { level: k, which: 0 };
            }
            if pos as u128 == nk + 1 {
                return Slot::Forced { level: k, which: 1 };
            }
            seg_start = (nk + 2) as u64;
        }
        let offset = pos - seg_start;
        Slot::Free {
            block_start: seg_start + offset / n * n,
            block_len: n as usize,
        }
    }

    /// Admissible digits at `pos`, or `None` for a window beyond `u64`.
    pub fn allowed(&self, pos: u64) -> Option<(u64, u64)> {
        match self.slot(pos) {
            Slot::Free { .. } => Some((1, self.params.alphabet_max)),
            Slot::Forced { level, which } => self.levels[level].windows[which].digits,
        }
    }

    /// Admissible digits at `pos` as exact integers.
    fn allowed_big(&self, pos: u64) -> (BigUint, BigUint) {
        match self.slot(pos) {
            Slot::Free { .. } => (BigUint::one(), BigUint::from(self.params.alphabet_max)),
            Slot::Forced { level, which } => {
                let w = &self.levels[level].windows[which];
                (w.lo.clone(), w.hi.clone())
            }
        }
    }

    fn log_allowed_count(&self, pos: u64) -> f64 {
        match self.slot(pos) {
            Slot::Free { .. } => (self.params.alphabet_max as f64).ln(),
            Slot::Forced { level, which } => self.levels[level].windows[which].log_count,
        }
    }

    /// `|D_n|`, the number of admissible prefixes of length `n`.
    pub fn prefix_count(&self, depth: usize) -> f64 {
        (1..=depth as u64).map(|p| self.log_allowed_count(p)).sum::<f64>().exp()
    }

    /// Largest depth with `|D_n| <= budget`.
    pub fn max_enumerable_depth(&self, budget: u64) -> usize {
        let mut depth = 0;
        while self.allowed(depth as u64 + 1).is_some() && self.prefix_count(depth + 1) <= budget as f64 {
            depth += 1;
        }
        depth
    }

    /// Whether `word` is a prefix of some point of the set.
    pub fn is_member_prefix(&self, word: &Word) -> bool {
        word.digits().iter().enumerate().all(|(i, &d)| match self.allowed(i as u64 + 1) {
            Some((lo, hi)) => lo <= d && d <= hi,
            None => false,
        })
    }

    fn table(&self, len: usize) -> &BlockTable {
        self.blocks.get(&len).expect("block table built for every segment length")
    }

    /// `μ_j(J_n(word))` in log space. Complete free blocks contribute their
    /// normalized weight, forced digits `1/|window|`, and a partial block
    /// the summed weight of all its completions.
    pub fn mass(&self, word: &Word, j: u8) -> Result<MassValue> {
        if !(j == 1 || j == 2) {
            return Err(Error::InvalidParameter(format!("measure index must be 1 or 2, got {j}")));
        }
        if !self.is_member_prefix(word) {
            return Err(Error::NotInScheme);
        }
        let idx = (j - 1) as usize;
        let digits = word.digits();
        let m = self.params.alphabet_max;
        let n = digits.len() as u64;
        let mut logmass = 0.0;
        let mut pos = 1u64;
        while pos <= n {
            match self.slot(pos) {
                Slot::Forced { level, which } => {
                    logmass -= self.levels[level].windows[which].log_count;
                    pos += 1;
                }
                Slot::Free { block_start, block_len } => {
                    debug_assert_eq!(block_start, pos);
                    let table = self.table(block_len);
                    let end = pos + block_len as u64 - 1;
                    let start = (pos - 1) as usize;
                    if end <= n {
                        let i = block_index(&digits[start..end as usize], m);
                        logmass += table.log_w[idx][i] - table.log_z[idx];
                        pos = end + 1;
                    } else {
                        let prefix = &digits[start..];
                        let span = (m as usize).pow((block_len - prefix.len()) as u32);
                        let first = block_index(prefix, m) * span;
                        logmass += log_sum_exp(&table.log_w[idx][first..first + span]) - table.log_z[idx];
                        pos = n + 1;
                    }
                }
            }
        }
        Ok(MassValue { j, logmass })
    }

    /// `J_n(word)`: the union of the admissible children of `I_n(word)`,
    /// with exact endpoints `(v p + p')/(v q + q')` and
    /// `((V+1) p + p')/((V+1) q + q')`.
    pub fn basic_cylinder(&self, word: &Word) -> BasicCylinder {
        let st = ContinuantState::of(word);
        let (v, big_v) = self.allowed_big(word.len() as u64 + 1);
        let v_end = &big_v + BigUint::one();
        let frac = |a: &BigUint| {
            BigRational::new(
                BigInt::from(a * &st.p + &st.p_prev),
                BigInt::from(a * &st.q + &st.q_prev),
            )
        };
        let (e1, e2) = (frac(&v), frac(&v_end));
        let (left, right) = if e1 < e2 { (e1, e2) } else { (e2, e1) };
        let length = &right - &left;
        BasicCylinder {
            word: word.clone(),
            log_length: ln_rat(&length),
            left,
            right,
        }
    }

    /// `log|J_n(digits)|` in floating point from `u128` continuants; falls
    /// back to the exact path when they overflow.
    pub(crate) fn log_length_fast(&self, digits: &[u64]) -> f64 {
        let (mut q_prev, mut q) = (0u128, 1u128);
        for &d in digits {
            match q.checked_mul(d as u128).and_then(|v| v.checked_add(q_prev)) {
                Some(next) => {
                    q_prev = q;
                    q = next;
                }
                None => {
                    let word = Word::new(digits.to_vec()).expect("admissible digits");
                    return self.basic_cylinder(&word).log_length;
                }
            }
        }
        let (lo, hi) = self.allowed_big(digits.len() as u64 + 1);
        let v = lo.to_f64().unwrap_or(f64::INFINITY);
        let v_end = hi.to_f64().unwrap_or(f64::INFINITY) + 1.0;
        let count = (&hi - &lo + BigUint::one()).to_f64().unwrap_or(f64::INFINITY);
        let (q, q_prev) = (q as f64, q_prev as f64);
        count.ln() - (v * q + q_prev).ln() - (v_end * q + q_prev).ln()
    }

    /// `log(|J_n| / M)`, the separation claimed for `J_n(word)` from every
    /// other basic cylinder of the same order.
    pub fn gap_lower_bound(&self, word: &Word) -> Result<f64> {
        if !self.is_member_prefix(word) {
            return Err(Error::NotInScheme);
        }
        Ok(self.basic_cylinder(word).log_length - (self.params.alphabet_max as f64).ln())
    }

    /// Compares `μ_j(J_n)` against `c3·|J_n|^τ`.
    pub fn holder_check(&self, word: &Word, j: u8, tau: f64, c3: f64) -> Result<HolderCheck> {
        let mass = self.mass(word, j)?.logmass;
        let len = self.basic_cylinder(word).log_length;
        let log_ratio = mass - tau * len;
        Ok(HolderCheck {
            holds: log_ratio <= c3.ln(),
            log_ratio,
        })
    }

    /// `min{s, g}/(1 + ε)`.
    pub fn holder_exponent(&self) -> f64 {
        self.s.min(self.g) / (1.0 + self.params.eps)
    }

    /// Visits every admissible prefix of length `depth` in lexicographic
    /// order. Subtrees below a fixed prefix split run in parallel; results
    /// are concatenated in prefix order.
    pub fn enumerate<T, F>(&self, depth: usize, budget: u64, leaf: F) -> Result<Vec<T>>
    where
        T: Send,
        F: Fn(&[u64]) -> T + Sync,
    {
        let required = self.prefix_count(depth);
        if required > budget as f64 * (1.0 + 1e-12) {
            return Err(Error::BudgetExceeded { required, budget });
        }
        let ranges: Vec<(u64, u64)> = (1..=depth as u64)
            .map(|p| self.allowed(p).ok_or(Error::BudgetExceeded { required, budget }))
            .collect::<Result<_>>()?;
        let mut split = 0;
        let mut count = 1.0;
        while split < depth && count < MIN_PREFIXES {
            count *= (ranges[split].1 - ranges[split].0 + 1) as f64;
            split += 1;
        }
        let mut prefixes: Vec<Vec<u64>> = vec![Vec::new()];
        for &(lo, hi) in &ranges[..split] {
            prefixes = prefixes
                .into_iter()
                .flat_map(|p| {
                    (lo..=hi).map(move |d| {
                        let mut q = p.clone();
                        q.push(d);
                        q
                    })
                })
                .collect();
        }
        let chunks: Vec<Vec<T>> = prefixes
            .par_iter()
            .map(|prefix| {
                let mut out = Vec::new();
                let mut buf = prefix.clone();
                walk(&ranges, &mut buf, depth, &leaf, &mut out);
                out
            })
            .collect();
        Ok(chunks.into_iter().flatten().collect())
    }

    pub fn summary(&self) -> SchemeSummary {
        SchemeSummary {
            params: self.params,
            s: self.s,
            g: self.g,
            holder_exponent: self.holder_exponent(),
            levels: self
                .levels
                .iter()
                .map(|l| LevelSummary {
                    ell: l.ell.to_string(),
                    position: l.position.to_string(),
                    windows: l.windows.clone().map(|w| WindowSummary {
                        lo: w.lo.to_string(),
                        hi: w.hi.to_string(),
                        log_count: w.log_count,
                    }),
                })
                .collect(),
            block_log_normalizers: self
                .blocks
                .iter()
                .map(|(len, t)| BlockNormalizer {
                    block_len: *len,
                    log_z1: t.log_z[0],
                    log_z2: t.log_z[1],
                })
                .collect(),
        }
    }

    /// Normalized `μ1` block probabilities for blocks of length `len`.
    pub fn block_probabilities(&self, len: usize) -> Option<Vec<f64>> {
        let t = self.blocks.get(&len)?;
        Some(t.log_w[0].iter().map(|w| (w - t.log_z[0]).exp()).collect())
    }

    /// Draws one point: free blocks from the `μ1` block weights, forced
    /// digits uniformly in their windows. Returns the midpoint of
    /// `I_depth(word)` and the word.
    pub fn sample_point(&self, seed: u64, depth: usize) -> Result<(BigRational, Word)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        self.sample_with(&mut rng, depth)
    }

    /// `count` points from independent streams of one seed.
    pub fn sample_points(&self, seed: u64, count: usize, depth: usize) -> Result<Vec<(BigRational, Word)>> {
        (0..count as u64)
            .into_par_iter()
            .map(|i| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(i + 1);
                self.sample_with(&mut rng, depth)
            })
            .collect()
    }

    fn sample_with(&self, rng: &mut ChaCha8Rng, depth: usize) -> Result<(BigRational, Word)> {
        const MAX_SAMPLE_DEPTH: usize = 100_000;
        if depth == 0 || depth > MAX_SAMPLE_DEPTH {
            return Err(Error::BudgetExceeded {
                required: depth as f64,
                budget: MAX_SAMPLE_DEPTH as u64,
            });
        }
        let m = self.params.alphabet_max;
        let mut digits = Vec::with_capacity(depth);
        let mut samplers: BTreeMap<usize, WeightedIndex<f64>> = BTreeMap::new();
        while digits.len() < depth {
            let pos = digits.len() as u64 + 1;
            match self.slot(pos) {
                Slot::Forced { level, which } => {
                    let (lo, hi) = self.levels[level].windows[which].digits.ok_or_else(|| {
                        Error::Unsupported(format!("window at index {pos} exceeds u64 digits"))
                    })?;
                    digits.push(rng.gen_range(lo..=hi));
                }
                Slot::Free { block_len, .. } => {
                    let sampler = match samplers.entry(block_len) {
                        std::collections::btree_map::Entry::Occupied(e) => e.into_mut(),
                        std::collections::btree_map::Entry::Vacant(e) => {
                            let probs = self.block_probabilities(block_len).expect("block table");
                            e.insert(WeightedIndex::new(probs).map_err(|err| {
                                Error::InvalidParameter(format!("block weights: {err}"))
                            })?)
                        }
                    };
                    let mut index = sampler.sample(rng);
                    let mut block = vec![0u64; block_len];
                    for slot in block.iter_mut().rev() {
                        *slot = (index % m as usize) as u64 + 1;
                        index /= m as usize;
                    }
                    let take = block_len.min(depth - digits.len());
                    digits.extend_from_slice(&block[..take]);
                }
            }
        }
        let word = Word::new(digits)?;
        let x = cylinder(&word)?.midpoint();
        Ok((x, word))
    }
}

fn walk<T, F: Fn(&[u64]) -> T>(ranges: &[(u64, u64)], buf: &mut Vec<u64>, depth: usize, leaf: &F, out: &mut Vec<T>) {
    if buf.len() == depth {
        out.push(leaf(buf));
        return;
    }
    let (lo, hi) = ranges[buf.len()];
    for d in lo..=hi {
        buf.push(d);
        walk(ranges, buf, depth, leaf, out);
        buf.pop();
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BasicCylinder {
    pub word: Word,
    pub left: BigRational,
    pub right: BigRational,
    pub log_length: f64,
}

impl BasicCylinder {
    pub fn length(&self) -> BigRational {
        &self.right - &self.left
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HolderCheck {
    pub holds: bool,
    /// `log(μ_j(J_n) / |J_n|^τ)`.
    pub log_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowSummary {
    pub lo: String,
    pub hi: String,
    pub log_count: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelSummary {
    pub ell: String,
    pub position: String,
    pub windows: [WindowSummary; 2],
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlockNormalizer {
    pub block_len: usize,
    pub log_z1: f64,
    pub log_z2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchemeSummary {
    pub params: SchemeParams,
    pub s: f64,
    pub g: f64,
    pub holder_exponent: f64,
    pub levels: Vec<LevelSummary>,
    pub block_log_normalizers: Vec<BlockNormalizer>,
}

// ---------------------------------------------------------------------------
// Exhaustive checks

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyReport {
    pub max_depth: usize,
    pub cylinders: u64,
    /// Largest `|log μ(J) − log Σ μ(children)|`.
    pub max_child_sum_error: f64,
    /// Largest `|log Σ_{D_n} μ|` over all depths.
    pub max_normalization_error: f64,
}

/// Mass consistency and normalization of `μ_j` at every depth up to
/// `max_depth`.
pub fn mass_consistency(scheme: &CantorScheme, j: u8, max_depth: usize, budget: u64) -> Result<ConsistencyReport> {
    let mut child_err: f64 = 0.0;
    let mut norm_err: f64 = 0.0;
    let mut cylinders = 0u64;
    let root = scheme.mass(&Word::empty(), j)?.logmass;
    norm_err = norm_err.max(root.abs());
    for depth in 0..max_depth {
        let (lo, hi) = scheme.allowed(depth as u64 + 1).ok_or(Error::BudgetExceeded {
            required: f64::INFINITY,
            budget,
        })?;
        let errs = scheme.enumerate(depth, budget, |digits| -> Result<f64> {
            let w = Word::new(digits.to_vec())?;
            let parent = scheme.mass(&w, j)?.logmass;
            let mut children = Vec::with_capacity((hi - lo + 1) as usize);
            let mut child = digits.to_vec();
            child.push(0);
            for d in lo..=hi {
                *child.last_mut().expect("pushed") = d;
                children.push(scheme.mass(&Word::new(child.clone())?, j)?.logmass);
            }
            Ok((parent - log_sum_exp(&children)).abs())
        })?;
        for e in errs {
            child_err = child_err.max(e?);
            cylinders += 1;
        }
        let masses = scheme.enumerate(depth + 1, budget, |digits| {
            scheme.mass(&Word::new(digits.to_vec()).expect("valid"), j).map(|m| m.logmass)
        })?;
        let masses = masses.into_iter().collect::<Result<Vec<_>>>()?;
        norm_err = norm_err.max(log_sum_exp(&masses).abs());
    }
    Ok(ConsistencyReport {
        max_depth,
        cylinders,
        max_child_sum_error: child_err,
        max_normalization_error: norm_err,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    pub depth: usize,
    pub cylinders: u64,
    /// Cylinders whose nearest neighbour is closer than `|J_n| / M`.
    pub violations: u64,
    /// Smallest `G_n / |J_n|` observed.
    pub min_gap_ratio: f64,
    /// The claimed constant `1/M`.
    pub claimed_ratio: f64,
    pub worst_word: Option<Word>,
}

/// Sorts all order-`depth` basic cylinders and measures each one's gap to its
/// neighbours exactly.
pub fn gap_report(scheme: &CantorScheme, depth: usize, budget: u64) -> Result<GapReport> {
    let mut cyl = scheme.enumerate(depth, budget, |d| {
        scheme.basic_cylinder(&Word::new(d.to_vec()).expect("valid"))
    })?;
    cyl.sort_by(|a, b| a.left.cmp(&b.left));
    let m = BigInt::from(scheme.params.alphabet_max);
    let mut violations = 0;
    let mut min_ratio = f64::INFINITY;
    let mut worst_word = None;
    for i in 0..cyl.len() {
        if cyl.len() < 2 {
            break;
        }
        let gap = nearest_gap(&cyl, i);
        let len = cyl[i].length();
        if &gap * &m < len {
            violations += 1;
        }
        let ratio = (gap / len).to_f64().unwrap_or(f64::NAN);
        if ratio < min_ratio {
            min_ratio = ratio;
            worst_word = Some(cyl[i].word.clone());
        }
    }
    Ok(GapReport {
        depth,
        cylinders: cyl.len() as u64,
        violations,
        min_gap_ratio: min_ratio,
        claimed_ratio: 1.0 / scheme.params.alphabet_max as f64,
        worst_word,
    })
}

/// Distance from the `i`-th sorted cylinder to its nearest neighbour;
/// negative when they overlap.
fn nearest_gap(cyl: &[BasicCylinder], i: usize) -> BigRational {
    let left = (i > 0).then(|| &cyl[i].left - &cyl[i - 1].right);
    let right = (i + 1 < cyl.len()).then(|| &cyl[i + 1].left - &cyl[i].right);
    match (left, right) {
        (Some(a), Some(b)) => a.min(b),
        (Some(a), None) | (None, Some(a)) => a,
        (None, None) => unreachable!("at least two cylinders"),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HolderReport {
    pub j: u8,
    pub tau: f64,
    pub max_depth: usize,
    pub cylinders: u64,
    /// Smallest `c3` with `μ_j(J_n) <= c3·|J_n|^τ` on every enumerated cylinder.
    pub fitted_c3: f64,
    pub c3: f64,
    pub failures: u64,
}

/// Exhaustive Hölder check over depths `1..=max_depth`.
pub fn holder_report(scheme: &CantorScheme, j: u8, tau: f64, c3: f64, max_depth: usize, budget: u64) -> Result<HolderReport> {
    let mut worst = f64::NEG_INFINITY;
    let mut failures = 0;
    let mut cylinders = 0;
    for depth in 1..=max_depth {
        let checks = scheme.enumerate(depth, budget, |d| {
            scheme.holder_check(&Word::new(d.to_vec()).expect("valid"), j, tau, c3)
        })?;
        for c in checks {
            let c = c?;
            worst = worst.max(c.log_ratio);
            failures += u64::from(!c.holds);
            cylinders += 1;
        }
    }
    Ok(HolderReport {
        j,
        tau,
        max_depth,
        cylinders,
        fitted_c3: worst.exp(),
        c3,
        failures,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LengthReport {
    pub level: usize,
    pub cylinders: u64,
    /// Failures of `|J_{n_k}| >= 2^{-11} |J_{n_k − 1}| / (A1^{n_k} A2^{n_k})`.
    pub forced_first_failures: u64,
    /// Failures of `|J_{n_k+1}| >= 2^{-11} |J_{n_k − 1}| / (A1^{n_k} A2^{2 n_k})`.
    pub forced_second_failures: u64,
    /// Smallest observed `|J_{n_k}| · A1^{n_k} A2^{n_k} / |J_{n_k − 1}|`.
    pub min_first_ratio: f64,
    pub min_second_ratio: f64,
}

/// Exact length comparisons across the forced indices of the first level.
pub fn length_report(scheme: &CantorScheme, budget: u64) -> Result<LengthReport> {
    let level = &scheme.levels[0];
    let nk = u64::try_from(level.position).map_err(|_| Error::Infeasible("position beyond u64".into()))?;
    let depth = (nk + 1) as usize;
    let rat = |v: f64| BigRational::from_float(v).expect("finite");
    let a1n = num_traits::pow(rat(scheme.params.a1), nk as usize);
    let a2n = num_traits::pow(rat(scheme.params.a2), nk as usize);
    let c = BigRational::new(BigInt::one(), BigInt::from(2048));
    let first_scale = &c / (&a1n * &a2n);
    let second_scale = &first_scale / &a2n;
    let results = scheme.enumerate(depth, budget, |d| {
        let j = |len: usize| scheme.basic_cylinder(&Word::new(d[..len].to_vec()).expect("valid")).length();
        let base = j(depth - 2);
        let first = j(depth - 1);
        let second = j(depth);
        let ok1 = first >= &first_scale * &base;
        let ok2 = second >= &second_scale * &base;
        let r1 = ln_rat(&(&first * &a1n * &a2n / &base)).exp();
        let r2 = ln_rat(&(&second * &a1n * &a2n * &a2n / &base)).exp();
        (ok1, ok2, r1, r2)
    })?;
    let mut rep = LengthReport {
        level: 1,
        cylinders: results.len() as u64,
        forced_first_failures: 0,
        forced_second_failures: 0,
        min_first_ratio: f64::INFINITY,
        min_second_ratio: f64::INFINITY,
    };
    for (ok1, ok2, r1, r2) in results {
        rep.forced_first_failures += u64::from(!ok1);
        rep.forced_second_failures += u64::from(!ok2);
        rep.min_first_ratio = rep.min_first_ratio.min(r1);
        rep.min_second_ratio = rep.min_second_ratio.min(r2);
    }
    Ok(rep)
}

/// Scheme parameters realizing `F_{B1,B2}` from the inside:
/// `A1 = B1^{s0}, A2 = B1^{1−s0}` when `B1^{s0} <= B2`, otherwise
/// `A1 = B2, A2 = B1/B2`.
pub fn fbb_scheme_params(b1: f64, b2: f64, s0: f64, alphabet_max: u64, block: usize) -> SchemeParams {
    let (a1, a2) = if b1.powf(s0) <= b2 {
        (b1.powf(s0), b1.powf(1.0 - s0))
    } else {
        (b2, b1 / b2)
    };
    SchemeParams::toy(a1, a2, alphabet_max, block)
}

/// Reduced fraction check used by the sampler tests.
pub fn is_reduced(x: &BigRational) -> bool {
    x.numer().gcd(x.denom()).is_one()
}
