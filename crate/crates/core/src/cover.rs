//! Empirical dimension estimates for the Cantor schemes.
//!
//! [`covering_root`] solves `Σ_{D_n} |J_n|^s = 1` over every basic cylinder
//! of one order. [`boxcount`] fits a box-counting slope to sampled points;
//! it is a heuristic diagnostic and bounds nothing.

use std::collections::BTreeSet;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::cantor::CantorScheme;
use crate::error::{Error, Result};
use crate::logspace::log_sum_exp;
use crate::pressure::{dim_root, Potential, SpectralConfig};

/// Bisection width for the covering root.
pub const COVER_TOL: f64 = 1e-12;

/// Offset at which the bracketing sums are reported.
pub const BRACKET_OFFSET: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverReport {
    pub depth: usize,
    pub cylinders: u64,
    pub root: f64,
    /// Final bisection bracket around `root`.
    pub bracket: (f64, f64),
    pub predicted: f64,
    /// `log Σ |J_n|^s` at `s = predicted`.
    pub sum_at_prediction: f64,
    /// `log Σ |J_n|^s` at `predicted + BRACKET_OFFSET`.
    pub sum_above: f64,
    /// `log Σ |J_n|^s` at `predicted − BRACKET_OFFSET`.
    pub sum_below: f64,
}

/// `min{s_{A1}, g}` for the scheme's alphabet: the dimension the limiting
/// set should have as `M → ∞` along the scheme's digit cap.
pub fn predicted_dimension(scheme: &CantorScheme, cfg: &SpectralConfig) -> Result<f64> {
    let p = &scheme.params;
    let cfg = cfg.with_alphabet(p.alphabet_max);
    let s = dim_root(&Potential::sb(p.a1)?, &cfg)?;
    let g = dim_root(&Potential::g(p.a1 * p.a2, p.a1)?, &cfg)?;
    Ok(s.min(g))
}

/// Log lengths of all order-`depth` basic cylinders, in lexicographic order.
pub fn cylinder_log_lengths(scheme: &CantorScheme, depth: usize, budget: u64) -> Result<Vec<f64>> {
    scheme.enumerate(depth, budget, |d| scheme.log_length_fast(d))
}

/// `log Σ exp(s·ℓ)` over the given log lengths.
pub fn log_cover_sum(log_lengths: &[f64], s: f64) -> f64 {
    let terms: Vec<f64> = log_lengths.iter().map(|l| s * l).collect();
    log_sum_exp(&terms)
}

pub fn covering_root(scheme: &CantorScheme, depth: usize, predicted: f64, budget: u64) -> Result<CoverReport> {
    let lengths = cylinder_log_lengths(scheme, depth, budget)?;
    let sum = |s: f64| log_cover_sum(&lengths, s);
    // Σ|J|^0 = |D_n| >= 1 and Σ|J| <= 1 for disjoint subintervals of [0, 1].
    let (mut lo, mut hi) = (0.0, 1.0);
    if sum(hi) > 0.0 {
        return Err(Error::NoRoot { upper: 1.0 });
    }
    while hi - lo > COVER_TOL {
        let mid = 0.5 * (lo + hi);
        if sum(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(CoverReport {
        depth,
        cylinders: lengths.len() as u64,
        root: 0.5 * (lo + hi),
        bracket: (lo, hi),
        predicted,
        sum_at_prediction: sum(predicted),
        sum_above: sum(predicted + BRACKET_OFFSET),
        sum_below: sum(predicted - BRACKET_OFFSET),
    })
}

/// `count` sampled points of the scheme as floats, for box counting.
pub fn sample_cloud(scheme: &CantorScheme, seed: u64, count: usize, depth: usize) -> Result<Vec<f64>> {
    Ok(scheme
        .sample_points(seed, count, depth)?
        .iter()
        .map(|(x, _)| x.to_f64().unwrap_or(f64::NAN))
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoxLevel {
    pub eps: f64,
    pub boxes: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxCount {
    /// Least-squares slope of `log N(ε)` against `log(1/ε)`.
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual of the fit.
    pub residual: f64,
    pub levels: Vec<BoxLevel>,
    /// Always true: a finite sample bounds no dimension.
    pub heuristic: bool,
}

/// Minimum sample size accepted by [`boxcount`].
pub const MIN_POINTS: usize = 1000;

pub fn boxcount(points: &[f64], eps_ladder: &[f64]) -> Result<BoxCount> {
    if points.len() < MIN_POINTS {
        return Err(Error::InvalidParameter(format!(
            "box counting needs at least {MIN_POINTS} points, got {}",
            points.len()
        )));
    }
    if points.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidParameter("points must be finite".into()));
    }
    if eps_ladder.len() < 2 {
        return Err(Error::DegenerateLadder("need at least two scales".into()));
    }
    if eps_ladder.iter().any(|e| !(e.is_finite() && *e > 0.0)) {
        return Err(Error::DegenerateLadder("scales must be positive".into()));
    }
    if eps_ladder.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::DegenerateLadder("scales must be strictly decreasing".into()));
    }
    let levels: Vec<BoxLevel> = eps_ladder
        .iter()
        .map(|&eps| {
            let boxes: BTreeSet<i64> = points.iter().map(|x| (x / eps).floor() as i64).collect();
            BoxLevel {
                eps,
                boxes: boxes.len() as u64,
            }
        })
        .collect();
    let xs: Vec<f64> = levels.iter().map(|l| -l.eps.ln()).collect();
    let ys: Vec<f64> = levels.iter().map(|l| (l.boxes as f64).ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = (xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    Ok(BoxCount {
        slope,
        intercept,
        residual,
        levels,
        heuristic: true,
    })
}

/// Dyadic scales `2^{-from} .. 2^{-to}`.
pub fn dyadic_ladder(from: i32, to: i32) -> Vec<f64> {
    (from..=to).map(|k| 2f64.powi(-k)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cantor::{build_scheme, SchemeParams, DEFAULT_ENUMERATION_BUDGET};

    fn toy1() -> CantorScheme {
        build_scheme(&SchemeParams::toy(2.0, 2.0, 3, 3)).unwrap()
    }

    #[test]
    fn depth_one_closed_form() {
        // J_1(a) = {1/(a + y) : y in [1/4, 1]}, the union of children with digits 1..3
        let sc = toy1();
        let lens: Vec<f64> = (1..=3u64)
            .map(|a| {
                let e1 = 1.0 / (a as f64 + 1.0);
                let e2 = 1.0 / (a as f64 + 0.25);
                e2 - e1
            })
            .collect();
        let f = |s: f64| lens.iter().map(|l| l.powf(s)).sum::<f64>();
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) > 1.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let rep = covering_root(&sc, 1, 0.5, DEFAULT_ENUMERATION_BUDGET).unwrap();
        assert_eq!(rep.cylinders, 3);
        assert!((rep.root - lo).abs() < 1e-10, "{} vs {lo}", rep.root);
        assert!(rep.bracket.0 <= rep.root && rep.root <= rep.bracket.1);
    }

    #[test]
    fn fast_lengths_match_exact() {
        let sc = toy1();
        for depth in 1..=6 {
            let fast = cylinder_log_lengths(&sc, depth, DEFAULT_ENUMERATION_BUDGET).unwrap();
            let exact = sc
                .enumerate(depth, DEFAULT_ENUMERATION_BUDGET, |d| {
                    sc.basic_cylinder(&crate::cf::Word::new(d.to_vec()).unwrap()).length()
                })
                .unwrap();
            for (f, e) in fast.iter().zip(&exact) {
                assert!((f - e.to_f64().unwrap().ln()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn sums_are_reproducible() {
        let sc = toy1();
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| covering_root(&sc, 7, 0.48, DEFAULT_ENUMERATION_BUDGET).unwrap())
        };
        let (a, b) = (run(1), run(4));
        assert_eq!(a.sum_at_prediction.to_bits(), b.sum_at_prediction.to_bits());
        assert_eq!(a.root.to_bits(), b.root.to_bits());
    }

    #[test]
    fn budget_is_enforced() {
        let r = covering_root(&toy1(), 9, 0.5, 1000);
        assert!(matches!(r, Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn full_grid_has_slope_one() {
        let pts: Vec<f64> = (0..1024).map(|k| k as f64 / 1024.0).collect();
        let b = boxcount(&pts, &dyadic_ladder(1, 10)).unwrap();
        assert!((b.slope - 1.0).abs() < 1e-12);
        assert!(b.residual < 1e-12);
        assert!(b.heuristic);
    }

    #[test]
    fn repeated_point_has_slope_zero() {
        let pts = vec![0.3; 2000];
        let b = boxcount(&pts, &dyadic_ladder(1, 10)).unwrap();
        assert_eq!(b.slope, 0.0);
    }

    #[test]
    fn bad_ladders() {
        let pts = vec![0.3; 2000];
        assert!(matches!(boxcount(&pts, &[0.1]), Err(Error::DegenerateLadder(_))));
        assert!(matches!(boxcount(&pts, &[0.1, 0.2]), Err(Error::DegenerateLadder(_))));
        assert!(matches!(boxcount(&pts, &[0.1, 0.0]), Err(Error::DegenerateLadder(_))));
        assert!(matches!(boxcount(&pts[..10], &[0.1, 0.01]), Err(Error::InvalidParameter(_))));
    }
}
