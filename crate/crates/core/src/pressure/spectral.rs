//! Leading eigenvalue of the weighted transfer operator
//!
//! ```text
//! (L_s f)(x) = e^{α(s)} Σ_{a=1..M} (a + x)^{-2s} f(1 / (a + x))
//! ```
//!
//! by polynomial collocation on Chebyshev points of `[0, 1]` and power
//! iteration. The branches are analytic on a neighbourhood of `[0, 1]`, so a
//! few dozen nodes resolve the eigenvalue to near machine precision.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pressure::extrapolate::LadderEntry;
use crate::pressure::Potential;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralConfig {
    pub alphabet_max: u64,
    /// Collocation node count `K`.
    pub nodes: usize,
    /// Relative change in the eigenvalue that ends power iteration.
    pub iter_tol: f64,
    pub max_iters: usize,
    /// Bisection width for [`dim_root`].
    pub root_tol: f64,
    /// Recompute with `2K` nodes and fail if `log λ` moves by more than
    /// `resolution_tol`.
    pub resolution_check: bool,
    pub resolution_tol: f64,
}

impl Default for SpectralConfig {
    fn default() -> Self {
        SpectralConfig {
            alphabet_max: 128,
            nodes: 32,
            iter_tol: 1e-12,
            max_iters: 10_000,
            root_tol: 1e-10,
            resolution_check: true,
            resolution_tol: 1e-10,
        }
    }
}

impl SpectralConfig {
    pub fn with_alphabet(mut self, alphabet_max: u64) -> Self {
        self.alphabet_max = alphabet_max;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.nodes < 8 {
            return Err(Error::InvalidParameter(format!("need at least 8 collocation nodes, got {}", self.nodes)));
        }
        if !(self.iter_tol > 0.0) || !(self.root_tol > 0.0) || !(self.resolution_tol > 0.0) {
            return Err(Error::InvalidParameter("tolerances must be positive".into()));
        }
        if self.alphabet_max == 0 {
            return Err(Error::InvalidParameter("alphabet_max must be at least 1".into()));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidParameter("max_iters must be at least 1".into()));
        }
        Ok(())
    }
}

/// Chebyshev points of the first kind on `[0, 1]` with barycentric weights.
fn chebyshev(k: usize) -> (Vec<f64>, Vec<f64>) {
    (0..k)
        .map(|j| {
            let theta = (2 * j + 1) as f64 * PI / (2 * k) as f64;
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            ((1.0 - theta.cos()) / 2.0, sign * theta.sin())
        })
        .unzip()
}

/// Row of Lagrange basis values `ℓ_j(y)`.
fn lagrange_row(y: f64, nodes: &[f64], weights: &[f64], out: &mut [f64]) {
    if let Some(hit) = nodes.iter().position(|&x| x == y) {
        out.iter_mut().for_each(|v| *v = 0.0);
        out[hit] = 1.0;
        return;
    }
    let mut total = 0.0;
    for ((o, &x), &w) in out.iter_mut().zip(nodes).zip(weights) {
        *o = w / (y - x);
        total += *o;
    }
    out.iter_mut().for_each(|v| *v /= total);
}

/// Collocation matrix of the unweighted operator (`α ≡ 0`), row-major.
fn collocation_matrix(s: f64, m: u64, k: usize) -> Vec<f64> {
    let (nodes, weights) = chebyshev(k);
    let mut mat = vec![0.0; k * k];
    let mut row = vec![0.0; k];
    for (i, &x) in nodes.iter().enumerate() {
        let out = &mut mat[i * k..(i + 1) * k];
        for a in 1..=m {
            let t = a as f64 + x;
            let w = t.powf(-2.0 * s);
            lagrange_row(1.0 / t, &nodes, &weights, &mut row);
            for (o, r) in out.iter_mut().zip(&row) {
                *o += w * r;
            }
        }
    }
    mat
}

fn power_iteration(mat: &[f64], k: usize, cfg: &SpectralConfig) -> Result<f64> {
    let mut v = vec![1.0; k];
    let mut w = vec![0.0; k];
    let mut lambda = 0.0;
    for _ in 0..cfg.max_iters {
        for (i, wi) in w.iter_mut().enumerate() {
            *wi = mat[i * k..(i + 1) * k].iter().zip(&v).map(|(a, b)| a * b).sum();
        }
        let norm = w.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()));
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::NonConvergence { iterations: 0 });
        }
        v.iter_mut().zip(&w).for_each(|(vi, wi)| *vi = wi / norm);
        if (norm - lambda).abs() <= cfg.iter_tol * norm {
            return Ok(norm);
        }
        lambda = norm;
    }
    Err(Error::NonConvergence {
        iterations: cfg.max_iters,
    })
}

fn log_lambda_at(potential: &Potential, s: f64, cfg: &SpectralConfig, nodes: usize) -> Result<f64> {
    let mat = collocation_matrix(s, cfg.alphabet_max, nodes);
    let lambda = power_iteration(&mat, nodes, cfg)?;
    Ok(potential.alpha(s) + lambda.ln())
}

/// `log λ_M(s)`, the pressure of the potential on the alphabet `{1..M}`.
pub fn spectral_eigenvalue(potential: &Potential, s: f64, cfg: &SpectralConfig) -> Result<f64> {
    potential.validate()?;
    cfg.validate()?;
    let value = log_lambda_at(potential, s, cfg, cfg.nodes)?;
    if cfg.resolution_check {
        let fine = log_lambda_at(potential, s, cfg, 2 * cfg.nodes)?;
        let shift = (fine - value).abs();
        if shift > cfg.resolution_tol {
            return Err(Error::UnderResolved {
                nodes: cfg.nodes,
                shift,
            });
        }
    }
    Ok(value)
}

/// Root of `log λ_M(s) = 0` on `[0, 1]`, clamped to the ends when the
/// pressure does not change sign there.
pub fn dim_root(potential: &Potential, cfg: &SpectralConfig) -> Result<f64> {
    potential.validate()?;
    cfg.validate()?;
    let inner = SpectralConfig {
        resolution_check: false,
        ..*cfg
    };
    let pressure = |s: f64| spectral_eigenvalue(potential, s, &inner);
    let root = if pressure(0.0)? <= 0.0 {
        0.0
    } else if pressure(1.0)? > 0.0 {
        1.0
    } else {
        let (mut lo, mut hi) = (0.0, 1.0);
        while hi - lo > cfg.root_tol {
            let mid = 0.5 * (lo + hi);
            if pressure(mid)? > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    };
    if cfg.resolution_check {
        spectral_eigenvalue(potential, root, cfg)?;
    }
    Ok(root)
}

/// [`dim_root`] at each alphabet size of the ladder.
pub fn dim_ladder(potential: &Potential, cfg: &SpectralConfig, ladder: &[u64]) -> Result<Vec<LadderEntry>> {
    ladder
        .par_iter()
        .map(|&m| {
            Ok(LadderEntry {
                alphabet_max: m,
                value: dim_root(potential, &cfg.with_alphabet(m))?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pressure::{direct_sum, root_finite, SumQuery};

    #[test]
    fn single_branch_matches_fixed_point() {
        let cfg = SpectralConfig::default().with_alphabet(1);
        let v = spectral_eigenvalue(&Potential::zero(), 1.0, &cfg).unwrap();
        let golden = (3.0 - 5f64.sqrt()) / 2.0;
        assert!((v - golden.ln()).abs() < 1e-12, "{v}");
        // ratio oracle at n = 20
        let f = |n| direct_sum(&SumQuery::new(Potential::zero(), 1.0, n, 1)).unwrap();
        assert!((f(21) - f(20) - v).abs() < 1e-6);
    }

    #[test]
    fn s_zero_counts_branches() {
        let cfg = SpectralConfig::default().with_alphabet(7);
        let v = spectral_eigenvalue(&Potential::zero(), 0.0, &cfg).unwrap();
        assert!((v - 7f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn two_letter_root() {
        let cfg = SpectralConfig::default().with_alphabet(2);
        let s = dim_root(&Potential::zero(), &cfg).unwrap();
        assert!((s - 0.5312805).abs() < 1e-6, "{s}");
        let v = spectral_eigenvalue(&Potential::zero(), s, &cfg).unwrap();
        assert!(v.abs() < 1e-8);
    }

    #[test]
    fn ratio_oracle_agrees_at_depth_twelve() {
        let pot = Potential::g(16.0, 4.5).unwrap();
        for &s in &[0.35, 0.6, 0.95] {
            let cfg = SpectralConfig::default().with_alphabet(3);
            let spec = spectral_eigenvalue(&pot, s, &cfg).unwrap();
            let f = |n| direct_sum(&SumQuery::new(pot, s, n, 3)).unwrap();
            assert!((spec - (f(13) - f(12))).abs() < 1e-3);
        }
    }

    #[test]
    fn finite_depth_roots_decrease_toward_spectral_root() {
        let cfg = SpectralConfig::default().with_alphabet(2);
        let spectral = dim_root(&Potential::zero(), &cfg).unwrap();
        let r8 = root_finite(Potential::zero(), 8, 2).unwrap();
        let r12 = root_finite(Potential::zero(), 12, 2).unwrap();
        assert!(r8 > r12 && r12 > spectral);
    }

    #[test]
    fn too_few_nodes_rejected() {
        let cfg = SpectralConfig {
            nodes: 4,
            ..SpectralConfig::default()
        };
        assert!(spectral_eigenvalue(&Potential::zero(), 1.0, &cfg).is_err());
    }

    #[test]
    fn coarse_grid_is_flagged() {
        let cfg = SpectralConfig {
            nodes: 8,
            alphabet_max: 256,
            resolution_tol: 1e-14,
            ..SpectralConfig::default()
        };
        let r = spectral_eigenvalue(&Potential::zero(), 0.3, &cfg);
        assert!(matches!(r, Err(Error::UnderResolved { nodes: 8, .. })), "{r:?}");
    }

    #[test]
    fn sb_decreases_in_base() {
        let cfg = SpectralConfig::default().with_alphabet(32);
        let a = dim_root(&Potential::sb(2.0).unwrap(), &cfg).unwrap();
        let b = dim_root(&Potential::sb(4.0).unwrap(), &cfg).unwrap();
        assert!(a > b);
    }
}
