//! Named invariant suites. Each check renders to one fixed-precision line so
//! reports are byte-identical across runs and thread counts.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cantor::{
    build_scheme, gap_report, holder_report, length_report, mass_consistency, CantorScheme, SchemeParams,
    DEFAULT_ENUMERATION_BUDGET,
};
use crate::classify::{classify_f2, solve, ClassifierConfig, Formula, VerdictKind};
use crate::cover::{boxcount, covering_root, dyadic_ladder, predicted_dimension, sample_cloud};
use crate::error::{Error, Result};
use crate::growth::GrowthSpec;
use crate::pressure::{direct_sum, dim_root, spectral_eigenvalue, Potential, SpectralConfig, SumQuery};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Props,
    Pressure,
    Cantor,
    Cover,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Props, Suite::Pressure, Suite::Cantor, Suite::Cover];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Props => "props",
            Suite::Pressure => "pressure",
            Suite::Cantor => "cantor",
            Suite::Cover => "cover",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite `{s}`; expected props, pressure, cantor or cover")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub spectral: SpectralConfig,
    /// Cap on enumerated words for the exhaustive checks.
    pub budget: u64,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            spectral: SpectralConfig::default(),
            budget: DEFAULT_ENUMERATION_BUDGET,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub suite: Suite,
    pub checks: Vec<Check>,
    pub passed: bool,
}

impl Report {
    fn new(suite: Suite, checks: Vec<Check>) -> Self {
        Report {
            suite,
            passed: checks.iter().all(|c| c.passed),
            checks,
        }
    }

    /// One line per check, then a summary line.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let mark = if c.passed { "PASS" } else { "FAIL" };
            out.push_str(&format!("{mark} {}/{}: {}\n", self.suite, c.name, c.detail));
        }
        let passed = self.checks.iter().filter(|c| c.passed).count();
        out.push_str(&format!("{}: {passed}/{} checks passed\n", self.suite, self.checks.len()));
        out
    }
}

fn check(name: impl Into<String>, passed: bool, detail: String) -> Check {
    Check {
        name: name.into(),
        passed,
        detail,
    }
}

pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> Result<Report> {
    let checks = match suite {
        Suite::Props => props(cfg)?,
        Suite::Pressure => pressure(cfg)?,
        Suite::Cantor => cantor(cfg)?,
        Suite::Cover => cover(cfg)?,
    };
    Ok(Report::new(suite, checks))
}

fn growth(text: &str) -> Result<GrowthSpec> {
    text.parse()
}

fn props(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let ccfg = ClassifierConfig {
        spectral: cfg.spectral,
        ..ClassifierConfig::default()
    };
    let mut out = Vec::new();
    for b in [2.0f64, 3.0, 5.0] {
        // a_n a_{n+1} >= B^{2n} i.o. against a_{n+1} < B^n
        let v = classify_f2(&growth(&format!("exp:B={}", b * b))?, &growth(&format!("exp:B={b}"))?, &ccfg)?;
        out.push(check(
            format!("square-root boundary, Φ1 = {}^n, Φ2 = {b}^n", b * b),
            v.kind == VerdictKind::Empty && v.boundary,
            format!("kind {:?}, boundary {}", v.kind, v.boundary),
        ));

        // Φ1 = B^{2n−1}, Φ2 = 3B·B^n leaves room for a_n ~ B^n
        let v = classify_f2(
            &GrowthSpec::exponential(1.0 / b, b * b)?,
            &GrowthSpec::exponential(3.0 * b, b)?,
            &ccfg,
        )?;
        let g = solve(&Potential::g(b * b, b)?, &ccfg)?.value;
        let value = v.value.unwrap_or(f64::NAN);
        out.push(check(
            format!("square-root boundary, Φ1 = {b}^(2n-1), Φ2 = {}·{b}^n", 3.0 * b),
            v.kind == VerdictKind::Dimension && v.formula == Some(Formula::G) && v.boundary && value == g,
            format!("kind {:?}, value {value:.10}, g({},{b}) = {g:.10}", v.kind, b * b),
        ));
    }
    for b in [2.0f64, 3.0] {
        let phi = growth(&format!("dexp:b={b},beta=1"))?;
        let v = classify_f2(&phi, &phi, &ccfg)?;
        let value = v.value.unwrap_or(f64::NAN);
        let want = 1.0 / (1.0 + b);
        out.push(check(
            format!("equal doubly exponential rates, b = {b}"),
            v.kind == VerdictKind::Dimension && v.boundary && (value - want).abs() < 1e-15,
            format!("kind {:?}, value {value:.10}, 1/(1+b) = {want:.10}", v.kind),
        ));
        let v = classify_f2(
            &growth(&format!("dexp:b={b},beta=5"))?,
            &growth(&format!("dexpshift:b={b},beta=1,k=-1"))?,
            &ccfg,
        )?;
        out.push(check(
            format!("incompatible doubly exponential pair, b = {b}"),
            v.kind == VerdictKind::Empty,
            format!("kind {:?}, boundary {}", v.kind, v.boundary),
        ));
    }
    Ok(out)
}

/// `|log λ_M(s) − (log f_{n+1}(s) − log f_n(s))|` over an `s` grid.
pub fn ratio_agreement(potential: &Potential, alphabet_max: u64, depth: usize, grid: &[f64], spectral: &SpectralConfig) -> Result<f64> {
    let cfg = spectral.with_alphabet(alphabet_max);
    let mut worst: f64 = 0.0;
    for &s in grid {
        let spec = spectral_eigenvalue(potential, s, &cfg)?;
        let hi = direct_sum(&SumQuery::new(*potential, s, depth + 1, alphabet_max))?;
        let lo = direct_sum(&SumQuery::new(*potential, s, depth, alphabet_max))?;
        worst = worst.max((spec - (hi - lo)).abs());
    }
    Ok(worst)
}

/// Twenty evenly spaced points of `[0.3, 1]`.
pub fn agreement_grid() -> Vec<f64> {
    (0..20).map(|i| 0.3 + 0.7 * i as f64 / 19.0).collect()
}

fn pressure(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let grid = agreement_grid();
    for pot in [Potential::sb(2.0)?, Potential::sb(16.0)?, Potential::s0(16.0)?, Potential::g(16.0, 4.5)?] {
        for m in [2u64, 3] {
            let worst = ratio_agreement(&pot, m, 12, &grid, &cfg.spectral)?;
            out.push(check(
                format!("ratio agreement {pot}, M = {m}"),
                worst <= 1e-3,
                format!("max |log λ − ratio(13/12)| = {worst:.3e} over 20 points"),
            ));
        }
    }

    let one = cfg.spectral.with_alphabet(1);
    let v = spectral_eigenvalue(&Potential::zero(), 1.0, &one)?;
    let golden = ((3.0 - 5f64.sqrt()) / 2.0).ln();
    out.push(check(
        "single branch eigenvalue",
        (v - golden).abs() < 1e-12,
        format!("log λ = {v:.15}, fixed point value {golden:.15}"),
    ));

    let bases = [1.5, 2.0, 4.0, 16.0, 256.0];
    let values = bases
        .iter()
        .map(|&b| dim_root(&Potential::sb(b)?, &cfg.spectral))
        .collect::<Result<Vec<_>>>()?;
    let decreasing = values.windows(2).all(|w| w[1] < w[0]);
    out.push(check(
        "s_B decreasing in B",
        decreasing,
        format!(
            "s_B at B = 1.5, 2, 4, 16, 256: {}",
            values.iter().map(|v| format!("{v:.6}")).collect::<Vec<_>>().join(", ")
        ),
    ));

    for b1 in [4.0f64, 16.0, 100.0] {
        let s0 = dim_root(&Potential::s0(b1)?, &cfg.spectral)?;
        let g = dim_root(&Potential::g(b1, b1.powf(s0))?, &cfg.spectral)?;
        out.push(check(
            format!("g(B1, B1^s0) = s0 at B1 = {b1}"),
            (g - s0).abs() <= 1e-4,
            format!("s0 = {s0:.10}, g = {g:.10}, |diff| = {:.3e}", (g - s0).abs()),
        ));
    }
    Ok(out)
}

/// The two desk-scale schemes used by the exhaustive checks.
pub fn toy_schemes() -> Result<Vec<CantorScheme>> {
    [SchemeParams::toy(2.0, 2.0, 3, 3), SchemeParams::toy(3.0, 1.5, 4, 2)]
        .iter()
        .map(build_scheme)
        .collect()
}

fn scheme_label(sc: &CantorScheme) -> String {
    let p = &sc.params;
    format!("E({},{}) M={} N={}", p.a1, p.a2, p.alphabet_max, p.block)
}

fn cantor(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for sc in toy_schemes()? {
        let label = scheme_label(&sc);
        let depth = sc.max_enumerable_depth(cfg.budget);
        let forced_depth = sc.levels[0].position as usize + 1;
        for j in [1u8, 2] {
            let rep = mass_consistency(&sc, j, depth, cfg.budget)?;
            out.push(check(
                format!("{label} mu{j} consistency"),
                rep.max_child_sum_error <= 1e-12,
                format!("depths 0..{depth}, max |log parent − log Σ children| = {:.3e}", rep.max_child_sum_error),
            ));
            out.push(check(
                format!("{label} mu{j} normalization"),
                rep.max_normalization_error <= 1e-12,
                format!("depths 0..={depth}, max |log Σ mass| = {:.3e}", rep.max_normalization_error),
            ));
        }

        let (mut violations, mut cylinders, mut min_ratio) = (0, 0, f64::INFINITY);
        for n in 1..=forced_depth {
            let g = gap_report(&sc, n, cfg.budget)?;
            violations += g.violations;
            cylinders += g.cylinders;
            min_ratio = min_ratio.min(g.min_gap_ratio);
        }
        let claimed = 1.0 / sc.params.alphabet_max as f64;
        out.push(check(
            format!("{label} gap >= |J_n|/M"),
            violations == 0,
            format!(
                "depths 1..={forced_depth}, {violations}/{cylinders} cylinders closer than |J_n|/M, min gap/|J_n| = {min_ratio:.6} vs {claimed:.6}"
            ),
        ));

        let tau = sc.holder_exponent();
        for j in [1u8, 2] {
            let h = holder_report(&sc, j, tau, 4096.0, forced_depth, cfg.budget)?;
            out.push(check(
                format!("{label} mu{j} Hölder bound"),
                h.failures == 0,
                format!(
                    "tau = {tau:.6}, c3 = 4096, fitted c3 = {:.6}, {} cylinders, {} failures",
                    h.fitted_c3, h.cylinders, h.failures
                ),
            ));
        }

        let l = length_report(&sc, cfg.budget)?;
        out.push(check(
            format!("{label} forced-index length bounds"),
            l.forced_first_failures == 0 && l.forced_second_failures == 0,
            format!(
                "{} cylinders, failures {}/{}, min ratios {:.6} / {:.6} vs 2^-11",
                l.cylinders, l.forced_first_failures, l.forced_second_failures, l.min_first_ratio, l.min_second_ratio
            ),
        ));

        let samples = sc.sample_points(cfg.seed, 200, 3 * forced_depth)?;
        let members = samples.iter().filter(|(_, w)| sc.is_member_prefix(w)).count();
        out.push(check(
            format!("{label} sampled words admissible"),
            members == samples.len(),
            format!("{members}/{} sampled words in D_n", samples.len()),
        ));
    }
    Ok(out)
}

fn cover(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for (i, sc) in toy_schemes()?.into_iter().enumerate() {
        let label = scheme_label(&sc);
        let predicted = predicted_dimension(&sc, &cfg.spectral)?;
        if i == 0 {
            let depth = sc.max_enumerable_depth(cfg.budget);
            let rep = covering_root(&sc, depth, predicted, cfg.budget)?;
            out.push(check(
                format!("{label} covering root within 0.1"),
                (rep.root - predicted).abs() <= 0.1,
                format!(
                    "depth {depth}, {} cylinders, root {:.6}, predicted {predicted:.6}",
                    rep.cylinders, rep.root
                ),
            ));
            out.push(check(
                format!("{label} covering sum brackets prediction ± 0.05"),
                rep.sum_above < 0.0 && rep.sum_below > 0.0,
                format!(
                    "log Σ|J|^s at predicted − 0.05, predicted, + 0.05: {:.6}, {:.6}, {:.6}",
                    rep.sum_below, rep.sum_at_prediction, rep.sum_above
                ),
            ));
        }
        let points = sample_cloud(&sc, cfg.seed, 10_000, 40)?;
        let bc = boxcount(&points, &dyadic_ladder(3, 10))?;
        out.push(check(
            format!("{label} box-count slope within 0.15 (heuristic)"),
            (bc.slope - predicted).abs() <= 0.15,
            format!(
                "10^4 samples, scales 2^-3..2^-10, slope {:.6}, predicted {predicted:.6}, residual {:.6}",
                bc.slope, bc.residual
            ),
        ));
    }
    Ok(out)
}
