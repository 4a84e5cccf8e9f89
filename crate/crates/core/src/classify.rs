//! Piecewise dimension formulas for the exceptional sets
//!
//! * `E1(Φ)`: `a_{n+1} >= Φ(n)` infinitely often;
//! * `E2(Φ)`: `a_n a_{n+1} >= Φ(n)` infinitely often;
//! * `F(Φ) = E2(Φ) \ E1(Φ)`;
//! * `F(Φ1, Φ2)`: `a_n a_{n+1} >= Φ1(n)` infinitely often and
//!   `a_{n+1} < Φ2(n)` for all large `n`;
//! * `F_{B1,B2} = F(B1^n, B2^n)`;
//! * `E(A1, A2)`: the sparse Cantor set of [`crate::cantor`].
//!
//! Every verdict carries the case it was decided by and machine-checkable
//! certificates for the inequalities that selected that case.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::growth::{
    incompatibility_test, same_exponent, GrowthExponents, GrowthSpec, Incompatibility,
    IncompatibilityCertificate, Role,
};
use crate::pressure::{dim_ladder, dim_root, extrapolate_alphabet, Potential, SpectralConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifierConfig {
    pub spectral: SpectralConfig,
    /// Alphabet sizes used to estimate the truncation error. `None` solves
    /// once at `spectral.alphabet_max` and reports only the bisection error.
    pub ladder: Option<Vec<u64>>,
    /// Last index checked numerically by the emptiness test.
    pub horizon: u64,
}

impl Default for ClassifierConfig {
    fn default() -> Self {
        let spectral = SpectralConfig::default();
        ClassifierConfig {
            ladder: default_ladder(spectral.alphabet_max),
            spectral,
            horizon: 50,
        }
    }
}

impl ClassifierConfig {
    /// Single solve per dimensional number, no ladder.
    pub fn single(spectral: SpectralConfig) -> Self {
        ClassifierConfig {
            spectral,
            ladder: None,
            horizon: 50,
        }
    }
}

/// `[M/4, M/2, M]`, or `None` when `M < 4`.
pub fn default_ladder(alphabet_max: u64) -> Option<Vec<u64>> {
    (alphabet_max >= 4).then(|| vec![alphabet_max / 4, alphabet_max / 2, alphabet_max])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictKind {
    Dimension,
    Empty,
    ZeroOrEmpty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Formula {
    #[serde(rename = "one")]
    One,
    #[serde(rename = "s_B")]
    SB,
    #[serde(rename = "s_0")]
    S0,
    #[serde(rename = "g")]
    G,
    #[serde(rename = "one_over_1_plus_b")]
    OneOverOnePlusB,
    #[serde(rename = "min_s_g")]
    MinSg,
    #[serde(rename = "flww")]
    Flww,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `B = 1`.
    BoundedGrowth,
    /// `1 < B < ∞`.
    ExponentialGrowth,
    /// `B = ∞`, doubly exponential rate `b`.
    SuperExponentialGrowth,
    /// `B1^{s0} <= B2` with `B1` finite.
    UpperBoundSlack,
    /// `B1^{s0} >= B2 > B1^{1/2}`.
    IntermediateUpperBound,
    /// `B2 < B1^{1/2}` with `B2` finite.
    UpperBoundBelowSquareRoot,
    /// `B1 = B2²`, not covered by the general formula.
    SquareRootBoundary,
    /// `B2` within the solver error band of `B1^{s0}`.
    NearRegimeBoundary,
    /// `B1 = B2 = ∞`, `b1 < b2`.
    SlowerDoublyExponential,
    /// `B1 = B2 = ∞`, `b1 > b2`.
    FasterDoublyExponential,
    /// `B1 = B2 = ∞`, `b1 = b2 < ∞`, not covered by the general formula.
    EqualDoublyExponentialRates,
    /// `b1 = b2 = ∞`.
    InfiniteDoublyExponentialRates,
    /// The emptiness test fired inside a case that predicts a dimension.
    IncompatibleGrowth,
    /// `min{s_{A1}, g_{A1·A2, A1}}`.
    MinimumOfTwoPressures,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Certificate {
    /// `lhs <relation> rhs` as stated.
    ParameterInequality { statement: String, lhs: f64, rhs: f64 },
    Incompatibility { certificate: IncompatibilityCertificate },
    /// An explicit inner set meets both constraints; `margin >= 0` witnesses it.
    InnerSetFeasible { statement: String, margin: f64 },
    Interpretation { note: String },
    /// Two formulas evaluated side by side.
    Branches {
        first: String,
        first_value: f64,
        second: String,
        second_value: f64,
        difference: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub kind: VerdictKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub formula: Option<Formula>,
    pub regime: Regime,
    pub boundary: bool,
    pub certificates: Vec<Certificate>,
    pub solver_error: f64,
}

impl Verdict {
    fn dimension(value: f64, formula: Formula, regime: Regime, solver_error: f64) -> Self {
        Verdict {
            kind: VerdictKind::Dimension,
            value: Some(value),
            formula: Some(formula),
            regime,
            boundary: false,
            certificates: Vec::new(),
            solver_error,
        }
    }

    fn empty(regime: Regime) -> Self {
        Verdict {
            kind: VerdictKind::Empty,
            value: None,
            formula: None,
            regime,
            boundary: false,
            certificates: Vec::new(),
            solver_error: 0.0,
        }
    }

    fn zero_or_empty(regime: Regime) -> Self {
        Verdict {
            kind: VerdictKind::ZeroOrEmpty,
            ..Verdict::empty(regime)
        }
    }

    fn on_boundary(mut self) -> Self {
        self.boundary = true;
        self
    }

    fn with(mut self, cert: Certificate) -> Self {
        self.certificates.push(cert);
        self
    }

    pub fn is_positive_dimension(&self) -> bool {
        self.kind == VerdictKind::Dimension && self.value.is_some_and(|v| v > 0.0)
    }
}

fn inequality(statement: &str, lhs: f64, rhs: f64) -> Certificate {
    Certificate::ParameterInequality {
        statement: statement.to_string(),
        lhs,
        rhs,
    }
}

fn note(text: &str) -> Certificate {
    Certificate::Interpretation { note: text.to_string() }
}

/// A dimensional number with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Solved {
    pub value: f64,
    pub error: f64,
}

/// Root of the pressure equation at the configured alphabet, with the ladder
/// increment as error estimate when a ladder is configured.
pub fn solve(potential: &Potential, cfg: &ClassifierConfig) -> Result<Solved> {
    match &cfg.ladder {
        Some(ladder) => {
            let entries = dim_ladder(potential, &cfg.spectral, ladder)?;
            let ext = extrapolate_alphabet(&entries)?;
            Ok(Solved {
                value: ext.last,
                error: ext.error.max(cfg.spectral.root_tol),
            })
        }
        None => Ok(Solved {
            value: dim_root(potential, &cfg.spectral)?,
            error: cfg.spectral.root_tol,
        }),
    }
}

fn one_over_one_plus(b: f64) -> f64 {
    1.0 / (1.0 + b)
}

/// Single-function sets share one shape: `B = 1`, `1 < B < ∞`, `B = ∞`.
fn classify_single(phi: &GrowthSpec, potential: fn(f64) -> Result<Potential>, formula: Formula, cfg: &ClassifierConfig) -> Result<Verdict> {
    let e = phi.exponents(Role::Phi1)?;
    if e.base == 1.0 {
        Ok(Verdict::dimension(1.0, Formula::One, Regime::BoundedGrowth, 0.0))
    } else if e.base.is_infinite() {
        Ok(Verdict::dimension(
            one_over_one_plus(e.b),
            Formula::OneOverOnePlusB,
            Regime::SuperExponentialGrowth,
            0.0,
        ))
    } else {
        let solved = solve(&potential(e.base)?, cfg)?;
        Ok(Verdict::dimension(solved.value, formula, Regime::ExponentialGrowth, solved.error))
    }
}

/// `dim E1(Φ)`: 1, `s_B` or `1/(1+b)`.
pub fn classify_e1(phi: &GrowthSpec, cfg: &ClassifierConfig) -> Result<Verdict> {
    classify_single(phi, Potential::sb, Formula::SB, cfg)
}

/// `dim E2(Φ)`: 1, `s_0` or `1/(1+b)`.
pub fn classify_e2(phi: &GrowthSpec, cfg: &ClassifierConfig) -> Result<Verdict> {
    classify_single(phi, Potential::s0, Formula::S0, cfg)
}

/// `dim F(Φ)`: `s_0` or `1/(1+b)`; undefined here for `B = 1`.
pub fn classify_f(phi: &GrowthSpec, cfg: &ClassifierConfig) -> Result<Verdict> {
    let e = phi.exponents(Role::Phi1)?;
    if e.base == 1.0 {
        return Err(Error::Unsupported("F(Φ) is only classified for B > 1".into()));
    }
    classify_single(phi, Potential::s0, Formula::S0, cfg)
}

/// `dim F_{B1,B2}`, which is `F(Φ1, Φ2)` for `Φ1 = B1^n`, `Φ2 = B2^n`.
pub fn classify_fbb(b1: f64, b2: f64, cfg: &ClassifierConfig) -> Result<Verdict> {
    for (name, v) in [("B1", b1), ("B2", b2)] {
        if !(v.is_finite() && v > 1.0) {
            return Err(Error::InvalidParameter(format!("{name} must be a finite real above 1, got {v}")));
        }
    }
    classify_f2(
        &GrowthSpec::exponential(1.0, b1)?,
        &GrowthSpec::exponential(1.0, b2)?,
        cfg,
    )
}

/// `dim F(Φ1, Φ2)` from the liminf exponents of `Φ1` and the limit exponents
/// of `Φ2`.
pub fn classify_f2(phi1: &GrowthSpec, phi2: &GrowthSpec, cfg: &ClassifierConfig) -> Result<Verdict> {
    let e1 = phi1.exponents(Role::Phi1)?;
    let e2 = phi2.exponents(Role::Phi2)?;
    if !e2.limit_exists {
        return Err(Error::LimitMissing);
    }
    let incompat = incompatibility_test(phi1, phi2, cfg.horizon)?;
    let forced = match &incompat {
        Incompatibility::EmptyForced(c) => Some(Certificate::Incompatibility { certificate: c.clone() }),
        Incompatibility::Inconclusive { .. } => None,
    };
    let pair = Pair {
        phi1,
        phi2,
        e1,
        e2,
        forced,
    };
    match (e1.base.is_finite(), e2.base.is_finite()) {
        (true, _) => pair.finite_lower(cfg),
        (false, true) => Ok(pair.empty_with(
            Verdict::empty(Regime::UpperBoundBelowSquareRoot)
                .with(inequality("B1^(1/2) > B2 with B2 finite", e1.base, e2.base)),
        )),
        (false, false) => pair.doubly_exponential(),
    }
}

struct Pair<'a> {
    phi1: &'a GrowthSpec,
    phi2: &'a GrowthSpec,
    e1: GrowthExponents,
    e2: GrowthExponents,
    forced: Option<Certificate>,
}

impl Pair<'_> {
    /// Attach the emptiness certificate when there is one.
    fn empty_with(&self, v: Verdict) -> Verdict {
        match &self.forced {
            Some(c) => v.with(c.clone()),
            None => v,
        }
    }

    /// A dimension case; overridden by an emptiness certificate.
    fn dimension_unless_forced(&self, v: Verdict) -> Verdict {
        match &self.forced {
            Some(c) => Verdict::empty(Regime::IncompatibleGrowth).with(c.clone()),
            None => v,
        }
    }

    fn finite_lower(&self, cfg: &ClassifierConfig) -> Result<Verdict> {
        let (b1, b2) = (self.e1.base, self.e2.base);
        let root = b1.sqrt();
        if b2.is_infinite() {
            let v = if b1 == 1.0 {
                Verdict::dimension(1.0, Formula::One, Regime::UpperBoundSlack, 0.0)
            } else {
                let s0 = solve(&Potential::s0(b1)?, cfg)?;
                Verdict::dimension(s0.value, Formula::S0, Regime::UpperBoundSlack, s0.error)
            };
            return Ok(self.dimension_unless_forced(v.with(note(
                "B2 = ∞ with B1 finite: the condition B1^s0 <= B2 holds trivially",
            ))));
        }
        if same_exponent(b2, root) {
            return self.square_root_boundary(cfg);
        }
        if b2 < root {
            return Ok(self.empty_with(
                Verdict::empty(Regime::UpperBoundBelowSquareRoot)
                    .with(inequality("B1^(1/2) > B2 with B2 finite", root, b2)),
            ));
        }
        if b1 == 1.0 {
            let v = Verdict::dimension(1.0, Formula::One, Regime::UpperBoundSlack, 0.0)
                .with(inequality("B1^s0 <= B2 with s0 = 1 at B1 = 1", 1.0, b2));
            return Ok(self.dimension_unless_forced(v));
        }
        let s0 = solve(&Potential::s0(b1)?, cfg)?;
        let threshold = b1.powf(s0.value);
        let band = threshold * b1.ln() * s0.error;
        let v = if b2 >= threshold + band {
            Verdict::dimension(s0.value, Formula::S0, Regime::UpperBoundSlack, s0.error)
                .with(inequality("B1^s0 <= B2", threshold, b2))
        } else if b2 <= threshold - band {
            let g = solve(&Potential::g(b1, b2)?, cfg)?;
            Verdict::dimension(g.value, Formula::G, Regime::IntermediateUpperBound, g.error)
                .with(inequality("B1^s0 >= B2", threshold, b2))
                .with(inequality("B2 > B1^(1/2)", b2, root))
        } else {
            let g = solve(&Potential::g(b1, b2)?, cfg)?;
            Verdict::dimension(s0.value, Formula::S0, Regime::NearRegimeBoundary, s0.error.max(g.error))
                .with(inequality("|B2 - B1^s0| within the solver error band", (b2 - threshold).abs(), band))
                .with(Certificate::Branches {
                    first: "s_0".into(),
                    first_value: s0.value,
                    second: "g".into(),
                    second_value: g.value,
                    difference: (s0.value - g.value).abs(),
                })
        };
        Ok(self.dimension_unless_forced(v))
    }

    /// `B1 = B2²`: empty when the constants force it, otherwise dimension `g`
    /// when the inner window set with `a_n, a_{n+1} ≍ B2^n` fits between the
    /// two constraints.
    fn square_root_boundary(&self, cfg: &ClassifierConfig) -> Result<Verdict> {
        let (b1, b2) = (self.e1.base, self.e2.base);
        let regime = Regime::SquareRootBoundary;
        if let Some(c) = &self.forced {
            return Ok(Verdict::empty(regime).on_boundary().with(c.clone()));
        }
        match (self.phi1.tail_family(), self.phi2.tail_family()) {
            (Some(GrowthSpec::PowerLaw { .. }), Some(GrowthSpec::PowerLaw { .. })) => Ok(
                Verdict::dimension(1.0, Formula::One, regime, 0.0)
                    .on_boundary()
                    .with(note("B1 = B2 = 1: polynomial windows at sparse positions leave full dimension")),
            ),
            (Some(&GrowthSpec::Exponential { c: c1, .. }), Some(&GrowthSpec::Exponential { c: c2, .. })) => {
                // a_n ∈ [u·B2^n, 2u·B2^n), a_{n+1} ∈ [v·B2^n, 2v·B2^n) needs
                // uv >= c1, 2u <= c2/B2 and 2v <= c2.
                let margin = c2 * c2 - 4.0 * b2 * c1;
                if margin >= 0.0 {
                    let g = solve(&Potential::g(b1, b2)?, cfg)?;
                    Ok(Verdict::dimension(g.value, Formula::G, regime, g.error)
                        .on_boundary()
                        .with(Certificate::InnerSetFeasible {
                            statement: "c2² >= 4·B2·c1: windows [u·B2^n, 2u·B2^n) fit both constraints".into(),
                            margin,
                        }))
                } else {
                    Ok(Verdict::zero_or_empty(regime)
                        .on_boundary()
                        .with(inequality("c2² < 4·B2·c1: no inner window set", c2 * c2, 4.0 * b2 * c1)))
                }
            }
            _ => Ok(Verdict::zero_or_empty(regime)
                .on_boundary()
                .with(note("tail families do not expose the constants needed for the inner-set check"))),
        }
    }

    fn doubly_exponential(&self) -> Result<Verdict> {
        let (b1, b2) = (self.e1.b, self.e2.b);
        if b1.is_infinite() && b2.is_infinite() {
            return Ok(match &self.forced {
                Some(c) => Verdict::empty(Regime::InfiniteDoublyExponentialRates).with(c.clone()),
                None => Verdict::zero_or_empty(Regime::InfiniteDoublyExponentialRates),
            });
        }
        if same_exponent(b1, b2) {
            let regime = Regime::EqualDoublyExponentialRates;
            if let Some(c) = &self.forced {
                return Ok(Verdict::empty(regime).on_boundary().with(c.clone()));
            }
            let coeffs = |s: &GrowthSpec| match *s {
                GrowthSpec::DoublyExp { beta, .. } => Some(beta),
                GrowthSpec::ShiftedDoublyExp { beta, b, k } => Some(beta * b.powf(k as f64)),
                _ => None,
            };
            let g1 = self.phi1.tail_family().and_then(coeffs);
            let g2 = self.phi2.tail_family().and_then(coeffs);
            return Ok(match (g1, g2) {
                (Some(g1), Some(g2)) => {
                    // a_n ≍ e^{u b^n}, a_{n+1} ≍ e^{v b^n} needs u + v >= γ1 with
                    // u < γ2/b and v < γ2.
                    let margin = g2 * (1.0 + 1.0 / b2) - g1;
                    if margin > 0.0 {
                        Verdict::dimension(one_over_one_plus(b1), Formula::OneOverOnePlusB, regime, 0.0)
                            .on_boundary()
                            .with(Certificate::InnerSetFeasible {
                                statement: "γ2·(1 + 1/b) > γ1: doubly exponential windows fit both constraints".into(),
                                margin,
                            })
                    } else {
                        Verdict::zero_or_empty(regime)
                            .on_boundary()
                            .with(inequality("γ2·(1 + 1/b) <= γ1: no inner window set", g2 * (1.0 + 1.0 / b2), g1))
                    }
                }
                _ => Verdict::zero_or_empty(regime)
                    .on_boundary()
                    .with(note("tail families do not expose the constants needed for the inner-set check")),
            });
        }
        if b1 < b2 {
            let v = Verdict::dimension(
                one_over_one_plus(b1),
                Formula::OneOverOnePlusB,
                Regime::SlowerDoublyExponential,
                0.0,
            )
            .with(inequality("b1 < b2", b1, b2));
            Ok(self.dimension_unless_forced(v))
        } else {
            Ok(self.empty_with(
                Verdict::empty(Regime::FasterDoublyExponential).with(inequality("b1 > b2", b1, b2)),
            ))
        }
    }
}

/// `dim E(A1, A2) = min{s_{A1}, g_{A1·A2, A1}}`.
pub fn dim_ea(a1: f64, a2: f64, cfg: &ClassifierConfig) -> Result<Verdict> {
    if !(a1.is_finite() && a1 > 1.0) || !(a2.is_finite() && a2 > 0.0) {
        return Err(Error::InvalidParameter(format!("need A1 > 1 and A2 > 0, got A1 = {a1}, A2 = {a2}")));
    }
    let s = solve(&Potential::sb(a1)?, cfg)?;
    let g = solve(&Potential::g(a1 * a2, a1)?, cfg)?;
    let value = s.value.min(g.value);
    Ok(
        Verdict::dimension(value, Formula::MinSg, Regime::MinimumOfTwoPressures, s.error.max(g.error)).with(
            Certificate::Branches {
                first: "s_A1".into(),
                first_value: s.value,
                second: "g_(A1·A2),A1".into(),
                second_value: g.value,
                difference: (s.value - g.value).abs(),
            },
        ),
    )
}

/// `1/(b + 1)`, the dimension of `{a_n >= c^{b^n} i.o.}` and of
/// `{a_n >= c^{b^n} for all n}`.
pub fn dim_luczak(b: f64) -> Result<f64> {
    if !(b.is_finite() && b > 1.0) {
        return Err(Error::InvalidParameter(format!("b must exceed 1, got {b}")));
    }
    Ok(one_over_one_plus(b))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlwwValue {
    /// Closed-form liminf.
    pub value: f64,
    /// Smallest ratio over the second half of the evaluated range.
    pub numeric: f64,
    /// Last index at which the ratio was representable.
    pub evaluated_to: u64,
}

/// `liminf log(s_1⋯s_n) / (2·log(s_1⋯s_n) + log s_{n+1})` for the sequence
/// `s_n = Φ(n)`: `1/(1+b)` on doubly exponential families and `1/2` on the
/// exponential and power-law ones.
pub fn dim_flww(seq: &GrowthSpec, horizon: u64) -> Result<FlwwValue> {
    seq.validate()
        .map_err(|e| Error::Unsupported(format!("sequence must grow to infinity: {e}")))?;
    let family = seq
        .tail_family()
        .ok_or_else(|| Error::Unsupported("sequence tail must be a single closed family".into()))?;
    let value = match *family {
        GrowthSpec::DoublyExp { b, .. } | GrowthSpec::ShiftedDoublyExp { b, .. } => one_over_one_plus(b),
        GrowthSpec::Exponential { .. } | GrowthSpec::PowerLaw { .. } => 0.5,
        GrowthSpec::Table { .. } => unreachable!("tails are closed"),
    };
    if horizon < 2 {
        return Err(Error::InvalidParameter("horizon must be at least 2".into()));
    }
    let mut partial = 0.0;
    let mut ratios = Vec::new();
    let mut evaluated_to = 0;
    for n in 1..=horizon {
        partial += seq.log_eval(n);
        let r = partial / (2.0 * partial + seq.log_eval(n + 1));
        if !r.is_finite() {
            break;
        }
        ratios.push(r);
        evaluated_to = n;
    }
    let tail = &ratios[ratios.len() / 2..];
    let numeric = tail.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(FlwwValue {
        value,
        numeric,
        evaluated_to,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> GrowthSpec {
        s.parse().unwrap()
    }

    fn quick() -> ClassifierConfig {
        ClassifierConfig::single(SpectralConfig::default().with_alphabet(32))
    }

    #[test]
    fn single_function_sets() {
        let cfg = quick();
        let v = classify_e1(&g("pow:a=3"), &cfg).unwrap();
        assert_eq!((v.value, v.formula), (Some(1.0), Some(Formula::One)));
        let v = classify_e1(&g("dexp:b=3,beta=1"), &cfg).unwrap();
        assert_eq!(v.value, Some(0.25));
        let v = classify_e2(&g("pow:a=2"), &cfg).unwrap();
        assert_eq!(v.value, Some(1.0));
        let v = classify_e2(&g("dexp:b=2,beta=1"), &cfg).unwrap();
        assert!((v.value.unwrap() - 1.0 / 3.0).abs() < 1e-15);
        let v = classify_f(&g("dexp:b=4,beta=1"), &cfg).unwrap();
        assert_eq!(v.value, Some(0.2));
        assert!(matches!(classify_f(&g("pow:a=1"), &cfg), Err(Error::Unsupported(_))));
    }

    #[test]
    fn s0_exceeds_sb() {
        let cfg = quick();
        let sb = classify_e1(&g("exp:B=16"), &cfg).unwrap().value.unwrap();
        let s0 = classify_e2(&g("exp:B=16"), &cfg).unwrap().value.unwrap();
        assert!(s0 > sb);
        let f = classify_f(&g("exp:B=16"), &cfg).unwrap();
        assert_eq!(f.value, Some(s0));
    }

    #[test]
    fn fbb_regions() {
        let cfg = quick();
        let v = classify_fbb(16.0, 3.0, &cfg).unwrap();
        assert_eq!(v.kind, VerdictKind::Empty);
        assert_eq!(v.regime, Regime::UpperBoundBelowSquareRoot);
        assert!(!v.boundary);

        let s0 = solve(&Potential::s0(16.0).unwrap(), &cfg).unwrap().value;
        assert!(15.0 >= 16f64.powf(s0));
        let v = classify_fbb(16.0, 15.0, &cfg).unwrap();
        assert_eq!(v.formula, Some(Formula::S0));
        assert_eq!(v.value, Some(s0));

        let v = classify_fbb(16.0, 5.0, &cfg).unwrap();
        assert_eq!(v.regime, Regime::IntermediateUpperBound);
        let gv = solve(&Potential::g(16.0, 5.0).unwrap(), &cfg).unwrap().value;
        assert_eq!(v.value, Some(gv));

        let v = classify_fbb(16.0, 4.0, &cfg).unwrap();
        assert_eq!(v.kind, VerdictKind::Empty);
        assert!(v.boundary);
    }

    #[test]
    fn fbb_straddles_the_s0_curve_continuously() {
        let cfg = quick();
        let s0 = solve(&Potential::s0(16.0).unwrap(), &cfg).unwrap().value;
        let t = 16f64.powf(s0);
        let below = classify_fbb(16.0, t * (1.0 - 1e-6), &cfg).unwrap();
        let above = classify_fbb(16.0, t * (1.0 + 1e-6), &cfg).unwrap();
        assert!((below.value.unwrap() - above.value.unwrap()).abs() < 1e-4);
    }

    #[test]
    fn near_boundary_reports_both_branches() {
        let cfg = ClassifierConfig {
            ladder: Some(vec![8, 16, 32]),
            ..quick()
        };
        let s0 = solve(&Potential::s0(16.0).unwrap(), &cfg).unwrap();
        let v = classify_fbb(16.0, 16f64.powf(s0.value), &cfg).unwrap();
        assert_eq!(v.regime, Regime::NearRegimeBoundary);
        let Some(Certificate::Branches { difference, .. }) = v.certificates.last() else {
            panic!("{v:?}")
        };
        assert!(*difference < 1e-4);
    }

    #[test]
    fn squared_base_pair_is_empty() {
        let v = classify_f2(&g("exp:B=9"), &g("exp:B=3"), &quick()).unwrap();
        assert_eq!(v.kind, VerdictKind::Empty);
        assert!(v.boundary);
        assert_eq!(v.regime, Regime::SquareRootBoundary);
        assert!(matches!(v.certificates[0], Certificate::Incompatibility { .. }));
    }

    #[test]
    fn squared_base_pair_with_room_has_dimension_g() {
        let b: f64 = 3.0;
        let phi1 = GrowthSpec::exponential(1.0 / b, b * b).unwrap();
        let phi2 = GrowthSpec::exponential(3.0 * b, b).unwrap();
        let cfg = quick();
        let v = classify_f2(&phi1, &phi2, &cfg).unwrap();
        assert_eq!(v.kind, VerdictKind::Dimension);
        assert_eq!(v.formula, Some(Formula::G));
        assert!(v.boundary);
        let gv = solve(&Potential::g(b * b, b).unwrap(), &cfg).unwrap().value;
        assert_eq!(v.value, Some(gv));
    }

    #[test]
    fn doubly_exponential_cases() {
        let cfg = quick();
        let v = classify_f2(&g("dexp:b=2,beta=1"), &g("dexp:b=3,beta=1"), &cfg).unwrap();
        assert!((v.value.unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(v.regime, Regime::SlowerDoublyExponential);
        let v = classify_f2(&g("dexp:b=3,beta=1"), &g("dexp:b=2,beta=1"), &cfg).unwrap();
        assert_eq!(v.kind, VerdictKind::Empty);
        let v = classify_f2(&g("dexp:b=2,beta=1"), &g("dexp:b=2,beta=1"), &cfg).unwrap();
        assert_eq!(v.value, Some(1.0 / 3.0));
        assert!(v.boundary);
        let v = classify_f2(&g("dexp:b=2,beta=5"), &g("dexpshift:b=2,beta=1,k=-1"), &cfg).unwrap();
        assert_eq!(v.kind, VerdictKind::Empty);
        assert!(v.boundary);
        // equal rates: an infeasible inner set is always forced empty
        let v = classify_f2(&g("dexp:b=2,beta=2"), &g("dexpshift:b=2,beta=2,k=-1"), &cfg).unwrap();
        assert_eq!(v.kind, VerdictKind::Empty);
    }

    #[test]
    fn square_root_boundary_between_the_criteria() {
        // c1·B2 < c2² < 4·B2·c1: neither forced empty nor a feasible inner set
        let v = classify_f2(&g("exp:B=16,c=1"), &g("exp:B=4,c=3"), &quick()).unwrap();
        assert_eq!(v.kind, VerdictKind::ZeroOrEmpty);
        assert!(v.boundary);
        let v = classify_f2(&g("exp:B=16,c=1"), &g("exp:B=4,c=4"), &quick()).unwrap();
        assert_eq!(v.kind, VerdictKind::Dimension);
    }

    #[test]
    fn missing_limit_is_refused() {
        let r = classify_f2(&g("exp:B=9"), &g("table:|osc:exp:B=2&exp:B=5"), &quick());
        assert_eq!(r, Err(Error::LimitMissing));
    }

    #[test]
    fn infinite_upper_rate_with_finite_lower() {
        let v = classify_f2(&g("exp:B=4"), &g("dexp:b=2,beta=1"), &quick()).unwrap();
        assert_eq!(v.formula, Some(Formula::S0));
        assert!(v.certificates.iter().any(|c| matches!(c, Certificate::Interpretation { .. })));
    }

    #[test]
    fn ea_minimum() {
        let cfg = quick();
        let v = dim_ea(2.0, 2.0, &cfg).unwrap();
        let s = solve(&Potential::sb(2.0).unwrap(), &cfg).unwrap().value;
        let gg = solve(&Potential::g(4.0, 2.0).unwrap(), &cfg).unwrap().value;
        assert_eq!(v.value, Some(s.min(gg)));
        // g decreases as A2 grows and eventually is the minimum
        let big = dim_ea(2.0, 1e6, &cfg).unwrap();
        let Certificate::Branches { first_value, second_value, .. } = big.certificates[0] else {
            panic!()
        };
        assert!(second_value < first_value);
    }

    #[test]
    fn luczak_values() {
        assert!((dim_luczak(2.0).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(dim_luczak(4.0).unwrap(), 0.2);
        assert!((dim_luczak(1.0 + 1e-12).unwrap() - 0.5).abs() < 1e-9);
        assert!(dim_luczak(1.0).is_err());
    }

    #[test]
    fn flww_closed_forms() {
        let v = dim_flww(&g("dexp:b=1.000001,beta=1"), 40).unwrap();
        assert!((v.value - 0.5).abs() < 1e-6);
        let v = dim_flww(&g("dexp:b=3,beta=1"), 40).unwrap();
        assert_eq!(v.value, 0.25);
        assert!((v.numeric - 0.25).abs() < 1e-3, "{v:?}");
        let v = dim_flww(&g("exp:B=5,c=3"), 2000).unwrap();
        assert_eq!(v.value, 0.5);
        assert!((v.numeric - 0.5).abs() < 1e-2, "{v:?}");
        let constant = GrowthSpec::Exponential { c: 5.0, base: 1.0 };
        assert!(matches!(dim_flww(&constant, 10), Err(Error::Unsupported(_))));
    }
}
