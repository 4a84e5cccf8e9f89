//! Symbolic growth functions `Φ: N -> [1, ∞)` and their asymptotic exponents.
//!
//! Four closed families are supported, plus finite tables that declare a
//! closed tail. Exponents are read off symbolically:
//!
//! | family                      | `B`        | `b` |
//! |-----------------------------|------------|-----|
//! | `n^a`                       | 1          | 1   |
//! | `c·B^n`                     | `B`        | 1   |
//! | `exp(β·b^n)`                | ∞          | `b` |
//! | `exp(β·b^(n+k))`            | ∞          | `b` |
//!
//! where `log B = lim log Φ(n)/n` and `log b = lim log log Φ(n)/n`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance for deciding that two exponents coincide.
pub const EXPONENT_RTOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum GrowthSpec {
    /// `Φ(n) = n^a`.
    PowerLaw { a: f64 },
    /// `Φ(n) = c·B^n`.
    Exponential { c: f64, base: f64 },
    /// `Φ(n) = exp(β·b^n)`.
    DoublyExp { beta: f64, b: f64 },
    /// `Φ(n) = exp(β·b^(n+k))`.
    ShiftedDoublyExp { beta: f64, b: f64, k: i64 },
    /// `Φ(n) = values[n-1]` for `n <= values.len()`, then the tail.
    Table { values: Vec<f64>, tail: Option<Tail> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Tail {
    Family { spec: Box<GrowthSpec> },
    /// Alternates between two closed families by parity of `n`.
    Oscillating { even: Box<GrowthSpec>, odd: Box<GrowthSpec> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    /// Lower-bound function: exponents are liminfs.
    Phi1,
    /// Upper-bound function: exponents must be genuine limits.
    Phi2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LimitKind {
    Liminf,
    Lim,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrowthExponents {
    #[serde(rename = "B", with = "crate::extended")]
    pub base: f64,
    #[serde(with = "crate::extended")]
    pub b: f64,
    pub limit_kind: LimitKind,
    pub limit_exists: bool,
}

fn positive_finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidGrowth(format!("{name} must be positive and finite, got {v}")))
    }
}

fn above_one(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidGrowth(format!("{name} must exceed 1 so that Φ(n) → ∞, got {v}")))
    }
}

impl GrowthSpec {
    pub fn power(a: f64) -> Result<Self> {
        let s = GrowthSpec::PowerLaw { a };
        s.validate()?;
        Ok(s)
    }

    pub fn exponential(c: f64, base: f64) -> Result<Self> {
        let s = GrowthSpec::Exponential { c, base };
        s.validate()?;
        Ok(s)
    }

    pub fn doubly_exp(beta: f64, b: f64) -> Result<Self> {
        let s = GrowthSpec::DoublyExp { beta, b };
        s.validate()?;
        Ok(s)
    }

    pub fn shifted_doubly_exp(beta: f64, b: f64, k: i64) -> Result<Self> {
        let s = GrowthSpec::ShiftedDoublyExp { beta, b, k };
        s.validate()?;
        Ok(s)
    }

    pub fn table(values: Vec<f64>, tail: Option<Tail>) -> Result<Self> {
        let s = GrowthSpec::Table { values, tail };
        s.validate()?;
        Ok(s)
    }

    pub fn is_closed(&self) -> bool {
        !matches!(self, GrowthSpec::Table { .. })
    }

    /// Checks that `Φ(n) → ∞` and all parameters are in range.
    pub fn validate(&self) -> Result<()> {
        match *self {
            GrowthSpec::PowerLaw { a } => positive_finite("a", a),
            GrowthSpec::Exponential { c, base } => {
                positive_finite("c", c)?;
                above_one("B", base)
            }
            GrowthSpec::DoublyExp { beta, b } | GrowthSpec::ShiftedDoublyExp { beta, b, .. } => {
                positive_finite("beta", beta)?;
                above_one("b", b)
            }
            GrowthSpec::Table { ref values, ref tail } => {
                for (i, &v) in values.iter().enumerate() {
                    if !(v.is_finite() && v > 0.0) {
                        return Err(Error::InvalidGrowth(format!(
                            "table value Φ({}) = {v} must be positive and finite",
                            i + 1
                        )));
                    }
                }
                match tail {
                    None => Ok(()),
                    Some(Tail::Family { spec }) => closed_tail(spec),
                    Some(Tail::Oscillating { even, odd }) => {
                        closed_tail(even)?;
                        closed_tail(odd)
                    }
                }
            }
        }
    }

    /// The closed family that governs `Φ(n)` for all large `n`, when there is
    /// exactly one.
    pub fn tail_family(&self) -> Option<&GrowthSpec> {
        match self {
            GrowthSpec::Table { tail: Some(Tail::Family { spec }), .. } => Some(spec),
            GrowthSpec::Table { .. } => None,
            closed => Some(closed),
        }
    }

    /// The closed family that defines `Φ(n)` at this particular `n`, or `None`
    /// inside the table or past an undeclared tail.
    fn family_at(&self, n: u64) -> Option<&GrowthSpec> {
        match self {
            GrowthSpec::Table { values, tail } => {
                if n as usize <= values.len() {
                    return None;
                }
                match tail {
                    Some(Tail::Family { spec }) => Some(spec),
                    Some(Tail::Oscillating { even, odd }) => {
                        Some(if n.is_multiple_of(2) { even } else { odd })
                    }
                    None => None,
                }
            }
            closed => Some(closed),
        }
    }

    /// `log Φ(n)` for `n >= 1`. Doubly exponential values beyond the `f64`
    /// range come back as `+inf`; use [`GrowthSpec::log_log_eval`] there.
    pub fn log_eval(&self, n: u64) -> f64 {
        let x = n as f64;
        match *self {
            GrowthSpec::PowerLaw { a } => a * x.ln(),
            GrowthSpec::Exponential { c, base } => c.ln() + x * base.ln(),
            GrowthSpec::DoublyExp { beta, b } => beta * b.powf(x),
            GrowthSpec::ShiftedDoublyExp { beta, b, k } => beta * b.powf(x + k as f64),
            GrowthSpec::Table { ref values, .. } => {
                if n >= 1 && n as usize <= values.len() {
                    values[n as usize - 1].ln()
                } else {
                    match self.family_at(n) {
                        Some(f) => f.log_eval(n),
                        None => f64::NAN,
                    }
                }
            }
        }
    }

    /// `log log Φ(n)`, finite for every `n` up to `u64` range on the doubly
    /// exponential families. Meaningful only where `Φ(n) > 1`.
    pub fn log_log_eval(&self, n: u64) -> f64 {
        match self.family_at(n) {
            Some(GrowthSpec::DoublyExp { beta, b }) => beta.ln() + n as f64 * b.ln(),
            Some(GrowthSpec::ShiftedDoublyExp { beta, b, k }) => {
                beta.ln() + (n as f64 + *k as f64) * b.ln()
            }
            _ => self.log_eval(n).ln(),
        }
    }

    /// Asymptotic exponents. `Phi1` takes liminfs, `Phi2` requires limits.
    pub fn exponents(&self, role: Role) -> Result<GrowthExponents> {
        self.validate()?;
        let limit_kind = match role {
            Role::Phi1 => LimitKind::Liminf,
            Role::Phi2 => LimitKind::Lim,
        };
        let (base, b, limit_exists) = match self {
            GrowthSpec::Table { tail: None, .. } => return Err(Error::TailUndeclared),
            GrowthSpec::Table { tail: Some(Tail::Family { spec }), .. } => {
                let (base, b) = closed_exponents(spec);
                (base, b, true)
            }
            GrowthSpec::Table { tail: Some(Tail::Oscillating { even, odd }), .. } => {
                let e = closed_exponents(even);
                let o = closed_exponents(odd);
                let same = same_exponent(e.0, o.0) && same_exponent(e.1, o.1);
                let lower = if e.0 < o.0 || (e.0 == o.0 && e.1 <= o.1) { e } else { o };
                (lower.0, lower.1, same)
            }
            closed => {
                let (base, b) = closed_exponents(closed);
                (base, b, true)
            }
        };
        Ok(GrowthExponents {
            base,
            b,
            limit_kind,
            limit_exists,
        })
    }
}

fn closed_tail(spec: &GrowthSpec) -> Result<()> {
    if !spec.is_closed() {
        return Err(Error::InvalidGrowth("a table tail must be a closed family".into()));
    }
    spec.validate()
}

fn closed_exponents(spec: &GrowthSpec) -> (f64, f64) {
    match *spec {
        GrowthSpec::PowerLaw { .. } => (1.0, 1.0),
        GrowthSpec::Exponential { base, .. } => (base, 1.0),
        GrowthSpec::DoublyExp { b, .. } | GrowthSpec::ShiftedDoublyExp { b, .. } => {
            (f64::INFINITY, b)
        }
        GrowthSpec::Table { .. } => unreachable!("tails are closed families"),
    }
}

/// Equality of extended reals up to [`EXPONENT_RTOL`].
pub fn same_exponent(x: f64, y: f64) -> bool {
    if x.is_infinite() || y.is_infinite() {
        return x == y;
    }
    (x - y).abs() <= EXPONENT_RTOL * x.abs().max(y.abs())
}

// ---------------------------------------------------------------------------
// Text syntax

fn fmt_closed(spec: &GrowthSpec, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match *spec {
        GrowthSpec::PowerLaw { a } => write!(f, "pow:a={a}"),
        GrowthSpec::Exponential { c, base } => write!(f, "exp:B={base},c={c}"),
        GrowthSpec::DoublyExp { beta, b } => write!(f, "dexp:b={b},beta={beta}"),
        GrowthSpec::ShiftedDoublyExp { beta, b, k } => {
            write!(f, "dexpshift:b={b},beta={beta},k={k}")
        }
        GrowthSpec::Table { ref values, ref tail } => {
            let vals: Vec<String> = values.iter().map(|v| v.to_string()).collect();
            write!(f, "table:{}", vals.join("/"))?;
            match tail {
                None => Ok(()),
                Some(Tail::Family { spec }) => write!(f, "|{spec}"),
                Some(Tail::Oscillating { even, odd }) => write!(f, "|osc:{even}&{odd}"),
            }
        }
    }
}

impl fmt::Display for GrowthSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_closed(self, f)
    }
}

struct Params<'a> {
    family: &'a str,
    pairs: Vec<(&'a str, &'a str)>,
}

impl<'a> Params<'a> {
    fn parse(family: &'a str, body: &'a str) -> Result<Self> {
        let mut pairs = Vec::new();
        if !body.is_empty() {
            for item in body.split(',') {
                let (k, v) = item
                    .split_once('=')
                    .ok_or_else(|| Error::Parse(format!("expected key=value in {family}, got {item:?}")))?;
                if pairs.iter().any(|(seen, _)| *seen == k.trim()) {
                    return Err(Error::Parse(format!("duplicate key {k:?} in {family}")));
                }
                pairs.push((k.trim(), v.trim()));
            }
        }
        Ok(Params { family, pairs })
    }

    fn take(&mut self, key: &str) -> Option<&'a str> {
        let i = self.pairs.iter().position(|(k, _)| *k == key)?;
        Some(self.pairs.remove(i).1)
    }

    fn real(&mut self, key: &str, default: Option<f64>) -> Result<f64> {
        match self.take(key) {
            Some(v) => v
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("{}: {key}={v:?} is not a number", self.family))),
            None => default.ok_or_else(|| Error::Parse(format!("{}: missing {key}", self.family))),
        }
    }

    fn int(&mut self, key: &str) -> Result<i64> {
        let v = self
            .take(key)
            .ok_or_else(|| Error::Parse(format!("{}: missing {key}", self.family)))?;
        v.parse::<i64>()
            .map_err(|_| Error::Parse(format!("{}: {key}={v:?} is not an integer", self.family)))
    }

    fn finish(self) -> Result<()> {
        match self.pairs.first() {
            None => Ok(()),
            Some((k, _)) => Err(Error::Parse(format!("{}: unknown key {k:?}", self.family))),
        }
    }
}

fn parse_closed(text: &str) -> Result<GrowthSpec> {
    let (family, body) = text
        .trim()
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("expected family:params, got {text:?}")))?;
    let mut p = Params::parse(family, body)?;
    let spec = match family {
        "pow" => GrowthSpec::PowerLaw { a: p.real("a", None)? },
        "exp" => {
            let base = p.real("B", None)?;
            let c = p.real("c", Some(1.0))?;
            GrowthSpec::Exponential { c, base }
        }
        "dexp" => {
            let b = p.real("b", None)?;
            let beta = p.real("beta", None)?;
            GrowthSpec::DoublyExp { beta, b }
        }
        "dexpshift" => {
            let b = p.real("b", None)?;
            let beta = p.real("beta", None)?;
            let k = p.int("k")?;
            GrowthSpec::ShiftedDoublyExp { beta, b, k }
        }
        other => return Err(Error::Parse(format!("unknown growth family {other:?}"))),
    };
    p.finish()?;
    Ok(spec)
}

impl FromStr for GrowthSpec {
    type Err = Error;

    /// Parses `pow:a=2`, `exp:B=4,c=1`, `dexp:b=3,beta=1`,
    /// `dexpshift:b=2,beta=1,k=-1` and `table:v1/v2/...|<tail>` where the
    /// tail is a closed family or `osc:<even>&<odd>`.
    fn from_str(text: &str) -> Result<Self> {
        let text = text.trim();
        let spec = if let Some(rest) = text.strip_prefix("table:") {
            let (vals, tail) = match rest.split_once('|') {
                Some((v, t)) => (v, Some(t)),
                None => (rest, None),
            };
            let values = if vals.trim().is_empty() {
                Vec::new()
            } else {
                vals.split('/')
                    .map(|v| {
                        v.trim()
                            .parse::<f64>()
                            .map_err(|_| Error::Parse(format!("table value {v:?} is not a number")))
                    })
                    .collect::<Result<Vec<_>>>()?
            };
            let tail = match tail {
                None => None,
                Some(t) => Some(match t.trim().strip_prefix("osc:") {
                    Some(pair) => {
                        let (even, odd) = pair
                            .split_once('&')
                            .ok_or_else(|| Error::Parse("osc tail needs <even>&<odd>".into()))?;
                        Tail::Oscillating {
                            even: Box::new(parse_closed(even)?),
                            odd: Box::new(parse_closed(odd)?),
                        }
                    }
                    None => Tail::Family {
                        spec: Box::new(parse_closed(t)?),
                    },
                }),
            };
            GrowthSpec::Table { values, tail }
        } else {
            parse_closed(text)?
        };
        spec.validate()?;
        Ok(spec)
    }
}

// ---------------------------------------------------------------------------
// Emptiness test

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IncompatibilityCertificate {
    /// First index of the numerically checked window.
    pub from: u64,
    pub horizon: u64,
    /// Smallest `log Φ1(n) − log Φ2(n) − log Φ2(n−1)` over the window.
    pub min_margin: f64,
    /// The symbolic rule that carries the inequality past the horizon.
    pub persistence: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Incompatibility {
    EmptyForced(IncompatibilityCertificate),
    Inconclusive { reason: String },
}

impl Incompatibility {
    pub fn is_empty_forced(&self) -> bool {
        matches!(self, Incompatibility::EmptyForced(_))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Rank {
    Power,
    Exp,
    DoublyExp,
}

fn rank(spec: &GrowthSpec) -> Rank {
    match spec {
        GrowthSpec::PowerLaw { .. } => Rank::Power,
        GrowthSpec::Exponential { .. } => Rank::Exp,
        _ => Rank::DoublyExp,
    }
}

/// `(γ, b)` with `log Φ(n) = γ·b^n` for the doubly exponential families.
fn dexp_coefficients(spec: &GrowthSpec) -> Option<(f64, f64)> {
    match *spec {
        GrowthSpec::DoublyExp { beta, b } => Some((beta, b)),
        GrowthSpec::ShiftedDoublyExp { beta, b, k } => Some((beta * b.powf(k as f64), b)),
        _ => None,
    }
}

/// `log Φ1(n) − log Φ2(n) − log Φ2(n−1)`, rescaled by `b2^{-n}` when both
/// sides are doubly exponential and the raw value is not representable. Only
/// the sign and monotonicity are consumed downstream.
fn margin(phi1: &GrowthSpec, phi2: &GrowthSpec, n: u64) -> f64 {
    let raw = phi1.log_eval(n) - phi2.log_eval(n) - phi2.log_eval(n - 1);
    if raw.is_finite() || raw == f64::INFINITY {
        return raw;
    }
    let f1 = phi1.family_at(n).and_then(dexp_coefficients);
    let f2 = phi2.family_at(n).and_then(dexp_coefficients);
    match (f1, f2) {
        (Some((g1, b1)), Some((g2, b2))) => {
            g1 * (b1 / b2).powf(n as f64) - g2 * (1.0 + 1.0 / b2)
        }
        _ => raw,
    }
}

/// Decides whether `Φ2(n)·Φ2(n−1) <= Φ1(n)` holds for all large `n`, which
/// makes the set of points with `a_n a_{n+1} >= Φ1(n)` infinitely often and
/// `a_{n+1} < Φ2(n)` eventually empty.
///
/// The inequality is checked numerically on `[max(2, ⌈horizon/2⌉), horizon]`
/// and then carried to infinity by comparing the tail families symbolically.
pub fn incompatibility_test(
    phi1: &GrowthSpec,
    phi2: &GrowthSpec,
    horizon: u64,
) -> Result<Incompatibility> {
    if horizon < 2 {
        return Err(Error::InvalidParameter(format!("horizon must be at least 2, got {horizon}")));
    }
    phi1.validate()?;
    phi2.validate()?;
    let inconclusive = |reason: String| Ok(Incompatibility::Inconclusive { reason });

    let from = horizon.div_ceil(2).max(2);
    let mut min_margin = f64::INFINITY;
    for n in from..=horizon {
        let d = margin(phi1, phi2, n);
        if d.is_nan() {
            return inconclusive(format!("margin not evaluable at n = {n}"));
        }
        if d < 0.0 {
            return inconclusive(format!("Φ2(n)Φ2(n−1) > Φ1(n) at n = {n}"));
        }
        min_margin = min_margin.min(d);
    }

    let (Some(f1), Some(f2)) = (phi1.tail_family(), phi2.tail_family()) else {
        return inconclusive("no single closed tail family; persistence undecidable".into());
    };
    let d_h = margin(phi1, phi2, horizon);
    let d_next = margin(phi1, phi2, horizon + 1);
    let persistence = match (rank(f1), rank(f2)) {
        (r1, r2) if r1 > r2 => {
            if d_next >= d_h {
                "Φ1 outgrows Φ2² and the margin is already increasing at the horizon"
            } else {
                return inconclusive("margin still decreasing at the horizon".into());
            }
        }
        (r1, r2) if r1 < r2 => {
            return inconclusive("Φ2² eventually dominates Φ1".into());
        }
        (Rank::Power, _) => {
            let (GrowthSpec::PowerLaw { a: a1 }, GrowthSpec::PowerLaw { a: a2 }) = (f1, f2) else {
                unreachable!()
            };
            if *a1 >= 2.0 * a2 {
                "power laws with a1 >= 2·a2"
            } else {
                return inconclusive("power-law exponent a1 < 2·a2".into());
            }
        }
        (Rank::Exp, _) => {
            let (
                GrowthSpec::Exponential { c: c1, base: b1 },
                GrowthSpec::Exponential { c: c2, base: b2 },
            ) = (f1, f2)
            else {
                unreachable!()
            };
            if same_exponent(*b1, b2 * b2) {
                if c1.ln() - 2.0 * c2.ln() + b2.ln() >= 0.0 {
                    "equal rates B1 = B2² with nonnegative constant margin"
                } else {
                    return inconclusive("B1 = B2² but the constant margin is negative".into());
                }
            } else if *b1 > b2 * b2 {
                "B1 > B2² and the linear margin is nonnegative at the horizon"
            } else {
                return inconclusive("B1 < B2²".into());
            }
        }
        (Rank::DoublyExp, _) => {
            let (g1, b1) = dexp_coefficients(f1).expect("doubly exponential");
            let (g2, b2) = dexp_coefficients(f2).expect("doubly exponential");
            if same_exponent(b1, b2) {
                if g1 - g2 * (1.0 + 1.0 / b2) >= 0.0 {
                    "equal rates b1 = b2 with γ1 >= γ2·(1 + 1/b)"
                } else {
                    return inconclusive("b1 = b2 but γ1 < γ2·(1 + 1/b)".into());
                }
            } else if b1 > b2 {
                "b1 > b2 and the margin is nonnegative at the horizon"
            } else {
                return inconclusive("b1 < b2".into());
            }
        }
    };
    Ok(Incompatibility::EmptyForced(IncompatibilityCertificate {
        from,
        horizon,
        min_margin,
        persistence: persistence.to_string(),
    }))
}
