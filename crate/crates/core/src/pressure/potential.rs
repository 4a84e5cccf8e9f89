use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Per-symbol potential `α(s)`; the full potential is `α(s) − 2s·log|x|`
/// summed along a word, i.e. `n·α(s) − 2s·log q_n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Potential {
    /// `α(s) = −s·log B`. `B = 1` gives the plain Gauss-map pressure.
    #[serde(rename = "sB")]
    SB {
        #[serde(rename = "B")]
        base: f64,
    },
    /// `α(s) = −s²·log B`.
    #[serde(rename = "s0")]
    S0 {
        #[serde(rename = "B")]
        base: f64,
    },
    /// `α(s) = −s·log B1 + (1 − s)·log B2`.
    #[serde(rename = "g")]
    G {
        #[serde(rename = "B1")]
        b1: f64,
        #[serde(rename = "B2")]
        b2: f64,
    },
}

impl Potential {
    /// `α ≡ 0`.
    pub fn zero() -> Self {
        Potential::SB { base: 1.0 }
    }

    pub fn sb(base: f64) -> Result<Self> {
        let p = Potential::SB { base };
        p.validate()?;
        Ok(p)
    }

    pub fn s0(base: f64) -> Result<Self> {
        let p = Potential::S0 { base };
        p.validate()?;
        Ok(p)
    }

    pub fn g(b1: f64, b2: f64) -> Result<Self> {
        let p = Potential::G { b1, b2 };
        p.validate()?;
        Ok(p)
    }

    /// `B >= 1` for the one-parameter kinds; `G` only needs positive
    /// parameters since the Cantor construction uses `B1 = A1·A2 < 1`.
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            Potential::SB { base } | Potential::S0 { base } => base.is_finite() && base >= 1.0,
            Potential::G { b1, b2 } => b1.is_finite() && b2.is_finite() && b1 > 0.0 && b2 > 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("potential parameters out of range: {self}")))
        }
    }

    pub fn alpha(&self, s: f64) -> f64 {
        match *self {
            Potential::SB { base } => -s * base.ln(),
            Potential::S0 { base } => -s * s * base.ln(),
            Potential::G { b1, b2 } => -s * b1.ln() + (1.0 - s) * b2.ln(),
        }
    }
}

impl fmt::Display for Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Potential::SB { base } => write!(f, "sB:B={base}"),
            Potential::S0 { base } => write!(f, "s0:B={base}"),
            Potential::G { b1, b2 } => write!(f, "g:B1={b1},B2={b2}"),
        }
    }
}

impl FromStr for Potential {
    type Err = Error;

    /// `sB:B=4`, `s0:B=16`, `g:B1=16,B2=4.5`.
    fn from_str(text: &str) -> Result<Self> {
        let (kind, body) = text
            .trim()
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("expected kind:params, got {text:?}")))?;
        let mut vals = std::collections::BTreeMap::new();
        for item in body.split(',').filter(|i| !i.trim().is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got {item:?}")))?;
            let v: f64 = v
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("{k}={v:?} is not a number")))?;
            vals.insert(k.trim().to_string(), v);
        }
        let mut get = |k: &str| {
            vals.remove(k)
                .ok_or_else(|| Error::Parse(format!("{kind}: missing {k}")))
        };
        let p = match kind {
            "sB" => Potential::SB { base: get("B")? },
            "s0" => Potential::S0 { base: get("B")? },
            "g" => Potential::G {
                b1: get("B1")?,
                b2: get("B2")?,
            },
            other => return Err(Error::Parse(format!("unknown potential kind {other:?}"))),
        };
        if let Some(k) = vals.keys().next() {
            return Err(Error::Parse(format!("{kind}: unknown key {k:?}")));
        }
        p.validate()?;
        Ok(p)
    }
}
