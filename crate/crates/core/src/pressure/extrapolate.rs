//! Alphabet-size extrapolation. Finite-alphabet dimensions increase to the
//! full-alphabet value; the tail is estimated assuming geometric decay of the
//! increments along the ladder. The estimate is a heuristic, not a bound.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Decreases smaller than this are treated as round-off.
pub const MONOTONICITY_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LadderEntry {
    #[serde(rename = "M")]
    pub alphabet_max: u64,
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Extrapolation {
    /// Value at the largest alphabet.
    pub last: f64,
    /// `last` plus the geometric tail estimate.
    pub extrapolated: f64,
    pub gap: f64,
    /// Size of the last increment along the ladder.
    pub error: f64,
}

pub fn extrapolate_alphabet(values: &[LadderEntry]) -> Result<Extrapolation> {
    if values.len() < 3 {
        return Err(Error::InvalidParameter(format!(
            "alphabet ladder needs at least 3 entries, got {}",
            values.len()
        )));
    }
    for (index, pair) in values.windows(2).enumerate() {
        if pair[1].alphabet_max <= pair[0].alphabet_max {
            return Err(Error::InvalidParameter("alphabet ladder must be strictly increasing in M".into()));
        }
        let drop = pair[0].value - pair[1].value;
        if drop > MONOTONICITY_TOL {
            return Err(Error::MonotonicityViolation { index, drop });
        }
    }
    let n = values.len();
    let d1 = values[n - 2].value - values[n - 3].value;
    let d2 = values[n - 1].value - values[n - 2].value;
    let last = values[n - 1].value;
    let gap = if d2 > 0.0 && d1 > 0.0 && d2 < d1 {
        let r = d2 / d1;
        d2 * r / (1.0 - r)
    } else {
        0.0
    };
    Ok(Extrapolation {
        last,
        extrapolated: last + gap,
        gap,
        error: d2.abs(),
    })
}
