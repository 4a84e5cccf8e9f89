//! Hausdorff-dimension laboratory for sets of real numbers defined by growth
//! conditions on their continued-fraction partial quotients.
//!
//! The crate is layered bottom-up:
//!
//! * [`cf`] exact continuants, cylinders and the Gauss map;
//! * [`growth`] symbolic growth functions and their exponents;
//! * [`pressure`] finite-alphabet pressure sums and spectral roots;
//! * [`classify`] the piecewise dimension formulas;
//! * [`cantor`] the sparse Cantor construction with its two measures;
//! * [`cover`] empirical covering and box-counting estimates;
//! * [`verify`] the invariant suites behind `cfdim verify`.

// `!(x > 0.0)` is deliberate: NaN must fail parameter checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cantor;
pub mod cf;
pub mod classify;
pub mod cover;
pub mod error;
pub mod growth;
pub mod logspace;
pub mod pressure;
pub mod verify;

pub use error::{Error, Result};

pub(crate) mod extended {
    //! Serde helper for extended reals: `+inf` travels as the string `"inf"`.
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_infinite() && *v > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(*v)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Str(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(v),
            Repr::Str(s) if s == "inf" => Ok(f64::INFINITY),
            Repr::Str(s) => Err(de::Error::custom(format!("expected number or \"inf\", got {s:?}"))),
        }
    }
}
