//! Numeric value domain and the builtin semirings.
//!
//! Values are `f64`. Every array carries the [`Semiring`] that defines how its
//! entries are combined; the zero of the semiring is never stored.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A stored array value.
pub type Value = f64;

/// The builtin `(⊕, ⊗, 0, 1)` algebras.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Semiring {
    /// `+.×` with identities (0, 1).
    PlusTimes,
    /// `max.+` with identities (−∞, 0).
    MaxPlus,
    /// `min.+` with identities (+∞, 0).
    MinPlus,
    /// `max.×` over nonnegative values, identities (0, 1).
    MaxTimes,
    /// `min.×` over nonnegative values, identities (+∞, 1).
    MinTimes,
    /// `max.min` with identities (−∞, +∞).
    MaxMin,
    /// `min.max` with identities (+∞, −∞).
    MinMax,
}

impl Semiring {
    pub const ALL: [Semiring; 7] = [
        Semiring::PlusTimes,
        Semiring::MaxPlus,
        Semiring::MinPlus,
        Semiring::MaxTimes,
        Semiring::MinTimes,
        Semiring::MaxMin,
        Semiring::MinMax,
    ];

    /// Looks up a builtin semiring by its identifier (`plus_times`, `max_plus`, ...).
    pub fn builtin(name: &str) -> Result<Semiring> {
        Semiring::ALL
            .into_iter()
            .find(|s| s.name() == name)
            .ok_or_else(|| {
                let valid: Vec<_> = Semiring::ALL.iter().map(|s| s.name()).collect();
                Error::Config(format!(
                    "unknown semiring '{name}', expected one of: {}",
                    valid.join(", ")
                ))
            })
    }

    pub fn name(self) -> &'static str {
        match self {
            Semiring::PlusTimes => "plus_times",
            Semiring::MaxPlus => "max_plus",
            Semiring::MinPlus => "min_plus",
            Semiring::MaxTimes => "max_times",
            Semiring::MinTimes => "min_times",
            Semiring::MaxMin => "max_min",
            Semiring::MinMax => "min_max",
        }
    }

    #[inline]
    pub fn zero(self) -> Value {
        match self {
            Semiring::PlusTimes | Semiring::MaxTimes => 0.0,
            Semiring::MaxPlus | Semiring::MaxMin => f64::NEG_INFINITY,
            Semiring::MinPlus | Semiring::MinTimes | Semiring::MinMax => f64::INFINITY,
        }
    }

    #[inline]
    pub fn one(self) -> Value {
        match self {
            Semiring::PlusTimes | Semiring::MaxTimes | Semiring::MinTimes => 1.0,
            Semiring::MaxPlus | Semiring::MinPlus => 0.0,
            Semiring::MaxMin => f64::INFINITY,
            Semiring::MinMax => f64::NEG_INFINITY,
        }
    }

    /// `a ⊕ b`
    #[inline]
    pub fn plus(self, a: Value, b: Value) -> Value {
        match self {
            Semiring::PlusTimes => a + b,
            Semiring::MaxPlus | Semiring::MaxTimes | Semiring::MaxMin => a.max(b),
            Semiring::MinPlus | Semiring::MinTimes | Semiring::MinMax => a.min(b),
        }
    }

    /// `a ⊗ b`
    #[inline]
    pub fn times(self, a: Value, b: Value) -> Value {
        match self {
            Semiring::PlusTimes | Semiring::MaxTimes => a * b,
            Semiring::MaxPlus | Semiring::MinPlus => a + b,
            // 0 × ∞ must yield the annihilator, not NaN.
            Semiring::MinTimes => {
                if a == f64::INFINITY || b == f64::INFINITY {
                    f64::INFINITY
                } else {
                    a * b
                }
            }
            Semiring::MaxMin => a.min(b),
            Semiring::MinMax => a.max(b),
        }
    }

    #[inline]
    pub fn is_zero(self, v: Value) -> bool {
        v == self.zero()
    }

    fn nonnegative_only(self) -> bool {
        matches!(self, Semiring::MaxTimes | Semiring::MinTimes)
    }

    /// Checks that `v` may be ingested into an array over this semiring.
    ///
    /// NaN is always rejected. Infinities are accepted only when they are one
    /// of the semiring's identity elements. `max_times` and `min_times` reject
    /// negative values.
    pub fn validate(self, v: Value) -> Result<()> {
        let reason = if v.is_nan() {
            Some("NaN is not a value")
        } else if v.is_infinite() && v != self.zero() && v != self.one() {
            Some("infinite values are only allowed as identity elements")
        } else if self.nonnegative_only() && v < 0.0 {
            Some("negative values are not allowed")
        } else {
            None
        };
        match reason {
            Some(reason) => Err(Error::Domain {
                value: v,
                semiring: self.name(),
                reason,
            }),
            None => Ok(()),
        }
    }
}

impl fmt::Display for Semiring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Semiring {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Semiring::builtin(s)
    }
}
