//! Upper bounds for `n(d; m; k)`, the ambient dimension forcing every
//! intersection of multidegree `d` over `k` to contain a linear `P^m`, and
//! `l(d; m; k)`, which additionally forces `CH_m` to be generated by it.
//!
//! Bounds come from a small set of rules (see [`RuleId`]); the engine takes
//! the minimum over every applicable rule and records which one won.

mod cache;
mod derivation;
mod engine;
mod rules;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Pow, ToPrimitive};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::combinatorics::{binomial_u64, BigNat, FieldClass, Multidegree};

pub use cache::{CacheDocument, CacheEntry, CacheError, CACHE_ENV, CACHE_VERSION};
pub use derivation::{replay, Derivation, ReplayError, Step};
pub use engine::{BoundResult, Engine, EngineError};
pub use rules::{applicable_rules, Rule, RuleId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    N,
    L,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::N => "n",
            Kind::L => "l",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Standard,
    UniversalDomain,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KeyError {
    #[error("universal-domain mode applies only to l over a universal domain")]
    UniversalMode,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BoundKey {
    kind: Kind,
    degrees: Multidegree,
    m: u64,
    field: FieldClass,
    mode: Mode,
}

impl BoundKey {
    /// Key for `n(d; m; C_i)`. The bound only depends on the level, so a
    /// universal domain is recorded as `C_0`.
    pub fn n(degrees: Multidegree, m: u64, field: FieldClass) -> Self {
        BoundKey {
            kind: Kind::N,
            degrees,
            m,
            field: FieldClass::c(field.c_level),
            mode: Mode::Standard,
        }
    }

    pub fn l(degrees: Multidegree, m: u64, field: FieldClass, mode: Mode) -> Result<Self, KeyError> {
        if mode == Mode::UniversalDomain && !field.universal_domain {
            return Err(KeyError::UniversalMode);
        }
        Ok(BoundKey {
            kind: Kind::L,
            degrees,
            m,
            field,
            mode,
        })
    }

    /// `l` key whose mode follows the field: universal domains get the
    /// improved recursion.
    pub fn l_for_field(degrees: Multidegree, m: u64, field: FieldClass) -> Self {
        let mode = if field.universal_domain {
            Mode::UniversalDomain
        } else {
            Mode::Standard
        };
        BoundKey {
            kind: Kind::L,
            degrees,
            m,
            field,
            mode,
        }
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn degrees(&self) -> &Multidegree {
        &self.degrees
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn field(&self) -> FieldClass {
        self.field
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub(crate) fn with(&self, degrees: Multidegree, m: u64) -> Self {
        BoundKey {
            degrees,
            m,
            ..self.clone()
        }
    }

    /// `m + r`: every rule yields at least this much.
    pub fn lower_bound(&self) -> BigNat {
        BigNat::from(self.m) + BigNat::from(self.degrees.len())
    }
}

impl fmt::Display for BoundKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({};{};{})", self.kind, self.degrees, self.m, self.field)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundValue {
    Finite(#[serde(with = "crate::combinatorics::bignat_str")] BigNat),
    /// No rule applies.
    Infinite,
    /// Every derivation needed a linear-space dimension above the budget.
    BudgetExceeded,
}

impl BoundValue {
    pub fn finite(&self) -> Option<&BigNat> {
        match self {
            BoundValue::Finite(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, BoundValue::Finite(_))
    }
}

impl fmt::Display for BoundValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundValue::Finite(v) => write!(f, "{v}"),
            BoundValue::Infinite => f.write_str("infinite"),
            BoundValue::BudgetExceeded => f.write_str("budget exceeded"),
        }
    }
}

/// Which optional rules participate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RuleSet {
    /// Expected-dimension base over algebraically closed fields.
    pub predonzan: bool,
    /// `l(d; 0; C_0) <= d_1 + ... + d_r`.
    pub roitman: bool,
    /// Use the polar-cone inequality without the `+1` for projectivising the
    /// tangent directions, and allow the expected-dimension base on a single
    /// quadric. Both are unsound (a smooth conic contains no line, a smooth
    /// quadric threefold contains no plane); kept for comparison only.
    pub literal_polar: bool,
}

impl Default for RuleSet {
    fn default() -> Self {
        RuleSet {
            predonzan: true,
            roitman: false,
            literal_polar: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Limits {
    /// Largest linear-space dimension `m` the engine will evaluate.
    pub max_m: u64,
}

pub const DEFAULT_MAX_M: u64 = 1 << 14;

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_m: DEFAULT_MAX_M,
        }
    }
}

/// `d^i`, bounding `n(d; 0; C_i)`.
pub fn tsen_lang_base(d: u32, i: u32) -> BigNat {
    BigNat::from(d).pow(i)
}

/// `d_1^i + ... + d_r^i`, bounding `n(d_1, ..., d_r; 0; C_i)`.
pub fn lang_nagata_system_base(d: &Multidegree, i: u32) -> BigNat {
    d.degrees().iter().map(|&x| tsen_lang_base(x, i)).sum()
}

/// Expected dimension `(m+1)(n-m) - sum C(d_i + m, m)` of the variety of
/// `m`-planes on an intersection of multidegree `d` in `P^n`.
pub fn fano_expected_dim(n: u64, d: &Multidegree, m: u64) -> BigInt {
    assert!(n >= m, "need n >= m");
    let planes = BigInt::from(m + 1) * BigInt::from(n - m);
    let conditions: BigNat = d
        .degrees()
        .iter()
        .map(|&x| binomial_u64(x as u64 + m, m))
        .sum();
    planes - BigInt::from(conditions)
}

/// Smallest `n >= m + r` with non-negative expected dimension.
pub fn predonzan_min_n(d: &Multidegree, m: u64) -> BigNat {
    let conditions: BigNat = d
        .degrees()
        .iter()
        .map(|&x| binomial_u64(x as u64 + m, m))
        .sum();
    let per_row = BigNat::from(m + 1);
    let ceil = (&conditions + &per_row - BigNat::one()) / &per_row;
    let by_count = BigNat::from(m) + ceil;
    let by_codim = BigNat::from(m) + BigNat::from(d.len());
    by_count.max(by_codim)
}

/// Lower every degree by one, dropping the entries that reach zero.
/// Returns the new multidegree and the number of dropped entries.
pub fn degree_decrement(d: &Multidegree) -> (Multidegree, usize) {
    let kept: Vec<u32> = d.degrees().iter().filter(|&&x| x > 1).map(|&x| x - 1).collect();
    let dropped = d.len() - kept.len();
    (Multidegree::new(kept).expect("entries stay positive"), dropped)
}

pub(crate) fn to_u64_within(v: &BigNat, max: u64) -> Option<u64> {
    v.to_u64().filter(|&x| x <= max)
}
