//! Exact integer and rational arithmetic plus the shared vocabulary
//! (multidegrees and field classes) used by every engine in the crate.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Arbitrary-precision non-negative integer.
pub type BigNat = BigUint;

/// Reduced rational with positive denominator.
pub type Rat = Ratio<i64>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CombinatoricsError {
    #[error("degree entries must be positive, got {0}")]
    NonPositiveDegree(i64),
    #[error("cannot parse multidegree {input:?}: {reason}")]
    Parse { input: String, reason: String },
    #[error("partial sum length {l} out of range 0..={r}")]
    PartialSumOutOfRange { l: usize, r: usize },
    #[error("a universal domain is algebraically closed; c-level must be 0, got {0}")]
    UniversalDomainLevel(u32),
}

/// `C(n, k)`, zero when `k > n`.
///
/// Panics if `min(k, n - k)` does not fit in a `u64`; such a coefficient
/// could not be stored anyway.
pub fn binomial(n: &BigNat, k: &BigNat) -> BigNat {
    if k > n {
        return BigNat::zero();
    }
    let complement = n - k;
    let k = if &complement < k { complement } else { k.clone() };
    let k = k.to_u64().expect("binomial lower index exceeds u64");
    let mut acc = BigNat::one();
    // acc = C(n - k + j, j) after step j; each division is exact.
    let base = n - BigNat::from(k);
    for j in 1..=k {
        acc *= &base + BigNat::from(j);
        acc /= BigNat::from(j);
    }
    acc
}

pub fn binomial_u64(n: u64, k: u64) -> BigNat {
    binomial(&BigNat::from(n), &BigNat::from(k))
}

/// Binomial with signed upper index using the vanishing convention:
/// zero unless `0 <= k <= n`.
pub fn binomial_i64(n: i64, k: i64) -> BigNat {
    if n < 0 || k < 0 || k > n {
        return BigNat::zero();
    }
    binomial_u64(n as u64, k as u64)
}

/// Sorted list of positive degrees `d_1 <= ... <= d_r`. Empty is allowed and
/// stands for the ambient projective space itself.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Multidegree(Vec<u32>);

impl Multidegree {
    pub fn new(mut degrees: Vec<u32>) -> Result<Self, CombinatoricsError> {
        if degrees.contains(&0) {
            return Err(CombinatoricsError::NonPositiveDegree(0));
        }
        degrees.sort_unstable();
        Ok(Multidegree(degrees))
    }

    pub fn from_signed(degrees: &[i64]) -> Result<Self, CombinatoricsError> {
        let mut out = Vec::with_capacity(degrees.len());
        for &d in degrees {
            if d <= 0 || d > u32::MAX as i64 {
                return Err(CombinatoricsError::NonPositiveDegree(d));
            }
            out.push(d as u32);
        }
        Self::new(out)
    }

    pub fn empty() -> Self {
        Multidegree(Vec::new())
    }

    /// `(1, 2, ..., d)`: the degrees of the polars of a degree-`d` form.
    pub fn polar_family(d: u32) -> Self {
        Multidegree((1..=d).collect())
    }

    pub fn degrees(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn smallest(&self) -> Option<u32> {
        self.0.first().copied()
    }

    pub fn is_all_linear(&self) -> bool {
        !self.0.is_empty() && self.0.iter().all(|&d| d == 1)
    }

    pub fn total(&self) -> u64 {
        self.0.iter().map(|&d| d as u64).sum()
    }

    /// Entries `[start, end)` as a new multidegree (still sorted).
    pub fn slice(&self, start: usize, end: usize) -> Multidegree {
        Multidegree(self.0[start..end].to_vec())
    }

    /// Drops the first linear entry, if any.
    pub fn without_first_linear(&self) -> Option<Multidegree> {
        match self.0.first() {
            Some(1) => Some(Multidegree(self.0[1..].to_vec())),
            _ => None,
        }
    }
}

impl TryFrom<Vec<u32>> for Multidegree {
    type Error = CombinatoricsError;
    fn try_from(v: Vec<u32>) -> Result<Self, Self::Error> {
        Multidegree::new(v)
    }
}

impl From<Multidegree> for Vec<u32> {
    fn from(d: Multidegree) -> Self {
        d.0
    }
}

impl fmt::Display for Multidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{d}")?;
        }
        f.write_str(")")
    }
}

impl FromStr for Multidegree {
    type Err = CombinatoricsError;

    /// Accepts `2,3,5`, `(2,3,5)`, `2 3 5`; an empty string or `()` is the
    /// empty multidegree.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let trimmed = s.trim().trim_start_matches('(').trim_end_matches(')');
        let mut out = Vec::new();
        for tok in trimmed.split(|c: char| c == ',' || c.is_whitespace()) {
            if tok.is_empty() {
                continue;
            }
            let d: i64 = tok.parse().map_err(|_| CombinatoricsError::Parse {
                input: s.to_string(),
                reason: format!("{tok:?} is not an integer"),
            })?;
            out.push(d);
        }
        Multidegree::from_signed(&out)
    }
}

/// `d_1 + ... + d_l`, the twist by the `l` smallest degrees.
pub fn partial_degree_sum(d: &Multidegree, l: usize) -> Result<BigNat, CombinatoricsError> {
    if l > d.len() {
        return Err(CombinatoricsError::PartialSumOutOfRange { l, r: d.len() });
    }
    Ok(d.degrees()[..l].iter().map(|&x| BigNat::from(x)).sum())
}

/// A field modelled only by its Tsen–Lang level: `C_i`.
///
/// A finitely generated extension of transcendence degree `t` over a `C_i`
/// field is treated as `C_{i+t}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FieldClass {
    pub c_level: u32,
    pub universal_domain: bool,
}

impl FieldClass {
    pub fn c(level: u32) -> Self {
        FieldClass {
            c_level: level,
            universal_domain: false,
        }
    }

    pub fn universal() -> Self {
        FieldClass {
            c_level: 0,
            universal_domain: true,
        }
    }

    pub fn new(c_level: u32, universal_domain: bool) -> Result<Self, CombinatoricsError> {
        if universal_domain && c_level != 0 {
            return Err(CombinatoricsError::UniversalDomainLevel(c_level));
        }
        Ok(FieldClass {
            c_level,
            universal_domain,
        })
    }

    /// The class of a finitely generated extension of transcendence degree `t`.
    pub fn extended_by(self, t: u32) -> Self {
        FieldClass::c(self.c_level + t)
    }

    pub fn is_algebraically_closed(self) -> bool {
        self.c_level == 0
    }
}

impl fmt::Display for FieldClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.universal_domain {
            f.write_str("K")
        } else {
            write!(f, "C{}", self.c_level)
        }
    }
}

/// Serde adaptor writing a [`BigNat`] as a decimal string.
pub mod bignat_str {
    use super::BigNat;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigNat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_str_radix(10))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigNat, D::Error> {
        let s = String::deserialize(d)?;
        BigNat::parse_bytes(s.as_bytes(), 10).ok_or_else(|| D::Error::custom("invalid decimal"))
    }
}
