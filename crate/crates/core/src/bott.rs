//! Cohomology of twisted differentials on projective space and the
//! Castelnuovo–Mumford regularity profiles derived from it.
//!
//! Dimensions come from Bott's closed form:
//!
//! ```text
//! h^0(P^n, Ω^p(k)) = C(k+n-p, k) C(k-1, p)          for k > p
//! h^p(P^n, Ω^p)    = 1
//! h^n(P^n, Ω^p(k)) = C(-k+p, -k) C(-k-1, n-p)       for k < p - n
//! ```
//!
//! and zero otherwise.

use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::combinatorics::{binomial_i64, BigNat, Multidegree};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProfileError {
    #[error("profile for dim {dim} needs {expected} entries, got {got}")]
    LengthMismatch { dim: u32, expected: usize, got: usize },
    #[error("query out of range: need 0 <= p, q <= n (n={n}, p={p}, q={q})")]
    QueryRange { n: u32, p: u32, q: u32 },
    #[error("codimension {codim} does not match {len} equations")]
    CodimMismatch { codim: u32, len: usize },
    #[error("ambient dimension {ambient} must exceed codimension {codim}")]
    AmbientTooSmall { ambient: u32, codim: u32 },
    #[error("malformed profile document: {0}")]
    Document(String),
}

/// Symbol of the group `H^q(P^n, Ω^p(k))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BottQuery {
    pub n: u32,
    pub p: u32,
    pub k: i64,
    pub q: u32,
}

impl BottQuery {
    pub fn new(n: u32, p: u32, k: i64, q: u32) -> Result<Self, ProfileError> {
        if p > n || q > n {
            return Err(ProfileError::QueryRange { n, p, q });
        }
        Ok(BottQuery { n, p, k, q })
    }
}

pub fn bott_dimension(query: BottQuery) -> BigNat {
    let BottQuery { n, p, k, q } = query;
    let (n, p, q) = (n as i64, p as i64, q as i64);
    if q == 0 && k > p {
        binomial_i64(k + n - p, k) * binomial_i64(k - 1, p)
    } else if k == 0 && q == p {
        BigNat::from(1u32)
    } else if q == n && k < p - n {
        binomial_i64(-k + p, -k) * binomial_i64(-k - 1, n - p)
    } else {
        BigNat::zero()
    }
}

/// True when `H^a(P^n, Ω^b(m - a)) = 0` for every `a` in `1..=n`.
pub fn is_regular(n: u32, b: u32, m: i64) -> bool {
    (1..=n).all(|a| bott_dimension(BottQuery { n, p: b, k: m - a as i64, q: a }).is_zero())
}

/// Smallest `m` for which `Ω^b` on `P^n` is `m`-regular, scanning upward
/// from `-(n+1)`.
///
/// For `b >= 1` this is `b + 1`. The structure sheaf (`b = 0`) is already
/// `0`-regular when `n >= 1`, and on a point every twist vanishes so the
/// scan returns its starting value.
pub fn regularity_of_omega(n: u32, b: u32) -> i64 {
    assert!(b <= n, "form degree {b} exceeds dimension {n}");
    let mut m = -(n as i64 + 1);
    // b + 1 always works, so the scan terminates there at the latest.
    while !is_regular(n, b, m) {
        m += 1;
        debug_assert!(m <= b as i64 + 1);
    }
    m
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileSource {
    ComputedPn,
    UserSupplied,
    BoundEstimate,
}

/// Regularity indices `m_0, ..., m_dim` of the sheaves of differential forms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegularityProfile {
    dim_x: u32,
    m: Vec<i64>,
    source: ProfileSource,
}

/// On-disk form of a user profile: `{"dim": 2, "m": [3, 2, 3]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileDocument {
    pub dim: u32,
    pub m: Vec<i64>,
}

impl RegularityProfile {
    pub fn new(dim_x: u32, m: Vec<i64>, source: ProfileSource) -> Result<Self, ProfileError> {
        let expected = dim_x as usize + 1;
        if m.len() != expected {
            return Err(ProfileError::LengthMismatch {
                dim: dim_x,
                expected,
                got: m.len(),
            });
        }
        Ok(RegularityProfile { dim_x, m, source })
    }

    pub fn user(dim_x: u32, m: Vec<i64>) -> Result<Self, ProfileError> {
        Self::new(dim_x, m, ProfileSource::UserSupplied)
    }

    pub fn from_document(doc: ProfileDocument) -> Result<Self, ProfileError> {
        Self::user(doc.dim, doc.m)
    }

    pub fn from_json(text: &str) -> Result<Self, ProfileError> {
        let doc: ProfileDocument =
            serde_json::from_str(text).map_err(|e| ProfileError::Document(e.to_string()))?;
        Self::from_document(doc)
    }

    pub fn to_document(&self) -> ProfileDocument {
        ProfileDocument {
            dim: self.dim_x,
            m: self.m.clone(),
        }
    }

    pub fn dim_x(&self) -> u32 {
        self.dim_x
    }

    pub fn values(&self) -> &[i64] {
        &self.m
    }

    pub fn get(&self, c: u32) -> i64 {
        self.m[c as usize]
    }

    pub fn source(&self) -> ProfileSource {
        self.source
    }
}

impl fmt::Display for RegularityProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.m.iter().map(|v| v.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

pub fn profile_pn(n: u32) -> RegularityProfile {
    let m = (0..=n).map(|c| regularity_of_omega(n, c)).collect();
    RegularityProfile {
        dim_x: n,
        m,
        source: ProfileSource::ComputedPn,
    }
}

/// `max_c (m_c - c - 1)`.
pub fn m_x(profile: &RegularityProfile) -> i64 {
    profile
        .m
        .iter()
        .enumerate()
        .map(|(c, &mc)| mc - c as i64 - 1)
        .max()
        .expect("profile has at least one entry")
}

/// Known endpoint bounds for a complete intersection `X` of codimension
/// `codim` in `P^ambient`. Intermediate indices stay unknown.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundedProfile {
    pub dim_x: u32,
    /// `upper[c] = Some(u)` means `m_c <= u`; `None` means unknown.
    pub upper: Vec<Option<i64>>,
    pub source: ProfileSource,
}

impl BoundedProfile {
    pub fn is_complete(&self) -> bool {
        self.upper.iter().all(Option::is_some)
    }
}

pub fn bound_profile(
    ambient_dim: u32,
    codim: u32,
    x_multidegree: &Multidegree,
) -> Result<BoundedProfile, ProfileError> {
    if codim as usize != x_multidegree.len() {
        return Err(ProfileError::CodimMismatch {
            codim,
            len: x_multidegree.len(),
        });
    }
    if ambient_dim <= codim {
        return Err(ProfileError::AmbientTooSmall {
            ambient: ambient_dim,
            codim,
        });
    }
    let dim_x = ambient_dim - codim;
    let m0 = x_multidegree.total() as i64 - codim as i64 + 1;
    let top = dim_x as i64 + 1;
    let mut upper = vec![None; dim_x as usize + 1];
    upper[0] = Some(m0);
    let last = dim_x as usize;
    upper[last] = Some(match upper[last] {
        Some(existing) => existing.min(top),
        None => top,
    });
    Ok(BoundedProfile {
        dim_x,
        upper,
        source: ProfileSource::BoundEstimate,
    })
}
