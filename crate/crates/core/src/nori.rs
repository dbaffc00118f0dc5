//! The Nori degree threshold `N(e)`.
//!
//! `R^a p_*` of the relative differentials vanishes once all groups
//! `H^k(X, ∧^m M ⊗ ∧^l F ⊗ Ω^c_X)` vanish over the integer tuples with
//!
//! ```text
//! k + l + m - c = b + 1 - a,   k <= dim X - a,   m + (dim X - c) <= b,
//! a <= dim Y,                  a + b <= dim Y + e.
//! ```
//!
//! Regularity turns each group into the condition `k + d^(l) >= m + m_c`,
//! which `d_1 * l >= m + m_c - k` implies. The threshold is the maximum of
//! `(m + m_c - k) / l` over the feasible tuples with `k >= 1`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bott::{m_x, RegularityProfile};
use crate::combinatorics::{partial_degree_sum, BigNat, Multidegree, Rat};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NoriError {
    #[error("dim X must be at least 1")]
    ZeroDimension,
    #[error("need 1 <= r <= dim X (r={r}, dim X={dim_x})")]
    EquationCount { r: u32, dim_x: u32 },
    #[error("e={e} exceeds dim Y={dim_y}")]
    ExcessE { e: u32, dim_y: u32 },
    #[error("profile describes dimension {profile} but dim X is {dim_x}")]
    ProfileDimension { profile: u32, dim_x: u32 },
    #[error("multidegree has {got} entries, query expects {expected}")]
    DegreeCount { got: usize, expected: u32 },
    #[error("no feasible tuple with k >= 1; the vanishing needs no degree condition")]
    EmptyFeasibleSet,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NoriQuery {
    dim_x: u32,
    r: u32,
    e: u32,
    profile: RegularityProfile,
}

impl NoriQuery {
    pub fn new(dim_x: u32, r: u32, e: u32, profile: RegularityProfile) -> Result<Self, NoriError> {
        if dim_x == 0 {
            return Err(NoriError::ZeroDimension);
        }
        if r == 0 || r > dim_x {
            return Err(NoriError::EquationCount { r, dim_x });
        }
        let dim_y = dim_x - r;
        if e > dim_y {
            return Err(NoriError::ExcessE { e, dim_y });
        }
        if profile.dim_x() != dim_x {
            return Err(NoriError::ProfileDimension {
                profile: profile.dim_x(),
                dim_x,
            });
        }
        Ok(NoriQuery {
            dim_x,
            r,
            e,
            profile,
        })
    }

    pub fn dim_x(&self) -> u32 {
        self.dim_x
    }

    pub fn dim_y(&self) -> u32 {
        self.dim_x - self.r
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn profile(&self) -> &RegularityProfile {
        &self.profile
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TupleWitness {
    pub a: u32,
    pub b: u32,
    pub k: u32,
    pub l: u32,
    pub m: u32,
    pub c: u32,
    #[serde(with = "rat_str")]
    pub value: Rat,
}

impl TupleWitness {
    fn order_key(&self) -> (u32, u32, u32, u32, u32, u32) {
        (self.a, self.b, self.k, self.l, self.m, self.c)
    }

    /// Checks every defining constraint against `query`.
    pub fn is_feasible_for(&self, query: &NoriQuery) -> bool {
        let dx = query.dim_x as i64;
        let dy = query.dim_y() as i64;
        let (a, b, k, l, m, c) = (
            self.a as i64,
            self.b as i64,
            self.k as i64,
            self.l as i64,
            self.m as i64,
            self.c as i64,
        );
        k + l + m - c == b + 1 - a
            && k <= dx - a
            && m + (dx - c) <= b
            && a <= dy
            && a + b <= dy + query.e as i64
            && l >= 1
            && c <= dx
            && self.value == Rat::new(m + query.profile.get(self.c) - k, l)
    }
}

/// Every feasible tuple (including `k = 0`), sorted by `(a, b, k, l, m, c)`.
pub fn enumerate_tuples(query: &NoriQuery) -> Vec<TupleWitness> {
    let dx = query.dim_x;
    let dy = query.dim_y();
    let mut out = Vec::new();
    for a in 0..=dy {
        for b in 0..=(dy + query.e - a) {
            // m >= 0 needs c >= dim X - b.
            for c in dx.saturating_sub(b)..=dx {
                let m_max = b + c - dx;
                for m in 0..=m_max {
                    for k in 0..=(dx - a) {
                        // l = b + 1 - a - k - m + c >= dim X + 1 - a - k >= 1
                        let l = (b + 1 + c) as i64 - (a + k + m) as i64;
                        debug_assert!(l >= 1);
                        let l = l as u32;
                        let value = Rat::new(m as i64 + query.profile.get(c) - k as i64, l as i64);
                        out.push(TupleWitness {
                            a,
                            b,
                            k,
                            l,
                            m,
                            c,
                            value,
                        });
                    }
                }
            }
        }
    }
    out.sort_by_key(TupleWitness::order_key);
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NoriMaximum {
    #[serde(with = "rat_str")]
    pub value: Rat,
    pub witness: TupleWitness,
    /// Feasible tuples with `k = 0`. They are excluded from the objective;
    /// listed so the gap in the `k >= 1` claim stays visible.
    pub k_zero_tuples: Vec<TupleWitness>,
}

impl NoriMaximum {
    /// Smallest integer degree meeting the threshold.
    pub fn threshold(&self) -> i64 {
        self.value.ceil().to_integer()
    }
}

pub fn n_of_e_bruteforce(query: &NoriQuery) -> Result<NoriMaximum, NoriError> {
    let tuples = enumerate_tuples(query);
    let (k_zero, rest): (Vec<_>, Vec<_>) = tuples.into_iter().partition(|t| t.k == 0);
    let mut best: Option<TupleWitness> = None;
    for t in rest {
        // strict comparison keeps the lexicographically first maximiser
        if best.as_ref().is_none_or(|b| t.value > b.value) {
            best = Some(t);
        }
    }
    let witness = best.ok_or(NoriError::EmptyFeasibleSet)?;
    Ok(NoriMaximum {
        value: witness.value,
        witness,
        k_zero_tuples: k_zero,
    })
}

/// `dim Y + e + 1 + m_X`.
pub fn n_of_e_closed_form(dim_y: i64, e: i64, m_x: i64) -> i64 {
    dim_y + e + 1 + m_x
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NoriCertificate {
    pub dim_y: u32,
    pub e: u32,
    pub smallest_degree: u32,
    pub maximum: NoriMaximum,
    /// `ceil` of the maximum; the certificate needs `d_1 >= threshold`.
    pub threshold: i64,
    pub closed_form: i64,
    pub certified: bool,
    /// The inclusion is a cohomological `(dim Y + e - 1)`-equivalence.
    pub cohomological_degree: i64,
    /// Predicted cycle-theoretic `c`-equivalence for `c <= max_cycle_codim`
    /// (i.e. `2c < dim Y + e`). `None` when `dim Y + e = 0`.
    pub max_cycle_codim: Option<i64>,
    /// Whether `k + d^(l) >= m + m_c` holds for every tuple with
    /// `1 <= l <= r`, using the actual multidegree. Tuples with `l > r`
    /// involve `∧^l F = 0` and impose nothing.
    pub twist_condition: bool,
}

pub fn nori_certificate(query: &NoriQuery, d: &Multidegree) -> Result<NoriCertificate, NoriError> {
    if d.len() != query.r as usize {
        return Err(NoriError::DegreeCount {
            got: d.len(),
            expected: query.r,
        });
    }
    let maximum = n_of_e_bruteforce(query)?;
    let threshold = maximum.threshold();
    let d1 = d.smallest().expect("r >= 1");
    let dim_y = query.dim_y();
    let total = dim_y as i64 + query.e as i64;

    let twist_condition = enumerate_tuples(query)
        .iter()
        .filter(|t| t.k >= 1 && t.l <= query.r)
        .all(|t| {
            let twist = partial_degree_sum(d, t.l as usize).expect("l <= r");
            let lhs = BigNat::from(t.k) + twist;
            let rhs = t.m as i64 + query.profile.get(t.c);
            rhs < 0 || lhs >= BigNat::from(rhs as u64)
        });

    Ok(NoriCertificate {
        dim_y,
        e: query.e,
        smallest_degree: d1,
        closed_form: n_of_e_closed_form(dim_y as i64, query.e as i64, m_x(&query.profile)),
        certified: d1 as i64 >= threshold,
        cohomological_degree: total - 1,
        max_cycle_codim: (total >= 1).then(|| (total - 1) / 2),
        threshold,
        maximum,
        twist_condition,
    })
}

mod rat_str {
    use super::Rat;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Rat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let s = String::deserialize(d)?;
        s.parse::<Rat>().map_err(D::Error::custom)
    }
}
