//! Connectivity report for an intersection of multidegree `d` in `P^n`:
//! every conclusion the engines support, each tagged with its status and a
//! citation drawn from a fixed table.

use std::collections::BTreeMap;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::bott::profile_pn;
use crate::bounds::{BoundKey, BoundValue, Engine, EngineError, Limits, RuleSet};
use crate::combinatorics::{BigNat, FieldClass, Multidegree};
use crate::nori::{nori_certificate, NoriError, NoriQuery};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Theorem,
    Conjecture,
    SharpnessExample,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FindingKind {
    WeakLefschetz,
    AmpleDivisor,
    NoriCohomology,
    NoriCycles,
    HypersurfaceThreshold,
    SharpnessWindow,
    LinearGeneration,
    ChowTrivial,
    ChowFiniteDimensional,
    ChowRepresentable,
    Coniveau,
    HodgeLevel,
    Roitman,
    SmoothCubic,
}

impl FindingKind {
    pub fn status(self) -> Status {
        use FindingKind::*;
        match self {
            AmpleDivisor | NoriCycles | HypersurfaceThreshold | HodgeLevel => Status::Conjecture,
            SharpnessWindow => Status::SharpnessExample,
            _ => Status::Theorem,
        }
    }

    pub fn citation(self) -> &'static str {
        use FindingKind::*;
        match self {
            WeakLefschetz => "Lefschetz hyperplane theorem",
            AmpleDivisor => "Lefschetz-Grothendieck; cycle-theoretic Lefschetz conjecture",
            NoriCohomology => "Nori connectivity theorem",
            NoriCycles => "Nori connectivity conjecture",
            HypersurfaceThreshold => "Nori connectivity conjecture, hypersurfaces in projective space",
            SharpnessWindow => "rationally inequivalent lines on general hypersurfaces",
            LinearGeneration => "Tsen-Lang theory of C_i fields",
            ChowTrivial | ChowFiniteDimensional | ChowRepresentable => {
                "Bloch-Srinivas decomposition of the diagonal"
            }
            Coniveau => "generalized Hodge conjecture via decomposition of the diagonal",
            HodgeLevel => "Esnault-Nori-Srinivas Hodge level",
            Roitman => "Roitman",
            SmoothCubic => "lines on smooth cubic hypersurfaces",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Finding {
    pub kind: FindingKind,
    pub statement: String,
    pub status: Status,
    pub citation: String,
    pub inputs: BTreeMap<String, Value>,
}

impl Finding {
    fn new(kind: FindingKind, statement: String, inputs: &[(&str, Value)]) -> Self {
        Finding {
            kind,
            statement,
            status: kind.status(),
            citation: kind.citation().to_string(),
            inputs: inputs
                .iter()
                .map(|(k, v)| (k.to_string(), v.clone()))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportQuery {
    pub n: u32,
    pub degrees: Multidegree,
    pub field: FieldClass,
    pub e_values: Vec<u32>,
    pub rules: RuleSet,
    pub limits: Limits,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub query: ReportQuery,
    pub findings: Vec<Finding>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Default)]
pub struct ReportOptions {
    /// Values of `e` for the Nori certificate; default `dim Y - 1`.
    pub e_values: Option<Vec<u32>>,
    /// Fail instead of omitting the Chow conclusions over a field that is
    /// not algebraically closed.
    pub require_chow: bool,
}

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("need n > r (n={n}, r={r})")]
    AmbientTooSmall { n: u32, r: usize },
    #[error("the multidegree must have at least one entry")]
    NoEquations,
    #[error("n must be at least 1")]
    ZeroAmbient,
    #[error("Chow conclusions are only available over algebraically closed fields (c-level {0})")]
    ChowNeedsClosedField(u32),
    #[error(transparent)]
    Nori(#[from] NoriError),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

pub const HODGE_LEVEL_NOTE: &str = "Hodge level read as floor((n - (d_2 + ... + d_r)) / d_1); \
the printed formula sums d_r, and only this reading gives level >= 1 whenever n >= d_1 + ... + d_r";

/// `floor((n - (d_2 + ... + d_r)) / d_1)`, possibly negative.
pub fn hodge_level(n: u32, d: &Multidegree) -> Result<i64, ReportError> {
    if n == 0 {
        return Err(ReportError::ZeroAmbient);
    }
    let (&d1, rest) = d.degrees().split_first().ok_or(ReportError::NoEquations)?;
    let tail: i64 = rest.iter().map(|&x| x as i64).sum();
    Ok(Integer::div_floor(&(n as i64 - tail), &(d1 as i64)))
}

/// Whether `d` lies in `[n, 2n - 3]`, the range where general hypersurfaces
/// carry rationally inequivalent lines.
pub fn in_sharpness_window(n: u32, d: u32) -> bool {
    n >= 3 && d >= n && d + 3 <= 2 * n
}

fn big(v: &BigNat) -> Value {
    Value::String(v.to_string())
}

pub fn connectivity_report(
    n: u32,
    d: &Multidegree,
    field: FieldClass,
    options: &ReportOptions,
    engine: &mut Engine,
) -> Result<Report, ReportError> {
    let r = d.len();
    if r == 0 {
        return Err(ReportError::NoEquations);
    }
    if n as usize <= r {
        return Err(ReportError::AmbientTooSmall { n, r });
    }
    let closed = field.is_algebraically_closed();
    if options.require_chow && !closed {
        return Err(ReportError::ChowNeedsClosedField(field.c_level));
    }
    let dim_y = n - r as u32;
    let d1 = d.smallest().expect("r >= 1");
    let e_values = options
        .e_values
        .clone()
        .unwrap_or_else(|| vec![dim_y - 1]);

    let mut findings = Vec::new();
    let mut notes = Vec::new();
    let base = |extra: &[(&'static str, Value)]| -> Vec<(&'static str, Value)> {
        let mut v = vec![("n", json!(n)), ("degrees", json!(d.degrees()))];
        v.extend(extra.iter().cloned());
        v
    };

    findings.push(Finding::new(
        FindingKind::WeakLefschetz,
        format!(
            "a smooth complete intersection X of multidegree {d} in P^{n} satisfies \
             H^i(P^{n}) = H^i(X) for i < {dim_y}: the inclusion is a cohomological {}-equivalence",
            dim_y as i64 - 1
        ),
        &base(&[("dim_y", json!(dim_y))]),
    ));

    if r == 1 {
        findings.push(Finding::new(
            FindingKind::AmpleDivisor,
            format!(
                "for a smooth hypersurface X of degree {d1} in P^{n}, CH^p(P^{n})_Q -> CH^p(X)_Q \
                 is an isomorphism for 2p <= {}",
                dim_y as i64 - 1
            ),
            &base(&[("dim_y", json!(dim_y))]),
        ));
    }

    let profile = profile_pn(n);
    for &e in &e_values {
        let query = NoriQuery::new(n, r as u32, e, profile.clone())?;
        let cert = nori_certificate(&query, d)?;
        let inputs = base(&[
            ("e", json!(e)),
            ("dim_y", json!(dim_y)),
            ("threshold", json!(cert.threshold)),
            ("smallest_degree", json!(d1)),
            ("certified", json!(cert.certified)),
        ]);
        let statement = if cert.certified {
            format!(
                "d_1 = {d1} >= N({e}) = {}: the general complete intersection of multidegree {d} \
                 in P^{n} is a cohomological {}-equivalence",
                cert.threshold, cert.cohomological_degree
            )
        } else {
            format!(
                "d_1 = {d1} < N({e}) = {}: no cohomological connectivity beyond the hyperplane theorem is certified at e = {e}",
                cert.threshold
            )
        };
        findings.push(Finding::new(FindingKind::NoriCohomology, statement, &inputs));
        if cert.certified {
            if let Some(c) = cert.max_cycle_codim {
                findings.push(Finding::new(
                    FindingKind::NoriCycles,
                    format!(
                        "the general complete intersection of multidegree {d} in P^{n} is a \
                         cycle-theoretic c-equivalence for c <= {c} (2c < {})",
                        dim_y + e
                    ),
                    &inputs,
                ));
            }
        }
    }

    if r == 1 {
        let threshold = 2 * n - 2;
        if d1 >= threshold {
            findings.push(Finding::new(
                FindingKind::HypersurfaceThreshold,
                format!(
                    "degree {d1} >= 2n - 2 = {threshold}: the general hypersurface has \
                     CH^p_Q = Q for p < {dim_y}"
                ),
                &base(&[("threshold", json!(threshold))]),
            ));
        }
        let in_window = in_sharpness_window(n, d1);
        let statement = if in_window {
            format!(
                "{n} <= {d1} <= {}: the general hypersurface of degree {d1} in P^{n} contains two lines \
                 whose difference is not rationally equivalent to zero",
                2 * n as i64 - 3
            )
        } else {
            format!(
                "degree {d1} lies outside [{n}, {}]; no inequivalent pair of lines is predicted",
                2 * n as i64 - 3
            )
        };
        findings.push(Finding::new(
            FindingKind::SharpnessWindow,
            statement,
            &base(&[
                ("in_window", json!(in_window)),
                ("window_low", json!(n)),
                ("window_high", json!(2 * n as i64 - 3)),
            ]),
        ));
    }

    // Largest m with n >= l(d; m; k).
    let mut reachable: Option<(u64, BigNat)> = None;
    let mut scanned = Vec::new();
    for m in 0..=(n as u64 - r as u64) {
        let key = BoundKey::l_for_field(d.clone(), m, field);
        let value = engine.evaluate(&key)?;
        if let BoundValue::Finite(v) = &value {
            if *v <= BigNat::from(n) {
                reachable = Some((m, v.clone()));
            }
        }
        scanned.push(json!({"m": m, "l_bound": value}));
    }
    match &reachable {
        None => notes.push(format!(
            "n = {n} is below every computed bound l({d}; m; {field}) for 0 <= m <= {}",
            n as usize - r
        )),
        Some((m, v)) => {
            let inputs = base(&[
                ("m", json!(m)),
                ("l_bound", big(v)),
                ("field", json!(field.to_string())),
                ("scan", Value::Array(scanned.clone())),
            ]);
            findings.push(Finding::new(
                FindingKind::LinearGeneration,
                format!(
                    "n = {n} >= l({d}; {m}; {field}) = {v}: every intersection of multidegree {d} in P^{n} \
                     over {field} has CH_j = Z generated by a linear P^j for j <= {m}"
                ),
                &inputs,
            ));
            if closed {
                let m1 = m + 1;
                let m2 = m + 2;
                findings.push(Finding::new(
                    FindingKind::ChowTrivial,
                    format!("for smooth X, CH^p(X)_Q = Q for 0 <= p <= {m}"),
                    &inputs,
                ));
                findings.push(Finding::new(
                    FindingKind::ChowFiniteDimensional,
                    format!("for smooth X, CH^{m1}(X)_Q is finite dimensional"),
                    &inputs,
                ));
                findings.push(Finding::new(
                    FindingKind::ChowRepresentable,
                    format!("for smooth X, CH^{m2}(X)_Q is representable"),
                    &inputs,
                ));
                findings.push(Finding::new(
                    FindingKind::Coniveau,
                    format!(
                        "for smooth X, H^l(X) = N^{m1} H^l(X) for every l >= {}",
                        2 * m + 2
                    ),
                    &inputs,
                ));
            } else {
                notes.push(format!(
                    "Chow-group conclusions need an algebraically closed field; withheld over {field}"
                ));
            }
        }
    }

    let k = hodge_level(n, d)?;
    let statement = if k >= 1 {
        format!("Hodge level {k}: for smooth X, CH_p(X)_Q = Q for p < {k}")
    } else {
        format!("Hodge level {k}: no Chow-group prediction")
    };
    findings.push(Finding::new(
        FindingKind::HodgeLevel,
        statement,
        &base(&[("hodge_level", json!(k))]),
    ));
    if r >= 2 {
        notes.push(HODGE_LEVEL_NOTE.to_string());
    }

    let total = d.total();
    if n as u64 >= total {
        findings.push(Finding::new(
            FindingKind::Roitman,
            format!("n = {n} >= d_1 + ... + d_r = {total}: CH_0(X) = Z for smooth X"),
            &base(&[("degree_sum", json!(total))]),
        ));
    }

    if d.degrees() == [3] && n >= 6 {
        findings.push(Finding::new(
            FindingKind::SmoothCubic,
            format!(
                "if X is a smooth cubic in P^{n} whose variety of lines is smooth, then CH_1(X) = Z"
            ),
            &base(&[]),
        ));
    }

    Ok(Report {
        query: ReportQuery {
            n,
            degrees: d.clone(),
            field,
            e_values,
            rules: *engine.rules(),
            limits: *engine.limits(),
        },
        findings,
        notes,
    })
}

impl Report {
    pub fn render(&self) -> String {
        let q = &self.query;
        let mut out = format!(
            "connectivity report: n = {}, degrees {}, field {}\n",
            q.n, q.degrees, q.field
        );
        for f in &self.findings {
            let tag = match f.status {
                Status::Theorem => "theorem",
                Status::Conjecture => "conjecture",
                Status::SharpnessExample => "sharpness",
            };
            out.push_str(&format!("[{tag}] {}\n    ({})\n", f.statement, f.citation));
        }
        for note in &self.notes {
            out.push_str(&format!("note: {note}\n"));
        }
        out
    }
}
