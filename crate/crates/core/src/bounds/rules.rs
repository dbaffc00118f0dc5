use std::fmt;

use serde::{Deserialize, Serialize};

use super::{
    degree_decrement, lang_nagata_system_base, predonzan_min_n, to_u64_within, tsen_lang_base,
    BoundKey, BoundValue, Kind, Limits, Mode, RuleSet,
};
use crate::combinatorics::{BigNat, FieldClass, Multidegree};

/// A rule without the parameters it discovers while running.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RuleId {
    EmptyBase,
    AllLinearBase,
    StripLinear,
    TsenLangBase,
    LangNagataSystem,
    PredonzanC0,
    /// Split after the first `s` equations.
    Split(usize),
    Polar,
    LFromN,
    RoitmanCh0,
}

/// A rule as recorded in a derivation step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum Rule {
    /// `n(; m) = l(; m) = m`.
    EmptyBase,
    /// `n(1,...,1; m) = l(1,...,1; m) = m + r`.
    AllLinearBase,
    /// `x(1, d'; m) <= 1 + x(d'; m)`.
    StripLinear,
    /// `n(d; 0; C_i) <= d^i`.
    TsenLangBase,
    /// `n(d_1..d_r; 0; C_i) <= sum d_j^i`.
    LangNagataSystem,
    /// Smallest `n` with non-negative expected dimension of `m`-planes.
    PredonzanC0,
    /// `n(d; m) <= n(d_1..d_s; n(d_{s+1}..d_r; m))`.
    Split { s: usize },
    /// `n(d; m) <= max(n(d; 0), offset + n(1, 2, ..., d; m - 1))`.
    Polar { offset: u64 },
    /// `l(d; m; k) <= n(d; l*; k)` with `l*` the largest `l(d - 1; m'; k')`.
    /// Entries of `d - 1` equal to zero are deleted (`dropped` of them),
    /// which can only make containment easier.
    LFromN {
        decremented: Multidegree,
        dropped: usize,
        l_star: u64,
    },
    /// `l(d; 0; C_0) <= d_1 + ... + d_r`.
    RoitmanCh0,
}

impl Rule {
    pub fn id(&self) -> RuleId {
        match self {
            Rule::EmptyBase => RuleId::EmptyBase,
            Rule::AllLinearBase => RuleId::AllLinearBase,
            Rule::StripLinear => RuleId::StripLinear,
            Rule::TsenLangBase => RuleId::TsenLangBase,
            Rule::LangNagataSystem => RuleId::LangNagataSystem,
            Rule::PredonzanC0 => RuleId::PredonzanC0,
            Rule::Split { s } => RuleId::Split(*s),
            Rule::Polar { .. } => RuleId::Polar,
            Rule::LFromN { .. } => RuleId::LFromN,
            Rule::RoitmanCh0 => RuleId::RoitmanCh0,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Rule::EmptyBase => "empty_base",
            Rule::AllLinearBase => "all_linear_base",
            Rule::StripLinear => "strip_linear",
            Rule::TsenLangBase => "tsen_lang_base",
            Rule::LangNagataSystem => "lang_nagata_system",
            Rule::PredonzanC0 => "predonzan_c0",
            Rule::Split { .. } => "split",
            Rule::Polar { .. } => "polar",
            Rule::LFromN { .. } => "l_from_n",
            Rule::RoitmanCh0 => "roitman_ch0",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::Split { s } => write!(f, "split s={s}"),
            Rule::Polar { offset } => write!(f, "polar offset={offset}"),
            Rule::LFromN {
                decremented,
                dropped,
                l_star,
            } => write!(f, "l_from_n d-1={decremented} dropped={dropped} l*={l_star}"),
            other => f.write_str(other.name()),
        }
    }
}

/// Rules whose hypotheses hold for `key`, in the fixed evaluation order.
pub fn applicable_rules(key: &BoundKey, rules: &RuleSet) -> Vec<RuleId> {
    let d = key.degrees();
    let r = d.len();
    if r == 0 {
        return vec![RuleId::EmptyBase];
    }
    if d.is_all_linear() {
        return vec![RuleId::AllLinearBase];
    }
    let mut out = Vec::new();
    if d.degrees()[0] == 1 {
        out.push(RuleId::StripLinear);
    }
    let level0 = key.field().c_level == 0;
    match key.kind() {
        Kind::N => {
            if key.m() == 0 {
                out.push(if r == 1 {
                    RuleId::TsenLangBase
                } else {
                    RuleId::LangNagataSystem
                });
            }
            let single_quadric = d.degrees() == [2];
            if rules.predonzan
                && level0
                && d.degrees()[0] >= 2
                && (rules.literal_polar || !single_quadric)
            {
                out.push(RuleId::PredonzanC0);
            }
            out.extend((1..r).map(RuleId::Split));
            if r == 1 && key.m() >= 1 {
                out.push(RuleId::Polar);
            }
        }
        Kind::L => {
            if rules.roitman && level0 && key.m() == 0 {
                out.push(RuleId::RoitmanCh0);
            }
            out.push(RuleId::LFromN);
        }
    }
    out
}

/// Result of trying one rule against the values known so far.
pub(crate) enum Applied {
    /// A child value is missing.
    Need(BoundKey),
    Done {
        rule: Rule,
        children: Vec<BoundKey>,
        value: BoundValue,
    },
}

/// Sum/max helpers over values where non-finite results dominate.
fn combine_max(a: BoundValue, b: BoundValue) -> BoundValue {
    match (a, b) {
        (BoundValue::Infinite, _) | (_, BoundValue::Infinite) => BoundValue::Infinite,
        (BoundValue::BudgetExceeded, _) | (_, BoundValue::BudgetExceeded) => {
            BoundValue::BudgetExceeded
        }
        (BoundValue::Finite(x), BoundValue::Finite(y)) => BoundValue::Finite(x.max(y)),
    }
}

fn plus(v: BoundValue, k: u64) -> BoundValue {
    match v {
        BoundValue::Finite(x) => BoundValue::Finite(x + BigNat::from(k)),
        other => other,
    }
}

/// Value of `key`, with keys over the budget answered without lookup.
fn fetch<F>(key: &BoundKey, limits: &Limits, lookup: &mut F) -> Result<BoundValue, BoundKey>
where
    F: FnMut(&BoundKey) -> Option<BoundValue>,
{
    if key.m() > limits.max_m {
        return Ok(BoundValue::BudgetExceeded);
    }
    lookup(key).ok_or_else(|| key.clone())
}

macro_rules! get {
    ($key:expr, $limits:expr, $lookup:expr) => {
        match fetch(&$key, $limits, $lookup) {
            Ok(v) => v,
            Err(k) => return Applied::Need(k),
        }
    };
}

/// Evaluates rule `id` at `key`. `lookup` returns known child values.
pub(crate) fn apply<F>(
    id: RuleId,
    key: &BoundKey,
    rules: &RuleSet,
    limits: &Limits,
    lookup: &mut F,
) -> Applied
where
    F: FnMut(&BoundKey) -> Option<BoundValue>,
{
    let d = key.degrees();
    let m = key.m();
    let level = key.field().c_level;
    let done = |rule: Rule, children: Vec<BoundKey>, value: BoundValue| Applied::Done {
        rule,
        children,
        value,
    };
    match id {
        RuleId::EmptyBase => done(Rule::EmptyBase, vec![], BoundValue::Finite(m.into())),
        RuleId::AllLinearBase => done(
            Rule::AllLinearBase,
            vec![],
            BoundValue::Finite(BigNat::from(m) + BigNat::from(d.len())),
        ),
        RuleId::StripLinear => {
            let rest = d.without_first_linear().expect("leading linear entry");
            let child = key.with(rest, m);
            let v = get!(child, limits, lookup);
            done(Rule::StripLinear, vec![child], plus(v, 1))
        }
        RuleId::TsenLangBase => done(
            Rule::TsenLangBase,
            vec![],
            BoundValue::Finite(tsen_lang_base(d.degrees()[0], level)),
        ),
        RuleId::LangNagataSystem => done(
            Rule::LangNagataSystem,
            vec![],
            BoundValue::Finite(lang_nagata_system_base(d, level)),
        ),
        RuleId::PredonzanC0 => done(
            Rule::PredonzanC0,
            vec![],
            BoundValue::Finite(predonzan_min_n(d, m)),
        ),
        RuleId::Split(s) => {
            let inner = key.with(d.slice(s, d.len()), m);
            let inner_v = get!(inner, limits, lookup);
            let rule = Rule::Split { s };
            let inner_n = match inner_v {
                BoundValue::Finite(v) => v,
                other => return done(rule, vec![inner], other),
            };
            let Some(outer_m) = to_u64_within(&inner_n, limits.max_m) else {
                return done(rule, vec![inner], BoundValue::BudgetExceeded);
            };
            let outer = key.with(d.slice(0, s), outer_m);
            let v = get!(outer, limits, lookup);
            done(rule, vec![inner, outer], v)
        }
        RuleId::Polar => {
            let offset = if rules.literal_polar { 0 } else { 1 };
            let point = key.with(d.clone(), 0);
            let cone = key.with(Multidegree::polar_family(d.degrees()[0]), m - 1);
            let a = get!(point, limits, lookup);
            let b = get!(cone, limits, lookup);
            done(
                Rule::Polar { offset },
                vec![point, cone],
                combine_max(a, plus(b, offset)),
            )
        }
        RuleId::RoitmanCh0 => done(
            Rule::RoitmanCh0,
            vec![],
            BoundValue::Finite(BigNat::from(d.total())),
        ),
        RuleId::LFromN => {
            let (decremented, dropped) = degree_decrement(d);
            let mut children = Vec::new();
            let mut l_star = BoundValue::Finite(BigNat::from(0u32));
            for mp in 0..=m {
                let field = match key.mode() {
                    Mode::Standard => FieldClass::c(level + (m - mp) as u32),
                    Mode::UniversalDomain => key.field(),
                };
                let child = BoundKey {
                    field,
                    ..key.with(decremented.clone(), mp)
                };
                let v = get!(child, limits, lookup);
                children.push(child);
                l_star = combine_max(l_star, v);
            }
            let l_star_n = match l_star {
                BoundValue::Finite(v) => v,
                other => {
                    let rule = Rule::LFromN {
                        decremented,
                        dropped,
                        l_star: 0,
                    };
                    return done(rule, children, other);
                }
            };
            let rule_with = |l_star: u64| Rule::LFromN {
                decremented: decremented.clone(),
                dropped,
                l_star,
            };
            let Some(l_star) = to_u64_within(&l_star_n, limits.max_m) else {
                return done(rule_with(0), children, BoundValue::BudgetExceeded);
            };
            let target = BoundKey::n(d.clone(), l_star, key.field());
            let v = get!(target, limits, lookup);
            children.push(target);
            done(rule_with(l_star), children, v)
        }
    }
}
