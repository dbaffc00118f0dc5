use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::rules::{applicable_rules, apply, Applied, Rule};
use super::{BoundKey, BoundValue, Limits, RuleSet};
use crate::combinatorics::{bignat_str, BigNat};

/// One node of a derivation: `key <= value` by `rule` from `children`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub key: BoundKey,
    #[serde(flatten)]
    pub rule: Rule,
    pub children: Vec<BoundKey>,
    #[serde(with = "bignat_str")]
    pub value: BigNat,
}

/// Every step reachable from `root`, sorted by key. Empty when the root
/// value is not finite.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Derivation {
    pub root: BoundKey,
    pub value: BoundValue,
    pub steps: Vec<Step>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReplayError {
    #[error("duplicate step for {0}")]
    Duplicate(BoundKey),
    #[error("no step recorded for {0}")]
    MissingStep(BoundKey),
    #[error("step for {0} is not reachable from the root")]
    Orphan(BoundKey),
    #[error("derivation of {0} is cyclic")]
    Cycle(BoundKey),
    #[error("rule {rule} does not apply to {key}")]
    NotApplicable { key: BoundKey, rule: String },
    #[error("step for {key} does not match its rule: {detail}")]
    Mismatch { key: BoundKey, detail: String },
    #[error("non-finite root {0} carries steps")]
    StepsOnNonFinite(BoundKey),
}

impl Derivation {
    pub fn step(&self, key: &BoundKey) -> Option<&Step> {
        self.steps
            .binary_search_by(|s| s.key.cmp(key))
            .ok()
            .map(|i| &self.steps[i])
    }

    /// Indented tree, one line per step. Shared subtrees are expanded once.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let Some(_) = self.value.finite() else {
            let _ = writeln!(out, "{} = {}", self.root, self.value);
            return out;
        };
        let mut seen = HashSet::new();
        let mut stack = vec![(self.root.clone(), 0usize)];
        while let Some((key, depth)) = stack.pop() {
            let indent = "  ".repeat(depth);
            let Some(step) = self.step(&key) else {
                let _ = writeln!(out, "{indent}{key} = ?");
                continue;
            };
            if !seen.insert(key.clone()) {
                let _ = writeln!(out, "{indent}{key} = {} (see above)", step.value);
                continue;
            }
            let _ = writeln!(out, "{indent}{key} = {}  [{}]", step.value, step.rule);
            for child in step.children.iter().rev() {
                stack.push((child.clone(), depth + 1));
            }
        }
        out
    }
}

/// Checks one step against its rule, given the values of its children.
pub(crate) fn check_step<F>(
    step: &Step,
    rules: &RuleSet,
    limits: &Limits,
    mut child_value: F,
) -> Result<(), ReplayError>
where
    F: FnMut(&BoundKey) -> Option<BigNat>,
{
    let key = &step.key;
    let id = step.rule.id();
    if !applicable_rules(key, rules).contains(&id) {
        return Err(ReplayError::NotApplicable {
            key: key.clone(),
            rule: step.rule.to_string(),
        });
    }
    let mismatch = |detail: String| ReplayError::Mismatch {
        key: key.clone(),
        detail,
    };
    let mut lookup = |k: &BoundKey| child_value(k).map(BoundValue::Finite);
    match apply(id, key, rules, limits, &mut lookup) {
        Applied::Need(k) => Err(ReplayError::MissingStep(k)),
        Applied::Done {
            rule,
            children,
            value,
        } => {
            if rule != step.rule {
                return Err(mismatch(format!("recomputed rule {rule}")));
            }
            if children != step.children {
                return Err(mismatch("children differ".into()));
            }
            if value != BoundValue::Finite(step.value.clone()) {
                return Err(mismatch(format!("recomputed value {value}")));
            }
            if step.value < key.lower_bound() {
                return Err(mismatch("value below m + r".into()));
            }
            Ok(())
        }
    }
}

/// Re-derives the root value bottom-up, checking every step.
pub fn replay(d: &Derivation, rules: &RuleSet, limits: &Limits) -> Result<BoundValue, ReplayError> {
    if !d.value.is_finite() {
        if !d.steps.is_empty() {
            return Err(ReplayError::StepsOnNonFinite(d.root.clone()));
        }
        return Ok(d.value.clone());
    }
    let mut by_key: BTreeMap<&BoundKey, &Step> = BTreeMap::new();
    for s in &d.steps {
        if by_key.insert(&s.key, s).is_some() {
            return Err(ReplayError::Duplicate(s.key.clone()));
        }
    }
    let mut done: HashMap<BoundKey, BigNat> = HashMap::new();
    let mut active: HashSet<BoundKey> = HashSet::new();
    // (key, children already pushed)
    let mut stack = vec![(d.root.clone(), false)];
    while let Some((key, expanded)) = stack.pop() {
        if done.contains_key(&key) {
            continue;
        }
        let step = *by_key
            .get(&key)
            .ok_or_else(|| ReplayError::MissingStep(key.clone()))?;
        if !expanded {
            if !active.insert(key.clone()) {
                return Err(ReplayError::Cycle(key));
            }
            stack.push((key, true));
            for child in &step.children {
                if active.contains(child) {
                    return Err(ReplayError::Cycle(child.clone()));
                }
                if !done.contains_key(child) {
                    stack.push((child.clone(), false));
                }
            }
            continue;
        }
        check_step(step, rules, limits, |k| done.get(k).cloned())?;
        active.remove(&key);
        done.insert(key, step.value.clone());
    }
    if let Some(orphan) = d.steps.iter().find(|s| !done.contains_key(&s.key)) {
        return Err(ReplayError::Orphan(orphan.key.clone()));
    }
    let root = BoundValue::Finite(done[&d.root].clone());
    if root != d.value {
        return Err(ReplayError::Mismatch {
            key: d.root.clone(),
            detail: "root value differs from its step".into(),
        });
    }
    Ok(root)
}
