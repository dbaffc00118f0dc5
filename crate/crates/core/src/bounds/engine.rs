use std::collections::{HashMap, HashSet, VecDeque};

use thiserror::Error;

use super::derivation::{replay, Derivation, ReplayError, Step};
use super::rules::{applicable_rules, apply, Applied, Rule};
use super::{BoundKey, BoundValue, Limits, RuleSet};
use crate::combinatorics::BigNat;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("memo cycle through {0}")]
    Cycle(BoundKey),
    #[error("rule {rule} produced {value} below the floor m + r for {key}")]
    BelowFloor {
        key: BoundKey,
        rule: String,
        value: BigNat,
    },
    #[error("derivation failed to replay: {0}")]
    Replay(#[from] ReplayError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct MemoEntry {
    pub value: BoundValue,
    pub step: Option<Step>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundResult {
    pub value: BoundValue,
    pub derivation: Derivation,
}

enum Attempt {
    Done(MemoEntry),
    Pending(BoundKey),
}

/// Memoised minimum over all applicable rules, driven by an explicit stack.
#[derive(Debug, Clone)]
pub struct Engine {
    rules: RuleSet,
    limits: Limits,
    pub(crate) memo: HashMap<BoundKey, MemoEntry>,
}

impl Default for Engine {
    fn default() -> Self {
        Engine::new(RuleSet::default(), Limits::default())
    }
}

impl Engine {
    pub fn new(rules: RuleSet, limits: Limits) -> Self {
        Engine {
            rules,
            limits,
            memo: HashMap::new(),
        }
    }

    pub fn rules(&self) -> &RuleSet {
        &self.rules
    }

    pub fn limits(&self) -> &Limits {
        &self.limits
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    pub fn clear(&mut self) {
        self.memo.clear();
    }

    fn known(&self, key: &BoundKey) -> Option<BoundValue> {
        self.memo.get(key).map(|e| e.value.clone())
    }

    fn try_evaluate(&self, key: &BoundKey) -> Result<Attempt, EngineError> {
        if key.m() > self.limits.max_m {
            return Ok(Attempt::Done(MemoEntry {
                value: BoundValue::BudgetExceeded,
                step: None,
            }));
        }
        let floor = key.lower_bound();
        let mut best: Option<Step> = None;
        let mut over_budget = false;
        for id in applicable_rules(key, &self.rules) {
            let mut lookup = |k: &BoundKey| self.known(k);
            match apply(id, key, &self.rules, &self.limits, &mut lookup) {
                Applied::Need(child) => return Ok(Attempt::Pending(child)),
                Applied::Done {
                    rule,
                    children,
                    value,
                } => match value {
                    BoundValue::Finite(v) => {
                        if v < floor {
                            return Err(EngineError::BelowFloor {
                                key: key.clone(),
                                rule: rule.to_string(),
                                value: v,
                            });
                        }
                        if best.as_ref().is_none_or(|b| v < b.value) {
                            best = Some(Step {
                                key: key.clone(),
                                rule,
                                children,
                                value: v,
                            });
                        }
                    }
                    BoundValue::BudgetExceeded => over_budget = true,
                    BoundValue::Infinite => {}
                },
            }
            // Nothing can beat the floor; later rules are skipped.
            if best.as_ref().is_some_and(|b| b.value == floor) {
                break;
            }
        }
        let entry = match best {
            Some(step) => MemoEntry {
                value: BoundValue::Finite(step.value.clone()),
                step: Some(step),
            },
            None => MemoEntry {
                value: if over_budget {
                    BoundValue::BudgetExceeded
                } else {
                    BoundValue::Infinite
                },
                step: None,
            },
        };
        Ok(Attempt::Done(entry))
    }

    pub fn evaluate(&mut self, key: &BoundKey) -> Result<BoundValue, EngineError> {
        if let Some(v) = self.known(key) {
            return Ok(v);
        }
        let mut stack = vec![key.clone()];
        let mut on_stack: HashSet<BoundKey> = HashSet::from([key.clone()]);
        while let Some(top) = stack.last() {
            if self.memo.contains_key(top) {
                on_stack.remove(top);
                stack.pop();
                continue;
            }
            match self.try_evaluate(top)? {
                Attempt::Done(entry) => {
                    let top = stack.pop().expect("non-empty");
                    on_stack.remove(&top);
                    self.memo.insert(top, entry);
                }
                Attempt::Pending(child) => {
                    if !on_stack.insert(child.clone()) {
                        return Err(EngineError::Cycle(child));
                    }
                    stack.push(child);
                }
            }
        }
        Ok(self.known(key).expect("root evaluated"))
    }

    /// Value plus the derivation that produced it, replayed before return.
    pub fn bound(&mut self, key: &BoundKey) -> Result<BoundResult, EngineError> {
        let value = self.evaluate(key)?;
        let derivation = self.derivation(key);
        replay(&derivation, &self.rules, &self.limits)?;
        Ok(BoundResult { value, derivation })
    }

    /// Steps reachable from an already evaluated `key`.
    pub fn derivation(&self, key: &BoundKey) -> Derivation {
        let value = self.known(key).unwrap_or(BoundValue::Infinite);
        let mut steps = Vec::new();
        if value.is_finite() {
            let mut seen = HashSet::from([key.clone()]);
            let mut queue = VecDeque::from([key.clone()]);
            while let Some(k) = queue.pop_front() {
                let step = self.memo[&k].step.clone().expect("finite entries carry a step");
                for c in &step.children {
                    if seen.insert(c.clone()) {
                        queue.push_back(c.clone());
                    }
                }
                steps.push(step);
            }
            steps.sort_by(|a, b| a.key.cmp(&b.key));
        }
        Derivation {
            root: key.clone(),
            value,
            steps,
        }
    }

    /// Value of every applicable rule at `key`, without pruning.
    pub fn candidates(&mut self, key: &BoundKey) -> Result<Vec<(Rule, BoundValue)>, EngineError> {
        let mut out = Vec::new();
        for id in applicable_rules(key, &self.rules) {
            loop {
                let mut lookup = |k: &BoundKey| self.known(k);
                match apply(id, key, &self.rules, &self.limits, &mut lookup) {
                    Applied::Need(child) => {
                        if &child == key {
                            return Err(EngineError::Cycle(child));
                        }
                        self.evaluate(&child)?;
                    }
                    Applied::Done { rule, value, .. } => {
                        out.push((rule, value));
                        break;
                    }
                }
            }
        }
        Ok(out)
    }
}
