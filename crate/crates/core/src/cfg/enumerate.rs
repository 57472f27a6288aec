use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::{Grammar, Symbol};
use crate::error::BudgetExceeded;

/// Limits for [`enumerate_cfg_language`]. `None` means unbounded.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CfgBounds {
    /// Maximum length, in characters, of a generated string.
    pub max_len: Option<usize>,
    /// Maximum number of rule applications in one derivation.
    pub max_steps: Option<usize>,
    /// Maximum number of distinct sentential forms visited.
    pub max_forms: usize,
}

impl CfgBounds {
    pub const DEFAULT_MAX_FORMS: usize = 2_000_000;

    pub fn unbounded() -> Self {
        CfgBounds {
            max_len: None,
            max_steps: None,
            max_forms: Self::DEFAULT_MAX_FORMS,
        }
    }

    pub fn bounded(max_len: usize, max_steps: usize) -> Self {
        CfgBounds {
            max_len: Some(max_len),
            max_steps: Some(max_steps),
            max_forms: Self::DEFAULT_MAX_FORMS,
        }
    }
}

/// A sentential form under leftmost derivation: the terminal prefix already
/// produced, followed by the unexpanded rest starting at a nonterminal.
#[derive(Clone, PartialEq, Eq, Hash)]
struct Form {
    prefix: String,
    rest: Vec<Symbol>,
}

impl Form {
    fn normalized(mut prefix: String, symbols: &[Symbol]) -> Form {
        let split = symbols
            .iter()
            .position(|s| !s.is_terminal())
            .unwrap_or(symbols.len());
        for s in &symbols[..split] {
            prefix.push_str(s.name());
        }
        Form {
            prefix,
            rest: symbols[split..].to_vec(),
        }
    }

    fn terminal_len(&self) -> usize {
        self.prefix.chars().count()
            + self
                .rest
                .iter()
                .filter(|s| s.is_terminal())
                .map(|s| s.name().chars().count())
                .sum::<usize>()
    }
}

/// Every terminal string derivable from the start symbol within `bounds`,
/// found breadth-first over leftmost sentential forms.
pub fn enumerate_cfg_language(
    g: &Grammar,
    bounds: CfgBounds,
) -> Result<BTreeSet<String>, BudgetExceeded<BTreeSet<String>>> {
    let mut by_producer: BTreeMap<&str, Vec<&[Symbol]>> = BTreeMap::new();
    for r in g.rules() {
        by_producer
            .entry(r.producer.as_str())
            .or_default()
            .push(&r.word);
    }

    let mut out = BTreeSet::new();
    let start = Form::normalized(String::new(), &[Symbol::nt(g.start())]);
    let mut visited: HashSet<Form> = HashSet::new();
    visited.insert(start.clone());
    let mut queue = VecDeque::from([(start, 0usize)]);

    while let Some((form, depth)) = queue.pop_front() {
        let Some(Symbol::Nonterminal(head)) = form.rest.first() else {
            out.insert(form.prefix);
            continue;
        };
        if bounds.max_steps.is_some_and(|m| depth >= m) {
            continue;
        }
        for word in by_producer.get(head.as_str()).into_iter().flatten() {
            let mut symbols: Vec<Symbol> = Vec::with_capacity(word.len() + form.rest.len());
            symbols.extend_from_slice(word);
            symbols.extend_from_slice(&form.rest[1..]);
            let next = Form::normalized(form.prefix.clone(), &symbols);
            if bounds.max_len.is_some_and(|m| next.terminal_len() > m) {
                continue;
            }
            if visited.contains(&next) {
                continue;
            }
            if visited.len() >= bounds.max_forms {
                return Err(BudgetExceeded {
                    partial: out,
                    explored: visited.len(),
                });
            }
            visited.insert(next.clone());
            queue.push_back((next, depth + 1));
        }
    }
    Ok(out)
}
