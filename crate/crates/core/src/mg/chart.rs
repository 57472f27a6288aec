use std::collections::{BTreeMap, HashMap, VecDeque};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::derivation::DerivationTree;
use super::expr::{apply_move, is_complete, merge, Expression, MergeKind, MoveKind};
use super::feature::Feature;
use super::lexicon::MgLexicon;
use crate::error::BudgetExceeded;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MgBounds {
    /// Maximum number of distinct expressions in the chart.
    pub max_items: usize,
    /// Maximum total exponent length of an expression, in characters.
    pub max_len: Option<usize>,
    /// When set, only expressions whose exponents all occur in this string are kept.
    pub target: Option<String>,
}

impl MgBounds {
    pub const DEFAULT_MAX_ITEMS: usize = 200_000;

    pub fn unbounded(max_items: usize) -> Self {
        MgBounds {
            max_items,
            max_len: None,
            target: None,
        }
    }

    pub fn bounded(max_items: usize, max_len: usize) -> Self {
        MgBounds {
            max_items,
            max_len: Some(max_len),
            target: None,
        }
    }
}

impl Default for MgBounds {
    fn default() -> Self {
        MgBounds::unbounded(Self::DEFAULT_MAX_ITEMS)
    }
}

/// Complete strings with one derivation each.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MgLanguage {
    pub strings: BTreeMap<String, DerivationTree>,
    /// Distinct expressions built.
    pub chart_size: usize,
}

impl MgLanguage {
    pub fn contains(&self, s: &str) -> bool {
        self.strings.contains_key(s)
    }

    pub fn len(&self) -> usize {
        self.strings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strings.is_empty()
    }

    /// Strings ordered by length, then lexicographically.
    pub fn by_length(&self) -> Vec<&str> {
        let mut v: Vec<&str> = self.strings.keys().map(String::as_str).collect();
        v.sort_by_key(|s| (s.chars().count(), *s));
        v
    }
}

#[derive(Clone, Copy)]
enum Back {
    Lex(usize),
    Merge(MergeKind, usize, usize),
    Move(MoveKind, usize),
}

struct Entry {
    expr: Expression,
    back: Back,
}

struct Chart<'a> {
    bounds: &'a MgBounds,
    entries: Vec<Entry>,
    index: HashMap<Expression, usize>,
    agenda: VecDeque<usize>,
    /// Entries whose head starts with `=C`, keyed by `C`.
    functors: HashMap<Arc<str>, Vec<usize>>,
    /// Entries whose head starts with `C`, keyed by `C`.
    arguments: HashMap<Arc<str>, Vec<usize>>,
}

struct Full;

impl Chart<'_> {
    fn admissible(&self, e: &Expression) -> bool {
        if self.bounds.max_len.is_some_and(|m| e.exponent_len() > m) {
            return false;
        }
        match &self.bounds.target {
            Some(t) => {
                t.contains(e.head.exponent.as_str())
                    && e.movers.iter().all(|m| t.contains(m.exponent.as_str()))
            }
            None => true,
        }
    }

    fn add(&mut self, expr: Expression, back: Back) -> Result<(), Full> {
        if !self.admissible(&expr) {
            return Ok(());
        }
        let key = expr.canonical();
        if self.index.contains_key(&key) {
            return Ok(());
        }
        if self.entries.len() >= self.bounds.max_items {
            return Err(Full);
        }
        let id = self.entries.len();
        self.entries.push(Entry { expr, back });
        self.index.insert(key, id);
        self.agenda.push_back(id);
        Ok(())
    }

    fn tree(&self, id: usize) -> DerivationTree {
        let entry = &self.entries[id];
        match entry.back {
            Back::Lex(item) => DerivationTree::leaf(item, entry.expr.clone()),
            Back::Merge(k, f, x) => DerivationTree {
                op: k.into(),
                result: entry.expr.clone(),
                children: vec![self.tree(f), self.tree(x)],
                item: None,
            },
            Back::Move(k, c) => DerivationTree {
                op: k.into(),
                result: entry.expr.clone(),
                children: vec![self.tree(c)],
                item: None,
            },
        }
    }

    fn step(&mut self, id: usize) -> Result<(), Full> {
        let e = self.entries[id].expr.clone();
        match e.head.leading() {
            // A leading licensor can only be checked by move.
            Some(Feature::Licensor(_)) => {
                if let Ok((r, k)) = apply_move(&e) {
                    self.add(r, Back::Move(k, id))?;
                }
            }
            Some(Feature::Selector(c)) => {
                self.functors.entry(c.clone()).or_default().push(id);
                let partners = self.arguments.get(c).cloned().unwrap_or_default();
                for x in partners {
                    if let Ok((r, k)) = merge(&e, &self.entries[x].expr) {
                        self.add(r, Back::Merge(k, id, x))?;
                    }
                }
            }
            Some(Feature::Category(c)) => {
                self.arguments.entry(c.clone()).or_default().push(id);
                let partners = self.functors.get(c).cloned().unwrap_or_default();
                for f in partners {
                    if let Ok((r, k)) = merge(&self.entries[f].expr, &e) {
                        self.add(r, Back::Merge(k, f, id))?;
                    }
                }
            }
            _ => {}
        }
        Ok(())
    }
}

/// Closes the lexicon under merge and move, breadth-first, and collects the
/// complete expressions. Each string keeps the first derivation found.
pub fn enumerate_mg_language(
    lex: &MgLexicon,
    bounds: &MgBounds,
) -> Result<MgLanguage, BudgetExceeded<MgLanguage>> {
    let mut chart = Chart {
        bounds,
        entries: Vec::new(),
        index: HashMap::new(),
        agenda: VecDeque::new(),
        functors: HashMap::new(),
        arguments: HashMap::new(),
    };
    let final_cat = lex.final_category.name();
    let mut complete: Vec<usize> = Vec::new();
    let mut full = false;

    for (i, item) in lex.items.iter().enumerate() {
        if chart.add(item.expression(), Back::Lex(i)).is_err() {
            full = true;
            break;
        }
    }
    while !full {
        let Some(id) = chart.agenda.pop_front() else {
            break;
        };
        if is_complete(&chart.entries[id].expr, final_cat) {
            complete.push(id);
        }
        full = chart.step(id).is_err();
    }

    let mut strings = BTreeMap::new();
    for id in complete {
        let s = chart.entries[id].expr.head.exponent.clone();
        if !strings.contains_key(&s) {
            strings.insert(s, chart.tree(id));
        }
    }
    let language = MgLanguage {
        strings,
        chart_size: chart.entries.len(),
    };
    if full {
        Err(BudgetExceeded {
            explored: language.chart_size,
            partial: language,
        })
    } else {
        Ok(language)
    }
}

/// Searches for a derivation of exactly `target`.
pub fn derive(
    lex: &MgLexicon,
    target: &str,
    max_items: usize,
) -> Result<Option<DerivationTree>, BudgetExceeded<Option<DerivationTree>>> {
    let bounds = MgBounds {
        max_items,
        max_len: Some(target.chars().count()),
        target: Some(target.to_string()),
    };
    match enumerate_mg_language(lex, &bounds) {
        Ok(mut l) => Ok(l.strings.remove(target)),
        Err(BudgetExceeded { mut partial, explored }) => match partial.strings.remove(target) {
            Some(t) => Ok(Some(t)),
            None => Err(BudgetExceeded {
                partial: None,
                explored,
            }),
        },
    }
}
