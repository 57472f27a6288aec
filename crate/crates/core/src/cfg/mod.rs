//! Context-free grammars whose rules carry a category label.
//!
//! A rule is written `A -> tok tok ... # Category`. Every token that occurs on
//! some left-hand side is a nonterminal, every other token is a terminal, and
//! an empty right-hand side denotes the empty word.

mod analysis;
mod enumerate;
mod parse;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub use analysis::{
    compute_category_order, is_category_recursion_free, is_recursion_free, reachability,
    CategoryOrder, NtClass, NtClassification,
};
pub use enumerate::{enumerate_cfg_language, CfgBounds};
pub use parse::parse_cfg;

/// Marker carried by every name the compiler generates.
pub const AUX_MARKER: char = '\'';

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", content = "name", rename_all = "lowercase")]
pub enum Symbol {
    Terminal(String),
    Nonterminal(String),
}

impl Symbol {
    pub fn t(name: impl Into<String>) -> Self {
        Symbol::Terminal(name.into())
    }

    pub fn nt(name: impl Into<String>) -> Self {
        Symbol::Nonterminal(name.into())
    }

    pub fn name(&self) -> &str {
        match self {
            Symbol::Terminal(n) | Symbol::Nonterminal(n) => n,
        }
    }

    pub fn as_nonterminal(&self) -> Option<&str> {
        match self {
            Symbol::Nonterminal(n) => Some(n),
            Symbol::Terminal(_) => None,
        }
    }

    pub fn is_terminal(&self) -> bool {
        matches!(self, Symbol::Terminal(_))
    }

    /// True for nonterminals introduced by the compiler.
    pub fn is_aux(&self) -> bool {
        matches!(self, Symbol::Nonterminal(n) if n.contains(AUX_MARKER))
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Category(pub String);

impl Category {
    pub fn new(name: impl Into<String>) -> Self {
        Category(name.into())
    }

    pub fn name(&self) -> &str {
        &self.0
    }

    /// Auxiliary categories are singletons created during compilation.
    pub fn is_aux(&self) -> bool {
        self.0.contains(AUX_MARKER)
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Category {
    fn from(s: &str) -> Self {
        Category(s.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Rule {
    pub producer: String,
    pub word: Vec<Symbol>,
    pub category: Category,
}

impl Rule {
    pub fn new(producer: impl Into<String>, word: Vec<Symbol>, category: impl Into<Category>) -> Self {
        Rule {
            producer: producer.into(),
            word,
            category: category.into(),
        }
    }

    pub fn nonterminals(&self) -> impl Iterator<Item = &str> {
        self.word.iter().filter_map(Symbol::as_nonterminal)
    }

    pub fn is_terminal(&self) -> bool {
        self.word.iter().all(Symbol::is_terminal)
    }

    /// Concatenation of the terminal tokens, skipping nonterminals.
    pub fn terminal_yield(&self) -> String {
        self.word
            .iter()
            .filter(|s| s.is_terminal())
            .map(Symbol::name)
            .collect()
    }
}

impl From<String> for Category {
    fn from(s: String) -> Self {
        Category(s)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ->", self.producer)?;
        for s in &self.word {
            write!(f, " {s}")?;
        }
        write!(f, " # {}", self.category)
    }
}

/// A validated context-free grammar with categories.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Grammar {
    rules: Vec<Rule>,
    start: String,
    #[serde(skip)]
    warnings: Vec<String>,
}

impl Grammar {
    /// Validates `rules` and drops exact duplicates (recorded as warnings).
    pub fn new(rules: Vec<Rule>, start: impl Into<String>) -> Result<Self> {
        let start = start.into();
        let mut seen = BTreeSet::new();
        let mut unique = Vec::with_capacity(rules.len());
        let mut warnings = Vec::new();
        for r in rules {
            if seen.insert(r.clone()) {
                unique.push(r);
            } else {
                warnings.push(format!("duplicate rule `{r}` ignored"));
            }
        }

        let producers: BTreeSet<&str> = unique.iter().map(|r| r.producer.as_str()).collect();
        if unique.is_empty() {
            return Err(Error::NoStartRule);
        }
        if !producers.contains(start.as_str()) {
            return Err(Error::StartWithoutRule(start));
        }
        for r in &unique {
            for s in &r.word {
                match s {
                    Symbol::Nonterminal(n) if !producers.contains(n.as_str()) => {
                        return Err(Error::DeadNonterminal(n.clone()));
                    }
                    Symbol::Terminal(t) if producers.contains(t.as_str()) => {
                        return Err(Error::NameCollision(t.clone()));
                    }
                    _ => {}
                }
            }
        }
        Ok(Grammar {
            rules: unique,
            start,
            warnings,
        })
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn start(&self) -> &str {
        &self.start
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn nonterminals(&self) -> BTreeSet<&str> {
        self.rules.iter().map(|r| r.producer.as_str()).collect()
    }

    pub fn terminals(&self) -> BTreeSet<&str> {
        self.rules
            .iter()
            .flat_map(|r| r.word.iter())
            .filter(|s| s.is_terminal())
            .map(Symbol::name)
            .collect()
    }

    pub fn categories(&self) -> BTreeSet<&Category> {
        self.rules.iter().map(|r| &r.category).collect()
    }

    pub fn rules_of<'a>(&'a self, nt: &'a str) -> impl Iterator<Item = &'a Rule> + 'a {
        self.rules.iter().filter(move |r| r.producer == nt)
    }

    pub fn categories_of(&self, nt: &str) -> BTreeSet<&Category> {
        self.rules
            .iter()
            .filter(|r| r.producer == nt)
            .map(|r| &r.category)
            .collect()
    }

    /// Map from every nonterminal to the categories of its rules.
    pub fn category_map(&self) -> BTreeMap<&str, BTreeSet<&Category>> {
        let mut map: BTreeMap<&str, BTreeSet<&Category>> = BTreeMap::new();
        for r in &self.rules {
            map.entry(r.producer.as_str()).or_default().insert(&r.category);
        }
        map
    }

    /// The unique category of `nt`'s rules, if there is exactly one.
    pub fn target(&self, nt: &str) -> Option<&Category> {
        let cats = self.categories_of(nt);
        if cats.len() == 1 {
            cats.into_iter().next()
        } else {
            None
        }
    }

    /// Every name in use: nonterminals, terminals and categories.
    pub fn names(&self) -> BTreeSet<String> {
        let mut names: BTreeSet<String> = BTreeSet::new();
        for r in &self.rules {
            names.insert(r.producer.clone());
            names.insert(r.category.0.clone());
            for s in &r.word {
                names.insert(s.name().to_string());
            }
        }
        names
    }

    /// Renders the grammar in the text format accepted by [`parse_cfg`].
    pub fn render(&self) -> String {
        let mut out = String::new();
        if self.rules.first().map(|r| r.producer.as_str()) != Some(self.start.as_str()) {
            out.push_str(&format!("// start: {}\n", self.start));
        }
        for r in &self.rules {
            out.push_str(&r.to_string());
            out.push('\n');
        }
        out
    }

    /// SHA-256 of the rendered grammar, hex encoded.
    pub fn digest(&self) -> String {
        let hash = Sha256::digest(self.render().as_bytes());
        hash.iter().map(|b| format!("{b:02x}")).collect()
    }

    /// JSON document with the rules and the recursion analyses.
    pub fn to_json(&self) -> serde_json::Value {
        let order = compute_category_order(self);
        serde_json::json!({
            "rules": self.rules,
            "start": self.start,
            "recursion_free": is_recursion_free(self),
            "category_recursion_free": is_category_recursion_free(self),
            "category_order": order
                .relation
                .iter()
                .map(|(a, b)| [a.name(), b.name()])
                .collect::<Vec<_>>(),
        })
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        #[derive(Deserialize)]
        struct Doc {
            rules: Vec<Rule>,
            start: String,
        }
        let doc: Doc = serde_json::from_value(value.clone())?;
        Grammar::new(doc.rules, doc.start)
    }
}

impl PartialEq for Grammar {
    fn eq(&self, other: &Self) -> bool {
        self.rules == other.rules && self.start == other.start
    }
}

impl Eq for Grammar {}

impl fmt::Display for Grammar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Returns `base` or `base_1`, `base_2`, ... whichever is not in `taken`.
pub(crate) fn fresh_name(base: &str, taken: &BTreeSet<String>) -> String {
    if !taken.contains(base) {
        return base.to_string();
    }
    (1..)
        .map(|i| format!("{base}_{i}"))
        .find(|n| !taken.contains(n))
        .expect("unbounded counter")
}
