use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::expr::Expression;
use super::feature::{render_features, Feature};
use crate::cfg::Category;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ItemClass {
    Word,
    RemoveAdapter,
    SelectAdapter,
}

impl ItemClass {
    /// Infers the class from the item's shape. Adapters are exactly the
    /// ε-items whose selector names their own category.
    pub fn infer(exponent: &str, features: &[Feature]) -> ItemClass {
        if !exponent.is_empty() {
            return ItemClass::Word;
        }
        match features {
            [Feature::Selector(s), Feature::Licensor(_), Feature::Category(c)] if s == c => {
                ItemClass::RemoveAdapter
            }
            [Feature::Selector(s), Feature::Licensor(first), mid @ .., Feature::Category(c), Feature::Licensee(t)]
                if s == c
                    && first == t
                    && !mid.is_empty()
                    && mid.iter().all(Feature::is_licensor) =>
            {
                ItemClass::SelectAdapter
            }
            _ => ItemClass::Word,
        }
    }
}

/// Where an item came from: the instruction that created it and the
/// rendered grammar rules it represents.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Origin {
    pub instruction: u8,
    pub rules: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LexItem {
    pub exponent: String,
    pub features: Vec<Feature>,
    pub item_class: ItemClass,
    pub origin: Origin,
}

impl LexItem {
    pub fn new(exponent: impl Into<String>, features: Vec<Feature>, item_class: ItemClass) -> Self {
        LexItem {
            exponent: exponent.into(),
            features,
            item_class,
            origin: Origin::default(),
        }
    }

    pub fn with_origin(mut self, instruction: u8, rules: Vec<String>) -> Self {
        self.origin = Origin { instruction, rules };
        self
    }

    /// The single category feature.
    pub fn category(&self) -> Option<&str> {
        self.features.iter().find(|f| f.is_category()).map(Feature::name)
    }

    /// Licensee tags after the category, in order.
    pub fn licensees(&self) -> Vec<&str> {
        self.features
            .iter()
            .skip_while(|f| !f.is_category())
            .filter(|f| f.is_licensee())
            .map(Feature::name)
            .collect()
    }

    /// Selector-licensor blocks before the category: (selector, licensors).
    pub fn blocks(&self) -> Vec<(&str, Vec<&str>)> {
        let mut out: Vec<(&str, Vec<&str>)> = Vec::new();
        for f in self.features.iter().take_while(|f| !f.is_category()) {
            match f {
                Feature::Selector(s) => out.push((s, Vec::new())),
                Feature::Licensor(l) => {
                    if let Some(last) = out.last_mut() {
                        last.1.push(l);
                    }
                }
                _ => {}
            }
        }
        out
    }

    pub fn expression(&self) -> Expression {
        Expression::lexical(self.exponent.clone(), self.features.clone())
    }

    /// `exponent :: f f f`, with ε as the empty exponent.
    pub fn render(&self) -> String {
        let feats = render_features(&self.features);
        if self.exponent.is_empty() {
            format!(":: {feats}")
        } else {
            format!("{} :: {feats}", self.exponent)
        }
    }
}

impl fmt::Display for LexItem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// A compiled Minimalist Grammar.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MgLexicon {
    pub items: Vec<LexItem>,
    pub final_category: Category,
    /// Licensee tags of each category from front to back.
    #[serde(default)]
    pub licensee_order: BTreeMap<Category, Vec<String>>,
    /// Digest of the grammar this lexicon was compiled from.
    #[serde(default)]
    pub source_digest: Option<String>,
}

impl MgLexicon {
    pub fn new(items: Vec<LexItem>, final_category: impl Into<Category>) -> Self {
        MgLexicon {
            items,
            final_category: final_category.into(),
            licensee_order: BTreeMap::new(),
            source_digest: None,
        }
    }

    pub fn items_of_class(&self, class: ItemClass) -> impl Iterator<Item = &LexItem> {
        self.items.iter().filter(move |i| i.item_class == class)
    }

    /// Text form: optional pragmas followed by one item per line.
    pub fn render(&self) -> String {
        let mut out = format!("// final: {}\n", self.final_category);
        if let Some(d) = &self.source_digest {
            out.push_str(&format!("// source: {d}\n"));
        }
        for (cat, tags) in &self.licensee_order {
            out.push_str(&format!("// order {cat}: {}\n", tags.join(" ")));
        }
        for item in &self.items {
            out.push_str(&item.render());
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut items = Vec::new();
        let mut final_category = None;
        let mut source_digest = None;
        let mut licensee_order = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix("//") {
                let comment = comment.trim();
                if let Some(c) = comment.strip_prefix("final:") {
                    final_category = Some(Category::new(c.trim()));
                } else if let Some(d) = comment.strip_prefix("source:") {
                    source_digest = Some(d.trim().to_string());
                } else if let Some(rest) = comment.strip_prefix("order ") {
                    let (cat, tags) = rest.split_once(':').ok_or_else(|| Error::Syntax {
                        line: line_no,
                        message: "order pragma needs `category: tags`".into(),
                    })?;
                    licensee_order.insert(
                        Category::new(cat.trim()),
                        tags.split_whitespace().map(String::from).collect(),
                    );
                }
                continue;
            }
            let (exp, feats) = line.split_once("::").ok_or_else(|| Error::Syntax {
                line: line_no,
                message: "expected `exponent :: features`".into(),
            })?;
            let exponent = match exp.trim() {
                "ε" => "",
                e => e,
            };
            if exponent.chars().any(char::is_whitespace) {
                return Err(Error::Syntax {
                    line: line_no,
                    message: "exponent must be a single token".into(),
                });
            }
            let features = feats
                .split_whitespace()
                .map(|t| t.parse::<Feature>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::Syntax {
                    line: line_no,
                    message: e.to_string(),
                })?;
            if features.iter().filter(|f| f.is_category()).count() != 1 {
                return Err(Error::Syntax {
                    line: line_no,
                    message: "an item needs exactly one category feature".into(),
                });
            }
            let class = ItemClass::infer(exponent, &features);
            items.push(LexItem::new(exponent, features, class));
        }
        let final_category = match final_category {
            Some(c) => c,
            None => infer_final(&items)?,
        };
        Ok(MgLexicon {
            items,
            final_category,
            licensee_order,
            source_digest,
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("lexicon serializes")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        Ok(serde_json::from_value(value.clone())?)
    }
}

/// The one category that is never selected.
fn infer_final(items: &[LexItem]) -> Result<Category> {
    let selected: BTreeSet<&str> = items
        .iter()
        .flat_map(|i| &i.features)
        .filter(|f| f.is_selector())
        .map(Feature::name)
        .collect();
    let roots: BTreeSet<&str> = items
        .iter()
        .filter_map(LexItem::category)
        .filter(|c| !selected.contains(c))
        .collect();
    match roots.len() {
        1 => Ok(Category::new(*roots.first().unwrap())),
        _ => Err(Error::NoFinalCategory),
    }
}

impl fmt::Display for MgLexicon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}
