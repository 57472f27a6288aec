use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::mg::{ItemClass, MgLexicon};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LexiconStats {
    pub word: usize,
    pub remove_adapter: usize,
    pub select_adapter: usize,
    pub total: usize,
    /// Distinct licensee tags carried by items of each category.
    pub licensees_per_category: BTreeMap<String, usize>,
}

pub fn lexicon_stats(lex: &MgLexicon) -> LexiconStats {
    let mut s = LexiconStats::default();
    let mut tags: BTreeMap<String, BTreeSet<&str>> = BTreeMap::new();
    for item in &lex.items {
        match item.item_class {
            ItemClass::Word => s.word += 1,
            ItemClass::RemoveAdapter => s.remove_adapter += 1,
            ItemClass::SelectAdapter => s.select_adapter += 1,
        }
        if let (ItemClass::Word, Some(c)) = (item.item_class, item.category()) {
            let l = item.licensees();
            if !l.is_empty() {
                tags.entry(c.to_string()).or_default().extend(l);
            }
        }
    }
    s.total = lex.items.len();
    s.licensees_per_category = tags.into_iter().map(|(c, t)| (c, t.len())).collect();
    s
}

impl fmt::Display for LexiconStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "word items       {}", self.word)?;
        writeln!(f, "remove adapters  {}", self.remove_adapter)?;
        writeln!(f, "select adapters  {}", self.select_adapter)?;
        writeln!(f, "total            {}", self.total)?;
        for (c, n) in &self.licensees_per_category {
            writeln!(f, "licensees of {c}: {n}")?;
        }
        Ok(())
    }
}
