use std::collections::{BTreeMap, BTreeSet};

use crate::cfg::{fresh_name, Category, Grammar, NtClassification, Symbol};
use crate::error::{Error, Result};
use crate::mg::{Feature, ItemClass, LexItem};

use super::decompose::{rule_shape, RuleShape};

/// One word item per rule of a decomposed grammar, in rule order.
pub fn build_word_items(g: &Grammar, cls: &NtClassification) -> Result<Vec<LexItem>> {
    let cat = |nt: &str| -> Result<&Category> {
        cls.target(nt).ok_or_else(|| Error::AmbiguousTarget {
            nt: nt.to_string(),
            categories: String::new(),
        })
    };
    let tags = licensee_tags(cls);
    let mut items = Vec::with_capacity(g.rules().len());
    for r in g.rules() {
        let shape = rule_shape(r, cls).ok_or_else(|| Error::Undecomposed(r.to_string()))?;
        let own = Feature::category(r.category.name());
        let (exponent, features) = match shape {
            RuleShape::Terminal { exponent } => (exponent, vec![own]),
            RuleShape::RightFree { exponent, x } => {
                (exponent, vec![Feature::selector(cat(&x)?.name()), own])
            }
            RuleShape::TwoHandedFree { y, exponent, x } => (
                exponent,
                vec![
                    Feature::selector(cat(&x)?.name()),
                    Feature::selector(cat(&y)?.name()),
                    own,
                ],
            ),
            RuleShape::LeftRestricted { y, exponent } => (
                exponent,
                vec![
                    Feature::selector(cat(&y)?.name()),
                    Feature::licensor(&tags[&y]),
                    own,
                ],
            ),
        };
        items.push(
            LexItem::new(exponent, features, ItemClass::Word).with_origin(5, vec![r.to_string()]),
        );
    }
    Ok(items)
}

/// Licensee tag of every restricted nonterminal: its lowercased name, made
/// unique with a numeric suffix.
pub fn licensee_tags(cls: &NtClassification) -> BTreeMap<String, String> {
    let mut used = BTreeSet::new();
    let mut out = BTreeMap::new();
    for nt in cls.restricted() {
        let tag = fresh_name(&nt.to_lowercase(), &used);
        used.insert(tag.clone());
        out.insert(nt.to_string(), tag);
    }
    out
}

/// Appends `-a_R` to the item of each rule `A -> w # C` for every restricted
/// `R` that also has `R -> w # C`, then merges items that became identical.
/// `items` must be the output of [`build_word_items`] for `g`.
pub fn assign_licensees(items: Vec<LexItem>, g: &Grammar, cls: &NtClassification) -> Vec<LexItem> {
    let tags = licensee_tags(cls);
    let mut producers: BTreeMap<(&[Symbol], &Category), Vec<&str>> = BTreeMap::new();
    for r in g.rules() {
        if cls.is_restricted(&r.producer) {
            producers
                .entry((&r.word, &r.category))
                .or_default()
                .push(&r.producer);
        }
    }
    let mut out: Vec<LexItem> = Vec::new();
    let mut seen: BTreeMap<(String, Vec<Feature>), usize> = BTreeMap::new();
    for (mut item, r) in items.into_iter().zip(g.rules()) {
        let mut rs: Vec<&str> = producers
            .get(&(&r.word[..], &r.category))
            .cloned()
            .unwrap_or_default();
        rs.sort_unstable();
        rs.dedup();
        item.features
            .extend(rs.iter().map(|nt| Feature::licensee(&tags[*nt])));
        item.origin.instruction = 6;
        let key = (item.exponent.clone(), item.features.clone());
        match seen.get(&key) {
            Some(&i) => out[i].origin.rules.extend(item.origin.rules),
            None => {
                seen.insert(key, out.len());
                out.push(item);
            }
        }
    }
    out
}

/// Decides the front-to-back order of the licensee tags of one category.
pub trait LicenseeSorter {
    /// `lists` holds the licensee tags of each word item of `category`.
    fn order(&self, category: &str, lists: &[Vec<&str>]) -> Vec<String>;
}

/// Rarer tags first, so the most frequent licensees sit at the back.
/// Ties go by name.
#[derive(Clone, Copy, Debug, Default)]
pub struct FrequencySorter;

impl LicenseeSorter for FrequencySorter {
    fn order(&self, _category: &str, lists: &[Vec<&str>]) -> Vec<String> {
        let mut freq: BTreeMap<&str, usize> = BTreeMap::new();
        for l in lists {
            for t in l {
                *freq.entry(t).or_default() += 1;
            }
        }
        let mut tags: Vec<(&str, usize)> = freq.into_iter().collect();
        tags.sort_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(b.0)));
        tags.into_iter().map(|(t, _)| t.to_string()).collect()
    }
}

/// Alphabetical order, ignoring frequency.
#[derive(Clone, Copy, Debug, Default)]
pub struct LexicographicSorter;

impl LicenseeSorter for LexicographicSorter {
    fn order(&self, _category: &str, lists: &[Vec<&str>]) -> Vec<String> {
        let tags: BTreeSet<&str> = lists.iter().flatten().copied().collect();
        tags.into_iter().map(String::from).collect()
    }
}

/// Reorders every item's licensees by the per-category order `sorter` picks.
pub fn sort_licensees(
    items: &mut [LexItem],
    sorter: &dyn LicenseeSorter,
) -> BTreeMap<Category, Vec<String>> {
    let mut lists: BTreeMap<String, Vec<Vec<&str>>> = BTreeMap::new();
    for item in items.iter() {
        let l = item.licensees();
        if let (Some(c), false) = (item.category(), l.is_empty()) {
            lists.entry(c.to_string()).or_default().push(l);
        }
    }
    let order: BTreeMap<Category, Vec<String>> = lists
        .iter()
        .map(|(c, l)| (Category::new(c.clone()), sorter.order(c, l)))
        .collect();
    for item in items.iter_mut() {
        let Some(tags) = item.category().and_then(|c| order.get(&Category::from(c))) else {
            continue;
        };
        let pos = |f: &Feature| tags.iter().position(|t| t == f.name()).unwrap_or(usize::MAX);
        let split = item
            .features
            .iter()
            .position(Feature::is_category)
            .map_or(item.features.len(), |i| i + 1);
        item.features[split..].sort_by_key(pos);
    }
    order
}

/// `⟨ε :: =C, +a, C⟩` for every licensee `-a` of category `C`.
pub fn add_remove_adapters(order: &BTreeMap<Category, Vec<String>>) -> Vec<LexItem> {
    let mut out = Vec::new();
    for (cat, tags) in order {
        for t in tags {
            out.push(
                LexItem::new(
                    "",
                    vec![
                        Feature::selector(cat.name()),
                        Feature::licensor(t),
                        Feature::category(cat.name()),
                    ],
                    ItemClass::RemoveAdapter,
                )
                .with_origin(7, Vec::new()),
            );
        }
    }
    out
}

/// `⟨ε :: =C, +x, +t.., C, -x⟩` for every licensee `-x` of an item of
/// category `C` that has further licensees `-t..` behind it.
pub fn add_select_adapters(items: &[LexItem]) -> Vec<LexItem> {
    let mut out: Vec<LexItem> = Vec::new();
    let mut seen: BTreeSet<Vec<Feature>> = BTreeSet::new();
    for item in items.iter().filter(|i| i.item_class == ItemClass::Word) {
        let Some(cat) = item.category() else { continue };
        let tags = item.licensees();
        for j in 0..tags.len().saturating_sub(1) {
            let mut features = vec![Feature::selector(cat)];
            features.extend(tags[j..].iter().map(|t| Feature::licensor(t)));
            features.push(Feature::category(cat));
            features.push(Feature::licensee(tags[j]));
            if seen.insert(features.clone()) {
                out.push(
                    LexItem::new("", features, ItemClass::SelectAdapter)
                        .with_origin(8, vec![item.render()]),
                );
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mg::MgLexicon;

    fn items(src: &str) -> Vec<LexItem> {
        let mut lex = MgLexicon::parse(&format!("// final: X\n{src}")).unwrap();
        for i in &mut lex.items {
            i.item_class = ItemClass::Word;
        }
        lex.items
    }

    #[test]
    fn frequency_sort_matches_inclusion_series() {
        let mut it = items(
            "eins :: C1\nzwei :: C1 -un\ndrei :: C1 -un -zeh\nvier :: C1 -un -zeh -zi\nfünf :: C1 -zi -zeh -un\n\
             sechs :: C1 -un\nsieben :: C1 -un\nacht :: C1 -un\nneun :: C1 -un -zi -zeh\n",
        );
        let order = sort_licensees(&mut it, &FrequencySorter);
        assert_eq!(order[&Category::from("C1")], ["zi", "zeh", "un"]);
        assert_eq!(it[3].render(), "vier :: C1 -zi -zeh -un");
        assert_eq!(it[2].render(), "drei :: C1 -zeh -un");
        let removes = add_remove_adapters(&order);
        assert_eq!(removes.len(), 3);
        let selects: Vec<String> = add_select_adapters(&it).iter().map(LexItem::render).collect();
        assert_eq!(
            selects,
            [":: =C1 +zeh +un C1 -zeh", ":: =C1 +zi +zeh +un C1 -zi"]
        );
    }

    #[test]
    fn single_licensee_has_no_select_adapter() {
        let mut it = items("a :: C -t\n");
        let order = sort_licensees(&mut it, &FrequencySorter);
        assert_eq!(order[&Category::from("C")], ["t"]);
        assert!(add_select_adapters(&it).is_empty());
        assert_eq!(add_remove_adapters(&order).len(), 1);
    }

    #[test]
    fn no_licensees_no_adapters() {
        let mut it = items("a :: C\n");
        let order = sort_licensees(&mut it, &FrequencySorter);
        assert!(order.is_empty());
        assert!(add_remove_adapters(&order).is_empty());
    }

    #[test]
    fn same_tag_in_two_categories() {
        let mut it = items("a :: C1 -t\nb :: C2 -t\n");
        let order = sort_licensees(&mut it, &FrequencySorter);
        let removes: Vec<String> = add_remove_adapters(&order).iter().map(LexItem::render).collect();
        assert_eq!(removes, [":: =C1 +t C1", ":: =C2 +t C2"]);
    }

    #[test]
    fn unsorted_lists_give_two_selects_for_same_head() {
        let it = items("a :: C -a -b\nb :: C -a -c\n");
        let selects: Vec<String> = add_select_adapters(&it).iter().map(LexItem::render).collect();
        assert_eq!(selects, [":: =C +a +b C -a", ":: =C +a +c C -a"]);
    }

    #[test]
    fn equal_frequency_ties_by_name() {
        let mut it = items("a :: C -q\nb :: C -p\n");
        let order = sort_licensees(&mut it, &FrequencySorter);
        assert_eq!(order[&Category::from("C")], ["p", "q"]);
    }
}
