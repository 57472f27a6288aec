use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::cfg::{
    compute_category_order, fresh_name, Category, Grammar, NtClass, NtClassification, Rule, Symbol,
};
use crate::error::{Error, Result};

/// Names chosen for the new start symbol and final category.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StartInfo {
    pub start: String,
    pub final_category: Category,
}

/// Prepends `S0 -> S # CFin` with fresh names and makes `S0` the start.
pub fn add_start_rule(g: &Grammar) -> Result<(Grammar, StartInfo)> {
    let mut taken = g.names();
    let start = fresh_name("S0", &taken);
    taken.insert(start.clone());
    let final_category = Category::new(fresh_name("CFin", &taken));
    let mut rules = vec![Rule::new(
        start.clone(),
        vec![Symbol::nt(g.start())],
        final_category.clone(),
    )];
    rules.extend(g.rules().iter().cloned());
    let out = Grammar::new(rules, start.clone())?;
    Ok((
        out,
        StartInfo {
            start,
            final_category,
        },
    ))
}

/// The main category picked for a nonterminal with rules of several categories.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MainCategoryChoice {
    pub nonterminal: String,
    pub categories: Vec<Category>,
    pub main: Category,
    /// False when every choice closes a cycle in the category order.
    pub valid: bool,
    /// Auxiliary nonterminal created for each non-main category.
    pub auxiliaries: BTreeMap<Category, String>,
}

/// Gives every nonterminal a single target category. For a nonterminal `A`
/// with several, the highest category in a fixed linear extension of the
/// category order becomes the main one; the rules of each other category
/// `Ci` move to a fresh `A'Ci`, reached through a bridge `A -> A'Ci # Cmain`.
pub fn normalize_target_categories(g: &Grammar) -> Result<(Grammar, Vec<MainCategoryChoice>)> {
    let order = compute_category_order(g);
    let closure = order.closure();
    let rank: BTreeMap<Category, usize> = order
        .linear_extension(g.categories())
        .into_iter()
        .enumerate()
        .map(|(i, c)| (c, i))
        .collect();

    let mut taken = g.names();
    let mut choices: Vec<MainCategoryChoice> = Vec::new();
    let mut by_nt: BTreeMap<String, usize> = BTreeMap::new();
    let cat_map = g.category_map();
    for r in g.rules() {
        let nt = r.producer.as_str();
        let cats = &cat_map[nt];
        if cats.len() < 2 || by_nt.contains_key(nt) {
            continue;
        }
        let mut categories: Vec<Category> = cats.iter().map(|c| (*c).clone()).collect();
        categories.sort_by_key(|c| rank[c]);
        let main = categories.last().unwrap().clone();
        let valid = categories
            .iter()
            .all(|c| *c == main || !closure.contains(&(c.clone(), main.clone())));
        let mut auxiliaries = BTreeMap::new();
        for c in categories.iter().filter(|c| **c != main) {
            let name = fresh_name(&format!("{nt}'{c}"), &taken);
            taken.insert(name.clone());
            auxiliaries.insert(c.clone(), name);
        }
        by_nt.insert(nt.to_string(), choices.len());
        choices.push(MainCategoryChoice {
            nonterminal: nt.to_string(),
            categories,
            main,
            valid,
            auxiliaries,
        });
    }

    let mut rules = Vec::with_capacity(g.rules().len() + choices.len());
    let mut bridged: BTreeSet<(String, Category)> = BTreeSet::new();
    for r in g.rules() {
        let Some(&ci) = by_nt.get(&r.producer) else {
            rules.push(r.clone());
            continue;
        };
        let choice = &choices[ci];
        let Some(aux) = choice.auxiliaries.get(&r.category) else {
            rules.push(r.clone());
            continue;
        };
        if bridged.insert((r.producer.clone(), r.category.clone())) {
            rules.push(Rule::new(
                r.producer.clone(),
                vec![Symbol::nt(aux.clone())],
                choice.main.clone(),
            ));
        }
        rules.push(Rule::new(aux.clone(), r.word.clone(), r.category.clone()));
    }
    Ok((Grammar::new(rules, g.start())?, choices))
}

/// Marks each nonterminal free or restricted. `A` is restricted when some
/// other nonterminal produces a word of `A`'s target category that `A` lacks.
pub fn classify_nonterminals(g: &Grammar) -> Result<NtClassification> {
    let mut words: BTreeMap<&str, BTreeSet<(&[Symbol], &Category)>> = BTreeMap::new();
    for r in g.rules() {
        words
            .entry(r.producer.as_str())
            .or_default()
            .insert((&r.word, &r.category));
    }
    let mut cls = NtClassification::default();
    for (nt, cats) in g.category_map() {
        if cats.len() != 1 {
            return Err(Error::AmbiguousTarget {
                nt: nt.to_string(),
                categories: cats
                    .iter()
                    .map(|c| c.name())
                    .collect::<Vec<_>>()
                    .join(", "),
            });
        }
        cls.target.insert(nt.to_string(), (*cats.first().unwrap()).clone());
    }
    for nt in g.nonterminals() {
        let target = &cls.target[nt];
        let own = &words[nt];
        let restricted = g
            .rules()
            .iter()
            .any(|r| r.producer != nt && r.category == *target && !own.contains(&(&r.word[..], target)));
        let class = if restricted {
            NtClass::Restricted
        } else {
            NtClass::Free
        };
        cls.class.insert(nt.to_string(), class);
    }
    Ok(cls)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cfg::{is_category_recursion_free, parse_cfg};

    #[test]
    fn start_rule_is_prepended() {
        let g = parse_cfg("S -> peter_eats_ F # CSentence\nF -> apples # CFood").unwrap();
        let (g2, info) = add_start_rule(&g).unwrap();
        assert_eq!(info.start, "S0");
        assert_eq!(info.final_category.name(), "CFin");
        assert_eq!(g2.start(), "S0");
        assert_eq!(g2.rules()[0].to_string(), "S0 -> S # CFin");
        assert_eq!(g2.rules().len(), 3);
    }

    #[test]
    fn start_name_collision() {
        let g = parse_cfg("S -> S0 # CFin\n").unwrap();
        let (g2, info) = add_start_rule(&g).unwrap();
        assert_eq!(info.start, "S0_1");
        assert_eq!(info.final_category.name(), "CFin_1");
        assert_eq!(g2.rules()[0].to_string(), "S0_1 -> S # CFin_1");
    }

    #[test]
    fn recursive_input_is_still_accepted() {
        let g = parse_cfg("S -> S # C").unwrap();
        assert!(add_start_rule(&g).is_ok());
    }

    #[test]
    fn hundred_and_fragment_picks_c2() {
        let g = parse_cfg(
            "S -> hundredand A # C3\nA -> thirty- B # C2\nA -> two # C1\nB -> two # C1",
        )
        .unwrap();
        let (n, choices) = normalize_target_categories(&g).unwrap();
        assert_eq!(choices.len(), 1);
        assert_eq!(choices[0].main.name(), "C2");
        assert!(choices[0].valid);
        let rendered: Vec<String> = n.rules().iter().map(ToString::to_string).collect();
        assert_eq!(
            rendered,
            [
                "S -> hundredand A # C3",
                "A -> thirty- B # C2",
                "A -> A'C1 # C2",
                "A'C1 -> two # C1",
                "B -> two # C1"
            ]
        );
        assert!(is_category_recursion_free(&n));
    }

    #[test]
    fn single_category_is_untouched() {
        let g = parse_cfg("S -> peter_eats_ F # CSentence\nF -> apples # CFood").unwrap();
        let (n, choices) = normalize_target_categories(&g).unwrap();
        assert!(choices.is_empty());
        assert_eq!(n, g);
    }

    #[test]
    fn incomparable_categories_pick_larger_name() {
        let g = parse_cfg("S -> x A # CS\nA -> a # CA\nA -> b # CB").unwrap();
        let (n, choices) = normalize_target_categories(&g).unwrap();
        assert_eq!(choices[0].main.name(), "CB");
        assert!(compute_category_order(&n).strict);
    }

    #[test]
    fn classification_follows_missing_words() {
        let g = parse_cfg(
            "S -> N _eats_apples # CSentence\nN -> peter # CNoun\nT -> peter # CNoun\nT -> stone # CNoun\nS -> T _lies # CSentence",
        )
        .unwrap();
        let c = classify_nonterminals(&g).unwrap();
        assert!(c.is_restricted("N"));
        assert!(c.is_free("T"));
        assert!(c.is_free("S"));
        assert_eq!(c.target("N").unwrap().name(), "CNoun");
    }

    #[test]
    fn classification_needs_unique_targets() {
        let g = parse_cfg("A -> a # C1\nA -> b # C2").unwrap();
        assert!(matches!(
            classify_nonterminals(&g),
            Err(Error::AmbiguousTarget { .. })
        ));
    }
}
