//! The compilation pipeline from a categorized CFG to an MG lexicon.
//!
//! Stages, in order: add a start rule, normalize target categories,
//! classify nonterminals, decompose rules, build word items, assign and sort
//! licensees, then add remove and select adapters.

mod decompose;
mod items;
mod prepare;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::cfg::{is_category_recursion_free, is_recursion_free, Category, Grammar, NtClassification};
use crate::error::Result;
use crate::mg::{ItemClass, LexItem, MgLexicon};

pub use decompose::{decompose_rules, rule_shape, RuleShape};
pub use items::{
    add_remove_adapters, add_select_adapters, assign_licensees, build_word_items, licensee_tags,
    sort_licensees, FrequencySorter, LexicographicSorter, LicenseeSorter,
};
pub use prepare::{
    add_start_rule, classify_nonterminals, normalize_target_categories, MainCategoryChoice,
    StartInfo,
};

/// Rule and item counts after one stage.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageDelta {
    pub instruction: u8,
    pub stage: String,
    pub rules: usize,
    pub items: usize,
    pub rules_added: isize,
    pub items_added: isize,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ItemCounts {
    pub word: usize,
    pub remove_adapter: usize,
    pub select_adapter: usize,
    pub total: usize,
}

impl ItemCounts {
    pub fn of(items: &[LexItem]) -> Self {
        let count = |c| items.iter().filter(|i| i.item_class == c).count();
        ItemCounts {
            word: count(ItemClass::Word),
            remove_adapter: count(ItemClass::RemoveAdapter),
            select_adapter: count(ItemClass::SelectAdapter),
            total: items.len(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineReport {
    pub source_digest: String,
    pub start_symbol: String,
    pub final_category: Category,
    pub stages: Vec<StageDelta>,
    pub main_categories: Vec<MainCategoryChoice>,
    pub restricted: Vec<String>,
    pub licensee_tags: BTreeMap<String, String>,
    pub licensee_order: BTreeMap<Category, Vec<String>>,
    pub recursion_free: bool,
    pub category_recursion_free: bool,
    /// The lexicon generates nothing beyond the grammar's language.
    pub no_overgeneration_guarantee: bool,
    pub warnings: Vec<String>,
    pub items: ItemCounts,
}

impl PipelineReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

/// Output of [`compile`], with the intermediate grammars kept for inspection.
#[derive(Clone, Debug)]
pub struct Compilation {
    pub lexicon: MgLexicon,
    pub report: PipelineReport,
    pub with_start: Grammar,
    pub normalized: Grammar,
    pub decomposed: Grammar,
    pub classification: NtClassification,
}

pub fn compile(g: &Grammar) -> Result<Compilation> {
    compile_with(g, &FrequencySorter)
}

/// Runs the whole pipeline with a custom licensee sorter.
pub fn compile_with(g: &Grammar, sorter: &dyn LicenseeSorter) -> Result<Compilation> {
    let mut stages = Vec::new();
    let mut stage = |instruction: u8, name: &str, rules: usize, items: usize| {
        let (pr, pi) = stages
            .last()
            .map_or((g.rules().len(), 0), |s: &StageDelta| (s.rules, s.items));
        stages.push(StageDelta {
            instruction,
            stage: name.to_string(),
            rules,
            items,
            rules_added: rules as isize - pr as isize,
            items_added: items as isize - pi as isize,
        });
    };
    let mut warnings: Vec<String> = g.warnings().to_vec();

    let (with_start, info) = add_start_rule(g)?;
    stage(1, "add start rule", with_start.rules().len(), 0);

    let (normalized, main_categories) = normalize_target_categories(&with_start)?;
    stage(2, "normalize target categories", normalized.rules().len(), 0);
    for c in main_categories.iter().filter(|c| !c.valid) {
        warnings.push(format!(
            "no main category of `{}` keeps the category order strict; using {}",
            c.nonterminal, c.main
        ));
    }

    let pre_cls = classify_nonterminals(&normalized)?;
    stage(3, "classify nonterminals", normalized.rules().len(), 0);

    let decomposed = decompose_rules(&normalized, &pre_cls)?;
    let classification = classify_nonterminals(&decomposed)?;
    stage(4, "decompose rules", decomposed.rules().len(), 0);

    let word_items = build_word_items(&decomposed, &classification)?;
    stage(5, "build word items", decomposed.rules().len(), word_items.len());

    let mut words = assign_licensees(word_items, &decomposed, &classification);
    stage(6, "assign licensees", decomposed.rules().len(), words.len());

    let licensee_order = sort_licensees(&mut words, sorter);
    let removes = add_remove_adapters(&licensee_order);
    let selects = add_select_adapters(&words);
    let mut items = words;
    items.extend(removes);
    stage(7, "add remove adapters", decomposed.rules().len(), items.len());
    items.extend(selects);
    stage(8, "add select adapters", decomposed.rules().len(), items.len());

    let recursion_free = is_recursion_free(g);
    let category_recursion_free = is_category_recursion_free(g);
    if !category_recursion_free {
        warnings.push(
            "grammar is not category-recursion-free; the lexicon may overgenerate".to_string(),
        );
    }

    let source_digest = g.digest();
    let lexicon = MgLexicon {
        items,
        final_category: info.final_category.clone(),
        licensee_order: licensee_order.clone(),
        source_digest: Some(source_digest.clone()),
    };
    let report = PipelineReport {
        source_digest,
        start_symbol: info.start,
        final_category: info.final_category,
        stages,
        main_categories,
        restricted: classification.restricted().map(String::from).collect(),
        licensee_tags: licensee_tags(&classification),
        licensee_order,
        recursion_free,
        category_recursion_free,
        no_overgeneration_guarantee: category_recursion_free,
        warnings,
        items: ItemCounts::of(&lexicon.items),
    };
    Ok(Compilation {
        lexicon,
        report,
        with_start,
        normalized,
        decomposed,
        classification,
    })
}
