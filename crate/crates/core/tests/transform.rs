mod common;

use std::collections::BTreeMap;

use mgforge::cfg::{compute_category_order, NtClassification};
use mgforge::corpus::fixture;
use mgforge::mg::{ItemClass, LexItem};
use mgforge::transform::{
    add_remove_adapters, add_select_adapters, add_start_rule, assign_licensees, build_word_items,
    classify_nonterminals, compile, compile_with, decompose_rules, normalize_target_categories,
    sort_licensees, FrequencySorter, LexicographicSorter, LicenseeSorter,
};
use mgforge::verify::{compare_languages, Verdict, VerifyBounds};
use mgforge::{parse_cfg, Category, Feature, Grammar};

fn rendered(g: &Grammar) -> Vec<String> {
    g.rules().iter().map(|r| r.to_string()).collect()
}

fn feats(s: &str) -> Vec<Feature> {
    s.split_whitespace().map(|t| t.parse().unwrap()).collect()
}

/// Word items after licensee assignment and sorting, as in the pipeline.
fn word_items(g: &Grammar) -> Vec<String> {
    let c = compile(g).unwrap();
    c.lexicon
        .items
        .iter()
        .filter(|i| i.item_class == ItemClass::Word)
        .map(LexItem::render)
        .collect()
}

#[test]
fn start_rule_is_prepended() {
    let g = parse_cfg("S -> peter_eats_ F # CSentence\nF -> apples # CFood").unwrap();
    let (h, info) = add_start_rule(&g).unwrap();
    assert_eq!(h.start(), "S0");
    assert_eq!(rendered(&h)[0], "S0 -> S # CFin");
    assert_eq!(info.final_category, Category::new("CFin"));
}

#[test]
fn start_name_avoids_collisions() {
    let g = parse_cfg("S -> S0 # C").unwrap();
    let (h, info) = add_start_rule(&g).unwrap();
    assert_eq!(info.start, "S0_1");
    assert_eq!(h.start(), "S0_1");
}

#[test]
fn self_recursive_grammar_still_compiles() {
    let g = parse_cfg("S -> S # C").unwrap();
    let c = compile(&g).unwrap();
    assert!(!c.report.recursion_free);
}

#[test]
fn hundred_and_normalizes_to_c2() {
    let (h, choices) = normalize_target_categories(&fixture("hundred_and")).unwrap();
    let a = choices.iter().find(|c| c.nonterminal == "A").unwrap();
    assert_eq!(a.main, Category::new("C2"));
    assert!(a.valid);
    assert_eq!(
        rendered(&h),
        ["S -> hundredand A # C3", "A -> thirty- B # C2", "A -> A'C1 # C2", "A'C1 -> two # C1", "B -> two # C1"]
    );
    assert!(compute_category_order(&h).strict);
}

#[test]
fn single_category_nonterminals_are_untouched() {
    let g = fixture("german_numerals");
    let (h, choices) = normalize_target_categories(&g).unwrap();
    let multi: Vec<&str> = choices.iter().map(|c| c.nonterminal.as_str()).collect();
    assert_eq!(multi, ["Num"]);
    for r in g.rules().iter().filter(|r| r.producer != "Num") {
        assert!(h.rules().contains(r), "{r}");
    }
}

#[test]
fn unrelated_categories_pick_the_larger_name() {
    let g = parse_cfg("S -> x A # C0\nA -> a # Ca\nA -> b # Cb").unwrap();
    let (h, choices) = normalize_target_categories(&g).unwrap();
    assert_eq!(choices[0].main, Category::new("Cb"));
    assert!(compute_category_order(&h).strict);
    // the other choice would have kept the order strict too
    let alt = parse_cfg("S -> x A # C0\nA -> A'Cb # Ca\nA'Cb -> b # Cb\nA -> a # Ca").unwrap();
    assert!(compute_category_order(&alt).strict);
}

#[test]
fn classification_of_peter_eats() {
    let cls = classify_nonterminals(&fixture("peter_eats_left_restricted")).unwrap();
    assert!(cls.is_restricted("Person"));
    assert!(cls.is_free("T"));
    let cls = classify_nonterminals(&fixture("peter_eats_two_handed")).unwrap();
    assert!(cls.is_free("F") && cls.is_free("P"));
}

#[test]
fn auxiliary_wrapper_is_free() {
    let g = parse_cfg("S -> peter_eats_ N # C\nN -> peter # CNoun\nT -> stone # CNoun\nS -> T x # C").unwrap();
    let cls = classify_nonterminals(&g).unwrap();
    let d = decompose_rules(&g, &cls).unwrap();
    assert!(rendered(&d).contains(&"S -> peter_eats_ N' # C".to_string()));
    assert!(rendered(&d).contains(&"N' -> N # CN'".to_string()));
    let cls = classify_nonterminals(&d).unwrap();
    assert!(cls.is_free("N'"));
    assert!(cls.is_restricted("N"));
}

#[test]
fn left_free_word_gets_nix() {
    let g = parse_cfg("A -> P eats_apples # C\nP -> peter # CP").unwrap();
    let cls = classify_nonterminals(&g).unwrap();
    let d = decompose_rules(&g, &cls).unwrap();
    assert_eq!(
        rendered(&d),
        ["A -> P eats_apples O' # C", "O' -> # Cnix'", "P -> peter # CP"]
    );
}

#[test]
fn terminal_rules_are_unchanged() {
    let g = parse_cfg("A -> hello # C").unwrap();
    let d = decompose_rules(&g, &NtClassification::default()).unwrap();
    assert_eq!(d, g);
}

#[test]
fn word_items_of_the_three_shapes() {
    assert!(word_items(&fixture("peter_eats_right_free")).contains(&"peter_eats_ :: =CFood CSentence".to_string()));
    assert!(word_items(&fixture("peter_eats_two_handed")).contains(&"_eats_ :: =CFood =CPerson CSentence".to_string()));
    let left = word_items(&fixture("peter_eats_left_restricted"));
    assert!(left.contains(&"_eats_apples :: =CNoun +person CSentence".to_string()), "{left:?}");
    assert!(left.contains(&"peter :: CNoun -person".to_string()));
    assert!(left.contains(&"stone :: CNoun".to_string()));
}

#[test]
fn units_get_their_licensees() {
    let items = word_items(&fixture("units_tens"));
    assert!(items.contains(&"vier :: C1 -zi -zeh -un".to_string()));
    assert!(items.contains(&"eins :: C1".to_string()));
}

#[test]
fn free_only_words_stay_plain() {
    let items = word_items(&fixture("peter_eats_two_handed"));
    assert!(items.contains(&"peter :: CPerson".to_string()));
    assert!(items.iter().all(|i| !i.contains(" -")));
}

#[test]
fn licensee_order_for_units() {
    let c = compile(&fixture("units_tens")).unwrap();
    assert_eq!(c.lexicon.licensee_order[&Category::new("C1")], ["zi", "zeh", "un"]);
}

#[test]
fn single_licensee_order() {
    let c = compile(&fixture("peter_eats_left_restricted")).unwrap();
    assert_eq!(c.lexicon.licensee_order[&Category::new("CNoun")], ["person"]);
}

struct ReverseSorter;

impl LicenseeSorter for ReverseSorter {
    fn order(&self, c: &str, lists: &[Vec<&str>]) -> Vec<String> {
        let mut v = LexicographicSorter.order(c, lists);
        v.reverse();
        v
    }
}

#[test]
fn disjoint_licensees_work_in_either_order() {
    let g = parse_cfg(
        "S -> W w # C2\nS -> X x # C2\nS -> Y y # C2\nW -> a # C1\nW -> b # C1\nX -> a # C1\nY -> b # C1",
    )
    .unwrap();
    let c = compile_with(&g, &FrequencySorter).unwrap();
    assert_eq!(c.lexicon.licensee_order[&Category::new("C1")], ["x", "y"]);
    for sorter in [&FrequencySorter as &dyn LicenseeSorter, &ReverseSorter] {
        let c = compile_with(&g, sorter).unwrap();
        let r = compare_languages(&g, &c.lexicon, VerifyBounds::default()).unwrap();
        assert_eq!(r.verdict(), Verdict::Equal);
    }
}

#[test]
fn remove_adapters() {
    let c = compile(&fixture("units_tens")).unwrap();
    let removes: Vec<String> = c
        .lexicon
        .items_of_class(ItemClass::RemoveAdapter)
        .map(LexItem::render)
        .collect();
    assert_eq!(removes, [":: =C1 +zi C1", ":: =C1 +zeh C1", ":: =C1 +un C1"]);
    assert!(add_remove_adapters(&BTreeMap::new()).is_empty());
    let two: BTreeMap<Category, Vec<String>> = [
        (Category::new("C1"), vec!["a".to_string()]),
        (Category::new("C2"), vec!["a".to_string()]),
    ]
    .into();
    assert_eq!(add_remove_adapters(&two).len(), 2);
}

#[test]
fn select_adapters() {
    let c = compile(&fixture("units_tens")).unwrap();
    let mut selects: Vec<String> = c
        .lexicon
        .items_of_class(ItemClass::SelectAdapter)
        .map(LexItem::render)
        .collect();
    selects.sort();
    assert_eq!(selects, [":: =C1 +zeh +un C1 -zeh", ":: =C1 +zi +zeh +un C1 -zi"]);

    let single = [LexItem::new("x", feats("C -a"), ItemClass::Word)];
    assert!(add_select_adapters(&single).is_empty());

    let adversarial = [
        LexItem::new("x", feats("C -a -b"), ItemClass::Word),
        LexItem::new("y", feats("C -a -c"), ItemClass::Word),
    ];
    let s: Vec<String> = add_select_adapters(&adversarial).iter().map(LexItem::render).collect();
    assert_eq!(s, [":: =C +a +b C -a", ":: =C +a +c C -a"]);
}

#[test]
fn pipeline_stages_in_order() {
    let c = compile(&fixture("peter_eats_right_free")).unwrap();
    let instructions: Vec<u8> = c.report.stages.iter().map(|s| s.instruction).collect();
    assert_eq!(instructions, [1, 2, 3, 4, 5, 6, 7, 8]);
    assert_eq!(c.report.items.word, 3);
    assert!(c.report.category_recursion_free);
}

#[test]
fn sour_apple_report() {
    let c = compile(&fixture("sour_apple")).unwrap();
    assert!(!c.report.category_recursion_free);
    assert!(!c.report.warnings.is_empty());
}

#[test]
fn decomposed_grammar_is_a_fixpoint() {
    for (name, g) in mgforge::corpus::exactness_corpus() {
        let c = compile(&g).unwrap();
        let again = decompose_rules(&c.decomposed, &c.classification).unwrap();
        assert_eq!(again, c.decomposed, "{name}");
    }
}

#[test]
fn pipeline_matches_manual_stages() {
    let g = fixture("units_tens");
    let (s, _) = add_start_rule(&g).unwrap();
    let (n, _) = normalize_target_categories(&s).unwrap();
    let cls = classify_nonterminals(&n).unwrap();
    let d = decompose_rules(&n, &cls).unwrap();
    let cls = classify_nonterminals(&d).unwrap();
    let mut words = assign_licensees(build_word_items(&d, &cls).unwrap(), &d, &cls);
    let order = sort_licensees(&mut words, &FrequencySorter);
    let c = compile(&g).unwrap();
    assert_eq!(c.decomposed, d);
    assert_eq!(c.lexicon.licensee_order, order);
    assert_eq!(&c.lexicon.items[..words.len()], &words[..]);
}
