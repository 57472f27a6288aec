//! Bundled example grammars and seeded random grammar generators.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cfg::{
    enumerate_cfg_language, is_category_recursion_free, is_recursion_free, parse_cfg, CfgBounds,
    Grammar, Rule, Symbol,
};

/// Name and source text of every bundled grammar.
pub const FIXTURES: &[(&str, &str)] = &[
    ("peter_eats_right_free", include_str!("../grammars/peter_eats_right_free.cfg")),
    ("peter_eats_two_handed", include_str!("../grammars/peter_eats_two_handed.cfg")),
    ("peter_eats_left_restricted", include_str!("../grammars/peter_eats_left_restricted.cfg")),
    ("hundred_and", include_str!("../grammars/hundred_and.cfg")),
    ("thirty_two_bad", include_str!("../grammars/thirty_two_bad.cfg")),
    ("units_tens", include_str!("../grammars/units_tens.cfg")),
    ("german_numerals", include_str!("../grammars/german_numerals.cfg")),
    ("dates", include_str!("../grammars/dates.cfg")),
    ("sour_apple", include_str!("../grammars/sour_apple.cfg")),
    ("sour_apple_restricted", include_str!("../grammars/sour_apple_restricted.cfg")),
];

pub fn fixture_source(name: &str) -> Option<&'static str> {
    FIXTURES.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

/// Parses a bundled grammar. Panics on unknown names.
pub fn fixture(name: &str) -> Grammar {
    let src = fixture_source(name).unwrap_or_else(|| panic!("no fixture `{name}`"));
    parse_cfg(src).unwrap_or_else(|e| panic!("fixture `{name}`: {e}"))
}

/// Category-recursion-free grammars with finite languages: the bundled ones
/// plus two random ones.
pub fn exactness_corpus() -> Vec<(String, Grammar)> {
    let mut out: Vec<(String, Grammar)> = [
        "peter_eats_right_free",
        "peter_eats_two_handed",
        "peter_eats_left_restricted",
        "hundred_and",
        "units_tens",
        "german_numerals",
        "dates",
    ]
    .iter()
    .map(|n| (n.to_string(), fixture(n)))
    .collect();
    for seed in [1, 2] {
        out.push((format!("random_crf_{seed}"), random_crf_grammar(seed)));
    }
    out
}

/// Recursion-free grammars whose category order is not strict.
pub fn non_crf_corpus(count: usize) -> Vec<(String, Grammar)> {
    (0..count as u64)
        .map(|s| (format!("random_non_crf_{s}"), random_non_crf_grammar(s)))
        .collect()
}

/// Shape parameters for [`random_layered`].
#[derive(Clone, Debug)]
pub struct LayeredSpec {
    pub layers: usize,
    pub max_nonterminals_per_layer: usize,
    pub max_rules_per_nonterminal: usize,
    pub terminals: Vec<&'static str>,
    /// Categories per layer. `None` draws every rule's category from one
    /// global pool of three, which usually breaks strictness.
    pub categories_per_layer: Option<usize>,
    pub min_rules: usize,
    pub max_language: usize,
}

impl Default for LayeredSpec {
    fn default() -> Self {
        LayeredSpec {
            layers: 4,
            max_nonterminals_per_layer: 3,
            max_rules_per_nonterminal: 4,
            terminals: vec!["a", "b", "c", "d"],
            categories_per_layer: Some(2),
            min_rules: 10,
            max_language: 2000,
        }
    }
}

/// A random grammar whose nonterminals sit in layers; words only mention
/// nonterminals of deeper layers, so the grammar is recursion-free.
pub fn random_layered(rng: &mut impl Rng, spec: &LayeredSpec) -> Grammar {
    let layers: Vec<Vec<String>> = (0..spec.layers)
        .map(|l| {
            let n = if l == 0 {
                1
            } else {
                rng.gen_range(1..=spec.max_nonterminals_per_layer)
            };
            let letter = (b'A' + l as u8) as char;
            (0..n).map(|i| format!("{letter}{i}")).collect()
        })
        .collect();
    let category = |rng: &mut dyn rand::RngCore, layer: usize| -> String {
        match spec.categories_per_layer {
            Some(k) => format!("C{layer}{}", (b'a' + rng.gen_range(0..k) as u8) as char),
            None => format!("K{}", rng.gen_range(0..3)),
        }
    };

    let mut rules = Vec::new();
    for (l, nts) in layers.iter().enumerate() {
        let deeper: Vec<&String> = layers[l + 1..].iter().flatten().collect();
        // A small shared pool of words per layer so that nonterminals of one
        // layer overlap in some words and differ in others.
        let pool: Vec<(Vec<Symbol>, String)> = (0..4)
            .map(|_| {
                let mut word = Vec::new();
                let nts_in_word = if deeper.is_empty() { 0 } else { rng.gen_range(0..=2) };
                let slots = nts_in_word + rng.gen_range(0..=2);
                let mut nt_left = nts_in_word;
                for s in 0..slots.max(1) {
                    let remaining = slots.max(1) - s;
                    if nt_left > 0 && (nt_left == remaining || rng.gen_bool(0.5)) {
                        word.push(Symbol::nt(deeper.choose(rng).unwrap().as_str()));
                        nt_left -= 1;
                    } else {
                        word.push(Symbol::t(*spec.terminals.choose(rng).unwrap()));
                    }
                }
                (word, category(rng, l))
            })
            .collect();
        for nt in nts {
            let k = rng.gen_range(1..=spec.max_rules_per_nonterminal);
            let mut picked: Vec<&(Vec<Symbol>, String)> = pool.choose_multiple(rng, k.min(pool.len())).collect();
            picked.sort_by_key(|p| pool.iter().position(|q| q == *p));
            for (word, cat) in picked {
                rules.push(Rule::new(nt.clone(), word.clone(), cat.as_str()));
            }
        }
    }
    // Every nonterminal mentioned in a word needs a rule; the pools guarantee
    // each nonterminal has at least one.
    Grammar::new(rules, layers[0][0].clone()).expect("layered grammar is valid")
}

fn language_fits(g: &Grammar, max: usize) -> bool {
    let bounds = CfgBounds {
        max_forms: 200_000,
        ..CfgBounds::unbounded()
    };
    matches!(enumerate_cfg_language(g, bounds), Ok(l) if !l.is_empty() && l.len() <= max)
}

fn search(seed: u64, spec: &LayeredSpec, accept: impl Fn(&Grammar) -> bool) -> Grammar {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let g = random_layered(&mut rng, spec);
        if g.rules().len() >= spec.min_rules && language_fits(&g, spec.max_language) && accept(&g) {
            return g;
        }
    }
}

/// A random category-recursion-free grammar with at least ten rules and a
/// small non-empty language. Deterministic in `seed`.
pub fn random_crf_grammar(seed: u64) -> Grammar {
    search(seed, &LayeredSpec::default(), is_category_recursion_free)
}

/// A random recursion-free grammar that is not category-recursion-free.
pub fn random_non_crf_grammar(seed: u64) -> Grammar {
    let spec = LayeredSpec {
        categories_per_layer: None,
        ..LayeredSpec::default()
    };
    search(seed.wrapping_add(1 << 32), &spec, |g| {
        is_recursion_free(g) && !is_category_recursion_free(g)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_parse() {
        for (name, _) in FIXTURES {
            fixture(name);
        }
    }

    #[test]
    fn generators_are_deterministic() {
        assert_eq!(random_crf_grammar(7), random_crf_grammar(7));
        assert_eq!(random_non_crf_grammar(7), random_non_crf_grammar(7));
    }

    #[test]
    fn generated_grammars_have_requested_properties() {
        for s in 0..5 {
            let g = random_crf_grammar(s);
            assert!(g.rules().len() >= 10);
            assert!(is_category_recursion_free(&g));
            let h = random_non_crf_grammar(s);
            assert!(is_recursion_free(&h) && !is_category_recursion_free(&h));
        }
    }
}
