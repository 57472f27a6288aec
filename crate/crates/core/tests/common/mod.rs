#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use mgforge::mg::DerivationTree;
use mgforge::{Grammar, Symbol};

/// The units lexicon with its adapters and a wrapper into CFin.
pub const UNITS_LEXICON: &str = "\
// final: CFin
:: =C2 CFin
zig :: =C1 +zi C2
zehn :: =C1 +zeh C2
undzwanzig :: =C1 +un C2
eins :: C1
zwei :: C1 -un
drei :: C1 -zeh -un
vier :: C1 -zi -zeh -un
fünf :: C1 -zi -zeh -un
sechs :: C1 -un
sieben :: C1 -un
acht :: C1 -un
neun :: C1 -zi -zeh -un
:: =C1 +zi C1
:: =C1 +zeh C1
:: =C1 +un C1
:: =C1 +zi +zeh +un C1 -zi
:: =C1 +zeh +un C1 -zeh
";

/// Language of a recursion-free grammar by bottom-up set concatenation.
pub fn expand(g: &Grammar) -> BTreeSet<String> {
    fn lang<'a>(
        g: &'a Grammar,
        nt: &'a str,
        memo: &mut BTreeMap<&'a str, BTreeSet<String>>,
    ) -> BTreeSet<String> {
        if let Some(l) = memo.get(nt) {
            return l.clone();
        }
        let mut out = BTreeSet::new();
        for r in g.rules().iter().filter(|r| r.producer == nt) {
            let mut acc: BTreeSet<String> = [String::new()].into();
            for s in &r.word {
                let part: BTreeSet<String> = match s {
                    Symbol::Terminal(t) => [t.clone()].into(),
                    Symbol::Nonterminal(n) => lang(g, n, memo),
                };
                acc = acc
                    .iter()
                    .flat_map(|a| part.iter().map(move |p| format!("{a}{p}")))
                    .collect();
            }
            out.extend(acc);
        }
        memo.insert(nt, out.clone());
        out
    }
    lang(g, g.start(), &mut BTreeMap::new())
}

pub fn op_labels(t: &DerivationTree) -> Vec<&'static str> {
    t.operations().into_iter().map(|o| o.label()).collect()
}

/// The subtree below a root wrapper merge, if the root is one.
pub fn unwrap_root(t: &DerivationTree) -> &DerivationTree {
    match t.children.as_slice() {
        [w, inner] if w.children.is_empty() && w.result.head.exponent.is_empty() => inner,
        _ => t,
    }
}
