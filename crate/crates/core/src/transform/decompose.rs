use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::cfg::{fresh_name, Category, Grammar, NtClassification, Rule, Symbol};
use crate::error::Result;

/// The four rule shapes a lexical item can be built from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum RuleShape {
    /// `A -> w`
    Terminal { exponent: String },
    /// `A -> w X`, `X` free.
    RightFree { exponent: String, x: String },
    /// `A -> Y w X`, both free.
    TwoHandedFree {
        y: String,
        exponent: String,
        x: String,
    },
    /// `A -> Y w`, `Y` restricted.
    LeftRestricted { y: String, exponent: String },
}

/// A word split around its nonterminals: `s0 X1 s1 ... Xn sn`.
struct Segments<'a> {
    strings: Vec<&'a [Symbol]>,
    nts: Vec<&'a str>,
}

fn segment(word: &[Symbol]) -> Segments<'_> {
    let mut strings = Vec::new();
    let mut nts = Vec::new();
    let mut start = 0;
    for (i, s) in word.iter().enumerate() {
        if let Symbol::Nonterminal(n) = s {
            strings.push(&word[start..i]);
            nts.push(n.as_str());
            start = i + 1;
        }
    }
    strings.push(&word[start..]);
    Segments { strings, nts }
}

fn concat(tokens: &[Symbol]) -> String {
    tokens.iter().map(Symbol::name).collect()
}

/// Shape of `rule` under `cls`, or `None` if it still needs decomposing.
pub fn rule_shape(rule: &Rule, cls: &NtClassification) -> Option<RuleShape> {
    let seg = segment(&rule.word);
    let s = |i: usize| concat(seg.strings[i]);
    match seg.nts.as_slice() {
        [] => Some(RuleShape::Terminal { exponent: s(0) }),
        [x] if cls.is_restricted(x) && seg.strings[0].is_empty() => Some(RuleShape::LeftRestricted {
            y: x.to_string(),
            exponent: s(1),
        }),
        [x] if cls.is_free(x) && seg.strings[1].is_empty() => Some(RuleShape::RightFree {
            exponent: s(0),
            x: x.to_string(),
        }),
        [y, x]
            if cls.is_free(y)
                && cls.is_free(x)
                && seg.strings[0].is_empty()
                && seg.strings[2].is_empty() =>
        {
            Some(RuleShape::TwoHandedFree {
                y: y.to_string(),
                exponent: s(1),
                x: x.to_string(),
            })
        }
        _ => None,
    }
}

struct Decomposer<'a> {
    cls: &'a NtClassification,
    taken: BTreeSet<String>,
    out: Vec<Rule>,
    /// Chain nonterminals per (word, category), indexed by link position.
    chains: BTreeMap<(Vec<Symbol>, Category), BTreeMap<usize, String>>,
    wrappers: BTreeMap<String, String>,
    nix: Option<String>,
}

impl Decomposer<'_> {
    fn fresh(&mut self, base: &str) -> String {
        let n = fresh_name(base, &self.taken);
        self.taken.insert(n.clone());
        n
    }

    /// `X'` with the single rule `X' -> X # CX'`.
    fn wrapper(&mut self, x: &str) -> String {
        if let Some(w) = self.wrappers.get(x) {
            return w.clone();
        }
        let name = self.fresh(&format!("{x}'"));
        let cat = self.fresh(&format!("C{name}"));
        self.out
            .push(Rule::new(name.clone(), vec![Symbol::nt(x)], Category::new(cat)));
        self.wrappers.insert(x.to_string(), name.clone());
        name
    }

    /// `O'` with the single rule `O' -> # Cnix'`.
    fn nix(&mut self) -> String {
        if let Some(n) = &self.nix {
            return n.clone();
        }
        let name = self.fresh("O'");
        let cat = self.fresh("Cnix'");
        self.out.push(Rule::new(name.clone(), Vec::new(), Category::new(cat)));
        self.nix = Some(name.clone());
        name
    }

    /// The free nonterminal standing for `X` in a two-handed word.
    fn left_operand(&mut self, x: &str) -> String {
        if self.cls.is_restricted(x) {
            self.wrapper(x)
        } else {
            x.to_string()
        }
    }

    /// Word of link `i` (1-based): `Y_i s_i P_{i+1}` before the last
    /// nonterminal, `X_n s_n` or `X_n s_n O'` at it.
    fn content(&mut self, key: &(Vec<Symbol>, Category), producer: &str, i: usize) -> Vec<Symbol> {
        let seg = segment(&key.0);
        let n = seg.nts.len();
        let x = seg.nts[i - 1].to_string();
        let s: Vec<Symbol> = seg.strings[i].to_vec();
        let mut word = Vec::new();
        if i < n {
            word.push(Symbol::nt(self.left_operand(&x)));
            word.extend(s);
            word.push(self.link(key, producer, i + 1));
        } else if self.cls.is_restricted(&x) {
            word.push(Symbol::nt(x));
            word.extend(s);
        } else if s.is_empty() {
            word.push(Symbol::nt(x));
        } else {
            word.push(Symbol::nt(x));
            word.extend(s);
            word.push(Symbol::nt(self.nix()));
        }
        word
    }

    /// Symbol referring to link `i` from its predecessor.
    fn link(&mut self, key: &(Vec<Symbol>, Category), producer: &str, i: usize) -> Symbol {
        let seg = segment(&key.0);
        let n = seg.nts.len();
        if i == n && seg.strings[n].is_empty() {
            let x = seg.nts[n - 1].to_string();
            return Symbol::nt(self.left_operand(&x));
        }
        if let Some(name) = self.chains.get(key).and_then(|m| m.get(&i)) {
            return Symbol::nt(name.clone());
        }
        let name = self.fresh(&format!("{producer}'{i}"));
        let cat = self.fresh(&format!("C{name}"));
        self.chains
            .entry(key.clone())
            .or_default()
            .insert(i, name.clone());
        // Reserve the slot so the chain rule precedes its successors.
        let slot = self.out.len();
        self.out
            .push(Rule::new(name.clone(), Vec::new(), Category::new(cat)));
        let word = self.content(key, producer, i);
        self.out[slot].word = word;
        Symbol::nt(name)
    }

    fn rule(&mut self, r: &Rule) {
        if rule_shape(r, self.cls).is_some() {
            self.out.push(r.clone());
            return;
        }
        let key = (r.word.clone(), r.category.clone());
        let seg = segment(&r.word);
        let s0: Vec<Symbol> = seg.strings[0].to_vec();
        let slot = self.out.len();
        self.out
            .push(Rule::new(r.producer.clone(), Vec::new(), r.category.clone()));
        let word = if s0.is_empty() {
            self.content(&key, &r.producer, 1)
        } else {
            let mut w = s0;
            w.push(self.link(&key, &r.producer, 1));
            w
        };
        self.out[slot].word = word;
    }
}

/// Rewrites every rule into one of the shapes of [`RuleShape`]. Rules with
/// the same word and category share their auxiliary nonterminals, so they
/// keep identical decomposed words. Rules already in shape are kept as is.
pub fn decompose_rules(g: &Grammar, cls: &NtClassification) -> Result<Grammar> {
    let mut d = Decomposer {
        cls,
        taken: g.names(),
        out: Vec::with_capacity(g.rules().len() * 2),
        chains: BTreeMap::new(),
        wrappers: BTreeMap::new(),
        nix: None,
    };
    for r in g.rules() {
        d.rule(r);
    }
    Grammar::new(d.out, g.start())
}
