//! Checks a compiled lexicon against its source grammar.
//!
//! [`compare_languages`] enumerates both languages and reports the strings
//! on only one side. [`audit_trees`] inspects derivations merge by merge, and
//! [`lexicon_stats`] counts items.

mod audit;
mod stats;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::cfg::{enumerate_cfg_language, is_category_recursion_free, is_recursion_free, CfgBounds, Grammar};
use crate::error::{BudgetExceeded, Error, Result};
use crate::mg::{enumerate_mg_language, DerivationTree, MgBounds, MgLexicon};

pub use audit::{
    audit_items, audit_trees, shape_rows, AuditContext, AuditReport, AuditViolation, Check,
};
pub use stats::{lexicon_stats, LexiconStats};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyBounds {
    /// Longest string compared when either side is length-bounded.
    pub max_len: usize,
    /// Chart budget for the MG side.
    pub max_items: usize,
    /// Derivation depth limit for a recursive CFG.
    pub max_steps: usize,
    /// Sentential-form budget for the CFG side.
    pub max_forms: usize,
}

impl Default for VerifyBounds {
    fn default() -> Self {
        VerifyBounds {
            max_len: 64,
            max_items: MgBounds::DEFAULT_MAX_ITEMS,
            max_steps: 10_000,
            max_forms: CfgBounds::DEFAULT_MAX_FORMS,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Equal,
    Overgeneration,
    Undergeneration,
    Incomplete,
}

impl Verdict {
    /// Process exit status for this verdict.
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Equal => 0,
            Verdict::Undergeneration => 1,
            Verdict::Overgeneration => 2,
            Verdict::Incomplete => 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub bounds: VerifyBounds,
    /// Longest string compared, or `None` when both languages were enumerated in full.
    pub window: Option<usize>,
    pub cfg_strings: usize,
    pub mg_strings: usize,
    /// Strings of the grammar the lexicon misses.
    pub cfg_only: BTreeSet<String>,
    /// Strings of the lexicon the grammar lacks, each with a derivation.
    pub mg_only: BTreeMap<String, DerivationTree>,
    pub equal: bool,
    pub guarantee_applicable: bool,
    pub cfg_complete: bool,
    pub mg_complete: bool,
}

impl EquivalenceReport {
    pub fn verdict(&self) -> Verdict {
        if !self.mg_only.is_empty() && self.cfg_complete {
            Verdict::Overgeneration
        } else if !self.cfg_complete || !self.mg_complete {
            Verdict::Incomplete
        } else if !self.cfg_only.is_empty() {
            Verdict::Undergeneration
        } else {
            Verdict::Equal
        }
    }

    pub fn exit_code(&self) -> i32 {
        self.verdict().exit_code()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        v["verdict"] = serde_json::to_value(self.verdict()).unwrap();
        v
    }

    /// Human-readable summary.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        let plural = |n: usize| if n == 1 { "" } else { "s" };
        let _ = match self.verdict() {
            Verdict::Equal => writeln!(out, "EQUAL ({} string{})", self.cfg_strings, plural(self.cfg_strings)),
            Verdict::Overgeneration => writeln!(out, "OVERGENERATION ({} extra string{})", self.mg_only.len(), plural(self.mg_only.len())),
            Verdict::Undergeneration => writeln!(out, "UNDERGENERATION ({} missing string{})", self.cfg_only.len(), plural(self.cfg_only.len())),
            Verdict::Incomplete => writeln!(out, "INCOMPLETE (a budget was exhausted)"),
        };
        let window = self
            .window
            .map_or("all strings".to_string(), |n| format!("strings up to {n} chars"));
        let _ = writeln!(out, "  compared        {window}");
        let _ = writeln!(out, "  cfg strings     {}{}", self.cfg_strings, if self.cfg_complete { "" } else { " (partial)" });
        let _ = writeln!(out, "  mg strings      {}{}", self.mg_strings, if self.mg_complete { "" } else { " (partial)" });
        let _ = writeln!(out, "  cfg only        {}", self.cfg_only.len());
        let _ = writeln!(out, "  mg only         {}", self.mg_only.len());
        let _ = writeln!(out, "  guarantee       {}", if self.guarantee_applicable { "applies" } else { "does not apply" });
        for s in self.cfg_only.iter().take(10) {
            let _ = writeln!(out, "  missing: {s}");
        }
        for (s, t) in self.mg_only.iter().take(10) {
            let _ = writeln!(out, "  witness: {s}");
            for line in t.render().lines() {
                let _ = writeln!(out, "    {line}");
            }
        }
        out
    }
}

fn unwrap_budget<T>(r: std::result::Result<T, BudgetExceeded<T>>) -> (T, bool) {
    match r {
        Ok(v) => (v, true),
        Err(e) => (e.partial, false),
    }
}

/// Enumerates the grammar and the lexicon and compares their languages.
///
/// A recursion-free grammar is enumerated in full; otherwise strings are
/// limited to `max_len` characters. The lexicon is enumerated in full only
/// when the grammar is category-recursion-free. Unless both sides are
/// complete, only strings up to `max_len` characters are compared.
pub fn compare_languages(
    cfg: &Grammar,
    lexicon: &MgLexicon,
    bounds: VerifyBounds,
) -> Result<EquivalenceReport> {
    let digest = cfg.digest();
    if let Some(found) = &lexicon.source_digest {
        if *found != digest {
            return Err(Error::ProvenanceMismatch {
                expected: digest,
                found: found.clone(),
            });
        }
    }
    let guarantee_applicable = is_category_recursion_free(cfg);
    let cfg_unbounded = is_recursion_free(cfg);
    let cfg_bounds = CfgBounds {
        max_len: (!cfg_unbounded).then_some(bounds.max_len),
        max_steps: (!cfg_unbounded).then_some(bounds.max_steps),
        max_forms: bounds.max_forms,
    };
    let mg_bounds = MgBounds {
        max_items: bounds.max_items,
        max_len: (!guarantee_applicable).then_some(bounds.max_len),
        target: None,
    };
    let (cfg_lang, cfg_complete) = unwrap_budget(enumerate_cfg_language(cfg, cfg_bounds));
    let (mg_lang, mg_complete) = unwrap_budget(enumerate_mg_language(lexicon, &mg_bounds));

    let window = (!(cfg_unbounded && guarantee_applicable)).then_some(bounds.max_len);
    let fits = |s: &str| window.is_none_or(|n| s.chars().count() <= n);
    let cfg_set: BTreeSet<&str> = cfg_lang.iter().map(String::as_str).filter(|s| fits(s)).collect();
    let mg_set: BTreeSet<&str> = mg_lang.strings.keys().map(String::as_str).filter(|s| fits(s)).collect();

    let cfg_only: BTreeSet<String> = cfg_set.difference(&mg_set).map(|s| s.to_string()).collect();
    let mg_only: BTreeMap<String, DerivationTree> = mg_set
        .difference(&cfg_set)
        .map(|s| (s.to_string(), mg_lang.strings[*s].clone()))
        .collect();
    Ok(EquivalenceReport {
        bounds,
        window,
        cfg_strings: cfg_set.len(),
        mg_strings: mg_set.len(),
        equal: cfg_only.is_empty() && mg_only.is_empty(),
        cfg_only,
        mg_only,
        guarantee_applicable,
        cfg_complete,
        mg_complete,
    })
}
