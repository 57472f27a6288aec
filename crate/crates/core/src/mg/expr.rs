use std::fmt;

use serde::{Deserialize, Serialize};

use super::feature::Feature;

/// One part of an expression: an exponent with its remaining features.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ChainItem {
    pub exponent: String,
    pub features: Vec<Feature>,
    /// `::` when true, `:` otherwise.
    pub lexical: bool,
}

impl ChainItem {
    pub fn new(exponent: impl Into<String>, features: Vec<Feature>, lexical: bool) -> Self {
        ChainItem {
            exponent: exponent.into(),
            features,
            lexical,
        }
    }

    pub fn leading(&self) -> Option<&Feature> {
        self.features.first()
    }
}

impl fmt::Display for ChainItem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let exp = if self.exponent.is_empty() { "ε" } else { &self.exponent };
        let sep = if self.lexical { "::" } else { ":" };
        let feats: Vec<String> = self.features.iter().map(ToString::to_string).collect();
        write!(f, "⟨{exp} {sep} {}⟩", feats.join(", "))
    }
}

/// A head item plus the movers it carries.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Expression {
    pub head: ChainItem,
    pub movers: Vec<ChainItem>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MergeKind {
    #[serde(rename = "merge-1")]
    Merge1,
    #[serde(rename = "merge-2")]
    Merge2,
    #[serde(rename = "merge-3")]
    Merge3,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MoveKind {
    #[serde(rename = "move-1")]
    Move1,
    #[serde(rename = "move-2")]
    Move2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum OpError {
    #[error("no merge applies")]
    NotApplicable,
    #[error("two movers would share a leading licensee")]
    ShortestMove,
    #[error("head does not start with a licensor")]
    NoLicensor,
    #[error("no mover carries the matching licensee")]
    DeadEnd,
}

impl Expression {
    pub fn lexical(exponent: impl Into<String>, features: Vec<Feature>) -> Self {
        Expression {
            head: ChainItem::new(exponent, features, true),
            movers: Vec::new(),
        }
    }

    /// Number of features across the head and all movers.
    pub fn feature_count(&self) -> usize {
        self.head.features.len() + self.movers.iter().map(|m| m.features.len()).sum::<usize>()
    }

    /// Characters across every exponent.
    pub fn exponent_len(&self) -> usize {
        self.head.exponent.chars().count()
            + self
                .movers
                .iter()
                .map(|m| m.exponent.chars().count())
                .sum::<usize>()
    }

    /// The same expression with movers in canonical order.
    pub fn canonical(&self) -> Expression {
        let mut movers = self.movers.clone();
        movers.sort();
        Expression {
            head: self.head.clone(),
            movers,
        }
    }

    /// True iff no two movers begin with the same licensee.
    pub fn satisfies_smc(&self) -> bool {
        smc_ok(&self.movers)
    }
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.head)?;
        for m in &self.movers {
            write!(f, ", {m}")?;
        }
        Ok(())
    }
}

fn smc_ok(movers: &[ChainItem]) -> bool {
    let mut seen: Vec<&Feature> = Vec::with_capacity(movers.len());
    for m in movers {
        if let Some(l) = m.leading() {
            if seen.contains(&l) {
                return false;
            }
            seen.push(l);
        }
    }
    true
}

/// Which merge, if any, combines merger `f` with mergee `x`.
pub fn applicable_merge(f: &Expression, x: &Expression) -> Option<MergeKind> {
    merge(f, x).ok().map(|(_, k)| k)
}

fn merge_kind(f: &Expression, x: &Expression) -> Option<MergeKind> {
    let Some(Feature::Selector(sel)) = f.head.leading() else {
        return None;
    };
    let Some(Feature::Category(cat)) = x.head.leading() else {
        return None;
    };
    if sel != cat {
        return None;
    }
    Some(match (x.head.features.len(), f.head.lexical) {
        (1, true) => MergeKind::Merge1,
        (1, false) => MergeKind::Merge2,
        _ => MergeKind::Merge3,
    })
}

pub fn merge(f: &Expression, x: &Expression) -> Result<(Expression, MergeKind), OpError> {
    let kind = merge_kind(f, x).ok_or(OpError::NotApplicable)?;
    let rest = f.head.features[1..].to_vec();
    let mut movers = f.movers.clone();
    movers.extend(x.movers.iter().cloned());
    let exponent = match kind {
        MergeKind::Merge1 => format!("{}{}", f.head.exponent, x.head.exponent),
        MergeKind::Merge2 => format!("{}{}", x.head.exponent, f.head.exponent),
        MergeKind::Merge3 => {
            movers.push(ChainItem::new(
                x.head.exponent.clone(),
                x.head.features[1..].to_vec(),
                false,
            ));
            f.head.exponent.clone()
        }
    };
    if !smc_ok(&movers) {
        return Err(OpError::ShortestMove);
    }
    Ok((
        Expression {
            head: ChainItem::new(exponent, rest, false),
            movers,
        },
        kind,
    ))
}

/// Applies move to `e`. The mover is found by its leading licensee.
pub fn apply_move(e: &Expression) -> Result<(Expression, MoveKind), OpError> {
    let Some(Feature::Licensor(lic)) = e.head.leading() else {
        return Err(OpError::NoLicensor);
    };
    let idx = e
        .movers
        .iter()
        .position(|m| matches!(m.leading(), Some(Feature::Licensee(n)) if n == lic))
        .ok_or(OpError::DeadEnd)?;
    let mover = &e.movers[idx];
    let mut movers = e.movers.clone();
    let rest = e.head.features[1..].to_vec();
    if mover.features.len() == 1 {
        movers.remove(idx);
        let exponent = format!("{}{}", mover.exponent, e.head.exponent);
        return Ok((
            Expression {
                head: ChainItem::new(exponent, rest, false),
                movers,
            },
            MoveKind::Move1,
        ));
    }
    movers[idx].features.remove(0);
    movers[idx].lexical = false;
    if !smc_ok(&movers) {
        return Err(OpError::ShortestMove);
    }
    Ok((
        Expression {
            head: ChainItem::new(e.head.exponent.clone(), rest, false),
            movers,
        },
        MoveKind::Move2,
    ))
}

/// No movers and exactly the final category left on the head.
pub fn is_complete(e: &Expression, final_category: &str) -> bool {
    e.movers.is_empty()
        && matches!(e.head.features.as_slice(), [Feature::Category(c)] if &**c == final_category)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn feats(s: &str) -> Vec<Feature> {
        s.split_whitespace().map(|t| t.parse().unwrap()).collect()
    }

    fn lex(exp: &str, f: &str) -> Expression {
        Expression::lexical(exp, feats(f))
    }

    fn derived(exp: &str, f: &str, movers: &[(&str, &str)]) -> Expression {
        Expression {
            head: ChainItem::new(exp, feats(f), false),
            movers: movers
                .iter()
                .map(|(e, f)| ChainItem::new(*e, feats(f), false))
                .collect(),
        }
    }

    #[test]
    fn right_free_merge_is_merge1() {
        let f = lex("peter_eats_", "=CFood CSentence");
        let x = lex("apples", "CFood");
        assert_eq!(applicable_merge(&f, &x), Some(MergeKind::Merge1));
        let (e, _) = merge(&f, &x).unwrap();
        assert_eq!(e, derived("peter_eats_apples", "CSentence", &[]));
    }

    #[test]
    fn derived_merger_is_merge2() {
        let f = derived("_eats_apples", "=CPerson CSentence", &[]);
        let x = lex("peter", "CPerson");
        assert_eq!(applicable_merge(&f, &x), Some(MergeKind::Merge2));
        let (e, _) = merge(&f, &x).unwrap();
        assert_eq!(e.head.exponent, "peter_eats_apples");
    }

    #[test]
    fn left_restricted_is_merge3_then_move1() {
        let f = lex("_eats_apples", "=CNoun +person CSentence");
        let x = lex("peter", "CNoun -person");
        assert_eq!(applicable_merge(&f, &x), Some(MergeKind::Merge3));
        let (e, _) = merge(&f, &x).unwrap();
        assert_eq!(
            e,
            derived("_eats_apples", "+person CSentence", &[("peter", "-person")])
        );
        let (e, k) = apply_move(&e).unwrap();
        assert_eq!(k, MoveKind::Move1);
        assert_eq!(e, derived("peter_eats_apples", "CSentence", &[]));
    }

    #[test]
    fn epsilon_mergee() {
        let f = lex("_eats_apples", "=Cnix =CPerson CSentence");
        let x = lex("", "Cnix");
        let (e, k) = merge(&f, &x).unwrap();
        assert_eq!(k, MergeKind::Merge1);
        assert_eq!(e, derived("_eats_apples", "=CPerson CSentence", &[]));
    }

    #[test]
    fn non_final_move() {
        let e = derived("zig", "+zi C2", &[("vier", "-zi -zeh -un")]);
        let (e, k) = apply_move(&e).unwrap();
        assert_eq!(k, MoveKind::Move2);
        assert_eq!(e, derived("zig", "C2", &[("vier", "-zeh -un")]));
    }

    #[test]
    fn move_without_licensor_fails() {
        assert_eq!(apply_move(&lex("a", "C")), Err(OpError::NoLicensor));
        let e = derived("", "+a C", &[("b", "-b")]);
        assert_eq!(apply_move(&e), Err(OpError::DeadEnd));
    }

    #[test]
    fn smc_blocks_merge() {
        let f = derived("", "=C C", &[("a", "-t")]);
        let x = lex("b", "C -t");
        assert_eq!(applicable_merge(&f, &x), None);
        assert_eq!(merge(&f, &x), Err(OpError::ShortestMove));
    }

    #[test]
    fn selector_mismatch() {
        assert_eq!(applicable_merge(&lex("a", "=C1 C"), &lex("b", "C2")), None);
        assert_eq!(applicable_merge(&lex("a", "C1"), &lex("b", "C1")), None);
    }

    #[test]
    fn completeness() {
        assert!(is_complete(&derived("peter_eats_apples", "CFin", &[]), "CFin"));
        assert!(is_complete(&lex("hello", "CFin"), "CFin"));
        assert!(!is_complete(&derived("vier", "C1 -zeh", &[]), "C1"));
        assert!(!is_complete(&derived("x", "CFin", &[("y", "-t")]), "CFin"));
    }

    #[test]
    fn display_uses_figure_notation() {
        let e = derived("", "+zi C1", &[("vier", "-zi -zeh")]);
        assert_eq!(e.to_string(), "⟨ε : +zi, C1⟩, ⟨vier : -zi, -zeh⟩");
    }
}
