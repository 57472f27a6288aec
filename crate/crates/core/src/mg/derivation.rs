use std::fmt;

use serde::{Deserialize, Serialize};

use super::expr::{apply_move, merge, Expression, MergeKind, MoveKind, OpError};
use super::lexicon::MgLexicon;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Op {
    #[serde(rename = "lex")]
    Lex,
    #[serde(rename = "merge-1")]
    Merge1,
    #[serde(rename = "merge-2")]
    Merge2,
    #[serde(rename = "merge-3")]
    Merge3,
    #[serde(rename = "move-1")]
    Move1,
    #[serde(rename = "move-2")]
    Move2,
}

impl Op {
    pub fn label(self) -> &'static str {
        match self {
            Op::Lex => "lex",
            Op::Merge1 => "merge-1",
            Op::Merge2 => "merge-2",
            Op::Merge3 => "merge-3",
            Op::Move1 => "move-1",
            Op::Move2 => "move-2",
        }
    }

    pub fn is_merge(self) -> bool {
        matches!(self, Op::Merge1 | Op::Merge2 | Op::Merge3)
    }

    pub fn is_move(self) -> bool {
        matches!(self, Op::Move1 | Op::Move2)
    }
}

impl From<MergeKind> for Op {
    fn from(k: MergeKind) -> Self {
        match k {
            MergeKind::Merge1 => Op::Merge1,
            MergeKind::Merge2 => Op::Merge2,
            MergeKind::Merge3 => Op::Merge3,
        }
    }
}

impl From<MoveKind> for Op {
    fn from(k: MoveKind) -> Self {
        match k {
            MoveKind::Move1 => Op::Move1,
            MoveKind::Move2 => Op::Move2,
        }
    }
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// A derivation: leaves are lexical items, merges have the merger then the
/// mergee as children, moves have one child.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivationTree {
    pub op: Op,
    pub result: Expression,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<DerivationTree>,
    /// Index of the lexical item, for leaves.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub item: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReplayError {
    #[error("leaf refers to item {0}, which is not in the lexicon")]
    UnknownItem(usize),
    #[error("leaf does not match item {0}")]
    LeafMismatch(usize),
    #[error("{op} failed: {err}")]
    Operation { op: Op, err: OpError },
    #[error("{0} produced a different operation or result than recorded")]
    Mismatch(Op),
    #[error("node has the wrong number of children")]
    Arity,
}

impl DerivationTree {
    pub fn leaf(item: usize, result: Expression) -> Self {
        DerivationTree {
            op: Op::Lex,
            result,
            children: Vec::new(),
            item: Some(item),
        }
    }

    /// Operation labels in post-order, leaves excluded.
    pub fn operations(&self) -> Vec<Op> {
        let mut out = Vec::new();
        self.walk_post(&mut |t| {
            if t.op != Op::Lex {
                out.push(t.op);
            }
        });
        out
    }

    /// Lexical item indices at the leaves, left to right.
    pub fn leaves(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.walk_post(&mut |t| out.extend(t.item));
        out
    }

    pub fn size(&self) -> usize {
        1 + self.children.iter().map(DerivationTree::size).sum::<usize>()
    }

    fn walk_post<'a>(&'a self, visit: &mut impl FnMut(&'a DerivationTree)) {
        for c in &self.children {
            c.walk_post(visit);
        }
        visit(self);
    }

    /// Visits every node, children first.
    pub fn for_each<'a>(&'a self, mut visit: impl FnMut(&'a DerivationTree)) {
        self.walk_post(&mut visit);
    }

    /// Re-executes the derivation against `lex` and returns its result.
    pub fn replay(&self, lex: &MgLexicon) -> Result<Expression, ReplayError> {
        let got = match (self.op, self.children.as_slice()) {
            (Op::Lex, []) => {
                let idx = self.item.ok_or(ReplayError::Arity)?;
                let item = lex.items.get(idx).ok_or(ReplayError::UnknownItem(idx))?;
                let e = item.expression();
                if e != self.result {
                    return Err(ReplayError::LeafMismatch(idx));
                }
                e
            }
            (op, [f, x]) if op.is_merge() => {
                let (e, k) = merge(&f.replay(lex)?, &x.replay(lex)?)
                    .map_err(|err| ReplayError::Operation { op, err })?;
                if Op::from(k) != op {
                    return Err(ReplayError::Mismatch(op));
                }
                e
            }
            (op, [c]) if op.is_move() => {
                let (e, k) =
                    apply_move(&c.replay(lex)?).map_err(|err| ReplayError::Operation { op, err })?;
                if Op::from(k) != op {
                    return Err(ReplayError::Mismatch(op));
                }
                e
            }
            _ => return Err(ReplayError::Arity),
        };
        if got != self.result {
            return Err(ReplayError::Mismatch(self.op));
        }
        Ok(got)
    }

    /// Indented rendering, one node per line.
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.render_into(0, &mut out);
        out
    }

    fn render_into(&self, depth: usize, out: &mut String) {
        out.push_str(&"  ".repeat(depth));
        out.push_str(self.op.label());
        out.push(' ');
        out.push_str(&self.result.to_string());
        out.push('\n');
        for c in &self.children {
            c.render_into(depth + 1, out);
        }
    }
}

pub fn render_tree(t: &DerivationTree) -> String {
    t.render()
}

impl fmt::Display for DerivationTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mg::lexicon::MgLexicon;

    fn peter() -> (MgLexicon, DerivationTree) {
        let lex = MgLexicon::parse("peter_eats_ :: =CFood CFin\napples :: CFood\n").unwrap();
        let f = DerivationTree::leaf(0, lex.items[0].expression());
        let x = DerivationTree::leaf(1, lex.items[1].expression());
        let (e, _) = merge(&f.result, &x.result).unwrap();
        let t = DerivationTree {
            op: Op::Merge1,
            result: e,
            children: vec![f, x],
            item: None,
        };
        (lex, t)
    }

    #[test]
    fn render_single_leaf() {
        let lex = MgLexicon::parse("hello :: CFin").unwrap();
        let t = DerivationTree::leaf(0, lex.items[0].expression());
        assert_eq!(t.render(), "lex ⟨hello :: CFin⟩\n");
    }

    #[test]
    fn render_and_replay() {
        let (lex, t) = peter();
        assert_eq!(
            t.render(),
            "merge-1 ⟨peter_eats_apples : CFin⟩\n  lex ⟨peter_eats_ :: =CFood, CFin⟩\n  lex ⟨apples :: CFood⟩\n"
        );
        assert_eq!(t.operations(), [Op::Merge1]);
        assert_eq!(t.leaves(), [0, 1]);
        assert_eq!(t.replay(&lex).unwrap(), t.result);
    }

    #[test]
    fn replay_detects_forgery() {
        let (lex, mut t) = peter();
        t.result.head.exponent = "applespeter_eats_".into();
        assert_eq!(t.replay(&lex), Err(ReplayError::Mismatch(Op::Merge1)));
        let (lex, mut t) = peter();
        t.op = Op::Merge2;
        assert_eq!(t.replay(&lex), Err(ReplayError::Mismatch(Op::Merge2)));
        t.children.pop();
        assert_eq!(t.replay(&lex), Err(ReplayError::Arity));
    }

    #[test]
    fn json_round_trip() {
        let (_, t) = peter();
        let v = serde_json::to_value(&t).unwrap();
        assert_eq!(v["op"], "merge-1");
        assert_eq!(serde_json::from_value::<DerivationTree>(v).unwrap(), t);
    }
}
