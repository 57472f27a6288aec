use serde::{Deserialize, Serialize};

use crate::mg::{DerivationTree, Expression, Feature, ItemClass, LexItem, MgLexicon, Op};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    /// The item fits the table row of its class.
    ItemShape,
    /// The mergee has no selectors and its category is the one selected.
    MergeCategory,
    /// The merger's licensors consume the mergee's leading licensees in order.
    LicensorPrefix,
    /// Across categories, the merger's licensors cover all mergee licensees.
    ExactBlock,
    /// An adapter leaves category and licensees of its mergee intact.
    AdapterChain,
    /// A word merges in one of the five known ways.
    WordMergeScenario,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditViolation {
    pub check: Check,
    /// The offending node's result, or the item.
    pub node: String,
    pub detail: String,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditContext {
    /// Enables the checks that only hold without category recursion.
    pub category_recursion_free: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    pub trees: usize,
    pub merges: usize,
    pub exact_block_checked: usize,
    pub exact_block_not_applicable: usize,
    pub adapter_merges: usize,
    pub word_merges: usize,
    pub violations: Vec<AuditViolation>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn count(&self, check: Check) -> usize {
        self.violations.iter().filter(|v| v.check == check).count()
    }
}

/// Table rows whose shape `item` fits, regardless of its declared class.
pub fn shape_rows(item: &LexItem) -> Vec<ItemClass> {
    let mut rows = Vec::new();
    if is_word_shape(item) {
        rows.push(ItemClass::Word);
    }
    if item.exponent.is_empty() {
        match item.features.as_slice() {
            [Feature::Selector(s), Feature::Licensor(_), Feature::Category(c)] if s == c => {
                rows.push(ItemClass::RemoveAdapter)
            }
            [Feature::Selector(s), Feature::Licensor(a), mid @ .., Feature::Category(c), Feature::Licensee(t)]
                if s == c && a == t && !mid.is_empty() && mid.iter().all(Feature::is_licensor) =>
            {
                rows.push(ItemClass::SelectAdapter)
            }
            _ => {}
        }
    }
    rows
}

/// Blocks, one category, then licensees; at most two blocks; one block
/// carries at most one licensor; two blocks carry none.
fn is_word_shape(item: &LexItem) -> bool {
    let f = &item.features;
    let Some(cat) = f.iter().position(Feature::is_category) else {
        return false;
    };
    if f[cat + 1..].iter().any(|x| !x.is_licensee()) {
        return false;
    }
    if f[..cat].first().is_some_and(|x| !x.is_selector())
        || f[..cat].iter().any(|x| x.is_category() || x.is_licensee())
    {
        return false;
    }
    let blocks = item.blocks();
    match blocks.len() {
        0 | 1 => blocks.iter().all(|(_, l)| l.len() <= 1),
        2 => blocks.iter().all(|(_, l)| l.is_empty()),
        _ => false,
    }
}

/// Every item must fit the row of its declared class.
pub fn audit_items(lex: &MgLexicon) -> Vec<AuditViolation> {
    lex.items
        .iter()
        .filter(|i| !shape_rows(i).contains(&i.item_class))
        .map(|i| AuditViolation {
            check: Check::ItemShape,
            node: i.render(),
            detail: format!("does not fit the {:?} row", i.item_class),
        })
        .collect()
}

/// Licensee tags still pending on an expression that has just lost its
/// category: the head's, then each mover's.
fn effective_licensees(e: &Expression) -> Vec<&str> {
    e.head.features[1..]
        .iter()
        .chain(e.movers.iter().flat_map(|m| m.features.iter()))
        .filter(|f| f.is_licensee())
        .map(Feature::name)
        .collect()
}

/// Whether the licensors can be checked one after another against the
/// leading licensees of the mergee's chains.
fn licensors_match(e: &Expression, licensors: &[&str]) -> bool {
    let mut chains: Vec<&[Feature]> = std::iter::once(&e.head.features[1..])
        .chain(e.movers.iter().map(|m| m.features.as_slice()))
        .collect();
    licensors.iter().all(|a| {
        match chains
            .iter_mut()
            .find(|c| matches!(c.first(), Some(Feature::Licensee(t)) if &**t == *a))
        {
            Some(c) => {
                *c = &c[1..];
                true
            }
            None => false,
        }
    })
}

fn head_item(t: &DerivationTree) -> Option<usize> {
    match t.op {
        Op::Lex => t.item,
        _ => t.children.first().and_then(head_item),
    }
}

fn category_of(e: &Expression) -> Option<&str> {
    e.head.features.iter().find(|f| f.is_category()).map(Feature::name)
}

struct Auditor<'a> {
    lex: &'a MgLexicon,
    ctx: AuditContext,
    report: AuditReport,
}

impl<'a> Auditor<'a> {
    fn violation(&mut self, check: Check, node: &Expression, detail: String) {
        self.report.violations.push(AuditViolation {
            check,
            node: node.to_string(),
            detail,
        });
    }

    fn visit(&mut self, t: &'a DerivationTree, path: &mut Vec<&'a DerivationTree>) {
        if t.op.is_merge() && t.children.len() == 2 {
            self.merge(t, path);
        }
        path.push(t);
        for c in &t.children {
            self.visit(c, path);
        }
        path.pop();
    }

    fn merge(&mut self, t: &DerivationTree, path: &[&DerivationTree]) {
        self.report.merges += 1;
        let f = &t.children[0].result;
        let x = &t.children[1].result;
        let Some(Feature::Selector(sel)) = f.head.features.first() else {
            self.violation(Check::MergeCategory, &t.result, "merger has no leading selector".into());
            return;
        };
        let licensors: Vec<&str> = f.head.features[1..]
            .iter()
            .take_while(|x| x.is_licensor())
            .map(Feature::name)
            .collect();
        let x_cat = match x.head.features.first() {
            Some(Feature::Category(c)) => c,
            _ => {
                self.violation(Check::MergeCategory, &t.result, "mergee does not start with its category".into());
                return;
            }
        };
        if x_cat != sel {
            self.violation(Check::MergeCategory, &t.result, format!("selects {sel}, mergee is {x_cat}"));
        }
        let pending = effective_licensees(x);
        if !licensors_match(x, &licensors) {
            self.violation(
                Check::LicensorPrefix,
                &t.result,
                format!("licensors {licensors:?} vs licensees {pending:?}"),
            );
        }
        let f_cat = category_of(f);
        if self.ctx.category_recursion_free && f_cat != Some(&**x_cat) {
            self.report.exact_block_checked += 1;
            if pending.len() != licensors.len() {
                self.violation(
                    Check::ExactBlock,
                    &t.result,
                    format!("{} licensors for {} licensees", licensors.len(), pending.len()),
                );
            }
        } else {
            self.report.exact_block_not_applicable += 1;
        }

        let class = head_item(&t.children[0]).and_then(|i| self.lex.items.get(i)).map(|i| i.item_class);
        match class {
            Some(ItemClass::RemoveAdapter | ItemClass::SelectAdapter) => {
                self.report.adapter_merges += 1;
                self.adapter_chain(t, path, licensors.len());
            }
            Some(ItemClass::Word) if self.ctx.category_recursion_free => {
                self.report.word_merges += 1;
                self.word_scenario(t, path.last().copied());
            }
            _ => {}
        }
    }

    /// Follows the moves triggered by an adapter's licensors and compares
    /// the outcome with the mergee.
    fn adapter_chain(&mut self, t: &DerivationTree, path: &[&DerivationTree], licensors: usize) {
        let moves: Vec<&DerivationTree> = path
            .iter()
            .rev()
            .take(licensors)
            .take_while(|n| n.op.is_move())
            .copied()
            .collect();
        let top = moves.last().copied().unwrap_or(t);
        let x = &t.children[1].result;
        let mut before = effective_licensees(x);
        let after = effective_licensees(&top.result);
        let contained = after.iter().all(|a| match before.iter().position(|b| b == a) {
            Some(i) => {
                before.swap_remove(i);
                true
            }
            None => false,
        });
        if moves.len() != licensors || category_of(&top.result) != category_of(x) || !contained {
            self.violation(
                Check::AdapterChain,
                &top.result,
                format!("adapted {x} into {}", top.result),
            );
        }
    }

    fn word_scenario(&mut self, t: &DerivationTree, parent: Option<&DerivationTree>) {
        let f = &t.children[0].result;
        let x = &t.children[1].result;
        let ff = &f.head.features;
        let xf = &x.head.features;
        let parent_move1 = parent.is_some_and(|p| p.op == Op::Move1);
        let no_movers = f.movers.is_empty() && x.movers.is_empty();
        let ok = match (t.op, ff.get(1), f.head.lexical) {
            // right-free, first half of two-handed
            (Op::Merge1, Some(Feature::Category(_) | Feature::Selector(_)), true) => xf.len() == 1 && no_movers,
            // second half of two-handed
            (Op::Merge2, Some(Feature::Category(_)), false) => xf.len() == 1 && no_movers,
            // left-restricted on a lexical or derived mergee
            (Op::Merge3, Some(Feature::Licensor(a)), true) => {
                matches!(xf.as_slice(), [_, Feature::Licensee(t)] if t == a) && no_movers && parent_move1
            }
            // left-restricted on an adapted mergee
            (Op::Merge1, Some(Feature::Licensor(a)), true) => {
                xf.len() == 1
                    && x.head.exponent.is_empty()
                    && f.movers.is_empty()
                    && matches!(x.movers.as_slice(), [m] if matches!(m.features.as_slice(), [Feature::Licensee(t)] if t == a))
                    && parent_move1
            }
            _ => false,
        };
        if !ok {
            self.violation(
                Check::WordMergeScenario,
                &t.result,
                format!("{} of {f} with {x}", t.op),
            );
        }
    }
}

/// Audits every merge in `trees`.
pub fn audit_trees<'a>(
    trees: impl IntoIterator<Item = &'a DerivationTree>,
    lex: &MgLexicon,
    ctx: AuditContext,
) -> AuditReport {
    let mut a = Auditor {
        lex,
        ctx,
        report: AuditReport::default(),
    };
    for t in trees {
        a.report.trees += 1;
        a.visit(t, &mut Vec::new());
    }
    a.report
}
