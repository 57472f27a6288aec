use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::{Category, Grammar};

/// Nonterminals reachable from each nonterminal in one or more rule applications.
pub fn reachability(g: &Grammar) -> BTreeMap<String, BTreeSet<String>> {
    let mut direct: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    for r in g.rules() {
        direct
            .entry(r.producer.as_str())
            .or_default()
            .extend(r.nonterminals());
    }
    let mut out = BTreeMap::new();
    for &nt in direct.keys() {
        let mut seen: BTreeSet<String> = BTreeSet::new();
        let mut stack: Vec<&str> = direct[nt].iter().copied().collect();
        while let Some(n) = stack.pop() {
            if seen.insert(n.to_string()) {
                if let Some(next) = direct.get(n) {
                    stack.extend(next.iter().copied());
                }
            }
        }
        out.insert(nt.to_string(), seen);
    }
    out
}

/// No nonterminal can derive a sentential form containing itself.
pub fn is_recursion_free(g: &Grammar) -> bool {
    reachability(g).iter().all(|(nt, reach)| !reach.contains(nt))
}

/// Recursion-free and the category order is strict.
pub fn is_category_recursion_free(g: &Grammar) -> bool {
    is_recursion_free(g) && compute_category_order(g).strict
}

/// The relation `C ≻ C'` between categories: some rule of category `C` derives
/// a sentential form containing a producer of a `C'` rule. An occurrence in the
/// rule's own word counts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategoryOrder {
    pub relation: BTreeSet<(Category, Category)>,
    pub strict: bool,
}

impl CategoryOrder {
    fn successors(&self) -> BTreeMap<&Category, BTreeSet<&Category>> {
        let mut succ: BTreeMap<&Category, BTreeSet<&Category>> = BTreeMap::new();
        for (a, b) in &self.relation {
            succ.entry(a).or_default().insert(b);
            succ.entry(b).or_default();
        }
        succ
    }

    /// Transitive closure of the relation.
    pub fn closure(&self) -> BTreeSet<(Category, Category)> {
        let succ = self.successors();
        let mut out = BTreeSet::new();
        for &from in succ.keys() {
            let mut stack: Vec<&Category> = succ[from].iter().copied().collect();
            let mut seen = BTreeSet::new();
            while let Some(c) = stack.pop() {
                if seen.insert(c) {
                    out.insert((from.clone(), c.clone()));
                    stack.extend(succ[c].iter().copied());
                }
            }
        }
        out
    }

    /// Orders `categories` from lowest to highest so that every pair of the
    /// relation goes from a later to an earlier position. Ties are broken by
    /// name; members of a cycle are released in name order when nothing else
    /// is available.
    pub fn linear_extension<'a>(
        &'a self,
        categories: impl IntoIterator<Item = &'a Category>,
    ) -> Vec<Category> {
        let nodes: BTreeSet<&Category> = categories
            .into_iter()
            .chain(self.relation.iter().flat_map(|(a, b)| [a, b]))
            .collect();
        // `a ≻ b` means b must come before a: count the pending lower neighbours.
        let mut pending: BTreeMap<&Category, usize> = nodes.iter().map(|c| (*c, 0)).collect();
        let mut uppers: BTreeMap<&Category, Vec<&Category>> = BTreeMap::new();
        for (a, b) in &self.relation {
            if a != b {
                *pending.get_mut(a).unwrap() += 1;
                uppers.entry(b).or_default().push(a);
            }
        }
        let mut placed: BTreeSet<&Category> = BTreeSet::new();
        let mut order = Vec::with_capacity(nodes.len());
        while order.len() < nodes.len() {
            let next = pending
                .iter()
                .find(|(c, n)| **n == 0 && !placed.contains(*c))
                .or_else(|| pending.iter().find(|(c, _)| !placed.contains(*c)))
                .map(|(c, _)| *c)
                .expect("unplaced node");
            placed.insert(next);
            order.push(next.clone());
            pending.insert(next, usize::MAX);
            for up in uppers.get(next).into_iter().flatten() {
                if let Some(n) = pending.get_mut(up) {
                    if *n != usize::MAX && *n > 0 {
                        *n -= 1;
                    }
                }
            }
        }
        order
    }
}

pub fn compute_category_order(g: &Grammar) -> CategoryOrder {
    let reach = reachability(g);
    let cats = g.category_map();
    let mut relation = BTreeSet::new();
    for r in g.rules() {
        let mut below: BTreeSet<&str> = BTreeSet::new();
        for nt in r.nonterminals() {
            below.insert(nt);
            if let Some(more) = reach.get(nt) {
                below.extend(more.iter().map(String::as_str));
            }
        }
        for nt in below {
            for c in cats.get(nt).into_iter().flatten() {
                relation.insert((r.category.clone(), (*c).clone()));
            }
        }
    }
    let strict = is_acyclic(&relation);
    CategoryOrder { relation, strict }
}

fn is_acyclic(relation: &BTreeSet<(Category, Category)>) -> bool {
    let mut indegree: BTreeMap<&Category, usize> = BTreeMap::new();
    let mut succ: BTreeMap<&Category, Vec<&Category>> = BTreeMap::new();
    for (a, b) in relation {
        indegree.entry(a).or_insert(0);
        *indegree.entry(b).or_insert(0) += 1;
        succ.entry(a).or_default().push(b);
    }
    let mut queue: VecDeque<&Category> = indegree
        .iter()
        .filter(|(_, d)| **d == 0)
        .map(|(c, _)| *c)
        .collect();
    let mut done = 0;
    while let Some(c) = queue.pop_front() {
        done += 1;
        for n in succ.get(c).into_iter().flatten() {
            let d = indegree.get_mut(n).unwrap();
            *d -= 1;
            if *d == 0 {
                queue.push_back(n);
            }
        }
    }
    done == indegree.len()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NtClass {
    Free,
    Restricted,
}

/// Free/restricted status and target category of every nonterminal.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct NtClassification {
    pub class: BTreeMap<String, NtClass>,
    pub target: BTreeMap<String, Category>,
}

impl NtClassification {
    pub fn is_restricted(&self, nt: &str) -> bool {
        self.class.get(nt) == Some(&NtClass::Restricted)
    }

    pub fn is_free(&self, nt: &str) -> bool {
        self.class.get(nt) == Some(&NtClass::Free)
    }

    pub fn target(&self, nt: &str) -> Option<&Category> {
        self.target.get(nt)
    }

    pub fn restricted(&self) -> impl Iterator<Item = &str> {
        self.class
            .iter()
            .filter(|(_, c)| **c == NtClass::Restricted)
            .map(|(n, _)| n.as_str())
    }
}
