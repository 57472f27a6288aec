use std::collections::BTreeSet;

use super::{Grammar, Rule, Symbol};
use crate::error::{Error, Result};

const START_PRAGMA: &str = "// start:";

struct RawRule<'a> {
    line: usize,
    producer: &'a str,
    tokens: Vec<&'a str>,
    category: &'a str,
}

/// Parses the line-oriented grammar format.
///
/// The start symbol is the producer of the first rule unless a
/// `// start: NAME` line says otherwise.
pub fn parse_cfg(text: &str) -> Result<Grammar> {
    let mut raw = Vec::new();
    let mut start: Option<String> = None;

    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix(START_PRAGMA) {
            start = Some(rest.trim().to_string());
            continue;
        }
        if line.starts_with("//") {
            continue;
        }
        let syntax = |message: &str| Error::Syntax {
            line: lineno,
            message: message.to_string(),
        };
        let (lhs, rhs) = line.split_once("->").ok_or_else(|| syntax("expected `->`"))?;
        let (word, category) = rhs
            .rsplit_once('#')
            .ok_or_else(|| syntax("expected `# Category`"))?;
        let producer = single_token(lhs).ok_or_else(|| syntax("left-hand side must be one token"))?;
        let category =
            single_token(category).ok_or_else(|| syntax("category must be one token"))?;
        raw.push(RawRule {
            line: lineno,
            producer,
            tokens: word.split_whitespace().collect(),
            category,
        });
    }

    let producers: BTreeSet<&str> = raw.iter().map(|r| r.producer).collect();
    let mut rules = Vec::with_capacity(raw.len());
    for r in &raw {
        if r.tokens.contains(&"->") {
            return Err(Error::Syntax {
                line: r.line,
                message: "more than one `->`".into(),
            });
        }
        let word = r
            .tokens
            .iter()
            .map(|t| {
                if producers.contains(t) {
                    Symbol::nt(*t)
                } else {
                    Symbol::t(*t)
                }
            })
            .collect();
        rules.push(Rule::new(r.producer, word, r.category));
    }

    let start = match start {
        Some(s) => s,
        None => raw.first().map(|r| r.producer.to_string()).ok_or(Error::NoStartRule)?,
    };
    Grammar::new(rules, start)
}

fn single_token(s: &str) -> Option<&str> {
    let mut it = s.split_whitespace();
    let tok = it.next()?;
    it.next().is_none().then_some(tok)
}
