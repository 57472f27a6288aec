//! Compile context-free grammars with categories into Minimalist Grammars,
//! run the resulting lexica, and check the two languages against each other.
//!
//! The usual entry points are [`cfg::parse_cfg`], [`transform::compile`],
//! [`mg::enumerate_mg_language`] and [`verify::compare_languages`].

pub mod cfg;
pub mod corpus;
pub mod error;
pub mod mg;
pub mod transform;
pub mod verify;

pub use cfg::{parse_cfg, Category, Grammar, Rule, Symbol};
pub use error::{BudgetExceeded, Error, Result};
pub use mg::{Expression, Feature, LexItem, MgLexicon};
pub use transform::{compile, Compilation, PipelineReport};
pub use verify::{compare_languages, EquivalenceReport, VerifyBounds};


