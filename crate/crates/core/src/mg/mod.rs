//! Minimalist Grammar expressions, the merge and move operations, and a
//! chart-based enumerator for the language of a lexicon.
//!
//! Two conventions beyond the textbook rules: no two movers of an expression
//! may begin with the same licensee, and an expression whose head starts with
//! a licensor is only ever moved.

mod chart;
mod derivation;
mod expr;
mod feature;
mod lexicon;

pub use chart::{derive, enumerate_mg_language, MgBounds, MgLanguage};
pub use derivation::{render_tree, DerivationTree, Op, ReplayError};
pub use expr::{
    applicable_merge, apply_move, is_complete, merge, ChainItem, Expression, MergeKind, MoveKind,
    OpError,
};
pub use feature::{render_features, Feature, FeatureParseError};
pub use lexicon::{ItemClass, LexItem, MgLexicon, Origin};
