use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// One syntactic feature. Names are shared so that cloning feature lists is cheap.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Feature {
    /// `=C`: merges an expression of category `C`.
    Selector(Arc<str>),
    /// `+a`: moves the mover whose leading feature is `-a`.
    Licensor(Arc<str>),
    /// `C`
    Category(Arc<str>),
    /// `-a`
    Licensee(Arc<str>),
}

impl Feature {
    pub fn selector(name: &str) -> Self {
        Feature::Selector(name.into())
    }

    pub fn licensor(name: &str) -> Self {
        Feature::Licensor(name.into())
    }

    pub fn category(name: &str) -> Self {
        Feature::Category(name.into())
    }

    pub fn licensee(name: &str) -> Self {
        Feature::Licensee(name.into())
    }

    pub fn name(&self) -> &str {
        match self {
            Feature::Selector(n)
            | Feature::Licensor(n)
            | Feature::Category(n)
            | Feature::Licensee(n) => n,
        }
    }

    pub fn is_selector(&self) -> bool {
        matches!(self, Feature::Selector(_))
    }

    pub fn is_licensor(&self) -> bool {
        matches!(self, Feature::Licensor(_))
    }

    pub fn is_category(&self) -> bool {
        matches!(self, Feature::Category(_))
    }

    pub fn is_licensee(&self) -> bool {
        matches!(self, Feature::Licensee(_))
    }
}

impl fmt::Display for Feature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Feature::Selector(n) => write!(f, "={n}"),
            Feature::Licensor(n) => write!(f, "+{n}"),
            Feature::Category(n) => f.write_str(n),
            Feature::Licensee(n) => write!(f, "-{n}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed feature `{0}`")]
pub struct FeatureParseError(pub String);

impl FromStr for Feature {
    type Err = FeatureParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || FeatureParseError(s.to_string());
        if s.is_empty() || s.chars().any(char::is_whitespace) {
            return Err(bad());
        }
        let (kind, rest): (fn(Arc<str>) -> Feature, &str) = if let Some(r) = s.strip_prefix('=') {
            (Feature::Selector, r)
        } else if let Some(r) = s.strip_prefix('+') {
            (Feature::Licensor, r)
        } else if let Some(r) = s.strip_prefix('-').or_else(|| s.strip_prefix('−')) {
            (Feature::Licensee, r)
        } else {
            (Feature::Category, s)
        };
        if rest.is_empty() || rest.starts_with(['=', '+', '-', '−']) {
            return Err(bad());
        }
        Ok(kind(rest.into()))
    }
}

impl Serialize for Feature {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Feature {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Space-separated rendering, as used in the lexicon text format.
pub fn render_features(features: &[Feature]) -> String {
    features
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}
