use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::IrError;

/// Which part of the compiled network a species belongs to.
///
/// Non-user species render as `tag:name`; user identifiers cannot contain
/// `:`, so the two never collide.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Namespace {
    User,
    Clock,
    Flag,
    Temp,
}

impl Namespace {
    pub const ALL: [Namespace; 4] = [Namespace::User, Namespace::Clock, Namespace::Flag, Namespace::Temp];

    pub fn label(self) -> &'static str {
        self.tag().unwrap_or("user")
    }

    fn tag(self) -> Option<&'static str> {
        match self {
            Namespace::User => None,
            Namespace::Clock => Some("clock"),
            Namespace::Flag => Some("flag"),
            Namespace::Temp => Some("temp"),
        }
    }
}

/// Ordering is lexicographic by `(namespace, name)`; OdeSystem state
/// vectors and trace columns follow it.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SpeciesName {
    namespace: Namespace,
    name: String,
}

impl SpeciesName {
    pub fn user(name: impl Into<String>) -> Self {
        Self { namespace: Namespace::User, name: name.into() }
    }

    pub fn clock(index: usize) -> Self {
        Self { namespace: Namespace::Clock, name: format!("X{index}") }
    }

    pub fn flag(name: impl Into<String>) -> Self {
        Self { namespace: Namespace::Flag, name: name.into() }
    }

    pub fn temp(name: impl Into<String>) -> Self {
        Self { namespace: Namespace::Temp, name: name.into() }
    }

    pub fn namespace(&self) -> Namespace {
        self.namespace
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn is_clock(&self) -> bool {
        self.namespace == Namespace::Clock
    }
}

impl fmt::Display for SpeciesName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.namespace.tag() {
            Some(tag) => write!(f, "{tag}:{}", self.name),
            None => f.write_str(&self.name),
        }
    }
}

fn valid_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '.')
}

impl FromStr for SpeciesName {
    type Err = IrError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || IrError::BadSpeciesName(s.to_string());
        let (namespace, name) = match s.split_once(':') {
            Some(("clock", n)) => (Namespace::Clock, n),
            Some(("flag", n)) => (Namespace::Flag, n),
            Some(("temp", n)) => (Namespace::Temp, n),
            Some(_) => return Err(bad()),
            None => (Namespace::User, s),
        };
        if !valid_ident(name) {
            return Err(bad());
        }
        Ok(Self { namespace, name: name.to_string() })
    }
}

impl Serialize for SpeciesName {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SpeciesName {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
