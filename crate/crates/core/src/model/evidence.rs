use std::fmt;

use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A partial mapping from variable name to observed state label.
///
/// Bindings keep their insertion order so that echoes of user input are
/// stable; lookups are by exact, case-sensitive name.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Evidence {
    bindings: Vec<(String, String)>,
}

impl Evidence {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds evidence from pairs, rejecting a variable bound twice.
    pub fn from_pairs<K, V>(pairs: impl IntoIterator<Item = (K, V)>) -> Result<Self>
    where
        K: Into<String>,
        V: Into<String>,
    {
        let mut ev = Evidence::new();
        for (k, v) in pairs {
            ev.insert(k, v)?;
        }
        Ok(ev)
    }

    /// Parses `Var=state` pairs separated by commas. Whitespace around
    /// names is not trimmed away from labels beyond the separators
    /// themselves; the empty string parses to empty evidence.
    pub fn parse(text: &str) -> Result<Self> {
        let mut ev = Evidence::new();
        for pair in text.split(',') {
            let pair = pair.trim();
            if pair.is_empty() {
                continue;
            }
            let (var, state) = pair
                .split_once('=')
                .ok_or_else(|| Error::argument(format!("expected Var=state, got '{pair}'")))?;
            let (var, state) = (var.trim(), state.trim());
            if var.is_empty() || state.is_empty() {
                return Err(Error::argument(format!("expected Var=state, got '{pair}'")));
            }
            ev.insert(var, state)?;
        }
        Ok(ev)
    }

    pub fn insert(&mut self, variable: impl Into<String>, state: impl Into<String>) -> Result<()> {
        let variable = variable.into();
        if self.get(&variable).is_some() {
            return Err(Error::argument(format!(
                "variable '{variable}' is bound more than once"
            )));
        }
        self.bindings.push((variable, state.into()));
        Ok(())
    }

    /// Binds `variable`, replacing any existing binding in place.
    pub fn set(&mut self, variable: impl Into<String>, state: impl Into<String>) {
        let variable = variable.into();
        let state = state.into();
        match self.bindings.iter_mut().find(|(v, _)| *v == variable) {
            Some(slot) => slot.1 = state,
            None => self.bindings.push((variable, state)),
        }
    }

    pub fn with(mut self, variable: impl Into<String>, state: impl Into<String>) -> Result<Self> {
        self.insert(variable, state)?;
        Ok(self)
    }

    pub fn get(&self, variable: &str) -> Option<&str> {
        self.bindings
            .iter()
            .find(|(v, _)| v == variable)
            .map(|(_, s)| s.as_str())
    }

    pub fn contains(&self, variable: &str) -> bool {
        self.get(variable).is_some()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.bindings.iter().map(|(v, s)| (v.as_str(), s.as_str()))
    }

    pub fn variables(&self) -> impl Iterator<Item = &str> {
        self.bindings.iter().map(|(v, _)| v.as_str())
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }
}

impl fmt::Display for Evidence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (v, s)) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}={s}")?;
        }
        Ok(())
    }
}

impl Serialize for Evidence {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.len()))?;
        for (v, s) in self.iter() {
            map.serialize_entry(v, s)?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for Evidence {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        // preserve_order keeps the object's key order.
        let map = serde_json::Map::<String, serde_json::Value>::deserialize(deserializer)?;
        let mut ev = Evidence::new();
        for (k, v) in map {
            let state = v
                .as_str()
                .ok_or_else(|| serde::de::Error::custom(format!("state for '{k}' must be a string")))?;
            ev.insert(k, state).map_err(serde::de::Error::custom)?;
        }
        Ok(ev)
    }
}

/// A total binding: every network variable mapped to one state. Totality is
/// checked against a concrete network at the point of use.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Assignment(pub Evidence);

impl Assignment {
    pub fn parse(text: &str) -> Result<Self> {
        Evidence::parse(text).map(Assignment)
    }

    pub fn from_pairs<K, V>(pairs: impl IntoIterator<Item = (K, V)>) -> Result<Self>
    where
        K: Into<String>,
        V: Into<String>,
    {
        Evidence::from_pairs(pairs).map(Assignment)
    }

    pub fn as_evidence(&self) -> &Evidence {
        &self.0
    }
}
