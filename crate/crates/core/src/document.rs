//! JSON space documents.
//!
//! ```json
//! {
//!   "elements": ["a", "b"],
//!   "map": { "a": ["a", "b"], "b": ["b"] },
//!   "weights": { "a": "1/3", "b": "2/3" },
//!   "variables": { "U": { "a": "1", "b": "-1/2" } },
//!   "events": { "A": ["a"] }
//! }
//! ```
//!
//! `weights`, `variables` and `events` are optional; without weights the
//! uniform measure is used. Fractions are strings. Unknown fields are
//! rejected.

use std::fmt;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::rational::Rational;
use crate::space::{build_space, ApproximationSpace, Event};
use crate::variable::{build_variable, RoughVariable};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceDocument {
    pub elements: Vec<String>,
    pub map: IndexMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<IndexMap<String, Rational>>,
    #[serde(default, skip_serializing_if = "IndexMap::is_empty")]
    pub variables: IndexMap<String, IndexMap<String, Rational>>,
    #[serde(default, skip_serializing_if = "IndexMap::is_empty")]
    pub events: IndexMap<String, Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DocumentError {
    Syntax { line: usize, column: usize, message: String },
    Schema { location: String, message: String },
    Space { location: String, source: Error },
}

impl fmt::Display for DocumentError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DocumentError::Syntax { line, column, message } => {
                write!(f, "syntax error at line {line}, column {column}: {message}")
            }
            DocumentError::Schema { location, message } => {
                write!(f, "schema error at {location}: {message}")
            }
            DocumentError::Space { location, source } => write!(f, "invalid space at {location}: {source}"),
        }
    }
}

impl std::error::Error for DocumentError {}

fn schema(location: impl Into<String>, message: impl Into<String>) -> DocumentError {
    DocumentError::Schema { location: location.into(), message: message.into() }
}

fn space_error(location: impl Into<String>, source: Error) -> DocumentError {
    DocumentError::Space { location: location.into(), source }
}

/// Parse and fully validate a document: the space, every variable and every
/// named event must build.
pub fn parse_space_document(text: &[u8]) -> Result<SpaceDocument, DocumentError> {
    let doc: SpaceDocument = serde_json::from_slice(text).map_err(|e| {
        let (line, column, message) = (e.line(), e.column(), e.to_string());
        if e.is_data() {
            schema(format!("line {line}, column {column}"), message)
        } else {
            DocumentError::Syntax { line, column, message }
        }
    })?;
    doc.validate()?;
    Ok(doc)
}

impl SpaceDocument {
    /// Document describing `space` with explicit weights and nothing else.
    pub fn from_space(space: &ApproximationSpace) -> Self {
        let universe = space.universe();
        let labels = universe.labels();
        let map = labels
            .iter()
            .zip(space.map().images())
            .map(|(label, image)| (label.clone(), image.indices().map(|y| universe.label(y).to_string()).collect()))
            .collect();
        let weights =
            labels.iter().zip(space.measure().weights()).map(|(label, w)| (label.clone(), w.clone())).collect();
        SpaceDocument {
            elements: labels.to_vec(),
            map,
            weights: Some(weights),
            variables: IndexMap::new(),
            events: IndexMap::new(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("documents always serialize")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialize")
    }

    pub fn validate(&self) -> Result<(), DocumentError> {
        let space = self.space()?;
        for name in self.variables.keys() {
            self.variable(&space, name)?;
        }
        for name in self.events.keys() {
            self.event(&space, name)?;
        }
        Ok(())
    }

    pub fn space(&self) -> Result<ApproximationSpace, DocumentError> {
        if let Some(missing) = self.elements.iter().find(|e| !self.map.contains_key(*e)) {
            return Err(schema("map", format!("no entry for element `{missing}`")));
        }
        build_space(
            self.elements.iter().cloned(),
            self.map.iter(),
            self.weights.as_ref().map(|w| w.iter().map(|(k, v)| (k, v.clone()))),
        )
        .map_err(|e| {
            let location = match &e {
                Error::EmptyImage(label) => format!("map.{label}"),
                Error::BadMeasure(_) => "weights".to_string(),
                Error::UnknownLabel(label) if self.weights.as_ref().is_some_and(|w| w.contains_key(label)) => {
                    format!("weights.{label}")
                }
                Error::UnknownLabel(_) | Error::MissingImage(_) => "map".to_string(),
                _ => "elements".to_string(),
            };
            space_error(location, e)
        })
    }

    /// `Ok(None)` if no variable has this name.
    pub fn variable(&self, space: &ApproximationSpace, name: &str) -> Result<Option<RoughVariable>, DocumentError> {
        let Some(values) = self.variables.get(name) else {
            return Ok(None);
        };
        build_variable(space, values.iter().map(|(k, v)| (k, v.clone())))
            .map(Some)
            .map_err(|e| space_error(format!("variables.{name}"), e))
    }

    /// `Ok(None)` if no event has this name.
    pub fn event(&self, space: &ApproximationSpace, name: &str) -> Result<Option<Event>, DocumentError> {
        let Some(labels) = self.events.get(name) else {
            return Ok(None);
        };
        space.universe().event(labels).map(Some).map_err(|e| space_error(format!("events.{name}"), e))
    }
}
