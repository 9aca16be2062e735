use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::validate::validate;
use crate::model::{BayesianNetwork, NetworkStructure, Variable};

/// On-disk JSON form of a network. Edges are implied by each table's
/// `parents` list; `rows` follow the mixed-radix parent order and the
/// child's state order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDocument {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub variables: Vec<Variable>,
    pub cpts: Vec<CptDocument>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CptDocument {
    pub child: String,
    pub parents: Vec<String>,
    /// Absent only in structure-only documents.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rows: Option<Vec<Vec<f64>>>,
}

impl ModelDocument {
    pub fn new(name: impl Into<String>) -> Self {
        ModelDocument {
            name: name.into(),
            description: None,
            variables: Vec::new(),
            cpts: Vec::new(),
        }
    }

    pub fn variable<S: Into<String>>(mut self, name: &str, states: impl IntoIterator<Item = S>) -> Self {
        self.variables.push(Variable::new(name, states));
        self
    }

    pub fn cpt(mut self, child: &str, parents: &[&str], rows: Vec<Vec<f64>>) -> Self {
        self.cpts.push(CptDocument {
            child: child.to_string(),
            parents: parents.iter().map(|p| p.to_string()).collect(),
            rows: Some(rows),
        });
        self
    }

    pub fn build(self) -> Result<BayesianNetwork> {
        BayesianNetwork::from_document(self)
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| {
            let locus = format!("line {} column {}", e.line(), e.column());
            match e.classify() {
                serde_json::error::Category::Data => Error::Schema {
                    locus,
                    message: e.to_string(),
                },
                _ => Error::Parse {
                    locus,
                    message: e.to_string(),
                },
            }
        })
    }

    /// Name references in `cpts` that do not resolve are schema errors
    /// rather than validation findings when loading.
    pub(crate) fn check_references(&self, need_rows: bool) -> Result<()> {
        let declared = |name: &str| self.variables.iter().any(|v| v.name == name);
        for (i, cpt) in self.cpts.iter().enumerate() {
            if !declared(&cpt.child) {
                return Err(Error::schema(
                    format!("cpts[{i}].child"),
                    format!("undeclared variable '{}'", cpt.child),
                ));
            }
            if let Some(p) = cpt.parents.iter().find(|p| !declared(p)) {
                return Err(Error::schema(
                    format!("cpts[{i}].parents"),
                    format!("undeclared parent '{p}' of '{}'", cpt.child),
                ));
            }
            if need_rows && cpt.rows.is_none() {
                return Err(Error::schema(
                    format!("cpts[{i}].rows"),
                    format!("missing rows for '{}'", cpt.child),
                ));
            }
        }
        Ok(())
    }

    /// Canonical text form: two-space indentation, one variable per line and
    /// one CPT row per line. Numbers use the shortest decimal that parses
    /// back to the same double.
    pub fn to_canonical_string(&self) -> String {
        let s = |v: &str| serde_json::to_string(v).expect("string serializes");
        let list = |items: &[String]| {
            let parts: Vec<String> = items.iter().map(|i| s(i)).collect();
            format!("[{}]", parts.join(", "))
        };
        let mut out = String::from("{\n");
        out += &format!("  \"name\": {},\n", s(&self.name));
        if let Some(d) = &self.description {
            out += &format!("  \"description\": {},\n", s(d));
        }
        out += "  \"variables\": [\n";
        for (i, v) in self.variables.iter().enumerate() {
            let sep = if i + 1 < self.variables.len() { "," } else { "" };
            out += &format!("    {{\"name\": {}, \"states\": {}}}{sep}\n", s(&v.name), list(&v.states));
        }
        out += "  ],\n  \"cpts\": [\n";
        for (i, cpt) in self.cpts.iter().enumerate() {
            out += "    {\n";
            out += &format!("      \"child\": {},\n", s(&cpt.child));
            match &cpt.rows {
                None => out += &format!("      \"parents\": {}\n", list(&cpt.parents)),
                Some(rows) => {
                    out += &format!("      \"parents\": {},\n", list(&cpt.parents));
                    out += "      \"rows\": [\n";
                    for (r, row) in rows.iter().enumerate() {
                        let nums: Vec<String> = row
                            .iter()
                            .map(|p| serde_json::to_string(p).expect("finite probability"))
                            .collect();
                        let sep = if r + 1 < rows.len() { "," } else { "" };
                        out += &format!("        [{}]{sep}\n", nums.join(", "));
                    }
                    out += "      ]\n";
                }
            }
            let sep = if i + 1 < self.cpts.len() { "," } else { "" };
            out += &format!("    }}{sep}\n");
        }
        out += "  ]\n}\n";
        out
    }
}

/// Parses, checks and builds a network from a model document.
pub fn load_model(text: &str) -> Result<BayesianNetwork> {
    BayesianNetwork::from_document(ModelDocument::parse(text)?)
}

/// Reads only the variables and edges of a model document; `rows` may be
/// absent and are ignored when present.
pub fn load_structure(text: &str) -> Result<NetworkStructure> {
    let doc = ModelDocument::parse(text)?;
    doc.check_references(false)?;
    let report = validate(&doc, false);
    if !report.is_valid() {
        return Err(Error::Validation(report));
    }
    let edges = doc
        .cpts
        .iter()
        .flat_map(|c| c.parents.iter().map(move |p| (p.clone(), c.child.clone())))
        .collect();
    Ok(NetworkStructure::new(doc.variables, edges))
}

pub fn save_model(net: &BayesianNetwork) -> String {
    net.to_document().to_canonical_string()
}
