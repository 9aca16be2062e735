use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::Serialize;

use crate::model::structure::order_indices;
use crate::model::ModelDocument;

/// Maximum allowed deviation of a CPT row sum from 1.
pub const ROW_SUM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    EmptyNetwork,
    EmptyVariableName,
    DuplicateVariable,
    TooFewStates,
    EmptyStateLabel,
    DuplicateState,
    UnknownChild,
    UnknownParent,
    SelfLoop,
    DuplicateEdge,
    MissingCpt,
    DuplicateCpt,
    Cycle,
    MissingRows,
    RowCount,
    RowLength,
    InvalidProbability,
    RowSum,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub locus: String,
    pub message: String,
    /// Row sum minus one, for `RowSum` violations.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, kind: ViolationKind, locus: impl Into<String>, message: impl Into<String>) {
        self.violations.push(Violation {
            kind,
            locus: locus.into(),
            message: message.into(),
            residual: None,
        });
    }

    pub fn has(&self, kind: ViolationKind) -> bool {
        self.violations.iter().any(|v| v.kind == kind)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return f.write_str("no violations");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{}: {}", v.locus, v.message)?;
        }
        Ok(())
    }
}

/// Checks a candidate network against every representation invariant and
/// lists all violations found. An empty report means the document can be
/// turned into a [`BayesianNetwork`](crate::model::BayesianNetwork).
pub fn validate_network(doc: &ModelDocument) -> ValidationReport {
    validate(doc, true)
}

pub(crate) fn validate(doc: &ModelDocument, check_rows: bool) -> ValidationReport {
    use ViolationKind::*;
    let mut report = ValidationReport::default();

    if doc.variables.is_empty() {
        report.push(EmptyNetwork, "variables", "network declares no variables");
    }

    let mut index: HashMap<&str, usize> = HashMap::new();
    for (i, var) in doc.variables.iter().enumerate() {
        let locus = format!("variables[{i}]");
        if var.name.is_empty() {
            report.push(EmptyVariableName, &locus, "variable name is empty");
        }
        if index.contains_key(var.name.as_str()) {
            report.push(DuplicateVariable, &locus, format!("variable '{}' declared twice", var.name));
        } else {
            index.insert(var.name.as_str(), i);
        }
        if var.states.len() < 2 {
            report.push(
                TooFewStates,
                &locus,
                format!("variable '{}' has {} state(s), needs at least 2", var.name, var.states.len()),
            );
        }
        let mut seen = HashSet::new();
        for state in &var.states {
            if state.is_empty() {
                report.push(EmptyStateLabel, &locus, format!("variable '{}' has an empty state label", var.name));
            } else if !seen.insert(state.as_str()) {
                report.push(
                    DuplicateState,
                    &locus,
                    format!("variable '{}' repeats state '{state}'", var.name),
                );
            }
        }
    }

    let n = doc.variables.len();
    let mut parents: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut cpt_of: Vec<Option<usize>> = vec![None; n];

    for (ci, cpt) in doc.cpts.iter().enumerate() {
        let locus = format!("cpts[{ci}]");
        let Some(&child) = index.get(cpt.child.as_str()) else {
            report.push(UnknownChild, &locus, format!("CPT for undeclared variable '{}'", cpt.child));
            continue;
        };
        match cpt_of[child] {
            Some(_) => {
                report.push(DuplicateCpt, &locus, format!("second CPT for variable '{}'", cpt.child));
                continue;
            }
            None => cpt_of[child] = Some(ci),
        }

        let mut all_known = true;
        let mut seen = HashSet::new();
        for p in &cpt.parents {
            match index.get(p.as_str()) {
                None => {
                    all_known = false;
                    report.push(UnknownParent, &locus, format!("undeclared parent '{p}' of '{}'", cpt.child));
                }
                Some(&pi) if pi == child => {
                    all_known = false;
                    report.push(SelfLoop, &locus, format!("variable '{}' lists itself as a parent", cpt.child));
                }
                Some(&pi) => {
                    if !seen.insert(pi) {
                        all_known = false;
                        report.push(DuplicateEdge, &locus, format!("edge {p} -> {} listed twice", cpt.child));
                    } else {
                        parents[child].push(pi);
                    }
                }
            }
        }

        if !check_rows {
            continue;
        }
        let Some(rows) = &cpt.rows else {
            report.push(MissingRows, &locus, format!("CPT for '{}' has no rows", cpt.child));
            continue;
        };
        if all_known {
            let expected: usize = parents[child].iter().map(|&p| doc.variables[p].states.len()).product();
            if rows.len() != expected {
                report.push(
                    RowCount,
                    &locus,
                    format!("CPT for '{}' has {} rows, expected {expected}", cpt.child, rows.len()),
                );
            }
        }
        let card = doc.variables[child].states.len();
        for (ri, row) in rows.iter().enumerate() {
            let row_locus = format!("{locus}.rows[{ri}]");
            if row.len() != card {
                report.push(
                    RowLength,
                    &row_locus,
                    format!("row for '{}' has {} entries, expected {card}", cpt.child, row.len()),
                );
                continue;
            }
            let mut bad = false;
            for &p in row {
                if !p.is_finite() || !(0.0..=1.0).contains(&p) {
                    report.push(InvalidProbability, &row_locus, format!("entry {p} outside [0, 1]"));
                    bad = true;
                }
            }
            if bad {
                continue;
            }
            let residual = row.iter().sum::<f64>() - 1.0;
            if residual.abs() > ROW_SUM_TOLERANCE {
                report.violations.push(Violation {
                    kind: RowSum,
                    locus: row_locus,
                    message: format!("row of '{}' sums to {} (residual {residual:+})", cpt.child, 1.0 + residual),
                    residual: Some(residual),
                });
            }
        }
    }

    for (i, slot) in cpt_of.iter().enumerate() {
        let canonical = index.get(doc.variables[i].name.as_str()) == Some(&i);
        if slot.is_none() && canonical {
            report.push(
                MissingCpt,
                format!("variables[{i}]"),
                format!("no CPT for variable '{}'", doc.variables[i].name),
            );
        }
    }

    if let Err(cycle) = order_indices(&parents) {
        let names: Vec<&str> = cycle.iter().map(|&i| doc.variables[i].name.as_str()).collect();
        report.push(Cycle, names.join(","), format!("directed cycle {}", names.join(" -> ")));
    }

    report
}
