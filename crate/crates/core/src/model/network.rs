use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::model::structure::order_indices;
use crate::model::validate::validate;
use crate::model::{
    Assignment, Cpt, CptDocument, Evidence, ModelDocument, NetworkStructure, ValidationReport,
    Variable,
};

/// A validated, immutable discrete Bayesian network.
///
/// Variables are addressed by their declaration index; `cpt(i)` is the
/// table of variable `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct BayesianNetwork {
    name: String,
    description: Option<String>,
    variables: Vec<Variable>,
    index: HashMap<String, usize>,
    cpts: Vec<Cpt>,
    children: Vec<Vec<usize>>,
    topo: Vec<usize>,
}

impl BayesianNetwork {
    pub fn from_document(doc: ModelDocument) -> Result<Self> {
        doc.check_references(true)?;
        let report = validate(&doc, true);
        if !report.is_valid() {
            return Err(Error::Validation(report));
        }

        let index: HashMap<String, usize> = doc
            .variables
            .iter()
            .enumerate()
            .map(|(i, v)| (v.name.clone(), i))
            .collect();
        let n = doc.variables.len();
        let mut slots: Vec<Option<Cpt>> = vec![None; n];
        for cd in doc.cpts {
            let child = index[&cd.child];
            let parents: Vec<usize> = cd.parents.iter().map(|p| index[p]).collect();
            let parent_cards = parents.iter().map(|&p| doc.variables[p].card()).collect();
            let card = doc.variables[child].card();
            let mut table = Vec::with_capacity(card * cd.rows.as_ref().map_or(0, Vec::len));
            for mut row in cd.rows.expect("checked by check_references") {
                renormalize(&mut row);
                table.extend(row);
            }
            slots[child] = Some(Cpt {
                child,
                parents,
                parent_cards,
                card,
                table,
            });
        }
        let cpts: Vec<Cpt> = slots
            .into_iter()
            .map(|c| c.expect("validated: one CPT per variable"))
            .collect();

        let mut children = vec![Vec::new(); n];
        for cpt in &cpts {
            for &p in &cpt.parents {
                children[p].push(cpt.child);
            }
        }
        let parent_lists: Vec<Vec<usize>> = cpts.iter().map(|c| c.parents.clone()).collect();
        let topo = order_indices(&parent_lists).expect("validated: acyclic");

        Ok(BayesianNetwork {
            name: doc.name,
            description: doc.description,
            variables: doc.variables,
            index,
            cpts,
            children,
            topo,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn description(&self) -> Option<&str> {
        self.description.as_deref()
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn variable(&self, index: usize) -> &Variable {
        &self.variables[index]
    }

    pub fn len(&self) -> usize {
        self.variables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.variables.is_empty()
    }

    pub fn cards(&self) -> Vec<usize> {
        self.variables.iter().map(Variable::card).collect()
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn state_index(&self, variable: usize, state: &str) -> Result<usize> {
        self.variables[variable]
            .state_index(state)
            .ok_or_else(|| Error::UnknownState {
                variable: self.variables[variable].name.clone(),
                state: state.to_string(),
            })
    }

    pub fn cpt(&self, variable: usize) -> &Cpt {
        &self.cpts[variable]
    }

    pub fn cpts(&self) -> &[Cpt] {
        &self.cpts
    }

    pub fn parents(&self, variable: usize) -> &[usize] {
        &self.cpts[variable].parents
    }

    pub fn children(&self, variable: usize) -> &[usize] {
        &self.children[variable]
    }

    /// Variable indices with parents before children, ties broken by
    /// declaration order.
    pub fn topological_order(&self) -> &[usize] {
        &self.topo
    }

    pub fn topological_names(&self) -> Vec<&str> {
        self.topo.iter().map(|&i| self.variables[i].name.as_str()).collect()
    }

    /// Number of cells of the full joint distribution.
    pub fn joint_cells(&self) -> u128 {
        self.variables.iter().map(|v| v.card() as u128).product()
    }

    pub fn structure(&self) -> NetworkStructure {
        let edges = self
            .cpts
            .iter()
            .flat_map(|c| {
                c.parents.iter().map(move |&p| {
                    (self.variables[p].name.clone(), self.variables[c.child].name.clone())
                })
            })
            .collect();
        NetworkStructure::new(self.variables.clone(), edges)
    }

    pub fn to_document(&self) -> ModelDocument {
        ModelDocument {
            name: self.name.clone(),
            description: self.description.clone(),
            variables: self.variables.clone(),
            cpts: self
                .cpts
                .iter()
                .map(|c| CptDocument {
                    child: self.variables[c.child].name.clone(),
                    parents: c.parents.iter().map(|&p| self.variables[p].name.clone()).collect(),
                    rows: Some(c.rows().map(<[f64]>::to_vec).collect()),
                })
                .collect(),
        }
    }

    /// Always empty for a constructed network; kept for symmetry with
    /// candidate documents.
    pub fn validate(&self) -> ValidationReport {
        validate(&self.to_document(), true)
    }

    /// Resolves evidence to one optional state index per variable.
    pub fn resolve_evidence(&self, evidence: &Evidence) -> Result<Vec<Option<usize>>> {
        let mut slots = vec![None; self.variables.len()];
        for (var, state) in evidence.iter() {
            let v = self.index_of(var)?;
            slots[v] = Some(self.state_index(v, state)?);
        }
        Ok(slots)
    }

    /// Resolves a total assignment to one state index per variable.
    pub fn resolve_assignment(&self, assignment: &Assignment) -> Result<Vec<usize>> {
        let slots = self.resolve_evidence(assignment.as_evidence())?;
        slots
            .iter()
            .enumerate()
            .map(|(i, s)| {
                s.ok_or_else(|| {
                    Error::argument(format!(
                        "assignment is partial: variable '{}' is unbound",
                        self.variables[i].name
                    ))
                })
            })
            .collect()
    }

    /// Row of `child`'s CPT selected by a parent→state mapping. Every
    /// parent must be bound and nothing else may be.
    pub fn parent_config_index(&self, child: &str, parent_states: &Evidence) -> Result<usize> {
        let c = self.index_of(child)?;
        let cpt = &self.cpts[c];
        for (var, _) in parent_states.iter() {
            let v = self.index_of(var)?;
            if !cpt.parents.contains(&v) {
                return Err(Error::argument(format!("'{var}' is not a parent of '{child}'")));
            }
        }
        let states = cpt
            .parents
            .iter()
            .map(|&p| {
                let name = &self.variables[p].name;
                let state = parent_states
                    .get(name)
                    .ok_or_else(|| Error::argument(format!("parent '{name}' of '{child}' is unbound")))?;
                self.state_index(p, state)
            })
            .collect::<Result<Vec<_>>>()?;
        cpt.config_index(&states)
    }

    /// Distribution of `variable` given a full parent configuration, as
    /// state indices in parent order.
    pub fn cpt_row(&self, variable: usize, parent_states: &[usize]) -> Result<&[f64]> {
        let cpt = &self.cpts[variable];
        Ok(cpt.row(cpt.config_index(parent_states)?))
    }
}

/// Rows within the load tolerance are rescaled to sum to one. Rows that
/// already sum to one up to rounding noise are kept verbatim, so decimal
/// tables survive a save/load cycle unchanged.
fn renormalize(row: &mut [f64]) {
    let sum: f64 = row.iter().sum();
    if (sum - 1.0).abs() > 1e-12 {
        for p in row.iter_mut() {
            *p /= sum;
        }
    }
}
