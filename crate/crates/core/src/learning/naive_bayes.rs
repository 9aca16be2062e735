use serde::Serialize;

use crate::error::{Error, Result};
use crate::inference::Distribution;
use crate::learning::{mle_fit, RecordSet};
use crate::model::{BayesianNetwork, Evidence, ModelDocument, NetworkStructure, Variable};

/// Categorical naive Bayes: a class prior plus one table `P(a_i | class)`
/// per attribute, attributes assumed independent given the class.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NaiveBayesModel {
    class: Variable,
    attributes: Vec<Variable>,
    prior: Vec<f64>,
    /// `conditionals[i][j]` is the distribution of attribute `i` given
    /// class state `j`.
    conditionals: Vec<Vec<Vec<f64>>>,
}

impl NaiveBayesModel {
    /// Fits the class prior and attribute tables by counting, with the same
    /// smoothing rule as [`mle_fit`] on the star structure.
    pub fn train(class: &str, attributes: &[&str], data: &RecordSet, smoothing: f64) -> Result<Self> {
        if attributes.is_empty() {
            return Err(Error::argument("naive Bayes needs at least one attribute"));
        }
        let column = |name: &str| {
            data.column_index(name)
                .map(|c| data.columns()[c].clone())
                .ok_or_else(|| Error::argument(format!("data has no column for '{name}'")))
        };
        let mut variables = vec![column(class)?];
        for a in attributes {
            if *a == class || variables.iter().any(|v| v.name == *a) {
                return Err(Error::argument(format!("attribute '{a}' listed twice or equals the class")));
            }
            variables.push(column(a)?);
        }
        let edges = attributes.iter().map(|a| (class.to_string(), a.to_string())).collect();
        let net = mle_fit(&NetworkStructure::new(variables, edges), data, smoothing)?;
        Self::from_network(&net, class)
    }

    /// Repackages a star-shaped network (class is the only parent of every
    /// other variable) as a classifier.
    pub fn from_network(net: &BayesianNetwork, class: &str) -> Result<Self> {
        let c = net.index_of(class)?;
        if !net.parents(c).is_empty() {
            return Err(Error::argument(format!("class '{class}' must be a root")));
        }
        let mut attributes = Vec::new();
        let mut conditionals = Vec::new();
        for v in 0..net.len() {
            if v == c {
                continue;
            }
            if net.parents(v) != [c] {
                return Err(Error::argument(format!(
                    "'{}' must have exactly the class as parent",
                    net.variable(v).name
                )));
            }
            attributes.push(net.variable(v).clone());
            conditionals.push(net.cpt(v).rows().map(<[f64]>::to_vec).collect());
        }
        if attributes.is_empty() {
            return Err(Error::argument("naive Bayes needs at least one attribute"));
        }
        Ok(NaiveBayesModel {
            class: net.variable(c).clone(),
            attributes,
            prior: net.cpt(c).row(0).to_vec(),
            conditionals,
        })
    }

    /// The equivalent star network, class declared first.
    pub fn to_network(&self) -> Result<BayesianNetwork> {
        let mut doc = ModelDocument::new("naive-bayes");
        doc.variables.push(self.class.clone());
        doc.variables.extend(self.attributes.iter().cloned());
        doc = doc.cpt(&self.class.name, &[], vec![self.prior.clone()]);
        for (attr, table) in self.attributes.iter().zip(&self.conditionals) {
            doc = doc.cpt(&attr.name, &[&self.class.name], table.clone());
        }
        doc.build()
    }

    pub fn class(&self) -> &Variable {
        &self.class
    }

    pub fn attributes(&self) -> &[Variable] {
        &self.attributes
    }

    pub fn prior(&self) -> &[f64] {
        &self.prior
    }

    /// `P(attribute = state | class = class_state)`.
    pub fn conditional(&self, attribute: &str, state: &str, class_state: &str) -> Option<f64> {
        let i = self.attributes.iter().position(|a| a.name == attribute)?;
        let s = self.attributes[i].state_index(state)?;
        let j = self.class.state_index(class_state)?;
        Some(self.conditionals[i][j][s])
    }

    /// Number of estimated conditional distributions: attributes × class
    /// states.
    pub fn conditional_count(&self) -> usize {
        self.attributes.len() * self.class.card()
    }

    /// Most probable class for fully observed attributes, with the
    /// normalised class scores `P(v) Π P(a_i | v)`.
    pub fn predict(&self, attributes: &Evidence) -> Result<(String, Distribution)> {
        for (name, _) in attributes.iter() {
            if !self.attributes.iter().any(|a| a.name == name) {
                return Err(Error::UnknownVariable(name.to_string()));
            }
        }
        let mut observed = Vec::with_capacity(self.attributes.len());
        for attr in &self.attributes {
            let state = attributes
                .get(&attr.name)
                .ok_or_else(|| Error::argument(format!("attribute '{}' is unbound", attr.name)))?;
            observed.push(attr.state_index(state).ok_or_else(|| Error::UnknownState {
                variable: attr.name.clone(),
                state: state.to_string(),
            })?);
        }
        let scores: Vec<f64> = (0..self.class.card())
            .map(|j| {
                observed
                    .iter()
                    .enumerate()
                    .fold(self.prior[j], |acc, (i, &s)| acc * self.conditionals[i][j][s])
            })
            .collect();
        let total: f64 = scores.iter().sum();
        if total <= 0.0 {
            return Err(Error::ImpossibleEvidence);
        }
        let dist = Distribution {
            variable: self.class.name.clone(),
            states: self.class.states.clone(),
            probabilities: scores.iter().map(|s| s / total).collect(),
        };
        let label = self.class.states[dist.argmax()].clone();
        Ok((label, dist))
    }
}
