//! Full-joint enumeration. Exponential, and deliberately independent of
//! the elimination code: every cell is a direct chain-rule product, and
//! every query is a brute-force scan. Used as the correctness oracle.

use crate::error::{Error, Result};
use crate::inference::joint_probability_indices;
use crate::model::BayesianNetwork;

/// Default upper bound on the number of joint cells materialised.
pub const DEFAULT_JOINT_CAP: u128 = 10_000_000;

/// The full joint distribution, indexed mixed-radix over all variables in
/// topological order (last variable fastest).
#[derive(Debug, Clone, PartialEq)]
pub struct JointTable {
    /// Variable indices in axis order.
    pub order: Vec<usize>,
    pub cards: Vec<usize>,
    pub values: Vec<f64>,
}

pub fn enumerate_joint(net: &BayesianNetwork) -> Result<JointTable> {
    enumerate_joint_with_cap(net, DEFAULT_JOINT_CAP)
}

pub fn enumerate_joint_with_cap(net: &BayesianNetwork, cap: u128) -> Result<JointTable> {
    let cells = net.joint_cells();
    if cells > cap {
        return Err(Error::SizeLimit {
            what: "joint table",
            needed: cells,
            limit: cap,
        });
    }
    let order = net.topological_order().to_vec();
    let cards: Vec<usize> = order.iter().map(|&v| net.variable(v).card()).collect();
    let mut states = vec![0usize; net.len()];
    let mut values = Vec::with_capacity(cells as usize);
    for cell in 0..cells as usize {
        let mut rest = cell;
        for (axis, &v) in order.iter().enumerate().rev() {
            states[v] = rest % cards[axis];
            rest /= cards[axis];
        }
        values.push(joint_probability_indices(net, &states));
    }
    Ok(JointTable { order, cards, values })
}

impl JointTable {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Cell index of a total assignment given as one state per variable
    /// (declaration-indexed).
    pub fn index_of(&self, states: &[usize]) -> usize {
        self.order
            .iter()
            .zip(&self.cards)
            .fold(0, |acc, (&v, &card)| acc * card + states[v])
    }

    /// Per-variable states of a cell, declaration-indexed.
    pub fn states_of(&self, mut cell: usize) -> Vec<usize> {
        let mut states = vec![0; self.order.len()];
        for (&v, &card) in self.order.iter().zip(&self.cards).rev() {
            states[v] = cell % card;
            cell /= card;
        }
        states
    }

    fn consistent(&self, states: &[usize], evidence: &[Option<usize>]) -> bool {
        evidence
            .iter()
            .zip(states)
            .all(|(e, s)| e.is_none_or(|e| e == *s))
    }

    /// Sum of all cells consistent with the evidence.
    pub fn likelihood(&self, evidence: &[Option<usize>]) -> f64 {
        (0..self.len())
            .filter(|&c| self.consistent(&self.states_of(c), evidence))
            .map(|c| self.values[c])
            .sum()
    }

    /// Posterior of `var`; `None` if the evidence has probability zero.
    pub fn marginal(&self, evidence: &[Option<usize>], var: usize) -> Option<Vec<f64>> {
        let card = self.cards[self.order.iter().position(|&v| v == var)?];
        let mut acc = vec![0.0; card];
        for c in 0..self.len() {
            let s = self.states_of(c);
            if self.consistent(&s, evidence) {
                acc[s[var]] += self.values[c];
            }
        }
        let total: f64 = acc.iter().sum();
        if total == 0.0 {
            return None;
        }
        Some(acc.into_iter().map(|p| p / total).collect())
    }

    /// Unnormalised `P(query, evidence)` for every query assignment, in
    /// lexicographic order over `query` (last fastest).
    pub fn query_table(&self, evidence: &[Option<usize>], query: &[usize]) -> Vec<f64> {
        let qcards: Vec<usize> = query
            .iter()
            .map(|q| self.cards[self.order.iter().position(|v| v == q).expect("query var")])
            .collect();
        let mut table = vec![0.0; qcards.iter().product()];
        for c in 0..self.len() {
            let s = self.states_of(c);
            if self.consistent(&s, evidence) {
                let idx = query.iter().zip(&qcards).fold(0, |acc, (&q, &k)| acc * k + s[q]);
                table[idx] += self.values[c];
            }
        }
        table
    }

    /// Brute-force MAP over `query` (axis order = tie-break order): returns
    /// the winning lexicographic index and its normalised posterior.
    pub fn map(&self, evidence: &[Option<usize>], query: &[usize]) -> Option<(usize, f64)> {
        let table = self.query_table(evidence, query);
        let total: f64 = table.iter().sum();
        if total == 0.0 {
            return None;
        }
        let mut best = 0;
        for (i, &p) in table.iter().enumerate() {
            if p > table[best] * (1.0 + super::SCORE_TIE_TOLERANCE) {
                best = i;
            }
        }
        Some((best, table[best] / total))
    }
}
