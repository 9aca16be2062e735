use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::model::Variable;

/// Variables plus directed (parent, child) edges, before any tables are
/// attached.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NetworkStructure {
    pub variables: Vec<Variable>,
    pub edges: Vec<(String, String)>,
}

impl NetworkStructure {
    pub fn new(variables: Vec<Variable>, edges: Vec<(String, String)>) -> Self {
        NetworkStructure { variables, edges }
    }

    pub fn variable(&self, name: &str) -> Option<&Variable> {
        self.variables.iter().find(|v| v.name == name)
    }

    /// Parents of `child` in edge-list order.
    pub fn parents_of(&self, child: &str) -> Vec<&str> {
        self.edges
            .iter()
            .filter(|(_, c)| c == child)
            .map(|(p, _)| p.as_str())
            .collect()
    }

    /// Parent index lists, one per declared variable, checked against the
    /// declared names.
    pub(crate) fn parent_indices(&self) -> Result<Vec<Vec<usize>>> {
        let index: HashMap<&str, usize> = self
            .variables
            .iter()
            .enumerate()
            .map(|(i, v)| (v.name.as_str(), i))
            .collect();
        let mut parents = vec![Vec::new(); self.variables.len()];
        for (p, c) in &self.edges {
            let pi = *index.get(p.as_str()).ok_or_else(|| Error::UnknownVariable(p.clone()))?;
            let ci = *index.get(c.as_str()).ok_or_else(|| Error::UnknownVariable(c.clone()))?;
            parents[ci].push(pi);
        }
        Ok(parents)
    }

    pub fn topological_order(&self) -> Result<Vec<String>> {
        topological_order(self)
    }
}

/// Orders variables so that every parent precedes its children. Among the
/// variables ready at each step the earliest declared one goes first, so
/// the output is fully determined by the input.
pub fn topological_order(structure: &NetworkStructure) -> Result<Vec<String>> {
    let parents = structure.parent_indices()?;
    let order = order_indices(&parents).map_err(|cycle| {
        Error::Cycle(
            cycle
                .into_iter()
                .map(|i| structure.variables[i].name.clone())
                .collect(),
        )
    })?;
    Ok(order
        .into_iter()
        .map(|i| structure.variables[i].name.clone())
        .collect())
}

/// Index-level topological sort. On failure returns one directed cycle as
/// a closed walk `[v0, v1, ..., v0]` following edge direction.
pub(crate) fn order_indices(parents: &[Vec<usize>]) -> std::result::Result<Vec<usize>, Vec<usize>> {
    let n = parents.len();
    let mut placed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    while order.len() < n {
        let next = (0..n).find(|&v| !placed[v] && parents[v].iter().all(|&p| placed[p] && p != v));
        match next {
            Some(v) => {
                placed[v] = true;
                order.push(v);
            }
            None => return Err(find_cycle(parents, &placed)),
        }
    }
    Ok(order)
}

fn find_cycle(parents: &[Vec<usize>], placed: &[bool]) -> Vec<usize> {
    // Every unplaced node has an unplaced parent, so walking parent links
    // from any unplaced node must revisit a node.
    let start = placed.iter().position(|p| !p).expect("cycle implies unplaced node");
    let mut walk = vec![start];
    let mut position = vec![usize::MAX; parents.len()];
    position[start] = 0;
    let mut current = start;
    loop {
        let parent = *parents[current]
            .iter()
            .find(|&&p| !placed[p])
            .expect("unplaced node has an unplaced parent");
        if position[parent] != usize::MAX {
            let mut cycle: Vec<usize> = walk[position[parent]..].to_vec();
            cycle.reverse();
            cycle.push(cycle[0]);
            return cycle;
        }
        position[parent] = walk.len();
        walk.push(parent);
        current = parent;
    }
}
