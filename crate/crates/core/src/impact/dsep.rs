use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::model::NetworkStructure;

/// Whether `a` and `b` are d-separated by `given` in the DAG.
pub fn d_separated(structure: &NetworkStructure, a: &str, b: &str, given: &[&str]) -> Result<bool> {
    let index = |name: &str| {
        structure
            .variables
            .iter()
            .position(|v| v.name == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    };
    let (ai, bi) = (index(a)?, index(b)?);
    if ai == bi {
        return Err(Error::argument("d-separation needs two distinct variables"));
    }
    let mut observed = vec![false; structure.variables.len()];
    for g in given {
        observed[index(g)?] = true;
    }
    if observed[ai] || observed[bi] {
        return Err(Error::argument("queried variables must not be in the conditioning set"));
    }
    let parents = structure.parent_indices()?;
    Ok(!reachable(&parents, ai, &observed)[bi])
}

/// Nodes connected to `source` by an active trail given the observed set
/// (the "Bayes ball" reachability procedure).
pub(crate) fn reachable(parents: &[Vec<usize>], source: usize, observed: &[bool]) -> Vec<bool> {
    let n = parents.len();
    let mut children = vec![Vec::new(); n];
    for (c, ps) in parents.iter().enumerate() {
        for &p in ps {
            children[p].push(c);
        }
    }

    // observed nodes and their ancestors: colliders there are open
    let mut opens_collider = vec![false; n];
    let mut stack: Vec<usize> = (0..n).filter(|&v| observed[v]).collect();
    while let Some(v) = stack.pop() {
        if !std::mem::replace(&mut opens_collider[v], true) {
            stack.extend(&parents[v]);
        }
    }

    const UP: usize = 0; // arrived from a child
    const DOWN: usize = 1; // arrived from a parent
    let mut visited = vec![[false; 2]; n];
    let mut result = vec![false; n];
    let mut queue = VecDeque::from([(source, UP)]);
    while let Some((v, dir)) = queue.pop_front() {
        if std::mem::replace(&mut visited[v][dir], true) {
            continue;
        }
        if !observed[v] {
            result[v] = true;
        }
        if dir == UP && !observed[v] {
            queue.extend(parents[v].iter().map(|&p| (p, UP)));
            queue.extend(children[v].iter().map(|&c| (c, DOWN)));
        } else if dir == DOWN {
            if !observed[v] {
                queue.extend(children[v].iter().map(|&c| (c, DOWN)));
            }
            if opens_collider[v] {
                queue.extend(parents[v].iter().map(|&p| (p, UP)));
            }
        }
    }
    result
}
