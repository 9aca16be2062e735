//! Variable elimination with a min-degree ordering.

use std::collections::BTreeSet;

use crate::inference::factor::Factor;
use crate::model::BayesianNetwork;

/// Picks an elimination order for `targets` by repeatedly removing the
/// variable with the fewest neighbours in the interaction graph, ties going
/// to the lower declaration index.
pub(crate) fn min_degree_order(n: usize, factors: &[Factor], targets: &[usize]) -> Vec<usize> {
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for f in factors {
        for &a in &f.vars {
            for &b in &f.vars {
                if a != b {
                    adj[a].insert(b);
                }
            }
        }
    }
    let mut pending: BTreeSet<usize> = targets.iter().copied().collect();
    let mut order = Vec::with_capacity(pending.len());
    while let Some(&v) = pending.iter().min_by_key(|&&v| (adj[v].len(), v)) {
        let neighbours: Vec<usize> = adj[v].iter().copied().collect();
        for &a in &neighbours {
            adj[a].remove(&v);
            for &b in &neighbours {
                if a != b {
                    adj[a].insert(b);
                }
            }
        }
        adj[v].clear();
        pending.remove(&v);
        order.push(v);
    }
    order
}

/// Computes the unnormalised factor `P(keep, evidence)` over `keep` (in the
/// given axis order). `keep` must not contain observed variables. With an
/// empty `keep` the result is a scalar equal to the evidence likelihood.
pub(crate) fn eliminate(net: &BayesianNetwork, evidence: &[Option<usize>], keep: &[usize]) -> Factor {
    let n = net.len();
    let mut factors: Vec<Factor> = net
        .cpts()
        .iter()
        .map(|cpt| Factor::from_cpt(cpt, evidence))
        .collect();

    let targets: Vec<usize> = (0..n)
        .filter(|v| evidence[*v].is_none() && !keep.contains(v))
        .collect();

    for var in min_degree_order(n, &factors, &targets) {
        let (touching, rest): (Vec<Factor>, Vec<Factor>) =
            factors.into_iter().partition(|f| f.contains(var));
        factors = rest;
        if let Some(product) = multiply(touching) {
            factors.push(product.sum_out(var));
        }
    }

    let result = multiply(factors).unwrap_or_else(|| Factor::scalar(1.0));
    result.reorder(keep)
}

fn multiply(factors: Vec<Factor>) -> Option<Factor> {
    let mut iter = factors.into_iter();
    let first = iter.next()?;
    Some(iter.fold(first, |acc, f| acc.product(&f)))
}
