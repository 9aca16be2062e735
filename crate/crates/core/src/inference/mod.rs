//! Exact inference: joint probability by the chain rule, evidence
//! likelihood, posterior marginals, MAP and maximum-likelihood assignments.
//!
//! Production queries run variable elimination; [`enumerate_joint`] builds
//! the full joint table as an independent oracle for small networks.

mod elimination;
mod enumerate;
mod factor;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{Assignment, BayesianNetwork, Evidence};

pub use enumerate::{enumerate_joint, enumerate_joint_with_cap, JointTable, DEFAULT_JOINT_CAP};

pub(crate) use elimination::eliminate;

/// Largest hypothesis space (product of query-variable state counts) that
/// MAP and ML queries will score.
pub const HYPOTHESIS_CAP: u128 = 100_000;

/// A distribution over the states of one variable.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Distribution {
    pub variable: String,
    pub states: Vec<String>,
    pub probabilities: Vec<f64>,
}

impl Distribution {
    pub fn get(&self, state: &str) -> Option<f64> {
        self.states
            .iter()
            .position(|s| s == state)
            .map(|i| self.probabilities[i])
    }

    /// Index of the most probable state; the first declared wins ties.
    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (i, &p) in self.probabilities.iter().enumerate() {
            if p > self.probabilities[best] {
                best = i;
            }
        }
        best
    }

    pub fn sum(&self) -> f64 {
        self.probabilities.iter().sum()
    }
}

/// Winning hypothesis of a MAP or ML query.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MapResult {
    /// Bindings over the query variables, in topological order.
    pub assignment: Evidence,
    /// Posterior probability of the assignment given the evidence.
    pub probability: f64,
}

pub(crate) fn joint_probability_indices(net: &BayesianNetwork, states: &[usize]) -> f64 {
    let mut p = 1.0;
    for &v in net.topological_order() {
        let cpt = net.cpt(v);
        let row = cpt.parents().iter().fold(0, |acc, &q| acc * net.variable(q).card() + states[q]);
        p *= cpt.prob(row, states[v]);
    }
    p
}

/// Chain-rule product of one CPT entry per variable.
pub fn joint_probability(net: &BayesianNetwork, assignment: &Assignment) -> Result<f64> {
    let states = net.resolve_assignment(assignment)?;
    Ok(joint_probability_indices(net, &states))
}

/// Probability of observing the evidence; 1 for empty evidence.
pub fn evidence_likelihood(net: &BayesianNetwork, evidence: &Evidence) -> Result<f64> {
    let slots = net.resolve_evidence(evidence)?;
    if evidence.is_empty() {
        return Ok(1.0);
    }
    Ok(eliminate(net, &slots, &[]).values[0])
}

/// Posterior distribution of `query` given the evidence.
pub fn posterior_marginal(net: &BayesianNetwork, evidence: &Evidence, query: &str) -> Result<Distribution> {
    let slots = net.resolve_evidence(evidence)?;
    let q = net.index_of(query)?;
    posterior_indices(net, &slots, q)
}

pub(crate) fn posterior_indices(net: &BayesianNetwork, slots: &[Option<usize>], q: usize) -> Result<Distribution> {
    let var = net.variable(q);
    let probabilities = match slots[q] {
        Some(s) => {
            if eliminate(net, slots, &[]).values[0] <= 0.0 {
                return Err(Error::ImpossibleEvidence);
            }
            (0..var.card()).map(|i| if i == s { 1.0 } else { 0.0 }).collect()
        }
        None => {
            let factor = eliminate(net, slots, &[q]);
            let total = factor.total();
            if total <= 0.0 {
                return Err(Error::ImpossibleEvidence);
            }
            factor.values.iter().map(|p| p / total).collect()
        }
    };
    Ok(Distribution {
        variable: var.name.clone(),
        states: var.states.clone(),
        probabilities,
    })
}

/// Resolves and checks a MAP/ML query set; returns it in topological order.
fn query_indices(net: &BayesianNetwork, slots: &[Option<usize>], query: &[&str]) -> Result<Vec<usize>> {
    if query.is_empty() {
        return Err(Error::argument("query variable set is empty"));
    }
    let mut picked = vec![false; net.len()];
    for name in query {
        let v = net.index_of(name)?;
        if slots[v].is_some() {
            return Err(Error::argument(format!("query variable '{name}' is also observed")));
        }
        if std::mem::replace(&mut picked[v], true) {
            return Err(Error::argument(format!("query variable '{name}' listed twice")));
        }
    }
    let ordered: Vec<usize> = net.topological_order().iter().copied().filter(|&v| picked[v]).collect();
    let space: u128 = ordered.iter().map(|&v| net.variable(v).card() as u128).product();
    if space > HYPOTHESIS_CAP {
        return Err(Error::SizeLimit {
            what: "hypothesis space",
            needed: space,
            limit: HYPOTHESIS_CAP,
        });
    }
    Ok(ordered)
}

fn hypothesis(net: &BayesianNetwork, query: &[usize], mut index: usize) -> Evidence {
    let mut states = vec![0; query.len()];
    for (slot, &v) in states.iter_mut().zip(query).rev() {
        let card = net.variable(v).card();
        *slot = index % card;
        index /= card;
    }
    let mut ev = Evidence::new();
    for (&v, &s) in query.iter().zip(&states) {
        let var = net.variable(v);
        ev.set(var.name.clone(), var.states[s].clone());
    }
    ev
}

/// Relative margin by which a later hypothesis must beat the current best.
/// Scores within it count as tied, so mathematically equal hypotheses go to
/// the first one whatever the elimination order's roundoff.
pub const SCORE_TIE_TOLERANCE: f64 = 1e-12;

fn first_max(scores: impl Iterator<Item = (usize, f64)>) -> Option<(usize, f64)> {
    let mut best: Option<(usize, f64)> = None;
    for (i, s) in scores {
        if best.is_none_or(|(_, b)| s > b + b.abs() * SCORE_TIE_TOLERANCE) {
            best = Some((i, s));
        }
    }
    best
}

/// Maximum a posteriori assignment over `query`: the hypothesis maximising
/// `P(h, e)`. Nuisance variables are summed out before maximising. Ties go
/// to the lexicographically first hypothesis, variables taken in
/// topological order and states in declaration order.
pub fn map_assignment(net: &BayesianNetwork, evidence: &Evidence, query: &[&str]) -> Result<MapResult> {
    let slots = net.resolve_evidence(evidence)?;
    let q = query_indices(net, &slots, query)?;
    let joint = eliminate(net, &slots, &q);
    let p_e = joint.total();
    if p_e <= 0.0 {
        return Err(Error::ImpossibleEvidence);
    }
    let (best, score) = first_max(joint.values.iter().copied().enumerate()).expect("non-empty space");
    Ok(MapResult {
        assignment: hypothesis(net, &q, best),
        probability: score / p_e,
    })
}

/// Maximum-likelihood assignment over `query`: the hypothesis maximising
/// `P(e | h)`. Hypotheses with zero prior probability are skipped.
pub fn ml_assignment(net: &BayesianNetwork, evidence: &Evidence, query: &[&str]) -> Result<MapResult> {
    let slots = net.resolve_evidence(evidence)?;
    let q = query_indices(net, &slots, query)?;
    let joint = eliminate(net, &slots, &q);
    let p_e = joint.total();
    if p_e <= 0.0 {
        return Err(Error::ImpossibleEvidence);
    }
    let prior = eliminate(net, &vec![None; net.len()], &q);
    let likelihoods = joint
        .values
        .iter()
        .zip(&prior.values)
        .enumerate()
        .filter(|(_, (_, &ph))| ph > 0.0)
        .map(|(i, (&phe, &ph))| (i, phe / ph));
    let (best, _) = first_max(likelihoods).expect("some hypothesis has positive prior");
    Ok(MapResult {
        assignment: hypothesis(net, &q, best),
        probability: joint.values[best] / p_e,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ModelDocument;

    // X -> Y with P(X=t)=0.6, P(Y=t|X=t)=0.9, P(Y=t|X=f)=0.2
    fn two_node() -> BayesianNetwork {
        ModelDocument::new("xy")
            .variable("X", ["t", "f"])
            .variable("Y", ["t", "f"])
            .cpt("X", &[], vec![vec![0.6, 0.4]])
            .cpt("Y", &["X"], vec![vec![0.9, 0.1], vec![0.2, 0.8]])
            .build()
            .unwrap()
    }

    fn ev(s: &str) -> Evidence {
        Evidence::parse(s).unwrap()
    }

    #[test]
    fn joint_is_chain_rule_product() {
        let net = two_node();
        let p = joint_probability(&net, &Assignment::parse("X=t,Y=f").unwrap()).unwrap();
        assert!((p - 0.06).abs() < 1e-15);
    }

    #[test]
    fn joint_rejects_partial_and_unknown() {
        let net = two_node();
        assert!(matches!(
            joint_probability(&net, &Assignment::parse("X=t").unwrap()),
            Err(Error::Argument(_))
        ));
        assert!(matches!(
            joint_probability(&net, &Assignment::parse("X=t,Y=maybe").unwrap()),
            Err(Error::UnknownState { .. })
        ));
    }

    #[test]
    fn zero_factor_annihilates() {
        let net = ModelDocument::new("roots")
            .variable("A", ["a0", "a1"])
            .variable("B", ["b0", "b1"])
            .cpt("A", &[], vec![vec![0.3, 0.7]])
            .cpt("B", &[], vec![vec![1.0, 0.0]])
            .build()
            .unwrap();
        let a = |s| joint_probability(&net, &Assignment::parse(s).unwrap()).unwrap();
        assert!((a("A=a1,B=b0") - 0.7).abs() < 1e-15);
        assert_eq!(a("A=a1,B=b1"), 0.0);
    }

    #[test]
    fn likelihood_of_observed_child() {
        let net = two_node();
        assert_eq!(evidence_likelihood(&net, &Evidence::new()).unwrap(), 1.0);
        assert!((evidence_likelihood(&net, &ev("Y=t")).unwrap() - 0.62).abs() < 1e-15);
        assert!((evidence_likelihood(&net, &ev("Y=f,X=t")).unwrap() - 0.06).abs() < 1e-15);
    }

    #[test]
    fn posterior_by_bayes_rule() {
        let net = two_node();
        let d = posterior_marginal(&net, &ev("Y=t"), "X").unwrap();
        assert!((d.probabilities[0] - 0.54 / 0.62).abs() < 1e-12);
        assert!((d.probabilities[1] - 0.08 / 0.62).abs() < 1e-12);
    }

    #[test]
    fn observed_query_is_one_hot() {
        let net = two_node();
        let d = posterior_marginal(&net, &ev("X=f"), "X").unwrap();
        assert_eq!(d.probabilities, vec![0.0, 1.0]);
    }

    #[test]
    fn impossible_evidence_is_an_error() {
        let net = ModelDocument::new("z")
            .variable("X", ["t", "f"])
            .variable("Y", ["t", "f"])
            .cpt("X", &[], vec![vec![1.0, 0.0]])
            .cpt("Y", &["X"], vec![vec![1.0, 0.0], vec![0.5, 0.5]])
            .build()
            .unwrap();
        assert!(matches!(
            posterior_marginal(&net, &ev("Y=f"), "X"),
            Err(Error::ImpossibleEvidence)
        ));
        assert!(matches!(
            posterior_marginal(&net, &ev("X=f"), "X"),
            Err(Error::ImpossibleEvidence)
        ));
        assert!(matches!(
            map_assignment(&net, &ev("Y=f"), &["X"]),
            Err(Error::ImpossibleEvidence)
        ));
    }

    #[test]
    fn map_and_ml_on_two_node() {
        let net = two_node();
        let m = map_assignment(&net, &ev("Y=t"), &["X"]).unwrap();
        assert_eq!(m.assignment.get("X"), Some("t"));
        assert!((m.probability - 0.54 / 0.62).abs() < 1e-12);
        let ml = ml_assignment(&net, &ev("Y=t"), &["X"]).unwrap();
        assert_eq!(ml.assignment.get("X"), Some("t"));
    }

    #[test]
    fn skewed_prior_separates_map_from_ml() {
        let net = ModelDocument::new("skew")
            .variable("X", ["t", "f"])
            .variable("Y", ["t", "f"])
            .cpt("X", &[], vec![vec![0.05, 0.95]])
            .cpt("Y", &["X"], vec![vec![0.9, 0.1], vec![0.5, 0.5]])
            .build()
            .unwrap();
        let m = map_assignment(&net, &ev("Y=t"), &["X"]).unwrap();
        let ml = ml_assignment(&net, &ev("Y=t"), &["X"]).unwrap();
        assert_eq!(m.assignment.get("X"), Some("f"));
        assert_eq!(ml.assignment.get("X"), Some("t"));
        // P(X=f | Y=t) = 0.475 / 0.52
        assert!((m.probability - 0.475 / 0.52).abs() < 1e-12);
        assert!((ml.probability - 0.045 / 0.52).abs() < 1e-12);
    }

    #[test]
    fn uniform_tie_goes_to_first_state() {
        let net = ModelDocument::new("u")
            .variable("U", ["first", "second"])
            .cpt("U", &[], vec![vec![0.5, 0.5]])
            .build()
            .unwrap();
        let m = map_assignment(&net, &Evidence::new(), &["U"]).unwrap();
        assert_eq!(m.assignment.get("U"), Some("first"));
        assert_eq!(m.probability, 0.5);
    }

    #[test]
    fn query_set_errors() {
        let net = two_node();
        assert!(matches!(map_assignment(&net, &Evidence::new(), &[]), Err(Error::Argument(_))));
        assert!(matches!(map_assignment(&net, &ev("X=t"), &["X"]), Err(Error::Argument(_))));
        assert!(matches!(map_assignment(&net, &Evidence::new(), &["X", "X"]), Err(Error::Argument(_))));
        assert!(matches!(
            map_assignment(&net, &Evidence::new(), &["Q"]),
            Err(Error::UnknownVariable(_))
        ));
    }

    #[test]
    fn hypothesis_space_cap() {
        let mut doc = ModelDocument::new("wide");
        let names: Vec<String> = (0..17).map(|i| format!("V{i}")).collect();
        for n in &names {
            doc = doc.variable(n, ["0", "1"]).cpt(n, &[], vec![vec![0.5, 0.5]]);
        }
        let net = doc.build().unwrap();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        assert!(matches!(
            map_assignment(&net, &Evidence::new(), &refs),
            Err(Error::SizeLimit { .. })
        ));
        assert!(map_assignment(&net, &Evidence::new(), &refs[..16]).is_ok());
    }

    #[test]
    fn enumeration_of_two_node() {
        let net = two_node();
        let t = enumerate_joint(&net).unwrap();
        let expect = [0.54, 0.06, 0.08, 0.32];
        for (a, b) in t.values.iter().zip(expect) {
            assert!((a - b).abs() < 1e-15);
        }
        assert!(matches!(enumerate_joint_with_cap(&net, 3), Err(Error::SizeLimit { .. })));
    }

    #[test]
    fn enumeration_of_single_prior() {
        let net = ModelDocument::new("one")
            .variable("B", ["t", "f"])
            .cpt("B", &[], vec![vec![0.3, 0.7]])
            .build()
            .unwrap();
        assert_eq!(enumerate_joint(&net).unwrap().values, vec![0.3, 0.7]);
    }

    #[test]
    fn roundoff_ties_go_to_the_first_hypothesis() {
        assert_eq!(first_max([(0, 0.1), (1, 0.1 + 1e-17), (2, 0.09)].into_iter()), Some((0, 0.1)));
        assert_eq!(first_max([(0, 0.1), (1, 0.11)].into_iter()), Some((1, 0.11)));
        let net = ModelDocument::new("u")
            .variable("A", ["a0", "a1", "a2"])
            .variable("B", ["b0", "b1", "b2", "b3"])
            .cpt("A", &[], vec![vec![1.0 / 3.0; 3]])
            .cpt("B", &[], vec![vec![0.25; 4]])
            .build()
            .unwrap();
        for m in [map_assignment(&net, &ev(""), &["A", "B"]), ml_assignment(&net, &ev(""), &["A", "B"])] {
            assert_eq!(m.unwrap().assignment, ev("A=a0,B=b0"));
        }
    }
}
