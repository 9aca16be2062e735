use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::learning::RecordSet;
use crate::model::BayesianNetwork;

/// Draws `n` records by ancestral sampling: variables are visited in
/// topological order and each is drawn from its CPT row given the states
/// already drawn for its parents.
///
/// The generator is ChaCha8 seeded with `seed` via `seed_from_u64`, so the
/// output is a pure function of `(net, n, seed)`.
pub fn forward_sample(net: &BayesianNetwork, n: usize, seed: u64) -> Result<RecordSet> {
    if n == 0 {
        return Err(Error::argument("sample size must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::with_capacity(n);
    for _ in 0..n {
        let mut states = vec![0usize; net.len()];
        for &v in net.topological_order() {
            let cpt = net.cpt(v);
            let cfg = cpt
                .parents()
                .iter()
                .zip(cpt.parent_cards())
                .fold(0, |acc, (&p, &k)| acc * k + states[p]);
            states[v] = draw(cpt.row(cfg), rng.random::<f64>());
        }
        rows.push(states);
    }
    RecordSet::new(net.variables().to_vec(), rows)
}

/// Inverse-CDF draw for `u` in [0, 1). Rounding slack at the top end falls
/// to the last state with positive probability.
fn draw(row: &[f64], u: f64) -> usize {
    let mut acc = 0.0;
    for (i, &p) in row.iter().enumerate() {
        acc += p;
        if u < acc {
            return i;
        }
    }
    row.iter().rposition(|&p| p > 0.0).unwrap_or(row.len() - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ModelDocument;

    #[test]
    fn inverse_cdf() {
        assert_eq!(draw(&[0.2, 0.3, 0.5], 0.0), 0);
        assert_eq!(draw(&[0.2, 0.3, 0.5], 0.2), 1);
        assert_eq!(draw(&[0.2, 0.3, 0.5], 0.99), 2);
        assert_eq!(draw(&[0.0, 1.0], 0.0), 1);
        assert_eq!(draw(&[0.5, 0.5 - 1e-12, 0.0], 1.0 - 1e-13), 1);
    }

    #[test]
    fn degenerate_prior() {
        let net = ModelDocument::new("d")
            .variable("X", ["t", "f"])
            .cpt("X", &[], vec![vec![1.0, 0.0]])
            .build()
            .unwrap();
        let rs = forward_sample(&net, 500, 9).unwrap();
        assert!(rs.rows().iter().all(|r| r[0] == 0));
    }

    #[test]
    fn seeded_output_repeats() {
        let net = ModelDocument::new("d")
            .variable("X", ["t", "f"])
            .variable("Y", ["a", "b", "c"])
            .cpt("X", &[], vec![vec![0.3, 0.7]])
            .cpt("Y", &["X"], vec![vec![0.2, 0.3, 0.5], vec![0.6, 0.2, 0.2]])
            .build()
            .unwrap();
        let a = forward_sample(&net, 300, 42).unwrap();
        assert_eq!(a, forward_sample(&net, 300, 42).unwrap());
        assert_ne!(a, forward_sample(&net, 300, 43).unwrap());
        assert!(forward_sample(&net, 0, 1).is_err());
    }
}
