//! Random networks and evidence for property and acceptance tests.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;

use curriculum_bn::inference::JointTable;
use curriculum_bn::model::{BayesianNetwork, Evidence, ModelDocument};

#[derive(Debug, Clone, Copy)]
pub struct NetSpec {
    pub max_vars: usize,
    pub max_states: usize,
    pub max_parents: usize,
    pub max_cells: u128,
    /// Chance that a CPT entry is forced to zero (one entry per row stays
    /// positive).
    pub zero_rate: f64,
}

impl NetSpec {
    pub const SMALL: NetSpec = NetSpec {
        max_vars: 5,
        max_states: 3,
        max_parents: 2,
        max_cells: 243,
        zero_rate: 0.0,
    };
}

fn random_row<R: Rng>(rng: &mut R, card: usize, zero_rate: f64) -> Vec<f64> {
    let mut row: Vec<f64> = (0..card).map(|_| rng.random_range(0.05..1.0)).collect();
    let keep = rng.random_range(0..card);
    for (i, p) in row.iter_mut().enumerate() {
        if i != keep && rng.random_bool(zero_rate) {
            *p = 0.0;
        }
    }
    let sum: f64 = row.iter().sum();
    row.iter().map(|p| p / sum).collect()
}

/// A random valid network. Variables are declared in a shuffled order so
/// that declaration and topological order differ.
pub fn random_network<R: Rng>(rng: &mut R, spec: NetSpec) -> BayesianNetwork {
    let n = rng.random_range(2..=spec.max_vars);
    let mut cards: Vec<usize> = (0..n).map(|_| rng.random_range(2..=spec.max_states)).collect();
    while cards.iter().map(|&c| c as u128).product::<u128>() > spec.max_cells {
        let i = cards.iter().enumerate().max_by_key(|(_, &c)| c).unwrap().0;
        if cards[i] == 2 {
            cards.pop();
        } else {
            cards[i] -= 1;
        }
    }
    let n = cards.len();
    // position in causal order -> declaration slot
    let mut slot: Vec<usize> = (0..n).collect();
    slot.shuffle(rng);
    let name = |k: usize| format!("V{}", slot[k]);

    let mut doc = ModelDocument::new("random");
    let mut decl: Vec<(usize, Vec<String>)> = (0..n)
        .map(|k| (slot[k], (0..cards[k]).map(|s| format!("s{s}")).collect()))
        .collect();
    decl.sort();
    for (v, states) in decl {
        doc = doc.variable(&format!("V{v}"), states);
    }
    for k in 0..n {
        let mut earlier: Vec<usize> = (0..k).collect();
        earlier.shuffle(rng);
        let m = rng.random_range(0..=spec.max_parents.min(k));
        let parents: Vec<usize> = earlier.into_iter().take(m).collect();
        let rows = parents.iter().map(|&p| cards[p]).product::<usize>();
        let table = (0..rows).map(|_| random_row(rng, cards[k], spec.zero_rate)).collect();
        let pnames: Vec<String> = parents.iter().map(|&p| name(p)).collect();
        let prefs: Vec<&str> = pnames.iter().map(String::as_str).collect();
        doc = doc.cpt(&name(k), &prefs, table);
    }
    doc.build().expect("generated network is valid")
}

/// Each variable bound with probability `rate` to a uniformly drawn state.
pub fn random_evidence<R: Rng>(rng: &mut R, net: &BayesianNetwork, rate: f64) -> Evidence {
    let mut ev = Evidence::new();
    for v in net.variables() {
        if rng.random_bool(rate) {
            let s = rng.random_range(0..v.card());
            ev.set(v.name.clone(), v.states[s].clone());
        }
    }
    ev
}

/// Class `C` with one to five attribute children `A0..`, the shape a naive
/// Bayes classifier assumes.
pub fn star<R: Rng>(rng: &mut R, zero_rate: f64) -> BayesianNetwork {
    let attrs = rng.random_range(1..=5);
    let card = |rng: &mut R| rng.random_range(2..=3);
    let class_card = card(rng);
    let mut doc = ModelDocument::new("star").variable("C", (0..class_card).map(|s| format!("c{s}")));
    let row = |rng: &mut R, k: usize| {
        let mut r: Vec<f64> = (0..k)
            .map(|_| if rng.random_bool(zero_rate) { 0.0 } else { rng.random_range(0.05..1.0) })
            .collect();
        if r.iter().all(|&p| p == 0.0) {
            r[0] = 1.0;
        }
        let s: f64 = r.iter().sum();
        r.into_iter().map(|p| p / s).collect::<Vec<f64>>()
    };
    let prior = row(rng, class_card);
    doc = doc.cpt("C", &[], vec![prior]);
    for a in 0..attrs {
        let k = card(rng);
        let name = format!("A{a}");
        doc = doc.variable(&name, (0..k).map(|s| format!("x{s}")));
        let table = (0..class_card).map(|_| row(rng, k)).collect();
        doc = doc.cpt(&name, &["C"], table);
    }
    doc.build().unwrap()
}

pub fn slots(net: &BayesianNetwork, ev: &Evidence) -> Vec<Option<usize>> {
    net.resolve_evidence(ev).unwrap()
}

/// Decoded cell states of a joint table, computed once for repeated scans.
pub struct Cells {
    pub states: Vec<Vec<usize>>,
}

impl Cells {
    pub fn new(table: &JointTable) -> Self {
        Cells {
            states: (0..table.len()).map(|c| table.states_of(c)).collect(),
        }
    }

    pub fn consistent(&self, cell: usize, slots: &[Option<usize>]) -> bool {
        self.states[cell]
            .iter()
            .zip(slots)
            .all(|(s, e)| e.is_none_or(|e| e == *s))
    }

    /// `P(a = i, b = j, e)` as a dense `card_a × card_b` table.
    pub fn pair_table(&self, table: &JointTable, slots: &[Option<usize>], a: usize, ca: usize, b: usize, cb: usize) -> Vec<Vec<f64>> {
        let mut t = vec![vec![0.0; cb]; ca];
        for c in 0..table.len() {
            if self.consistent(c, slots) {
                let s = &self.states[c];
                t[s[a]][s[b]] += table.values[c];
            }
        }
        t
    }
}

pub fn logit(p: f64) -> f64 {
    (p / (1.0 - p)).ln()
}

/// Oracle impact level from a pair table `P(x, t, e)`: `None` when the
/// baseline or a conditional is 0 or 1 (log-odds undefined).
pub fn oracle_impact(pair: &[Vec<f64>], state: usize) -> Option<(usize, f64)> {
    let total: f64 = pair.iter().flatten().sum();
    let baseline: f64 = pair.iter().map(|row| row[state]).sum::<f64>() / total;
    if baseline <= 0.0 || baseline >= 1.0 {
        return None;
    }
    let mut best: Option<(usize, f64)> = None;
    for (x, row) in pair.iter().enumerate() {
        let px: f64 = row.iter().sum();
        if px <= 0.0 {
            continue;
        }
        let p = row[state] / px;
        if p <= 0.0 || p >= 1.0 {
            return None;
        }
        let swing = logit(p) - logit(baseline);
        if best.is_none_or(|(_, b): (usize, f64)| swing.abs() > b.abs() + 1e-12) {
            best = Some((x, swing));
        }
    }
    best
}
