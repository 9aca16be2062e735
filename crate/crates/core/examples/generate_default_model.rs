//! Regenerates `models/curriculum.default.json` and
//! `data/synthetic_cohort.csv`.
//!
//! A hand-written design network encodes the qualitative relationships the
//! bundled model should show (current grade drives recommendation and
//! satisfaction; publications help recommendation; past average drives
//! current grade). A cohort is drawn from it with exact AG quotas so the AG
//! column reproduces the published 0.41 / 0.30 / 0.29 split, and the
//! bundled tables are fitted to that cohort with Laplace smoothing 1. The
//! AG prior is then taken from the unsmoothed cohort counts.
//!
//!     cargo run -p curriculum-bn --example generate_default_model [repo-root]

use std::fs;
use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use curriculum_bn::learning::{mle_fit, RecordSet};
use curriculum_bn::model::{save_model, BayesianNetwork, ModelDocument};

const AG_QUOTA: [usize; 3] = [4_100, 3_000, 2_900];
const SEED: u64 = 20_130_117;
const SMOOTHING: f64 = 1.0;
const DECIMALS: i32 = 6;

const DESCRIPTION: &str = "Curriculum-effectiveness network over nine variables: last-term average \
grade (AG), student state (S), activity (A), number of selected courses (NumC), research background \
(RBG), publications (Pub), current-term grade (G), recommendation letter (RecL) and satisfaction. \
Edges: AG, S, A, NumC, RBG, Pub -> G; RBG -> Pub; G, Pub -> RecL; G, RecL -> Satisfaction. \
Publications are conditioned on research background and satisfaction on current grade and \
recommendation letter. The AG prior is the published sample table (A 0.41, B 0.30, C 0.29). \
All other tables are ILLUSTRATIVE: fitted with Laplace smoothing 1 to data/synthetic_cohort.csv, \
a scripted synthetic cohort, and rounded to six decimals. They are not empirical estimates. The \
S, A and NumC vocabularies are placeholders.";

fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

fn binary(logit: f64) -> Vec<f64> {
    let p = sigmoid(logit);
    vec![p, 1.0 - p]
}

/// Design network: parametric tables, not bundled.
fn design() -> BayesianNetwork {
    let ag = [1.5, 0.0, -1.5];
    let s = [0.5, -0.7];
    let a = [-0.6, 0.0, 0.6];
    let numc = [0.4, 0.0, -0.6];
    let rbg = [0.3, 0.0];
    let pub_ = [0.3, 0.0];
    let mut grade_rows = Vec::new();
    for x_ag in ag {
        for x_s in s {
            for x_a in a {
                for x_n in numc {
                    for x_r in rbg {
                        for x_p in pub_ {
                            let score = x_ag + x_s + x_a + x_n + x_r + x_p;
                            // ordered logistic with cut points 0.8 and -1.0
                            let le_a = sigmoid(score - 0.8);
                            let le_b = sigmoid(score + 1.0);
                            grade_rows.push(vec![le_a, le_b - le_a, 1.0 - le_b]);
                        }
                    }
                }
            }
        }
    }
    let g_rec = [1.5, 0.0, -1.8];
    let pub_rec = [1.6, -0.6];
    let mut rec_rows = Vec::new();
    for gr in g_rec {
        for pr in pub_rec {
            rec_rows.push(binary(gr + pr - 0.2));
        }
    }
    let g_sat = [1.3, 0.1, -1.2];
    let rec_sat = [0.35, -0.25];
    let mut sat_rows = Vec::new();
    for gs in g_sat {
        for rs in rec_sat {
            sat_rows.push(binary(gs + rs));
        }
    }

    variables(ModelDocument::new("curriculum-design"))
        .cpt("AG", &[], vec![vec![0.41, 0.30, 0.29]])
        .cpt("S", &[], vec![vec![0.8, 0.2]])
        .cpt("A", &[], vec![vec![0.25, 0.45, 0.30]])
        .cpt("NumC", &[], vec![vec![0.25, 0.5, 0.25]])
        .cpt("RBG", &[], vec![vec![0.35, 0.65]])
        .cpt("Pub", &["RBG"], vec![vec![0.55, 0.45], vec![0.12, 0.88]])
        .cpt("G", &["AG", "S", "A", "NumC", "RBG", "Pub"], grade_rows)
        .cpt("RecL", &["G", "Pub"], rec_rows)
        .cpt("Satisfaction", &["G", "RecL"], sat_rows)
        .build()
        .expect("design network is valid")
}

fn variables(doc: ModelDocument) -> ModelDocument {
    doc.variable("AG", ["A", "B", "C"])
        .variable("S", ["active", "inactive"])
        .variable("A", ["low", "medium", "high"])
        .variable("NumC", ["few", "normal", "many"])
        .variable("RBG", ["yes", "no"])
        .variable("Pub", ["yes", "no"])
        .variable("G", ["A", "B", "C"])
        .variable("RecL", ["approved", "rejected"])
        .variable("Satisfaction", ["high", "low"])
}

fn draw(row: &[f64], u: f64) -> usize {
    let mut acc = 0.0;
    for (i, &p) in row.iter().enumerate() {
        acc += p;
        if u < acc {
            return i;
        }
    }
    row.len() - 1
}

/// Ancestral sampling with AG fixed by a shuffled quota list.
fn cohort(net: &BayesianNetwork) -> RecordSet {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut ag: Vec<usize> = AG_QUOTA
        .iter()
        .enumerate()
        .flat_map(|(s, &n)| std::iter::repeat_n(s, n))
        .collect();
    ag.shuffle(&mut rng);
    let ag_index = net.index_of("AG").unwrap();
    let rows = ag
        .into_iter()
        .map(|ag_state| {
            let mut states = vec![0; net.len()];
            for &v in net.topological_order() {
                if v == ag_index {
                    states[v] = ag_state;
                    continue;
                }
                let parents: Vec<usize> = net.parents(v).iter().map(|&p| states[p]).collect();
                states[v] = draw(net.cpt_row(v, &parents).unwrap(), rng.random::<f64>());
            }
            states
        })
        .collect();
    RecordSet::new(net.variables().to_vec(), rows).unwrap()
}

/// Rounds a row to fixed decimals, putting the rounding remainder on the
/// largest entry so the decimal row sums to exactly one.
fn round_row(row: &[f64]) -> Vec<f64> {
    let scale = 10f64.powi(DECIMALS);
    let mut units: Vec<i64> = row.iter().map(|p| (p * scale).round() as i64).collect();
    let remainder = scale as i64 - units.iter().sum::<i64>();
    let largest = (0..units.len()).fold(0, |b, i| if units[i] > units[b] { i } else { b });
    units[largest] += remainder;
    units.iter().map(|&u| u as f64 / scale).collect()
}

fn main() {
    let root = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../.."));

    let design = design();
    let data = cohort(&design);
    let fitted = mle_fit(&design.structure(), &data, SMOOTHING).unwrap();
    let raw = mle_fit(&design.structure(), &data, 0.0).unwrap();

    let mut doc = fitted.to_document();
    doc.name = "curriculum-default".to_string();
    doc.description = Some(DESCRIPTION.to_string());
    for cpt in &mut doc.cpts {
        let rows = cpt.rows.as_mut().unwrap();
        if cpt.child == "AG" {
            *rows = vec![raw.cpt(raw.index_of("AG").unwrap()).row(0).to_vec()];
        }
        for row in rows.iter_mut() {
            *row = round_row(row);
        }
    }
    let model = doc.build().expect("rounded model is valid");

    fs::create_dir_all(root.join("models")).unwrap();
    fs::create_dir_all(root.join("data")).unwrap();
    fs::write(root.join("models/curriculum.default.json"), save_model(&model)).unwrap();
    fs::write(root.join("data/synthetic_cohort.csv"), data.to_csv_string()).unwrap();
    eprintln!(
        "wrote {} variables, {} cohort records under {}",
        model.len(),
        data.len(),
        root.display()
    );
}
