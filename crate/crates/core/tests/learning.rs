mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{random_network, star, NetSpec};
use curriculum_bn::curriculum::build_default_model;
use curriculum_bn::inference::posterior_marginal;
use curriculum_bn::learning::{forward_sample, mle_fit, mle_fit_with_report, NaiveBayesModel, RecordSet};
use curriculum_bn::model::{Evidence, ModelDocument, Variable, ROW_SUM_TOLERANCE};
use curriculum_bn::Error;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn naive_bayes_matches_network_inference(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let net = star(&mut rng, 0.1);
        let nb = NaiveBayesModel::from_network(&net, "C").unwrap();
        let attrs: Vec<&Variable> = net.variables().iter().skip(1).collect();
        let total: usize = attrs.iter().map(|a| a.card()).product();
        for mut k in 0..total {
            let mut ev = Evidence::new();
            for a in attrs.iter().rev() {
                ev.set(a.name.clone(), a.states[k % a.card()].clone());
                k /= a.card();
            }
            match (nb.predict(&ev), posterior_marginal(&net, &ev, "C")) {
                (Ok((label, d)), Ok(bn)) => {
                    for (a, b) in d.probabilities.iter().zip(&bn.probabilities) {
                        prop_assert!((a - b).abs() <= 1e-10);
                    }
                    prop_assert_eq!(&label, &bn.states[d.argmax()]);
                }
                (Err(Error::ImpossibleEvidence), Err(Error::ImpossibleEvidence)) => {}
                (a, b) => prop_assert!(false, "{a:?} vs {b:?}"),
            }
        }
    }

    #[test]
    fn fitted_rows_are_valid(seed in any::<u64>(), n in 1usize..200, smoothing in prop_oneof![Just(0.0), 0.0f64..5.0]) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let net = random_network(&mut rng, NetSpec { zero_rate: 0.2, ..NetSpec::SMALL });
        let data = forward_sample(&net, n, seed).unwrap();
        let fit = mle_fit(&net.structure(), &data, smoothing).unwrap();
        for cpt in fit.cpts() {
            for row in cpt.rows() {
                prop_assert!(row.iter().all(|p| (0.0..=1.0).contains(p)));
                prop_assert!((row.iter().sum::<f64>() - 1.0).abs() <= ROW_SUM_TOLERANCE);
            }
        }
    }
}

#[test]
fn naive_bayes_train_equals_star_fit() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let net = star(&mut rng, 0.0);
    let data = forward_sample(&net, 500, 1).unwrap();
    let names: Vec<&str> = net.variables().iter().skip(1).map(|v| v.name.as_str()).collect();
    let nb = NaiveBayesModel::train("C", &names, &data, 1.0).unwrap();
    let fit = mle_fit(&net.structure(), &data, 1.0).unwrap();
    assert_eq!(nb.to_network().unwrap().cpts(), fit.cpts());
    assert_eq!(nb.conditional_count(), names.len() * net.variable(0).card());
}

#[test]
fn large_smoothing_flattens_rows() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..10 {
        let net = random_network(&mut rng, NetSpec { zero_rate: 0.3, ..NetSpec::SMALL });
        let data = forward_sample(&net, 300, 2).unwrap();
        let fit = mle_fit(&net.structure(), &data, 1e6).unwrap();
        for cpt in fit.cpts() {
            let uniform = 1.0 / cpt.card() as f64;
            for row in cpt.rows() {
                assert!(row.iter().all(|p| (p - uniform).abs() <= 1e-3));
            }
        }
    }
}

#[test]
fn counting_examples() {
    let cols = vec![Variable::new("X", ["t", "f"])];
    let labels: Vec<Vec<&str>> = "tttffftttf".chars().map(|c| vec![if c == 't' { "t" } else { "f" }]).collect();
    let data = RecordSet::from_labels(cols, &labels).unwrap();
    let structure = ModelDocument::new("x")
        .variable("X", ["t", "f"])
        .cpt("X", &[], vec![vec![0.5, 0.5]])
        .build()
        .unwrap()
        .structure();
    assert!((mle_fit(&structure, &data, 0.0).unwrap().cpt(0).prob(0, 0) - 0.6).abs() < 1e-15);
    assert!((mle_fit(&structure, &data, 1.0).unwrap().cpt(0).prob(0, 0) - 7.0 / 12.0).abs() < 1e-15);
}

#[test]
fn single_record_fit_is_deterministic_where_seen() {
    let net = build_default_model();
    let data = forward_sample(&net, 1, 9).unwrap();
    let (fit, report) = mle_fit_with_report(&net.structure(), &data, 0.0).unwrap();
    let record = &data.rows()[0];
    for (v, cpt) in fit.cpts().iter().enumerate() {
        let cfg: Vec<usize> = cpt.parents().iter().map(|&p| record[p]).collect();
        let seen = cpt.config_index(&cfg).unwrap();
        for r in 0..cpt.num_rows() {
            let row = cpt.row(r);
            if r == seen {
                assert_eq!(row[record[v]], 1.0);
            } else {
                assert!(row.iter().all(|&p| p == 1.0 / cpt.card() as f64));
            }
        }
    }
    let unseen_total: usize = fit.cpts().iter().map(|c| c.num_rows() - 1).sum();
    assert_eq!(report.unseen.len(), unseen_total);
}

#[test]
fn sampling_is_seed_deterministic() {
    let net = build_default_model();
    let a = forward_sample(&net, 2_000, 42).unwrap();
    let b = forward_sample(&net, 2_000, 42).unwrap();
    let c = forward_sample(&net, 2_000, 43).unwrap();
    assert_eq!(a.to_csv_string(), b.to_csv_string());
    assert_ne!(a.to_csv_string(), c.to_csv_string());
}

#[test]
fn degenerate_prior_samples_one_state() {
    let net = ModelDocument::new("d")
        .variable("X", ["t", "f"])
        .cpt("X", &[], vec![vec![1.0, 0.0]])
        .build()
        .unwrap();
    let data = forward_sample(&net, 1_000, 5).unwrap();
    assert!(data.rows().iter().all(|r| r[0] == 0));
    assert!(matches!(forward_sample(&net, 0, 5), Err(Error::Argument(_))));
}

#[test]
fn ag_frequency_at_fifty_thousand() {
    let net = build_default_model();
    let data = forward_sample(&net, 50_000, 2024).unwrap();
    let ag = data.column_index("AG").unwrap();
    let a = data.rows().iter().filter(|r| r[ag] == 0).count() as f64 / 50_000.0;
    assert!((a - 0.41).abs() <= 0.02, "{a}");
}

#[test]
fn csv_roundtrip() {
    let net = build_default_model();
    let data = forward_sample(&net, 100, 8).unwrap();
    let text = data.to_csv_string();
    let back = RecordSet::read_csv(text.as_bytes(), net.variables()).unwrap();
    assert_eq!(back, data);
    assert!(matches!(
        RecordSet::read_csv("AG,S\nA,\n".as_bytes(), net.variables()),
        Err(Error::Argument(_))
    ));
    assert!(matches!(
        RecordSet::read_csv("AG\nD\n".as_bytes(), net.variables()),
        Err(Error::UnknownState { .. })
    ));
}

#[test]
fn bundled_cohort_refits_to_the_bundled_tables() {
    // the frozen cohort reproduces the shipped tables to their 6 decimals
    let net = build_default_model();
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/synthetic_cohort.csv")).unwrap();
    let data = RecordSet::read_csv(text.as_bytes(), net.variables()).unwrap();
    assert_eq!(data.len(), 10_000);
    let fit = mle_fit(&net.structure(), &data, 1.0).unwrap();
    let ag = net.index_of("AG").unwrap();
    for (v, (a, b)) in fit.cpts().iter().zip(net.cpts()).enumerate() {
        if v == ag {
            continue;
        }
        for (ra, rb) in a.rows().zip(b.rows()) {
            for (x, y) in ra.iter().zip(rb) {
                assert!((x - y).abs() <= 1.5e-6, "{}: {x} vs {y}", net.variable(v).name);
            }
        }
    }
    let raw = mle_fit(&net.structure(), &data, 0.0).unwrap();
    for (x, y) in raw.cpt(ag).row(0).iter().zip(net.cpt(ag).row(0)) {
        assert!((x - y).abs() <= 1e-12);
    }
}
