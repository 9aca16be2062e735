mod common;

use std::collections::BTreeSet;

use common::{slots, Cells};
use curriculum_bn::curriculum::{
    build_default_model, compare_plans, evaluate_plan, StudentProfile, SuccessWeights, DEFAULT_EDGES,
    DEFAULT_MODEL_JSON, OUTCOME_VARIABLES, PROFILE_VARIABLES,
};
use curriculum_bn::inference::{enumerate_joint, posterior_marginal};
use curriculum_bn::learning::forward_sample;
use curriculum_bn::model::{load_model, save_model, topological_order, validate_network, Evidence, ModelDocument};

#[test]
fn structure_is_the_stated_edge_list() {
    let net = build_default_model();
    let edges: BTreeSet<(String, String)> = net.structure().edges.into_iter().collect();
    let want: BTreeSet<(String, String)> = DEFAULT_EDGES.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
    assert_eq!(edges, want);
    let names: Vec<&str> = net.variables().iter().map(|v| v.name.as_str()).collect();
    assert_eq!(names, ["AG", "S", "A", "NumC", "RBG", "Pub", "G", "RecL", "Satisfaction"]);
    for (var, states) in [
        ("AG", &["A", "B", "C"][..]),
        ("S", &["active", "inactive"]),
        ("A", &["low", "medium", "high"]),
        ("NumC", &["few", "normal", "many"]),
        ("RBG", &["yes", "no"]),
        ("Pub", &["yes", "no"]),
        ("G", &["A", "B", "C"]),
        ("RecL", &["approved", "rejected"]),
        ("Satisfaction", &["high", "low"]),
    ] {
        assert_eq!(net.variable(net.index_of(var).unwrap()).states, states);
    }
}

#[test]
fn topological_order_respects_edges() {
    let order = topological_order(&build_default_model().structure()).unwrap();
    let pos = |n: &str| order.iter().position(|o| o == n).unwrap();
    for (a, b) in DEFAULT_EDGES {
        assert!(pos(a) < pos(b), "{a} before {b}");
    }
}

#[test]
fn bundled_file_is_canonical() {
    let net = load_model(DEFAULT_MODEL_JSON).unwrap();
    assert_eq!(save_model(&net), DEFAULT_MODEL_JSON);
    assert!(validate_network(&ModelDocument::parse(DEFAULT_MODEL_JSON).unwrap()).is_valid());
    assert!(net.description().unwrap().contains("ILLUSTRATIVE"));
    assert_eq!(load_model(&save_model(&net)).unwrap(), net);
}

#[test]
fn joint_table_size_and_mass() {
    let table = enumerate_joint(&build_default_model()).unwrap();
    assert_eq!(table.len(), 2592);
    assert!((table.sum() - 1.0).abs() <= 1e-9);
}

fn all_profiles() -> Vec<Evidence> {
    let net = build_default_model();
    let vars: Vec<_> = PROFILE_VARIABLES.iter().map(|n| net.variable(net.index_of(n).unwrap()).clone()).collect();
    let total: usize = vars.iter().map(|v| v.card()).product();
    (0..total)
        .map(|mut k| {
            let mut states = vec![0; vars.len()];
            for (i, v) in vars.iter().enumerate().rev() {
                states[i] = k % v.card();
                k /= v.card();
            }
            Evidence::from_pairs(vars.iter().zip(&states).map(|(v, &s)| (v.name.clone(), v.states[s].clone()))).unwrap()
        })
        .collect()
}

#[test]
fn every_full_profile_matches_enumeration() {
    let net = build_default_model();
    let table = enumerate_joint(&net).unwrap();
    let profiles = all_profiles();
    assert_eq!(profiles.len(), 216);
    let g = net.index_of("G").unwrap();
    for ev in profiles {
        let report = evaluate_plan(&net, &StudentProfile::new(ev.clone()).unwrap()).unwrap();
        let s = slots(&net, &ev);
        for dist in [&report.grade, &report.recommendation, &report.satisfaction] {
            let oracle = table.marginal(&s, net.index_of(&dist.variable).unwrap()).unwrap();
            for (a, b) in dist.probabilities.iter().zip(&oracle) {
                assert!((a - b).abs() <= 1e-10);
            }
        }
        // all six parents of G observed: its posterior is the CPT row
        let parents: Vec<usize> = net.parents(g).iter().map(|&p| s[p].unwrap()).collect();
        let row = net.cpt_row(g, &parents).unwrap();
        for (a, b) in report.grade.probabilities.iter().zip(row) {
            assert!((a - b).abs() <= 1e-12);
        }
        assert!((0.0..=1.0).contains(&report.success_score));
    }
}

#[test]
fn empty_profile_gives_unconditional_marginals() {
    let net = build_default_model();
    let report = evaluate_plan(&net, &StudentProfile::default()).unwrap();
    for var in OUTCOME_VARIABLES {
        let m = posterior_marginal(&net, &Evidence::new(), var).unwrap();
        let d = [&report.grade, &report.recommendation, &report.satisfaction]
            .into_iter()
            .find(|d| d.variable == var)
            .unwrap();
        assert_eq!(d, &m);
    }
}

#[test]
fn outcome_marginals_match_sample_frequencies() {
    let net = build_default_model();
    let data = forward_sample(&net, 100_000, 77).unwrap();
    for var in OUTCOME_VARIABLES {
        let v = net.index_of(var).unwrap();
        let c = data.column_index(var).unwrap();
        let m = posterior_marginal(&net, &Evidence::new(), var).unwrap();
        for (s, p) in m.probabilities.iter().enumerate() {
            let f = data.rows().iter().filter(|r| r[c] == s).count() as f64 / data.len() as f64;
            assert!((f - p).abs() <= 0.02, "{var}={}: {f} vs {p}", net.variable(v).states[s]);
        }
    }
}

#[test]
fn score_is_monotone_in_each_component() {
    let w = SuccessWeights::new(0.2, 0.5, 0.3).unwrap();
    let grid = [0.0, 0.1, 0.35, 0.6, 0.99, 1.0];
    for &a in &grid {
        for &b in &grid {
            for pair in grid.windows(2) {
                assert!(w.score(pair[0], a, b) <= w.score(pair[1], a, b));
                assert!(w.score(a, pair[0], b) <= w.score(a, pair[1], b));
                assert!(w.score(a, b, pair[0]) <= w.score(a, b, pair[1]));
            }
        }
    }
}

#[test]
fn single_unchanged_scenario_equals_evaluate_plan() {
    let net = build_default_model();
    let profile = StudentProfile::parse("AG=A,S=active,RBG=yes").unwrap();
    let direct = evaluate_plan(&net, &profile).unwrap();
    let ranked = compare_plans(&net, &profile, &[Evidence::new()], &SuccessWeights::default()).unwrap();
    assert_eq!(ranked.len(), 1);
    assert_eq!(ranked[0].report.as_ref().unwrap(), &direct);
}

#[test]
fn numc_scenarios_follow_the_oracle() {
    let net = build_default_model();
    let table = enumerate_joint(&net).unwrap();
    let cells = Cells::new(&table);
    let profile = StudentProfile::parse("AG=B,A=high").unwrap();
    let scenarios: Vec<Evidence> = ["NumC=few", "NumC=normal", "NumC=many"]
        .iter()
        .map(|s| Evidence::parse(s).unwrap())
        .collect();
    let ranked = compare_plans(&net, &profile, &scenarios, &SuccessWeights::default()).unwrap();
    assert!(ranked.windows(2).all(|w| {
        w[0].report.as_ref().unwrap().success_score >= w[1].report.as_ref().unwrap().success_score
    }));
    let g = net.index_of("G").unwrap();
    let numc = net.index_of("NumC").unwrap();
    for r in &ranked {
        let report = r.report.as_ref().unwrap();
        let s = slots(&net, &report.profile);
        let oracle = table.marginal(&s, g).unwrap();
        for (a, b) in report.grade.probabilities.iter().zip(&oracle) {
            assert!((a - b).abs() <= 1e-10);
        }
        // the scenario moves G only through NumC: P(G | profile, NumC) is
        // the oracle's conditional on that NumC column
        let mut base = s.clone();
        base[numc] = None;
        let pair = cells.pair_table(&table, &base, numc, 3, g, 3);
        let col = s[numc].unwrap();
        let total: f64 = pair[col].iter().sum();
        for (a, b) in report.grade.probabilities.iter().zip(&pair[col]) {
            assert!((a - b / total).abs() <= 1e-10);
        }
    }
}

#[test]
fn impossible_scenario_is_marked_not_fatal() {
    let mut doc = ModelDocument::parse(DEFAULT_MODEL_JSON).unwrap();
    let numc = doc.cpts.iter_mut().find(|c| c.child == "NumC").unwrap();
    numc.rows = Some(vec![vec![0.5, 0.5, 0.0]]);
    let net = doc.build().unwrap();
    let profile = StudentProfile::parse("AG=C").unwrap();
    let scenarios: Vec<Evidence> = ["NumC=many", "NumC=few", "A=low"]
        .iter()
        .map(|s| Evidence::parse(s).unwrap())
        .collect();
    let ranked = compare_plans(&net, &profile, &scenarios, &SuccessWeights::default()).unwrap();
    assert_eq!(ranked.len(), 3);
    assert!(ranked[..2].iter().all(|r| !r.is_impossible()));
    assert!(ranked[2].is_impossible());
    assert_eq!(ranked[2].index, 0);
    assert!(evaluate_plan(&net, &StudentProfile::parse("NumC=many").unwrap()).is_err());
}

#[test]
fn equal_scores_keep_input_order() {
    let net = build_default_model();
    let profile = StudentProfile::parse("NumC=few").unwrap();
    let same = Evidence::parse("A=low").unwrap();
    let ranked = compare_plans(&net, &profile, &[same.clone(), same.clone(), same], &SuccessWeights::default()).unwrap();
    let order: Vec<usize> = ranked.iter().map(|r| r.index).collect();
    assert_eq!(order, [0, 1, 2]);
}
