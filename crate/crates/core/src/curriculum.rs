//! The bundled nine-variable curriculum network and plan evaluation on top
//! of it.
//!
//! A plan is a [`StudentProfile`] (what is known about the student) and,
//! for what-if comparisons, overrides of the decision variables `NumC` and
//! `A`. Each plan is scored by a weighted sum of three outcome
//! probabilities.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::inference::{posterior_marginal, Distribution};
use crate::model::{load_model, BayesianNetwork, Evidence};

/// Text of `models/curriculum.default.json`, compiled in.
pub const DEFAULT_MODEL_JSON: &str = include_str!("../../../models/curriculum.default.json");

/// Variables a profile may bind.
pub const PROFILE_VARIABLES: [&str; 6] = ["AG", "S", "A", "NumC", "RBG", "Pub"];

/// Outcome variables reported by a plan.
pub const OUTCOME_VARIABLES: [&str; 3] = ["G", "RecL", "Satisfaction"];

/// Variables a what-if scenario may override.
pub const SCENARIO_VARIABLES: [&str; 2] = ["NumC", "A"];

/// Edge list of the bundled structure, parent first.
pub const DEFAULT_EDGES: [(&str, &str); 11] = [
    ("AG", "G"),
    ("S", "G"),
    ("A", "G"),
    ("NumC", "G"),
    ("RBG", "G"),
    ("Pub", "G"),
    ("RBG", "Pub"),
    ("G", "RecL"),
    ("Pub", "RecL"),
    ("G", "Satisfaction"),
    ("RecL", "Satisfaction"),
];

/// The bundled curriculum model.
pub fn build_default_model() -> BayesianNetwork {
    load_model(DEFAULT_MODEL_JSON).expect("bundled model is valid")
}

/// Evidence over the profile variables only.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct StudentProfile(Evidence);

impl StudentProfile {
    pub fn new(evidence: Evidence) -> Result<Self> {
        for var in evidence.variables() {
            if OUTCOME_VARIABLES.contains(&var) {
                return Err(Error::argument(format!("'{var}' is an outcome and cannot be part of a profile")));
            }
            if !PROFILE_VARIABLES.contains(&var) {
                return Err(Error::UnknownVariable(var.to_string()));
            }
        }
        Ok(StudentProfile(evidence))
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::new(Evidence::parse(text)?)
    }

    pub fn evidence(&self) -> &Evidence {
        &self.0
    }
}

/// Weights of `P(G=A)`, `P(RecL=approved)` and `P(Satisfaction=high)` in
/// the success score.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SuccessWeights {
    pub grade: f64,
    pub recommendation: f64,
    pub satisfaction: f64,
}

impl Default for SuccessWeights {
    fn default() -> Self {
        SuccessWeights {
            grade: 1.0 / 3.0,
            recommendation: 1.0 / 3.0,
            satisfaction: 1.0 / 3.0,
        }
    }
}

impl SuccessWeights {
    /// Non-negative weights summing to one within 1e-9.
    pub fn new(grade: f64, recommendation: f64, satisfaction: f64) -> Result<Self> {
        let w = [grade, recommendation, satisfaction];
        if w.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return Err(Error::argument("success weights must be finite and non-negative"));
        }
        let sum: f64 = w.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::argument(format!("success weights must sum to 1, got {sum}")));
        }
        Ok(SuccessWeights {
            grade,
            recommendation,
            satisfaction,
        })
    }

    pub fn score(&self, grade_a: f64, approved: f64, satisfied: f64) -> f64 {
        self.grade * grade_a + self.recommendation * approved + self.satisfaction * satisfied
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlanReport {
    pub profile: Evidence,
    pub grade: Distribution,
    pub recommendation: Distribution,
    pub satisfaction: Distribution,
    pub success_score: f64,
}

/// One what-if scenario: the overrides as given, and its report or `None`
/// when the merged evidence is impossible.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioResult {
    pub index: usize,
    pub scenario: Evidence,
    pub report: Option<PlanReport>,
}

impl ScenarioResult {
    pub fn is_impossible(&self) -> bool {
        self.report.is_none()
    }
}

fn outcome(net: &BayesianNetwork, evidence: &Evidence, var: &str, state: &str) -> Result<(Distribution, f64)> {
    let dist = posterior_marginal(net, evidence, var)?;
    let p = dist
        .get(state)
        .ok_or_else(|| Error::UnknownState {
            variable: var.to_string(),
            state: state.to_string(),
        })?;
    Ok((dist, p))
}

fn evaluate(net: &BayesianNetwork, evidence: &Evidence, weights: &SuccessWeights) -> Result<PlanReport> {
    let (grade, g) = outcome(net, evidence, "G", "A")?;
    let (recommendation, r) = outcome(net, evidence, "RecL", "approved")?;
    let (satisfaction, s) = outcome(net, evidence, "Satisfaction", "high")?;
    Ok(PlanReport {
        profile: evidence.clone(),
        grade,
        recommendation,
        satisfaction,
        success_score: weights.score(g, r, s),
    })
}

/// Outcome distributions and success score for one profile, default
/// weights.
pub fn evaluate_plan(net: &BayesianNetwork, profile: &StudentProfile) -> Result<PlanReport> {
    evaluate(net, profile.evidence(), &SuccessWeights::default())
}

pub fn evaluate_plan_with(net: &BayesianNetwork, profile: &StudentProfile, weights: &SuccessWeights) -> Result<PlanReport> {
    evaluate(net, profile.evidence(), weights)
}

/// Evaluates each scenario (profile with the overrides applied; an
/// override replaces a profile binding of the same variable) and ranks by
/// success score, highest first. Equal scores keep input order and
/// impossible scenarios go last.
///
/// Overriding anything other than `NumC` or `A` fails the whole batch, as
/// does an unknown state; impossible evidence only marks its scenario.
pub fn compare_plans(
    net: &BayesianNetwork,
    profile: &StudentProfile,
    scenarios: &[Evidence],
    weights: &SuccessWeights,
) -> Result<Vec<ScenarioResult>> {
    let mut merged = Vec::with_capacity(scenarios.len());
    for scenario in scenarios {
        let mut evidence = profile.evidence().clone();
        for (var, state) in scenario.iter() {
            if !SCENARIO_VARIABLES.contains(&var) {
                return Err(Error::argument(format!(
                    "conflicting override: '{var}' is not a scenario variable (allowed: NumC, A)"
                )));
            }
            evidence.set(var, state);
        }
        net.resolve_evidence(&evidence)?;
        merged.push(evidence);
    }

    let mut results = Vec::with_capacity(scenarios.len());
    for (index, (scenario, evidence)) in scenarios.iter().zip(&merged).enumerate() {
        let report = match evaluate(net, evidence, weights) {
            Ok(r) => Some(r),
            Err(Error::ImpossibleEvidence) => None,
            Err(e) => return Err(e),
        };
        results.push(ScenarioResult {
            index,
            scenario: scenario.clone(),
            report,
        });
    }
    let key = |r: &ScenarioResult| r.report.as_ref().map_or(f64::NEG_INFINITY, |p| p.success_score);
    results.sort_by(|a, b| key(b).total_cmp(&key(a)));
    Ok(results)
}
