use std::fmt;
use std::str::FromStr;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::app::Renderer;
use crate::curriculum::{compare_plans, evaluate_plan_with, PlanReport, StudentProfile, SuccessWeights};
use crate::error::{Error, ErrorCode};
use crate::impact::{impact_ranking, TargetSpec};
use crate::inference::{
    evidence_likelihood, joint_probability, map_assignment, ml_assignment, posterior_marginal, MapResult,
};
use crate::model::{save_model, Assignment, BayesianNetwork, Evidence};

/// Error body shared by every front end.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ApiError {
    #[serde(serialize_with = "code_str")]
    pub code: ErrorCode,
    pub message: String,
    pub locus: String,
}

fn code_str<S: serde::Serializer>(code: &ErrorCode, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(code.as_str())
}

impl ApiError {
    pub fn new(code: ErrorCode, message: impl Into<String>, locus: impl Into<String>) -> Self {
        ApiError {
            code,
            message: message.into(),
            locus: locus.into(),
        }
    }

    /// `{"error":{"code":..,"message":..,"locus":..}}`
    pub fn to_json(&self) -> String {
        json!({ "error": self }).to_string()
    }
}

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        ApiError::new(e.code(), e.to_string(), e.locus())
    }
}

impl fmt::Display for ApiError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.code, self.message)
    }
}

impl std::error::Error for ApiError {}

/// Request kinds served over a loaded model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Endpoint {
    Model,
    Infer,
    Map,
    Joint,
    Likelihood,
    Impact,
    Plan,
    Whatif,
}

impl Endpoint {
    pub const ALL: [Endpoint; 8] = [
        Endpoint::Model,
        Endpoint::Infer,
        Endpoint::Map,
        Endpoint::Joint,
        Endpoint::Likelihood,
        Endpoint::Impact,
        Endpoint::Plan,
        Endpoint::Whatif,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Endpoint::Model => "model",
            Endpoint::Infer => "infer",
            Endpoint::Map => "map",
            Endpoint::Joint => "joint",
            Endpoint::Likelihood => "likelihood",
            Endpoint::Impact => "impact",
            Endpoint::Plan => "plan",
            Endpoint::Whatif => "whatif",
        }
    }
}

impl FromStr for Endpoint {
    type Err = ApiError;

    fn from_str(s: &str) -> Result<Self, ApiError> {
        Endpoint::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| ApiError::new(ErrorCode::UsageError, format!("unknown endpoint '{s}'"), s))
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InferRequest {
    #[serde(default)]
    pub evidence: Evidence,
    pub query: String,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Criterion {
    #[default]
    Map,
    Ml,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapRequest {
    #[serde(default)]
    pub evidence: Evidence,
    pub query: Vec<String>,
    #[serde(default)]
    pub criterion: Criterion,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JointRequest {
    pub assignment: Assignment,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LikelihoodRequest {
    #[serde(default)]
    pub evidence: Evidence,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ImpactRequest {
    /// `Var=state`
    pub target: String,
    #[serde(default)]
    pub evidence: Evidence,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightsRequest {
    pub grade: f64,
    pub recommendation: f64,
    pub satisfaction: f64,
}

impl WeightsRequest {
    fn resolve(weights: Option<WeightsRequest>) -> Result<SuccessWeights, Error> {
        match weights {
            None => Ok(SuccessWeights::default()),
            Some(w) => SuccessWeights::new(w.grade, w.recommendation, w.satisfaction),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanRequest {
    #[serde(default)]
    pub profile: Evidence,
    #[serde(default)]
    pub weights: Option<WeightsRequest>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WhatifRequest {
    #[serde(default)]
    pub profile: Evidence,
    pub scenarios: Vec<Evidence>,
    #[serde(default)]
    pub weights: Option<WeightsRequest>,
}

fn parse_request<T: DeserializeOwned>(body: &str) -> Result<T, ApiError> {
    serde_json::from_str(body).map_err(|e| {
        let locus = format!("request line {} column {}", e.line(), e.column());
        let code = if e.is_data() {
            ErrorCode::SchemaError
        } else {
            ErrorCode::ParseError
        };
        ApiError::new(code, e.to_string(), locus)
    })
}

/// Stateless request handler over one immutable model. Every front end
/// (CLI, HTTP, C interface) goes through [`Service::handle`], so identical
/// requests produce identical bytes.
#[derive(Debug, Clone)]
pub struct Service {
    net: BayesianNetwork,
    renderer: Renderer,
}

impl Service {
    pub fn new(net: BayesianNetwork, renderer: Renderer) -> Self {
        Service { net, renderer }
    }

    pub fn network(&self) -> &BayesianNetwork {
        &self.net
    }

    pub fn renderer(&self) -> Renderer {
        self.renderer
    }

    /// Handles a JSON request body and returns the compact JSON response.
    /// `Model` ignores the body and returns the canonical model document.
    pub fn handle(&self, endpoint: Endpoint, body: &str) -> Result<String, ApiError> {
        let value = match endpoint {
            Endpoint::Model => return Ok(save_model(&self.net)),
            Endpoint::Infer => self.infer(&parse_request(body)?)?,
            Endpoint::Map => self.map(&parse_request(body)?)?,
            Endpoint::Joint => self.joint(&parse_request(body)?)?,
            Endpoint::Likelihood => self.likelihood(&parse_request(body)?)?,
            Endpoint::Impact => self.impact(&parse_request(body)?)?,
            Endpoint::Plan => self.plan(&parse_request(body)?)?,
            Endpoint::Whatif => self.whatif(&parse_request(body)?)?,
        };
        Ok(value.to_string())
    }

    pub fn infer(&self, req: &InferRequest) -> Result<Value, Error> {
        let dist = posterior_marginal(&self.net, &req.evidence, &req.query)?;
        let mut out = Map::new();
        out.insert(req.query.clone(), self.renderer.distribution(&dist));
        Ok(Value::Object(out))
    }

    pub fn map(&self, req: &MapRequest) -> Result<Value, Error> {
        let query: Vec<&str> = req.query.iter().map(String::as_str).collect();
        let result: MapResult = match req.criterion {
            Criterion::Map => map_assignment(&self.net, &req.evidence, &query)?,
            Criterion::Ml => ml_assignment(&self.net, &req.evidence, &query)?,
        };
        Ok(json!({
            "assignment": result.assignment,
            "probability": self.renderer.number(result.probability),
        }))
    }

    pub fn joint(&self, req: &JointRequest) -> Result<Value, Error> {
        let p = joint_probability(&self.net, &req.assignment)?;
        Ok(json!({ "probability": self.renderer.number(p) }))
    }

    pub fn likelihood(&self, req: &LikelihoodRequest) -> Result<Value, Error> {
        let p = evidence_likelihood(&self.net, &req.evidence)?;
        Ok(json!({ "likelihood": self.renderer.number(p) }))
    }

    pub fn impact(&self, req: &ImpactRequest) -> Result<Value, Error> {
        let target: TargetSpec = req.target.parse()?;
        let report = impact_ranking(&self.net, &target, &req.evidence)?;
        let r = &self.renderer;
        Ok(Value::Array(
            report
                .entries
                .iter()
                .map(|e| {
                    json!({
                        "influencer": e.influencer,
                        "level": r.number(e.level),
                        "achieving_state": e.achieving_state,
                        "magnitude": r.number(e.magnitude),
                        "mutual_information": r.number(e.mutual_information),
                    })
                })
                .collect(),
        ))
    }

    pub fn plan(&self, req: &PlanRequest) -> Result<Value, Error> {
        let profile = StudentProfile::new(req.profile.clone())?;
        let weights = WeightsRequest::resolve(req.weights)?;
        Ok(self.plan_report(&evaluate_plan_with(&self.net, &profile, &weights)?))
    }

    pub fn whatif(&self, req: &WhatifRequest) -> Result<Value, Error> {
        let profile = StudentProfile::new(req.profile.clone())?;
        let weights = WeightsRequest::resolve(req.weights)?;
        let results = compare_plans(&self.net, &profile, &req.scenarios, &weights)?;
        Ok(Value::Array(
            results
                .iter()
                .map(|r| {
                    json!({
                        "index": r.index,
                        "scenario": r.scenario,
                        "impossible": r.is_impossible(),
                        "report": r.report.as_ref().map(|p| self.plan_report(p)),
                    })
                })
                .collect(),
        ))
    }

    fn plan_report(&self, p: &PlanReport) -> Value {
        let r = &self.renderer;
        json!({
            "profile": p.profile,
            "outcomes": {
                p.grade.variable.clone(): r.distribution(&p.grade),
                p.recommendation.variable.clone(): r.distribution(&p.recommendation),
                p.satisfaction.variable.clone(): r.distribution(&p.satisfaction),
            },
            "success_score": r.number(p.success_score),
        })
    }
}
