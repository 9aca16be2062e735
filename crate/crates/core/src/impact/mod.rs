//! Impact analysis: how far conditioning on one variable can move the
//! log-odds of a target outcome.
//!
//! For a target state `t`, evidence `e` and influencer state `x`:
//!
//! ```text
//! swing(x) = logit P(t | e, x) - logit P(t | e),   logit p = ln(p / (1 - p))
//! ```
//!
//! The impact level is the swing of largest magnitude (sign kept), taken
//! over influencer states that are possible under `e`. Mutual information
//! between influencer and target given `e` is reported alongside.

mod dsep;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::inference::posterior_indices;
use crate::model::{BayesianNetwork, Evidence};

pub use dsep::d_separated;

/// An outcome of interest: one state of one variable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TargetSpec {
    pub variable: String,
    pub state: String,
}

impl TargetSpec {
    pub fn new(variable: impl Into<String>, state: impl Into<String>) -> Self {
        TargetSpec {
            variable: variable.into(),
            state: state.into(),
        }
    }
}

impl FromStr for TargetSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.split_once('=') {
            Some((v, st)) if !v.trim().is_empty() && !st.trim().is_empty() => {
                Ok(TargetSpec::new(v.trim(), st.trim()))
            }
            _ => Err(Error::argument(format!("expected Var=state target, got '{s}'"))),
        }
    }
}

impl fmt::Display for TargetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}={}", self.variable, self.state)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ImpactEntry {
    pub influencer: String,
    pub level: f64,
    pub achieving_state: String,
    pub magnitude: f64,
    pub mutual_information: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ImpactReport {
    pub target: TargetSpec,
    pub baseline: f64,
    /// Sorted by magnitude, descending; equal magnitudes keep declaration
    /// order.
    pub entries: Vec<ImpactEntry>,
}

/// Swings whose magnitudes differ by at most this much are ties and go to
/// the earlier influencer state; rounding noise would otherwise pick the
/// achieving state when all swings are zero.
pub const SWING_TIE_TOLERANCE: f64 = 1e-12;

pub fn logit(p: f64) -> f64 {
    p.ln() - (-p).ln_1p()
}

struct Resolved {
    slots: Vec<Option<usize>>,
    target: usize,
    state: usize,
    baseline: Vec<f64>,
}

fn resolve(net: &BayesianNetwork, target: &TargetSpec, evidence: &Evidence) -> Result<Resolved> {
    let slots = net.resolve_evidence(evidence)?;
    let t = net.index_of(&target.variable)?;
    let state = net.state_index(t, &target.state)?;
    if slots[t].is_some() {
        return Err(Error::argument(format!(
            "target variable '{}' is bound in the evidence",
            target.variable
        )));
    }
    let baseline = posterior_indices(net, &slots, t)?.probabilities;
    let p = baseline[state];
    if p <= 0.0 || p >= 1.0 {
        return Err(Error::DegenerateBaseline(format!(
            "P({target} | evidence) = {p}; log-odds undefined"
        )));
    }
    Ok(Resolved {
        slots,
        target: t,
        state,
        baseline,
    })
}

fn entry(net: &BayesianNetwork, r: &Resolved, influencer: usize) -> Result<ImpactEntry> {
    let var = net.variable(influencer);
    let weights = posterior_indices(net, &r.slots, influencer)?.probabilities;
    let base_logit = logit(r.baseline[r.state]);

    let mut best: Option<(usize, f64)> = None;
    let mut mutual_information = 0.0;
    let mut slots = r.slots.clone();
    for (x, &px) in weights.iter().enumerate() {
        if px <= 0.0 {
            continue;
        }
        slots[influencer] = Some(x);
        let conditional = posterior_indices(net, &slots, r.target)?.probabilities;
        let p = conditional[r.state];
        if p <= 0.0 || p >= 1.0 {
            return Err(Error::DegenerateBaseline(format!(
                "P({}={} | evidence, {}={}) = {p}; log-odds undefined",
                net.variable(r.target).name,
                net.variable(r.target).states[r.state],
                var.name,
                var.states[x]
            )));
        }
        let swing = logit(p) - base_logit;
        if best.is_none_or(|(_, b)| swing.abs() > b.abs() + SWING_TIE_TOLERANCE) {
            best = Some((x, swing));
        }
        for (pt, &base) in conditional.iter().zip(&r.baseline) {
            if *pt > 0.0 {
                mutual_information += px * pt * (pt / base).ln();
            }
        }
    }
    let (x, level) = best.ok_or_else(|| {
        Error::DegenerateBaseline(format!("no state of '{}' is possible under the evidence", var.name))
    })?;
    Ok(ImpactEntry {
        influencer: var.name.clone(),
        level,
        achieving_state: var.states[x].clone(),
        magnitude: level.abs(),
        mutual_information,
    })
}

/// Signed impact level of `influencer` on the target, with the influencer
/// state that achieves it.
pub fn impact_level(
    net: &BayesianNetwork,
    target: &TargetSpec,
    influencer: &str,
    evidence: &Evidence,
) -> Result<ImpactEntry> {
    let i = net.index_of(influencer)?;
    let r = resolve(net, target, evidence)?;
    if i == r.target {
        return Err(Error::argument("influencer must differ from the target variable"));
    }
    if r.slots[i].is_some() {
        return Err(Error::argument(format!("influencer '{influencer}' is bound in the evidence")));
    }
    entry(net, &r, i)
}

/// Impact of every variable that is neither the target nor observed.
pub fn impact_ranking(net: &BayesianNetwork, target: &TargetSpec, evidence: &Evidence) -> Result<ImpactReport> {
    let r = resolve(net, target, evidence)?;
    let mut entries = (0..net.len())
        .filter(|&v| v != r.target && r.slots[v].is_none())
        .map(|v| entry(net, &r, v))
        .collect::<Result<Vec<_>>>()?;
    entries.sort_by(|a, b| b.magnitude.total_cmp(&a.magnitude));
    Ok(ImpactReport {
        target: target.clone(),
        baseline: r.baseline[r.state],
        entries,
    })
}
