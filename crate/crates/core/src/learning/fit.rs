use serde::Serialize;

use crate::error::{Error, Result};
use crate::learning::RecordSet;
use crate::model::{BayesianNetwork, ModelDocument, NetworkStructure};

/// A CPT row whose parent configuration never occurs in the data and which
/// was therefore set uniform.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnseenConfig {
    pub variable: String,
    pub row: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct FitReport {
    pub records: usize,
    pub smoothing: f64,
    pub unseen: Vec<UnseenConfig>,
}

/// Maximum-likelihood CPTs for a fixed structure with additive (Laplace)
/// smoothing:
///
/// `P(child = s | cfg) = (n(s, cfg) + α) / (n(cfg) + α·|child|)`
///
/// With `α = 0` a configuration absent from the data gets a uniform row.
pub fn mle_fit(structure: &NetworkStructure, data: &RecordSet, smoothing: f64) -> Result<BayesianNetwork> {
    mle_fit_with_report(structure, data, smoothing).map(|(net, _)| net)
}

pub fn mle_fit_with_report(
    structure: &NetworkStructure,
    data: &RecordSet,
    smoothing: f64,
) -> Result<(BayesianNetwork, FitReport)> {
    if !smoothing.is_finite() || smoothing < 0.0 {
        return Err(Error::argument(format!("smoothing must be finite and >= 0, got {smoothing}")));
    }
    if data.is_empty() {
        return Err(Error::argument("dataset has no records"));
    }
    // rejects cycles and dangling edges before any counting
    structure.topological_order()?;
    let parents = structure.parent_indices()?;

    let mut column = Vec::with_capacity(structure.variables.len());
    for var in &structure.variables {
        let c = data
            .column_index(&var.name)
            .ok_or_else(|| Error::argument(format!("data has no column for '{}'", var.name)))?;
        if data.columns()[c].states != var.states {
            return Err(Error::argument(format!(
                "column '{}' uses states {:?}, structure declares {:?}",
                var.name,
                data.columns()[c].states,
                var.states
            )));
        }
        column.push(c);
    }

    let mut report = FitReport {
        records: data.len(),
        smoothing,
        unseen: Vec::new(),
    };
    let mut doc = ModelDocument::new("fitted");
    doc.variables = structure.variables.clone();

    for (v, var) in structure.variables.iter().enumerate() {
        let card = var.card();
        let pcards: Vec<usize> = parents[v].iter().map(|&p| structure.variables[p].card()).collect();
        let rows: usize = pcards.iter().product();
        let mut counts = vec![0u64; rows * card];
        for record in data.rows() {
            let cfg = parents[v]
                .iter()
                .zip(&pcards)
                .fold(0, |acc, (&p, &k)| acc * k + record[column[p]]);
            counts[cfg * card + record[column[v]]] += 1;
        }
        let mut table = Vec::with_capacity(rows);
        for (r, chunk) in counts.chunks(card).enumerate() {
            let total: u64 = chunk.iter().sum();
            if total == 0 && smoothing == 0.0 {
                report.unseen.push(UnseenConfig {
                    variable: var.name.clone(),
                    row: r,
                });
                table.push(vec![1.0 / card as f64; card]);
                continue;
            }
            let denom = total as f64 + smoothing * card as f64;
            table.push(chunk.iter().map(|&n| (n as f64 + smoothing) / denom).collect());
        }
        let parent_names: Vec<&str> = parents[v]
            .iter()
            .map(|&p| structure.variables[p].name.as_str())
            .collect();
        doc = doc.cpt(&var.name, &parent_names, table);
    }
    Ok((doc.build()?, report))
}
