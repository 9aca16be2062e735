//! Discrete Bayesian network representation: variables, structure,
//! conditional probability tables, evidence, and the JSON model document.

mod cpt;
mod document;
mod evidence;
mod network;
mod structure;
mod validate;
mod variable;

pub use cpt::Cpt;
pub use document::{load_model, load_structure, save_model, CptDocument, ModelDocument};
pub use evidence::{Assignment, Evidence};
pub use network::BayesianNetwork;
pub use structure::{topological_order, NetworkStructure};
pub use validate::{validate_network, ValidationReport, Violation, ViolationKind, ROW_SUM_TOLERANCE};
pub use variable::Variable;
