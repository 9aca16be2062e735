//! Parameter learning from complete data, naive Bayes classification, and
//! forward sampling of synthetic cohorts.

mod fit;
mod naive_bayes;
mod records;
mod sample;

pub use fit::{mle_fit, mle_fit_with_report, FitReport, UnseenConfig};
pub use naive_bayes::NaiveBayesModel;
pub use records::RecordSet;
pub use sample::forward_sample;
