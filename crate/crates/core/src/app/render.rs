use serde_json::{Map, Number, Value};

use crate::error::{Error, Result};
use crate::inference::Distribution;

pub const DEFAULT_PRECISION: usize = 6;
pub const MAX_PRECISION: usize = 17;

/// Fixed-decimal rendering of reals in JSON output.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Renderer {
    precision: usize,
}

impl Default for Renderer {
    fn default() -> Self {
        Renderer {
            precision: DEFAULT_PRECISION,
        }
    }
}

impl Renderer {
    pub fn new(precision: usize) -> Result<Self> {
        if precision > MAX_PRECISION {
            return Err(Error::argument(format!("precision must be at most {MAX_PRECISION}, got {precision}")));
        }
        Ok(Renderer { precision })
    }

    pub fn precision(&self) -> usize {
        self.precision
    }

    /// `x` with exactly `precision` decimals; negative zero prints as zero.
    pub fn number(&self, x: f64) -> Value {
        let mut text = format!("{:.*}", self.precision, x);
        if text.starts_with('-') && text[1..].bytes().all(|b| b == b'0' || b == b'.') {
            text.remove(0);
        }
        Value::Number(serde_json::from_str::<Number>(&text).expect("fixed decimal is a JSON number"))
    }

    /// `{state: probability, ...}` in state order.
    pub fn distribution(&self, d: &Distribution) -> Value {
        let map: Map<String, Value> = d
            .states
            .iter()
            .zip(&d.probabilities)
            .map(|(s, &p)| (s.clone(), self.number(p)))
            .collect();
        Value::Object(map)
    }
}
