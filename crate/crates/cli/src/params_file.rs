//! JSON parameter files:
//!
//! ```json
//! {"model": "ssk", "k": 4, "s": 2, "theta": 1.0, "lambda": [1.0, 2.0, 0.5]}
//! ```
//!
//! `s` is required for `ssk` and forbidden for `kim-kvam`; unknown keys are
//! rejected.

use std::path::Path;

use loadshare_core::{ModelSpec, Params};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsFile {
    pub model: ModelName,
    pub k: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<usize>,
    pub theta: f64,
    pub lambda: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModelName {
    #[serde(rename = "kim-kvam")]
    KimKvam,
    #[serde(rename = "ssk")]
    Ssk,
}

impl ParamsFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Usage(format!("invalid params file: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Validates against the model invariants.
    pub fn resolve(&self) -> Result<(ModelSpec, Params), CliError> {
        let spec = match (self.model, self.s) {
            (ModelName::KimKvam, None) => ModelSpec::kim_kvam(self.k),
            (ModelName::KimKvam, Some(_)) => {
                return Err(CliError::Usage("s is only valid for the ssk model".into()))
            }
            (ModelName::Ssk, Some(s)) => ModelSpec::ssk(self.k, s),
            (ModelName::Ssk, None) => {
                return Err(CliError::Usage("s is required for the ssk model".into()))
            }
        }
        .map_err(CliError::usage)?;
        if self.lambda.len() + 1 != spec.k() {
            return Err(CliError::Usage(format!(
                "lambda must have k-1 = {} entries, got {}",
                spec.k() - 1,
                self.lambda.len()
            )));
        }
        let params = Params::new(self.theta, self.lambda.clone()).map_err(CliError::usage)?;
        Ok((spec, params))
    }
}
