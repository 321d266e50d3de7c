//! Structured verification of the rank statements: genus-3 completeness,
//! BSZ relations from Pixton's, the genus-4 upper bound, the eigenstructure
//! of the rescaled pairing matrix, and the full rank table.

pub mod fixtures;
pub mod genus3;
pub mod genus4;
pub mod table;
pub mod vectors;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Ok,
    Fail,
}

/// One line of a verification report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub check: String,
    pub params: String,
    pub verdict: Status,
    pub details: String,
}

impl Verdict {
    pub fn new(check: &str, params: impl Into<String>, ok: bool, details: impl Into<String>) -> Self {
        Self {
            check: check.to_string(),
            params: params.into(),
            verdict: if ok { Status::Ok } else { Status::Fail },
            details: details.into(),
        }
    }

    pub fn ok(&self) -> bool {
        self.verdict == Status::Ok
    }
}
