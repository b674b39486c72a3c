//! JSON report documents. Field order is fixed by declaration order and no
//! hash maps are serialized, so equal inputs give byte-identical output.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use dilates::{BoundReport, ConstructionRecord, DistVerdict, ExtremalRecord, PointSet, ReductionRecord};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Parameters {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub q: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub d: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n: Option<usize>,
    #[serde(rename = "N", skip_serializing_if = "Option::is_none", default)]
    pub big_n: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub family: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub grid: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub samples: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub budget: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyResults {
    pub input: PointSet,
    pub bounds: BoundReport,
    pub reduced: bool,
    /// Per-part dichotomy verdicts; only computed for reduced sets.
    pub dist_lemma: Option<Vec<DistVerdict>>,
    /// Names of explicit bounds that failed.
    pub failures: Vec<String>,
    /// The offending set, present whenever `failures` is nonempty.
    pub witness: Option<PointSet>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructResults {
    pub set: PointSet,
    pub record: ConstructionRecord,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Results {
    Reduce(ReductionRecord),
    Verify(VerifyResults),
    Construct(ConstructResults),
    Search(ExtremalRecord),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema_version: u32,
    pub tool_version: String,
    pub command: String,
    /// SHA-256 of the raw input bytes, for commands that read a point file.
    pub input_digest: Option<String>,
    pub parameters: Parameters,
    pub results: Results,
}

impl ReportDocument {
    pub fn new(command: &str, input_digest: Option<String>, parameters: Parameters, results: Results) -> Self {
        ReportDocument {
            schema_version: SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            input_digest,
            parameters,
            results,
        }
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }
}

pub fn digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}
