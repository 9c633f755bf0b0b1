//! Error envelope written to stderr, and the exit-code contract.

use serde::Serialize;
use serde_json::{json, Value};
use twistlab::catalog::CatalogError;
use twistlab::mec::MecError;
use twistlab::profile::ProfileError;
use twistlab::rs_index::IndexError;
use twistlab::twist::TwistError;

/// Exit code for bad flags, unreadable or malformed input.
pub const EXIT_USAGE: u8 = 1;
/// Exit code for inputs the mathematics rejects.
pub const EXIT_DOMAIN: u8 = 2;

#[derive(Debug, Serialize)]
pub struct CliError {
    pub kind: String,
    pub message: String,
    pub exit_code: u8,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub details: Option<Value>,
}

impl CliError {
    pub fn usage(kind: &str, message: impl Into<String>) -> Self {
        CliError {
            kind: kind.to_string(),
            message: message.into(),
            exit_code: EXIT_USAGE,
            details: None,
        }
    }

    fn domain<E: std::fmt::Debug + std::fmt::Display>(err: &E, details: Option<Value>) -> Self {
        CliError {
            kind: variant_name(err),
            message: err.to_string(),
            exit_code: EXIT_DOMAIN,
            details,
        }
    }

    pub fn envelope(&self) -> String {
        serde_json::to_string(&json!({ "error": self })).expect("error envelopes serialize")
    }
}

/// `Foo { .. }` or `Foo(..)` → `Foo`.
fn variant_name<E: std::fmt::Debug>(err: &E) -> String {
    let debug = format!("{err:?}");
    debug
        .split(|c: char| !c.is_alphanumeric() && c != '_')
        .next()
        .unwrap_or("Error")
        .to_string()
}

impl From<IndexError> for CliError {
    fn from(err: IndexError) -> Self {
        let details = match &err {
            IndexError::DegenerateCrossing { t, spectrum } => {
                Some(json!({ "t": t, "spectrum": spectrum }))
            }
            IndexError::UnresolvedCrossingCluster { t1, t2, spacing } => {
                Some(json!({ "t1": t1, "t2": t2, "spacing": spacing }))
            }
            IndexError::AmbiguousKernel { t, .. } => Some(json!({ "t": t })),
            IndexError::NonSymplecticSample { index, t, defect } => {
                Some(json!({ "sample": index, "t": t, "defect": defect }))
            }
            _ => None,
        };
        let mut out = CliError::domain(&err, details);
        if matches!(err, IndexError::Parse(_) | IndexError::EmptyInput) {
            out.exit_code = EXIT_USAGE;
        }
        out
    }
}

impl From<MecError> for CliError {
    fn from(err: MecError) -> Self {
        match err {
            MecError::Index(inner) => inner.into(),
            other => CliError::domain(&other, None),
        }
    }
}

impl From<TwistError> for CliError {
    fn from(err: TwistError) -> Self {
        match err {
            TwistError::Mec(inner) => inner.into(),
            other => CliError::domain(&other, None),
        }
    }
}

impl From<CatalogError> for CliError {
    fn from(err: CatalogError) -> Self {
        match err {
            CatalogError::Data(inner) => inner.into(),
            other => CliError::domain(&other, None),
        }
    }
}

impl From<ProfileError> for CliError {
    fn from(err: ProfileError) -> Self {
        let details = match &err {
            ProfileError::ConditionViolated { s, r, which } => {
                Some(json!({ "s": s, "r": r, "condition": which }))
            }
            ProfileError::NonPositiveRho { t, value }
            | ProfileError::NonPositiveShift { t, value } => {
                Some(json!({ "t": t, "value": value }))
            }
            _ => None,
        };
        let mut out = CliError::domain(&err, details);
        if matches!(err, ProfileError::Csv(_)) {
            out.exit_code = EXIT_USAGE;
        }
        out
    }
}
