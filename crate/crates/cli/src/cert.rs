//! Certificate files: canonical JSON with sorted keys and no insignificant
//! whitespace, so identical content always has identical bytes.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

pub const CERT_VERSION: &str = "1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertKind {
    RelationReport,
    Derivation,
    NonloWitness,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metadata {
    pub toolchain: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub version: String,
    pub kind: CertKind,
    pub payload: Value,
    pub metadata: Metadata,
}

#[derive(Debug, Error)]
pub enum CertError {
    #[error("malformed certificate: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported certificate version {0:?}")]
    Version(String),
    #[error("expected a {expected:?} certificate, found {found:?}")]
    Kind { expected: CertKind, found: CertKind },
}

pub fn toolchain() -> String {
    format!("ordercert {}", env!("CARGO_PKG_VERSION"))
}

fn now_rfc3339() -> Option<String> {
    use time::format_description::well_known::Rfc3339;
    time::OffsetDateTime::now_utc().format(&Rfc3339).ok()
}

/// Canonical bytes of any serializable value.
pub fn canonical_json<T: Serialize>(v: &T) -> Result<String, serde_json::Error> {
    // `Value` objects are ordered maps, so keys come out sorted.
    serde_json::to_string(&serde_json::to_value(v)?)
}

impl Certificate {
    pub fn new<T: Serialize>(kind: CertKind, payload: &T, timestamp: bool) -> Result<Self, serde_json::Error> {
        Ok(Certificate {
            version: CERT_VERSION.to_string(),
            kind,
            payload: serde_json::to_value(payload)?,
            metadata: Metadata { toolchain: toolchain(), timestamp: if timestamp { now_rfc3339() } else { None } },
        })
    }

    pub fn to_canonical(&self) -> String {
        canonical_json(self).expect("certificate values always serialize")
    }

    pub fn parse(text: &str) -> Result<Self, CertError> {
        let c: Certificate = serde_json::from_str(text)?;
        if c.version != CERT_VERSION {
            return Err(CertError::Version(c.version));
        }
        Ok(c)
    }

    pub fn expect_kind(&self, kind: CertKind) -> Result<(), CertError> {
        if self.kind == kind {
            Ok(())
        } else {
            Err(CertError::Kind { expected: kind, found: self.kind })
        }
    }

    pub fn payload_as<T: for<'de> Deserialize<'de>>(&self) -> Result<T, CertError> {
        Ok(serde_json::from_value(self.payload.clone())?)
    }
}
