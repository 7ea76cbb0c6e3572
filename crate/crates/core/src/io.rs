//! Instance files: a groupoid, action or ultragraph document with a `"kind"` tag.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::action::{PartialAction, RawAction};
use crate::error::{Error, Result};
use crate::groupoid::{Groupoid, RawGroupoid};
use crate::ultragraph::{RawUltragraph, Ultragraph};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Document {
    Groupoid(RawGroupoid),
    Action(RawAction),
    Ultragraph(RawUltragraph),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceFile {
    #[serde(default = "default_version")]
    pub version: u32,
    #[serde(flatten)]
    pub document: Document,
}

fn default_version() -> u32 {
    FORMAT_VERSION
}

/// A validated instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Instance {
    Groupoid(Groupoid),
    Action(PartialAction),
    Ultragraph(Ultragraph),
}

impl InstanceFile {
    pub fn parse(text: &str) -> Result<InstanceFile> {
        let file: InstanceFile = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        if file.version != FORMAT_VERSION {
            return Err(Error::Format(format!("unsupported format version {}", file.version)));
        }
        Ok(file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance files serialize")
    }

    pub fn validate(&self) -> Result<Instance> {
        Ok(match &self.document {
            Document::Groupoid(g) => Instance::Groupoid(Groupoid::validate(g)?),
            Document::Action(a) => Instance::Action(PartialAction::validate(a)?),
            Document::Ultragraph(u) => Instance::Ultragraph(Ultragraph::validate(u)?),
        })
    }
}

impl Instance {
    pub fn kind(&self) -> &'static str {
        match self {
            Instance::Groupoid(_) => "groupoid",
            Instance::Action(_) => "action",
            Instance::Ultragraph(_) => "ultragraph",
        }
    }

    /// The canonical file for this instance, with sorted identifiers.
    pub fn to_file(&self) -> InstanceFile {
        let document = match self {
            Instance::Groupoid(g) => Document::Groupoid(g.to_raw()),
            Instance::Action(a) => Document::Action(a.to_raw()),
            Instance::Ultragraph(u) => Document::Ultragraph(u.to_raw()),
        };
        InstanceFile { version: FORMAT_VERSION, document }
    }

    /// SHA-256 of the canonical compact JSON, hex encoded.
    pub fn fingerprint(&self) -> String {
        let text = serde_json::to_string(&self.to_file()).expect("instance files serialize");
        Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn round_trip() {
        for inst in [
            Instance::Action(fixtures::fix_c()),
            Instance::Groupoid(Groupoid::pair_groupoid(2).unwrap()),
            Instance::Ultragraph(fixtures::fix_u3()),
        ] {
            let text = inst.to_file().to_json();
            let back = InstanceFile::parse(&text).unwrap().validate().unwrap();
            assert_eq!(back, inst);
            assert_eq!(back.fingerprint(), inst.fingerprint());
        }
    }

    #[test]
    fn kind_tag_required() {
        assert!(InstanceFile::parse(r#"{"vertices":[],"edges":[]}"#).is_err());
        assert!(InstanceFile::parse(r#"{"kind":"ultragraph","vertices":["v"],"edges":[]}"#).is_ok());
        assert!(InstanceFile::parse(r#"{"kind":"ultragraph","version":9,"vertices":[],"edges":[]}"#).is_err());
    }

    #[test]
    fn fingerprints_differ() {
        let a = Instance::Action(fixtures::fix_b()).fingerprint();
        let b = Instance::Action(fixtures::fix_c()).fingerprint();
        assert_ne!(a, b);
        assert_eq!(a.len(), 64);
    }
}
