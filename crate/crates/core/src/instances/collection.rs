use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use super::format::{serialize_instance, Wire};
use super::Instance;
use crate::error::{Error, Result};

/// Where a vector of a clique-to-vector-sum reduction came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum VectorOrigin {
    /// Vertex `vertex` placed in slot `slot` (slots are 1-based).
    Vertex { vertex: usize, slot: usize },
    /// Edge oriented so that `first` sits in slot `i` and `second` in slot `j`, `i < j`.
    Edge {
        first: usize,
        second: usize,
        i: usize,
        j: usize,
    },
}

/// Per-item record sufficient to lift a witness of the item back to its source.
///
/// Only the fields meaningful for the producing reduction are set.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    /// Index of the carry tuple among all `(k+1)^(d-1)` tuples.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub carry_index: Option<usize>,
    /// Carry tuple (c_1, …, c_{d-1}).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<Vec<u32>>,
    /// Carry-adjusted target vector.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub carry_target: Option<Vec<String>>,
    /// Edge-weight guess per slot pair `(i, j, value)`, slots 1-based.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Vec<(usize, usize, String)>>,
    /// Index of the parent item in the previous stage of a composed pipeline.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parent: Option<usize>,
    /// First vertex of this component inside a merged graph.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertex_offset: Option<usize>,
    /// Number of vertices of this component inside a merged graph.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertex_count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prime: Option<String>,
    /// Multiple of the modulus added to the target.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_offset: Option<u32>,
    /// Per-coordinate multiples of `q` added to the target vector.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field_offset: Option<Vec<u32>>,
    /// Origin of each produced vector (or number), by index.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub origins: Option<Vec<VectorOrigin>>,
    /// Code assigned to each source vertex.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertex_codes: Option<Vec<String>>,
    /// For expanded vector sets: `(scalar, source index)` per produced vector.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scalings: Option<Vec<(u64, usize)>>,
}

/// Ordered output of a one-to-many reduction.
#[derive(Clone, Debug, PartialEq)]
pub struct ReducedCollection<T> {
    pub reduction: String,
    pub source_digest: String,
    /// Reduction parameters; an object with deterministic key order.
    pub params: Value,
    pub items: Vec<(T, Provenance)>,
}

/// SHA-256 of the canonical serialization, lowercase hex.
pub fn digest(inst: &Instance) -> String {
    hex::encode(Sha256::digest(serialize_instance(inst).as_bytes()))
}

impl<T> ReducedCollection<T> {
    pub fn new(reduction: &str, source: &Instance, params: Value) -> Self {
        ReducedCollection {
            reduction: reduction.to_string(),
            source_digest: digest(source),
            params,
            items: Vec::new(),
        }
    }

    pub fn push(&mut self, item: T, provenance: Provenance) {
        self.items.push((item, provenance));
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn instances(&self) -> impl Iterator<Item = &T> {
        self.items.iter().map(|(t, _)| t)
    }

    pub fn map<U>(self, mut f: impl FnMut(T) -> U) -> ReducedCollection<U> {
        ReducedCollection {
            reduction: self.reduction,
            source_digest: self.source_digest,
            params: self.params,
            items: self.items.into_iter().map(|(t, p)| (f(t), p)).collect(),
        }
    }
}

impl<T: Clone + Into<Instance>> ReducedCollection<T> {
    /// JSON-lines encoding: a meta line, then one instance per line carrying
    /// its `provenance`.
    pub fn to_jsonl(&self) -> String {
        let meta = serde_json::json!({
            "meta": {
                "reduction": self.reduction,
                "source_digest": self.source_digest,
                "params": self.params,
            }
        });
        let mut out = serde_json::to_string(&meta).expect("meta serializes");
        out.push('\n');
        for (item, prov) in &self.items {
            let mut line = serialize_instance(&item.clone().into());
            let prov = serde_json::to_string(prov).expect("provenance serializes");
            line.pop();
            line.push_str(",\"provenance\":");
            line.push_str(&prov);
            line.push('}');
            out.push_str(&line);
            out.push('\n');
        }
        out
    }
}

impl ReducedCollection<Instance> {
    pub fn parse_jsonl(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, head) = lines
            .next()
            .ok_or_else(|| Error::Validation("empty collection file".into()))?;
        let head: Value = serde_json::from_str(head).map_err(|e| Error::parse_from_json(&e))?;
        let meta = head
            .get("meta")
            .ok_or_else(|| Error::Validation("first line must hold a \"meta\" object".into()))?;
        let field = |name: &str| -> Result<String> {
            meta.get(name)
                .and_then(Value::as_str)
                .map(str::to_string)
                .ok_or_else(|| Error::Validation(format!("meta.{name} missing or not a string")))
        };
        let mut coll = ReducedCollection {
            reduction: field("reduction")?,
            source_digest: field("source_digest")?,
            params: meta.get("params").cloned().unwrap_or(Value::Null),
            items: Vec::new(),
        };
        for (lineno, line) in lines {
            let at_line = |e: serde_json::Error| Error::Parse {
                line: lineno + 1,
                column: e.column(),
                message: e.to_string(),
            };
            let mut value: Value = serde_json::from_str(line).map_err(at_line)?;
            let prov = value
                .as_object_mut()
                .and_then(|o| o.remove("provenance"))
                .unwrap_or(Value::Null);
            let prov: Provenance = if prov.is_null() {
                Provenance::default()
            } else {
                serde_json::from_value(prov).map_err(at_line)?
            };
            let wire: Wire = serde_json::from_value(value).map_err(at_line)?;
            coll.items.push((wire.into_instance()?, prov));
        }
        Ok(coll)
    }
}
