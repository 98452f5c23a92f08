//! Problem instances, witness verification and the JSON interchange format.
//!
//! All instance types are immutable once constructed; reductions always build
//! new values. Integers are arbitrary precision and travel as decimal strings.

mod collection;
mod field;
mod format;
mod graph;
mod ksum;

pub use collection::{digest, Provenance, ReducedCollection, VectorOrigin};
pub use field::{in_span, LinDepInstance, TargetSumInstance};
pub use format::{parse_instance, serialize_instance};
pub use graph::{CliqueInstance, Graph, WeightedGraph, Weights};
pub use ksum::{KSumInstance, Range, VectorSumInstance};

use std::fmt;

use crate::error::Result;

/// Any problem instance understood by the toolkit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Instance {
    KSum(KSumInstance),
    VectorSum(VectorSumInstance),
    Weighted(WeightedGraph),
    Clique(CliqueInstance),
    TargetSum(TargetSumInstance),
    LinDep(LinDepInstance),
}

/// Discriminant of [`Instance`], used by the CLI and the reduction catalog.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum InstanceKind {
    KSum,
    VectorSum,
    NodeWeighted,
    EdgeWeighted,
    Clique,
    TargetSum,
    LinDep,
}

impl InstanceKind {
    pub fn name(self) -> &'static str {
        match self {
            InstanceKind::KSum => "ksum",
            InstanceKind::VectorSum => "vectorsum",
            InstanceKind::NodeWeighted => "nodeweight",
            InstanceKind::EdgeWeighted => "edgeweight",
            InstanceKind::Clique => "clique",
            InstanceKind::TargetSum => "targetsum",
            InstanceKind::LinDep => "lindep",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "ksum" => InstanceKind::KSum,
            "vectorsum" => InstanceKind::VectorSum,
            "nodeweight" => InstanceKind::NodeWeighted,
            "edgeweight" => InstanceKind::EdgeWeighted,
            "clique" => InstanceKind::Clique,
            "targetsum" => InstanceKind::TargetSum,
            "lindep" => InstanceKind::LinDep,
            _ => return None,
        })
    }
}

impl fmt::Display for InstanceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Instance {
    pub fn kind(&self) -> InstanceKind {
        match self {
            Instance::KSum(_) => InstanceKind::KSum,
            Instance::VectorSum(_) => InstanceKind::VectorSum,
            Instance::Weighted(g) => match g.weights() {
                Weights::Node(_) => InstanceKind::NodeWeighted,
                Weights::Edge(_) => InstanceKind::EdgeWeighted,
            },
            Instance::Clique(_) => InstanceKind::Clique,
            Instance::TargetSum(_) => InstanceKind::TargetSum,
            Instance::LinDep(_) => InstanceKind::LinDep,
        }
    }

    pub fn k(&self) -> usize {
        match self {
            Instance::KSum(i) => i.k(),
            Instance::VectorSum(i) => i.k(),
            Instance::Weighted(i) => i.k(),
            Instance::Clique(i) => i.k(),
            Instance::TargetSum(i) => i.k(),
            Instance::LinDep(i) => i.k(),
        }
    }

    /// Checks the defining predicate of the instance on a witness of `k`
    /// distinct indices (or vertices).
    pub fn verify_witness(&self, witness: &[usize]) -> Result<bool> {
        match self {
            Instance::KSum(i) => i.verify(witness),
            Instance::VectorSum(i) => i.verify(witness),
            Instance::Weighted(i) => i.verify(witness),
            Instance::Clique(i) => i.verify(witness),
            Instance::TargetSum(i) => i.verify(witness),
            Instance::LinDep(i) => i.verify(witness),
        }
    }
}

macro_rules! impl_from {
    ($($ty:ident => $variant:ident),*) => {
        $(impl From<$ty> for Instance {
            fn from(x: $ty) -> Self {
                Instance::$variant(x)
            }
        })*
    };
}

impl_from!(
    KSumInstance => KSum,
    VectorSumInstance => VectorSum,
    WeightedGraph => Weighted,
    CliqueInstance => Clique,
    TargetSumInstance => TargetSum,
    LinDepInstance => LinDep
);
