use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::{
    CliqueInstance, Graph, Instance, KSumInstance, LinDepInstance, Range, TargetSumInstance,
    VectorSumInstance, WeightedGraph, Weights,
};
use crate::error::{Error, Result};

/// On-disk shape of every instance. Field declaration order is the canonical
/// serialization order.
#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub(crate) enum Wire {
    Ksum {
        k: usize,
        numbers: Vec<String>,
        target: String,
        #[serde(default)]
        range: Option<[String; 2]>,
    },
    Vectorsum {
        k: usize,
        dim: usize,
        vectors: Vec<Vec<String>>,
        target: Vec<String>,
        #[serde(default)]
        entry_range: Option<[String; 2]>,
    },
    Graph {
        k: usize,
        n: usize,
        edges: Vec<[usize; 2]>,
        #[serde(default)]
        node_weights: Option<Vec<String>>,
        #[serde(default)]
        edge_weights: Option<Vec<(usize, usize, String)>>,
        #[serde(default)]
        weight_bound: Option<String>,
        #[serde(default)]
        target: Option<String>,
        #[serde(default)]
        partition: Option<Vec<usize>>,
    },
    Targetsum {
        q: String,
        k: usize,
        elements: Vec<String>,
        target: String,
    },
    Lindep {
        q: String,
        k: usize,
        n: usize,
        vectors: Vec<Vec<String>>,
        target: Vec<String>,
    },
}

fn big(s: &str) -> Result<BigInt> {
    BigInt::from_str(s).map_err(|_| Error::Validation(format!("invalid integer literal {s:?}")))
}

fn bigs(v: &[String]) -> Result<Vec<BigInt>> {
    v.iter().map(|s| big(s)).collect()
}

fn small(s: &str) -> Result<u64> {
    u64::from_str(s).map_err(|_| Error::Validation(format!("invalid field element {s:?}")))
}

fn smalls(v: &[String]) -> Result<Vec<u64>> {
    v.iter().map(|s| small(s)).collect()
}

fn strs<T: ToString>(v: &[T]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn range_of(r: &Option<[String; 2]>) -> Result<Option<Range>> {
    r.as_ref()
        .map(|[lo, hi]| Range::new(big(lo)?, big(hi)?))
        .transpose()
}

impl Wire {
    pub(crate) fn from_instance(inst: &Instance) -> Wire {
        match inst {
            Instance::KSum(i) => Wire::Ksum {
                k: i.k(),
                numbers: strs(i.numbers()),
                target: i.target().to_string(),
                range: Some([i.range().lo.to_string(), i.range().hi.to_string()]),
            },
            Instance::VectorSum(i) => Wire::Vectorsum {
                k: i.k(),
                dim: i.dim(),
                vectors: i.vectors().iter().map(|v| strs(v)).collect(),
                target: strs(i.target()),
                entry_range: Some([i.entry_range().lo.to_string(), i.entry_range().hi.to_string()]),
            },
            Instance::Weighted(g) => {
                let (node_weights, edge_weights) = match g.weights() {
                    Weights::Node(w) => (Some(strs(w)), None),
                    Weights::Edge(w) => (
                        None,
                        Some(
                            g.graph()
                                .edges()
                                .iter()
                                .zip(w)
                                .map(|(&(u, v), w)| (u, v, w.to_string()))
                                .collect(),
                        ),
                    ),
                };
                Wire::Graph {
                    k: g.k(),
                    n: g.graph().n(),
                    edges: g.graph().edges().iter().map(|&(u, v)| [u, v]).collect(),
                    node_weights,
                    edge_weights,
                    weight_bound: Some(g.weight_bound().to_string()),
                    target: Some(g.target().to_string()),
                    partition: None,
                }
            }
            Instance::Clique(c) => Wire::Graph {
                k: c.k(),
                n: c.graph().n(),
                edges: c.graph().edges().iter().map(|&(u, v)| [u, v]).collect(),
                node_weights: None,
                edge_weights: None,
                weight_bound: None,
                target: Some("0".into()),
                partition: c.partition().map(<[usize]>::to_vec),
            },
            Instance::TargetSum(t) => Wire::Targetsum {
                q: t.q().to_string(),
                k: t.k(),
                elements: strs(t.elements()),
                target: t.target().to_string(),
            },
            Instance::LinDep(l) => Wire::Lindep {
                q: l.q().to_string(),
                k: l.k(),
                n: l.len(),
                vectors: l.vectors().iter().map(|v| strs(v)).collect(),
                target: strs(l.target()),
            },
        }
    }

    pub(crate) fn into_instance(self) -> Result<Instance> {
        Ok(match self {
            Wire::Ksum {
                k,
                numbers,
                target,
                range,
            } => KSumInstance::new(k, bigs(&numbers)?, range_of(&range)?, big(&target)?)?.into(),
            Wire::Vectorsum {
                k,
                dim,
                vectors,
                target,
                entry_range,
            } => VectorSumInstance::new(
                k,
                dim,
                vectors.iter().map(|v| bigs(v)).collect::<Result<_>>()?,
                range_of(&entry_range)?,
                bigs(&target)?,
            )?
            .into(),
            Wire::Graph {
                k,
                n,
                edges,
                node_weights,
                edge_weights,
                weight_bound,
                target,
                partition,
            } => {
                let graph = Graph::new(n, edges.iter().map(|&[u, v]| (u, v)))?;
                let target = target.as_deref().map(big).transpose()?;
                let bound = weight_bound.as_deref().map(big).transpose()?;
                match (node_weights, edge_weights) {
                    (Some(_), Some(_)) => {
                        return Err(Error::Validation(
                            "a graph carries at most one of node_weights / edge_weights".into(),
                        ))
                    }
                    (Some(w), None) => WeightedGraph::new(
                        graph,
                        k,
                        Weights::Node(bigs(&w)?),
                        bound,
                        target.unwrap_or_default(),
                    )?
                    .into(),
                    (None, Some(w)) => {
                        let mut weights = vec![None; graph.m()];
                        for (u, v, x) in &w {
                            let idx = graph.edge_index(*u, *v).ok_or_else(|| {
                                Error::Validation(format!("weight given for non-edge ({u},{v})"))
                            })?;
                            if weights[idx].replace(big(x)?).is_some() {
                                return Err(Error::Validation(format!(
                                    "edge ({u},{v}) weighted twice"
                                )));
                            }
                        }
                        let weights = weights
                            .into_iter()
                            .enumerate()
                            .map(|(i, w)| {
                                w.ok_or_else(|| {
                                    let (u, v) = graph.edges()[i];
                                    Error::Validation(format!("edge ({u},{v}) has no weight"))
                                })
                            })
                            .collect::<Result<Vec<_>>>()?;
                        WeightedGraph::new(
                            graph,
                            k,
                            Weights::Edge(weights),
                            bound,
                            target.unwrap_or_default(),
                        )?
                        .into()
                    }
                    (None, None) => {
                        if target.as_ref().is_some_and(|t| t != &BigInt::default()) {
                            return Err(Error::Validation(
                                "an unweighted graph cannot carry a nonzero target".into(),
                            ));
                        }
                        CliqueInstance::new(graph, k, partition)?.into()
                    }
                }
            }
            Wire::Targetsum {
                q,
                k,
                elements,
                target,
            } => TargetSumInstance::new(small(&q)?, k, smalls(&elements)?, small(&target)?)?.into(),
            Wire::Lindep {
                q,
                k,
                n,
                vectors,
                target,
            } => {
                let target = smalls(&target)?;
                if target.len() != n {
                    return Err(Error::Validation(format!(
                        "target has length {} but n = {n}",
                        target.len()
                    )));
                }
                LinDepInstance::new(
                    small(&q)?,
                    k,
                    vectors.iter().map(|v| smalls(v)).collect::<Result<_>>()?,
                    target,
                )?
                .into()
            }
        })
    }
}

/// Canonical single-line JSON encoding of an instance.
pub fn serialize_instance(inst: &Instance) -> String {
    serde_json::to_string(&Wire::from_instance(inst)).expect("wire types always serialize")
}

/// Parses one instance object; field order in the input is irrelevant.
pub fn parse_instance(text: &str) -> Result<Instance> {
    let wire: Wire = serde_json::from_str(text).map_err(|e| Error::parse_from_json(&e))?;
    wire.into_instance()
}
