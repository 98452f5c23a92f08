//! Seeded random instance generators. Identical arguments give identical
//! instances.

use num_bigint::BigInt;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::error::{ensure, Result};
use crate::instances::{
    CliqueInstance, Graph, Instance, KSumInstance, LinDepInstance, Range, TargetSumInstance,
    VectorSumInstance, WeightedGraph, Weights,
};

/// Whether a solution is planted.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Bias {
    /// Target drawn uniformly from `[0, kM]`.
    #[default]
    None,
    /// Target set to the sum of a random k-subset.
    Plant,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightKind {
    #[default]
    None,
    /// Node weights in `[0, M]`.
    Node,
    /// Edge weights in `[−M, M]`.
    Edge,
}

pub fn rng_for(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// Random k-subset of `0..n`, ascending.
fn subset<R: Rng>(rng: &mut R, n: usize, k: usize) -> Vec<usize> {
    let mut s = sample(rng, n, k).into_vec();
    s.sort_unstable();
    s
}

/// Uniform numbers in `[0, M]`; with [`Bias::Plant`] the target is the sum of
/// a random k-subset.
pub fn gen_random_ksum(n: usize, k: usize, m: u64, bias: Bias, seed: u64) -> Result<KSumInstance> {
    ensure!(k >= 1 && n >= k, Parameter, "need n >= k >= 1, got n = {n}, k = {k}");
    let mut rng = rng_for(seed);
    ksum_with(&mut rng, n, k, m, bias)
}

fn ksum_with<R: Rng>(rng: &mut R, n: usize, k: usize, m: u64, bias: Bias) -> Result<KSumInstance> {
    let numbers: Vec<u64> = (0..n).map(|_| rng.gen_range(0..=m)).collect();
    let target: u128 = match bias {
        Bias::None => rng.gen_range(0..=k as u128 * m as u128),
        Bias::Plant => subset(rng, n, k).iter().map(|&i| numbers[i] as u128).sum(),
    };
    KSumInstance::new(
        k,
        numbers.into_iter().map(BigInt::from).collect(),
        Some(Range::upto(m)?),
        BigInt::from(target),
    )
}

/// Parameters of [`gen_random_graph`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphSpec {
    pub n: usize,
    pub edge_prob: f64,
    pub k: usize,
    pub plant_clique: bool,
    pub weights: WeightKind,
    pub max_weight: u64,
}

/// Erdős–Rényi graph, optionally with a planted k-clique and weights. The
/// target of a weighted graph is the planted clique's weight, or else drawn
/// uniformly (node weights) or 0 (edge weights).
pub fn gen_random_graph(spec: &GraphSpec, seed: u64) -> Result<Instance> {
    let mut rng = rng_for(seed);
    graph_with(&mut rng, spec)
}

fn graph_with<R: Rng>(rng: &mut R, spec: &GraphSpec) -> Result<Instance> {
    let GraphSpec {
        n,
        edge_prob,
        k,
        plant_clique,
        weights,
        max_weight: m,
    } = *spec;
    ensure!((0.0..=1.0).contains(&edge_prob), Parameter, "edge probability {edge_prob} outside [0, 1]");
    ensure!(k >= 1, Parameter, "k must be at least 1");
    ensure!(!plant_clique || n >= k, Parameter, "cannot plant a {k}-clique in {n} vertices");
    let mut adj = vec![vec![false; n]; n];
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(edge_prob) {
                adj[u][v] = true;
            }
        }
    }
    let planted = if plant_clique { subset(rng, n, k) } else { Vec::new() };
    for (a, &u) in planted.iter().enumerate() {
        for &v in &planted[a + 1..] {
            adj[u][v] = true;
        }
    }
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|&(u, v)| adj[u][v])
        .collect();
    let graph = Graph::new(n, edges)?;
    Ok(match weights {
        WeightKind::None => CliqueInstance::new(graph, k, None)?.into(),
        WeightKind::Node => {
            let w: Vec<BigInt> = (0..n).map(|_| BigInt::from(rng.gen_range(0..=m))).collect();
            let target = if plant_clique {
                planted.iter().map(|&v| &w[v]).sum()
            } else {
                BigInt::from(rng.gen_range(0..=k as u128 * m as u128))
            };
            WeightedGraph::new(graph, k, Weights::Node(w), Some(BigInt::from(m)), target)?.into()
        }
        WeightKind::Edge => {
            let mi = m as i128;
            let mut w: Vec<i128> = (0..graph.m()).map(|_| rng.gen_range(-mi..=mi)).collect();
            if plant_clique && k >= 2 {
                // rebalance the planted clique's last edge towards weight 0
                let idx: Vec<usize> = planted
                    .iter()
                    .enumerate()
                    .flat_map(|(a, &u)| planted[a + 1..].iter().map(move |&v| (u, v)))
                    .map(|(u, v)| graph.edge_index(u, v).expect("planted edge"))
                    .collect();
                let (last, rest) = idx.split_last().expect("k >= 2");
                let others: i128 = rest.iter().map(|&i| w[i]).sum();
                w[*last] = (-others).clamp(-mi, mi);
            }
            WeightedGraph::new(
                graph,
                k,
                Weights::Edge(w.into_iter().map(BigInt::from).collect()),
                Some(BigInt::from(m)),
                BigInt::from(0),
            )?
            .into()
        }
    })
}

/// Random k-Vector-SUM with entries in `[0, M]`.
pub fn gen_random_vectorsum(n: usize, k: usize, dim: usize, m: u64, bias: Bias, seed: u64) -> Result<VectorSumInstance> {
    ensure!(k >= 1 && n >= k, Parameter, "need n >= k >= 1");
    let mut rng = rng_for(seed);
    let vectors: Vec<Vec<u64>> = (0..n).map(|_| (0..dim).map(|_| rng.gen_range(0..=m)).collect()).collect();
    let target: Vec<u128> = match bias {
        Bias::None => (0..dim).map(|_| rng.gen_range(0..=k as u128 * m as u128)).collect(),
        Bias::Plant => {
            let s = subset(&mut rng, n, k);
            (0..dim).map(|j| s.iter().map(|&i| vectors[i][j] as u128).sum()).collect()
        }
    };
    VectorSumInstance::new(
        k,
        dim,
        vectors
            .into_iter()
            .map(|v| v.into_iter().map(BigInt::from).collect())
            .collect(),
        Some(Range::upto(m)?),
        target.into_iter().map(BigInt::from).collect(),
    )
}

/// Random TargetSum over `Z_q`.
pub fn gen_random_targetsum(q: u64, r: usize, k: usize, bias: Bias, seed: u64) -> Result<TargetSumInstance> {
    ensure!(q >= 2 && k >= 1 && r >= k, Parameter, "need q >= 2 and r >= k >= 1");
    let mut rng = rng_for(seed);
    let elements: Vec<u64> = (0..r).map(|_| rng.gen_range(0..q)).collect();
    let target = match bias {
        Bias::None => rng.gen_range(0..q),
        Bias::Plant => (subset(&mut rng, r, k).iter().map(|&i| elements[i] as u128).sum::<u128>() % q as u128) as u64,
    };
    TargetSumInstance::new(q, k, elements, target)
}

/// Random LinDependence over `F_q`; planting makes `z` a random combination
/// of `k` of the vectors.
pub fn gen_random_lindep(q: u64, r: usize, len: usize, k: usize, bias: Bias, seed: u64) -> Result<LinDepInstance> {
    ensure!(k >= 1 && r >= k && len >= 1, Parameter, "need r >= k >= 1 and length >= 1");
    let mut rng = rng_for(seed);
    let vectors: Vec<Vec<u64>> = (0..r).map(|_| (0..len).map(|_| rng.gen_range(0..q)).collect()).collect();
    let target = match bias {
        Bias::None => (0..len).map(|_| rng.gen_range(0..q)).collect(),
        Bias::Plant => {
            let s = subset(&mut rng, r, k);
            let c: Vec<u64> = s.iter().map(|_| rng.gen_range(0..q)).collect();
            (0..len)
                .map(|j| {
                    (s.iter().zip(&c).map(|(&i, &c)| c as u128 * vectors[i][j] as u128).sum::<u128>() % q as u128)
                        as u64
                })
                .collect()
        }
    };
    LinDepInstance::new(q, k, vectors, target)
}
