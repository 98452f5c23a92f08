use num_bigint::BigInt;
use num_traits::Zero;

use super::ksum::check_index_set;
use crate::error::{ensure, Error, Result};

/// Simple undirected graph on vertices `0..n`.
///
/// Edges are stored normalized (`u < v`) and sorted; adjacency is a flat
/// offset array with sorted neighbour segments.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    offsets: Vec<usize>,
    adj: Vec<usize>,
}

impl Graph {
    /// Edges may be given in either orientation; self-loops and duplicates are rejected.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut norm: Vec<(usize, usize)> = Vec::new();
        for (u, v) in edges {
            ensure!(u < n && v < n, Validation, "edge ({u},{v}) references a vertex >= {n}");
            ensure!(u != v, Validation, "self-loop at vertex {u}");
            norm.push((u.min(v), u.max(v)));
        }
        norm.sort_unstable();
        if let Some(w) = norm.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Validation(format!(
                "duplicate edge ({},{})",
                w[0].0, w[0].1
            )));
        }
        Ok(Graph::from_sorted_unchecked(n, norm))
    }

    /// Edges must be normalized and sorted. Filling in edge order then
    /// leaves every neighbour segment sorted.
    pub(crate) fn from_sorted_unchecked(n: usize, edges: Vec<(usize, usize)>) -> Self {
        let mut offsets = vec![0usize; n + 1];
        for &(u, v) in &edges {
            offsets[u + 1] += 1;
            offsets[v + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets[..n].to_vec();
        let mut adj = vec![0usize; 2 * edges.len()];
        for &(u, v) in &edges {
            adj[fill[u]] = v;
            fill[u] += 1;
            adj[fill[v]] = u;
            fill[v] += 1;
        }
        Graph { n, edges, offsets, adj }
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        Graph::from_sorted_unchecked(n, edges)
    }

    pub fn cycle(n: usize) -> Self {
        Graph::new(n, (0..n).map(|i| (i, (i + 1) % n))).expect("cycle needs n >= 3")
    }

    pub fn empty(n: usize) -> Self {
        Graph::from_sorted_unchecked(n, Vec::new())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    /// Position of edge `{u, v}` in [`Graph::edges`].
    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        let key = (u.min(v), u.max(v));
        self.edges.binary_search(&key).ok()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.neighbors(u).binary_search(&v).is_ok()
    }

    pub fn is_clique(&self, vertices: &[usize]) -> bool {
        vertices
            .iter()
            .enumerate()
            .all(|(a, &u)| vertices[a + 1..].iter().all(|&v| self.has_edge(u, v)))
    }
}

/// Vertex or edge weights carried by a [`WeightedGraph`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Weights {
    /// One weight per vertex.
    Node(Vec<BigInt>),
    /// One weight per edge, aligned with [`Graph::edges`].
    Edge(Vec<BigInt>),
}

/// Exact node-weight or edge-weight k-Clique instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedGraph {
    graph: Graph,
    k: usize,
    weights: Weights,
    weight_bound: BigInt,
    target: BigInt,
}

impl WeightedGraph {
    /// `weight_bound` defaults to the largest absolute weight present.
    pub fn new(
        graph: Graph,
        k: usize,
        weights: Weights,
        weight_bound: Option<BigInt>,
        target: BigInt,
    ) -> Result<Self> {
        ensure!(k >= 1, Validation, "k must be at least 1, got {k}");
        let values = match &weights {
            Weights::Node(w) => {
                ensure!(
                    w.len() == graph.n(),
                    Validation,
                    "{} node weights for {} vertices",
                    w.len(),
                    graph.n()
                );
                w
            }
            Weights::Edge(w) => {
                ensure!(
                    w.len() == graph.m(),
                    Validation,
                    "{} edge weights for {} edges",
                    w.len(),
                    graph.m()
                );
                w
            }
        };
        let bound = match weight_bound {
            Some(b) => b,
            None => values
                .iter()
                .map(|w| num_traits::Signed::abs(w))
                .max()
                .unwrap_or_else(BigInt::zero),
        };
        ensure!(bound >= BigInt::zero(), Validation, "weight bound must be nonnegative");
        if let Some(w) = values.iter().find(|w| num_traits::Signed::abs(*w) > bound) {
            return Err(Error::Validation(format!(
                "weight {w} exceeds declared bound {bound}"
            )));
        }
        Ok(WeightedGraph {
            graph,
            k,
            weights,
            weight_bound: bound,
            target,
        })
    }

    pub fn node_weighted(graph: Graph, k: usize, weights: Vec<BigInt>, target: BigInt) -> Result<Self> {
        WeightedGraph::new(graph, k, Weights::Node(weights), None, target)
    }

    pub fn edge_weighted(graph: Graph, k: usize, weights: Vec<BigInt>, target: BigInt) -> Result<Self> {
        WeightedGraph::new(graph, k, Weights::Edge(weights), None, target)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn weights(&self) -> &Weights {
        &self.weights
    }

    pub fn node_weights(&self) -> Option<&[BigInt]> {
        match &self.weights {
            Weights::Node(w) => Some(w),
            Weights::Edge(_) => None,
        }
    }

    pub fn edge_weights(&self) -> Option<&[BigInt]> {
        match &self.weights {
            Weights::Edge(w) => Some(w),
            Weights::Node(_) => None,
        }
    }

    pub fn weight_bound(&self) -> &BigInt {
        &self.weight_bound
    }

    pub fn target(&self) -> &BigInt {
        &self.target
    }

    /// Total weight of a vertex set: node weights summed, or the weights of
    /// all edges inside the set. Returns `None` if an inner pair is not an edge.
    pub fn clique_weight(&self, vertices: &[usize]) -> Option<BigInt> {
        if !self.graph.is_clique(vertices) {
            return None;
        }
        Some(match &self.weights {
            Weights::Node(w) => vertices.iter().map(|&v| &w[v]).sum(),
            Weights::Edge(w) => {
                let mut total = BigInt::zero();
                for (a, &u) in vertices.iter().enumerate() {
                    for &v in &vertices[a + 1..] {
                        total += &w[self.graph.edge_index(u, v)?];
                    }
                }
                total
            }
        })
    }

    pub fn verify(&self, witness: &[usize]) -> Result<bool> {
        check_index_set(witness, self.k, self.graph.n())?;
        Ok(self
            .clique_weight(witness)
            .is_some_and(|w| w == self.target))
    }
}

/// Unweighted k-Clique, optionally with a k-partite slot labelling (slots `1..=k`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliqueInstance {
    graph: Graph,
    k: usize,
    partition: Option<Vec<usize>>,
}

impl CliqueInstance {
    pub fn new(graph: Graph, k: usize, partition: Option<Vec<usize>>) -> Result<Self> {
        ensure!(k >= 1, Validation, "k must be at least 1, got {k}");
        if let Some(part) = &partition {
            ensure!(
                part.len() == graph.n(),
                Validation,
                "partition has {} labels for {} vertices",
                part.len(),
                graph.n()
            );
            if let Some(s) = part.iter().find(|&&s| s == 0 || s > k) {
                return Err(Error::Validation(format!("slot {s} outside 1..={k}")));
            }
            if let Some(&(u, v)) = graph.edges().iter().find(|&&(u, v)| part[u] == part[v]) {
                return Err(Error::Validation(format!(
                    "edge ({u},{v}) joins two vertices of slot {}",
                    part[u]
                )));
            }
        }
        Ok(CliqueInstance {
            graph,
            k,
            partition,
        })
    }

    pub(crate) fn new_unchecked(graph: Graph, k: usize, partition: Option<Vec<usize>>) -> Self {
        CliqueInstance {
            graph,
            k,
            partition,
        }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn partition(&self) -> Option<&[usize]> {
        self.partition.as_deref()
    }

    pub fn verify(&self, witness: &[usize]) -> Result<bool> {
        check_index_set(witness, self.k, self.graph.n())?;
        Ok(self.graph.is_clique(witness))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_loops_and_duplicates() {
        assert!(Graph::new(3, [(0, 0)]).is_err());
        assert!(Graph::new(3, [(0, 1), (1, 0)]).is_err());
        assert!(Graph::new(3, [(0, 3)]).is_err());
    }

    #[test]
    fn edge_weighted_triangle_witness() {
        let g = Graph::complete(3);
        let w = WeightedGraph::edge_weighted(g, 3, vec![1.into(), (-1).into(), 0.into()], 0.into())
            .unwrap();
        assert!(w.verify(&[0, 1, 2]).unwrap());
        assert!(w.verify(&[2, 0, 1]).unwrap());
    }

    #[test]
    fn node_weighted_sum_check() {
        let g = Graph::complete(3);
        let w = WeightedGraph::node_weighted(g.clone(), 3, vec![1.into(), 2.into(), 3.into()], 6.into())
            .unwrap();
        assert!(w.verify(&[0, 1, 2]).unwrap());
        let w = WeightedGraph::node_weighted(g, 3, vec![1.into(), 2.into(), 3.into()], 5.into())
            .unwrap();
        assert!(!w.verify(&[0, 1, 2]).unwrap());
    }

    #[test]
    fn non_clique_fails_verification() {
        let c = CliqueInstance::new(Graph::cycle(5), 3, None).unwrap();
        assert!(!c.verify(&[0, 1, 2]).unwrap());
        assert!(matches!(c.verify(&[0, 1, 7]), Err(Error::MalformedWitness(_))));
    }

    #[test]
    fn partition_must_be_proper() {
        let g = Graph::new(2, [(0, 1)]).unwrap();
        assert!(CliqueInstance::new(g.clone(), 2, Some(vec![1, 1])).is_err());
        assert!(CliqueInstance::new(g.clone(), 2, Some(vec![1, 3])).is_err());
        assert!(CliqueInstance::new(g, 2, Some(vec![1, 2])).is_ok());
    }

    #[test]
    fn weight_bound_enforced() {
        let g = Graph::new(2, [(0, 1)]).unwrap();
        let r = WeightedGraph::new(g, 2, Weights::Edge(vec![5.into()]), Some(3.into()), 0.into());
        assert!(matches!(r, Err(Error::Validation(_))));
    }
}
