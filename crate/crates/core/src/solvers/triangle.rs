use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::{timed, SolverReport, SolverStats};
use crate::instances::Graph;

/// Triangle detection strategy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TriangleBackend {
    /// Boolean square of the adjacency matrix, intersected with adjacency.
    NaiveMm,
    /// Pairs of neighbours at vertices of degree below the threshold, then
    /// [`TriangleBackend::NaiveMm`] on the remaining high-degree core.
    /// `None` means `⌈√m⌉`.
    DegreeSplit { threshold: Option<usize> },
}

impl Default for TriangleBackend {
    fn default() -> Self {
        TriangleBackend::DegreeSplit { threshold: None }
    }
}

struct Bits {
    words: usize,
    rows: Vec<u64>,
}

impl Bits {
    fn new(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        Bits {
            words,
            rows: vec![0; words * n],
        }
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.rows[i * self.words..(i + 1) * self.words]
    }

    fn set(&mut self, i: usize, j: usize) {
        self.rows[i * self.words + j / 64] |= 1 << (j % 64);
    }

    fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }
}

/// Triangle among `vertices` (sorted) using the boolean square. Returns
/// original vertex ids and the number of edges tested against the square.
fn naive_mm(g: &Graph, vertices: &[usize]) -> (Option<[usize; 3]>, u64) {
    let n = vertices.len();
    let local = |v: usize| vertices.binary_search(&v).ok();
    let mut adj = Bits::new(n);
    let mut edges = Vec::new();
    for (i, &v) in vertices.iter().enumerate() {
        for &u in g.neighbors(v) {
            if let Some(j) = local(u) {
                adj.set(i, j);
                if i < j {
                    edges.push((i, j));
                }
            }
        }
    }
    // square[i] = OR of adj rows over the neighbours of i
    let mut square = Bits::new(n);
    for i in 0..n {
        for w in 0..adj.words {
            let mut word = adj.row(i)[w];
            while word != 0 {
                let j = w * 64 + word.trailing_zeros() as usize;
                word &= word - 1;
                for x in 0..adj.words {
                    square.rows[i * square.words + x] |= adj.row(j)[x];
                }
            }
        }
    }
    let mut tested = 0u64;
    for &(i, j) in &edges {
        tested += 1;
        if square.get(i, j) {
            let mid = (0..adj.words)
                .find_map(|x| {
                    let both = adj.row(i)[x] & adj.row(j)[x];
                    (both != 0).then(|| x * 64 + both.trailing_zeros() as usize)
                })
                .expect("a path of length two exists");
            let mut t = [vertices[i], vertices[j], vertices[mid]];
            t.sort_unstable();
            return (Some(t), tested);
        }
    }
    (None, tested)
}

/// Exact triangle detection. Both backends agree on every graph.
pub fn detect_triangle(g: &Graph, backend: TriangleBackend) -> SolverReport {
    let start = Instant::now();
    let mut stats = SolverStats::default();
    let found = match backend {
        TriangleBackend::NaiveMm => {
            let all: Vec<usize> = (0..g.n()).collect();
            let (t, tested) = naive_mm(g, &all);
            stats.candidates_examined = tested;
            t
        }
        TriangleBackend::DegreeSplit { threshold } => {
            let m = g.m();
            let delta = threshold.unwrap_or_else(|| (m as f64).sqrt().ceil() as usize).max(1);
            stats.degree_threshold = Some(delta as u64);
            let mut pairs = 0u64;
            let mut found = None;
            'low: for v in (0..g.n()).filter(|&v| g.degree(v) < delta) {
                let nb = g.neighbors(v);
                for (a, &x) in nb.iter().enumerate() {
                    for &y in &nb[a + 1..] {
                        pairs += 1;
                        if g.has_edge(x, y) {
                            let mut t = [v, x, y];
                            t.sort_unstable();
                            found = Some(t);
                            break 'low;
                        }
                    }
                }
            }
            stats.low_degree_pairs = Some(pairs);
            let core: Vec<usize> = (0..g.n()).filter(|&v| g.degree(v) >= delta).collect();
            stats.core_vertices = Some(core.len() as u64);
            debug_assert!(pairs as u128 <= m as u128 * delta as u128);
            debug_assert!(core.len() * delta <= 2 * m);
            stats.candidates_examined = pairs;
            if found.is_none() {
                let (t, tested) = naive_mm(g, &core);
                stats.candidates_examined += tested;
                found = t;
            }
            found
        }
    };
    timed(start, SolverReport::from_witness(found.map(|t| t.to_vec()), stats))
}
