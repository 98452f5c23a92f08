use std::time::Instant;

use num_bigint::BigInt;

use super::ksum::{small_ints, Acc};
use super::{timed, SolverReport, SolverStats};
use crate::error::{Error, Result};
use crate::instances::{Graph, Instance, Weights};

/// Sorted intersection of two sorted slices.
pub(crate) fn intersect(a: &[usize], b: &[usize]) -> Vec<usize> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::with_capacity(a.len().min(b.len()));
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

enum Weighting<'a, T> {
    None,
    Node(&'a [T]),
    Edge(&'a [T]),
}

struct Search<'a, T> {
    g: &'a Graph,
    k: usize,
    weighting: Weighting<'a, T>,
    target: T,
    budget: u128,
    visited: u128,
    complete: u64,
}

impl<T: Acc> Search<'_, T> {
    fn extend(&self, acc: &T, chosen: &[usize], v: usize) -> T {
        match &self.weighting {
            Weighting::None => acc.clone(),
            Weighting::Node(w) => acc.plus(&w[v]),
            Weighting::Edge(w) => chosen.iter().fold(acc.clone(), |a, &u| {
                a.plus(&w[self.g.edge_index(u, v).expect("candidate is adjacent")])
            }),
        }
    }

    /// Candidates are the common neighbours above the last chosen vertex, so
    /// cliques are visited in lexicographic order.
    fn rec(&mut self, chosen: &mut Vec<usize>, cands: &[usize], acc: T) -> Result<bool> {
        if chosen.len() == self.k {
            self.complete += 1;
            return Ok(acc == self.target);
        }
        let need = self.k - chosen.len();
        for (idx, &v) in cands.iter().enumerate() {
            if cands.len() - idx < need {
                break;
            }
            if self.g.degree(v) + 1 < need {
                continue;
            }
            self.visited += 1;
            if self.visited > self.budget {
                return Err(Error::Resource(format!(
                    "clique search exceeded {} partial cliques",
                    self.budget
                )));
            }
            let next = if need > 1 {
                intersect(&cands[idx + 1..], self.g.neighbors(v))
            } else {
                Vec::new()
            };
            let acc2 = self.extend(&acc, chosen, v);
            chosen.push(v);
            if self.rec(chosen, &next, acc2)? {
                return Ok(true);
            }
            chosen.pop();
        }
        Ok(false)
    }
}

fn search<T: Acc>(
    g: &Graph,
    k: usize,
    weighting: Weighting<'_, T>,
    zero: T,
    target: T,
    budget: u128,
    stats: &mut SolverStats,
) -> Result<Option<Vec<usize>>> {
    let mut s = Search {
        g,
        k,
        weighting,
        target,
        budget,
        visited: 0,
        complete: 0,
    };
    let all: Vec<usize> = (0..g.n()).collect();
    let mut chosen = Vec::with_capacity(k);
    let hit = s.rec(&mut chosen, &all, zero)?;
    stats.candidates_examined += s.complete;
    Ok(hit.then_some(chosen))
}

/// Backtracking k-clique search honouring node or edge weights when present.
/// Returns the lexicographically smallest qualifying clique. `budget` caps the
/// number of partial cliques visited.
pub fn solve_kclique_bruteforce(inst: &Instance, budget: u128) -> Result<SolverReport> {
    let start = Instant::now();
    let mut stats = SolverStats::default();
    let witness = match inst {
        Instance::Clique(c) => search::<i128>(c.graph(), c.k(), Weighting::None, 0, 0, budget, &mut stats)?,
        Instance::Weighted(g) => {
            let values = match g.weights() {
                Weights::Node(w) | Weights::Edge(w) => w,
            };
            let node = matches!(g.weights(), Weights::Node(_));
            match small_ints(values.iter().chain([g.target()]), g.k() * g.k()) {
                Some(mut v) => {
                    let t = v.pop().expect("target appended");
                    let w = if node { Weighting::Node(&v[..]) } else { Weighting::Edge(&v[..]) };
                    search(g.graph(), g.k(), w, 0i128, t, budget, &mut stats)?
                }
                None => {
                    let w = if node { Weighting::Node(values) } else { Weighting::Edge(values) };
                    search(g.graph(), g.k(), w, BigInt::default(), g.target().clone(), budget, &mut stats)?
                }
            }
        }
        other => {
            return Err(Error::Unsupported(format!(
                "clique solver cannot take a {} instance",
                other.kind().name()
            )))
        }
    };
    Ok(timed(start, SolverReport::from_witness(witness, stats)))
}
