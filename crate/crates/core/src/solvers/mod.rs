//! Exact solvers. Brute-force oracles for every instance type, a
//! meet-in-the-middle k-SUM solver, triangle detection backends and the
//! weight-removal pipeline for exact node-weight triangles and cliques.

mod clique;
mod field;
mod ksum;
mod nodeweight;
mod triangle;

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instances::Instance;

pub use clique::solve_kclique_bruteforce;
pub use field::{solve_lindep_bruteforce, solve_targetsum_bruteforce};
pub use ksum::{solve_ksum_bruteforce, solve_ksum_mim, solve_vectorsum_bruteforce};
pub use nodeweight::{solve_nw_kclique, solve_nw_triangle};
pub use triangle::{detect_triangle, TriangleBackend};

/// Default cap on candidate sets a brute-force solver may examine.
pub const DEFAULT_BUDGET: u128 = 200_000_000;

/// Default cap on half-sum table entries for meet-in-the-middle.
pub const DEFAULT_MIM_BUDGET: u128 = 20_000_000;

/// Counters collected by a solver run.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolverStats {
    /// Reduced instances produced on the way (pipelines only).
    pub instances_generated: u64,
    /// Candidate sets (index sets, cliques, vertex pairs) examined.
    pub candidates_examined: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree_threshold: Option<u64>,
    /// Degree-split: neighbour pairs scanned at low-degree vertices.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub low_degree_pairs: Option<u64>,
    /// Degree-split: vertices of the high-degree core.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub core_vertices: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_us: Option<u64>,
}

/// Answer, optional witness and counters.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolverReport {
    pub solvable: bool,
    pub witness: Option<Vec<usize>>,
    pub stats: SolverStats,
}

impl SolverReport {
    pub(crate) fn found(witness: Vec<usize>, stats: SolverStats) -> Self {
        SolverReport {
            solvable: true,
            witness: Some(witness),
            stats,
        }
    }

    pub(crate) fn none(stats: SolverStats) -> Self {
        SolverReport {
            solvable: false,
            witness: None,
            stats,
        }
    }

    pub(crate) fn from_witness(witness: Option<Vec<usize>>, stats: SolverStats) -> Self {
        match witness {
            Some(w) => Self::found(w, stats),
            None => Self::none(stats),
        }
    }

    /// Drops the wall-clock reading, leaving only deterministic fields.
    pub fn without_timing(mut self) -> Self {
        self.stats.wall_time_us = None;
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

pub(crate) fn timed(start: Instant, mut report: SolverReport) -> SolverReport {
    report.stats.wall_time_us = Some(start.elapsed().as_micros() as u64);
    report
}

/// Solves any instance with its brute-force oracle.
pub fn solve_bruteforce(inst: &Instance) -> Result<SolverReport> {
    match inst {
        Instance::KSum(i) => solve_ksum_bruteforce(i, DEFAULT_BUDGET),
        Instance::VectorSum(i) => solve_vectorsum_bruteforce(i, DEFAULT_BUDGET),
        Instance::Weighted(g) => solve_kclique_bruteforce(&g.clone().into(), DEFAULT_BUDGET),
        Instance::Clique(_) => solve_kclique_bruteforce(inst, DEFAULT_BUDGET),
        Instance::TargetSum(i) => solve_targetsum_bruteforce(i, DEFAULT_BUDGET),
        Instance::LinDep(i) => solve_lindep_bruteforce(i, DEFAULT_BUDGET),
    }
}

/// Solver names accepted by [`solve_named`].
pub const SOLVER_NAMES: &[&str] = &[
    "brute",
    "exact",
    "mim",
    "triangle-naive",
    "triangle-split",
    "nw-triangle",
    "nw-kclique",
];

/// Runs a solver by name. `exact` picks meet-in-the-middle for k-SUM and
/// brute force elsewhere.
pub fn solve_named(name: &str, inst: &Instance) -> Result<SolverReport> {
    let unsupported = || {
        Err(Error::Unsupported(format!(
            "solver {name} does not accept {} instances",
            inst.kind()
        )))
    };
    match (name, inst) {
        ("brute", _) => solve_bruteforce(inst),
        ("exact" | "mim", Instance::KSum(i)) => solve_ksum_mim(i, DEFAULT_MIM_BUDGET),
        ("exact", _) => solve_bruteforce(inst),
        ("triangle-naive" | "triangle-split", Instance::Clique(c)) if c.k() == 3 => {
            let backend = if name == "triangle-naive" {
                TriangleBackend::NaiveMm
            } else {
                TriangleBackend::default()
            };
            Ok(detect_triangle(c.graph(), backend))
        }
        ("nw-triangle", Instance::Weighted(g)) => solve_nw_triangle(g, TriangleBackend::default()),
        ("nw-kclique", Instance::Weighted(g)) => solve_nw_kclique(g),
        _ if SOLVER_NAMES.contains(&name) => unsupported(),
        _ => Err(Error::Parameter(format!(
            "unknown solver {name}; expected one of {}",
            SOLVER_NAMES.join(", ")
        ))),
    }
}

/// Number of `k`-subsets of an `n`-set, saturating.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(x) => x / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}
