use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use super::clique::solve_kclique_bruteforce;
use super::triangle::{detect_triangle, TriangleBackend};
use super::{timed, SolverReport, SolverStats, DEFAULT_BUDGET};
use crate::error::{ensure, Error, Result};
use crate::forward::{
    first_alpha_hit, lift_alpha_witness, nodeweight_to_edgeweight, pipeline_dimension, AlphaDomain,
    AlphaFamily,
};
use crate::instances::{CliqueInstance, WeightedGraph, Weights};

/// Smallest `p > k` with `p^d ≥ kM + 1`.
fn radix_for(k: usize, m: &BigInt, d: usize) -> u64 {
    let need = m * k + 1u32;
    let root = need.nth_root(d as u32).to_u64().expect("radix fits in u64");
    let mut p = root.max(k as u64 + 1);
    while BigInt::from(p).pow(d as u32) < need {
        p += 1;
    }
    p
}

/// Node-weight k-clique via weight removal: shift weights into `[0, 2M]`,
/// turn node weights into edge weights per carry tuple, then scan the
/// unweighted graphs `G_α` with `unweighted`.
fn pipeline<F>(g: &WeightedGraph, unweighted: F, stats: &mut SolverStats) -> Result<Option<Vec<usize>>>
where
    F: Fn(&CliqueInstance) -> Option<Vec<usize>> + Sync,
{
    let weights = g
        .node_weights()
        .ok_or_else(|| Error::Precondition("graph must be node-weighted".into()))?;
    let k = g.k();
    let n = g.graph().n();
    let t = g.target();
    if k <= 2 {
        // pair (or single vertex) scan
        if k == 1 {
            stats.candidates_examined = n as u64;
            return Ok((0..n).find(|&v| &weights[v] == t).map(|v| vec![v]));
        }
        let mut examined = 0;
        let hit = g.graph().edges().iter().find(|&&(u, v)| {
            examined += 1;
            &(&weights[u] + &weights[v]) == t
        });
        stats.candidates_examined = examined;
        return Ok(hit.map(|&(u, v)| vec![u, v]));
    }

    let shift = weights.iter().map(|w| w.abs()).max().unwrap_or_else(BigInt::zero);
    let m: BigInt = &shift * 2;
    let shifted_t = t + &shift * k;
    if shifted_t.is_negative() || shifted_t > &m * k {
        return Ok(None);
    }
    let shifted = WeightedGraph::new(
        g.graph().clone(),
        k,
        Weights::Node(weights.iter().map(|w| w + &shift).collect()),
        Some(m.clone()),
        shifted_t,
    )?;
    let d = pipeline_dimension(n);
    let p = radix_for(k, &m, d);
    let edge_limit = k * k * g.graph().m();
    let weighted = nodeweight_to_edgeweight(&shifted, p, d)?;
    for (eg, _) in &weighted.items {
        let family = AlphaFamily::new(eg, AlphaDomain::Realized)?;
        let (examined, hit) = first_alpha_hit(&family, |ga| {
            assert!(
                ga.graph().m() <= edge_limit,
                "G_α has {} edges, above k²m = {edge_limit}",
                ga.graph().m()
            );
            unweighted(ga)
        });
        stats.instances_generated += examined as u64;
        if let Some((_, w)) = hit {
            let mut lifted = lift_alpha_witness(&w, n);
            lifted.sort_unstable();
            ensure!(
                g.verify(&lifted)?,
                Lift,
                "lifted clique {lifted:?} misses the target weight"
            );
            return Ok(Some(lifted));
        }
    }
    Ok(None)
}

/// Exact node-weight triangle: the weight-removal pipeline with `k = 3`, one
/// triangle detection per `G_α`.
pub fn solve_nw_triangle(g: &WeightedGraph, backend: TriangleBackend) -> Result<SolverReport> {
    let start = Instant::now();
    ensure!(g.k() == 3, Parameter, "triangle solver needs k = 3, got {}", g.k());
    let mut stats = SolverStats::default();
    let w = pipeline(g, |ga| detect_triangle(ga.graph(), backend).witness, &mut stats)?;
    Ok(timed(start, SolverReport::from_witness(w, stats)))
}

/// Exact node-weight k-clique: the same pipeline with the backtracking clique
/// search on each `G_α`.
pub fn solve_nw_kclique(g: &WeightedGraph) -> Result<SolverReport> {
    let start = Instant::now();
    let mut stats = SolverStats::default();
    let w = pipeline(
        g,
        |ga| {
            solve_kclique_bruteforce(&ga.clone().into(), DEFAULT_BUDGET)
                .expect("G_α search fits the budget")
                .witness
        },
        &mut stats,
    )?;
    Ok(timed(start, SolverReport::from_witness(w, stats)))
}
