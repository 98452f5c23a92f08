use std::time::Instant;

use super::{binomial, timed, SolverReport, SolverStats};
use crate::error::{ensure, Result};
use crate::instances::{in_span, LinDepInstance, TargetSumInstance};

/// Calls `visit` on every `k`-subset of `0..n` in lexicographic order until it
/// returns `true`; returns that subset.
fn first_combination(n: usize, k: usize, mut visit: impl FnMut(&[usize]) -> bool) -> Option<Vec<usize>> {
    if k > n {
        return None;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if visit(&idx) {
            return Some(idx);
        }
        let mut pos = k;
        loop {
            if pos == 0 {
                return None;
            }
            pos -= 1;
            if idx[pos] < n - k + pos {
                idx[pos] += 1;
                for q in pos + 1..k {
                    idx[q] = idx[q - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Exhaustive TargetSum over `Z_q`.
pub fn solve_targetsum_bruteforce(inst: &TargetSumInstance, budget: u128) -> Result<SolverReport> {
    let start = Instant::now();
    let c = binomial(inst.r(), inst.k());
    ensure!(c <= budget, Resource, "{c} subsets exceed the budget {budget}");
    let mut stats = SolverStats::default();
    let q = inst.q() as u128;
    let e = inst.elements();
    let witness = first_combination(inst.r(), inst.k(), |idx| {
        stats.candidates_examined += 1;
        idx.iter().map(|&i| e[i] as u128).sum::<u128>() % q == inst.target() as u128
    });
    Ok(timed(start, SolverReport::from_witness(witness, stats)))
}

/// Exhaustive LinDependence: Gaussian elimination on every `k`-subset.
pub fn solve_lindep_bruteforce(inst: &LinDepInstance, budget: u128) -> Result<SolverReport> {
    let start = Instant::now();
    let c = binomial(inst.r(), inst.k());
    ensure!(c <= budget, Resource, "{c} subsets exceed the budget {budget}");
    let mut stats = SolverStats::default();
    let witness = first_combination(inst.r(), inst.k(), |idx| {
        stats.candidates_examined += 1;
        let chosen: Vec<&[u64]> = idx.iter().map(|&i| inst.vectors()[i].as_slice()).collect();
        in_span(&chosen, inst.target(), inst.q())
    });
    Ok(timed(start, SolverReport::from_witness(witness, stats)))
}
