use std::collections::HashMap;
use std::hash::Hash;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::{binomial, timed, SolverReport, SolverStats};
use crate::error::{ensure, Result};
use crate::instances::{KSumInstance, VectorSumInstance};

/// Values that can be summed along a search path.
pub(crate) trait Acc: Clone + PartialEq {
    fn plus(&self, other: &Self) -> Self;
}

impl Acc for i128 {
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
}

impl Acc for BigInt {
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
}

impl<T: Acc> Acc for Vec<T> {
    fn plus(&self, other: &Self) -> Self {
        self.iter().zip(other).map(|(a, b)| a.plus(b)).collect()
    }
}

/// All values converted to `i128`, provided sums and differences of up to
/// `k + 1` of them cannot overflow.
pub(crate) fn small_ints<'a>(values: impl IntoIterator<Item = &'a BigInt>, k: usize) -> Option<Vec<i128>> {
    let limit = 126 - (usize::BITS - (k + 1).leading_zeros()) as u64;
    values
        .into_iter()
        .map(|x| if x.bits() <= limit { x.to_i128() } else { None })
        .collect()
}

/// Depth-first search over index sets in lexicographic order; the first hit
/// is the lexicographically smallest witness.
pub(crate) fn first_subset<T: Acc>(
    values: &[T],
    k: usize,
    zero: T,
    target: &T,
    examined: &mut u64,
) -> Option<Vec<usize>> {
    fn rec<T: Acc>(
        values: &[T],
        k: usize,
        start: usize,
        chosen: &mut Vec<usize>,
        acc: &T,
        target: &T,
        examined: &mut u64,
    ) -> bool {
        let left = k - chosen.len();
        if left == 0 {
            *examined += 1;
            return acc == target;
        }
        for i in start..=values.len() - left {
            chosen.push(i);
            if rec(values, k, i + 1, chosen, &acc.plus(&values[i]), target, examined) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    if values.len() < k {
        return None;
    }
    let mut chosen = Vec::with_capacity(k);
    rec(values, k, 0, &mut chosen, &zero, target, examined).then_some(chosen)
}

fn guard(n: usize, k: usize, budget: u128) -> Result<()> {
    let c = binomial(n, k);
    ensure!(c <= budget, Resource, "C({n},{k}) = {c} candidate sets exceed the budget {budget}");
    Ok(())
}

/// Exhaustive k-SUM; returns the lexicographically smallest witness.
pub fn solve_ksum_bruteforce(inst: &KSumInstance, budget: u128) -> Result<SolverReport> {
    let start = Instant::now();
    guard(inst.n(), inst.k(), budget)?;
    let mut stats = SolverStats::default();
    let witness = match small_ints(inst.numbers().iter().chain([inst.target()]), inst.k()) {
        Some(mut v) => {
            let t = v.pop().expect("target appended");
            first_subset(&v, inst.k(), 0, &t, &mut stats.candidates_examined)
        }
        None => first_subset(
            inst.numbers(),
            inst.k(),
            BigInt::default(),
            inst.target(),
            &mut stats.candidates_examined,
        ),
    };
    Ok(timed(start, SolverReport::from_witness(witness, stats)))
}

/// Exhaustive k-Vector-SUM; returns the lexicographically smallest witness.
pub fn solve_vectorsum_bruteforce(inst: &VectorSumInstance, budget: u128) -> Result<SolverReport> {
    let start = Instant::now();
    let mut stats = SolverStats::default();
    if inst.trivially_unsolvable() {
        return Ok(timed(start, SolverReport::none(stats)));
    }
    guard(inst.n(), inst.k(), budget)?;
    let flat = inst
        .vectors()
        .iter()
        .map(|v| small_ints(v, inst.k()))
        .collect::<Option<Vec<_>>>()
        .zip(small_ints(inst.target(), inst.k()));
    let witness = match flat {
        Some((vectors, target)) => first_subset(
            &vectors,
            inst.k(),
            vec![0i128; inst.dim()],
            &target,
            &mut stats.candidates_examined,
        ),
        None => first_subset(
            inst.vectors(),
            inst.k(),
            vec![BigInt::default(); inst.dim()],
            &inst.target().to_vec(),
            &mut stats.candidates_examined,
        ),
    };
    Ok(timed(start, SolverReport::from_witness(witness, stats)))
}

trait Scalar: Acc + Hash + Eq {
    fn minus(&self, other: &Self) -> Self;
}

impl Scalar for i128 {
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
}

impl Scalar for BigInt {
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
}

/// Calls `visit(combo, sum)` for every `len`-subset in lexicographic order.
fn for_each_subset_sum<T: Acc>(values: &[T], len: usize, zero: T, visit: &mut impl FnMut(&[usize], &T) -> bool) {
    fn rec<T: Acc>(
        values: &[T],
        len: usize,
        start: usize,
        chosen: &mut Vec<usize>,
        acc: &T,
        visit: &mut impl FnMut(&[usize], &T) -> bool,
    ) -> bool {
        if chosen.len() == len {
            return visit(chosen, acc);
        }
        let left = len - chosen.len();
        for i in start..=values.len() - left {
            chosen.push(i);
            let go = rec(values, len, i + 1, chosen, &acc.plus(&values[i]), visit);
            chosen.pop();
            if !go {
                return false;
            }
        }
        true
    }
    if values.len() >= len {
        rec(values, len, 0, &mut Vec::with_capacity(len), &zero, visit);
    }
}

/// Every solution `i_1 < … < i_k` splits uniquely into its first `⌈k/2⌉`
/// indices `A` and last `⌊k/2⌋` indices `B` with `max A < min B`. The table
/// keeps, per `B`-sum, the subset with the largest minimum index.
fn mim<T: Scalar>(values: &[T], k: usize, zero: T, target: &T, stats: &mut SolverStats) -> Option<Vec<usize>> {
    let n = values.len();
    if n < k {
        return None;
    }
    let a = k.div_ceil(2);
    let b = k - a;
    // sum -> position of the stored subset in `flat` (b indices each)
    let mut table: HashMap<T, usize> = HashMap::new();
    let mut flat: Vec<usize> = Vec::new();
    let first_of = |flat: &[usize], pos: usize| if b == 0 { n } else { flat[pos * b] };
    let mut examined = 0u64;
    for_each_subset_sum(values, b, zero.clone(), &mut |combo, sum| {
        examined += 1;
        let min = combo.first().copied().unwrap_or(n);
        match table.get(sum) {
            Some(&pos) => {
                if first_of(&flat, pos) < min {
                    flat[pos * b..(pos + 1) * b].copy_from_slice(combo);
                }
            }
            None => {
                table.insert(sum.clone(), flat.len() / b.max(1));
                flat.extend_from_slice(combo);
            }
        }
        true
    });
    let mut found = None;
    for_each_subset_sum(values, a, zero, &mut |combo, sum| {
        examined += 1;
        let max = *combo.last().expect("a >= 1");
        if let Some(&pos) = table.get(&target.minus(sum)) {
            if first_of(&flat, pos) > max {
                let mut w = combo.to_vec();
                w.extend_from_slice(&flat[pos * b..(pos + 1) * b]);
                found = Some(w);
                return false;
            }
        }
        true
    });
    stats.candidates_examined += examined;
    found
}

/// Meet-in-the-middle k-SUM over half-sum tables of sizes `⌈k/2⌉` and `⌊k/2⌋`.
/// `budget` caps the number of table entries.
pub fn solve_ksum_mim(inst: &KSumInstance, budget: u128) -> Result<SolverReport> {
    let start = Instant::now();
    let k = inst.k();
    let table = binomial(inst.n(), k / 2);
    ensure!(table <= budget, Resource, "half-sum table of {table} entries exceeds the budget {budget}");
    let mut stats = SolverStats::default();
    let witness = match small_ints(inst.numbers().iter().chain([inst.target()]), inst.k()) {
        Some(mut v) => {
            let t = v.pop().expect("target appended");
            mim(&v, k, 0, &t, &mut stats)
        }
        None => mim(inst.numbers(), k, BigInt::default(), inst.target(), &mut stats),
    };
    Ok(timed(start, SolverReport::from_witness(witness, stats)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solvers::DEFAULT_BUDGET;

    fn ksum(k: usize, xs: &[i64], t: i64) -> KSumInstance {
        KSumInstance::from_i64(k, xs, t).unwrap()
    }

    #[test]
    fn brute_examples() {
        let r = solve_ksum_bruteforce(&ksum(3, &[1, 2, 3, 4, 5], 12), DEFAULT_BUDGET).unwrap();
        assert_eq!(r.witness, Some(vec![2, 3, 4]));
        assert!(solve_ksum_bruteforce(&ksum(1, &[7], 7), DEFAULT_BUDGET).unwrap().solvable);
        assert!(!solve_ksum_bruteforce(&ksum(2, &[1, 1], 3), DEFAULT_BUDGET).unwrap().solvable);
    }

    #[test]
    fn brute_is_lexicographically_first() {
        let r = solve_ksum_bruteforce(&ksum(2, &[3, 1, 2, 2, 1], 4), DEFAULT_BUDGET).unwrap();
        assert_eq!(r.witness, Some(vec![0, 1]));
    }

    #[test]
    fn mim_examples() {
        assert!(solve_ksum_mim(&ksum(4, &[0, 0, 0, 0], 0), DEFAULT_BUDGET).unwrap().solvable);
        let r = solve_ksum_mim(&ksum(2, &[5, -5], 0), DEFAULT_BUDGET).unwrap();
        assert_eq!(r.witness, Some(vec![0, 1]));
        assert!(!solve_ksum_mim(&ksum(3, &[1, 2], 3), DEFAULT_BUDGET).unwrap().solvable);
    }

    #[test]
    fn budget_guard() {
        let inst = ksum(3, &[1; 30], 3);
        assert!(matches!(
            solve_ksum_bruteforce(&inst, 10),
            Err(crate::Error::Resource(_))
        ));
    }

    #[test]
    fn big_numbers_take_the_bigint_path() {
        let huge: BigInt = BigInt::from(1) << 200u32;
        let inst = KSumInstance::new(
            2,
            vec![huge.clone(), BigInt::from(1), huge.clone() + 2],
            None,
            huge.clone() * 2 + 2,
        )
        .unwrap();
        let b = solve_ksum_bruteforce(&inst, DEFAULT_BUDGET).unwrap();
        let m = solve_ksum_mim(&inst, DEFAULT_BUDGET).unwrap();
        assert_eq!(b.witness, Some(vec![0, 2]));
        assert!(m.solvable);
    }

    #[test]
    fn vectorsum_examples() {
        let inst = VectorSumInstance::from_i64(2, &[vec![1, 1], vec![1, 0]], &[2, 1]).unwrap();
        let r = solve_vectorsum_bruteforce(&inst, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.witness, Some(vec![0, 1]));
        let zero = VectorSumInstance::from_i64(2, &[vec![0, 0], vec![0, 0]], &[0, 0]).unwrap();
        assert!(solve_vectorsum_bruteforce(&zero, DEFAULT_BUDGET).unwrap().solvable);
        let out = VectorSumInstance::from_i64(2, &[vec![1, 1], vec![1, 0]], &[9, 1]).unwrap();
        let r = solve_vectorsum_bruteforce(&out, DEFAULT_BUDGET).unwrap();
        assert!(!r.solvable);
        assert_eq!(r.stats.candidates_examined, 0);
    }
}
