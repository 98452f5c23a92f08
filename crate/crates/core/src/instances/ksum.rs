use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{ensure, Error, Result};

/// Inclusive integer interval `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Range {
    pub lo: BigInt,
    pub hi: BigInt,
}

impl Range {
    pub fn new(lo: BigInt, hi: BigInt) -> Result<Self> {
        ensure!(lo <= hi, Validation, "range lower bound {lo} exceeds upper bound {hi}");
        Ok(Range { lo, hi })
    }

    /// `[0, m]`.
    pub fn upto(m: impl Into<BigInt>) -> Result<Self> {
        Range::new(BigInt::zero(), m.into())
    }

    pub fn contains(&self, x: &BigInt) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    /// Smallest range containing zero and every value in `values`.
    pub fn spanning<'a>(values: impl IntoIterator<Item = &'a BigInt>) -> Self {
        let mut lo = BigInt::zero();
        let mut hi = BigInt::zero();
        for v in values {
            if v < &lo {
                lo = v.clone();
            }
            if v > &hi {
                hi = v.clone();
            }
        }
        Range { lo, hi }
    }

    /// The k-fold Minkowski sum `[k·lo, k·hi]`.
    pub fn scaled(&self, k: usize) -> Range {
        Range {
            lo: &self.lo * k,
            hi: &self.hi * k,
        }
    }
}

/// k-SUM: are there `k` distinct indices whose numbers sum to `target`?
///
/// Witnesses are index sets; values may repeat across indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KSumInstance {
    k: usize,
    numbers: Vec<BigInt>,
    range: Range,
    target: BigInt,
}

impl KSumInstance {
    /// Builds an instance; when `range` is `None` the smallest range containing
    /// zero and every number is declared.
    pub fn new(
        k: usize,
        numbers: Vec<BigInt>,
        range: Option<Range>,
        target: BigInt,
    ) -> Result<Self> {
        ensure!(k >= 1, Validation, "k must be at least 1, got {k}");
        let range = range.unwrap_or_else(|| Range::spanning(&numbers));
        if let Some((i, x)) = numbers.iter().enumerate().find(|(_, x)| !range.contains(x)) {
            return Err(Error::Validation(format!(
                "number {x} at index {i} lies outside the declared range [{}, {}]",
                range.lo, range.hi
            )));
        }
        Ok(KSumInstance {
            k,
            numbers,
            range,
            target,
        })
    }

    /// Convenience constructor from machine integers with an inferred range.
    pub fn from_i64(k: usize, numbers: &[i64], target: i64) -> Result<Self> {
        KSumInstance::new(
            k,
            numbers.iter().map(|&x| BigInt::from(x)).collect(),
            None,
            BigInt::from(target),
        )
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.numbers.len()
    }

    pub fn numbers(&self) -> &[BigInt] {
        &self.numbers
    }

    pub fn range(&self) -> &Range {
        &self.range
    }

    pub fn target(&self) -> &BigInt {
        &self.target
    }

    /// The declared upper bound `M` when the range is `[0, M]`-shaped.
    pub fn nonnegative_bound(&self) -> Result<&BigInt> {
        ensure!(
            !self.range.lo.is_negative(),
            Precondition,
            "numbers must be declared nonnegative, range starts at {}",
            self.range.lo
        );
        Ok(&self.range.hi)
    }

    pub fn verify(&self, witness: &[usize]) -> Result<bool> {
        check_index_set(witness, self.k, self.n())?;
        let sum: BigInt = witness.iter().map(|&i| &self.numbers[i]).sum();
        Ok(sum == self.target)
    }

    /// Rewrites every number as `k·x − t` so the target becomes zero.
    ///
    /// A k-subset sums to `t` iff its images sum to `0`, so the solving index
    /// sets of both instances coincide.
    pub fn normalize_zero_target(&self) -> KSumInstance {
        let k = self.k;
        let shift = |x: &BigInt| x * k - &self.target;
        KSumInstance {
            k,
            numbers: self.numbers.iter().map(shift).collect(),
            range: Range {
                lo: shift(&self.range.lo),
                hi: shift(&self.range.hi),
            },
            target: BigInt::zero(),
        }
    }
}

/// k-Vector-SUM over integer vectors of a fixed dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorSumInstance {
    k: usize,
    dim: usize,
    vectors: Vec<Vec<BigInt>>,
    entry_range: Range,
    target: Vec<BigInt>,
}

impl VectorSumInstance {
    pub fn new(
        k: usize,
        dim: usize,
        vectors: Vec<Vec<BigInt>>,
        entry_range: Option<Range>,
        target: Vec<BigInt>,
    ) -> Result<Self> {
        ensure!(k >= 1, Validation, "k must be at least 1, got {k}");
        ensure!(dim >= 1, Validation, "dimension must be at least 1");
        ensure!(
            target.len() == dim,
            Validation,
            "target has length {} but dimension is {dim}",
            target.len()
        );
        for (i, v) in vectors.iter().enumerate() {
            ensure!(
                v.len() == dim,
                Validation,
                "vector {i} has length {} but dimension is {dim}",
                v.len()
            );
        }
        let entry_range = entry_range.unwrap_or_else(|| Range::spanning(vectors.iter().flatten()));
        for (i, v) in vectors.iter().enumerate() {
            if let Some(x) = v.iter().find(|x| !entry_range.contains(x)) {
                return Err(Error::Validation(format!(
                    "vector {i} has entry {x} outside [{}, {}]",
                    entry_range.lo, entry_range.hi
                )));
            }
        }
        Ok(VectorSumInstance {
            k,
            dim,
            vectors,
            entry_range,
            target,
        })
    }

    pub fn from_i64(k: usize, vectors: &[Vec<i64>], target: &[i64]) -> Result<Self> {
        let big = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        VectorSumInstance::new(
            k,
            target.len(),
            vectors.iter().map(|v| big(v)).collect(),
            None,
            big(target),
        )
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[Vec<BigInt>] {
        &self.vectors
    }

    pub fn entry_range(&self) -> &Range {
        &self.entry_range
    }

    pub fn target(&self) -> &[BigInt] {
        &self.target
    }

    /// True when some target coordinate lies outside the k-fold Minkowski range
    /// of the entry range, so no k vectors can reach it.
    pub fn trivially_unsolvable(&self) -> bool {
        let reach = self.entry_range.scaled(self.k);
        self.vectors.len() < self.k || self.target.iter().any(|t| !reach.contains(t))
    }

    pub fn verify(&self, witness: &[usize]) -> Result<bool> {
        check_index_set(witness, self.k, self.n())?;
        Ok((0..self.dim).all(|j| {
            let s: BigInt = witness.iter().map(|&i| &self.vectors[i][j]).sum();
            s == self.target[j]
        }))
    }
}

/// Checks that `witness` holds exactly `k` distinct indices below `n`.
pub(crate) fn check_index_set(witness: &[usize], k: usize, n: usize) -> Result<()> {
    ensure!(
        witness.len() == k,
        MalformedWitness,
        "expected {k} elements, got {}",
        witness.len()
    );
    if let Some(&bad) = witness.iter().find(|&&i| i >= n) {
        return Err(Error::MalformedWitness(format!(
            "element {bad} out of range (size {n})"
        )));
    }
    let mut sorted = witness.to_vec();
    sorted.sort_unstable();
    ensure!(
        sorted.windows(2).all(|w| w[0] != w[1]),
        MalformedWitness,
        "witness elements must be distinct: {witness:?}"
    );
    Ok(())
}
