//! k-sum-free sets: sets where `x_1 + … + x_{k−1} = (k−1)·x_k` forces all
//! `x_i` equal.
//!
//! The Behrend-style construction takes every integer whose base-`base` digit
//! vector has digits in `[0, b−1]` and a fixed squared norm `r`. Because
//! `base > (k−1)(b−1)`, adding `k−1` such integers never carries, so an
//! integer relation is a digit-vector relation, and vectors of equal norm can
//! only average to one of them if they are all equal.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exhaustive counting is used while `b^m` stays below this.
pub const ENUMERATION_LIMIT: u64 = 10_000_000;

/// Default density knob.
pub const DEFAULT_EPS: f64 = 0.5;

/// Largest `n` for which [`SumFreeSource::Auto`] uses the greedy set.
pub const GREEDY_LIMIT: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SumFreeParams {
    pub k: usize,
    /// Digit count.
    pub m: u32,
    /// Digits range over `[0, b−1]`.
    pub b: u64,
    pub base: u64,
    /// Selected squared norm.
    pub r: u64,
}

impl SumFreeParams {
    /// Radix for digit bound `b`: `(k−1)·b − 1`, raised to `(k−1)(b−1) + 1`
    /// when that is larger (only at `k = 2`).
    pub fn radix(k: usize, b: u64) -> u64 {
        let k1 = (k - 1) as u64;
        (k1 * b - 1).max(k1 * (b - 1) + 1)
    }

    /// Largest squared norm a digit vector can have.
    pub fn max_norm(m: u32, b: u64) -> u64 {
        m as u64 * (b - 1) * (b - 1)
    }

    /// Exclusive upper bound `base^m` on every element.
    pub fn limit(&self) -> u64 {
        checked_pow(self.base, self.m).expect("element bound fits in u64")
    }

    /// Pigeonhole floor `⌈b^m / (m(b−1)² + 1)⌉` on the largest level set.
    pub fn pigeonhole_floor(&self) -> u64 {
        let total = checked_pow(self.b, self.m).expect("b^m fits in u64");
        total.div_ceil(Self::max_norm(self.m, self.b) + 1)
    }
}

fn checked_pow(base: u64, exp: u32) -> Option<u64> {
    base.checked_pow(exp)
}

/// A certified k-sum-free set, sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SumFreeSet {
    elements: Vec<u64>,
    k: usize,
    /// `None` for sets not produced by the norm construction.
    params: Option<SumFreeParams>,
}

impl SumFreeSet {
    /// Wraps an explicit set after checking it exhaustively.
    pub fn from_elements(mut elements: Vec<u64>, k: usize) -> Result<Self> {
        if !verify_sumfree(&elements, k)? {
            return Err(Error::Validation(format!("set is not {k}-sum-free")));
        }
        elements.sort_unstable();
        Ok(SumFreeSet {
            elements,
            k,
            params: None,
        })
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn params(&self) -> Option<&SumFreeParams> {
        self.params.as_ref()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Largest element (`Q`).
    pub fn max_element(&self) -> u64 {
        self.elements.last().copied().unwrap_or(0)
    }

    /// `{"type":"sumfree","k":K,"elements":[...],"params":{...}}`.
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Wire<'a> {
            #[serde(rename = "type")]
            kind: &'a str,
            k: usize,
            elements: Vec<String>,
            params: Option<&'a SumFreeParams>,
        }
        serde_json::to_string(&Wire {
            kind: "sumfree",
            k: self.k,
            elements: self.elements.iter().map(u64::to_string).collect(),
            params: self.params.as_ref(),
        })
        .expect("sum-free set serializes")
    }
}

/// Base-`base` digits of `x`, least significant first, padded to `m`.
pub fn digits(mut x: u64, base: u64, m: u32) -> Vec<u64> {
    let mut out = Vec::with_capacity(m as usize);
    for _ in 0..m {
        out.push(x % base);
        x /= base;
    }
    out
}

/// Squared-norm histogram of all `b^m` digit vectors, by exhaustive enumeration.
pub fn norm_counts_enumerated(m: u32, b: u64) -> Vec<u64> {
    let mut counts = vec![0u64; SumFreeParams::max_norm(m, b) as usize + 1];
    let mut digits = vec![0u64; m as usize];
    let mut norm = 0u64;
    loop {
        counts[norm as usize] += 1;
        // odometer increment, maintaining the running norm
        let mut pos = 0;
        loop {
            if pos == digits.len() {
                return counts;
            }
            let d = digits[pos];
            norm -= d * d;
            if d + 1 < b {
                digits[pos] = d + 1;
                norm += (d + 1) * (d + 1);
                break;
            }
            digits[pos] = 0;
            pos += 1;
        }
    }
}

/// Squared-norm histogram by per-digit convolution; memory is `O(m·b²)`.
pub fn norm_counts_streaming(m: u32, b: u64) -> Vec<u64> {
    let max = SumFreeParams::max_norm(m, b) as usize;
    let mut counts = vec![0u64; max + 1];
    counts[0] = 1;
    let mut reach = 0usize;
    for _ in 0..m {
        let mut next = vec![0u64; max + 1];
        for (norm, &c) in counts.iter().enumerate().take(reach + 1) {
            if c == 0 {
                continue;
            }
            for d in 0..b {
                next[norm + (d * d) as usize] += c;
            }
        }
        counts = next;
        reach += ((b - 1) * (b - 1)) as usize;
    }
    counts
}

/// Histogram of squared norms, exact either way.
pub fn norm_counts(m: u32, b: u64) -> Vec<u64> {
    match checked_pow(b, m) {
        Some(total) if total <= ENUMERATION_LIMIT => norm_counts_enumerated(m, b),
        _ => norm_counts_streaming(m, b),
    }
}

/// Norm with the most digit vectors; ties go to the smallest norm.
fn best_norm(counts: &[u64]) -> (u64, u64) {
    let mut best = (0u64, 0u64);
    for (r, &c) in counts.iter().enumerate() {
        if c > best.1 {
            best = (r as u64, c);
        }
    }
    best
}

/// `reachable[j][s]`: some `j` digits in `[0, b−1]` have squared norm `s`.
fn reachability(m: u32, b: u64) -> Vec<Vec<bool>> {
    let max = SumFreeParams::max_norm(m, b) as usize;
    let mut table = vec![vec![false; max + 1]];
    table[0][0] = true;
    for j in 1..=m as usize {
        let prev = &table[j - 1];
        let mut row = vec![false; max + 1];
        for (s, &ok) in prev.iter().enumerate() {
            if ok {
                for d in 0..b {
                    let t = s + (d * d) as usize;
                    if t <= max {
                        row[t] = true;
                    }
                }
            }
        }
        table.push(row);
    }
    table
}

/// The `limit` smallest elements of `S_r(m, b)` in radix `base`, ascending.
fn smallest_of_level(m: u32, b: u64, base: u64, r: u64, limit: usize) -> Vec<u64> {
    let reach = reachability(m, b);
    let mut out = Vec::new();
    let powers: Vec<u64> = (0..m).map(|i| base.pow(i)).collect();
    // Most significant digit first, digits ascending: yields values in order.
    fn walk(
        pos: usize,
        remaining: u64,
        acc: u64,
        b: u64,
        powers: &[u64],
        reach: &[Vec<bool>],
        out: &mut Vec<u64>,
        limit: usize,
    ) {
        if out.len() >= limit {
            return;
        }
        if pos == 0 {
            if remaining == 0 {
                out.push(acc);
            }
            return;
        }
        let idx = pos - 1;
        for d in 0..b {
            let sq = d * d;
            if sq > remaining {
                break;
            }
            if reach[idx][(remaining - sq) as usize] {
                walk(idx, remaining - sq, acc + d * powers[idx], b, powers, reach, out, limit);
                if out.len() >= limit {
                    return;
                }
            }
        }
    }
    walk(m as usize, r, 0, b, &powers, &reach, &mut out, limit);
    out
}

/// Every integer of `S_r(m, b)` for arity `k`, ascending.
pub fn level_set(m: u32, b: u64, k: usize, r: u64) -> Vec<u64> {
    let base = SumFreeParams::radix(k, b);
    if r > SumFreeParams::max_norm(m, b) {
        return Vec::new();
    }
    smallest_of_level(m, b, base, r, usize::MAX)
}

/// Behrend-style k-sum-free set of exactly `n` elements.
///
/// Uses `m = ⌈2/ε⌉ + 2` digits and the smallest digit bound `b` whose
/// pigeonhole floor reaches `n`; the most populated norm level is kept and
/// truncated to its `n` smallest elements.
pub fn behrend_sumfree(n: usize, k: usize, eps: f64) -> SumFreeSet {
    assert!(n >= 1, "requested size must be at least 1");
    assert!(k >= 2, "k-sum-freeness needs k >= 2");
    assert!(eps > 0.0, "eps must be positive");
    let m = (2.0 / eps).ceil() as u32 + 2;
    let mut b = 2u64;
    while {
        let total = checked_pow(b, m).expect("b^m fits in u64") as u128;
        total < n as u128 * (SumFreeParams::max_norm(m, b) as u128 + 1)
    } {
        b += 1;
    }
    behrend_with_params(n, k, m, b)
}

/// Behrend construction with explicit digit count and digit bound, escalating
/// `b` (then `m`) if the best level holds fewer than `n` elements.
pub fn behrend_with_params(n: usize, k: usize, mut m: u32, mut b: u64) -> SumFreeSet {
    assert!(k >= 2 && m >= 1 && b >= 2);
    let mut bumps = 0;
    loop {
        let counts = norm_counts(m, b);
        let (r, size) = best_norm(&counts);
        if size as usize >= n {
            let base = SumFreeParams::radix(k, b);
            let params = SumFreeParams { k, m, b, base, r };
            let elements = smallest_of_level(m, b, base, r, n);
            return SumFreeSet {
                elements,
                k,
                params: Some(params),
            };
        }
        bumps += 1;
        if bumps % 2 == 1 {
            b += 1;
        } else {
            m += 1;
        }
    }
}

/// Greedy k-sum-free set: scan 0, 1, 2, … keeping each integer that creates
/// no violation. Denser than the norm construction at small `n`.
pub fn greedy_sumfree(n: usize, k: usize) -> SumFreeSet {
    assert!(k >= 2, "k-sum-freeness needs k >= 2");
    let mut set: Vec<u64> = Vec::with_capacity(n);
    let mut x = 0u64;
    while set.len() < n {
        if !creates_violation(&set, x, k) {
            set.push(x);
        }
        x += 1;
    }
    SumFreeSet {
        elements: set,
        k,
        params: None,
    }
}

/// Does adding `x` (larger than every element of `set`) to `set` break
/// k-sum-freeness? Any new violation uses `x` among `x_1..x_{k−1}`; `x` as
/// `x_k` alone is impossible since the others are smaller.
fn creates_violation(set: &[u64], x: u64, k: usize) -> bool {
    if k == 2 {
        return false;
    }
    let mut ext = set.to_vec();
    ext.push(x);
    let div = (k - 1) as u128;
    // Non-decreasing tuples of length k−2 from ext, completed by x. Such a
    // tuple is constant iff every entry equals x.
    fn rec(ext: &[u64], start: usize, left: usize, sum: u128, all_x: bool, x: u64, div: u128) -> bool {
        if left == 0 {
            let total = sum + x as u128;
            return !all_x
                && total % div == 0
                && ext.binary_search(&((total / div) as u64)).is_ok();
        }
        (start..ext.len()).any(|i| {
            let v = ext[i];
            rec(ext, i, left - 1, sum + v as u128, all_x && v == x, x, div)
        })
    }
    rec(&ext, 0, k - 2, 0, true, x, div)
}

/// Exhaustive check of k-sum-freeness.
///
/// Enumerates non-decreasing `(k−1)`-tuples; a tuple violates iff it is not
/// constant and its average is in the set.
pub fn verify_sumfree(set: &[u64], k: usize) -> Result<bool> {
    if k < 2 {
        return Err(Error::Parameter(format!("k must be at least 2, got {k}")));
    }
    let mut sorted = set.to_vec();
    sorted.sort_unstable();
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::Validation(format!("duplicate element {}", w[0])));
    }
    if k == 2 {
        return Ok(true);
    }
    let div = (k - 1) as u128;
    fn rec(s: &[u64], start: usize, left: usize, sum: u128, first: Option<u64>, div: u128) -> bool {
        if left == 0 {
            return true;
        }
        for i in start..s.len() {
            let v = s[i];
            let first = first.or(Some(v));
            let sum = sum + v as u128;
            if left == 1 {
                let constant = first == Some(v);
                if !constant && sum % div == 0 && s.binary_search(&((sum / div) as u64)).is_ok() {
                    return false;
                }
            } else if !rec(s, i, left - 1, sum, first, div) {
                return false;
            }
        }
        true
    }
    Ok(rec(&sorted, 0, k - 1, 0, None, div))
}

/// Where a clique encoding takes its vertex codes from.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SumFreeSource {
    Behrend { eps: f64 },
    Greedy,
    /// Greedy up to [`GREEDY_LIMIT`] elements, Behrend beyond.
    Auto { eps: f64 },
}

impl Default for SumFreeSource {
    fn default() -> Self {
        SumFreeSource::Auto { eps: DEFAULT_EPS }
    }
}

impl SumFreeSource {
    pub fn build(self, n: usize, k: usize) -> SumFreeSet {
        match self {
            SumFreeSource::Behrend { eps } => behrend_sumfree(n, k, eps),
            SumFreeSource::Greedy => greedy_sumfree(n, k),
            SumFreeSource::Auto { eps } => {
                if n <= GREEDY_LIMIT {
                    greedy_sumfree(n, k)
                } else {
                    behrend_sumfree(n, k, eps)
                }
            }
        }
    }
}
