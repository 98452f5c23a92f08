use super::ksum::check_index_set;
use crate::error::{ensure, Error, Result};
use crate::modprime::is_prime_u64;

/// (k, r)-TargetSum over `Z_q`: do `k` of the elements sum to `z` modulo `q`?
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TargetSumInstance {
    q: u64,
    k: usize,
    elements: Vec<u64>,
    target: u64,
}

impl TargetSumInstance {
    pub fn new(q: u64, k: usize, elements: Vec<u64>, target: u64) -> Result<Self> {
        ensure!(q >= 2, Validation, "modulus must be at least 2, got {q}");
        ensure!(k >= 1, Validation, "k must be at least 1");
        ensure!(target < q, Validation, "target {target} not reduced mod {q}");
        if let Some(x) = elements.iter().find(|&&x| x >= q) {
            return Err(Error::Validation(format!("element {x} not reduced mod {q}")));
        }
        Ok(TargetSumInstance {
            q,
            k,
            elements,
            target,
        })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn r(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn target(&self) -> u64 {
        self.target
    }

    pub fn verify(&self, witness: &[usize]) -> Result<bool> {
        check_index_set(witness, self.k, self.r())?;
        let s = witness
            .iter()
            .fold(0u128, |acc, &i| acc + self.elements[i] as u128);
        Ok((s % self.q as u128) as u64 == self.target)
    }
}

/// (k, r)-LinDependence over `F_q` (q prime): is `z` in the span of some `k`
/// of the `r` vectors?
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinDepInstance {
    q: u64,
    k: usize,
    len: usize,
    vectors: Vec<Vec<u64>>,
    target: Vec<u64>,
}

impl LinDepInstance {
    /// Requires `r ≥ k`: a selection is a k-subset of distinct vector indices.
    pub fn new(q: u64, k: usize, vectors: Vec<Vec<u64>>, target: Vec<u64>) -> Result<Self> {
        ensure!(is_prime_u64(q), Validation, "field size {q} is not prime");
        ensure!(k >= 1, Validation, "k must be at least 1");
        ensure!(!target.is_empty(), Validation, "vector length must be at least 1");
        ensure!(
            vectors.len() >= k,
            Validation,
            "need at least k = {k} vectors, got {}",
            vectors.len()
        );
        let len = target.len();
        for (i, v) in vectors.iter().enumerate() {
            ensure!(v.len() == len, Validation, "vector {i} has length {} not {len}", v.len());
        }
        if let Some(x) = vectors.iter().flatten().chain(&target).find(|&&x| x >= q) {
            return Err(Error::Validation(format!("entry {x} not reduced mod {q}")));
        }
        Ok(LinDepInstance {
            q,
            k,
            len,
            vectors,
            target,
        })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Vector length (the `n` of the problem statement).
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn r(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[Vec<u64>] {
        &self.vectors
    }

    pub fn target(&self) -> &[u64] {
        &self.target
    }

    pub fn verify(&self, witness: &[usize]) -> Result<bool> {
        check_index_set(witness, self.k, self.r())?;
        let chosen: Vec<&[u64]> = witness.iter().map(|&i| self.vectors[i].as_slice()).collect();
        Ok(in_span(&chosen, &self.target, self.q))
    }
}

pub(crate) fn mul_mod(a: u64, b: u64, q: u64) -> u64 {
    ((a as u128 * b as u128) % q as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, q: u64) -> u64 {
    let mut acc = 1 % q;
    base %= q;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, q);
        }
        base = mul_mod(base, base, q);
        exp >>= 1;
    }
    acc
}

/// Inverse of a nonzero element of `F_q` via Fermat's little theorem.
pub(crate) fn inv_mod(a: u64, q: u64) -> u64 {
    pow_mod(a, q - 2, q)
}

/// Whether `z` lies in the `F_q`-span of `vectors` (Gaussian elimination on
/// the augmented system `[v_1 … v_k | z]`).
pub fn in_span(vectors: &[&[u64]], z: &[u64], q: u64) -> bool {
    let rows = z.len();
    let cols = vectors.len();
    // Row j of the augmented matrix is coordinate j.
    let mut mat: Vec<Vec<u64>> = (0..rows)
        .map(|j| {
            let mut row: Vec<u64> = vectors.iter().map(|v| v[j] % q).collect();
            row.push(z[j] % q);
            row
        })
        .collect();
    let mut pivot_row = 0;
    for col in 0..cols {
        let Some(p) = (pivot_row..rows).find(|&r| mat[r][col] != 0) else {
            continue;
        };
        mat.swap(pivot_row, p);
        let inv = inv_mod(mat[pivot_row][col], q);
        for x in mat[pivot_row].iter_mut() {
            *x = mul_mod(*x, inv, q);
        }
        for r in 0..rows {
            if r != pivot_row && mat[r][col] != 0 {
                let factor = mat[r][col];
                for c in 0..=cols {
                    let sub = mul_mod(factor, mat[pivot_row][c], q);
                    mat[r][c] = (mat[r][c] + q - sub) % q;
                }
            }
        }
        pivot_row += 1;
    }
    // Inconsistent iff some all-zero coefficient row has a nonzero right-hand side.
    mat[pivot_row..].iter().all(|row| row[cols] == 0)
}
