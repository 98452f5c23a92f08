//! Reductions for problems over `Z_q` / `F_q`: TargetSum ↔ k-SUM and
//! LinDependence → k-Vector-SUM.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde_json::json;

use crate::error::{ensure, Error, Result};
use crate::instances::{
    Instance, KSumInstance, LinDepInstance, Provenance, Range, ReducedCollection, TargetSumInstance,
    VectorSumInstance,
};

/// Default cap on `k^n · q · r` for [`lindep_to_vectorsum`].
pub const DEFAULT_LINDEP_BUDGET: u128 = 50_000_000;

/// `k` integer instances with targets `z + i·q`, `i ∈ [0, k−1]`: a k-fold sum
/// of elements in `[0, q−1]` lies in `[0, k(q−1)]`.
pub fn targetsum_to_ksum(inst: &TargetSumInstance) -> Result<ReducedCollection<KSumInstance>> {
    let q = inst.q();
    let numbers: Vec<BigInt> = inst.elements().iter().map(|&x| BigInt::from(x)).collect();
    let range = Range::new(BigInt::zero(), BigInt::from(q - 1))?;
    let source: Instance = inst.clone().into();
    let mut coll = ReducedCollection::new("targetsum_to_ksum", &source, json!({ "q": q.to_string() }));
    for i in 0..inst.k() {
        let target = BigInt::from(inst.target()) + BigInt::from(q) * i;
        coll.push(
            KSumInstance::new(inst.k(), numbers.clone(), Some(range.clone()), target)?,
            Provenance {
                target_offset: Some(i as u32),
                ..Default::default()
            },
        );
    }
    Ok(coll)
}

/// k-SUM on `[0, M]` with target in `[0, kM]` as TargetSum modulo
/// `q = max(kM + 1, 2)`, which exceeds every k-fold sum.
pub fn ksum_to_targetsum(inst: &KSumInstance) -> Result<ReducedCollection<TargetSumInstance>> {
    let m = inst.nonnegative_bound()?;
    let reach = m * inst.k();
    let t = inst.target();
    ensure!(
        !t.is_negative() && t <= &reach,
        Precondition,
        "target {t} outside [0, kM] = [0, {reach}]"
    );
    // q = 1 is not a modulus; any q > kM works
    let q = (&reach + 1u32)
        .max(BigInt::from(2))
        .to_u64()
        .ok_or_else(|| Error::Range(format!("modulus {reach} + 1 exceeds 64 bits")))?;
    let elements = inst
        .numbers()
        .iter()
        .map(|x| x.to_u64().expect("within [0, M]"))
        .collect();
    let item = TargetSumInstance::new(q, inst.k(), elements, t.to_u64().expect("within [0, kM]"))?;
    let source: Instance = inst.clone().into();
    let mut coll = ReducedCollection::new("ksum_to_targetsum", &source, json!({ "q": q.to_string() }));
    coll.push(item, Provenance::default());
    Ok(coll)
}

/// Expanded vector set `{c·x_i mod q}` (index `i·q + c`) and one instance per
/// `v ∈ [0, k−1]^n` (lexicographic) with integer target `z + q·v`.
///
/// Duplicate expanded vectors are kept, so choosing `k` distinct items models
/// any choice of `k` coefficients, zeros included.
pub fn lindep_to_vectorsum(inst: &LinDepInstance, budget: u128) -> Result<ReducedCollection<VectorSumInstance>> {
    let (q, k, n, r) = (inst.q(), inst.k(), inst.len(), inst.r());
    let count = (k as u128)
        .checked_pow(n as u32)
        .and_then(|c| c.checked_mul(q as u128 * r as u128))
        .unwrap_or(u128::MAX);
    ensure!(count <= budget, Resource, "k^n·q·r = {count} exceeds the budget {budget}");
    let mut vectors = Vec::with_capacity(r * q as usize);
    let mut scalings = Vec::with_capacity(r * q as usize);
    for (i, x) in inst.vectors().iter().enumerate() {
        for c in 0..q {
            vectors.push(
                x.iter()
                    .map(|&e| BigInt::from((e as u128 * c as u128 % q as u128) as u64))
                    .collect::<Vec<_>>(),
            );
            scalings.push((c, i));
        }
    }
    let range = Range::new(BigInt::zero(), BigInt::from(q - 1))?;
    let source: Instance = inst.clone().into();
    let mut coll = ReducedCollection::new(
        "lindep_to_vectorsum",
        &source,
        json!({ "q": q.to_string(), "instances": (k as u128).pow(n as u32).to_string() }),
    );
    let mut offset = vec![0u32; n];
    loop {
        let target: Vec<BigInt> = inst
            .target()
            .iter()
            .zip(&offset)
            .map(|(&z, &v)| BigInt::from(z) + BigInt::from(q) * v)
            .collect();
        coll.push(
            VectorSumInstance::new(k, n, vectors.clone(), Some(range.clone()), target)?,
            Provenance {
                field_offset: Some(offset.clone()),
                scalings: Some(scalings.clone()),
                ..Default::default()
            },
        );
        let mut pos = n;
        loop {
            if pos == 0 {
                return Ok(coll);
            }
            pos -= 1;
            if (offset[pos] as usize) + 1 < k {
                offset[pos] += 1;
                offset[pos + 1..].iter_mut().for_each(|x| *x = 0);
                break;
            }
        }
    }
}

/// `(coefficient, source index)` pairs of a vector-sum witness.
pub fn decode_lindep_witness(provenance: &Provenance, witness: &[usize]) -> Result<Vec<(u64, usize)>> {
    let scalings = provenance
        .scalings
        .as_ref()
        .ok_or_else(|| Error::Lift("provenance lacks scalings".into()))?;
    witness
        .iter()
        .map(|&w| {
            scalings
                .get(w)
                .copied()
                .ok_or_else(|| Error::Lift(format!("index {w} outside the expanded set")))
        })
        .collect()
}

/// Lifts a verified vector-sum witness to `k` source indices whose span holds
/// `z`. A source index chosen under two scalings frees a slot, which is filled
/// with the smallest unused index.
pub fn lift_lindep_witness(
    source: &LinDepInstance,
    reduced: &VectorSumInstance,
    provenance: &Provenance,
    witness: &[usize],
) -> Result<Vec<usize>> {
    ensure!(reduced.verify(witness)?, Lift, "witness does not solve the vector instance");
    let pairs = decode_lindep_witness(provenance, witness)?;
    let q = source.q() as u128;
    for j in 0..source.len() {
        let s: u128 = pairs
            .iter()
            .map(|&(c, i)| c as u128 * source.vectors()[i][j] as u128)
            .sum();
        ensure!(
            (s % q) as u64 == source.target()[j],
            Lift,
            "coefficients miss the target at coordinate {j}"
        );
    }
    let mut indices: Vec<usize> = pairs.iter().map(|&(_, i)| i).collect();
    indices.sort_unstable();
    indices.dedup();
    let mut fill = 0;
    while indices.len() < source.k() {
        if indices.binary_search(&fill).is_err() {
            indices.push(fill);
            indices.sort_unstable();
        }
        fill += 1;
    }
    ensure!(source.verify(&indices)?, Lift, "lifted indices {indices:?} do not span the target");
    Ok(indices)
}
