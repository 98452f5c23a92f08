//! k-Clique → k′-Vector-SUM → k′-SUM, with `k′ = k + C(k,2)`.
//!
//! Each vertex gets a code from a k-sum-free set. Coordinates (1-based) are:
//! `1..=k` one per slot, `k·i + j` one per slot pair `i < j`, and
//! `d = k² + k + 1` counting vertex vectors.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{ensure, Error, Result};
use crate::forward::slot_pairs;
use crate::instances::{
    CliqueInstance, Instance, KSumInstance, Provenance, Range, ReducedCollection, VectorOrigin,
    VectorSumInstance,
};
use crate::sumfree::{SumFreeSet, SumFreeSource};

/// Vertex codes and the derived sizes of one encoding.
#[derive(Clone, Debug, PartialEq)]
pub struct CliqueEncoding {
    pub k: usize,
    pub set: SumFreeSet,
    /// Largest code, `Q`.
    pub q_max: u64,
    /// `T = Q·(k−1) + 1`.
    pub threshold: u64,
    /// `k² + k + 1`.
    pub dim: usize,
}

impl CliqueEncoding {
    /// Codes for `n` vertices drawn from `source`.
    pub fn new(n: usize, k: usize, source: SumFreeSource) -> Result<Self> {
        ensure!(k >= 2, Parameter, "clique encoding needs k >= 2, got {k}");
        let set = if n == 0 {
            SumFreeSet::from_elements(Vec::new(), k)?
        } else {
            source.build(n, k)
        };
        Self::with_set(set, k)
    }

    /// Uses an explicit sum-free set; vertex `v` gets its `v`-th smallest element.
    pub fn with_set(set: SumFreeSet, k: usize) -> Result<Self> {
        ensure!(k >= 2, Parameter, "clique encoding needs k >= 2, got {k}");
        ensure!(set.k() == k, Parameter, "set is {}-sum-free, need {k}", set.k());
        let q_max = set.max_element();
        Ok(CliqueEncoding {
            k,
            q_max,
            threshold: q_max * (k as u64 - 1) + 1,
            dim: k * k + k + 1,
            set,
        })
    }

    pub fn code(&self, v: usize) -> u64 {
        self.set.elements()[v]
    }

    /// `k′ = k + C(k,2)`.
    pub fn arity(&self) -> usize {
        self.k + self.k * (self.k - 1) / 2
    }

    /// 0-based index of coordinate `k·i + j`.
    fn pair_coord(&self, i: usize, j: usize) -> usize {
        self.k * i + j - 1
    }

    fn vertex_vector(&self, v: usize, slot: usize) -> Vec<u64> {
        let mut x = vec![0u64; self.dim];
        x[slot - 1] = self.threshold - (self.k as u64 - 1) * self.code(v);
        x[self.dim - 1] = 1;
        x
    }

    fn edge_vector(&self, first: usize, second: usize, i: usize, j: usize) -> Vec<u64> {
        let mut x = vec![0u64; self.dim];
        x[i - 1] = self.code(first);
        x[j - 1] = self.code(second);
        x[self.pair_coord(i, j)] = 1;
        x
    }

    fn target(&self) -> Vec<u64> {
        let mut t = vec![0u64; self.dim];
        for x in &mut t[..self.k] {
            *x = self.threshold;
        }
        for (i, j) in slot_pairs(self.k) {
            t[self.pair_coord(i, j)] = 1;
        }
        t[self.dim - 1] = self.k as u64;
        t
    }
}

fn to_big(v: &[u64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// One-item collection holding the k′-Vector-SUM instance of a graph.
///
/// Vertex vectors come first (vertex-major, slots `1..=k`), then for every
/// edge `{u, v}` (`u < v`) and slot pair `i < j` the orientations `(u, v)`
/// and `(v, u)`. Entries lie in `[0, T]`.
pub fn clique_to_vectorsum(g: &CliqueInstance, source: SumFreeSource) -> Result<ReducedCollection<VectorSumInstance>> {
    let enc = CliqueEncoding::new(g.graph().n(), g.k(), source)?;
    clique_to_vectorsum_with(g, &enc)
}

pub fn clique_to_vectorsum_with(
    g: &CliqueInstance,
    enc: &CliqueEncoding,
) -> Result<ReducedCollection<VectorSumInstance>> {
    let k = g.k();
    let n = g.graph().n();
    ensure!(k == enc.k, Parameter, "encoding built for k = {}, graph has k = {k}", enc.k);
    ensure!(enc.set.len() >= n, Parameter, "{} codes for {n} vertices", enc.set.len());
    let mut vectors = Vec::with_capacity(k * n + k * (k - 1) * g.graph().m());
    let mut origins = Vec::with_capacity(vectors.capacity());
    for v in 0..n {
        for slot in 1..=k {
            vectors.push(to_big(&enc.vertex_vector(v, slot)));
            origins.push(VectorOrigin::Vertex { vertex: v, slot });
        }
    }
    for &(u, v) in g.graph().edges() {
        for (i, j) in slot_pairs(k) {
            for (first, second) in [(u, v), (v, u)] {
                vectors.push(to_big(&enc.edge_vector(first, second, i, j)));
                origins.push(VectorOrigin::Edge { first, second, i, j });
            }
        }
    }
    let kp = enc.arity();
    let inst = VectorSumInstance::new(
        kp,
        enc.dim,
        vectors,
        Some(Range::new(BigInt::zero(), BigInt::from(enc.threshold))?),
        to_big(&enc.target()),
    )?;
    let source: Instance = g.clone().into();
    let mut coll = ReducedCollection::new(
        "clique_to_vectorsum",
        &source,
        json!({
            "k_prime": kp,
            "dim": enc.dim,
            "Q": enc.q_max,
            "T": enc.threshold,
            "trivially_unsolvable": n < k,
        }),
    );
    coll.push(
        inst,
        Provenance {
            origins: Some(origins),
            vertex_codes: Some(enc.set.elements()[..n].iter().map(u64::to_string).collect()),
            ..Default::default()
        },
    );
    Ok(coll)
}

/// Place value of each coordinate for the given per-coordinate radices.
pub fn place_values(radices: &[BigInt]) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(radices.len());
    let mut acc = BigInt::from(1);
    for r in radices {
        out.push(acc.clone());
        acc *= r;
    }
    out
}

/// `Σ_j v[j]·place[j]`.
pub fn pack(v: &[BigInt], places: &[BigInt]) -> BigInt {
    v.iter().zip(places).map(|(x, p)| x * p).sum()
}

/// Inverse of [`pack`] for entries in `[0, radix_j − 1]`.
pub fn unpack(mut x: BigInt, radices: &[BigInt]) -> Vec<BigInt> {
    radices
        .iter()
        .map(|r| {
            let digit = &x % r;
            x /= r;
            digit
        })
        .collect()
}

fn pack_instance(
    inst: &VectorSumInstance,
    radices: &[BigInt],
    reduction: &str,
    source: &Instance,
    mut params: serde_json::Value,
) -> Result<ReducedCollection<KSumInstance>> {
    let places = place_values(radices);
    let numbers: Vec<BigInt> = inst.vectors().iter().map(|v| pack(v, &places)).collect();
    let target = pack(inst.target(), &places);
    let hi = pack(&radices.iter().map(|r| r - 1).collect::<Vec<_>>(), &places);
    let range = Range::new(BigInt::zero(), hi)?;
    let item = KSumInstance::new(inst.k(), numbers, Some(range), target)?;
    if let Some(obj) = params.as_object_mut() {
        obj.insert("radices".into(), json!(radices.iter().map(BigInt::to_string).collect::<Vec<_>>()));
    }
    let mut coll = ReducedCollection::new(reduction, source, params);
    coll.push(item, Provenance::default());
    Ok(coll)
}

/// Packs each vector into one integer with radix `p = kM + 1`, where `M` is
/// the upper end of the entry range. No carries occur, so witnesses coincide.
pub fn vectorsum_to_ksum(inst: &VectorSumInstance) -> Result<ReducedCollection<KSumInstance>> {
    let range = inst.entry_range();
    ensure!(
        !range.lo.is_negative(),
        Precondition,
        "entries must be nonnegative (shift first), range starts at {}",
        range.lo
    );
    let m = &range.hi;
    let reach = m * inst.k();
    if let Some(t) = inst.target().iter().find(|t| t.is_negative() || *t > &reach) {
        return Err(Error::Precondition(format!("target entry {t} outside [0, kM] = [0, {reach}]")));
    }
    let p: BigInt = &reach + 1;
    let source: Instance = inst.clone().into();
    pack_instance(
        inst,
        &vec![p.clone(); inst.dim()],
        "vectorsum_to_ksum",
        &source,
        json!({ "p": p.to_string() }),
    )
}

/// Packing radix layout for [`kclique_to_ksum`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RadixMode {
    /// One radix `k′T + 1` for every coordinate.
    #[default]
    Uniform,
    /// `k′T + 1` for the slot coordinates, `k′k + 1` for the rest, whose
    /// entries never exceed 1 and whose targets never exceed `k`.
    Mixed,
}

/// Radices for an encoding.
pub fn radices(enc: &CliqueEncoding, mode: RadixMode) -> Vec<BigInt> {
    let kp = enc.arity() as u64;
    let wide = BigInt::from(kp) * enc.threshold + 1;
    match mode {
        RadixMode::Uniform => vec![wide; enc.dim],
        RadixMode::Mixed => {
            let narrow = BigInt::from(kp * enc.k as u64 + 1);
            (0..enc.dim)
                .map(|j| if j < enc.k { wide.clone() } else { narrow.clone() })
                .collect()
        }
    }
}

/// Composed k-Clique → k′-SUM. The item's provenance carries the vector
/// origins and vertex codes needed by [`lift_ksum_witness_to_clique`].
pub fn kclique_to_ksum(
    g: &CliqueInstance,
    mode: RadixMode,
    source: SumFreeSource,
) -> Result<ReducedCollection<KSumInstance>> {
    let enc = CliqueEncoding::new(g.graph().n(), g.k(), source)?;
    kclique_to_ksum_with(g, mode, &enc)
}

pub fn kclique_to_ksum_with(
    g: &CliqueInstance,
    mode: RadixMode,
    enc: &CliqueEncoding,
) -> Result<ReducedCollection<KSumInstance>> {
    let vs = clique_to_vectorsum_with(g, enc)?;
    let (inst, prov) = vs.items.into_iter().next().expect("one item");
    let mut params = vs.params;
    params["mode"] = json!(mode);
    let source: Instance = g.clone().into();
    let mut coll = pack_instance(&inst, &radices(enc, mode), "kclique_to_ksum", &source, params)?;
    coll.items[0].1 = prov;
    Ok(coll)
}

/// Decodes a witness (indices into the vector list) to the clique's vertices,
/// asserting the structure every solution must have: `k` vertex vectors, one
/// per slot; one edge vector per slot pair whose endpoints sit in the matching
/// slots.
pub fn decode_clique_witness(k: usize, origins: &[VectorOrigin], witness: &[usize]) -> Result<Vec<usize>> {
    let mut by_slot = vec![None; k + 1];
    let mut pairs = Vec::new();
    for &w in witness {
        match origins.get(w) {
            Some(&VectorOrigin::Vertex { vertex, slot }) => {
                ensure!(
                    by_slot[slot].replace(vertex).is_none(),
                    Lift,
                    "slot {slot} holds two vertex vectors"
                );
            }
            Some(&VectorOrigin::Edge { first, second, i, j }) => pairs.push((first, second, i, j)),
            None => return Err(Error::Lift(format!("index {w} has no recorded origin"))),
        }
    }
    let vertices: Vec<usize> = by_slot[1..]
        .iter()
        .enumerate()
        .map(|(s, v)| v.ok_or_else(|| Error::Lift(format!("slot {} has no vertex vector", s + 1))))
        .collect::<Result<_>>()?;
    ensure!(
        pairs.len() == k * (k - 1) / 2,
        Lift,
        "{} edge vectors for {} slot pairs",
        pairs.len(),
        k * (k - 1) / 2
    );
    let mut seen = vec![false; pairs.len()];
    let index: Vec<(usize, usize)> = slot_pairs(k);
    for (first, second, i, j) in pairs {
        let pos = index.iter().position(|&p| p == (i, j)).expect("valid slot pair");
        ensure!(!std::mem::replace(&mut seen[pos], true), Lift, "slot pair ({i},{j}) used twice");
        ensure!(
            vertices[i - 1] == first && vertices[j - 1] == second,
            Lift,
            "edge ({first},{second}) on slots ({i},{j}) disagrees with the vertex vectors"
        );
    }
    let mut out = vertices;
    out.sort_unstable();
    Ok(out)
}

/// Lifts a verified k′-SUM witness of [`kclique_to_ksum`] to a k-clique of `g`.
pub fn lift_ksum_witness_to_clique(
    g: &CliqueInstance,
    reduced: &KSumInstance,
    provenance: &Provenance,
    witness: &[usize],
) -> Result<Vec<usize>> {
    ensure!(reduced.verify(witness)?, Lift, "witness does not solve the k-SUM instance");
    lift_origins(g, provenance, witness)
}

/// Lifts a verified k′-Vector-SUM witness of [`clique_to_vectorsum`].
pub fn lift_vectorsum_witness_to_clique(
    g: &CliqueInstance,
    reduced: &VectorSumInstance,
    provenance: &Provenance,
    witness: &[usize],
) -> Result<Vec<usize>> {
    ensure!(reduced.verify(witness)?, Lift, "witness does not solve the vector instance");
    lift_origins(g, provenance, witness)
}

fn lift_origins(g: &CliqueInstance, provenance: &Provenance, witness: &[usize]) -> Result<Vec<usize>> {
    let origins = provenance
        .origins
        .as_ref()
        .ok_or_else(|| Error::Lift("provenance lacks vector origins".into()))?;
    let clique = decode_clique_witness(g.k(), origins, witness)?;
    ensure!(g.verify(&clique)?, Lift, "decoded vertices {clique:?} are not a clique");
    Ok(clique)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::Graph;
    use crate::solvers::{solve_ksum_mim, solve_vectorsum_bruteforce, DEFAULT_BUDGET, DEFAULT_MIM_BUDGET};

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn single_edge() -> (CliqueInstance, CliqueEncoding) {
        let g = CliqueInstance::new(Graph::complete(2), 2, None).unwrap();
        let enc = CliqueEncoding::with_set(SumFreeSet::from_elements(vec![1, 2], 2).unwrap(), 2).unwrap();
        (g, enc)
    }

    #[test]
    fn single_edge_vectors() {
        let (g, enc) = single_edge();
        assert_eq!((enc.q_max, enc.threshold, enc.dim), (2, 3, 7));
        let coll = clique_to_vectorsum_with(&g, &enc).unwrap();
        let (inst, prov) = &coll.items[0];
        let v = inst.vectors();
        // vertex-major: (v1,1) (v1,2) (v2,1) (v2,2), then edge orientations
        assert_eq!(v[0], ints(&[2, 0, 0, 0, 0, 0, 1]));
        assert_eq!(v[3], ints(&[0, 1, 0, 0, 0, 0, 1]));
        assert_eq!(v[4], ints(&[1, 2, 0, 1, 0, 0, 0]));
        assert_eq!(inst.target(), ints(&[3, 3, 0, 1, 0, 0, 2]).as_slice());
        assert_eq!(inst.k(), 3);
        assert!(inst.verify(&[0, 3, 4]).unwrap());
        let r = solve_vectorsum_bruteforce(inst, DEFAULT_BUDGET).unwrap();
        let w = r.witness.unwrap();
        assert_eq!(lift_vectorsum_witness_to_clique(&g, inst, prov, &w).unwrap(), vec![0, 1]);
    }

    #[test]
    fn edgeless_graph_is_unsolvable() {
        let g = CliqueInstance::new(Graph::empty(3), 2, None).unwrap();
        let coll = clique_to_vectorsum(&g, SumFreeSource::default()).unwrap();
        assert!(!solve_vectorsum_bruteforce(&coll.items[0].0, DEFAULT_BUDGET).unwrap().solvable);
    }

    #[test]
    fn vector_count() {
        let g = CliqueInstance::new(Graph::cycle(5), 3, None).unwrap();
        let coll = clique_to_vectorsum(&g, SumFreeSource::default()).unwrap();
        assert_eq!(coll.items[0].0.n(), 3 * 5 + 2 * 3 * 5);
    }

    #[test]
    fn packing_examples() {
        let places = place_values(&vec![BigInt::from(3); 3]);
        assert_eq!(pack(&ints(&[0, 0, 0]), &places), BigInt::zero());
        assert_eq!(pack(&ints(&[1, 0, 1]), &places), BigInt::from(10));
        assert_eq!(unpack(BigInt::from(10), &vec![BigInt::from(3); 3]), ints(&[1, 0, 1]));

        let vs = VectorSumInstance::from_i64(2, &[vec![1, 1], vec![1, 0]], &[2, 1]).unwrap();
        let coll = vectorsum_to_ksum(&vs).unwrap();
        let ks = &coll.items[0].0;
        assert_eq!(ks.numbers(), ints(&[4, 1]).as_slice());
        assert_eq!(ks.target(), &BigInt::from(5));
        assert!(ks.verify(&[0, 1]).unwrap());
    }

    #[test]
    fn packing_rejects_negative_entries() {
        let vs = VectorSumInstance::from_i64(2, &[vec![-1, 1], vec![1, 0]], &[0, 1]).unwrap();
        assert!(matches!(vectorsum_to_ksum(&vs), Err(Error::Precondition(_))));
    }

    #[test]
    fn triangle_and_five_cycle() {
        for mode in [RadixMode::Uniform, RadixMode::Mixed] {
            let k3 = CliqueInstance::new(Graph::complete(3), 3, None).unwrap();
            let coll = kclique_to_ksum(&k3, mode, SumFreeSource::default()).unwrap();
            let (ks, prov) = &coll.items[0];
            assert_eq!(ks.n(), 27);
            assert_eq!(ks.k(), 6);
            let w = solve_ksum_mim(ks, DEFAULT_MIM_BUDGET).unwrap().witness.unwrap();
            assert_eq!(lift_ksum_witness_to_clique(&k3, ks, prov, &w).unwrap(), vec![0, 1, 2]);
            assert!(lift_ksum_witness_to_clique(&k3, ks, prov, &[0, 1, 2, 3, 4, 5]).is_err());

            let c5 = CliqueInstance::new(Graph::cycle(5), 3, None).unwrap();
            let coll = kclique_to_ksum(&c5, mode, SumFreeSource::default()).unwrap();
            assert!(!solve_ksum_mim(&coll.items[0].0, DEFAULT_MIM_BUDGET).unwrap().solvable);
        }
    }

    #[test]
    fn mixed_radix_is_smaller() {
        let g = CliqueInstance::new(Graph::cycle(5), 3, None).unwrap();
        let max = |mode| {
            kclique_to_ksum(&g, mode, SumFreeSource::default()).unwrap().items[0]
                .0
                .numbers()
                .iter()
                .max()
                .cloned()
                .unwrap()
        };
        assert!(max(RadixMode::Mixed) < max(RadixMode::Uniform));
    }

    #[test]
    fn fewer_vertices_than_k() {
        let g = CliqueInstance::new(Graph::complete(2), 3, None).unwrap();
        let coll = clique_to_vectorsum(&g, SumFreeSource::default()).unwrap();
        assert_eq!(coll.params["trivially_unsolvable"], json!(true));
        assert!(!solve_vectorsum_bruteforce(&coll.items[0].0, DEFAULT_BUDGET).unwrap().solvable);
    }
}
