//! k-SUM → k-Vector-SUM → exact edge-weight k-Clique → unweighted k-Clique.
//!
//! * Carry guessing splits one big-integer sum into `(k+1)^(d−1)` carry-free
//!   base-`p` digit-vector sums.
//! * The squaring trick turns node weights into edge weights whose clique sum
//!   is `(k−1)·Σ_j (Σ_a u_a[j])²`, zero exactly when the vectors cancel.
//! * Guessing one weight per slot pair (an α-tuple summing to zero) removes
//!   the weights altogether, one k-partite graph per guess.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{ensure, Error, Result};
use crate::instances::{
    CliqueInstance, Graph, Instance, KSumInstance, Provenance, Range, ReducedCollection,
    VectorSumInstance, WeightedGraph, Weights,
};

/// Radix above which digit arithmetic would leave the `i128` fast path.
pub const MAX_RADIX: u64 = 1 << 40;

/// Base-`p` digits `(a_1, …, a_d)` of `x`, least significant first.
pub fn base_p_digits(x: &BigInt, p: u64, d: usize) -> Result<Vec<u64>> {
    ensure!(p >= 2, Parameter, "radix must be at least 2, got {p}");
    ensure!(!x.is_negative(), Range, "{x} is negative");
    let radix = BigInt::from(p);
    let mut rest = x.clone();
    let mut out = Vec::with_capacity(d);
    for _ in 0..d {
        let (q, r) = rest.div_rem(&radix);
        out.push(r.to_u64().expect("digit below radix"));
        rest = q;
    }
    ensure!(rest.is_zero(), Range, "{x} does not fit in {d} base-{p} digits");
    Ok(out)
}

/// Carry tuples and the carry-adjusted target vectors for one target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CarryContext {
    pub k: usize,
    pub p: u64,
    pub d: usize,
    /// All of `[0, k]^(d−1)` in lexicographic order.
    pub gammas: Vec<Vec<u32>>,
    /// `targets[i]` belongs to `gammas[i]`.
    pub targets: Vec<Vec<i128>>,
}

impl CarryContext {
    /// Number of carry tuples, `(k+1)^(d−1)`.
    pub fn s(&self) -> usize {
        self.gammas.len()
    }

    /// A carry target is reachable only if each coordinate lies in `[0, k(p−1)]`,
    /// the range of a sum of `k` digits.
    pub fn is_feasible(&self, index: usize) -> bool {
        let hi = self.k as i128 * (self.p as i128 - 1);
        self.targets[index].iter().all(|&t| (0..=hi).contains(&t))
    }
}

fn check_radix(k: usize, p: u64) -> Result<()> {
    ensure!(p as u128 > k as u128, Parameter, "radix p = {p} must exceed k = {k}");
    ensure!(p <= MAX_RADIX, Parameter, "radix p = {p} exceeds supported maximum {MAX_RADIX}");
    Ok(())
}

/// Enumerates every carry tuple `γ = (c_1, …, c_{d−1}) ∈ [0, k]^(d−1)` and
/// the target `t_γ` with
/// `t_γ[1] = t_1 + c_1·p`, `t_γ[j] = t_j − c_{j−1} + c_j·p`, `t_γ[d] = t_d − c_{d−1}`.
pub fn carry_targets(t: &BigInt, k: usize, p: u64, d: usize) -> Result<CarryContext> {
    check_radix(k, p)?;
    ensure!(d >= 1, Parameter, "dimension must be at least 1");
    let digits = base_p_digits(t, p, d)?;
    let p_i = p as i128;
    let mut gammas = Vec::new();
    let mut targets = Vec::new();
    let mut gamma = vec![0u32; d - 1];
    loop {
        let target: Vec<i128> = (0..d)
            .map(|j| {
                let incoming = if j == 0 { 0 } else { gamma[j - 1] as i128 };
                let outgoing = if j + 1 < d { gamma[j] as i128 } else { 0 };
                digits[j] as i128 - incoming + outgoing * p_i
            })
            .collect();
        gammas.push(gamma.clone());
        targets.push(target);
        // lexicographic successor, last coordinate fastest
        let mut pos = gamma.len();
        loop {
            if pos == 0 {
                return Ok(CarryContext {
                    k,
                    p,
                    d,
                    gammas,
                    targets,
                });
            }
            pos -= 1;
            if (gamma[pos] as usize) < k {
                gamma[pos] += 1;
                for g in &mut gamma[pos + 1..] {
                    *g = 0;
                }
                break;
            }
        }
    }
}

/// `f(x) = k·digits(x) − t_γ`.
pub fn map_f(x: &BigInt, t_gamma: &[i128], k: usize, p: u64) -> Result<Vec<i128>> {
    check_radix(k, p)?;
    let digits = base_p_digits(x, p, t_gamma.len())?;
    Ok(digits
        .iter()
        .zip(t_gamma)
        .map(|(&a, &t)| k as i128 * a as i128 - t)
        .collect())
}

/// Squaring-trick edge weight `Σ_j (u_j² + v_j² + 2(k−1)·u_j·v_j)`.
pub fn squaring_weight(u: &[i128], v: &[i128], k: usize) -> i128 {
    let c = 2 * (k as i128 - 1);
    u.iter()
        .zip(v)
        .map(|(&a, &b)| a * a + b * b + c * a * b)
        .sum()
}

/// Declared edge-weight bound of the squaring-trick output, `2k³dp²`.
pub fn edge_weight_bound(k: usize, d: usize, p: u64) -> BigInt {
    BigInt::from(2u32) * BigInt::from(k).pow(3) * d * BigInt::from(p).pow(2)
}

fn check_power(k: usize, m: &BigInt, p: u64, d: usize) -> Result<()> {
    let need = m * k + 1u32;
    ensure!(
        BigInt::from(p).pow(d as u32) >= need,
        Parameter,
        "p^d = {p}^{d} is below kM + 1 = {need}"
    );
    Ok(())
}

/// k-SUM on `[0, M]` to one digit-vector instance per feasible carry tuple.
///
/// Vectors are base-`p` digit vectors in `[0, p−1]^d`; the target of item `i`
/// is `t_γ`. Infeasible carry targets are listed under `params.skipped`.
pub fn ksum_to_vectorsum(
    inst: &KSumInstance,
    p: u64,
    d: usize,
) -> Result<ReducedCollection<VectorSumInstance>> {
    let k = inst.k();
    check_radix(k, p)?;
    let m = inst.nonnegative_bound()?;
    let t = inst.target();
    ensure!(
        !t.is_negative() && t <= &(m * k),
        Precondition,
        "target {t} outside [0, kM] = [0, {}]",
        m * k
    );
    check_power(k, m, p, d)?;
    let ctx = carry_targets(t, k, p, d)?;
    let vectors: Vec<Vec<BigInt>> = inst
        .numbers()
        .iter()
        .map(|x| {
            base_p_digits(x, p, d).map(|ds| ds.into_iter().map(BigInt::from).collect())
        })
        .collect::<Result<_>>()?;
    let skipped: Vec<usize> = (0..ctx.s()).filter(|&i| !ctx.is_feasible(i)).collect();
    let source: Instance = inst.clone().into();
    let mut coll = ReducedCollection::new(
        "ksum_to_vectorsum",
        &source,
        json!({ "p": p, "d": d, "s": ctx.s(), "skipped": skipped }),
    );
    let entry_range = Range::new(BigInt::zero(), BigInt::from(p - 1))?;
    for i in (0..ctx.s()).filter(|&i| ctx.is_feasible(i)) {
        let target: Vec<BigInt> = ctx.targets[i].iter().map(|&x| BigInt::from(x)).collect();
        let item = VectorSumInstance::new(k, d, vectors.clone(), Some(entry_range.clone()), target)?;
        coll.push(item, carry_provenance(&ctx, i));
    }
    Ok(coll)
}

fn carry_provenance(ctx: &CarryContext, i: usize) -> Provenance {
    Provenance {
        carry_index: Some(i),
        gamma: Some(ctx.gammas[i].clone()),
        carry_target: Some(ctx.targets[i].iter().map(i128::to_string).collect()),
        ..Default::default()
    }
}

/// Node-weight k-clique (weights in `[0, M]`, target `t ∈ [0, kM]`) to one
/// edge-weighted copy of the graph per feasible carry tuple, target `0`.
///
/// Every emitted weight satisfies `|w| ≤ 2k³dp²`, which is the declared bound.
pub fn nodeweight_to_edgeweight(
    g: &WeightedGraph,
    p: u64,
    d: usize,
) -> Result<ReducedCollection<WeightedGraph>> {
    let k = g.k();
    ensure!(k >= 2, Unsupported, "node-to-edge weights needs k >= 2, got {k}");
    check_radix(k, p)?;
    let weights = g
        .node_weights()
        .ok_or_else(|| Error::Precondition("graph must be node-weighted".into()))?;
    ensure!(
        weights.iter().all(|w| !w.is_negative()),
        Precondition,
        "node weights must be nonnegative (shift first)"
    );
    let m = g.weight_bound();
    let t = g.target();
    ensure!(
        !t.is_negative() && t <= &(m * k),
        Precondition,
        "target {t} outside [0, kM] = [0, {}]",
        m * k
    );
    check_power(k, m, p, d)?;
    let ctx = carry_targets(t, k, p, d)?;
    let bound = edge_weight_bound(k, d, p);
    let skipped: Vec<usize> = (0..ctx.s()).filter(|&i| !ctx.is_feasible(i)).collect();
    let source: Instance = g.clone().into();
    let mut coll = ReducedCollection::new(
        "nodeweight_to_edgeweight",
        &source,
        json!({ "p": p, "d": d, "s": ctx.s(), "skipped": skipped, "weight_bound": bound.to_string() }),
    );
    for i in (0..ctx.s()).filter(|&i| ctx.is_feasible(i)) {
        let f: Vec<Vec<i128>> = weights
            .iter()
            .map(|w| map_f(w, &ctx.targets[i], k, p))
            .collect::<Result<_>>()?;
        let edge_weights: Vec<BigInt> = g
            .graph()
            .edges()
            .iter()
            .map(|&(u, v)| BigInt::from(squaring_weight(&f[u], &f[v], k)))
            .collect();
        let item = WeightedGraph::new(
            g.graph().clone(),
            k,
            Weights::Edge(edge_weights),
            Some(bound.clone()),
            BigInt::zero(),
        )?;
        coll.push(item, carry_provenance(&ctx, i));
    }
    Ok(coll)
}

/// Slot pairs `(1,2), (1,3), …, (k−1,k)` in lexicographic order.
pub fn slot_pairs(k: usize) -> Vec<(usize, usize)> {
    (1..=k)
        .flat_map(|i| (i + 1..=k).map(move |j| (i, j)))
        .collect()
}

/// One guessed weight per slot pair, ordered as [`slot_pairs`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlphaTuple {
    pub entries: Vec<i128>,
}

impl AlphaTuple {
    pub fn to_provenance(&self, k: usize) -> Vec<(usize, usize, String)> {
        slot_pairs(k)
            .into_iter()
            .zip(&self.entries)
            .map(|((i, j), v)| (i, j, v.to_string()))
            .collect()
    }
}

/// Which α-tuples to enumerate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlphaDomain {
    /// Every tuple in `[−M, M]^C(k,2)` summing to zero.
    #[default]
    Full,
    /// Only tuples whose entries are all weights carried by some edge. Any
    /// other tuple yields a graph with no edges between some pair of parts.
    Realized,
}

/// Number of tuples in `[−M, M]^c` summing to zero, by dynamic programming
/// over partial sums.
pub fn count_alpha_tuples(c: usize, m: u64) -> u128 {
    if c == 0 {
        return 1;
    }
    let m = m as i64;
    let width = (2 * m * c as i64 + 1) as usize;
    let offset = m * c as i64;
    let mut ways = vec![0u128; width];
    ways[offset as usize] = 1;
    for _ in 0..c {
        let mut next = vec![0u128; width];
        for (idx, &w) in ways.iter().enumerate() {
            if w == 0 {
                continue;
            }
            for a in -m..=m {
                let j = idx as i64 + a;
                if (0..width as i64).contains(&j) {
                    next[j as usize] += w;
                }
            }
        }
        ways = next;
    }
    ways[offset as usize]
}

/// The family of k-partite graphs `G_α` of one edge-weighted graph.
pub struct AlphaFamily<'a> {
    source: &'a WeightedGraph,
    k: usize,
    bound: i128,
    domain: AlphaDomain,
    /// Sorted distinct edge weights.
    realized: Vec<i128>,
    /// Edges carrying `realized[i]`, oriented `u < v`.
    buckets: Vec<Vec<(usize, usize)>>,
}

impl<'a> AlphaFamily<'a> {
    pub fn new(source: &'a WeightedGraph, domain: AlphaDomain) -> Result<Self> {
        let weights = source
            .edge_weights()
            .ok_or_else(|| Error::Precondition("graph must be edge-weighted".into()))?;
        ensure!(
            source.target().is_zero(),
            Precondition,
            "edge-weighted target must be 0, got {}",
            source.target()
        );
        let bound = source
            .weight_bound()
            .to_i128()
            .filter(|b| *b < 1i128 << 100)
            .ok_or_else(|| Error::Range(format!("weight bound {} too large", source.weight_bound())))?;
        let mut buckets: HashMap<i128, Vec<(usize, usize)>> = HashMap::new();
        for (&(u, v), w) in source.graph().edges().iter().zip(weights) {
            let w = w.to_i128().expect("weight within bound");
            buckets.entry(w).or_default().push((u, v));
        }
        let mut buckets: Vec<(i128, Vec<(usize, usize)>)> = buckets.into_iter().collect();
        buckets.sort_unstable_by_key(|(w, _)| *w);
        let (realized, buckets) = buckets.into_iter().unzip();
        Ok(AlphaFamily {
            source,
            k: source.k(),
            bound,
            domain,
            realized,
            buckets,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn domain(&self) -> AlphaDomain {
        self.domain
    }

    fn pairs(&self) -> usize {
        self.k * (self.k - 1) / 2
    }

    /// Exact family size.
    pub fn count(&self) -> u128 {
        match self.domain {
            AlphaDomain::Full => count_alpha_tuples(self.pairs(), self.bound as u64),
            AlphaDomain::Realized => {
                let mut n = 0u128;
                self.for_each_alpha(|_| {
                    n += 1;
                    true
                });
                n
            }
        }
    }

    /// Visits tuples in lexicographic order until `visit` returns `false`.
    pub fn for_each_alpha(&self, mut visit: impl FnMut(&AlphaTuple) -> bool) {
        let c = self.pairs();
        if c == 0 {
            visit(&AlphaTuple { entries: vec![] });
            return;
        }
        match self.domain {
            AlphaDomain::Full => {
                let values: Vec<i128> = (-self.bound..=self.bound).collect();
                self.enumerate_direct(&values, c, &mut visit);
            }
            AlphaDomain::Realized if c >= 4 => self.enumerate_split(c, &mut visit),
            AlphaDomain::Realized => {
                let values = self.realized.clone();
                self.enumerate_direct(&values, c, &mut visit);
            }
        }
    }

    fn last_ok(&self, v: i128) -> bool {
        match self.domain {
            AlphaDomain::Full => v.abs() <= self.bound,
            AlphaDomain::Realized => self.realized.binary_search(&v).is_ok(),
        }
    }

    /// Odometer over the first `c−1` coordinates; the last is forced.
    fn enumerate_direct(&self, values: &[i128], c: usize, visit: &mut impl FnMut(&AlphaTuple) -> bool) {
        if values.is_empty() {
            return;
        }
        let free = c - 1;
        let mut idx = vec![0usize; free];
        let mut entries = vec![0i128; c];
        loop {
            let mut sum = 0i128;
            for (e, &i) in entries.iter_mut().zip(&idx) {
                *e = values[i];
                sum += values[i];
            }
            if self.last_ok(-sum) {
                entries[c - 1] = -sum;
                if !visit(&AlphaTuple {
                    entries: entries.clone(),
                }) {
                    return;
                }
            }
            let mut pos = free;
            loop {
                if pos == 0 {
                    return;
                }
                pos -= 1;
                if idx[pos] + 1 < values.len() {
                    idx[pos] += 1;
                    for x in &mut idx[pos + 1..] {
                        *x = 0;
                    }
                    break;
                }
            }
        }
    }

    /// Meet-in-the-middle over realized weights: tails are bucketed by sum,
    /// heads enumerated in order, so output stays lexicographic.
    fn enumerate_split(&self, c: usize, visit: &mut impl FnMut(&AlphaTuple) -> bool) {
        let head = c / 2;
        let tail = c - head;
        let w = &self.realized;
        let mut tails: HashMap<i128, Vec<Vec<i128>>> = HashMap::new();
        product(w, tail, &mut |t| {
            tails.entry(t.iter().sum()).or_default().push(t.to_vec());
            true
        });
        product(w, head, &mut |h| {
            let need = -h.iter().sum::<i128>();
            if let Some(list) = tails.get(&need) {
                for t in list {
                    let mut entries = h.to_vec();
                    entries.extend_from_slice(t);
                    if !visit(&AlphaTuple { entries }) {
                        return false;
                    }
                }
            }
            true
        });
    }

    /// `G_α` on vertices `(v, i) ↦ (i−1)·n + v`: an edge `(u,i)–(v,j)` for
    /// `i < j`, `u < v`, `{u,v} ∈ E` and `w(u,v) = α_{i,j}`.
    pub fn graph_for(&self, alpha: &AlphaTuple) -> CliqueInstance {
        let n = self.source.graph().n();
        let k = self.k;
        let pairs = slot_pairs(k);
        let lists: Vec<&[(usize, usize)]> = alpha
            .entries
            .iter()
            .map(|a| match self.realized.binary_search(a) {
                Ok(b) => self.buckets[b].as_slice(),
                Err(_) => &[],
            })
            .collect();
        let mut edges = Vec::with_capacity(lists.iter().map(|l| l.len()).sum());
        for (&(i, j), list) in pairs.iter().zip(lists) {
            edges.extend(list.iter().map(|&(u, v)| ((i - 1) * n + u, (j - 1) * n + v)));
        }
        edges.sort_unstable();
        let mut partition = Vec::with_capacity(k * n);
        for i in 1..=k {
            partition.resize(i * n, i);
        }
        CliqueInstance::new_unchecked(Graph::from_sorted_unchecked(k * n, edges), k, Some(partition))
    }
}

/// Cartesian power `values^len` in lexicographic order.
fn product(values: &[i128], len: usize, visit: &mut impl FnMut(&[i128]) -> bool) -> bool {
    fn rec(values: &[i128], len: usize, cur: &mut Vec<i128>, visit: &mut impl FnMut(&[i128]) -> bool) -> bool {
        if cur.len() == len {
            return visit(cur);
        }
        for &v in values {
            cur.push(v);
            let go = rec(values, len, cur, visit);
            cur.pop();
            if !go {
                return false;
            }
        }
        true
    }
    rec(values, len, &mut Vec::with_capacity(len), visit)
}

/// Items produced before giving up with a resource error.
pub const DEFAULT_ITEM_BUDGET: u128 = 2_000_000;

/// Edge-weight k-clique (target 0) to one unweighted k-partite graph per α-tuple.
pub fn edgeweight_to_unweighted(
    g: &WeightedGraph,
    domain: AlphaDomain,
    budget: u128,
) -> Result<ReducedCollection<CliqueInstance>> {
    let family = AlphaFamily::new(g, domain)?;
    let count = family.count();
    ensure!(
        count <= budget,
        Resource,
        "{count} α-tuples exceed the item budget {budget}"
    );
    let source: Instance = g.clone().into();
    let mut coll = ReducedCollection::new(
        "edgeweight_to_unweighted",
        &source,
        json!({
            "domain": format!("{domain:?}").to_lowercase(),
            "alpha_count": count.to_string(),
        }),
    );
    let k = g.k();
    family.for_each_alpha(|alpha| {
        coll.push(
            family.graph_for(alpha),
            Provenance {
                alpha: Some(alpha.to_provenance(k)),
                ..Default::default()
            },
        );
        true
    });
    Ok(coll)
}

/// Strips slot labels from a `G_α` clique: `(v, i) ↦ v`.
pub fn lift_alpha_witness(witness: &[usize], n: usize) -> Vec<usize> {
    witness.iter().map(|&x| x % n.max(1)).collect()
}

/// A disjoint union of clique instances, with each component's placement.
#[derive(Clone, Debug, PartialEq)]
pub struct MergedClique {
    pub instance: CliqueInstance,
    /// One record per component, holding the item's original provenance plus
    /// `vertex_offset` / `vertex_count`.
    pub components: Vec<Provenance>,
}

impl MergedClique {
    /// Maps a merged-graph witness to `(component index, local witness)`.
    pub fn lift(&self, witness: &[usize]) -> Result<(usize, Vec<usize>)> {
        let first = *witness
            .first()
            .ok_or_else(|| Error::Lift("empty witness".into()))?;
        let comp = self
            .components
            .partition_point(|c| c.vertex_offset.unwrap_or(0) <= first)
            .checked_sub(1)
            .ok_or_else(|| Error::Lift("vertex precedes every component".into()))?;
        let offset = self.components[comp].vertex_offset.unwrap_or(0);
        let count = self.components[comp].vertex_count.unwrap_or(0);
        let local: Vec<usize> = witness
            .iter()
            .map(|&v| {
                if v >= offset && v < offset + count {
                    Ok(v - offset)
                } else {
                    Err(Error::Lift(format!("vertex {v} is outside component {comp}")))
                }
            })
            .collect::<Result<_>>()?;
        Ok((comp, local))
    }
}

/// Disjoint union of every item; a k-clique of the union lies in one component.
pub fn merge_clique_instances(coll: &ReducedCollection<CliqueInstance>) -> Result<MergedClique> {
    let k = coll.items.first().map(|(c, _)| c.k()).unwrap_or(1);
    ensure!(
        coll.items.iter().all(|(c, _)| c.k() == k),
        Validation,
        "cannot merge instances of different arity"
    );
    let with_partition = coll.items.iter().all(|(c, _)| c.partition().is_some());
    let total: usize = coll.items.iter().map(|(c, _)| c.graph().n()).sum();
    let mut edges = Vec::with_capacity(coll.items.iter().map(|(c, _)| c.graph().m()).sum());
    let mut partition = Vec::with_capacity(if with_partition { total } else { 0 });
    let mut components = Vec::with_capacity(coll.items.len());
    let mut offset = 0usize;
    for (c, prov) in &coll.items {
        edges.extend(c.graph().edges().iter().map(|&(u, v)| (u + offset, v + offset)));
        if with_partition {
            partition.extend_from_slice(c.partition().expect("checked"));
        }
        components.push(Provenance {
            vertex_offset: Some(offset),
            vertex_count: Some(c.graph().n()),
            ..prov.clone()
        });
        offset += c.graph().n();
    }
    let graph = Graph::from_sorted_unchecked(total, edges);
    let instance = CliqueInstance::new_unchecked(graph, k, with_partition.then_some(partition));
    Ok(MergedClique {
        instance,
        components,
    })
}

/// Parameters chosen for the small-k-SUM pipeline.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PipelineParams {
    pub n: usize,
    pub k: usize,
    pub f_exp: u32,
    pub d: usize,
    pub p: u64,
    pub s: usize,
    pub s_feasible: usize,
    /// Total number of unweighted instances merged, `g(n, k)`.
    pub g: usize,
}

/// Dimension `max(1, ⌈log₂n / log₂log₂n⌉)`, falling back to 1 below `n = 4`.
pub fn pipeline_dimension(n: usize) -> usize {
    if n < 4 {
        return 1;
    }
    let l = (n as f64).log2();
    ((l / l.log2()).ceil() as usize).max(1)
}

/// Smallest radix `p ≥ max(⌈k·2^f·log₂n⌉, k+1)` with `p^d ≥ kM + 1`.
pub fn pipeline_radix(n: usize, k: usize, f_exp: u32, m: &BigInt, d: usize) -> u64 {
    let formula = (k as f64 * 2f64.powi(f_exp as i32) * (n.max(1) as f64).log2()).ceil() as u64;
    let mut p = formula.max(k as u64 + 1);
    let need = m * k + 1u32;
    while BigInt::from(p).pow(d as u32) < need {
        p += 1;
    }
    p
}

/// Options for [`smallksum_to_kclique`].
#[derive(Clone, Copy, Debug)]
pub struct PipelineOptions {
    pub domain: AlphaDomain,
    /// Upper limit on the total vertex count of the merged graph.
    pub max_vertices: usize,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            domain: AlphaDomain::Realized,
            max_vertices: 20_000_000,
        }
    }
}

/// Result of the composed small-k-SUM → k-Clique reduction.
#[derive(Clone, Debug)]
pub struct ForwardPipeline {
    pub source: KSumInstance,
    pub params: PipelineParams,
    pub merged: MergedClique,
}

impl ForwardPipeline {
    /// Lifts a k-clique of the merged graph to a k-SUM index set.
    pub fn lift(&self, witness: &[usize]) -> Result<Vec<usize>> {
        ensure!(
            self.merged.instance.verify(witness)?,
            Lift,
            "witness is not a {}-clique of the merged graph",
            self.params.k
        );
        let (comp, local) = self.merged.lift(witness)?;
        let mut indices = match &self.merged.components[comp].vertex_codes {
            // k = 1 components keep only the vertices hitting the target
            Some(codes) => local
                .iter()
                .map(|&v| codes[v].parse::<usize>().map_err(|_| Error::Lift("bad vertex code".into())))
                .collect::<Result<Vec<_>>>()?,
            None => lift_alpha_witness(&local, self.source.n()),
        };
        indices.sort_unstable();
        ensure!(
            self.source.verify(&indices)?,
            Lift,
            "lifted indices {indices:?} do not solve the source"
        );
        Ok(indices)
    }
}

/// Visits every component of the small-k-SUM pipeline (one `G_α` per
/// feasible carry tuple and α-tuple, in that order) without building their
/// union. Stops early when `visit` returns `false`; `g` then counts the
/// components visited so far.
pub fn pipeline_components(
    inst: &KSumInstance,
    f_exp: u32,
    domain: AlphaDomain,
    visit: &mut dyn FnMut(CliqueInstance, &dyn Fn() -> Provenance) -> bool,
) -> Result<PipelineParams> {
    let n = inst.n();
    let k = inst.k();
    let m = inst.nonnegative_bound()?.clone();
    let cap = BigInt::from(n).pow(f_exp);
    if let Some(x) = inst.numbers().iter().find(|x| **x > cap) {
        return Err(Error::Precondition(format!(
            "number {x} exceeds n^f = {cap}; reduce magnitudes first with the random-prime reduction (modprime)"
        )));
    }
    let d = pipeline_dimension(n);
    let p = pipeline_radix(n, k, f_exp, &m, d);
    let mut params = PipelineParams {
        n,
        k,
        f_exp,
        d,
        p,
        s: 0,
        s_feasible: 0,
        g: 0,
    };
    if k == 1 {
        // A single vertex is a 1-clique; its weight must equal the target.
        params.s = 1;
        params.s_feasible = 1;
        let keep: Vec<usize> = (0..n).filter(|&v| &inst.numbers()[v] == inst.target()).collect();
        if !keep.is_empty() {
            params.g = 1;
            visit(
                CliqueInstance::new_unchecked(
                    Graph::from_sorted_unchecked(keep.len(), Vec::new()),
                    1,
                    Some(vec![1; keep.len()]),
                ),
                &|| Provenance {
                    vertex_codes: Some(keep.iter().map(usize::to_string).collect()),
                    ..Default::default()
                },
            );
        }
        return Ok(params);
    }
    let t = inst.target();
    if t.is_negative() || t > &(&m * k) {
        return Ok(params);
    }
    let nodes = WeightedGraph::new(
        Graph::complete(n),
        k,
        Weights::Node(inst.numbers().to_vec()),
        Some(m.clone()),
        t.clone(),
    )?;
    let weighted = nodeweight_to_edgeweight(&nodes, p, d)?;
    params.s = weighted.params["s"].as_u64().unwrap_or(0) as usize;
    params.s_feasible = weighted.len();
    let mut go = true;
    for (parent, (eg, prov)) in weighted.items.iter().enumerate() {
        let family = AlphaFamily::new(eg, domain)?;
        family.for_each_alpha(|alpha| {
            params.g += 1;
            go = visit(family.graph_for(alpha), &|| Provenance {
                alpha: Some(alpha.to_provenance(k)),
                parent: Some(parent),
                ..prov.clone()
            });
            go
        });
        if !go {
            break;
        }
    }
    Ok(params)
}

/// Small-k-SUM (numbers in `[0, n^f]`) to a single unweighted k-Clique
/// instance: complete node-weighted graph, squaring trick per carry tuple,
/// α-guessing, then a disjoint union of all resulting graphs.
pub fn smallksum_to_kclique(inst: &KSumInstance, f_exp: u32, opts: PipelineOptions) -> Result<ForwardPipeline> {
    let mut items = Vec::new();
    let mut vertices = 0usize;
    let params = pipeline_components(inst, f_exp, opts.domain, &mut |g, prov| {
        vertices += g.graph().n();
        if vertices > opts.max_vertices {
            return false;
        }
        items.push((g, prov()));
        true
    })?;
    ensure!(
        vertices <= opts.max_vertices,
        Resource,
        "merged graph would exceed {} vertices",
        opts.max_vertices
    );
    let source: Instance = inst.clone().into();
    let mut coll = ReducedCollection::new(
        "smallksum_to_kclique",
        &source,
        json!({
            "p": params.p,
            "d": params.d,
            "f": f_exp,
            "s": params.s,
            "s_feasible": params.s_feasible,
            "g": params.g,
        }),
    );
    coll.items = items;
    let merged = merge_clique_instances(&coll)?;
    Ok(ForwardPipeline {
        source: inst.clone(),
        params,
        merged,
    })
}

/// Tuples handed to the parallel scan at a time.
const ALPHA_BATCH: usize = 4096;

/// Exhaustive scan of one family for a clique, in α order.
///
/// Each `G_α` is handed to `solve`; the first hit wins, ties going to the
/// smallest α index regardless of scheduling. Tuples are scanned in batches,
/// and the count returned covers every batch visited.
pub fn first_alpha_hit<F>(family: &AlphaFamily<'_>, solve: F) -> (usize, Option<(AlphaTuple, Vec<usize>)>)
where
    F: Fn(&CliqueInstance) -> Option<Vec<usize>> + Sync,
{
    let scan = |batch: &mut Vec<AlphaTuple>| {
        std::mem::take(batch).into_par_iter().find_map_first(|alpha| {
            let g = family.graph_for(&alpha);
            solve(&g).map(|w| (alpha, w))
        })
    };
    let mut examined = 0;
    let mut batch = Vec::with_capacity(ALPHA_BATCH);
    let mut hit = None;
    family.for_each_alpha(|a| {
        examined += 1;
        batch.push(a.clone());
        if batch.len() == ALPHA_BATCH {
            hit = scan(&mut batch);
        }
        hit.is_none()
    });
    if hit.is_none() {
        hit = scan(&mut batch);
    }
    (examined, hit)
}

/// Checks that a squaring-trick clique weight is `(k−1)·‖Σ u_a‖²`.
pub fn clique_weight_identity(vectors: &[Vec<i128>], k: usize) -> (i128, i128) {
    let mut pairwise = 0i128;
    for a in 0..vectors.len() {
        for b in a + 1..vectors.len() {
            pairwise += squaring_weight(&vectors[a], &vectors[b], k);
        }
    }
    let d = vectors.first().map_or(0, Vec::len);
    let squares: i128 = (0..d)
        .map(|j| {
            let s: i128 = vectors.iter().map(|v| v[j]).sum();
            s * s
        })
        .sum();
    (pairwise, (k as i128 - 1) * squares)
}

/// One arity of the Subset Sum sweep.
#[derive(Clone, Debug)]
pub struct SubsetSumLayer {
    pub k: usize,
    pub d: usize,
    pub p: u64,
    /// Exact edge-weight instances; empty when no k-subset can reach the target.
    pub instances: ReducedCollection<WeightedGraph>,
}

/// Dimension `1 + ⌊n / (f·log₂(n+1))⌋`, so each arity yields at most
/// `(n+1)^(d−1) ≤ 2^(n/f)` carry tuples; `f` plays the role of `1/ε`.
pub fn subsetsum_dimension(n: usize, f_exp: u32) -> usize {
    let f = f_exp.max(1) as f64;
    1 + (n as f64 / (f * ((n + 1) as f64).log2())).floor() as usize
}

/// Subset Sum (nonempty subsets) as exact edge-weight k-Clique instances on
/// the complete graph `K_n`, one batch per `k ∈ [1, n]`.
///
/// Numbers are shifted by `B = max|x|` into `[0, 2B]`, the arity-`k` target
/// becomes `t + kB`, and the carry and squaring steps turn node weights into
/// edge weights. A 1-clique has no edges, so arity 1 keeps only the vertices
/// whose number equals `t`.
pub fn subsetsum_to_edgeweight(numbers: &[BigInt], target: &BigInt, f_exp: u32) -> Result<Vec<SubsetSumLayer>> {
    let n = numbers.len();
    ensure!(n >= 1, Parameter, "Subset Sum needs at least one number");
    let shift = numbers.iter().map(|x| x.abs()).max().unwrap_or_else(BigInt::zero);
    let m: BigInt = &shift * 2;
    let shifted: Vec<BigInt> = numbers.iter().map(|x| x + &shift).collect();
    let d = subsetsum_dimension(n, f_exp);
    let mut layers = Vec::with_capacity(n);
    for k in 1..=n {
        let t = target + &shift * k;
        let nodes = WeightedGraph::new(
            Graph::complete(n),
            k,
            Weights::Node(shifted.clone()),
            Some(m.clone()),
            t.clone(),
        )?;
        let source: Instance = nodes.clone().into();
        let reach = &m * k;
        if k == 1 {
            let hits: Vec<usize> = (0..n).filter(|&i| &numbers[i] == target).collect();
            let mut coll = ReducedCollection::new(
                "subsetsum_to_edgeweight",
                &source,
                json!({ "k": 1, "hits": hits.len() }),
            );
            if !hits.is_empty() {
                let g = WeightedGraph::new(Graph::empty(hits.len()), 1, Weights::Edge(Vec::new()), None, BigInt::zero())?;
                coll.push(
                    g,
                    Provenance {
                        vertex_codes: Some(hits.iter().map(usize::to_string).collect()),
                        ..Default::default()
                    },
                );
            }
            layers.push(SubsetSumLayer { k, d: 1, p: 2, instances: coll });
            continue;
        }
        // smallest p > k with p^d ≥ kM + 1
        let need = &reach + 1u32;
        let mut root = need.nth_root(d as u32);
        while root.pow(d as u32) < need {
            root += 1u32;
        }
        let p = root
            .to_u64()
            .filter(|&p| p <= MAX_RADIX)
            .ok_or_else(|| Error::Range(format!("radix {root} exceeds {MAX_RADIX}; raise the f-exponent")))?
            .max(k as u64 + 1);
        let instances = if t.is_negative() || t > reach {
            ReducedCollection::new("nodeweight_to_edgeweight", &source, json!({ "p": p, "d": d, "s": 0 }))
        } else {
            nodeweight_to_edgeweight(&nodes, p, d)?
        };
        layers.push(SubsetSumLayer { k, d, p, instances });
    }
    Ok(layers)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solvers::{solve_kclique_bruteforce, solve_vectorsum_bruteforce, DEFAULT_BUDGET};
    use proptest::prelude::*;

    fn big(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn digits_examples() {
        assert_eq!(base_p_digits(&big(0), 3, 2).unwrap(), vec![0, 0]);
        assert_eq!(base_p_digits(&big(5), 3, 2).unwrap(), vec![2, 1]);
        assert_eq!(base_p_digits(&big(8), 3, 2).unwrap(), vec![2, 2]);
        assert!(matches!(base_p_digits(&big(9), 3, 2), Err(Error::Range(_))));
    }

    #[test]
    fn carry_target_examples() {
        let ctx = carry_targets(&big(4), 2, 3, 2).unwrap();
        assert_eq!(ctx.s(), 3);
        assert_eq!(ctx.gammas, vec![vec![0], vec![1], vec![2]]);
        assert_eq!(ctx.targets, vec![vec![1, 1], vec![4, 0], vec![7, -1]]);
        assert_eq!(
            (0..3).map(|i| ctx.is_feasible(i)).collect::<Vec<_>>(),
            vec![true, true, false]
        );
        let ctx = carry_targets(&big(0), 2, 3, 1).unwrap();
        assert_eq!(ctx.targets, vec![vec![0]]);
        assert!(matches!(carry_targets(&big(1), 2, 2, 2), Err(Error::Parameter(_))));
    }

    #[test]
    fn carry_targets_recompose() {
        for t in 0..27 {
            let ctx = carry_targets(&big(t), 2, 3, 3).unwrap();
            assert_eq!(ctx.s(), 9);
            for tg in &ctx.targets {
                let back: i128 = tg.iter().rev().fold(0, |acc, &x| acc * 3 + x);
                assert_eq!(back, t as i128);
            }
        }
    }

    #[test]
    fn map_f_examples() {
        assert_eq!(map_f(&big(1), &[1, 1], 2, 3).unwrap(), vec![1, -1]);
        assert_eq!(map_f(&big(3), &[1, 1], 2, 3).unwrap(), vec![-1, 1]);
        assert_eq!(map_f(&big(0), &[0, 0], 4, 5).unwrap(), vec![0, 0]);
    }

    #[test]
    fn ksum_to_vectorsum_example() {
        let inst = KSumInstance::from_i64(2, &[1, 3, 2, 2], 4).unwrap();
        let coll = ksum_to_vectorsum(&inst, 3, 2).unwrap();
        assert_eq!(coll.len(), 2);
        assert_eq!(coll.params["skipped"], json!([2]));
        let targets: Vec<_> = coll.instances().map(|v| v.target().to_vec()).collect();
        assert_eq!(targets, vec![vec![big(1), big(1)], vec![big(4), big(0)]]);
        let w: Vec<_> = coll
            .instances()
            .map(|v| solve_vectorsum_bruteforce(v, DEFAULT_BUDGET).unwrap().witness)
            .collect();
        assert_eq!(w, vec![Some(vec![0, 1]), Some(vec![2, 3])]);

        let zeros = KSumInstance::from_i64(2, &[0, 0], 0).unwrap();
        let coll = ksum_to_vectorsum(&zeros, 3, 1).unwrap();
        assert_eq!(coll.len(), 1);
        assert!(solve_vectorsum_bruteforce(&coll.items[0].0, DEFAULT_BUDGET).unwrap().solvable);
    }

    #[test]
    fn ksum_to_vectorsum_rejects_small_power() {
        let inst = KSumInstance::from_i64(2, &[1, 30], 4).unwrap();
        assert!(matches!(ksum_to_vectorsum(&inst, 3, 2), Err(Error::Parameter(_))));
    }

    #[test]
    fn single_edge_squaring() {
        let g = WeightedGraph::node_weighted(Graph::complete(2), 2, vec![big(1), big(3)], big(4)).unwrap();
        let coll = nodeweight_to_edgeweight(&g, 3, 2).unwrap();
        assert_eq!(coll.items[0].1.gamma, Some(vec![0]));
        assert_eq!(coll.items[0].0.edge_weights().unwrap(), &[big(0)]);
        assert!(coll.items[0].0.verify(&[0, 1]).unwrap());

        let one = WeightedGraph::node_weighted(Graph::complete(2), 1, vec![big(1), big(3)], big(1)).unwrap();
        assert!(matches!(nodeweight_to_edgeweight(&one, 3, 2), Err(Error::Unsupported(_))));
    }

    #[test]
    fn zero_images_give_zero_weights() {
        // t = k·x for every x makes each f-image zero
        let g = WeightedGraph::node_weighted(Graph::complete(3), 3, vec![big(2); 3], big(6)).unwrap();
        let coll = nodeweight_to_edgeweight(&g, 7, 1).unwrap();
        assert!(coll.items[0].0.edge_weights().unwrap().iter().all(Zero::is_zero));
    }

    proptest! {
        #[test]
        fn squaring_identity(
            k in 2usize..6,
            d in 1usize..5,
            seed in proptest::collection::vec(-50i128..50, 30),
        ) {
            let vectors: Vec<Vec<i128>> = (0..k).map(|a| (0..d).map(|j| seed[(a * d + j) % 30] + a as i128).collect()).collect();
            let (pairwise, squares) = clique_weight_identity(&vectors, k);
            prop_assert_eq!(pairwise, squares);
        }
    }

    #[test]
    fn alpha_counts() {
        assert_eq!(count_alpha_tuples(3, 1), 7);
        assert_eq!(count_alpha_tuples(1, 5), 1);
        assert_eq!(count_alpha_tuples(2, 3), 7);
        // brute: all triples in [-1,1]^3 summing to zero
        let brute = (-1..=1)
            .flat_map(|a| (-1..=1).flat_map(move |b| (-1..=1).map(move |c| a + b + c)))
            .filter(|&s| s == 0)
            .count();
        assert_eq!(brute, 7);
    }

    fn triangle() -> WeightedGraph {
        WeightedGraph::new(
            Graph::complete(3),
            3,
            Weights::Edge(vec![big(1), big(-1), big(0)]),
            Some(big(1)),
            big(0),
        )
        .unwrap()
    }

    #[test]
    fn full_domain_enumeration() {
        let g = triangle();
        let family = AlphaFamily::new(&g, AlphaDomain::Full).unwrap();
        let mut seen = Vec::new();
        family.for_each_alpha(|a| {
            seen.push(a.entries.clone());
            true
        });
        assert_eq!(seen.len(), 7);
        assert_eq!(family.count(), 7);
        let mut sorted = seen.clone();
        sorted.sort();
        assert_eq!(seen, sorted, "lexicographic order");
        assert!(seen.iter().all(|a| a.iter().sum::<i128>() == 0));
    }

    #[test]
    fn triangle_alpha_graph() {
        let g = triangle();
        let family = AlphaFamily::new(&g, AlphaDomain::Full).unwrap();
        let ga = family.graph_for(&AlphaTuple { entries: vec![1, -1, 0] });
        assert_eq!(ga.graph().n(), 9);
        let r = solve_kclique_bruteforce(&ga.clone().into(), DEFAULT_BUDGET).unwrap();
        let w = r.witness.unwrap();
        assert_eq!(lift_alpha_witness(&w, 3), vec![0, 1, 2]);
        let other = family.graph_for(&AlphaTuple { entries: vec![0, 0, 0] });
        // the weight-0 edge (1,2) appears once per slot pair
        assert_eq!(other.graph().m(), 3);
    }

    #[test]
    fn realized_and_full_agree() {
        let g = WeightedGraph::new(
            Graph::complete(3),
            3,
            Weights::Edge(vec![big(1), big(-1), big(0)]),
            Some(big(2)),
            big(0),
        )
        .unwrap();
        let full = edgeweight_to_unweighted(&g, AlphaDomain::Full, DEFAULT_ITEM_BUDGET).unwrap();
        let realized = edgeweight_to_unweighted(&g, AlphaDomain::Realized, DEFAULT_ITEM_BUDGET).unwrap();
        let solvable = |c: &ReducedCollection<CliqueInstance>| {
            c.instances()
                .filter(|x| solve_kclique_bruteforce(&(*x).clone().into(), DEFAULT_BUDGET).unwrap().solvable)
                .count()
        };
        assert_eq!(full.len(), 19);
        assert!(realized.len() < full.len());
        assert_eq!(solvable(&full), 1);
        assert_eq!(solvable(&realized), 1);
    }

    #[test]
    fn edgeless_graph_has_no_cliques() {
        let g = WeightedGraph::new(Graph::empty(4), 2, Weights::Edge(vec![]), Some(big(2)), big(0)).unwrap();
        let coll = edgeweight_to_unweighted(&g, AlphaDomain::Full, DEFAULT_ITEM_BUDGET).unwrap();
        assert!(coll.instances().all(|c| c.graph().m() == 0));
    }

    fn clique_coll(graphs: Vec<Graph>, k: usize) -> ReducedCollection<CliqueInstance> {
        let src: Instance = CliqueInstance::new(Graph::empty(1), k, None).unwrap().into();
        let mut coll = ReducedCollection::new("test", &src, json!({}));
        for g in graphs {
            coll.push(CliqueInstance::new(g, k, None).unwrap(), Provenance::default());
        }
        coll
    }

    #[test]
    fn merge_examples() {
        let single = merge_clique_instances(&clique_coll(vec![Graph::cycle(5)], 3)).unwrap();
        assert_eq!(single.instance.graph(), &Graph::cycle(5));

        let none = merge_clique_instances(&clique_coll(vec![Graph::cycle(5), Graph::cycle(4)], 3)).unwrap();
        assert!(!solve_kclique_bruteforce(&none.instance.clone().into(), DEFAULT_BUDGET).unwrap().solvable);

        let hit = merge_clique_instances(&clique_coll(vec![Graph::cycle(5), Graph::complete(3)], 3)).unwrap();
        let w = solve_kclique_bruteforce(&hit.instance.clone().into(), DEFAULT_BUDGET)
            .unwrap()
            .witness
            .unwrap();
        assert_eq!(w, vec![5, 6, 7]);
        assert_eq!(hit.lift(&w).unwrap(), (1, vec![0, 1, 2]));
        assert_eq!(hit.components[1].vertex_offset, Some(5));
    }

    #[test]
    fn merge_rejects_mixed_arity() {
        let mut coll = clique_coll(vec![Graph::complete(3)], 3);
        coll.push(CliqueInstance::new(Graph::complete(2), 2, None).unwrap(), Provenance::default());
        assert!(merge_clique_instances(&coll).is_err());
    }

    #[test]
    fn subsetsum_layers() {
        use crate::solvers::{solve_kclique_bruteforce, DEFAULT_BUDGET};
        let solvable = |xs: &[i64], t: i64| {
            let nums: Vec<BigInt> = xs.iter().map(|&x| BigInt::from(x)).collect();
            let layers = subsetsum_to_edgeweight(&nums, &BigInt::from(t), 2).unwrap();
            assert_eq!(layers.len(), xs.len());
            layers.iter().any(|l| {
                l.instances.instances().any(|g| {
                    solve_kclique_bruteforce(&g.clone().into(), DEFAULT_BUDGET)
                        .unwrap()
                        .solvable
                })
            })
        };
        assert!(solvable(&[3, -5, 7, 2], 4));
        assert!(solvable(&[3, -5, 7, 2], -5));
        assert!(solvable(&[3, -5, 7, 2], 7));
        assert!(!solvable(&[3, -5, 7, 2], 100));
        assert!(!solvable(&[2, 4, 6], 5));
        assert_eq!(subsetsum_dimension(20, 2), 3);
        assert_eq!(subsetsum_dimension(3, 2), 1);
    }

    #[test]
    fn pipeline_parameter_selection() {
        assert_eq!(pipeline_dimension(8), 2);
        assert_eq!(pipeline_dimension(3), 1);
        let p = pipeline_radix(8, 2, 2, &big(50), 2);
        assert_eq!(p, 24);
        assert!(p * p >= 101);
        assert_eq!(carry_targets(&big(60), 2, p, 2).unwrap().s(), 3);
        // small n: formula value is bumped until p^d ≥ kM + 1
        assert_eq!(pipeline_radix(2, 2, 1, &big(100), 1), 201);
    }

    #[test]
    fn pipeline_end_to_end() {
        let yes = KSumInstance::from_i64(2, &[1, 3, 2, 2], 4).unwrap();
        let run = smallksum_to_kclique(&yes, 1, PipelineOptions::default()).unwrap();
        let r = solve_kclique_bruteforce(&run.merged.instance.clone().into(), DEFAULT_BUDGET).unwrap();
        let lifted = run.lift(&r.witness.unwrap()).unwrap();
        assert!(yes.verify(&lifted).unwrap());

        let no = KSumInstance::from_i64(2, &[1, 1, 1, 1], 9).unwrap();
        let run = smallksum_to_kclique(&no, 2, PipelineOptions::default()).unwrap();
        assert!(!solve_kclique_bruteforce(&run.merged.instance.clone().into(), DEFAULT_BUDGET).unwrap().solvable);
    }

    #[test]
    fn pipeline_k1_and_precondition() {
        let one = KSumInstance::from_i64(1, &[5, 7, 7], 7).unwrap();
        let run = smallksum_to_kclique(&one, 2, PipelineOptions::default()).unwrap();
        let r = solve_kclique_bruteforce(&run.merged.instance.clone().into(), DEFAULT_BUDGET).unwrap();
        assert_eq!(run.lift(&r.witness.unwrap()).unwrap(), vec![1]);

        let big_numbers = KSumInstance::from_i64(2, &[1, 100], 101).unwrap();
        let err = smallksum_to_kclique(&big_numbers, 1, PipelineOptions::default()).unwrap_err();
        assert!(err.to_string().contains("modprime"));
    }
}
