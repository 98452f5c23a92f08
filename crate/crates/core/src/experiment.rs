//! Seeded equivalence experiments over chains of registered reductions.
//!
//! A trial generates a source instance, applies every reduction of the chain
//! to every item of the previous stage, and checks that the source is solvable
//! exactly when some final item is. When it is, the first solvable final item's
//! witness is lifted back through every stage and verified on the source.

use std::path::PathBuf;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::backward::{
    clique_to_vectorsum, kclique_to_ksum, lift_ksum_witness_to_clique, lift_vectorsum_witness_to_clique,
    vectorsum_to_ksum, RadixMode,
};
use crate::error::{ensure, Error, Result};
use crate::fieldapps::{
    ksum_to_targetsum, lift_lindep_witness, lindep_to_vectorsum, targetsum_to_ksum, DEFAULT_LINDEP_BUDGET,
};
use crate::forward::{
    edgeweight_to_unweighted, ksum_to_vectorsum, lift_alpha_witness, nodeweight_to_edgeweight,
    pipeline_dimension, pipeline_radix, smallksum_to_kclique, pipeline_components, AlphaDomain, AlphaFamily, MergedClique, PipelineOptions,
    DEFAULT_ITEM_BUDGET,
};
use crate::generate::{
    gen_random_graph, gen_random_ksum, gen_random_lindep, gen_random_targetsum, gen_random_vectorsum, Bias,
    GraphSpec, WeightKind,
};
use crate::instances::{
    parse_instance, serialize_instance, CliqueInstance, Instance, InstanceKind, KSumInstance, LinDepInstance,
    Provenance, ReducedCollection, TargetSumInstance, VectorSumInstance, WeightedGraph, Weights,
};
use crate::modprime::{is_prime_u64, ksum_mod_reduce, lift_mod_witness};
use crate::solvers::solve_named;
use crate::sumfree::SumFreeSource;

/// Knobs shared by every reduction of a chain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChainOptions {
    pub f_exponent: u32,
    pub domain: AlphaDomain,
    pub radix: RadixMode,
    pub sumfree: SumFreeSource,
    /// Confidence parameter of the random-prime reduction.
    pub confidence: u64,
    /// Cap on items produced by one reduction step.
    pub item_budget: u64,
    /// Generate, solve and drop the last stage's items one at a time when the
    /// reduction supports it; the merged pipeline then yields its components.
    pub stream: bool,
    /// Cap on streamed items per trial.
    pub stream_budget: u64,
    /// Keep streaming after the first solvable item, so that item counts
    /// cover the whole last stage.
    pub exhaustive: bool,
}

impl Default for ChainOptions {
    fn default() -> Self {
        ChainOptions {
            f_exponent: 2,
            domain: AlphaDomain::Realized,
            radix: RadixMode::Uniform,
            sumfree: SumFreeSource::default(),
            confidence: 100,
            item_budget: DEFAULT_ITEM_BUDGET as u64,
            stream: true,
            stream_budget: 50_000_000,
            exhaustive: false,
        }
    }
}

type ApplyFn = fn(&Instance, &ChainOptions, u64) -> Result<ReducedCollection<Instance>>;
type LiftFn = fn(&Instance, &ReducedCollection<Instance>, usize, &[usize]) -> Result<Vec<usize>>;
/// Visits reduced items one at a time; provenance is built only on request.
type StreamFn = fn(&Instance, &ChainOptions, &mut dyn FnMut(Instance, &dyn Fn() -> Provenance) -> bool) -> Result<()>;

/// A registered reduction: how to apply it and how to lift a witness of one
/// of its items back to the input.
pub struct Reduction {
    pub name: &'static str,
    pub from: InstanceKind,
    pub to: InstanceKind,
    apply: ApplyFn,
    lift: LiftFn,
    /// Item-at-a-time form, with the lift for a one-item collection of it.
    stream: Option<(StreamFn, LiftFn)>,
}

impl Reduction {
    /// Applies the reduction; `seed` feeds randomized reductions only.
    pub fn apply(&self, inst: &Instance, opts: &ChainOptions, seed: u64) -> Result<ReducedCollection<Instance>> {
        ensure!(
            inst.kind() == self.from,
            Validation,
            "{} expects a {} instance, got {}",
            self.name,
            self.from,
            inst.kind()
        );
        let coll = (self.apply)(inst, opts, seed)?;
        ensure!(
            coll.len() as u64 <= opts.item_budget,
            Resource,
            "{} produced {} items, above the budget {}",
            self.name,
            coll.len(),
            opts.item_budget
        );
        Ok(coll)
    }

    /// Lifts a witness of item `item` and checks it on `source`.
    pub fn lift(
        &self,
        source: &Instance,
        coll: &ReducedCollection<Instance>,
        item: usize,
        witness: &[usize],
    ) -> Result<Vec<usize>> {
        let mut w = (self.lift)(source, coll, item, witness)?;
        w.sort_unstable();
        ensure!(
            source.verify_witness(&w)?,
            Lift,
            "{}: lifted witness {w:?} fails on the source",
            self.name
        );
        Ok(w)
    }

    pub fn streams(&self) -> bool {
        self.stream.is_some()
    }
}

fn mismatch(name: &str, want: &str, got: &Instance) -> Error {
    Error::Validation(format!("{name} expects a {want} instance, got {}", got.kind()))
}

fn ksum<'a>(name: &str, inst: &'a Instance) -> Result<&'a KSumInstance> {
    match inst {
        Instance::KSum(i) => Ok(i),
        _ => Err(mismatch(name, "ksum", inst)),
    }
}

fn vectorsum<'a>(name: &str, inst: &'a Instance) -> Result<&'a VectorSumInstance> {
    match inst {
        Instance::VectorSum(i) => Ok(i),
        _ => Err(mismatch(name, "vectorsum", inst)),
    }
}

fn weighted<'a>(name: &str, inst: &'a Instance) -> Result<&'a WeightedGraph> {
    match inst {
        Instance::Weighted(g) => Ok(g),
        _ => Err(mismatch(name, "weighted graph", inst)),
    }
}

fn clique<'a>(name: &str, inst: &'a Instance) -> Result<&'a CliqueInstance> {
    match inst {
        Instance::Clique(c) => Ok(c),
        _ => Err(mismatch(name, "clique", inst)),
    }
}

fn targetsum<'a>(name: &str, inst: &'a Instance) -> Result<&'a TargetSumInstance> {
    match inst {
        Instance::TargetSum(i) => Ok(i),
        _ => Err(mismatch(name, "targetsum", inst)),
    }
}

fn lindep<'a>(name: &str, inst: &'a Instance) -> Result<&'a LinDepInstance> {
    match inst {
        Instance::LinDep(i) => Ok(i),
        _ => Err(mismatch(name, "lindep", inst)),
    }
}

fn widen<T: Into<Instance>>(coll: ReducedCollection<T>) -> ReducedCollection<Instance> {
    coll.map(Into::into)
}

fn identity(_: &Instance, _: &ReducedCollection<Instance>, _: usize, w: &[usize]) -> Result<Vec<usize>> {
    Ok(w.to_vec())
}

fn item_provenance(coll: &ReducedCollection<Instance>, item: usize) -> Result<(&Instance, &Provenance)> {
    coll.items
        .get(item)
        .map(|(i, p)| (i, p))
        .ok_or_else(|| Error::Lift(format!("item {item} outside the collection")))
}

fn apply_ksum_to_vectorsum(inst: &Instance, opts: &ChainOptions, _: u64) -> Result<ReducedCollection<Instance>> {
    let i = ksum("ksum_to_vectorsum", inst)?;
    let d = pipeline_dimension(i.n());
    let p = pipeline_radix(i.n(), i.k(), opts.f_exponent, i.nonnegative_bound()?, d);
    ksum_to_vectorsum(i, p, d).map(widen)
}

fn apply_nodeweight_to_edgeweight(inst: &Instance, opts: &ChainOptions, _: u64) -> Result<ReducedCollection<Instance>> {
    let g = weighted("nodeweight_to_edgeweight", inst)?;
    let n = g.graph().n();
    let d = pipeline_dimension(n);
    let p = pipeline_radix(n, g.k(), opts.f_exponent, g.weight_bound(), d);
    nodeweight_to_edgeweight(g, p, d).map(widen)
}

fn apply_edgeweight_to_unweighted(inst: &Instance, opts: &ChainOptions, _: u64) -> Result<ReducedCollection<Instance>> {
    let g = weighted("edgeweight_to_unweighted", inst)?;
    edgeweight_to_unweighted(g, opts.domain, opts.item_budget as u128).map(widen)
}

fn lift_alpha(source: &Instance, _: &ReducedCollection<Instance>, _: usize, w: &[usize]) -> Result<Vec<usize>> {
    let g = weighted("edgeweight_to_unweighted", source)?;
    Ok(lift_alpha_witness(w, g.graph().n()))
}

fn stream_alpha(
    inst: &Instance,
    opts: &ChainOptions,
    visit: &mut dyn FnMut(Instance, &dyn Fn() -> Provenance) -> bool,
) -> Result<()> {
    let g = weighted("edgeweight_to_unweighted", inst)?;
    let family = AlphaFamily::new(g, opts.domain)?;
    family.for_each_alpha(|alpha| {
        visit(family.graph_for(alpha).into(), &|| Provenance {
            alpha: Some(alpha.to_provenance(g.k())),
            ..Default::default()
        })
    });
    Ok(())
}

fn stream_components(
    inst: &Instance,
    opts: &ChainOptions,
    visit: &mut dyn FnMut(Instance, &dyn Fn() -> Provenance) -> bool,
) -> Result<()> {
    let i = ksum("smallksum_to_kclique", inst)?;
    pipeline_components(i, opts.f_exponent, opts.domain, &mut |g, prov| visit(g.into(), prov))?;
    Ok(())
}

fn lift_component(source: &Instance, coll: &ReducedCollection<Instance>, item: usize, w: &[usize]) -> Result<Vec<usize>> {
    let src = ksum("smallksum_to_kclique", source)?;
    let (_, prov) = item_provenance(coll, item)?;
    decode_component(prov, src.n(), w)
}

fn decode_component(prov: &Provenance, n: usize, local: &[usize]) -> Result<Vec<usize>> {
    match &prov.vertex_codes {
        Some(codes) => local
            .iter()
            .map(|&v| {
                codes
                    .get(v)
                    .and_then(|c| c.parse().ok())
                    .ok_or_else(|| Error::Lift(format!("vertex {v} has no usable code")))
            })
            .collect(),
        None => Ok(lift_alpha_witness(local, n)),
    }
}

fn apply_smallksum_to_kclique(inst: &Instance, opts: &ChainOptions, _: u64) -> Result<ReducedCollection<Instance>> {
    let i = ksum("smallksum_to_kclique", inst)?;
    let pipe = smallksum_to_kclique(
        i,
        opts.f_exponent,
        PipelineOptions {
            domain: opts.domain,
            ..Default::default()
        },
    )?;
    let pp = &pipe.params;
    let mut coll = ReducedCollection::new(
        "smallksum_to_kclique",
        inst,
        json!({
            "d": pp.d,
            "p": pp.p,
            "s": pp.s,
            "s_feasible": pp.s_feasible,
            "g": pp.g,
            "components": pipe.merged.components,
        }),
    );
    coll.push(pipe.merged.instance.into(), Provenance::default());
    Ok(coll)
}

fn lift_smallksum(source: &Instance, coll: &ReducedCollection<Instance>, item: usize, w: &[usize]) -> Result<Vec<usize>> {
    let src = ksum("smallksum_to_kclique", source)?;
    let (merged, _) = item_provenance(coll, item)?;
    let components: Vec<Provenance> = serde_json::from_value(coll.params["components"].clone())
        .map_err(|e| Error::Lift(format!("bad component records: {e}")))?;
    let merged = MergedClique {
        instance: clique("smallksum_to_kclique", merged)?.clone(),
        components,
    };
    let (comp, local) = merged.lift(w)?;
    decode_component(&merged.components[comp], src.n(), &local)
}

fn apply_clique_to_vectorsum(inst: &Instance, opts: &ChainOptions, _: u64) -> Result<ReducedCollection<Instance>> {
    clique_to_vectorsum(clique("clique_to_vectorsum", inst)?, opts.sumfree).map(widen)
}

fn lift_clique_to_vectorsum(source: &Instance, coll: &ReducedCollection<Instance>, item: usize, w: &[usize]) -> Result<Vec<usize>> {
    let (reduced, prov) = item_provenance(coll, item)?;
    lift_vectorsum_witness_to_clique(
        clique("clique_to_vectorsum", source)?,
        vectorsum("clique_to_vectorsum", reduced)?,
        prov,
        w,
    )
}

fn apply_vectorsum_to_ksum(inst: &Instance, _: &ChainOptions, _: u64) -> Result<ReducedCollection<Instance>> {
    vectorsum_to_ksum(vectorsum("vectorsum_to_ksum", inst)?).map(widen)
}

fn apply_kclique_to_ksum(inst: &Instance, opts: &ChainOptions, _: u64) -> Result<ReducedCollection<Instance>> {
    kclique_to_ksum(clique("kclique_to_ksum", inst)?, opts.radix, opts.sumfree).map(widen)
}

fn lift_kclique_to_ksum(source: &Instance, coll: &ReducedCollection<Instance>, item: usize, w: &[usize]) -> Result<Vec<usize>> {
    let (reduced, prov) = item_provenance(coll, item)?;
    lift_ksum_witness_to_clique(
        clique("kclique_to_ksum", source)?,
        ksum("kclique_to_ksum", reduced)?,
        prov,
        w,
    )
}

fn apply_ksum_mod_reduce(inst: &Instance, opts: &ChainOptions, seed: u64) -> Result<ReducedCollection<Instance>> {
    ksum_mod_reduce(ksum("ksum_mod_reduce", inst)?, opts.confidence, seed).map(|(c, _)| widen(c))
}

fn lift_ksum_mod(source: &Instance, _: &ReducedCollection<Instance>, _: usize, w: &[usize]) -> Result<Vec<usize>> {
    lift_mod_witness(ksum("ksum_mod_reduce", source)?, w)
}

fn apply_targetsum_to_ksum(inst: &Instance, _: &ChainOptions, _: u64) -> Result<ReducedCollection<Instance>> {
    targetsum_to_ksum(targetsum("targetsum_to_ksum", inst)?).map(widen)
}

fn apply_ksum_to_targetsum(inst: &Instance, _: &ChainOptions, _: u64) -> Result<ReducedCollection<Instance>> {
    ksum_to_targetsum(ksum("ksum_to_targetsum", inst)?).map(widen)
}

fn apply_lindep_to_vectorsum(inst: &Instance, _: &ChainOptions, _: u64) -> Result<ReducedCollection<Instance>> {
    lindep_to_vectorsum(lindep("lindep_to_vectorsum", inst)?, DEFAULT_LINDEP_BUDGET).map(widen)
}

fn lift_lindep(source: &Instance, coll: &ReducedCollection<Instance>, item: usize, w: &[usize]) -> Result<Vec<usize>> {
    let (reduced, prov) = item_provenance(coll, item)?;
    lift_lindep_witness(
        lindep("lindep_to_vectorsum", source)?,
        vectorsum("lindep_to_vectorsum", reduced)?,
        prov,
        w,
    )
}

static CATALOG: &[Reduction] = &[
    Reduction {
        name: "ksum_to_vectorsum",
        from: InstanceKind::KSum,
        to: InstanceKind::VectorSum,
        apply: apply_ksum_to_vectorsum,
        lift: identity,
        stream: None,
    },
    Reduction {
        name: "nodeweight_to_edgeweight",
        from: InstanceKind::NodeWeighted,
        to: InstanceKind::EdgeWeighted,
        apply: apply_nodeweight_to_edgeweight,
        lift: identity,
        stream: None,
    },
    Reduction {
        name: "edgeweight_to_unweighted",
        from: InstanceKind::EdgeWeighted,
        to: InstanceKind::Clique,
        apply: apply_edgeweight_to_unweighted,
        lift: lift_alpha,
        stream: Some((stream_alpha, lift_alpha)),
    },
    Reduction {
        name: "smallksum_to_kclique",
        from: InstanceKind::KSum,
        to: InstanceKind::Clique,
        apply: apply_smallksum_to_kclique,
        lift: lift_smallksum,
        stream: Some((stream_components, lift_component)),
    },
    Reduction {
        name: "clique_to_vectorsum",
        from: InstanceKind::Clique,
        to: InstanceKind::VectorSum,
        apply: apply_clique_to_vectorsum,
        lift: lift_clique_to_vectorsum,
        stream: None,
    },
    Reduction {
        name: "vectorsum_to_ksum",
        from: InstanceKind::VectorSum,
        to: InstanceKind::KSum,
        apply: apply_vectorsum_to_ksum,
        lift: identity,
        stream: None,
    },
    Reduction {
        name: "kclique_to_ksum",
        from: InstanceKind::Clique,
        to: InstanceKind::KSum,
        apply: apply_kclique_to_ksum,
        lift: lift_kclique_to_ksum,
        stream: None,
    },
    Reduction {
        name: "ksum_mod_reduce",
        from: InstanceKind::KSum,
        to: InstanceKind::KSum,
        apply: apply_ksum_mod_reduce,
        lift: lift_ksum_mod,
        stream: None,
    },
    Reduction {
        name: "targetsum_to_ksum",
        from: InstanceKind::TargetSum,
        to: InstanceKind::KSum,
        apply: apply_targetsum_to_ksum,
        lift: identity,
        stream: None,
    },
    Reduction {
        name: "ksum_to_targetsum",
        from: InstanceKind::KSum,
        to: InstanceKind::TargetSum,
        apply: apply_ksum_to_targetsum,
        lift: identity,
        stream: None,
    },
    Reduction {
        name: "lindep_to_vectorsum",
        from: InstanceKind::LinDep,
        to: InstanceKind::VectorSum,
        apply: apply_lindep_to_vectorsum,
        lift: lift_lindep,
        stream: None,
    },
];

/// Every registered reduction, in a fixed order.
pub fn catalog() -> &'static [Reduction] {
    CATALOG
}

pub fn find_reduction(name: &str) -> Result<&'static Reduction> {
    CATALOG.iter().find(|r| r.name == name).ok_or_else(|| {
        let names: Vec<_> = CATALOG.iter().map(|r| r.name).collect();
        Error::Parameter(format!("unknown reduction {name}; expected one of {}", names.join(", ")))
    })
}

/// Resolves a chain and checks that consecutive stages fit together.
pub fn resolve_chain(names: &[String]) -> Result<Vec<&'static Reduction>> {
    let chain: Vec<_> = names.iter().map(|n| find_reduction(n)).collect::<Result<_>>()?;
    for pair in chain.windows(2) {
        ensure!(
            pair[0].to == pair[1].from,
            Parameter,
            "{} produces {} but {} expects {}",
            pair[0].name,
            pair[0].to,
            pair[1].name,
            pair[1].from
        );
    }
    Ok(chain)
}

fn default_oracle() -> String {
    "brute".into()
}

fn default_prob() -> f64 {
    0.5
}

/// Experiment description, read from JSON.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub trials: usize,
    pub seed: u64,
    /// Inclusive range of `n` (numbers, vertices or elements).
    pub n: [usize; 2],
    /// Inclusive range of `k`; clamped to `n`.
    pub k: [usize; 2],
    /// Inclusive range of the magnitude bound `M`.
    pub m: [u64; 2],
    pub chain: Vec<String>,
    /// Solver for the source instance; reduced items use `exact`.
    #[serde(default = "default_oracle")]
    pub oracle: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<PathBuf>,
    /// Source type; defaults to the first reduction's input, or `ksum`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    #[serde(default = "default_prob")]
    pub edge_prob: f64,
    /// Probability that a trial plants a solution.
    #[serde(default = "default_prob")]
    pub plant_rate: f64,
    /// Dimension range of generated vector instances.
    #[serde(default = "default_dim")]
    pub dim: [usize; 2],
    /// Range the modulus of field instances is drawn from (primes only).
    #[serde(default = "default_q")]
    pub q: [u64; 2],
    #[serde(default)]
    pub options: ChainOptions,
}

fn default_dim() -> [usize; 2] {
    [1, 3]
}

fn default_q() -> [u64; 2] {
    [2, 17]
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig =
            serde_json::from_str(text).map_err(|e| Error::Parameter(format!("bad experiment config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        ensure!(self.trials >= 1, Parameter, "trials must be at least 1");
        for (name, r) in [("n", self.n), ("k", self.k), ("dim", self.dim)] {
            ensure!(r[0] <= r[1], Parameter, "empty {name} range {r:?}");
        }
        ensure!(self.m[0] <= self.m[1], Parameter, "empty M range");
        ensure!(self.k[0] >= 1, Parameter, "k must be at least 1");
        ensure!((0.0..=1.0).contains(&self.edge_prob), Parameter, "edge_prob outside [0, 1]");
        ensure!((0.0..=1.0).contains(&self.plant_rate), Parameter, "plant_rate outside [0, 1]");
        let chain = resolve_chain(&self.chain)?;
        let kind = self.source_kind()?;
        if let Some(first) = chain.first() {
            ensure!(
                first.from == kind,
                Parameter,
                "source type {kind} does not match {} input {}",
                first.name,
                first.from
            );
        }
        if matches!(kind, InstanceKind::TargetSum | InstanceKind::LinDep) {
            ensure!(
                (self.q[0]..=self.q[1]).any(is_prime_u64),
                Parameter,
                "no prime in q range {:?}",
                self.q
            );
        }
        Ok(())
    }

    pub fn source_kind(&self) -> Result<InstanceKind> {
        match &self.source {
            Some(name) => {
                InstanceKind::from_name(name).ok_or_else(|| Error::Parameter(format!("unknown source type {name}")))
            }
            None => Ok(self
                .chain
                .first()
                .and_then(|n| find_reduction(n).ok())
                .map(|r| r.from)
                .unwrap_or(InstanceKind::KSum)),
        }
    }
}

/// Seed of trial `i`: first output of ChaCha20 stream `i` under the run seed.
pub fn trial_seed(seed: u64, trial: usize) -> u64 {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng.next_u64()
}

fn stage_seed(trial_seed: u64, stage: usize) -> u64 {
    trial_seed ^ (stage as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Draws the source instance of one trial.
pub fn generate_source(cfg: &ExperimentConfig, seed: u64) -> Result<Instance> {
    let kind = cfg.source_kind()?;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let n = rng.gen_range(cfg.n[0]..=cfg.n[1]);
    let k = rng.gen_range(cfg.k[0]..=cfg.k[1]).min(n.max(1));
    let mut m = rng.gen_range(cfg.m[0]..=cfg.m[1]);
    let bias = if rng.gen_bool(cfg.plant_rate) {
        Bias::Plant
    } else {
        Bias::None
    };
    let sub = rng.gen::<u64>();
    if cfg.chain.first().map(String::as_str) == Some("smallksum_to_kclique") {
        // the pipeline only accepts numbers up to n^f
        let cap = (n as u64).saturating_pow(cfg.options.f_exponent);
        m = m.min(cap);
    }
    let graph = |weights| GraphSpec {
        n,
        edge_prob: cfg.edge_prob,
        k,
        plant_clique: bias == Bias::Plant,
        weights,
        max_weight: m,
    };
    let prime = |rng: &mut ChaCha20Rng| {
        let primes: Vec<u64> = (cfg.q[0]..=cfg.q[1]).filter(|&q| is_prime_u64(q)).collect();
        primes[rng.gen_range(0..primes.len())]
    };
    Ok(match kind {
        InstanceKind::KSum => gen_random_ksum(n, k, m, bias, sub)?.into(),
        InstanceKind::VectorSum => {
            let dim = rng.gen_range(cfg.dim[0]..=cfg.dim[1]);
            gen_random_vectorsum(n, k, dim, m, bias, sub)?.into()
        }
        InstanceKind::NodeWeighted => gen_random_graph(&graph(WeightKind::Node), sub)?,
        InstanceKind::EdgeWeighted => gen_random_graph(&graph(WeightKind::Edge), sub)?,
        InstanceKind::Clique => gen_random_graph(&graph(WeightKind::None), sub)?,
        InstanceKind::TargetSum => {
            let q = prime(&mut rng);
            gen_random_targetsum(q, n, k, bias, sub)?.into()
        }
        InstanceKind::LinDep => {
            let q = prime(&mut rng);
            let len = rng.gen_range(cfg.dim[0]..=cfg.dim[1]).max(1);
            gen_random_lindep(q, n, len, k, bias, sub)?.into()
        }
    })
}

/// Largest absolute number, entry or weight carried by an instance.
pub fn magnitude(inst: &Instance) -> BigInt {
    let max_abs = |xs: &mut dyn Iterator<Item = &BigInt>| xs.map(|x| x.abs()).max().unwrap_or_else(BigInt::zero);
    match inst {
        Instance::KSum(i) => max_abs(&mut i.numbers().iter()),
        Instance::VectorSum(i) => max_abs(&mut i.vectors().iter().flatten()),
        Instance::Weighted(g) => match g.weights() {
            Weights::Node(w) | Weights::Edge(w) => max_abs(&mut w.iter()),
        },
        Instance::Clique(_) => BigInt::zero(),
        Instance::TargetSum(i) => BigInt::from(i.q() - 1),
        Instance::LinDep(i) => BigInt::from(i.q() - 1),
    }
}

/// Result of one trial.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialOutcome {
    pub trial: usize,
    pub trial_seed: u64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub source_solvable: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reduced_solvable: Option<bool>,
    /// Whether a witness was lifted and verified (solvable trials only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lifted: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
    /// Items per stage, in chain order. A streamed last stage counts the
    /// items visited before the first solvable one unless `exhaustive` is set.
    pub stage_items: Vec<usize>,
    /// Largest magnitude per stage, as decimal strings.
    pub stage_magnitude: Vec<String>,
}

struct Node {
    inst: Instance,
    parent: usize,
    coll: usize,
    item: usize,
}

/// Applies a chain to `source` and checks solvability and witness lifting.
pub fn run_trial(
    source: &Instance,
    chain: &[&Reduction],
    oracle: &str,
    opts: &ChainOptions,
    trial: usize,
    seed: u64,
) -> TrialOutcome {
    let mut out = TrialOutcome {
        trial,
        trial_seed: seed,
        pass: false,
        source_solvable: None,
        reduced_solvable: None,
        lifted: None,
        failure: None,
        stage_items: Vec::new(),
        stage_magnitude: Vec::new(),
    };
    if let Err(e) = trial_body(source, chain, oracle, opts, &mut out) {
        out.pass = false;
        out.failure = Some(e.to_string());
    }
    out
}

fn trial_body(
    source: &Instance,
    chain: &[&Reduction],
    oracle: &str,
    opts: &ChainOptions,
    out: &mut TrialOutcome,
) -> Result<()> {
    let expected = solve_named(oracle, source)?.solvable;
    out.source_solvable = Some(expected);

    let streamed = opts.stream && chain.last().is_some_and(|r| r.streams());
    let materialized = chain.len() - usize::from(streamed);
    let mut stages: Vec<Vec<Node>> = Vec::with_capacity(chain.len());
    let mut colls: Vec<Vec<ReducedCollection<Instance>>> = Vec::with_capacity(chain.len());
    for (s, red) in chain[..materialized].iter().enumerate() {
        let inputs: Vec<&Instance> = match stages.last() {
            Some(prev) => prev.iter().map(|node| &node.inst).collect(),
            None => vec![source],
        };
        let mut nodes = Vec::new();
        let mut stage_colls = Vec::with_capacity(inputs.len());
        for (parent, inst) in inputs.into_iter().enumerate() {
            let coll = red.apply(inst, opts, stage_seed(out.trial_seed, s))?;
            for (item, (inst, _)) in coll.items.iter().enumerate() {
                nodes.push(Node {
                    inst: inst.clone(),
                    parent,
                    coll: stage_colls.len(),
                    item,
                });
            }
            stage_colls.push(coll);
            ensure!(
                nodes.len() as u64 <= opts.item_budget,
                Resource,
                "stage {s} holds more than {} items",
                opts.item_budget
            );
        }
        out.stage_items.push(nodes.len());
        let mag = nodes.iter().map(|n| magnitude(&n.inst)).max().unwrap_or_else(BigInt::zero);
        out.stage_magnitude.push(mag.to_string());
        stages.push(nodes);
        colls.push(stage_colls);
    }

    let inputs: Vec<&Instance> = match stages.last() {
        Some(last) => last.iter().map(|n| &n.inst).collect(),
        None => vec![source],
    };
    // (index into `inputs`, streamed item if any, witness)
    let mut hit: Option<(usize, Option<(Instance, Provenance)>, Vec<usize>)> = None;
    if streamed {
        let (stream, _) = chain[materialized].stream.expect("streaming reduction");
        let mut count = 0u64;
        let mut mag = BigInt::zero();
        let mut failure: Option<Error> = None;
        for (parent, inst) in inputs.iter().enumerate() {
            stream(inst, opts, &mut |item, prov| {
                count += 1;
                if count > opts.stream_budget {
                    failure = Some(Error::Resource(format!(
                        "more than {} streamed items",
                        opts.stream_budget
                    )));
                    return false;
                }
                mag = mag.clone().max(magnitude(&item));
                if hit.is_none() {
                    match solve_named("exact", &item) {
                        Ok(r) => {
                            if let Some(w) = r.witness {
                                hit = Some((parent, Some((item, prov())), w));
                                return opts.exhaustive;
                            }
                        }
                        Err(e) => {
                            failure = Some(e);
                            return false;
                        }
                    }
                }
                true
            })?;
            if let Some(e) = failure {
                return Err(e);
            }
            if hit.is_some() && !opts.exhaustive {
                break;
            }
        }
        out.stage_items.push(count as usize);
        out.stage_magnitude.push(mag.to_string());
    } else {
        for (idx, inst) in inputs.iter().enumerate() {
            if let Some(w) = solve_named("exact", inst)?.witness {
                hit = Some((idx, None, w));
                break;
            }
        }
    }
    out.reduced_solvable = Some(hit.is_some());
    if hit.is_some() != expected {
        out.failure = Some(format!(
            "source solvable = {expected}, reduced solvable = {}",
            hit.is_some()
        ));
        return Ok(());
    }
    if let Some((mut idx, item, mut w)) = hit {
        if let Some((inst, prov)) = item {
            let red = chain[materialized];
            let parent = inputs[idx];
            let mut one = ReducedCollection::new(red.name, parent, json!({}));
            one.push(inst, prov);
            let (_, lift) = red.stream.expect("streaming reduction");
            let mut lifted = lift(parent, &one, 0, &w)?;
            lifted.sort_unstable();
            ensure!(
                parent.verify_witness(&lifted)?,
                Lift,
                "{}: lifted witness {lifted:?} fails on the source",
                red.name
            );
            w = lifted;
        }
        for s in (0..materialized).rev() {
            let node = &stages[s][idx];
            let parent = if s == 0 { source } else { &stages[s - 1][node.parent].inst };
            w = chain[s].lift(parent, &colls[s][node.coll], node.item, &w)?;
            idx = node.parent;
        }
        ensure!(source.verify_witness(&w)?, Lift, "lifted witness {w:?} fails on the source");
        out.lifted = Some(true);
    }
    out.pass = true;
    Ok(())
}

/// Everything needed to replay one failed trial.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReproBundle {
    pub trial: usize,
    pub trial_seed: u64,
    pub chain: Vec<String>,
    pub oracle: String,
    pub options: ChainOptions,
    /// Source instance in the text format.
    pub source: String,
    pub failure: String,
}

impl ReproBundle {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parameter(format!("bad repro bundle: {e}")))
    }

    /// Re-runs the recorded trial.
    pub fn replay(&self) -> Result<TrialOutcome> {
        let chain = resolve_chain(&self.chain)?;
        let source = parse_instance(&self.source)?;
        Ok(run_trial(&source, &chain, &self.oracle, &self.options, self.trial, self.trial_seed))
    }
}

/// Aggregate over the trials touching one stage of the chain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageSummary {
    pub reduction: String,
    pub items_min: usize,
    pub items_max: usize,
    pub items_total: u64,
    pub max_magnitude: String,
}

/// Deterministic experiment report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub trials: usize,
    pub passes: usize,
    pub failures: usize,
    pub solvable_sources: usize,
    pub lifted_witnesses: usize,
    pub stages: Vec<StageSummary>,
    pub failed: Vec<ReproBundle>,
}

impl ExperimentReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Runs every trial (in parallel, merged in trial order) and writes the report
/// to `cfg.report` when set.
pub fn run_equivalence_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    let chain = resolve_chain(&cfg.chain)?;
    let results: Vec<(TrialOutcome, Option<Instance>)> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let seed = trial_seed(cfg.seed, t);
            match generate_source(cfg, seed) {
                Ok(src) => (run_trial(&src, &chain, &cfg.oracle, &cfg.options, t, seed), Some(src)),
                Err(e) => (
                    TrialOutcome {
                        trial: t,
                        trial_seed: seed,
                        pass: false,
                        source_solvable: None,
                        reduced_solvable: None,
                        lifted: None,
                        failure: Some(format!("generation failed: {e}")),
                        stage_items: Vec::new(),
                        stage_magnitude: Vec::new(),
                    },
                    None,
                ),
            }
        })
        .collect();

    let mut stages: Vec<StageSummary> = chain
        .iter()
        .map(|r| StageSummary {
            reduction: r.name.to_string(),
            items_min: usize::MAX,
            items_max: 0,
            items_total: 0,
            max_magnitude: "0".into(),
        })
        .collect();
    let mut stage_mag = vec![BigInt::zero(); chain.len()];
    let mut failed = Vec::new();
    for (o, src) in &results {
        for (s, &count) in o.stage_items.iter().enumerate() {
            let st = &mut stages[s];
            st.items_min = st.items_min.min(count);
            st.items_max = st.items_max.max(count);
            st.items_total += count as u64;
            let mag: BigInt = o.stage_magnitude[s].parse().expect("decimal");
            stage_mag[s] = stage_mag[s].clone().max(mag);
        }
        if !o.pass {
            failed.push(ReproBundle {
                trial: o.trial,
                trial_seed: o.trial_seed,
                chain: cfg.chain.clone(),
                oracle: cfg.oracle.clone(),
                options: cfg.options.clone(),
                source: src.as_ref().map(serialize_instance).unwrap_or_default(),
                failure: o.failure.clone().unwrap_or_default(),
            });
        }
    }
    for (st, mag) in stages.iter_mut().zip(stage_mag) {
        if st.items_min == usize::MAX {
            st.items_min = 0;
        }
        st.max_magnitude = mag.to_string();
    }
    let report = ExperimentReport {
        // the output location is not part of the result
        config: ExperimentConfig {
            report: None,
            ..cfg.clone()
        },
        trials: cfg.trials,
        passes: results.iter().filter(|(o, _)| o.pass).count(),
        failures: failed.len(),
        solvable_sources: results.iter().filter(|(o, _)| o.source_solvable == Some(true)).count(),
        lifted_witnesses: results.iter().filter(|(o, _)| o.lifted == Some(true)).count(),
        stages,
        failed,
    };
    if let Some(path) = &cfg.report {
        std::fs::write(path, report.to_json())?;
    }
    Ok(report)
}
