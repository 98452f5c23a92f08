use fptsum::forward::{
    base_p_digits, carry_targets, clique_weight_identity, count_alpha_tuples, edge_weight_bound, edgeweight_to_unweighted,
    ksum_to_vectorsum, lift_alpha_witness, map_f, merge_clique_instances, nodeweight_to_edgeweight, pipeline_dimension,
    pipeline_radix, smallksum_to_kclique, AlphaDomain, AlphaFamily, PipelineOptions, DEFAULT_ITEM_BUDGET,
};
use fptsum::instances::{CliqueInstance, Graph, Instance, KSumInstance, ReducedCollection, WeightedGraph};
use fptsum::solvers::{solve_kclique_bruteforce, solve_ksum_bruteforce, solve_vectorsum_bruteforce, DEFAULT_BUDGET};
use num_bigint::BigInt;
use proptest::prelude::*;
use serde_json::json;

fn big(x: i64) -> BigInt {
    BigInt::from(x)
}

#[test]
fn digit_decomposition() {
    assert_eq!(base_p_digits(&big(0), 3, 2).unwrap(), vec![0, 0]);
    assert_eq!(base_p_digits(&big(5), 3, 2).unwrap(), vec![2, 1]);
    assert_eq!(base_p_digits(&big(8), 3, 2).unwrap(), vec![2, 2]);
    assert!(base_p_digits(&big(9), 3, 2).is_err());
}

#[test]
fn carry_target_examples() {
    let ctx = carry_targets(&big(4), 2, 3, 2).unwrap();
    assert_eq!(ctx.s(), 3);
    assert_eq!(ctx.targets, vec![vec![1, 1], vec![4, 0], vec![7, -1]]);
    // every target recomposes to t in base p
    for t in &ctx.targets {
        assert_eq!(t[0] + 3 * t[1], 4);
    }
    let single = carry_targets(&big(0), 2, 3, 1).unwrap();
    assert_eq!(single.targets, vec![vec![0]]);
}

#[test]
fn carry_count_is_k_plus_one_to_d_minus_one() {
    for k in 2..=4usize {
        for d in 1..=4usize {
            let ctx = carry_targets(&big(7), k, 11, d).unwrap();
            assert_eq!(ctx.s(), (k + 1).pow(d as u32 - 1));
        }
    }
}

#[test]
fn map_f_examples() {
    assert_eq!(map_f(&big(1), &[1, 1], 2, 3).unwrap(), vec![1, -1]);
    assert_eq!(map_f(&big(3), &[1, 1], 2, 3).unwrap(), vec![-1, 1]);
    assert_eq!(map_f(&big(0), &[0, 0, 0], 4, 5).unwrap(), vec![0, 0, 0]);
}

#[test]
fn vectorsum_split_example() {
    let inst = KSumInstance::from_i64(2, &[1, 3, 2, 2], 4).unwrap();
    let coll = ksum_to_vectorsum(&inst, 3, 2).unwrap();
    assert_eq!(coll.len(), 2);
    assert_eq!(coll.params["skipped"], json!([2]));
    let (first, _) = &coll.items[0];
    let (second, _) = &coll.items[1];
    assert_eq!(first.target(), &[big(1), big(1)]);
    assert_eq!(second.target(), &[big(4), big(0)]);
    assert!(first.verify(&[0, 1]).unwrap());
    assert!(!first.verify(&[2, 3]).unwrap());
    assert!(second.verify(&[2, 3]).unwrap());

    let zero = KSumInstance::from_i64(2, &[0, 0], 0).unwrap();
    let coll = ksum_to_vectorsum(&zero, 3, 1).unwrap();
    assert_eq!(coll.len(), 1);
    assert!(coll.items[0].0.verify(&[0, 1]).unwrap());
}

proptest! {
    #[test]
    fn vectorsum_split_is_equivalent(
        numbers in prop::collection::vec(0i64..=40, 2..=8),
        k in 2usize..=3,
        target in 0i64..=120,
        d in 1usize..=3,
    ) {
        prop_assume!(k <= numbers.len() && target <= 40 * k as i64);
        let inst = KSumInstance::new(
            k,
            numbers.iter().map(|&x| big(x)).collect(),
            Some(fptsum::instances::Range::upto(40).unwrap()),
            big(target),
        ).unwrap();
        let mut p = k as u64 + 1;
        while (p as u128).pow(d as u32) < 40 * k as u128 + 1 {
            p += 1;
        }
        let coll = ksum_to_vectorsum(&inst, p, d).unwrap();
        prop_assert!(coll.len() <= (k + 1).pow(d as u32 - 1));
        let reduced = coll
            .items
            .iter()
            .any(|(v, _)| solve_vectorsum_bruteforce(v, DEFAULT_BUDGET).unwrap().solvable);
        prop_assert_eq!(reduced, solve_ksum_bruteforce(&inst, DEFAULT_BUDGET).unwrap().solvable);
    }

    #[test]
    fn squaring_identity(
        vectors in prop::collection::vec(prop::collection::vec(-50i128..50, 3), 2..=5),
    ) {
        let k = vectors.len();
        let (pairwise, squared) = clique_weight_identity(&vectors, k);
        prop_assert_eq!(pairwise, squared);
    }
}

#[test]
fn squaring_trick_single_edge() {
    let g = WeightedGraph::new(
        Graph::new(2, [(0, 1)]).unwrap(),
        2,
        fptsum::instances::Weights::Node(vec![big(1), big(3)]),
        Some(big(3)),
        big(4),
    )
    .unwrap();
    let coll = nodeweight_to_edgeweight(&g, 3, 2).unwrap();
    let (first, prov) = &coll.items[0];
    assert_eq!(prov.gamma.as_deref(), Some(&[0u32][..]));
    assert_eq!(first.edge_weights().unwrap(), &[big(0)]);
    assert!(first.verify(&[0, 1]).unwrap());
    assert_eq!(first.weight_bound(), &edge_weight_bound(2, 2, 3));
    assert_eq!(edge_weight_bound(2, 2, 3), big(2 * 8 * 2 * 9));
}

#[test]
fn squaring_trick_zero_images() {
    // all node weights equal the target digits divided by k: f-images vanish
    let g = WeightedGraph::new(
        Graph::complete(4),
        2,
        fptsum::instances::Weights::Node(vec![big(4); 4]),
        Some(big(4)),
        big(8),
    )
    .unwrap();
    let coll = nodeweight_to_edgeweight(&g, 9, 1).unwrap();
    assert!(coll.items[0].0.edge_weights().unwrap().iter().all(|w| w == &big(0)));
}

#[test]
fn alpha_tuple_counts() {
    assert_eq!(count_alpha_tuples(3, 1), 7);
    assert_eq!(count_alpha_tuples(1, 9), 1);
    for m in 0..6u64 {
        // closed form for triples: 3m² + 3m + 1
        assert_eq!(count_alpha_tuples(3, m), (3 * m * m + 3 * m + 1) as u128);
    }
}

fn triangle(weights: [i64; 3]) -> WeightedGraph {
    WeightedGraph::new(
        Graph::complete(3),
        3,
        fptsum::instances::Weights::Edge(weights.iter().map(|&w| big(w)).collect()),
        Some(big(1)),
        big(0),
    )
    .unwrap()
}

#[test]
fn alpha_family_on_a_triangle() {
    let g = triangle([1, -1, 0]);
    let full = AlphaFamily::new(&g, AlphaDomain::Full).unwrap();
    assert_eq!(full.count(), 7);
    let coll = edgeweight_to_unweighted(&g, AlphaDomain::Full, DEFAULT_ITEM_BUDGET).unwrap();
    assert_eq!(coll.len(), 7);
    let mut hits = 0;
    for (c, prov) in &coll.items {
        assert_eq!(c.graph().n(), 9);
        let report = solve_kclique_bruteforce(&Instance::Clique(c.clone()), DEFAULT_BUDGET).unwrap();
        if let Some(w) = report.witness {
            hits += 1;
            let alpha = prov.alpha.as_ref().unwrap();
            let values: Vec<&str> = alpha.iter().map(|(_, _, v)| v.as_str()).collect();
            assert_eq!(values, ["1", "-1", "0"]);
            assert_eq!(lift_alpha_witness(&w, 3), vec![0, 1, 2]);
        }
    }
    assert_eq!(hits, 1);
    let realized = AlphaFamily::new(&g, AlphaDomain::Realized).unwrap();
    assert!(realized.count() <= full.count());
}

#[test]
fn edgeless_alpha_graphs_have_no_cliques() {
    let g = WeightedGraph::new(
        Graph::empty(4),
        3,
        fptsum::instances::Weights::Edge(Vec::new()),
        Some(big(2)),
        big(0),
    )
    .unwrap();
    let coll = edgeweight_to_unweighted(&g, AlphaDomain::Full, DEFAULT_ITEM_BUDGET).unwrap();
    assert_eq!(coll.len() as u128, count_alpha_tuples(3, 2));
    assert!(coll.items.iter().all(|(c, _)| c.graph().m() == 0));
}

fn clique_collection(graphs: Vec<CliqueInstance>) -> ReducedCollection<CliqueInstance> {
    let src: Instance = graphs[0].clone().into();
    let mut coll = ReducedCollection::new("test", &src, json!({}));
    for g in graphs {
        coll.push(g, Default::default());
    }
    coll
}

#[test]
fn merging_components() {
    let k3 = CliqueInstance::new(Graph::complete(3), 3, None).unwrap();
    let c5 = CliqueInstance::new(Graph::cycle(5), 3, None).unwrap();
    let c4 = CliqueInstance::new(Graph::cycle(4), 3, None).unwrap();

    let one = merge_clique_instances(&clique_collection(vec![c5.clone()])).unwrap();
    assert_eq!(one.instance.graph(), c5.graph());

    let free = merge_clique_instances(&clique_collection(vec![c5.clone(), c4])).unwrap();
    assert!(!solve_kclique_bruteforce(&Instance::Clique(free.instance), DEFAULT_BUDGET).unwrap().solvable);

    let mixed = merge_clique_instances(&clique_collection(vec![c5, k3])).unwrap();
    let w = solve_kclique_bruteforce(&Instance::Clique(mixed.instance.clone()), DEFAULT_BUDGET)
        .unwrap()
        .witness
        .unwrap();
    assert_eq!(w, vec![5, 6, 7]);
    assert_eq!(mixed.lift(&w).unwrap(), (1, vec![0, 1, 2]));
}

#[test]
fn pipeline_parameter_example() {
    assert_eq!(pipeline_dimension(8), 2);
    let p = pipeline_radix(8, 2, 2, &big(50), 2);
    assert_eq!(p, 24);
    assert!(p * p >= 101);
    assert_eq!(carry_targets(&big(77), 2, p, 2).unwrap().s(), 3);
}

#[test]
fn pipeline_end_to_end() {
    let yes = KSumInstance::from_i64(2, &[1, 3, 2, 2], 4).unwrap();
    let pipe = smallksum_to_kclique(&yes, 2, PipelineOptions::default()).unwrap();
    let merged = Instance::Clique(pipe.merged.instance.clone());
    let w = solve_kclique_bruteforce(&merged, DEFAULT_BUDGET).unwrap().witness.unwrap();
    let lifted = pipe.lift(&w).unwrap();
    assert!(yes.verify(&lifted).unwrap());

    let no = KSumInstance::from_i64(2, &[1, 1, 1, 1], 9).unwrap();
    let pipe = smallksum_to_kclique(&no, 2, PipelineOptions::default()).unwrap();
    let merged = Instance::Clique(pipe.merged.instance.clone());
    assert!(!solve_kclique_bruteforce(&merged, DEFAULT_BUDGET).unwrap().solvable);
}

#[test]
fn pipeline_matches_brute_force() {
    for seed in 0..40u64 {
        let n = 4 + (seed % 4) as usize;
        let k = 2 + (seed % 2) as usize;
        let inst = fptsum::generate::gen_random_ksum(n, k, (n * n) as u64, fptsum::generate::Bias::Plant, seed)
            .unwrap();
        let inst = if seed % 3 == 0 {
            KSumInstance::new(k, inst.numbers().to_vec(), Some(inst.range().clone()), inst.target() + 1).unwrap()
        } else {
            inst
        };
        let truth = solve_ksum_bruteforce(&inst, DEFAULT_BUDGET).unwrap().solvable;
        let pipe = smallksum_to_kclique(&inst, 2, PipelineOptions::default()).unwrap();
        let report = solve_kclique_bruteforce(&Instance::Clique(pipe.merged.instance.clone()), DEFAULT_BUDGET).unwrap();
        assert_eq!(report.solvable, truth, "seed {seed}");
        if let Some(w) = report.witness {
            assert!(inst.verify(&pipe.lift(&w).unwrap()).unwrap());
        }
    }
}
