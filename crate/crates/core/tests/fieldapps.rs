use fptsum::fieldapps::{
    decode_lindep_witness, ksum_to_targetsum, lift_lindep_witness, lindep_to_vectorsum, targetsum_to_ksum,
    DEFAULT_LINDEP_BUDGET,
};
use fptsum::generate::{gen_random_ksum, gen_random_targetsum, Bias};
use fptsum::instances::{KSumInstance, LinDepInstance, TargetSumInstance};
use fptsum::solvers::{
    solve_ksum_bruteforce, solve_lindep_bruteforce, solve_targetsum_bruteforce, solve_vectorsum_bruteforce,
    DEFAULT_BUDGET,
};
use num_bigint::BigInt;

#[test]
fn targetsum_example() {
    let inst = TargetSumInstance::new(7, 3, vec![5, 6, 3], 0).unwrap();
    let coll = targetsum_to_ksum(&inst).unwrap();
    let targets: Vec<BigInt> = coll.items.iter().map(|(i, _)| i.target().clone()).collect();
    assert_eq!(targets, [0, 7, 14].map(BigInt::from));
    assert!(coll.items[2].0.verify(&[0, 1, 2]).unwrap());

    let single = TargetSumInstance::new(5, 1, vec![1, 4], 4).unwrap();
    let coll = targetsum_to_ksum(&single).unwrap();
    assert_eq!(coll.len(), 1);
    assert_eq!(coll.items[0].0.target(), &BigInt::from(4));
}

#[test]
fn targetsum_round_trips_keep_solvability() {
    for seed in 0..200u64 {
        let q = [2, 3, 5, 7, 11, 13][seed as usize % 6];
        let r = 3 + seed as usize % 6;
        let k = 1 + seed as usize % 3;
        let bias = if seed % 3 == 0 { Bias::Plant } else { Bias::None };
        let ts = gen_random_targetsum(q, r, k, bias, seed).unwrap();
        let truth = solve_targetsum_bruteforce(&ts, DEFAULT_BUDGET).unwrap().solvable;
        let coll = targetsum_to_ksum(&ts).unwrap();
        let reduced = coll
            .items
            .iter()
            .any(|(i, _)| solve_ksum_bruteforce(i, DEFAULT_BUDGET).unwrap().solvable);
        assert_eq!(reduced, truth, "seed {seed}");

        let ks = gen_random_ksum(r, k, 40, bias, seed).unwrap();
        let coll = ksum_to_targetsum(&ks).unwrap();
        assert_eq!(coll.len(), 1);
        assert_eq!(
            solve_targetsum_bruteforce(&coll.items[0].0, DEFAULT_BUDGET).unwrap().solvable,
            solve_ksum_bruteforce(&ks, DEFAULT_BUDGET).unwrap().solvable,
            "seed {seed}"
        );
    }
}

#[test]
fn ksum_to_targetsum_example() {
    let coll = ksum_to_targetsum(&KSumInstance::from_i64(2, &[1, 3], 4).unwrap()).unwrap();
    let item = &coll.items[0].0;
    assert_eq!((item.q(), item.target()), (7, 4));
    assert!(item.verify(&[0, 1]).unwrap());
    let zero = ksum_to_targetsum(&KSumInstance::from_i64(2, &[0, 0], 0).unwrap()).unwrap();
    assert!(zero.items[0].0.verify(&[0, 1]).unwrap());
    assert!(ksum_to_targetsum(&KSumInstance::from_i64(2, &[1, 3], 9).unwrap()).is_err());
}

#[test]
fn lindep_example() {
    let inst = LinDepInstance::new(2, 2, vec![vec![1, 0], vec![0, 1], vec![1, 1]], vec![1, 1]).unwrap();
    let coll = lindep_to_vectorsum(&inst, DEFAULT_LINDEP_BUDGET).unwrap();
    assert_eq!(coll.len(), 4);
    let (first, prov) = &coll.items[0];
    assert_eq!(first.target(), &[BigInt::from(1), BigInt::from(1)]);
    let w = solve_vectorsum_bruteforce(first, DEFAULT_BUDGET).unwrap().witness.unwrap();
    let pairs = decode_lindep_witness(prov, &w).unwrap();
    assert_eq!(pairs.len(), 2);
    let lifted = lift_lindep_witness(&inst, first, prov, &w).unwrap();
    assert_eq!(lifted.len(), 2);
    assert!(inst.verify(&lifted).unwrap());
    assert!(decode_lindep_witness(prov, &[999]).is_err());
}

#[test]
fn zero_target_uses_zero_scalings() {
    let inst = LinDepInstance::new(3, 2, vec![vec![1, 2], vec![2, 2]], vec![0, 0]).unwrap();
    let coll = lindep_to_vectorsum(&inst, DEFAULT_LINDEP_BUDGET).unwrap();
    assert!(solve_vectorsum_bruteforce(&coll.items[0].0, DEFAULT_BUDGET).unwrap().solvable);
}

#[test]
fn lindep_matches_span_oracle() {
    for seed in 0..60u64 {
        let q = [2, 3, 5][seed as usize % 3];
        let inst = fptsum::generate::gen_random_lindep(q, 2 + seed as usize % 3, 2, 2, Bias::None, seed).unwrap();
        let truth = solve_lindep_bruteforce(&inst, DEFAULT_BUDGET).unwrap().solvable;
        let coll = lindep_to_vectorsum(&inst, DEFAULT_LINDEP_BUDGET).unwrap();
        let hit = coll
            .items
            .iter()
            .find_map(|(v, p)| solve_vectorsum_bruteforce(v, DEFAULT_BUDGET).unwrap().witness.map(|w| (v, p, w)));
        assert_eq!(hit.is_some(), truth, "seed {seed}");
        if let Some((v, p, w)) = hit {
            assert!(inst.verify(&lift_lindep_witness(&inst, v, p, &w).unwrap()).unwrap());
        }
    }
    let big = LinDepInstance::new(5, 3, vec![vec![0; 6]; 3], vec![0; 6]).unwrap();
    assert!(lindep_to_vectorsum(&big, 100).is_err());
}
