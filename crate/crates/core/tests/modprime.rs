use fptsum::generate::{gen_random_ksum, Bias};
use fptsum::instances::KSumInstance;
use fptsum::modprime::{is_prime, is_prime_u64, ksum_mod_reduce, lift_mod_witness, prime_bound, random_prime_in, reduce_mod_prime};
use fptsum::solvers::{solve_ksum_bruteforce, DEFAULT_BUDGET};
use num_bigint::{BigInt, BigUint};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

fn trial_division(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

#[test]
fn primality_examples() {
    assert!(is_prime_u64(7919));
    assert!(!is_prime_u64(561));
    assert!(is_prime(&BigUint::from(7919u32)));
    assert!(!is_prime(&BigUint::from(561u32)));
    // 2^89 - 1 is a Mersenne prime, 2^89 + 1 is divisible by 3
    let m89 = (BigUint::from(1u32) << 89) - 1u32;
    assert!(is_prime(&m89));
    assert!(!is_prime(&(m89 + 2u32)));
}

#[test]
fn primality_matches_trial_division() {
    for n in 0..20_000u64 {
        assert_eq!(is_prime_u64(n), trial_division(n), "{n}");
    }
}

#[test]
fn prime_draws() {
    let mut rng = ChaCha20Rng::seed_from_u64(3);
    let two = BigUint::from(2u32);
    assert_eq!(random_prime_in(&two, &two, &mut rng).unwrap(), two);
    assert!(random_prime_in(&BigUint::from(24u32), &BigUint::from(28u32), &mut rng).is_err());
    for _ in 0..50 {
        let p = random_prime_in(&BigUint::from(100u32), &BigUint::from(1000u32), &mut rng).unwrap();
        assert!(p >= BigUint::from(100u32) && p <= BigUint::from(1000u32));
        assert!(trial_division(p.try_into().unwrap()));
    }
}

#[test]
fn residue_examples() {
    let seven = BigUint::from(7u32);
    let inst = KSumInstance::from_i64(2, &[2, 9], 11).unwrap();
    let coll = reduce_mod_prime(&inst, &seven).unwrap();
    let targets: Vec<BigInt> = coll.items.iter().map(|(i, _)| i.target().clone()).collect();
    assert_eq!(targets, vec![BigInt::from(4), BigInt::from(11)]);
    assert_eq!(coll.items[0].0.numbers(), &[BigInt::from(2), BigInt::from(2)]);
    assert!(coll.items[0].0.verify(&[0, 1]).unwrap());
    assert_eq!(lift_mod_witness(&inst, &[0, 1]).unwrap(), vec![0, 1]);

    let fp = KSumInstance::from_i64(2, &[3, 8], 4).unwrap();
    let coll = reduce_mod_prime(&fp, &seven).unwrap();
    assert_eq!(coll.items[0].0.numbers(), &[BigInt::from(3), BigInt::from(1)]);
    assert!(coll.items[0].0.verify(&[0, 1]).unwrap());
    assert!(lift_mod_witness(&fp, &[0, 1]).is_err());
}

#[test]
fn large_modulus_is_identity() {
    let inst = KSumInstance::from_i64(3, &[4, 8, 15, 16, 23], 39).unwrap();
    let coll = reduce_mod_prime(&inst, &BigUint::from(101u32)).unwrap();
    assert_eq!(coll.items[0].0.numbers(), inst.numbers());
    for (item, _) in &coll.items[1..] {
        assert!(!solve_ksum_bruteforce(item, DEFAULT_BUDGET).unwrap().solvable);
    }
}

#[test]
fn reductions_never_lose_solutions() {
    for seed in 0..100u64 {
        let inst = gen_random_ksum(8, 3, 1_000_000_000, Bias::Plant, seed).unwrap();
        let (coll, params) = ksum_mod_reduce(&inst, 10, seed).unwrap();
        let m = BigUint::from(1_000_000_000u64);
        assert_eq!(params.bound, prime_bound(10, 8, 3, &m));
        assert!(is_prime(&params.prime) && params.prime <= params.bound);
        assert!(coll
            .items
            .iter()
            .any(|(i, _)| solve_ksum_bruteforce(i, DEFAULT_BUDGET).unwrap().solvable));
    }
}

#[test]
fn draws_are_reproducible() {
    let inst = gen_random_ksum(6, 2, 1000, Bias::None, 9).unwrap();
    let (a, pa) = ksum_mod_reduce(&inst, 5, 42).unwrap();
    let (b, pb) = ksum_mod_reduce(&inst, 5, 42).unwrap();
    assert_eq!(pa, pb);
    assert_eq!(a, b);
}
