//! Randomized weight reduction: k-SUM on huge numbers to k instances on
//! numbers below a random prime.
//!
//! Completeness is unconditional. A false positive needs the prime to divide
//! the (nonzero) difference between some k-sum and the target, which happens
//! with small probability over the prime draw.

use num_bigint::{BigInt, BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde_json::json;

use crate::error::{ensure, Error, Result};
use crate::instances::{Instance, KSumInstance, Provenance, Range, ReducedCollection};

/// Algorithm identifier recorded in collection metadata next to the seed.
pub const RNG_ALGORITHM: &str = "ChaCha20Rng/seed_from_u64";

/// Rejection-sampling draw budget before an interval is declared prime-free.
pub const DRAW_BUDGET: u64 = 1_000_000;

/// Bases that make Miller-Rabin deterministic below 3,317,044,064,679,887,385,961,981.
const DETERMINISTIC_BASES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];
const DETERMINISTIC_LIMIT: &str = "3317044064679887385961981";
const PROBABILISTIC_ROUNDS: usize = 64;

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Deterministic primality for 64-bit values.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &DETERMINISTIC_BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &DETERMINISTIC_BASES[..12] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn miller_rabin_round(n: &BigUint, a: &BigUint, d: &BigUint, s: u64) -> bool {
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let mut x = a.modpow(d, n);
    if x == one || x == n_minus_1 {
        return true;
    }
    for _ in 1..s {
        x = x.modpow(&BigUint::from(2u32), n);
        if x == n_minus_1 {
            return true;
        }
    }
    false
}

/// Miller-Rabin: deterministic below ~3.3·10²⁴, 64 random rounds above.
pub fn is_prime_with<R: rand::Rng + ?Sized>(n: &BigUint, rng: &mut R) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    for &p in &DETERMINISTIC_BASES {
        if (n % p).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().expect("n > 1");
    let d = &n_minus_1 >> s;
    let limit: BigUint = DETERMINISTIC_LIMIT.parse().expect("constant parses");
    if n < &limit {
        DETERMINISTIC_BASES
            .iter()
            .all(|&a| miller_rabin_round(n, &BigUint::from(a), &d, s))
    } else {
        let two = BigUint::from(2u32);
        (0..PROBABILISTIC_ROUNDS).all(|_| {
            let a = rng.gen_biguint_range(&two, &n_minus_1);
            miller_rabin_round(n, &a, &d, s)
        })
    }
}

/// Primality with a fixed-seed generator for the probabilistic regime.
pub fn is_prime(n: &BigUint) -> bool {
    is_prime_with(n, &mut ChaCha20Rng::seed_from_u64(0))
}

/// Draws uniform integers from `[lo, hi]` until one is prime.
pub fn random_prime_in<R: rand::Rng + ?Sized>(lo: &BigUint, hi: &BigUint, rng: &mut R) -> Result<BigUint> {
    ensure!(lo >= &BigUint::from(2u32), Parameter, "interval must start at 2 or above");
    ensure!(lo <= hi, Parameter, "empty interval [{lo}, {hi}]");
    let upper = hi + 1u32;
    for _ in 0..DRAW_BUDGET {
        let x = rng.gen_biguint_range(lo, &upper);
        if is_prime_with(&x, rng) {
            return Ok(x);
        }
    }
    Err(Error::NoPrime(format!(
        "no prime met in {DRAW_BUDGET} draws from [{lo}, {hi}]"
    )))
}

/// ⌈log₂ x⌉ for x ≥ 1.
pub(crate) fn ceil_log2(x: &BigUint) -> u64 {
    if x <= &BigUint::one() {
        0
    } else {
        (x - 1u32).bits()
    }
}

/// Parameters of one prime draw.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeReductionParams {
    pub confidence: u64,
    pub prime: BigUint,
    pub bound: BigUint,
    pub seed: u64,
}

/// Upper end of the prime range, `d·n^k·⌈log₂ n⌉·⌈log₂(kM)⌉`, with each
/// logarithm floored at 1 and the result floored at 2.
pub fn prime_bound(confidence: u64, n: usize, k: usize, m: &BigUint) -> BigUint {
    let log_n = ceil_log2(&BigUint::from(n)).max(1);
    let log_km = ceil_log2(&(m * k)).max(1);
    let b = BigUint::from(confidence) * BigUint::from(n).pow(k as u32) * log_n * log_km;
    b.max(BigUint::from(2u32))
}

/// Draws a random prime from `[2, prime_bound(..)]` and applies
/// [`reduce_mod_prime`]. The seed and generator are recorded in the metadata.
pub fn ksum_mod_reduce(
    inst: &KSumInstance,
    confidence: u64,
    seed: u64,
) -> Result<(ReducedCollection<KSumInstance>, PrimeReductionParams)> {
    ensure!(confidence >= 1, Parameter, "confidence parameter must be at least 1");
    let m = inst
        .nonnegative_bound()?
        .to_biguint()
        .expect("nonnegative bound");
    let bound = prime_bound(confidence, inst.n().max(1), inst.k(), &m);
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let prime = random_prime_in(&BigUint::from(2u32), &bound, &mut rng)?;
    let mut coll = reduce_mod_prime(inst, &prime)?;
    if let Some(obj) = coll.params.as_object_mut() {
        obj.insert("seed".into(), json!(seed));
        obj.insert("rng".into(), json!(RNG_ALGORITHM));
        obj.insert("confidence".into(), json!(confidence));
        obj.insert("range_bound".into(), json!(bound.to_string()));
    }
    Ok((
        coll,
        PrimeReductionParams {
            confidence,
            prime,
            bound,
            seed,
        },
    ))
}

/// Maps `x_i ↦ x_i mod p` and emits `k` instances with integer targets
/// `(t mod p) + i·p`, `i ∈ [0, k−1]`. Sums of `k` residues lie in
/// `[0, k(p−1)]`, so these targets cover every sum congruent to `t`.
pub fn reduce_mod_prime(inst: &KSumInstance, prime: &BigUint) -> Result<ReducedCollection<KSumInstance>> {
    ensure!(prime >= &BigUint::from(2u32), Parameter, "modulus must be at least 2");
    let p = BigInt::from(prime.clone());
    let residues: Vec<BigInt> = inst.numbers().iter().map(|x| x.mod_floor(&p)).collect();
    let base_target = inst.target().mod_floor(&p);
    let range = Range::new(BigInt::zero(), &p - 1)?;

    let source: Instance = inst.clone().into();
    let mut coll = ReducedCollection::new(
        "ksum_mod_reduce",
        &source,
        json!({ "prime": prime.to_string() }),
    );
    for i in 0..inst.k() {
        let target = &base_target + &p * i;
        let item = KSumInstance::new(inst.k(), residues.clone(), Some(range.clone()), target)?;
        coll.push(
            item,
            Provenance {
                prime: Some(prime.to_string()),
                target_offset: Some(i as u32),
                ..Default::default()
            },
        );
    }
    Ok(coll)
}

/// Lifts a witness of a reduced item: the index set is reused, and rejected if
/// it is a false positive of the prime draw.
pub fn lift_mod_witness(source: &KSumInstance, witness: &[usize]) -> Result<Vec<usize>> {
    if source.verify(witness)? {
        Ok(witness.to_vec())
    } else {
        Err(Error::Lift(
            "witness sums to the target only modulo the prime (false positive)".into(),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division(n: u64) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
    }

    #[test]
    fn known_values() {
        assert!(is_prime_u64(7919));
        assert!(!is_prime_u64(561));
        assert!(!is_prime_u64(1));
        assert!(is_prime_u64(2));
        assert!(is_prime_u64(18446744073709551557)); // largest 64-bit prime
    }

    #[test]
    fn agrees_with_trial_division() {
        for n in 0..20_000u64 {
            assert_eq!(is_prime_u64(n), trial_division(n), "n = {n}");
        }
    }

    #[test]
    fn big_values() {
        // 2^89 − 1 is a Mersenne prime; 2^89 + 1 is divisible by 3.
        let m89 = (BigUint::one() << 89u32) - 1u32;
        assert!(is_prime(&m89));
        assert!(!is_prime(&(&m89 + 2u32)));
        // 2^127 − 1, beyond the deterministic limit.
        let m127 = (BigUint::one() << 127u32) - 1u32;
        assert!(is_prime(&m127));
        assert!(!is_prime(&(&m127 * &m89)));
    }

    #[test]
    fn singleton_interval() {
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        let two = BigUint::from(2u32);
        assert_eq!(random_prime_in(&two, &two, &mut rng).unwrap(), two);
    }

    #[test]
    fn prime_free_interval_errors() {
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        let r = random_prime_in(&BigUint::from(24u32), &BigUint::from(28u32), &mut rng);
        assert!(matches!(r, Err(Error::NoPrime(_))));
    }

    #[test]
    fn ceil_log2_values() {
        let c = |x: u32| ceil_log2(&BigUint::from(x));
        assert_eq!(c(1), 0);
        assert_eq!(c(2), 1);
        assert_eq!(c(3), 2);
        assert_eq!(c(4), 2);
        assert_eq!(c(5), 3);
    }
}
