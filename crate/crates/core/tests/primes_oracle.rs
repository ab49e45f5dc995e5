use std::sync::OnceLock;

use dirichlet::primes::PrimeTable;
use proptest::prelude::*;

fn table() -> &'static PrimeTable {
    static TABLE: OnceLock<PrimeTable> = OnceLock::new();
    TABLE.get_or_init(|| PrimeTable::sieve(5_000_000).unwrap())
}

fn is_prime_by_trial(n: u64) -> bool {
    n >= 2
        && (2..)
            .take_while(|d| d * d <= n)
            .all(|d| !n.is_multiple_of(d))
}

fn omega_by_trial(mut n: u64) -> u32 {
    let mut count = 0;
    let mut d = 2;
    while d * d <= n {
        while n.is_multiple_of(d) {
            n /= d;
            count += 1;
        }
        d += 1;
    }
    count + u32::from(n > 1)
}

#[test]
fn sieve_to_a_million_matches_trial_division() {
    let t = PrimeTable::sieve(1_000_000).unwrap();
    assert_eq!(t.prime_count(), 78_498);
    // Trial division on a strided sample plus the ends of the range.
    for n in (0..=1_000_000u64).step_by(97).chain(999_900..=1_000_000) {
        assert_eq!(t.index_of(n).is_some(), is_prime_by_trial(n), "n = {n}");
    }
    assert_eq!(t.prime(1).unwrap(), 2);
    assert_eq!(t.prime(78_498).unwrap(), 999_983);
}

#[test]
fn pi_counts_primes() {
    let t = PrimeTable::sieve(10_000).unwrap();
    for x in [1u64, 2, 10, 100, 1000, 10_000] {
        let naive = (1..=x).filter(|&n| is_prime_by_trial(n)).count();
        assert_eq!(t.pi(x).unwrap(), naive);
    }
}

proptest! {
    #[test]
    fn factorization_multiplies_back(n in 1u64..5_000_000) {
        let t = table();
        let f = t.factor(n).unwrap();
        prop_assert_eq!(f.value(t).unwrap(), n);
        let mut omega = 0;
        for &(i, e) in f.entries() {
            prop_assert!(is_prime_by_trial(t.prime(i).unwrap()));
            prop_assert!(e >= 1);
            omega += e;
        }
        prop_assert_eq!(omega, t.omega(n).unwrap());
        prop_assert!(f.entries().windows(2).all(|w| w[0].0 < w[1].0));
    }

    #[test]
    fn smooth_factorization_beyond_the_bound(a in 1u64..2_000, b in 1u64..2_000, c in 1u64..2_000) {
        let small = PrimeTable::sieve(2_000).unwrap();
        let n = a * b * c;
        let f = small.factor_smooth(n).unwrap();
        prop_assert_eq!(f.value(&small).unwrap(), n);
        prop_assert_eq!(f.omega(), omega_by_trial(n));
    }
}
