//! Deterministic selection of admissible odd primes.

use std::collections::BTreeSet;

use num_bigint::BigInt;

use num_traits::Zero;

use crate::field::finite::is_prime_u64;

/// Smallest odd prime p with p not dividing mu, p not in `forbidden`, and
/// p > n when `need_gt_n` is set. Primes are unbounded, so this always
/// terminates.
pub fn select_prime(mu: &BigInt, n: usize, need_gt_n: bool, forbidden: &BTreeSet<u64>) -> u64 {
    let mut p = 3u64;
    loop {
        if is_prime_u64(p)
            && !(need_gt_n && p <= n as u64)
            && !forbidden.contains(&p)
            && !divides(p, mu)
        {
            return p;
        }
        p += 2;
    }
}

pub fn divides(p: u64, v: &BigInt) -> bool {
    (v % BigInt::from(p)).is_zero()
}
