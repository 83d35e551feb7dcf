//! Shared test utilities: the signed colored-partition oracle and a tiny
//! deterministic sampler.
//!
//! The oracle counts, by direct recursion over part values with binomial
//! multiplicities, the weighted colored partitions whose generating
//! function is the eta/Klein product: nonpositive exponents contribute
//! `|a_i|`-colored unrestricted parts, positive exponents contribute
//! `a_i`-colored distinct parts weighted by parity of the part count.  It
//! never touches the series arithmetic it checks.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use qklein::ExponentVector;

/// `P_a(n)` by weighted enumeration.
pub fn colored_partition_count(v: &ExponentVector, n: i64) -> BigInt {
    let p = v.p() as i64;
    let class_exponent = |value: i64| -> i64 {
        let c = value.rem_euclid(p);
        if c == 0 {
            v.a0()
        } else {
            let i = c.min(p - c) as usize;
            v.tail()[i - 1]
        }
    };
    // Number of ways to use k parts of one value with e colors:
    // e <= 0: multichoose(|e|, k); e > 0: (-1)^k * choose(e, k).
    fn ways(e: i64, k: i64) -> BigInt {
        if k == 0 {
            return BigInt::one();
        }
        if e == 0 {
            return BigInt::zero();
        }
        if e < 0 {
            binom(-e + k - 1, k)
        } else {
            let b = binom(e, k);
            if k % 2 == 1 {
                -b
            } else {
                b
            }
        }
    }
    fn binom(n: i64, k: i64) -> BigInt {
        if k < 0 || k > n {
            return BigInt::zero();
        }
        let mut acc = BigInt::one();
        for i in 0..k {
            acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
        }
        acc
    }
    // dp[m] = weighted count using part values considered so far.
    let mut dp = vec![BigInt::zero(); (n + 1) as usize];
    dp[0] = BigInt::one();
    for value in 1..=n {
        let e = class_exponent(value);
        if e == 0 {
            continue;
        }
        let mut next = vec![BigInt::zero(); (n + 1) as usize];
        for m in 0..=n {
            if dp[m as usize].is_zero() {
                continue;
            }
            let mut k = 0;
            while m + k * value <= n {
                let w = ways(e, k);
                if !w.is_zero() {
                    let t = &dp[m as usize] * &w;
                    next[(m + k * value) as usize] += t;
                }
                k += 1;
            }
        }
        dp = next;
    }
    dp[n as usize].clone()
}

/// Minimal deterministic generator for reproducible sampling.
pub struct Lcg(pub u64);

impl Lcg {
    pub fn next_index(&mut self, bound: usize) -> usize {
        self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((self.0 >> 33) as usize) % bound
    }
}
