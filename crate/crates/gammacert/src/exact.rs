//! Exact big-integer and big-rational primitives.
//!
//! Everything here is pure and exact: least common multiples of initial
//! segments, binomial coefficients, harmonic numbers, and the
//! binomial-squared weighted harmonic sum that the approximation engine
//! consumes. All values are immutable after construction and safe to share
//! across threads.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::factored::FactoredInteger;

/// Primes up to `limit` (inclusive), by sieve of Eratosthenes.
pub fn primes_upto(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for p in 2..=n {
        if !composite[p] {
            out.push(p as u64);
            let mut m = p * p;
            while m <= n {
                composite[m] = true;
                m += p;
            }
        }
    }
    out
}

/// lcm(1, …, n) in factored form: the product over primes p ≤ n of the
/// largest power of p not exceeding n.
///
/// Panics if `n == 0` (the empty lcm is not defined here).
pub fn lcm_upto_factored(n: u64) -> FactoredInteger {
    assert!(n >= 1, "lcm_upto requires n >= 1");
    let mut factors = Vec::new();
    for p in primes_upto(n) {
        let mut e = 1u32;
        let mut pk = p;
        while pk <= n / p {
            pk *= p;
            e += 1;
        }
        factors.push((p, BigInt::from(e)));
    }
    FactoredInteger::new(factors)
}

/// lcm(1, …, n) as an integer.
///
/// Computed from the prime-power factorization rather than by folding
/// pairwise lcms; the pairwise fold survives in the test suite as the
/// independent oracle.
pub fn lcm_upto(n: u64) -> BigInt {
    lcm_upto_factored(n).value()
}

/// Binomial coefficient C(n, k), with the out-of-range convention
/// C(n, k) = 0 for k < 0 or k > n so identity sums can use free index
/// ranges.
pub fn binomial(n: u64, k: i64) -> BigInt {
    if k < 0 || k as u64 > n {
        return BigInt::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// The full row C(n, 0), …, C(n, n) of Pascal's triangle, by the
/// multiplicative recurrence (each division is exact).
pub fn binomial_row(n: u64) -> Vec<BigInt> {
    let mut row = Vec::with_capacity(n as usize + 1);
    let mut c = BigInt::one();
    row.push(c.clone());
    for i in 0..n {
        c = c * BigInt::from(n - i) / BigInt::from(i + 1);
        row.push(c.clone());
    }
    row
}

/// Prime factorization of C(top, bottom) via prime valuations of the
/// factorials (Legendre's formula). Only primes ≤ top can occur.
pub fn binomial_factored(top: u64, bottom: u64) -> FactoredInteger {
    assert!(bottom <= top, "binomial_factored requires bottom <= top");
    let mut factors = Vec::new();
    for p in primes_upto(top) {
        let mut v: i64 = 0;
        let mut pk = p;
        loop {
            v += (top / pk) as i64 - (bottom / pk) as i64 - ((top - bottom) / pk) as i64;
            if pk > top / p {
                break;
            }
            pk *= p;
        }
        if v > 0 {
            factors.push((p, BigInt::from(v)));
        }
    }
    FactoredInteger::new(factors)
}

fn harmonic_segment(lo: u64, hi: u64) -> BigRational {
    debug_assert!(lo <= hi);
    if hi - lo < 8 {
        let mut acc = BigRational::zero();
        for k in lo..=hi {
            acc += BigRational::new(BigInt::one(), BigInt::from(k));
        }
        acc
    } else {
        let mid = lo + (hi - lo) / 2;
        harmonic_segment(lo, mid) + harmonic_segment(mid + 1, hi)
    }
}

/// Harmonic number H_m = 1 + 1/2 + … + 1/m as an exact rational, with
/// H_0 = 0. Summed by balanced divide-and-conquer to keep intermediate
/// numerators and denominators small.
pub fn harmonic(m: u64) -> BigRational {
    if m == 0 {
        return BigRational::zero();
    }
    harmonic_segment(1, m)
}

/// H_0, H_1, …, H_m computed incrementally. Used where a whole prefix is
/// needed anyway (exponent tables, identity checks).
pub fn harmonic_prefix(m: u64) -> Vec<BigRational> {
    let mut out = Vec::with_capacity(m as usize + 1);
    let mut acc = BigRational::zero();
    out.push(acc.clone());
    for k in 1..=m {
        acc += BigRational::new(BigInt::one(), BigInt::from(k));
        out.push(acc.clone());
    }
    out
}

/// The weighted harmonic sum Σ_{i=0}^{n} C(n,i)² H_{n+i} as an exact
/// rational. Its reduced denominator always divides lcm(1, …, 2n), which
/// is what makes the lcm-scaled value an integer; the test suite checks
/// that divisibility rather than assuming it.
pub fn binomial_harmonic_sum(n: u64) -> BigRational {
    assert!(n >= 1, "binomial_harmonic_sum requires n >= 1");
    let row = binomial_row(n);
    let h = harmonic_prefix(2 * n);
    let mut acc = BigRational::zero();
    for (i, c) in row.iter().enumerate() {
        let c2 = BigRational::from_integer(c * c);
        acc += c2 * &h[n as usize + i];
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::Integer;

    /// Independent oracle: fold pairwise lcm over 1..=n.
    fn lcm_bruteforce(n: u64) -> BigInt {
        let mut acc = BigInt::one();
        for k in 1..=n {
            acc = acc.lcm(&BigInt::from(k));
        }
        acc
    }

    /// Independent oracle: Pascal's triangle by additions only.
    fn pascal(n: u64, k: u64) -> BigInt {
        let mut row = vec![BigInt::one()];
        for _ in 0..n {
            let mut next = vec![BigInt::one()];
            for w in row.windows(2) {
                next.push(&w[0] + &w[1]);
            }
            next.push(BigInt::one());
            row = next;
        }
        row.get(k as usize).cloned().unwrap_or_else(BigInt::zero)
    }

    #[test]
    fn lcm_examples() {
        assert_eq!(lcm_upto(1), BigInt::from(1));
        assert_eq!(lcm_upto(4), lcm_bruteforce(4));
        assert_eq!(lcm_upto(4), BigInt::from(12));
        assert_eq!(lcm_upto(10), BigInt::from(2520));
        assert_eq!(lcm_upto(10), lcm_bruteforce(10));
    }

    #[test]
    #[should_panic(expected = "n >= 1")]
    fn lcm_rejects_zero() {
        lcm_upto(0);
    }

    #[test]
    fn lcm_matches_bruteforce_up_to_200() {
        for n in 1..=200 {
            assert_eq!(lcm_upto(n), lcm_bruteforce(n), "n={n}");
        }
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(binomial(2, 1), BigInt::from(2));
        assert_eq!(binomial(4, 2), BigInt::from(6));
        assert_eq!(binomial(4, 2), pascal(4, 2));
        assert_eq!(binomial(5, 7), BigInt::zero());
        assert_eq!(binomial(5, -1), BigInt::zero());
        assert_eq!(binomial(0, 0), BigInt::one());
    }

    #[test]
    fn binomial_row_matches_pascal() {
        for n in 0..=25 {
            let row = binomial_row(n);
            for k in 0..=n {
                assert_eq!(row[k as usize], pascal(n, k), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn binomial_factored_matches_value() {
        for n in 1..=40u64 {
            let f = binomial_factored(2 * n, n);
            assert_eq!(f.value(), binomial(2 * n, n as i64), "n={n}");
        }
    }

    #[test]
    fn harmonic_examples() {
        assert_eq!(harmonic(0), BigRational::zero());
        assert_eq!(harmonic(2), BigRational::new(3.into(), 2.into()));
        assert_eq!(harmonic(4), BigRational::new(25.into(), 12.into()));
    }

    #[test]
    fn harmonic_balanced_matches_incremental() {
        let prefix = harmonic_prefix(120);
        for m in 0..=120u64 {
            assert_eq!(harmonic(m), prefix[m as usize], "m={m}");
        }
    }

    #[test]
    fn weighted_sum_examples() {
        assert_eq!(
            binomial_harmonic_sum(1),
            BigRational::new(5.into(), 2.into())
        );
        assert_eq!(
            binomial_harmonic_sum(2),
            BigRational::new(131.into(), 12.into())
        );
        // lcm(1..2)·(5/2) must be the integer 5
        let scaled = BigRational::from_integer(lcm_upto(2)) * binomial_harmonic_sum(1);
        assert!(scaled.is_integer());
        assert_eq!(scaled.to_integer(), BigInt::from(5));
    }

    #[test]
    fn chu_vandermonde_small() {
        // Σ C(n,i)^2 = C(2n,n) and the signed pair sum equals it too.
        for n in 1..=30u64 {
            let row = binomial_row(n);
            let sum_sq: BigInt = row.iter().map(|c| c * c).sum();
            assert_eq!(sum_sq, binomial(2 * n, n as i64), "n={n}");
            let mut signed = BigInt::zero();
            for i in 0..=n {
                for j in (i + 1)..=n {
                    let term = &row[i as usize] * &row[j as usize];
                    if (i + j) % 2 == 0 {
                        signed -= term;
                    } else {
                        signed += term;
                    }
                }
            }
            assert_eq!(signed * 2, binomial(2 * n, n as i64), "n={n}");
        }
    }
}
