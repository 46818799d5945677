//! Integers kept in factored form.
//!
//! The products this crate studies are far too large to materialize (their
//! decimal expansions run to millions of digits within the first few dozen
//! indices), so they are carried as lists of (base, exponent) pairs and only
//! ever expanded when provably small.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A positive integer stored as Π baseᵉ with strictly increasing bases and
/// strictly positive exponents. The empty factor list represents 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactoredInteger {
    factors: Vec<(u64, BigInt)>,
}

impl FactoredInteger {
    /// Builds from (base, exponent) pairs, merging duplicate bases and
    /// dropping zero exponents. Panics on a base < 2 or a negative exponent.
    pub fn new(mut factors: Vec<(u64, BigInt)>) -> Self {
        factors.retain(|(_, e)| !e.is_zero());
        for (b, e) in &factors {
            assert!(*b >= 2, "factored integer base must be >= 2, got {b}");
            assert!(
                e.is_positive(),
                "factored integer exponent must be positive, got {b}^{e}"
            );
        }
        factors.sort_by_key(|(b, _)| *b);
        let mut merged: Vec<(u64, BigInt)> = Vec::with_capacity(factors.len());
        for (b, e) in factors {
            match merged.last_mut() {
                Some((last, acc)) if *last == b => *acc += e,
                _ => merged.push((b, e)),
            }
        }
        FactoredInteger { factors: merged }
    }

    pub fn one() -> Self {
        FactoredInteger {
            factors: Vec::new(),
        }
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn factors(&self) -> &[(u64, BigInt)] {
        &self.factors
    }

    /// Expands to a `BigInt`. Only call when the exponents are known to be
    /// small; panics if an exponent does not fit in usize.
    pub fn value(&self) -> BigInt {
        let mut acc = BigInt::one();
        for (b, e) in &self.factors {
            let e = e
                .to_usize()
                .expect("factored integer too large to materialize");
            acc *= BigInt::from(*b).pow(e as u32);
        }
        acc
    }

    /// Product of two factored integers (exponents add on shared bases).
    pub fn mul(&self, other: &FactoredInteger) -> FactoredInteger {
        let mut all = self.factors.clone();
        all.extend(other.factors.iter().cloned());
        FactoredInteger::new(all)
    }

    /// Canonical form with prime bases: every composite base is split by
    /// trial division (bases here are small — at most a few million).
    pub fn to_prime_factors(&self) -> FactoredInteger {
        let mut acc: Vec<(u64, BigInt)> = Vec::new();
        for (b, e) in &self.factors {
            let mut m = *b;
            let mut p = 2u64;
            while p * p <= m {
                let mut mult = 0u32;
                while m % p == 0 {
                    m /= p;
                    mult += 1;
                }
                if mult > 0 {
                    acc.push((p, e * BigInt::from(mult)));
                }
                p += 1;
            }
            if m > 1 {
                acc.push((m, e.clone()));
            }
        }
        FactoredInteger::new(acc)
    }

    /// Bit length upper bound: Σ e·⌈log2(b+1)⌉, handy for precision budgets.
    pub fn bit_length_upper(&self) -> u64 {
        let mut bits = 0u64;
        for (b, e) in &self.factors {
            let lb = 64 - b.leading_zeros() as u64;
            bits += e.to_u64().map(|e| e * lb).unwrap_or(u64::MAX / 4);
        }
        bits.max(1)
    }
}

impl fmt::Display for FactoredInteger {
    /// Renders as `2^4*3^2*5`; exponent 1 is omitted; the empty product
    /// renders as `1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        for (b, e) in &self.factors {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e.is_one() {
                write!(f, "{b}")?;
            } else {
                write!(f, "{b}^{e}")?;
            }
        }
        Ok(())
    }
}
