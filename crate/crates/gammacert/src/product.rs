//! The integer power product at index n and its exponent tables.
//!
//! For each n ≥ 1 there is an integer P(n) = Π_{k=1}^{n} (n+k)^{e(n,k)}
//! whose logarithm is lcm(1..2n) times a linear form in the logarithms of
//! n+1, …, 2n with rational coefficients. Three different closed forms give
//! the coefficients; they agree identically, and this module computes all
//! three so the agreement can be machine-checked. It also decomposes P(n)
//! as root^(2·ratio) with ratio = lcm(1..2n)/lcm(1..n), the shape in which
//! the product is usually tabulated, and verifies the combinatorial
//! identities the equality of the three forms rests on.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::exact::{binomial_row, harmonic_prefix, lcm_upto};
use crate::factored::FactoredInteger;

/// Which closed form to evaluate the exponent coefficients with.
///
/// All three are equal for every n and k (an acceptance check verifies this
/// wholesale); they differ only in shape and cost.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableFormula {
    /// Triple product form: for the k-th base, sum C(n,i)²·(2/j) over
    /// 0 ≤ i ≤ min(k−1, n−k) and i < j ≤ n−i.
    TripleSum,
    /// Signed pair form: sum 2·(−1)^(i+j−1)·C(n,i)·C(n,j)/(j−i) over
    /// 0 ≤ i < k ≤ j ≤ n.
    AlternatingPairs,
    /// Harmonic difference form: sum 2·C(n,i)²·(H_{n−i} − H_i) over i < k.
    HarmonicDifference,
}

/// The integer exponents e(n,1), …, e(n,n) of the bases n+1, …, 2n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentTable {
    n: u64,
    exponents: Vec<BigInt>,
}

impl ExponentTable {
    fn from_rational_coefficients(n: u64, coeffs: Vec<BigRational>, d2n: &BigInt) -> Self {
        assert_eq!(coeffs.len(), n as usize);
        let exponents: Vec<BigInt> = coeffs
            .into_iter()
            .enumerate()
            .map(|(idx, c)| {
                let e = c * BigRational::from_integer(d2n.clone());
                // the scaled coefficient must be a positive even integer;
                // anything else means the arithmetic itself is broken
                assert!(
                    e.is_integer(),
                    "internal consistency failure: non-integral exponent at n={n}, k={}",
                    idx + 1
                );
                let e = e.to_integer();
                assert!(
                    e.is_positive(),
                    "internal consistency failure: non-positive exponent at n={n}, k={}",
                    idx + 1
                );
                assert!(
                    (&e % BigInt::from(2)).is_zero(),
                    "internal consistency failure: odd exponent at n={n}, k={}",
                    idx + 1
                );
                e
            })
            .collect();
        ExponentTable { n, exponents }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn exponents(&self) -> &[BigInt] {
        &self.exponents
    }

    /// The product in factored form, bases n+1 … 2n.
    pub fn to_factored(&self) -> FactoredInteger {
        FactoredInteger::new(
            self.exponents
                .iter()
                .enumerate()
                .map(|(i, e)| (self.n + i as u64 + 1, e.clone()))
                .collect(),
        )
    }
}

/// Exponent table of the power product at index n, by the selected formula.
/// All intermediate arithmetic is exact rational; integrality, positivity
/// and evenness of the scaled coefficients are asserted at the end.
pub fn exponent_table(n: u64, formula: TableFormula) -> ExponentTable {
    assert!(n >= 1, "exponent_table requires n >= 1");
    let d2n = lcm_upto(2 * n);
    let coeffs = match formula {
        TableFormula::TripleSum => triple_sum_coefficients(n),
        TableFormula::AlternatingPairs => alternating_pairs_coefficients(n),
        TableFormula::HarmonicDifference => harmonic_difference_coefficients(n),
    };
    ExponentTable::from_rational_coefficients(n, coeffs, &d2n)
}

fn triple_sum_coefficients(n: u64) -> Vec<BigRational> {
    let row = binomial_row(n);
    let h = harmonic_prefix(n);
    // inner sum over j for fixed i is the harmonic segment (H_{n−i} − H_i),
    // independent of k; prefix-sum over i
    let mut prefix = Vec::with_capacity(n as usize);
    let mut acc = BigRational::zero();
    for i in 0..n {
        let c2 = BigRational::from_integer(&row[i as usize] * &row[i as usize]);
        let seg = &h[(n - i) as usize] - &h[i as usize];
        acc += c2 * seg * BigRational::from_integer(BigInt::from(2));
        prefix.push(acc.clone());
    }
    (1..=n)
        .map(|k| prefix[((k - 1).min(n - k)) as usize].clone())
        .collect()
}

fn alternating_pairs_coefficients(n: u64) -> Vec<BigRational> {
    let row = binomial_row(n);
    // group by the difference m = j − i: the sign (−1)^(i+j−1) = (−1)^(m−1)
    // is constant along a diagonal, so each (k, m) cell needs one rational
    // addition once the diagonal products carry prefix sums
    let mut diag_prefix: Vec<Vec<BigInt>> = Vec::with_capacity(n as usize + 1);
    diag_prefix.push(Vec::new()); // m = 0 unused
    for m in 1..=n {
        let len = (n - m + 1) as usize;
        let mut pref = Vec::with_capacity(len);
        let mut acc = BigInt::zero();
        for i in 0..len {
            acc += &row[i] * &row[i + m as usize];
            pref.push(acc.clone());
        }
        diag_prefix.push(pref);
    }
    (1..=n)
        .map(|k| {
            let mut c = BigRational::zero();
            for m in 1..=n {
                // need i < k ≤ i + m ≤ n, i.e. max(0, k−m) ≤ i ≤ min(k−1, n−m)
                let lo = k.saturating_sub(m);
                let hi = (k - 1).min(n - m);
                if lo > hi {
                    continue;
                }
                let pref = &diag_prefix[m as usize];
                let mut seg = pref[hi as usize].clone();
                if lo > 0 {
                    seg -= &pref[lo as usize - 1];
                }
                if m % 2 == 0 {
                    seg = -seg;
                }
                c += BigRational::new(seg * BigInt::from(2), BigInt::from(m));
            }
            c
        })
        .collect()
}

fn harmonic_difference_coefficients(n: u64) -> Vec<BigRational> {
    let row = binomial_row(n);
    let h = harmonic_prefix(n);
    let mut out = Vec::with_capacity(n as usize);
    let mut acc = BigRational::zero();
    for k in 1..=n {
        let i = (k - 1) as usize;
        let c2 = BigRational::from_integer(&row[i] * &row[i]);
        acc += c2 * (&h[n as usize - i] - &h[i]) * BigRational::from_integer(BigInt::from(2));
        out.push(acc.clone());
    }
    out
}

/// The tabulated decomposition of the power product: product = root^(2·ratio)
/// with ratio = lcm(1..2n)/lcm(1..n).
#[derive(Clone, Debug)]
pub struct ProductParts {
    pub n: u64,
    /// Π (n+k)^e(n,k), bases n+1 … 2n.
    pub product: FactoredInteger,
    /// lcm(1..2n)/lcm(1..n); always an exact divisor.
    pub ratio: BigInt,
    /// The 2·ratio-th root of the product, still an integer.
    pub root: FactoredInteger,
}

/// Builds the product, the lcm ratio r = lcm(1..2n)/lcm(1..n), and the
/// integer root with root^(2r) = product. Every exponent must be divisible
/// by 2r; a failure is an internal-consistency panic, since the divisibility
/// is an identity, not an input condition.
pub fn product_parts(n: u64) -> ProductParts {
    let table = exponent_table(n, TableFormula::TripleSum);
    product_parts_from_table(&table)
}

/// Same as [`product_parts`] but reusing an already-built exponent table.
pub fn product_parts_from_table(table: &ExponentTable) -> ProductParts {
    let n = table.n();
    let dn = lcm_upto(n);
    let d2n = lcm_upto(2 * n);
    let (ratio, rem) = num_integer::Integer::div_rem(&d2n, &dn);
    assert!(
        rem.is_zero(),
        "internal consistency failure: lcm(1..{}) does not divide lcm(1..{})",
        n,
        2 * n
    );
    let two_r = &ratio * BigInt::from(2);
    let root_factors = table
        .exponents()
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let (q, rem) = num_integer::Integer::div_rem(e, &two_r);
            assert!(
                rem.is_zero(),
                "internal consistency failure: exponent {} of base {} not divisible by 2r = {}",
                e,
                n + i as u64 + 1,
                two_r
            );
            (n + i as u64 + 1, q)
        })
        .collect();
    ProductParts {
        n,
        product: table.to_factored(),
        ratio,
        root: FactoredInteger::new(root_factors),
    }
}

impl ProductParts {
    /// Rendered grouped form, e.g. `(24^11*5^38)^20`.
    pub fn grouped_display(&self) -> String {
        let grouped = self.grouped_root_ordered();
        let two_r = &self.ratio * BigInt::from(2);
        let inner: Vec<String> = grouped
            .iter()
            .map(|(b, e)| {
                if e.is_one() {
                    format!("{b}")
                } else {
                    format!("{b}^{e}")
                }
            })
            .collect();
        if inner.len() == 1 && grouped[0].1.is_one() {
            format!("{}^{}", grouped[0].0, two_r)
        } else {
            format!("({})^{}", inner.join("*"), two_r)
        }
    }

    /// Grouped root factors in index order, pairing base n+k with base
    /// 2n+1−k when their exponents agree (an odd middle base stays alone).
    /// This is the shape the product is tabulated in; it is deliberately
    /// not sorted by base.
    pub fn grouped_root_ordered(&self) -> Vec<(u64, BigInt)> {
        let factors = self.root.factors();
        let n = self.n as usize;
        debug_assert_eq!(factors.len(), n);
        let mut grouped = Vec::new();
        for k in 1..=n.div_ceil(2) {
            let (b_lo, e_lo) = &factors[k - 1];
            let (b_hi, e_hi) = &factors[n - k];
            if b_lo == b_hi {
                grouped.push((*b_lo, e_lo.clone()));
            } else if e_lo == e_hi {
                grouped.push((b_lo * b_hi, e_lo.clone()));
            } else {
                // unreachable for these tables (the triple sum is symmetric
                // under k ↔ n+1−k), but never merge unequal exponents
                grouped.push((*b_lo, e_lo.clone()));
                grouped.push((*b_hi, e_hi.clone()));
            }
        }
        grouped
    }
}

// ---------------------------------------------------------------------------
// Combinatorial identity checks (exact rational arithmetic throughout).
// ---------------------------------------------------------------------------

/// Left side of the upper-offset identity:
/// Σ_{j=k+1}^{n} (−1)^(k+j−1)·C(n,j)/(j−k), for 0 ≤ k < n.
pub fn upper_offset_sum(n: u64, k: u64) -> BigRational {
    assert!(k < n);
    let row = binomial_row(n);
    let mut acc = BigRational::zero();
    for j in (k + 1)..=n {
        let term = BigRational::new(row[j as usize].clone(), BigInt::from(j - k));
        if (k + j) % 2 == 1 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// Checks Σ_{j=k+1}^{n} (−1)^(k+j−1)·C(n,j)/(j−k) = C(n,k)·(H_n − H_k),
/// for 0 ≤ k < n, in exact rationals.
pub fn check_upper_offset_identity(n: u64, k: u64) -> bool {
    assert!(k < n, "identity requires 0 <= k < n");
    let h = harmonic_prefix(n);
    let rhs = BigRational::from_integer(crate::exact::binomial(n, k as i64))
        * (&h[n as usize] - &h[k as usize]);
    upper_offset_sum(n, k) == rhs
}

/// Checks Σ_{i=0}^{k−1} (−1)^(k+i−1)·C(n,i)/(k−i) = C(n,k)·(H_n − H_{n−k}),
/// for 0 < k ≤ n, in exact rationals.
pub fn check_lower_offset_identity(n: u64, k: u64) -> bool {
    assert!(k >= 1 && k <= n, "identity requires 0 < k <= n");
    let row = binomial_row(n);
    let h = harmonic_prefix(n);
    let mut lhs = BigRational::zero();
    for i in 0..k {
        let term = BigRational::new(row[i as usize].clone(), BigInt::from(k - i));
        if (k + i) % 2 == 1 {
            lhs += term;
        } else {
            lhs -= term;
        }
    }
    let rhs = BigRational::from_integer(row[k as usize].clone())
        * (&h[n as usize] - &h[(n - k) as usize]);
    lhs == rhs
}

/// Checks the double-sum coefficient identity, 1 ≤ k ≤ n:
/// Σ_{i<k} Σ_{j≥k} (−1)^(i+j−1)·C(n,i)·C(n,j)/(j−i)
///   = Σ_{i<k} C(n,i)²·(H_{n−i} − H_i).
pub fn check_coefficient_identity(n: u64, k: u64) -> bool {
    assert!(k >= 1 && k <= n, "identity requires 1 <= k <= n");
    let row = binomial_row(n);
    let h = harmonic_prefix(n);
    let mut lhs = BigRational::zero();
    for i in 0..k {
        for j in k..=n {
            let term = BigRational::new(
                &row[i as usize] * &row[j as usize],
                BigInt::from(j - i),
            );
            if (i + j) % 2 == 1 {
                lhs += term;
            } else {
                lhs -= term;
            }
        }
    }
    let mut rhs = BigRational::zero();
    for i in 0..k {
        let c2 = BigRational::from_integer(&row[i as usize] * &row[i as usize]);
        rhs += c2 * (&h[(n - i) as usize] - &h[i as usize]);
    }
    lhs == rhs
}
