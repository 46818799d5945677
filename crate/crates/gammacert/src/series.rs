//! Binary-splitting evaluation of the inverse-hyperbolic-tangent and
//! inverse-tangent series at rational arguments.
//!
//! Partial sums Σ qᵗ/(2t+1) are assembled as exact fractions by recursive
//! splitting, so a logarithm good to tens of thousands of bits costs one
//! big division instead of thousands of high-precision operations. Tail
//! bounds are explicit and become part of the returned radius.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::certified::CertifiedReal;
use crate::dyadic::Dyadic;

/// (N, Q, B) with Σ_{t=l}^{r-1} q^(t-l)/(2t+1) = N/(Q·B), where
/// q = qnum/qden, Q = qden^(r-l), B = Π (2t+1).
fn split(l: u64, r: u64, qnum: &BigInt, qden: &BigInt) -> (BigInt, BigInt, BigInt) {
    if r - l == 1 {
        return (qden.clone(), qden.clone(), BigInt::from(2 * l + 1));
    }
    let m = l + (r - l) / 2;
    let (n1, q1, b1) = split(l, m, qnum, qden);
    let (n2, q2, b2) = split(m, r, qnum, qden);
    let qpow = qnum.pow((m - l) as u32);
    let n = &n1 * &q2 * &b2 + qpow * &n2 * &b1;
    (n, q1 * q2, b1 * b2)
}

/// Largest k ≥ 0 with a·2^k < b, for 0 < a < b.
fn pow2_gap(a: &BigInt, b: &BigInt) -> u64 {
    debug_assert!(a.is_positive() && a < b);
    let mut k = (b.bits() - a.bits()).max(1);
    while (a << (k + 1)) < *b {
        k += 1;
    }
    while k > 0 && (a << k) >= *b {
        k -= 1;
    }
    k
}

/// atanh(a/b) for 0 < a/b < 1/2, with radius ≤ 2^-bits.
pub fn atanh_rational(a: &BigInt, b: &BigInt, bits: u32) -> CertifiedReal {
    assert!(a.is_positive() && *a < *b, "atanh argument must be in (0,1)");
    let k = pow2_gap(a, b);
    assert!(k >= 1, "atanh argument must be below 1/2");
    // tail after T terms ≤ y^(2T+1)/(1−y²) ≤ 2·2^(-k(2T+1)) with y < 2^-k
    let terms = ((bits as u64 + 4) / (2 * k) + 1).max(1);
    let (n, q, bb) = split(0, terms, &(a * a), &(b * b));
    let num = a * n;
    let den = b * q * bb;
    let (value, err) = Dyadic::from_int(num).div_int(&den, bits + 4);
    let tail = Dyadic::pow2(-((k * (2 * terms + 1)) as i64) + 1);
    let out = CertifiedReal::new(value, err.add(&tail).coarsen_upper());
    debug_assert!(out.radius().le(&Dyadic::pow2(-(bits as i64))));
    out
}

/// atan(1/c) for an integer c ≥ 2, with radius ≤ 2^-bits.
pub fn atan_inv_int(c: u64, bits: u32) -> CertifiedReal {
    assert!(c >= 2);
    let cb = BigInt::from(c);
    let k = pow2_gap(&BigInt::one(), &cb);
    let terms = ((bits as u64 + 4) / (2 * k) + 1).max(1);
    // alternating series: error after T terms is below the first omitted term
    let (n, q, bb) = split(0, terms, &-(&cb * &cb), &(&cb * &cb));
    let den = &cb * q * bb;
    let (value, err) = Dyadic::from_int(n).div_int(&den, bits + 4);
    let tail = Dyadic::pow2(-((k * (2 * terms + 1)) as i64));
    let out = CertifiedReal::new(value, err.add(&tail).coarsen_upper());
    debug_assert!(out.radius().le(&Dyadic::pow2(-(bits as i64))));
    out
}

/// log 2 = 2·atanh(1/3), radius ≤ 2^-bits.
pub fn ln2(bits: u32) -> CertifiedReal {
    atanh_rational(&BigInt::one(), &BigInt::from(3), bits + 1).mul_pow2(1)
}

/// π by Machin's formula 16·atan(1/5) − 4·atan(1/239), radius ≤ 2^-bits.
pub fn pi(bits: u32) -> CertifiedReal {
    let a5 = atan_inv_int(5, bits + 6).mul_pow2(4);
    let a239 = atan_inv_int(239, bits + 4).mul_pow2(2);
    a5.sub(&a239, bits + 8)
}

/// Natural log of an integer m ≥ 1 with radius ≤ 2^-bits, given log 2 at
/// radius ≤ 2^-(bits+16).
pub fn ln_int_with_ln2(m: u64, bits: u32, ln2_val: &CertifiedReal) -> CertifiedReal {
    assert!(m >= 1);
    if m == 1 {
        return CertifiedReal::zero();
    }
    let e = 63 - m.leading_zeros() as u64; // floor(log2 m)
    let ln2_scaled = ln2_val.mul_int(&BigInt::from(e), bits + 16);
    if m == 1u64 << e {
        return ln2_scaled;
    }
    // m = 2^e·x with x ∈ (1,2): log x = 2·atanh((m−2^e)/(m+2^e)), argument < 1/3
    let a = BigInt::from(m - (1u64 << e));
    let b = BigInt::from(m + (1u64 << e));
    let at = atanh_rational(&a, &b, bits + 10).mul_pow2(1);
    let out = at.add(&ln2_scaled, bits + 12);
    debug_assert!(out.radius().le(&Dyadic::pow2(-(bits as i64))));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    /// 30-digit reference values, computed independently (series summed in
    /// exact rationals by a separate tool), frozen here.
    const LN2: &str = "0.693147180559945309417232121458";
    const LN3: &str = "1.098612288668109691395245236922";
    const PI: &str = "3.141592653589793238462643383279";

    fn dec30_to_dyadic(s: &str) -> Dyadic {
        // value·10^30 as integer, then divide
        let digits: String = s.chars().filter(|c| c.is_ascii_digit()).collect();
        let scaled: BigInt = digits.parse().unwrap();
        let (d, _) = Dyadic::from_int(scaled).div_int(&BigInt::from(10u32).pow(30), 160);
        d
    }

    #[test]
    fn ln2_matches_reference() {
        let x = ln2(128);
        let reference = dec30_to_dyadic(LN2);
        assert!(x.value().sub(&reference).abs().le(&Dyadic::pow2(-90)));
        assert!(x.radius().le(&Dyadic::pow2(-128)));
    }

    #[test]
    fn pi_matches_reference() {
        let x = pi(128);
        let reference = dec30_to_dyadic(PI);
        assert!(x.value().sub(&reference).abs().le(&Dyadic::pow2(-90)));
    }

    #[test]
    fn ln_int_cross_checks() {
        let l2 = ln2(200);
        let three = ln_int_with_ln2(3, 160, &l2);
        assert!(three
            .value()
            .sub(&dec30_to_dyadic(LN3))
            .abs()
            .le(&Dyadic::pow2(-90)));
        // log 12 = log 3 + 2 log 2
        let twelve = ln_int_with_ln2(12, 160, &l2);
        let recomposed = three.add(&l2.mul_pow2(1), 200);
        let diff = twelve.sub(&recomposed, 200);
        assert!(diff.contains_zero());
        // exact powers of two take the pure ln2 path
        let eight = ln_int_with_ln2(8, 160, &l2);
        let diff8 = eight.sub(&l2.mul_int(&BigInt::from(3), 200), 200);
        assert!(diff8.contains_zero());
    }

    #[test]
    fn deep_precision_is_cheap_and_sound() {
        // 20k bits; recomputation at twice the precision lands inside
        let x = ln_int_with_ln2(599, 20_000, &ln2(20_016));
        let y = ln_int_with_ln2(599, 40_000, &ln2(40_016));
        assert!(x.contains(y.value()));
        assert!(x.radius().le(&Dyadic::pow2(-20_000)));
    }
}
