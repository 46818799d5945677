//! Arbitrary-precision dyadic rationals: mantissa · 2^exponent.
//!
//! Addition, subtraction and multiplication are exact; the only rounding
//! ever applied is an explicit [`Dyadic::truncate`], which reports the error
//! it introduced. Certified arithmetic is layered on top of this in
//! [`crate::certified`].

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};

/// An exact dyadic rational `mant * 2^exp`, canonicalized so that `mant` is
/// odd (or zero, in which case `exp == 0`).
#[derive(Clone, PartialEq, Eq)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Self {
        let mut d = Dyadic { mant, exp };
        d.normalize();
        d
    }

    fn normalize(&mut self) {
        if self.mant.is_zero() {
            self.exp = 0;
            return;
        }
        let tz = self.mant.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.mant >>= tz;
            self.exp += tz as i64;
        }
    }

    pub fn zero() -> Self {
        Dyadic {
            mant: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn one() -> Self {
        Dyadic {
            mant: BigInt::one(),
            exp: 0,
        }
    }

    /// 2^e.
    pub fn pow2(e: i64) -> Self {
        Dyadic {
            mant: BigInt::one(),
            exp: e,
        }
    }

    pub fn from_int(v: impl Into<BigInt>) -> Self {
        Dyadic::new(v.into(), 0)
    }

    /// Exact conversion — every finite f64 is a dyadic rational.
    pub fn from_f64(v: f64) -> Self {
        assert!(v.is_finite(), "cannot convert non-finite f64");
        if v == 0.0 {
            return Dyadic::zero();
        }
        let bits = v.to_bits();
        let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
        let exp_bits = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, exp) = if exp_bits == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), exp_bits - 1075)
        };
        Dyadic::new(BigInt::from(sign * mant as i64), exp)
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    /// Number of bits in the mantissa magnitude.
    pub fn mant_bits(&self) -> u64 {
        self.mant.bits()
    }

    /// Exponent of the leading bit: self != 0 has magnitude in
    /// [2^(k), 2^(k+1)) where k = leading_bit_exp().
    pub fn leading_bit_exp(&self) -> i64 {
        debug_assert!(!self.is_zero());
        self.exp + self.mant.bits() as i64 - 1
    }

    pub fn abs(&self) -> Self {
        Dyadic {
            mant: self.mant.abs(),
            exp: self.exp,
        }
    }

    pub fn neg(&self) -> Self {
        Dyadic {
            mant: -&self.mant,
            exp: self.exp,
        }
    }

    pub fn add(&self, other: &Dyadic) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let exp = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - exp) as u64;
        let b = &other.mant << (other.exp - exp) as u64;
        Dyadic::new(a + b, exp)
    }

    pub fn sub(&self, other: &Dyadic) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Dyadic) -> Self {
        if self.is_zero() || other.is_zero() {
            return Dyadic::zero();
        }
        Dyadic::new(&self.mant * &other.mant, self.exp + other.exp)
    }

    pub fn mul_int(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Dyadic::zero();
        }
        Dyadic::new(&self.mant * k, self.exp)
    }

    pub fn mul_pow2(&self, e: i64) -> Self {
        if self.is_zero() {
            return Dyadic::zero();
        }
        Dyadic {
            mant: self.mant.clone(),
            exp: self.exp + e,
        }
    }

    /// Keeps at most `bits` mantissa bits, truncating toward zero. Returns
    /// the truncated value and a bound on the absolute error (one ulp of the
    /// result, or zero when no bits were dropped).
    pub fn truncate(&self, bits: u32) -> (Dyadic, Dyadic) {
        let nbits = self.mant.bits();
        if nbits <= bits as u64 {
            return (self.clone(), Dyadic::zero());
        }
        let drop = nbits - bits as u64;
        let mant = match self.mant.sign() {
            Sign::Minus => -(self.mant.magnitude() >> drop),
            _ => BigInt::from(self.mant.magnitude() >> drop),
        };
        let exp = self.exp + drop as i64;
        (Dyadic::new(mant, exp), Dyadic::pow2(exp))
    }

    /// Division `self / den` producing at least `bits` significant bits,
    /// truncated toward zero. Returns quotient and absolute error bound.
    /// `den` must be nonzero.
    pub fn div_int(&self, den: &BigInt, bits: u32) -> (Dyadic, Dyadic) {
        assert!(!den.is_zero(), "division by zero");
        if self.is_zero() {
            return (Dyadic::zero(), Dyadic::zero());
        }
        // scale the numerator so the integer quotient carries `bits` bits
        let shift = (den.bits() + bits as u64 + 2).saturating_sub(self.mant.bits()) as i64;
        let shift = shift.max(0);
        let num = &self.mant << shift as u64;
        let q = num / den;
        let exp = self.exp - shift;
        let value = Dyadic::new(q, exp);
        (value, Dyadic::pow2(exp))
    }

    /// ⌊self⌋ as an integer (toward negative infinity).
    pub fn floor(&self) -> BigInt {
        if self.exp >= 0 {
            return &self.mant << self.exp as u64;
        }
        let s = (-self.exp) as u64;
        // BigInt >> is floor division by 2^s for both signs
        &self.mant >> s
    }

    /// self − ⌊self⌋, in [0, 1).
    pub fn fract(&self) -> Dyadic {
        self.sub(&Dyadic::from_int(self.floor()))
    }

    pub fn cmp(&self, other: &Dyadic) -> Ordering {
        self.sub(other).mant.sign().cmp(&Sign::NoSign)
    }

    pub fn lt(&self, other: &Dyadic) -> bool {
        self.cmp(other) == Ordering::Less
    }

    pub fn le(&self, other: &Dyadic) -> bool {
        self.cmp(other) != Ordering::Greater
    }

    /// Upper-rounds to a short (≤ 8-bit) mantissa. Used to keep error radii
    /// small to store while never shrinking them.
    pub fn coarsen_upper(&self) -> Dyadic {
        debug_assert!(!self.is_negative());
        let nbits = self.mant.bits();
        if nbits <= 8 {
            return self.clone();
        }
        let drop = nbits - 8;
        let mant = BigInt::from((self.mant.magnitude() >> drop) + 1u32);
        Dyadic::new(mant, self.exp + drop as i64)
    }

    /// ⌊self · 10^d⌋.
    pub fn floor_scaled_pow10(&self, d: u32) -> BigInt {
        self.mul_int(&BigInt::from(10u32).pow(d)).floor()
    }

    /// Compares |self| against 10^k exactly.
    pub fn cmp_abs_pow10(&self, k: i64) -> Ordering {
        if self.is_zero() {
            return Ordering::Less;
        }
        let m = self.mant.abs();
        // |self| vs 10^k  <=>  m * 2^exp vs 10^k
        let (mut lhs, mut rhs) = if k >= 0 {
            (m, BigInt::from(10u32).pow(k as u32))
        } else {
            (m * BigInt::from(10u32).pow((-k) as u32), BigInt::one())
        };
        if self.exp >= 0 {
            lhs <<= self.exp as u64;
        } else {
            rhs <<= (-self.exp) as u64;
        }
        lhs.cmp(&rhs)
    }

    /// Smallest k such that |self| ≤ 10^k. (Zero reports a very small k.)
    pub fn pow10_upper_exp(&self) -> i64 {
        if self.is_zero() {
            return -9999;
        }
        // first guess from the binary magnitude, then correct exactly
        let mut k = (self.leading_bit_exp() as f64 * std::f64::consts::LOG10_2).round() as i64;
        while self.cmp_abs_pow10(k) == Ordering::Greater {
            k += 1;
        }
        while k > -9999 && self.cmp_abs_pow10(k - 1) != Ordering::Greater {
            k -= 1;
        }
        k
    }

    /// Exact conversion to a big rational.
    pub fn to_rational(&self) -> num_rational::BigRational {
        if self.exp >= 0 {
            num_rational::BigRational::from_integer(&self.mant << self.exp as u64)
        } else {
            num_rational::BigRational::new(self.mant.clone(), BigInt::one() << (-self.exp) as u64)
        }
    }

    /// Crude f64 view for diagnostics only (may over/underflow to ±inf/0).
    pub fn to_f64_lossy(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mant.bits();
        let take = bits.min(64);
        let top: BigInt = self.mant.magnitude().clone().into();
        let top = (top >> (bits - take)).to_f64().unwrap_or(f64::NAN);
        let sign = if self.mant.is_negative() { -1.0 } else { 1.0 };
        sign * top * 2f64.powi((self.exp + (bits - take) as i64) as i32)
    }

    /// Fixed-point decimal, truncated toward zero, with exactly `digits`
    /// places after the point. Matches the table convention where printed
    /// digit strings are prefixes of the exact expansion.
    pub fn decimal_truncated(&self, digits: u32) -> String {
        let neg = self.is_negative();
        let scaled = self.abs().floor_scaled_pow10(digits);
        format_scaled_decimal(&scaled, digits, neg)
    }

    /// Fixed-point decimal with `digits` places, rounded half-to-even.
    pub fn decimal_round_half_even(&self, digits: u32) -> String {
        let neg = self.is_negative();
        let x = self.abs().mul_int(&BigInt::from(10u32).pow(digits));
        let q = if x.exp >= 0 {
            &x.mant << x.exp as u64
        } else {
            let s = (-x.exp) as u64;
            let q = &x.mant >> s;
            let rem = &x.mant - (&q << s);
            let half = BigInt::one() << (s - 1);
            match rem.cmp(&half) {
                Ordering::Greater => q + 1,
                Ordering::Less => q,
                Ordering::Equal => {
                    if q.is_odd() {
                        q + 1
                    } else {
                        q
                    }
                }
            }
        };
        format_scaled_decimal(&q, digits, neg)
    }

    /// Scientific notation with `sig` significant digits, round-half-even,
    /// e.g. `2.500000e-1`. Deterministic; used for CSV columns.
    pub fn scientific_round_half_even(&self, sig: u32) -> String {
        assert!(sig >= 1);
        if self.is_zero() {
            let zeros = "0".repeat(sig as usize - 1);
            return if zeros.is_empty() {
                "0e0".to_string()
            } else {
                format!("0.{zeros}e0")
            };
        }
        // k = smallest exponent with |self| ≤ 10^k, so |self| ∈ (10^(k-1), 10^k]
        let k = self.pow10_upper_exp();
        // scale into (10^(sig-1), 10^sig] and round
        let shift = sig as i64 - k;
        let scaled = if shift >= 0 {
            self.abs().mul_int(&BigInt::from(10u32).pow(shift as u32))
        } else {
            let (q, _) = self
                .abs()
                .div_int(&BigInt::from(10u32).pow((-shift) as u32), 64 + 4 * sig);
            q
        };
        let mut digits = round_half_even_int(&scaled);
        let mut exp10 = k - 1;
        let mut ds = digits.to_string();
        if ds.len() as u32 > sig {
            // rounding carried 999… over to 1000…
            digits = digits / 10;
            exp10 += 1;
            ds = digits.to_string();
        }
        debug_assert_eq!(ds.len() as u32, sig);
        let (head, tail) = ds.split_at(1);
        let body = if tail.is_empty() {
            head.to_string()
        } else {
            format!("{head}.{tail}")
        };
        let sign = if self.is_negative() { "-" } else { "" };
        format!("{sign}{body}e{exp10}")
    }
}

trait OddCheck {
    fn is_odd(&self) -> bool;
}

impl OddCheck for BigInt {
    fn is_odd(&self) -> bool {
        (self & BigInt::one()) == BigInt::one()
    }
}

fn round_half_even_int(x: &Dyadic) -> BigInt {
    if x.exp >= 0 {
        return &x.mant << x.exp as u64;
    }
    let s = (-x.exp) as u64;
    let q = &x.mant >> s;
    let rem = &x.mant - (&q << s);
    let half = BigInt::one() << (s - 1);
    match rem.cmp(&half) {
        Ordering::Greater => q + 1,
        Ordering::Less => q,
        Ordering::Equal => {
            if q.is_odd() {
                q + 1
            } else {
                q
            }
        }
    }
}

fn format_scaled_decimal(scaled: &BigInt, digits: u32, neg: bool) -> String {
    let s = scaled.to_string();
    let s = s.trim_start_matches('-');
    let s = if s.len() <= digits as usize {
        format!("{}{}", "0".repeat(digits as usize + 1 - s.len()), s)
    } else {
        s.to_string()
    };
    let (int_part, frac_part) = s.split_at(s.len() - digits as usize);
    let sign = if neg && (int_part != "0" || frac_part.bytes().any(|b| b != b'0')) {
        "-"
    } else {
        ""
    };
    if digits == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac_part}")
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Dyadic({} * 2^{} ~ {:.6e})",
            self.mant,
            self.exp,
            self.to_f64_lossy()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bigint_shift_is_floor() {
        // the floor() implementation leans on this
        assert_eq!(BigInt::from(-5) >> 1u64, BigInt::from(-3));
        assert_eq!(BigInt::from(5) >> 1u64, BigInt::from(2));
    }

    #[test]
    fn arithmetic_exact() {
        let a = Dyadic::new(BigInt::from(3), -2); // 0.75
        let b = Dyadic::new(BigInt::from(1), -3); // 0.125
        assert_eq!(a.add(&b), Dyadic::new(BigInt::from(7), -3));
        assert_eq!(a.sub(&b), Dyadic::new(BigInt::from(5), -3));
        assert_eq!(a.mul(&b), Dyadic::new(BigInt::from(3), -5));
        assert_eq!(a.mul_pow2(2), Dyadic::from_int(3));
    }

    #[test]
    fn floor_and_fract() {
        let x = Dyadic::new(BigInt::from(11), -2); // 2.75
        assert_eq!(x.floor(), BigInt::from(2));
        assert_eq!(x.fract(), Dyadic::new(BigInt::from(3), -2));
        let y = x.neg(); // -2.75
        assert_eq!(y.floor(), BigInt::from(-3));
        assert_eq!(y.fract(), Dyadic::new(BigInt::from(1), -2));
    }

    #[test]
    fn truncate_reports_error() {
        let x = Dyadic::new(BigInt::from(0b10110111), 0); // 183
        let (t, e) = x.truncate(4);
        assert_eq!(t, Dyadic::new(BigInt::from(0b1011), 4)); // 176
        assert_eq!(e, Dyadic::pow2(4));
        assert!(x.sub(&t).abs().le(&e));
        let (t2, e2) = x.truncate(20);
        assert_eq!(t2, x);
        assert!(e2.is_zero());
    }

    #[test]
    fn div_int_accuracy() {
        let (q, err) = Dyadic::one().div_int(&BigInt::from(3), 64);
        let back = q.mul_int(&BigInt::from(3));
        assert!(Dyadic::one().sub(&back).abs().le(&err.mul_int(&3.into())));
        assert!(err.le(&Dyadic::pow2(-64)));
    }

    #[test]
    fn from_f64_exact() {
        assert_eq!(Dyadic::from_f64(0.5), Dyadic::pow2(-1));
        assert_eq!(Dyadic::from_f64(-3.0), Dyadic::from_int(-3));
        let x = 0.1f64;
        let d = Dyadic::from_f64(x);
        assert!((d.to_f64_lossy() - x).abs() == 0.0);
    }

    #[test]
    fn decimal_truncated_matches_tables() {
        // 0.772588... prints as 0.7725 at four digits, not 0.7726
        let x = Dyadic::from_f64(0.77258872);
        assert_eq!(x.decimal_truncated(4), "0.7725");
        assert_eq!(x.decimal_round_half_even(4), "0.7726");
        assert_eq!(Dyadic::from_int(3).decimal_truncated(2), "3.00");
    }

    #[test]
    fn round_half_even_ties() {
        let x = Dyadic::new(BigInt::from(5), -1); // 2.5
        assert_eq!(x.decimal_round_half_even(0), "2");
        let y = Dyadic::new(BigInt::from(7), -1); // 3.5
        assert_eq!(y.decimal_round_half_even(0), "4");
    }

    #[test]
    fn pow10_bounds() {
        assert_eq!(Dyadic::from_f64(0.5).pow10_upper_exp(), 0);
        assert_eq!(Dyadic::from_f64(0.05).pow10_upper_exp(), -1);
        assert_eq!(Dyadic::from_int(10).pow10_upper_exp(), 1);
        assert_eq!(Dyadic::from_int(11).pow10_upper_exp(), 2);
        assert_eq!(Dyadic::pow2(-40).pow10_upper_exp(), -12);
    }

    #[test]
    fn scientific_format() {
        assert_eq!(Dyadic::pow2(-1).scientific_round_half_even(6), "5.00000e-1");
        assert_eq!(Dyadic::pow2(-2).scientific_round_half_even(6), "2.50000e-1");
        assert_eq!(
            Dyadic::from_int(1000).scientific_round_half_even(3),
            "1.00e3"
        );
    }

    #[test]
    fn coarsen_never_shrinks() {
        let x = Dyadic::new(BigInt::from(123456789), -17);
        let c = x.coarsen_upper();
        assert!(x.le(&c));
        assert!(c.mant_bits() <= 8);
    }
}
