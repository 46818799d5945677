//! Certified reals: a dyadic value paired with an error radius.
//!
//! The contract is the usual interval one — the true quantity lies in
//! `[value − radius, value + radius]` — and every operation propagates radii
//! conservatively. Radii are kept upper-rounded to short mantissas so they
//! stay cheap no matter how long the computation runs.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

use crate::dyadic::Dyadic;

#[derive(Clone, Debug)]
pub struct CertifiedReal {
    value: Dyadic,
    radius: Dyadic,
}

fn widen(r: Dyadic) -> Dyadic {
    debug_assert!(!r.is_negative());
    r.coarsen_upper()
}

/// Upper bound on a/b for nonnegative `a` and strictly positive `b`.
fn div_upper(a: &Dyadic, b: &Dyadic, bits: u32) -> Dyadic {
    debug_assert!(!a.is_negative() && b.is_positive());
    if a.is_zero() {
        return Dyadic::zero();
    }
    let (q, err) = a.div_int(b.mantissa(), bits);
    q.add(&err).mul_pow2(-b.exponent())
}

impl CertifiedReal {
    pub fn new(value: Dyadic, radius: Dyadic) -> Self {
        assert!(!radius.is_negative(), "radius must be nonnegative");
        CertifiedReal { value, radius }
    }

    /// An exact quantity: radius zero.
    pub fn exact(value: Dyadic) -> Self {
        CertifiedReal {
            value,
            radius: Dyadic::zero(),
        }
    }

    pub fn zero() -> Self {
        CertifiedReal::exact(Dyadic::zero())
    }

    pub fn from_int(v: impl Into<BigInt>) -> Self {
        CertifiedReal::exact(Dyadic::from_int(v))
    }

    /// Exact rational brought to `bits` working precision.
    pub fn from_rational(r: &BigRational, bits: u32) -> Self {
        let num = Dyadic::from_int(r.numer().clone());
        let (q, err) = num.div_int(r.denom(), bits);
        CertifiedReal::new(q, err)
    }

    pub fn value(&self) -> &Dyadic {
        &self.value
    }

    pub fn radius(&self) -> &Dyadic {
        &self.radius
    }

    pub fn lower(&self) -> Dyadic {
        self.value.sub(&self.radius)
    }

    pub fn upper(&self) -> Dyadic {
        self.value.add(&self.radius)
    }

    /// Rounds the value to `bits` mantissa bits, absorbing the rounding
    /// error into the radius.
    pub fn round(&self, bits: u32) -> Self {
        let (v, err) = self.value.truncate(bits);
        CertifiedReal {
            value: v,
            radius: widen(self.radius.add(&err)),
        }
    }

    pub fn neg(&self) -> Self {
        CertifiedReal {
            value: self.value.neg(),
            radius: self.radius.clone(),
        }
    }

    pub fn add(&self, other: &CertifiedReal, bits: u32) -> Self {
        let (v, err) = self.value.add(&other.value).truncate(bits);
        let radius = widen(self.radius.add(&other.radius).add(&err));
        CertifiedReal { value: v, radius }
    }

    pub fn sub(&self, other: &CertifiedReal, bits: u32) -> Self {
        self.add(&other.neg(), bits)
    }

    pub fn mul_int(&self, k: &BigInt, bits: u32) -> Self {
        let (v, err) = self.value.mul_int(k).truncate(bits);
        let radius = widen(self.radius.mul_int(&k.abs()).add(&err));
        CertifiedReal { value: v, radius }
    }

    pub fn div_int(&self, k: &BigInt, bits: u32) -> Self {
        assert!(!k.is_zero());
        let (v, err) = self.value.div_int(k, bits);
        let kabs = k.abs();
        let (rq, rerr) = self.radius.div_int(&kabs, 16);
        let radius = widen(rq.add(&rerr).add(&err));
        CertifiedReal { value: v, radius }
    }

    /// Multiplication by an exact rational p/q.
    pub fn mul_rational(&self, r: &BigRational, bits: u32) -> Self {
        self.mul_int(r.numer(), bits + 8).div_int(r.denom(), bits)
    }

    pub fn mul_pow2(&self, e: i64) -> Self {
        CertifiedReal {
            value: self.value.mul_pow2(e),
            radius: self.radius.mul_pow2(e),
        }
    }

    pub fn mul(&self, other: &CertifiedReal, bits: u32) -> Self {
        let (v, err) = self.value.mul(&other.value).truncate(bits);
        // |xy - vw| <= |v|·r_other + |w|·r_self + r_self·r_other
        let cross = self
            .value
            .abs()
            .mul(&other.radius)
            .add(&other.value.abs().mul(&self.radius))
            .add(&self.radius.mul(&other.radius));
        CertifiedReal {
            value: v,
            radius: widen(cross.add(&err)),
        }
    }

    /// Division by an interval that certifiably excludes zero.
    /// Panics otherwise — callers decide feasibility before dividing.
    pub fn div(&self, other: &CertifiedReal, bits: u32) -> Self {
        let denom_low = other.value.abs().sub(&other.radius);
        assert!(
            denom_low.is_positive(),
            "certified division by an interval containing zero"
        );
        let (q, err) = self.value.div_int(other.value.mantissa(), bits);
        let v = q.mul_pow2(-other.value.exponent());
        let err = err.mul_pow2(-other.value.exponent());
        // |x/y − vx/vy| ≤ (r_x + |vx/vy|·r_y) / (|vy| − r_y)
        let quot_abs = v.abs().add(&err);
        let num = self.radius.add(&quot_abs.mul(&other.radius));
        let radius = widen(div_upper(&num, &denom_low, 24).add(&err));
        CertifiedReal { value: v, radius }
    }

    pub fn contains_zero(&self) -> bool {
        !self.lower().is_positive() && !self.upper().is_negative()
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        self.lower().le(x) && x.le(&self.upper())
    }

    /// `Some(floor)` when the whole interval shares one integer part.
    pub fn floor_decided(&self) -> Option<BigInt> {
        let lo = self.lower().floor();
        let hi = self.upper().floor();
        (lo == hi).then_some(lo)
    }

    /// Splits into fractional part (same radius) and integer part, when the
    /// integer part is unambiguous.
    pub fn fract_decided(&self) -> Option<(CertifiedReal, BigInt)> {
        let fl = self.floor_decided()?;
        let frac = CertifiedReal {
            value: self.value.sub(&Dyadic::from_int(fl.clone())),
            radius: self.radius.clone(),
        };
        Some((frac, fl))
    }

    /// True iff the interval certifies `self ≥ threshold`
    /// (lower bound clears it).
    pub fn certainly_ge(&self, threshold: &Dyadic) -> bool {
        !self.lower().lt(threshold)
    }

    /// True iff the interval certifies `self < threshold`.
    pub fn certainly_lt(&self, threshold: &Dyadic) -> bool {
        self.upper().lt(threshold)
    }

    /// Interval-decided three-way comparison against an exact dyadic.
    pub fn decide_cmp(&self, threshold: &Dyadic) -> Option<Ordering> {
        if self.certainly_lt(threshold) {
            Some(Ordering::Less)
        } else if self.lower().cmp(threshold) == Ordering::Greater {
            Some(Ordering::Greater)
        } else if self.radius.is_zero() && self.value == *threshold {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    /// Truncated decimal string with `digits` places, certified: returns
    /// `None` when the interval straddles a 10^-digits grid line, i.e. when
    /// some printed digit is still uncertain.
    pub fn decimal_truncated_decided(&self, digits: u32) -> Option<String> {
        let lo = self.lower().floor_scaled_pow10(digits);
        let hi = self.upper().floor_scaled_pow10(digits);
        (lo == hi).then(|| self.value.decimal_truncated(digits))
    }

    /// `"<1e-k"`-style upper bound on the radius.
    pub fn radius_pow10_bound(&self) -> String {
        format!("1e{}", self.radius.pow10_upper_exp())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn assert_contains_rational(x: &CertifiedReal, r: &BigRational) {
        let scale = 1u64 << 40;
        let approx = Dyadic::from_int(r.numer() * BigInt::from(scale) / r.denom());
        let approx = approx.mul_pow2(-40);
        // |approx - r| < 2^-40; widen the interval by that much
        let widened = CertifiedReal::new(
            x.value().clone(),
            x.radius().add(&Dyadic::pow2(-40)),
        );
        assert!(
            widened.contains(&approx),
            "interval {x:?} does not contain {r}"
        );
    }

    #[test]
    fn rational_round_trip() {
        let r = BigRational::new(BigInt::from(22), BigInt::from(7));
        let x = CertifiedReal::from_rational(&r, 80);
        assert_contains_rational(&x, &r);
        assert!(x.radius().le(&Dyadic::pow2(-75)));
    }

    #[test]
    fn arithmetic_soundness_spot() {
        let third = CertifiedReal::from_rational(&BigRational::new(1.into(), 3.into()), 64);
        let seventh = CertifiedReal::from_rational(&BigRational::new(1.into(), 7.into()), 64);
        let sum = third.add(&seventh, 64);
        assert_contains_rational(&sum, &BigRational::new(10.into(), 21.into()));
        let prod = third.mul(&seventh, 64);
        assert_contains_rational(&prod, &BigRational::new(1.into(), 21.into()));
        let quot = third.div(&seventh, 64);
        assert_contains_rational(&quot, &BigRational::new(7.into(), 3.into()));
    }

    #[test]
    fn floor_decision() {
        let x = CertifiedReal::new(Dyadic::from_f64(2.5), Dyadic::from_f64(0.25));
        assert_eq!(x.floor_decided(), Some(BigInt::from(2)));
        let y = CertifiedReal::new(Dyadic::from_f64(3.001), Dyadic::from_f64(0.01));
        assert_eq!(y.floor_decided(), None);
        let (frac, fl) = x.fract_decided().unwrap();
        assert_eq!(fl, BigInt::from(2));
        assert_eq!(frac.value(), &Dyadic::from_f64(0.5));
    }

    #[test]
    fn comparisons() {
        let x = CertifiedReal::new(Dyadic::from_f64(0.7725), Dyadic::pow2(-20));
        assert!(x.certainly_ge(&Dyadic::pow2(-1)));
        assert!(!x.certainly_lt(&Dyadic::pow2(-1)));
        assert_eq!(
            x.decide_cmp(&Dyadic::pow2(-1)),
            Some(Ordering::Greater)
        );
        let tight = CertifiedReal::new(Dyadic::pow2(-1), Dyadic::pow2(-30));
        assert_eq!(tight.decide_cmp(&Dyadic::pow2(-1)), None);
    }

    #[test]
    fn decided_decimal() {
        let x = CertifiedReal::new(Dyadic::from_f64(0.77258872), Dyadic::pow2(-40));
        assert_eq!(x.decimal_truncated_decided(4).unwrap(), "0.7725");
        // interval straddling the 0.5000/0.4999 boundary is undecided
        let y = CertifiedReal::new(Dyadic::pow2(-1), Dyadic::pow2(-30));
        assert_eq!(y.decimal_truncated_decided(4), None);
    }

    #[test]
    fn div_int_radius_covers() {
        let x = CertifiedReal::new(Dyadic::one(), Dyadic::pow2(-10));
        let y = x.div_int(&BigInt::from(3), 64);
        // true range [ (1-2^-10)/3, (1+2^-10)/3 ]
        let third = BigRational::new(BigInt::one(), BigInt::from(3));
        assert_contains_rational(&y, &third);
        assert!(y.radius().le(&Dyadic::pow2(-11).add(&Dyadic::pow2(-60))));
    }
}
