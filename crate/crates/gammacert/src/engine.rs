//! Certified evaluation engine: the log of the power product, its
//! fractional part with adaptive precision, the rational-coefficient linear
//! form, and the binomial-weighted approximation of Euler's constant.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::certified::CertifiedReal;
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::exact::{binomial, binomial_harmonic_sum, lcm_upto};
use crate::logs::{bits_for, LogTable};
use crate::product::{exponent_table, ExponentTable, TableFormula};

/// A power of two not exceeding 10^k. Handy as a radius target expressed in
/// decimal digits.
pub fn pow2_at_most_pow10(k: i64) -> Dyadic {
    let mut e = (k as f64 * std::f64::consts::LOG2_10).floor() as i64;
    while Dyadic::pow2(e).cmp_abs_pow10(k) == std::cmp::Ordering::Greater {
        e -= 1;
    }
    Dyadic::pow2(e)
}

/// Fractional part of the log of the power product, together with the
/// integer part it was separated from and the working precision that
/// sufficed.
#[derive(Clone, Debug)]
pub struct FracLog {
    /// The fractional part, in [0, 1).
    pub frac: CertifiedReal,
    /// ⌊log product⌋ — hundreds of digits long well before n = 100.
    pub int_part: BigInt,
    /// Mantissa bits the certification needed.
    pub bits: u32,
}

/// One approximation step toward Euler's constant: the value, with its
/// arithmetic radius, and a separate method-error estimate.
#[derive(Clone, Debug)]
pub struct GammaApprox {
    pub value: CertifiedReal,
    /// Leading-order estimate of the truncation term. Its radius equals its
    /// value (100% slack): this is an asymptotic size estimate, not a bound.
    pub method_error: CertifiedReal,
}

pub struct Engine {
    logs: LogTable,
    max_bits: u32,
}

impl Default for Engine {
    fn default() -> Self {
        Engine::new()
    }
}

impl Engine {
    pub fn new() -> Self {
        Engine {
            logs: LogTable::new(),
            // ~1.2M decimal digits; far past desk scale
            max_bits: 1 << 22,
        }
    }

    /// Lowers the precision-escalation cap (useful to force the explicit
    /// "undecided"/cap failure paths).
    pub fn with_max_bits(max_bits: u32) -> Self {
        Engine {
            logs: LogTable::new(),
            max_bits,
        }
    }

    pub fn max_bits(&self) -> u32 {
        self.max_bits
    }

    pub fn log_table(&self) -> &LogTable {
        &self.logs
    }

    /// Natural log of an integer m ≥ 1 with radius ≤ target.
    pub fn log_int(&self, m: u64, target: &Dyadic) -> CertifiedReal {
        self.logs.ln_int_radius(m, target)
    }

    /// log of the power product at n: Σ_k e(n,k)·log(n+k), radius ≤ target.
    pub fn log_product(&self, n: u64, target: &Dyadic) -> Result<CertifiedReal> {
        let table = exponent_table(n, TableFormula::HarmonicDifference);
        self.log_product_from_table(&table, target)
    }

    pub fn log_product_from_table(
        &self,
        table: &ExponentTable,
        target: &Dyadic,
    ) -> Result<CertifiedReal> {
        let n = table.n();
        let total_weight: BigInt = table.exponents().iter().sum();
        // per-term log radius: target / (4·Σe); truncation makes it only smaller
        let (per_term, _) = target.div_int(&(&total_weight * BigInt::from(4)), 32);
        let term_bits = bits_for(&per_term);
        // absolute accumulator ulp must stay below target/(4(n+1));
        // the sum's magnitude is below Σe · log(2n) < Σe · 2^6
        let lead = total_weight.bits() as i64 + 6;
        let tgt_exp = target.leading_bit_exp();
        let acc_bits = (lead - tgt_exp + 64 + u64::BITS as i64 - (n.leading_zeros() as i64))
            .max(64) as u32;
        if term_bits > self.max_bits || acc_bits > self.max_bits {
            return Err(Error::PrecisionCap {
                context: format!("computing log of the power product at n={n}"),
                bits: term_bits.max(acc_bits),
            });
        }
        let mut acc = CertifiedReal::zero();
        for (i, e) in table.exponents().iter().enumerate() {
            let base = n + i as u64 + 1;
            let term = self.logs.ln_int(base, term_bits).mul_int(e, acc_bits);
            acc = acc.add(&term, acc_bits);
        }
        assert!(
            acc.radius().le(target),
            "accumulated radius missed the target at n={n}"
        );
        Ok(acc)
    }

    /// Fractional part of the product log, certified to `digits` decimal
    /// places (the printed digits are exact truncation digits). Working
    /// precision escalates until the integer part and every printed digit
    /// are unambiguous; hitting the cap is an explicit error, never a
    /// silently wrong fractional part.
    pub fn frac_log_product(&self, n: u64, digits: u32) -> Result<FracLog> {
        let table = exponent_table(n, TableFormula::HarmonicDifference);
        self.frac_log_product_from_table(&table, digits)
    }

    pub fn frac_log_product_from_table(
        &self,
        table: &ExponentTable,
        digits: u32,
    ) -> Result<FracLog> {
        let n = table.n();
        let mut guard = 8u32;
        loop {
            let target = pow2_at_most_pow10(-((digits + guard) as i64));
            let ls = self.log_product_from_table(table, &target)?;
            if let Some((frac, int_part)) = ls.fract_decided() {
                if frac.decimal_truncated_decided(digits).is_some() {
                    debug_assert!(!frac.value().is_negative());
                    let bits = bits_for(&target);
                    return Ok(FracLog {
                        frac,
                        int_part,
                        bits,
                    });
                }
            }
            guard = guard.saturating_mul(2);
            if (digits + guard) as u64 * 4 > self.max_bits as u64 {
                return Err(Error::PrecisionCap {
                    context: format!(
                        "separating the fractional part of the product log at n={n}"
                    ),
                    bits: self.max_bits,
                });
            }
        }
    }

    /// The linear form Σ_k (e(n,k)/lcm(1..2n))·log(n+k), evaluated directly
    /// from the reduced rational coefficients (not by dividing the product
    /// log), radius ≤ target.
    pub fn linear_form(&self, n: u64, target: &Dyadic) -> Result<CertifiedReal> {
        let table = exponent_table(n, TableFormula::HarmonicDifference);
        let d2n = lcm_upto(2 * n);
        let total_weight: BigInt = table.exponents().iter().sum();
        // Σ of coefficient magnitudes is Σe/d2n; budget per-term radius at
        // target·d2n/(4Σe)
        let scaled = target.mul_int(&d2n);
        let (per_term, _) = scaled.div_int(&(&total_weight * BigInt::from(4)), 32);
        let term_bits = bits_for(&per_term);
        let lead = (total_weight.bits() as i64 - d2n.bits() as i64).max(1) + 7;
        let tgt_exp = target.leading_bit_exp();
        let acc_bits = (lead - tgt_exp + 64 + u64::BITS as i64 - (n.leading_zeros() as i64))
            .max(64) as u32;
        if term_bits > self.max_bits || acc_bits > self.max_bits {
            return Err(Error::PrecisionCap {
                context: format!("computing the log linear form at n={n}"),
                bits: term_bits.max(acc_bits),
            });
        }
        let mut acc = CertifiedReal::zero();
        for (i, e) in table.exponents().iter().enumerate() {
            let base = n + i as u64 + 1;
            let coeff = BigRational::new(e.clone(), d2n.clone());
            let term = self
                .logs
                .ln_int(base, term_bits)
                .mul_rational(&coeff, acc_bits);
            acc = acc.add(&term, acc_bits);
        }
        assert!(
            acc.radius().le(target),
            "linear form radius missed the target at n={n}"
        );
        Ok(acc)
    }

    /// (A − L)/C at index n, where A is the binomial-squared weighted
    /// harmonic sum, L the log linear form, and C the central binomial
    /// coefficient: the n-th approximation to Euler's constant. The
    /// arithmetic radius is ≤ target; the method error (how far this
    /// approximation sits from the constant itself) is reported separately
    /// as a leading-order estimate.
    pub fn gamma_approx(&self, n: u64, target: &Dyadic) -> Result<GammaApprox> {
        let c = binomial(2 * n, n as i64);
        // dividing by C shrinks everything; budget L and A at target·C/4
        let scaled = target.mul_int(&c);
        let (inner_target, _) = scaled.div_int(&BigInt::from(4), 32);
        let l = self.linear_form(n, &inner_target)?;
        let a = binomial_harmonic_sum(n);
        let bits = bits_for(&inner_target) + a.numer().bits().max(a.denom().bits()) as u32 + 16;
        let a_cr = CertifiedReal::from_rational(&a, bits);
        let value = a_cr.sub(&l, bits).div_int(&c, bits);
        assert!(value.radius().le(target));
        Ok(GammaApprox {
            value,
            method_error: self.method_error_estimate(n, &c),
        })
    }

    /// Leading-order size of the approximation's truncation term:
    /// 4^(−2n)·π/(3n·log4)/C — an estimate with 100% slack, not a bound.
    fn method_error_estimate(&self, n: u64, c: &BigInt) -> CertifiedReal {
        let bits = 96;
        let pi = self.logs.pi(bits);
        let ln2 = self.logs.ln2(bits);
        let denom = ln2.mul_int(&(BigInt::from(6 * n as i64) * c), bits);
        let est = pi.div(&denom, bits).mul_pow2(-(4 * n as i64));
        let slack = est.value().abs().add(est.radius());
        CertifiedReal::new(est.value().clone(), slack)
    }

    /// A certified enclosure of Euler's constant from the approximation at
    /// index n. The approximation is one-sided — the constant exceeds it by
    /// exactly the (positive) integral term, which is below 16^(−n) — so
    /// centering at value + 16^(−n)/(2C) gives a true interval of radius
    /// arithmetic-radius + 16^(−n)/(2C). Rests on the proved decay bound
    /// for the integral; see the book chapter on oracles.
    pub fn gamma_enclosure(&self, n: u64, arith_target: &Dyadic) -> Result<CertifiedReal> {
        let approx = self.gamma_approx(n, arith_target)?;
        let c = binomial(2 * n, n as i64);
        let (q, err) = Dyadic::pow2(-(4 * n as i64)).div_int(&c, 64);
        let half_gap = q.add(&err).mul_pow2(-1); // upper bound on 16^-n/(2C)
        Ok(CertifiedReal::new(
            approx.value.value().add(&half_gap),
            approx.value.radius().add(&half_gap).coarsen_upper(),
        ))
    }

    /// Enclosure of Euler's constant with radius ≤ target, choosing the
    /// index automatically.
    pub fn gamma_enclosure_for(&self, target: &Dyadic) -> Result<CertifiedReal> {
        let bits = bits_for(target) as u64;
        // gap 16^-n/C ~ 2^-6n: pick n with 6n ≥ bits + 4, then halve radius
        let n = (bits + 10).div_ceil(6).max(1);
        let (arith, _) = target.div_int(&BigInt::from(4), 32);
        let enc = self.gamma_enclosure(n, &arith)?;
        assert!(enc.radius().le(target));
        Ok(enc)
    }

    /// Number of decimal digits of the power product at n, without
    /// materializing it: ⌊log product / log 10⌋ + 1, interval-decided.
    pub fn product_digit_count(&self, n: u64) -> Result<BigInt> {
        let table = exponent_table(n, TableFormula::HarmonicDifference);
        let mut guard = 20u32;
        loop {
            let target = Dyadic::pow2(-(guard as i64));
            let ls = self.log_product_from_table(&table, &target)?;
            // log10 = ln2 + ln5 at matching absolute accuracy
            let lead = ls.value().leading_bit_exp().max(1) as u32;
            let ln10 = {
                let b = lead + guard + 8;
                let ln2 = self.logs.ln_int(2, b);
                let ln5 = self.logs.ln_int(5, b);
                ln2.add(&ln5, b + 8)
            };
            let q = ls.div(&ln10, lead + guard + 8);
            if let Some(fl) = q.floor_decided() {
                return Ok(fl + BigInt::one());
            }
            guard *= 2;
            if guard > self.max_bits {
                return Err(Error::PrecisionCap {
                    context: format!("deciding the digit count of the product at n={n}"),
                    bits: self.max_bits,
                });
            }
        }
    }
}
