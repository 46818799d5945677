//! Shared cache of integer logarithms and constants.
//!
//! Bases repeat heavily across indices and formulas, so each distinct base
//! is computed once at the highest precision requested so far and served
//! from the cache after that. Reads are concurrent; a miss recomputes
//! outside the lock (two racing misses may duplicate work, but each result
//! honors its radius, so the last writer wins harmlessly).

use std::collections::HashMap;
use std::sync::RwLock;

use crate::certified::CertifiedReal;
use crate::dyadic::Dyadic;
use crate::series;

#[derive(Default)]
pub struct LogTable {
    ln2: RwLock<Option<CertifiedReal>>,
    pi: RwLock<Option<CertifiedReal>>,
    logs: RwLock<HashMap<u64, CertifiedReal>>,
}

fn good_enough(entry: &CertifiedReal, bits: u32) -> bool {
    entry.radius().le(&Dyadic::pow2(-(bits as i64)))
}

impl LogTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// log 2 with radius ≤ 2^-bits.
    pub fn ln2(&self, bits: u32) -> CertifiedReal {
        if let Some(v) = self.ln2.read().unwrap().as_ref() {
            if good_enough(v, bits) {
                return v.round(bits + 16);
            }
        }
        let fresh = series::ln2(bits + 32);
        *self.ln2.write().unwrap() = Some(fresh.clone());
        fresh.round(bits + 16)
    }

    /// π with radius ≤ 2^-bits.
    pub fn pi(&self, bits: u32) -> CertifiedReal {
        if let Some(v) = self.pi.read().unwrap().as_ref() {
            if good_enough(v, bits) {
                return v.round(bits + 16);
            }
        }
        let fresh = series::pi(bits + 32);
        *self.pi.write().unwrap() = Some(fresh.clone());
        fresh.round(bits + 16)
    }

    /// Natural log of m ≥ 1, radius ≤ 2^-bits, cached per base.
    pub fn ln_int(&self, m: u64, bits: u32) -> CertifiedReal {
        assert!(m >= 1, "log of a non-positive integer");
        if m == 1 {
            return CertifiedReal::zero();
        }
        if let Some(v) = self.logs.read().unwrap().get(&m) {
            if good_enough(v, bits) {
                return v.round(bits + 16);
            }
        }
        let ln2 = self.ln2(bits + 48);
        let fresh = series::ln_int_with_ln2(m, bits + 16, &ln2);
        self.logs.write().unwrap().insert(m, fresh.clone());
        fresh.round(bits + 16)
    }

    /// Natural log with an explicit radius target instead of a bit count.
    pub fn ln_int_radius(&self, m: u64, target: &Dyadic) -> CertifiedReal {
        assert!(target.is_positive(), "radius target must be positive");
        self.ln_int(m, bits_for(target))
    }

    /// Computes all of `bases` at `bits` up front (e.g. before a survey).
    pub fn prewarm(&self, bases: impl IntoIterator<Item = u64>, bits: u32) {
        for b in bases {
            let _ = self.ln_int(b, bits);
        }
    }

    pub fn cached_bases(&self) -> usize {
        self.logs.read().unwrap().len()
    }
}

/// Bits b with 2^-b ≤ target (so a radius ≤ 2^-b meets the target).
pub fn bits_for(target: &Dyadic) -> u32 {
    assert!(target.is_positive());
    let lead = target.leading_bit_exp(); // target ∈ [2^lead, 2^(lead+1))
    if lead >= 0 {
        1
    } else {
        (-lead) as u32
    }
}
